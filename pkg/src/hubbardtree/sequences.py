"""Symbols, kneading sequences, itineraries and internal addresses.

The binary dynamics is encoded over the alphabet {0, 1, *}: the symbol ``*``
marks the time steps at which an orbit sits exactly on the critical point,
``1`` the side of the tree containing the critical value, and ``0`` the other
side.  A star-periodic sequence ``1 v2 ... v_{n-1} *`` (repeated forever) is
the itinerary of a critical value of period ``n``; everything else in this
package is derived from such a sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from itertools import islice
from typing import Iterator

INFINITY = math.inf

SEQUENCE_CHARS = {"0", "1", "*"}


class ParseError(ValueError):
    """Raised for malformed sequence / address / itinerary text."""


class Symbol(IntEnum):
    ZERO = 0
    ONE = 1
    STAR = 2

    def __str__(self) -> str:
        return "01*"[self]


_CHAR_TO_SYMBOL = {"0": Symbol.ZERO, "1": Symbol.ONE, "*": Symbol.STAR}


def symbols_differ(a: Symbol, b: Symbol) -> bool:
    """True iff the two symbols disagree; STAR differs from both 0 and 1."""
    return a != b


def flip(sym: Symbol) -> Symbol:
    if sym is Symbol.STAR:
        raise ValueError("cannot flip STAR")
    return Symbol.ONE if sym is Symbol.ZERO else Symbol.ZERO


def word_from_text(text: str) -> tuple[Symbol, ...]:
    bad = set(text) - SEQUENCE_CHARS
    if bad or not text:
        raise ParseError(f"invalid sequence text {text!r}")
    return tuple(_CHAR_TO_SYMBOL[ch] for ch in text)


def word_to_text(word: tuple[Symbol, ...]) -> str:
    return "".join(str(sym) for sym in word)


@dataclass(frozen=True)
class KneadingSequence:
    """Periodic symbol sequence, stored as its period word anchored at entry 1.

    Two kinds are supported: star-periodic words ``1...*`` (exactly one STAR,
    in the last slot) and plain 0-1 words (used for the two STAR
    substitutions and for branch-point itineraries).  The first entry is
    always ONE.
    """

    word: tuple[Symbol, ...]

    def __post_init__(self) -> None:
        if not self.word:
            raise ParseError("empty period word")
        if self.word[0] is not Symbol.ONE:
            raise ParseError("kneading sequences must start with 1")
        stars = [i for i, sym in enumerate(self.word) if sym is Symbol.STAR]
        if stars and (len(stars) > 1 or stars[0] != len(self.word) - 1):
            raise ParseError("misplaced '*': a star-periodic word has exactly "
                             "one STAR, in the final slot")
        if stars and len(self.word) < 2:
            raise ParseError("star-periodic words need period >= 2")

    @classmethod
    def parse(cls, text: str) -> "KneadingSequence":
        return cls(word_from_text(text))

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def star_periodic(self) -> bool:
        return self.word[-1] is Symbol.STAR

    def entry(self, k: int) -> Symbol:
        """1-indexed entry under periodic repetition of the word."""
        if k < 1:
            raise ValueError("entries are 1-indexed")
        return self.word[(k - 1) % len(self.word)]

    def star_substitutions(self) -> tuple["KneadingSequence", "KneadingSequence"]:
        """The two sequences obtained by writing 0 resp. 1 for every STAR."""
        if not self.star_periodic:
            raise ValueError("sequence has no STAR to substitute")
        zero = self.word[:-1] + (Symbol.ZERO,)
        one = self.word[:-1] + (Symbol.ONE,)
        return KneadingSequence(zero), KneadingSequence(one)

    def __str__(self) -> str:
        return word_to_text(self.word)


def first_mismatch(seq: KneadingSequence, offset: int):
    """Least ``k > offset`` where the sequence differs from its own
    ``offset``-shift, i.e. ``seq[k] != seq[k - offset]``; INFINITY if the two
    agree forever.

    The pair ``(seq[k], seq[k - offset])`` is periodic in ``k`` with the word
    length as a period, so one full window decides the infinite case.
    """
    if offset < 1:
        raise ValueError("offset must be >= 1")
    p = seq.period
    for k in range(offset + 1, offset + p + 1):
        if symbols_differ(seq.entry(k), seq.entry(k - offset)):
            return k
    return INFINITY


def mismatch_orbit(seq: KneadingSequence, k: int, *, stop_above: int | None = None) -> list[int]:
    """The orbit ``k -> first_mismatch(k) -> ...``, stopping before INFINITY.

    With ``stop_above`` the walk also stops once an entry exceeds the bound
    (entries are strictly increasing, so membership questions below the bound
    are decided exactly).
    """
    orbit = [k]
    while True:
        nxt = first_mismatch(seq, orbit[-1])
        if nxt is INFINITY:
            return orbit
        if stop_above is not None and nxt > stop_above:
            return orbit
        orbit.append(nxt)


def orbit_contains(seq: KneadingSequence, start: int, target: int) -> bool:
    """Exact membership test ``target in mismatch_orbit(start)``."""
    k = start
    while k < target:
        nxt = first_mismatch(seq, k)
        if nxt is INFINITY:
            return False
        k = nxt
    return k == target


@dataclass(frozen=True)
class InternalAddress:
    """Strictly increasing recoding of a kneading sequence.

    ``terminated`` distinguishes a genuinely finite address from one that was
    truncated at a computation limit (plain periodic words can have infinite
    addresses).
    """

    entries: tuple[int, ...]
    terminated: bool = True

    def __post_init__(self) -> None:
        if not self.entries or self.entries[0] != 1:
            raise ParseError("internal addresses start at 1")
        if any(b <= a for a, b in zip(self.entries, self.entries[1:])):
            raise ParseError("internal address entries must increase")

    @classmethod
    def parse(cls, text: str) -> "InternalAddress":
        try:
            entries = tuple(int(part) for part in text.split("-"))
        except ValueError as exc:
            raise ParseError(f"invalid address text {text!r}") from exc
        return cls(entries)

    def __contains__(self, m: int) -> bool:
        return m in self.entries

    def __str__(self) -> str:
        return "-".join(str(e) for e in self.entries) + ("" if self.terminated else "-...")


def internal_address(seq: KneadingSequence, *, limit: int | None = None) -> InternalAddress:
    """The mismatch orbit of 1, packaged as an address.

    For a star-periodic sequence the address always terminates, at the
    period.  For a plain periodic word it may not; ``limit`` (default four
    word lengths) caps the largest entry and sets ``terminated=False`` when
    the cap is what stopped the walk.
    """
    if limit is None:
        limit = seq.period if seq.star_periodic else 4 * seq.period
    entries = [1]
    while True:
        nxt = first_mismatch(seq, entries[-1])
        if nxt is INFINITY:
            return InternalAddress(tuple(entries), terminated=True)
        if nxt > limit:
            return InternalAddress(tuple(entries), terminated=False)
        entries.append(nxt)


def address_to_sequence(addr: InternalAddress) -> KneadingSequence:
    """Star-periodic sequence with the given internal address.

    Inverse recipe: grow the word entry by entry, repeating the current
    period up to one slot short of the next entry and breaking the pattern
    there; the final slot becomes the STAR.
    """
    entries = addr.entries
    if len(entries) < 2:
        raise ParseError("need at least two address entries (period >= 2)")
    word = [Symbol.ONE]
    for target in entries[1:]:
        grown = [word[i % len(word)] for i in range(target - 1)]
        grown.append(flip(word[(target - 1) % len(word)]))
        word = grown
    word[-1] = Symbol.STAR
    return KneadingSequence(tuple(word))


def exact_period(word: tuple[Symbol, ...]) -> int:
    """Smallest divisor d of len(word) with shift-d invariance (no STARs)."""
    if any(sym is Symbol.STAR for sym in word):
        raise ValueError("exact_period is defined for STAR-free words")
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return d
    raise AssertionError("unreachable")


def upper_lower(seq: KneadingSequence) -> tuple[KneadingSequence, KneadingSequence]:
    """The two STAR substitutions, ordered (upper, lower).

    Exactly one substitution has the period in its internal address; that one
    is the upper sequence.
    """
    if not seq.star_periodic:
        raise ValueError("upper/lower sequences exist only for star-periodic input")
    n = seq.period
    zero, one = seq.star_substitutions()
    zero_has = orbit_contains(zero, 1, n)
    one_has = orbit_contains(one, 1, n)
    if zero_has == one_has:
        raise AssertionError(
            f"expected exactly one substitution of {seq} to contain {n} in its address")
    return (zero, one) if zero_has else (one, zero)


def _minimal_period(word: tuple[Symbol, ...]) -> tuple[Symbol, ...]:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return word[:d]
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Itinerary:
    """Eventually periodic symbol stream identifying a point of the tree.

    Stored in canonical form: the period word is minimal and the preperiod
    cannot be shortened by rotating the period.  Construction normalizes, so
    structural equality is semantic equality of streams.
    """

    preperiod: tuple[Symbol, ...] = ()
    period: tuple[Symbol, ...] = ()

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("itineraries need a nonempty period word")
        if sum(1 for sym in self.period if sym is Symbol.STAR) > 1:
            raise ValueError("at most one STAR per period")
        pre = list(self.preperiod)
        per = list(_minimal_period(self.period))
        while pre and pre[-1] == per[-1]:
            per.insert(0, per.pop())
            pre.pop()
        object.__setattr__(self, "preperiod", tuple(pre))
        object.__setattr__(self, "period", tuple(per))

    @classmethod
    def periodic(cls, word: tuple[Symbol, ...]) -> "Itinerary":
        return cls((), word)

    def entry(self, k: int) -> Symbol:
        """1-indexed symbol of the stream."""
        if k < 1:
            raise ValueError("entries are 1-indexed")
        i = k - 1
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def shift(self) -> "Itinerary":
        """Drop the first symbol (one step of the dynamics)."""
        if self.preperiod:
            return Itinerary(self.preperiod[1:], self.period)
        return Itinerary((), self.period[1:] + self.period[:1])

    def prefix(self, length: int) -> tuple[Symbol, ...]:
        return tuple(islice(self.symbols(), length))

    def symbols(self) -> Iterator[Symbol]:
        yield from self.preperiod
        while True:
            yield from self.period

    def shift_orbit(self) -> list["Itinerary"]:
        """All forward shifts (finitely many, by eventual periodicity)."""
        orbit = []
        current = self
        for _ in range(len(self.preperiod) + len(self.period)):
            orbit.append(current)
            current = current.shift()
        return orbit

    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Deterministic sort/hash key (ints only, so ordering is stable)."""
        return (tuple(int(s) for s in self.preperiod), tuple(int(s) for s in self.period))

    def __str__(self) -> str:
        return word_to_text(self.preperiod) + "(" + word_to_text(self.period) + ")"


def critical_orbit_itinerary(seq: KneadingSequence, index: int) -> Itinerary:
    """Itinerary of the ``index``-th critical orbit point (0 = critical point).

    The critical value (index 1) has itinerary equal to the sequence itself;
    index 0 is the rotation that puts the STAR first.
    """
    if not seq.star_periodic:
        raise ValueError("critical orbit itineraries need a star-periodic sequence")
    n = seq.period
    k = (index - 1) % n
    return Itinerary.periodic(seq.word[k:] + seq.word[:k])


def itinerary_consistent_with(itin: Itinerary, seq: KneadingSequence) -> bool:
    """Whether every STAR in the stream is followed by the sequence itself."""
    stream = itin
    horizon = len(itin.preperiod) + len(itin.period)
    for _ in range(horizon):
        if stream.entry(1) is Symbol.STAR:
            if stream.shift() != Itinerary.periodic(seq.word):
                return False
        stream = stream.shift()
    return True
