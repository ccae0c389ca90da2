"""Per-period admissibility diagnostics and the predicted branch spectrum.

Everything here is computed from the kneading sequence alone, without
building the tree; the tree module later re-derives the same data
geometrically and the two sides are cross-checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .sequences import (
    INFINITY,
    Itinerary,
    KneadingSequence,
    first_mismatch,
    orbit_contains,
)


class OrbitKind(Enum):
    TAME = "tame"
    EVIL = "evil"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FailureDiagnostic:
    """The three conjuncts of the period-m failure test, individually.

    ``fails`` is their conjunction: m is a candidate period missing from the
    internal address (cond1), m is forced to be an exact period because every
    proper divisor mismatches within m steps (cond2), and the mismatch orbit
    of the reduced residue r of first_mismatch(m) comes back through m
    (cond3).
    """

    period: int
    cond1: bool
    cond2: bool
    cond3: bool

    @property
    def fails(self) -> bool:
        return self.cond1 and self.cond2 and self.cond3

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond3": self.cond3,
            "fails": self.fails,
        }


@dataclass(frozen=True)
class BranchSpectrumEntry:
    """Predicted periodic branch orbit: period, arm count, kind, and the
    itinerary of its characteristic point (the first ``period`` entries of
    the kneading sequence, repeated)."""

    period: int
    arms: int
    kind: OrbitKind
    characteristic_itinerary: Itinerary

    def summary(self) -> dict:
        return {
            "period": self.period,
            "arms": self.arms,
            "kind": str(self.kind),
            "itinerary": str(self.characteristic_itinerary),
        }


def _reduced_residue(value: int, modulus: int) -> int:
    """The unique r in {1..modulus} congruent to value mod modulus."""
    return (value - 1) % modulus + 1


def fails_for_period(seq: KneadingSequence, m: int) -> FailureDiagnostic:
    """Evaluate the three failure conditions at period ``m``.

    Defined for every m >= 1 so that the bound ``m < period`` can itself be
    tested; a star-periodic sequence never fails at m >= its period.
    """
    if m < 1:
        raise ValueError("periods are positive")
    cond1 = not orbit_contains(seq, 1, m)
    cond2 = all(
        first_mismatch(seq, k) <= m
        for k in range(1, m)
        if m % k == 0
    )
    rho_m = first_mismatch(seq, m)
    if rho_m is INFINITY:
        cond3 = False
    else:
        r = _reduced_residue(rho_m, m)
        cond3 = orbit_contains(seq, r, m)
    return FailureDiagnostic(m, cond1, cond2, cond3)


def failing_periods(seq: KneadingSequence) -> list[int]:
    """All failing periods; the scan range 1..period-1 is exhaustive."""
    if not seq.star_periodic:
        raise ValueError("failing periods are scanned for star-periodic sequences")
    return [m for m in range(1, seq.period) if fails_for_period(seq, m).fails]


def is_admissible(seq: KneadingSequence) -> bool:
    return not failing_periods(seq)


def evil_arm_count(seq: KneadingSequence, m: int) -> int:
    """Arm count at the evil branch point of a failing period.

    Writing first_mismatch(m) = (q-2)m + r with r in {1..m} gives q; the
    closed form floor(first_mismatch(m)/m) + 2 overcounts by one when m
    divides first_mismatch(m), so the division is taken on the reduced
    residue.
    """
    diag = fails_for_period(seq, m)
    if not diag.fails:
        raise ValueError(f"{m} is not a failing period of {seq}")
    rho_m = first_mismatch(seq, m)
    r = _reduced_residue(rho_m, m)
    q = (rho_m - r) // m + 2
    assert q >= 3
    return q


def tame_arm_count(seq: KneadingSequence, m: int) -> int:
    """Predicted arm count q(m) at an internal-address entry m.

    q(m) >= 3 signals a tame branch point of exact period m; q(m) = 2 means
    the periodic point at that scale is an ordinary arc point.
    """
    if not orbit_contains(seq, 1, m):
        raise ValueError(f"{m} is not an internal-address entry of {seq}")
    rho_m = first_mismatch(seq, m)
    if rho_m is INFINITY:
        raise ValueError(f"first mismatch of {m} is infinite; no periodic point to count")
    r = _reduced_residue(rho_m, m)
    if orbit_contains(seq, r, m):
        q = (rho_m - r) // m + 1
    else:
        q = (rho_m - r) // m + 2
    assert q >= 2
    return q


def branch_spectrum(seq: KneadingSequence) -> list[BranchSpectrumEntry]:
    """All predicted periodic branch orbits, in increasing period.

    One EVIL entry per failing period, one TAME entry per internal-address
    entry below the period whose q(m) reaches 3.  The characteristic
    itineraries are materialized here so the tree builder never recomputes
    prefixes.
    """
    n = seq.period
    entries: list[BranchSpectrumEntry] = []
    for m in failing_periods(seq):
        entries.append(BranchSpectrumEntry(
            m, evil_arm_count(seq, m), OrbitKind.EVIL,
            Itinerary.periodic(seq.word[:m])))
    address_entry = 1
    while address_entry < n:
        q = tame_arm_count(seq, address_entry)
        if q >= 3:
            entries.append(BranchSpectrumEntry(
                address_entry, q, OrbitKind.TAME,
                Itinerary.periodic(seq.word[:address_entry])))
        nxt = first_mismatch(seq, address_entry)
        if nxt is INFINITY:
            break
        address_entry = nxt
    for entry in entries:
        # a shorter exact period would mean two orbit points share an itinerary
        assert len(entry.characteristic_itinerary.period) == entry.period, entry
    entries.sort(key=lambda e: e.period)
    return entries
