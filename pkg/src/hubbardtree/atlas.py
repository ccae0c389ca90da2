"""Full-pipeline rows and the exhaustive enumeration harness.

A row runs one sequence through the whole stack (address, diagnostics,
spectrum, tree, orbits, embeddings) and enforces the internal cross-checks;
the enumeration walks every star-periodic sequence up to a period bound in
lexicographic order, so two runs, at any parallelism, produce identical
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as cartesian
from multiprocessing import Pool
from typing import Iterator

from .admissibility import branch_spectrum, fails_for_period, failing_periods
from .embedding import count_embeddings
from .sequences import InternalAddress, KneadingSequence, Symbol, internal_address
from .tree import HubbardTree, StructuralError, build_tree, max_branch_period, verify_axioms

ENUMERATION_CAP = 16


class CrossCheckError(RuntimeError):
    """An atlas row violated one of the cross-validation laws."""


@dataclass(frozen=True)
class AtlasRow:
    sequence: str
    period: int
    internal_address: str
    admissible: bool
    failing_periods: tuple[int, ...]
    spectrum: tuple[dict, ...]
    embeddings: int
    tree_hash: str
    vertices: int
    edges: int
    endpoints: tuple[str, ...]
    max_branch_period: int

    def to_dict(self) -> dict:
        return {
            "sequence": self.sequence,
            "period": self.period,
            "internal_address": self.internal_address,
            "admissible": self.admissible,
            "failing_periods": list(self.failing_periods),
            "spectrum": [dict(entry) for entry in self.spectrum],
            "embeddings": self.embeddings,
            "tree_hash": self.tree_hash,
            "vertices": self.vertices,
            "edges": self.edges,
            "endpoints": list(self.endpoints),
            "max_branch_period": self.max_branch_period,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def analyze_sequence(seq: KneadingSequence | str) -> tuple[AtlasRow, HubbardTree]:
    """Run the pipeline on one sequence and enforce every cross-check.

    Raises CrossCheckError when the predicted and observed sides disagree;
    by design that should never fire, so any instance is a reportable bug.
    """
    if isinstance(seq, str):
        seq = KneadingSequence.parse(seq)
    failing = failing_periods(seq)
    spectrum = branch_spectrum(seq)
    tree = build_tree(seq)

    axioms = verify_axioms(tree)
    broken = sorted(name for name, ok in axioms.items() if not ok)
    if broken:
        raise CrossCheckError(f"{seq}: axiom checks failed: {broken}")

    try:
        embeddings = count_embeddings(tree)  # classify_orbits re-checks the spectrum
    except StructuralError as exc:
        raise CrossCheckError(str(exc)) from exc

    admissible = not failing
    if admissible != (embeddings >= 1):
        raise CrossCheckError(
            f"{seq}: admissible={admissible} but embedding count is {embeddings}")
    if embeddings >= seq.period:
        raise CrossCheckError(
            f"{seq}: embedding count {embeddings} reached the period {seq.period}")

    row = AtlasRow(
        sequence=str(seq),
        period=seq.period,
        internal_address=str(internal_address(seq)),
        admissible=admissible,
        failing_periods=tuple(failing),
        spectrum=tuple(entry.summary() for entry in spectrum),
        embeddings=embeddings,
        tree_hash=tree.tree_hash(),
        vertices=len(tree.vertices),
        edges=len(tree.edges),
        endpoints=tuple(sorted(tree.endpoints())),
        max_branch_period=max_branch_period(tree),
    )
    return row, tree


def diagnostics_record(seq: KneadingSequence) -> list[dict]:
    """Per-period failure diagnostics over the exhaustive scan range."""
    return [fails_for_period(seq, m).to_dict() for m in range(1, seq.period)]


def star_periodic_sequences(max_period: int, *, exact: bool = False) -> list[KneadingSequence]:
    """All star-periodic sequences with period <= max_period (or == with
    ``exact``), in lexicographic order of their text."""
    if not 2 <= max_period <= ENUMERATION_CAP:
        raise ValueError(f"period bound must lie in 2..{ENUMERATION_CAP}")
    periods = [max_period] if exact else range(2, max_period + 1)
    sequences = []
    for n in periods:
        for middle in cartesian((Symbol.ZERO, Symbol.ONE), repeat=n - 2):
            sequences.append(KneadingSequence((Symbol.ONE,) + middle + (Symbol.STAR,)))
    sequences.sort(key=str)
    return sequences


def _row_json(text: str) -> str:
    row, _ = analyze_sequence(text)
    return row.to_json()


def atlas_header(max_period: int, exact: bool) -> str:
    from . import __version__

    header = {
        "atlas": "hubbardtree",
        "version": __version__,
        "period_bound": max_period,
        "exact": exact,
    }
    return json.dumps(header, sort_keys=True, separators=(",", ":"))


def enumerate_rows(max_period: int, *, exact: bool = False, jobs: int = 1) -> Iterator[str]:
    """JSON row per sequence, lexicographic order regardless of parallelism."""
    texts = [str(seq) for seq in star_periodic_sequences(max_period, exact=exact)]
    if jobs <= 1:
        for text in texts:
            yield _row_json(text)
        return
    with Pool(jobs) as pool:
        yield from pool.imap(_row_json, texts, chunksize=8)


def embedding_census(period: int) -> int:
    """Total embeddings over every (admissible) sequence of the exact period."""
    total = 0
    for seq in star_periodic_sequences(period, exact=True):
        row, _ = analyze_sequence(seq)
        total += row.embeddings
    return total
