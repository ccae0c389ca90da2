"""Construction and verification of the tree from itineraries alone.

The vertex set starts from the marked points (critical orbit plus the
predicted periodic branch orbits) and grows by the interior branch points
that triod queries expose; edges join vertices with nothing between them.
Everything downstream (axiom checks, characteristic points, local arm
permutations) is computed from the finished tree, independently of the
spectrum predictions, and the two sides are compared in classify_orbits.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .admissibility import OrbitKind, branch_spectrum
from .sequences import (
    Itinerary,
    KneadingSequence,
    critical_orbit_itinerary,
    itinerary_consistent_with,
)
from .triods import Middle, TriodError, UnrealizedPointError, classify_triod


class StructuralError(RuntimeError):
    """The constructed tree violates a property the theory guarantees."""


class SpectrumMismatchError(StructuralError):
    """Tree-level orbit classification disagrees with the predicted spectrum."""


Role = tuple  # ("critical", k) | ("branch", m, j) | ("prebranch", i)


@dataclass(frozen=True)
class MarkedPoint:
    id: str
    itinerary: Itinerary
    role: Role

    def role_text(self) -> str:
        return ":".join(str(part) for part in self.role)


def marked_points(seq: KneadingSequence) -> list[MarkedPoint]:
    """Critical orbit points plus every predicted periodic branch orbit.

    The critical orbit contributes one point per period step; each spectrum
    entry of period m contributes the m shifts of its characteristic
    itinerary, indexed so that the dynamics sends index j to j+1 mod m.
    """
    if not seq.star_periodic or seq.period < 2:
        raise ValueError("marked points require a star-periodic sequence of period >= 2")
    points = [
        MarkedPoint(f"c{k}", critical_orbit_itinerary(seq, k), ("critical", k))
        for k in range(seq.period)
    ]
    for entry in branch_spectrum(seq):
        itin = entry.characteristic_itinerary
        for j in range(entry.period):
            points.append(MarkedPoint(f"z{entry.period}.{j}", itin, ("branch", entry.period, j)))
            itin = itin.shift()
    return points


@dataclass(frozen=True)
class HubbardTree:
    sequence: KneadingSequence
    vertices: tuple[MarkedPoint, ...]
    edges: tuple[tuple[str, str], ...]
    dynamics: dict[str, str]
    critical: str

    def __post_init__(self):
        object.__setattr__(self, "_by_id", {v.id: v for v in self.vertices})
        adjacency: dict[str, list[str]] = {v.id: [] for v in self.vertices}
        for a, b in self.edges:
            adjacency[a].append(b)
            adjacency[b].append(a)
        order = {v.id: i for i, v in enumerate(self.vertices)}
        for vid in adjacency:
            adjacency[vid].sort(key=order.__getitem__)
        object.__setattr__(self, "_adjacency", adjacency)
        object.__setattr__(self, "_order", order)

    def point(self, vid: str) -> MarkedPoint:
        return self._by_id[vid]

    def neighbors(self, vid: str) -> list[str]:
        return list(self._adjacency[vid])

    def degree(self, vid: str) -> int:
        return len(self._adjacency[vid])

    def endpoints(self) -> list[str]:
        return [v.id for v in self.vertices if self.degree(v.id) == 1]

    def branch_vertices(self) -> list[str]:
        return [v.id for v in self.vertices if self.degree(v.id) >= 3]

    def path(self, start: str, goal: str) -> list[str]:
        """Unique vertex path between two vertices (BFS; trees are small)."""
        if start == goal:
            return [start]
        parents = {start: None}
        queue = deque([start])
        while queue:
            current = queue.popleft()
            for nxt in self._adjacency[current]:
                if nxt not in parents:
                    parents[nxt] = current
                    if nxt == goal:
                        path = [goal]
                        while parents[path[-1]] is not None:
                            path.append(parents[path[-1]])
                        return path[::-1]
                    queue.append(nxt)
        raise StructuralError(f"no path from {start} to {goal}: tree is disconnected")

    def component_without(self, removed: str, anchor: str) -> set[str]:
        """Vertex set of the component of anchor once ``removed`` is deleted."""
        if anchor == removed:
            raise ValueError("anchor must differ from the removed vertex")
        seen = {anchor}
        queue = deque([anchor])
        while queue:
            current = queue.popleft()
            for nxt in self._adjacency[current]:
                if nxt != removed and nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return seen

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = self.vertices[0].id
        seen = {start}
        queue = deque([start])
        while queue:
            for nxt in self._adjacency[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return len(seen) == len(self.vertices)

    def arm_toward(self, vid: str, target: str) -> str:
        """Neighbor of ``vid`` on the path toward ``target``."""
        return self.path(vid, target)[1]

    def periodic_branch_orbits(self) -> list[list[str]]:
        """Dynamics cycles consisting of branch vertices, characteristic first.

        Orbits are rotated to start at their characteristic point and sorted
        by period.
        """
        periodic: set[str] = set()
        for vid in self.branch_vertices():
            current = self.dynamics[vid]
            for _ in range(len(self.vertices)):
                if current == vid:
                    periodic.add(vid)
                    break
                current = self.dynamics[current]
        result = []
        while periodic:
            start = min(periodic)
            cycle = [start]
            nxt = self.dynamics[start]
            while nxt != start:
                cycle.append(nxt)
                nxt = self.dynamics[nxt]
            periodic.difference_update(cycle)
            char = characteristic_point(self, cycle)
            at = cycle.index(char)
            result.append(cycle[at:] + cycle[:at])
        result.sort(key=lambda orbit: (len(orbit), orbit[0]))
        return result

    def to_record(self) -> dict:
        return {
            "sequence": str(self.sequence),
            "vertices": [
                {"id": v.id, "role": v.role_text(), "itinerary": str(v.itinerary)}
                for v in self.vertices
            ],
            "edges": [list(edge) for edge in self.edges],
            "dynamics": dict(sorted(self.dynamics.items())),
            "critical": self.critical,
        }

    def to_dot(self) -> str:
        lines = [f'graph "{self.sequence}" {{']
        for v in self.vertices:
            lines.append(f'  "{v.id}" [label="{v.id} {v.itinerary}"];')
        for a, b in self.edges:
            lines.append(f'  "{a}" -- "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def tree_hash(self) -> str:
        payload = json.dumps(self.to_record(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("ascii")).hexdigest()


class _TriodCache:
    """Memoized triod results keyed by the unordered itinerary triple.

    Middles are stored as the middle point's itinerary key so lookups do not
    depend on argument order.
    """

    def __init__(self, seq: KneadingSequence):
        self.seq = seq
        self.results: dict[tuple, object] = {}

    def classify(self, a: Itinerary, b: Itinerary, c: Itinerary):
        key = tuple(sorted((a.key(), b.key(), c.key())))
        if key not in self.results:
            by_key = {a.key(): a, b.key(): b, c.key(): c}
            args = [by_key[k] for k in key]
            try:
                result = classify_triod(args[0], args[1], args[2], self.seq, validate=False)
            except TriodError as exc:
                raise StructuralError(
                    f"inconsistent triod over vertices "
                    f"({args[0]}, {args[1]}, {args[2]}) of {self.seq}") from exc
            if isinstance(result, Middle):
                self.results[key] = ("middle", key[result.position - 1])
            else:
                self.results[key] = ("branch", result.itinerary)
        return self.results[key]

    def middle_key(self, a: Itinerary, b: Itinerary, c: Itinerary):
        kind, payload = self.classify(a, b, c)
        return payload if kind == "middle" else None


def build_tree(seq: KneadingSequence | str) -> HubbardTree:
    """Assemble the tree for a star-periodic kneading sequence.

    Interior branch points are discovered by running the triod calculus over
    all vertex triples until no new itinerary appears (every arm of a branch
    point contains an endpoint, and endpoints are critical orbit points, so
    the first sweep already finds everything; later sweeps only confirm).
    Edges connect vertices with no third vertex between them.
    """
    if isinstance(seq, str):
        seq = KneadingSequence.parse(seq)
    base = marked_points(seq)
    for point in base:
        if not itinerary_consistent_with(point.itinerary, seq):
            raise StructuralError(f"marked point {point.id} has inconsistent itinerary")

    cache = _TriodCache(seq)
    itineraries: dict[tuple, Itinerary] = {p.itinerary.key(): p.itinerary for p in base}
    if len(itineraries) != len(base):
        raise StructuralError("marked points do not have distinct itineraries")

    rounds = 0
    while True:
        rounds += 1
        if rounds > 2 * seq.period + 4:
            raise StructuralError("branch discovery failed to stabilize")
        discovered: dict[tuple, Itinerary] = {}
        for ka, kb, kc in combinations(sorted(itineraries), 3):
            kind, payload = cache.classify(itineraries[ka], itineraries[kb], itineraries[kc])
            if kind == "branch" and payload.key() not in itineraries:
                discovered.setdefault(payload.key(), payload)
        if not discovered:
            break
        for itin in discovered.values():
            for shifted in itin.shift_orbit():
                itineraries.setdefault(shifted.key(), shifted)

    marked_keys = {p.itinerary.key() for p in base}
    extras = sorted(k for k in itineraries if k not in marked_keys)
    vertices = list(base) + [
        MarkedPoint(f"p{i}", itineraries[k], ("prebranch", i))
        for i, k in enumerate(extras)
    ]

    by_key = {v.itinerary.key(): v for v in vertices}
    edges = []
    for va, vb in combinations(vertices, 2):
        between = False
        for w in vertices:
            if w.id in (va.id, vb.id):
                continue
            if cache.middle_key(va.itinerary, w.itinerary, vb.itinerary) == w.itinerary.key():
                between = True
                break
        if not between:
            edges.append((va.id, vb.id))

    dynamics = {}
    for v in vertices:
        image = by_key.get(v.itinerary.shift().key())
        if image is None:
            raise StructuralError(f"shift image of {v.id} is not a vertex")
        dynamics[v.id] = image.id

    tree = HubbardTree(seq, tuple(vertices), tuple(edges), dynamics, "c0")
    if len(tree.edges) != len(tree.vertices) - 1 or not tree.is_connected():
        raise StructuralError(
            f"vertex/edge relation for {seq} is not a tree "
            f"({len(tree.vertices)} vertices, {len(tree.edges)} edges)")
    return tree


def closest_precritical_itinerary(seq: KneadingSequence, step: int) -> Itinerary:
    """Itinerary of the unique precritical point of the given step that is
    not shielded from the critical value by an earlier one.

    Step 1 gives the critical point, step = period the critical value.  The
    itinerary is symbolic: for steps off the internal address no point of the
    tree need realize it (see lies_between).
    """
    if not 1 <= step <= seq.period:
        raise ValueError("step must lie between 1 and the period")
    star_first = seq.word[-1:] + seq.word[:-1]
    return Itinerary(seq.word[: step - 1], star_first)


def lies_between(seq: KneadingSequence, point: Itinerary, a: Itinerary, b: Itinerary) -> bool:
    """Whether the point with the middle itinerary lies strictly between the
    other two in the tree for ``seq``.

    Tolerates symbolic itineraries that no tree point realizes: a query that
    reaches a contradiction cannot have its point between the ends, so it
    counts as False.
    """
    if point == a or point == b:
        return False
    try:
        return classify_triod(a, point, b, seq) == Middle(2)
    except UnrealizedPointError:
        return False


def characteristic_point(tree: HubbardTree, orbit: list[str]) -> str:
    """The unique orbit point separating the critical value from the critical
    point and the rest of its orbit."""
    seq = tree.sequence
    c0, c1 = "c0", "c1"
    found = []
    for z in orbit:
        value_side = tree.component_without(z, c1)
        if c0 in value_side:
            continue
        critical_side = tree.component_without(z, c0)
        if all(other in critical_side for other in orbit if other != z):
            found.append(z)
    if len(found) != 1:
        raise StructuralError(f"expected one characteristic point in {orbit}, found {found}")
    z = found[0]
    m = len(orbit)
    if tree.point(z).itinerary.prefix(m) != tuple(seq.word[:m]):
        raise StructuralError(
            f"characteristic point {z} does not share its first {m} symbols with {seq}")
    return z


def arm_permutation(tree: HubbardTree, z: str, period: int) -> tuple[dict[str, str], OrbitKind]:
    """First-return permutation of the local arms at a characteristic point.

    Arms are named by the adjacent neighbor; one step sends the arm toward a
    neighbor w to the first edge of the path from f(z) toward f(w).  The
    composite over one period must either cycle all arms (tame) or fix the
    arm toward the critical point and cycle the rest (evil).
    """
    arms = tree.neighbors(z)
    current = {arm: arm for arm in arms}
    vertex = z
    for _ in range(period):
        image_vertex = tree.dynamics[vertex]
        current = {
            arm: tree.arm_toward(image_vertex, tree.dynamics[toward])
            for arm, toward in current.items()
        }
        vertex = image_vertex
    if vertex != z:
        raise StructuralError(f"{z} does not return to itself after {period} steps")
    permutation = current
    if sorted(permutation.values()) != sorted(arms):
        raise StructuralError(f"arm map at {z} is not a permutation")

    cycles = _cycles(permutation)
    if len(cycles) == 1:
        return permutation, OrbitKind.TAME
    toward_critical = tree.arm_toward(z, "c0")
    if (
        len(cycles) == 2
        and any(cycle == [toward_critical] for cycle in cycles)
        and max(len(cycle) for cycle in cycles) == len(arms) - 1
    ):
        return permutation, OrbitKind.EVIL
    raise StructuralError(f"arm permutation at {z} matches neither orbit kind: {cycles}")


def _cycles(permutation: dict[str, str]) -> list[list[str]]:
    remaining = set(permutation)
    cycles = []
    while remaining:
        start = min(remaining)
        cycle = [start]
        remaining.discard(start)
        nxt = permutation[start]
        while nxt != start:
            cycle.append(nxt)
            remaining.discard(nxt)
            nxt = permutation[nxt]
        cycles.append(cycle)
    return cycles


@dataclass(frozen=True)
class ObservedOrbit:
    period: int
    arms: int
    kind: OrbitKind
    characteristic: str
    permutation: dict[str, str]


def classify_orbits(tree: HubbardTree) -> list[ObservedOrbit]:
    """Classify every periodic branch orbit from the tree geometry and check
    the result against the spectrum predicted from the sequence alone.

    A mismatch would falsify the equivalence this package is built around,
    so it aborts loudly rather than returning.
    """
    observed = []
    for orbit in tree.periodic_branch_orbits():
        z = orbit[0]
        degrees = {tree.degree(v) for v in orbit}
        if len(degrees) != 1:
            raise StructuralError(f"degrees vary along periodic orbit {orbit}")
        permutation, kind = arm_permutation(tree, z, len(orbit))
        observed.append(ObservedOrbit(len(orbit), degrees.pop(), kind, z, permutation))
    observed.sort(key=lambda o: o.period)

    predicted = branch_spectrum(tree.sequence)
    got = [(o.period, o.arms, o.kind) for o in observed]
    want = [(e.period, e.arms, e.kind) for e in predicted]
    if got != want:
        raise SpectrumMismatchError(
            f"{tree.sequence}: tree orbits {got} != predicted spectrum {want}")
    for orbit, entry in zip(observed, predicted):
        if tree.point(orbit.characteristic).itinerary != entry.characteristic_itinerary:
            raise SpectrumMismatchError(
                f"{tree.sequence}: characteristic itinerary of {orbit.characteristic} "
                f"differs from predicted {entry.characteristic_itinerary}")
    return observed


def verify_axioms(tree: HubbardTree) -> dict[str, bool]:
    """Individually reported structural checks on a built tree."""
    seq = tree.sequence
    n = seq.period
    checks: dict[str, bool] = {}

    checks["tree_shape"] = (
        len(tree.edges) == len(tree.vertices) - 1 and tree.is_connected())

    critical_ids = {f"c{k}" for k in range(n)}
    checks["endpoints_on_critical_orbit"] = all(
        vid in critical_ids for vid in tree.endpoints())
    checks["critical_value_is_endpoint"] = tree.degree("c1") == 1
    checks["critical_point_degree"] = tree.degree("c0") <= 2

    local = checks["tree_shape"]
    if checks["tree_shape"]:
        for v in tree.vertices:
            if v.id == "c0":
                continue
            image = tree.dynamics[v.id]
            try:
                directions = {
                    tree.arm_toward(image, tree.dynamics[w]) for w in tree.neighbors(v.id)
                }
            except (StructuralError, IndexError):
                local = False
                break
            if len(directions) != tree.degree(v.id):
                local = False
    checks["local_injectivity"] = local

    covered: set[tuple[str, str]] = set()
    if checks["tree_shape"]:
        for a, b in tree.edges:
            path = tree.path(tree.dynamics[a], tree.dynamics[b])
            for x, y in zip(path, path[1:]):
                covered.add((x, y))
                covered.add((y, x))
    checks["edge_images_cover_tree"] = checks["tree_shape"] and all(
        (a, b) in covered for a, b in tree.edges)

    preimages: dict[str, int] = {}
    for vid, image in tree.dynamics.items():
        preimages[image] = preimages.get(image, 0) + 1
    checks["at_most_two_preimages"] = all(count <= 2 for count in preimages.values())

    separations = True
    vertices = list(tree.vertices)
    for i, a in enumerate(vertices):
        for b in vertices[i + 1:]:
            bound = (len(a.itinerary.preperiod) + len(b.itinerary.preperiod)
                     + len(a.itinerary.period) * len(b.itinerary.period))
            if all(a.itinerary.entry(k) == b.itinerary.entry(k) for k in range(1, bound + 1)):
                separations = False
    checks["expansivity"] = separations

    periodic_ok = True
    max_branch_period = 0
    if checks["tree_shape"]:
        try:
            for orbit in tree.periodic_branch_orbits():
                max_branch_period = max(max_branch_period, len(orbit))
                if len({tree.degree(v) for v in orbit}) != 1:
                    periodic_ok = False
        except StructuralError:
            periodic_ok = False
    checks["branch_orbit_degree_constant"] = periodic_ok and checks["tree_shape"]
    checks["branch_period_below_sequence_period"] = max_branch_period < n
    return checks


def max_branch_period(tree: HubbardTree) -> int:
    orbits = tree.periodic_branch_orbits()
    return max((len(orbit) for orbit in orbits), default=0)
