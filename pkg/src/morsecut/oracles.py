"""Brute-force verifiers, kept independent of the optimized implementations.

Everything here works from first definitions: minima by altitude sweep,
spanning forests by subset enumeration, closed paths by exhaustive walks,
extensions by component counting.  Verdicts come back as OracleReport
values whose witnesses can be replayed against the production code.  Size
gates are hard errors so CI stays deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .complexes import Pseudomanifold, Simplex
from .stacks import ValuedComplex

MAX_EXHAUSTIVE_VERTICES = 12
MAX_PATH_SIMPLICES = 10_000


@dataclass(frozen=True)
class OracleReport:
    claim: str
    passed: bool
    witness: str = ""

    def __post_init__(self) -> None:
        if not self.passed and not self.witness:
            raise ValueError("a failing report needs a witness")

    def line(self) -> str:
        tail = f" {self.witness}" if self.witness else ""
        return f"CLAIM {self.claim} {'PASS' if self.passed else 'FAIL'}{tail}"


def _key(x: Simplex) -> tuple[int, Simplex]:
    return (len(x), x)


def _proper_subsets(x: Simplex) -> list[Simplex]:
    out = []
    for size in range(1, len(x)):
        out.extend(combinations(x, size))
    return out


class _Partition:
    """Minimal union-find, local to the oracles."""

    def __init__(self, items: Iterable = ()) -> None:
        self.parent = {x: x for x in items}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self) -> list[frozenset]:
        acc: dict = {}
        for x in self.parent:
            acc.setdefault(self.find(x), []).append(x)
        return sorted((frozenset(g) for g in acc.values()), key=lambda g: _key(min(g, key=_key)))


def _incidence_components(faces: Iterable[Simplex]) -> list[frozenset[Simplex]]:
    """Components under x ~ y iff one includes the other, both present."""
    present = set(faces)
    part = _Partition(present)
    for x in present:
        for f in _proper_subsets(x):
            if f in present:
                part.union(x, f)
    return part.groups()


def _graph_components(vertices: Iterable, edges: Iterable[tuple]) -> list[frozenset]:
    part = _Partition(vertices)
    for a, b in edges:
        part.union(a, b)
    return part.groups()


def oracle_msf(dg, anchor) -> set[frozenset]:
    """All minimum-weight spanning forests relative to the anchor, exhaustively.

    A relative spanning forest carries the anchor edges plus exactly one
    tree edge per non-anchor vertex (forced by the extension and minimality
    conditions), so candidates are enumerated at that size and kept when
    every component contains exactly one anchor component.  Winners are
    re-checked against the removal-based minimality definition.  Refuses
    dual graphs above the exhaustive regime.
    """
    vertices = list(dg.vertices)
    if len(vertices) > MAX_EXHAUSTIVE_VERTICES:
        raise ValueError(f"exhaustive enumeration refused above {MAX_EXHAUSTIVE_VERTICES} dual vertices")
    anchor_edges = list(anchor.edges)
    anchor_comps = _graph_components(anchor.vertices, anchor_edges)
    label = {v: i for i, comp in enumerate(anchor_comps) for v in comp}

    def anchor_counts(edge_set: Iterable[tuple]) -> list[int]:
        comps = _graph_components(vertices, edge_set)
        return [len({label[v] for v in comp if v in label}) for comp in comps]

    def is_extension(edge_set: Iterable[tuple]) -> bool:
        return all(n == 1 for n in anchor_counts(edge_set))

    pool = [e for e in dg.edges if e not in set(anchor_edges)]
    need = len(vertices) - len(anchor.vertices)
    best_weight: int | None = None
    best: list[frozenset] = []
    for combo in combinations(pool, need):
        edges = anchor_edges + list(combo)
        if not is_extension(edges):
            continue
        w = sum(dg.weight[e] for e in edges)
        if best_weight is None or w < best_weight:
            best_weight, best = w, [frozenset(edges)]
        elif w == best_weight:
            best.append(frozenset(edges))

    minimal: set[frozenset] = set()
    for forest in best:
        removable = [e for e in forest if e not in set(anchor_edges)]
        if not any(is_extension(forest - {e}) for e in removable):
            minimal.add(forest)
    return minimal


def _oracle_minima(space: Pseudomanifold, value: dict[Simplex, int]) -> list[frozenset[Simplex]]:
    """Minima straight from the definition: per-altitude components of the
    lower sections (incidence connectivity), kept when they miss the next
    lower section."""
    by_alt: dict[int, list[Simplex]] = {}
    for x in space:
        by_alt.setdefault(value[x], []).append(x)
    up: dict[Simplex, list[Simplex]] = {x: [] for x in space}
    for y in space:
        for f in _proper_subsets(y):
            up[f].append(y)

    part = _Partition()
    members: dict[Simplex, list[Simplex]] = {}
    lowest: dict[Simplex, int] = {}
    present: set[Simplex] = set()
    out: list[frozenset[Simplex]] = []
    for k in sorted(by_alt):
        batch = sorted(by_alt[k], key=_key)
        for x in batch:
            part.add(x)
            present.add(x)
            members[x] = [x]
            lowest[x] = k
        for x in batch:
            for nb in _proper_subsets(x):
                if nb in present:
                    _absorb(part, members, lowest, x, nb)
            for nb in up[x]:
                if nb in present:
                    _absorb(part, members, lowest, x, nb)
        for r in sorted({part.find(x) for x in batch}, key=_key):
            if lowest[r] == k:
                out.append(frozenset(members[r]))
    return out


def _absorb(part: _Partition, members, lowest, a, b) -> None:
    ra, rb = part.find(a), part.find(b)
    if ra == rb:
        return
    part.union(ra, rb)
    r = part.find(ra)
    other = rb if r == ra else ra
    members[r].extend(members.pop(other))
    lowest[r] = min(lowest[r], lowest.pop(other))


def oracle_watershed(v: ValuedComplex, cut_faces: Iterable[Simplex]) -> OracleReport:
    """Check the watershed definition for a set of (d-1)-cut-faces.

    (a) the complement of the closed cut extends the union of minima,
    (b) no single cut face can be dropped while keeping an extension,
    (c) every cut face starts two descending top-level paths, avoiding the
        cut, into two distinct minima.
    """
    space, F = v.space, v.value
    d = space.d
    X = sorted(set(cut_faces), key=_key)
    for x in X:
        if len(x) - 1 != d - 1:
            return OracleReport("watershed-definition", False, f"cut face {x!r} is not a (d-1)-face")

    min_parts = _oracle_minima(space, F)
    part_of: dict[Simplex, int] = {}
    for i, parts in enumerate(min_parts):
        for x in parts:
            part_of[x] = i

    everything = set(space.complex.faces)

    def closed(faces: Iterable[Simplex]) -> set[Simplex]:
        out = set(faces)
        for x in list(out):
            out.update(_proper_subsets(x))
        return out

    def extension_of_minima(cut: Iterable[Simplex]) -> tuple[bool, str]:
        complement = everything - closed(cut)
        for comp in _incidence_components(complement):
            found = {part_of[x] for x in comp if x in part_of}
            if len(found) != 1:
                head = min(comp, key=_key)
                return False, f"component at {head!r} meets {len(found)} minima"
        return True, ""

    ok, why = extension_of_minima(X)
    if not ok:
        return OracleReport("watershed-definition", False, f"extension: {why}")

    for x in X:
        still_ok, _ = extension_of_minima([y for y in X if y != x])
        if still_ok:
            return OracleReport("watershed-definition", False, f"not minimal: {x!r} is redundant")

    dcof: dict[Simplex, list[Simplex]] = {}
    for t in space.d_faces:
        for f in _proper_subsets(t):
            if len(f) == d:
                dcof.setdefault(f, []).append(t)
    reach: dict[Simplex, frozenset[int]] = {}

    def minima_reachable(t: Simplex) -> frozenset[int]:
        if t in reach:
            return reach[t]
        acc = set()
        if t in part_of:
            acc.add(part_of[t])
        for f in _proper_subsets(t):
            if len(f) != d:
                continue
            for s in dcof[f]:
                if s != t and F[s] <= F[t]:
                    acc |= minima_reachable(s)
        reach[t] = frozenset(acc)
        return reach[t]

    for x in X:
        sides = frozenset()
        for t in dcof[x]:
            sides |= minima_reachable(t)
        if len(sides) < 2:
            return OracleReport(
                "watershed-definition", False,
                f"no two descending paths from {x!r}: reaches minima {sorted(sides)}",
            )
    return OracleReport("watershed-definition", True)


def oracle_closed_paths(field) -> OracleReport:
    """Exhaustively walk gradient paths looking for a closed one.

    The witness lists the closed path's tails and heads in order.
    """
    if hasattr(field, "pairs"):
        pairs = list(field.pairs)
    else:
        pairs = sorted(set(field), key=lambda st: (_key(st[0]), _key(st[1])))
    involved = {x for pair in pairs for x in pair}
    if len(involved) > MAX_PATH_SIMPLICES:
        raise ValueError(f"refusing exhaustive path search above {MAX_PATH_SIMPLICES} simplices")
    head = dict(pairs)

    def hunt(start: Simplex) -> tuple[Simplex, ...] | None:
        stack: list[tuple[Simplex, list[Simplex]]] = [(start, [start])]
        while stack:
            sigma, path = stack.pop()
            tau = head[sigma]
            for f in _proper_subsets(tau):
                if len(f) != len(sigma) or f == sigma:
                    continue
                if f == start:
                    witness: list[Simplex] = []
                    for s in path:
                        witness.extend((s, head[s]))
                    return tuple(witness)
                if f in head and f not in path:
                    stack.append((f, path + [f]))
        return None

    for start in sorted(head, key=_key):
        found = hunt(start)
        if found is not None:
            names = " | ".join(" ".join(map(str, s)) for s in found)
            return OracleReport("no-closed-gradient-path", False, f"cycle of length {len(found)}: {names}")
    return OracleReport("no-closed-gradient-path", True)


def oracle_extension_after_collapse(space: Pseudomanifold, before, after) -> OracleReport:
    """Complement of a collapse must extend the complement of the original."""
    big = set(before)
    small = set(after)
    comp_before = set(space.complex.faces) - big
    comp_after = set(space.complex.faces) - small
    if not comp_before and not comp_after:
        return OracleReport("extension-after-collapse", True)
    a_comps = _incidence_components(comp_before)
    label = {x: i for i, comp in enumerate(a_comps) for x in comp}
    for comp in _incidence_components(comp_after):
        found = {label[x] for x in comp if x in label}
        if len(found) != 1:
            head = min(comp, key=_key)
            return OracleReport(
                "extension-after-collapse", False,
                f"component at {head!r} contains {len(found)} original components",
            )
    return OracleReport("extension-after-collapse", True)
