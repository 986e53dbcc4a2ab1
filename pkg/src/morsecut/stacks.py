"""Valued complexes: simplicial stacks, discrete Morse functions, gradients.

Stacks decrease along inclusion, discrete Morse functions increase, and
pointwise negation exchanges the two families.  Basic members of either
family (2-1 value maps whose equal values sit on nested pairs) induce the
same matching of equal-valued nested covering pairs: the gradient vector
field.  Value maps are treated as immutable; collapses and lowerings return
new ValuedComplex instances.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .complexes import (
    Complex,
    Pseudomanifold,
    Simplex,
    SimplexSet,
    _UnionFind,
    facets,
    proper_faces,
    sort_key,
)


@dataclass(frozen=True, eq=False)
class ValuedComplex:
    """A total integer value map on the simplices of a pseudomanifold."""

    space: Pseudomanifold
    value: dict[Simplex, int]

    def __post_init__(self) -> None:
        if len(self.value) != len(self.space):
            missing = [x for x in self.space if x not in self.value]
            if missing:
                raise ValueError(f"no value for {missing[0]!r}")
            extra = [x for x in self.value if x not in self.space]
            raise ValueError(f"value given for non-face {extra[0]!r}")

    def __repr__(self) -> str:
        return f"ValuedComplex(d={self.space.d}, n={len(self.space)})"


class StackViolation(Exception):
    """A nested pair whose values increase along inclusion."""

    def __init__(self, sigma: Simplex, tau: Simplex, vs: int, vt: int) -> None:
        self.sigma, self.tau, self.values = sigma, tau, (vs, vt)
        super().__init__(f"F({sigma!r}) = {vs} < F({tau!r}) = {vt} with {sigma!r} included in {tau!r}")


class DmfViolation(Exception):
    """A simplex with more than one exceptional facet or cofacet."""

    def __init__(self, sigma: Simplex, offending: tuple[Simplex, ...], side: str) -> None:
        self.sigma, self.offending, self.side = sigma, offending, side
        super().__init__(f"{len(offending)} {side} of {sigma!r} break the Morse bound: {offending!r}")


@dataclass(frozen=True, eq=False)
class StackCertificate:
    host: ValuedComplex
    basic: bool
    basic_witness: tuple | None = None


@dataclass(frozen=True, eq=False)
class DmfCertificate:
    host: ValuedComplex
    basic: bool
    basic_witness: tuple | None = None


def _basic_witness(v: ValuedComplex) -> tuple | None:
    """Why the value map is not 2-1 with nested equal pairs, or None."""
    classes: dict[int, list[Simplex]] = {}
    for x, val in v.value.items():
        classes.setdefault(val, []).append(x)
    for val in sorted(classes):
        xs = sorted(classes[val], key=sort_key)
        if len(xs) > 2:
            return (val, tuple(xs))
        if len(xs) == 2 and not set(xs[0]) <= set(xs[1]):
            return (val, tuple(xs))
    return None


def check_stack(v: ValuedComplex) -> StackCertificate:
    """Certify that values weakly decrease along inclusion.

    Raises StackViolation with the offending covering pair otherwise; the
    certificate's ``basic`` flag additionally records whether the map is 2-1
    with equal values only on nested pairs.
    """
    F = v.value
    for y in v.space.simplices():
        fy = F[y]
        for x in facets(y):
            if F[x] < fy:
                raise StackViolation(x, y, F[x], fy)
    w = _basic_witness(v)
    return StackCertificate(v, w is None, w)


def check_dmf(v: ValuedComplex) -> DmfCertificate:
    """Certify the discrete Morse bounds at every simplex.

    At most one facet may carry a value >= the simplex's own, and at most
    one cofacet a value <= it.  The ``basic`` flag additionally requires the
    map to be weakly increasing, 2-1, and equal only on nested pairs.
    """
    F = v.value
    space = v.space
    increasing = True
    for y in space.simplices():
        fy = F[y]
        p1 = len(y) + 1
        bad_facets = tuple(x for x in facets(y) if F[x] >= fy)
        if len(bad_facets) > 1:
            raise DmfViolation(y, bad_facets, "facets")
        bad_cofacets = tuple(t for t in space.cofaces(y) if len(t) == p1 and F[t] <= fy)
        if len(bad_cofacets) > 1:
            raise DmfViolation(y, bad_cofacets, "cofacets")
        if increasing and any(F[x] > fy for x in facets(y)):
            increasing = False
    w = _basic_witness(v) if increasing else ("not weakly increasing",)
    return DmfCertificate(v, increasing and w is None, None if increasing and w is None else w)


def is_stack(v: ValuedComplex) -> bool:
    try:
        check_stack(v)
        return True
    except StackViolation:
        return False


def is_basic_stack(v: ValuedComplex) -> bool:
    try:
        return check_stack(v).basic
    except StackViolation:
        return False


def is_dmf(v: ValuedComplex) -> bool:
    try:
        check_dmf(v)
        return True
    except DmfViolation:
        return False


def is_basic_dmf(v: ValuedComplex) -> bool:
    try:
        return check_dmf(v).basic
    except DmfViolation:
        return False


def negate(v: ValuedComplex) -> ValuedComplex:
    """Pointwise negation; exchanges basic stacks and basic Morse functions."""
    return ValuedComplex(v.space, {x: -f for x, f in v.value.items()})


def k_section(v: ValuedComplex, k: int) -> SimplexSet:
    """All simplices with value >= k; a complex whenever v is a stack."""
    return SimplexSet(x for x, f in v.value.items() if f >= k)


@dataclass(frozen=True)
class Minima:
    """The minima of a stack: components of lower sections at their own altitude."""

    parts: tuple[SimplexSet, ...]
    altitudes: tuple[int, ...]
    union: SimplexSet


def minima(v: ValuedComplex) -> Minima:
    """All minima of a stack and their union.

    A minimum at altitude k is a component of the lower section [F <= k]
    that misses [F <= k-1]; components are taken under incidence
    connectivity (x ~ y iff one includes the other, both in the section).
    """
    check_stack(v)
    space, F = v.space, v.value
    batches: dict[int, list[Simplex]] = {}
    for x in space:
        batches.setdefault(F[x], []).append(x)

    uf = _UnionFind()
    added: set[Simplex] = set()
    min_alt: dict[Simplex, int] = {}
    members: dict[Simplex, list[Simplex]] = {}

    def link(a: Simplex, b: Simplex) -> None:
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            return
        r = uf.union(ra, rb)
        other = rb if r == ra else ra
        if min_alt[other] < min_alt[r]:
            min_alt[r] = min_alt[other]
        members[r].extend(members.pop(other))
        del min_alt[other]

    found: list[tuple[int, SimplexSet]] = []
    for k in sorted(batches):
        batch = sorted(batches[k], key=sort_key)
        for x in batch:
            uf.add(x)
            added.add(x)
            min_alt[x] = k
            members[x] = [x]
        for x in batch:
            for f in proper_faces(x):
                if f in added:
                    link(x, f)
            for g in space.cofaces(x):
                if g in added:
                    link(x, g)
        roots = sorted({uf.find(x) for x in batch}, key=sort_key)
        for r in roots:
            if min_alt[r] == k:
                found.append((k, SimplexSet(members[r])))

    found.sort(key=lambda kp: (kp[0], sort_key(kp[1].sorted()[0])))
    union = SimplexSet(x for _, part in found for x in part)
    return Minima(tuple(p for _, p in found), tuple(k for k, _ in found), union)


def divide(v: ValuedComplex) -> Complex:
    """All faces belonging to no minimum; always a complex for stacks."""
    return Complex(v.space.complex.faces - minima(v).union.faces)


class GradientVectorField:
    """A matching of nested (p, p+1) pairs; each simplex in at most one vector."""

    __slots__ = ("pairs", "head_of", "tail_of", "matched")

    def __init__(self, vectors: Iterable[tuple[Simplex, Simplex]]) -> None:
        pairs = sorted(set(vectors), key=lambda st: (sort_key(st[0]), sort_key(st[1])))
        head_of: dict[Simplex, Simplex] = {}
        tail_of: dict[Simplex, Simplex] = {}
        seen: set[Simplex] = set()
        for s, t in pairs:
            if len(t) != len(s) + 1 or not set(s) < set(t):
                raise ValueError(f"({s!r}, {t!r}) is not a nested (p, p+1) pair")
            if s in seen or t in seen:
                raise ValueError(f"simplex reused across vectors near ({s!r}, {t!r})")
            seen.update((s, t))
            head_of[s] = t
            tail_of[t] = s
        self.pairs: tuple[tuple[Simplex, Simplex], ...] = tuple(pairs)
        self.head_of = head_of
        self.tail_of = tail_of
        self.matched: frozenset[Simplex] = frozenset(seen)

    def __iter__(self) -> Iterator[tuple[Simplex, Simplex]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return (
            isinstance(pair, tuple)
            and len(pair) == 2
            and self.head_of.get(pair[0]) == pair[1]
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GradientVectorField):
            return self.pairs == other.pairs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __repr__(self) -> str:
        return f"GradientVectorField({list(self.pairs)!r})"


def gvf(v: ValuedComplex) -> GradientVectorField:
    """Gradient vector field of a basic stack or basic Morse function.

    Vectors are exactly the equal-valued covering pairs; for a stack this is
    the gradient of its negation, which needs no separate computation.
    """
    ok = is_basic_stack(v) or is_basic_dmf(v)
    if not ok:
        raise ValueError("gradient needs a basic stack or a basic discrete Morse function")
    F = v.value
    pairs = []
    for y in v.space.simplices():
        fy = F[y]
        for x in facets(y):
            if F[x] == fy:
                pairs.append((x, y))
    return GradientVectorField(pairs)


@dataclass(frozen=True)
class Criticality:
    """Partition of a pseudomanifold into critical simplices and vector ends."""

    critical: frozenset[Simplex]
    regular_tails: frozenset[Simplex]
    regular_heads: frozenset[Simplex]


def classify(v: ValuedComplex, g: GradientVectorField) -> Criticality:
    """Split simplices into critical / tail / head with respect to g."""
    tails = frozenset(g.head_of)
    heads = frozenset(g.tail_of)
    critical = frozenset(x for x in v.space if x not in g.matched)
    return Criticality(critical, tails, heads)


@dataclass(frozen=True)
class GradientPath:
    """Alternating (p, p+1) simplex sequence following vectors through facets.

    ``sequence`` optionally starts with a critical (p+1)-simplex; after that
    it alternates tails and heads and always ends on a p-simplex.
    """

    sequence: tuple[Simplex, ...]
    leading_critical: bool = False

    @property
    def vector_count(self) -> int:
        return (len(self.sequence) - (2 if self.leading_critical else 1)) // 2

    @property
    def is_trivial(self) -> bool:
        return self.vector_count == 0

    @property
    def is_closed(self) -> bool:
        first = self.sequence[1] if self.leading_critical else self.sequence[0]
        return not self.is_trivial and self.sequence[-1] == first


def enumerate_gradient_paths(g: GradientVectorField, start: Simplex, p: int) -> list[GradientPath]:
    """All maximal gradient paths from a critical (p+1)-start or regular p-start.

    Raises ValueError for a start of the wrong kind, or if the field turns
    out to be cyclic while walking.
    """
    dim = len(start) - 1
    if dim == p + 1:
        if start in g.matched:
            raise ValueError(f"(p+1)-dimensional start {start!r} must be critical")
        leading = True
        seeds = sorted(facets(start))
        prefix = (start,)
    elif dim == p:
        if start not in g.matched:
            raise ValueError(f"p-dimensional start {start!r} must be regular")
        leading = False
        seeds = [start]
        prefix = ()
    else:
        raise ValueError(f"start {start!r} has dimension {dim}, expected {p} or {p + 1}")

    out: list[GradientPath] = []

    def walk(sigma: Simplex, acc: list[Simplex], on_path: set[Simplex]) -> None:
        tau = g.head_of.get(sigma)
        if tau is None:
            out.append(GradientPath(prefix + tuple(acc) + (sigma,), leading))
            return
        if sigma in on_path:
            raise ValueError("cyclic vector field: gradient paths do not terminate")
        on_path.add(sigma)
        acc.extend((sigma, tau))
        for nxt in sorted(x for x in facets(tau) if x != sigma):
            walk(nxt, acc, on_path)
        del acc[-2:]
        on_path.discard(sigma)

    for s0 in seeds:
        walk(s0, [], set())
    out.sort(key=lambda path: tuple(map(sort_key, path.sequence)))
    return out


def _as_field(field) -> GradientVectorField:
    if isinstance(field, GradientVectorField):
        return field
    return GradientVectorField(field)


def has_closed_path(field) -> tuple[bool, tuple[Simplex, ...] | None]:
    """Detect a non-trivial closed gradient path in a discrete vector field.

    Returns (True, witness) with the witness listing the closed path's 2k
    simplices (tails and heads, wrapping back to the first tail), or
    (False, None).
    """
    g = _as_field(field)
    head_of = g.head_of

    def successors(s: Simplex) -> list[Simplex]:
        return sorted(x for x in facets(head_of[s]) if x != s and x in head_of)

    color: dict[Simplex, int] = {}
    for seed in sorted(head_of, key=sort_key):
        if seed in color:
            continue
        stack = [(seed, iter(successors(seed)))]
        color[seed] = 1
        on_path = [seed]
        while stack:
            node, it = stack[-1]
            advanced = False
            for w in it:
                c = color.get(w)
                if c == 1:
                    cycle = on_path[on_path.index(w):]
                    witness: list[Simplex] = []
                    for s in cycle:
                        witness.extend((s, head_of[s]))
                    return True, tuple(witness)
                if c is None:
                    color[w] = 1
                    on_path.append(w)
                    stack.append((w, iter(successors(w))))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                on_path.pop()
                stack.pop()
    return False, None


def forman_equivalent(f: ValuedComplex, g: ValuedComplex) -> bool:
    """Whether two Morse functions agree on every strict covering inequality."""
    if f.space.complex != g.space.complex or f.space.d != g.space.d:
        raise ValueError("the two functions live on different spaces")
    check_dmf(f)
    check_dmf(g)
    F, G = f.value, g.value
    for y in f.space:
        fy, gy = F[y], G[y]
        for x in facets(y):
            if (F[x] < fy) != (G[x] < gy):
                return False
    return True


def basify(space: Pseudomanifold, field) -> ValuedComplex:
    """Build a basic Morse function whose gradient is the given acyclic field.

    Vector pairs are contracted to one node each; the covering relations not
    absorbed by a vector orient the quotient, which is topologically sorted
    (smallest simplex first) and numbered 0, 1, 2, ...  Each contracted node
    hands its number to both simplices, giving a 2-1 weakly increasing map
    equal only inside vectors.
    """
    g = _as_field(field)
    cyclic, witness = has_closed_path(g)
    if cyclic:
        raise ValueError(f"cyclic vector field cannot be a gradient: {witness!r}")

    node: dict[Simplex, Simplex] = {}
    group: dict[Simplex, tuple[Simplex, ...]] = {}
    for s, t in g:
        if s not in space or t not in space:
            raise ValueError(f"vector ({s!r}, {t!r}) is not supported by the space")
        node[s] = node[t] = s
        group[s] = (s, t)
    for x in space:
        if x not in node:
            node[x] = x
            group[x] = (x,)

    succ: dict[Simplex, set[Simplex]] = {r: set() for r in group}
    indeg: dict[Simplex, int] = {r: 0 for r in group}
    for y in space:
        ny = node[y]
        for x in facets(y):
            nx = node[x]
            if nx != ny and ny not in succ[nx]:
                succ[nx].add(ny)
                indeg[ny] += 1

    heap = [sort_key(r) + (r,) for r, deg in indeg.items() if deg == 0]
    heapq.heapify(heap)
    value: dict[Simplex, int] = {}
    counter = 0
    while heap:
        r = heapq.heappop(heap)[-1]
        for x in group[r]:
            value[x] = counter
        counter += 1
        for w in sorted(succ[r], key=sort_key):
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, sort_key(w) + (w,))
    if len(value) != len(space):
        raise RuntimeError("contracted covering relation is cyclic despite acyclic field")
    return ValuedComplex(space, value)


def stack_lowering(v: ValuedComplex, ns: Iterable[Simplex]) -> ValuedComplex:
    """Subtract one on a subset of faces."""
    lowered = set(ns)
    for x in lowered:
        if x not in v.space:
            raise ValueError(f"{x!r} is not a face of the space")
    return ValuedComplex(v.space, {x: f - (1 if x in lowered else 0) for x, f in v.value.items()})


def ultimate_stack_collapse(v: ValuedComplex) -> ValuedComplex:
    """Lower free (d-1, d) pairs of the value map until none remain.

    A (d-1)-face is free for the map when exactly one of its two d-cofaces
    shares its value (the other lies strictly below, so the face is free in
    the section at its own value).  Every intermediate map is a stack.
    """
    check_stack(v)
    space = v.space
    F = dict(v.value)

    def equal_cofaces(f: Simplex) -> list[Simplex]:
        return [t for t in space.coface_index[f] if F[t] == F[f]]

    heap = list(space.coface_index)
    heapq.heapify(heap)
    while heap:
        f = heapq.heappop(heap)
        eq = equal_cofaces(f)
        if len(eq) != 1:
            continue
        tau = eq[0]
        F[f] -= 1
        F[tau] -= 1
        heapq.heappush(heap, f)
        for g in facets(tau):
            if g != f:
                heapq.heappush(heap, g)
    return ValuedComplex(space, F)


def random_basic_stack(space: Pseudomanifold, seed: int = 0, lower_merge_rate: float = 0.3) -> ValuedComplex:
    """Generate a certified basic stack with nonnegative values.

    Top-dimensional simplices get a random permutation of 0..n_d-1; lower
    faces start strictly above all their cofaces and are then ranked into an
    injective map.  Every d-simplex with a lower-valued dual neighbour is
    paired with a shared face toward one such neighbour, so the minima are
    exactly the local minima of the top-level assignment and are pairwise
    non-adjacent.  Optional lower-dimensional pairings add regular pairs
    below the top level.  The result is certified before being returned.
    """
    rng = random.Random(seed)
    d = space.d
    ds = list(space.d_faces)
    raw_order = list(range(len(ds)))
    rng.shuffle(raw_order)
    raw = dict(zip(ds, raw_order))

    base: dict[Simplex, int] = {}
    for x in space:
        if len(x) - 1 == d:
            base[x] = raw[x]
        else:
            top = max(raw[t] for t in space.cofaces(x) if len(t) - 1 == d)
            base[x] = (d + 1) * top + (d - (len(x) - 1))
    order = sorted(space.simplices(), key=lambda x: (-base[x], sort_key(x)))
    n = len(order)
    F = {x: n - 1 - i for i, x in enumerate(order)}

    merged: set[Simplex] = set()
    for t in sorted(ds, key=lambda t: raw[t]):
        downhill = [f for f in facets(t) if raw[space.opposite(f, t)] < raw[t]]
        if downhill:
            f = rng.choice(downhill)
            F[f] = F[t]
            merged.update((f, t))

    if d >= 2 and lower_merge_rate > 0:
        for p in range(d - 1, 0, -1):
            for y in sorted(space.complex.of_dim(p), key=sort_key):
                if y in merged or rng.random() >= lower_merge_rate:
                    continue
                frees = [w for w in facets(y) if w not in merged]
                if not frees:
                    continue
                w = rng.choice(frees)
                covers = [z for z in space.cofaces(w) if len(z) == len(w) + 1]
                if all(F[y] >= F[z] for z in covers):
                    F[w] = F[y]
                    merged.update((w, y))

    out = ValuedComplex(space, F)
    cert = check_stack(out)
    if not cert.basic:
        raise RuntimeError(f"generator produced a non-basic stack: {cert.basic_witness!r}")
    return out


def random_vector_field(space: Pseudomanifold, seed: int = 0, rate: float = 0.7) -> GradientVectorField:
    """A random (not necessarily acyclic) matching of covering pairs."""
    rng = random.Random(seed)
    pairs = [(x, y) for y in space.simplices() for x in facets(y)]
    rng.shuffle(pairs)
    used: set[Simplex] = set()
    chosen: list[tuple[Simplex, Simplex]] = []
    for x, y in pairs:
        if x in used or y in used or rng.random() >= rate:
            continue
        chosen.append((x, y))
        used.update((x, y))
    return GradientVectorField(chosen)
