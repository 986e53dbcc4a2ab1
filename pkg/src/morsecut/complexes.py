"""Abstract simplicial complexes, pseudomanifolds, and collapse operations.

A simplex is a canonical tuple of strictly increasing vertex ids, so
simplices compare, hash, and sort deterministically.  Complexes and
pseudomanifolds are immutable after construction; every query here is pure.
"""
from __future__ import annotations

import heapq
from itertools import combinations
from typing import Iterable, Iterator, NamedTuple

Simplex = tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    """Canonicalize vertex ids into a simplex tuple.

    Raises ValueError on empty input, negative ids, or duplicates.
    """
    vs = tuple(sorted(vertices))
    if not vs:
        raise ValueError("a simplex needs at least one vertex")
    if vs[0] < 0:
        raise ValueError(f"negative vertex id in {vs!r}")
    if any(a == b for a, b in zip(vs, vs[1:])):
        raise ValueError(f"duplicate vertex in {vs!r}")
    return vs


def simplex_dim(x: Simplex) -> int:
    return len(x) - 1


def sort_key(x: Simplex) -> tuple[int, Simplex]:
    """Canonical (dimension, vertex-lex) order used by every deterministic sweep."""
    return (len(x), x)


def facets(x: Simplex) -> list[Simplex]:
    """Codimension-1 faces of x (empty for vertices)."""
    if len(x) == 1:
        return []
    return [x[:i] + x[i + 1:] for i in range(len(x))]


def proper_faces(x: Simplex) -> list[Simplex]:
    """All nonempty proper subsets of x."""
    out: list[Simplex] = []
    for size in range(1, len(x)):
        out.extend(combinations(x, size))
    return out


class SimplexSet:
    """A finite set of simplices with dimension-indexed access."""

    __slots__ = ("_faces", "_by_dim")

    def __init__(self, faces: Iterable[Simplex] = ()) -> None:
        self._faces: frozenset[Simplex] = frozenset(faces)
        self._by_dim: dict[int, frozenset[Simplex]] | None = None

    @property
    def faces(self) -> frozenset[Simplex]:
        return self._faces

    def __contains__(self, x: object) -> bool:
        return x in self._faces

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self._faces)

    def __len__(self) -> int:
        return len(self._faces)

    def __bool__(self) -> bool:
        return bool(self._faces)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SimplexSet):
            return self._faces == other._faces
        if isinstance(other, (set, frozenset)):
            return self._faces == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._faces)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.sorted()!r})"

    def of_dim(self, p: int) -> frozenset[Simplex]:
        if self._by_dim is None:
            by_dim: dict[int, set[Simplex]] = {}
            for x in self._faces:
                by_dim.setdefault(len(x) - 1, set()).add(x)
            self._by_dim = {p: frozenset(s) for p, s in by_dim.items()}
        return self._by_dim.get(p, frozenset())

    @property
    def dim(self) -> int:
        """Largest face dimension; -1 for the empty set."""
        if not self._faces:
            return -1
        return max(len(x) for x in self._faces) - 1

    def sorted(self) -> list[Simplex]:
        return sorted(self._faces, key=sort_key)

    def union(self, other: Iterable[Simplex]) -> "SimplexSet":
        return SimplexSet(self._faces | frozenset(other))

    def difference(self, other: Iterable[Simplex]) -> "SimplexSet":
        return SimplexSet(self._faces - frozenset(other))

    def intersection(self, other: Iterable[Simplex]) -> "SimplexSet":
        return SimplexSet(self._faces & frozenset(other))

    __or__ = union
    __sub__ = difference
    __and__ = intersection


class Complex(SimplexSet):
    """A simplex set closed under taking nonempty subsets.

    The constructor verifies closedness (facet-closedness suffices by
    induction) and raises ValueError naming a witness otherwise.
    """

    def __init__(self, faces: Iterable[Simplex] = ()) -> None:
        super().__init__(faces)
        for x in self._faces:
            for f in facets(x):
                if f not in self._faces:
                    raise ValueError(f"not closed: {x!r} present but its face {f!r} missing")


def closure(xs: Iterable[Simplex]) -> Complex:
    """Smallest complex containing xs.  Idempotent and monotone."""
    out: set[Simplex] = set()
    for x in xs:
        if x not in out:
            out.add(x)
            out.update(proper_faces(x))
    return Complex(out)


class PseudomanifoldViolation(Exception):
    """Raised when a complex fails one of the three pseudomanifold conditions.

    ``failures`` holds (condition, witness) pairs: 1 = purity, 2 = a
    (d-1)-face without exactly two d-cofaces, 3 = d-connectivity, with the
    first witness in canonical order for each failed condition.
    """

    def __init__(self, d: int, failures: list[tuple[int, Simplex]]) -> None:
        self.d = d
        self.failures = tuple(failures)
        parts = ", ".join(f"condition ({c}) witness {w!r}" for c, w in failures)
        super().__init__(f"not a {d}-pseudomanifold: {parts}")


class _UnionFind:
    """Disjoint-set forest over hashable items, with union by size."""

    __slots__ = ("parent", "size")

    def __init__(self) -> None:
        self.parent: dict = {}
        self.size: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        parent = self.parent
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


class Pseudomanifold:
    """A pure d-complex, each (d-1)-face in exactly two d-faces, d-connected.

    Construction validates all three conditions and precomputes the coface
    index used by stars, stacks, and dual-graph construction.
    """

    __slots__ = ("complex", "d", "coface_index", "d_faces", "_cofaces")

    def __init__(self, c: Complex, d: int) -> None:
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
        if not c:
            raise ValueError("a pseudomanifold cannot be empty")

        cofaces: dict[Simplex, list[Simplex]] = {x: [] for x in c}
        for y in c:
            for x in proper_faces(y):
                cofaces[x].append(y)
        for x in cofaces:
            cofaces[x].sort(key=sort_key)

        failures: list[tuple[int, Simplex]] = []

        # (1) purity: every maximal face has dimension d.
        bad_facets = [x for x in c if not cofaces[x] and len(x) - 1 != d]
        if bad_facets:
            failures.append((1, min(bad_facets, key=sort_key)))

        # (2) every (d-1)-face lies in exactly two d-faces.
        coface_index: dict[Simplex, tuple[Simplex, Simplex]] = {}
        bad_degree: list[Simplex] = []
        for x in c.of_dim(d - 1):
            dcofs = [y for y in cofaces[x] if len(y) - 1 == d]
            if len(dcofs) == 2:
                coface_index[x] = (dcofs[0], dcofs[1])
            else:
                bad_degree.append(x)
        if bad_degree:
            failures.append((2, min(bad_degree, key=sort_key)))

        # (3) d-connectivity via shared (d-1)-faces.
        top = sorted(c.of_dim(d), key=sort_key)
        if top:
            reached = {top[0]}
            queue = [top[0]]
            while queue:
                y = queue.pop()
                for f in facets(y):
                    for z in coface_index.get(f, ()):
                        if z not in reached:
                            reached.add(z)
                            queue.append(z)
            missing = [y for y in top if y not in reached]
            if missing:
                failures.append((3, min(missing, key=sort_key)))
        else:
            failures.append((3, min(c, key=sort_key)))

        if failures:
            failures.sort()
            raise PseudomanifoldViolation(d, failures)

        self.complex = c
        self.d = d
        self.coface_index = coface_index
        self.d_faces: tuple[Simplex, ...] = tuple(top)
        self._cofaces = {x: tuple(ys) for x, ys in cofaces.items()}

    def cofaces(self, x: Simplex) -> tuple[Simplex, ...]:
        """All proper cofaces of x, in canonical order."""
        return self._cofaces[x]

    def opposite(self, face: Simplex, y: Simplex) -> Simplex:
        """The d-coface of a (d-1)-face other than y."""
        a, b = self.coface_index[face]
        return b if y == a else a

    def __contains__(self, x: object) -> bool:
        return x in self.complex

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.complex)

    def __len__(self) -> int:
        return len(self.complex)

    def simplices(self) -> list[Simplex]:
        return self.complex.sorted()


def validate_pseudomanifold(c: Complex, d: int) -> Pseudomanifold:
    """Validate c as a d-pseudomanifold or raise PseudomanifoldViolation."""
    return Pseudomanifold(c, d)


def star(pm: Pseudomanifold, a: Iterable[Simplex]) -> SimplexSet:
    """Union of all cofaces (including each member) of a within pm."""
    out: set[Simplex] = set()
    for x in a:
        if x not in pm:
            raise ValueError(f"{x!r} is not a face of the pseudomanifold")
        out.add(x)
        out.update(pm.cofaces(x))
    return SimplexSet(out)


def d_connected_components(xs: SimplexSet, d: int) -> list[SimplexSet]:
    """Partition the d-simplices of xs into classes linked by d-paths.

    Consecutive d-simplices must share a (d-1)-simplex that itself belongs
    to xs; simplices of other dimensions are assigned to no class.
    """
    top = sorted(xs.of_dim(d), key=sort_key)
    uf = _UnionFind()
    for y in top:
        uf.add(y)
    for y in top:
        for f in facets(y):
            if f in xs:
                uf.add(("face", f))
                uf.union(("face", f), y)
    comps: dict = {}
    for y in top:
        comps.setdefault(uf.find(y), []).append(y)
    parts = [SimplexSet(members) for members in comps.values()]
    parts.sort(key=lambda s: sort_key(s.sorted()[0]))
    return parts


def incidence_components(xs: SimplexSet) -> list[SimplexSet]:
    """Components of xs where x ~ y iff one includes the other (both in xs).

    This is the connectivity used for stars of mixed dimension, e.g. the
    lower threshold sets whose components are the minima of a stack.
    """
    uf = _UnionFind()
    for x in xs:
        uf.add(x)
    for x in xs:
        for f in proper_faces(x):
            if f in xs:
                uf.union(x, f)
    parts = [SimplexSet(members) for members in uf.groups().values()]
    parts.sort(key=lambda s: sort_key(s.sorted()[0]))
    return parts


class FreePair(NamedTuple):
    """A pair (sigma, tau) where tau is the unique proper coface of sigma."""

    sigma: Simplex
    tau: Simplex


def free_pairs(c: Complex) -> list[FreePair]:
    """All free pairs of c, sorted by (sigma, tau) in canonical order."""
    count: dict[Simplex, int] = {}
    only: dict[Simplex, Simplex] = {}
    for y in c:
        for x in proper_faces(y):
            count[x] = count.get(x, 0) + 1
            only[x] = y
    pairs = [FreePair(x, only[x]) for x, n in count.items() if n == 1]
    pairs.sort(key=lambda p: (sort_key(p.sigma), sort_key(p.tau)))
    return pairs


def elementary_collapse(c: Complex, fp: FreePair) -> Complex:
    """Remove a free pair from c; raises ValueError if the pair is not free."""
    sigma, tau = fp
    if sigma not in c or tau not in c:
        raise ValueError(f"{fp!r} is not a pair of faces of the complex")
    cofs = [y for y in c if len(y) > len(sigma) and set(sigma) <= set(y)]
    if cofs != [tau]:
        raise ValueError(f"{fp!r} is not free: cofaces of {sigma!r} are {cofs!r}")
    return Complex(c.faces - {sigma, tau})


def ultimate_d_collapse(c: Complex, d: int) -> Complex:
    """Collapse free (d-1, d) pairs until none remain.

    Pairs are processed in canonical (sigma, tau) order, so the result is
    deterministic; only order-independent claims (dimension, complex-ness)
    are guaranteed across strategies.
    """
    present = set(c.faces)
    dcof: dict[Simplex, set[Simplex]] = {}
    for y in c.of_dim(d):
        for f in facets(y):
            dcof.setdefault(f, set()).add(y)

    # A (d-1)-face under a coface of dimension > d is never free.
    blocked: set[Simplex] = set()
    for p in range(d + 1, c.dim + 1):
        for y in c.of_dim(p):
            blocked.update(x for x in proper_faces(y) if len(x) == d)

    heap: list[Simplex] = []
    for f, ys in dcof.items():
        if len(ys) == 1 and f not in blocked:
            heapq.heappush(heap, f)
    while heap:
        f = heapq.heappop(heap)
        if f not in present:
            continue
        ys = dcof.get(f, ())
        if len(ys) != 1:
            continue
        (tau,) = ys
        present.discard(f)
        present.discard(tau)
        del dcof[f]
        for g in facets(tau):
            if g in dcof:
                dcof[g].discard(tau)
                if len(dcof[g]) == 1:
                    heapq.heappush(heap, g)
    return Complex(present)
