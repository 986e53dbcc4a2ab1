"""Dual graphs of valued pseudomanifolds, relative spanning forests, and cuts.

The dual graph puts one vertex per top-dimensional simplex and one edge per
shared (d-1)-face, weighted by the shared face's value.  For a basic stack
the gradient field alone induces a spanning forest relative to the minima,
and that forest coincides with the unique minimum spanning forest obtained
by weight-aware Kruskal growth; the edges between distinct trees form the
cut whose faces close into the watershed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .complexes import Complex, Simplex, _UnionFind, closure, sort_key
from .stacks import GradientVectorField, ValuedComplex, check_stack, minima

Edge = tuple[Simplex, Simplex]


def _edge(a: Simplex, b: Simplex) -> Edge:
    return (a, b) if sort_key(a) <= sort_key(b) else (b, a)


@dataclass(frozen=True)
class DualSubgraph:
    """A plain vertex/edge pair inside a dual graph (used for the minima)."""

    vertices: tuple[Simplex, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True, eq=False)
class DualGraph:
    """Edge-weighted graph on the d-simplices of a valued pseudomanifold."""

    host: ValuedComplex
    vertices: tuple[Simplex, ...]
    edges: tuple[Edge, ...]
    weight: dict[Edge, int]
    shared: dict[Edge, Simplex]
    edge_of_face: dict[Simplex, Edge]

    def edges_of_faces(self, faces: Iterable[Simplex]) -> frozenset[Edge]:
        """The dual edges whose shared (d-1)-face lies in the given set."""
        return frozenset(self.edge_of_face[f] for f in faces)


def dual_graph(v: ValuedComplex) -> DualGraph:
    """Dual graph of a stack; one edge per (d-1)-face, weighted by its value."""
    check_stack(v)
    space = v.space
    weight: dict[Edge, int] = {}
    shared: dict[Edge, Simplex] = {}
    edge_of_face: dict[Simplex, Edge] = {}
    for f in sorted(space.coface_index, key=sort_key):
        a, b = space.coface_index[f]
        e = _edge(a, b)
        weight[e] = v.value[f]
        shared[e] = f
        edge_of_face[f] = e
    edges = tuple(sorted(weight, key=lambda e: (sort_key(e[0]), sort_key(e[1]))))
    assert len(edges) == len(space.coface_index)
    return DualGraph(v, space.d_faces, edges, weight, shared, edge_of_face)


def minima_dual_subgraph(v: ValuedComplex) -> DualSubgraph:
    """Dual graph restricted to the d-faces of the minima of a basic stack."""
    cert = check_stack(v)
    if not cert.basic:
        raise ValueError("minima dual subgraph needs a basic stack (minima may be large otherwise)")
    space = v.space
    d = space.d
    mins = minima(v)
    verts = sorted((x for x in mins.union if len(x) - 1 == d), key=sort_key)
    vert_set = set(verts)
    edges = []
    for f, (a, b) in space.coface_index.items():
        if a in vert_set and b in vert_set:
            edges.append(_edge(a, b))
    edges.sort(key=lambda e: (sort_key(e[0]), sort_key(e[1])))
    return DualSubgraph(tuple(verts), tuple(edges))


@dataclass(frozen=True, eq=False)
class RelativeForest:
    """A spanning subgraph each of whose components holds one anchor component."""

    vertices: tuple[Simplex, ...]
    edges: frozenset[Edge]
    anchor: DualSubgraph

    def components(self) -> list[frozenset[Simplex]]:
        uf = _UnionFind()
        for x in self.vertices:
            uf.add(x)
        for a, b in self.edges:
            uf.union(a, b)
        comps = [frozenset(members) for members in uf.groups().values()]
        comps.sort(key=lambda c: sort_key(min(c, key=sort_key)))
        return comps

    def component_roots(self) -> dict[Simplex, int]:
        labels: dict[Simplex, int] = {}
        for i, comp in enumerate(self.components()):
            for x in comp:
                labels[x] = i
        return labels


def induced_forest(g: GradientVectorField, v: ValuedComplex) -> RelativeForest:
    """Forest induced by the gradient field of a basic stack.

    Each top-level vector (a, b) contributes the dual edge between its head
    b and the other coface of a; the dual graph of the minima is then added.
    Never inspects edge weights.
    """
    space = v.space
    d = space.d
    anchor = minima_dual_subgraph(v)
    edges: set[Edge] = set(anchor.edges)
    heads: set[Simplex] = set()
    for a, b in g:
        if len(a) - 1 != d - 1:
            continue
        c = space.opposite(a, b)
        edges.add(_edge(b, c))
        heads.add(b)
    uncovered = [t for t in space.d_faces if t not in heads and t not in set(anchor.vertices)]
    if uncovered:
        raise RuntimeError(f"d-simplex {uncovered[0]!r} is neither a vector head nor a minimum")
    return RelativeForest(space.d_faces, frozenset(edges), anchor)


def msf_kruskal_relative(dg: DualGraph, anchor: DualSubgraph) -> RelativeForest:
    """Minimum spanning forest relative to an anchor, by marked Kruskal growth.

    Components seeded by the anchor are marked; edges are scanned by
    ascending (weight, shared-face) and taken unless they would merge two
    marked components.  With pairwise distinct weights the result is the
    unique minimum-weight relative spanning forest.
    """
    if not anchor.vertices:
        raise ValueError("anchor must be nonempty")
    uf = _UnionFind()
    for x in dg.vertices:
        uf.add(x)
    marked: set[Simplex] = set()
    for a, b in anchor.edges:
        uf.union(a, b)
    for x in anchor.vertices:
        marked.add(uf.find(x))

    taken: set[Edge] = set(anchor.edges)
    order = sorted(dg.edges, key=lambda e: (dg.weight[e], sort_key(dg.shared[e])))
    for e in order:
        ra, rb = uf.find(e[0]), uf.find(e[1])
        if ra == rb:
            continue
        if ra in marked and rb in marked:
            continue
        r = uf.union(ra, rb)
        if ra in marked or rb in marked:
            marked.add(r)
        taken.add(e)

    roots = {uf.find(x) for x in dg.vertices}
    assert roots <= marked, "dual graph of a pseudomanifold must reach every anchor"
    return RelativeForest(dg.vertices, frozenset(taken), anchor)


@dataclass(frozen=True, eq=False)
class MsfCut:
    """Edges between distinct forest trees, their faces, and the closed cut."""

    cut_edges: frozenset[Edge]
    cut_faces: frozenset[Simplex]
    watershed: Complex


def msf_cut(f: RelativeForest, dg: DualGraph) -> MsfCut:
    """Cut of a relative spanning forest: edges joining two distinct trees."""
    labels = f.component_roots()
    cut = frozenset(e for e in dg.edges if labels[e[0]] != labels[e[1]])
    faces = frozenset(dg.shared[e] for e in cut)
    return MsfCut(cut, faces, closure(faces))


def watershed_cut(v: ValuedComplex, strategy: str = "via_gvf") -> MsfCut:
    """Watershed of a nonnegative basic stack, via either forest construction.

    Both strategies return the same cut: the gradient-induced forest equals
    the Kruskal minimum spanning forest relative to the minima.
    """
    if strategy not in ("via_gvf", "via_kruskal"):
        raise ValueError(f"unknown strategy {strategy!r}")
    low = min(v.value.values())
    if low < 0:
        raise ValueError(f"values must be nonnegative (min is {low}); shift the stack first")
    dg = dual_graph(v)
    if strategy == "via_gvf":
        from .stacks import gvf

        forest = induced_forest(gvf(v), v)
    else:
        forest = msf_kruskal_relative(dg, minima_dual_subgraph(v))
    return msf_cut(forest, dg)


@dataclass(frozen=True)
class ForestDiff:
    only_in_a: frozenset[Edge]
    only_in_b: frozenset[Edge]

    @property
    def equal(self) -> bool:
        return not self.only_in_a and not self.only_in_b


def compare_forests(a: RelativeForest, b: RelativeForest) -> ForestDiff:
    """Edge-set symmetric difference of two forests on the same dual graph."""
    if a.vertices != b.vertices:
        raise ValueError("forests live on different dual graphs")
    return ForestDiff(frozenset(a.edges - b.edges), frozenset(b.edges - a.edges))


def _node_name(x: Simplex) -> str:
    return " ".join(map(str, x))


def to_dot(
    dg: DualGraph,
    forest: RelativeForest | None = None,
    cut: MsfCut | None = None,
) -> str:
    """Render the dual graph as DOT.

    Minima vertices (the forest's anchor) are filled lightblue, forest edges
    are solid blue, cut edges dashed red, all remaining edges gray; edge
    labels carry the weights.
    """
    anchor_vertices = set(forest.anchor.vertices) if forest is not None else set()
    forest_edges = set(forest.edges) if forest is not None else set()
    cut_edges = set(cut.cut_edges) if cut is not None else set()
    lines = ["graph dual {", "  node [shape=ellipse];"]
    for x in dg.vertices:
        attrs = ' [style=filled, fillcolor=lightblue]' if x in anchor_vertices else ""
        lines.append(f'  "{_node_name(x)}"{attrs};')
    for e in dg.edges:
        a, b = e
        if e in forest_edges:
            style = "color=blue, penwidth=2"
        elif e in cut_edges:
            style = "color=red, style=dashed"
        else:
            style = "color=gray"
        lines.append(f'  "{_node_name(a)}" -- "{_node_name(b)}" [label="{dg.weight[e]}", {style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
