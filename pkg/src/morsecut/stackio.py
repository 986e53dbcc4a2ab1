"""Stack files and pseudomanifold generators.

A stack file is a header ``pseudomanifold d=<int>`` followed by one record
per simplex: whitespace-separated vertex ids, a colon, and an integer
value, e.g. ``1 2 3 : 7``.  Every simplex of the closure of the listed
faces must appear exactly once; parsing canonicalizes and validates, and
``serialize -> parse`` is the identity on canonical text.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .complexes import (
    Complex,
    Pseudomanifold,
    Simplex,
    closure,
    proper_faces,
    simplex,
    sort_key,
    validate_pseudomanifold,
)
from .stacks import ValuedComplex, random_basic_stack

_HEADER = re.compile(r"^pseudomanifold\s+d=(-?\d+)\s*$")


class StackParseError(Exception):
    def __init__(self, lineno: int, message: str) -> None:
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def format_simplex(x: Simplex) -> str:
    return " ".join(map(str, x))


def parse_stack_text(text: str) -> ValuedComplex:
    """Parse a stack file into a ValuedComplex on a validated pseudomanifold."""
    header_d: int | None = None
    values: dict[Simplex, int] = {}
    line_of: dict[Simplex, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if header_d is None:
            m = _HEADER.match(line)
            if not m:
                raise StackParseError(lineno, f"expected 'pseudomanifold d=<int>' header, got {line!r}")
            header_d = int(m.group(1))
            continue
        if ":" not in line:
            raise StackParseError(lineno, f"expected '<vertex ids> : <value>', got {line!r}")
        left, _, right = line.partition(":")
        try:
            ids = [int(tok) for tok in left.split()]
            value = int(right.strip())
        except ValueError:
            raise StackParseError(lineno, f"non-integer token in {line!r}") from None
        try:
            x = simplex(ids)
        except ValueError as exc:
            raise StackParseError(lineno, str(exc)) from None
        if x in values:
            raise StackParseError(lineno, f"duplicate record for simplex {format_simplex(x)!r}")
        values[x] = value
        line_of[x] = lineno
    if header_d is None:
        raise StackParseError(1, "empty file: missing header")
    if not values:
        raise StackParseError(1, "no simplex records")

    for y in sorted(values, key=sort_key):
        for f in proper_faces(y):
            if f not in values:
                raise StackParseError(
                    line_of[y],
                    f"face {format_simplex(f)!r} of {format_simplex(y)!r} has no record",
                )

    pm = validate_pseudomanifold(Complex(values), header_d)
    return ValuedComplex(pm, values)


def load_stack(path) -> ValuedComplex:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_stack_text(fh.read())


def serialize_stack(v: ValuedComplex) -> str:
    """Canonical text: header, then records sorted by (dimension, vertex-lex)."""
    lines = [f"pseudomanifold d={v.space.d}"]
    for x in v.space.simplices():
        lines.append(f"{format_simplex(x)} : {v.value[x]}")
    return "\n".join(lines) + "\n"


def save_stack(v: ValuedComplex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_stack(v))


def cycle_space(n: int) -> Pseudomanifold:
    """The n-cycle graph as a 1-pseudomanifold, vertices 0..n-1."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    edges = [simplex((i, (i + 1) % n)) for i in range(n)]
    return validate_pseudomanifold(closure(edges), 1)


def simplex_boundary_space(n: int) -> Pseudomanifold:
    """Boundary of the n-simplex on vertices 0..n, an (n-1)-pseudomanifold."""
    if n < 2:
        raise ValueError(f"simplex boundary needs n >= 2, got {n}")
    tops = [tuple(c) for c in combinations(range(n + 1), n)]
    return validate_pseudomanifold(closure(tops), n - 1)


def torus_grid_space(n: int) -> Pseudomanifold:
    """n x n wraparound vertex grid, squares split along the (i,j)->(i+1,j+1)
    diagonal; 2*n*n triangles on n*n vertices."""
    if n < 3:
        raise ValueError(f"torus grid needs n >= 3, got {n}")

    def vid(i: int, j: int) -> int:
        return (i % n) * n + (j % n)

    tris = []
    for i in range(n):
        for j in range(n):
            tris.append(simplex((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1))))
            tris.append(simplex((vid(i, j), vid(i, j + 1), vid(i + 1, j + 1))))
    return validate_pseudomanifold(closure(tris), 2)


SPACE_BUILDERS = {
    "cycle": cycle_space,
    "simplex_boundary": simplex_boundary_space,
    "torus_grid": torus_grid_space,
}


@dataclass(frozen=True)
class GeneratorSpec:
    """A named pseudomanifold family member plus a value-randomization seed."""

    kind: str
    n: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in SPACE_BUILDERS:
            raise ValueError(f"unknown kind {self.kind!r}; choose from {sorted(SPACE_BUILDERS)}")


def generate(spec: GeneratorSpec) -> ValuedComplex:
    """A certified basic stack on the requested space; identical spec and
    seed give bit-identical output."""
    space = SPACE_BUILDERS[spec.kind](spec.n)
    return random_basic_stack(space, seed=spec.seed)
