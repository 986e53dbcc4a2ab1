import pytest

from morsecut import ValuedComplex, closure, validate_pseudomanifold


@pytest.fixture(scope="session")
def square_space():
    """The square cycle on vertices 1..4: edges 12, 23, 34, 41."""
    return validate_pseudomanifold(closure([(1, 2), (2, 3), (3, 4), (1, 4)]), 1)


@pytest.fixture(scope="session")
def s_star(square_space):
    """The worked basic stack on the square cycle.

    F(e12)=0, F(e34)=1, F(v2)=F(e23)=2, F(v4)=F(e41)=3, F(v1)=4, F(v3)=5.
    """
    values = {
        (1, 2): 0,
        (3, 4): 1,
        (2,): 2,
        (2, 3): 2,
        (4,): 3,
        (1, 4): 3,
        (1,): 4,
        (3,): 5,
    }
    return ValuedComplex(square_space, values)


@pytest.fixture(scope="session")
def tetra():
    """Boundary of the tetrahedron on vertices 1..4 (a 2-pseudomanifold)."""
    tris = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    return validate_pseudomanifold(closure(tris), 2)
