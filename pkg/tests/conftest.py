import pytest

from threefold.quotient import IdentificationScheme, Pairing


def square_torus_scheme() -> IdentificationScheme:
    return IdentificationScheme(
        {"sq": (1, 2, 3, 4)},
        pairings=[Pairing.make((1, 2), (4, 3), {1: 4, 2: 3}),
                  Pairing.make((2, 3), (1, 4), {2: 1, 3: 4})],
        name="torus",
    )


def _v(x, y, z):
    return 1 + x + 2 * y + 4 * z


def cube_torus_scheme() -> IdentificationScheme:
    v = _v
    P = {
        "x0": (v(0, 0, 0), v(0, 1, 0), v(0, 1, 1), v(0, 0, 1)),
        "x1": (v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)),
        "y0": (v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)),
        "y1": (v(0, 1, 0), v(1, 1, 0), v(1, 1, 1), v(0, 1, 1)),
        "z0": (v(0, 0, 0), v(1, 0, 0), v(1, 1, 0), v(0, 1, 0)),
        "z1": (v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)),
    }
    pairs = [Pairing.make(a, b, {u: u + s for u in P[a]}) for a, b, s in (("x0", "x1", 1), ("y0", "y1", 2), ("z0", "z1", 4))]
    return IdentificationScheme(P, {"cube": tuple(P)}, pairs, name="T3")


@pytest.fixture
def square_torus():
    return square_torus_scheme()


@pytest.fixture
def cube_torus():
    return cube_torus_scheme()
