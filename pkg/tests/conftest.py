from fractions import Fraction

import pytest

from vlplus.lattice import EvenLattice, validate_even_lattice

A1 = [[2]]
A1_4 = [[4]]
A1_6 = [[6]]
A2 = [[2, 1], [1, 2]]
D22 = [[2, 0], [0, 2]]
D24 = [[2, 0], [0, 4]]
D224 = [[2, 0, 0], [0, 2, 0], [0, 0, 4]]
A3 = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
ODD7 = [[2, 1], [1, 4]]  # det 7, no self-paired cosets beyond 0

# rank <= 3, det <= 16 suite used by the census-wide tests
TEST_GRAMS = [
    A1,
    A1_4,
    A1_6,
    A2,
    D22,
    D24,
    ODD7,
    [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
    D224,
    A3,
]

CERT_GRAMS = [A1, A1_4, D22, D24, A2, D224]


def lat(gram) -> EvenLattice:
    return validate_even_lattice(gram)


@pytest.fixture(scope="session")
def a1():
    return lat(A1)


@pytest.fixture(scope="session")
def a2():
    return lat(A2)


@pytest.fixture(scope="session")
def d24():
    return lat(D24)


@pytest.fixture(scope="session")
def d224():
    return lat(D224)


def frac(s) -> Fraction:
    return Fraction(s)


def box_enumerate(gram, lam, bound):
    """Brute-force oracle: scan integer boxes until a whole shell exceeds bound.

    Independent of the Fincke-Pohst path; positive definiteness makes the
    shell minimum grow, so two consecutive empty shells are a safe stop.
    """
    d = len(gram)
    lam = [Fraction(x) for x in lam]
    bound = Fraction(bound)

    def norm(v):
        return sum(v[i] * gram[i][j] * v[j] for i in range(d) for j in range(d))

    found = []
    radius = 0
    empty_shells = 0
    while empty_shells < 2:
        shell_hit = False
        for x in _box(d, radius):
            if radius > 0 and max(abs(c) for c in x) < radius:
                continue  # interior already scanned
            v = tuple(lam[i] + x[i] for i in range(d))
            if norm(v) <= bound:
                found.append(v)
                shell_hit = True
        empty_shells = 0 if shell_hit else empty_shells + 1
        radius += 1
    return sorted(found, key=lambda v: (norm(v), tuple((abs(c), 0 if c >= 0 else 1) for c in v)))


def _box(d, radius):
    if d == 0:
        yield ()
        return
    for x in range(-radius, radius + 1):
        for rest in _box(d - 1, radius):
            yield (x,) + rest
