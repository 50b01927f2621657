"""Exact geometry of positive definite even lattices.

A lattice is given by its integer Gram matrix in a fixed basis; lattice
vectors are integer coordinate tuples, dual vectors are Fraction tuples
in the same basis.  All operations below are pure and exact: coset
canonicalization, short-vector enumeration (Fincke-Pohst over an LDL^T
split, no floating point), discriminant groups via Smith normal form,
the bimultiplicative 2-cocycle, mod-2 bilinear data, and orthogonal
sublattice extraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import intmat

Coords = tuple[int, ...]
DualCoords = tuple[Fraction, ...]


class LatticeError(ValueError):
    """Base class for validation failures; message names the violated invariant."""


class NotSymmetric(LatticeError):
    pass


class NotEven(LatticeError):
    def __init__(self, index: int):
        super().__init__(f"diagonal entry at index {index} is odd")
        self.index = index


class NotPositiveDefinite(LatticeError):
    def __init__(self, index: int):
        super().__init__(f"leading principal minor {index} is not positive")
        self.index = index


class BoundNegative(LatticeError):
    pass


class NotFullRank(LatticeError):
    pass


class NotOrthogonalBase(LatticeError):
    pass


@dataclass(frozen=True)
class EvenLattice:
    """Validated positive definite even lattice; the single source of geometry."""

    gram: tuple[tuple[int, ...], ...]
    det: int

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pairing(self, a, b) -> Fraction | int:
        """Bilinear form of two coordinate vectors (integer or rational)."""
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(len(g)) for j in range(len(g)))

    def norm(self, v) -> Fraction | int:
        return self.pairing(v, v)

    def is_dual_vector(self, v: DualCoords) -> bool:
        """True iff v pairs integrally with every lattice vector."""
        g = self.gram
        for i in range(self.rank):
            if sum(g[i][j] * v[j] for j in range(self.rank)).denominator != 1:
                return False
        return True

    def is_diagonal(self) -> bool:
        return all(self.gram[i][j] == 0
                   for i in range(self.rank) for j in range(self.rank) if i != j)


@dataclass(frozen=True)
class CosetElement:
    """Canonical representative of a coset of the lattice inside its dual.

    rep attains min_norm; among equal-norm vectors the representative is
    the one whose coordinate tuple is smallest under the key
    (|c|, sign) per coordinate, nonnegative entries preferred.  This
    tie-break is a convention fixed for reproducibility only.
    """

    rep: DualCoords
    min_norm: Fraction

    def sort_key(self):
        return (self.min_norm, _coords_key(self.rep))


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple[int, ...]
    generators: tuple[DualCoords, ...]
    order: int


@dataclass(frozen=True)
class TwoCocycle:
    """Bimultiplicative sign cocycle on lattice vectors.

    table[i][j] holds the value on the (i, j) basis pair; the defining
    skew relation eps(a,b)*eps(b,a) = (-1)^(a,b) holds for either
    normalization mode.
    """

    table: tuple[tuple[int, ...], ...]

    def __call__(self, a: Coords, b: Coords) -> int:
        par = 0
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            row = self.table[i]
            for j, bj in enumerate(b):
                if bj and row[j] == -1:
                    par ^= (ai * bj) & 1
        return -1 if par else 1


@dataclass(frozen=True)
class Convention:
    """Bookkeeping choices the outputs must not depend on.

    cocycle_mode picks which triangle of the basis table carries the
    signs; root_branch picks the square root c of eps(2l, 2l) used in
    the involution on self-paired cosets (+1 for the principal branch).
    """

    cocycle_mode: str = "upper"  # "upper" | "lower"
    root_branch: int = 1  # +1 | -1


@dataclass(frozen=True)
class ModTwoData:
    """Mod-2 reduction of the form: bilinear matrix, its radical, quadratic form."""

    bilinear: tuple[tuple[int, ...], ...]
    radical_basis: tuple[Coords, ...]
    r2: int
    _gram: tuple[tuple[int, ...], ...]

    def q(self, v: Coords) -> int:
        """(v,v)/2 mod 2, well defined on the vector modulo 2L."""
        g = self._gram
        n = sum(v[i] * g[i][j] * v[j] for i in range(len(g)) for j in range(len(g)))
        return (n // 2) & 1

    def b(self, v: Coords, w: Coords) -> int:
        g = self._gram
        return sum(v[i] * g[i][j] * w[j] for i in range(len(g)) for j in range(len(g))) & 1


def _coords_key(v) -> tuple:
    # minimal-norm ties break toward small absolute coordinates, nonnegative first
    return tuple((abs(c), 0 if c >= 0 else 1) for c in v)


def validate_even_lattice(gram) -> EvenLattice:
    """Validate a Gram matrix and cache its determinant.

    Raises NotSymmetric, NotEven (1-based index of the odd diagonal
    entry) or NotPositiveDefinite (1-based index of the first
    non-positive leading minor).
    """
    rows = [list(r) for r in gram]
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise NotSymmetric("gram matrix is not square")
    for r in rows:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise NotSymmetric("gram entries must be integers")
    for i in range(d):
        for j in range(i + 1, d):
            if rows[i][j] != rows[j][i]:
                raise NotSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
    for i in range(d):
        if rows[i][i] % 2 != 0:
            raise NotEven(i + 1)
    minors = intmat.leading_minors(rows)
    for i, m in enumerate(minors):
        if m <= 0:
            raise NotPositiveDefinite(i + 1)
    return EvenLattice(gram=tuple(tuple(r) for r in rows), det=minors[-1])


# ---------------------------------------------------------------------------
# short vector enumeration
# ---------------------------------------------------------------------------

def _floor_plus_sqrt(c: Fraction, t: Fraction) -> int:
    """Largest integer x with x <= c + sqrt(t), t >= 0, exactly."""
    x = math.floor(c) + math.isqrt(math.floor(t)) + 2
    while True:
        diff = x - c
        if diff <= 0 or diff * diff <= t:
            return x
        x -= 1


def _ceil_minus_sqrt(c: Fraction, t: Fraction) -> int:
    """Smallest integer x with x >= c - sqrt(t), t >= 0, exactly."""
    return -_floor_plus_sqrt(-c, t)


@lru_cache(maxsize=None)
def _ldl_cached(gram: tuple[tuple[int, ...], ...]):
    d, c = intmat.ldl([list(r) for r in gram])
    return tuple(d), tuple(tuple(r) for r in c)


def enumerate_coset_with_norms(
    L: EvenLattice, lam: DualCoords, bound: Fraction
) -> list[tuple[DualCoords, Fraction]]:
    """All v in lam + L with (v,v) <= bound, with norms, sorted by (norm, key)."""
    bound = Fraction(bound)
    if bound < 0:
        raise BoundNegative("enumeration bound must be nonnegative")
    d = L.rank
    diag, coef = _ldl_cached(L.gram)
    lam = tuple(Fraction(x) for x in lam)
    out: list[tuple[DualCoords, Fraction]] = []
    v = [Fraction(0)] * d

    def rec(i: int, rem: Fraction) -> None:
        if i < 0:
            out.append((tuple(v), bound - rem))
            return
        center = sum(coef[i][j] * v[j] for j in range(i + 1, d))
        t = rem / diag[i]
        lo = _ceil_minus_sqrt(-lam[i] - center, t)
        hi = _floor_plus_sqrt(-lam[i] - center, t)
        for x in range(lo, hi + 1):
            v[i] = lam[i] + x
            used = diag[i] * (v[i] + center) ** 2
            rec(i - 1, rem - used)
        v[i] = Fraction(0)

    rec(d - 1, bound)
    out.sort(key=lambda p: (p[1], _coords_key(p[0])))
    return out


def enumerate_coset_vectors(L: EvenLattice, lam: DualCoords, bound) -> list[DualCoords]:
    """All v in lam + L with (v,v) <= bound, each exactly once, sorted."""
    return [v for v, _ in enumerate_coset_with_norms(L, lam, Fraction(bound))]


def coset_element(L: EvenLattice, v: DualCoords) -> CosetElement:
    """Canonicalize an arbitrary dual vector to its coset representative."""
    v = tuple(Fraction(x) for x in v)
    # center the coordinates first so the initial norm bound is small
    start = tuple(x - math.floor(x + Fraction(1, 2)) for x in v)
    vecs = enumerate_coset_with_norms(L, start, Fraction(L.norm(start)))
    rep, norm = vecs[0]
    return CosetElement(rep=rep, min_norm=norm)


def zero_coset(L: EvenLattice) -> CosetElement:
    z = tuple(Fraction(0) for _ in range(L.rank))
    return CosetElement(rep=z, min_norm=Fraction(0))


def coset_neg(L: EvenLattice, c: CosetElement) -> CosetElement:
    return coset_element(L, tuple(-x for x in c.rep))


def coset_add(L: EvenLattice, a: CosetElement, b: CosetElement) -> CosetElement:
    return coset_element(L, tuple(x + y for x, y in zip(a.rep, b.rep)))


def coset_is_trivial(c: CosetElement) -> bool:
    return all(x.denominator == 1 for x in c.rep)


def coset_two_torsion(L: EvenLattice, c: CosetElement) -> bool:
    """True iff twice the coset lies in the lattice."""
    return all((2 * x).denominator == 1 for x in c.rep)


@lru_cache(maxsize=None)
def discriminant_group(L: EvenLattice) -> DiscriminantGroup:
    """Dual-quotient structure from the Smith normal form of the Gram matrix."""
    d, u, _ = intmat.snf([list(r) for r in L.gram])
    ginv = intmat.rational_inverse([list(r) for r in L.gram])
    uinv = intmat.rational_inverse(u)
    factors = []
    gens = []
    n = L.rank
    for i in range(n):
        if d[i] == 1:
            continue
        col = [uinv[r][i] for r in range(n)]
        gen = tuple(
            sum(ginv[r][s] * col[s] for s in range(n)) for r in range(n)
        )
        factors.append(d[i])
        gens.append(gen)
    order = 1
    for f in d:
        order *= f
    if order != L.det:
        raise AssertionError("discriminant order must equal det(gram)")
    return DiscriminantGroup(
        invariant_factors=tuple(factors), generators=tuple(gens), order=order
    )


def _coset_key(v: DualCoords) -> tuple:
    return tuple(x - math.floor(x) for x in v)


@lru_cache(maxsize=None)
def minimal_coset_reps(L: EvenLattice) -> tuple[CosetElement, ...]:
    """One canonical CosetElement per element of the discriminant group.

    The zero coset comes first; the rest are sorted by (min_norm, key).
    """
    dg = discriminant_group(L)
    seen = {}
    for combo in product(*(range(f) for f in dg.invariant_factors)):
        vec = tuple(
            sum((c * g[i] for c, g in zip(combo, dg.generators)), Fraction(0))
            for i in range(L.rank)
        )
        elem = coset_element(L, vec)
        key = _coset_key(elem.rep)
        if key in seen:
            raise AssertionError("duplicate coset generated from invariant factors")
        seen[key] = elem
    reps = sorted(seen.values(), key=CosetElement.sort_key)
    if reps[0].min_norm != 0:
        raise AssertionError("zero coset missing")
    return tuple(reps)


def norm2_vectors(L: EvenLattice) -> tuple[Coords, ...]:
    """All lattice vectors of norm exactly 2 (the root set), possibly empty."""
    zero = tuple(Fraction(0) for _ in range(L.rank))
    vecs = enumerate_coset_with_norms(L, zero, Fraction(2))
    return tuple(
        tuple(int(x) for x in v) for v, n in vecs if n == 2
    )


def delta_set(L: EvenLattice, lam: CosetElement) -> tuple[Coords, ...]:
    """Lattice shifts preserving the minimal coset norm: {a : |lam+a|^2 = |lam|^2}."""
    vecs = enumerate_coset_with_norms(L, lam.rep, lam.min_norm)
    out = []
    for v, n in vecs:
        if n == lam.min_norm:
            out.append(tuple(int(x - r) for x, r in zip(v, lam.rep)))
    return tuple(sorted(out))


def orthogonal_sublattice(
    L: EvenLattice,
) -> tuple[tuple[Coords, ...], tuple[tuple[int, ...], ...], int]:
    """Full-rank pairwise-orthogonal sublattice from rational Gram-Schmidt.

    Each orthogonalized basis vector is scaled by the least positive
    integer clearing its coordinate denominators.  Returns (basis in
    lattice coordinates, diagonal Gram matrix, index in the lattice).
    A diagonal input is returned unchanged with index 1.
    """
    d = L.rank
    basis_q: list[list[Fraction]] = []
    for i in range(d):
        vec = [Fraction(int(i == j)) for j in range(d)]
        for prev in basis_q:
            mu = Fraction(L.pairing(vec, prev)) / Fraction(L.pairing(prev, prev))
            vec = [x - mu * y for x, y in zip(vec, prev)]
        basis_q.append(vec)
    basis: list[Coords] = []
    for vec in basis_q:
        m = 1
        for x in vec:
            m = m * x.denominator // math.gcd(m, x.denominator)
        basis.append(tuple(int(x * m) for x in vec))
    gram1 = tuple(
        tuple(int(L.pairing(a, b)) for b in basis) for a in basis
    )
    det1 = 1
    for i in range(d):
        det1 *= gram1[i][i]
    index_sq, rem = divmod(det1, L.det)
    if rem != 0:
        raise AssertionError("sublattice determinant not a multiple of det")
    index = math.isqrt(index_sq)
    if index * index != index_sq:
        raise AssertionError("index squared is not a perfect square")
    return tuple(basis), gram1, index


def coset_reps_mod_sublattice(
    L: EvenLattice, basis: tuple[Coords, ...]
) -> tuple[Coords, ...]:
    """Canonical representatives of the lattice modulo a full-rank sublattice.

    Zero first, the rest sorted by (norm, key); each representative has
    minimal norm in its class.
    """
    d = L.rank
    cols = [list(b) for b in basis]
    m = [[cols[j][i] for j in range(len(cols))] for i in range(d)]
    if len(basis) != d or intmat.det_int(m) == 0:
        raise NotFullRank("sublattice basis must have full rank")
    diag, u, _ = intmat.snf(m)
    uinv = intmat.rational_inverse(u)
    sub = sublattice_as_lattice(L, basis)
    sinv = intmat.rational_inverse(m)
    reps = {}
    for combo in product(*(range(f) for f in diag)):
        vec = [
            sum(uinv[r][i] * combo[i] for i in range(d)) for r in range(d)
        ]
        if any(x.denominator != 1 for x in vec):
            raise AssertionError("group generator produced non-integer vector")
        vec_int = tuple(int(x) for x in vec)
        # canonicalize inside vec + L1 by enumerating over the sublattice
        in_sub = tuple(
            sum(sinv[r][s] * vec_int[s] for s in range(d)) for r in range(d)
        )
        elem = coset_element(sub, in_sub)
        canon = tuple(
            int(sum(m[r][s] * elem.rep[s] for s in range(d))) for r in range(d)
        )
        key = _coset_key(tuple(Fraction(x) for x in elem.rep))
        if key not in reps:
            reps[key] = (elem.min_norm, canon)
    out = sorted(reps.values(), key=lambda p: (p[0], _coords_key(p[1])))
    if out[0][0] != 0:
        raise AssertionError("zero class missing")
    return tuple(v for _, v in out)


def sublattice_as_lattice(L: EvenLattice, basis: tuple[Coords, ...]) -> EvenLattice:
    """The sublattice spanned by the given vectors as a lattice in its own basis."""
    gram = [[int(L.pairing(a, b)) for b in basis] for a in basis]
    return validate_even_lattice(gram)


def epsilon_cocycle(L: EvenLattice, convention: Convention = Convention()) -> TwoCocycle:
    """Bimultiplicative cocycle normalized to +1 on one triangle of the basis.

    The other triangle carries (-1)^(b_i, b_j); certificate-level outputs
    must not depend on which triangle is chosen.
    """
    d = L.rank
    table = [[1] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            carries = i > j if convention.cocycle_mode == "upper" else i < j
            if carries and L.gram[i][j] % 2 != 0:
                table[i][j] = -1
    return TwoCocycle(table=tuple(tuple(r) for r in table))


@lru_cache(maxsize=None)
def mod_two_data(L: EvenLattice) -> ModTwoData:
    """Mod-2 bilinear matrix, its radical and the quadratic form (v,v)/2 mod 2."""
    d = L.rank
    b = tuple(tuple(L.gram[i][j] & 1 for j in range(d)) for i in range(d))
    radical = tuple(intmat.gf2_nullspace([list(r) for r in b]))
    return ModTwoData(bilinear=b, radical_basis=radical, r2=len(radical), _gram=L.gram)
