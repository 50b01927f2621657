"""Exact truncated q-series and the graded dimensions they carry.

A series lives on the exponent grid (1/D)Z with a truncation order:
coefficients are exact rationals stored as integers over a common
positive scale, so products reduce to integer convolutions.  Exponents
are never negative here, which keeps truncation exact: every stored
coefficient of a sum or product is the true coefficient.

Characters are graded dimensions in true conformal weights, without any
central-charge prefactor, so direct sums add and tensor products
multiply as literal series identities.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .lattice import CosetElement, EvenLattice, enumerate_coset_with_norms, zero_coset
from .sectors import LabelKind, ModuleLabel


class QSeries:
    """Truncated series with rational coefficients on the grid (1/denom)Z.

    Immutable by convention: arithmetic returns new instances and the
    internal table is never handed out.  Exponent e carries coefficient
    nums[e * denom] / scale; all stored exponents are < order.
    """

    __slots__ = ("denom", "order_key", "scale", "nums")

    def __init__(self, denom: int, order_key: int, scale: int, nums: dict[int, int]):
        self.denom = denom
        self.order_key = order_key
        self.scale = scale
        self.nums = nums

    # -- construction -------------------------------------------------------

    @staticmethod
    def zero(denom: int, order: Fraction) -> "QSeries":
        return QSeries(denom, _key(order, denom), 1, {})

    @staticmethod
    def one(denom: int, order: Fraction) -> "QSeries":
        s = QSeries.zero(denom, order)
        if s.order_key > 0:
            s.nums[0] = 1
        return s

    @staticmethod
    def from_terms(denom: int, order: Fraction, terms: dict[Fraction, Fraction]) -> "QSeries":
        order_key = _key(order, denom)
        scale = 1
        for c in terms.values():
            c = Fraction(c)
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
        nums: dict[int, int] = {}
        for e, c in terms.items():
            e, c = Fraction(e), Fraction(c)
            if c == 0:
                continue
            k = e * denom
            if k.denominator != 1:
                raise ValueError(f"exponent {e} is not on the grid 1/{denom}")
            if int(k) < order_key:
                nums[int(k)] = int(c * scale)
        return QSeries(denom, order_key, scale, nums)._normalized()

    # -- views --------------------------------------------------------------

    @property
    def order(self) -> Fraction:
        return Fraction(self.order_key, self.denom)

    def coeff(self, e) -> Fraction:
        k = Fraction(e) * self.denom
        if k.denominator != 1:
            return Fraction(0)
        return Fraction(self.nums.get(int(k), 0), self.scale)

    def terms(self) -> dict[Fraction, Fraction]:
        return {
            Fraction(k, self.denom): Fraction(v, self.scale)
            for k, v in sorted(self.nums.items())
        }

    def leading(self) -> tuple[Fraction, Fraction] | None:
        """(exponent, coefficient) of the lowest term, or None if zero."""
        if not self.nums:
            return None
        k = min(self.nums)
        return Fraction(k, self.denom), Fraction(self.nums[k], self.scale)

    def is_zero(self) -> bool:
        return not self.nums

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.terms() == other.terms()

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.terms().items()))))

    def __repr__(self) -> str:
        parts = [f"{c}*q^{e}" for e, c in list(self.terms().items())[:6]]
        if len(self.nums) > 6:
            parts.append("...")
        body = " + ".join(parts) if parts else "0"
        return f"QSeries({body}; order {self.order})"

    # -- arithmetic ---------------------------------------------------------

    def _normalized(self) -> "QSeries":
        nums = {k: v for k, v in self.nums.items() if v != 0}
        if not nums:
            return QSeries(self.denom, self.order_key, 1, {})
        g = self.scale
        for v in nums.values():
            g = math.gcd(g, v)
            if g == 1:
                break
        if g > 1:
            nums = {k: v // g for k, v in nums.items()}
            return QSeries(self.denom, self.order_key, self.scale // g, nums)
        return QSeries(self.denom, self.order_key, self.scale, nums)

    def rescale(self, denom: int) -> "QSeries":
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise ValueError("new grid must refine the old one")
        f = denom // self.denom
        return QSeries(denom, self.order_key * f, self.scale,
                       {k * f: v for k, v in self.nums.items()})

    def truncate(self, order: Fraction) -> "QSeries":
        key = _key(order, self.denom)
        if key > self.order_key:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.denom, key, self.scale,
                       {k: v for k, v in self.nums.items() if k < key})._normalized()

    def __add__(self, other: "QSeries") -> "QSeries":
        a, b = _align(self, other)
        order_key = min(a.order_key, b.order_key)
        scale = a.scale * b.scale // math.gcd(a.scale, b.scale)
        fa, fb = scale // a.scale, scale // b.scale
        nums = {k: v * fa for k, v in a.nums.items() if k < order_key}
        for k, v in b.nums.items():
            if k < order_key:
                nums[k] = nums.get(k, 0) + v * fb
        return QSeries(a.denom, order_key, scale, nums)._normalized()

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scaled(-1)

    def scaled(self, c) -> "QSeries":
        c = Fraction(c)
        if c == 0:
            return QSeries(self.denom, self.order_key, 1, {})
        nums = {k: v * c.numerator for k, v in self.nums.items()}
        return QSeries(self.denom, self.order_key, self.scale * c.denominator, nums)._normalized()

    def __mul__(self, other: "QSeries") -> "QSeries":
        a, b = _align(self, other)
        if a.nums and min(a.nums) < 0 or b.nums and min(b.nums) < 0:
            raise ValueError("truncated products require nonnegative exponents")
        order_key = min(a.order_key, b.order_key)
        out = [0] * order_key
        bi = sorted((k, v) for k, v in b.nums.items() if k < order_key)
        for k1, v1 in a.nums.items():
            if k1 >= order_key:
                continue
            lim = order_key - k1
            for k2, v2 in bi:
                if k2 >= lim:
                    break
                out[k1 + k2] += v1 * v2
        nums = {k: v for k, v in enumerate(out) if v}
        return QSeries(a.denom, order_key, a.scale * b.scale, nums)._normalized()

    def shifted(self, e) -> "QSeries":
        """Multiply by q^e; the truncation order moves with the terms."""
        e = Fraction(e)
        k = e * self.denom
        if k.denominator != 1:
            denom = self.denom * k.denominator
            return self.rescale(denom).shifted(e)
        k = int(k)
        return QSeries(self.denom, self.order_key + k, self.scale,
                       {kk + k: v for kk, v in self.nums.items()})


def _key(order, denom: int) -> int:
    k = Fraction(order) * denom
    if k.denominator != 1:
        raise ValueError(f"order {order} is not on the grid 1/{denom}")
    return int(k)


def _align(a: QSeries, b: QSeries) -> tuple[QSeries, QSeries]:
    if a.denom == b.denom:
        return a, b
    denom = a.denom * b.denom // math.gcd(a.denom, b.denom)
    return a.rescale(denom), b.rescale(denom)


# ---------------------------------------------------------------------------
# Euler-type inverse products
# ---------------------------------------------------------------------------

def series_denominator(L: EvenLattice) -> int:
    """Exponent grid for the lattice: lcm(16, 2*det) holds every weight offset."""
    return 16 * (2 * L.det) // math.gcd(16, 2 * L.det)


@lru_cache(maxsize=None)
def euler_product_inv(
    d: int,
    order: Fraction,
    denom: int,
    alternating: bool = False,
    half_integer: bool = False,
) -> QSeries:
    """Inverse product over n >= 1 of (1 -+ q^e)^d with e = n or n - 1/2.

    alternating=False gives (1 - q^e)^(-d); alternating=True gives
    (1 + q^e)^(-d).  Each factor is expanded through the closed form
    (1 - s q^e)^(-d) = sum_m binom(m+d-1, d-1) s^m q^(m e).
    """
    if d < 0:
        raise ValueError("exponent must be nonnegative")
    order = Fraction(order)
    result = QSeries.one(denom, order)
    if d == 0:
        return result
    sign = -1 if alternating else 1
    n = 1
    while True:
        e = Fraction(2 * n - 1, 2) if half_integer else Fraction(n)
        if e >= order:
            break
        terms = {Fraction(0): Fraction(1)}
        m = 1
        while m * e < order:
            terms[m * e] = Fraction(math.comb(m + d - 1, d - 1) * sign**m)
            m += 1
        result = result * QSeries.from_terms(denom, order, terms)
        n += 1
    return result


# ---------------------------------------------------------------------------
# theta series and characters
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def theta_coset(L: EvenLattice, lam: CosetElement, order: Fraction, denom: int | None = None) -> QSeries:
    """Sum of q^((v,v)/2) over coset vectors with (v,v)/2 strictly below order."""
    order = Fraction(order)
    denom = denom or series_denominator(L)
    terms: dict[Fraction, Fraction] = {}
    if order > 0:
        for _, n in enumerate_coset_with_norms(L, lam.rep, 2 * order):
            e = n / 2
            if e < order:
                terms[e] = terms.get(e, Fraction(0)) + 1
    return QSeries.from_terms(denom, order, terms)


@lru_cache(maxsize=None)
def character(L: EvenLattice, m: ModuleLabel, order: Fraction) -> QSeries:
    """Graded dimension of the labelled irreducible, exact to the given order.

    Vacuum sectors: (theta_L - 1)/(2 phi^d) + (phi^(-d) +- psi^(-d))/2,
    where phi^(-d) and psi^(-d) are the plain and sign-alternating
    inverse Euler products.  Non-self-paired cosets contribute their
    full theta over phi^d, self-paired cosets half of it per sign, and
    twisted sectors dim(T) q^(d/16) times the half-integer products.
    """
    order = Fraction(order)
    denom = series_denominator(L)
    d = L.rank
    phi_inv = euler_product_inv(d, order, denom)
    if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
        psi_inv = euler_product_inv(d, order, denom, alternating=True)
        th = theta_coset(L, zero_coset(L), order, denom)
        th_minus_1 = th - QSeries.one(denom, order)
        sign = 1 if m.kind == LabelKind.VAC_PLUS else -1
        return (th_minus_1 * phi_inv).scaled(Fraction(1, 2)) + (
            phi_inv + psi_inv.scaled(sign)
        ).scaled(Fraction(1, 2))
    if m.kind == LabelKind.UNTWISTED:
        return theta_coset(L, m.coset, order, denom) * phi_inv
    if m.kind == LabelKind.COSET:
        return (theta_coset(L, m.coset, order, denom) * phi_inv).scaled(Fraction(1, 2))
    # twisted: build at a shifted order so the final truncation is exact
    shift = Fraction(d, 16)
    inner = order - shift
    if inner <= 0:
        return QSeries.zero(denom, order)
    halves_minus = euler_product_inv(d, inner, denom, half_integer=True)
    halves_plus = euler_product_inv(d, inner, denom, alternating=True, half_integer=True)
    sign = 1 if m.sign == 1 else -1
    combo = (halves_minus + halves_plus.scaled(sign)).scaled(Fraction(m.char.dim_t, 2))
    return combo.shifted(shift)


def full_lattice_character(L: EvenLattice, order: Fraction) -> QSeries:
    """Graded dimension of the whole untwisted algebra: theta_L / phi^d."""
    denom = series_denominator(L)
    return theta_coset(L, zero_coset(L), order, denom) * euler_product_inv(
        L.rank, Fraction(order), denom
    )
