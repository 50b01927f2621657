"""Decompositions over smaller fixed-point subalgebras.

Two routes: over the tensor product of the rank-one subalgebras of an
orthogonal base (diagonal Gram only), and over the fixed-point algebra
of a full-rank sublattice.  Every decomposition is verified by an exact
character identity, which is the normative check: for a nonzero
self-paired coset the two signed modules have equal characters, so the
sign chosen for such a part is reported as convention-dependent
metadata, computed from the involution coefficient on the canonical
lowest-weight vector.

Twisted parents over a sublattice branch into abstract placeholders
carrying only sign and multiplicity; the census of the finer twisted
characters is not pinned down by the branching data, but the dimension
bookkeeping (and hence the character identity) is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .intmat import det_int, rational_inverse
from .lattice import (
    Convention,
    CosetElement,
    EvenLattice,
    NotFullRank,
    NotOrthogonalBase,
    coset_element,
    coset_is_trivial,
    coset_neg,
    coset_reps_mod_sublattice,
    coset_two_torsion,
    epsilon_cocycle,
    mod_two_data,
    sublattice_as_lattice,
    validate_even_lattice,
)
from .qseries import QSeries, character, euler_product_inv, series_denominator
from .sectors import (
    LabelKind,
    ModuleLabel,
    VAC_MINUS,
    VAC_PLUS,
    central_characters,
    coset_label,
    twisted_label,
    untwisted_label,
)


@dataclass(frozen=True)
class SubmodulePart:
    """One irreducible over the sublattice fixed-point algebra."""

    label: ModuleLabel


@dataclass(frozen=True)
class TensorPart:
    """One tensor product of rank-one labels over the orthogonal factors."""

    labels: tuple[ModuleLabel, ...]


@dataclass(frozen=True)
class TwistedBlockPart:
    """Abstract twisted summands: only sign and total multiplicity are known."""

    sign: int
    multiplicity: int


BranchPart = SubmodulePart | TensorPart | TwistedBlockPart


@dataclass(frozen=True)
class BranchList:
    parent_lattice: EvenLattice
    parent: ModuleLabel
    route: str  # "orthogonal" | "sublattice"
    parts: tuple[BranchPart, ...]
    sublattice: EvenLattice | None = None
    basis: tuple[tuple[int, ...], ...] | None = None
    factors: tuple[EvenLattice, ...] | None = None
    notes: tuple[str, ...] = ()


def part_is_twisted(p: BranchPart) -> bool:
    if isinstance(p, TwistedBlockPart):
        return True
    if isinstance(p, SubmodulePart):
        return p.label.kind == LabelKind.TWISTED
    return any(l.kind == LabelKind.TWISTED for l in p.labels)


# ---------------------------------------------------------------------------
# orthogonal base route
# ---------------------------------------------------------------------------

def _sign_vectors(d: int, parity: int):
    """All sign tuples in {+1,-1}^d whose count of -1 entries has the parity."""
    for combo in product((1, -1), repeat=d):
        if sum(1 for s in combo if s == -1) % 2 == parity:
            yield combo


def _rank1_vacuum(sign: int) -> ModuleLabel:
    return VAC_PLUS if sign == 1 else VAC_MINUS


def branch_orthogonal(L: EvenLattice, m: ModuleLabel) -> BranchList:
    """Decompose over the tensor product of the rank-one fixed-point algebras.

    Requires a diagonal Gram matrix.  Vacuum and self-paired-coset
    parents spread over the sign vectors of matching parity; an orbit
    parent is the single product of its coordinate cosets, with every
    split factor expanded; twisted parents factor through the coordinate
    characters with matching sign parity.
    """
    if not L.is_diagonal():
        raise NotOrthogonalBase("orthogonal branching needs a diagonal Gram matrix")
    d = L.rank
    factors = tuple(validate_even_lattice([[L.gram[i][i]]]) for i in range(d))
    parts: list[BranchPart] = []
    if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
        parity = 0 if m.kind == LabelKind.VAC_PLUS else 1
        for combo in _sign_vectors(d, parity):
            parts.append(TensorPart(tuple(_rank1_vacuum(s) for s in combo)))
    elif m.kind == LabelKind.UNTWISTED:
        options = []
        for i in range(d):
            c = coset_element(factors[i], (m.coset.rep[i],))
            if coset_is_trivial(c):
                options.append((VAC_PLUS, VAC_MINUS))
            elif coset_two_torsion(factors[i], c):
                options.append(
                    (coset_label(factors[i], c, +1), coset_label(factors[i], c, -1))
                )
            else:
                options.append((untwisted_label(factors[i], c),))
        for combo in product(*options):
            parts.append(TensorPart(tuple(combo)))
    elif m.kind == LabelKind.COSET:
        options = []
        for i in range(d):
            c = coset_element(factors[i], (m.coset.rep[i],))
            if coset_is_trivial(c):
                options.append({1: VAC_PLUS, -1: VAC_MINUS})
            else:
                options.append(
                    {1: coset_label(factors[i], c, +1), -1: coset_label(factors[i], c, -1)}
                )
        parity = 0 if m.sign == 1 else 1
        for combo in _sign_vectors(d, parity):
            parts.append(TensorPart(tuple(opt[s] for opt, s in zip(options, combo))))
    else:
        radical = mod_two_data(L).radical_basis
        std = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
        if radical != std:
            raise AssertionError("diagonal lattice must have the standard radical basis")
        factor_chars = []
        for i in range(d):
            chars = central_characters(factors[i])
            factor_chars.append(chars[0] if m.char.values[i] == 1 else chars[1])
        parity = 0 if m.sign == 1 else 1
        for combo in _sign_vectors(d, parity):
            parts.append(
                TensorPart(
                    tuple(twisted_label(ch, s) for ch, s in zip(factor_chars, combo))
                )
            )
    return BranchList(
        parent_lattice=L, parent=m, route="orthogonal", parts=tuple(parts), factors=factors
    )


# ---------------------------------------------------------------------------
# sublattice route
# ---------------------------------------------------------------------------

def _root_unit(eps_value: int, branch: int, is_zero: bool) -> int:
    """Square root of a cocycle value as a power of i (0..3); identity at zero."""
    if is_zero:
        return 0
    if eps_value == 1:
        return 0 if branch == 1 else 2
    return 1 if branch == 1 else 3


def branch_sublattice(
    L: EvenLattice,
    basis: tuple[tuple[int, ...], ...],
    m: ModuleLabel,
    convention: Convention = Convention(),
) -> BranchList:
    """Decompose over the fixed-point algebra of a full-rank sublattice.

    Self-paired classes contribute a single signed module whose sign is
    the parent sign times the ratio of the parent and local involution
    coefficients on the canonical lowest-weight vector; when that ratio
    is imaginary the positive label is reported and flagged in notes.
    Paired classes contribute one orbit module per pair; twisted parents
    contribute placeholder blocks.
    """
    d = L.rank
    if len(basis) != d:
        raise NotFullRank("sublattice basis must have full rank")
    cols = [[basis[j][i] for j in range(d)] for i in range(d)]
    if det_int(cols) == 0:
        raise NotFullRank("sublattice basis must have full rank")
    sub = sublattice_as_lattice(L, basis)
    sinv = rational_inverse(cols)
    gammas = coset_reps_mod_sublattice(L, basis)
    eps_l = epsilon_cocycle(L, convention)
    eps_1 = epsilon_cocycle(sub, convention)
    notes: list[str] = []

    def to_sub(vec) -> tuple[Fraction, ...]:
        return tuple(
            sum(sinv[r][s] * Fraction(vec[s]) for s in range(d)) for r in range(d)
        )

    def to_parent(vec_sub) -> tuple[Fraction, ...]:
        return tuple(
            sum(Fraction(cols[r][s]) * Fraction(vec_sub[s]) for s in range(d))
            for r in range(d)
        )

    def exact_int(x) -> int:
        f = Fraction(x)
        if f.denominator != 1:
            raise AssertionError(f"expected an integer coordinate, got {f}")
        return f.numerator

    def local_unit(c: CosetElement) -> int:
        two_mu = tuple(exact_int(2 * x) for x in c.rep)
        zero = all(x == 0 for x in two_mu)
        return _root_unit(eps_1(two_mu, two_mu), convention.root_branch, zero)

    def signed_part(parent_sign: int, c: CosetElement, parent_coset) -> SubmodulePart:
        # involution coefficient of the parent module on the canonical
        # vector of the class, divided by the local one
        mu_parent = to_parent(c.rep)
        if parent_coset is None:
            unit_g = 0
        else:
            two_lam = tuple(exact_int(2 * x) for x in parent_coset.rep)
            zero = all(x == 0 for x in two_lam)
            x_vec = tuple(exact_int(a - b) for a, b in zip(mu_parent, parent_coset.rep))
            unit_g = _root_unit(eps_l(two_lam, two_lam), convention.root_branch, zero)
            if not zero and eps_l(x_vec, two_lam) == -1:
                unit_g = (unit_g + 2) % 4
        ratio = (unit_g - local_unit(c)) % 4
        if ratio % 2 == 1:
            notes.append(f"imaginary involution ratio on class {c.rep}; reported +")
            sigma = parent_sign
        else:
            sigma = parent_sign * (1 if ratio == 0 else -1)
        if coset_is_trivial(c):
            return SubmodulePart(VAC_PLUS if sigma == 1 else VAC_MINUS)
        return SubmodulePart(coset_label(sub, c, sigma))

    parts: list[BranchPart] = []
    if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS, LabelKind.COSET):
        parent_sign = 1 if m.kind == LabelKind.VAC_PLUS else (-1 if m.kind == LabelKind.VAC_MINUS else m.sign)
        parent_coset = m.coset if m.kind == LabelKind.COSET else None
        shift = parent_coset.rep if parent_coset else tuple(Fraction(0) for _ in range(d))
        seen = set()
        for g in gammas:
            vec = tuple(Fraction(x) + s for x, s in zip(g, shift))
            c = coset_element(sub, to_sub(vec))
            if c in seen:
                continue
            if coset_two_torsion(sub, c):
                seen.add(c)
                parts.append(signed_part(parent_sign, c, parent_coset))
            else:
                partner = coset_neg(sub, c)
                seen.add(c)
                seen.add(partner)
                parts.append(SubmodulePart(untwisted_label(sub, c)))
    elif m.kind == LabelKind.UNTWISTED:
        for g in gammas:
            vec = tuple(Fraction(x) + s for x, s in zip(g, m.coset.rep))
            c = coset_element(sub, to_sub(vec))
            if coset_two_torsion(sub, c):
                raise AssertionError("orbit parent cannot meet a self-paired class")
            parts.append(SubmodulePart(untwisted_label(sub, c)))
    else:
        sub_dim_t = central_characters(sub)[0].dim_t
        mult, rem = divmod(m.char.dim_t, sub_dim_t)
        if rem:
            raise AssertionError("twisted dimensions must refine")
        parts.append(TwistedBlockPart(sign=m.sign, multiplicity=mult))
    return BranchList(
        parent_lattice=L,
        parent=m,
        route="sublattice",
        parts=tuple(parts),
        sublattice=sub,
        basis=tuple(tuple(b) for b in basis),
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

def part_character(bl: BranchList, p: BranchPart, order: Fraction) -> QSeries:
    order = Fraction(order)
    if isinstance(p, SubmodulePart):
        return character(bl.sublattice, p.label, order)
    if isinstance(p, TensorPart):
        out = None
        for lat1, lab in zip(bl.factors, p.labels):
            ch = character(lat1, lab, order)
            out = ch if out is None else out * ch
        return out
    chi0 = central_characters(bl.sublattice)[0]
    single = character(bl.sublattice, twisted_label(chi0, p.sign), order)
    return single.scaled(p.multiplicity)


def verify_branch(bl: BranchList, order) -> bool:
    """Exact character identity: parent equals the sum of the parts."""
    order = Fraction(order)
    parent = character(bl.parent_lattice, bl.parent, order)
    denom = series_denominator(bl.parent_lattice)
    total = QSeries.zero(denom, order)
    for p in bl.parts:
        total = total + part_character(bl, p, order)
    common = min(parent.order, total.order)
    return parent.truncate(common) == total.truncate(common)


# ---------------------------------------------------------------------------
# rank-one free-field assembly
# ---------------------------------------------------------------------------

def rank1_m1_branch(k: int, m: ModuleLabel, order) -> QSeries:
    """Character assembled from the rank-one free-field module list.

    Vacuum signs: invariant/anti-invariant free-field pieces plus one
    full momentum module per positive multiple of the generator; coset
    labels: half of the coset momenta; twisted labels: the half-integer
    modes.  Must reproduce the direct character.
    """
    order = Fraction(order)
    L = validate_even_lattice([[2 * k]])
    denom = series_denominator(L)
    phi_inv = euler_product_inv(1, order, denom)
    if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
        psi_inv = euler_product_inv(1, order, denom, alternating=True)
        sign = 1 if m.kind == LabelKind.VAC_PLUS else -1
        total = (phi_inv + psi_inv.scaled(sign)).scaled(Fraction(1, 2))
        mm = 1
        while Fraction(k) * mm * mm < order:
            total = total + phi_inv.shifted(Fraction(k) * mm * mm).truncate(order)
            mm += 1
        return total
    if m.kind == LabelKind.UNTWISTED:
        total = QSeries.zero(denom, order)
        from .lattice import enumerate_coset_with_norms

        for _, n in enumerate_coset_with_norms(L, m.coset.rep, 2 * order):
            e = Fraction(n) / 2
            if e < order:
                total = total + phi_inv.shifted(e).truncate(order)
        return total
    if m.kind == LabelKind.COSET:
        total = QSeries.zero(denom, order)
        mm = 0
        while True:
            e = Fraction(k) * (Fraction(1, 2) + mm) ** 2
            if e >= order:
                break
            total = total + phi_inv.shifted(e).truncate(order)
            mm += 1
        return total
    inner = order - Fraction(1, 16)
    if inner <= 0:
        return QSeries.zero(denom, order)
    h_minus = euler_product_inv(1, inner, denom, half_integer=True)
    h_plus = euler_product_inv(1, inner, denom, alternating=True, half_integer=True)
    sign = 1 if m.sign == 1 else -1
    return (h_minus + h_plus.scaled(sign)).scaled(Fraction(1, 2)).shifted(Fraction(1, 16))
