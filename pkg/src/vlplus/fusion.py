"""Fusion-dimension queries.

Answers are Zero, One or Unknown; every fusion dimension here is 0 or
1, and Unknown only ever arises from the two sign refinements (the
pairing sign on self-paired coset pairs and the twisted-sector sign)
that live behind a pluggable oracle.  Without an oracle those queries
stay Unknown; an oracle can only refine Unknown, never flip a decided
answer.

Argument order: fusion_dim(L, m1, m2, m3) is the dimension of the space
of intertwiners taking m1 x m2 into m3.  The first argument must be of
untwisted type; the complete rank-one table with a vacuum first
argument is available separately as rank1_fusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .lattice import CosetElement, EvenLattice, zero_coset
from .sectors import (
    CentralCharacter,
    LabelKind,
    ModuleLabel,
    shift_character,
)


@dataclass(frozen=True)
class FusionAnswer:
    value: str  # "zero" | "one" | "unknown"
    reason: str = ""

    def __bool__(self) -> bool:
        raise TypeError("FusionAnswer is three-valued; compare explicitly")


ZERO = FusionAnswer("zero")
ONE = FusionAnswer("one")


def unknown(reason: str) -> FusionAnswer:
    return FusionAnswer("unknown", reason)


@dataclass(frozen=True)
class SignOracle:
    """Optional refinement data for the two sign-dependent fusion rows.

    pi(lam, two_mu) resolves the coset-pair sign; c(chi, lam) the
    twisted-pair sign.  Either callable may be None, and a callable may
    itself return None to decline a particular query; both cases leave
    the query Unknown.
    """

    pi: Optional[Callable[[tuple, tuple], int | None]] = None
    c: Optional[Callable[[CentralCharacter, tuple], int | None]] = None


NO_ORACLE = SignOracle()


class UnsupportedRow(ValueError):
    pass


class UnsupportedFirstArgument(ValueError):
    pass


def admissible_triple(
    L: EvenLattice, lam: CosetElement, mu: CosetElement, nu: CosetElement
) -> bool:
    """True iff some sign combination of the three cosets lands in the lattice."""
    lam_r, mu_r, nu_r = lam.rep, mu.rep, nu.rep
    for q in (1, -1):
        for r in (1, -1):
            vec = tuple(a + q * b + r * c for a, b, c in zip(lam_r, mu_r, nu_r))
            if all(Fraction(x).denominator == 1 for x in vec):
                return True
    return False


def tensor_fusion(answers) -> FusionAnswer:
    """Factorwise fusion for a tensor product: zero absorbs, unknown propagates."""
    result = ONE
    for a in answers:
        if a.value == "zero":
            return ZERO
        if a.value == "unknown":
            result = a
    return result


# ---------------------------------------------------------------------------
# complete rank-one table (vacuum rows)
# ---------------------------------------------------------------------------

def rank1_fusion(k: int, w1: ModuleLabel, w2: ModuleLabel, w3: ModuleLabel) -> FusionAnswer:
    """Fusion dimension for the rank-one lattice with norm 2k, vacuum first slot.

    The first row is the unit law; the minus row is the exhaustive
    involution pairing: vacuum signs swap, half-coset signs swap,
    twisted signs swap within a fixed character, and each strictly
    intermediate coset pairs with itself.
    """
    if k < 1:
        raise ValueError("rank-one lattice needs a positive norm 2k")
    if w1.kind == LabelKind.VAC_PLUS:
        return ONE if w2 == w3 else ZERO
    if w1.kind != LabelKind.VAC_MINUS:
        raise UnsupportedRow(
            "only the vacuum rows of the rank-one table are completely specified"
        )
    if w2.kind == LabelKind.VAC_PLUS and w3.kind == LabelKind.VAC_MINUS:
        return ONE
    if w2.kind == LabelKind.VAC_MINUS and w3.kind == LabelKind.VAC_PLUS:
        return ONE
    if w2.kind == LabelKind.COSET and w3.kind == LabelKind.COSET:
        return ONE if (w2.coset == w3.coset and w2.sign != w3.sign) else ZERO
    if w2.kind == LabelKind.TWISTED and w3.kind == LabelKind.TWISTED:
        return ONE if (w2.char == w3.char and w2.sign != w3.sign) else ZERO
    if w2.kind == LabelKind.UNTWISTED and w3.kind == LabelKind.UNTWISTED:
        return ONE if w2 == w3 else ZERO
    return ZERO


# ---------------------------------------------------------------------------
# general lattice, untwisted first slot
# ---------------------------------------------------------------------------

def _coset_of(L: EvenLattice, m: ModuleLabel) -> CosetElement:
    if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
        return zero_coset(L)
    return m.coset


def _untwisted_sign(m: ModuleLabel) -> int:
    # vacuum and self-paired coset labels carry a sign; orbit labels do not
    if m.kind == LabelKind.VAC_PLUS:
        return 1
    if m.kind == LabelKind.VAC_MINUS:
        return -1
    return m.sign


def fusion_dim(
    L: EvenLattice,
    m1: ModuleLabel,
    m2: ModuleLabel,
    m3: ModuleLabel,
    oracle: SignOracle = NO_ORACLE,
) -> FusionAnswer:
    """Dimension of the intertwiner space taking m1 x m2 into m3.

    Implements the untwisted-first-slot case analysis: the unit law for
    the plus vacuum, the admissible-triple gate for untwisted targets,
    character-shift matching for twisted pairs, and oracle-resolved sign
    refinements.  A twisted first argument is outside the supported
    rows; queries with exactly one twisted module among the second and
    third are always Zero.
    """
    if m1.kind == LabelKind.TWISTED:
        raise UnsupportedFirstArgument(
            "fusion with a twisted first argument is not among the supported rows"
        )
    if m1.kind == LabelKind.VAC_PLUS:
        return ONE if m2 == m3 else ZERO

    t2 = m2.kind == LabelKind.TWISTED
    t3 = m3.kind == LabelKind.TWISTED
    if t2 != t3:
        return ZERO

    lam = _coset_of(L, m1)

    if t2 and t3:
        shifted = shift_character(L, m2.char, lam.rep)
        if m3.char != shifted:
            return ZERO
        if m1.kind == LabelKind.UNTWISTED:
            return ONE
        s1 = _untwisted_sign(m1)
        c = oracle.c(m2.char, lam.rep) if oracle.c is not None else None
        if c is None:
            return unknown("twisted-pair sign requires the c oracle")
        want_same = (c == 1) if s1 == 1 else (c == -1)
        return ONE if (m2.sign == m3.sign) == want_same else ZERO

    mu = _coset_of(L, m2)
    nu = _coset_of(L, m3)
    if not admissible_triple(L, lam, mu, nu):
        return ZERO
    orbit2 = m2.kind == LabelKind.UNTWISTED
    orbit3 = m3.kind == LabelKind.UNTWISTED
    if m1.kind == LabelKind.UNTWISTED:
        # self-paired pairs cannot form an admissible triple with an
        # orbit-type first slot, so every admissible case is One
        return ONE
    if orbit2 and orbit3:
        return ONE
    if orbit2 != orbit3:
        # mixed torsion cannot be admissible with a self-paired first slot
        return ZERO
    s1 = _untwisted_sign(m1)
    two_mu = tuple(2 * x for x in mu.rep)
    p = oracle.pi(lam.rep, two_mu) if oracle.pi is not None else None
    if p is None:
        return unknown("coset-pair sign requires the pi oracle")
    want_same = (p == 1) if s1 == 1 else (p == -1)
    same = _untwisted_sign(m2) == _untwisted_sign(m3)
    return ONE if same == want_same else ZERO
