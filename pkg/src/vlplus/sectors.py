"""Census of the irreducible modules of the fixed-point algebra.

Labels: the two vacuum sectors, one label per negation orbit of
non-self-paired dual cosets, a signed pair per nonzero self-paired
coset, and a signed pair per central character of the twisted finite
group.  Each label carries its lowest weight, top-level dimension and
contragredient; the block dimensions of the associated finite
semisimple algebra are recovered from the same data.

Twisted sectors are parameterized by characters of the radical of the
mod-2 bilinear form (values on a fixed radical basis), with a common
top-level dimension 2^((d - r2)/2).  This is the unique assignment
making the twisted block a 2^d-dimensional sum of matrix algebras and
reduces to the familiar one-dimensional picture when every pairing is
even.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache

from .lattice import (
    CosetElement,
    EvenLattice,
    coset_element,
    coset_neg,
    coset_two_torsion,
    coset_is_trivial,
    delta_set,
    minimal_coset_reps,
    mod_two_data,
    norm2_vectors,
)


class LabelKind(IntEnum):
    VAC_PLUS = 0
    VAC_MINUS = 1
    UNTWISTED = 2
    COSET = 3
    TWISTED = 4


@dataclass(frozen=True)
class CentralCharacter:
    """Sign character on the radical basis of the mod-2 form; chi(kappa) = -1 implicit."""

    values: tuple[int, ...]  # +-1 per radical basis vector
    dim_t: int

    @property
    def index(self) -> int:
        idx = 0
        for i, v in enumerate(self.values):
            if v == -1:
                idx |= 1 << i
        return idx


@dataclass(frozen=True)
class ModuleLabel:
    kind: LabelKind
    coset: CosetElement | None = None
    sign: int | None = None  # +-1 for COSET / TWISTED
    char: CentralCharacter | None = None

    def sort_key(self):
        if self.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
            return (int(self.kind),)
        if self.kind == LabelKind.UNTWISTED:
            return (int(self.kind), *self.coset.sort_key())
        if self.kind == LabelKind.COSET:
            return (int(self.kind), *self.coset.sort_key(), 0 if self.sign == 1 else 1)
        return (int(self.kind), self.char.index, 0 if self.sign == 1 else 1)

    def __str__(self) -> str:
        return format_label(self)


VAC_PLUS = ModuleLabel(LabelKind.VAC_PLUS)
VAC_MINUS = ModuleLabel(LabelKind.VAC_MINUS)


def untwisted_label(L: EvenLattice, c: CosetElement) -> ModuleLabel:
    """Label for a non-self-paired coset; stores the smaller orbit representative."""
    neg = coset_neg(L, c)
    rep = min(c, neg, key=CosetElement.sort_key)
    return ModuleLabel(LabelKind.UNTWISTED, coset=rep)


def coset_label(L: EvenLattice, c: CosetElement, sign: int) -> ModuleLabel:
    return ModuleLabel(LabelKind.COSET, coset=c, sign=sign)


def twisted_label(char: CentralCharacter, sign: int) -> ModuleLabel:
    return ModuleLabel(LabelKind.TWISTED, char=char, sign=sign)


@lru_cache(maxsize=None)
def central_characters(L: EvenLattice) -> tuple[CentralCharacter, ...]:
    """All central characters, ordered by their sign-bit index."""
    m = mod_two_data(L)
    dim_t = 1 << ((L.rank - m.r2) // 2)
    chars = []
    for idx in range(1 << m.r2):
        values = tuple(-1 if (idx >> i) & 1 else 1 for i in range(m.r2))
        chars.append(CentralCharacter(values=values, dim_t=dim_t))
    return tuple(chars)


def shift_character(L: EvenLattice, chi: CentralCharacter, lam) -> CentralCharacter:
    """Twist by a dual vector: multiply each value by (-1)^(r_i, lam)."""
    m = mod_two_data(L)
    new_vals = []
    for r, v in zip(m.radical_basis, chi.values):
        pair = L.pairing(r, lam)
        if Fraction(pair).denominator != 1:
            raise ValueError("character shift requires a dual vector")
        new_vals.append(v * (-1 if int(pair) % 2 else 1))
    return CentralCharacter(values=tuple(new_vals), dim_t=chi.dim_t)


def prime_character(L: EvenLattice, chi: CentralCharacter) -> CentralCharacter:
    """Contragredient twist: multiply each value by (-1)^((r_i, r_i)/2)."""
    m = mod_two_data(L)
    new_vals = tuple(
        v * (-1 if m.q(r) else 1) for r, v in zip(m.radical_basis, chi.values)
    )
    return CentralCharacter(values=new_vals, dim_t=chi.dim_t)


@lru_cache(maxsize=None)
def classify_modules(L: EvenLattice) -> tuple[ModuleLabel, ...]:
    """Complete duplicate-free list of irreducible-module labels, canonically ordered."""
    labels = [VAC_PLUS, VAC_MINUS]
    seen_orbits = set()
    for c in minimal_coset_reps(L):
        if coset_is_trivial(c):
            continue
        if coset_two_torsion(L, c):
            labels.append(coset_label(L, c, +1))
            labels.append(coset_label(L, c, -1))
        else:
            lab = untwisted_label(L, c)
            if lab.coset not in seen_orbits:
                seen_orbits.add(lab.coset)
                labels.append(lab)
    for chi in central_characters(L):
        labels.append(twisted_label(chi, +1))
        labels.append(twisted_label(chi, -1))
    return tuple(sorted(labels, key=ModuleLabel.sort_key))


def lowest_weight(L: EvenLattice, m: ModuleLabel) -> Fraction:
    """Exact lowest conformal weight of the labelled module."""
    if m.kind == LabelKind.VAC_PLUS:
        return Fraction(0)
    if m.kind == LabelKind.VAC_MINUS:
        return Fraction(1)
    if m.kind in (LabelKind.UNTWISTED, LabelKind.COSET):
        return m.coset.min_norm / 2
    d = L.rank
    if m.sign == 1:
        return Fraction(d, 16)
    return Fraction(d + 8, 16)


def top_level_dimension(L: EvenLattice, m: ModuleLabel) -> int:
    """Dimension of the lowest-weight space."""
    if m.kind == LabelKind.VAC_PLUS:
        return 1
    if m.kind == LabelKind.VAC_MINUS:
        return L.rank + len(norm2_vectors(L)) // 2
    if m.kind == LabelKind.UNTWISTED:
        return len(delta_set(L, m.coset))
    if m.kind == LabelKind.COSET:
        # the involution a -> -2*lam - a on the delta set is fixed-point free
        # for lam outside the lattice, so each sign receives half
        return len(delta_set(L, m.coset)) // 2
    if m.sign == 1:
        return m.char.dim_t
    return L.rank * m.char.dim_t


def contragredient(L: EvenLattice, m: ModuleLabel) -> ModuleLabel:
    """Dual module label; an involution on the census."""
    if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS, LabelKind.UNTWISTED):
        return m
    if m.kind == LabelKind.COSET:
        doubled = 2 * m.coset.min_norm
        if doubled.denominator != 1:
            raise AssertionError("self-paired coset must have half-integral norm")
        if int(doubled) % 2 == 0:
            return m
        return coset_label(L, m.coset, -m.sign)
    return twisted_label(prime_character(L, m.char), m.sign)


@dataclass(frozen=True)
class ZhuBlockReport:
    dim_au: int
    dim_at: int
    dim_ah: int
    total_semisimple_dim: int


def zhu_block_report(L: EvenLattice) -> ZhuBlockReport:
    """Block dimensions of the finite semisimple algebra attached to the census."""
    d = L.rank
    dim_au = top_level_dimension(L, VAC_MINUS) ** 2
    dim_at = d * d * (1 << d)
    dim_ah = 1 << d
    total = sum(top_level_dimension(L, m) ** 2 for m in classify_modules(L))
    return ZhuBlockReport(dim_au, dim_at, dim_ah, total)


# ---------------------------------------------------------------------------
# stable label grammar: V+ | V- | U[...] | C[...]+- | T[i]+-
# ---------------------------------------------------------------------------

def format_label(m: ModuleLabel) -> str:
    if m.kind == LabelKind.VAC_PLUS:
        return "V+"
    if m.kind == LabelKind.VAC_MINUS:
        return "V-"
    if m.kind == LabelKind.UNTWISTED:
        return f"U[{_coords_str(m.coset.rep)}]"
    if m.kind == LabelKind.COSET:
        return f"C[{_coords_str(m.coset.rep)}]{_sign_str(m.sign)}"
    return f"T[{m.char.index}]{_sign_str(m.sign)}"


def parse_label(L: EvenLattice, text: str) -> ModuleLabel:
    """Parse a label string; accepts VacPlus/VacMinus as spelled-out aliases."""
    text = text.strip()
    aliases = {"VacPlus": "V+", "VacMinus": "V-"}
    text = aliases.get(text, text)
    if text == "V+":
        return VAC_PLUS
    if text == "V-":
        return VAC_MINUS
    kind = text[:1]
    if kind in ("U", "C") and text[1:2] == "[":
        close = text.index("]")
        coords = tuple(Fraction(p) for p in text[2:close].split(","))
        if len(coords) != L.rank:
            raise ValueError(f"label has {len(coords)} coordinates, lattice rank is {L.rank}")
        c = coset_element(L, coords)
        if kind == "U":
            if text[close + 1:]:
                raise ValueError("untwisted labels carry no sign")
            if coset_two_torsion(L, c):
                raise ValueError("coset is self-paired; use a signed C label")
            return untwisted_label(L, c)
        sign = _parse_sign(text[close + 1:])
        if not coset_two_torsion(L, c) or coset_is_trivial(c):
            raise ValueError("C labels require a nonzero self-paired coset")
        return coset_label(L, c, sign)
    if kind == "T" and text[1:2] == "[":
        close = text.index("]")
        idx = int(text[2:close])
        chars = central_characters(L)
        if not 0 <= idx < len(chars):
            raise ValueError(f"character index {idx} out of range (have {len(chars)})")
        return twisted_label(chars[idx], _parse_sign(text[close + 1:]))
    raise ValueError(f"unrecognized module label {text!r}")


def _parse_sign(s: str) -> int:
    if s == "+":
        return 1
    if s == "-":
        return -1
    raise ValueError(f"expected sign suffix, got {s!r}")


def _sign_str(sign: int) -> str:
    return "+" if sign == 1 else "-"


def _coords_str(coords) -> str:
    return ",".join(str(c) for c in coords)
