from fractions import Fraction

import pytest

from conftest import A2, D22, D24, D224, lat
from vlplus.lattice import Convention, NotOrthogonalBase, orthogonal_sublattice
from vlplus.branching import (
    BranchList,
    SubmodulePart,
    TensorPart,
    TwistedBlockPart,
    branch_orthogonal,
    branch_sublattice,
    part_is_twisted,
    rank1_m1_branch,
    verify_branch,
)
from vlplus.qseries import character
from vlplus.sectors import (
    LabelKind,
    VAC_MINUS,
    VAC_PLUS,
    classify_modules,
    coset_label,
    lowest_weight,
)

F = Fraction


def tensor_signs(part: TensorPart):
    out = []
    for lab in part.labels:
        if lab.kind in (LabelKind.VAC_PLUS, LabelKind.UNTWISTED):
            out.append(1 if lab.kind == LabelKind.VAC_PLUS else 0)
        elif lab.kind == LabelKind.VAC_MINUS:
            out.append(-1)
        elif lab.kind in (LabelKind.COSET, LabelKind.TWISTED):
            out.append(lab.sign)
    return out


# ---------------------------------------------------------------------------
# orthogonal route
# ---------------------------------------------------------------------------

def test_orthogonal_requires_diagonal():
    with pytest.raises(NotOrthogonalBase):
        branch_orthogonal(lat(A2), VAC_PLUS)


def test_orthogonal_vacuum_parts_d22():
    L = lat(D22)
    plus = branch_orthogonal(L, VAC_PLUS)
    minus = branch_orthogonal(L, VAC_MINUS)
    assert {p.labels for p in plus.parts} == {
        (VAC_PLUS, VAC_PLUS),
        (VAC_MINUS, VAC_MINUS),
    }
    assert {p.labels for p in minus.parts} == {
        (VAC_PLUS, VAC_MINUS),
        (VAC_MINUS, VAC_PLUS),
    }


def test_orthogonal_orbit_parent_splits_trivial_factors():
    L = lat(D24)
    u = [
        m
        for m in classify_modules(L)
        if m.kind == LabelKind.UNTWISTED and m.coset.rep[0] == 0
    ][0]
    bl = branch_orthogonal(L, u)
    assert len(bl.parts) == 2
    kinds = {tuple(l.kind for l in p.labels) for p in bl.parts}
    assert kinds == {
        (LabelKind.VAC_PLUS, LabelKind.UNTWISTED),
        (LabelKind.VAC_MINUS, LabelKind.UNTWISTED),
    }


def test_orthogonal_sign_vector_census():
    # the plus and minus parents together use every sign vector exactly once
    for gram in (D22, D24, D224):
        L = lat(gram)
        d = L.rank
        for pair in (
            (VAC_PLUS, VAC_MINUS),
            *[
                (m, coset_label(L, m.coset, -1))
                for m in classify_modules(L)
                if m.kind == LabelKind.COSET and m.sign == 1
            ],
        ):
            seen = []
            for parent in pair:
                for p in branch_orthogonal(L, parent).parts:
                    seen.append(tuple(tensor_signs(p)))
            assert len(seen) == 2 ** d
            assert len(set(seen)) == 2 ** d


def test_orthogonal_twisted_characters_factor():
    L = lat(D224)
    tw = [m for m in classify_modules(L) if m.kind == LabelKind.TWISTED]
    for m in tw[:4]:
        bl = branch_orthogonal(L, m)
        for p in bl.parts:
            assert all(l.kind == LabelKind.TWISTED for l in p.labels)
            values = tuple(l.char.values[0] for l in p.labels)
            assert values == m.char.values


@pytest.mark.parametrize("gram,order", [(D22, F(15)), (D24, F(15))])
def test_orthogonal_branchings_verify_rank2(gram, order):
    L = lat(gram)
    for m in classify_modules(L):
        bl = branch_orthogonal(L, m)
        assert verify_branch(bl, order), str(m)


def test_orthogonal_branchings_verify_rank3():
    L = lat(D224)
    for m in classify_modules(L):
        bl = branch_orthogonal(L, m)
        assert verify_branch(bl, F(15)), str(m)


def test_orthogonal_branchings_verify_deeper_rank2():
    L = lat(D22)
    for m in classify_modules(L):
        assert verify_branch(branch_orthogonal(L, m), F(20)), str(m)


def test_corrupted_branch_fails_verification():
    L = lat(D22)
    bl = branch_orthogonal(L, VAC_PLUS)
    corrupted = BranchList(
        parent_lattice=bl.parent_lattice,
        parent=bl.parent,
        route=bl.route,
        parts=bl.parts[:-1],  # drop a summand
        factors=bl.factors,
    )
    assert not verify_branch(corrupted, F(10))
    swapped = BranchList(
        parent_lattice=bl.parent_lattice,
        parent=VAC_MINUS,  # wrong parent
        route=bl.route,
        parts=bl.parts,
        factors=bl.factors,
    )
    assert not verify_branch(swapped, F(10))


# ---------------------------------------------------------------------------
# sublattice route
# ---------------------------------------------------------------------------

def a2_sublattice():
    L = lat(A2)
    basis, _, index = orthogonal_sublattice(L)
    assert index == 2
    return L, basis


def test_sublattice_vacuum_parts_a2():
    L, basis = a2_sublattice()
    bl = branch_sublattice(L, basis, VAC_PLUS)
    assert len(bl.parts) == 2
    kinds = sorted(p.label.kind for p in bl.parts)
    assert kinds[0] in (LabelKind.VAC_PLUS,)
    assert kinds[1] == LabelKind.COSET
    assert verify_branch(bl, F(12))


def test_sublattice_vacuum_signs_complementary_a2():
    # the two parents pick opposite signs on the nonzero class
    L, basis = a2_sublattice()
    plus = branch_sublattice(L, basis, VAC_PLUS)
    minus = branch_sublattice(L, basis, VAC_MINUS)

    def coset_sign(bl):
        for p in bl.parts:
            if p.label.kind == LabelKind.COSET:
                return p.label.sign
        raise AssertionError

    assert coset_sign(plus) == -coset_sign(minus)
    zero_kinds = {
        p.label.kind for bl in (plus, minus) for p in bl.parts if p.label.kind != LabelKind.COSET
    }
    assert zero_kinds == {LabelKind.VAC_PLUS, LabelKind.VAC_MINUS}


def test_sublattice_orbit_parent_a2():
    L, basis = a2_sublattice()
    u = [m for m in classify_modules(L) if m.kind == LabelKind.UNTWISTED][0]
    bl = branch_sublattice(L, basis, u)
    assert len(bl.parts) == 2
    assert all(p.label.kind == LabelKind.UNTWISTED for p in bl.parts)
    assert verify_branch(bl, F(12))


def test_sublattice_twisted_placeholders_a2():
    L, basis = a2_sublattice()
    tw = [m for m in classify_modules(L) if m.kind == LabelKind.TWISTED]
    for m in tw:
        bl = branch_sublattice(L, basis, m)
        assert len(bl.parts) == 1
        p = bl.parts[0]
        assert isinstance(p, TwistedBlockPart)
        assert p.sign == m.sign and p.multiplicity == 2
        assert part_is_twisted(p)
        assert verify_branch(bl, F(12))


def test_all_a2_branchings_verify():
    L, basis = a2_sublattice()
    for m in classify_modules(L):
        assert verify_branch(branch_sublattice(L, basis, m), F(12)), str(m)


def test_all_d24_branchings_verify_over_doubled_sublattice():
    L = lat(D24)
    doubled = ((2, 0), (0, 2))
    for m in classify_modules(L):
        bl = branch_sublattice(L, doubled, m)
        assert verify_branch(bl, F(12)), str(m)


def test_sublattice_rejects_degenerate_basis():
    from vlplus.lattice import NotFullRank

    L = lat(D24)
    with pytest.raises(NotFullRank):
        branch_sublattice(L, ((1, 0), (2, 0)), VAC_PLUS)
    with pytest.raises(NotFullRank):
        branch_sublattice(L, ((1, 0),), VAC_PLUS)


def test_sublattice_trivial_branching_is_identity():
    L = lat(D24)
    full = ((1, 0), (0, 1))
    for m in classify_modules(L):
        bl = branch_sublattice(L, full, m)
        if m.kind == LabelKind.TWISTED:
            assert bl.parts == (TwistedBlockPart(sign=m.sign, multiplicity=1),)
        else:
            assert bl.parts == (SubmodulePart(m),)


def test_sublattice_part_census_matches_quotient():
    # paired classes counted once: parts biject with the class census
    L, basis = a2_sublattice()
    from vlplus.lattice import coset_reps_mod_sublattice

    n_classes = len(coset_reps_mod_sublattice(L, basis))
    for m in classify_modules(L):
        if m.kind == LabelKind.TWISTED:
            continue
        bl = branch_sublattice(L, basis, m)
        total = 0
        for p in bl.parts:
            if p.label.kind in (LabelKind.UNTWISTED,):
                is_orbit_pair = (
                    m.kind != LabelKind.UNTWISTED
                )  # orbit parents list every class singly
                total += 2 if is_orbit_pair else 1
            else:
                total += 1
        assert total == n_classes


def test_two_stage_consistency_character_level():
    # sublattice then orthogonal equals direct orthogonal, at character level
    L = lat(D24)
    doubled = ((2, 0), (0, 2))
    sub_basis = doubled
    order = F(10)
    for m in classify_modules(L)[:6]:
        bl1 = branch_sublattice(L, sub_basis, m)
        direct = character(L, m, order)
        staged = None
        from vlplus.branching import part_character

        for p in bl1.parts:
            if isinstance(p, SubmodulePart):
                bl2 = branch_orthogonal(bl1.sublattice, p.label)
                assert verify_branch(bl2, order)
            contrib = part_character(bl1, p, order)
            staged = contrib if staged is None else staged + contrib
        assert staged == direct


def test_part_weights_dominate_parent():
    L, basis = a2_sublattice()
    for m in classify_modules(L):
        if m.kind == LabelKind.TWISTED:
            continue
        bl = branch_sublattice(L, basis, m)
        parent_w = lowest_weight(L, m)
        part_ws = [lowest_weight(bl.sublattice, p.label) for p in bl.parts]
        assert all(w >= parent_w for w in part_ws)
        assert parent_w in part_ws


def test_sign_metadata_flips_with_root_branch_but_verification_stands():
    L, basis = a2_sublattice()
    a = branch_sublattice(L, basis, VAC_PLUS, Convention(root_branch=1))
    b = branch_sublattice(L, basis, VAC_PLUS, Convention(root_branch=-1))

    def signs(bl):
        return [p.label.sign for p in bl.parts if p.label.kind == LabelKind.COSET]

    assert signs(a) == [-s for s in signs(b)]
    assert verify_branch(a, F(8)) and verify_branch(b, F(8))


# ---------------------------------------------------------------------------
# rank-one free-field assembly
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 2, 3])
def test_rank1_free_field_assembly_matches_characters(k):
    L = lat([[2 * k]])
    for m in classify_modules(L):
        assembled = rank1_m1_branch(k, m, F(10))
        direct = character(L, m, F(10))
        assert assembled == direct, str(m)
