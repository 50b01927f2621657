"""Per-pair vanishing certificates for extensions between irreducibles.

For every ordered pair (m1, m2) of irreducible labels the certifier
searches a fixed rule chain for a reason that every extension of m2 by
m1 splits, and records the first rule that applies:

  WeightGap          lowest-weight difference is not a nonzero integer
  Vacuum             the pair (minus vacuum, plus vacuum): a singular
                     vector generates a complemented algebra copy
  Duality            a base rule applies to the contragredient pair
  FusionObstruction  every intertwiner type over a proper rational
                     fixed-point subalgebra vanishes (sublattice route:
                     parity and admissibility gates; orthogonal route:
                     the complete rank-one vacuum rows, factorwise)

A rule is recorded only when its hypothesis is decided exactly; an
Unknown never counts as vanishing.  If no rule applies the pair is
reported in the unknown list and the verdict is Incomplete, so the
procedure is falsifiable by construction.  The verdict, pair-to-rule
map and all counts are independent of the cocycle normalization and of
the square-root branch; those conventions only move sign metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from .branching import (
    BranchList,
    SubmodulePart,
    branch_orthogonal,
    branch_sublattice,
    part_is_twisted,
)
from .fusion import ZERO, admissible_triple, rank1_fusion, tensor_fusion
from .intmat import rational_inverse
from .lattice import (
    Convention,
    EvenLattice,
    coset_element,
    mod_two_data,
    orthogonal_sublattice,
    validate_even_lattice,
    zero_coset,
)
from .qseries import series_denominator
from .sectors import (
    CentralCharacter,
    LabelKind,
    ModuleLabel,
    VAC_PLUS,
    central_characters,
    classify_modules,
    contragredient,
    coset_label,
    format_label,
    lowest_weight,
    twisted_label,
    untwisted_label,
)

RULE_WEIGHT_GAP = "WeightGap"
RULE_VACUUM = "Vacuum"
RULE_DUALITY = "Duality"
RULE_FUSION = "FusionObstruction"
ALL_RULES = (RULE_WEIGHT_GAP, RULE_VACUUM, RULE_DUALITY, RULE_FUSION)

VERDICT_RATIONAL = "Rational"
VERDICT_INCOMPLETE = "Incomplete"

CITATIONS = {
    RULE_WEIGHT_GAP: (
        "the lowest weights differ by a non-integer or by zero, and the "
        "finite semisimple top-level algebra splits any extension between "
        "such weights"
    ),
    RULE_VACUUM: (
        "a vector killed by both the translation and scaling operators "
        "generates a complemented copy of the whole algebra inside any "
        "extension; the comparison subalgebra shares the conformal vector"
    ),
    RULE_DUALITY: (
        "extensions split exactly when they split for the contragredient "
        "pair in the opposite order"
    ),
    RULE_FUSION: (
        "every intertwiner type from the algebra and the second module "
        "into the first vanishes over a rational fixed-point subalgebra "
        "with the same conformal vector, so any extension is a module map"
    ),
}


@dataclass(frozen=True)
class ExtJustification:
    rule: str
    citation: str
    detail: tuple[tuple[str, str], ...] = ()
    inner: "ExtJustification | None" = None

    def to_json(self) -> dict:
        out = {"rule": self.rule, "citation": self.citation,
               "detail": {k: v for k, v in self.detail}}
        if self.inner is not None:
            out["inner"] = self.inner.to_json()
        return out


@dataclass(frozen=True)
class ExtCertificate:
    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    pairs: tuple[tuple[str, str, ExtJustification], ...]
    unknown: tuple[tuple[str, str], ...]
    verdict: str
    metadata: tuple[tuple[str, str], ...] = ()

    def to_json(self) -> dict:
        return {
            "format": "vlplus-certificate-v1",
            "gram": [list(r) for r in self.gram],
            "labels": list(self.labels),
            "verdict": self.verdict,
            "pairs": [
                {"m1": a, "m2": b, "justification": j.to_json()} for a, b, j in self.pairs
            ],
            "unknown": [list(p) for p in self.unknown],
            "metadata": {k: v for k, v in self.metadata},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"

    def rule_map(self) -> dict[tuple[str, str], str]:
        """Pair-to-rule-name view, the convention-independent core."""
        return {(a, b): _rule_path(j) for a, b, j in self.pairs}


def _rule_path(j: ExtJustification) -> str:
    if j.inner is None:
        detail = dict(j.detail)
        route = detail.get("route")
        return f"{j.rule}[{route}]" if route else j.rule
    return f"{j.rule}({_rule_path(j.inner)})"


class _Context:
    """Shared per-lattice data for the rule chain."""

    def __init__(self, L: EvenLattice, convention: Convention):
        self.L = L
        self.convention = convention
        self.labels = classify_modules(L)
        self.weights = {m: lowest_weight(L, m) for m in self.labels}
        self.duals = {m: contragredient(L, m) for m in self.labels}
        basis, gram1, index = orthogonal_sublattice(L)
        self.sub_basis = basis
        self.sub_index = index
        self._sub_cache: dict[ModuleLabel, BranchList] = {}
        self._orth_cache: dict[ModuleLabel, tuple] = {}
        # an index-one orthogonal sublattice is an orthogonal basis of the
        # whole lattice: the rank-one route then runs on the unimodular
        # rebase, with labels transported across the basis change
        self.rebase = None
        if not L.is_diagonal() and index == 1:
            rebased = validate_even_lattice([list(r) for r in gram1])
            cols = [[basis[j][i] for j in range(L.rank)] for i in range(L.rank)]
            self.rebase = (rebased, basis, rational_inverse(cols))
        self.orth_lattice = L if L.is_diagonal() else (self.rebase[0] if self.rebase else None)

    def sub_branch(self, m: ModuleLabel) -> BranchList:
        if m not in self._sub_cache:
            self._sub_cache[m] = branch_sublattice(
                self.L, self.sub_basis, m, self.convention
            )
        return self._sub_cache[m]

    def orth_parts(self, m: ModuleLabel):
        """Rank-one tensor constituents of the labelled module, or None.

        On a diagonal lattice these are the exact constituents; on an
        index-one rebase vacuum, orbit and twisted labels transport
        intrinsically, while the convention-bound coset signs are
        replaced by the union of both sign lists (a superset of the true
        constituents, so vanishing conclusions stay sound).
        """
        if m in self._orth_cache:
            return self._orth_cache[m]
        if self.L.is_diagonal():
            parts = branch_orthogonal(self.L, m).parts
        elif self.rebase is None:
            parts = None
        else:
            parts = self._transported_parts(m)
        self._orth_cache[m] = parts
        return parts

    def _transported_parts(self, m: ModuleLabel):
        rebased, basis, sinv = self.rebase
        d = self.L.rank
        if m.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
            return branch_orthogonal(rebased, m).parts
        if m.kind in (LabelKind.UNTWISTED, LabelKind.COSET):
            moved = tuple(
                sum(sinv[r][s] * m.coset.rep[s] for s in range(d)) for r in range(d)
            )
            c = coset_element(rebased, moved)
            if m.kind == LabelKind.UNTWISTED:
                return branch_orthogonal(rebased, untwisted_label(rebased, c)).parts
            return (
                branch_orthogonal(rebased, coset_label(rebased, c, +1)).parts
                + branch_orthogonal(rebased, coset_label(rebased, c, -1)).parts
            )
        # twisted: an index-one rebase forces the mod-2 form to vanish, so
        # the character lives on the whole lattice mod 2 and transports by
        # evaluating on the new basis vectors
        m2 = mod_two_data(self.L)
        std = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
        if m2.radical_basis != std:
            raise AssertionError("index-one rebase requires a vanishing mod-2 form")
        values = tuple(
            _sign_power(m.char.values, basis[j]) for j in range(d)
        )
        chi = CentralCharacter(values=values, dim_t=m.char.dim_t)
        target = central_characters(rebased)[chi.index]
        if target.values != values:
            raise AssertionError("transported character out of order")
        return branch_orthogonal(rebased, twisted_label(target, m.sign)).parts


def _sign_power(values: tuple[int, ...], coords) -> int:
    out = 1
    for v, c in zip(values, coords):
        if c % 2:
            out *= v
    return out


def weight_gap_rule(ctx: _Context, m1: ModuleLabel, m2: ModuleLabel):
    gap = ctx.weights[m1] - ctx.weights[m2]
    if gap != 0 and gap.denominator == 1:
        return None
    return ExtJustification(
        rule=RULE_WEIGHT_GAP,
        citation=CITATIONS[RULE_WEIGHT_GAP],
        detail=(
            ("gap", str(gap)),
            ("weights", f"{ctx.weights[m1]},{ctx.weights[m2]}"),
        ),
    )


def vacuum_rule(ctx: _Context, m1: ModuleLabel, m2: ModuleLabel):
    if m1.kind != LabelKind.VAC_MINUS or m2.kind != LabelKind.VAC_PLUS:
        return None
    norms = ",".join(str(ctx.sub_branch(VAC_PLUS).sublattice.gram[i][i])
                     for i in range(ctx.L.rank))
    return ExtJustification(
        rule=RULE_VACUUM,
        citation=CITATIONS[RULE_VACUUM],
        detail=(("subalgebra", f"orthogonal sublattice of norms [{norms}]"),),
    )


def fusion_obstruction_rule(ctx: _Context, m1: ModuleLabel, m2: ModuleLabel, route: str):
    """Obstruction rule: every subalgebra intertwiner type must be Zero.

    The sublattice route uses only the two decided vanishing gates
    (exactly one twisted constituent, or an inadmissible coset triple)
    over a proper sublattice; the orthogonal route factors through the
    complete rank-one vacuum rows and is available when the Gram matrix
    is diagonal.  Any triple that is not decidably Zero makes the rule
    inapplicable; it is never unsound.
    """
    if route == "sublattice":
        if ctx.sub_index == 1:
            # the fixed-point algebra of the sublattice would be the
            # algebra itself; a certificate must not cite its own verdict
            return None
        sub = ctx.sub_branch(VAC_PLUS).sublattice
        parts1 = ctx.sub_branch(m1).parts
        parts_v = ctx.sub_branch(VAC_PLUS).parts
        parts2 = ctx.sub_branch(m2).parts
        zero_parity = 0
        zero_adm = 0
        total = 0
        for n in parts_v:
            assert isinstance(n, SubmodulePart) and not part_is_twisted(n)
            n_coset = _part_coset(sub, n)
            for n2 in parts2:
                for n1 in parts1:
                    total += 1
                    t1, t2 = part_is_twisted(n1), part_is_twisted(n2)
                    if t1 != t2:
                        zero_parity += 1
                        continue
                    if t1 and t2:
                        return None  # twisted placeholders cannot be compared
                    if admissible_triple(
                        sub, n_coset, _part_coset(sub, n2), _part_coset(sub, n1)
                    ):
                        return None
                    zero_adm += 1
        norms = ",".join(str(sub.gram[i][i]) for i in range(sub.rank))
        return ExtJustification(
            rule=RULE_FUSION,
            citation=CITATIONS[RULE_FUSION],
            detail=(
                ("route", "sublattice"),
                ("subalgebra", f"fixed points over sublattice of norms [{norms}]"),
                ("triples", str(total)),
                ("zero_by_parity", str(zero_parity)),
                ("zero_by_admissibility", str(zero_adm)),
            ),
        )
    if route == "orthogonal":
        if ctx.orth_lattice is None:
            # no orthogonal basis: the algebra has constituents outside
            # the complete rank-one rows
            return None
        parts1 = ctx.orth_parts(m1)
        parts_v = ctx.orth_parts(VAC_PLUS)
        parts2 = ctx.orth_parts(m2)
        ks = [ctx.orth_lattice.gram[i][i] // 2 for i in range(ctx.L.rank)]
        total = 0
        for n in parts_v:
            for n2 in parts2:
                for n1 in parts1:
                    total += 1
                    answers = [
                        rank1_fusion(k, w_n, w_n2, w_n1)
                        for k, w_n, w_n2, w_n1 in zip(ks, n.labels, n2.labels, n1.labels)
                    ]
                    if tensor_fusion(answers) != ZERO:
                        return None
        norms = ",".join(str(2 * k) for k in ks)
        return ExtJustification(
            rule=RULE_FUSION,
            citation=CITATIONS[RULE_FUSION],
            detail=(
                ("route", "orthogonal"),
                ("subalgebra", f"tensor of rank-one fixed points, norms [{norms}]"),
                ("triples", str(total)),
            ),
        )
    raise ValueError(f"unknown route {route!r}")


def _part_coset(sub: EvenLattice, p: SubmodulePart):
    if p.label.kind in (LabelKind.VAC_PLUS, LabelKind.VAC_MINUS):
        return zero_coset(sub)
    return p.label.coset


def duality_rule(ctx: _Context, m1: ModuleLabel, m2: ModuleLabel, base_rules):
    d1, d2 = ctx.duals[m2], ctx.duals[m1]
    for fn in base_rules:
        inner = fn(ctx, d1, d2)
        if inner is not None:
            return ExtJustification(
                rule=RULE_DUALITY,
                citation=CITATIONS[RULE_DUALITY],
                detail=(("dual_pair", f"{format_label(d1)},{format_label(d2)}"),),
                inner=inner,
            )
    return None


def _justify(ctx: _Context, m1: ModuleLabel, m2: ModuleLabel, disabled: frozenset):
    """First applicable rule in the fixed chain, or None."""
    wg = RULE_WEIGHT_GAP not in disabled
    vac = RULE_VACUUM not in disabled
    dual = RULE_DUALITY not in disabled
    fus = RULE_FUSION not in disabled

    if wg:
        j = weight_gap_rule(ctx, m1, m2)
        if j:
            return j
    if vac:
        j = vacuum_rule(ctx, m1, m2)
        if j:
            return j
    if dual:
        base = []
        if wg:
            base.append(weight_gap_rule)
        if vac:
            base.append(vacuum_rule)
        j = duality_rule(ctx, m1, m2, base)
        if j:
            return j
    if fus:
        for route in ("sublattice", "orthogonal"):
            j = fusion_obstruction_rule(ctx, m1, m2, route)
            if j:
                return j
    if fus and dual:
        j = duality_rule(
            ctx,
            m1,
            m2,
            [
                lambda c, a, b: fusion_obstruction_rule(c, a, b, "sublattice"),
                lambda c, a, b: fusion_obstruction_rule(c, a, b, "orthogonal"),
            ],
        )
        if j:
            return j
    return None


_WORKER_STATE: dict = {}


def _pair_worker(args):
    gram, convention, disabled, index_pairs = args
    key = (gram, convention, disabled)
    if _WORKER_STATE.get("key") != key:
        from .lattice import validate_even_lattice

        L = validate_even_lattice([list(r) for r in gram])
        _WORKER_STATE["key"] = key
        _WORKER_STATE["ctx"] = _Context(L, convention)
    ctx = _WORKER_STATE["ctx"]
    out = []
    for idx, (i, j) in index_pairs:
        m1, m2 = ctx.labels[i], ctx.labels[j]
        out.append((idx, _justify(ctx, m1, m2, disabled)))
    return out


def certify(
    L: EvenLattice,
    convention: Convention = Convention(),
    disabled: frozenset = frozenset(),
    jobs: int = 1,
) -> ExtCertificate:
    """Certificate over all ordered pairs of irreducible labels.

    Deterministic: identical Gram matrices yield byte-identical output,
    independent of the parallelism degree.
    """
    ctx = _Context(L, convention)
    n = len(ctx.labels)
    pair_indices = [(i, j) for i in range(n) for j in range(n)]
    results: list = [None] * len(pair_indices)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = []
        step = max(1, len(pair_indices) // (4 * jobs))
        for start in range(0, len(pair_indices), step):
            chunk = [
                (idx, pair_indices[idx])
                for idx in range(start, min(start + step, len(pair_indices)))
            ]
            chunks.append((L.gram, convention, disabled, chunk))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for batch in pool.map(_pair_worker, chunks):
                for idx, j in batch:
                    results[idx] = j
    else:
        for idx, (i, j) in enumerate(pair_indices):
            results[idx] = _justify(ctx, ctx.labels[i], ctx.labels[j], disabled)

    pairs = []
    unknown = []
    for idx, (i, j) in enumerate(pair_indices):
        a, b = format_label(ctx.labels[i]), format_label(ctx.labels[j])
        if results[idx] is None:
            unknown.append((a, b))
        else:
            pairs.append((a, b, results[idx]))
    verdict = VERDICT_RATIONAL if not unknown else VERDICT_INCOMPLETE
    metadata = (
        ("denominator", str(series_denominator(L))),
        ("cocycle_mode", convention.cocycle_mode),
        ("root_branch", str(convention.root_branch)),
        ("rule_order", "WeightGap,Vacuum,Duality[base],FusionObstruction[sublattice],"
                       "FusionObstruction[orthogonal],Duality[FusionObstruction]"),
    )
    return ExtCertificate(
        gram=L.gram,
        labels=tuple(format_label(m) for m in ctx.labels),
        pairs=tuple(pairs),
        unknown=tuple(unknown),
        verdict=verdict,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# certificate re-verification
# ---------------------------------------------------------------------------

def verify_certificate(L: EvenLattice, cert: dict, convention: Convention = Convention()) -> list[str]:
    """Re-check every recorded justification from scratch.

    Returns a list of problems; an empty list means the certificate
    re-verifies.  Each pair's recorded rule is re-evaluated (not the
    whole chain), coverage of the ordered-pair square is checked, and
    the verdict is recomputed.
    """
    problems: list[str] = []
    ctx = _Context(L, convention)
    expected_labels = [format_label(m) for m in ctx.labels]
    if cert.get("labels") != expected_labels:
        problems.append("label census does not match the lattice")
        return problems
    if [list(r) for r in cert.get("gram", [])] != [list(r) for r in L.gram]:
        problems.append("gram matrix mismatch")
        return problems
    by_name = {format_label(m): m for m in ctx.labels}
    seen = set()
    for entry in cert.get("pairs", []):
        a, b = entry["m1"], entry["m2"]
        if (a, b) in seen:
            problems.append(f"duplicate pair ({a}, {b})")
            continue
        seen.add((a, b))
        j = entry["justification"]
        problem = _recheck(ctx, by_name[a], by_name[b], j)
        if problem:
            problems.append(f"pair ({a}, {b}): {problem}")
    for pair in cert.get("unknown", []):
        seen.add(tuple(pair))
    want = {(a, b) for a in expected_labels for b in expected_labels}
    missing = want - seen
    extra = seen - want
    if missing:
        problems.append(f"{len(missing)} ordered pairs missing")
    if extra:
        problems.append(f"{len(extra)} unexpected pairs recorded")
    verdict = VERDICT_RATIONAL if not cert.get("unknown") else VERDICT_INCOMPLETE
    if cert.get("verdict") != verdict:
        problems.append("verdict inconsistent with the unknown list")
    return problems


def _recheck(ctx: _Context, m1: ModuleLabel, m2: ModuleLabel, j: dict) -> str | None:
    rule = j.get("rule")
    if rule == RULE_WEIGHT_GAP:
        fresh = weight_gap_rule(ctx, m1, m2)
        if fresh is None:
            return "weight gap rule does not apply"
        if dict(fresh.detail)["gap"] != j.get("detail", {}).get("gap"):
            return "recorded gap differs"
        return None
    if rule == RULE_VACUUM:
        return None if vacuum_rule(ctx, m1, m2) else "vacuum rule does not apply"
    if rule == RULE_FUSION:
        route = j.get("detail", {}).get("route")
        fresh = fusion_obstruction_rule(ctx, m1, m2, route)
        if fresh is None:
            return f"fusion obstruction ({route}) does not apply"
        if dict(fresh.detail)["triples"] != j.get("detail", {}).get("triples"):
            return "triple count differs"
        return None
    if rule == RULE_DUALITY:
        inner = j.get("inner")
        if not inner:
            return "duality without inner justification"
        if inner.get("rule") == RULE_DUALITY:
            return "duality may not wrap duality"
        d1, d2 = ctx.duals[m2], ctx.duals[m1]
        return _recheck(ctx, d1, d2, inner)
    return f"unknown rule {rule!r}"


def load_certificate(text: str) -> dict:
    cert = json.loads(text)
    if cert.get("format") != "vlplus-certificate-v1":
        raise ValueError("not a certificate file")
    return cert
