"""Reality tests, the vanishing-ideal equality test, and ideal augmentation.

is_real: per prime component, a conjugate-split witness proves NotReal; a
variety sample with Jacobian rank n - dim proves Real; a full CAD of the
variety deciding that its topological dimension falls short of the ideal
dimension proves NotReal; a full-dimensional variety cell proves Real.

check_equality: per component, choose base coordinates on which the ideal
is rationally nontrivial, build the base CAD from the constraint chain,
lift open-cell samples through sections of the generator chain, and accept
when some fully lifted point lies on the variety and inside the set.

augment: one round of the repair loop -- radical repair plus real/imaginary
adjunction on split components, an optional shear so the leading coordinate
block works for every component, then adjoin to each failing component a
defining polynomial of the (too small) projection of its surviving cells.
The output strictly contains the input, which is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from .algebraic import AlgebraicNumber, Point, sign_at
from .cad import (
    CadError,
    CadTree,
    build_cells_from_ladder,
    build_ladder,
    section_lift_points,
    top_dimension,
    variety_cells,
)
from .decompose import (
    DecompositionCertificate,
    SplitResult,
    UnsupportedScopeError,
    complexified_split,
    decompose_scoped,
    is_radical_candidate,
    radical_repair,
)
from .groebner import (
    Ideal,
    dimension,
    first_independent_set,
    intersect,
    rationally_trivial,
)
from .mpoly import MPoly, PolyMatrix, Ring, jacobian, linear_change, invert_int_matrix, mpoly_lcm
from .semialg import SemialgebraicSet

AUGMENT_ROUND_CAP = 16
SHEAR_ATTEMPT_CAP = 32


# -- verdicts -------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    kind: Literal["RankDim", "TopDim", "ComplexSplit", "RankDeficit"]
    detail: str

    def render(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass
class ComponentReport:
    index: int
    ideal: Ideal
    status: str  # "real" | "not-real" | "accepted" | "failed" | "inconclusive"
    certificate: Certificate | None = None
    witness: dict | None = None
    note: str = ""

    def render(self) -> str:
        bits = [f"component {self.index}: {self.ideal.render()} -> {self.status}"]
        if self.certificate:
            bits.append("  " + self.certificate.render())
        if self.witness is not None:
            bits.append("  witness " + format_point(self.witness))
        if self.note:
            bits.append("  " + self.note)
        return "\n".join(bits)


@dataclass
class RealityVerdict:
    verdict: Literal["Real", "NotReal", "Inconclusive"]
    components: list[ComponentReport]

    def render(self) -> str:
        lines = [f"reality verdict: {self.verdict}"]
        lines += [c.render() for c in self.components]
        return "\n".join(lines) + "\n"


@dataclass
class EqualityVerdict:
    verdict: Literal["Equal", "NotEqual", "Inconclusive"]
    components: list[ComponentReport]
    base_roots: list[float] = field(default_factory=list)

    def render(self) -> str:
        lines = [f"equality verdict: {self.verdict}"]
        lines += [c.render() for c in self.components]
        return "\n".join(lines) + "\n"


def format_point(point: dict) -> str:
    parts = []
    for v in sorted(point):
        a = point[v]
        if isinstance(a, AlgebraicNumber):
            parts.append(f"{v}={a.rational_value}" if a.is_rational else f"{v}~{a.to_float():.6f}")
        else:
            parts.append(f"{v}={a}")
    return "(" + ", ".join(parts) + ")"


# -- Jacobian rank at an algebraic point ---------------------------------------


def rank_at(I: Ideal, point: Point) -> int:
    """Exact Jacobian rank of the reduced basis at a variety point.

    Fraction-free elimination on the symbolic Jacobian; pivots are chosen by
    exact sign evaluation at the point.
    """
    gens = list(I.groebner())
    for g in gens:
        if sign_at(g, point) != 0:
            raise ValueError("rank_at requires a point on the variety")
    return jacobian_rank_at(gens, list(I.ring.vars), point)


def jacobian_rank_at(gens: Sequence[MPoly], variables: Sequence[str], point: Point) -> int:
    mat = [[g.derivative(v) for v in variables] for g in gens]
    nrows, ncols = len(mat), len(variables)
    rank = 0
    row = 0
    used_cols: set[int] = set()
    while row < nrows:
        pivot = None
        for j in range(ncols):
            if j in used_cols:
                continue
            for i in range(row, nrows):
                if not mat[i][j].is_zero and sign_at(mat[i][j], point) != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        mat[row], mat[pi] = mat[pi], mat[row]
        pval = mat[row][pj]
        for i in range(row + 1, nrows):
            if mat[i][pj].is_zero:
                continue
            factor = mat[i][pj]
            mat[i] = [pval * a - factor * b for a, b in zip(mat[i], mat[row])]
            mat[i] = [e.primitive() if not e.is_zero else e for e in mat[i]]
        used_cols.add(pj)
        rank += 1
        row += 1
    return rank


# -- reality test ----------------------------------------------------------------


def is_real(I: Ideal, hint=None) -> RealityVerdict:
    """Decide whether I(V(I)) = I via its prime decomposition."""
    cert = decompose_scoped(I, hint)
    n = I.ring.nvars
    reports: list[ComponentReport] = []
    verdict = "Real"
    for idx, comp in enumerate(cert.components):
        split = complexified_split(comp)
        if split.verdict == "Split":
            reports.append(
                ComponentReport(
                    idx,
                    comp,
                    "not-real",
                    Certificate(
                        "ComplexSplit",
                        f"g = ({split.re_part.render()}) + ({split.im_part.render()})*sqrt(-1); "
                        f"g*conj(g) lies in the component, its parts do not",
                    ),
                )
            )
            verdict = "NotReal"
            continue
        d = dimension(comp)
        target = n - d
        try:
            tree = _component_cad(comp)
            cells = variety_cells(tree, comp, SemialgebraicSet.whole_space(I.ring))
        except CadError as exc:
            reports.append(ComponentReport(idx, comp, "inconclusive", note=str(exc)))
            if verdict == "Real":
                verdict = "Inconclusive"
            continue
        best_rank = -1
        found = None
        for cell in cells:
            r = jacobian_rank_at(list(comp.groebner()), list(I.ring.vars), cell.sample)
            best_rank = max(best_rank, r)
            if r == target:
                found = (cell, r)
                break
        if found is not None:
            cell, r = found
            reports.append(
                ComponentReport(
                    idx,
                    comp,
                    "real",
                    Certificate("RankDim", f"rank {r} + dim {d} = n = {n}"),
                    witness=cell.sample,
                )
            )
            continue
        tdim = top_dimension(cells)
        if tdim == d:
            cell = next(c for c in cells if c.dim == d)
            reports.append(
                ComponentReport(
                    idx,
                    comp,
                    "real",
                    Certificate("TopDim", f"variety cell {cell.path} has dimension {d} = dim"),
                    witness=cell.sample,
                )
            )
            continue
        reports.append(
            ComponentReport(
                idx,
                comp,
                "not-real",
                Certificate(
                    "RankDeficit",
                    f"rank {max(best_rank, 0)}, dim {d}, n {n}; "
                    f"variety has topological dimension {tdim} < {d}",
                ),
            )
        )
        verdict = "NotReal"
    return RealityVerdict(verdict, reports)


def _component_cad(comp: Ideal) -> CadTree:
    from .cad import build_cad

    return build_cad(list(comp.groebner()), comp.ring.vars)


# -- the equality test (Algorithm of the main theorem) ---------------------------


def _coordinate_subset(comp: Ideal, d: int) -> tuple[str, ...] | None:
    """Lexicographically first d-subset of the variables on which the
    component is rationally nontrivial (its elimination ideal is zero)."""
    from itertools import combinations

    if d <= 0:
        return ()
    ring = comp.ring
    for s in combinations(range(ring.nvars), d):
        subset = tuple(ring.vars[i] for i in s)
        if not rationally_trivial(comp, subset):
            return subset
    return None


def _component_witness(
    comp: Ideal, S: SemialgebraicSet, var_order: Sequence[str], d: int
):
    """Search for a point of V(comp) inside S over an open base cell.

    Returns (witness point or None, level-1 section values of the base CAD).
    """
    gens = list(comp.groebner())
    ladder = build_ladder(gens, S.inequality_polys(), var_order)
    roots: list[float] = []
    if d == 0:
        bases = [dict()]
    else:
        tree = build_cells_from_ladder(ladder, upto_level=d)
        for c in tree.level_cells(1):
            if c.kind == "section":
                roots.append(c.sample[var_order[0]].to_float())
        bases = [c.sample for c in tree.level_cells(d) if c.is_open]
    for base in bases:
        for point in section_lift_points(ladder, base, d + 1):
            if all(sign_at(g, point) == 0 for g in gens) and S.satisfied_at(point):
                return point, roots
    return None, roots


def check_equality(S: SemialgebraicSet, I: Ideal, hint=None) -> EqualityVerdict:
    """Decide I(S cap V(I)) = I.

    Early reject when a component complexifies reducibly (the ideal cannot
    be real, so equality fails); otherwise each component must exhibit a
    lifted sample of full component dimension lying in S.
    """
    cert = decompose_scoped(I, hint)
    reports: list[ComponentReport] = []
    all_roots: list[float] = []
    verdict = "Equal"
    for idx, comp in enumerate(cert.components):
        split = complexified_split(comp)
        if split.verdict == "Split":
            reports.append(
                ComponentReport(
                    idx,
                    comp,
                    "failed",
                    Certificate(
                        "ComplexSplit",
                        f"complexification splits via ({split.re_part.render()}) "
                        f"+ ({split.im_part.render()})*sqrt(-1)",
                    ),
                )
            )
            verdict = "NotEqual"
            continue
        d = dimension(comp)
        base = _coordinate_subset(comp, d)
        if base is None:
            reports.append(
                ComponentReport(
                    idx, comp, "inconclusive", note="no usable coordinate subset"
                )
            )
            if verdict == "Equal":
                verdict = "Inconclusive"
            continue
        rest = [v for v in I.ring.vars if v not in base]
        var_order = tuple(base) + tuple(rest)
        try:
            witness, roots = _component_witness(comp, S, var_order, d)
        except CadError as exc:
            reports.append(ComponentReport(idx, comp, "inconclusive", note=str(exc)))
            if verdict == "Equal":
                verdict = "Inconclusive"
            continue
        all_roots.extend(roots)
        if witness is not None:
            reports.append(
                ComponentReport(
                    idx,
                    comp,
                    "accepted",
                    Certificate(
                        "TopDim",
                        f"S cap V(component) reaches dimension {d} = component dimension",
                    ),
                    witness=witness,
                )
            )
        else:
            reports.append(
                ComponentReport(
                    idx,
                    comp,
                    "failed",
                    note=f"no open base cell lifts into S (dimension drops below {d})",
                )
            )
            verdict = "NotEqual"
    return EqualityVerdict(verdict, reports, all_roots)


# -- augmentation ------------------------------------------------------------------


@dataclass
class AugmentResult:
    ideal: Ideal
    components: list[Ideal]
    log: list[str]
    strict_witness: MPoly  # a generator of the output not in the input

    def render(self) -> str:
        lines = ["augmented ideal: " + self.ideal.render()]
        lines += ["  " + msg for msg in self.log]
        return "\n".join(lines) + "\n"


def _repair_components(comps: list[Ideal], log: list[str]) -> list[Ideal]:
    """Steps 1b/1c: radical repair, then Re/Im adjunction on splits, to a
    fixed point."""
    comps = list(comps)
    for _ in range(8):
        changed = False
        for i, c in enumerate(comps):
            if not is_radical_candidate(c):
                repaired = radical_repair(c)
                log.append(
                    f"component {i}: replaced by radical candidate {repaired.render()}"
                )
                comps[i] = repaired
                changed = True
        for i, c in enumerate(comps):
            split = complexified_split(c)
            if split.verdict == "Split":
                a, b = split.re_part, split.im_part
                comps[i] = Ideal(
                    list(c.gens) + [a, b], c.order, c.ring
                )
                log.append(
                    f"component {i}: complexification split; adjoined "
                    f"{a.render()} and {b.render()}"
                )
                changed = True
        if not changed:
            return comps
    raise UnsupportedScopeError("component repair did not stabilize")


def _component_passes(comp: Ideal, S: SemialgebraicSet) -> bool:
    d = dimension(comp)
    base = _coordinate_subset(comp, d)
    if base is None:
        raise CadError("no usable coordinate subset for component")
    var_order = tuple(base) + tuple(v for v in comp.ring.vars if v not in base)
    witness, _ = _component_witness(comp, S, var_order, d)
    return witness is not None


def _shear_schedule(ring: Ring):
    n = ring.nvars
    for c in range(1, SHEAR_ATTEMPT_CAP + 1):
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                T = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
                T[i][j] = c
                yield T


def augment(S: SemialgebraicSet, I: Ideal, hint=None) -> AugmentResult:
    """One round of ideal augmentation; requires I(S cap V(I)) != I.

    Repairs the decomposition first; if the repair alone already makes every
    component pass the equality test, that repaired ideal is the round's
    output.  Otherwise a defining polynomial of the deficient projection of
    each failing component's surviving cells is adjoined and the component
    intersection is returned.  Strict growth is asserted.
    """
    log: list[str] = []
    cert = decompose_scoped(I, hint)
    comps = _repair_components(list(cert.components), log)

    ring = I.ring
    # Step 2: make the leading coordinate block work for every component.
    transform = None
    inverse = None
    sheared_comps = comps
    sheared_S = S

    def block_ok(components) -> bool:
        for c in components:
            d = dimension(c)
            if d > 0 and rationally_trivial(c, ring.vars[:d]):
                return False
        return True

    if not block_ok(comps):
        for T in _shear_schedule(ring):
            cand = [
                Ideal([linear_change(g, T) for g in c.gens], c.order, ring) for c in comps
            ]
            if block_ok(cand):
                transform = T
                inverse_frac = invert_int_matrix(T)
                sheared_comps = cand
                sheared_S = SemialgebraicSet(
                    ring,
                    tuple(
                        tuple(
                            type(cond)(linear_change(cond.poly, T), cond.rel)
                            for cond in conj
                        )
                        for conj in S.conjuncts
                    ),
                )
                log.append(f"applied linear change {T}")
                break
        else:
            raise UnsupportedScopeError("no shear makes the coordinate block work")

    # Step 3: equality status per component, in sheared coordinates.
    passes = [_component_passes(c, sheared_S) for c in sheared_comps]
    if all(passes):
        new_ideal = _intersection(comps, I)
        witness = _strictness_witness(new_ideal, I)
        log.append("repair alone restored the equality condition")
        return AugmentResult(new_ideal, comps, log, witness)
    dims = [dimension(c) for c in sheared_comps]
    d_max = max(d for d, ok in zip(dims, passes) if not ok)
    t0 = min(i for i, (d, ok) in enumerate(zip(dims, passes)) if not ok and d == d_max)
    log.append(f"t0 = component {t0} (dimension {d_max})")

    new_comps_sheared: list[Ideal] = []
    for i, (comp, ok, d) in enumerate(zip(sheared_comps, passes, dims)):
        if ok:
            f = _element_outside(comp, sheared_comps[t0])
            log.append(f"component {i} passes; f = {f.render()} (in it, outside t0)")
            new_comps_sheared.append(comp.with_extra_gens([f]))
            continue
        f = _projection_defining_poly(comp, sheared_S, d, log, i)
        new_comps_sheared.append(comp.with_extra_gens([f]) if f is not None else None)
        if f is None:
            log.append(f"component {i}: V cap S empty; component dropped")

    # Undo the shear.
    if transform is not None:
        Tinv_rows = [[int(x) if x.denominator == 1 else x for x in row] for row in inverse_frac]
        new_comps = []
        for c in new_comps_sheared:
            if c is None:
                new_comps.append(None)
                continue
            gens = [_linear_change_rational(g, inverse_frac) for g in c.gens]
            new_comps.append(Ideal(gens, c.order, ring))
    else:
        new_comps = new_comps_sheared
    kept = [c for c in new_comps if c is not None]
    if not kept:
        raise UnsupportedScopeError("all components dropped; S cap V(I) is empty")
    new_ideal = _intersection(kept, I)
    witness = _strictness_witness(new_ideal, I)
    return AugmentResult(new_ideal, kept, log, witness)


def _linear_change_rational(p: MPoly, rows) -> MPoly:
    ring = p.ring
    n = ring.nvars
    images = {
        ring.vars[i]: sum(
            (ring.var(ring.vars[j]) * rows[i][j] for j in range(n)), ring.zero()
        )
        for i in range(n)
    }
    return p.substitute(images)


def _intersection(comps: Sequence[Ideal], like: Ideal) -> Ideal:
    out = comps[0]
    for c in comps[1:]:
        out = intersect(out, c)
    return Ideal(list(out.groebner()), like.order, like.ring)


def _strictness_witness(new: Ideal, old: Ideal) -> MPoly:
    for g in old.gens:
        if not new.member(g):
            raise AssertionError("augmentation lost part of the ideal")
    for g in new.groebner():
        if not old.member(g):
            return g
    raise AssertionError("augmentation did not strictly grow the ideal")


def _element_outside(comp: Ideal, other: Ideal) -> MPoly:
    for g in comp.groebner():
        if not other.member(g):
            return g
    raise UnsupportedScopeError("component contained in t0-component (redundant hint?)")


def _projection_defining_poly(
    comp: Ideal, S: SemialgebraicSet, d: int, log: list[str], idx: int
) -> MPoly | None:
    """Step 4b: lcm of defining polynomials of the projections of the cells
    of V(component) cap S, chosen from the production-level-d factor set."""
    gens = list(comp.groebner())
    ladder = build_ladder(gens, S.inequality_polys(), comp.ring.vars)
    tree = build_cells_from_ladder(ladder)
    survivors = []
    for cell in tree.top_cells():
        if all(sign_at(g, cell.sample) == 0 for g in gens) and S.satisfied_at(cell.sample):
            survivors.append(cell)
    if not survivors:
        return None
    selection = ladder.selection_factors(d) if d >= 1 else []
    chosen: dict = {}
    for cell in survivors:
        anc = cell
        while anc.level > d and anc.parent is not None:
            anc = anc.parent
        if d == 0:
            continue
        cands = [f for f in selection if sign_at(f, anc.sample) == 0]
        if not cands:
            cands = [
                f
                for lvl in range(d)
                for f in ladder.q_levels[lvl]
                if sign_at(f, anc.sample) == 0
            ]
        if not cands:
            raise CadError(
                f"surviving cell {cell.path} projects onto an open base cell"
            )
        cands.sort(key=lambda f: (f.total_degree(), f.render()))
        key = tuple(sorted(cands[0].terms.items()))
        chosen[key] = cands[0]
    if d == 0:
        # zero-dimensional component: equality can only fail by emptiness
        raise CadError("zero-dimensional component with surviving cells cannot fail")
    f = None
    for q in chosen.values():
        f = q if f is None else mpoly_lcm(f, q)
    log.append(f"component {idx}: adjoined projection polynomial {f.render()}")
    return f


def iterate_augment(
    S: SemialgebraicSet, I: Ideal, hint=None, cap: int = AUGMENT_ROUND_CAP
):
    """Drive augment to the fixpoint I(S cap V(J)) = J.

    Returns (final ideal, final hint components, per-round AugmentResults).
    """
    rounds: list[AugmentResult] = []
    current = I
    current_hint = hint
    for _ in range(cap):
        verdict = check_equality(S, current, current_hint)
        if verdict.verdict == "Equal":
            return current, current_hint, rounds
        if verdict.verdict == "Inconclusive":
            raise UnsupportedScopeError("equality test inconclusive; cannot iterate")
        result = augment(S, current, current_hint)
        rounds.append(result)
        current = result.ideal
        current_hint = [list(c.gens) for c in result.components]
    raise RuntimeError(f"augmentation did not stabilize within {cap} rounds")
