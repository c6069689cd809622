"""Pipeline orchestration: every service endpoint and CLI command lands here.

All results are plain dataclasses with a ``report`` text and an exit code
following the contract: 0 definite verdict, 2 inconclusive, 1 error (errors
are raised and mapped by the callers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .cad import dump_tree
from .groebner import Ideal, dimension
from .mpoly import MPoly, Ring
from .problemfile import ProblemFile, parse_problem
from .reality import (
    AugmentResult,
    check_equality,
    is_real,
    iterate_augment,
)
from .sdp import (
    Pop,
    build_primal,
    gap_report,
)
from .sdp.sdpa import render_sdpa
from .semialg import SemialgebraicSet


class PipelineError(ValueError):
    """User-facing failure with the stage named."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def _exit_code(verdict: str) -> int:
    return 2 if verdict == "Inconclusive" else 0


def _require_ideal(pf: ProblemFile, stage: str) -> Ideal:
    I = pf.ideal()
    if I is None:
        raise PipelineError(stage, "the problem declares no equality constraints (no ideal)")
    return I


def _pop_of(pf: ProblemFile, stage: str) -> Pop:
    if pf.objective is None:
        raise PipelineError(stage, "command needs a POP (a minimize line)")
    if pf.disjuncts:
        raise PipelineError(stage, "POP mode does not allow or-blocks")
    ineqs = [p for p, rel in pf.global_inequalities]
    return Pop(pf.objective, ineqs, list(pf.ideal_gens))


@dataclass
class StageResult:
    verdict: str
    report: str
    exit_code: int
    extra: dict = field(default_factory=dict)


def run_check_real(text: str) -> StageResult:
    pf = parse_problem(text)
    I = _require_ideal(pf, "check-real")
    verdict = is_real(I, pf.hint_or_none())
    return StageResult(verdict.verdict, verdict.render(), _exit_code(verdict.verdict))


def run_check_ik(text: str, dump_cad: bool = False) -> StageResult:
    pf = parse_problem(text)
    I = _require_ideal(pf, "check-ik")
    S = pf.semialgebraic_set()
    verdict = check_equality(S, I, pf.hint_or_none())
    lines = [verdict.render()]
    if verdict.verdict == "Equal":
        lines.insert(0, "Equal (I(K)=I)\n")
    elif verdict.verdict == "NotEqual":
        lines.insert(0, "NotEqual (I(K)!=I)\n")
    extra = {}
    if dump_cad:
        extra["cad_dump"] = _cad_dumps(S, I, pf)
        lines.append(extra["cad_dump"])
    return StageResult(verdict.verdict, "".join(lines), _exit_code(verdict.verdict), extra)


def _cad_dumps(S: SemialgebraicSet, I: Ideal, pf: ProblemFile) -> str:
    from .cad import build_cad

    tree = build_cad(
        list(I.groebner()), I.ring.vars, extra_top=S.inequality_polys(), probe=False
    )
    return dump_tree(tree, title="CAD of the generators and constraint polynomials")


def run_augment(text: str) -> StageResult:
    pf = parse_problem(text)
    I = _require_ideal(pf, "augment")
    S = pf.semialgebraic_set()
    pre = check_equality(S, I, pf.hint_or_none())
    if pre.verdict == "Equal":
        report = "nothing to augment: I(K)=I already holds\n" + pre.render()
        return StageResult("Equal", report, 0, {"generators": [g.render() for g in I.groebner()]})
    if pre.verdict == "Inconclusive":
        return StageResult("Inconclusive", pre.render(), 2)
    final, hint, rounds = iterate_augment(S, I, pf.hint_or_none())
    gens = [g.render() for g in final.groebner()]
    lines = [f"augmented ideal generators ({len(rounds)} round(s)):"]
    lines += ["  " + g for g in gens]
    for i, r in enumerate(rounds, start=1):
        lines.append(f"round {i}:")
        lines += ["  " + msg for msg in r.log]
        lines.append("  strictly larger: new generator " + r.strict_witness.render())
    post = check_equality(S, final, hint)
    lines.append(f"post-check: I(K)=I now {post.verdict}")
    return StageResult(
        "Equal" if post.verdict == "Equal" else post.verdict,
        "\n".join(lines) + "\n",
        _exit_code(post.verdict),
        {"generators": gens, "rounds": len(rounds)},
    )


def run_relax(text: str, max_order: int | None = None) -> StageResult:
    pf = parse_problem(text)
    pop = _pop_of(pf, "relax")
    orders = pf.orders(pop.base_order, max_order)
    files = {}
    lines = [f"base order k0 = {pop.base_order}"]
    for k in orders:
        inst = build_primal(pop, k)
        name = f"relaxation_k{k}.dat-s"
        files[name] = render_sdpa(inst)
        sizes = inst.block_sizes()
        lines.append(f"k={k}: {inst.nmoments} moment variables, blocks {sizes} -> {name}")
    return StageResult("ok", "\n".join(lines) + "\n", 0, {"sdpa_files": files})


def run_solve(text: str, max_order: int | None = None, tol: float = 1e-8) -> StageResult:
    pf = parse_problem(text)
    pop = _pop_of(pf, "solve")
    orders = pf.orders(pop.base_order, max_order)
    report = gap_report(pop, orders, equality_verdict=None, tol=tol)
    records = [
        {
            "k": r.k,
            "primal": r.primal_value,
            "dual": r.dual_value,
            "status": r.status,
            "iterations": r.iterations,
        }
        for r in report.records
    ]
    return StageResult("ok", report.render(), 0, {"records": records})


def _linear_rank_witness(pop: Pop) -> bool:
    """Interior feasible point for POPs whose equalities are all affine.

    In that class the Jacobian rank equals n - dim I everywhere, so a point
    of V(I) strictly inside S certifies the prime/rank criterion.
    """
    ring = pop.ring
    n = ring.nvars
    if any(h.total_degree() > 1 for h in pop.equalities):
        return False
    # solve the affine system exactly
    rows = []
    rhs = []
    for h in pop.equalities:
        row = [Fraction(0)] * n
        const = Fraction(0)
        for e, c in h.terms.items():
            if sum(e) == 0:
                const += c
            else:
                row[e.index(1)] += c
        rows.append(row)
        rhs.append(-const)
    pivots: list[tuple[int, int]] = []
    aug = [row + [b] for row, b in zip(rows, rhs)]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        f = aug[r][col]
        aug[r] = [v / f for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                g = aug[i][col]
                aug[i] = [a - g * b for a, b in zip(aug[i], aug[r])]
        pivots.append((r, col))
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n]:
            return False  # inconsistent equalities
    free_cols = [c for c in range(n) if c not in {c0 for _, c0 in pivots}]
    grid = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2), Fraction(-2)]
    for assign in product(grid, repeat=len(free_cols)):
        point = [Fraction(0)] * n
        for c0, v in zip(free_cols, assign):
            point[c0] = v
        for rr, cc in pivots:
            point[cc] = aug[rr][n] - sum(
                aug[rr][c0] * point[c0] for c0 in range(n) if c0 != cc
            )
        values = {ring.vars[i]: point[i] for i in range(n)}
        if all(g.eval(values) > 0 for g in pop.inequalities):
            return True
    return False


def run_report(text: str, max_order: int | None = None, tol: float = 1e-8) -> StageResult:
    pf = parse_problem(text)
    pop = _pop_of(pf, "report")
    orders = pf.orders(pop.base_order, max_order)
    lines = []
    equality_verdict = None
    rank_witness = False
    if pop.equalities:
        S, I = pop.constraint_pair()
        verdict = check_equality(S, I, pf.hint_or_none())
        equality_verdict = verdict.verdict
        lines.append(verdict.render())
        if verdict.verdict == "Equal" and _linear_rank_witness(pop):
            rank_witness = True
    else:
        # no equalities: I = (0); reality is trivial and only interiority matters
        if _linear_rank_witness(pop):
            equality_verdict = "Equal"
            rank_witness = True
            lines.append("no equality constraints; interior feasible point found\n")
    report = gap_report(pop, orders, equality_verdict, rank_witness, tol=tol)
    lines.append(report.render())
    records = [
        {
            "k": r.k,
            "primal": r.primal_value,
            "dual": r.dual_value,
            "status": r.status,
            "iterations": r.iterations,
        }
        for r in report.records
    ]
    verdict = equality_verdict or "ok"
    return StageResult(
        verdict,
        "".join(lines),
        _exit_code(verdict) if verdict != "ok" else 0,
        {
            "records": records,
            "guarantee": report.guarantee,
            "guarantee_source": report.guarantee_source,
        },
    )


def run_parse(text: str) -> StageResult:
    pf = parse_problem(text)
    mode = "pop" if pf.is_pop else "set"
    lines = [f"parsed: mode={mode}, variables {', '.join(pf.ring.vars)}"]
    if pf.ideal_gens:
        lines.append("ideal generators: " + "; ".join(p.render() for p in pf.ideal_gens))
    lines.append(pf.render())
    return StageResult("ok", "\n".join(lines) + "\n", 0, {"mode": mode, "vars": list(pf.ring.vars)})
