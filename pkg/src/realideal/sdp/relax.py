"""Moment / sum-of-squares relaxation pair for polynomial optimization.

The order-k pair is built over the monomial basis Lambda(k) (graded order):

  moment side   minimize  sum_a f_a y_a   subject to  y_0 = 1,
                moment matrix over Lambda(k//2) psd,
                one localizing matrix per inequality (size Lambda(d_i),
                2*d_i + deg g_i <= k),
                linear rows  L(x^a h_j) = 0  for |a| <= k - deg h_j;

  sos side      maximize q with f - q = sigma_0 + sum sigma_i g_i + sum r_j h_j,
                sigma Gram-psd at the matching truncations, r_j free.

Both sides are carried by the same exact rational tensor; the sos instance
stores the transposed (monomial-major) view, and verify_dual_pair checks
the two views against each other entry by entry.

Equality rows enter the shared tensor as +/- paired diagonal entries, which
is exactly a free multiplier split into its positive and negative parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Sequence

from ..groebner import Ideal
from ..mpoly import MPoly, Ring, monomials_upto
from ..semialg import SemialgebraicSet, SignCondition


@dataclass
class Pop:
    """minimize f over { g_i >= 0, h_j = 0 }."""

    objective: MPoly
    inequalities: list[MPoly]
    equalities: list[MPoly]

    @property
    def ring(self) -> Ring:
        return self.objective.ring

    def feasible_set(self) -> SemialgebraicSet:
        conds = [SignCondition(g, ">=") for g in self.inequalities]
        conds += [SignCondition(h, "=") for h in self.equalities]
        return SemialgebraicSet.conjunction(conds, self.ring)

    def constraint_pair(self) -> tuple[SemialgebraicSet, Ideal]:
        conds = [SignCondition(g, ">=") for g in self.inequalities]
        S = SemialgebraicSet.conjunction(conds, self.ring) if conds else SemialgebraicSet.whole_space(self.ring)
        I = Ideal(list(self.equalities), ring=self.ring) if self.equalities else None
        return S, I

    @property
    def base_order(self) -> int:
        """Smallest admissible relaxation order."""
        parts = [self.objective.total_degree()]
        parts += [-(-g.total_degree() // 2) for g in self.inequalities]
        parts += [-(-h.total_degree() // 2) for h in self.equalities]
        return max(1, max(parts))


@dataclass
class TruncationData:
    k: int
    k0: int
    ineq_orders: list[int]  # d_i = max{d : 2d + deg g_i <= k}
    eq_orders: list[int]  # e_j = k - deg h_j
    basis: list[tuple[int, ...]]  # Lambda(k), graded order
    moment_basis: list[tuple[int, ...]]  # Lambda(k // 2)
    localizer_bases: list[list[tuple[int, ...]]]


def truncation(pop: Pop, k: int) -> TruncationData:
    k0 = pop.base_order
    if k < k0:
        raise ValueError(f"order k={k} below the minimal admissible order {k0}")
    n = pop.ring.nvars
    d0 = k // 2
    ineq_orders = []
    for g in pop.inequalities:
        d = (k - g.total_degree()) // 2
        if d < 0:
            raise ValueError(f"order k={k} too small for inequality of degree {g.total_degree()}")
        ineq_orders.append(d)
    eq_orders = []
    for h in pop.equalities:
        e = k - h.total_degree()
        if e < 0:
            raise ValueError(f"order k={k} too small for equality of degree {h.total_degree()}")
        eq_orders.append(e)
    return TruncationData(
        k=k,
        k0=k0,
        ineq_orders=ineq_orders,
        eq_orders=eq_orders,
        basis=monomials_upto(n, k),
        moment_basis=monomials_upto(n, d0),
        localizer_bases=[monomials_upto(n, d) for d in ineq_orders],
    )


@dataclass
class SdpBlock:
    label: str
    size: int
    diag: bool
    # monomial-index-major sparse symmetric data: a -> [(i, j, coeff)], i <= j
    coeffs: dict[int, list[tuple[int, int, Fraction]]]

    def add(self, a: int, i: int, j: int, c: Fraction):
        if i > j:
            i, j = j, i
        self.coeffs.setdefault(a, []).append((i, j, c))


@dataclass
class SdpInstance:
    side: Literal["moment", "sos"]
    nvars: int
    k: int
    monomials: list[tuple[int, ...]]
    blocks: list[SdpBlock]
    objective: dict[int, Fraction]  # monomial index -> f coefficient

    @property
    def nmoments(self) -> int:
        return len(self.monomials) - 1

    def block_sizes(self) -> list[int]:
        return [(-b.size if b.diag else b.size) for b in self.blocks]

    def check_symmetric(self):
        for b in self.blocks:
            for a, entries in b.coeffs.items():
                for i, j, c in entries:
                    if i > j:
                        raise AssertionError("non-symmetric block data")
        return True


def _build_tensor(pop: Pop, k: int) -> tuple[TruncationData, list[SdpBlock], dict[int, Fraction]]:
    data = truncation(pop, k)
    ring = pop.ring
    index = {m: i for i, m in enumerate(data.basis)}
    blocks: list[SdpBlock] = []

    moment = SdpBlock("moment", len(data.moment_basis), False, {})
    for i, b1 in enumerate(data.moment_basis):
        for j in range(i, len(data.moment_basis)):
            b2 = data.moment_basis[j]
            s = tuple(a + b for a, b in zip(b1, b2))
            moment.add(index[s], i, j, Fraction(1))
    blocks.append(moment)

    for gi, (g, base) in enumerate(zip(pop.inequalities, data.localizer_bases)):
        blk = SdpBlock(f"localizer{gi + 1}", len(base), False, {})
        for i, b1 in enumerate(base):
            for j in range(i, len(base)):
                b2 = base[j]
                for e, c in sorted(g.terms.items()):
                    s = tuple(a + b + cc for a, b, cc in zip(b1, b2, e))
                    blk.add(index[s], i, j, c)
        blocks.append(blk)

    rows: list[tuple[int, Fraction]] = []
    eq = SdpBlock("equalities", 0, True, {})
    row = 0
    for h, e in zip(pop.equalities, data.eq_orders):
        for a in monomials_upto(pop.ring.nvars, e):
            # L(x^a h) = 0 as two diagonal inequalities
            for mono, c in sorted(h.terms.items()):
                s = tuple(x + y for x, y in zip(a, mono))
                eq.add(index[s], row, row, c)
                eq.add(index[s], row + 1, row + 1, -c)
            row += 2
    eq.size = row
    if row:
        blocks.append(eq)

    objective = {}
    for e, c in pop.objective.terms.items():
        objective[index[e]] = c
    return data, blocks, objective


def build_primal(pop: Pop, k: int) -> SdpInstance:
    """Moment-side instance (minimize L(f))."""
    data, blocks, objective = _build_tensor(pop, k)
    inst = SdpInstance("moment", pop.ring.nvars, k, data.basis, blocks, objective)
    inst.check_symmetric()
    return inst


def build_dual(pop: Pop, k: int) -> SdpInstance:
    """Gram/sos-side instance (maximize q with f - q in the module).

    Built monomial-major: for each basis monomial the Gram positions whose
    products contribute to it.  The tensor must transpose onto the moment
    side's, which verify_dual_pair checks.
    """
    data = truncation(pop, k)
    ring = pop.ring
    index = {m: i for i, m in enumerate(data.basis)}
    entries_by_mono: dict[int, dict[tuple[str, int, int], Fraction]] = {
        i: {} for i in range(len(data.basis))
    }

    def put(a: int, label: str, i: int, j: int, c: Fraction):
        if i > j:
            i, j = j, i
        key = (label, i, j)
        entries_by_mono[a][key] = entries_by_mono[a].get(key, Fraction(0)) + c

    for i, b1 in enumerate(data.moment_basis):
        for j in range(i, len(data.moment_basis)):
            s = tuple(a + b for a, b in zip(b1, data.moment_basis[j]))
            put(index[s], "moment", i, j, Fraction(1))
    for gi, (g, base) in enumerate(zip(pop.inequalities, data.localizer_bases)):
        label = f"localizer{gi + 1}"
        for i, b1 in enumerate(base):
            for j in range(i, len(base)):
                for e, c in sorted(g.terms.items()):
                    s = tuple(a + b + cc for a, b, cc in zip(b1, base[j], e))
                    put(index[s], label, i, j, c)
    row = 0
    for h, e in zip(pop.equalities, data.eq_orders):
        for a in monomials_upto(ring.nvars, e):
            for mono, c in sorted(h.terms.items()):
                s = tuple(x + y for x, y in zip(a, mono))
                put(index[s], "equalities", row, row, c)
                put(index[s], "equalities", row + 1, row + 1, -c)
            row += 2

    labels: list[str] = ["moment"]
    sizes = {"moment": len(data.moment_basis)}
    diag = {"moment": False}
    for gi, base in enumerate(data.localizer_bases):
        lb = f"localizer{gi + 1}"
        labels.append(lb)
        sizes[lb] = len(base)
        diag[lb] = False
    if row:
        labels.append("equalities")
        sizes["equalities"] = row
        diag["equalities"] = True
    blocks = [SdpBlock(lb, sizes[lb], diag[lb], {}) for lb in labels]
    by_label = {b.label: b for b in blocks}
    for a, ents in entries_by_mono.items():
        for (lb, i, j), c in sorted(ents.items()):
            if c:
                by_label[lb].coeffs.setdefault(a, []).append((i, j, c))
    objective = {index[e]: c for e, c in pop.objective.terms.items()}
    inst = SdpInstance("sos", ring.nvars, k, data.basis, blocks, objective)
    inst.check_symmetric()
    return inst


def verify_dual_pair(primal: SdpInstance, dual: SdpInstance) -> bool:
    """Exact block-wise transpose check between the two sides."""
    if primal.side != "moment" or dual.side != "sos":
        return False
    if primal.monomials != dual.monomials:
        return False

    def canon(inst: SdpInstance):
        out = {}
        for b in inst.blocks:
            for a, entries in b.coeffs.items():
                agg: dict[tuple[int, int], Fraction] = {}
                for i, j, c in entries:
                    agg[(i, j)] = agg.get((i, j), Fraction(0)) + c
                for (i, j), c in agg.items():
                    if c:
                        out[(b.label, a, i, j)] = c
        return out

    return canon(primal) == canon(dual)


# -- gap report ----------------------------------------------------------------


@dataclass
class OrderRecord:
    k: int
    primal_value: float | None
    dual_value: float | None
    status: str
    iterations: int

    def gap(self) -> float | None:
        if self.primal_value is None or self.dual_value is None:
            return None
        return self.primal_value - self.dual_value


@dataclass
class GapReport:
    records: list[OrderRecord]
    guarantee: bool
    guarantee_source: str  # "" | "equality-certificate" | "rank-witness"

    def render(self) -> str:
        lines = ["order | moment value | sos value | gap | status"]
        for r in self.records:
            pv = "-" if r.primal_value is None else f"{r.primal_value:.8f}"
            dv = "-" if r.dual_value is None else f"{r.dual_value:.8f}"
            gp = "-" if r.gap() is None else f"{r.gap():.2e}"
            lines.append(f"{r.k:5d} | {pv:>12} | {dv:>9} | {gp:>9} | {r.status}")
        if self.guarantee:
            lines.append(f"no-duality-gap guarantee: yes ({self.guarantee_source})")
        else:
            lines.append("no-duality-gap guarantee: not established")
        return "\n".join(lines) + "\n"


def gap_report(
    pop: Pop,
    orders: Sequence[int],
    equality_verdict: str | None = None,
    rank_witness: bool = False,
    tol: float = 1e-8,
) -> GapReport:
    """Solve the pair for each order and attach the applicable guarantee.

    The guarantee flag is set only when the vanishing-ideal equality test
    returned Equal; a supplied interior-point rank witness switches the
    citation to the prime/rank criterion.
    """
    from .solver import solve_pair

    records = []
    for k in orders:
        try:
            inst = build_primal(pop, k)
        except ValueError as exc:
            records.append(OrderRecord(k, None, None, f"skipped ({exc})", 0))
            continue
        try:
            res = solve_pair(inst, tol=tol)
            records.append(
                OrderRecord(k, res.primal_value, res.dual_value, res.status, res.iterations)
            )
        except Exception as exc:  # solver failures are recorded, never fatal
            records.append(OrderRecord(k, None, None, f"solver-error ({exc})", 0))
    guarantee = equality_verdict == "Equal"
    source = ""
    if guarantee:
        source = "rank-witness" if rank_witness else "equality-certificate"
    return GapReport(records, guarantee, source)
