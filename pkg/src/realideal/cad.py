"""Cylindrical algebraic decomposition machinery.

Projection is Collins-style per level: leading coefficients, principal
subresultant coefficients of each polynomial with its derivative and of
each pair, everything normalized to primitive squarefree factors (bounded
factorization).  The base line is decomposed into alternating sectors and
sections; stacks are lifted level by level with exact algebraic samples.
Sector samples are always rational; section samples are AlgebraicNumbers
defined by rational polynomials, so every sign decision stays exact.

Delineability is not re-proved: each stack over a fully open parent cell is
probed at three points of the parent's top sector and the per-polynomial
fiber root counts must agree, otherwise a CadError names the offending
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebraic import (
    AlgebraicNumber,
    as_algebraic,
    isolate_over_point,
    rational_between,
    sign_at,
)
from .factor import factor_mpoly
from .groebner import Ideal
from .mpoly import MPoly, Ring, subresultant_chain
from .semialg import SemialgebraicSet


class CadError(RuntimeError):
    """Refinement / delineability failure, carrying the offending data."""

    def __init__(self, message: str, poly: MPoly | None = None):
        super().__init__(message)
        self.poly = poly


# -- factor normalization ---------------------------------------------------------


def normalize_factors(polys: Iterable[MPoly]) -> list[MPoly]:
    """Primitive squarefree factors, deduplicated and canonically ordered.

    Constants are dropped.  Factorization is best-effort: capped pieces stay
    as unfactored squarefree polynomials, which changes labels but not cell
    geometry.
    """
    out: dict = {}
    for p in polys:
        if p.is_zero or p.is_constant():
            continue
        for f in factor_mpoly(p):
            q = f.poly.primitive()
            key = tuple(sorted(q.terms.items()))
            out.setdefault(key, q)
    factors = list(out.values())
    factors.sort(key=lambda q: (q.total_degree(), q.render()))
    return factors


# -- projection ------------------------------------------------------------------


def project(polys: Iterable[MPoly], var: str) -> list[MPoly]:
    """Collins projection of the given level set with respect to var.

    Output: normalized factors of the leading coefficients together with the
    principal-subresultant data of each polynomial with its derivative and
    of each pair.  The psc data is read off the subresultant PRS: its
    leading coefficients differ from the Sylvester-minor psc values only by
    products of leading-coefficient powers, which are already in the output,
    so the projection zero set is unchanged (at worst refined).
    """
    level = [p for p in polys if p.degree_in(var) >= 1]
    raw: list[MPoly] = []
    for p in level:
        coeffs = p.coeffs_in(var)
        raw.append(coeffs[-1])  # leading coefficient
        dp = p.derivative(var)
        if p.degree_in(var) >= 2:
            raw.extend(_psc_chain_fast(p, dp, var))
    for i in range(len(level)):
        for j in range(i + 1, len(level)):
            p, q = level[i], level[j]
            if p.degree_in(var) < q.degree_in(var):
                p, q = q, p
            raw.extend(_psc_chain_fast(p, q, var))
    return normalize_factors(raw)


def _psc_chain_fast(p: MPoly, q: MPoly, var: str) -> list[MPoly]:
    """Principal subresultant zero-set data via the primitive PRS.

    Each remainder splits as content * primitive (content taken wrt var);
    the subresultant psc zero set is covered by the contents plus the
    primitive leading coefficients, with coefficients kept primitive at
    every step to stop integer blowup.
    """
    from .mpoly import _prem, mpoly_gcd, exact_div as _exact_div

    out: list[MPoly] = []
    a, b = p, q
    guard = p.degree_in(var) + q.degree_in(var) + 2
    for _ in range(guard):
        if b.is_zero or b.degree_in(var) <= 0:
            if not b.is_zero and not b.is_constant():
                out.append(b)
            break
        r = _prem(a, b, var)
        if r.is_zero:
            break
        cont = None
        for c in r.coeffs_in(var):
            if c.is_zero:
                continue
            cont = c.primitive() if cont is None else mpoly_gcd(cont, c)
            if cont.is_constant():
                cont = None
                break
        if cont is not None:
            if not cont.is_constant():
                out.append(cont)
            r = _exact_div(r, cont)
        r = r.primitive()
        d = r.degree_in(var)
        if d >= 1:
            lc = r.coeffs_in(var)[d]
            if not lc.is_constant():
                out.append(lc)
        a, b = b, r
    return out


@dataclass
class ProjectionLadder:
    """Per-level squarefree factor sets for the P-chain and the Q-chain.

    Factors are grouped two ways: ``p_levels``/``q_levels`` by highest
    variable (what stack construction needs), and ``q_production`` by the
    projection step that produced them (factors visible "at level k" of the
    textbook presentation: produced while eliminating variable k+1, or
    handed down unchanged).  Defining-polynomial selection for the
    augmentation step reads the production view.
    """

    var_order: tuple[str, ...]
    p_levels: list[list[MPoly]]
    q_levels: list[list[MPoly]]
    q_production: list[tuple[MPoly, int, int]]  # (factor, varlevel, production)

    @property
    def nlevels(self) -> int:
        return len(self.var_order)

    def selection_factors(self, level: int) -> list[MPoly]:
        """Factors of the textbook Q^level set: living in the first ``level``
        variables and produced at projection step >= level."""
        return [
            f
            for f, varlevel, production in self.q_production
            if varlevel <= level and production >= level
        ]


def _assign_levels(factors: Sequence[MPoly], var_order: Sequence[str]) -> list[list[MPoly]]:
    levels: list[list[MPoly]] = [[] for _ in var_order]
    rank = {v: i for i, v in enumerate(var_order)}
    for f in factors:
        used = f.variables()
        lvl = max(rank[v] for v in used)
        levels[lvl].append(f)
    return levels


def _project_chain(
    polys: Sequence[MPoly], var_order: Sequence[str]
) -> tuple[list[list[MPoly]], list[tuple[MPoly, int, int]]]:
    n = len(var_order)
    rank = {v: i for i, v in enumerate(var_order)}
    production: dict = {}

    def varlevel(f: MPoly) -> int:
        return max(rank[v] for v in f.variables()) + 1

    start = normalize_factors(polys)
    levels = _assign_levels(start, var_order)
    for f in start:
        production[tuple(sorted(f.terms.items()))] = n
    for lvl in range(n - 1, 0, -1):
        if not levels[lvl]:
            continue
        projected = project(levels[lvl], var_order[lvl])
        for f in projected:
            key = tuple(sorted(f.terms.items()))
            production.setdefault(key, lvl)
        merged = _assign_levels(projected, var_order)
        for k in range(lvl):
            levels[k] = normalize_factors(levels[k] + merged[k])
    tagged = []
    for lvl_list in levels:
        for f in lvl_list:
            key = tuple(sorted(f.terms.items()))
            tagged.append((f, varlevel(f), production.get(key, n)))
    return levels, tagged


def build_ladder(
    p_polys: Sequence[MPoly], q_polys: Sequence[MPoly], var_order: Sequence[str]
) -> ProjectionLadder:
    """Project the P set (variety generators) and Q set (P plus constraint
    polynomials) from the top level down to the base line."""
    var_order = tuple(var_order)
    p_levels, _ = _project_chain(list(p_polys), var_order)
    q_levels, tagged = _project_chain(list(q_polys) + list(p_polys), var_order)
    return ProjectionLadder(var_order, p_levels, q_levels, tagged)


# -- cells -------------------------------------------------------------------------


@dataclass
class Cell:
    level: int
    kind: str  # "sector" | "section"
    path: tuple[int, ...]
    sample: dict[str, AlgebraicNumber]
    signs: tuple[int, ...]  # over the level's Q-polynomials
    dim: int
    parent: "Cell | None" = None
    lower: AlgebraicNumber | None = None  # sector bounds in the top coordinate
    upper: AlgebraicNumber | None = None

    @property
    def is_open(self) -> bool:
        return self.dim == self.level

    def coordinates(self, var_order: Sequence[str]) -> list[AlgebraicNumber]:
        return [self.sample[v] for v in var_order[: self.level]]

    def render_sample(self, var_order: Sequence[str], digits: int = 6) -> str:
        vals = []
        for v in var_order[: self.level]:
            a = self.sample[v]
            if a.is_rational:
                vals.append(f"{v}={a.rational_value}")
            else:
                vals.append(f"{v}~{a.to_float():.{digits}f}")
        return "(" + ", ".join(vals) + ")"


@dataclass
class CadTree:
    ladder: ProjectionLadder
    cells: list[list[Cell]]  # index by level-1; cells[lvl][i]

    @property
    def var_order(self) -> tuple[str, ...]:
        return self.ladder.var_order

    def top_cells(self) -> list[Cell]:
        return self.cells[-1] if self.cells else []

    def level_cells(self, level: int) -> list[Cell]:
        return self.cells[level - 1]


# -- base line ---------------------------------------------------------------------


def base_cells(factors: Sequence[MPoly], var: str) -> list[Cell]:
    """Level-1 cells: alternating sectors and sections from the sorted union
    of real roots; sector samples are rational midpoints, +-1 outside."""
    from .algebraic import isolate_real_roots

    roots: list[AlgebraicNumber] = []
    for f in factors:
        if f.is_constant():
            continue
        for r in isolate_real_roots(f.to_unipoly(var)):
            if not any(r.cmp(s) == 0 for s in roots):
                roots.append(r)
    roots.sort()
    cells: list[Cell] = []

    def add(kind, sample, lower=None, upper=None):
        idx = len(cells)
        cells.append(
            Cell(
                level=1,
                kind=kind,
                path=(idx,),
                sample={var: sample},
                signs=tuple(_sign_of_factor(f, {var: sample}) for f in factors),
                dim=1 if kind == "sector" else 0,
                lower=lower,
                upper=upper,
            )
        )

    if not roots:
        add("sector", AlgebraicNumber.from_rational(0))
        return cells
    first = roots[0]
    lo_sample = (first.lo if first.is_rational else first.lo) - 1
    add("sector", AlgebraicNumber.from_rational(lo_sample), upper=first)
    for i, r in enumerate(roots):
        add("section", r)
        if i + 1 < len(roots):
            mid = rational_between(r, roots[i + 1])
            add("sector", AlgebraicNumber.from_rational(mid), lower=r, upper=roots[i + 1])
        else:
            hi_sample = (r.lo if r.is_rational else r.hi) + 1
            add("sector", AlgebraicNumber.from_rational(hi_sample), lower=r)
    return cells


def _sign_of_factor(f: MPoly, sample: dict) -> int:
    return sign_at(f, sample)


# -- lifting -----------------------------------------------------------------------


def lift(cell: Cell, level_polys: Sequence[MPoly], var: str, probe: bool = True) -> list[Cell]:
    """Stack construction over one cell.

    Substitutes the cell sample into each level polynomial, isolates the
    fiber roots, and emits alternating sector/section cells.  Polynomials
    that vanish identically on the fiber contribute sign 0 and no sections;
    over a fully open parent this is treated as a delineability failure.
    When ``probe`` is set and the parent's top coordinate is a sector, fiber
    root counts are checked at three points across the sector.
    """
    point = cell.sample
    roots_per_poly: list[list[AlgebraicNumber] | None] = []
    for p in level_polys:
        rp = isolate_over_point(p, var, point)
        if rp is None and cell.is_open:
            raise CadError(
                f"{p.render()} vanishes identically over open cell {cell.path}", p
            )
        roots_per_poly.append(rp)
    if probe and cell.kind == "sector" and level_polys:
        _probe_sector(cell, level_polys, var, roots_per_poly)
    merged: list[AlgebraicNumber] = []
    for rp in roots_per_poly:
        for r in rp or []:
            if not any(r.cmp(s) == 0 for s in merged):
                merged.append(r)
    merged.sort()
    out: list[Cell] = []

    def add(kind, value, lower=None, upper=None):
        sample = dict(point)
        sample[var] = value
        signs = []
        for p, rp in zip(level_polys, roots_per_poly):
            if rp is None:
                signs.append(0)
            elif kind == "section" and any(value.cmp(r) == 0 for r in rp):
                signs.append(0)
            else:
                signs.append(sign_at(p, sample))
        out.append(
            Cell(
                level=cell.level + 1,
                kind=kind,
                path=cell.path + (len(out),),
                sample=sample,
                signs=tuple(signs),
                dim=cell.dim + (1 if kind == "sector" else 0),
                parent=cell,
                lower=lower,
                upper=upper,
            )
        )

    if not merged:
        add("sector", AlgebraicNumber.from_rational(0))
        return out
    first = merged[0]
    add("sector", AlgebraicNumber.from_rational((first.lo) - 1), upper=first)
    for i, r in enumerate(merged):
        add("section", r)
        if i + 1 < len(merged):
            mid = rational_between(r, merged[i + 1])
            add("sector", AlgebraicNumber.from_rational(mid), lower=r, upper=merged[i + 1])
        else:
            add("sector", AlgebraicNumber.from_rational((r.hi if not r.is_rational else r.lo) + 1), lower=r)
    return out


def _probe_sector(cell: Cell, level_polys, var, roots_at_sample):
    """Root-count consistency at three points across the parent's sector."""
    top_var = None
    for v in reversed(list(cell.sample)):
        top_var = v
        break
    sample_val = cell.sample[top_var]
    if not sample_val.is_rational:
        return
    s = sample_val.rational_value
    lo = cell.lower
    hi = cell.upper
    p1 = rational_between(lo, AlgebraicNumber.from_rational(s)) if lo is not None else s - 1
    p2 = rational_between(AlgebraicNumber.from_rational(s), hi) if hi is not None else s + 1
    expected = [None if rp is None else len(rp) for rp in roots_at_sample]
    for probe_val in (p1, p2):
        pt = dict(cell.sample)
        pt[top_var] = AlgebraicNumber.from_rational(probe_val)
        for p, want in zip(level_polys, expected):
            rp = isolate_over_point(p, var, pt)
            got = None if rp is None else len(rp)
            if got != want:
                raise CadError(
                    f"fiber root count of {p.render()} varies across sector "
                    f"{cell.path}: {want} at sample vs {got} at {top_var}={probe_val}",
                    p,
                )


# -- full tree ----------------------------------------------------------------------


def build_cad(
    polys: Sequence[MPoly],
    var_order: Sequence[str],
    upto_level: int | None = None,
    extra_top: Sequence[MPoly] = (),
    probe: bool = True,
) -> CadTree:
    """Full sign-invariant decomposition for the Q-chain of ``polys``.

    ``upto_level`` stops the stack construction early (base CAD for the
    equality test); default is the full space.
    """
    var_order = tuple(var_order)
    ladder = build_ladder([], list(polys) + list(extra_top), var_order)
    return build_cells_from_ladder(ladder, upto_level, probe=probe)


def build_cells_from_ladder(
    ladder: ProjectionLadder, upto_level: int | None = None, probe: bool = True
) -> CadTree:
    n = upto_level if upto_level is not None else ladder.nlevels
    cells: list[list[Cell]] = []
    if n == 0:
        return CadTree(ladder, [])
    level1 = base_cells(ladder.q_levels[0], ladder.var_order[0])
    cells.append(level1)
    for lvl in range(2, n + 1):
        prev = cells[-1]
        cur: list[Cell] = []
        for cell in prev:
            cur.extend(
                lift(cell, ladder.q_levels[lvl - 1], ladder.var_order[lvl - 1], probe=probe)
            )
        cells.append(cur)
    return CadTree(ladder, cells)


def section_lift_points(
    ladder: ProjectionLadder, base_sample: dict, from_level: int
):
    """Candidate variety points over a base sample, lifting only through
    sections of the P-chain polynomials.

    At每 each fiber level the candidates are the union of the real roots of
    the non-vanishing level polynomials; when the level imposes no
    constraint at all (no polynomials, or every one vanishes identically on
    the fiber) the rational point 0 stands in for the free line.  Yields
    complete sample dicts at the top level, in deterministic order.
    """
    var_order = ladder.var_order
    n = ladder.nlevels

    def rec(level: int, point: dict):
        if level > n:
            yield dict(point)
            return
        var = var_order[level - 1]
        polys = ladder.p_levels[level - 1]
        candidates: list[AlgebraicNumber] = []
        saw_poly = False
        all_vanish = True
        for p in polys:
            saw_poly = True
            roots = isolate_over_point(p, var, point)
            if roots is None:
                continue
            all_vanish = False
            for r in roots:
                if not any(r.cmp(s) == 0 for s in candidates):
                    candidates.append(r)
        candidates.sort()
        if not candidates:
            if saw_poly and not all_vanish:
                return  # constrained fiber with no real section: dead branch
            candidates = [AlgebraicNumber.from_rational(0)]
        for r in candidates:
            point[var] = r
            yield from rec(level + 1, point)
            del point[var]

    yield from rec(from_level, dict(base_sample))


def variety_cells(tree: CadTree, I: Ideal, S: SemialgebraicSet) -> list[Cell]:
    """Top-level cells contained in V(I) and satisfying S.

    Cell sign-invariance makes the sample decide for the whole cell: the
    generators must evaluate to 0 and some conjunct of S must hold.
    """
    if I.is_trivial:
        return []
    out = []
    for cell in tree.top_cells():
        pt = cell.sample
        if all(sign_at(g, pt) == 0 for g in I.gens) and S.satisfied_at(pt):
            out.append(cell)
    return out


def top_dimension(cells: Sequence[Cell]) -> int:
    """Maximal cell dimension; -1 for the empty family."""
    return max((c.dim for c in cells), default=-1)


# -- reporting ---------------------------------------------------------------------


def dump_tree(tree: CadTree, title: str = "CAD") -> str:
    lines = [f"== {title} =="]
    lines.append("variable order: " + ", ".join(tree.var_order))
    for lvl in range(1, tree.ladder.nlevels + 1):
        qs = tree.ladder.q_levels[lvl - 1]
        ps = tree.ladder.p_levels[lvl - 1]
        lines.append(f"level {lvl} ({tree.var_order[lvl - 1]}):")
        lines.append("  Q-factors: " + (", ".join(f.render() for f in qs) if qs else "(none)"))
        if ps:
            lines.append("  P-factors: " + ", ".join(f.render() for f in ps))
    for lvl, cells in enumerate(tree.cells, start=1):
        lines.append(f"cells at level {lvl}: {len(cells)}")
        for c in cells:
            mark = "sector " if c.kind == "sector" else "section"
            lines.append(
                f"  [{'.'.join(map(str, c.path))}] {mark} dim={c.dim} "
                f"sample {c.render_sample(tree.var_order)} signs={list(c.signs)}"
            )
    return "\n".join(lines) + "\n"
