"""Real algebraic numbers and exact sign evaluation at algebraic points.

An AlgebraicNumber is a squarefree rational defining polynomial plus an
isolating interval (closed; degenerate lo == hi for rational values).  All
decisions are exact: interval bisection for speed, with a fallback that
eliminates the defining polynomials by iterated resultants and decides zero
against a rational univariate.  A wrong sign is never returned; genuinely
degenerate eliminations raise SignUndecidable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from .factor import factor_univariate
from .mpoly import MPoly, Ring
from .unipoly import (
    UniPoly,
    isolate_squarefree,
    poly_gcd,
    refine_interval,
    squarefree_part,
    sturm_count,
)

MAX_BISECTIONS = 256


class SignUndecidable(ArithmeticError):
    """Exact sign fallback inapplicable within budget (never a wrong sign)."""


class AlgebraicNumber:
    """A real root of a squarefree rational polynomial, isolated by interval."""

    __slots__ = ("defining", "lo", "hi")

    def __init__(self, defining: UniPoly, lo: Fraction, hi: Fraction):
        object.__setattr__(self, "defining", defining)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, *args):
        raise AttributeError("AlgebraicNumber is immutable")

    @staticmethod
    def from_rational(r) -> "AlgebraicNumber":
        r = Fraction(r)
        return AlgebraicNumber(UniPoly((-r, Fraction(1))), r, r)

    @staticmethod
    def from_root(defining: UniPoly, lo: Fraction, hi: Fraction) -> "AlgebraicNumber":
        """Normalize: minimize the defining polynomial, detect rational roots."""
        if lo == hi:
            if defining(lo) != 0:
                raise ValueError("degenerate interval is not a root")
            return AlgebraicNumber.from_rational(lo)
        best = defining
        for f in factor_univariate(defining):
            try:
                if sturm_count(f.poly, lo, hi) == 1:
                    best = f.poly
                    break
            except ValueError:
                # endpoint root of this factor; refine the caller's interval instead
                continue
        if best.degree == 1:
            r = -best[0] / best[1]
            return AlgebraicNumber.from_rational(r)
        return AlgebraicNumber(best.monic(), lo, hi)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return self.lo

    def refine(self) -> "AlgebraicNumber":
        """Halve the isolating interval (returns a new number)."""
        if self.is_rational:
            return self
        lo, hi = refine_interval(self.defining, self.lo, self.hi)
        if lo == hi:
            return AlgebraicNumber.from_rational(lo)
        return AlgebraicNumber(self.defining, lo, hi)

    def refined_below(self, width: Fraction) -> "AlgebraicNumber":
        a = self
        while not a.is_rational and a.hi - a.lo >= width:
            a = a.refine()
        return a

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi

    def sign(self) -> int:
        """Sign of the number itself."""
        return self.cmp_rational(Fraction(0))

    def cmp_rational(self, q: Fraction) -> int:
        if self.is_rational:
            v = self.lo
            return (v > q) - (v < q)
        a = self
        if a.defining(q) == 0 and a.lo <= q <= a.hi:
            return 0
        while a.lo <= q <= a.hi:
            a = a.refine()
            if a.is_rational:
                return (a.lo > q) - (a.lo < q)
        return 1 if a.lo > q else -1

    def cmp(self, other: "AlgebraicNumber") -> int:
        if self.is_rational:
            return -other.cmp_rational(self.lo)
        if other.is_rational:
            return self.cmp_rational(other.lo)
        a, b = self, other
        # cheap interval separation first; the gcd test costs real gcd work
        for _ in range(6):
            if a.hi < b.lo:
                return -1
            if b.hi < a.lo:
                return 1
            a, b = a.refine(), b.refine()
            if a.is_rational or b.is_rational:
                return a.cmp(b)
        g = poly_gcd(a.defining, b.defining)
        if g.degree >= 1:
            # equal iff a common root of g lies in both intervals
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo < hi:
                while g(lo) == 0 or g(hi) == 0:
                    a, b = a.refine(), b.refine()
                    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                    if lo >= hi:
                        break
                if lo < hi and sturm_count(g, lo, hi) >= 1:
                    return 0
        while True:
            if a.hi < b.lo:
                return -1
            if b.hi < a.lo:
                return 1
            a, b = a.refine(), b.refine()
            if a.is_rational and b.is_rational:
                return (a.lo > b.lo) - (a.lo < b.lo)

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.cmp(other) == 0
        if isinstance(other, (int, Fraction)):
            return self.cmp_rational(Fraction(other)) == 0
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.cmp(other) < 0
        return self.cmp_rational(Fraction(other)) < 0

    def __le__(self, other):
        return self < other or self == other

    def __hash__(self):
        # Weak but consistent: hash by a coarse rational approximation bucket.
        a = self.refined_below(Fraction(1, 16))
        return hash((a.lo.__floor__(),))

    def to_float(self) -> float:
        a = self.refined_below(Fraction(1, 2**56))
        return float((a.lo + a.hi) / 2)

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicNumber({self.lo})"
        return f"AlgebraicNumber({self.defining!r} in [{self.lo}, {self.hi}])"


PointValue = Union[AlgebraicNumber, Fraction, int]
Point = Mapping[str, PointValue]


def as_algebraic(v: PointValue) -> AlgebraicNumber:
    if isinstance(v, AlgebraicNumber):
        return v
    return AlgebraicNumber.from_rational(Fraction(v))


def isolate_real_roots(p: UniPoly) -> list[AlgebraicNumber]:
    """All distinct real roots of p, ascending; rational roots have lo == hi."""
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree < 1:
        return []
    roots: list[AlgebraicNumber] = []
    for f in factor_univariate(p):
        q = f.poly
        if q.degree == 1:
            roots.append(AlgebraicNumber.from_rational(-q[0] / q[1]))
            continue
        for lo, hi in isolate_squarefree(q):
            roots.append(AlgebraicNumber(q.monic(), lo, hi))
    roots.sort()
    return roots


def rational_between(a: AlgebraicNumber, b: AlgebraicNumber) -> Fraction:
    """An exact rational strictly between a < b."""
    while True:
        alo, ahi = (a.lo, a.lo) if a.is_rational else (a.lo, a.hi)
        blo, bhi = (b.lo, b.lo) if b.is_rational else (b.lo, b.hi)
        if ahi < blo:
            mid = (ahi + blo) / 2
            if (a.is_rational or mid > ahi) and (b.is_rational or mid < blo):
                lo_ok = a.cmp_rational(mid) < 0 if a.is_rational else True
                hi_ok = b.cmp_rational(mid) > 0 if b.is_rational else True
                if lo_ok and hi_ok:
                    return mid
        a, b = a.refine(), b.refine()


def rational_below(a: AlgebraicNumber) -> Fraction:
    return (a.lo if a.is_rational else a.lo) - 1


def rational_above(a: AlgebraicNumber) -> Fraction:
    return (a.hi if not a.is_rational else a.lo) + 1


# -- interval arithmetic ------------------------------------------------------


def _imul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(ps), max(ps)


def _ipow(a: tuple[Fraction, Fraction], k: int):
    if k == 0:
        return (Fraction(1), Fraction(1))
    out = a
    for _ in range(k - 1):
        out = _imul(out, a)
    return out


def eval_interval(p: MPoly, ivals: Mapping[str, tuple[Fraction, Fraction]]):
    ring = p.ring
    lo = Fraction(0)
    hi = Fraction(0)
    cache: dict = {}
    for e, c in p.terms.items():
        t = (Fraction(1), Fraction(1))
        for i, k in enumerate(e):
            if k == 0:
                continue
            key = (i, k)
            if key not in cache:
                cache[key] = _ipow(ivals[ring.vars[i]], k)
            t = _imul(t, cache[key])
        tl, th = (t[0] * c, t[1] * c) if c >= 0 else (t[1] * c, t[0] * c)
        lo += tl
        hi += th
    return lo, hi


# -- exact evaluation machinery -------------------------------------------------


def _split_rational_point(point: Point):
    rat = {}
    alg = {}
    for v, val in point.items():
        a = as_algebraic(val)
        if a.is_rational:
            rat[v] = a.rational_value
        else:
            alg[v] = a
    return rat, alg


def _univariate_content(p: MPoly, var: str) -> UniPoly:
    """gcd of the coefficients of p grouped as univariate polynomials in var."""
    i = p.ring.index(var)
    groups: dict[tuple, dict[int, Fraction]] = {}
    for e, c in p.terms.items():
        rest = tuple(k for j, k in enumerate(e) if j != i)
        groups.setdefault(rest, {})[e[i]] = c
    g = UniPoly.zero(var)
    for coeffs in groups.values():
        d = max(coeffs)
        u = UniPoly([coeffs.get(k, Fraction(0)) for k in range(d + 1)], var)
        g = poly_gcd(g, u) if not g.is_zero else u.monic()
        if g.degree == 0:
            return UniPoly.const(Fraction(1), var)
    return g


def _eliminate_algebraic(f: MPoly, keep_var: str, alg: Mapping[str, AlgebraicNumber]) -> UniPoly | None:
    """Eliminate all algebraic variables from f by resultants against the
    defining polynomials; the result is a rational univariate in keep_var
    whose roots include every value of keep_var solving f at the point.

    Returns None when elimination degenerates (f vanishes identically at the
    point for a content reason), which callers treat as "no information".
    """
    from .mpoly import resultant

    ring = f.ring
    work = f
    for v in sorted(alg):
        if v not in work.variables():
            continue
        cont = _univariate_content(work, v)
        if cont.degree >= 1:
            alpha = alg[v]
            g = poly_gcd(cont, alpha.defining)
            if g.degree >= 1 and not alpha.is_rational:
                lo, hi = alpha.lo, alpha.hi
                while g(lo) == 0 or g(hi) == 0:
                    alpha = alpha.refine()
                    lo, hi = alpha.lo, alpha.hi
                if sturm_count(g, lo, hi) >= 1:
                    return None  # content vanishes at the point
            work = exact_div_by_unipoly(work, cont, v)
        dpoly = MPoly.from_unipoly(ring, alg[v].defining, v)
        work = resultant(dpoly, work, v) if work.degree_in(v) > 0 else work
    if work.is_zero:
        return None
    if work.variables() - {keep_var}:
        raise SignUndecidable("elimination left extra variables")
    return work.to_unipoly(keep_var) if keep_var in work.variables() else UniPoly(
        [work.constant_value()], keep_var
    )


def exact_div_by_unipoly(p: MPoly, u: UniPoly, var: str) -> MPoly:
    from .mpoly import exact_div

    return exact_div(p, MPoly.from_unipoly(p.ring, u, var))


_AUX = "_val_"


def sign_at(p: MPoly, point: Point, max_bisections: int = MAX_BISECTIONS) -> int:
    """Exact sign of p at a point with algebraic coordinates.

    Interval refinement first; when the value straddles zero the defining
    polynomials are eliminated into a rational univariate and zero is decided
    exactly.  Raises SignUndecidable only when the refinement budget is spent
    and the elimination degenerates.
    """
    rat, alg = _split_rational_point(point)
    q = p.substitute(rat) if rat else p
    if q.is_zero:
        return 0
    extra = q.variables() - set(alg)
    if extra:
        raise ValueError(f"point misses variables {sorted(extra)}")
    if q.is_constant():
        c = q.constant_value()
        return (c > 0) - (c < 0)

    qvars = q.variables()
    if len(qvars) == 1:
        (v,) = qvars
        return _sign_univariate_at(q.to_unipoly(v), alg[v], max_bisections)
    state = {v: alg[v] for v in alg}
    value_poly: UniPoly | None = None
    nonzero_roots: list[AlgebraicNumber] | None = None
    for round_no in range(max_bisections):
        ivals = {v: (a.lo, a.hi) for v, a in state.items() if v in q.variables()}
        lo, hi = eval_interval(q, ivals)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if value_poly is None and round_no >= 4:
            value_poly = _value_polynomial(q, alg)
            if value_poly is not None:
                if value_poly(Fraction(0)) != 0:
                    nonzero_roots = []  # zero impossible; intervals will decide
                else:
                    nonzero_roots = [
                        r for r in isolate_real_roots(value_poly) if r.sign() != 0
                    ]
        if value_poly is not None and value_poly(Fraction(0)) == 0:
            nonzero_roots = [r.refine() for r in nonzero_roots]
            if all(_excludes(lo, hi, r) for r in nonzero_roots):
                return 0
        state = {v: a.refine() for v, a in state.items()}
    raise SignUndecidable(f"sign undecided after {max_bisections} bisections")


def _sign_univariate_at(q: UniPoly, alpha: AlgebraicNumber, max_bisections: int) -> int:
    """Sign of q(alpha): gcd with the defining polynomial decides zero, and
    interval bisection decides the rest."""
    if alpha.is_rational:
        v = q(alpha.rational_value)
        return (v > 0) - (v < 0)
    g = poly_gcd(alpha.defining, q)
    if g.degree >= 1:
        a = alpha
        while g(a.lo) == 0 or g(a.hi) == 0:
            a = a.refine()
            if a.is_rational:
                v = q(a.rational_value)
                return (v > 0) - (v < 0)
        if sturm_count(g, a.lo, a.hi) >= 1:
            return 0
    a = alpha
    for _ in range(max_bisections):
        bound = _univariate_interval(q, a.lo, a.hi)
        if bound[0] > 0:
            return 1
        if bound[1] < 0:
            return -1
        a = a.refine()
        if a.is_rational:
            v = q(a.rational_value)
            return (v > 0) - (v < 0)
    raise SignUndecidable("univariate sign undecided within budget")


def _univariate_interval(q: UniPoly, lo: Fraction, hi: Fraction):
    acc_lo = Fraction(0)
    acc_hi = Fraction(0)
    plo, phi = Fraction(1), Fraction(1)
    for k, c in enumerate(q.coeffs):
        if k > 0:
            ps = (plo * lo, plo * hi, phi * lo, phi * hi)
            plo, phi = min(ps), max(ps)
        if c:
            tl, th = (plo * c, phi * c) if c > 0 else (phi * c, plo * c)
            acc_lo += tl
            acc_hi += th
    return acc_lo, acc_hi


def _excludes(lo: Fraction, hi: Fraction, r: AlgebraicNumber) -> bool:
    rlo, rhi = (r.lo, r.lo) if r.is_rational else (r.lo, r.hi)
    return rhi < lo or rlo > hi


def _value_polynomial(q: MPoly, alg: Mapping[str, AlgebraicNumber]) -> UniPoly | None:
    """A nonzero rational univariate with q(point) among its roots."""
    ring = q.ring
    ext = Ring(ring.vars + (_AUX,), ring.order)
    lift = MPoly(ext, {e + (0,): c for e, c in q.terms.items()})
    f = ext.var(_AUX) - lift
    ext_alg = dict(alg)
    u = _eliminate_algebraic(f, _AUX, ext_alg)
    if u is None or u.is_zero:
        return None
    return squarefree_part(u)


def isolate_over_point(p: MPoly, var: str, point: Point):
    """Real roots of p(point, var) in the fiber variable var.

    Returns the ordered root list, or None when p vanishes identically on
    the fiber.  Coordinates may be rational or algebraic.
    """
    rat, alg = _split_rational_point(point)
    q = p.substitute(rat) if rat else p
    if q.is_zero:
        return None
    alg = {v: a for v, a in alg.items() if v in q.variables()}
    if var not in q.variables():
        if not alg:
            return []  # nonzero constant in the fiber
        s = sign_at(q, point)
        return None if s == 0 else []
    if not alg:
        return isolate_real_roots(q.to_unipoly(var))
    # identically-zero fiber check: every coefficient vanishes at the point
    coeffs = q.coeffs_in(var)
    if all(c.is_zero or sign_at(c, point) == 0 for c in coeffs):
        return None
    elim = _eliminate_algebraic(q, var, alg)
    if elim is None or elim.is_zero:
        return None
    if elim.degree < 1:
        return []
    out = []
    for cand in isolate_real_roots(elim):
        full = dict(point)
        full[var] = cand
        if sign_at(q, full) == 0:
            out.append(cand)
    return out
