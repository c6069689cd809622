"""Scoped prime decomposition and the complexified-splitting test.

Decomposition is supported for principal ideals (via bounded multivariate
factorization) and for user-supplied component lists, which are always
verified: the intersection of the components must equal the input ideal
exactly.  Primality over the rationals is *proved* only for principal ideals
with an irreducible generator and for zero-dimensional ideals in shape
position; anything else is recorded as trusted.

The splitting test looks for real polynomials a, b, reduced against the
ideal, with a^2 + b^2 in I but a, b not in I: such a pair witnesses that the
complexified ideal is not prime (equivalently that the reality definition
fails with two squares).  The search runs over standard monomials up to half
the minimal generator degree, normalizes one coefficient of a to 1, and
solves the resulting quadratic coefficient system by Groebner basis plus a
deterministic specialization search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .factor import factor_mpoly, squarefree_primitive
from .groebner import (
    Ideal,
    buchberger,
    dimension,
    intersect,
    normal_form,
    radical_member,
)
from .mpoly import GREVLEX, LEX, MPoly, Ring
from .scalars import GaussianRational

SPLIT_SPECIALIZATION_VALUES = (0, 1, -1, 2, -2)
SPLIT_BUDGET = 4000


class UnsupportedScopeError(ValueError):
    """Raised when an operation needs machinery outside the scoped classes."""


@dataclass(frozen=True)
class SplitResult:
    verdict: Literal["PrimeOverC", "Split", "Inconclusive"]
    re_part: MPoly | None = None
    im_part: MPoly | None = None

    def witness(self) -> MPoly:
        """g = a + b*sqrt(-1) over Gaussian rationals."""
        if self.verdict != "Split":
            raise ValueError("no witness unless Split")
        i = GaussianRational(0, 1)
        return self.re_part + self.im_part.map_coeffs(lambda c: i * c)


@dataclass
class DecompositionCertificate:
    components: list[Ideal]
    origin: Literal["computed", "user-supplied"]
    evidence: list[Literal["proved", "trusted"]]

    def __post_init__(self):
        if len(self.components) != len(self.evidence):
            raise ValueError("evidence list length mismatch")


def primality_evidence(I: Ideal) -> Literal["proved", "trusted"]:
    """'proved' for the two scoped classes, else 'trusted'."""
    gb = I.groebner()
    if len(gb) == 1:
        fs = factor_mpoly(gb[0])
        if len(fs) == 1 and fs[0].mult == 1 and fs[0].certified:
            return "proved"
        return "trusted"
    if dimension(I) == 0 and _shape_position_prime(I):
        return "proved"
    return "trusted"


def _shape_position_prime(I: Ideal) -> bool:
    from .factor import is_irreducible

    ring = I.ring
    lex_gb = buchberger(list(I.gens), LEX)
    last = ring.vars[-1]
    univ = None
    linear_seen = set()
    for g in lex_gb:
        used = g.variables()
        if used <= {last}:
            univ = g
            continue
        lead = g.leading_exponents(LEX)
        idx = [i for i, k in enumerate(lead) if k]
        if len(idx) != 1 or lead[idx[0]] != 1:
            return False
        v = ring.vars[idx[0]]
        if (used - {last}) != {v} or g.degree_in(v) != 1:
            return False
        linear_seen.add(v)
    if univ is None:
        return False
    if linear_seen != set(ring.vars[:-1]):
        return False
    return is_irreducible(univ.to_unipoly(last))


def decompose_scoped(
    I: Ideal, hint: Sequence[Sequence[MPoly]] | DecompositionCertificate | None = None
) -> DecompositionCertificate:
    """Prime decomposition within scope.

    Principal ideals decompose by factoring the generator.  Non-principal
    ideals need a hint (a list of generator lists); the hint is verified by
    recomputing the intersection and comparing reduced bases.
    """
    if I.is_trivial:
        raise ValueError("the unit ideal has no prime decomposition")
    if I.is_zero_ideal:
        raise ValueError("the zero ideal is not supported")
    if hint is not None:
        if isinstance(hint, DecompositionCertificate):
            comps = hint.components
        else:
            comps = [Ideal(list(gs), I.order, I.ring) for gs in hint]
        if not comps:
            raise ValueError("empty hint")
        meet = comps[0]
        for c in comps[1:]:
            meet = intersect(meet, c)
        if not meet.equals(I):
            raise ValueError("hint rejected: component intersection differs from the ideal")
        for c in comps:
            if not c.contains_ideal(I):
                raise ValueError("hint rejected: a component does not contain the ideal")
        return DecompositionCertificate(
            comps, "user-supplied", [primality_evidence(c) for c in comps]
        )
    gb = I.groebner()
    if len(gb) == 1:
        factors = factor_mpoly(gb[0])
        if any(not f.certified for f in factors):
            raise UnsupportedScopeError(
                "factorization capped; supply a decomposition hint"
            )
        comps = [Ideal([f.poly], I.order, I.ring) for f in factors]
        return DecompositionCertificate(comps, "computed", ["proved"] * len(comps))
    raise UnsupportedScopeError(
        "non-principal ideal: supply a decomposition hint (component generator lists)"
    )


# -- complexified splitting ---------------------------------------------------------


def complexified_split(I: Ideal, max_degree: int | None = None) -> SplitResult:
    """Decide whether C[x]*I splits off a conjugate factor pair.

    Searches for reduced a, b with a^2 + b^2 in I and a, b nonzero mod I.
    A successful search returns the witness; exhausting all bounded systems
    definitively returns PrimeOverC for that bound; blowing the budget
    returns Inconclusive.
    """
    if I.is_trivial or I.is_zero_ideal:
        raise ValueError("split test needs a proper nonzero ideal")
    from .groebner import standard_monomials_upto

    gb = I.groebner()
    bound = max_degree
    if bound is None:
        bound = max(1, -(-min(g.total_degree() for g in gb) // 2))
    ring = I.ring
    inconclusive = False
    for d in range(1, bound + 1):
        monos = standard_monomials_upto(I, d)
        if len(monos) <= 1:
            continue
        nf_table = {}
        for i, m1 in enumerate(monos):
            for m2 in monos[i:]:
                prod = tuple(a + b for a, b in zip(m1, m2))
                if prod not in nf_table:
                    nf_table[prod] = I.normal_form(ring.monomial(prod))
        # constants last: witnesses in practice lead with a genuine monomial
        betas = [m for m in monos if sum(m)] + [m for m in monos if not sum(m)]
        for beta in betas:
            result = _split_system(I, monos, beta, nf_table)
            if result == "budget":
                inconclusive = True
                continue
            if result is not None:
                a, b = result
                if b.is_zero:
                    b = a  # a^2 in I with a not in I; (a, a) meets the contract
                return SplitResult("Split", a, b)
    return SplitResult("Inconclusive" if inconclusive else "PrimeOverC")


def _split_system(I: Ideal, monos, beta, nf_table):
    """Solve for a = x^beta + sum u_m x^m, b = sum v_m x^m with a^2+b^2 in I."""
    ring = I.ring
    others = [m for m in monos if m != beta]
    unames = [f"u{i}" for i in range(len(others))]
    vnames = [f"v{i}" for i in range(len(monos))]
    U = Ring(tuple(unames + vnames))
    ucoeff = {m: U.var(unames[i]) for i, m in enumerate(others)}
    ucoeff[beta] = U.one()
    vcoeff = {m: U.var(vnames[i]) for i, m in enumerate(monos)}
    # coefficient equations of NF(a^2 + b^2), grouped by x-monomial
    eq_terms: dict[tuple, MPoly] = {}
    for i, m1 in enumerate(monos):
        for j in range(i, len(monos)):
            m2 = monos[j]
            prod = tuple(a + b for a, b in zip(m1, m2))
            nf = nf_table[prod]
            if nf.is_zero:
                continue
            mult = 1 if i == j else 2
            coeff = ucoeff[m1] * ucoeff[m2] + vcoeff[m1] * vcoeff[m2]
            for e, c in nf.terms.items():
                cur = eq_terms.get(e, U.zero())
                eq_terms[e] = cur + coeff * (c * mult)
    eqs = [p for p in eq_terms.values() if not p.is_zero]
    sol = _solve_rational_point(eqs, U, [SPLIT_BUDGET])
    if sol in ("inconsistent", "budget"):
        return None if sol == "inconsistent" else "budget"
    a = ring.monomial(beta)
    for i, m in enumerate(others):
        c = sol[unames[i]]
        if c:
            a = a + ring.monomial(m, c)
    b = ring.zero()
    for i, m in enumerate(monos):
        c = sol[vnames[i]]
        if c:
            b = b + ring.monomial(m, c)
    if not I.member(a * a + b * b):
        return None  # defensive; specialization verified consistency
    if I.member(a):
        return None
    return a, b


def _positive_even_split(p: MPoly):
    """Classify p as a positive combination of even-exponent monomials.

    Returns "posdef" (positive constant term: no real zeros), a list of
    half-exponent monomials that must all vanish on any real zero (zero
    constant term), or None when the shape does not apply.
    """
    if p.is_zero:
        return None
    coeffs = list(p.terms.values())
    if any(isinstance(c, GaussianRational) for c in coeffs):
        return None
    sign = 1 if coeffs[0] > 0 else -1
    if any((c > 0) != (sign > 0) for c in coeffs):
        return None
    if any(k % 2 for e in p.terms for k in e):
        return None
    const = p.terms.get((0,) * p.ring.nvars)
    if const:
        return "posdef"
    return [p.ring.monomial(tuple(k // 2 for k in e)) for e in sorted(p.terms)]


def _strip_positive_factors(p: MPoly):
    """Remove positive-definite factors (same real zero set).

    Returns None when every factor is positive definite (p has no real
    zeros), else the product of the remaining factors, each once.
    """
    if p.total_degree() > 8 or p.ring.nvars > 6:
        return p
    kept = p.ring.one()
    any_kept = False
    for f in factor_mpoly(p):
        if _positive_even_split(f.poly) == "posdef":
            continue
        kept = kept * f.poly
        any_kept = True
    if not any_kept:
        return None
    return kept


def really_inconsistent(eqs: list[MPoly], max_rounds: int = 6) -> bool:
    """Sound test that a polynomial system has no real solutions.

    Alternates Groebner bases with real-sound refinements: an element that
    is a positive-definite even form cannot vanish; an even positive form
    with zero constant forces its square-root monomials to vanish;
    positive-definite factors of an element are dropped.  Returns False
    whenever no certificate is found (never unsound).
    """
    system = [p for p in eqs if not p.is_zero]
    for _ in range(max_rounds):
        if not system:
            return False
        gb = buchberger(system, GREVLEX)
        if len(gb) == 1 and gb[0].is_constant():
            return True
        changed = False
        new_system: list[MPoly] = []
        for g in gb:
            h = _strip_positive_factors(g)
            if h is None:
                return True
            split = _positive_even_split(h)
            if split == "posdef":
                return True
            if isinstance(split, list):
                changed = True
                new_system.extend(split)
                continue
            if h.terms != g.terms:
                changed = True
            new_system.append(h)
        if not changed:
            return False
        system = new_system
    return False


def _solve_rational_point(eqs: list[MPoly], U: Ring, budget: list[int]):
    """Deterministic search for a rational solution of a polynomial system.

    Returns a dict var -> Fraction, or "inconsistent" when the system has no
    real solution at all, or "budget" when the search space is exhausted
    without a decision.
    """
    if not eqs:
        return {v: Fraction(0) for v in U.vars}
    gb = buchberger(eqs, GREVLEX)
    if len(gb) == 1 and gb[0].is_constant():
        return "inconsistent"
    if really_inconsistent(list(gb)):
        return "inconsistent"

    def search(current_eqs, assignment, remaining):
        budget[0] -= 1
        if budget[0] <= 0:
            return "budget"
        if not remaining:
            return dict(assignment)
        v = remaining[0]
        rest = remaining[1:]
        saw_budget = False
        for c in SPLIT_SPECIALIZATION_VALUES:
            budget[0] -= 1
            if budget[0] <= 0:
                return "budget"
            sub = [p.substitute({v: Fraction(c)}) for p in current_eqs]
            nonzero = [p for p in sub if not p.is_zero]
            if any(p.is_constant() and not p.is_zero for p in nonzero):
                continue
            if nonzero:
                g = buchberger(nonzero, GREVLEX)
                if len(g) == 1 and g[0].is_constant():
                    continue
                nonzero = g
            assignment[v] = Fraction(c)
            res = search(nonzero, assignment, rest)
            if res == "budget":
                saw_budget = True
                del assignment[v]
                return "budget"
            if res is not None:
                return res
            del assignment[v]
        return "budget" if saw_budget else None

    res = search(list(gb), {}, list(U.vars))
    if res is None:
        # No solution over the specialization grid; the system may still have
        # one elsewhere, so treat as exhausted rather than inconsistent.
        return "budget"
    return res


# -- scoped radical repair ------------------------------------------------------


def radical_repair(I: Ideal, rounds: int = 8) -> Ideal:
    """Replace a primary component by a candidate for its radical.

    Iterates squarefree reduction of the reduced basis until stable, then
    verifies variety equality with the input in both directions by radical
    membership (Rabinowitsch).  Raises UnsupportedScopeError when the
    candidate cannot be verified.
    """
    work = I
    for _ in range(rounds):
        gb = work.groebner()
        new = [squarefree_primitive(g) for g in gb]
        cand = Ideal(buchberger(new, I.order), I.order, I.ring)
        if cand.equals(work):
            break
        work = cand
    if not all(radical_member(g, I) for g in work.gens):
        raise UnsupportedScopeError("radical repair unverifiable (candidate too large)")
    if not all(radical_member(g, work) for g in I.gens):
        raise UnsupportedScopeError("radical repair unverifiable (candidate too small)")
    return work


def is_radical_candidate(I: Ideal) -> bool:
    """True when squarefree reduction leaves the reduced basis unchanged."""
    gb = I.groebner()
    return all(squarefree_primitive(g).primitive() == g.primitive() for g in gb)
