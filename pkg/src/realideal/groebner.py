"""Groebner bases (Buchberger) and ideal arithmetic.

Reduced bases are unique for a fixed monomial order, so ideal equality is
decided by comparing them.  Intersections and quotients go through the
classic auxiliary-variable eliminations; dimension is the maximal
independent-set count on the leading-term ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .mpoly import (
    GREVLEX,
    MonomialOrder,
    MPoly,
    Ring,
    elimination_order,
    exact_div,
)


def normal_form(f: MPoly, basis: Sequence[MPoly], order: MonomialOrder = GREVLEX) -> MPoly:
    """Remainder of f under multivariate division by basis."""
    if f.is_zero or not basis:
        return f
    ring = f.ring
    lead = [(g.leading_exponents(order), g.leading_coeff(order), g) for g in basis]
    rem = ring.zero()
    work = f
    while not work.is_zero:
        e = work.leading_exponents(order)
        c = work.terms[e]
        hit = None
        for le, lc, g in lead:
            if all(a >= b for a, b in zip(e, le)):
                hit = (le, lc, g)
                break
        if hit is None:
            t = ring.monomial(e, c)
            rem = rem + t
            work = work - t
        else:
            le, lc, g = hit
            t = ring.monomial(tuple(a - b for a, b in zip(e, le)), c / lc)
            work = work - t * g
    return rem


def _lcm_exp(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides_exp(a, b):
    return all(x <= y for x, y in zip(a, b))


def _spoly(f: MPoly, g: MPoly, order: MonomialOrder) -> MPoly:
    ring = f.ring
    lf, lg = f.leading_exponents(order), g.leading_exponents(order)
    l = _lcm_exp(lf, lg)
    mf = ring.monomial(tuple(a - b for a, b in zip(l, lf)), 1 / f.leading_coeff(order))
    mg = ring.monomial(tuple(a - b for a, b in zip(l, lg)), 1 / g.leading_coeff(order))
    return mf * f - mg * g


def buchberger(gens: Iterable[MPoly], order: MonomialOrder = GREVLEX) -> list[MPoly]:
    """Reduced Groebner basis (deterministic for fixed input and order)."""
    ring = None
    basis: list[MPoly] = []
    for g in gens:
        ring = ring or g.ring
        if not g.is_zero:
            basis.append(g)
    if ring is None:
        raise ValueError("no generators (empty ring unknown)")
    if not basis:
        return []
    basis.sort(key=lambda g: (order.key(g.leading_exponents(order)), g.render(order)))
    basis = [g * (1 / g.leading_coeff(order)) for g in basis]

    pairs: set[tuple[int, int]] = set()

    def add_pairs(k: int):
        for i in range(k):
            pairs.add((i, k))

    for k in range(1, len(basis)):
        add_pairs(k)

    lead = [g.leading_exponents(order) for g in basis]

    while pairs:
        # normal strategy: smallest lcm in the order, then smallest indices
        best = min(pairs, key=lambda ij: (order.key(_lcm_exp(lead[ij[0]], lead[ij[1]])), ij))
        pairs.discard(best)
        i, j = best
        li, lj = lead[i], lead[j]
        l = _lcm_exp(li, lj)
        # Buchberger 1: coprime leading terms
        if all(a + b == m for a, b, m in zip(li, lj, l)):
            continue
        # Buchberger 2 (chain): some k with LT_k | lcm and both pairs handled
        skip = False
        for k in range(len(basis)):
            if k in (i, j) or not _divides_exp(lead[k], l):
                continue
            p1 = (min(i, k), max(i, k))
            p2 = (min(j, k), max(j, k))
            if p1 not in pairs and p2 not in pairs:
                skip = True
                break
        if skip:
            continue
        s = normal_form(_spoly(basis[i], basis[j], order), basis, order)
        if s.is_zero:
            continue
        s = s * (1 / s.leading_coeff(order))
        basis.append(s)
        lead.append(s.leading_exponents(order))
        add_pairs(len(basis) - 1)
    return reduce_basis(basis, order)


def reduce_basis(basis: Sequence[MPoly], order: MonomialOrder = GREVLEX) -> list[MPoly]:
    """Minimal, fully inter-reduced, monic basis, sorted ascending."""
    basis = [g for g in basis if not g.is_zero]
    if not basis:
        return []
    lead = [g.leading_exponents(order) for g in basis]
    keep = []
    for i, le in enumerate(lead):
        if any(
            j != i and _divides_exp(lead[j], le) and (lead[j] != le or j < i)
            for j in range(len(basis))
        ):
            continue
        keep.append(i)
    minimal = [basis[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = normal_form(g, others, order)
        if not r.is_zero:
            reduced.append(r * (1 / r.leading_coeff(order)))
    reduced.sort(key=lambda g: order.key(g.leading_exponents(order)))
    return reduced


class Ideal:
    """An ideal with a cached reduced Groebner basis."""

    __slots__ = ("ring", "gens", "order", "_gb")

    def __init__(self, gens: Sequence[MPoly], order: MonomialOrder = GREVLEX, ring: Ring | None = None):
        gens = [g for g in gens]
        if ring is None:
            if not gens:
                raise ValueError("empty generator list needs an explicit ring")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator ring mismatch")
        self.ring = ring
        self.gens = tuple(g for g in gens if not g.is_zero)
        self.order = order
        self._gb: tuple[MPoly, ...] | None = None

    def groebner(self) -> tuple[MPoly, ...]:
        if self._gb is None:
            if not self.gens:
                self._gb = ()
            else:
                self._gb = tuple(buchberger(self.gens, self.order))
        return self._gb

    def normal_form(self, f: MPoly) -> MPoly:
        return normal_form(f, self.groebner(), self.order)

    def member(self, f: MPoly) -> bool:
        return self.normal_form(f).is_zero

    @property
    def is_zero_ideal(self) -> bool:
        return not self.groebner()

    @property
    def is_trivial(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.member(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        """Ideal equality via mutual reduction (reduced bases are unique)."""
        if self.ring != other.ring:
            return False
        if self.order == other.order:
            return self.groebner() == other.groebner()
        return self.contains_ideal(other) and other.contains_ideal(self)

    def with_extra_gens(self, extra: Sequence[MPoly]) -> "Ideal":
        return Ideal(list(self.gens) + list(extra), self.order, self.ring)

    def min_generator_degree(self) -> int:
        gb = self.groebner()
        if not gb:
            return 0
        return min(g.total_degree() for g in gb)

    def render(self) -> str:
        return "<" + ", ".join(g.render(self.order) for g in self.groebner()) + ">"

    def __repr__(self):
        return f"Ideal{self.render()}"


# -- ring extension helpers -------------------------------------------------------


def _extend_ring(ring: Ring, new_vars: Sequence[str], front: bool = True) -> Ring:
    for v in new_vars:
        if v in ring.vars:
            raise ValueError(f"variable {v} already present")
    if front:
        return Ring(tuple(new_vars) + ring.vars)
    return Ring(ring.vars + tuple(new_vars))


def lift_poly(p: MPoly, big: Ring) -> MPoly:
    pos = [big.index(v) for v in p.ring.vars]
    terms = {}
    for e, c in p.terms.items():
        ne = [0] * big.nvars
        for i, k in enumerate(e):
            ne[pos[i]] = k
        terms[tuple(ne)] = c
    return MPoly(big, terms)


def drop_vars(p: MPoly, small: Ring) -> MPoly:
    pos = [p.ring.index(v) for v in small.vars]
    other = [i for i in range(p.ring.nvars) if i not in pos]
    terms = {}
    for e, c in p.terms.items():
        if any(e[i] for i in other):
            raise ValueError("polynomial involves dropped variables")
        terms[tuple(e[i] for i in pos)] = c
    return MPoly(small, terms)


# -- elimination, intersection, quotient -----------------------------------------


def elimination_ideal(I: Ideal, keep: Sequence[str]) -> list[MPoly]:
    """Generators of I intersected with the subring on ``keep`` variables."""
    ring = I.ring
    keep = list(keep)
    drop = [v for v in ring.vars if v not in keep]
    if not drop:
        return list(I.groebner())
    reordered = Ring(tuple(drop) + tuple(keep))
    order = elimination_order(len(drop))
    gb = buchberger([lift_poly(g, reordered) for g in I.gens], order)
    small = Ring(tuple(keep))
    out = []
    for g in gb:
        if g.variables() <= set(keep):
            out.append(drop_vars(g, small))
    return out


def rationally_trivial(I: Ideal, subset: Sequence[str]) -> bool:
    """True iff I meets the subring Q[subset] nontrivially (1 in C(subset)I)."""
    if I.is_trivial:
        return True
    return bool(elimination_ideal(I, subset))


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via the t*I + (1-t)*J elimination construction."""
    if I.ring != J.ring:
        raise ValueError("ambient ring mismatch")
    ring = I.ring
    big = _extend_ring(ring, ("_t_",), front=True)
    t = big.var("_t_")
    gens = [t * lift_poly(g, big) for g in I.gens]
    gens += [(big.one() - t) * lift_poly(g, big) for g in J.gens]
    if not gens:
        return Ideal([], I.order, ring)
    gb = buchberger(gens, elimination_order(1))
    out = [drop_vars(g, ring) for g in gb if "_t_" not in g.variables()]
    return Ideal(out, I.order, ring)


def quotient(I: Ideal, g: MPoly) -> Ideal:
    """(I : <g>) = {s : s*g in I}."""
    if g.is_zero:
        raise ValueError("quotient by the zero polynomial")
    J = Ideal([g], I.order, I.ring)
    meet = intersect(I, J)
    out = [exact_div(h, g) for h in meet.groebner()]
    return Ideal(buchberger(out, I.order) if out else [], I.order, I.ring)


def saturation_one_step(I: Ideal, g: MPoly) -> Ideal:
    return quotient(I, g)


def radical_member(f: MPoly, I: Ideal) -> bool:
    """f in sqrt(I) via the Rabinowitsch trick: 1 in <I, 1 - t*f>."""
    ring = I.ring
    big = _extend_ring(ring, ("_t_",), front=True)
    gens = [lift_poly(g, big) for g in I.gens]
    gens.append(big.one() - big.var("_t_") * lift_poly(f, big))
    J = Ideal(gens, GREVLEX, big)
    return J.is_trivial


# -- dimension ---------------------------------------------------------------------


def leading_exponent_set(I: Ideal) -> list[tuple[int, ...]]:
    return [g.leading_exponents(I.order) for g in I.groebner()]


def _subset_independent(lead: list[tuple[int, ...]], subset: tuple[int, ...]) -> bool:
    ss = set(subset)
    for e in lead:
        if all(k == 0 or i in ss for i, k in enumerate(e)):
            return False
    return True


def independent_sets_of_size(I: Ideal, size: int) -> list[tuple[int, ...]]:
    lead = leading_exponent_set(I)
    n = I.ring.nvars
    return [s for s in combinations(range(n), size) if _subset_independent(lead, s)]


def dimension(I: Ideal) -> int:
    """Krull dimension of the quotient ring; -1 for the unit ideal."""
    if I.is_trivial:
        return -1
    lead = leading_exponent_set(I)
    n = I.ring.nvars
    if not lead:
        return n
    for size in range(n, 0, -1):
        for s in combinations(range(n), size):
            if _subset_independent(lead, s):
                return size
    return 0


def first_independent_set(I: Ideal, size: int) -> tuple[str, ...] | None:
    """Lexicographically first independent variable subset of the given size."""
    for s in combinations(range(I.ring.nvars), size):
        if _subset_independent(leading_exponent_set(I), s):
            return tuple(I.ring.vars[i] for i in s)
    return None


def is_zero_dimensional(I: Ideal) -> bool:
    if I.is_trivial:
        return False
    return dimension(I) == 0


def standard_monomials_upto(I: Ideal, d: int) -> list[tuple[int, ...]]:
    """Monomials of degree <= d outside the leading-term ideal."""
    from .mpoly import monomials_upto

    lead = leading_exponent_set(I)
    out = []
    for e in monomials_upto(I.ring.nvars, d):
        if not any(_divides_exp(le, e) for le in lead):
            out.append(e)
    return out
