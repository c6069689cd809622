"""Dense univariate polynomials over exact coefficients.

Coefficient lists are stored low-to-high with a nonzero leading coefficient
(empty tuple = zero polynomial).  Coefficients are Fraction, or
GaussianRational where complex data is needed; all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Iterable, Sequence

from .scalars import GaussianRational, as_fraction


class EndpointRootError(ValueError):
    """Raised when a Sturm query endpoint is itself a root."""


class UniPoly:
    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable, var: str = "x"):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    def __setattr__(self, *args):
        raise AttributeError("UniPoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(var: str = "x") -> "UniPoly":
        return UniPoly((), var)

    @staticmethod
    def const(c, var: str = "x") -> "UniPoly":
        return UniPoly((c,), var)

    @staticmethod
    def x(var: str = "x") -> "UniPoly":
        return UniPoly((Fraction(0), Fraction(1)), var)

    @staticmethod
    def from_roots(roots: Sequence, var: str = "x") -> "UniPoly":
        p = UniPoly.const(Fraction(1), var)
        for r in roots:
            p = p * UniPoly((-as_fraction(r), Fraction(1)), var)
        return p

    # -- basic queries -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)],
            self.var,
        )

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(self.var)
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return UniPoly(out, self.var)

    def scale(self, c) -> "UniPoly":
        if not c:
            return UniPoly.zero(self.var)
        return UniPoly([a * c for a in self.coeffs], self.var)

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UniPoly.const(Fraction(1), self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return UniPoly((Fraction(0),) * k + self.coeffs, self.var)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if self.degree < other.degree:
            return UniPoly.zero(self.var), self
        rem = list(self.coeffs)
        dlc = other.lc
        dd = other.degree
        quot = [Fraction(0)] * (self.degree - dd + 1)
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + dd]
            if not c:
                continue
            q = c / dlc
            quot[i] = q
            for j, oc in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] - q * oc
        return UniPoly(quot, self.var), UniPoly(rem[:dd], self.var)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("exact_div with nonzero remainder")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        lc = self.lc
        if lc == 1:
            return self
        return UniPoly([c / lc for c in self.coeffs], self.var)

    def compose_neg(self) -> "UniPoly":
        """p(-x)."""
        return UniPoly([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)], self.var)

    # -- integer normalization ------------------------------------------

    def primitive_int(self) -> tuple[Fraction, list[int]]:
        """Scale to a primitive integer coefficient list with positive lc.

        Returns (content, ints) with self = content * ints.  Rational
        coefficients only.
        """
        if self.is_zero:
            return Fraction(0), []
        denom = 1
        for c in self.coeffs:
            denom = denom * c.denominator // int_gcd(denom, c.denominator)
        ints = [int(c * denom) for c in self.coeffs]
        g = 0
        for c in ints:
            g = int_gcd(g, abs(c))
        ints = [c // g for c in ints]
        sign = 1
        if ints[-1] < 0:
            sign = -1
            ints = [-c for c in ints]
        return Fraction(sign * g, denom), ints

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self[i]
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"{c}*{self.var}" if c != 1 else self.var)
            else:
                parts.append(f"{c}*{self.var}^{i}" if c != 1 else f"{self.var}^{i}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over the coefficient field.

    Rational coefficients run through a primitive integer PRS (monic
    Euclidean remainders square coefficient sizes and die around degree 12);
    other coefficient types fall back to plain Euclid.
    """
    if a.is_zero:
        return b.monic() if not b.is_zero else b
    if b.is_zero:
        return a.monic()
    if all(isinstance(c, Fraction) for c in a.coeffs + b.coeffs):
        _, A = a.primitive_int()
        _, B = b.primitive_int()
        while B:
            A, B = B, _int_primitive_signed(_int_prem_neg(A, B))
        return UniPoly([Fraction(c) for c in A], a.var).monic()
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.is_zero:
        raise ValueError("zero polynomial")
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return p.exact_div(g).monic()


# -- Sturm sequences and root counting --------------------------------


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    """Sturm chain with primitive integer coefficients.

    Uses sign-safe pseudo-remainders and removes integer content at every
    step, so coefficients stay small (plain monic remainders square the
    coefficient size per step and стало unusable beyond degree ~12).
    """
    _, ints = p.primitive_int()
    seq_int = [ints, _int_derivative(ints)]
    while seq_int[-1]:
        a, b = seq_int[-2], seq_int[-1]
        r = _int_prem_neg(a, b)
        seq_int.append(_int_primitive_signed(r))
    seq_int.pop()
    return [UniPoly([Fraction(c) for c in coeffs], p.var) for coeffs in seq_int]


def _int_derivative(a: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(a)][1:]


def _int_primitive_signed(a: list[int]) -> list[int]:
    g = 0
    for c in a:
        g = int_gcd(g, abs(c))
    if g <= 1:
        return a
    return [c // g for c in a]


def _int_prem_neg(a: list[int], b: list[int]) -> list[int]:
    """-(a mod b) scaled by a positive constant (keeps Sturm sign semantics)."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return [-c for c in a]
    lb = b[-1]
    steps = da - db + 1
    r = list(a)
    done = 0
    while r and len(r) - 1 >= db:
        dr = len(r) - 1
        lr = r[-1]
        shift = dr - db
        r = [lb * c for c in r]
        for j, bc in enumerate(b):
            r[shift + j] -= lr * bc
        while r and r[-1] == 0:
            r.pop()
        done += 1
    # r = lb^done * (a mod b); negate, correcting for a negative multiplier
    sign = -1 if lb > 0 or done % 2 == 0 else 1
    return [sign * c for c in r]


def _variations(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: UniPoly, a: Fraction, b: Fraction, seq: list[UniPoly] | None = None) -> int:
    """Number of distinct real roots of p in the open interval (a, b).

    Raises EndpointRootError when p vanishes at an endpoint, in which case
    the caller must perturb the interval.
    """
    if a >= b:
        raise ValueError("need a < b")
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p(a) == 0 or p(b) == 0:
        raise EndpointRootError("Sturm endpoint is a root; perturb the interval")
    if seq is None:
        seq = sturm_sequence(p)
    return _variations([q(a) for q in seq]) - _variations([q(b) for q in seq])


def root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    if p.degree < 1:
        return Fraction(1)
    lc = abs(p.lc)
    m = max(abs(c) for c in p.coeffs[:-1]) if p.degree >= 1 else Fraction(0)
    return Fraction(1) + m / lc


def isolate_squarefree(p: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open isolating intervals for all real roots of squarefree p.

    Each returned (lo, hi) satisfies p(lo) != 0, p(hi) != 0 and contains
    exactly one root.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree < 1:
        return []
    seq = sturm_sequence(p)
    bound = root_bound(p)
    lo, hi = -bound, bound
    # Endpoint safety: Cauchy bound is strict, no roots at +-bound.
    total = sturm_count(p, lo, hi, seq)
    out: list[tuple[Fraction, Fraction]] = []

    def split(a: Fraction, b: Fraction, count: int):
        if count == 0:
            return
        if count == 1:
            out.append((a, b))
            return
        mid = (a + b) / 2
        if p(mid) == 0:
            # Nudge the split point until it is not a root.
            eps = (b - a) / 4
            while p(mid + eps) == 0:
                eps /= 2
            mid = mid + eps
        left = sturm_count(p, a, mid, seq)
        split(a, mid, left)
        split(mid, b, count - left)

    split(lo, hi, total)
    out.sort()
    return out


def refine_interval(p: UniPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """One bisection step on an isolating interval of squarefree p."""
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    vm = p(mid)
    if vm == 0:
        return mid, mid
    if p(lo) * vm < 0:
        return lo, mid
    return mid, hi
