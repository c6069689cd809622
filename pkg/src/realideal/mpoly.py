"""Sparse multivariate polynomials with exact coefficients.

Terms live in a dict mapping exponent tuples to nonzero coefficients
(Fraction or GaussianRational).  Monomial orders are small strategy objects;
grevlex is the default everywhere.  Resultants and subresultant chains are
taken with respect to one variable, with all determinant conventions fixed
by the Sylvester matrix laid out row-wise as

    [ x^(n-1)*p, ..., p, x^(m-1)*q, ..., q ]     (coefficients by descending power)

where m = deg p, n = deg q.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .scalars import GaussianRational, as_fraction, conj_scalar
from .unipoly import UniPoly

Exponents = tuple[int, ...]


class MonomialOrder:
    """Total multiplicative order on exponent tuples; 1 is minimal.

    kind is "lex", "grevlex" or "block"; block orders eliminate the first
    ``split`` variables (grevlex within each block).
    """

    __slots__ = ("kind", "split")

    def __init__(self, kind: str = "grevlex", split: int = 0):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.split = split

    def key(self, exps: Exponents):
        """Sort key; larger key = larger monomial."""
        if self.kind == "lex":
            return exps
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        head, tail = exps[: self.split], exps[self.split :]
        return (_grevlex_key(head), _grevlex_key(tail))

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.split == other.split
        )

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', split={self.split})"
        return f"MonomialOrder({self.kind!r})"


def _grevlex_key(exps: Exponents):
    return (sum(exps), tuple(-e for e in reversed(exps)))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


class Ring:
    """Ambient polynomial ring: an ordered tuple of variable names."""

    __slots__ = ("vars", "order", "_index")

    def __init__(self, variables: Sequence[str], order: MonomialOrder = GREVLEX):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        self.order = order
        self._index = {v: i for i, v in enumerate(self.vars)}

    def __eq__(self, other):
        return isinstance(other, Ring) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __repr__(self):
        return f"Ring({list(self.vars)!r})"

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise KeyError(f"variable {var!r} not in ring {self.vars}") from None

    def zero(self) -> "MPoly":
        return MPoly(self, {})

    def one(self) -> "MPoly":
        return MPoly(self, {(0,) * self.nvars: Fraction(1)})

    def const(self, c) -> "MPoly":
        if isinstance(c, (int, str)):
            c = as_fraction(c)
        if not c:
            return self.zero()
        return MPoly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "MPoly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return MPoly(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["MPoly"]:
        return [self.var(v) for v in self.vars]

    def monomial(self, exps: Exponents, coeff=Fraction(1)) -> "MPoly":
        if len(exps) != self.nvars:
            raise ValueError("exponent length mismatch")
        if not coeff:
            return self.zero()
        return MPoly(self, {tuple(exps): coeff})


class MPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c})

    def __setattr__(self, *args):
        raise AttributeError("MPoly is immutable")

    # -- queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        if self.is_zero:
            return -1
        i = self.ring.index(var)
        return max(e[i] for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.ring.vars[i])
        return used

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return (self - self.ring.const(other)).is_zero
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- leading data ------------------------------------------------------

    def leading_exponents(self, order: MonomialOrder = GREVLEX) -> Exponents:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder = GREVLEX):
        return self.terms[self.leading_exponents(order)]

    def sorted_terms(self, order: MonomialOrder = GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- ring arithmetic -----------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                return self.ring.zero()
            return MPoly(self.ring, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            if not other:
                raise ZeroDivisionError
            inv = Fraction(1) / other if not isinstance(other, GaussianRational) else 1 / other
            return self * inv
        return NotImplemented

    def map_coeffs(self, fn) -> "MPoly":
        return MPoly(self.ring, {e: fn(c) for e, c in self.terms.items()})

    def conj(self) -> "MPoly":
        """Conjugate the coefficients only (acts on nothing else)."""
        return self.map_coeffs(conj_scalar)

    def real_imag(self) -> tuple["MPoly", "MPoly"]:
        """Split a + b*i into (a, b) with rational coefficients."""
        re: dict = {}
        im: dict = {}
        for e, c in self.terms.items():
            if isinstance(c, GaussianRational):
                if c.re:
                    re[e] = c.re
                if c.im:
                    im[e] = c.im
            else:
                re[e] = c
        return MPoly(self.ring, re), MPoly(self.ring, im)

    # -- calculus / substitution --------------------------------------------

    def derivative(self, var: str) -> "MPoly":
        i = self.ring.index(var)
        out: dict = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            ne = tuple(ne)
            s = out.get(ne, 0) + c * e[i]
            if s:
                out[ne] = s
            else:
                out.pop(ne, None)
        return MPoly(self.ring, out)

    def substitute(self, assignment: dict) -> "MPoly":
        """Substitute values (scalars or MPoly in the same ring) for variables."""
        for v in assignment:
            self.ring.index(v)
        values = {}
        for v, val in assignment.items():
            if isinstance(val, MPoly):
                self._check(val)
                values[self.ring.index(v)] = val
            else:
                values[self.ring.index(v)] = self.ring.const(
                    val if isinstance(val, (Fraction, GaussianRational)) else as_fraction(val)
                )
        result = self.ring.zero()
        pow_cache: dict = {}
        for e, c in self.terms.items():
            term = self.ring.const(c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if i in values:
                    key = (i, k)
                    if key not in pow_cache:
                        pow_cache[key] = values[i] ** k
                    term = term * pow_cache[key]
                else:
                    term = term * self.ring.monomial(
                        tuple(k if j == i else 0 for j in range(self.ring.nvars))
                    )
            result = result + term
        return result

    def eval(self, point: dict):
        """Evaluate at a full rational point; returns a scalar."""
        missing = self.variables() - set(point)
        if missing:
            raise ValueError(f"missing values for {sorted(missing)}")
        return self.substitute(point).constant_value()

    # -- univariate views -----------------------------------------------------

    def coeffs_in(self, var: str) -> list["MPoly"]:
        """Coefficient list (low-to-high) viewing self as univariate in var."""
        i = self.ring.index(var)
        d = self.degree_in(var)
        if d < 0:
            return []
        buckets: list[dict] = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            ne = list(e)
            k = ne[i]
            ne[i] = 0
            buckets[k][tuple(ne)] = c
        return [MPoly(self.ring, b) for b in buckets]

    @staticmethod
    def from_coeffs_in(ring: Ring, var: str, coeffs: Sequence["MPoly"]) -> "MPoly":
        i = ring.index(var)
        out = ring.zero()
        xv = ring.var(var)
        for k, c in enumerate(coeffs):
            out = out + c * xv**k
        return out

    def to_unipoly(self, var: str | None = None) -> UniPoly:
        """Convert to a dense UniPoly; all other variables must be absent."""
        used = self.variables()
        if var is None:
            if len(used) > 1:
                raise ValueError(f"polynomial involves several variables: {sorted(used)}")
            var = next(iter(used)) if used else self.ring.vars[0]
        if used - {var}:
            raise ValueError(f"polynomial involves {sorted(used)}, not univariate in {var}")
        i = self.ring.index(var)
        d = self.degree_in(var)
        coeffs = [Fraction(0)] * (d + 1)
        for e, c in self.terms.items():
            coeffs[e[i]] = c
        return UniPoly(coeffs, var)

    @staticmethod
    def from_unipoly(ring: Ring, p: UniPoly, var: str | None = None) -> "MPoly":
        var = var or p.var
        i = ring.index(var)
        terms = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * ring.nvars
                e[i] = k
                terms[tuple(e)] = c
        return MPoly(ring, terms)

    # -- normalization ---------------------------------------------------------

    def content_and_primitive(self) -> tuple[Fraction, "MPoly"]:
        """Rational content (positive leading sign under grevlex) and primitive part."""
        if self.is_zero:
            return Fraction(0), self
        from math import gcd as _gcd

        denom = 1
        for c in self.terms.values():
            f = c if isinstance(c, Fraction) else None
            if f is None:
                raise ValueError("content only for rational coefficients")
            denom = denom * f.denominator // _gcd(denom, f.denominator)
        num = 0
        for c in self.terms.values():
            num = _gcd(num, abs(int(c * denom)))
        cont = Fraction(num, denom)
        if self.leading_coeff(GREVLEX) < 0:
            cont = -cont
        return cont, self * (1 / cont)

    def primitive(self) -> "MPoly":
        return self.content_and_primitive()[1]

    # -- rendering ---------------------------------------------------------------

    def render(self, order: MonomialOrder | None = None) -> str:
        """Canonical text form, terms sorted descending by the given order."""
        if self.is_zero:
            return "0"
        order = order or self.ring.order
        parts: list[str] = []
        for e, c in self.sorted_terms(order):
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.ring.vars, e) if k
            )
            if isinstance(c, GaussianRational):
                cs = f"({c})"
                piece = f"{cs}*{mono}" if mono else cs
                parts.append("+ " + piece)
                continue
            sign = "- " if c < 0 else "+ "
            a = abs(c)
            if not mono:
                piece = f"{a}"
            elif a == 1:
                piece = mono
            else:
                piece = f"{a}*{mono}"
            parts.append(sign + piece)
        s = " ".join(parts)
        if s.startswith("+ "):
            s = s[2:]
        elif s.startswith("- "):
            s = "-" + s[2:]
        return s

    def __repr__(self):
        return self.render()


# -- exact division -------------------------------------------------------------


def exact_div(num: MPoly, den: MPoly, order: MonomialOrder = GREVLEX) -> MPoly:
    """Exact polynomial division; raises if den does not divide num."""
    if den.is_zero:
        raise ZeroDivisionError("exact_div by zero")
    ring = num.ring
    quot = ring.zero()
    rem = num
    den_le = den.leading_exponents(order)
    den_lc = den.leading_coeff(order)
    while not rem.is_zero:
        le = rem.leading_exponents(order)
        diff = tuple(a - b for a, b in zip(le, den_le))
        if any(d < 0 for d in diff):
            raise ValueError("exact_div: not divisible")
        c = rem.leading_coeff(order) / den_lc
        t = ring.monomial(diff, c)
        quot = quot + t
        rem = rem - t * den
    return quot


def divides(den: MPoly, num: MPoly, order: MonomialOrder = GREVLEX) -> bool:
    try:
        exact_div(num, den, order)
        return True
    except ValueError:
        return False


# -- multivariate gcd (primitive PRS recursion) -------------------------------


def mpoly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """gcd over Q[vars], normalized primitive with positive leading coefficient."""
    if a.is_zero:
        return b.primitive() if not b.is_zero else b
    if b.is_zero:
        return a.primitive()
    used = sorted(a.variables() | b.variables())
    if len(used) == 1:
        from .unipoly import poly_gcd

        v = used[0]
        g = poly_gcd(a.to_unipoly(v), b.to_unipoly(v))
        return MPoly.from_unipoly(a.ring, g, v).primitive()
    return _gcd_rec(a, b, used).primitive()


def _gcd_rec(a: MPoly, b: MPoly, variables: list[str]) -> MPoly:
    ring = a.ring
    if not variables:
        return ring.one()
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    var = variables[-1]
    rest = variables[:-1]
    ca, pa = _content_in(a, var, rest)
    cb, pb = _content_in(b, var, rest)
    cont = _gcd_rec(ca, cb, rest)
    # primitive PRS on pa, pb in var
    f, g = (pa, pb) if pa.degree_in(var) >= pb.degree_in(var) else (pb, pa)
    while not g.is_zero:
        r = _prem(f, g, var)
        f, g = g, _primitive_in(r, var, rest)
    if f.degree_in(var) <= 0 and f.is_constant():
        return cont
    return cont * f


def _content_in(p: MPoly, var: str, rest: list[str]) -> tuple[MPoly, MPoly]:
    """Content of p wrt var (a poly in the remaining vars) and primitive part."""
    coeffs = p.coeffs_in(var)
    cont = p.ring.zero()
    for c in coeffs:
        if c.is_zero:
            continue
        cont = _gcd_rec(cont, c, rest)
        if cont.is_constant() and not cont.is_zero:
            cont = p.ring.one()
            break
    if cont.is_zero:
        cont = p.ring.one()
    return cont, exact_div(p, cont)


def _primitive_in(p: MPoly, var: str, rest: list[str]) -> MPoly:
    if p.is_zero:
        return p
    return _content_in(p, var, rest)[1]


def mpoly_lcm(a: MPoly, b: MPoly) -> MPoly:
    if a.is_zero or b.is_zero:
        return a.ring.zero()
    g = mpoly_gcd(a, b)
    return exact_div(a * b, g).primitive()


def _prem(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g, computed in var."""
    df, dg = f.degree_in(var), g.degree_in(var)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    if df < dg:
        return f
    ring = f.ring
    xv = ring.var(var)
    glc = g.coeffs_in(var)[dg]
    steps = df - dg + 1
    r = f
    done = 0
    while not r.is_zero and r.degree_in(var) >= dg:
        dr = r.degree_in(var)
        rlc = r.coeffs_in(var)[dr]
        r = glc * r - rlc * xv ** (dr - dg) * g
        done += 1
    if done < steps:
        r = glc ** (steps - done) * r
    return r


# -- resultants and subresultants ------------------------------------------------


def sylvester_matrix(p: MPoly, q: MPoly, var: str) -> list[list[MPoly]]:
    m, n = p.degree_in(var), q.degree_in(var)
    if m < 0 or n < 0:
        raise ValueError("zero polynomial in Sylvester matrix")
    ring = p.ring
    pc = p.coeffs_in(var)  # low-to-high
    qc = q.coeffs_in(var)
    size = m + n
    rows: list[list[MPoly]] = []
    for i in range(n):
        row = [ring.zero()] * size
        for k, c in enumerate(reversed(pc)):  # descending power
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [ring.zero()] * size
        for k, c in enumerate(reversed(qc)):
            row[i + k] = c
        rows.append(row)
    return rows


def bareiss_det(matrix: list[list[MPoly]]) -> MPoly:
    """Fraction-free determinant of a square MPoly matrix."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    ring = matrix[0][0].ring
    if n == 1:
        return matrix[0][0]
    m = [row[:] for row in matrix]
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if m[k][k].is_zero:
            pivot_row = next((i for i in range(k + 1, n) if not m[i][k].is_zero), None)
            if pivot_row is None:
                return ring.zero()
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = exact_div(num, prev)
            m[i][k] = ring.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant_det(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Resultant as the Sylvester determinant (reference path)."""
    return bareiss_det(sylvester_matrix(p, q, var))


def psc_det(p: MPoly, q: MPoly, var: str, j: int) -> MPoly:
    """j-th principal subresultant coefficient as a Sylvester-minor determinant.

    Rows: x^(n-j-1)p..p and x^(m-j-1)q..q; columns: the first m+n-2j columns
    of the descending-power layout.
    """
    m, n = p.degree_in(var), q.degree_in(var)
    if j < 0 or j > min(m, n):
        raise ValueError("psc index out of range")
    if j == min(m, n):
        # Degenerate square case: size-0 minor is 1 by convention when j == n <= m.
        if m == n:
            return p.ring.one()
        c = q.coeffs_in(var)[n] if n < m else p.coeffs_in(var)[m]
        return c ** (m - j) if n < m else c ** (n - j)
    ring = p.ring
    pc = list(reversed(p.coeffs_in(var)))
    qc = list(reversed(q.coeffs_in(var)))
    size = m + n - 2 * j
    rows: list[list[MPoly]] = []
    for i in range(n - j):
        row = [ring.zero()] * size
        for k, c in enumerate(pc):
            if i + k < size:
                row[i + k] = c
        rows.append(row)
    for i in range(m - j):
        row = [ring.zero()] * size
        for k, c in enumerate(qc):
            if i + k < size:
                row[i + k] = c
        rows.append(row)
    return bareiss_det(rows)


def subresultant_prs(p: MPoly, q: MPoly, var: str) -> list[MPoly]:
    """Subresultant polynomial remainder sequence (Brown), starting [p, q].

    The elements are the classic subresultant PRS; their zero sets (and the
    gcd structure) are what downstream projection uses.
    """
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dp < dq:
        p, q = q, p
        dp, dq = dq, dp
    if q.is_zero:
        return [p]
    ring = p.ring
    seq = [p, q]
    g = ring.one()
    h = ring.one()
    a, b = p, q
    while True:
        da, db = a.degree_in(var), b.degree_in(var)
        d = da - db
        r = _prem(a, b, var)
        if r.is_zero:
            break
        denom = g * h**d
        r = exact_div(r, denom)
        seq.append(r)
        a, b = b, r
        g = a.coeffs_in(var)[a.degree_in(var)]
        if d > 1:
            h = exact_div(g**d, h ** (d - 1))
        else:
            h = h ** (1 - d) * g**d
        if b.degree_in(var) == 0:
            break
    return seq


def resultant(p: MPoly, q: MPoly, var: str) -> MPoly:
    """Resultant wrt var, equal to the Sylvester determinant."""
    m, n = p.degree_in(var), q.degree_in(var)
    if m < 0 or n < 0:
        raise ValueError("resultant of zero polynomial")
    if m == 0 and n == 0:
        raise ValueError("both polynomials constant in " + var)
    if m == 0:
        return p**n
    if n == 0:
        return q**m
    return bareiss_det(sylvester_matrix(p, q, var))


def subresultant_chain(p: MPoly, q: MPoly, var: str) -> list[MPoly]:
    """Principal subresultant coefficients psc_0..psc_min(m,n).

    Entry j is the determinant of the corresponding Sylvester submatrix;
    psc_0 is the resultant.
    """
    m, n = p.degree_in(var), q.degree_in(var)
    if m < n:
        raise ValueError("need deg p >= deg q in " + var)
    if n < 0:
        raise ValueError("q is zero")
    return [psc_det(p, q, var, j) for j in range(n + 1)]


# -- Jacobians and linear changes ---------------------------------------------


class PolyMatrix:
    """A rectangular matrix of MPoly entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[MPoly]]):
        rows = [list(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return PolyMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def __repr__(self):
        return "PolyMatrix(" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + ")"


def jacobian(gens: Sequence[MPoly], variables: Sequence[str] | None = None) -> PolyMatrix:
    """Matrix of partials: entry (i, j) = d gens[i] / d vars[j]."""
    gens = list(gens)
    if not gens:
        raise ValueError("no generators")
    ring = gens[0].ring
    variables = list(variables) if variables is not None else list(ring.vars)
    return PolyMatrix([[g.derivative(v) for v in variables] for g in gens])


def linear_change(p: MPoly, T: Sequence[Sequence[int]]) -> MPoly:
    """Apply the substitution x_i -> sum_j T[i][j] x_j (p composed with T)."""
    ring = p.ring
    n = ring.nvars
    rows = [list(r) for r in T]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("T must be n x n")
    if _int_det(rows) == 0:
        raise ValueError("singular linear change")
    images = {
        ring.vars[i]: sum(
            (ring.var(ring.vars[j]) * Fraction(rows[i][j]) for j in range(n)),
            ring.zero(),
        )
        for i in range(n)
    }
    return p.substitute(images)


def invert_int_matrix(T: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in r] for r in T]
    n = len(rows)
    aug = [rows[i] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        f = aug[k][k]
        aug[k] = [x / f for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                g = aug[i][k]
                aug[i] = [a - g * b for a, b in zip(aug[i], aug[k])]
    return [r[n:] for r in aug]


def _int_det(rows: list[list[int]]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return det


# -- monomial enumeration ----------------------------------------------------


def monomials_upto(nvars: int, d: int) -> list[Exponents]:
    """All exponent tuples of total degree <= d, graded (ascending degree,
    lexicographically descending within a degree)."""
    out: list[Exponents] = []
    for deg in range(d + 1):
        out.extend(_monomials_of_degree(nvars, deg))
    return out


def _monomials_of_degree(nvars: int, deg: int) -> list[Exponents]:
    if nvars == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, deg - first):
            out.append((first,) + rest)
    return out
