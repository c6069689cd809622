"""Polynomial factorization over the rationals.

Univariate: squarefree (Yun) decomposition followed by Zassenhaus --
Berlekamp factorization modulo a small prime, quadratic Hensel lifting,
subset recombination.  Degree is capped (default 32); beyond the cap the
squarefree factor is returned unfactored and marked uncertified.

Multivariate: monomial/content extraction, then Kronecker substitution to a
univariate image with subset recombination, capped at total degree 12.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd as int_gcd, isqrt

from .mpoly import MPoly, exact_div as mp_exact_div, mpoly_gcd
from .unipoly import UniPoly, poly_gcd

UNIVARIATE_DEGREE_CAP = 32
MULTIVARIATE_DEGREE_CAP = 12
_RECOMBINATION_BUDGET = 200_000


@dataclass(frozen=True)
class Factor:
    poly: UniPoly
    mult: int
    certified: bool = True


@dataclass(frozen=True)
class MFactor:
    poly: MPoly
    mult: int
    certified: bool = True


# -- squarefree decomposition (Yun) -------------------------------------------


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: p = c * prod f_i^i with the f_i squarefree, coprime."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    p = p.monic()
    if p.degree < 1:
        return []
    out = []
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return [(p, 1)]
    w = p.exact_div(g)
    y = p.derivative().exact_div(g)
    z = y - w.derivative()
    i = 1
    while not z.is_zero:
        f = poly_gcd(w, z)
        if f.degree > 0:
            out.append((f, i))
        w = w.exact_div(f)
        y = z.exact_div(f)
        z = y - w.derivative()
        i += 1
    if w.degree > 0:
        out.append((w, i))
    return out


# -- arithmetic mod m on integer coefficient lists ----------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _psub(a, b, m):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _pmul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % m
    return _trim(out)


def _pscale(a, c, m):
    return _trim([(x * c) % m for x in a])


def _pdivmod_monic(a, b, m):
    """divmod by b with invertible leading coefficient, coefficients mod m."""
    a = list(a)
    lb = b[-1]
    linv = pow(lb, -1, m)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], _trim(a)
    q = [0] * (len(a) - db)
    for i in range(len(q) - 1, -1, -1):
        c = (a[i + db] * linv) % m
        if c:
            q[i] = c
            for j, bc in enumerate(b):
                a[i + j] = (a[i + j] - c * bc) % m
    return _trim(q), _trim(a[:db])


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        _, a = _pdivmod_monic(a, b, p)
        a, b = b, a
    if a:
        a = _pscale(a, pow(a[-1], -1, p), p)
    return a


def _ppowmod(base, e, mod_poly, p):
    result = [1]
    base = _pdivmod_monic(base, mod_poly, p)[1]
    while e:
        if e & 1:
            result = _pdivmod_monic(_pmul(result, base, p), mod_poly, p)[1]
        base = _pdivmod_monic(_pmul(base, base, p), mod_poly, p)[1]
        e >>= 1
    return result


def _smod(x: int, m: int) -> int:
    x %= m
    if 2 * x > m:
        x -= m
    return x


def _psmod(a, m):
    return _trim([_smod(x, m) for x in a])


# -- Berlekamp factorization over F_p ------------------------------------------


def _berlekamp(f: list[int], p: int) -> list[list[int]]:
    """Irreducible monic factors of squarefree monic f over F_p (deterministic)."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    xp = _ppowmod([0, 1], p, f, p)
    rows = []
    r = [1]
    for _ in range(n):
        rows.append([(r[j] if j < len(r) else 0) for j in range(n)])
        r = _pdivmod_monic(_pmul(r, xp, p), f, p)[1]
    # kernel of (Q - I)^T : vectors v with sum v_i rows_i = v
    mat = [[(rows[i][j] - (1 if i == j else 0)) % p for i in range(n)] for j in range(n)]
    basis = _nullspace_mod(mat, p)
    r_count = len(basis)
    factors = [f]
    if r_count == 1:
        return factors
    for v in basis:
        if len(factors) == r_count:
            break
        vp = _trim(list(v))
        if len(vp) <= 1:
            continue  # constant vector splits nothing
        next_factors = []
        for u in factors:
            if len(factors) + len(next_factors) - 1 >= r_count and False:
                pass
            if len(u) - 1 <= 1:
                next_factors.append(u)
                continue
            pieces = []
            rem = u
            for c in range(p):
                if len(rem) - 1 <= 0:
                    break
                g = _pgcd(rem, _psub(vp, [c], p), p)
                if 0 < len(g) - 1 < len(rem) - 1:
                    pieces.append(g)
                    rem = _pdivmod_monic(rem, g, p)[0]
            if rem and len(rem) - 1 > 0:
                pieces.append(rem)
            next_factors.extend(pieces if pieces else [u])
        factors = next_factors
    return factors


def _nullspace_mod(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right nullspace of mat over F_p."""
    n = len(mat)
    m = [row[:] for row in mat]
    pivots: dict[int, int] = {}
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, n) if m[r][col] % p), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = pow(m[row][col], -1, p)
        m[row] = [(x * inv) % p for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] % p:
                c = m[r][col]
                m[r] = [(a - c * b) % p for a, b in zip(m[r], m[row])]
        pivots[col] = row
        row += 1
    basis = []
    free = [c for c in range(n) if c not in pivots]
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for col, r in pivots.items():
            v[col] = (-m[r][fc]) % p
        basis.append(v)
    return basis


# -- Hensel lifting ----------------------------------------------------------------


def _hensel_step(f, g, h, s, t, m):
    """One quadratic step: from mod m to mod m*m, with g monic.

    Invariants: f = g*h and s*g + t*h = 1, both mod m; the divisions below
    are by the monic g, which keeps everything exact.
    """
    m2 = m * m
    e = _psub([c % m2 for c in f], _pmul(g, h, m2), m2)
    q, r = _pdivmod_monic(_pmul(t, e, m2), g, m2)
    g1 = _padd(g, r, m2)
    h1 = _padd(h, _padd(_pmul(s, e, m2), _pmul(q, h, m2), m2), m2)
    b = _psub(_padd(_pmul(s, g1, m2), _pmul(t, h1, m2), m2), [1], m2)
    c, d = _pdivmod_monic(_pmul(t, b, m2), g1, m2)
    t1 = _psub(t, d, m2)
    s1 = _psub(s, _padd(_pmul(s, b, m2), _pmul(c, h1, m2), m2), m2)
    return g1, h1, s1, t1


def _ext_euclid_mod(a, b, p):
    """s, t with s*a + t*b = 1 mod p, for coprime a, b."""
    r0, r1 = [c % p for c in a], [c % p for c in b]
    s0, s1 = [1], []
    t0, t1 = [], [1]
    r0, r1 = _trim(r0), _trim(r1)
    while r1:
        q, r = _pdivmod_monic(r0, _pscale(r1, pow(r1[-1], -1, p), p), p)
        q = _pscale(q, pow(r1[-1], -1, p), p)
        r0, r1 = r1, _psub(r0, _pmul(q, r1, p), p)
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    inv = pow(r0[-1] if r0 else 1, -1, p)
    return _pscale(s0, inv, p), _pscale(t0, inv, p)


def _lift_factor(f: list[int], g: list[int], p: int, target: int) -> list[int]:
    """Lift monic g (f = g*h mod p) to a monic factor of f mod p^(2^j) >= target."""
    h = _pdivmod_monic([c % p for c in f], g, p)[0]
    s, t = _ext_euclid_mod(g, h, p)
    m = p
    while m < target:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m *= m
    return g, m


# -- Zassenhaus ------------------------------------------------------------------


_SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73]


def _factor_squarefree_int(ints: list[int], cap: int) -> list[tuple[list[int], bool]]:
    """Irreducible factors of a primitive squarefree integer polynomial.

    Returns (factor, certified) pairs; factors are primitive with positive lc.
    """
    n = len(ints) - 1
    if n <= 1:
        return [(ints, True)]
    if n > cap:
        return [(ints, False)]
    lc = ints[-1]
    prime = None
    for p in _SMALL_PRIMES:
        if lc % p == 0:
            continue
        fp = _trim([c % p for c in ints])
        if len(fp) - 1 != n:
            continue
        dfp = _trim([(i * c) % p for i, c in enumerate(fp)][1:])
        if not dfp:
            continue
        if len(_pgcd(fp, dfp, p)) - 1 == 0:
            prime = p
            break
    if prime is None:
        return [(ints, False)]
    fp = _pscale([c % prime for c in ints], pow(lc, -1, prime), prime)
    modular = _berlekamp(fp, prime)
    modular.sort(key=lambda g: (len(g), g))
    if len(modular) == 1:
        return [(ints, True)]
    # Mignotte-style bound on factor coefficients, including the lc multiplier.
    norm2 = isqrt(sum(c * c for c in ints)) + 1
    bound = 2 ** (n + 1) * norm2 * abs(lc)
    lifted = []
    for g in modular:
        gl, modulus = _lift_factor(ints, g, prime, 2 * bound + 1)
        lifted.append(gl)
    return _recombine(ints, lifted, modulus, cap)


def _int_content(ints: list[int]) -> int:
    g = 0
    for c in ints:
        g = int_gcd(g, abs(c))
    return g or 1


def _int_primitive(ints: list[int]) -> list[int]:
    g = _int_content(ints)
    ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_poly_divides(d: list[int], f: list[int]) -> list[int] | None:
    """Exact quotient f/d over Z, or None."""
    if not d:
        return None
    f = list(f)
    dd = len(d) - 1
    if len(f) - 1 < dd:
        return None
    q = [0] * (len(f) - dd)
    for i in range(len(q) - 1, -1, -1):
        c = f[i + dd]
        if c % d[-1] != 0:
            return None
        qd = c // d[-1]
        q[i] = qd
        for j, dc in enumerate(d):
            f[i + j] -= qd * dc
    return q if not any(f[:dd]) else None


def _recombine(f: list[int], lifted: list[list[int]], modulus: int, cap: int):
    out: list[tuple[list[int], bool]] = []
    remaining = list(range(len(lifted)))
    budget = _RECOMBINATION_BUDGET
    size = 1
    while 2 * size <= len(remaining):
        restart = False
        for combo in combinations(remaining, size):
            budget -= 1
            if budget <= 0:
                out.append((_int_primitive(f), False))
                return out
            prod = [f[-1] % modulus]
            for i in combo:
                prod = _pmul(prod, lifted[i], modulus)
            cand = _int_primitive(_psmod(prod, modulus))
            quot = _int_poly_divides(cand, f)
            if quot is not None and len(cand) - 1 > 0:
                out.append((cand, True))
                f = quot
                remaining = [i for i in remaining if i not in combo]
                restart = True
                break
        if restart:
            continue
        size += 1
    if len(f) - 1 > 0:
        out.append((_int_primitive(f), True))
    return out


_factor_cache: dict = {}


def factor_univariate(p: UniPoly, cap: int = UNIVARIATE_DEGREE_CAP) -> list[Factor]:
    """Irreducible factorization over Q, up to a rational constant.

    The product of poly^mult over the result equals p up to a nonzero
    rational factor.  Factors beyond the degree cap come back squarefree but
    unfactored, with certified=False.  Results are memoized.
    """
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    key = (p.coeffs, p.var, cap)
    hit = _factor_cache.get(key)
    if hit is not None:
        return hit
    out: list[Factor] = []
    for sf, mult in squarefree_decomposition(p):
        cont, ints = sf.primitive_int()
        # pull out a power of x
        k = 0
        while ints and ints[0] == 0:
            ints = ints[1:]
            k += 1
        if k:
            out.append(Factor(UniPoly.x(p.var), mult, True))
        if len(ints) - 1 >= 1:
            for fac, certified in _factor_squarefree_int(ints, cap):
                out.append(Factor(UniPoly([Fraction(c) for c in fac], p.var), mult, certified))
    out.sort(key=lambda f: (f.poly.degree, f.poly.coeffs))
    if len(_factor_cache) > 4096:
        _factor_cache.clear()
    _factor_cache[key] = out
    return out


def is_irreducible(p: UniPoly, cap: int = UNIVARIATE_DEGREE_CAP) -> bool:
    if p.degree < 1:
        return False
    fs = factor_univariate(p, cap)
    return len(fs) == 1 and fs[0].mult == 1 and fs[0].certified


# -- multivariate factorization (bounded Kronecker) ------------------------------


def squarefree_primitive(p: MPoly) -> MPoly:
    """Primitive squarefree part (positive grevlex leading coefficient)."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    p = p.primitive()
    if p.total_degree() == 0:
        return p.ring.one()
    used = sorted(p.variables())
    if len(used) == 1:
        from .unipoly import squarefree_part

        sf = squarefree_part(p.to_unipoly(used[0]))
        return MPoly.from_unipoly(p.ring, sf, used[0]).primitive()
    g = p.ring.zero()
    for v in used:
        g = mpoly_gcd(g, p.derivative(v))
    g = mpoly_gcd(p, g)
    if g.total_degree() <= 0:
        return p
    return mp_exact_div(p, g).primitive()


def factor_mpoly(p: MPoly, cap: int = MULTIVARIATE_DEGREE_CAP) -> list[MFactor]:
    """Irreducible factors over Q, up to a rational constant.

    Degree-capped: uncertified squarefree pieces stand in beyond the cap.
    Multiplicities are recovered by repeated exact division.
    """
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    ring = p.ring
    p = p.primitive()
    pieces: list[tuple[MPoly, bool]] = []
    # monomial content
    for i, v in enumerate(ring.vars):
        k = min((e[i] for e in p.terms), default=0)
        if k > 0:
            pieces.append((ring.var(v), True))
            p = mp_exact_div(p, ring.var(v) ** k)
    sf = squarefree_primitive(p)
    used = sorted(sf.variables())
    if not used:
        pass
    elif len(used) == 1:
        for f in factor_univariate(sf.to_unipoly(used[0])):
            q = MPoly.from_unipoly(ring, f.poly, used[0]).primitive()
            pieces.append((q, f.certified))
    elif sf.total_degree() > cap:
        pieces.append((sf, False))
    else:
        pieces.extend(_kronecker_factor(sf, used))
    out = []
    seen = set()
    for q, certified in pieces:
        key = (tuple(sorted(q.terms.items())),)
        if key in seen:
            continue
        seen.add(key)
        mult = 0
        w = p
        while True:
            try:
                w = mp_exact_div(w, q)
                mult += 1
            except ValueError:
                break
        if mult == 0:
            mult = 1  # defensive; should not happen
        out.append(MFactor(q, mult, certified))
    out.sort(key=lambda f: (f.poly.total_degree(), f.poly.render()))
    return out


def _kronecker_factor(sf: MPoly, used: list[str]) -> list[tuple[MPoly, bool]]:
    ring = sf.ring
    radices = [sf.degree_in(v) + 1 for v in used]
    # substitution v_i -> t^(prod of earlier radices)
    weights = []
    w = 1
    for r in radices:
        weights.append(w)
        w *= r
    idx = [ring.index(v) for v in used]
    coeffs: dict[int, Fraction] = {}
    for e, c in sf.terms.items():
        t = sum(e[i] * wt for i, wt in zip(idx, weights))
        coeffs[t] = coeffs.get(t, Fraction(0)) + c
    deg = max(coeffs)
    if deg > UNIVARIATE_DEGREE_CAP:
        return [(sf, False)]
    uni = UniPoly([coeffs.get(i, Fraction(0)) for i in range(deg + 1)], "t")
    ufs = factor_univariate(uni)
    if any(not f.certified for f in ufs):
        return [(sf, False)]
    images = []
    for f in ufs:
        images.extend([f.poly] * f.mult)
    images.sort(key=lambda g: (g.degree, g.coeffs))

    def inverse(g: UniPoly) -> MPoly | None:
        terms: dict = {}
        for k, c in enumerate(g.coeffs):
            if not c:
                continue
            e = [0] * ring.nvars
            rem = k
            for i, (r, wt) in enumerate(zip(radices, weights)):
                e[idx[i]] = rem % r if i < len(radices) - 1 else rem
                rem //= r
            if e[idx[-1]] >= radices[-1]:
                return None
            key = tuple(e)
            terms[key] = terms.get(key, Fraction(0)) + c
        return MPoly(ring, terms)

    out: list[tuple[MPoly, bool]] = []
    remaining = list(range(len(images)))
    work = sf
    budget = _RECOMBINATION_BUDGET
    size = 1
    while size <= len(remaining):
        restart = False
        for combo in combinations(remaining, size):
            budget -= 1
            if budget <= 0:
                out.append((work, False))
                return out
            g = UniPoly.const(Fraction(1), "t")
            for i in combo:
                g = g * images[i]
            cand = inverse(g)
            if cand is None or cand.is_zero:
                continue
            cand = cand.primitive()
            if cand.total_degree() < 1:
                continue
            try:
                quot = mp_exact_div(work, cand)
            except ValueError:
                continue
            out.append((cand, True))
            work = quot.primitive()
            remaining = [i for i in remaining if i not in combo]
            restart = True
            break
        if restart:
            if work.total_degree() == 0:
                break
            continue
        size += 1
    if work.total_degree() > 0:
        out.append((work, True))
    return out
