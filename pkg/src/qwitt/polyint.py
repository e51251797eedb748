"""Dense univariate integer polynomials as coefficient tuples.

A polynomial is a tuple of ints, index = exponent, with no trailing zeros;
the zero polynomial is the empty tuple.  Everything here is exact.  The
multiplication packs coefficients into one big int (Kronecker substitution)
so products of the large cyclotomic-flavoured moduli stay cheap.
"""

from __future__ import annotations

from math import gcd

Poly = tuple

ZERO: Poly = ()
ONE: Poly = (1,)


def trim(cs) -> Poly:
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def const(n: int) -> Poly:
    return (n,) if n else ()


def monomial(n: int, c: int = 1) -> Poly:
    if c == 0:
        return ()
    return tuple([0] * n) + (c,)


def degree(f: Poly) -> int:
    """Degree, with degree(0) = -1."""
    return len(f) - 1


def add(f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return trim(out)


def neg(f: Poly) -> Poly:
    return tuple(-c for c in f)


def sub(f: Poly, g: Poly) -> Poly:
    return add(f, neg(g))


def scale(f: Poly, n: int) -> Poly:
    if n == 0:
        return ()
    return tuple(c * n for c in f)


def _mul_schoolbook(f: Poly, g: Poly) -> Poly:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    if len(f) < 12 or len(g) < 12:
        return _mul_schoolbook(f, g)
    # Kronecker: evaluate both at 2**stride, multiply as ints, read back the
    # coefficients as balanced base-2**stride digits.  Needs the stride to
    # bound |coefficient of f*g| strictly by 2**(stride-1).
    fmax = max(abs(c) for c in f)
    gmax = max(abs(c) for c in g)
    bound = fmax * gmax * min(len(f), len(g))
    stride = max(bound.bit_length() + 2, 8)
    fi = 0
    for c in reversed(f):
        fi = (fi << stride) + c
    gi = 0
    for c in reversed(g):
        gi = (gi << stride) + c
    n = fi * gi
    half = 1 << (stride - 1)
    full = 1 << stride
    out = []
    while n:
        d = n & (full - 1)
        if d >= half:
            d -= full
        out.append(d)
        n = (n - d) >> stride
    return trim(out)


def divmod_exact(f: Poly, g: Poly):
    """Polynomial division when it stays in Z.

    Requires the leading coefficient of g to divide every intermediate
    leading term; returns None if that fails (so callers can treat it as a
    non-divisibility witness over Z only when g is monic or +-1-led).
    """
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return (), ()
    lead = g[-1]
    rem = list(f)
    q = [0] * (max(len(f) - len(g) + 1, 0))
    while len(rem) >= len(g):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(g):
            break
        c, r = divmod(rem[-1], lead)
        if r != 0:
            return None
        shift = len(rem) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            rem[shift + i] -= c * b
        rem.pop()
    return trim(q), trim(rem)


def pseudo_rem(f: Poly, g: Poly) -> Poly:
    """Pseudo-remainder: lead(g)^k * f mod g over Z."""
    rem = list(f)
    lead = g[-1]
    dg = len(g) - 1
    while len(rem) - 1 >= dg and trim(rem):
        rem = trim(rem)
        if len(rem) - 1 < dg:
            break
        shift = len(rem) - len(g)
        c = rem[-1]
        rem = [x * lead for x in rem]
        for i, b in enumerate(g):
            rem[shift + i] -= c * b
        rem = rem[:-1]
    return trim(rem)


def content(f: Poly) -> int:
    c = 0
    for a in f:
        c = gcd(c, a)
    return c


def primitive(f: Poly) -> Poly:
    c = content(f)
    if c in (0, 1):
        return f
    return tuple(a // c for a in f)


def gcd_poly(f: Poly, g: Poly) -> Poly:
    """Primitive gcd over Z via the subresultant remainder chain."""
    if not f:
        return normalize_sign(primitive(g))
    if not g:
        return normalize_sign(primitive(f))
    cf, cg = content(f), content(g)
    a, b = primitive(f), primitive(g)
    while b:
        r = pseudo_rem(a, b)
        a, b = b, primitive(r)
    a = normalize_sign(a)
    c = gcd(cf, cg)
    return scale(a, c) if c != 1 else a


def normalize_sign(f: Poly) -> Poly:
    if f and f[-1] < 0:
        return neg(f)
    return f


def evaluate(f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def compose_power(f: Poly, n: int) -> Poly:
    """f(v^n) for n >= 1."""
    if n == 1 or not f:
        return f
    out = [0] * ((len(f) - 1) * n + 1)
    for i, c in enumerate(f):
        out[i * n] = c
    return tuple(out)


def decompose_power(f: Poly, n: int):
    """Inverse of compose_power: g with g(v^n) = f, or None."""
    if not f:
        return ()
    if (len(f) - 1) % n:
        return None
    out = []
    for i, c in enumerate(f):
        if i % n == 0:
            out.append(c)
        elif c:
            return None
    return tuple(out)


def divide_by_int(f: Poly, n: int):
    """f / n coefficientwise, or None when not exact."""
    out = []
    for c in f:
        q, r = divmod(c, n)
        if r:
            return None
        out.append(q)
    return tuple(out)


def reduce_mod_int(f: Poly, m: int) -> Poly:
    return trim(c % m for c in f)


def rem_monic(f: Poly, g: Poly) -> Poly:
    """Remainder of f by monic g over Z."""
    assert g and g[-1] == 1
    rem = list(f)
    while len(rem) >= len(g):
        if rem[-1] == 0:
            rem.pop()
            continue
        c = rem[-1]
        shift = len(rem) - len(g)
        for i, b in enumerate(g):
            rem[shift + i] -= c * b
        rem.pop()
    return trim(rem)


def cyclotomic_p_power(p: int, j: int) -> Poly:
    """The p^j-th cyclotomic polynomial, j >= 1: Phi(v) = sum v^(i*p^(j-1))."""
    step = p ** (j - 1)
    out = [0] * (step * (p - 1) + 1)
    for i in range(p):
        out[i * step] = 1
    return tuple(out)


def q_power_minus_one_ratio(a: int, b: int) -> Poly:
    """(v^a - 1)/(v^b - 1) for b | a: 1 + v^b + ... + v^(a-b)."""
    assert a % b == 0
    out = [0] * (a - b + 1)
    for i in range(0, a, b):
        out[i] = 1
    return tuple(out)
