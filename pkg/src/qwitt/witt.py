"""p-typical Witt vectors of finite length over any ring handle.

Arithmetic goes through the ghost map: components are lifted to a
p-torsion-free cover of the base ring, the ghost components are combined
there, and the result is read back by the exact-division ghost recursion.
In a p-torsion-free ring that recursion has a unique solution, and the
universal integrality of the Witt structure polynomials guarantees every
division is exact; the answer is the evaluation of those polynomials.

The universal structure polynomials themselves are also computed (once per
(p, r), with the integrality checked during construction) and serve as an
independent oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import polyint as P
from . import snf
from .errors import (
    LengthTooShort,
    MismatchedShape,
    NotDivisible,
    UndecidableVariant,
)
from .rings import (
    CyclotomicIntegers,
    DepthPolynomial,
    FiniteDepthQuotient,
    Integers,
    IntegersMod,
    RingHandle,
    is_prime,
)

ZZ = Integers()


@dataclass(frozen=True)
class WittVector:
    p: int
    r: int
    ring: RingHandle
    components: tuple

    def __post_init__(self):
        if self.r < 1:
            raise MismatchedShape("length must be >= 1")
        if len(self.components) != self.r:
            raise MismatchedShape("expected %d components" % self.r)

    def __repr__(self):
        return "W%d_%d%r" % (self.p, self.r, list(self.components))


class _MonicCover:
    """Z[v]/(g) for monic g: the p-torsion-free cover of a finite quotient."""

    def __init__(self, modulus):
        self.modulus = modulus

    def embed_int(self, n):
        return P.const(n)

    def add(self, a, b):
        return P.add(a, b)

    def neg(self, a):
        return P.neg(a)

    def mul(self, a, b):
        return P.rem_monic(P.mul(a, b), self.modulus)

    def power(self, x, n):
        acc = P.ONE
        while n:
            if n & 1:
                acc = self.mul(acc, x)
            x = self.mul(x, x)
            n >>= 1
        return acc

    def divide_by_int(self, a, n):
        q = P.divide_by_int(a, n)
        if q is None:
            raise NotDivisible
        return q


def _cover(ring: RingHandle):
    """(cover, lift, project) with cover p-torsion-free."""
    if isinstance(ring, (Integers, CyclotomicIntegers, DepthPolynomial)):
        return ring, lambda x: x, lambda x: x
    if isinstance(ring, IntegersMod):
        return ZZ, lambda x: x, ring.embed_int
    if isinstance(ring, FiniteDepthQuotient):
        cov = _MonicCover(ring.modulus)
        return cov, lambda x: x, ring.canonicalize
    raise UndecidableVariant("no torsion-free cover for %s" % ring.variant)


def _ghost_in(cov, p, comps):
    out = []
    for i in range(len(comps)):
        acc = cov.power(comps[0], p**i)
        q = 1
        for j in range(1, i + 1):
            q *= p
            acc = cov.add(acc, _int_scale(cov, q, cov.power(comps[j], p ** (i - j))))
        out.append(acc)
    return out


def _int_scale(cov, n, x):
    return cov.mul(cov.embed_int(n), x)


def _unghost_in(cov, p, ghost):
    comps = []
    for i, g in enumerate(ghost):
        acc = g
        for j in range(i):
            acc = cov.add(acc, cov.neg(
                _int_scale(cov, p**j, cov.power(comps[j], p ** (i - j)))))
        comps.append(cov.divide_by_int(acc, p**i))
    return comps


def ghost(w: WittVector):
    """Ghost components: gh_i = sum_j p^j w_j^(p^(i-j))."""
    ring = w.ring
    return [ring.canonicalize(g) for g in _ghost_in(ring, w.p, list(w.components))]


def from_ghost(p: int, ring: RingHandle, ghost_vec) -> WittVector:
    """Inverse of ``ghost`` over a p-torsion-free ring (used as an oracle)."""
    comps = _unghost_in(ring, p, list(ghost_vec))
    return WittVector(p, len(comps), ring, tuple(ring.canonicalize(c) for c in comps))


def _check_pair(a: WittVector, b: WittVector):
    if (a.p, a.r, a.ring) != (b.p, b.r, b.ring):
        raise MismatchedShape("%r vs %r" % (a, b))


def _binary(a: WittVector, b: WittVector, combine) -> WittVector:
    _check_pair(a, b)
    ring = a.ring
    cov, lift, proj = _cover(ring)
    ga = _ghost_in(cov, a.p, [lift(c) for c in a.components])
    gb = _ghost_in(cov, b.p, [lift(c) for c in b.components])
    gc = [combine(cov, x, y) for x, y in zip(ga, gb)]
    comps = _unghost_in(cov, a.p, gc)
    return WittVector(a.p, a.r, ring, tuple(ring.canonicalize(proj(c)) for c in comps))


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    return _binary(a, b, lambda cov, x, y: cov.add(x, y))


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    return _binary(a, b, lambda cov, x, y: cov.mul(x, y))


def witt_sub(a: WittVector, b: WittVector) -> WittVector:
    return _binary(a, b, lambda cov, x, y: cov.add(x, cov.neg(y)))


def witt_neg(a: WittVector) -> WittVector:
    cov, lift, proj = _cover(a.ring)
    g = _ghost_in(cov, a.p, [lift(c) for c in a.components])
    comps = _unghost_in(cov, a.p, [cov.neg(x) for x in g])
    return WittVector(a.p, a.r, a.ring, tuple(a.ring.canonicalize(proj(c)) for c in comps))


def witt_zero(p, r, ring) -> WittVector:
    return WittVector(p, r, ring, tuple(ring.zero() for _ in range(r)))


def witt_one(p, r, ring) -> WittVector:
    return WittVector(p, r, ring, (ring.one(),) + tuple(ring.zero() for _ in range(r - 1)))


def teichmuller(x, p, r, ring) -> WittVector:
    return WittVector(p, r, ring,
                      (ring.canonicalize(x),) + tuple(ring.zero() for _ in range(r - 1)))


def verschiebung(w: WittVector) -> WittVector:
    return WittVector(w.p, w.r + 1, w.ring, (w.ring.zero(),) + w.components)


def restrict(w: WittVector) -> WittVector:
    if w.r < 2:
        raise LengthTooShort("restriction needs length >= 2")
    return WittVector(w.p, w.r - 1, w.ring, w.components[:-1])


def frobenius(w: WittVector) -> WittVector:
    """F: W_r -> W_(r-1), characterized by ghost(F w)_i = ghost(w)_(i+1)."""
    if w.r < 2:
        raise LengthTooShort("frobenius needs length >= 2")
    ring = w.ring
    cov, lift, proj = _cover(ring)
    g = _ghost_in(cov, w.p, [lift(c) for c in w.components])
    comps = _unghost_in(cov, w.p, g[1:])
    return WittVector(w.p, w.r - 1, ring, tuple(ring.canonicalize(proj(c)) for c in comps))


def mul_teichmuller(w: WittVector, t) -> WittVector:
    """w * [t] componentwise: (w [t])_i = w_i t^(p^i)."""
    ring = w.ring
    t = ring.canonicalize(t)
    comps = []
    e = 1
    for c in w.components:
        comps.append(ring.mul(c, ring.power(t, e)))
        e *= w.p
    return WittVector(w.p, w.r, ring, tuple(comps))


def int_to_witt(n: int, p: int, r: int, ring: RingHandle) -> WittVector:
    """n * 1 in W_r; ghost components are all n."""
    comps = _unghost_in(ZZ, p, [n] * r)
    return WittVector(p, r, ring, tuple(ring.embed_int(c) for c in comps))


def witt_scale_int(n: int, w: WittVector) -> WittVector:
    return witt_mul(int_to_witt(n, w.p, w.r, w.ring), w)


# ---------------------------------------------------------------------------
# universal structure polynomials (oracle)
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse multivariate integer polynomial on a fixed variable count."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = terms or {}

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c} if c else {})

    def add(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.nvars, out)

    def neg(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def mul(self, other):
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.nvars, out)

    def power(self, n):
        acc = MPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                acc = acc.mul(base)
            base = base.mul(base)
            n >>= 1
        return acc

    def scale(self, n):
        if n == 0:
            return MPoly(self.nvars)
        return MPoly(self.nvars, {e: c * n for e, c in self.terms.items()})

    def divide_exact_int(self, n):
        out = {}
        for e, c in self.terms.items():
            q, rem = divmod(c, n)
            if rem:
                raise NotDivisible("structure polynomial recursion not integral")
            out[e] = q
        return MPoly(self.nvars, out)

    def evaluate(self, ring, args):
        acc = ring.zero()
        for e, c in sorted(self.terms.items()):
            term = ring.embed_int(c)
            for i, a in enumerate(e):
                if a:
                    term = ring.mul(term, ring.power(args[i], a))
            acc = ring.add(acc, term)
        return acc


@lru_cache(maxsize=None)
def witt_structure_polynomials(p: int, r: int):
    """Universal sum and product polynomials S_i, P_i in X_0..X_(r-1),
    Y_0..Y_(r-1); every division in the ghost recursion is checked exact."""
    assert is_prime(p)
    n = 2 * r
    xs = [MPoly.variable(n, i) for i in range(r)]
    ys = [MPoly.variable(n, r + i) for i in range(r)]

    def ghost_of(vs, i):
        acc = vs[0].power(p**i)
        for j in range(1, i + 1):
            acc = acc.add(vs[j].power(p ** (i - j)).scale(p**j))
        return acc

    def recurse(targets):
        out = []
        for i in range(r):
            acc = targets[i]
            for j in range(i):
                acc = acc.add(out[j].power(p ** (i - j)).scale(p**j).neg())
            out.append(acc.divide_exact_int(p**i))
        return out

    sums = recurse([ghost_of(xs, i).add(ghost_of(ys, i)) for i in range(r)])
    prods = recurse([ghost_of(xs, i).mul(ghost_of(ys, i)) for i in range(r)])
    return tuple(sums), tuple(prods)


# ---------------------------------------------------------------------------
# ideal containment reports
# ---------------------------------------------------------------------------


def _all_elements(ring):
    if isinstance(ring, IntegersMod):
        return [ring.canonicalize(i) for i in range(ring.m)]
    if isinstance(ring, FiniteDepthQuotient):
        elems = [()]
        for _ in range(ring.rank):
            elems = [e + (c,) for e in elems for c in range(ring.pN)]
        return [P.trim(e) for e in elems]
    raise UndecidableVariant("cannot enumerate %s" % ring.variant)


def witt_ideal_report(S: RingHandle, f, r: int, s: int = 1) -> dict:
    """Checks the ideal containments W_r(f^(p^(r-1)) S) <= [f] W_r(S)
    <= W_r(f S), [p]^2 in p W_r(S), and W_r((f S)^(p^r s)) <= ([f^s]).

    S must be a finite variant; everything is decided by enumeration.
    Returns a dict of named checks with pass flags and failure witnesses.
    """
    p = S.p if hasattr(S, "p") else None
    if p is None:
        # IntegersMod carries no prime; infer from the modulus
        m = S.m
        p = min(q for q in range(2, m + 1) if m % q == 0 and is_prime(q))
    elems = _all_elements(S)
    f = S.canonicalize(f)

    def witt_all():
        out = [()]
        for _ in range(r):
            out = [t + (c,) for t in out for c in elems]
        return [WittVector(p, r, S, t) for t in out]

    def ideal_set(g: WittVector):
        return {witt_mul(g, w).components for w in witt_all()}

    def witt_of_ideal(gen):
        ideal = {S.canonicalize(S.mul(gen, a)) for a in elems}
        out = [()]
        for _ in range(r):
            out = [t + (c,) for t in out for c in ideal]
        return out

    checks = {}

    def record(name, lhs, rhs_set):
        bad = next((t for t in lhs if tuple(t) not in rhs_set), None)
        checks[name] = {"pass": bad is None,
                        "witness": None if bad is None else list(bad)}

    t1 = S.canonicalize(S.power(f, p ** (r - 1)))
    tf = teichmuller(f, p, r, S)
    record("W_r(f^(p^(r-1))S) <= [f]W_r(S)", witt_of_ideal(t1), ideal_set(tf))
    record("[f]W_r(S) <= W_r(fS)",
           [w for w in ideal_set(tf)],
           {t for t in witt_of_ideal(f)})
    p_elt = teichmuller(S.embed_int(p), p, r, S)
    p_sq = witt_mul(p_elt, p_elt)
    p_mult = {witt_scale_int(p, w).components for w in witt_all()}
    checks["[p]^2 in pW_r(S)"] = {
        "pass": p_sq.components in p_mult,
        "witness": None if p_sq.components in p_mult else list(p_sq.components),
    }
    tbig = S.canonicalize(S.power(f, p**r * s))
    fs = teichmuller(S.power(f, s), p, r, S)
    record("W_r(I^(p^r s)) <= ([f^s])", witt_of_ideal(tbig), ideal_set(fs))
    checks["pass"] = all(v["pass"] for k, v in checks.items() if k != "pass")
    return checks
