"""Exact commutative rings with canonical forms and decidable equality.

Six variants, all with byte-comparable canonical representatives:

* ``Integers``            -- plain ints.
* ``IntegersMod(m)``      -- least nonnegative residues.
* ``CyclotomicIntegers``  -- Z[zeta] for zeta a primitive p^k-th root of
  unity, elements as coefficient tuples on the power basis.
* ``DepthPolynomial``     -- Z[v] localized (lazily) at the polynomials g
  with g(1) prime to p; elements are reduced fractions ``Frac(num, den)``.
* ``FiniteDepthQuotient`` -- Z[v]/(p^N, g(v)) for a monic g congruent to a
  power of (v-1) mod p, so the quotient is finite local.
* ``LaurentExtension``    -- Laurent polynomials over a base handle with
  exponents in (1/p^e) Z.

Ring elements are plain data (ints, tuples, dicts); the handle owns the
operations.  All handles are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import polyint as P
from . import snf
from .errors import (
    DivisionByZero,
    IllDefined,
    MalformedElement,
    NotDivisible,
    RingMismatch,
    UnsupportedRing,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Frac(NamedTuple):
    num: tuple
    den: tuple


class RingHandle:
    variant = "?"

    def descriptor(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, RingHandle) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    def __repr__(self):
        return "%s%r" % (self.variant, self.descriptor()[1:])

    # -- arithmetic ---------------------------------------------------
    def zero(self):
        return self.embed_int(0)

    def one(self):
        return self.embed_int(1)

    def is_zero(self, x):
        return x == self.zero()

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, x, n: int):
        if n < 0:
            return self.inverse(self.power(x, -n))
        acc = self.one()
        base = x
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    def sum(self, xs):
        acc = self.zero()
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def inverse(self, x):
        raise UnsupportedRing("no inverses in %s" % self.variant)

    def divide_exact(self, a, b):
        raise UnsupportedRing("no decidable exact division in %s" % self.variant)

    # -- integer lattice presentation ---------------------------------
    def lattice_dim(self):
        raise UnsupportedRing("%s has no finite lattice presentation" % self.variant)

    def lattice_relations(self):
        """Relation columns for one copy of the ring as an abelian group."""
        raise UnsupportedRing(self.variant)

    def elt_to_vec(self, x):
        raise UnsupportedRing(self.variant)

    def vec_to_elt(self, v):
        raise UnsupportedRing(self.variant)

    def mult_matrix(self, x):
        """Matrix of y -> x*y on the Z-generators."""
        dim = self.lattice_dim()
        cols = []
        for j in range(dim):
            basis = self.vec_to_elt([1 if i == j else 0 for i in range(dim)])
            cols.append(self.elt_to_vec(self.mul(x, basis)))
        return snf.transpose(cols)

    # -- misc ----------------------------------------------------------
    def rand_element(self, rng, size=4):
        raise NotImplementedError


class Integers(RingHandle):
    variant = "Integers"
    is_domain = True

    def descriptor(self):
        return ("Integers",)

    def canonicalize(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise MalformedElement("not an integer: %s" % x)
            return int(x)
        if isinstance(x, tuple) and len(x) == 2:
            num, den = x
            q, r = divmod(num, den)
            if r:
                raise MalformedElement("not an integer: %s/%s" % (num, den))
            return q
        return int(x)

    def embed_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, x):
        return x in (1, -1)

    def inverse(self, x):
        if not self.is_unit(x):
            raise NotDivisible("%d is not a unit" % x)
        return x

    def divide_exact(self, a, b):
        if b == 0:
            raise DivisionByZero
        q, r = divmod(a, b)
        if r:
            raise NotDivisible("%d does not divide %d" % (b, a))
        return q

    def divide_by_int(self, a, n):
        return self.divide_exact(a, n)

    def lattice_dim(self):
        return 1

    def lattice_relations(self):
        return []

    def elt_to_vec(self, x):
        return [x]

    def vec_to_elt(self, v):
        return v[0]

    def rand_element(self, rng, size=9):
        return rng.randint(-size, size)


class IntegersMod(RingHandle):
    variant = "IntegersMod"

    def __init__(self, m: int):
        if m < 2:
            raise MalformedElement("modulus must be >= 2")
        self.m = m

    def descriptor(self):
        return ("IntegersMod", self.m)

    def canonicalize(self, x):
        return int(x) % self.m

    def embed_int(self, n):
        return n % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def is_unit(self, x):
        from math import gcd

        return gcd(x, self.m) == 1

    def inverse(self, x):
        if not self.is_unit(x):
            raise NotDivisible("%d is not a unit mod %d" % (x, self.m))
        return pow(x, -1, self.m)

    def divide_by_int(self, a, n):
        # division by an integer acting on the additive group; only valid
        # when unique, i.e. when n is a unit
        return self.mul(a, self.inverse(n % self.m))

    def lattice_dim(self):
        return 1

    def lattice_relations(self):
        return [[self.m]]

    def elt_to_vec(self, x):
        return [x]

    def vec_to_elt(self, v):
        return v[0] % self.m

    def rand_element(self, rng, size=None):
        return rng.randrange(self.m)


class CyclotomicIntegers(RingHandle):
    """Z[x]/Phi_{p^k}(x), free of rank p^(k-1)(p-1) with the power basis."""

    variant = "CyclotomicIntegers"
    is_domain = True

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise MalformedElement("p must be prime")
        if k < 1:
            raise MalformedElement("depth must be >= 1")
        self.p = p
        self.k = k
        self.modulus = P.cyclotomic_p_power(p, k)
        self.rank = len(self.modulus) - 1

    def descriptor(self):
        return ("CyclotomicIntegers", self.p, self.k)

    def zeta(self):
        """The designated primitive p^k-th root of unity."""
        return self.canonicalize(P.monomial(1))

    def zeta_power(self, j: int):
        j %= self.p**self.k
        return self.canonicalize(P.monomial(j))

    def canonicalize(self, x):
        if isinstance(x, int):
            return P.const(x)
        return P.rem_monic(P.trim(x), self.modulus)

    def embed_int(self, n):
        return P.const(n)

    def add(self, a, b):
        return P.add(a, b)

    def neg(self, a):
        return P.neg(a)

    def mul(self, a, b):
        return P.rem_monic(P.mul(a, b), self.modulus)

    def divide_by_int(self, a, n):
        q = P.divide_by_int(a, n)
        if q is None:
            raise NotDivisible("%d does not divide coefficients" % n)
        return q

    def divide_exact(self, a, b):
        if not b:
            raise DivisionByZero
        if not a:
            return ()
        sol = snf.solve(self.mult_matrix(b), self.elt_to_vec(a))
        if sol is None:
            raise NotDivisible
        return self.vec_to_elt(sol)

    def is_unit(self, x):
        try:
            self.inverse(x)
            return True
        except (NotDivisible, DivisionByZero):
            return False

    def inverse(self, x):
        if not x:
            raise DivisionByZero
        return self.divide_exact(self.one(), x)

    def lattice_dim(self):
        return self.rank

    def lattice_relations(self):
        return []

    def elt_to_vec(self, x):
        return list(x) + [0] * (self.rank - len(x))

    def vec_to_elt(self, v):
        return P.trim(v)

    def rand_element(self, rng, size=4):
        return P.trim([rng.randint(-size, size) for _ in range(self.rank)])


class DepthPolynomial(RingHandle):
    """Z[v] with the multiplicative set S = {g : g(1) prime to p} lazily
    inverted.  Elements are fractions in lowest terms; ``divide_exact``
    succeeds only when the quotient needs no new denominator, which is the
    divisibility notion the Koszul closed forms rely on.
    """

    variant = "DepthPolynomial"
    is_domain = True

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise MalformedElement("p must be prime")
        if k < 0:
            raise MalformedElement("depth must be >= 0")
        self.p = p
        self.k = k

    def descriptor(self):
        return ("DepthPolynomial", self.p, self.k)

    def in_mult_set(self, den: tuple) -> bool:
        return bool(den) and P.evaluate(den, 1) % self.p != 0

    def canonicalize(self, x):
        if isinstance(x, int):
            return Frac(P.const(x), P.ONE)
        if isinstance(x, Frac) or (isinstance(x, tuple) and len(x) == 2
                                   and isinstance(x[0], tuple)):
            num, den = P.trim(x[0]), P.trim(x[1])
        else:
            num, den = P.trim(x), P.ONE
        return self._reduce(num, den)

    def _reduce(self, num, den):
        from math import gcd

        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            return Frac((), P.ONE)
        g = P.gcd_poly(num, den)
        if P.degree(g) > 0 or (g and g[0] != 1):
            num = P.divmod_exact(num, g)[0]
            den = P.divmod_exact(den, g)[0]
        c = gcd(P.content(num), P.content(den))
        if c > 1:
            num = tuple(a // c for a in num)
            den = tuple(a // c for a in den)
        if den[-1] < 0:
            num, den = P.neg(num), P.neg(den)
        if not self.in_mult_set(den):
            raise MalformedElement("denominator %r is not in S" % (den,))
        return Frac(num, den)

    def from_poly(self, coeffs):
        return Frac(P.trim(coeffs), P.ONE)

    def embed_int(self, n):
        return Frac(P.const(n), P.ONE)

    def add(self, a, b):
        num = P.add(P.mul(a.num, b.den), P.mul(b.num, a.den))
        return self._reduce(num, P.mul(a.den, b.den))

    def neg(self, a):
        return Frac(P.neg(a.num), a.den)

    def mul(self, a, b):
        return self._reduce(P.mul(a.num, b.num), P.mul(a.den, b.den))

    def is_unit(self, x):
        return self.in_mult_set(x.num)

    def inverse(self, x):
        if not x.num:
            raise DivisionByZero
        if not self.is_unit(x):
            raise NotDivisible("%r is not a unit" % (x,))
        return self._reduce(x.den, x.num)

    def divide_exact(self, a, b):
        if not b.num:
            raise DivisionByZero
        try:
            q = self._reduce(P.mul(a.num, b.den), P.mul(a.den, b.num))
        except MalformedElement:
            raise NotDivisible("quotient leaves the localization")
        if P.degree(q.den) > 0 or q.den != P.ONE:
            raise NotDivisible("quotient needs denominator %r" % (q.den,))
        return q

    def divide_by_int(self, a, n):
        q = P.divide_by_int(a.num, n)
        if q is None:
            raise NotDivisible("%d does not divide" % n)
        return Frac(q, a.den)

    def divide_localized(self, a, b):
        """True ring division in the localization: succeeds whenever the
        reduced denominator lies in S (so ``b`` divides ``a`` up to an
        S-unit cofactor), unlike the stricter ``divide_exact``."""
        if not b.num:
            raise DivisionByZero
        try:
            return self._reduce(P.mul(a.num, b.den), P.mul(a.den, b.num))
        except MalformedElement:
            raise NotDivisible("quotient leaves the localization")

    def rand_element(self, rng, size=3, degree=4):
        return self.from_poly([rng.randint(-size, size) for _ in range(degree + 1)])

    def rand_poly_element(self, rng, size=3, degree=4):
        return self.rand_element(rng, size, degree)


class FiniteDepthQuotient(RingHandle):
    """Z[v]/(p^N, g(v)) with g monic and g == (v-1)^deg mod p.

    The congruence makes the quotient local with maximal ideal (p, v-1),
    so unit testing is evaluation at v=1 mod p.
    """

    variant = "FiniteDepthQuotient"

    def __init__(self, p: int, k: int, N: int, modulus):
        if not is_prime(p):
            raise MalformedElement("p must be prime")
        if N < 1:
            raise MalformedElement("precision must be >= 1")
        modulus = P.trim(modulus)
        if not modulus or modulus[-1] != 1 or P.degree(modulus) < 1:
            raise MalformedElement("modulus must be monic of positive degree")
        binom = P.ONE
        for _ in range(P.degree(modulus)):
            binom = P.mul(binom, (-1, 1))
        if P.reduce_mod_int(P.sub(modulus, binom), p):
            raise MalformedElement("modulus must be (v-1)^deg mod p")
        self.p = p
        self.k = k
        self.N = N
        self.modulus = modulus
        self.rank = P.degree(modulus)
        self.pN = p**N

    def descriptor(self):
        return ("FiniteDepthQuotient", self.p, self.k, self.N, self.modulus)

    def canonicalize(self, x):
        if isinstance(x, int):
            x = P.const(x)
        if isinstance(x, Frac):
            inv = self.inverse(self._canon_poly(x.den))
            return self.mul(self._canon_poly(x.num), inv)
        return self._canon_poly(x)

    def _canon_poly(self, x):
        return P.reduce_mod_int(P.rem_monic(P.trim(x), self.modulus), self.pN)

    def embed_int(self, n):
        return P.const(n % self.pN)

    def add(self, a, b):
        return P.reduce_mod_int(P.add(a, b), self.pN)

    def neg(self, a):
        return P.reduce_mod_int(P.neg(a), self.pN)

    def mul(self, a, b):
        return self._canon_poly(P.mul(a, b))

    def is_unit(self, x):
        return P.evaluate(x, 1) % self.p != 0

    def inverse(self, x):
        if not self.is_unit(x):
            raise NotDivisible("%r is not a unit" % (x,))
        # invert mod (p, v-1)-completion by Hensel lifting from mod p
        c = P.evaluate(x, 1) % self.p
        y = P.const(pow(c, -1, self.p))
        prec = self.p
        # y inverts x mod (p, v-1); lift to mod p first, then to p^N
        for _ in range(self.rank.bit_length() + 1):
            err = self.sub(self.one(), self._canon_poly(P.mul(x, y)))
            err = P.reduce_mod_int(err, self.p)
            if not err:
                break
            y = P.reduce_mod_int(self._canon_poly(P.add(y, P.mul(y, err))), self.p)
        while prec < self.pN:
            prec = min(prec * prec, self.pN)
            y = P.reduce_mod_int(
                P.rem_monic(P.sub(P.scale(y, 2), P.mul(P.mul(y, y), x)), self.modulus),
                prec,
            )
        y = self._canon_poly(y)
        assert self._canon_poly(P.mul(x, y)) == self.one()
        return y

    def divide_by_int(self, a, n):
        from math import gcd

        u = n % self.pN
        g = gcd(u, self.pN)
        if g == 1:
            return self.mul(a, self.embed_int(pow(u, -1, self.pN)))
        q = P.divide_by_int(a, g)
        if q is None:
            raise NotDivisible("%d does not divide" % n)
        return self.divide_by_int(self._canon_poly(q), u // g)

    def lattice_dim(self):
        return self.rank

    def lattice_relations(self):
        return [[self.pN if i == j else 0 for j in range(self.rank)]
                for i in range(self.rank)]

    def elt_to_vec(self, x):
        return list(x) + [0] * (self.rank - len(x))

    def vec_to_elt(self, v):
        return self._canon_poly(v)

    def rand_element(self, rng, size=None):
        return P.trim([rng.randrange(self.pN) for _ in range(self.rank)])


class MonicQuotient(RingHandle):
    """Z[v]/(g) for monic g: a free integer lattice ring.

    Internal coefficient ring for exact (untruncated) homology of
    xi~-quotients; not part of the serialized surface.
    """

    variant = "MonicQuotient"

    def __init__(self, modulus):
        modulus = P.trim(modulus)
        if not modulus or modulus[-1] != 1 or P.degree(modulus) < 1:
            raise MalformedElement("modulus must be monic of positive degree")
        self.modulus = modulus
        self.rank = P.degree(modulus)

    def descriptor(self):
        return ("MonicQuotient", self.modulus)

    def canonicalize(self, x):
        if isinstance(x, int):
            return P.const(x)
        if isinstance(x, Frac):
            if x.den != P.ONE:
                raise UnsupportedRing("no denominators in the lattice ring")
            x = x.num
        return P.rem_monic(P.trim(x), self.modulus)

    def embed_int(self, n):
        return P.const(n)

    def add(self, a, b):
        return P.add(a, b)

    def neg(self, a):
        return P.neg(a)

    def mul(self, a, b):
        return P.rem_monic(P.mul(a, b), self.modulus)

    def lattice_dim(self):
        return self.rank

    def lattice_relations(self):
        return []

    def elt_to_vec(self, x):
        return list(x) + [0] * (self.rank - len(x))

    def vec_to_elt(self, v):
        return P.trim(v)


class LaurentExtension(RingHandle):
    """Laurent polynomials T_1..T_d over a base handle, exponents in
    (1/p^e) Z when the base knows a prime (root depth e)."""

    variant = "LaurentExtension"

    def __init__(self, base: RingHandle, d: int, e: int = 0):
        if d < 1:
            raise MalformedElement("dimension must be >= 1")
        if e < 0:
            raise MalformedElement("root depth must be >= 0")
        self.base = base
        self.d = d
        self.e = e
        self.p = getattr(base, "p", None)
        if e > 0 and self.p is None:
            raise MalformedElement("root depth needs a base with a prime")
        self.is_domain = getattr(base, "is_domain", False)

    def descriptor(self):
        return ("LaurentExtension", self.base.descriptor(), self.d, self.e)

    def _check_exp(self, exps):
        if len(exps) != self.d:
            raise MalformedElement("expected %d exponents" % self.d)
        out = []
        for a in exps:
            a = Fraction(a)
            if self.e == 0:
                if a.denominator != 1:
                    raise MalformedElement("fractional exponent %s at depth 0" % a)
            else:
                if self.p**self.e % a.denominator:
                    raise MalformedElement("exponent denominator %s exceeds root depth"
                                           % a.denominator)
            out.append(a)
        return tuple(out)

    def canonicalize(self, x):
        if isinstance(x, dict):
            out = {}
            for exps, c in x.items():
                exps = self._check_exp(exps)
                c = self.base.canonicalize(c)
                if not self.base.is_zero(c):
                    cur = out.get(exps)
                    c = self.base.add(cur, c) if cur is not None else c
                    if self.base.is_zero(c):
                        out.pop(exps, None)
                    else:
                        out[exps] = c
            return out
        return {(Fraction(0),) * self.d: self.base.canonicalize(x)} if x else {}

    def monomial(self, exps, coeff=None):
        coeff = self.base.one() if coeff is None else coeff
        return self.canonicalize({tuple(exps): coeff})

    def embed_int(self, n):
        if n == 0:
            return {}
        return {(Fraction(0),) * self.d: self.base.embed_int(n)}

    def is_zero(self, x):
        return not x

    def add(self, a, b):
        out = dict(a)
        for exps, c in b.items():
            cur = out.get(exps)
            s = self.base.add(cur, c) if cur is not None else c
            if self.base.is_zero(s):
                out.pop(exps, None)
            else:
                out[exps] = s
        return out

    def neg(self, a):
        return {e: self.base.neg(c) for e, c in a.items()}

    def mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = self.base.mul(c1, c2)
                cur = out.get(e)
                s = self.base.add(cur, c) if cur is not None else c
                if self.base.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def is_unit(self, x):
        return len(x) == 1 and self.base.is_unit(next(iter(x.values())))

    def inverse(self, x):
        if not self.is_unit(x):
            raise NotDivisible("not a monomial unit")
        (exps, c), = x.items()
        return {tuple(-a for a in exps): self.base.inverse(c)}

    def divide_exact(self, a, b):
        if not b:
            raise DivisionByZero
        if not a:
            return {}
        if len(b) == 1:
            (exps, c), = b.items()
            out = {}
            for e1, c1 in a.items():
                out[tuple(x - y for x, y in zip(e1, exps))] = \
                    self.base.divide_exact(c1, c)
            return out
        # multivariate exact division by leading-term elimination
        keyed = sorted(b.items())
        lead_e, lead_c = keyed[-1]
        rem = dict(a)
        out = {}
        guard = 0
        while rem:
            guard += 1
            if guard > 10000:
                raise NotDivisible("division did not terminate")
            e1, c1 = sorted(rem.items())[-1]
            q_e = tuple(x - y for x, y in zip(e1, lead_e))
            try:
                q_c = self.base.divide_exact(c1, lead_c)
            except NotDivisible:
                raise NotDivisible("leading coefficient obstruction")
            term = {q_e: q_c}
            out = self.add(out, term)
            rem = self.add(rem, self.neg(self.mul(term, b)))
        for exps in out:
            self._check_exp(exps)
        return out

    def rand_element(self, rng, size=3, terms=3, span=2):
        out = {}
        denom = self.p**self.e if self.e else 1
        for _ in range(terms):
            exps = tuple(Fraction(rng.randint(-span * denom, span * denom), denom)
                         for _ in range(self.d))
            out[exps] = self.base.rand_element(rng, size)
        return self.canonicalize(out)


def require_same_ring(r1: RingHandle, r2: RingHandle):
    if r1 != r2:
        raise RingMismatch("%r vs %r" % (r1, r2))


class RingHom:
    """A ring map given by generator images; applied elementwise.

    ``gen_images`` maps generator names to target elements: 'v' for the
    DepthPolynomial/FiniteDepthQuotient variable, 'zeta' for the cyclotomic
    root, 'T1'...'Td' for Laurent coordinates.  Well-definedness (modulus
    killed, multiplicative set mapped to units) is checked on construction.
    """

    def __init__(self, source: RingHandle, target: RingHandle, gen_images: dict):
        self.source = source
        self.target = target
        self.images = {k: target.canonicalize(v) for k, v in gen_images.items()}
        self._check()

    def _check(self):
        src, tgt = self.source, self.target
        if isinstance(src, IntegersMod):
            if not tgt.is_zero(tgt.embed_int(src.m)):
                raise IllDefined("modulus %d not killed" % src.m)
        if isinstance(src, CyclotomicIntegers):
            img = self._eval_poly(src.modulus, self.images["zeta"])
            if not tgt.is_zero(img):
                raise IllDefined("cyclotomic modulus not killed")
        if isinstance(src, FiniteDepthQuotient):
            if not tgt.is_zero(tgt.embed_int(src.pN)):
                raise IllDefined("p-power modulus not killed")
            img = self._eval_poly(src.modulus, self.images["v"])
            if not tgt.is_zero(img):
                raise IllDefined("polynomial modulus not killed")

    def _eval_poly(self, coeffs, at):
        tgt = self.target
        acc = tgt.zero()
        for c in reversed(coeffs):
            acc = tgt.add(tgt.mul(acc, at), tgt.embed_int(c))
        return acc

    def apply(self, x):
        src, tgt = self.source, self.target
        if isinstance(src, Integers) or isinstance(src, IntegersMod):
            return tgt.embed_int(x)
        if isinstance(src, CyclotomicIntegers):
            return self._eval_poly(x, self.images["zeta"])
        if isinstance(src, FiniteDepthQuotient):
            return self._eval_poly(x, self.images["v"])
        if isinstance(src, DepthPolynomial):
            num = self._eval_poly(x.num, self.images["v"])
            if x.den == P.ONE:
                return num
            den = self._eval_poly(x.den, self.images["v"])
            try:
                return tgt.mul(num, tgt.inverse(den))
            except (NotDivisible, UnsupportedRing):
                return tgt.divide_exact(num, den)
        if isinstance(src, LaurentExtension):
            acc = tgt.zero()
            base_hom = RingHom(src.base, tgt, self.images)
            for exps, c in x.items():
                term = base_hom.apply(c)
                for i, e in enumerate(exps):
                    if e.denominator != 1:
                        raise IllDefined("fractional exponent has no image")
                    term = tgt.mul(term, tgt.power(self.images["T%d" % (i + 1)], e.numerator))
                acc = tgt.add(acc, term)
            return acc
        raise UnsupportedRing(src.variant)
