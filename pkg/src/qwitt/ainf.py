"""The depth-k polynomial model of Fontaine's ring.

The variable v stands for a compatible p^k-th root of the unit-root system
element, so q = v^(p^k) and the period elements are

    mu        = q - 1
    xi_r      = mu / phi^(-r)(mu) = (v^(p^k)-1)/(v^(p^(k-r))-1),  r <= k
    xi~_r     = phi^r(mu) / mu    = (v^(p^(k+r))-1)/(v^(p^k)-1)

with phi the substitution v -> v^p.  The maps theta_r and theta~_r land in
Witt vectors over cyclotomic integers at an explicitly supplied depth; the
caller owns the precision accounting.
"""

from __future__ import annotations

from . import polyint as P
from .errors import InsufficientDepth, MalformedElement
from .rings import CyclotomicIntegers, DepthPolynomial, Frac
from .witt import WittVector, int_to_witt, mul_teichmuller, witt_add, witt_zero


class AinfTruncation:
    def __init__(self, p: int, k: int):
        if k < 1:
            raise InsufficientDepth("depth must be >= 1 for the period elements")
        self.p = p
        self.k = k
        self.ring = DepthPolynomial(p, k)

    def __repr__(self):
        return "AinfTruncation(p=%d, k=%d)" % (self.p, self.k)

    def __eq__(self, other):
        return isinstance(other, AinfTruncation) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("AinfTruncation", self.p, self.k))

    # designated elements -------------------------------------------------
    def q(self):
        return self.ring.from_poly(P.monomial(self.p**self.k))

    def q_power(self, a) -> Frac:
        """q^a as a ring element for a with p^k * a integral (a may be a
        Fraction or an int; negative exponents give monomial denominators)."""
        from fractions import Fraction

        a = Fraction(a)
        e = a * self.p**self.k
        if e.denominator != 1:
            raise InsufficientDepth("weight %s needs depth > %d" % (a, self.k))
        e = int(e)
        if e >= 0:
            return self.ring.from_poly(P.monomial(e))
        return self.ring.canonicalize(Frac(P.ONE, P.monomial(-e)))

    def mu(self):
        return self.ring.from_poly(P.add(P.monomial(self.p**self.k), P.const(-1)))

    def xi_r(self, r: int):
        if r > self.k:
            raise InsufficientDepth("xi_%d needs depth >= %d" % (r, r))
        return self.ring.from_poly(
            P.q_power_minus_one_ratio(self.p**self.k, self.p ** (self.k - r)))

    def xi(self):
        return self.xi_r(1)

    def xi_tilde_r(self, r: int):
        if r < 0:
            raise MalformedElement("r must be >= 0")
        if r == 0:
            return self.ring.one()
        return self.ring.from_poly(
            P.q_power_minus_one_ratio(self.p ** (self.k + r), self.p**self.k))

    def xi_tilde(self):
        return self.xi_tilde_r(1)

    def xi_tilde_r_poly(self, r: int) -> tuple:
        """xi~_r as a plain monic integer polynomial (numerator form)."""
        if r == 0:
            return P.ONE
        return P.q_power_minus_one_ratio(self.p ** (self.k + r), self.p**self.k)

    # Frobenius ------------------------------------------------------------
    def phi_apply(self, a: Frac, times: int = 1) -> Frac:
        n = self.p**times
        return self.ring.canonicalize(
            Frac(P.compose_power(a.num, n), P.compose_power(a.den, n)))

    def phi_inverse(self, a: Frac, times: int = 1) -> Frac:
        n = self.p**times
        num = P.decompose_power(a.num, n)
        den = P.decompose_power(a.den, n)
        if num is None or den is None:
            raise InsufficientDepth("element not in the image of phi^%d" % times)
        return self.ring.canonicalize(Frac(num, den))

    # theta maps -----------------------------------------------------------
    def _theta(self, a: Frac, r: int, m: int, root_exponent: int) -> WittVector:
        """Ring map determined by v |-> [zeta_(p^m)^(root_exponent)]."""
        target = CyclotomicIntegers(self.p, m)
        if a.den != P.ONE:
            raise MalformedElement("theta maps apply to polynomial elements")
        out = witt_zero(self.p, r, target)
        for j, c in enumerate(a.num):
            if c == 0:
                continue
            term = int_to_witt(c, self.p, r, target)
            if j:
                term = mul_teichmuller(term, target.zeta_power(j * root_exponent))
            out = witt_add(out, term)
        return out

    def theta_r(self, a: Frac, r: int, m: int = None) -> WittVector:
        """theta_r = theta~_r phi^r: determined by theta_r(v) = [zeta_(p^k)].

        Kills xi_r; needs r <= k for xi_r to exist at this depth.
        """
        if r > self.k:
            raise InsufficientDepth("theta_%d at depth %d" % (r, self.k))
        if m is None:
            m = self.k + r
        if m < self.k:
            raise InsufficientDepth("target depth %d < %d" % (m, self.k))
        return self._theta(a, r, m, self.p ** (m - self.k))

    def theta_tilde_r(self, a: Frac, r: int, m: int = None) -> WittVector:
        """Determined by theta~_r(v) = [zeta_(p^(k+r))]; kills xi~_r."""
        if m is None:
            m = self.k + r
        if m < self.k + r:
            raise InsufficientDepth("target depth %d < k+r = %d" % (m, self.k + r))
        return self._theta(a, r, m, self.p ** (m - self.k - r))
