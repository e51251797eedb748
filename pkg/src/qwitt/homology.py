"""Bounded cochain complexes of finite modules with explicit differentials.

Complexes live over any ring handle with a finite integer-lattice
presentation (Integers, IntegersMod, CyclotomicIntegers,
FiniteDepthQuotient).  Every homological computation happens on the
underlying integer lattice: a degree of rank n over a ring of lattice
dimension m is the lattice Z^(n*m) together with relation columns, and
cohomology is read off integer normal forms, so certificates are
deterministic and exact.

A term may optionally carry generator orders (annihilating ring elements);
this is how the output of ``bockstein_complex`` -- whose terms are finite
cohomology modules rather than free modules -- fits the same type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import snf
from .errors import (
    MismatchedShape,
    NonCommuting,
    RingMismatch,
    UnsupportedRing,
    ZeroDivisor,
)
from .rings import Integers, IntegersMod, RingHandle, require_same_ring

ZZ = Integers()


@dataclass(frozen=True)
class AbelianInvariants:
    """free rank plus elementary divisors d1 | d2 | ... (each > 1)."""

    free_rank: int
    torsion: tuple

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise MismatchedShape("torsion %r is not a divisibility chain"
                                      % (self.torsion,))
        if any(t <= 1 for t in self.torsion):
            raise MismatchedShape("torsion entries must be > 1")

    @classmethod
    def from_divisors(cls, divisors, free_rank=0):
        tor = tuple(sorted(d for d in divisors if d > 1))
        return cls(free_rank, tor)

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __repr__(self):
        parts = ["Z"] * self.free_rank + ["Z/%d" % t for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _matrix_shape_ok(mat, rows, cols):
    if len(mat) != rows:
        return False
    return all(len(r) == cols for r in mat)


class FreeComplex:
    """A bounded cochain complex; ``ranks[i]`` copies of the ring in degree
    ``start + i`` and differential matrices d[i] of shape ranks[i+1] x
    ranks[i], acting on column vectors.  d.d = 0 is checked on construction.
    """

    def __init__(self, ring: RingHandle, start: int, ranks, differentials,
                 orders=None, check=True):
        self.ring = ring
        self.start = start
        self.ranks = list(ranks)
        self.diffs = [
            [[ring.canonicalize(x) for x in row] for row in mat]
            for mat in differentials
        ]
        # orders[i][j]: ring element annihilating generator j in degree i,
        # or None for a free generator
        if orders is None:
            self.orders = [[None] * r for r in self.ranks]
        else:
            self.orders = [list(o) for o in orders]
        if len(self.diffs) != max(len(self.ranks) - 1, 0):
            raise MismatchedShape("expected %d differentials"
                                  % (len(self.ranks) - 1))
        for i, mat in enumerate(self.diffs):
            if not _matrix_shape_ok(mat, self.ranks[i + 1], self.ranks[i]):
                raise MismatchedShape("differential %d has wrong shape" % i)
        if check:
            self._check_dd()

    # -- degree bookkeeping -------------------------------------------
    @property
    def end(self):
        return self.start + len(self.ranks) - 1

    def degrees(self):
        return range(self.start, self.end + 1)

    def rank(self, deg):
        i = deg - self.start
        if 0 <= i < len(self.ranks):
            return self.ranks[i]
        return 0

    def diff(self, deg):
        """Matrix of C^deg -> C^(deg+1); zero matrix outside the support."""
        i = deg - self.start
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return [[self.ring.zero()] * self.rank(deg) for _ in range(self.rank(deg + 1))]

    def order(self, deg):
        i = deg - self.start
        if 0 <= i < len(self.orders):
            return self.orders[i]
        return []

    def _check_dd(self):
        for deg in self.degrees():
            if self.rank(deg) and self.rank(deg + 1) and self.rank(deg + 2):
                m = mat_mul_ring(self.ring, self.diff(deg + 1), self.diff(deg))
                for col in range(self.rank(deg)):
                    vec = [m[row][col] for row in range(self.rank(deg + 2))]
                    if not self._vec_in_relations(deg + 2, vec):
                        raise MismatchedShape("d.d != 0 at degree %d" % deg)

    def _vec_in_relations(self, deg, vec):
        if all(self.ring.is_zero(x) for x in vec):
            return True
        rel = self.relation_columns(deg)
        if not rel:
            return False
        target = flatten_vec(self.ring, vec)
        return snf.solve(rel, target) is not None

    # -- integer lattice presentation ----------------------------------
    def lattice_dim(self, deg):
        return self.rank(deg) * self.ring.lattice_dim()

    def relation_columns(self, deg):
        """Columns spanning the relation lattice of degree deg."""
        ring = self.ring
        m = ring.lattice_dim()
        n = self.rank(deg)
        cols = []
        ring_rel = ring.lattice_relations()
        for j in range(n):
            for rel in snf.transpose(ring_rel) if ring_rel else []:
                col = [0] * (n * m)
                col[j * m:(j + 1) * m] = rel
                cols.append(col)
        for j, o in enumerate(self.order(deg)):
            if o is None:
                continue
            mat = ring.mult_matrix(o)
            for t in range(m):
                col = [0] * (n * m)
                col[j * m:(j + 1) * m] = [mat[i][t] for i in range(m)]
                cols.append(col)
        return snf.transpose(cols) if cols else []

    def diff_int(self, deg):
        """Integer matrix of d: C^deg -> C^(deg+1) on the lattices."""
        return ring_matrix_to_int(self.ring, self.diff(deg),
                                  self.rank(deg + 1), self.rank(deg))

    # -- operations -----------------------------------------------------
    def shift(self, n: int):
        """C[n]: degree i of the result is degree i+n of C, differential
        scaled by (-1)^n."""
        sign = -1 if n % 2 else 1
        diffs = [[[self.ring.mul(self.ring.embed_int(sign), x) for x in row]
                  for row in mat] for mat in self.diffs]
        return FreeComplex(self.ring, self.start - n, self.ranks, diffs,
                           orders=self.orders, check=False)

    def __eq__(self, other):
        return (isinstance(other, FreeComplex)
                and self.ring == other.ring
                and self.start == other.start
                and self.ranks == other.ranks
                and self.diffs == other.diffs
                and self.orders == other.orders)


def mat_mul_ring(ring, a, b):
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
    for i in range(rows):
        for t in range(inner):
            x = a[i][t]
            if ring.is_zero(x):
                continue
            for j in range(cols):
                out[i][j] = ring.add(out[i][j], ring.mul(x, b[t][j]))
    return out


def flatten_vec(ring, vec):
    out = []
    for x in vec:
        out.extend(ring.elt_to_vec(x))
    return out


def ring_matrix_to_int(ring, mat, rows, cols):
    m = ring.lattice_dim()
    out = snf.zeros(rows * m, cols * m)
    for i in range(rows):
        for j in range(cols):
            block = ring.mult_matrix(mat[i][j])
            for a in range(m):
                row = out[i * m + a]
                ba = block[a]
                for b in range(m):
                    row[j * m + b] = ba[b]
    return out


class ChainMap:
    def __init__(self, source: FreeComplex, target: FreeComplex, mats: dict,
                 check=True):
        require_same_ring(source.ring, target.ring)
        self.source = source
        self.target = target
        self.ring = source.ring
        self.mats = {}
        for deg in set(source.degrees()) | set(target.degrees()):
            mat = mats.get(deg)
            if mat is None:
                mat = [[self.ring.zero()] * source.rank(deg)
                       for _ in range(target.rank(deg))]
            if not _matrix_shape_ok(mat, target.rank(deg), source.rank(deg)):
                raise MismatchedShape("chain map shape at degree %d" % deg)
            self.mats[deg] = [[self.ring.canonicalize(x) for x in row] for row in mat]
        if check:
            self._check_commutes()

    def mat(self, deg):
        return self.mats.get(deg, [[self.ring.zero()] * self.source.rank(deg)
                                   for _ in range(self.target.rank(deg))])

    def _check_commutes(self):
        ring = self.ring
        for deg in list(self.source.degrees()):
            s0 = self.source.rank(deg)
            t1 = self.target.rank(deg + 1)
            if not s0 or not t1:
                continue
            zero_mat = [[ring.zero()] * s0 for _ in range(t1)]
            lhs = (mat_mul_ring(ring, self.target.diff(deg), self.mat(deg))
                   if self.target.rank(deg) else zero_mat)
            rhs = (mat_mul_ring(ring, self.mat(deg + 1), self.source.diff(deg))
                   if self.source.rank(deg + 1) else zero_mat)
            for col in range(s0):
                delta = [ring.sub(lhs[row][col], rhs[row][col])
                         for row in range(t1)]
                if not self.target._vec_in_relations(deg + 1, delta):
                    raise NonCommuting("chain map fails at degree %d" % deg)


# ---------------------------------------------------------------------------
# Koszul complexes
# ---------------------------------------------------------------------------


def koszul_subsets(d, n):
    """Degree-n index subsets of {0..d-1}, lexicographically ordered."""
    return list(combinations(range(d), n))


def koszul_sign_position(subset, j):
    """Insertion data: position m (1-based) of j in sorted(subset + (j,))."""
    return sum(1 for i in subset if i < j) + 1


def koszul(ring: RingHandle, ops, module_rank=None) -> FreeComplex:
    """Koszul complex of commuting endomorphisms of a finite free module.

    ``ops`` is a list of square matrices over the ring (or bare ring
    elements, treated as 1x1).  The degree-n term has one copy of the
    module per size-n subset of the operators, ordered lexicographically;
    the differential inserts operator j with sign (-1)^(m-1) where m is the
    1-based position of j in the enlarged subset.
    """
    mats = []
    for f in ops:
        if isinstance(f, list):
            mats.append([[ring.canonicalize(x) for x in row] for row in f])
        else:
            mats.append([[ring.canonicalize(f)]])
    m = len(mats[0]) if mats else (module_rank or 1)
    for f in mats:
        if not _matrix_shape_ok(f, m, m):
            raise MismatchedShape("operator matrices must be square of equal size")
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            ab = mat_mul_ring(ring, mats[a], mats[b])
            ba = mat_mul_ring(ring, mats[b], mats[a])
            if ab != ba:
                raise NonCommuting("operators %d and %d do not commute" % (a, b))
    d = len(mats)
    ranks = []
    diffs = []
    zero = ring.zero()
    for n in range(d + 1):
        ranks.append(len(koszul_subsets(d, n)) * m)
    for n in range(d):
        src = koszul_subsets(d, n)
        tgt = koszul_subsets(d, n + 1)
        tgt_index = {s: i for i, s in enumerate(tgt)}
        mat = [[zero] * (len(src) * m) for _ in range(len(tgt) * m)]
        for col_s, subset in enumerate(src):
            for j in range(d):
                if j in subset:
                    continue
                enlarged = tuple(sorted(subset + (j,)))
                row_s = tgt_index[enlarged]
                pos = koszul_sign_position(subset, j)
                sign = -1 if (pos - 1) % 2 else 1
                block = mats[j]
                for a in range(m):
                    for b in range(m):
                        x = block[a][b]
                        if sign < 0:
                            x = ring.neg(x)
                        mat[row_s * m + a][col_s * m + b] = x
        diffs.append(mat)
    return FreeComplex(ring, 0, ranks, diffs)


def two_term(ring, f) -> FreeComplex:
    return koszul(ring, [f])


def tensor_total(C: FreeComplex, D: FreeComplex) -> FreeComplex:
    """Total complex of the double complex C (x) D with Koszul signs.

    Degree-n blocks are ordered by descending C-degree, which makes
    tensor products of Koszul complexes equal the joint Koszul complex on
    the nose (lex subset bases).
    """
    require_same_ring(C.ring, D.ring)
    ring = C.ring
    if any(o is not None for os in C.orders for o in os) or \
       any(o is not None for os in D.orders for o in os):
        raise UnsupportedRing("tensor of presented (non-free) complexes")
    start = C.start + D.start
    end = C.end + D.end
    blocks = {}
    for n in range(start, end + 1):
        blocks[n] = [(i, n - i) for i in range(C.end, C.start - 1, -1)
                     if D.start <= n - i <= D.end and C.rank(i) and D.rank(n - i)]
    offs = {}
    ranks = []
    for n in range(start, end + 1):
        off = 0
        for (i, j) in blocks[n]:
            offs[(n, i, j)] = off
            off += C.rank(i) * D.rank(j)
        ranks.append(off)
    diffs = []
    for n in range(start, end):
        mat = [[ring.zero()] * ranks[n - start] for _ in range(ranks[n + 1 - start])]
        for (i, j) in blocks[n]:
            src_off = offs[(n, i, j)]
            # d_C (x) 1: (i, j) -> (i+1, j)
            if (n + 1, i + 1, j) in offs and C.rank(i + 1):
                dst_off = offs[(n + 1, i + 1, j)]
                dC = C.diff(i)
                for a in range(C.rank(i + 1)):
                    for b in range(C.rank(i)):
                        x = dC[a][b]
                        if ring.is_zero(x):
                            continue
                        for t in range(D.rank(j)):
                            mat[dst_off + a * D.rank(j) + t][src_off + b * D.rank(j) + t] = x
            # (-1)^i 1 (x) d_D: (i, j) -> (i, j+1)
            if (n + 1, i, j + 1) in offs and D.rank(j + 1):
                dst_off = offs[(n + 1, i, j + 1)]
                dD = D.diff(j)
                sign = -1 if i % 2 else 1
                for a in range(D.rank(j + 1)):
                    for b in range(D.rank(j)):
                        x = dD[a][b]
                        if ring.is_zero(x):
                            continue
                        if sign < 0:
                            x = ring.neg(x)
                        for t in range(C.rank(i)):
                            mat[dst_off + t * D.rank(j + 1) + a][src_off + t * D.rank(j) + b] = x
        diffs.append(mat)
    return FreeComplex(ring, start, ranks, diffs)


# ---------------------------------------------------------------------------
# cohomology via integer normal forms
# ---------------------------------------------------------------------------


def cocycle_lattice(C: FreeComplex, deg: int):
    """Basis (columns) of {x in Z^dim : d x lies in the relation lattice}."""
    dim = C.lattice_dim(deg)
    if dim == 0:
        return []
    out_dim = C.lattice_dim(deg + 1)
    if out_dim == 0:
        return snf.identity(dim)
    d_int = C.diff_int(deg)
    rel = C.relation_columns(deg + 1)
    block = snf.hstack(d_int, rel) if rel else d_int
    ker = snf.kernel_basis(block)
    if not ker or not ker[0]:
        return [[] for _ in range(dim)]
    proj = [row[:] for row in ker[:dim]]
    return snf.column_lattice_basis(proj)


def coboundary_columns(C: FreeComplex, deg: int):
    """Columns spanning im(d) + relations in degree deg."""
    cols = []
    prev = C.diff_int(deg - 1) if C.rank(deg - 1) else None
    if prev and prev[0]:
        cols.append(prev)
    rel = C.relation_columns(deg)
    if rel:
        cols.append(rel)
    if not cols:
        return []
    out = cols[0]
    for extra in cols[1:]:
        out = snf.hstack(out, extra)
    return out


def cohomology(C: FreeComplex, deg: int) -> AbelianInvariants:
    """Cohomology of C in the given degree as abelian-group invariants."""
    _require_lattice_ring(C.ring)
    if C.rank(deg) == 0:
        return AbelianInvariants(0, ())
    K = cocycle_lattice(C, deg)
    if not K or not K[0]:
        return AbelianInvariants(0, ())
    B = coboundary_columns(C, deg)
    if not B or not B[0]:
        return AbelianInvariants(len(K[0]), ())
    A = snf.solve(K, B)
    if A is None:
        raise MismatchedShape("coboundaries escape the cocycle lattice")
    divisors = snf.smith_invariants(A)
    free_rank = len(K[0]) - len(divisors)
    return AbelianInvariants.from_divisors(divisors, free_rank)


def _require_lattice_ring(ring):
    try:
        ring.lattice_dim()
    except UnsupportedRing:
        raise UnsupportedRing(
            "cohomology needs a finite lattice presentation; reduce %s first"
            % ring.variant)


def cohomology_generators(C: FreeComplex, deg: int):
    """(generators, orders): lattice vectors generating H^deg and the order
    of each (0 = infinite), Smith-normalized so orders form a divisor chain
    after the free part."""
    _require_lattice_ring(C.ring)
    if C.rank(deg) == 0:
        return [], []
    K = cocycle_lattice(C, deg)
    if not K or not K[0]:
        return [], []
    B = coboundary_columns(C, deg)
    kcols = len(K[0])
    if not B or not B[0]:
        gens = [[K[i][j] for i in range(len(K))] for j in range(kcols)]
        return gens, [0] * kcols
    A = snf.solve(K, B)
    d_mat, u, v = snf.smith_with_transforms(A)
    uinv = snf.invert_unimodular(u)
    diag = [d_mat[i][i] if i < len(d_mat[0]) else 0 for i in range(len(d_mat))]
    gens = []
    orders = []
    for j in range(kcols):
        order = diag[j] if j < len(diag) else 0
        if order == 1:
            continue
        newcol = [sum(K[i][t] * uinv[t][j] for t in range(kcols))
                  for i in range(len(K))]
        gens.append(newcol)
        orders.append(order)
    return gens, orders


def express_in_cohomology(C: FreeComplex, deg: int, vec, gens, orders):
    """Coordinates of a cocycle's class in the given generators, reduced
    mod the orders; None if the vector is not a cocycle class combination."""
    if not gens:
        return []
    dim = C.lattice_dim(deg)
    cols = [[g[i] for g in gens] for i in range(dim)]
    B = coboundary_columns(C, deg)
    stacked = snf.hstack(cols, B) if B and B[0] else cols
    sol = snf.solve(stacked, list(vec))
    if sol is None:
        return None
    out = []
    for j, o in enumerate(orders):
        c = sol[j]
        out.append(c % o if o else c)
    return out


# ---------------------------------------------------------------------------
# Bockstein complexes
# ---------------------------------------------------------------------------


def bockstein_complex(C: FreeComplex, f) -> FreeComplex:
    """The complex H^*(C/f) with the connecting map of
    0 -> R/f -> R/f^2 -> R/f -> 0 as differential.

    Supported over Integers (f a nonzero nonunit integer).  Degree-i
    generators are Smith-basis lifts of H^i(C/f); the differential is
    lift-divide-project.  See ``qtorus`` for the polynomial-model variant.
    """
    ring = C.ring
    if not isinstance(ring, Integers):
        raise UnsupportedRing("generic bockstein_complex runs over the integers")
    f = int(f)
    if f == 0:
        raise ZeroDivisor("f must be a non-zero-divisor")
    f = abs(f)
    if f == 1:
        raise ZeroDivisor("f must not be a unit")
    target = IntegersMod(f)
    Cf = complex_mod(C, f)
    degs = list(C.degrees())
    gens_all = {}
    orders_all = {}
    for deg in degs:
        gens, orders = cohomology_generators(Cf, deg)
        gens_all[deg] = gens
        orders_all[deg] = orders
    ranks = [len(gens_all[deg]) for deg in degs]
    diffs = []
    for deg in degs[:-1]:
        src_gens = gens_all[deg]
        tgt_gens = gens_all[deg + 1]
        mat = [[target.zero()] * len(src_gens) for _ in range(len(tgt_gens))]
        d_int = C.diff_int(deg)
        for col, g in enumerate(src_gens):
            if not tgt_gens:
                continue
            image = [sum(d_int[i][j] * g[j] for j in range(len(g)))
                     for i in range(len(d_int))]
            divided = []
            for x in image:
                q, rem = divmod(x, f)
                if rem:
                    raise ZeroDivisor("generator is not a mod-f cocycle")
                divided.append(q)
            coords = express_in_cohomology(Cf, deg + 1, divided,
                                           tgt_gens, orders_all[deg + 1])
            if coords is None:
                raise MismatchedShape("connecting image misses H^%d" % (deg + 1))
            for row, c in enumerate(coords):
                mat[row][col] = target.embed_int(c)
        diffs.append(mat)
    orders = [[target.embed_int(o) if o else None for o in orders_all[deg]]
              for deg in degs]
    return FreeComplex(target, C.start, ranks, diffs, orders=orders)


def complex_mod(C: FreeComplex, m: int) -> FreeComplex:
    """C (x) Z/m for a complex over the integers."""
    assert isinstance(C.ring, Integers)
    target = IntegersMod(m)
    diffs = [[[target.embed_int(x) for x in row] for row in mat] for mat in C.diffs]
    return FreeComplex(target, C.start, C.ranks, diffs, check=False)


# ---------------------------------------------------------------------------
# quasi-isomorphism certificates
# ---------------------------------------------------------------------------


def certify_quasi_iso(phi: ChainMap) -> dict:
    """Per-degree comparison of cohomology plus an exact check that the
    induced maps are isomorphisms.  Failure is reported, not raised."""
    C, D = phi.source, phi.target
    per_degree = []
    overall = True
    degs = sorted(set(C.degrees()) | set(D.degrees()))
    for deg in degs:
        lhs = cohomology(C, deg) if C.rank(deg) else AbelianInvariants(0, ())
        rhs = cohomology(D, deg) if D.rank(deg) else AbelianInvariants(0, ())
        ok = lhs == rhs
        if ok and not lhs.is_trivial():
            ok = _induced_iso(phi, deg)
        per_degree.append({"degree": deg, "lhs": repr(lhs), "rhs": repr(rhs),
                           "match": ok})
        overall = overall and ok
    return {"perDegree": per_degree, "pass": overall}


def _induced_iso(phi: ChainMap, deg: int) -> bool:
    C, D = phi.source, phi.target
    ring = phi.ring
    m_int = ring_matrix_to_int(ring, phi.mat(deg), D.rank(deg), C.rank(deg))
    K_src = cocycle_lattice(C, deg)
    K_tgt = cocycle_lattice(D, deg)
    B_src = coboundary_columns(C, deg)
    B_tgt = coboundary_columns(D, deg)
    if not K_src or not K_src[0]:
        return not K_tgt or not K_tgt[0]
    mk = snf.mat_mul(m_int, K_src)
    # surjectivity: K_tgt <= im(M on cocycles) + coboundaries
    stacked = snf.hstack(mk, B_tgt) if B_tgt and B_tgt[0] else mk
    if K_tgt and K_tgt[0]:
        if snf.solve(stacked, K_tgt) is None:
            return False
    # injectivity: preimage of coboundaries is contained in coboundaries
    if B_tgt and B_tgt[0]:
        block = snf.hstack(mk, B_tgt)
    else:
        block = mk
    ker = snf.kernel_basis(block)
    kcols = len(K_src[0])
    if ker and ker[0]:
        ycols = [[ker[i][j] for j in range(len(ker[0]))] for i in range(kcols)]
        pre = snf.mat_mul(K_src, ycols)
        if B_src and B_src[0]:
            if snf.solve(B_src, pre) is None:
                return False
        else:
            if not snf.is_zero_matrix(pre):
                return False
    return True
