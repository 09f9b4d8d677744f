"""Exact, degree-truncated linear algebra over a polynomial ring with generators in degree 2.

The ring ``S = Q[x_0, ..., x_{n-1}]`` is graded with ``deg x_i = 2``.  A graded free
module is described by a *layout*: a tuple of components ``(d, red)`` where ``d`` is
the degree of the generator and ``red`` is ``None`` (a copy of ``S(-d)``) or a
:class:`Reducer` (a copy of ``(S / alpha)(-d)``).  Elements of degree ``D`` are
tuples of polynomials, one per component, of degree ``D - d``; the component of a
quotient is kept in normal form (free of the reducer's pivot variable).

Every computation is exact over ``Q`` and happens one degree at a time.  Row
reduction uses FLINT's ``fmpq_mat.rref``, which is deterministic.

Grading convention: a generator in degree ``d`` spans ``S(-d)``, whose graded rank
is ``v^{-d}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from flint import fmpq, fmpq_mat, fmpq_mpoly_ctx

from .laurent import LaurentPoly


class CutoffError(RuntimeError):
    """A degree cutoff was too small to certify a result."""


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------

class Ring:
    """``Q[x_0..x_{n-1}]`` with cached monomial bases per degree."""

    def __init__(self, nvars: int):
        self.n = nvars
        self.ctx = fmpq_mpoly_ctx.get(("x", nvars), "deglex")
        self.gens = self.ctx.gens()
        self._mono = {}
        self._index = {}
        self._mpoly = {}

    def zero(self):
        return self.ctx.from_dict({})

    def one(self):
        return self.ctx.from_dict({(0,) * self.n: 1})

    def const(self, c):
        return self.ctx.from_dict({(0,) * self.n: fmpq(c.numerator, c.denominator)
                                   if isinstance(c, Fraction) else c})

    def linear(self, vec):
        """The linear form ``sum vec_i x_i`` (a degree-2 element)."""
        d = {}
        for i, c in enumerate(vec):
            c = Fraction(c)
            if c:
                e = [0] * self.n
                e[i] = 1
                d[tuple(e)] = fmpq(c.numerator, c.denominator)
        return self.ctx.from_dict(d)

    def monomials(self, k: int, skip: int = -1):
        """Exponent tuples of total degree ``k`` (graded degree ``2k``), avoiding ``x_skip``."""
        key = (k, skip)
        r = self._mono.get(key)
        if r is None:
            if k < 0:
                r = ()
            else:
                out = []

                def rec(i, rem, cur):
                    if i == self.n - 1:
                        if i == skip and rem:
                            return
                        out.append(tuple(cur + [rem]))
                        return
                    rng = [0] if i == skip else range(rem, -1, -1)
                    for a in rng:
                        rec(i + 1, rem - a, cur + [a])

                if self.n == 1:
                    out = [(k,)] if skip != 0 or k == 0 else []
                else:
                    rec(0, k, [])
                r = tuple(out)
            self._mono[key] = r
            self._index[key] = {e: i for i, e in enumerate(r)}
        return r

    def mindex(self, k: int, skip: int = -1) -> dict:
        self.monomials(k, skip)
        return self._index[(k, skip)]

    def dim(self, D: int, skip: int = -1) -> int:
        """Dimension of the degree-``D`` slice (of ``S``, or of ``S/alpha`` if ``skip >= 0``)."""
        if D < 0 or D % 2:
            return 0
        n = self.n - (1 if skip >= 0 else 0)
        k = D // 2
        if n == 0:
            return 1 if k == 0 else 0
        return comb(k + n - 1, n - 1)

    def mono(self, e):
        p = self._mpoly.get(e)
        if p is None:
            p = self.ctx.from_dict({e: 1})
            self._mpoly[e] = p
        return p


@lru_cache(maxsize=None)
def ring(nvars: int) -> Ring:
    return Ring(nvars)


class Reducer:
    """Normal forms modulo a linear form ``alpha``.

    The pivot is the last variable whose coefficient is ``+-1`` if any, otherwise the
    last variable with nonzero coefficient.  Reduction substitutes
    ``x_p = -(sum_{j != p} a_j x_j) / a_p``.
    """

    def __init__(self, R: Ring, alpha):
        self.R = R
        self.alpha = tuple(Fraction(a) for a in alpha)
        if not any(self.alpha):
            raise ValueError("cannot reduce modulo zero")
        units = [i for i, a in enumerate(self.alpha) if abs(a) == 1]
        nz = [i for i, a in enumerate(self.alpha) if a]
        self.pivot = units[-1] if units else nz[-1]
        ap = self.alpha[self.pivot]
        sub = []
        for i in range(R.n):
            if i == self.pivot:
                expr = {}
                for j, a in enumerate(self.alpha):
                    if j != self.pivot and a:
                        c = -a / ap
                        e = [0] * R.n
                        e[j] = 1
                        expr[tuple(e)] = fmpq(c.numerator, c.denominator)
                sub.append(R.ctx.from_dict(expr))
            else:
                sub.append(R.gens[i])
        self._sub = sub
        self._mono = {}
        self.form = R.linear(self.alpha)

    def __call__(self, p):
        if p == 0:
            return p
        return p.compose(*self._sub)

    def mono(self, e):
        r = self._mono.get(e)
        if r is None:
            r = self(self.R.mono(e))
            self._mono[e] = r
        return r

    def key(self):
        return self.alpha


_REDUCERS = {}


def reducer(R: Ring, alpha) -> Reducer:
    alpha = tuple(Fraction(a) for a in alpha)
    key = (R.n, alpha)
    r = _REDUCERS.get(key)
    if r is None:
        r = Reducer(R, alpha)
        _REDUCERS[key] = r
    return r


class RingAutomorphism:
    """Linear change of variables ``x_i -> sum_j M[j][i] x_j`` (``M`` acts on coordinates)."""

    def __init__(self, R: Ring, matrix):
        self.R = R
        self.matrix = [[Fraction(a) for a in row] for row in matrix]
        n = R.n
        self._sub = [R.linear([self.matrix[j][i] for j in range(n)]) for i in range(n)]

    def __call__(self, p):
        if p == 0:
            return p
        return p.compose(*self._sub)


# ---------------------------------------------------------------------------
# layouts: graded free modules over S or S/alpha
# ---------------------------------------------------------------------------

Component = tuple  # (degree, Reducer | None)


def comp_skip(c) -> int:
    return c[1].pivot if c[1] is not None else -1


def layout_dim(R: Ring, layout, D: int) -> int:
    return sum(R.dim(D - c[0], comp_skip(c)) for c in layout)


def layout_offsets(R: Ring, layout, D: int):
    offs = []
    o = 0
    for c in layout:
        offs.append(o)
        o += R.dim(D - c[0], comp_skip(c))
    return offs, o


def to_row(R: Ring, layout, vec, D: int, offs=None):
    """Coefficient row of a homogeneous element ``vec`` of degree ``D``."""
    if offs is None:
        offs, total = layout_offsets(R, layout, D)
    else:
        offs, total = offs
    row = [0] * total
    for c, p, o in zip(layout, vec, offs):
        if p == 0:
            continue
        k = D - c[0]
        if k < 0 or k % 2:
            raise ValueError("component of wrong degree")
        idx = R.mindex(k // 2, comp_skip(c))
        for e, a in p.to_dict().items():
            row[o + idx[e]] = a
    return row


def from_row(R: Ring, layout, row, D: int):
    """Inverse of :func:`to_row`."""
    out = []
    o = 0
    for c in layout:
        k = D - c[0]
        sk = comp_skip(c)
        dim = R.dim(k, sk)
        if dim == 0:
            out.append(R.zero())
            continue
        mons = R.monomials(k // 2, sk)
        d = {}
        for i in range(dim):
            a = row[o + i]
            if a != 0:
                d[mons[i]] = a
        out.append(R.ctx.from_dict(d))
        o += dim
    return tuple(out)


def monomial_multiples(R: Ring, layout, vec, deg: int, D: int):
    """Rows of ``m * vec`` for all monomials ``m`` of degree ``D - deg``."""
    k = D - deg
    if k < 0 or k % 2:
        return []
    offs = layout_offsets(R, layout, D)
    rows = []
    for m in R.monomials(k // 2):
        prod = []
        for c, p in zip(layout, vec):
            if p == 0:
                prod.append(p)
            elif c[1] is None:
                prod.append(p * R.mono(m))
            else:
                prod.append(c[1].mono(m) * p)
        rows.append(to_row(R, layout, prod, D, offs))
    return rows


# ---------------------------------------------------------------------------
# row reduction helpers
# ---------------------------------------------------------------------------

def _mat(rows, ncols):
    if not rows:
        return fmpq_mat(0, ncols)
    return fmpq_mat(rows)


def rref_columns(cols, nrows):
    """Greedy column analysis of the matrix whose columns are ``cols`` (each of length ``nrows``).

    Returns ``(pivots, expr)``: ``pivots`` lists the indices of columns independent of
    all earlier columns; ``expr[j]`` for a non-pivot ``j`` is ``{pivot_index: coefficient}``
    expressing column ``j`` in terms of pivot columns.
    """
    ncols = len(cols)
    if ncols == 0:
        return [], {}
    if nrows == 0:
        return [], {j: {} for j in range(ncols)}
    M = fmpq_mat(nrows, ncols)
    for j, col in enumerate(cols):
        for i, a in enumerate(col):
            if a != 0:
                M[i, j] = a
    Rm, rank = M.rref()
    pivots = []
    for r in range(rank):
        for j in range(ncols):
            if Rm[r, j] != 0:
                pivots.append(j)
                break
    pivset = set(pivots)
    expr = {}
    for j in range(ncols):
        if j in pivset:
            continue
        e = {}
        for r, p in enumerate(pivots):
            a = Rm[r, j]
            if a != 0:
                e[p] = a
        expr[j] = e
    return pivots, expr


def rank_of(rows, ncols) -> int:
    if not rows or ncols == 0:
        return 0
    return _mat(rows, ncols).rank()


def nullspace_rows(rows, ncols):
    """Basis (as rows) of ``{c : c M = 0}`` for the matrix with the given rows."""
    n = len(rows)
    if n == 0:
        return []
    if ncols == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    cols_as_vectors = [list(r) for r in rows]  # each row becomes a column of M^T
    pivots, expr = rref_columns(cols_as_vectors, ncols)
    out = []
    for j, e in expr.items():
        v = [0] * n
        v[j] = 1
        for p, a in e.items():
            v[p] = -a
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# graded free modules, truncated modules, maps
# ---------------------------------------------------------------------------

@dataclass
class GradedFree:
    """``sum_i S(-d_i)``; ``shifts`` lists the generator degrees ``d_i``."""
    shifts: list

    def grk(self) -> LaurentPoly:
        return LaurentPoly.from_exponents([-d for d in self.shifts])

    def layout(self):
        return tuple((d, None) for d in self.shifts)

    def shifted(self, n: int) -> "GradedFree":
        """``M(n)``: generators move from degree ``d`` to ``d - n``."""
        return GradedFree([d - n for d in self.shifts])


@dataclass
class GradedMap:
    """A degree-0 map between layouts; ``columns[j]`` is the image of generator ``j``."""
    source: tuple
    target: tuple
    columns: list

    def slice_rows(self, R: Ring, D: int):
        rows = []
        for j, c in enumerate(self.source):
            rows.extend(monomial_multiples(R, self.target, self.columns[j], c[0], D))
        return rows


@dataclass
class TruncModule:
    """A graded submodule of a layout, known degreewise up to ``cutoff``.

    ``slices[D]`` is a list of basis rows of the degree-``D`` slice.
    """
    R: Ring
    layout: tuple
    cutoff: int
    slices: dict = field(default_factory=dict)
    free_certificate: list | None = None

    def dim(self, D: int) -> int:
        return len(self.slices.get(D, []))


def submodule_from_generators(R: Ring, layout, gens, cutoff: int) -> TruncModule:
    """Degreewise span of ``S * gens``; ``gens`` are ``(degree, vector)`` pairs."""
    tm = TruncModule(R, tuple(layout), cutoff)
    lo = min([g[0] for g in gens], default=0)
    for D in range(lo, cutoff + 1):
        rows = []
        for deg, vec in gens:
            rows.extend(monomial_multiples(R, layout, vec, deg, D))
        ncols = layout_dim(R, layout, D)
        if rows and ncols:
            M, r = _mat(rows, ncols).rref()
            tm.slices[D] = [[M[i, j] for j in range(ncols)] for i in range(r)]
        else:
            tm.slices[D] = []
    return tm


def image(R: Ring, f: GradedMap, cutoff: int) -> TruncModule:
    gens = [(c[0], f.columns[j]) for j, c in enumerate(f.source)]
    return submodule_from_generators(R, f.target, gens, cutoff)


def kernel(R: Ring, f: GradedMap, cutoff: int) -> TruncModule:
    tm = TruncModule(R, tuple(f.source), cutoff)
    lo = min([c[0] for c in f.source], default=0)
    for D in range(lo, cutoff + 1):
        rows = f.slice_rows(R, D)
        ncols = layout_dim(R, f.target, D)
        tm.slices[D] = nullspace_rows(rows, ncols) if rows else []
    return tm


def min_generators(m: TruncModule, check_stable: bool = True):
    """Minimal homogeneous generators ``(degree, vector)`` of a truncated module.

    In each degree the new generators complete ``S_2 * slice_{D-2}`` to a basis of the
    slice.  If a generator appears in one of the top two degrees the cutoff is not
    certified and :class:`CutoffError` is raised.
    """
    R = m.R
    gens = []
    degrees = sorted(m.slices)
    for D in degrees:
        basis = m.slices[D]
        if not basis:
            continue
        lower = []
        for deg, vec in gens:
            lower.extend(monomial_multiples(R, m.layout, vec, deg, D))
        ncols = layout_dim(R, m.layout, D)
        r0 = rank_of(lower, ncols)
        if r0 == len(basis):
            continue
        # greedy selection: add basis rows that increase the rank
        cur = list(lower)
        rk = r0
        for row in basis:
            trial = cur + [row]
            r2 = rank_of(trial, ncols)
            if r2 > rk:
                cur = trial
                rk = r2
                gens.append((D, from_row(R, m.layout, row, D)))
        if check_stable and D >= m.cutoff - 2 and rk > r0:
            raise CutoffError(f"new generators in degree {D} near the cutoff {m.cutoff}")
    return gens


def projective_cover(m: TruncModule):
    """``(GradedFree, GradedMap)`` mapping a free module onto ``m``."""
    gens = min_generators(m)
    free = GradedFree([d for d, _ in gens])
    f = GradedMap(free.layout(), m.layout, [v for _, v in gens])
    return free, f


def is_free_on(m: TruncModule, gens) -> bool:
    """Certificate that ``gens`` form a free basis of ``m`` up to the cutoff."""
    R = m.R
    for D in sorted(m.slices):
        expected = sum(R.dim(D - d) for d, _ in gens)
        if expected != m.dim(D):
            return False
        rows = []
        for deg, vec in gens:
            rows.extend(monomial_multiples(R, m.layout, vec, deg, D))
        if rank_of(rows, layout_dim(R, m.layout, D)) != expected:
            return False
    return True


def grk(x) -> LaurentPoly:
    """Graded rank of a free module or of a truncated module carrying a free certificate."""
    if isinstance(x, GradedFree):
        return x.grk()
    if isinstance(x, TruncModule):
        if x.free_certificate is None:
            raise ValueError("no freeness certificate")
        return LaurentPoly.from_exponents([-d for d in x.free_certificate])
    raise TypeError(type(x))
