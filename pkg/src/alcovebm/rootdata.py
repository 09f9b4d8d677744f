"""Root data for small crystallographic types and the extended affine action.

Realization used throughout the package:

* ``X`` is the root lattice with basis the simple roots, so a weight is an
  integer vector of simple-root coordinates.
* ``X^vee`` is the coweight lattice with basis the fundamental coweights, so the
  pairing ``X x X^vee -> Z`` is the dot product.
* the simple coroot ``alpha_j^vee`` is column ``j`` of the Cartan matrix
  ``C[i][j] = <alpha_i, alpha_j^vee>``.

For ``A1`` this gives ``alpha = 1``, ``alpha^vee = 2``, ``rho^vee = 1`` and
``Omega = Z/2``.

The symmetric form on ``X^vee`` is normalized so that short coroots have
``(a, a) = 2``.  Extended weights/coweights are triples ``(finite, r, s)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

Vec = tuple

# Cartan matrices C[i][j] = <alpha_i, alpha_j^vee> (Bourbaki numbering).
_CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -2), (-1, 2)),
    "G2": ((2, -1), (-3, 2)),
}


class RootDatumError(ValueError):
    """Raised for unsupported types or mismatched root data."""


def _mat_inv(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _matvec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def _matmul(a, b):
    n, k, p = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(p))
                 for i in range(n))


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


class FiniteWeyl:
    """The finite Weyl group ``W_f`` as integer matrices acting on ``X^vee``.

    Elements are integers indexing :attr:`elements`; ``0`` is the identity and
    ``1..r`` are the simple reflections ``s_1..s_r`` (stored at indices given
    by :attr:`simple`).
    """

    def __init__(self, cartan):
        r = len(cartan)
        self.rank = r
        ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        gens = []
        for i in range(r):
            # s_i(nu) = nu - nu_i * alpha_i^vee, alpha_i^vee = column i of C.
            m = [[int(a == b) for b in range(r)] for a in range(r)]
            for a in range(r):
                m[a][i] -= cartan[a][i]
            gens.append(tuple(tuple(row) for row in m))
        elements = [ident]
        index = {ident: 0}
        words = [()]
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for i, g in enumerate(gens):
                    m = _matmul(elements[e], g)
                    if m not in index:
                        index[m] = len(elements)
                        elements.append(m)
                        words.append(words[e] + (i,))
                        nxt.append(index[m])
            frontier = nxt
        self.elements = elements
        self.index = index
        self.words = words  # reduced words, BFS gives minimal length
        self.simple = [index[g] for g in gens]
        n = len(elements)
        self.order = n
        self.mul_table = [[index[_matmul(elements[a], elements[b])] for b in range(n)]
                          for a in range(n)]
        self.inv_table = [self.mul_table[a].index(0) for a in range(n)]
        # contragredient action on X: (M^{-1})^T so that <w beta, w nu> = <beta, nu>.
        self.on_X = []
        for a in range(n):
            inv = elements[self.inv_table[a]]
            self.on_X.append(tuple(tuple(inv[j][i] for j in range(r)) for i in range(r)))

    def length(self, w: int) -> int:
        return len(self.words[w])

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def act_coweight(self, w: int, nu):
        return _matvec(self.elements[w], nu)

    def act_weight(self, w: int, beta):
        return _matvec(self.on_X[w], beta)

    @property
    def longest(self) -> int:
        return max(range(self.order), key=self.length)


@dataclass(frozen=True, eq=False)
class RootDatum:
    """A root datum of one of the supported types (``A1 A2 B2 G2`` and products of ``A1``).

    Construct with :func:`get_datum`, which caches instances so that identity
    comparison of data is meaningful.
    """

    label: str
    cartan: tuple
    components: tuple  # tuple of tuples of simple indices
    weyl: FiniteWeyl = field(repr=False)
    positive_roots: tuple = field(repr=False)
    positive_coroots: tuple = field(repr=False)
    sym: tuple = field(repr=False)       # e_i = (alpha_i^vee, alpha_i^vee)/2
    form: tuple = field(repr=False)      # Gram matrix on X^vee (coweight basis)
    highest_roots: tuple = field(repr=False)  # one per component

    # -- basic data ---------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def simple_roots(self):
        r = self.rank
        return [tuple(int(i == j) for j in range(r)) for i in range(r)]

    @property
    def simple_coroots(self):
        r = self.rank
        return [tuple(self.cartan[i][j] for i in range(r)) for j in range(r)]

    @property
    def rho(self):
        r = self.rank
        return tuple(sum(Fraction(b[i]) for b in self.positive_roots) / 2 for i in range(r))

    @property
    def rho_check(self):
        r = self.rank
        s = [sum(c[i] for c in self.positive_coroots) for i in range(r)]
        if any(x % 2 for x in s):
            raise RootDatumError("half sum of positive coroots is not integral")
        return tuple(x // 2 for x in s)

    @property
    def two_rho_check(self):
        """Sum of positive coroots; an element of the coroot lattice."""
        r = self.rank
        return tuple(sum(c[i] for c in self.positive_coroots) for i in range(r))

    def pairing(self, beta, nu):
        """``<beta, nu>`` for ``beta`` in ``X`` and ``nu`` in ``X^vee``."""
        return _dot(beta, nu)

    def coroot_of(self, beta):
        """The coroot of a (positive or negative) root."""
        beta = tuple(beta)
        for a, c in zip(self.positive_roots, self.positive_coroots):
            if a == beta:
                return c
            if tuple(-x for x in a) == beta:
                return tuple(-x for x in c)
        raise RootDatumError(f"{beta} is not a root of {self.label}")

    @property
    def roots(self):
        neg = tuple(tuple(-x for x in a) for a in self.positive_roots)
        return self.positive_roots + neg

    def form_value(self, lam, mu):
        """``(lam, mu)`` for coweights (rational)."""
        r = self.rank
        return sum(Fraction(lam[i]) * self.form[i][j] * mu[j]
                   for i in range(r) for j in range(r))

    def form_dual(self, lam):
        """``lam'`` in ``X (x) Q`` with ``<lam', .> = (lam, .)``."""
        r = self.rank
        return tuple(sum(self.form[i][j] * lam[j] for j in range(r)) for i in range(r))

    def coroot_coords(self, nu):
        """Coordinates of a coweight in the simple coroot basis (rational)."""
        return _matvec(self._cartan_inv, nu)

    @property
    def _cartan_inv(self):
        return _cartan_inverse(self.label)

    def in_coroot_lattice(self, nu) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.coroot_coords(nu))

    def omega_classes(self):
        """Representatives of ``X^vee / Z Phi^vee`` (canonical, sorted)."""
        return _omega_reps(self.label)

    def omega_class(self, nu):
        """Canonical representative of ``nu`` modulo the coroot lattice."""
        for rep in self.omega_classes():
            diff = tuple(a - b for a, b in zip(nu, rep))
            if self.in_coroot_lattice(diff):
                return rep
        raise AssertionError("class not found")

    def is_dominant_coweight(self, nu) -> bool:
        return all(x >= 0 for x in nu)

    def is_regular_coweight(self, nu) -> bool:
        return all(_dot(b, nu) != 0 for b in self.positive_roots)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "cartan": [list(r) for r in self.cartan],
            "form": [[str(x) for x in row] for row in self.form],
            "form_normalization": "(a,a)=2 for short coroots",
        }

    def __repr__(self):
        return f"RootDatum({self.label})"


def _component_cartans(label: str):
    parts = label.split("x")
    comps = []
    for p in parts:
        if p not in _CARTAN:
            raise RootDatumError(f"unsupported type {label!r}")
        comps.append(_CARTAN[p])
    if len(comps) > 1 and any(p != "A1" for p in parts):
        raise RootDatumError("only products of A1 factors are supported")
    return comps


@lru_cache(maxsize=None)
def get_datum(label: str) -> RootDatum:
    """Return the (cached) root datum of type ``label``.

    Accepted labels: ``A1``, ``A2``, ``B2``, ``G2`` and ``A1xA1``,
    ``A1xA1xA1`` and so on.
    """
    comps = _component_cartans(label)
    r = sum(len(c) for c in comps)
    cartan = [[0] * r for _ in range(r)]
    components = []
    off = 0
    for c in comps:
        k = len(c)
        for i in range(k):
            for j in range(k):
                cartan[off + i][off + j] = c[i][j]
        components.append(tuple(range(off, off + k)))
        off += k
    cartan = tuple(tuple(row) for row in cartan)
    weyl = FiniteWeyl(cartan)

    # roots with coroots, by closure under simple reflections
    simple = [(tuple(int(i == k) for i in range(r)), tuple(cartan[i][k] for i in range(r)))
              for k in range(r)]
    seen = {}
    for w in range(weyl.order):
        for beta, cb in simple:
            b = weyl.act_weight(w, beta)
            seen[b] = weyl.act_coweight(w, cb)
    pos = sorted((b for b in seen if all(x >= 0 for x in b)), key=lambda b: (sum(b), b))
    positive_roots = tuple(pos)
    positive_coroots = tuple(seen[b] for b in pos)

    # symmetrizing integers per component, minimum 1 (short coroots)
    sym = [None] * r
    for comp in components:
        sym[comp[0]] = Fraction(1)
        changed = True
        while changed:
            changed = False
            for i in comp:
                for j in comp:
                    if sym[i] is not None and sym[j] is None and cartan[i][j] != 0:
                        sym[j] = sym[i] * cartan[i][j] / cartan[j][i]
                        changed = True
        m = min(sym[i] for i in comp)
        for i in comp:
            sym[i] = sym[i] / m
    for i in range(r):
        for j in range(r):
            if cartan[i][j] * sym[i] != cartan[j][i] * sym[j]:
                raise RootDatumError("Cartan matrix is not symmetrizable")
    gram_coroot = [[cartan[i][j] * sym[i] for j in range(r)] for i in range(r)]
    cinv = _mat_inv(cartan)
    cinv_t = [[cinv[j][i] for j in range(r)] for i in range(r)]
    form = _matmul(_matmul(cinv_t, gram_coroot), cinv)

    highest = []
    for comp in components:
        cands = [b for b in positive_roots if all(b[i] == 0 for i in range(r) if i not in comp)]
        highest.append(max(cands, key=lambda b: (sum(b), b)))

    return RootDatum(
        label=label,
        cartan=cartan,
        components=tuple(components),
        weyl=weyl,
        positive_roots=positive_roots,
        positive_coroots=positive_coroots,
        sym=tuple(sym),
        form=tuple(tuple(Fraction(x) for x in row) for row in form),
        highest_roots=tuple(highest),
    )


@lru_cache(maxsize=None)
def _cartan_inverse(label: str):
    d = get_datum(label)
    return tuple(tuple(row) for row in _mat_inv(d.cartan))


@lru_cache(maxsize=None)
def _omega_reps(label: str):
    d = get_datum(label)
    r = d.rank
    # X^vee / Z Phi^vee is a quotient of prod Z/det; search a small box.
    reps = []
    for nu in sorted(itertools.product(range(0, 4), repeat=r), key=lambda v: (sum(v), v)):
        if not any(d.in_coroot_lattice(tuple(a - b for a, b in zip(nu, rep))) for rep in reps):
            reps.append(nu)
    return tuple(reps)


# ---------------------------------------------------------------------------
# Elements of W'_ext = W_f x| X^vee
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WPrime:
    """Element ``t_lam w`` of ``W'^ext_aff = W_f x| X^vee`` acting by ``v -> w v + lam``.

    ``w`` is an index into the finite Weyl group, ``lam`` an integer coweight.
    Multiplication: ``(w1, l1)(w2, l2) = (w1 w2, l1 + w1 l2)``.
    """

    w: int
    lam: tuple


def wp_mul(d: RootDatum, g: WPrime, h: WPrime) -> WPrime:
    wl = d.weyl.act_coweight(g.w, h.lam)
    return WPrime(d.weyl.mul(g.w, h.w), tuple(a + b for a, b in zip(g.lam, wl)))


def wp_inv(d: RootDatum, g: WPrime) -> WPrime:
    wi = d.weyl.inv(g.w)
    lam = d.weyl.act_coweight(wi, g.lam)
    return WPrime(wi, tuple(-x for x in lam))


def wp_identity(d: RootDatum) -> WPrime:
    return WPrime(0, (0,) * d.rank)


def wp_translation(d: RootDatum, lam) -> WPrime:
    return WPrime(0, tuple(lam))


def wp_finite(d: RootDatum, w: int) -> WPrime:
    return WPrime(w, (0,) * d.rank)


def wp_apply(d: RootDatum, g: WPrime, v):
    """Affine action on a point of ``X^vee (x) Q``."""
    wv = d.weyl.act_coweight(g.w, v)
    return tuple(a + b for a, b in zip(wv, g.lam))


def wp_reflection(d: RootDatum, alpha, n: int) -> WPrime:
    """``s_(alpha, n) = t_{-n alpha^vee} s_alpha``: reflection in ``<alpha, v> = -n``."""
    ac = d.coroot_of(alpha)
    w = _finite_reflection_index(d, tuple(alpha))
    return WPrime(w, tuple(-n * x for x in ac))


def _finite_reflection_index(d: RootDatum, alpha) -> int:
    ac = d.coroot_of(alpha)
    r = d.rank
    m = [[int(i == j) for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(r):
            m[i][j] -= ac[i] * alpha[j]
    return d.weyl.index[tuple(tuple(row) for row in m)]


def wp_act_affine_root(d: RootDatum, g: WPrime, alpha, n: int):
    """Image of the affine root ``(alpha, n)`` (an affine function on ``X^vee``)."""
    wa = d.weyl.act_weight(g.w, alpha)
    return wa, n - _dot(wa, g.lam)


# ---------------------------------------------------------------------------
# Extended weights and coweights
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineWeight:
    """Element ``(nu, r, s)`` of ``X_aff = (X (x) Q) + Q + Q``."""

    datum: str
    finite_part: tuple
    delta_coord: Fraction
    grading_coord: Fraction

    def as_tuple(self):
        return tuple(self.finite_part) + (self.delta_coord, self.grading_coord)


@dataclass(frozen=True)
class AffineCoweight:
    """Element ``(mu, r, s)`` of ``X^vee_aff = (X^vee (x) Q) + Q + Q``."""

    datum: str
    finite_part: tuple
    delta_coord: Fraction
    grading_coord: Fraction

    def as_tuple(self):
        return tuple(self.finite_part) + (self.delta_coord, self.grading_coord)


def affine_weight(d: RootDatum, nu, r=0, s=0) -> AffineWeight:
    return AffineWeight(d.label, tuple(Fraction(x) for x in nu), Fraction(r), Fraction(s))


def affine_coweight(d: RootDatum, mu, r=0, s=0) -> AffineCoweight:
    return AffineCoweight(d.label, tuple(Fraction(x) for x in mu), Fraction(r), Fraction(s))


@dataclass(frozen=True)
class AffineRoot:
    """The affine root ``(alpha, n)``, embedded as ``(alpha, n, 0)``."""

    datum: str
    root: tuple
    level: int

    def weight(self) -> AffineWeight:
        return AffineWeight(self.datum, tuple(Fraction(x) for x in self.root),
                            Fraction(self.level), Fraction(0))

    def coroot(self) -> AffineCoweight:
        return affine_coroot(get_datum(self.datum), self)


def pairing(w: AffineWeight, c: AffineCoweight) -> Fraction:
    """Extended pairing ``<(nu,r,s),(mu,r',s')> = <nu,mu> + r r' + s s'``."""
    if w.datum != c.datum:
        raise RootDatumError("mismatched root data")
    return (_dot(w.finite_part, c.finite_part) + w.delta_coord * c.delta_coord
            + w.grading_coord * c.grading_coord)


def affine_coroot(d: RootDatum, ar: AffineRoot) -> AffineCoweight:
    """``(alpha^vee, 0, n (alpha^vee, alpha^vee)/2)``."""
    if ar.datum != d.label:
        raise RootDatumError("mismatched root data")
    ac = d.coroot_of(ar.root)
    c = d.form_value(ac, ac) / 2
    return AffineCoweight(d.label, tuple(Fraction(x) for x in ac), Fraction(0), ar.level * c)


def act_ext(d: RootDatum, g: WPrime, x):
    """Action of ``g = t_mu w = w t_lam`` (``lam = w^-1 mu``) on extended (co)weights.

    Weights: ``(w t_lam)(nu, r, s) = (w(nu + s lam'), r - <nu, lam> - s (lam,lam)/2, s)``.
    Coweights: ``(w t_lam)(mu, r, s) = (w(mu + r lam), r, s - (mu, lam) - r (lam,lam)/2)``.
    """
    if x.datum != d.label:
        raise RootDatumError("mismatched root data")
    lam = d.weyl.act_coweight(d.weyl.inv(g.w), g.lam)
    ll = d.form_value(lam, lam) / 2
    if isinstance(x, AffineWeight):
        nu, r, s = x.finite_part, x.delta_coord, x.grading_coord
        lp = d.form_dual(lam)
        inner = tuple(a + s * b for a, b in zip(nu, lp))
        return AffineWeight(d.label, d.weyl.act_weight(g.w, inner),
                            r - _dot(nu, lam) - ll * s, s)
    if isinstance(x, AffineCoweight):
        mu, r, s = x.finite_part, x.delta_coord, x.grading_coord
        inner = tuple(a + r * b for a, b in zip(mu, lam))
        return AffineCoweight(d.label, d.weyl.act_coweight(g.w, inner), r,
                              s - d.form_value(mu, lam) - r * ll)
    raise TypeError("act_ext expects an AffineWeight or AffineCoweight")


def coweight_action_matrix(d: RootDatum, g: WPrime):
    """Matrix ``M`` (rows = output coordinates) of ``act_ext(g, .)`` on ``X^vee_aff``.

    Column ``j`` is the image of the ``j``-th basis vector; entries are Fractions.
    """
    n = d.rank + 2
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        img = act_ext(d, g, affine_coweight(d, e[:d.rank], e[d.rank], e[d.rank + 1]))
        cols.append(img.as_tuple())
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
