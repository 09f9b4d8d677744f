"""Coxeter combinatorics, Hecke algebra, Kazhdan-Lusztig bases and the periodic module.

Elements of ``W^ext_aff`` are :class:`~alcovebm.rootdata.WPrime` pairs, through
the identification ``A_0^+ x = x' A_0^+``.  Elements of ``W_aff`` are the pairs
whose translation part lies in the coroot lattice; their canonical form is
the alcove ``A_0^+ x``.

Hecke algebra conventions (normalization with ``H_s^2 = 1 + (v^-1 - v) H_s``):

* ``H_s^-1 = H_s + v - v^-1`` and ``H_x H_y = H_xy`` when lengths add;
* the KL element ``H_x`` (underlined) is self-dual with ``h_{y,x}`` in ``vZ[v]`` for ``y < x``;
* ``triv(H_s) = v^-1`` and ``sgn(H_s) = -v`` define the spherical and antispherical
  modules, with self-dual bases ``M_x`` and ``N_x`` (underlined), ``x`` in ``0W^ext``.

The periodic module has basis the alcoves with ``A H_s = As`` if ``As < A`` and
``As + (v^-1 - v) A`` otherwise.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from . import alcoves as al
from .laurent import ONE, V, VINV, ZERO, LaurentPoly
from .rootdata import RootDatum, WPrime, get_datum, wp_identity, wp_inv, wp_mul

DEFAULT_BUDGET = 10


class BudgetError(RuntimeError):
    """A length or size budget was exceeded."""


# ---------------------------------------------------------------------------
# Coxeter combinatorics on W^ext
# ---------------------------------------------------------------------------

class Coxeter:
    """Memoized Coxeter data for ``(W_aff, S_aff)`` and its extension by ``Omega``."""

    def __init__(self, d: RootDatum):
        self.d = d
        self.nsimple = al.num_simple(d)
        self.sig = [al.sigma(d, s) for s in range(self.nsimple)]
        self._len = {}
        self._leq = {}
        self._ideal = {}
        self._word = {}
        self.e = wp_identity(d)

    # basic operations
    def mul(self, x: WPrime, y: WPrime) -> WPrime:
        return wp_mul(self.d, x, y)

    def inv(self, x: WPrime) -> WPrime:
        return wp_inv(self.d, x)

    def rmul(self, x: WPrime, s: int) -> WPrime:
        return wp_mul(self.d, x, self.sig[s])

    def lmul(self, s: int, x: WPrime) -> WPrime:
        return wp_mul(self.d, self.sig[s], x)

    def length(self, x: WPrime) -> int:
        v = self._len.get(x)
        if v is None:
            v = al.length_ext(self.d, x)
            self._len[x] = v
        return v

    def is_waff(self, x: WPrime) -> bool:
        return self.d.in_coroot_lattice(x.lam)

    def omega_part(self, x: WPrime) -> WPrime:
        return al.omega_of(self.d, x.lam)

    def waff_part(self, x: WPrime) -> WPrime:
        """``w`` with ``x = w omega``."""
        return self.mul(x, self.inv(self.omega_part(x)))

    def right_descents(self, x: WPrime):
        lx = self.length(x)
        return [s for s in range(self.nsimple) if self.length(self.rmul(x, s)) < lx]

    def left_descents(self, x: WPrime):
        lx = self.length(x)
        return [s for s in range(self.nsimple) if self.length(self.lmul(s, x)) < lx]

    def reduced_word(self, x: WPrime):
        """Reduced word of the ``W_aff`` part: ``x = s_1 ... s_k omega``."""
        if x in self._word:
            return self._word[x]
        w = self.waff_part(x)
        word = []
        cur = w
        while self.length(cur) > 0:
            s = self.right_descents(cur)[0]
            word.append(s)
            cur = self.rmul(cur, s)
        if cur != self.e:
            raise AssertionError("descent peeling did not reach the identity")
        word = tuple(reversed(word))
        self._word[x] = word
        return word

    def from_word(self, word, omega: WPrime | None = None) -> WPrime:
        x = self.e
        for s in word:
            x = self.rmul(x, s)
        if omega is not None:
            x = self.mul(x, omega)
        return x

    def leq(self, x: WPrime, y: WPrime) -> bool:
        """Bruhat order on ``W^ext``: ``w1 om1 <= w2 om2`` iff ``om1 = om2`` and ``w1 <= w2``."""
        key = (x, y)
        r = self._leq.get(key)
        if r is not None:
            return r
        if self.d.omega_class(x.lam) != self.d.omega_class(y.lam):
            r = False
        else:
            lx, ly = self.length(x), self.length(y)
            if lx > ly:
                r = False
            elif lx == ly:
                r = x == y
            else:
                s = self.right_descents(y)[0]
                ys = self.rmul(y, s)
                xs = self.rmul(x, s)
                r = self.leq(xs if self.length(xs) < lx else x, ys)
        self._leq[key] = r
        return r

    def lower_interval(self, y: WPrime) -> frozenset:
        """``{x : x <= y}``."""
        r = self._ideal.get(y)
        if r is not None:
            return r
        if self.length(y) == 0:
            r = frozenset([y])
        else:
            s = self.right_descents(y)[0]
            lower = self.lower_interval(self.rmul(y, s))
            r = frozenset(lower | {self.rmul(u, s) for u in lower})
        self._ideal[y] = r
        return r

    def sort_key(self, x: WPrime):
        return (self.length(x), al.k_vector(al.alcove_from_coord(self.d, x)), x.lam, x.w)

    # parabolic: W_aff,0 \ W_aff
    def is_min_coset(self, x: WPrime) -> bool:
        """``x`` in ``0W^ext`` (``A_0^+ x`` dominant)."""
        return al.is_dominant(al.alcove_from_coord(self.d, x))

    def min_coset_rep(self, x: WPrime) -> WPrime:
        """Minimal element of ``W_aff,0 x``."""
        best = None
        for w in range(self.d.weyl.order):
            y = self.mul(WPrime(w, (0,) * self.d.rank), x)
            if best is None or self.length(y) < self.length(best):
                best = y
        return best

    def finite_part_elements(self):
        """``W_aff,0`` as ``W'`` elements (the finite Weyl group)."""
        return [WPrime(w, (0,) * self.d.rank) for w in range(self.d.weyl.order)]

    def reflections_below(self, y: WPrime):
        """Pairs ``(x, t)`` with ``x <= y``, ``t`` a reflection, ``xt <= y``, ``xt != x``."""
        out = []
        ideal = self.lower_interval(y)
        for x in ideal:
            for z in ideal:
                if z == x:
                    continue
                t = self.mul(self.inv(x), z)
                if self.is_reflection(t):
                    out.append((x, z, t))
        return out

    def is_reflection(self, t: WPrime) -> bool:
        """``t`` is conjugate to a simple reflection: an affine reflection in ``W'``."""
        # affine reflections are involutions whose linear part is a reflection
        if self.mul(t, t) != self.e:
            return False
        m = self.d.weyl.elements[t.w]
        r = self.d.rank
        # trace of a reflection is r - 2
        return sum(m[i][i] for i in range(r)) == r - 2


@lru_cache(maxsize=None)
def coxeter(label: str) -> Coxeter:
    return Coxeter(get_datum(label))


# ---------------------------------------------------------------------------
# Hecke algebra
# ---------------------------------------------------------------------------

class HeckeElt:
    """Finite sum ``sum c_x H_x`` over ``x`` in ``W^ext``."""

    __slots__ = ("d", "c")

    def __init__(self, d: RootDatum, coeffs=None):
        self.d = d
        self.c = {}
        if coeffs:
            for x, a in coeffs.items():
                if a:
                    self.c[x] = a

    @classmethod
    def basis(cls, d: RootDatum, x: WPrime, a: LaurentPoly = ONE):
        return cls(d, {x: a})

    @classmethod
    def one(cls, d: RootDatum):
        return cls(d, {wp_identity(d): ONE})

    def __add__(self, other):
        c = dict(self.c)
        for x, a in other.c.items():
            c[x] = c.get(x, ZERO) + a
        return HeckeElt(self.d, c)

    def __sub__(self, other):
        return self + other.scale(LaurentPoly.const(-1))

    def scale(self, a: LaurentPoly):
        return HeckeElt(self.d, {x: b * a for x, b in self.c.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElt):
            return hecke_mul(self, other)
        return self.scale(other if isinstance(other, LaurentPoly) else LaurentPoly.const(other))

    def __eq__(self, other):
        return isinstance(other, HeckeElt) and self.c == other.c

    def coeff(self, x: WPrime) -> LaurentPoly:
        return self.c.get(x, ZERO)

    def __repr__(self):
        cx = coxeter(self.d.label)
        items = sorted(self.c.items(), key=lambda kv: cx.sort_key(kv[0]))
        return " + ".join(f"({a})H[{format_elt(self.d, x)}]" for x, a in items) or "0"


def format_elt(d: RootDatum, x: WPrime) -> str:
    cx = coxeter(d.label)
    word = cx.reduced_word(x)
    om = cx.omega_part(x)
    s = "".join(f"s{i}" for i in word) or "e"
    if om != cx.e:
        s += f".om{list(om.lam)}"
    return s


def _rmul_simple(h: HeckeElt, s: int) -> HeckeElt:
    cx = coxeter(h.d.label)
    c: dict = {}
    q = VINV - V
    for x, a in h.c.items():
        xs = cx.rmul(x, s)
        if cx.length(xs) > cx.length(x):
            c[xs] = c.get(xs, ZERO) + a
        else:
            c[xs] = c.get(xs, ZERO) + a
            c[x] = c.get(x, ZERO) + a * q
    return HeckeElt(h.d, c)


def _rmul_simple_inv(h: HeckeElt, s: int) -> HeckeElt:
    # H_s^-1 = H_s + (v - v^-1)
    return _rmul_simple(h, s) + h.scale(V - VINV)


def _rmul_omega(h: HeckeElt, om: WPrime) -> HeckeElt:
    cx = coxeter(h.d.label)
    return HeckeElt(h.d, {cx.mul(x, om): a for x, a in h.c.items()})


def rmul_std(h: HeckeElt, y: WPrime) -> HeckeElt:
    """``h H_y``."""
    cx = coxeter(h.d.label)
    for s in cx.reduced_word(y):
        h = _rmul_simple(h, s)
    om = cx.omega_part(y)
    if om != cx.e:
        h = _rmul_omega(h, om)
    return h


def hecke_mul(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    out = HeckeElt(a.d)
    for y, c in b.c.items():
        out = out + rmul_std(a, y).scale(c)
    return out


def hecke_inv_std(d: RootDatum, x: WPrime) -> HeckeElt:
    """``H_x^-1``: for ``x = s_1 ... s_k omega`` this is ``H_omega^-1 H_{s_k}^-1 ... H_{s_1}^-1``."""
    cx = coxeter(d.label)
    h = HeckeElt.basis(d, cx.inv(cx.omega_part(x)))
    for s in reversed(cx.reduced_word(x)):
        h = _rmul_simple_inv(h, s)
    return h


def bar(h: HeckeElt) -> HeckeElt:
    """Bar involution: ``v -> v^-1`` and ``H_x -> H_{x^-1}^-1``."""
    cx = coxeter(h.d.label)
    out = HeckeElt(h.d)
    for x, a in h.c.items():
        out = out + hecke_inv_std(h.d, cx.inv(x)).scale(a.bar())
    return out


# ---------------------------------------------------------------------------
# self-dual bases
# ---------------------------------------------------------------------------

def _strip(c: LaurentPoly) -> LaurentPoly:
    """Bar-invariant ``p`` with ``c - p`` in ``vZ[v]`` (``c`` assumed bar-symmetric on the nonpositive side)."""
    terms = {}
    for e, a in c.items():
        if e < 0:
            terms[e] = terms.get(e, 0) + a
            terms[-e] = terms.get(-e, 0) + a
        elif e == 0:
            terms[0] = terms.get(0, 0) + a
    return LaurentPoly(terms)


def _canonicalize(p: dict, top, key, basis_of):
    """Make a self-dual element ``p`` (dict) unitriangular: subtract bar-invariant multiples
    of ``basis_of(y)`` for every ``y != top`` with a coefficient outside ``vZ[v]``."""
    while True:
        bad = [y for y, c in p.items() if y != top and c and c.min_exp() <= 0]
        if not bad:
            return p
        y = max(bad, key=key)
        corr = _strip(p[y])
        for z, c in basis_of(y).items():
            p[z] = p.get(z, ZERO) - corr * c
            if not p[z]:
                del p[z]


class KLCache:
    def __init__(self, d: RootDatum):
        self.d = d
        self.h = {}      # x -> {y: h_{y,x}}, x in W_aff
        self.m = {}      # (flavor, x) -> {y: m_{y,x}}


@lru_cache(maxsize=None)
def _klcache(label: str) -> KLCache:
    return KLCache(get_datum(label))


def kl_basis(d: RootDatum, x: WPrime, budget: int = DEFAULT_BUDGET) -> dict:
    """``{y: h_{y,x}}`` for the KL element ``H_x`` (underlined)."""
    cx = coxeter(d.label)
    if cx.length(x) > budget:
        raise BudgetError(f"length {cx.length(x)} exceeds budget {budget}")
    om = cx.omega_part(x)
    if om != cx.e:
        base = kl_basis(d, cx.mul(x, cx.inv(om)), budget)
        return {cx.mul(y, om): c for y, c in base.items()}
    cache = _klcache(d.label).h
    if x in cache:
        return cache[x]
    if cx.length(x) == 0:
        res = {x: ONE}
    else:
        s = cx.right_descents(x)[0]
        xs = cx.rmul(x, s)
        prev = kl_basis(d, xs, budget)
        # H_xs (H_s + v): H_y H_s + v H_y
        p: dict = {}
        for y, c in prev.items():
            ys = cx.rmul(y, s)
            if cx.length(ys) > cx.length(y):
                p[ys] = p.get(ys, ZERO) + c
                p[y] = p.get(y, ZERO) + c * V
            else:
                p[ys] = p.get(ys, ZERO) + c
                p[y] = p.get(y, ZERO) + c * VINV
        p = {y: c for y, c in p.items() if c}
        res = _canonicalize(p, x, cx.sort_key, lambda y: kl_basis(d, y, budget))
    cache[x] = res
    return res


def kl_h(d: RootDatum, y: WPrime, x: WPrime, budget: int = DEFAULT_BUDGET) -> LaurentPoly:
    return kl_basis(d, x, budget).get(y, ZERO)


def kl_element(d: RootDatum, x: WPrime, budget: int = DEFAULT_BUDGET) -> HeckeElt:
    return HeckeElt(d, kl_basis(d, x, budget))


# parabolic modules ------------------------------------------------------------

FLAVORS = ("triv", "sgn")


def _flavor_scalar(flavor: str) -> LaurentPoly:
    if flavor == "triv":
        return VINV
    if flavor == "sgn":
        return LaurentPoly.monomial(1, -1)
    raise ValueError(f"unknown flavor {flavor!r}")


def parabolic_rmul_simple(d: RootDatum, elt: dict, s: int, flavor: str) -> dict:
    """Right action of ``H_s`` on ``triv (x) H`` or ``sgn (x) H`` (basis ``0W^ext``)."""
    cx = coxeter(d.label)
    out: dict = {}
    sc = _flavor_scalar(flavor)
    q = VINV - V
    for x, a in elt.items():
        xs = cx.rmul(x, s)
        if not cx.is_min_coset(xs):
            out[x] = out.get(x, ZERO) + a * sc
        elif cx.length(xs) > cx.length(x):
            out[xs] = out.get(xs, ZERO) + a
        else:
            out[xs] = out.get(xs, ZERO) + a
            out[x] = out.get(x, ZERO) + a * q
    return {x: a for x, a in out.items() if a}


def parabolic_basis(d: RootDatum, x: WPrime, flavor: str, budget: int = DEFAULT_BUDGET) -> dict:
    """``{y: m_{y,x}}`` (``triv``) or ``{y: n_{y,x}}`` (``sgn``)."""
    cx = coxeter(d.label)
    if not cx.is_min_coset(x):
        raise ValueError("parabolic KL elements are indexed by minimal coset representatives")
    if cx.length(x) > budget:
        raise BudgetError(f"length {cx.length(x)} exceeds budget {budget}")
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    om = cx.omega_part(x)
    if om != cx.e:
        base = parabolic_basis(d, cx.mul(x, cx.inv(om)), flavor, budget)
        return {cx.mul(y, om): c for y, c in base.items()}
    cache = _klcache(d.label).m
    key = (flavor, x)
    if key in cache:
        return cache[key]
    if cx.length(x) == 0:
        res = {x: ONE}
    else:
        s = next(t for t in cx.right_descents(x) if cx.is_min_coset(cx.rmul(x, t)))
        prev = parabolic_basis(d, cx.rmul(x, s), flavor, budget)
        p = parabolic_rmul_simple(d, prev, s, flavor)
        for y, c in prev.items():
            p[y] = p.get(y, ZERO) + c * V
        p = {y: c for y, c in p.items() if c}
        res = _canonicalize(p, x, cx.sort_key,
                            lambda y: parabolic_basis(d, y, flavor, budget))
    cache[key] = res
    return res


def parabolic_mn(d: RootDatum, y: WPrime, x: WPrime, flavor: str,
                 budget: int = DEFAULT_BUDGET) -> LaurentPoly:
    cx = coxeter(d.label)
    if not (cx.is_min_coset(y) and cx.is_min_coset(x)):
        raise ValueError("parabolic KL polynomials need minimal coset representatives")
    return parabolic_basis(d, x, flavor, budget).get(y, ZERO)


def n_from_h(d: RootDatum, y: WPrime, x: WPrime, budget: int = DEFAULT_BUDGET) -> LaurentPoly:
    """``sum_{z in W_aff,0} (-v)^{l(z)} h_{zy,x}``."""
    cx = coxeter(d.label)
    tot = ZERO
    for z in cx.finite_part_elements():
        tot = tot + LaurentPoly.monomial(cx.length(z), (-1) ** cx.length(z)) * kl_h(
            d, cx.mul(z, y), x, budget)
    return tot


# ---------------------------------------------------------------------------
# Bernstein elements
# ---------------------------------------------------------------------------

def antidominant_split(d: RootDatum, lam, extra: int = 0):
    """``lam = lam1 - lam2`` with both antidominant; ``extra`` varies the choice."""
    n = max([0] + [x for x in lam]) + extra
    lam2 = tuple(-n for _ in lam)
    lam1 = tuple(a + b for a, b in zip(lam, lam2))
    return lam1, lam2


def theta(d: RootDatum, lam, extra: int = 0) -> HeckeElt:
    """Bernstein element ``theta_lam = H_{t0_lam1} H_{t0_lam2}^-1``."""
    lam1, lam2 = antidominant_split(d, tuple(lam), extra)
    h1 = HeckeElt.basis(d, WPrime(0, lam1))
    return hecke_mul(h1, hecke_inv_std(d, WPrime(0, lam2)))


# ---------------------------------------------------------------------------
# periodic module
# ---------------------------------------------------------------------------

class PeriodicElt:
    """Finite sum ``sum c_A A`` over alcoves."""

    __slots__ = ("d", "c")

    def __init__(self, d: RootDatum, coeffs=None):
        self.d = d
        self.c = {A: a for A, a in (coeffs or {}).items() if a}

    @classmethod
    def alcove(cls, A: al.Alcove, a: LaurentPoly = ONE):
        return cls(A.d, {A: a})

    def __add__(self, other):
        c = dict(self.c)
        for A, a in other.c.items():
            c[A] = c.get(A, ZERO) + a
        return PeriodicElt(self.d, c)

    def __sub__(self, other):
        return self + other.scale(LaurentPoly.const(-1))

    def scale(self, a: LaurentPoly):
        return PeriodicElt(self.d, {A: b * a for A, b in self.c.items()})

    def __eq__(self, other):
        return isinstance(other, PeriodicElt) and self.c == other.c

    def coeff(self, A) -> LaurentPoly:
        return self.c.get(A, ZERO)

    def __repr__(self):
        items = sorted(self.c.items(), key=lambda kv: al.sort_key(kv[0]))
        return " + ".join(f"({a}){al.format_alcove(A)}" for A, a in items) or "0"


def periodic_act_simple(p: PeriodicElt, s: int) -> PeriodicElt:
    c: dict = {}
    q = VINV - V
    for A, a in p.c.items():
        As = al.right_act(A, s)
        c[As] = c.get(As, ZERO) + a
        if al.length(As) > al.length(A):
            c[A] = c.get(A, ZERO) + a * q
    return PeriodicElt(p.d, c)


def periodic_act_simple_inv(p: PeriodicElt, s: int) -> PeriodicElt:
    return periodic_act_simple(p, s) + p.scale(V - VINV)


def periodic_act(p: PeriodicElt, h: HeckeElt) -> PeriodicElt:
    """``p h`` for ``h`` in the (non-extended) Hecke algebra of ``W_aff``."""
    cx = coxeter(p.d.label)
    out = PeriodicElt(p.d)
    for x, a in h.c.items():
        if not cx.is_waff(x):
            raise ValueError("periodic action is defined for the non-extended Hecke algebra")
        q = p
        for s in cx.reduced_word(x):
            q = periodic_act_simple(q, s)
        out = out + q.scale(a)
    return out


# ---------------------------------------------------------------------------
# generic polynomials q_{A, A_lam^+}
# ---------------------------------------------------------------------------

def _nonneg_solutions(coroots_cc, target):
    """Nonnegative integer vectors ``n`` with ``sum n_i c_i = target`` (coroot coordinates)."""
    k = len(coroots_cc)

    def rec(i, rem):
        if i == k:
            if all(x == 0 for x in rem):
                yield ()
            return
        c = coroots_cc[i]
        # bound: each positive coordinate of c limits n_i
        bound = min(rem[j] // c[j] for j in range(len(c)) if c[j] > 0)
        for n in range(bound + 1):
            nxt = tuple(r - n * cj for r, cj in zip(rem, c))
            if any(x < 0 for x in nxt):
                break
            yield from ((n,) + rest for rest in rec(i + 1, nxt))

    if any(x < 0 for x in target):
        return
    yield from rec(0, target)


def generic_q(A: al.Alcove, lam) -> LaurentPoly:
    """Coefficient of ``A`` in ``eta sum_{z in W_aff,0} v^{l(z)} (A_0^+ z + lam)``."""
    d = A.d
    cc = [tuple(int(x) for x in d.coroot_coords(c)) for c in d.positive_coroots]
    total = ZERO
    for w in range(d.weyl.order):
        B = al.translate(al.Alcove(d, w, (0,) * d.rank), lam)
        if B.w != A.w:
            continue
        nu = tuple(b - a for a, b in zip(A.lam, B.lam))
        nucc = d.coroot_coords(nu)
        if any(Fraction(x).denominator != 1 for x in nucc):
            continue
        nucc = tuple(int(x) for x in nucc)
        lz = d.weyl.length(w)
        for sol in _nonneg_solutions(cc, nucc):
            total = total + LaurentPoly.monomial(lz + 2 * sum(sol))
    return total


# ---------------------------------------------------------------------------
# weight multiplicities and the Bernstein expansion
# ---------------------------------------------------------------------------

def weight_multiplicities(d: RootDatum, lam) -> dict:
    """Weights (in ``X^vee``) of the irreducible dual-group module of highest weight ``lam``.

    Freudenthal's formula with the coroots as roots and the invariant form on ``X^vee``.
    """
    lam = tuple(lam)
    if not d.is_dominant_coweight(lam):
        raise ValueError("highest weight must be dominant")
    if d.label not in ("A1", "A2"):
        raise NotImplementedError("weight multiplicities are provided for A1 and A2")
    rho = d.rho_check
    pos = d.positive_coroots
    simple = d.simple_coroots

    def ff(a, b):
        return d.form_value(a, b)

    lr = tuple(a + b for a, b in zip(lam, rho))
    # dominant weights below lam, processed by decreasing height
    dom = []
    bound = 4 * (sum(lam) + 2)
    for ns in itertools.product(range(bound + 1), repeat=d.rank):
        mu = tuple(lam[i] - sum(ns[j] * simple[j][i] for j in range(d.rank))
                   for i in range(d.rank))
        if d.is_dominant_coweight(mu):
            dom.append((sum(ns), mu))
    dom.sort()
    mult: dict = {}

    def m_of(mu):
        for w in range(d.weyl.order):
            nu = d.weyl.act_coweight(w, mu)
            if d.is_dominant_coweight(nu):
                return mult.get(nu, 0)
        return 0

    for _, mu in dom:
        if mu == lam:
            mult[mu] = 1
            continue
        num = Fraction(0)
        for a in pos:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                mn = m_of(nu)
                if mn == 0 and k > 2 * (sum(abs(x) for x in lam) + 2):
                    break
                num += mn * ff(nu, a)
                k += 1
        mr = tuple(a + b for a, b in zip(mu, rho))
        den = ff(lr, lr) - ff(mr, mr)
        val = 2 * num / den
        if val.denominator != 1:
            raise AssertionError("non-integral multiplicity")
        if val:
            mult[mu] = int(val)
    out = {}
    for mu, m in mult.items():
        for w in range(d.weyl.order):
            out[d.weyl.act_coweight(w, mu)] = m
    return out


def bernstein_expand(d: RootDatum, lam, budget: int = 16) -> dict:
    """Coefficients ``c_{mu,w}`` with ``H_{w0 t0_lam}`` (KL element) ``= sum c theta_mu H_w``.

    Computed through the periodic module: by the Kato identity ``A_0^+ theta_mu H_w`` is the
    single alcove ``A_0^+ t0_mu w``, so the coefficients are read off ``A_0^+ H``.
    ``lam`` must be dominant regular and lie in the coroot lattice.
    """
    lam = tuple(lam)
    if d.label not in ("A1", "A2"):
        raise NotImplementedError("Bernstein expansion is supported for A1 and A2")
    if not (d.is_dominant_coweight(lam) and d.is_regular_coweight(lam)):
        raise ValueError("lam must be dominant regular")
    if not d.in_coroot_lattice(lam):
        raise ValueError("lam must lie in the coroot lattice")
    cx = coxeter(d.label)
    w0 = WPrime(d.weyl.longest, (0,) * d.rank)
    x = cx.mul(w0, WPrime(0, lam))
    h = kl_element(d, x, budget)
    p = periodic_act(PeriodicElt.alcove(al.base_alcove(d)), h)
    out = {}
    for A, c in p.c.items():
        # A = A_0^+ t0_mu w  means  A = mu + w A_0^+
        mu = tuple(A.lam)
        out[(mu, A.w)] = c
    return out


def bernstein_formula(d: RootDatum, lam) -> dict:
    """The predicted coefficients ``(dim V_mu) v^{l(w0) - l(w)}``."""
    mult = weight_multiplicities(d, lam)
    l0 = d.weyl.length(d.weyl.longest)
    out = {}
    for mu, m in mult.items():
        for w in range(d.weyl.order):
            out[(mu, w)] = LaurentPoly.monomial(l0 - d.weyl.length(w), m)
    return out


def kato_sides(d: RootDatum, lam, w: int, extra: int = 0):
    """Both sides of ``A_0^+ theta_lam H_w = A_0^+ t0_lam w`` in the periodic module."""
    lam = tuple(lam)
    if not d.in_coroot_lattice(lam):
        raise ValueError("lam must lie in the coroot lattice")
    cx = coxeter(d.label)
    lam1, lam2 = antidominant_split(d, lam, extra)
    p = PeriodicElt.alcove(al.base_alcove(d))
    # H_{t0_lam1}: lam1 is in the coroot lattice only up to Omega; use lam1, lam2 in Z Phi^vee
    for s in cx.reduced_word(WPrime(0, lam1)):
        p = periodic_act_simple(p, s)
    for s in reversed(cx.reduced_word(WPrime(0, lam2))):
        p = periodic_act_simple_inv(p, s)
    wx = WPrime(w, (0,) * d.rank)
    for s in cx.reduced_word(wx):
        p = periodic_act_simple(p, s)
    rhs = al.right_act_ext(al.base_alcove(d), cx.mul(WPrime(0, lam), wx))
    return p, PeriodicElt.alcove(rhs)


def kato_check(d: RootDatum, lam, w: int) -> bool:
    lhs, rhs = kato_sides(d, lam, w)
    return lhs == rhs
