"""Alcoves, the two commuting actions on them, the periodic order and lengths.

An alcove is stored by its coordinate ``a = t_lam w`` in ``W'_aff = W_f x| Z Phi^vee``,
meaning ``A = a A_0^+``.  The left action of ``W'_aff`` is multiplication on the
left; the right action of ``W_aff`` is multiplication on the right by the
geometric wall reflections ``sigma_s`` of ``A_0^+``.

Elements of the extended affine Weyl group ``W^ext_aff`` are identified with
``W'^ext_aff`` through ``A_0^+`` (``A_0^+ x = x' A_0^+``), so they are also stored
as :class:`~alcovebm.rootdata.WPrime` pairs.  For such an element the
``W_aff`` part is the alcove ``A_0^+ x`` and the ``Omega`` part is the class of
the translation part modulo the coroot lattice.

Integer coordinates: ``k_alpha(A)`` is the integer with
``k_alpha < <alpha, a> < k_alpha + 1`` on ``A``.  For ``a = t_lam w`` this is
``<alpha, lam>`` if ``w^-1 alpha > 0`` and ``<alpha, lam> - 1`` otherwise.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .rootdata import (
    RootDatum,
    WPrime,
    _dot,
    get_datum,
    wp_identity,
    wp_inv,
    wp_mul,
    wp_reflection,
    wp_translation,
)

WINDOW_CAP = 5000


class WindowError(RuntimeError):
    """A window or search exceeded its size cap."""


@dataclass(frozen=True)
class Alcove:
    """The alcove ``t_lam w A_0^+``.

    Equality and hashing use the coordinate only; ``datum`` is carried along
    for convenience.
    """

    d: RootDatum = field(compare=False, repr=False, hash=False)
    w: int
    lam: tuple

    @property
    def coord(self) -> WPrime:
        return WPrime(self.w, self.lam)

    def __repr__(self):
        return f"Alcove({format_alcove(self)})"

    def __lt__(self, other):  # deterministic sort key
        return sort_key(self) < sort_key(other)


# ---------------------------------------------------------------------------
# per-datum tables
# ---------------------------------------------------------------------------

class _Tables:
    def __init__(self, d: RootDatum):
        W = d.weyl
        pos = d.positive_roots
        self.pos = pos
        # for each w: tuple over positive roots of 1 if w^-1 alpha < 0
        self.inv_sign = []
        for w in range(W.order):
            wi = W.inv(w)
            row = []
            for a in pos:
                b = W.act_weight(wi, a)
                row.append(1 if any(x < 0 for x in b) else 0)
            self.inv_sign.append(tuple(row))
        self.two_rho = tuple(sum(a[i] for a in pos) for i in range(d.rank))
        # base barycenter
        b0 = [Fraction(0)] * d.rank
        for comp, th in zip(d.components, d.highest_roots):
            for i in comp:
                b0[i] = Fraction(1, (len(comp) + 1) * th[i])
        self.b0 = tuple(b0)
        # wall reflections of A_0^+: index 0 affine (first component),
        # 1..r finite simple, then further affine walls for extra components.
        sig = []
        ths = list(d.highest_roots)
        sig.append(wp_reflection(d, tuple(-x for x in ths[0]), 1))
        for i in range(d.rank):
            sig.append(WPrime(d.weyl.simple[i], (0,) * d.rank))
        for th in ths[1:]:
            sig.append(wp_reflection(d, tuple(-x for x in th), 1))
        self.sigma = tuple(sig)
        # Omega' elements: stabilizers of A_0^+ in W'_ext, keyed by class rep
        self.omega = {}
        for w in range(W.order):
            wb = W.act_coweight(w, self.b0)
            lam = tuple(a - b for a, b in zip(self.b0, wb))
            if all(Fraction(x).denominator == 1 for x in lam):
                lam = tuple(int(x) for x in lam)
                self.omega[d.omega_class(lam)] = WPrime(w, lam)


@lru_cache(maxsize=None)
def _tables(label: str) -> _Tables:
    return _Tables(get_datum(label))


def tables(d: RootDatum) -> _Tables:
    return _tables(d.label)


def num_simple(d: RootDatum) -> int:
    """``|S_aff|``."""
    return len(tables(d).sigma)


def finite_simple_indices(d: RootDatum) -> list[int]:
    """Indices of ``S_aff`` generating ``W_aff,0`` (the finite Weyl group)."""
    return list(range(1, d.rank + 1))


def sigma(d: RootDatum, s: int) -> WPrime:
    """Geometric reflection ``sigma_s`` in wall ``s`` of ``A_0^+`` (as a ``W'`` element)."""
    t = tables(d)
    if not 0 <= s < len(t.sigma):
        raise ValueError(f"invalid simple reflection index {s}")
    return t.sigma[s]


# ---------------------------------------------------------------------------
# construction and coordinates
# ---------------------------------------------------------------------------

def base_alcove(d: RootDatum) -> Alcove:
    return Alcove(d, 0, (0,) * d.rank)


def alcove_from_coord(d: RootDatum, g: WPrime) -> Alcove:
    """``g A_0^+`` for ``g`` in ``W'^ext``; reduces modulo the stabilizer ``Omega'``."""
    if not d.in_coroot_lattice(g.lam):
        om = tables(d).omega[d.omega_class(g.lam)]
        g = wp_mul(d, g, wp_inv(d, om))
    return Alcove(d, g.w, tuple(g.lam))


def k_vector(A: Alcove) -> tuple:
    """``(k_alpha(A))`` over the positive roots (in the datum's order)."""
    t = tables(A.d)
    sg = t.inv_sign[A.w]
    return tuple(_dot(a, A.lam) - e for a, e in zip(t.pos, sg))


def k_alpha(A: Alcove, alpha) -> int:
    t = tables(A.d)
    alpha = tuple(alpha)
    if alpha in t.pos:
        i = t.pos.index(alpha)
        return _dot(alpha, A.lam) - t.inv_sign[A.w][i]
    neg = tuple(-x for x in alpha)
    return -k_alpha(A, neg) - 1


def barycenter(A: Alcove) -> tuple:
    t = tables(A.d)
    wb = A.d.weyl.act_coweight(A.w, t.b0)
    return tuple(a + b for a, b in zip(wb, A.lam))


def length(A: Alcove) -> int:
    """``sum_{alpha > 0} k_alpha(A)``; zero on ``A_0^+``."""
    t = tables(A.d)
    return _dot(t.two_rho, A.lam) - sum(t.inv_sign[A.w])


def waff_length(A: Alcove) -> int:
    """Coxeter length of ``x`` with ``A = A_0^+ x``: hyperplanes separating ``A`` from ``A_0^+``."""
    return sum(k if k >= 0 else -k for k in k_vector(A))


def sort_key(A: Alcove):
    return (length(A), k_vector(A))


def format_alcove(A: Alcove) -> str:
    if A.d.rank == 1:
        k = k_vector(A)[0]
        return f"({k},{k + 1})"
    if A.d.rank == 2:
        return "k" + str(k_vector(A)).replace(" ", "")
    return f"t{list(A.lam)}.w{A.w}"


def alcove_from_k(d: RootDatum, k) -> Alcove:
    """Inverse of :func:`k_vector` (only needs the simple-root entries plus sign data)."""
    t = tables(d)
    k = tuple(k)
    for w in range(d.weyl.order):
        sg = t.inv_sign[w]
        # <alpha_i, lam> = k_i + sign_i on simple roots determines lam
        lam = []
        for i in range(d.rank):
            e = tuple(int(i == j) for j in range(d.rank))
            idx = t.pos.index(e)
            lam.append(k[idx] + sg[idx])
        A = Alcove(d, w, tuple(lam))
        if d.in_coroot_lattice(A.lam) and k_vector(A) == k:
            return A
    raise ValueError(f"{k} is not the k-vector of an alcove")


def parse_alcove(d: RootDatum, text: str) -> Alcove:
    """Parse ``(n,n+1)`` in rank 1 or a ``k``-vector ``k(...)`` / ``(...)``."""
    s = text.strip().lstrip("k").strip()
    nums = tuple(int(x) for x in s.strip("()[] ").split(",") if x.strip())
    if d.rank == 1 and len(nums) == 2:
        if nums[1] != nums[0] + 1:
            raise ValueError("rank-1 alcove must be (n,n+1)")
        return alcove_from_k(d, (nums[0],))
    return alcove_from_k(d, nums)


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------

def right_act(A: Alcove, s: int) -> Alcove:
    """``A s``: the alcove sharing the face of type ``s`` with ``A``."""
    g = wp_mul(A.d, A.coord, sigma(A.d, s))
    return Alcove(A.d, g.w, g.lam)


def right_act_word(A: Alcove, word) -> Alcove:
    for s in word:
        A = right_act(A, s)
    return A


def left_act(g: WPrime, A: Alcove) -> Alcove:
    return alcove_from_coord(A.d, wp_mul(A.d, g, A.coord))


def reflect(A: Alcove, alpha, n: int) -> Alcove:
    """``s_(alpha, n) A``: reflection in the hyperplane ``<alpha, v> = -n``."""
    return left_act(wp_reflection(A.d, tuple(alpha), n), A)


def up(alpha, A: Alcove) -> Alcove:
    """``alpha-up(A)``: reflect in the first ``alpha``-hyperplane above ``A``."""
    k = k_alpha(A, alpha)
    return reflect(A, alpha, -(k + 1))


def down(alpha, A: Alcove) -> Alcove:
    k = k_alpha(A, alpha)
    return reflect(A, alpha, -k)


def translate(A: Alcove, lam) -> Alcove:
    """``A + lam`` for a coweight ``lam``."""
    return left_act(wp_translation(A.d, lam), A)


def hyperplanes_between(A: Alcove, B: Alcove):
    """Affine hyperplanes ``(alpha, m)`` (``<alpha, v> = m``, ``alpha > 0``) separating ``A`` and ``B``."""
    out = []
    for a, ka, kb in zip(tables(A.d).pos, k_vector(A), k_vector(B)):
        lo, hi = min(ka, kb), max(ka, kb)
        for m in range(lo + 1, hi + 1):
            out.append((a, m))
    return out


# ---------------------------------------------------------------------------
# order
# ---------------------------------------------------------------------------

def _cone_ok(d: RootDatum, diff) -> bool:
    return all(x >= 0 for x in d.coroot_coords(diff))


def in_cone_below(A: Alcove, B: Alcove) -> bool:
    """Necessary condition for ``A <= B``: ``bary(B) - bary(A)`` in the positive coroot cone."""
    ba, bb = barycenter(A), barycenter(B)
    return _cone_ok(A.d, tuple(y - x for x, y in zip(ba, bb)))


def up_neighbors(A: Alcove):
    return [up(a, A) for a in tables(A.d).pos]


def down_neighbors(A: Alcove):
    return [down(a, A) for a in tables(A.d).pos]


def _forward(A: Alcove, B: Alcove, cap: int):
    lb = length(B)
    seen = {A}
    dq = deque([A])
    while dq:
        C = dq.popleft()
        for D in up_neighbors(C):
            if D in seen or length(D) > lb or not in_cone_below(D, B):
                continue
            seen.add(D)
            if len(seen) > cap:
                raise WindowError(f"order search exceeded {cap} alcoves")
            dq.append(D)
    return seen


def _backward(B: Alcove, A: Alcove, cap: int):
    la = length(A)
    seen = {B}
    dq = deque([B])
    while dq:
        C = dq.popleft()
        for D in down_neighbors(C):
            if D in seen or length(D) < la or not in_cone_below(A, D):
                continue
            seen.add(D)
            if len(seen) > cap:
                raise WindowError(f"order search exceeded {cap} alcoves")
            dq.append(D)
    return seen


def leq(A: Alcove, B: Alcove, cap: int = WINDOW_CAP) -> bool:
    """Periodic order ``A <= B`` (generated by ``C < alpha-up(C)``)."""
    if A == B:
        return True
    if length(A) >= length(B) or not in_cone_below(A, B):
        return False
    return B in _forward(A, B, cap)


def interval(A: Alcove, B: Alcove, cap: int = WINDOW_CAP) -> list[Alcove]:
    """``{C : A <= C <= B}``, sorted by :func:`sort_key`."""
    if not leq(A, B, cap):
        return []
    f = _forward(A, B, cap)
    b = _backward(B, A, cap)
    return sorted(f & b, key=sort_key)


def lower_set(B: Alcove, min_length: int, cap: int = WINDOW_CAP) -> list[Alcove]:
    """``{C <= B : length(C) >= min_length}`` (finite), sorted."""
    seen = {B}
    dq = deque([B])
    while dq:
        C = dq.popleft()
        for D in down_neighbors(C):
            if D in seen or length(D) < min_length:
                continue
            seen.add(D)
            if len(seen) > cap:
                raise WindowError(f"lower set exceeded {cap} alcoves")
            dq.append(D)
    return sorted(seen, key=sort_key)


def upper_set_within(A: Alcove, window) -> list[Alcove]:
    """``{C in window : C >= A}``."""
    return sorted((C for C in window if leq(A, C)), key=sort_key)


# ---------------------------------------------------------------------------
# extended group, lengths, Omega
# ---------------------------------------------------------------------------

def length_ext(d: RootDatum, x: WPrime) -> int:
    """Length of ``x = t_mu w`` in ``W'^ext_aff``:
    ``sum_{w^-1 a > 0} |<a, mu>| + sum_{w^-1 a < 0} |<a, mu> - 1|``."""
    t = tables(d)
    total = 0
    for a, neg in zip(t.pos, t.inv_sign[x.w]):
        p = _dot(a, x.lam)
        total += abs(p - 1) if neg else abs(p)
    return total


def omega_of(d: RootDatum, lam) -> WPrime:
    """The length-zero element of ``W'^ext`` whose translation part is congruent to ``lam``."""
    return tables(d).omega[d.omega_class(tuple(lam))]


def omega_elements(d: RootDatum) -> list[WPrime]:
    t = tables(d)
    return [t.omega[c] for c in d.omega_classes()]


def ext_decompose(d: RootDatum, x: WPrime):
    """``x = w omega`` with ``w`` in ``W_aff`` (returned as the alcove ``A_0^+ x``) and ``omega`` in ``Omega``."""
    om = omega_of(d, x.lam)
    w = wp_mul(d, x, wp_inv(d, om))
    return Alcove(d, w.w, w.lam), om


def is_in_waff(d: RootDatum, x: WPrime) -> bool:
    return d.in_coroot_lattice(x.lam)


def to_waff(d: RootDatum, w: WPrime, base: Alcove) -> WPrime:
    """``w -> w^A``: the element ``x`` of ``W^ext`` with ``A x = w A`` (stored via ``A_0^+``)."""
    a = base.coord
    return wp_mul(d, wp_mul(d, wp_inv(d, a), w), a)


def from_waff(d: RootDatum, x: WPrime, base: Alcove) -> WPrime:
    """Inverse of :func:`to_waff`."""
    a = base.coord
    return wp_mul(d, wp_mul(d, a, x), wp_inv(d, a))


def right_act_ext(A: Alcove, x: WPrime) -> Alcove:
    """``A x`` for ``x`` in ``W^ext`` (``Omega`` acts trivially)."""
    return alcove_from_coord(A.d, wp_mul(A.d, A.coord, x))


# ---------------------------------------------------------------------------
# dominance
# ---------------------------------------------------------------------------

def is_dominant(A: Alcove) -> bool:
    b = barycenter(A)
    return all(x > 0 for x in b)


def a_plus(d: RootDatum, lam) -> Alcove:
    """``A_lam^+ = t_lam A_0^+``: the maximal alcove having ``lam`` in its closure."""
    return translate(base_alcove(d), lam)


def a_minus(d: RootDatum, lam) -> Alcove:
    """The minimal alcove having ``lam`` in its closure: ``lam + w_0 A_0^+``."""
    A0m = Alcove(d, d.weyl.longest, (0,) * d.rank)
    return translate(A0m, lam)


def contains_in_closure(A: Alcove, lam) -> bool:
    for a, k in zip(tables(A.d).pos, k_vector(A)):
        p = _dot(a, lam)
        if not k <= p <= k + 1:
            return False
    return True


def weyl_orbit_left(A: Alcove):
    """``{x A : x in W_f}``."""
    d = A.d
    return [left_act(WPrime(w, (0,) * d.rank), A) for w in range(d.weyl.order)]


def dominant_rep(A: Alcove) -> Alcove:
    for B in weyl_orbit_left(A):
        if is_dominant(B):
            return B
    raise AssertionError("no dominant alcove in orbit")


def identity(d: RootDatum) -> WPrime:
    return wp_identity(d)
