"""Finite labeled moment graphs.

Three builders are provided:

* :func:`build_alcove_graph`: vertices are alcoves, ``A`` and ``A s_t`` are joined
  for every affine reflection ``t``, ordered by the periodic order;
* :func:`build_bruhat_graph`: the Bruhat graph of a lower interval of ``W_aff``;
* :func:`build_coset_graph`: the graph on minimal coset representatives for the
  stabilizer of a coweight (``W_aff,0`` for ``lam = 0``).

An edge ``{x, xt}`` is labeled by the affine coroot of the reflection ``t``,
viewed as a vector in ``X^vee_aff (x) Q`` (finite coweight coordinates, then the
``delta`` and grading coordinates) and normalized so that its first nonzero
coordinate is positive.  Vertex keys are :class:`~alcovebm.alcoves.Alcove`
objects or :class:`~alcovebm.rootdata.WPrime` group elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import alcoves as al
from .coxeter_hecke import BudgetError, coxeter
from .rootdata import (
    AffineRoot,
    RootDatum,
    WPrime,
    _finite_reflection_index,
    affine_coroot,
    wp_inv,
    wp_mul,
)

VERTEX_CAP = 5000


class GraphError(ValueError):
    """Inconsistent graph data or an unsupported window."""


@dataclass(frozen=True)
class GraphEdge:
    upper: object
    lower: object
    label: tuple


def normalize_label(vec) -> tuple:
    vec = tuple(Fraction(x) for x in vec)
    for x in vec:
        if x:
            return vec if x > 0 else tuple(-y for y in vec)
    raise GraphError("edge labels must be nonzero")


def reflection_root(d: RootDatum, t: WPrime):
    """The affine root ``(beta, n)`` (``beta > 0``) with ``t = s_(beta, n)``, or ``None``."""
    if wp_mul(d, t, t) != WPrime(0, (0,) * d.rank):
        return None
    for beta in d.positive_roots:
        if _finite_reflection_index(d, beta) != t.w:
            continue
        bc = d.coroot_of(beta)
        n = None
        for a, b in zip(t.lam, bc):
            if b:
                n = Fraction(-a, b)
                break
        if n is None or n.denominator != 1:
            return None
        n = int(n)
        if tuple(-n * x for x in bc) != tuple(t.lam):
            return None
        return beta, n
    return None


def reflection_label(d: RootDatum, t: WPrime) -> tuple:
    """Sign-normalized affine coroot of the reflection ``t``."""
    r = reflection_root(d, t)
    if r is None:
        raise GraphError(f"{t} is not a reflection")
    cr = affine_coroot(d, AffineRoot(d.label, tuple(r[0]), r[1]))
    return normalize_label(cr.as_tuple())


class MomentGraph:
    """A finite moment graph with a partial order on its vertices.

    ``lengths`` must be strictly increasing along the order; every edge is
    stored with its upper and lower endpoint.  The order is evaluated lazily
    through ``leq_fn`` and memoized.
    """

    def __init__(self, vertices, edges, lengths, leq_fn=None, kind="custom",
                 d: RootDatum | None = None, nvars: int | None = None, meta=None,
                 key_fn=None, name_fn=None):
        vertices = list(vertices)
        if len(vertices) > VERTEX_CAP:
            raise al.WindowError(f"graph exceeds {VERTEX_CAP} vertices")
        self.kind = kind
        self.d = d
        self.lengths = dict(lengths)
        self._key_fn = key_fn or (lambda x: repr(x))
        self._name_fn = name_fn or (lambda x: repr(x))
        self.vertices = sorted(vertices, key=lambda x: (self.lengths[x], self._key_fn(x)))
        self.index = {x: i for i, x in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise GraphError("duplicate vertices")
        self.edges = []
        seen = set()
        for e in edges:
            if e.upper not in self.index or e.lower not in self.index:
                raise GraphError("edge endpoint outside the vertex set")
            if self.lengths[e.upper] <= self.lengths[e.lower]:
                raise GraphError("edge endpoints must have increasing length")
            key = (e.upper, e.lower)
            if key in seen:
                raise GraphError("parallel edges are not allowed")
            seen.add(key)
            self.edges.append(GraphEdge(e.upper, e.lower, normalize_label(e.label)))
        self.edges.sort(key=lambda e: (self.index[e.lower], self.index[e.upper]))
        if nvars is None:
            nvars = len(self.edges[0].label) if self.edges else (d.rank + 2 if d else 1)
        self.nvars = nvars
        for e in self.edges:
            if len(e.label) != nvars:
                raise GraphError("labels of different dimensions")
        self.incident = {x: [] for x in self.vertices}
        for i, e in enumerate(self.edges):
            self.incident[e.upper].append(i)
            self.incident[e.lower].append(i)
        self._leq_fn = leq_fn
        self._leq = {}
        self.meta = dict(meta or {})

    # -- order --------------------------------------------------------------
    def leq(self, x, y) -> bool:
        if x == y:
            return True
        if self.lengths[x] >= self.lengths[y]:
            return False
        key = (x, y)
        r = self._leq.get(key)
        if r is None:
            if self._leq_fn is None:
                r = self._edge_closure_leq(x, y)
            else:
                r = bool(self._leq_fn(x, y))
            self._leq[key] = r
        return r

    def _edge_closure_leq(self, x, y) -> bool:
        stack = [x]
        seen = {x}
        while stack:
            c = stack.pop()
            for ei in self.incident[c]:
                e = self.edges[ei]
                if e.lower == c and e.upper not in seen and self.lengths[e.upper] <= self.lengths[y]:
                    if e.upper == y:
                        return True
                    seen.add(e.upper)
                    stack.append(e.upper)
        return False

    def up_edges(self, x):
        """Indices of edges joining ``x`` to a larger vertex."""
        return [i for i in self.incident[x] if self.edges[i].lower == x]

    def down_edges(self, x):
        return [i for i in self.incident[x] if self.edges[i].upper == x]

    def processing_order(self):
        """Vertices by decreasing length, ties broken by the canonical key."""
        return sorted(self.vertices, key=lambda x: (-self.lengths[x], self._key_fn(x)))

    def name(self, x) -> str:
        return self._name_fn(x)

    def covers(self):
        """Pairs ``(x, y)`` with ``x < y`` and nothing strictly between inside the graph."""
        out = []
        vs = self.vertices
        for j, y in enumerate(vs):
            below = [x for x in vs[:j] if self.leq(x, y) and x != y]
            for x in below:
                if not any(self.leq(x, z) and z != x for z in below if z != x and self.leq(z, y)):
                    out.append((x, y))
        return out

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"MomentGraph({self.kind}, {len(self.vertices)} vertices, {len(self.edges)} edges)"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _alcove_graph_from(d: RootDatum, verts, meta):
    verts = list(dict.fromkeys(verts))
    inv = {A: wp_inv(d, A.coord) for A in verts}
    edges = []
    for A, B in combinations(verts, 2):
        t = wp_mul(d, inv[A], B.coord)
        if reflection_root(d, t) is None:
            continue
        la, lb = al.length(A), al.length(B)
        up, lo = (A, B) if la > lb else (B, A)
        edges.append(GraphEdge(up, lo, reflection_label(d, t)))
    return MomentGraph(verts, edges, {A: al.length(A) for A in verts}, leq_fn=al.leq,
                       kind="alcove", d=d, nvars=d.rank + 2, meta=meta,
                       key_fn=al.sort_key, name_fn=al.format_alcove)


def build_alcove_graph(d: RootDatum, window) -> MomentGraph:
    """Alcove moment graph on a finite window.

    ``window`` is an iterable of alcoves or a tuple ``("interval", A, B)`` or
    ``("lower", B, min_length)``.
    """
    if isinstance(window, tuple) and window and isinstance(window[0], str):
        tag = window[0]
        if tag == "interval":
            verts = al.interval(window[1], window[2])
        elif tag == "lower":
            verts = al.lower_set(window[1], window[2])
        else:
            raise GraphError(f"unknown window kind {tag!r}")
        meta = {"builder": "alcove", "window": tag}
    else:
        try:
            verts = list(window)
        except TypeError as exc:
            raise GraphError("window must be finite") from exc
        meta = {"builder": "alcove", "window": "explicit"}
    if len(verts) > VERTEX_CAP:
        raise al.WindowError(f"window exceeds {VERTEX_CAP} alcoves")
    return _alcove_graph_from(d, verts, meta)


def build_bruhat_graph(d: RootDatum, top: WPrime, budget: int = 12) -> MomentGraph:
    """Bruhat graph of ``{y <= top}``."""
    cx = coxeter(d.label)
    if cx.length(top) > budget:
        raise BudgetError(f"length {cx.length(top)} exceeds the budget {budget}")
    verts = sorted(cx.lower_interval(top), key=cx.sort_key)
    inv = {x: cx.inv(x) for x in verts}
    edges = []
    for x, z in combinations(verts, 2):
        t = cx.mul(inv[x], z)
        if reflection_root(d, t) is None:
            continue
        up, lo = (x, z) if cx.length(x) > cx.length(z) else (z, x)
        edges.append(GraphEdge(up, lo, reflection_label(d, t)))
    return MomentGraph(verts, edges, {x: cx.length(x) for x in verts}, leq_fn=cx.leq,
                       kind="bruhat", d=d, nvars=d.rank + 2,
                       meta={"builder": "bruhat", "top": _wname(d, top)},
                       key_fn=cx.sort_key, name_fn=lambda x: _wname(d, x))


def stabilizer(d: RootDatum, lam) -> list:
    """``W_lam``: elements of ``W'_aff`` fixing the coweight ``lam``."""
    lam = tuple(lam)
    out = []
    for w in range(d.weyl.order):
        wl = d.weyl.act_coweight(w, lam)
        out.append(WPrime(w, tuple(a - b for a, b in zip(lam, wl))))
    return out


def build_coset_graph(d: RootDatum, top: WPrime, lam=None, budget: int = 14) -> MomentGraph:
    """Moment graph of ``W_lam \\ W_aff`` below the coset of ``top``.

    Vertices are minimal coset representatives ``y <= top``; ``x`` and ``y`` are joined
    when ``x t`` lies in ``W_lam y`` for a reflection ``t``, with label the coroot of ``t``.
    """
    cx = coxeter(d.label)
    lam = tuple(lam) if lam is not None else (0,) * d.rank
    stab = stabilizer(d, lam)

    def minrep(x):
        return min((cx.mul(g, x) for g in stab), key=lambda y: (cx.length(y), cx.sort_key(y)))

    top = minrep(top)
    if cx.length(top) > budget:
        raise BudgetError(f"length {cx.length(top)} exceeds the budget {budget}")
    verts = sorted({y for y in cx.lower_interval(top) if minrep(y) == y}, key=cx.sort_key)
    inv = {x: cx.inv(x) for x in verts}
    edges = []
    for x, y in combinations(verts, 2):
        ts = set()
        for g in stab:
            t = cx.mul(cx.mul(inv[x], g), y)
            if reflection_root(d, t) is not None:
                ts.add(t)
        if not ts:
            continue
        if len(ts) > 1:
            raise GraphError(f"more than one reflection joins {x} and {y}")
        t = ts.pop()
        up, lo = (x, y) if cx.length(x) > cx.length(y) else (y, x)
        edges.append(GraphEdge(up, lo, reflection_label(d, t)))
    return MomentGraph(verts, edges, {x: cx.length(x) for x in verts}, leq_fn=cx.leq,
                       kind="coset", d=d, nvars=d.rank + 2,
                       meta={"builder": "coset", "lam": list(lam), "top": _wname(d, top)},
                       key_fn=cx.sort_key, name_fn=lambda x: _wname(d, x))


def _wname(d: RootDatum, x: WPrime) -> str:
    cx = coxeter(d.label)
    word = cx.reduced_word(x)
    body = "".join(f"s{s}" for s in word) or "e"
    om = cx.omega_part(x)
    if om != cx.e:
        body += f".w{d.omega_class(x.lam)}"
    return body


# ---------------------------------------------------------------------------
# checks, restriction, open sets
# ---------------------------------------------------------------------------

def _independent(a, b) -> bool:
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            if a[i] * b[j] - a[j] * b[i] != 0:
                return True
    return False


def check_gkm(g: MomentGraph):
    """Violations of the GKM condition: ``(vertex, edge_i, edge_j)`` with parallel labels."""
    out = []
    for x in g.vertices:
        inc = g.incident[x]
        for i, j in combinations(inc, 2):
            if not _independent(g.edges[i].label, g.edges[j].label):
                out.append((x, i, j))
    return out


def restrict(g: MomentGraph, subset) -> MomentGraph:
    """Induced subgraph on ``subset`` (with the same order)."""
    sub = set(subset)
    missing = sub - set(g.vertices)
    if missing:
        raise GraphError("subset is not contained in the vertex set")
    edges = [e for e in g.edges if e.upper in sub and e.lower in sub]
    h = MomentGraph([x for x in g.vertices if x in sub], edges,
                    {x: g.lengths[x] for x in sub}, leq_fn=g._leq_fn, kind=g.kind, d=g.d,
                    nvars=g.nvars, meta=dict(g.meta, restricted=True),
                    key_fn=g._key_fn, name_fn=g._name_fn)
    if g._leq_fn is None:
        # keep the ambient order
        h._leq_fn = g.leq
    return h


def open_bb(g: MomentGraph, x) -> list:
    """``{y >= x}`` inside the graph."""
    return [y for y in g.vertices if g.leq(x, y)]


def lower_bb(g: MomentGraph, x) -> list:
    """``{y <= x}`` inside the graph."""
    return [y for y in g.vertices if g.leq(y, x)]


def is_open(g: MomentGraph, subset) -> bool:
    sub = set(subset)
    return all(y in sub for x in sub for y in g.vertices if g.leq(x, y))


# ---------------------------------------------------------------------------
# sheaf-level morphisms (implemented with the sheaf engine)
# ---------------------------------------------------------------------------

def pullback_pi_star(F, bruhat_graph: MomentGraph):
    """``pi_M^* F`` for a sheaf on a coset graph; see :func:`alcovebm.bm_sheaves.pullback_pi_star`."""
    from .bm_sheaves import pullback_pi_star as impl
    return impl(F, bruhat_graph)


def relabel_phi_star(F, alcove_graph: MomentGraph | None = None):
    """``phi^* F`` for a sheaf on a Bruhat graph; see :func:`alcovebm.bm_sheaves.relabel_phi_star`."""
    from .bm_sheaves import relabel_phi_star as impl
    return impl(F, alcove_graph)


def phi_plus_star(F, alcove_graph: MomentGraph):
    """``phi_+^* F`` for a sheaf on the coset graph of ``W_aff,0``."""
    from .bm_sheaves import phi_plus_star as impl
    return impl(F, alcove_graph)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _coord(g: MomentGraph, x):
    if isinstance(x, al.Alcove):
        return {"w": x.w, "lam": list(x.lam)}
    if isinstance(x, WPrime):
        return {"w": x.w, "lam": list(x.lam)}
    return repr(x)


def to_json(g: MomentGraph) -> str:
    data = {
        "vertices": [{"id": i, "name": g.name(x), "coord": _coord(g, x), "length": g.lengths[x]}
                     for i, x in enumerate(g.vertices)],
        "edges": [{"u": g.index[e.upper], "v": g.index[e.lower],
                   "label": [_frac(a) for a in e.label]} for e in g.edges],
        "order": [[g.index[x], g.index[y]] for x, y in g.covers()],
        "meta": g.meta,
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def to_dot(g: MomentGraph) -> str:
    lines = ["graph moment {", "  rankdir=BT;"]
    for i, x in enumerate(g.vertices):
        lines.append(f'  v{i} [label="{g.name(x)}\\nl={g.lengths[x]}"];')
    for e in g.edges:
        lab = ",".join(_frac(a) for a in e.label)
        lines.append(f'  v{g.index[e.lower]} -- v{g.index[e.upper]} [label="({lab})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
