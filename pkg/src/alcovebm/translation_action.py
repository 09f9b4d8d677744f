"""Wall-crossing functors, the Bott-Samelson action, translations and characters.

``theta_s`` acts on sheaves on an ``s``-stable window of the alcove graph.  For a
pair ``A > As`` the new stalk at both ``A`` and ``As`` is ``Gamma({A, As}, F)(1)``,
with the free basis

* ``(alpha_s e_j, 0)`` for the basis ``e_j`` of ``F^A`` (degree ``d_j + 1``), and
* ``(l_k, f_k)`` for the basis ``f_k`` of ``F^{As}``, where ``l_k`` in ``F^A`` satisfies
  ``rho(l_k) = rho(f_k)`` on the ``s``-edge (degree ``d'_k - 1``).

At ``A`` the module structure is untwisted on the ``A`` component and twisted by
``s`` on the ``As`` component; at ``As`` the roles are exchanged, so coordinates
``c`` at ``As`` describe the same pair as ``s(c)`` at ``A``.  An edge ``E`` that is
not an ``s``-edge maps into ``F^E(1) + s^*F^{Es}(1)``.
"""

from __future__ import annotations

from . import alcoves as al
from . import graded_linalg as gl
from .bm_sheaves import EdgeModule, Sheaf, SheafError, bm_build, verify_axioms
from .coxeter_hecke import PeriodicElt, periodic_act_simple
from .laurent import ZERO, LaurentPoly
from .moment_graph import (
    GraphError,
    MomentGraph,
    build_alcove_graph,
    normalize_label,
    reflection_label,
)
from .rootdata import coweight_action_matrix


class WindowStabilityError(GraphError):
    """The window is not closed under the required right action."""


def s_automorphism(d, s: int, R: gl.Ring) -> gl.RingAutomorphism:
    """The action of the simple reflection ``s`` on ``S``."""
    return gl.RingAutomorphism(R, coweight_action_matrix(d, al.sigma(d, s)))


def _lift(F: Sheaf, ei: int, target_vec, deg: int):
    """``l`` in ``F^{upper}`` of degree ``deg`` with ``rho_{E,upper}(l) = target_vec``."""
    R = F.R
    E = F.edges[ei]
    u = E.upper
    lay = E.layout()
    offs = gl.layout_offsets(R, lay, deg)
    cols = []
    for j, dj in enumerate(F.stalks[u]):
        k = deg - dj
        if k < 0 or k % 2:
            continue
        for m in R.monomials(k // 2):
            cols.append(gl.to_row(R, lay, [E.red.mono(m) * p if p != 0 else p for p in E.rho_u[j]],
                                  deg, offs))
    n = len(cols)
    cols.append(gl.to_row(R, lay, list(target_vec), deg, offs))
    pivots, expr = gl.rref_columns(cols, offs[1])
    if n in pivots:
        raise SheafError("the s-edge restriction map is not surjective")
    v = [0] * n
    for p, a in expr.get(n, {}).items():
        v[p] = a
    return gl.from_row(R, F.stalk_layout(u), v, deg)


def theta_s(F: Sheaf, s: int) -> Sheaf:
    """The wall-crossing functor ``theta_s`` on a sheaf over an ``s``-stable alcove window."""
    g = F.graph
    if g.kind != "alcove":
        raise GraphError("theta_s acts on sheaves on the alcove graph")
    d = g.d
    R = F.R
    for A in g.vertices:
        if al.right_act(A, s) not in g.index:
            raise WindowStabilityError(f"window is not stable under s{s}")
    sig = s_automorphism(d, s, R)
    alpha_lab = reflection_label(d, al.sigma(d, s))
    alpha = R.linear(alpha_lab)
    # bases: vertex -> list of (own_vec, other_vec, degree)
    basis = {}
    for A in g.vertices:
        B = al.right_act(A, s)
        if g.lengths[A] < g.lengths[B]:
            continue
        ei = F.edge_between(A, B)
        if ei is None:
            raise GraphError("missing s-edge")
        nA, nB = len(F.stalks[A]), len(F.stalks[B])
        zA = [R.zero()] * nA
        zB = [R.zero()] * nB
        b1 = []
        for j, dj in enumerate(F.stalks[A]):
            own = list(zA)
            own[j] = alpha
            b1.append((tuple(own), tuple(zB), dj + 1))
        b2 = []
        for k, dk in enumerate(F.stalks[B]):
            target = F.edges[ei].rho_l[k] if F.edges[ei].target else ()
            lift = _lift(F, ei, target, dk)
            fk = list(zB)
            fk[k] = R.one()
            b2.append((tuple(lift), tuple(fk), dk - 1))
        basis[A] = b1 + b2
        basis[B] = [(oth, own, deg) for own, oth, deg in b1 + b2]
    stalks = {A: [deg for _, _, deg in basis[A]] for A in g.vertices}
    G = Sheaf(g, stalks, name=f"theta{s}({F.name})")
    for ei, e in enumerate(g.edges):
        new = G.edges[ei]
        if al.right_act(e.upper, s) == e.lower:
            n = len(stalks[e.upper])
            ident = [tuple(R.one() if i == j else R.zero() for i in range(n)) for j in range(n)]
            new.target = list(stalks[e.upper])
            new.rho_u = list(ident)
            new.rho_l = list(ident)
            if normalize_label(new.label) != normalize_label(alpha_lab):
                raise AssertionError("s-edge label mismatch")
            continue
        us, ls = al.right_act(e.upper, s), al.right_act(e.lower, s)
        esi = F.edge_between(us, ls)
        if esi is None:
            raise GraphError("the s-translate of an edge is missing")
        E, Es = F.edges[ei], F.edges[esi]
        red = new.red
        new.target = [t - 1 for t in E.target] + [t - 1 for t in Es.target]
        for X, Xs, slot in ((e.upper, us, "rho_u"), (e.lower, ls, "rho_l")):
            cols = []
            for own, oth, _ in basis[X]:
                first = F.apply_rho(ei, X, own) if E.target else []
                second = F.apply_rho(esi, Xs, oth) if Es.target else []
                col = [red(p) for p in first] + [red(sig(p)) for p in second]
                cols.append(tuple(col))
            setattr(new, slot, cols)
    return G


# ---------------------------------------------------------------------------
# Bott-Samelson words
# ---------------------------------------------------------------------------

def backward_windows(vertices, word):
    """Windows ``O_1 ⊇ ... ⊇ O_{l+1} = O`` with ``O_i = O_{i+1} ∪ O_{i+1} s_i``."""
    wins = [set(vertices)]
    for s in reversed(list(word)):
        cur = wins[0]
        wins.insert(0, cur | {al.right_act(A, s) for A in cur})
    return wins


def default_target(g: MomentGraph, word):
    V = set(g.vertices)
    out = []
    for A in g.vertices:
        if backward_windows([A], word)[0] <= V:
            out.append(A)
    return out


def star(F: Sheaf, word, target=None) -> Sheaf:
    """``F * B_{s_1} ... B_{s_l}`` by iterated wall-crossing, restricted to ``target``.

    The sheaf must be defined on the enlarged working window; by default the target
    is the largest set whose working window fits inside the graph of ``F``.
    """
    from .bm_sheaves import restrict_sheaf
    word = list(word)
    if target is None:
        target = default_target(F.graph, word)
    wins = backward_windows(target, word)
    if not wins[0] <= set(F.graph.vertices):
        raise WindowStabilityError("the working window leaves the graph of the sheaf")
    cur = restrict_sheaf(F, wins[0]) if wins[0] != set(F.graph.vertices) else F
    cur.graph.kind = "alcove"
    for i, s in enumerate(word):
        cur = theta_s(cur, s)
        if wins[i + 1] != set(cur.graph.vertices):
            cur = restrict_sheaf(cur, wins[i + 1])
    cur.name = f"{F.name}*{''.join(f's{s}' for s in word)}"
    return cur


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def ch(F: Sheaf) -> PeriodicElt:
    """``sum_A v^{-l(A)} grk F^{[A]} A`` (requires free costalks)."""
    g = F.graph
    if g.kind != "alcove":
        raise GraphError("ch is defined for sheaves on alcoves")
    if len(F.costalk_gens) != len(g.vertices):
        verify_axioms(F)
    if not all(F.costalk_free.values()):
        raise SheafError("costalks are not certified free")
    coeffs = {}
    for A in g.vertices:
        c = F.costalk_grk(A)
        if c:
            coeffs[A] = c.shift(-g.lengths[A])
    return PeriodicElt(g.d, coeffs)


def ch_times_bs(p: PeriodicElt, s: int) -> PeriodicElt:
    """``p (H_s + v)``."""
    return periodic_act_simple(p, s) + p.scale(LaurentPoly.v())


# ---------------------------------------------------------------------------
# translations
# ---------------------------------------------------------------------------

def translate_sheaf(F: Sheaf, lam) -> Sheaf:
    """``T_lam^* F`` with stalks ``F^{A - lam}`` at ``A``.

    Labels come from right reflections, so translating moves the label of an edge
    by the length-zero element ``sigma_lam`` only; the module structures are
    twisted by the same element.
    """
    g = F.graph
    d = g.d
    lam = tuple(lam)
    if not any(lam):
        return F
    R = F.R
    vmap = {al.translate(A, lam): A for A in g.vertices}
    h = build_alcove_graph(d, list(vmap))
    tau = gl.RingAutomorphism(R, coweight_action_matrix(d, al.omega_of(d, lam)))
    G = Sheaf(h, {B: list(F.stalks[A]) for B, A in vmap.items()}, name=f"T{list(lam)}*{F.name}")
    for ei, e in enumerate(h.edges):
        src = F.edge_between(vmap[e.upper], vmap[e.lower])
        if src is None:
            raise GraphError("translated edge has no source")
        E = F.edges[src]
        new = G.edges[ei]
        img = R.linear(E.label)
        if normalize_label(_linear_coeffs(R, tau(img))) != normalize_label(e.label):
            raise AssertionError("translation does not transport edge labels")
        new.target = list(E.target)
        new.rho_u = [tuple(new.red(tau(p)) for p in col) for col in E.rho(vmap[e.upper])]
        new.rho_l = [tuple(new.red(tau(p)) for p in col) for col in E.rho(vmap[e.lower])]
    return G


def _linear_coeffs(R: gl.Ring, p):
    out = [0] * R.n
    for e, a in p.to_dict().items():
        i = e.index(1)
        out[i] = a
    return tuple(gl.Fraction(int(a.p), int(a.q)) if hasattr(a, "p") else gl.Fraction(a)
                 for a in out)


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

class DecompositionError(ArithmeticError):
    """A negative residual appeared while peeling off indecomposables."""


def decompose(F: Sheaf, cache=None):
    """Multiset of ``(vertex, shift)`` with ``F = sum B(x)(shift)`` (by graded ranks)."""
    g = F.graph
    cache = {} if cache is None else cache
    resid = {x: F.grk_stalk(x) for x in g.vertices}
    out = []
    for x in g.processing_order():
        r = resid[x]
        if not r:
            continue
        if any(a < 0 for _, a in r.items()):
            raise DecompositionError(f"negative residual at {g.name(x)}: {r}")
        B = cache.get(x)
        if B is None:
            B = bm_build(g, x)
            cache[x] = B
        for n, a in r.items():
            out.extend([(x, n)] * a)
            for y in g.vertices:
                if B.stalks[y]:
                    resid[y] = resid[y] - B.grk_stalk(y).shift(n) * a
    for x, r in resid.items():
        if r:
            raise DecompositionError(f"nonzero residual at {g.name(x)}: {r}")
    out.sort(key=lambda t: (g.index[t[0]], t[1]))
    return out


def format_decomposition(g: MomentGraph, dec) -> str:
    return ", ".join(f"B({g.name(x)})({n})" for x, n in dec) or "0"


# ---------------------------------------------------------------------------
# the restriction experiment on dominant alcoves
# ---------------------------------------------------------------------------

def lanini_experiment(d, A: al.Alcove, A_low: al.Alcove, lam):
    """Decompose ``phi_+^* B(x_lam)`` on ``{A_low + lam <= A'' <= A + lam}`` intersected with dominant alcoves.

    Returns a dict with the window, whether the window is dominant, the axiom
    report of the restricted sheaf, the decomposition, and whether ``(A + lam, 0)``
    occurs.
    """
    from .bm_sheaves import phi_plus_star
    from .moment_graph import build_coset_graph
    top = al.translate(A, lam)
    low = al.translate(A_low, lam)
    if not al.is_dominant(top):
        raise GraphError("A + lam must be dominant")
    x = top.coord
    gc = build_coset_graph(d, x)
    Fc = bm_build(gc, x)
    window = al.interval(low, top)
    dom = [B for B in window if al.is_dominant(B)]
    ga = build_alcove_graph(d, dom)
    G = phi_plus_star(Fc, ga)
    rep = verify_axioms(G)
    dec = decompose(G)
    return {
        "top": top,
        "window": window,
        "window_dominant": len(dom) == len(window),
        "report": rep,
        "decomposition": dec,
        "contains_top": (top, 0) in dec,
        "graph": ga,
        "sheaf": G,
    }
