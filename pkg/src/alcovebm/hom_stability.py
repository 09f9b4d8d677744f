"""Degree-zero morphism spaces, the graded-rank Hom formula, and the stability experiment.

A degree-zero morphism ``F -> G`` is determined by its vertex maps ``phi^x`` when
``F`` satisfies (BM2).  The unknowns are the coefficients of the entries of the
``phi^x`` (degree-zero matrices between the free stalks); for each edge
``E = {x, y}`` and each generator ``(a, b)`` of ``Gamma({x, y}, F)`` the constraint
is ``rho^G_{E,x}(phi^x a) = rho^G_{E,y}(phi^y b)`` in the ambient module of
``G^E``.  Edge maps ``phi^E`` never appear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import alcoves as al
from . import graded_linalg as gl
from .bm_sheaves import Sheaf, SheafError, bm_build, restrict_sheaf, sections, verify_axioms
from .laurent import ZERO, LaurentPoly
from .moment_graph import build_alcove_graph


@dataclass
class HomSpace:
    dimension: int
    basis: list
    unknowns: list
    window: list = field(default_factory=list)

    def restrict_to(self, subset):
        """Matrix (rows = basis elements) of the restriction to ``subset``, as coefficient rows."""
        keep = [i for i, u in enumerate(self.unknowns) if u[0] in set(subset)]
        return [[row[i] for i in keep] for row in self.basis], [self.unknowns[i] for i in keep]


def _edge_section_gens(F: Sheaf, x, y):
    """Minimal generators ``(degree, a, b)`` of ``Gamma({x, y}, F)``."""
    degs = F.stalks[x] + F.stalks[y]
    if not degs:
        return []
    # two-vertex section modules are generated in degrees <= max + 2
    cutoff = max(degs) + 6
    tm = sections(F, [x, y], cutoff)
    gens = gl.min_generators(tm)
    order = [v for v in F.graph.vertices if v in (x, y)]
    out = []
    for deg, vec in gens:
        parts = {}
        o = 0
        for v in order:
            n = len(F.stalks[v])
            parts[v] = vec[o:o + n]
            o += n
        out.append((deg, parts[x], parts[y]))
    return out


def hom_space(F: Sheaf, G: Sheaf, window=None) -> HomSpace:
    """Degree-zero homomorphisms ``F|_window -> G|_window``."""
    if F.graph.vertices != G.graph.vertices:
        raise SheafError("F and G must live on the same graph")
    g = F.graph
    R = F.R
    verts = list(g.vertices) if window is None else [x for x in g.vertices if x in set(window)]
    vs = set(verts)
    # unknowns: (x, i, j, monomial) with phi^x(e_j) having coefficient m on f_i
    unknowns = []
    for x in verts:
        for j, dj in enumerate(F.stalks[x]):
            for i, di in enumerate(G.stalks[x]):
                k = dj - di
                if k < 0 or k % 2:
                    continue
                for m in R.monomials(k // 2):
                    unknowns.append((x, i, j, m))
    if not unknowns:
        return HomSpace(0, [], [], verts)
    index = {}
    for u, (x, i, j, m) in enumerate(unknowns):
        index.setdefault(x, []).append(u)
    rows = [[] for _ in unknowns]
    for ei, e in enumerate(g.edges):
        if e.upper not in vs or e.lower not in vs:
            continue
        EG = G.edges[ei]
        if not EG.target:
            continue
        lay = EG.layout()
        for deg, a, b in _edge_section_gens(F, e.upper, e.lower):
            offs = gl.layout_offsets(R, lay, deg)
            n = offs[1]
            if n == 0:
                continue
            contrib = {}
            for x, vec, sign in ((e.upper, a, 1), (e.lower, b, -1)):
                for u in index.get(x, []):
                    _, i, j, m = unknowns[u]
                    c = vec[j]
                    if c == 0:
                        continue
                    coeff = c * R.mono(m)
                    img = [EG.red(coeff * p) if p != 0 else p for p in EG.rho(x)[i]]
                    row = gl.to_row(R, lay, img, deg, offs)
                    if sign < 0:
                        row = [-t for t in row]
                    prev = contrib.get(u)
                    contrib[u] = row if prev is None else [p + q for p, q in zip(prev, row)]
            for u in range(len(unknowns)):
                rows[u].extend(contrib.get(u, [0] * n))
    ncols = len(rows[0])
    if ncols == 0:
        basis = [[1 if i == j else 0 for i in range(len(unknowns))] for j in range(len(unknowns))]
    else:
        basis = gl.nullspace_rows(rows, ncols)
    return HomSpace(len(basis), basis, unknowns, verts)


def restriction_rank(H: HomSpace, subset) -> int:
    """Rank of the restriction map from ``H`` to morphisms on ``subset``."""
    rows, cols = H.restrict_to(subset)
    if not rows or not cols:
        return 0
    return gl.rank_of(rows, len(cols))


def hom_grk_formula(F: Sheaf, G: Sheaf) -> LaurentPoly:
    """``sum_x conj(grk F^x) grk G^{[x]}``."""
    if len(G.costalk_gens) != len(G.graph.vertices):
        rep = verify_axioms(G)
        if not (rep.bm3 and rep.bm4):
            raise SheafError("G must satisfy (BM3) and (BM4)")
    if not all(G.costalk_free.values()):
        raise SheafError("G must have free costalks")
    total = ZERO
    for x in F.graph.vertices:
        if F.stalks[x] and G.costalk_gens.get(x):
            total = total + F.grk_stalk(x).bar() * G.costalk_grk(x)
    return total


def degree_zero_dim(p: LaurentPoly, nvars: int) -> int:
    """Degree-zero dimension of the graded free module with graded rank ``p``.

    A summand ``v^n`` is ``S(n)`` whose degree-zero part is ``S_n``.
    """
    R = gl.ring(nvars)
    return sum(a * R.dim(n) for n, a in p.items())


# ---------------------------------------------------------------------------
# stability
# ---------------------------------------------------------------------------

@dataclass
class ScanResult:
    windows: list
    dimensions: list
    surjective: list
    verdict: str
    stable_from: int | None

    def as_rows(self):
        out = []
        for k, (w, dim) in enumerate(zip(self.windows, self.dimensions)):
            out.append((k, len(w), dim, self.surjective[k] if k < len(self.surjective) else None))
        return out


def scan_windows(d, top: al.Alcove, steps: int):
    """``O_k ∩ {<= top}`` for ``A_k = A_0^+ - k rho^vee``, ``k = 0..steps``."""
    rc = tuple(1 for _ in range(d.rank))
    out = []
    for k in range(steps + 1):
        Ak = al.translate(al.base_alcove(d), tuple(-k * c for c in rc))
        out.append(al.interval(Ak, top))
    return out


def stability_scan(d, top: al.Alcove, steps: int = 6, top_g: al.Alcove | None = None,
                   tail: int = 2) -> ScanResult:
    """Dimensions of ``Hom(B(top)|_O, B(top_g)|_O)`` over the windows of :func:`scan_windows`.

    The sheaves are built on the largest window and restricted.  The verdict is
    ``stable`` when the last ``tail + 1`` dimensions agree, else ``inconclusive``;
    ``surjective[k]`` records that restriction from window ``k+1`` onto window ``k``
    is onto.
    """
    top_g = top if top_g is None else top_g
    hi = top if al.leq(top_g, top) else top_g
    wins = scan_windows(d, hi, steps)
    big = build_alcove_graph(d, wins[-1])
    F = bm_build(big, top)
    G = F if top_g == top else bm_build(big, top_g)
    dims = []
    spaces = []
    for w in wins:
        Fw, Gw = restrict_sheaf(F, w), restrict_sheaf(G, w)
        H = hom_space(Fw, Gw)
        dims.append(H.dimension)
        spaces.append(H)
    surj = []
    for k in range(len(wins) - 1):
        surj.append(restriction_rank(spaces[k + 1], wins[k]) == dims[k])
    stable_from = None
    for k in range(len(dims)):
        if all(x == dims[k] for x in dims[k:]):
            stable_from = k
            break
    verdict = "stable" if stable_from is not None and len(dims) - stable_from > tail else "inconclusive"
    return ScanResult(wins, dims, surj, verdict, stable_from)


# ---------------------------------------------------------------------------
# explicit finiteness bounds
# ---------------------------------------------------------------------------

def n1_constant(d) -> int:
    """``max(max_{alpha > 0} <rho, alpha^vee>, 1)``."""
    best = 1
    for ac in d.positive_coroots:
        val = d.pairing(d.rho, ac)
        best = max(best, val)
    return best


def finiteness_bounds(F: Sheaf, lam=None):
    """Check the explicit stalk and costalk bounds for ``F = B(A_lam^+)`` on an alcove window.

    With ``N1`` from :func:`n1_constant`, ``C = l(w_0)`` and
    ``c = l(A_0^+) - l(A_lam^+) - l(w_0)``:

    * stalks: each exponent ``k`` of ``grk F^A`` has
      ``k - l(A) >= (1/N1 - 1) l(A_lam^+) - l(A)/N1``;
    * costalks: each exponent ``k`` of ``grk F^{[A]}`` has ``|k - l(A) - c| <= C``.

    Since the support lies below ``A_lam^+``, the costalk bound gives
    ``k + l(A) <= C2 = c + C + 2 l(A_lam^+)``, which is also checked.
    ``lam`` defaults to the one with ``A_lam^+`` the top of the support; an error is
    raised if the top is not of that form.
    """
    g = F.graph
    d = g.d
    supp = F.support()
    if not supp:
        return {"C1": Fraction(0), "N1": Fraction(n1_constant(d)), "C2": Fraction(0),
                "C": 0, "shift": 0, "violations": []}
    if lam is None:
        top = max(supp, key=lambda A: (g.lengths[A], al.sort_key(A)))
        # A_lam^+ = A_0^+ + lam has k_{alpha_i} = <lam, alpha_i>, the coweight coordinates
        lam = tuple(al.k_alpha(top, a) for a in d.simple_roots)
        if al.a_plus(d, lam) != top:
            raise SheafError("the top of the support is not of the form A_lam^+")
    lAl = al.length(al.a_plus(d, lam))
    N1 = Fraction(n1_constant(d))
    C = d.weyl.length(d.weyl.longest)
    shift = al.length(al.base_alcove(d)) - lAl - C
    C1 = (1 / N1 - 1) * lAl
    C2 = Fraction(shift + C + 2 * lAl)
    if len(F.costalk_gens) != len(g.vertices):
        verify_axioms(F)
    violations = []
    for A in g.vertices:
        lA = g.lengths[A]
        for k, _ in F.grk_stalk(A).items():
            if Fraction(k - lA) < C1 - Fraction(lA) / N1:
                violations.append(("stalk", A, k))
        for k, _ in F.costalk_grk(A).items():
            if abs(k - lA - shift) > C or k + lA > C2:
                violations.append(("costalk", A, k))
    return {"C1": C1, "N1": N1, "C2": C2, "C": C, "shift": shift, "violations": violations}
