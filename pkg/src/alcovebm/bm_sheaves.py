"""Sheaves on moment graphs, global sections, costalks and the Braden-MacPherson algorithm.

A :class:`Sheaf` stores, for each vertex, the degrees of a free basis of its stalk
(a graded free right module over ``S = Q[x_0..x_{n-1}]``, ``deg x_i = 2``), and
for each edge ``E`` an *ambient* free ``S / alpha_E``-module together with the
two restriction maps ``rho_{E,x}`` written as matrices on the stalk bases.  The
edge module itself is the image of the two maps inside the ambient module; for
sheaves produced by :func:`bm_build` the ambient module is ``F^u / alpha_E F^u``
for the upper endpoint ``u`` and ``rho_{E,u}`` is the identity.

The central routine is a single top-down sweep over the vertices (decreasing
length).  It maintains a generating set of the sections over the processed
(open) part of the graph and, at each vertex ``y``, performs one exact column
reduction per degree of the matrix whose columns are

* ``m * rho_{dy}(e_j)`` for the basis ``e_j`` of ``F^y`` and monomials ``m``, and
* the images of the section generators of that degree.

From the reduction one reads off the new minimal generators of ``F^{dy}`` (used
to build ``B(x)^y`` as a projective cover), lifts of the section generators, and
a basis of the costalk ``F^{[y]}`` in that degree.  The same sweep in
verification mode checks the vertexwise flabbiness criterion
``F^y -> F^{dy}`` surjective.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import graded_linalg as gl
from .graded_linalg import CutoffError, from_row, layout_dim, rref_columns, to_row
from .laurent import ZERO, LaurentPoly
from .moment_graph import GraphError, MomentGraph, restrict


class SheafError(ValueError):
    """Inconsistent sheaf data or a failed structural requirement."""


@dataclass
class EdgeModule:
    upper: object
    lower: object
    label: tuple
    red: gl.Reducer
    target: list = field(default_factory=list)
    rho_u: list = field(default_factory=list)
    rho_l: list = field(default_factory=list)

    def layout(self):
        return tuple((d, self.red) for d in self.target)

    def rho(self, x):
        if x == self.upper:
            return self.rho_u
        if x == self.lower:
            return self.rho_l
        raise SheafError("vertex is not an endpoint of the edge")


class Sheaf:
    """A sheaf of graded modules on a finite moment graph (see the module docstring)."""

    def __init__(self, graph: MomentGraph, stalks=None, edges=None, name: str = ""):
        self.graph = graph
        self.R = gl.ring(graph.nvars)
        self.stalks = {x: list((stalks or {}).get(x, [])) for x in graph.vertices}
        if edges is None:
            edges = [EdgeModule(e.upper, e.lower, e.label, gl.reducer(self.R, e.label))
                     for e in graph.edges]
        self.edges = edges
        self.name = name
        self.costalk_gens = {}
        self.costalk_free = {}

    # -- basic data ---------------------------------------------------------
    def stalk_layout(self, x):
        return tuple((d, None) for d in self.stalks[x])

    def grk_stalk(self, x) -> LaurentPoly:
        return LaurentPoly.from_exponents([-d for d in self.stalks[x]])

    def support(self):
        return [x for x in self.graph.vertices if self.stalks[x]]

    def edge_between(self, x, y):
        for ei in self.graph.incident[x]:
            e = self.graph.edges[ei]
            if {e.upper, e.lower} == {x, y}:
                return ei
        return None

    def apply_rho(self, ei: int, x, vec):
        """``rho_{E,x}(vec)`` for ``vec`` a tuple of polynomials over the basis of ``F^x``."""
        E = self.edges[ei]
        cols = E.rho(x)
        out = [self.R.zero() for _ in E.target]
        for c, col in zip(vec, cols):
            if c == 0:
                continue
            rc = E.red(c)
            if rc == 0:
                continue
            for k, p in enumerate(col):
                if p != 0:
                    out[k] = out[k] + rc * p
        return out

    def shifted(self, n: int) -> "Sheaf":
        """``F(n)``: every generator degree drops by ``n``."""
        G = Sheaf(self.graph, {x: [d - n for d in ds] for x, ds in self.stalks.items()},
                  [EdgeModule(E.upper, E.lower, E.label, E.red, [d - n for d in E.target],
                              list(E.rho_u), list(E.rho_l)) for E in self.edges],
                  name=f"{self.name}({n})")
        return G

    def direct_sum(self, other: "Sheaf") -> "Sheaf":
        if other.graph is not self.graph:
            raise SheafError("direct sum needs a common graph")
        R = self.R
        stalks = {x: self.stalks[x] + other.stalks[x] for x in self.graph.vertices}
        edges = []
        for E1, E2 in zip(self.edges, other.edges):
            n1, n2 = len(E1.target), len(E2.target)

            def pad(cols, left):
                out = []
                for col in cols:
                    z1 = [R.zero()] * n1
                    z2 = [R.zero()] * n2
                    out.append(tuple(list(col) + z2) if left else tuple(z1 + list(col)))
                return out

            edges.append(EdgeModule(E1.upper, E1.lower, E1.label, E1.red, E1.target + E2.target,
                                    pad(E1.rho_u, True) + pad(E2.rho_u, False),
                                    pad(E1.rho_l, True) + pad(E2.rho_l, False)))
        return Sheaf(self.graph, stalks, edges, name=f"{self.name}+{other.name}")

    def grk_table(self):
        return {x: self.grk_stalk(x) for x in self.graph.vertices}

    def costalk_grk(self, x) -> LaurentPoly:
        if x not in self.costalk_gens:
            raise SheafError("costalks not computed; run verify_axioms or costalk()")
        return LaurentPoly.from_exponents([-d for d, _ in self.costalk_gens[x]])

    def __repr__(self):
        return f"Sheaf({self.name or 'anon'} on {self.graph!r})"


# ---------------------------------------------------------------------------
# the sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    bm3_ok: bool = True
    bm3_failure: object = None
    costalk_gens: dict = field(default_factory=dict)
    costalk_free: dict = field(default_factory=dict)
    gamma: list = field(default_factory=list)


def _pad(R, vec, n):
    vec = list(vec)
    return tuple(vec + [R.zero()] * (n - len(vec)))


def _mono_times(R, red, m, p):
    if p == 0:
        return p
    return red.mono(m) * p if red is not None else R.mono(m) * p


class _Sweep:
    def __init__(self, F: Sheaf, mode: str, top=None, cutoff=None, slack: int = 0):
        self.F = F
        self.g = F.graph
        self.R = F.R
        self.mode = mode
        self.top = top
        self.cutoff = cutoff
        self.slack = slack
        self.gamma = []          # list of [deg, {vertex: vec}]
        self.res = SweepResult()
        if mode == "build":
            self.lmax = self.g.lengths[top]
        else:
            supp = F.support()
            self.lmax = max((self.g.lengths[x] for x in supp), default=0)
            # a stalk generator of degree d at x has d + l(x) <= l(top) for an unshifted
            # BM sheaf; any excess comes from shifted summands and raises every cutoff
            self.offset = max([0] + [d + self.g.lengths[x] - self.lmax
                                     for x in supp for d in F.stalks[x]])

    def vertex_cutoff(self, y, basis_deg):
        if self.cutoff is not None:
            return self.cutoff
        base = 2 * (self.lmax - self.g.lengths[y]) + 2
        if self.mode != "build":
            base += 1 + self.offset
            gam = [d for d, _ in self.gamma]
            base = max([base] + [d + 2 for d in basis_deg] + [d + 2 for d in gam])
        return base + self.slack

    def run(self):
        F, g = self.F, self.g
        order = g.processing_order()
        if self.mode == "build":
            if self.top not in g.index:
                raise GraphError("top vertex not in the graph")
            order = [y for y in order if g.leq(y, self.top)]
        for y in order:
            ok = self.step(y)
            if not ok:
                self.res.bm3_ok = False
                self.res.bm3_failure = y
                break
        self.res.gamma = self.gamma
        return self.res

    def step(self, y) -> bool:
        F, g, R = self.F, self.g, self.R
        up = g.up_edges(y)
        amb = []
        for ei in up:
            amb.extend(F.edges[ei].layout())
        amb = tuple(amb)
        # images of the section generators
        imgs = []
        for deg, comp in self.gamma:
            vec = []
            for ei in up:
                E = F.edges[ei]
                if E.upper in comp and E.target:
                    vec.extend(F.apply_rho(ei, E.upper, comp[E.upper]))
                else:
                    vec.extend([R.zero()] * len(E.target))
            imgs.append(vec)
        if self.mode == "build":
            basis_deg = [0] if y == self.top else []
            rho_y = [[R.zero()] * len(amb)] if y == self.top else []
        else:
            basis_deg = list(F.stalks[y])
            rho_y = []
            for j in range(len(basis_deg)):
                col = []
                for ei in up:
                    if F.edges[ei].target:
                        col.extend(F.edges[ei].rho_l[j])
                rho_y.append(col)
        Dhi = self.vertex_cutoff(y, basis_deg)
        degs = [d for d, _ in self.gamma] + basis_deg
        if not degs:
            self.res.costalk_gens[y] = []
            self.res.costalk_free[y] = True
            if self.mode == "build":
                self._commit_build(y, up, [], [])
            return True
        Dlo = min(degs)
        if self.mode == "build" and y != self.top:
            Dlo = min([d for d, _ in self.gamma], default=Dlo)
        lifts = {}
        kern = []
        free = True
        for D in range(Dlo, Dhi + 1):
            offs = gl.layout_offsets(R, amb, D)
            namb = offs[1]
            cols = []
            for j, dj in enumerate(basis_deg):
                k = D - dj
                if k < 0 or k % 2:
                    continue
                for m in R.monomials(k // 2):
                    v = []
                    for c, p in zip(amb, rho_y[j]):
                        v.append(_mono_times(R, c[1], m, p))
                    cols.append(to_row(R, amb, v, D, offs))
            nR = len(cols)
            gD = [gi for gi, (d, _) in enumerate(self.gamma) if d == D]
            for gi in gD:
                cols.append(to_row(R, amb, imgs[gi], D, offs))
            if not cols:
                continue
            pivots, expr = rref_columns(cols, namb)
            pivset = set(pivots)
            newpos = {}
            for c in range(nR, len(cols)):
                if c in pivset:
                    if self.mode != "build":
                        return False
                    newpos[c] = nR + len(newpos)
                    basis_deg.append(D)
                    rho_y.append(list(imgs[gD[c - nR]]))
            if newpos and D >= Dhi - 1:
                raise CutoffError(f"stalk generator in degree {D} at the cutoff {Dhi} "
                                  f"(vertex {g.name(y)}); increase the cutoff")
            lay = tuple((d, None) for d in basis_deg)
            dimD = layout_dim(R, lay, D)
            for c in range(nR, len(cols)):
                gi = gD[c - nR]
                v = [0] * dimD
                if c in newpos:
                    v[newpos[c]] = 1
                else:
                    for p, a in expr[c].items():
                        v[p if p < nR else newpos[p]] += a
                lifts[gi] = from_row(R, lay, v, D)
            kb = []
            for c in range(nR):
                if c in pivset:
                    continue
                v = [0] * dimD
                v[c] = 1
                for p, a in expr[c].items():
                    v[p] = -a
                kb.append(v)
            mult = []
            for kd, kv in kern:
                mult.extend(gl.monomial_multiples(R, lay, _pad(R, kv, len(basis_deg)), kd, D))
            if kb or mult:
                pv, _ = rref_columns(mult + kb, dimD)
                nm = len(mult)
                rank_mult = sum(1 for p in pv if p < nm)
                new = [kb[p - nm] for p in pv if p >= nm]
                if rank_mult != nm or len(kb) != nm + len(new):
                    free = False
                if new and D >= Dhi - 1:
                    raise CutoffError(f"costalk generator in degree {D} at the cutoff {Dhi} "
                                      f"(vertex {g.name(y)}); increase the cutoff")
                for row in new:
                    kern.append((D, from_row(R, lay, row, D)))
        n = len(basis_deg)
        if self.mode != "build" and len(kern) != n:
            free = False
        self.res.costalk_gens[y] = [(d, _pad(R, v, n)) for d, v in kern]
        self.res.costalk_free[y] = free
        # update the section generators
        for gi, (deg, comp) in enumerate(self.gamma):
            lv = lifts.get(gi)
            if lv is not None and any(p != 0 for p in lv):
                comp[y] = _pad(R, lv, n)
        for kd, kv in kern:
            self.gamma.append([kd, {y: _pad(R, kv, n)}])
        if self.mode == "build":
            self._commit_build(y, up, basis_deg, rho_y)
        return True

    def _commit_build(self, y, up, basis_deg, rho_y):
        F, R = self.F, self.R
        F.stalks[y] = list(basis_deg)
        off = 0
        for ei in up:
            E = F.edges[ei]
            k = len(E.target)
            E.rho_l = [tuple(col[off:off + k]) for col in rho_y]
            off += k
        for ei in self.g.down_edges(y):
            E = F.edges[ei]
            E.target = list(basis_deg)
            E.rho_u = [tuple(R.one() if i == j else R.zero() for i in range(len(basis_deg)))
                       for j in range(len(basis_deg))]
            E.rho_l = []


def bm_build(g: MomentGraph, x, cutoff: int | None = None, slack: int = 0) -> Sheaf:
    """The indecomposable Braden-MacPherson sheaf ``B(x)`` on ``g``.

    ``B(x)^x = S``, edge modules below a vertex are quotients of its stalk, and each
    lower stalk is a projective cover of the image of the sections above it.
    """
    F = Sheaf(g, name=f"B({g.name(x)})")
    sw = _Sweep(F, "build", top=x, cutoff=cutoff, slack=slack)
    res = sw.run()
    F.costalk_gens = res.costalk_gens
    F.costalk_free = res.costalk_free
    for y in g.vertices:
        if y not in F.costalk_gens:
            F.costalk_gens[y] = []
            F.costalk_free[y] = True
    F.meta = {"top": x, "gamma": res.gamma}
    return F


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class AxiomReport:
    bm1: bool
    bm2: bool
    bm3: bool
    bm4: bool
    verma_flag: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.bm1 and self.bm2 and self.bm3 and self.bm4

    def as_dict(self):
        return {"BM1": self.bm1, "BM2": self.bm2, "BM3": self.bm3, "BM4": self.bm4,
                "verma_flag": self.verma_flag, "failures": list(self.failures)}


def _image_dims(F: Sheaf, ei: int, x, D: int) -> int:
    """``dim`` of the image of ``rho_{E,x}`` in degree ``D``."""
    R = F.R
    E = F.edges[ei]
    lay = E.layout()
    offs = gl.layout_offsets(R, lay, D)
    rows = []
    for j, dj in enumerate(F.stalks[x]):
        k = D - dj
        if k < 0 or k % 2:
            continue
        for m in R.monomials(k // 2):
            rows.append(to_row(R, lay, [_mono_times(R, E.red, m, p) for p in E.rho(x)[j]], D, offs))
    return gl.rank_of(rows, offs[1]), rows


def check_bm2(F: Sheaf, margin: int = 4):
    """Edges violating (BM2): ``rho_{E,upper}`` onto the edge module with kernel ``F^u alpha_E``."""
    bad = []
    R = F.R
    for ei, E in enumerate(F.edges):
        degs = F.stalks[E.upper] + F.stalks[E.lower]
        if not degs:
            continue
        if not E.target:
            if F.stalks[E.upper]:
                bad.append((ei, "kernel", min(F.stalks[E.upper])))
            continue
        lo, hi = min(degs), max(degs) + margin
        for D in range(lo, hi + 1):
            ru, rows_u = _image_dims(F, ei, E.upper, D)
            expect = sum(R.dim(D - d, E.red.pivot) for d in F.stalks[E.upper])
            if ru != expect:
                bad.append((ei, "kernel", D))
                break
            rl, rows_l = _image_dims(F, ei, E.lower, D)
            if rl and gl.rank_of(rows_u + rows_l, layout_dim(R, E.layout(), D)) != ru:
                bad.append((ei, "surjectivity", D))
                break
    return bad


def check_bm4(F: Sheaf, gamma) -> list:
    """Vertices where global sections do not surject onto the stalk."""
    R = F.R
    bad = []
    for y in F.graph.vertices:
        degs = F.stalks[y]
        if not degs:
            continue
        lay = F.stalk_layout(y)
        for D in sorted(set(degs)):
            rows = []
            for deg, comp in gamma:
                if y in comp:
                    rows.extend(gl.monomial_multiples(R, lay, comp[y], deg, D))
            if gl.rank_of(rows, layout_dim(R, lay, D)) != layout_dim(R, lay, D):
                bad.append(y)
                break
    return bad


def verify_axioms(F: Sheaf, cutoff: int | None = None, slack: int = 0) -> AxiomReport:
    """Check (BM1)-(BM4).

    BM1 holds by construction (stalks carry free bases); the report additionally
    certifies freeness of every costalk (the Verma flag property).  BM3 is checked
    vertexwise as surjectivity of ``F^y -> F^{dy}``.
    """
    failures = []
    bad2 = check_bm2(F)
    for ei, kind, D in bad2:
        E = F.edges[ei]
        failures.append(f"BM2 {kind} fails on edge {F.graph.name(E.lower)}--"
                        f"{F.graph.name(E.upper)} in degree {D}")
    sw = _Sweep(F, "verify", cutoff=cutoff, slack=slack)
    res = sw.run()
    if not res.bm3_ok:
        failures.append(f"BM3 fails at vertex {F.graph.name(res.bm3_failure)}")
        bm4 = False
        fill_costalks_direct(F)
        res.costalk_free = dict(F.costalk_free)
    else:
        bad4 = check_bm4(F, res.gamma)
        bm4 = not bad4
        for y in bad4:
            failures.append(f"BM4 fails at vertex {F.graph.name(y)}")
        F.costalk_gens = res.costalk_gens
        F.costalk_free = res.costalk_free
    verma = res.bm3_ok and all(res.costalk_free.values())
    return AxiomReport(True, not bad2, res.bm3_ok, bm4, verma, failures)


# ---------------------------------------------------------------------------
# direct computations (independent of the sweep)
# ---------------------------------------------------------------------------

def _degree_range(F: Sheaf, X, cutoff):
    degs = [d for x in X for d in F.stalks[x]]
    if not degs:
        return []
    return range(min(degs), cutoff + 1)


def sections(F: Sheaf, X=None, cutoff: int | None = None) -> gl.TruncModule:
    """``Gamma(X, F)`` degreewise, as the kernel of the edge-difference map."""
    g = F.graph
    X = list(g.vertices) if X is None else [x for x in g.vertices if x in set(X)]
    Xs = set(X)
    R = F.R
    layout = tuple(c for x in X for c in F.stalk_layout(x))
    if cutoff is None:
        cutoff = max([d for x in X for d in F.stalks[x]], default=0) + 4
    tm = gl.TruncModule(R, layout, cutoff)
    eis = [ei for ei, E in enumerate(F.edges) if E.upper in Xs and E.lower in Xs and E.target]
    for D in _degree_range(F, X, cutoff):
        amb = tuple(c for ei in eis for c in F.edges[ei].layout())
        offs = gl.layout_offsets(R, amb, D)
        rows = []
        for x in X:
            for j, dj in enumerate(F.stalks[x]):
                k = D - dj
                if k < 0 or k % 2:
                    continue
                for m in R.monomials(k // 2):
                    vec = []
                    for ei in eis:
                        E = F.edges[ei]
                        if x == E.upper:
                            sign = 1
                        elif x == E.lower:
                            sign = -1
                        else:
                            vec.extend([R.zero()] * len(E.target))
                            continue
                        for p in E.rho(x)[j]:
                            q = _mono_times(R, E.red, m, p)
                            vec.append(q if sign == 1 else -q)
                    rows.append(to_row(R, amb, vec, D, offs))
        tm.slices[D] = gl.nullspace_rows(rows, offs[1]) if rows else []
    return tm


def costalk(F: Sheaf, x, cutoff: int | None = None) -> gl.TruncModule:
    """``F^{[x]}``: kernel of ``F^x`` into the modules of the upward edges (direct route)."""
    g = F.graph
    R = F.R
    lay = F.stalk_layout(x)
    up = [ei for ei in g.up_edges(x) if F.edges[ei].target]
    if cutoff is None:
        cutoff = max(F.stalks[x], default=0) + 2 * len(up) + 2
    tm = gl.TruncModule(R, lay, cutoff)
    for D in _degree_range(F, [x], cutoff):
        amb = tuple(c for ei in up for c in F.edges[ei].layout())
        offs = gl.layout_offsets(R, amb, D)
        rows = []
        for j, dj in enumerate(F.stalks[x]):
            k = D - dj
            if k < 0 or k % 2:
                continue
            for m in R.monomials(k // 2):
                vec = []
                for ei in up:
                    E = F.edges[ei]
                    vec.extend(_mono_times(R, E.red, m, p) for p in E.rho_l[j])
                rows.append(to_row(R, amb, vec, D, offs))
        tm.slices[D] = gl.nullspace_rows(rows, offs[1]) if rows else []
    gens = gl.min_generators(tm, check_stable=False)
    if gl.is_free_on(tm, gens) and len(gens) == len(F.stalks[x]):
        tm.free_certificate = [d for d, _ in gens]
    return tm


def fill_costalks_direct(F: Sheaf, cutoff: int | None = None):
    """Compute every costalk by the direct kernel route and store generators and freeness flags."""
    for x in F.graph.vertices:
        tm = costalk(F, x, cutoff)
        gens = gl.min_generators(tm, check_stable=False)
        F.costalk_gens[x] = gens
        F.costalk_free[x] = tm.free_certificate is not None or not F.stalks[x]


def delta_module(F: Sheaf, y, cutoff: int | None = None) -> gl.TruncModule:
    """``F^{dy}``: image of ``Gamma({z > y}, F)`` in the modules of the upward edges of ``y``."""
    g = F.graph
    R = F.R
    above = [z for z in g.vertices if z != y and g.leq(y, z)]
    up = [ei for ei in g.up_edges(y) if F.edges[ei].target]
    amb = tuple(c for ei in up for c in F.edges[ei].layout())
    if cutoff is None:
        cutoff = max([d for z in above for d in F.stalks[z]], default=0) + 2
    sec = sections(F, above, cutoff)
    offsets = {}
    o = 0
    for z in above:
        offsets[z] = (o, len(F.stalks[z]))
        o += len(F.stalks[z])
    tm = gl.TruncModule(R, amb, cutoff)
    for D in range(min([d for z in above for d in F.stalks[z]] or [0]), cutoff + 1):
        rows = []
        for row in sec.slices.get(D, []):
            vec = from_row(R, sec.layout, row, D)
            out = []
            for ei in up:
                E = F.edges[ei]
                a, n = offsets[E.upper]
                out.extend(F.apply_rho(ei, E.upper, vec[a:a + n]))
            rows.append(to_row(R, amb, out, D))
        n = layout_dim(R, amb, D)
        if rows and n:
            M, r = gl.fmpq_mat(rows).rref()
            tm.slices[D] = [[M[i, j] for j in range(n)] for i in range(r)]
        else:
            tm.slices[D] = []
    return tm


# ---------------------------------------------------------------------------
# restriction, support, skyscrapers
# ---------------------------------------------------------------------------

def restrict_sheaf(F: Sheaf, X) -> Sheaf:
    h = restrict(F.graph, X)
    keep = {(e.upper, e.lower): E for e, E in zip(F.graph.edges, F.edges)}
    edges = []
    for e in h.edges:
        E = keep[(e.upper, e.lower)]
        edges.append(EdgeModule(E.upper, E.lower, E.label, E.red, list(E.target),
                                list(E.rho_u), list(E.rho_l)))
    G = Sheaf(h, {x: F.stalks[x] for x in h.vertices}, edges, name=f"{F.name}|")
    return G


def edge_nonzero(F: Sheaf, ei: int) -> bool:
    E = F.edges[ei]
    return any(p != 0 for col in E.rho_u + E.rho_l for p in col)


def supp_plus(F: Sheaf):
    """Vertices with a nonzero stalk or joined by a nonzero edge module to one."""
    g = F.graph
    out = set(x for x in g.vertices if F.stalks[x])
    for ei, e in enumerate(g.edges):
        if edge_nonzero(F, ei):
            if F.stalks[e.lower]:
                out.add(e.upper)
            if F.stalks[e.upper]:
                out.add(e.lower)
    return [x for x in g.vertices if x in out]


def skyscraper(g: MomentGraph, x, degree: int = 0, edges: str = "quotient") -> Sheaf:
    """``S(-degree)`` at ``x``.

    With ``edges="quotient"`` the edges below ``x`` carry ``S / alpha_E`` (so (BM2)
    holds); with ``edges="zero"`` every edge module vanishes.
    """
    F = Sheaf(g, {x: [degree]}, name=f"sky({g.name(x)})")
    R = F.R
    if edges == "quotient":
        for ei in g.down_edges(x):
            E = F.edges[ei]
            E.target = [degree]
            E.rho_u = [(R.one(),)]
    elif edges != "zero":
        raise ValueError("edges must be 'quotient' or 'zero'")
    return F


# ---------------------------------------------------------------------------
# pullbacks along graph maps
# ---------------------------------------------------------------------------

def _transport(F: Sheaf, target: MomentGraph, vmap, name) -> Sheaf:
    """Copy ``F`` along a label-preserving bijection onto ``target`` (``vmap``: target -> source)."""
    stalks = {v: list(F.stalks[vmap[v]]) for v in target.vertices}
    G = Sheaf(target, stalks, name=name)
    for ei, e in enumerate(target.edges):
        src = F.edge_between(vmap[e.upper], vmap[e.lower])
        if src is None:
            raise GraphError("edge without a source edge")
        E = F.edges[src]
        if tuple(E.label) != tuple(e.label):
            raise GraphError("labels are not preserved")
        new = G.edges[ei]
        new.target = list(E.target)
        new.red = E.red
        new.rho_u = list(E.rho(vmap[e.upper]))
        new.rho_l = list(E.rho(vmap[e.lower]))
    return G


def relabel_phi_star(F: Sheaf, alcove_graph: MomentGraph | None = None) -> Sheaf:
    """``phi^* F``: a sheaf on a Bruhat graph moved to the alcoves ``A_0^+ w``.

    The vertex poset of the result is the alcove order (``phi`` does not preserve order).
    """
    from . import alcoves as al
    from .moment_graph import build_alcove_graph
    d = F.graph.d
    if alcove_graph is None:
        alcove_graph = build_alcove_graph(d, [al.alcove_from_coord(d, w) for w in F.graph.vertices])
    vmap = {}
    for w in F.graph.vertices:
        vmap[al.alcove_from_coord(d, w)] = w
    missing = [A for A in alcove_graph.vertices if A not in vmap]
    if missing:
        raise GraphError("alcove window is not the image of the Bruhat window")
    return _transport(F, alcove_graph, vmap, f"phi*{F.name}")


def phi_plus_star(F: Sheaf, alcove_graph: MomentGraph) -> Sheaf:
    """``phi_+^* F`` for a sheaf on the coset graph of ``W_aff,0``, on dominant alcoves.

    Only the coset edges that are alcove edges survive.
    """
    from . import alcoves as al
    d = F.graph.d
    verts = set(F.graph.vertices)
    vmap = {}
    for A in alcove_graph.vertices:
        if not al.is_dominant(A):
            raise GraphError("phi_+ is defined on dominant alcoves")
        w = A.coord
        if w not in verts:
            raise GraphError(f"{al.format_alcove(A)} is outside the coset window")
        vmap[A] = w
    return _transport(F, alcove_graph, vmap, f"phi+*{F.name}")


def pullback_pi_star(F: Sheaf, bruhat_graph: MomentGraph) -> Sheaf:
    """``pi_M^* F``: stalks ``F^{pi(x)}``; an edge inside a coset carries ``F^{pi(x)} / alpha_E``."""
    from .coxeter_hecke import coxeter
    from .moment_graph import stabilizer
    d = F.graph.d
    cx = coxeter(d.label)
    lam = tuple(F.graph.meta.get("lam", (0,) * d.rank))
    stab = stabilizer(d, lam)

    def minrep(x):
        return min((cx.mul(g, x) for g in stab), key=lambda y: (cx.length(y), cx.sort_key(y)))

    pi = {}
    for x in bruhat_graph.vertices:
        p = minrep(x)
        if p not in F.graph.index:
            raise GraphError("Bruhat window maps outside the coset window")
        pi[x] = p
    G = Sheaf(bruhat_graph, {x: list(F.stalks[pi[x]]) for x in bruhat_graph.vertices},
              name=f"pi*{F.name}")
    R = G.R
    for ei, e in enumerate(bruhat_graph.edges):
        new = G.edges[ei]
        pu, pl = pi[e.upper], pi[e.lower]
        if pu != pl:
            src = F.edge_between(pu, pl)
            if src is None:
                raise GraphError("image of an edge is not an edge")
            E = F.edges[src]
            new.red = E.red
            new.target = list(E.target)
            new.rho_u = list(E.rho(pu))
            new.rho_l = list(E.rho(pl))
        else:
            n = len(F.stalks[pu])
            ident = [tuple(R.one() if i == j else R.zero() for i in range(n)) for j in range(n)]
            new.target = list(F.stalks[pu])
            new.rho_u = list(ident)
            new.rho_l = list(ident)
    return G


# ---------------------------------------------------------------------------
# summaries
# ---------------------------------------------------------------------------

def summary(F: Sheaf):
    """Rows ``(vertex name, length, stalk grk, costalk grk)`` in processing order."""
    g = F.graph
    rows = []
    for x in g.vertices:
        cs = F.costalk_grk(x) if x in F.costalk_gens else None
        rows.append((g.name(x), g.lengths[x], F.grk_stalk(x), cs))
    return rows
