import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from alcovebm import alcoves as al
from alcovebm import bm_sheaves as bs
from alcovebm import hom_stability as hs
from alcovebm import moment_graph as mg
from alcovebm.coxeter_hecke import coxeter
from alcovebm.laurent import ONE, LaurentPoly
from alcovebm.rootdata import get_datum

A1 = get_datum("A1")
A2 = get_datum("A2")
CX1 = coxeter("A1")


def a1(n):
    return al.parse_alcove(A1, f"({n},{n + 1})")


def interval_e_s():
    s = CX1.from_word([0])
    g = mg.build_bruhat_graph(A1, s)
    return g, bs.bm_build(g, CX1.e), bs.bm_build(g, s)


# -- hom_space ------------------------------------------------------------------------

def test_endomorphisms_on_a_point_are_scalars():
    g = mg.build_alcove_graph(A1, [a1(0)])
    F = bs.bm_build(g, a1(0))
    assert hs.hom_space(F, F).dimension == 1


def test_endomorphisms_of_b_s():
    g, Be, Bs = interval_e_s()
    # phi^e and phi^s are scalars that must agree modulo alpha, hence agree
    H = hs.hom_space(Bs, Bs)
    assert H.dimension == 1
    assert hs.hom_grk_formula(Bs, Bs) == LaurentPoly.parse("1 + v^-2")
    assert hs.degree_zero_dim(hs.hom_grk_formula(Bs, Bs), g.nvars) == 1


def test_maps_between_b_e_and_b_s():
    g, Be, Bs = interval_e_s()
    assert hs.hom_space(Be, Bs).dimension == 0
    assert hs.hom_space(Bs, Be).dimension == 1
    assert hs.hom_grk_formula(Be, Bs) == LaurentPoly.monomial(-2)
    assert hs.hom_grk_formula(Bs, Be) == ONE


def test_disjoint_supports_give_zero():
    g = mg.build_alcove_graph(A1, [a1(0), a1(2)])
    F, G = bs.skyscraper(g, a1(0)), bs.skyscraper(g, a1(2))
    assert hs.hom_space(F, G).dimension == 0
    assert hs.hom_grk_formula(F, G) == LaurentPoly()


def test_formula_on_a_skyscraper():
    g = mg.build_alcove_graph(A1, [a1(0)])
    S = bs.skyscraper(g, a1(0))
    assert hs.hom_grk_formula(S, S) == ONE


def test_hom_space_basis_satisfies_the_window():
    g = mg.build_alcove_graph(A1, ("interval", a1(-3), a1(1)))
    F = bs.bm_build(g, a1(1))
    H = hs.hom_space(F, F, window=[a1(0), a1(1)])
    assert H.window == [a1(0), a1(1)]
    assert all(u[0] in (a1(0), a1(1)) for u in H.unknowns)
    assert H.dimension == len(H.basis) == 1


def test_hom_space_needs_a_common_graph():
    g = mg.build_alcove_graph(A1, [a1(0)])
    h = mg.build_alcove_graph(A1, [a1(1)])
    with pytest.raises(bs.SheafError):
        hs.hom_space(bs.skyscraper(g, a1(0)), bs.skyscraper(h, a1(1)))


def test_formula_rejects_non_free_costalks():
    g = mg.build_alcove_graph(A1, [a1(-1), a1(0), a1(1)])
    bad = bs.skyscraper(g, a1(0))           # fails BM3
    with pytest.raises(bs.SheafError):
        hs.hom_grk_formula(bad, bad)


def test_degree_zero_dim():
    # dim S_2 = 3 and dim S_4 = 6 in three variables of degree 2
    assert hs.degree_zero_dim(LaurentPoly.parse("1 + v^2 + v^-2"), 3) == 1 + 3
    assert hs.degree_zero_dim(LaurentPoly.parse("2v^4"), 3) == 2 * 6


def _box(d, steps):
    top = al.base_alcove(d)
    return mg.build_alcove_graph(d, ("interval", al.translate(top, tuple(-steps * c for c in d.rho_check)),
                                     top))


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["A1", "A2"]), st.data())
def test_hom_space_matches_the_formula(label, data):
    d = get_datum(label)
    g = _box(d, 3 if label == "A1" else 1)
    x = data.draw(st.sampled_from(g.vertices))
    y = data.draw(st.sampled_from(g.vertices))
    F, G = bs.bm_build(g, x), bs.bm_build(g, y)
    assert hs.hom_space(F, G).dimension == hs.degree_zero_dim(hs.hom_grk_formula(F, G), g.nvars)


# -- stability --------------------------------------------------------------------------

def test_scan_windows_descend():
    wins = hs.scan_windows(A1, al.base_alcove(A1), 4)
    assert [len(w) for w in wins] == [1, 2, 3, 4, 5]
    assert all(set(a) <= set(b) for a, b in zip(wins, wins[1:]))


def test_stability_scan_for_the_base_alcove():
    r = hs.stability_scan(A1, al.base_alcove(A1), 6)
    assert r.dimensions == [1] * 7
    assert r.surjective == [True] * 6
    assert r.verdict == "stable" and r.stable_from == 0
    assert r.as_rows()[0] == (0, 1, 1, True)
    assert r.as_rows()[-1] == (6, 7, 1, None)


def test_stability_scan_between_neighbours():
    # oracle: the formula on the largest window
    r = hs.stability_scan(A1, a1(1), 6, top_g=a1(0))
    assert r.dimensions == [1] * 7 and all(r.surjective)
    r = hs.stability_scan(A1, a1(0), 6, top_g=a1(1))
    assert r.dimensions == [0] * 7 and all(r.surjective)
    assert r.verdict == "stable"


def test_short_scan_is_inconclusive():
    r = hs.stability_scan(A1, al.base_alcove(A1), 1, tail=2)
    assert r.verdict == "inconclusive"


def test_restriction_rank_never_exceeds_the_smaller_space():
    g = mg.build_alcove_graph(A1, ("interval", a1(-4), a1(1)))
    F = bs.bm_build(g, a1(1))
    H = hs.hom_space(F, F)
    for k in range(1, 5):
        sub = [A for A in g.vertices if al.length(A) >= al.length(a1(1)) - k]
        small = hs.hom_space(bs.restrict_sheaf(F, sub), bs.restrict_sheaf(F, sub))
        assert hs.restriction_rank(H, sub) == small.dimension


# -- finiteness bounds --------------------------------------------------------------------

def test_n1_constant():
    # A1: rho = alpha / 2 and alpha^vee = 2, so <rho, alpha^vee> = 1
    assert hs.n1_constant(A1) == 1
    # A2: the highest coroot pairs with rho to 2
    assert hs.n1_constant(A2) == 2


def test_bounds_for_the_base_alcove():
    g = mg.build_alcove_graph(A1, ("interval", a1(-7), a1(0)))
    assert len(g.vertices) == 8
    out = hs.finiteness_bounds(bs.bm_build(g, a1(0)))
    assert out["violations"] == []
    assert (out["N1"], out["C"], out["shift"]) == (1, 1, -1)
    assert out["C2"] == out["shift"] + out["C"] + 2 * al.length(al.base_alcove(A1))


def test_bounds_in_a2():
    top = al.a_plus(A2, (1, 0))
    g = mg.build_alcove_graph(A2, ("lower", top, al.length(top) - 3))
    out = hs.finiteness_bounds(bs.bm_build(g, top))
    assert out["violations"] == []
    assert out["C1"] == (Fraction(1, 2) - 1) * al.length(top)


def test_bounds_on_a_skyscraper():
    g = mg.build_alcove_graph(A1, [a1(0)])
    assert hs.finiteness_bounds(bs.skyscraper(g, a1(0)))["violations"] == []


def test_bounds_reject_a_top_not_of_the_form_a_lambda():
    top = al.right_act(al.base_alcove(A2), 1)      # a finite Weyl image of the base alcove
    g = mg.build_alcove_graph(A2, ("lower", top, al.length(top) - 1))
    with pytest.raises(bs.SheafError):
        hs.finiteness_bounds(bs.bm_build(g, top))
