from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from alcovebm.rootdata import (AffineRoot, RootDatumError, WPrime, act_ext, affine_coroot,
                               affine_coweight, affine_weight, get_datum, pairing,
                               wp_reflection, wp_translation)

from strategies import TYPES, datum_and, wprime

CARTAN = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -2], [-1, 2]],
}


@pytest.mark.parametrize("label", TYPES)
def test_cartan_matrix_is_reproduced(label):
    d = get_datum(label)
    got = [[d.pairing(a, c) for c in d.simple_coroots] for a in d.simple_roots]
    want = CARTAN[label]
    # B2 may be stored with either root long; compare up to transpose
    assert got == want or got == [list(r) for r in zip(*want)]


@pytest.mark.parametrize("label", TYPES)
def test_rho_check_is_integral_and_form_is_even(label):
    d = get_datum(label)
    assert all(isinstance(x, int) for x in d.rho_check)
    for c in d.positive_coroots:
        assert d.form_value(c, c) % 2 == 0
    # (lam, lam) is even on the coroot lattice: even diagonal, integral Gram matrix
    sc = d.simple_coroots
    for a in sc:
        assert d.form_value(a, a) % 2 == 0
        for b in sc:
            assert d.form_value(a, b).denominator == 1


@pytest.mark.parametrize("label", TYPES)
def test_form_is_weyl_invariant(label):
    d = get_datum(label)
    basis = [tuple(int(i == j) for j in range(d.rank)) for i in range(d.rank)]
    for w in range(d.weyl.order):
        for a in basis:
            for b in basis:
                assert d.form_value(d.weyl.act_coweight(w, a), d.weyl.act_coweight(w, b)) == \
                    d.form_value(a, b)


@pytest.mark.parametrize("label", TYPES)
def test_root_pairing_through_the_form(label):
    d = get_datum(label)
    nus = [(1,) * d.rank, tuple(range(1, d.rank + 1)), tuple(-x for x in range(d.rank))]
    for beta in d.positive_roots:
        c = d.coroot_of(beta)
        for nu in nus:
            assert d.pairing(beta, nu) == 2 * d.form_value(c, nu) / d.form_value(c, c)


def test_pairing_examples():
    d = get_datum("A1")
    a = affine_weight(d, d.simple_roots[0])
    ac = affine_coweight(d, d.simple_coroots[0])
    assert pairing(a, ac) == 2
    d2 = get_datum("A2")
    assert pairing(affine_weight(d2, d2.simple_roots[0]), affine_coweight(d2, d2.simple_coroots[1])) == -1


def test_extended_pairing_on_delta_coordinates():
    d = get_datum("A1")
    # <(0,1,0),(0,0,1)> with the pairing <nu,mu> + r r' + s s' used throughout
    assert pairing(affine_weight(d, (0,), 1, 0), affine_coweight(d, (0,), 1, 0)) == 1
    assert pairing(affine_weight(d, (0,), 0, 1), affine_coweight(d, (0,), 0, 1)) == 1


def test_pairing_rejects_mixed_data():
    with pytest.raises(RootDatumError):
        pairing(affine_weight(get_datum("A1"), (1,)), affine_coweight(get_datum("A2"), (1, 0)))


def test_affine_coroot_examples():
    d = get_datum("A1")
    c0 = affine_coroot(d, AffineRoot("A1", (1,), 0))
    assert c0.as_tuple() == (2, 0, 0)
    c1 = affine_coroot(d, AffineRoot("A1", (1,), 1))
    assert c1.as_tuple() == (2, 0, 1)


@given(datum_and(lambda d: st.tuples(st.sampled_from(d.positive_roots), st.integers(-4, 4))))
def test_affine_root_pairs_to_two_with_its_coroot(arg):
    d, (beta, n) = arg
    ar = AffineRoot(d.label, beta, n)
    assert pairing(ar.weight(), affine_coroot(d, ar)) == 2


def test_act_ext_identity_and_translation():
    d = get_datum("A1")
    x = affine_weight(d, (1,), 0, 0)
    assert act_ext(d, WPrime(0, (0,)), x) == x
    y = act_ext(d, wp_translation(d, d.simple_coroots[0]), x)
    assert y.finite_part == x.finite_part
    assert y.delta_coord == x.delta_coord - 2


@given(datum_and(lambda d: st.tuples(st.sampled_from(d.positive_roots), st.integers(-3, 3),
                                     st.lists(st.integers(-3, 3), min_size=d.rank + 2,
                                              max_size=d.rank + 2))))
def test_affine_reflection_formula_on_coweights(arg):
    d, (beta, n, coords) = arg
    ar = AffineRoot(d.label, beta, n)
    nu = affine_coweight(d, coords[:d.rank], coords[d.rank], coords[d.rank + 1])
    ac = affine_coroot(d, ar)
    k = pairing(ar.weight(), nu)
    want = tuple(a - k * b for a, b in zip(nu.as_tuple(), ac.as_tuple()))
    s = wp_reflection(d, beta, n)
    assert act_ext(d, s, nu).as_tuple() == want
    assert act_ext(d, s, act_ext(d, s, nu)) == nu


def _coords(d):
    return st.lists(st.integers(-3, 3), min_size=d.rank + 2, max_size=d.rank + 2)


@given(datum_and(lambda d: st.tuples(wprime(d), _coords(d), _coords(d))))
def test_act_ext_preserves_the_pairing(arg):
    d, (g, a, b) = arg
    w = affine_weight(d, a[:d.rank], a[d.rank], a[d.rank + 1])
    c = affine_coweight(d, b[:d.rank], b[d.rank], b[d.rank + 1])
    assert pairing(act_ext(d, g, w), act_ext(d, g, c)) == pairing(w, c)


@given(datum_and(lambda d: st.tuples(wprime(d), st.sampled_from(d.positive_roots),
                                     st.integers(-4, 4))))
def test_act_ext_stabilizes_affine_roots(arg):
    d, (g, beta, n) = arg
    img = act_ext(d, g, AffineRoot(d.label, beta, n).weight())
    roots = set(d.positive_roots) | {tuple(-x for x in r) for r in d.positive_roots}
    assert tuple(int(x) for x in img.finite_part) in roots
    assert img.delta_coord.denominator == 1
    assert img.grading_coord == 0


def test_datum_json_records_the_form_normalization():
    data = get_datum("A2").to_json()
    assert data["label"] == "A2"
    assert "form_normalization" in data
    assert Fraction(data["form"][0][0]) > 0
