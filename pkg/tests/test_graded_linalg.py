from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from alcovebm import graded_linalg as gl
from alcovebm.laurent import LaurentPoly

R = gl.ring(3)
ALPHA = (2, 0, -1)      # the affine coroot label of the A1 wall k = 1


def alpha():
    return R.linear(ALPHA)


def multiplication_by_alpha():
    return gl.GradedMap(((2, None),), ((0, None),), [(alpha(),)])


def test_slice_dimensions():
    for D in range(0, 12, 2):
        assert R.dim(D) == comb(D // 2 + 2, 2) == len(R.monomials(D // 2))
        assert R.dim(D, skip=0) == D // 2 + 1 == len(R.monomials(D // 2, 0))
    assert R.dim(3) == 0 and R.dim(-2) == 0


def test_reducer_kills_alpha():
    red = gl.reducer(R, ALPHA)
    assert red(alpha()) == 0
    p = R.mono((1, 1, 0)) + R.mono((0, 0, 2))
    assert red(red(p)) == red(p)


def test_row_round_trip():
    lay = ((0, None), (2, gl.reducer(R, ALPHA)))
    vec = (R.mono((2, 0, 0)) - R.mono((0, 1, 1)), R.mono((0, 1, 0)))
    row = gl.to_row(R, lay, vec, 4)
    assert gl.from_row(R, lay, row, 4) == vec
    with pytest.raises(ValueError):
        gl.to_row(R, lay, vec, 5)


# -- kernel and image -------------------------------------------------------------

def test_kernel_of_zero_map_is_everything():
    src = ((0, None), (2, None))
    f = gl.GradedMap(src, ((0, None),), [(R.zero(),), (R.zero(),)])
    k = gl.kernel(R, f, 6)
    for D in range(0, 7):
        assert k.dim(D) == gl.layout_dim(R, src, D)


def test_image_of_multiplication_by_alpha():
    im = gl.image(R, multiplication_by_alpha(), 8)
    # oracle: multiplication by a nonzero linear form is injective, so dim = dim S_{D-2}
    assert im.dim(2) == 1
    for D in range(2, 9, 2):
        assert im.dim(D) == R.dim(D - 2)
    assert all(gl.kernel(R, multiplication_by_alpha(), 8).dim(D) == 0 for D in range(9))


linear_forms = st.lists(st.integers(-2, 2), min_size=3, max_size=3)


@st.composite
def degree_zero_maps(draw):
    nsrc = draw(st.integers(1, 3))
    ntgt = draw(st.integers(1, 2))
    src = tuple((draw(st.sampled_from([0, 2])), None) for _ in range(nsrc))
    tgt = tuple((0, None) for _ in range(ntgt))
    cols = []
    for d, _ in src:
        col = []
        for _ in tgt:
            if d == 0:
                col.append(R.const(draw(st.integers(-2, 2))))
            else:
                col.append(R.linear(draw(linear_forms)))
        cols.append(tuple(col))
    return gl.GradedMap(src, tgt, cols)


@settings(max_examples=40)
@given(degree_zero_maps())
def test_rank_nullity_per_degree(f):
    cutoff = 6
    k = gl.kernel(R, f, cutoff)
    im = gl.image(R, f, cutoff)
    for D in range(0, cutoff + 1):
        assert k.dim(D) + im.dim(D) == gl.layout_dim(R, f.source, D)


@settings(max_examples=40)
@given(degree_zero_maps())
def test_image_two_ways(f):
    # assemble the full slice matrix versus span generator multiples degree by degree
    im = gl.image(R, f, 6)
    for D in range(0, 7):
        rows = f.slice_rows(R, D)
        assert im.dim(D) == gl.rank_of(rows, gl.layout_dim(R, f.target, D))


# -- minimal generators and covers -------------------------------------------------

def free_module(shifts, cutoff):
    lay = tuple((d, None) for d in shifts)
    gens = []
    for i, d in enumerate(shifts):
        gens.append((d, tuple(R.one() if j == i else R.zero() for j in range(len(shifts)))))
    return gl.submodule_from_generators(R, lay, gens, cutoff)


def test_free_module_has_one_generator():
    gens = gl.min_generators(free_module([0], 8))
    assert [d for d, _ in gens] == [0]


def test_principal_ideal_generated_in_degree_two():
    gens = gl.min_generators(gl.image(R, multiplication_by_alpha(), 8))
    assert [d for d, _ in gens] == [2]


def test_zero_module_has_no_generators():
    tm = gl.TruncModule(R, ((0, None),), 6, {D: [] for D in range(7)})
    assert gl.min_generators(tm) == []
    free, f = gl.projective_cover(tm)
    assert free.shifts == [] and free.grk() == LaurentPoly()


def test_cutoff_error_near_the_top():
    tm = gl.image(R, gl.GradedMap(((6, None),), ((0, None),), [(alpha() ** 3,)]), 6)
    with pytest.raises(gl.CutoffError):
        gl.min_generators(tm)


@pytest.mark.parametrize("shifts", [[0], [0, 2], [2, 2, 4]])
def test_cutoff_independence(shifts):
    lo = gl.min_generators(free_module(shifts, 8))
    hi = gl.min_generators(free_module(shifts, 12))
    assert lo == hi


def test_cover_of_quotient():
    red = gl.reducer(R, ALPHA)
    q = gl.submodule_from_generators(R, ((0, red),), [(0, (R.one(),))], 8)
    free, f = gl.projective_cover(q)
    assert free.grk() == LaurentPoly.const(1)


def test_cover_of_principal_ideal():
    free, f = gl.projective_cover(gl.image(R, multiplication_by_alpha(), 8))
    # the generator sits in degree 2, so the cover is S(-2) with graded rank v^-2
    assert free.shifts == [2]
    assert free.grk() == LaurentPoly.monomial(-2)
    im = gl.image(R, f, 8)
    assert all(im.dim(D) == gl.image(R, multiplication_by_alpha(), 8).dim(D) for D in range(9))


def test_is_free_on():
    tm = free_module([0, 2], 8)
    assert gl.is_free_on(tm, gl.min_generators(tm))
    red = gl.reducer(R, ALPHA)
    q = gl.submodule_from_generators(R, ((0, red),), [(0, (R.one(),))], 8)
    assert not gl.is_free_on(q, gl.min_generators(q))


# -- graded rank --------------------------------------------------------------------

def test_grk_definition_and_shift():
    M = gl.GradedFree([0, -2])          # S(0) + S(2)
    assert gl.grk(M) == LaurentPoly.parse("1 + v^2")
    assert gl.grk(M.shifted(1)) == LaurentPoly.monomial(1) * gl.grk(M)
    assert gl.grk(M).bar() == LaurentPoly.parse("1 + v^-2")


def test_grk_requires_certificate():
    tm = free_module([0], 4)
    with pytest.raises(ValueError):
        gl.grk(tm)
    tm.free_certificate = [0, 2]
    assert gl.grk(tm) == LaurentPoly.parse("1 + v^-2")
    with pytest.raises(TypeError):
        gl.grk(3)
