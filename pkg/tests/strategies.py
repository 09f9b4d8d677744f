"""Shared hypothesis strategies over the supported root data."""

from hypothesis import strategies as st

from alcovebm import alcoves as al
from alcovebm.rootdata import WPrime, get_datum

TYPES = ("A1", "A2", "B2")


def coroot_lattice_vector(d, bound=3):
    """Integer combinations of simple coroots, in coweight coordinates."""
    coeffs = st.lists(st.integers(-bound, bound), min_size=d.rank, max_size=d.rank)

    def combine(cs):
        return tuple(sum(c * sc[i] for c, sc in zip(cs, d.simple_coroots)) for i in range(d.rank))

    return coeffs.map(combine)


def coweight(d, bound=3):
    return st.lists(st.integers(-bound, bound), min_size=d.rank, max_size=d.rank).map(tuple)


def alcove(d, bound=3):
    return st.builds(lambda w, lam: al.Alcove(d, w, lam),
                     st.integers(0, d.weyl.order - 1), coroot_lattice_vector(d, bound))


def wprime(d, bound=3):
    return st.builds(WPrime, st.integers(0, d.weyl.order - 1), coweight(d, bound))


datum = st.sampled_from(TYPES).map(get_datum)


def datum_and(fn, types=TYPES):
    return st.sampled_from(types).map(get_datum).flatmap(lambda d: st.tuples(st.just(d), fn(d)))
