"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from pretzel_chi.pretzel_core import determinant


def params(min_size=3, max_size=5, bound=6):
    entry = st.integers(-bound, bound).filter(lambda p: p != 0)
    return st.lists(entry, min_size=min_size, max_size=max_size).map(tuple)


def nonzero_det_params(**kw):
    return params(**kw).filter(lambda p: determinant(p) != 0)
