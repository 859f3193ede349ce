import itertools
import random

import pytest
from hypothesis import given, strategies as st

from pretzel_chi import intmat
from pretzel_chi.lattice_embed import (
    EmbeddingMatrix,
    brute_force_embeddings,
    canonical_rows,
    donaldson_obstructed,
    find_embeddings,
    structural_check,
    verify_embedding,
)
from pretzel_chi.plumbing import build_plumbing, intersection_form, is_negative_definite, plumbing_form
from pretzel_chi.pretzel_core import determinant, reciprocal_sum


def gj_matrix(lam):
    # columns: chain, chain, leaf, center
    cols = [(1, -1, 0, 0), (-1, -1, 0, 0), (0, 0, 1, lam), (0, 1, -1, 0)]
    return tuple(tuple(c[r] for c in cols) for r in range(4))


def small_forms(max_n=5, bound=5):
    """Definite plumbing forms of rank <= max_n from links with |p| <= bound."""
    out = {}
    for m in (3, 4):
        for p in itertools.product([v for v in range(-bound, bound + 1) if v], repeat=m):
            if determinant(p) == 0 or reciprocal_sum(p) <= 0:
                continue
            Q = plumbing_form(p).Q
            if len(Q) <= max_n and max(-Q[i][i] for i in range(len(Q))) <= 8:
                out.setdefault(Q, p)
    return out


def test_rank_two_no_embedding():
    assert find_embeddings([[-2, 1], [1, -2]]).embeddings == []
    assert brute_force_embeddings([[-2, 1], [1, -2]]) == set()


def test_explicit_matrix_verifies():
    Q = plumbing_form((2, 2, -5))
    assert verify_embedding(gj_matrix(2), Q)
    assert verify_embedding(gj_matrix(-2), Q)
    assert verify_embedding(gj_matrix(3), plumbing_form((2, 2, -10)))


def test_mutation_breaks_embedding():
    Q = plumbing_form((2, 2, -5))
    base = [list(r) for r in gj_matrix(2)]
    for r, c in itertools.product(range(4), repeat=2):
        mutated = [row[:] for row in base]
        mutated[r][c] += 1
        assert not verify_embedding(mutated, Q)


def test_leaf_column_shape():
    Q = plumbing_form((2, 2, -5))
    res = find_embeddings(Q)
    assert res.embeddings
    shapes = [sorted(abs(v) for v in e.column(2) if v) for e in res]
    assert [1, 2] in shapes


def test_donaldson():
    assert not donaldson_obstructed(plumbing_form((2, 2, -5)))
    assert not donaldson_obstructed(plumbing_form((2, 2, -10)))


def test_structural_222_3():
    g = build_plumbing((2, 2, 3))
    Q = intersection_form(g)
    for e in find_embeddings(Q):
        assert structural_check(e, Q, g).k in (0, 1)


@pytest.mark.parametrize("z,k,t", [(z, k, t) for z in range(0, 4) for k in range(0, 3) for t in range(0, 5)
                                   if z + 2 * k >= 2])
def test_positive_strand_count(z, k, t):
    p = (1,) * z + (2,) * (2 * k) + (t + 1,)
    if len(p) < 3 or determinant(p) == 0:
        return
    g = build_plumbing(p)
    Q = intersection_form(g)
    for e in find_embeddings(Q):
        assert structural_check(e, Q, g).positive_count_ok(len(p))


@pytest.mark.parametrize("Q,p", list(small_forms(max_n=4, bound=4).items())[:40])
def test_agrees_with_brute_force_small(Q, p):
    fast = {e.canonical() for e in find_embeddings(Q)}
    assert fast == brute_force_embeddings(Q)


@given(st.permutations(range(4)), st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4))
def test_canonical_rows_ignores_signed_row_permutations(perm, signs):
    At = gj_matrix(2)
    moved = [tuple(signs[i] * v for v in At[perm[i]]) for i in range(4)]
    assert canonical_rows(moved) == canonical_rows(At)


def test_det_squared_is_det_q():
    rng = random.Random(7)
    forms = list(small_forms(max_n=5, bound=5).keys())
    for Q in rng.sample(forms, 30):
        for e in find_embeddings(Q):
            assert e.det() ** 2 == abs(intmat.det(Q))
