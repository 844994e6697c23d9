from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ezreduce.chains import (
    FormalSum, ProductSimplex, TensorTerm, check_contraction, differential, product_chains,
    simplicial_chains, tensor_chains, tensor_differential,
)
from ezreduce.ez import (
    alpha_map, aw_n, aw_n_counts, aw_n_summand_count, aw_pair, cyclic_T, cyclic_t, degenerate_positions,
    eml_pair, enumerate_shuffles, esa, ez_contraction, ez_n_contraction, naive_dnr, shi_pair, twist_powers,
)
from ezreduce.simplicial import Simplex, SimplicialComplex


def S(*v):
    return Simplex(v)


@pytest.mark.parametrize("a, b", [(0, 0), (1, 1), (2, 1), (2, 3), (3, 3)])
def test_shuffle_count_and_partition(a, b):
    shs = enumerate_shuffles(a, b)
    assert len(shs) == comb(a + b, a)
    for sh in shs:
        assert sorted(sh.alpha + sh.beta) == list(range(a + b))
        assert sh.signature == sum(x - i for i, x in enumerate(sh.alpha))


def test_degenerate_positions():
    assert degenerate_positions(range(3), [0]) == (0, 0, 1, 2)
    assert degenerate_positions(range(2), [1, 2]) == (0, 1, 1, 1)


def test_aw_eml_small():
    p = 3
    x, y = S(0, 1), S(2, 3)
    assert aw_pair(x, y, p) == FormalSum(p, [(TensorTerm((S(0), S(2, 3))), 1), (TensorTerm((S(0, 1), S(3))), 1)])
    e = eml_pair(x, y, p)
    assert len(e) == 2
    assert e.coefficient(ProductSimplex((S(0, 1, 1), S(2, 2, 3)))) == 1
    assert e.coefficient(ProductSimplex((S(0, 0, 1), S(2, 3, 3)))) == p - 1
    assert shi_pair(S(0), S(1), p) == 0


@pytest.fixture(scope="module")
def edge():
    return simplicial_chains(SimplicialComplex.from_simplices("edge", [(0, 1)]))


@pytest.mark.parametrize("p", [2, 3])
def test_ez_contraction_axioms(circle_chains, p):
    rep = check_contraction(ez_contraction(circle_chains, circle_chains), p, 3)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("p", [2, 3])
def test_ez_three_fold_axioms(edge, p):
    r = ez_n_contraction(product_chains(edge, edge, edge), tensor_chains(edge, edge, edge))
    rep = check_contraction(r, p, 2)
    assert rep.ok, rep.failures


def test_cyclic_operators():
    p = 3
    x = ProductSimplex((S(0, 1), S(1, 2), S(2, 3)))
    c = FormalSum.basis(x, p)
    assert cyclic_t(1, c) == FormalSum.basis(ProductSimplex((S(1, 2), S(2, 3), S(0, 1))), p)
    assert cyclic_t(3, c) == c
    t = FormalSum.basis(TensorTerm((S(0, 1), S(2, 3), S(4))), p)
    # moving a 1-dimensional factor past degree 1 gives a sign
    assert cyclic_T(1, t) == FormalSum.basis(TensorTerm((S(2, 3), S(4), S(0, 1))), p, -1)
    assert cyclic_T(3, t) == t


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=4))
def test_T_is_a_chain_map(dims):
    p = 5
    t = FormalSum.basis(TensorTerm(Simplex(range(10 * i, 10 * i + d + 1)) for i, d in enumerate(dims)), p)
    assert tensor_differential(cyclic_T(1, t)) == cyclic_T(1, tensor_differential(t))
    assert cyclic_T(len(dims), t) == t


def test_twist_powers():
    assert twist_powers(3, 2, 1) == (1,)
    assert twist_powers(3, 2, 2) == (1, 2)
    assert twist_powers(3, 1, 1, "pinned") == (1, 2)
    with pytest.raises(ValueError):
        twist_powers(3, 1, 1, "other")


def test_esa_range():
    c = FormalSum.basis(ProductSimplex((S(0, 1),) * 3), 2)
    with pytest.raises(ValueError):
        esa(3, 2, c)


@pytest.mark.parametrize("n, m", [(2, 0), (2, 3), (3, 2), (4, 3), (5, 2)])
def test_aw_n_counts(n, m):
    summands, faces = aw_n_counts(n, m)
    assert summands == aw_n_summand_count(n, m) == comb(m + n - 1, n - 1)
    assert faces == (n - 1) * m * summands


def _recurrence_residual(n, r, x, p):
    c = FormalSum.basis(x, p)
    D = naive_dnr(n, r, c)
    lhs = tensor_differential(D) + naive_dnr(n, r, differential(c)).scale(-1 if r % 2 == 0 else 1)
    rhs = alpha_map(n, r, naive_dnr(n, r - 1, c))
    return lhs - rhs


@pytest.mark.parametrize("n, r, m", [(2, 1, 2), (2, 2, 3), (2, 3, 3), (3, 1, 2), (3, 2, 3), (4, 1, 2)])
def test_naive_recurrence(n, r, m):
    assert _recurrence_residual(n, r, Simplex(range(m + 1)), 3) == 0


@pytest.mark.parametrize("n, r, m", [(2, 1, 3), (3, 2, 2)])
def test_naive_dnr_degree(n, r, m):
    D = naive_dnr(n, r, FormalSum.basis(Simplex(range(m + 1)), 3))
    assert D and all(t.degree == m + r for t in D.terms)


def test_aw_n_is_chain_map():
    p = 3
    x = ProductSimplex((S(0, 1, 2), S(3, 4, 5), S(6, 7, 8)))
    c = FormalSum.basis(x, p)
    dx = FormalSum(p)
    for i in range(3):
        dx.add_term(x.face(i), -1 if i & 1 else 1)
    assert tensor_differential(aw_n(c)) == aw_n(dx)
