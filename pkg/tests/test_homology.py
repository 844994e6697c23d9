import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ezreduce.chains import FormalSum, check_contraction, coboundary
from ezreduce.homology import boundary_matrix, compute_contraction, inverse, nullspace, rank, rref

EXPECTED = {
    ("circle", 2): (1, 1), ("circle", 3): (1, 1),
    ("sphere", 2): (1, 0, 1), ("sphere", 3): (1, 0, 1),
    ("s3", 2): (1, 0, 0, 1), ("s3", 3): (1, 0, 0, 1),
    ("rp2", 2): (1, 1, 1), ("rp2", 3): (1, 0, 0),
    ("torus", 2): (1, 2, 1), ("torus", 3): (1, 2, 1),
}


@pytest.mark.parametrize("name, p", sorted(EXPECTED))
def test_ranks(complexes, name, p):
    assert compute_contraction(complexes[name], p).ranks == EXPECTED[(name, p)]


@pytest.mark.parametrize("name, p", sorted(EXPECTED))
def test_contraction_axioms(complexes, name, p):
    H = compute_contraction(complexes[name], p)
    rep = check_contraction(H.contraction, p, complexes[name].dim)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("name, p", sorted(EXPECTED))
def test_cohomology_basis_is_dual(complexes, name, p):
    K = complexes[name]
    H = compute_contraction(K, p)
    for q in range(K.dim + 1):
        cocycles = H.cohomology_basis(q)
        for a, c in enumerate(cocycles):
            assert coboundary(c, K).is_zero()
            assert H.class_of(c) == tuple(int(a == b) for b in range(H.rank(q)))


def test_generators_are_cycles(complexes):
    H = compute_contraction(complexes["torus"], 2)
    for q in range(3):
        for z in H.homology_basis(q):
            assert H.source.d(z) == 0


def test_boundary_squares_to_zero(complexes):
    for K in complexes.values():
        for q in range(2, K.dim + 1):
            assert not (boundary_matrix(K, q - 1, 3) @ boundary_matrix(K, q, 3) % 3).any()


def test_prime_validation(complexes):
    with pytest.raises(ValueError):
        compute_contraction(complexes["circle"], 4)


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices, st.sampled_from([2, 3, 5]))
def test_rank_nullity(rows, p):
    A = np.array(rows) % p
    N = nullspace(A, p)
    assert rank(A, p) + N.shape[1] == A.shape[1]
    assert not (A @ N % p).any()
    R, piv = rref(A, p)
    assert all(R[i, c] == 1 for i, c in enumerate(piv))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)), st.sampled_from([3, 7]))
def test_inverse(rows, p):
    A = np.array(rows) % p
    if rank(A, p) < A.shape[0]:
        with pytest.raises(ValueError):
            inverse(A, p)
    else:
        assert ((inverse(A, p) @ A) % p == np.eye(A.shape[0], dtype=int)).all()
