import numpy as np
import pytest
from hypothesis import given, strategies as st

from univhub.graded import (
    ChainOperator,
    GradedSpace,
    GradingError,
    embed,
    embed_factors,
    factor_permutation,
    graded_kron,
    graded_permutation,
    partial_supertrace_first_site,
    residual,
    super_transpose,
    supertrace,
)

grades = st.lists(st.integers(0, 1), min_size=1, max_size=3).map(lambda g: GradedSpace(tuple(g)))


def random_op(rng, space, L=1):
    side = space.dim**L
    return ChainOperator((space,) * L, rng.normal(size=(side, side)) + 1j * rng.normal(size=(side, side)))


def test_space_validation():
    with pytest.raises(GradingError):
        GradedSpace(())
    with pytest.raises(GradingError):
        GradedSpace((0, 2))
    with pytest.raises(GradingError):
        GradedSpace.gl(0, 0)
    assert GradedSpace.gl(2, 1).grades == (0, 0, 1)


def test_fused_grades():
    f = GradedSpace.gl(1, 1) * GradedSpace.gl(1, 1)
    assert f.grades == (0, 1, 1, 0)


def test_chain_operator_shape_checked():
    with pytest.raises(GradingError):
        ChainOperator((GradedSpace.gl(2),), np.eye(3))
    with pytest.raises(GradingError):
        ChainOperator((GradedSpace.gl(1),), np.array([[np.nan]]))


def test_odd_swap_sign():
    V = GradedSpace.gl(1, 1)
    P = graded_permutation(V).matrix
    # odd (x) odd picks up a minus sign
    assert P[3, 3] == -1
    assert np.allclose(P @ P, np.eye(4))


@given(grades, grades)
def test_permutation_is_signed_involution(V, W):
    P = factor_permutation([V, W], [1, 0])
    Q = factor_permutation([W, V], [1, 0])
    assert np.allclose(Q @ P, np.eye(V.dim * W.dim))
    assert np.allclose(np.abs(P).sum(axis=0), 1)


@given(grades, st.integers(0, 2**31 - 1))
def test_kron_multiplicative(V, seed):
    # (A (x) B)(C (x) D) = (-1)^{[B][C]} AC (x) BD for homogeneous operators
    rng = np.random.default_rng(seed)
    par = V.parity
    even = (par[:, None] + par[None, :]) % 2 == 0
    A, B, C, D = (random_op(rng, V) for _ in range(4))
    A, D = (ChainOperator(X.sites, X.matrix * even) for X in (A, D))
    B, C = (ChainOperator(X.sites, X.matrix * ~even) for X in (B, C))
    lhs = graded_kron(A, B).matrix @ graded_kron(C, D).matrix
    rhs = -graded_kron(ChainOperator(A.sites, A.matrix @ C.matrix), ChainOperator(B.sites, B.matrix @ D.matrix)).matrix
    assert np.allclose(lhs, rhs)


@given(grades, st.integers(0, 2**31 - 1))
def test_supertrace_cyclic_on_even(V, seed):
    rng = np.random.default_rng(seed)
    par = V.parity
    even = (par[:, None] + par[None, :]) % 2 == 0
    A = random_op(rng, V).matrix * even
    B = random_op(rng, V).matrix * even
    op = lambda M: ChainOperator((V,), M)
    assert abs(supertrace(op(A @ B)) - supertrace(op(B @ A))) < 1e-10


@given(grades, st.integers(0, 2**31 - 1))
def test_partial_supertrace_of_product(V, seed):
    rng = np.random.default_rng(seed)
    A, B = random_op(rng, V), random_op(rng, V)
    par = V.parity
    A = ChainOperator(A.sites, A.matrix * ((par[:, None] + par[None, :]) % 2 == 0))
    red = partial_supertrace_first_site(graded_kron(A, B)).matrix
    assert np.allclose(red, supertrace(A) * B.matrix)


def test_super_transpose_twice():
    rng = np.random.default_rng(3)
    A = random_op(rng, GradedSpace.gl(1, 2))
    # (A^st)^st = A with the sign on the odd-odd off-diagonal blocks
    back = super_transpose(super_transpose(A)).matrix
    par = A.parity
    sign = np.where((par[:, None] + par[None, :]) % 2, -1, 1)
    assert np.allclose(back, sign * A.matrix)


def test_embed_wraps_around():
    V = GradedSpace.gl(1, 1)
    P = graded_permutation(V)
    wrapped = embed(P, 3, 3).matrix
    direct = embed_factors(P.matrix, [V] * 3, [2, 0])
    assert np.allclose(wrapped, direct)


def test_embed_matches_graded_kron():
    rng = np.random.default_rng(1)
    V = GradedSpace.gl(1, 1)
    A = random_op(rng, V)
    I = ChainOperator.identity([V])
    assert np.allclose(embed(A, 2, 3).matrix, graded_kron(graded_kron(I, A), I).matrix)


def test_residual_normalisation():
    r = residual(np.eye(4), np.zeros((4, 4)), tol=1.0)
    assert r.value == pytest.approx(0.5)
    assert r.passed
