import numpy as np
import pytest

from univhub.fock import (
    TruncatedFock,
    fock_model,
    fock_projectors,
    generic_residual,
    noncyclicity_demo,
    noncyclicity_table,
    normalized_traces,
    verify_fock,
)
from univhub.graded import GradingError, residual_value
from univhub.xx import XXModel, r_xx


def test_projectors_even_odd():
    pi, pibar, C = fock_projectors(3)
    assert np.array_equal(np.diag(C), [1, -1, 1, -1])
    assert np.array_equal(pi + pibar, np.eye(4))


def test_small_modes_bounds():
    with pytest.raises(GradingError, match="ell"):
        fock_projectors(3, "small-modes", 4)
    with pytest.raises(GradingError, match="kind"):
        fock_projectors(3, "odd")
    with pytest.raises(GradingError):
        TruncatedFock(-1)


@pytest.mark.parametrize("Nmax", [1, 3, 5])
@pytest.mark.parametrize("kind,ell", [("even-odd", None), ("small-modes", 0), ("small-modes", 1)])
def test_suite(Nmax, kind, ell):
    if ell is not None and ell > Nmax:
        pytest.skip()
    assert verify_fock(Nmax, kind, ell, n_samples=8).passed
    assert generic_residual(Nmax, kind, ell) < 1e-14


def test_nmax_one_is_gl2():
    assert residual_value(r_xx(fock_model(1), 0.6), r_xx(XXModel.gl(2), 0.6)) < 1e-15


def test_small_modes_is_gl4():
    assert fock_model(3, "small-modes", 0) == XXModel.gl(4, 0, (1,))


@pytest.mark.parametrize("Nmax", [1, 2, 3, 4, 5])
def test_noncyclic(Nmax):
    res = noncyclicity_demo(Nmax)
    assert res["difference"] > 0
    assert np.isclose(res["difference"], np.sqrt(2 * Nmax))
    assert res["full_trace_difference"] == 0.0


def test_noncyclic_table():
    assert [r["Nmax"] for r in noncyclicity_table((1, 2))] == [1, 2]
    with pytest.raises(GradingError):
        noncyclicity_demo(2, traced=3)


def test_normalized_trace_limits():
    big = normalized_traces(10**6)
    assert abs(big["identity"] - 1) < 1e-5
    assert abs(big["even"] - 0.5) < 1e-5
    assert big["small"] < 1e-5
