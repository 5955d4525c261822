import numpy as np
import pytest

from univhub.graded import GradingError
from univhub.hubbard import HubbardModel, hubbard_zoo
from univhub.strong_coupling import (
    RESOLVENT_SCALARS,
    aligned_states_residual,
    corollaries,
    decomposition_residual,
    error_ratio,
    global_scalar,
    heff2_closed,
    heff2_resolvent,
    heff4_closed,
    heff4_resolvent,
    heisenberg_block,
    odd_word_residual,
    pi0,
    closed_three_site,
    redundancy_residual,
    resolvent_terms,
    spin_heisenberg,
    strong_coupling_vs_ed,
    three_site_spectrum,
)


def test_pi0_rank():
    assert pi0(HubbardModel.standard(1.0), 4).dim == 2**4
    # gl(2|1) up has two barred flavours
    assert pi0(hubbard_zoo(1.0)[2], 3).dim == 3**3


def test_pi0_short_chain():
    with pytest.raises(GradingError):
        pi0(HubbardModel.standard(1.0), 1)


@pytest.mark.parametrize("idx", range(3))
def test_structure(idx):
    m = hubbard_zoo(2.0)[idx]
    L = 3 if m.site.dim > 4 else 4
    assert redundancy_residual(m, L) == 0.0
    assert decomposition_residual(m, L) < 1e-14
    assert aligned_states_residual(m) == 0.0


def test_odd_products_vanish():
    m = HubbardModel.standard(1.0)
    assert odd_word_residual(m, 4) == 0.0
    assert max(corollaries(m, 4).values()) <= 1e-14


@pytest.mark.parametrize("idx", range(3))
def test_resolvent_scalars(idx):
    m = hubbard_zoo(3.0)[idx]
    L = 5
    if m.site.dim**L > 20000:
        pytest.skip("too large")
    terms = resolvent_terms(m, L)
    c2, d2 = global_scalar(heff2_closed(m, L), heff2_resolvent(m, L, terms))
    c4, d4 = global_scalar(heff4_closed(m, L), heff4_resolvent(m, L, terms))
    assert d2 < 1e-12 and d4 < 1e-12
    assert np.isclose(c2, RESOLVENT_SCALARS["second"])
    assert np.isclose(c4, RESOLVENT_SCALARS["fourth"])


def test_fourth_order_needs_long_chain():
    with pytest.raises(GradingError, match="L > 4"):
        heff4_closed(HubbardModel.standard(1.0), 4)


@pytest.mark.parametrize("U", [2.0, 5.0])
def test_three_site_closed(U):
    spec = three_site_spectrum(HubbardModel.standard(U))
    assert np.allclose(spec["values"], closed_three_site(U), rtol=1e-10, atol=1e-12)
    assert spec["multiplicities"] == [4, 2, 2]


def test_three_site_resolvent_normalized():
    U = 2.0
    c2, c4 = RESOLVENT_SCALARS["second"], RESOLVENT_SCALARS["fourth"]
    spec = three_site_spectrum(HubbardModel.standard(U), c2=c2, c4=c4)
    want = sorted(-0.25 * np.array([0.0, 1.0, 3 * (1 - 1 / (4 * U**2))]))
    assert np.allclose(spec["values"], want, atol=1e-12)


def test_heisenberg_fermionic():
    assert np.array_equal(heisenberg_block(HubbardModel.fermionic(1.0)), spin_heisenberg())


def test_heisenberg_standard_up_to_sign():
    B = heisenberg_block(HubbardModel.standard(1.0))
    G = np.diag([1.0, 1.0, -1.0, 1.0])
    assert np.array_equal(G @ B @ G, spin_heisenberg())
    assert np.allclose(np.linalg.eigvalsh(B), [0, 0, 0, 4])


def test_heisenberg_block_needs_single_flavours():
    with pytest.raises(GradingError):
        heisenberg_block(hubbard_zoo(1.0)[2])


def test_error_scaling_second_order():
    rows = strong_coupling_vs_ed(HubbardModel.standard(1.0), 4, [8.0, 16.0], fourth=False)
    assert 4 <= error_ratio(rows) <= 16


@pytest.mark.slow
def test_error_scaling_fourth_order():
    rows = strong_coupling_vs_ed(HubbardModel.standard(1.0), 6, [8.0, 16.0], fourth=True)
    assert 16 <= error_ratio(rows) <= 64
