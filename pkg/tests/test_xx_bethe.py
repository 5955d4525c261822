import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from univhub.graded import GradedSpace, GradingError
from univhub.xx import ZOO, XXModel
from univhub.xx_bethe import (
    ExcitationSpec,
    bae_vs_ed,
    cyclic_phases,
    lowered_vacuum,
    phi1_report,
    phi2_component_report,
    phi2_swap_residual,
    product_formula_check,
    pseudo_vacuum_check,
    small_chain,
    smatrix_identities,
    smatrix_xx,
    solve_bae_xx,
    vacuum_state,
)

momenta = st.floats(-math.pi, math.pi, allow_nan=False)


def test_small_chain_gl2():
    sc = small_chain(XXModel.gl(2))
    assert sc.labels == (2,)
    assert np.allclose(smatrix_xx(sc, 0.3, 1.1), [[-1]])


def test_small_chain_needs_vacuum():
    with pytest.raises(GradingError):
        small_chain(XXModel(GradedSpace.gl(2), ()))
    with pytest.raises(GradingError):
        small_chain(XXModel.gl(2), vacuum=2)


@pytest.mark.parametrize("model", ZOO, ids=lambda m: m.label())
def test_pseudo_vacuum(model):
    out = pseudo_vacuum_check(model, 3)
    assert out["shift_leaks"] < 1e-12
    assert out["transfer"] < 1e-12
    assert out["h_vacuum"] < 1e-12
    assert out["t0_vacuum"] < 1e-12
    assert out["charge"] == pytest.approx(3)


def test_other_reference_state():
    # Omega_2 = (M_21)^L Omega_1 up to L!
    m = XXModel.gl(3, 0, (1, 2))
    L = 2
    v = lowered_vacuum(m, L, 2)
    target = np.zeros(m.s**L)
    target[1 * 3 + 1] = 1.0
    assert np.allclose(v, math.factorial(L) * target)


def test_smatrix_unitarity_gl21(rng):
    m = XXModel.gl(2, 1, (1,))
    pts = rng.uniform(-np.pi, np.pi, size=(10, 3))
    res = smatrix_identities(m, pts)
    assert res["unitarity"] <= 1e-13
    assert max(res.values()) <= 1e-12


@given(momenta, momenta)
def test_phi2_swap(p1, p2):
    assert phi2_swap_residual(XXModel.gl(2, 1, (1,)), 4, p1, p2) < 1e-10


def test_one_barred_excitation():
    rep = phi1_report(XXModel.gl(2), 4, 2, np.pi / 2)
    assert rep.passed(1e-12)
    assert rep.energies == [pytest.approx(0.0, abs=1e-15)]


def test_one_unbarred_excitation():
    rep = phi1_report(XXModel.gl(3, 0, (1, 2)), 4, 2, np.pi / 2)
    assert rep.passed(1e-12)
    assert rep.energies == [0.0]


def test_mixed_pair_condition():
    # (unbarred, barred) component: eigenvector iff e^{ip1(L-1)} = 1 and e^{i(p1+p2)L} = 1
    m = XXModel.gl(2, 1, (1, 2))
    L = 4
    sc = small_chain(m)
    i, j = 0, sc.labels.index(3)
    p1 = 2 * np.pi / 3
    p2 = 2 * np.pi * 1 / L - p1
    assert phi2_component_report(m, L, p1, p2, i, j).passed(1e-10)
    bad = phi2_component_report(m, L, 0.4, 2 * np.pi / L - 0.4, i, j)
    assert bad.residual_h > 1e-3


def test_single_barred_roots():
    roots = solve_bae_xx(XXModel.gl(2), ExcitationSpec(4, 0, 1))
    got = sorted({round(r.qbar[0], 12) for r in roots})
    assert np.allclose(got, [-np.pi / 2, 0, np.pi / 2, np.pi])


def test_single_unbarred_roots():
    roots = solve_bae_xx(XXModel.gl(3, 0, (1, 2)), ExcitationSpec(4, 1, 0))
    got = sorted({round(r.q[0], 12) for r in roots})
    assert np.allclose(got, [-np.pi / 2, 0, np.pi / 2, np.pi])


@pytest.mark.parametrize("model", ZOO[:4], ids=lambda m: m.label())
def test_total_momentum_quantised(model):
    L = 4
    sc = small_chain(model)
    for Mu in range(0, min(2, len(sc.unbarred)) + 1):
        for Mb in range(0, 3 - Mu):
            for r in solve_bae_xx(model, ExcitationSpec(L, Mu, Mb)):
                assert max(r.residuals(L), default=0.0) < 1e-12
                assert abs(np.exp(1j * L * r.momentum) - 1) < 1e-12


def test_product_formula_m2_reduces():
    m = XXModel.gl(2, 1, (1,))
    assert product_formula_check(m, [0.3, -1.2])["max_entry_difference"] < 1e-12


@given(st.lists(momenta, min_size=3, max_size=3))
def test_product_formula_m3(p):
    assert product_formula_check(XXModel.gl(2, 1, (1,)), p)["max_entry_difference"] < 1e-12


def test_cyclic_phases_all_barred():
    # all-barred even labels: (omega_3)^k
    ph = cyclic_phases(GradedSpace.gl(2), 3)
    w = np.exp(2j * np.pi / 3)
    assert all(any(abs(z - w**k) < 1e-9 for z in ph) for k in range(3))
    assert len(ph) == 3


def test_bae_vs_ed_gl2():
    for L in (4, 6):
        assert bae_vs_ed(XXModel.gl(2), L, exact=True)["pass"]


def test_bae_vs_ed_graded():
    res = bae_vs_ed(XXModel.gl(1, 1), 4)
    assert res["pass"]
    assert res["max_distance"] < 1e-10


def test_vacuum_sector_energy_zero():
    from univhub.xx import hamiltonian_xx

    m = XXModel.gl(2)
    v = vacuum_state(m, 4)
    assert np.abs(hamiltonian_xx(m, 4) @ v).max() == 0
