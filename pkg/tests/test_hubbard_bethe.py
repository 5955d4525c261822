import numpy as np
import pytest
from hypothesis import given, strategies as st

from univhub.graded import GradingError
from univhub.hubbard import HubbardModel, hamiltonian_hubbard, hubbard_zoo
from univhub.hubbard_bethe import (
    HubbardExcitation,
    amplitudes,
    bae_unbarred,
    bae_unbarred_residual,
    bae_unbarred_via_xx,
    bar_sector_obstruction,
    excitations,
    heis_vs_xxx,
    one_excitation_hubbard,
    smatrix_checks,
    smatrix_hubbard,
    small_perm,
    solve_two_excitation,
    two_excitation_hubbard,
    vacuum_sector_report,
    xxx_ybe_residual,
)
from univhub.xx import XXModel

moms = st.floats(-3.1, 3.1, allow_nan=False)
MIXED = HubbardModel(XXModel.gl(2, 1, (1, 2)), XXModel.gl(3, 0, (1, 2)), 1.0)


def test_excitation_order():
    ex = excitations(MIXED)
    assert [e.kind for e in ex] == ["unbarred-up", "barred-up", "unbarred-down", "barred-down"]
    assert [e.index for e in ex] == [2, 3, 2, 3]


@given(moms, moms, st.sampled_from([0.5, 2.0, 10.0]))
def test_transmission_minus_reflection(p1, p2, U):
    T, R = amplitudes(p1, p2, U)
    assert abs(T - R - 1) < 1e-12


def test_equal_momenta():
    T, R = amplitudes(0.7, 0.7, 2.0)
    assert T == 0 and R == -1
    m = HubbardModel.standard(2.0)
    S = smatrix_hubbard(m, 0.7, 0.7).total
    assert np.allclose(S, -small_perm(m))


@pytest.mark.parametrize("idx", range(4))
def test_smatrix_structure(idx):
    m = hubbard_zoo(2.0)[idx]
    res = smatrix_checks(m, 0.4, -1.1)
    assert max(res.values()) < 1e-12


def test_standard_matches_yang():
    assert xxx_ybe_residual(0.3, -0.2, 0.9, 2.0) < 1e-14
    for p1, p2 in [(0.4, -1.1), (2.0, 0.3)]:
        assert heis_vs_xxx(p1, p2, 2.0) < 1e-14


def test_barred_obstruction():
    g3 = XXModel.gl(3, 0, (1,))
    res = bar_sector_obstruction(HubbardModel(g3, g3, 2.0), 0.4, -1.1)
    assert res["obstructed"] and res["max_difference"] >= 0.1
    assert res["sbar_restriction"] < 1e-14
    assert res["sbar_pp_plus_P"] < 1e-14


def test_obstruction_needs_both_spins():
    m = HubbardModel(XXModel.gl(2, 0, (1, 2)), XXModel.gl(2), 1.0)
    with pytest.raises(GradingError, match="both spins"):
        bar_sector_obstruction(m, 0.1, 0.2)


@pytest.mark.parametrize("idx", range(4))
def test_vacuum_eigenvalue(idx):
    m = hubbard_zoo(1.5)[idx]
    L = 3 if m.site.dim <= 4 else 2
    rep = vacuum_sector_report(m, L, 0.37)
    assert rep["eigen_residual"] < 1e-12
    assert rep["energy_residual"] < 1e-12


def test_factorized_eigenvalue_differs():
    rep = vacuum_sector_report(hubbard_zoo(1.5)[0], 3, 0.37)
    assert rep["factorized_residual"] > 0.1


def test_vacuum_sector_with_unbarred():
    rep = vacuum_sector_report(MIXED, 2, 0.37, up=((2, np.pi),), down=((2, 0.0),))
    assert rep["eigen_residual"] < 1e-12 and rep["energy_residual"] < 1e-12
    with pytest.raises(GradingError, match="violates"):
        vacuum_sector_report(MIXED, 2, 0.37, up=((2, 0.5),))


def test_one_barred_excitation():
    m = HubbardModel.standard(2.0)
    L = 4
    ev = np.linalg.eigvalsh(hamiltonian_hubbard(m, L))
    for e in excitations(m):
        for k in range(L):
            rep = one_excitation_hubbard(m, L, e, 2 * np.pi * k / L)
            assert rep.passed(1e-12)
            assert np.isclose(rep.energy, 2 * np.cos(2 * np.pi * k / L) + 2.0 * (L - 2))
            assert np.min(np.abs(ev - rep.energy)) < 1e-9
            assert all(r < 1e-12 for _, r in rep.charges.values())


def test_unknown_label_rejected():
    with pytest.raises(GradingError, match="not an excitation"):
        one_excitation_hubbard(HubbardModel.standard(1.0), 3, HubbardExcitation("up", 1, True), 0.0)


@pytest.mark.parametrize("K", [0.0, np.pi / 2, np.pi])
def test_two_excitations_in_spectrum(K):
    m = HubbardModel.standard(2.0)
    L = 4
    ev = np.linalg.eigvalsh(hamiltonian_hubbard(m, L))
    found = 0
    for sol in solve_two_excitation(m, L, [(0, 1)], K):
        try:
            rep = two_excitation_hubbard(m, L, sol, lam=0.3)
        except GradingError:  # coincident momenta give the zero vector
            continue
        found += 1
        assert rep.passed(1e-9)
        assert rep.details["t_lambda"] < 1e-9
        assert np.min(np.abs(ev - rep.energy)) < 1e-9
    assert found >= 4


@pytest.mark.parametrize("counts", [(1, 0), (2, 1), (2, 2)])
def test_unbarred_bae(counts):
    fams = bae_unbarred(MIXED, 3, *counts)
    assert bae_unbarred_residual(fams, 3) < 1e-12
    assert all(bae_unbarred_via_xx(MIXED, 3, *counts).values())


def test_unbarred_bae_needs_labels():
    with pytest.raises(GradingError, match="no unbarred"):
        bae_unbarred(HubbardModel.standard(1.0), 3, 1, 0)
