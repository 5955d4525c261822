"""Twisted XX and Hubbard models from refinements of the projector pair.

A refinement splits N into cells and its complement into cells. Each
pair of cells (a, abar) carries a nonzero complex parameter q. The
twist F_12 = 1 + sum (q - 1) pi_a (x) pi_abar is diagonal, so it
commutes with every diagonal operator and the twisted R-matrix inherits
all identities of the untwisted one except R_12 = R_21.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import chain
from .graded import GradingError, embed_factors, residual_value
from .hubbard import (
    HubbardModel,
    _coupled,
    h_of_lambda,
    on_pair,
    pair_perm,
    parity_product,
    reduced_r,
)
from .xx import (
    PropertyReport,
    XXModel,
    make_projectors,
    perm,
    r_xx,
    rmatrix_suite,
    sample_lambdas,
    sigma,
)

PHASE_TOL = 1e-12


@dataclass(frozen=True)
class Refinement:
    """Cells of N and of its complement (1-based indices) with q[a][abar]."""

    cells: tuple[tuple[int, ...], ...]
    bar_cells: tuple[tuple[int, ...], ...]
    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=complex)
        if q.shape != (len(self.cells), len(self.bar_cells)):
            raise GradingError(f"q has shape {q.shape}, expected {(len(self.cells), len(self.bar_cells))}")
        if np.any(q == 0):
            raise GradingError("twist parameters must be nonzero")
        object.__setattr__(self, "q", q)

    def check(self, model: XXModel):
        for name, cells, target in (("cells", self.cells, model.subset_N), ("bar_cells", self.bar_cells, model.complement)):
            flat = [i for c in cells for i in c]
            if any(len(c) == 0 for c in cells) or len(flat) != len(set(flat)) or sorted(flat) != list(target):
                raise GradingError(f"{name} must partition {list(target)} into disjoint nonempty cells")

    @property
    def is_phase(self) -> bool:
        return bool(np.all(np.abs(np.abs(self.q) - 1) <= PHASE_TOL))

    @classmethod
    def maximal(cls, model: XXModel, q=1.0) -> "Refinement":
        """One cell per index; ``q`` is a scalar or an r x rbar array."""
        cells = tuple((i,) for i in model.subset_N)
        bar = tuple((i,) for i in model.complement)
        qa = np.broadcast_to(np.asarray(q, dtype=complex), (len(cells), len(bar))).copy()
        return cls(cells, bar, qa)

    @classmethod
    def from_rows(cls, model: XXModel, rows, cells=None, bar_cells=None) -> "Refinement":
        """Rows (a, abar, modulus, angle) with 1-based cell numbers; unset q = 1."""
        ref = cls.maximal(model) if cells is None else cls(tuple(map(tuple, cells)), tuple(map(tuple, bar_cells)),
                                                          np.ones((len(cells), len(bar_cells))))
        q = ref.q.copy()
        for row in rows:
            if len(row) != 4:
                raise GradingError(f"twist row {row} must be (a, abar, modulus, angle)")
            a, ab, mod, ang = row
            if not (1 <= a <= q.shape[0] and 1 <= ab <= q.shape[1]):
                raise GradingError(f"twist row {row} has a cell index out of range")
            q[int(a) - 1, int(ab) - 1] = mod * np.exp(1j * ang)
        return cls(ref.cells, ref.bar_cells, q)


def _cell_proj(s: int, cell) -> np.ndarray:
    d = np.zeros(s)
    d[[i - 1 for i in cell]] = 1.0
    return np.diag(d)


def _terms(model: XXModel, ref: Refinement):
    ref.check(model)
    s = model.s
    for a, cell in enumerate(ref.cells):
        for b, bcell in enumerate(ref.bar_cells):
            yield ref.q[a, b], _cell_proj(s, cell), _cell_proj(s, bcell)


def f_matrix(model: XXModel, ref: Refinement) -> np.ndarray:
    out = np.eye(model.s**2, dtype=complex)
    for q, pa, pb in _terms(model, ref):
        out += (q - 1) * np.kron(pa, pb)
    return out


def f_inverse(model: XXModel, ref: Refinement) -> np.ndarray:
    out = np.eye(model.s**2, dtype=complex)
    for q, pa, pb in _terms(model, ref):
        out -= (q - 1) / q * np.kron(pa, pb)
    return out


def twisted_sigma(model: XXModel, ref: Refinement) -> np.ndarray:
    out = np.zeros((model.s**2,) * 2, dtype=complex)
    for q, pa, pb in _terms(model, ref):
        out += q * np.kron(pa, pb) + np.kron(pb, pa) / q
    return out


def twisted_r(model: XXModel, ref: Refinement, lam: float) -> np.ndarray:
    """F_12 R_12(lam) F_21^{-1}."""
    P = perm(model.space)
    return f_matrix(model, ref) @ r_xx(model, lam) @ P @ f_inverse(model, ref) @ P


def twisted_r_closed(model: XXModel, ref: Refinement, lam: float) -> np.ndarray:
    S = sigma(model)
    P = perm(model.space)
    eye = np.eye(S.shape[0])
    return twisted_sigma(model, ref) * np.sin(lam) + (S + (eye - S) * np.cos(lam)) @ P


def verify_twisted(model: XXModel, ref: Refinement, n_samples: int = 20, seed: int = 0,
                   tol: float = 1e-12, skip=("symmetry",)) -> PropertyReport:
    """R-matrix identities for the twisted R-matrix (symmetry skipped by default)."""
    rng = np.random.default_rng(seed)
    lambdas = sample_lambdas(rng, 3 * n_samples).reshape(n_samples, 3)
    _, _, C = make_projectors(model)
    res = rmatrix_suite(lambda x: twisted_r(model, ref, x), model.space, C, sigma(model), lambdas, tol, skip=skip)
    return PropertyReport(model.label() + " twisted", seed, list(lambdas), res)


def symmetry_residual(model: XXModel, ref: Refinement, lambdas=(0.3, -0.7, 1.1)) -> float:
    P = perm(model.space)
    return max(residual_value(twisted_r(model, ref, x), P @ twisted_r(model, ref, x) @ P) for x in lambdas)


def closed_form_residual(model: XXModel, ref: Refinement, lambdas=(0.0, 0.3, -0.7, 1.1)) -> float:
    return max(residual_value(twisted_r(model, ref, x), twisted_r_closed(model, ref, x)) for x in lambdas)


def twisted_density(model: XXModel, ref: Refinement) -> np.ndarray:
    return perm(model.space) @ twisted_sigma(model, ref)


def twisted_hamiltonian(model: XXModel, ref: Refinement, L: int, sparse: bool = False):
    """sum_j P_{j,j+1} Sigmahat_{j,j+1}, periodic."""
    if L < 2:
        raise GradingError("chains need L >= 2")
    return chain.local_sum(twisted_density(model, ref), model.space, L, 2, sparse=sparse)


def twisted_transfer(model: XXModel, ref: Refinement, lam: float, L: int) -> np.ndarray:
    R = twisted_r(model, ref, lam)
    return chain.transfer([R] * L, model.space, [model.space] * L, ordinary=model.space.is_even)


def hermiticity_residual(H) -> float:
    """||H - H^dag|| / ||H||."""
    H = H.toarray() if hasattr(H, "toarray") else np.asarray(H)
    return float(np.linalg.norm(H - H.conj().T) / max(np.linalg.norm(H), 1e-300))


def transfer_commutator(model: XXModel, ref: Refinement, L: int, lam: float = 0.3, mu: float = -0.8) -> float:
    a = twisted_transfer(model, ref, lam, L)
    b = twisted_transfer(model, ref, mu, L)
    return float(np.abs(a @ b - b @ a).max())


# --------------------------------------------------------------------------
# Hubbard


def _pair_twist(model: HubbardModel, refs, inverse: bool = False) -> np.ndarray:
    """F_up F_down (or the inverse) on the four factors (up1, down1, up2, down2)."""
    fn = f_inverse if inverse else f_matrix
    out = None
    for spin, xxm, ref in (("up", model.up, refs[0]), ("down", model.down, refs[1])):
        F = on_pair(model, fn(xxm, ref), spin)
        out = F if out is None else out @ F
    return out


def _conjugate(model: HubbardModel, refs, R: np.ndarray) -> np.ndarray:
    P = pair_perm(model)
    return _pair_twist(model, refs) @ R @ P @ _pair_twist(model, refs, inverse=True) @ P


def twisted_hubbard_r(model: HubbardModel, refs, l1: float, l2: float) -> np.ndarray:
    """F_12 R(l1, l2) F_21^{-1} with F = F_up F_down."""
    h1, h2 = float(h_of_lambda(l1, model.U)), float(h_of_lambda(l2, model.U))
    return _conjugate(model, refs, _coupled(model, l1, l2, h1, h2))


def twisted_hubbard_ybe(model: HubbardModel, refs, l1: float, l2: float, l3: float) -> float:
    sites = [model.site] * 3
    emb = lambda R, i, j: embed_factors(R, sites, [i, j])
    r12 = emb(twisted_hubbard_r(model, refs, l1, l2), 0, 1)
    r13 = emb(twisted_hubbard_r(model, refs, l1, l3), 0, 2)
    r23 = emb(twisted_hubbard_r(model, refs, l2, l3), 1, 2)
    return residual_value(r12 @ r13 @ r23, r23 @ r13 @ r12)


def twisted_hubbard_density(model: HubbardModel, refs) -> np.ndarray:
    """P_up Sigmahat_up + P_down Sigmahat_down + U C_up C_down on two sites."""
    out = model.U * parity_product(model, 1)
    for spin, xxm, ref in (("up", model.up, refs[0]), ("down", model.down, refs[1])):
        out = out + on_pair(model, twisted_density(xxm, ref), spin)
    return out


def twisted_hubbard_hamiltonian(model: HubbardModel, refs, L: int, sparse: bool = False):
    if L < 2:
        raise GradingError("chains need L >= 2")
    return chain.local_sum(twisted_hubbard_density(model, refs), model.site, L, 2, sparse=sparse)


def twisted_hubbard_transfer(model: HubbardModel, refs, lam: float, L: int) -> np.ndarray:
    """Transfer matrix of the gauge-reduced twisted R-matrix."""
    R = _conjugate(model, refs, reduced_r(model, lam))
    site = model.site
    return chain.transfer([R] * L, site, [site] * L, ordinary=site.is_even)


def default_refinements(model: HubbardModel, q_up=1.0, q_down=1.0) -> tuple[Refinement, Refinement]:
    return Refinement.maximal(model.up, q_up), Refinement.maximal(model.down, q_down)


def twist_report(model: XXModel, ref: Refinement, L: int = 4, tol: float = 1e-12, seed: int = 0) -> dict:
    """Twisted property suite, symmetry residual, hermiticity and commuting transfers."""
    rep = verify_twisted(model, ref, seed=seed, tol=tol)
    H = twisted_hamiltonian(model, ref, L)
    return {
        "properties": rep.to_dict(),
        "closed_form": closed_form_residual(model, ref),
        "symmetry": symmetry_residual(model, ref),
        "hermiticity": hermiticity_residual(H),
        "is_phase": ref.is_phase,
        "max_imag_eig": float(np.abs(np.linalg.eigvals(H).imag).max()),
        "transfer_commutator": transfer_commutator(model, ref, L),
    }


def seq_to_refs(model: HubbardModel, up_rows: Sequence = (), down_rows: Sequence = ()):
    return Refinement.from_rows(model.up, up_rows), Refinement.from_rows(model.down, down_rows)
