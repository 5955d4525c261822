"""XX R-matrices on a truncated bosonic Fock space, and why the partial trace breaks.

Basis |0>, ..., |Nmax>; all states even. Two projector families:
``even-odd`` (parity of n) and ``small-modes`` (n <= ell).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graded import GradedSpace, GradingError, residual_value
from .xx import PropertyReport, XXModel, make_projectors, perm, r_xx, rmatrix_suite, sample_lambdas, sigma


@dataclass(frozen=True)
class TruncatedFock:
    Nmax: int

    def __post_init__(self):
        if self.Nmax < 0:
            raise GradingError("Nmax must be >= 0")

    @property
    def dim(self) -> int:
        return self.Nmax + 1

    @property
    def space(self) -> GradedSpace:
        return GradedSpace.even(self.dim)

    @property
    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.dim, dtype=float))


def _pi_diag(Nmax: int, kind: str, ell: int | None) -> np.ndarray:
    n = np.arange(Nmax + 1)
    if kind == "even-odd":
        return (n % 2 == 0).astype(float)
    if kind == "small-modes":
        if ell is None or not 0 <= ell <= Nmax:
            raise GradingError(f"ell must satisfy 0 <= ell <= Nmax={Nmax}, got {ell}")
        return (n <= ell).astype(float)
    raise GradingError(f"unknown projector kind {kind!r}")


def fock_projectors(Nmax: int, kind: str = "even-odd", ell: int | None = None):
    """(pi, pibar, C) on F_Nmax."""
    TruncatedFock(Nmax)
    d = _pi_diag(Nmax, kind, ell)
    pi = np.diag(d)
    pibar = np.eye(Nmax + 1) - pi
    return pi, pibar, pi - pibar


def fock_model(Nmax: int, kind: str = "even-odd", ell: int | None = None) -> XXModel:
    """The same projector as a generic :class:`XXModel` on an even space."""
    d = _pi_diag(Nmax, kind, ell)
    N = tuple(int(i) + 1 for i in np.flatnonzero(d))
    return XXModel(GradedSpace.even(Nmax + 1), N)


def fock_xx_r(Nmax: int, lam: float, kind: str = "even-odd", ell: int | None = None) -> np.ndarray:
    """c (c P + s I) - s (C (x) C) (s P + c I) with c, s at lam / 2."""
    _, _, C = fock_projectors(Nmax, kind, ell)
    P = perm(GradedSpace.even(Nmax + 1))
    eye = np.eye(P.shape[0])
    c, s = np.cos(lam / 2), np.sin(lam / 2)
    return c * (c * P + s * eye) - s * np.kron(C, C) @ (s * P + c * eye)


def generic_residual(Nmax: int, kind: str = "even-odd", ell: int | None = None, lambdas=(0.0, 0.4, -1.1)) -> float:
    """Distance between the Fock form and r_xx from the same projector."""
    m = fock_model(Nmax, kind, ell)
    return max(residual_value(fock_xx_r(Nmax, x, kind, ell), r_xx(m, x)) for x in lambdas)


def verify_fock(Nmax: int, kind: str = "even-odd", ell: int | None = None, n_samples: int = 20,
                seed: int = 0, tol: float = 1e-12) -> PropertyReport:
    m = fock_model(Nmax, kind, ell)
    rng = np.random.default_rng(seed)
    lambdas = sample_lambdas(rng, 3 * n_samples).reshape(n_samples, 3)
    _, _, C = fock_projectors(Nmax, kind, ell)
    res = rmatrix_suite(lambda x: fock_xx_r(Nmax, x, kind, ell), m.space, C, sigma(m), lambdas, tol)
    return PropertyReport(f"Fock Nmax={Nmax} {kind}" + (f" ell={ell}" if ell is not None else ""), seed,
                          list(lambdas), res)


def _perm3(dim: int, i: int, j: int) -> np.ndarray:
    """P_ij on three copies of C^dim, 0-based factors."""
    D = dim**3
    idx = np.array(np.unravel_index(np.arange(D), (dim,) * 3))
    swapped = idx.copy()
    swapped[[i, j]] = idx[[j, i]]
    out = np.zeros((D, D))
    out[np.ravel_multi_index(tuple(swapped), (dim,) * 3), np.arange(D)] = 1.0
    return out


def partial_trace_first(op: np.ndarray, dim: int, upto: int) -> np.ndarray:
    """sum_{n <= upto} <n|_1 op |n>_1 on three copies of C^dim."""
    T = op.reshape((dim,) * 6)
    return sum(T[n, :, :, n, :, :] for n in range(upto + 1)).reshape(dim**2, dim**2)


def noncyclicity_demo(Nmax: int, traced: int | None = None) -> dict:
    """tr_{N,1}(P12 P13) against tr_{N,1}(P13 P12) inside F_Nmax^{(x)3}.

    Space 1 is traced over n <= N (default Nmax - 1) while spaces 2, 3 keep
    the ambient truncation, mimicking tr_N inside the untruncated space.
    Tracing over the whole ambient range instead gives equal results.
    """
    if Nmax < 1:
        raise GradingError("Nmax must be >= 1")
    N = Nmax - 1 if traced is None else traced
    if not 0 <= N <= Nmax:
        raise GradingError(f"traced range {N} outside [0, {Nmax}]")
    dim = Nmax + 1
    P12, P13 = _perm3(dim, 0, 1), _perm3(dim, 0, 2)
    a = partial_trace_first(P12 @ P13, dim, N)
    b = partial_trace_first(P13 @ P12, dim, N)
    full_a = partial_trace_first(P12 @ P13, dim, Nmax)
    full_b = partial_trace_first(P13 @ P12, dim, Nmax)
    return {
        "Nmax": Nmax,
        "traced": N,
        "difference": float(np.linalg.norm(a - b)),
        "full_trace_difference": float(np.linalg.norm(full_a - full_b)),
    }


def normalized_traces(N: int, ell: int = 1) -> dict:
    """(1/N) tr_N of I, pi_even and pi_{<=ell}; limits 1, 1/2, 0."""
    n = np.arange(N + 1)
    return {
        "identity": (N + 1) / N,
        "even": float(np.sum(n % 2 == 0)) / N,
        "small": float(np.sum(n <= ell)) / N,
    }


def noncyclicity_table(Nmax_values=(1, 2, 3, 4, 5)) -> list[dict]:
    return [noncyclicity_demo(n) for n in Nmax_values]
