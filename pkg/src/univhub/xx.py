"""Universal XX model built from a diagonal projector on a graded space."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import chain
from .graded import (
    GradedSpace,
    GradingError,
    Residual,
    embed_factors,
    factor_permutation,
    residual_value,
)


@dataclass(frozen=True)
class XXModel:
    """A graded space together with the 1-based index set N of the projector."""

    space: GradedSpace
    subset_N: tuple[int, ...]

    def __post_init__(self):
        N = tuple(sorted(set(int(i) for i in self.subset_N)))
        bad = [i for i in N if not 1 <= i <= self.space.dim]
        if bad:
            raise GradingError(f"N index {bad[0]} outside [1, {self.space.dim}]")
        object.__setattr__(self, "subset_N", N)

    @classmethod
    def gl(cls, m: int, n: int = 0, N: Sequence[int] = (1,)) -> "XXModel":
        return cls(GradedSpace.gl(m, n), tuple(N))

    @property
    def s(self) -> int:
        return self.space.dim

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.s + 1) if i not in self.subset_N)

    @property
    def r(self) -> int:
        return len(self.subset_N)

    @property
    def rbar(self) -> int:
        return self.s - self.r

    @property
    def r0(self) -> int:
        return sum(1 for i in self.subset_N if self.space.grades[i - 1] == 0)

    @property
    def r1(self) -> int:
        return self.r - self.r0

    @property
    def is_trivial(self) -> bool:
        return self.r == 0 or self.rbar == 0

    def swapped(self) -> "XXModel":
        """Same space with N replaced by its complement."""
        return XXModel(self.space, self.complement)

    def label(self) -> str:
        m = self.space.grades.count(0)
        n = self.space.grades.count(1)
        name = f"gl({m}|{n})" if n else f"gl({m})"
        return f"{name} N={{{','.join(map(str, self.subset_N))}}}"


ZOO = (
    XXModel.gl(2, 0, (1,)),
    XXModel.gl(3, 0, (1,)),
    XXModel.gl(1, 1, (1,)),
    XXModel.gl(2, 1, (1,)),
    XXModel.gl(2, 1, (2,)),
    XXModel.gl(2, 1, (1, 3)),
    XXModel.gl(2, 2, (1, 3)),
)


def make_projectors(model: XXModel):
    """(pi, pibar, C) as dense diagonal matrices."""
    d = np.zeros(model.s)
    d[[i - 1 for i in model.subset_N]] = 1.0
    pi = np.diag(d)
    pibar = np.eye(model.s) - pi
    return pi, pibar, pi - pibar


def perm(space: GradedSpace) -> np.ndarray:
    return factor_permutation([space, space], [1, 0]).astype(float)


def sigma(model: XXModel) -> np.ndarray:
    pi, pibar, _ = make_projectors(model)
    return np.kron(pi, pibar) + np.kron(pibar, pi)


def r_from_sigma(S: np.ndarray, P: np.ndarray, lam: float) -> np.ndarray:
    eye = np.eye(S.shape[0])
    return S @ P + S * np.sin(lam) + (eye - S) @ P * np.cos(lam)


def r_xx(model: XXModel, lam: float) -> np.ndarray:
    """R(lam) = Sigma P + Sigma sin(lam) + (1 - Sigma) P cos(lam)."""
    return r_from_sigma(sigma(model), perm(model.space), lam)


def r_xx_derivative(model: XXModel, lam: float) -> np.ndarray:
    S = sigma(model)
    P = perm(model.space)
    return S * np.cos(lam) - (np.eye(S.shape[0]) - S) @ P * np.sin(lam)


def r_xx_half_angle(model: XXModel, lam: float) -> np.ndarray:
    """Same R-matrix written through the parity operator C."""
    _, _, C = make_projectors(model)
    P = perm(model.space)
    eye = np.eye(P.shape[0])
    CC = np.kron(C, C)
    c, s = np.cos(lam / 2), np.sin(lam / 2)
    return c * (c * P + s * eye) - s * CC @ (s * P + c * eye)


def explicit_two_site_h(model: XXModel) -> np.ndarray:
    """sum over i in N, a in Nbar of the signed E_ia (x) E_ai terms."""
    s = model.s
    g = model.space.grades
    out = np.zeros((s * s, s * s))

    def E(i, j):
        e = np.zeros((s, s))
        e[i - 1, j - 1] = 1.0
        return e

    def gkron(A, B, col_grade):
        # Koszul sign (-1)^{[B][u]} with u the column index of A
        return np.kron(A, B) * (-1.0) ** col_grade

    for i in model.subset_N:
        for a in model.complement:
            # [E_ai] = [a] + [i]; the column of E_ia is a, of E_ai is i
            bgrade = (g[i - 1] + g[a - 1]) % 2
            out += (-1) ** g[a - 1] * gkron(E(i, a), E(a, i), bgrade * g[a - 1])
            out += (-1) ** g[i - 1] * gkron(E(a, i), E(i, a), bgrade * g[i - 1])
    return out


# --------------------------------------------------------------------------
# property suite


def sample_lambdas(rng: np.random.Generator, n: int, low: float = -1.4, high: float = 1.4) -> np.ndarray:
    """Uniform samples avoiding |cos| < 0.1."""
    out = []
    while len(out) < n:
        x = rng.uniform(low, high)
        if abs(np.cos(x)) >= 0.1:
            out.append(x)
    return np.array(out)


def on_three(op: np.ndarray, space: GradedSpace, i: int, j: int) -> np.ndarray:
    """Two-site operator on factors (i, j) of V (x) V (x) V, 0-based."""
    return embed_factors(op, [space] * 3, [i, j])


@dataclass
class PropertyReport:
    model: str
    seed: int
    lambdas: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.residuals.values())

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "seed": self.seed,
            "lambdas": [list(map(float, x)) for x in self.lambdas],
            "checks": {k: v.to_dict() for k, v in self.residuals.items()},
            "pass": self.passed,
        }


THEOREM1_PROPERTIES = (
    "parity",
    "sign",
    "symmetry",
    "unitarity",
    "regularity",
    "exchange",
    "YBE",
    "dYBE",
    "sigma-projector",
    "sigma-relations",
)


def rmatrix_suite(rfun, space: GradedSpace, C: np.ndarray, S: np.ndarray, lambdas, tol: float,
                  skip=()) -> dict:
    """Maximal residual of each identity over the sampled triples.

    ``rfun(lam)`` returns the R-matrix on V (x) V; ``lambdas`` has rows
    (l1, l2, l3).
    """
    P = perm(space)
    eye2 = np.eye(space.dim**2)
    CC = np.kron(C, C)
    C1 = np.kron(C, np.eye(space.dim))
    C2 = np.kron(np.eye(space.dim), C)
    C1_3 = np.kron(C, np.eye(space.dim**2))
    worst = {k: 0.0 for k in THEOREM1_PROPERTIES if k not in skip}

    def bump(name, value):
        if name in worst:
            worst[name] = max(worst[name], value)

    R0 = rfun(0.0)
    bump("regularity", residual_value(R0, P))
    for l1, l2, l3 in lambdas:
        R = rfun(l1)
        R21 = P @ R @ P
        bump("parity", residual_value(CC @ R, R @ CC))
        bump("sign", residual_value(rfun(-l1), C1 @ R @ C2))
        bump("symmetry", residual_value(R, R21))
        bump("unitarity", residual_value(R @ P @ rfun(-l1) @ P, np.cos(l1) ** 2 * eye2))
        Rm = rfun(l2)
        bump("exchange", residual_value(R @ P @ Rm @ P, Rm @ P @ R @ P))
        r12 = lambda x: on_three(rfun(x), space, 0, 1)
        r13 = lambda x: on_three(rfun(x), space, 0, 2)
        r23 = lambda x: on_three(rfun(x), space, 1, 2)
        lhs = r12(l1 - l2) @ r13(l1 - l3) @ r23(l2 - l3)
        rhs = r23(l2 - l3) @ r13(l1 - l3) @ r12(l1 - l2)
        bump("YBE", residual_value(lhs, rhs))
        lhs = r12(l1 + l2) @ C1_3 @ r13(l1 - l3) @ r23(l2 + l3)
        rhs = r23(l2 + l3) @ r13(l1 - l3) @ C1_3 @ r12(l1 + l2)
        bump("dYBE", residual_value(lhs, rhs))
    if "sigma-projector" in worst:
        bump("sigma-projector", residual_value(S @ S, S))
    if "sigma-relations" in worst:
        sig = {
            (a, b): on_three(S, space, a, b) for a in range(3) for b in range(3) if a != b
        }
        for i, j, k in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]:
            lhs = 2 * sig[i, j] @ sig[k, j]
            rhs = sig[i, j] + sig[k, j] - sig[i, k]
            bump("sigma-relations", residual_value(lhs, rhs))
    return {k: Residual(v, tol) for k, v in worst.items()}


def verify_theorem1(model: XXModel, n_samples: int = 20, seed: int = 0, tol: float = 1e-12) -> PropertyReport:
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    lambdas = sample_lambdas(rng, 3 * n_samples).reshape(n_samples, 3)
    _, _, C = make_projectors(model)
    S = sigma(model)
    res = rmatrix_suite(lambda x: r_xx(model, x), model.space, C, S, lambdas, tol)
    return PropertyReport(model.label(), seed, list(lambdas), res)


def dybe_without_c(model: XXModel, lambdas) -> float:
    """dYBE residual with the parity insertion dropped (negative control)."""
    space = model.space
    worst = 0.0
    for l1, l2, l3 in lambdas:
        r = lambda x, i, j: on_three(r_xx(model, x), space, i, j)
        lhs = r(l1 + l2, 0, 1) @ r(l1 - l3, 0, 2) @ r(l2 + l3, 1, 2)
        rhs = r(l2 + l3, 1, 2) @ r(l1 - l3, 0, 2) @ r(l1 + l2, 0, 1)
        worst = max(worst, residual_value(lhs, rhs))
    return worst


# --------------------------------------------------------------------------
# chain objects


def monodromy_xx(model: XXModel, lam: float, L: int) -> np.ndarray:
    R = r_xx(model, lam)
    return chain.monodromy([R] * L, model.space, [model.space] * L)


def transfer_xx(model: XXModel, lam: float, L: int, ordinary: bool | None = None, derivative: bool = False):
    """t(lam); supertrace when any grade is odd unless ``ordinary`` forces it."""
    if L < 2:
        raise GradingError("chains need L >= 2")
    ordinary = model.space.is_even if ordinary is None else ordinary
    R = r_xx(model, lam)
    kw = {}
    if derivative:
        kw["drmats"] = [r_xx_derivative(model, lam)] * L
    return chain.transfer([R] * L, model.space, [model.space] * L, ordinary=ordinary, **kw)


def density_xx(model: XXModel) -> np.ndarray:
    return perm(model.space) @ sigma(model)


def hamiltonian_xx(model: XXModel, L: int, sparse: bool = False):
    """H = sum_j P_{j,j+1} Sigma_{j,j+1} with periodic boundary conditions."""
    if L < 2:
        raise GradingError("chains need L >= 2")
    return chain.local_sum(density_xx(model), model.space, L, 2, sparse=sparse)


def hamiltonian_from_transfer(model: XXModel, L: int) -> np.ndarray:
    t0, dt0 = transfer_xx(model, 0.0, L, derivative=True)
    return np.linalg.solve(t0, dt0)


def elementary(s: int, j: int, k: int) -> np.ndarray:
    e = np.zeros((s, s))
    e[j - 1, k - 1] = 1.0
    return e


def symmetry_generators_xx(model: XXModel):
    """E_jk with j, k both in N or both in Nbar; returns [(name, matrix)]."""
    out = []
    for block in (model.subset_N, model.complement):
        for j in block:
            for k in block:
                out.append((f"E{j}{k}", elementary(model.s, j, k)))
    return out


def cross_generators_xx(model: XXModel):
    out = []
    for j in model.subset_N:
        for k in model.complement:
            out.append((f"E{j}{k}", elementary(model.s, j, k)))
            out.append((f"E{k}{j}", elementary(model.s, k, j)))
    return out


def two_site_sum(M: np.ndarray, space: GradedSpace) -> np.ndarray:
    """M_1 + M_2 on V (x) V, Koszul signs included."""
    return embed_factors(M, [space, space], [0]) + embed_factors(M, [space, space], [1])


# --------------------------------------------------------------------------
# counting


def count_models(m: int, n: int) -> int:
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    big, small = max(m, n), min(m, n)
    return ((big + 1) // 2 + 1) * (small + 1)


def enumerate_models(m: int, n: int) -> list[XXModel]:
    """Representative subsets N = {1..r0} u {m+1..m+r1} after arranging m >= n."""
    count_models(m, n)
    m, n = max(m, n), min(m, n)
    out = []
    for r0 in range((m + 1) // 2 + 1):
        for r1 in range(n + 1):
            N = tuple(range(1, r0 + 1)) + tuple(range(m + 1, m + r1 + 1))
            out.append(XXModel.gl(m, n, N))
    return out


def symmetry_xx(model: XXModel, L: int, lam: float = 0.37, cross: bool = False) -> dict:
    """Commutator norms of block (or cross-block) generators with R, H and t."""
    gens = cross_generators_xx(model) if cross else symmetry_generators_xx(model)
    R = r_xx(model, lam)
    H = hamiltonian_xx(model, L)
    t = transfer_xx(model, lam, L)
    out = {}
    for name, M in gens:
        M2 = two_site_sum(M, model.space)
        ML = chain.global_generator(M, model.space, L)
        out[name] = {
            "R": residual_value(R @ M2, M2 @ R),
            "H": residual_value(H @ ML, ML @ H),
            "t": residual_value(t @ ML, ML @ t),
        }
    return out
