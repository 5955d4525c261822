"""Universal Hubbard model: two XX models coupled through their parity operators.

A Hubbard site is the fused space V_up (x) V_down (index u * s_down + d).
Two-site operators are built on the four factors (up1, down1, up2, down2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import chain
from .graded import GradedSpace, GradingError, embed_factors, factor_permutation, residual_value
from .xx import XXModel, make_projectors, perm, r_xx, r_xx_derivative, sigma


@dataclass(frozen=True)
class HubbardModel:
    up: XXModel
    down: XXModel
    U: float

    def __post_init__(self):
        if not np.isfinite(self.U):
            raise GradingError("U must be finite")

    @classmethod
    def standard(cls, U: float) -> "HubbardModel":
        return cls(XXModel.gl(2, 0, (1,)), XXModel.gl(2, 0, (1,)), U)

    @classmethod
    def fermionic(cls, U: float) -> "HubbardModel":
        """Graded version with odd electrons: gl(1|1) for each spin."""
        return cls(XXModel.gl(1, 1, (1,)), XXModel.gl(1, 1, (1,)), U)

    @property
    def site(self) -> GradedSpace:
        return self.up.space * self.down.space

    @property
    def factors(self) -> list[GradedSpace]:
        return [self.up.space, self.down.space]

    def with_U(self, U: float) -> "HubbardModel":
        return HubbardModel(self.up, self.down, U)

    def swapped(self) -> "HubbardModel":
        return HubbardModel(self.down, self.up, self.U)

    def label(self) -> str:
        return f"[{self.up.label()}]x[{self.down.label()}] U={self.U:g}"


def hubbard_zoo(U: float) -> list[HubbardModel]:
    g2 = XXModel.gl(2, 0, (1,))
    g11 = XXModel.gl(1, 1, (1,))
    g21 = XXModel.gl(2, 1, (1,))
    return [
        HubbardModel(g2, g2, U),
        HubbardModel(g11, g11, U),
        HubbardModel(g21, g2, U),
        HubbardModel(g21, g21, U),
    ]


def h_of_lambda(lam, U):
    """Principal real solution of sinh(2h) = U sin(2 lam)."""
    return 0.5 * np.arcsinh(U * np.sin(2 * np.asarray(lam, dtype=float)))


def h_derivative(lam, U):
    h = h_of_lambda(lam, U)
    return U * np.cos(2 * lam) / np.cosh(2 * h)


# --------------------------------------------------------------------------
# operators on (up1, down1, up2, down2)


def _four(model: HubbardModel) -> list[GradedSpace]:
    return [model.up.space, model.down.space, model.up.space, model.down.space]


def on_pair(model: HubbardModel, op: np.ndarray, spin: str) -> np.ndarray:
    """Two-site operator of one spin species on two Hubbard sites."""
    targets = [0, 2] if spin == "up" else [1, 3]
    return embed_factors(op, _four(model), targets)


def on_one(model: HubbardModel, op: np.ndarray, spin: str, site: int) -> np.ndarray:
    """One-site operator of one spin on Hubbard site 1 or 2 of a pair."""
    k = (0 if spin == "up" else 1) + 2 * (site - 1)
    return embed_factors(op, _four(model), [k])


def on_site(model: HubbardModel, op: np.ndarray, spin: str) -> np.ndarray:
    """One-spin operator lifted to a single fused site."""
    return embed_factors(op, model.factors, [0 if spin == "up" else 1])


def parity_product(model: HubbardModel, site: int | None = None) -> np.ndarray:
    """C_up C_down on one fused site, or on site 1/2 of a pair."""
    Cu = make_projectors(model.up)[2]
    Cd = make_projectors(model.down)[2]
    if site is None:
        return np.kron(Cu, Cd)
    return on_one(model, Cu, "up", site) @ on_one(model, Cd, "down", site)


def pair_perm(model: HubbardModel) -> np.ndarray:
    """P_up P_down, the graded swap of two fused sites."""
    return on_pair(model, perm(model.up.space), "up") @ on_pair(model, perm(model.down.space), "down")


def coupling_ratio(l12: float, lp12: float, pole_tol: float = 1e-8) -> float:
    """sin(l12)/sin(l'12), with the analytic limit near the joint zero."""
    if l12 == 0.0:
        return 0.0
    s = np.sin(lp12)
    if abs(s) >= pole_tol:
        return float(np.sin(l12) / s)
    # joint limit l1, l2 -> 0 with l12/l'12 bounded
    if lp12 != 0.0 and abs(lp12) < 1.0 and abs(l12) <= abs(lp12) / pole_tol:
        return float(l12 / lp12)
    raise GradingError(f"R-matrix pole at lambda'={lp12} with lambda_12={l12}")


def _coupled(model: HubbardModel, l1: float, l2: float, h1: float, h2: float, c_site: int = 1) -> np.ndarray:
    l12, lp12 = l1 - l2, l1 + l2
    Ru = lambda x: on_pair(model, r_xx(model.up, x), "up")
    Rd = lambda x: on_pair(model, r_xx(model.down, x), "down")
    Cu = on_one(model, make_projectors(model.up)[2], "up", c_site)
    Cd = on_one(model, make_projectors(model.down)[2], "down", c_site)
    out = Ru(l12) @ Rd(l12)
    coef = coupling_ratio(l12, lp12) * np.tanh(h1 + h2)
    if coef != 0.0:
        out = out + coef * Ru(lp12) @ Cu @ Rd(lp12) @ Cd
    return out


def r_hubbard(model: HubbardModel, l1: float, l2: float, hfun=None) -> np.ndarray:
    """Coupled R-matrix on two fused sites.

    ``hfun(lam, U)`` replaces h(lambda) (used for negative controls).
    """
    hfun = h_of_lambda if hfun is None else hfun
    return _coupled(model, l1, l2, float(hfun(l1, model.U)), float(hfun(l2, model.U)))


def r_hubbard_21_swapped(model: HubbardModel, l1: float, l2: float) -> np.ndarray:
    """R^{down up}_{21}(l1, l2) expressed on (up1, down1, up2, down2)."""
    sw = model.swapped()
    h1, h2 = h_of_lambda(l1, model.U), h_of_lambda(l2, model.U)
    R = _coupled(sw, l1, l2, float(h1), float(h2), c_site=2)
    # (down1, up1, down2, up2) -> (up1, down1, up2, down2)
    Q = factor_permutation(_four(sw), [1, 0, 3, 2])
    return Q @ R @ Q.T


def unitarity_coefficient(model: HubbardModel, l1: float, l2: float) -> tuple[float, float]:
    """cos^4 - a^2 and its rewritten form; both miss the cos^4(l'12) factor."""
    l12, lp12 = l1 - l2, l1 + l2
    h1, h2 = h_of_lambda(l1, model.U), h_of_lambda(l2, model.U)
    first = np.cos(l12) ** 4 - (coupling_ratio(l12, lp12) * np.tanh(h1 + h2)) ** 2
    second = np.cos(l12) ** 2 * (np.cos(l12) ** 2 - (np.tanh(h1 - h2) / np.cos(lp12)) ** 2)
    return float(first), float(second)


def gauge_factor(model: HubbardModel, h: float, site: int, sign: int = 1) -> np.ndarray:
    """exp(sign h/2 C_up C_down) on site 1 or 2 of a pair."""
    CC = parity_product(model, site)
    x = sign * 0.5 * h
    return np.cosh(x) * np.eye(CC.shape[0]) + np.sinh(x) * CC


def gauge_r(model: HubbardModel, l1: float, l2: float, hfun=None) -> np.ndarray:
    hfun = h_of_lambda if hfun is None else hfun
    h1, h2 = float(hfun(l1, model.U)), float(hfun(l2, model.U))
    R = _coupled(model, l1, l2, h1, h2)
    left = gauge_factor(model, h1, 1) @ gauge_factor(model, h2, 2)
    right = gauge_factor(model, h1, 1, -1) @ gauge_factor(model, h2, 2, -1)
    return left @ R @ right


def _i_factor(model: HubbardModel, h: float):
    CC = parity_product(model, 1)
    eye = np.eye(CC.shape[0])
    val = np.cosh(h / 2) * eye + np.sinh(h / 2) * CC
    der = 0.5 * np.sinh(h / 2) * eye + 0.5 * np.cosh(h / 2) * CC
    return val, der


def reduced_r(model: HubbardModel, lam: float, derivative: bool = False):
    """(1/cosh h) I_1(h) R_up(lam) R_down(lam) I_1(h); optionally with d/dlam."""
    h = float(h_of_lambda(lam, model.U))
    Ru = on_pair(model, r_xx(model.up, lam), "up")
    Rd = on_pair(model, r_xx(model.down, lam), "down")
    I, dI = _i_factor(model, h)
    core = Ru @ Rd
    val = I @ core @ I / np.cosh(h)
    if not derivative:
        return val
    hp = float(h_derivative(lam, model.U))
    dRu = on_pair(model, r_xx_derivative(model.up, lam), "up")
    dRd = on_pair(model, r_xx_derivative(model.down, lam), "down")
    dcore = dRu @ Rd + Ru @ dRd
    der = (
        -np.tanh(h) * hp * val
        + (hp * dI @ core @ I + I @ dcore @ I + hp * I @ core @ dI) / np.cosh(h)
    )
    return val, der


# --------------------------------------------------------------------------
# chains


def transfer_hubbard(model: HubbardModel, lam: float, L: int, derivative: bool = False, ordinary=None):
    site = model.site
    ordinary = site.is_even if ordinary is None else ordinary
    if derivative:
        R, dR = reduced_r(model, lam, derivative=True)
        return chain.transfer([R] * L, site, [site] * L, ordinary=ordinary, drmats=[dR] * L)
    R = reduced_r(model, lam)
    return chain.transfer([R] * L, site, [site] * L, ordinary=ordinary)


def density_hubbard(model: HubbardModel) -> np.ndarray:
    """Sigma_up P_up + Sigma_down P_down + U C_up_1 C_down_1 on two sites."""
    hop_u = on_pair(model, sigma(model.up) @ perm(model.up.space), "up")
    hop_d = on_pair(model, sigma(model.down) @ perm(model.down.space), "down")
    return hop_u + hop_d + model.U * parity_product(model, 1)


def hopping_density(model: HubbardModel) -> np.ndarray:
    return density_hubbard(model.with_U(0.0))


def hamiltonian_hubbard(model: HubbardModel, L: int, sparse: bool = False):
    if L < 2:
        raise GradingError("chains need L >= 2")
    return chain.local_sum(density_hubbard(model), model.site, L, 2, sparse=sparse)


def hamiltonian_from_transfer(model: HubbardModel, L: int) -> np.ndarray:
    t0, dt0 = transfer_hubbard(model, 0.0, L, derivative=True)
    return np.linalg.solve(t0, dt0)


def textbook_two_site(U: float) -> np.ndarray:
    """Independent Pauli-matrix construction of standard Hubbard at L=2.

    Ordering (up1, down1, up2, down2); periodic L=2 doubles the bond.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0])
    e = np.eye(2)

    def k4(a, b, c, d):
        return np.kron(np.kron(a, b), np.kron(c, d))

    hop = 0.5 * (k4(sx, e, sx, e) + k4(sy, e, sy, e) + k4(e, sx, e, sx) + k4(e, sy, e, sy))
    pot = k4(sz, sz, e, e) + k4(e, e, sz, sz)
    return 2 * hop + U * pot


# --------------------------------------------------------------------------
# symmetry


def _elem(s, j, k):
    e = np.zeros((s, s))
    e[j - 1, k - 1] = 1.0
    return e


def block_generators(model: HubbardModel, cross: bool = False):
    """[(name, fused one-site matrix)] for End(W) + End(Wbar) of each spin.

    With ``cross`` the off-block E_jk (j in N, k in Nbar) are returned instead.
    """
    out = []
    for spin, xx in (("up", model.up), ("down", model.down)):
        if cross:
            pairs = [(j, k) for j in xx.subset_N for k in xx.complement]
            pairs += [(k, j) for j, k in pairs]
        else:
            pairs = [(j, k) for blk in (xx.subset_N, xx.complement) for j in blk for k in blk]
        for j, k in pairs:
            out.append((f"{spin}:E{j}{k}", on_site(model, _elem(xx.s, j, k), spin)))
    return out


def symmetry_hubbard(model: HubbardModel, L: int, lam: float = 0.37, cross: bool = False) -> dict:
    """Commutator norms of block (or cross-block) generators with R, H, t."""
    site = model.site
    R = reduced_r(model, lam)
    H = hamiltonian_hubbard(model, L)
    t = transfer_hubbard(model, lam, L)
    CC = parity_product(model)
    out = {}
    for name, M in block_generators(model, cross):
        M2 = embed_factors(M, [site, site], [0]) + embed_factors(M, [site, site], [1])
        ML = chain.global_generator(M, site, L)
        out[name] = {
            "R": residual_value(R @ M2, M2 @ R),
            "H": residual_value(H @ ML, ML @ H),
            "t": residual_value(t @ ML, ML @ t),
            "MC": residual_value(M @ CC, CC @ M),
        }
    return out


def ybe_residual(model: HubbardModel, l1: float, l2: float, l3: float, rfun=None) -> float:
    """R12(l1,l2) R13(l1,l3) R23(l2,l3) - R23 R13 R12 on three fused sites."""
    rfun = r_hubbard if rfun is None else rfun
    sites = [model.site] * 3
    emb = lambda R, i, j: embed_factors(R, sites, [i, j])
    r12 = emb(rfun(model, l1, l2), 0, 1)
    r13 = emb(rfun(model, l1, l3), 0, 2)
    r23 = emb(rfun(model, l2, l3), 1, 2)
    return residual_value(r12 @ r13 @ r23, r23 @ r13 @ r12)


def unitarity_product(model: HubbardModel, l1: float, l2: float, rfun=None) -> np.ndarray:
    """R12(l1, l2) R21(l2, l1) on two fused sites."""
    rfun = r_hubbard if rfun is None else rfun
    P = pair_perm(model)
    return rfun(model, l1, l2) @ P @ rfun(model, l2, l1) @ P


def unitarity_scalar(model: HubbardModel, l1: float, l2: float) -> float:
    """Closed form of the scalar that R12 R21 actually equals.

    The coupling term squares to a multiple of cos^4(l'12), which the
    plain cos^4 - a^2 coefficient omits.
    """
    l12, lp12 = l1 - l2, l1 + l2
    h1, h2 = h_of_lambda(l1, model.U), h_of_lambda(l2, model.U)
    a = coupling_ratio(l12, lp12) * np.tanh(h1 + h2)
    return float(np.cos(l12) ** 4 - a**2 * np.cos(lp12) ** 4)


def unitarity_residual(model: HubbardModel, l1: float, l2: float, rfun=None, coef=None) -> float:
    """Distance of R12 R21 from coef * I (default: :func:`unitarity_scalar`)."""
    lhs = unitarity_product(model, l1, l2, rfun)
    if coef is None:
        coef = unitarity_scalar(model, l1, l2)
    return residual_value(lhs, coef * np.eye(lhs.shape[0]))


def fitted_unitarity_scalar(model: HubbardModel, l1: float, l2: float) -> tuple[complex, float]:
    """Best scalar c with R12 R21 ~ c I, and the distance from c I."""
    lhs = unitarity_product(model, l1, l2)
    c = np.trace(lhs) / lhs.shape[0]
    return complex(c), residual_value(lhs, c * np.eye(lhs.shape[0]))
