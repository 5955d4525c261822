"""Coordinate Bethe ansatz for the universal Hubbard chain.

The reference state has the vacuum vector of each XX model on every site.
Excitation labels live on a small space ordered as: up unbarred, up barred,
down unbarred, down barred (vacuum indices removed).
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import chain
from .graded import GradedSpace, GradingError, factor_permutation, residual_value
from .hubbard import HubbardModel, h_of_lambda, hamiltonian_hubbard, transfer_hubbard
from .xx import XXModel
from .xx_bethe import ExcitationSpec, phase_roots, solve_bae_xx

SPINS = ("up", "down")


def _xx(model: HubbardModel, spin: str) -> XXModel:
    if spin not in SPINS:
        raise GradingError(f"spin must be 'up' or 'down', got {spin!r}")
    return model.up if spin == "up" else model.down


def _vac(xxm: XXModel) -> int:
    if not xxm.subset_N:
        raise GradingError("no vacuum: N is empty")
    return xxm.subset_N[0]


@dataclass(frozen=True)
class HubbardExcitation:
    """One small-chain label: spin, big-space index, barred or not."""

    spin: str
    index: int
    barred: bool

    @property
    def kind(self) -> str:
        return f"{'barred' if self.barred else 'unbarred'}-{self.spin}"


def excitations(model: HubbardModel) -> list[HubbardExcitation]:
    """Small-chain labels in order: up unbarred, up barred, down unbarred, down barred."""
    out = []
    for spin in SPINS:
        m = _xx(model, spin)
        v = _vac(m)
        out += [HubbardExcitation(spin, i, False) for i in m.subset_N if i != v]
        out += [HubbardExcitation(spin, i, True) for i in m.complement]
    return out


def small_space(model: HubbardModel) -> GradedSpace:
    """Grades of the labels, relative to the vacuum of their spin."""
    grades = []
    for e in excitations(model):
        m = _xx(model, e.spin)
        g = m.space.grades
        grades.append((g[e.index - 1] + g[_vac(m) - 1]) % 2)
    return GradedSpace(tuple(grades))


@functools.lru_cache(maxsize=64)
def small_projectors(model: HubbardModel) -> dict:
    """Diagonal projectors pi_circ^eps and pi_bar^eps on the small space."""
    ex = excitations(model)
    out = {}
    for spin in SPINS:
        for barred in (False, True):
            d = [1.0 if (e.spin == spin and e.barred == barred) else 0.0 for e in ex]
            out[(spin, barred)] = np.diag(d)
    return out


# --------------------------------------------------------------------------
# scattering matrix


def amplitudes(p1: float, p2: float, U: float) -> tuple[complex, complex]:
    """Transmission T and reflection R of a barred up-down pair."""
    x = np.sin(p1) - np.sin(p2)
    den = x - 2j * U
    if abs(den) == 0:
        raise GradingError("amplitude pole: U = 0 and sin p1 = sin p2")
    return complex(x / den), complex(2j * U / den)


@dataclass
class SMatrixParts:
    x_up: np.ndarray
    x_down: np.ndarray
    mixed: np.ndarray
    heis: np.ndarray
    T: complex
    R: complex

    @property
    def total(self) -> np.ndarray:
        return self.x_up + self.x_down + self.mixed + self.heis


@functools.lru_cache(maxsize=64)
def small_perm(model: HubbardModel) -> np.ndarray:
    V = small_space(model)
    return factor_permutation([V, V], [1, 0]).astype(complex)


def smatrix_hubbard(model: HubbardModel, p1: float, p2: float) -> SMatrixParts:
    pr = small_projectors(model)
    P = small_perm(model)
    k = np.kron
    parts = {}
    for spin in SPINS:
        c, b = pr[(spin, False)], pr[(spin, True)]
        parts[spin] = (
            np.exp(-1j * p1) * k(c, b) + np.exp(1j * p2) * k(b, c) - P @ (k(c, c) + k(b, b))
        )
    cu, bu = pr[("up", False)], pr[("up", True)]
    cd, bd = pr[("down", False)], pr[("down", True)]
    mixed = k(cu, cd + bd) + k(cd + bd, cu) + k(cd, bu) + k(bu, cd)
    T, R = amplitudes(p1, p2, model.U)
    I = np.eye(P.shape[0])
    heis = (T * I + R * P) @ (k(bu, bd) + k(bd, bu))
    return SMatrixParts(parts["up"], parts["down"], mixed, heis, T, R)


def support_projectors(model: HubbardModel) -> dict:
    """Right supports of the four parts."""
    pr = small_projectors(model)
    k = np.kron
    cu, bu = pr[("up", False)], pr[("up", True)]
    cd, bd = pr[("down", False)], pr[("down", True)]
    return {
        "x_up": k(cu + bu, cu + bu),
        "x_down": k(cd + bd, cd + bd),
        "mixed": k(cu, cd + bd) + k(cd + bd, cu) + k(cd, bu) + k(bu, cd),
        "heis": k(bu, bd) + k(bd, bu),
    }


def smatrix_checks(model: HubbardModel, p1: float, p2: float) -> dict:
    """Residuals of the structural identities of the scattering matrix."""
    parts = smatrix_hubbard(model, p1, p2)
    sup = support_projectors(model)
    names = list(sup)
    overlap = max(
        np.linalg.norm(sup[a] @ sup[b]) for a, b in itertools.combinations(names, 2)
    )
    cover = residual_value(sum(sup.values()), np.eye(sup["heis"].shape[0]))
    pr = small_projectors(model)
    S = parts.total
    proj = {}
    for spin in SPINS:
        Pi = pr[(spin, False)] + pr[(spin, True)]
        PP = np.kron(Pi, Pi)
        Sx = parts.x_up if spin == "up" else parts.x_down
        proj[spin] = residual_value(PP @ S, Sx @ PP)
    return {
        "T_minus_R": abs(parts.T - parts.R - 1),
        "support_overlap": float(overlap),
        "support_cover": cover,
        "projection_up": proj["up"],
        "projection_down": proj["down"],
    }


def xxx_two_magnon(u: float, U: float) -> np.ndarray:
    """Yang's rational matrix (u I + 2iU P) / (u - 2iU) on C^2 (x) C^2.

    Built from Pauli matrices, P = (I + sum sigma^a (x) sigma^a) / 2.
    """
    s = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1.0, -1.0])]
    P = 0.5 * (np.eye(4) + sum(np.kron(a, a) for a in s))
    return (u * np.eye(4) + 2j * U * P) / (u - 2j * U)


def xxx_ybe_residual(u1: float, u2: float, u3: float, U: float) -> float:
    """Yang-Baxter residual of the rational oracle (additive spectral parameter)."""
    I2 = np.eye(2)
    A = lambda u: xxx_two_magnon(u, U)
    P23 = np.kron(I2, np.eye(4)[[0, 2, 1, 3]])
    r12 = np.kron(A(u1 - u2), I2)
    r23 = np.kron(I2, A(u2 - u3))
    r13 = P23 @ np.kron(A(u1 - u3), I2) @ P23
    return residual_value(r12 @ r13 @ r23, r23 @ r13 @ r12)


def heis_vs_xxx(p1: float, p2: float, U: float) -> float:
    """Standard Hubbard: S on the mixed barred pair against Yang's matrix."""
    model = HubbardModel.standard(U)
    S = smatrix_hubbard(model, p1, p2).total
    mixed = [1, 2]  # (up, down) and (down, up) in the 2-label small space
    oracle = xxx_two_magnon(np.sin(p1) - np.sin(p2), U)
    return residual_value(S[np.ix_(mixed, mixed)], oracle[np.ix_(mixed, mixed)])


def bar_sector_obstruction(model: HubbardModel, p1: float, p2: float) -> dict:
    """Barred-sector scattering matrix against a generalized XXX one.

    On two barred labels of the same spin the actual matrix is -swap, whereas
    a generalized XXX matrix mixes different flavours with T and R.
    """
    ex = excitations(model)
    bars = {s: [j for j, e in enumerate(ex) if e.spin == s and e.barred] for s in SPINS}
    if not bars["up"] or not bars["down"]:
        raise GradingError("both spins need barred excitations")
    pr = small_projectors(model)
    P = small_perm(model)
    k = np.kron
    n = len(ex)
    I = np.eye(n * n)
    bu, bd = pr[("up", True)], pr[("down", True)]
    parts = smatrix_hubbard(model, p1, p2)
    T, R = parts.T, parts.R
    sbar = (T * I + R * P) @ (k(bu, bd) + k(bd, bu)) - P @ (k(bu, bu) + k(bd, bd))
    Pibar = k(bu + bd, bu + bd)
    commutes = residual_value(Pibar @ parts.total @ Pibar, sbar @ Pibar)

    # generalized XXX: same-flavour pairs -swap, different flavours T, R
    diag_same = np.zeros(n * n)
    for j in bars["up"] + bars["down"]:
        diag_same[j * n + j] = 1.0
    same = np.diag(diag_same)
    xxx = -P @ same + (T * I + R * P) @ (Pibar - same)
    table = []
    obstruction = 0.0
    if max(len(bars["up"]), len(bars["down"])) >= 2:
        for spin in SPINS:
            for a, b in itertools.product(bars[spin], repeat=2):
                vec = np.zeros(n * n, dtype=complex)
                vec[a * n + b] = 1.0
                act, ref = sbar @ vec, xxx @ vec
                table.append(
                    {
                        "spin": spin,
                        "in": [ex[a].index, ex[b].index],
                        "actual": _describe(act, ex, n),
                        "xxx": _describe(ref, ex, n),
                    }
                )
                obstruction = max(obstruction, float(np.linalg.norm(act - ref)))
    Spp = smatrix_hubbard(model, p1, p1)
    sbar_pp = (Spp.T * I + Spp.R * P) @ (k(bu, bd) + k(bd, bu)) - P @ (k(bu, bu) + k(bd, bd))
    return {
        "obstructed": obstruction > 0.0,
        "max_difference": obstruction,
        "sbar_restriction": commutes,
        "sbar_pp_plus_P": residual_value(sbar_pp @ Pibar, -P @ Pibar),
        "xxx_equal": residual_value(sbar @ Pibar, xxx @ Pibar),
        "table": table,
    }


def _describe(vec, ex, n, tol=1e-12) -> list:
    out = []
    for idx in np.flatnonzero(np.abs(vec) > tol):
        a, b = divmod(int(idx), n)
        out.append([complex(vec[idx]).real, complex(vec[idx]).imag, ex[a].index, ex[b].index])
    return out


# --------------------------------------------------------------------------
# states on the big chain


def vacuum_digit(model: HubbardModel) -> int:
    return (_vac(model.up) - 1) * model.down.s + _vac(model.down) - 1


def state_index(model: HubbardModel, L: int, up: dict | None = None, down: dict | None = None) -> int:
    """Basis index with big-space labels placed at 1-based sites for each spin."""
    up, down = up or {}, down or {}
    vu, vd = _vac(model.up), _vac(model.down)
    digits = []
    for x in range(1, L + 1):
        u, d = up.get(x, vu), down.get(x, vd)
        digits.append((u - 1) * model.down.s + d - 1)
    return int(np.ravel_multi_index(digits, [model.site.dim] * L))


def vacuum_eigenvalue(model: HubbardModel, L: int, lam: float, p_up=(), p_down=()) -> complex:
    """Eigenvalue of t(lambda) on a state of the vacuum sector.

    Pairs of auxiliary states with both spins unbarred or both barred carry
    (1 + tanh h)^L, mixed pairs (1 - tanh h)^L. Odd vacua contribute the
    supertrace sign on the unbarred term and (-1)^L on the barred one.
    """
    tau = np.tanh(h_of_lambda(lam, model.U))
    c, s = np.cos(lam) ** L, np.sin(lam) ** L
    A, B = {}, {}
    for spin, ps in zip(SPINS, (p_up, p_down)):
        m = _xx(model, spin)
        gv = m.space.grades[_vac(m) - 1]
        sdim = sum((-1) ** m.space.grades[i - 1] for i in m.complement)
        A[spin] = (-1) ** gv * c * np.exp(1j * sum(ps))
        B[spin] = (-1) ** (gv * L) * sdim * s
    same = A["up"] * A["down"] + B["up"] * B["down"]
    cross = A["up"] * B["down"] + B["up"] * A["down"]
    return complex((1 + tau) ** L * same + (1 - tau) ** L * cross)


def factorized_vacuum_eigenvalue(model: HubbardModel, L: int, lam: float, p_up=(), p_down=()) -> complex:
    """Factorized form (1 + tanh h)^L (cos^L e^{i|p|} + sin^L rbar)(...)."""
    tau = np.tanh(h_of_lambda(lam, model.U))
    c, s = np.cos(lam) ** L, np.sin(lam) ** L
    f = lambda ps, m: c * np.exp(1j * sum(ps)) + s * len(m.complement)
    return complex((1 + tau) ** L * f(p_up, model.up) * f(p_down, model.down))


def unbarred_state(model: HubbardModel, L: int, up=(), down=()) -> np.ndarray:
    """Plane wave with one unbarred excitation per entry ((label, p), ...) and spin.

    Only single excitations per spin are supported: their momenta obey
    e^{ipL} = 1 and the state is a product of XX one-magnon states.
    """
    if len(up) > 1 or len(down) > 1:
        raise GradingError("at most one unbarred excitation per spin")
    v = np.zeros(model.site.dim**L, dtype=complex)
    xs_u = range(1, L + 1) if up else [None]
    xs_d = range(1, L + 1) if down else [None]
    for xu in xs_u:
        for xd in xs_d:
            amp = 1.0
            pu = {}
            pd = {}
            if up:
                lab, p = up[0]
                amp *= np.exp(1j * p * xu)
                pu = {xu: lab}
            if down:
                lab, p = down[0]
                amp *= np.exp(1j * p * xd)
                pd = {xd: lab}
            v[state_index(model, L, pu, pd)] += amp
    return v


def vacuum_sector_report(model: HubbardModel, L: int, lam: float, up=(), down=()) -> dict:
    """t(lambda) and H on a vacuum-sector state against both eigenvalue forms."""
    v = unbarred_state(model, L, up, down)
    for lab, p in list(up) + list(down):
        if abs(np.exp(1j * p * L) - 1) > 1e-12:
            raise GradingError(f"momentum {p} violates e^(ipL) = 1")
    pu = [p for _, p in up]
    pd = [p for _, p in down]
    t = transfer_hubbard(model, lam, L)
    H = hamiltonian_hubbard(model, L)
    nv = np.linalg.norm(v)
    E = vacuum_eigenvalue(model, L, lam, pu, pd)
    Ep = factorized_vacuum_eigenvalue(model, L, lam, pu, pd)
    tv = t @ v
    return {
        "eigen_residual": float(np.linalg.norm(tv - E * v) / nv),
        "factorized_residual": float(np.linalg.norm(tv - Ep * v) / nv),
        "energy_residual": float(np.linalg.norm(H @ v - model.U * L * v) / nv),
        "eigenvalue": E,
        "factorized": Ep,
    }


@dataclass
class ExcitationReport:
    residual_h: float
    residual_t0: float
    energy: float
    charges: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def passed(self, tol: float) -> bool:
        return self.residual_h <= tol and self.residual_t0 <= tol


def _cartan(model: HubbardModel, L: int, spin: str, index: int) -> np.ndarray:
    m = _xx(model, spin)
    E = np.zeros((m.s, m.s))
    E[index - 1, index - 1] = 1.0
    other = np.eye(model.down.s if spin == "up" else model.up.s)
    op = np.kron(E, other) if spin == "up" else np.kron(other, E)
    return chain.global_generator(op, model.site, L)


def one_excitation_hubbard(model: HubbardModel, L: int, label: HubbardExcitation, p: float) -> ExcitationReport:
    if abs(np.exp(1j * p * L) - 1) > 1e-10:
        raise GradingError(f"momentum {p} violates e^(ipL) = 1")
    if label not in excitations(model):
        raise GradingError(f"{label} is not an excitation of this model")
    v = np.zeros(model.site.dim**L, dtype=complex)
    for x in range(1, L + 1):
        place = {x: label.index}
        v[state_index(model, L, place if label.spin == "up" else None, place if label.spin == "down" else None)] += np.exp(1j * p * x)
    U = model.U
    E = 2 * np.cos(p) + U * (L - 2) if label.barred else U * L
    H = chain_ops(model, L, "H")
    t0 = chain_ops(model, L, 0.0)
    nv = np.linalg.norm(v)
    charges = {}
    for spin in SPINS:
        M11 = _cartan(model, L, spin, _vac(_xx(model, spin)))
        expect = L - 1 if spin == label.spin else L
        charges[f"M11_{spin}"] = (expect, float(np.linalg.norm(M11 @ v - expect * v) / nv))
    return ExcitationReport(
        float(np.linalg.norm(H @ v - E * v) / nv),
        float(np.linalg.norm(t0 @ v - np.exp(1j * p) * v) / nv),
        float(E),
        charges,
    )


def d_matrix_hubbard(model: HubbardModel, L: int, p: float) -> np.ndarray:
    """(2cos p - 2U) Dbar + U L on the small space."""
    dbar = np.diag([1.0 if e.barred else 0.0 for e in excitations(model)])
    return (2 * np.cos(p) - 2 * model.U) * dbar + model.U * L * np.eye(dbar.shape[0])


def build_phi2_hubbard(model: HubbardModel, L: int, p1: float, p2: float, xi) -> np.ndarray:
    """Two-excitation state with small-chain amplitude vector ``xi``.

    Coefficient of (label i at x1, label j at x2), x1 <= x2:
    e^{i(p1x1 + p2x2)} xi + e^{i(p2x1 + p1x2)} P S(p1, p2) xi. Same-site
    pairs of one spin vanish, mixed same-site pairs carry weight 1/2.
    """
    ex = excitations(model)
    n = len(ex)
    xi = np.asarray(xi, dtype=complex).reshape(n * n)
    eta = small_perm(model) @ smatrix_hubbard(model, p1, p2).total @ xi
    v = np.zeros(model.site.dim**L, dtype=complex)
    for x1 in range(1, L + 1):
        for x2 in range(x1, L + 1):
            A = np.exp(1j * (p1 * x1 + p2 * x2)) * xi + np.exp(1j * (p2 * x1 + p1 * x2)) * eta
            for i, j in itertools.product(range(n), repeat=2):
                a = A[i * n + j]
                if a == 0:
                    continue
                ei, ej = ex[i], ex[j]
                if x1 == x2:
                    if ei.spin == ej.spin:
                        continue
                    a = 0.5 * a
                places = {"up": {}, "down": {}}
                places[ei.spin][x1] = ei.index
                places[ej.spin][x2] = ej.index
                v[state_index(model, L, places["up"], places["down"])] += a
    return v


@dataclass
class TwoExcitationSolution:
    p1: float
    p2: float
    xi: np.ndarray
    bae_residual: float


def solve_two_excitation(model: HubbardModel, L: int, labels, K: float, grid: int = 720, tol: float = 1e-10):
    """Real solutions of S(p1, p2) xi = e^{i p2 L} xi with p1 + p2 = K.

    ``labels`` restricts xi to the span of the given small-chain pairs (and
    their swaps). Coarse minima of the smallest singular value are refined
    by bracketing the phase of the nearest eigenvalue.
    """
    ex = excitations(model)
    n = len(ex)
    idx = sorted({a * n + b for a, b in labels} | {b * n + a for a, b in labels})

    def sblock(p1):
        return smatrix_hubbard(model, p1, K - p1).total[np.ix_(idx, idx)]

    def phase(p1):
        z = np.exp(1j * (K - p1) * L)
        mu = np.linalg.eigvals(sblock(p1))
        near = mu[np.argmin(np.abs(mu - z))]
        return float(np.angle(near * np.conj(z)))

    xs = np.linspace(-np.pi, np.pi, grid, endpoint=False)
    ph = np.array([phase(x) for x in xs])
    out = []
    for k in range(grid):
        a, b = xs[k], xs[k] + (xs[1] - xs[0])
        fa, fb = ph[k], ph[(k + 1) % grid]
        if fa == 0.0:
            root = a
        elif fa * fb < 0 and abs(fa - fb) < np.pi:
            try:
                root = brentq(phase, a, b, xtol=1e-15)
            except ValueError:  # nearest eigenvalue switched inside the bracket
                continue
        else:
            continue
        if any(abs(np.exp(1j * root) - np.exp(1j * s.p1)) < 1e-8 for s in out):
            continue
        M = sblock(root) - np.exp(1j * (K - root) * L) * np.eye(len(idx))
        _, sv, vh = np.linalg.svd(M)
        if sv[-1] > tol:
            continue
        xi = np.zeros(n * n, dtype=complex)
        xi[idx] = vh[-1].conj()
        out.append(TwoExcitationSolution(float(root), float(K - root), xi, float(sv[-1])))
    return out


@functools.lru_cache(maxsize=16)
def chain_ops(model: HubbardModel, L: int, which):
    """Cached H (key "H") or t(lambda) (float key) of a chain."""
    if which == "H":
        return hamiltonian_hubbard(model, L, sparse=True)
    return transfer_hubbard(model, float(which), L)


def two_excitation_hubbard(model: HubbardModel, L: int, sol: TwoExcitationSolution, lam: float | None = None) -> ExcitationReport:
    """Eigen-residuals of the two-excitation state of a solved pair."""
    ex = excitations(model)
    n = len(ex)
    v = build_phi2_hubbard(model, L, sol.p1, sol.p2, sol.xi)
    nv = np.linalg.norm(v)
    if nv < 1e-12:
        raise GradingError("state vanishes identically")
    used = [divmod(int(k), n) for k in np.flatnonzero(np.abs(sol.xi) > 1e-12)]
    i, j = used[0]
    E = model.U * L
    for e, p in ((ex[i], sol.p1), (ex[j], sol.p2)):
        if e.barred:
            E += 2 * np.cos(p) - 2 * model.U
    H = chain_ops(model, L, "H")
    t0 = chain_ops(model, L, 0.0)
    details = {}
    if lam is not None:
        w = chain_ops(model, L, lam) @ v
        mu = np.vdot(v, w) / nv**2
        details["t_lambda"] = float(np.linalg.norm(w - mu * v) / nv)
    return ExcitationReport(
        float(np.linalg.norm(H @ v - E * v) / nv),
        float(np.linalg.norm(t0 @ v - np.exp(1j * (sol.p1 + sol.p2)) * v) / nv),
        float(E),
        details=details,
    )


# --------------------------------------------------------------------------
# subsector BAEs


def bae_unbarred(model: HubbardModel, L: int, M_up: int, M_down: int) -> dict:
    """Decoupled unbarred-sector root sets, one family per spin.

    Branch k = 1..M fixes the common phase (-1)^{M-1} w^k with w = e^{2 pi i/M};
    every momentum of that spin then solves e^{iqL} = phase (repeats allowed).
    """
    if M_up < 0 or M_down < 0:
        raise GradingError("excitation counts must be non-negative")
    out = {}
    for spin, M in zip(SPINS, (M_up, M_down)):
        fam = []
        if M and not [i for i in _xx(model, spin).subset_N if i != _vac(_xx(model, spin))]:
            raise GradingError(f"{spin} spin has no unbarred excitations")
        for k in range(1, M + 1):
            z = (-1) ** (M - 1) * np.exp(2j * np.pi * k / M)
            grid = phase_roots(z, L)
            for q in itertools.combinations_with_replacement(grid, M):
                fam.append((complex(z), tuple(float(x) for x in q)))
        out[spin] = fam
    return out


def bae_unbarred_residual(families: dict, L: int) -> float:
    worst = 0.0
    for fam in families.values():
        for z, q in fam:
            for x in q:
                worst = max(worst, abs(np.exp(1j * x * L) - z))
    return float(worst)


def _keys(pairs) -> set:
    return {(round(z.real, 9), round(z.imag, 9), tuple(np.round(np.sort(np.mod(q, 2 * np.pi)), 9))) for z, q in pairs}


def bae_unbarred_via_xx(model: HubbardModel, L: int, M_up: int, M_down: int) -> dict:
    """Cross-check: root-of-unity branch sets of each spin's XX solver."""
    fams = bae_unbarred(model, L, M_up, M_down)
    out = {}
    for spin, M in zip(SPINS, (M_up, M_down)):
        if M == 0:
            out[spin] = True
            continue
        branches = {complex(z) for z, _ in fams[spin]}
        sets = solve_bae_xx(_xx(model, spin), ExcitationSpec(L, M, 0))
        xx_pairs = [
            (complex(r.branch_unbarred), r.q)
            for r in sets
            if any(abs(r.branch_unbarred - z) < 1e-9 for z in branches)
        ]
        out[spin] = _keys(xx_pairs) == _keys(fams[spin])
    return out
