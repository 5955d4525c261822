"""Coordinate Bethe ansatz for the universal XX chain.

The default vacuum is (e_v)^L with v = min N. Excitation labels live on a "small"
space: first the other indices of N (unbarred), then those of Nbar (barred).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import chain
from .graded import GradedSpace, GradingError, embed_factors, factor_permutation, residual_value
from .xx import XXModel, hamiltonian_xx, make_projectors, transfer_xx


@dataclass(frozen=True)
class SmallChain:
    """Label space of the excitations above the vacuum."""

    vacuum: int
    unbarred: tuple[int, ...]
    barred: tuple[int, ...]
    space: GradedSpace

    @property
    def labels(self) -> tuple[int, ...]:
        return self.unbarred + self.barred

    @property
    def dim(self) -> int:
        return len(self.labels)

    def pi_circ(self) -> np.ndarray:
        d = np.zeros(self.dim)
        d[: len(self.unbarred)] = 1.0
        return np.diag(d)

    def pi_bar(self) -> np.ndarray:
        return np.eye(self.dim) - self.pi_circ()

    def is_barred(self, j: int) -> bool:
        """j is a 0-based small-chain index."""
        return j >= len(self.unbarred)


def small_chain(model: XXModel, vacuum: int | None = None) -> SmallChain:
    """Small chain above the reference state (e_vacuum)^L, vacuum in N."""
    if model.r == 0:
        raise GradingError("no vacuum: N is empty")
    vac = model.subset_N[0] if vacuum is None else vacuum
    if vac not in model.subset_N:
        raise GradingError(f"vacuum index {vac} is not in N")
    unb = tuple(i for i in model.subset_N if i != vac)
    bar = model.complement
    g = model.space.grades
    gv = g[vac - 1]
    # grades relative to the vacuum vector
    grades = tuple((g[i - 1] + gv) % 2 for i in unb + bar)
    if not grades:
        raise GradingError("model has no excitations")
    return SmallChain(vac, unb, bar, GradedSpace(grades))


def small_perm(sc: SmallChain) -> np.ndarray:
    return factor_permutation([sc.space, sc.space], [1, 0]).astype(complex)


def on_small(op: np.ndarray, sc: SmallChain, M: int, targets: Sequence[int]) -> np.ndarray:
    return embed_factors(op, [sc.space] * M, list(targets))


# --------------------------------------------------------------------------
# states on the big chain


def product_index(model: XXModel, L: int, placements: dict) -> int:
    """Basis index of the vacuum with big-space labels placed at 1-based positions."""
    digits = [model.subset_N[0] - 1] * L
    for x, lab in placements.items():
        digits[x - 1] = lab - 1
    return int(np.ravel_multi_index(digits, [model.s] * L))


def vacuum_state(model: XXModel, L: int) -> np.ndarray:
    v = np.zeros(model.s**L, dtype=complex)
    v[product_index(model, L, {})] = 1.0
    return v


def build_phi1(model: XXModel, L: int, label: int, p: float) -> np.ndarray:
    """sum_x e^{ipx} |label, x>; ``label`` is a big-space index other than the vacuum."""
    sc = small_chain(model)
    if label not in sc.labels:
        raise GradingError(f"label {label} is not an excitation of {model.label()}")
    v = np.zeros(model.s**L, dtype=complex)
    for x in range(1, L + 1):
        v[product_index(model, L, {x: label})] += np.exp(1j * p * x)
    return v


def d_matrix(sc: SmallChain, p: float) -> np.ndarray:
    return 2 * np.cos(p) * sc.pi_bar()


def smatrix_xx(model_or_sc, p1: float, p2: float) -> np.ndarray:
    """S_12(p1, p2) on the small space squared."""
    sc = model_or_sc if isinstance(model_or_sc, SmallChain) else small_chain(model_or_sc)
    pc, pb = sc.pi_circ(), sc.pi_bar()
    P = small_perm(sc)
    return (
        np.exp(-1j * p1) * np.kron(pc, pb)
        + np.exp(1j * p2) * np.kron(pb, pc)
        - P @ (np.kron(pc, pc) + np.kron(pb, pb))
    )


def build_phi2(model: XXModel, L: int, p1: float, p2: float) -> np.ndarray:
    """Two-excitation vector; column c holds the component along u_i (x) u_j."""
    sc = small_chain(model)
    d = sc.dim
    P = small_perm(sc)
    PS = P @ smatrix_xx(sc, p1, p2)
    out = np.zeros((model.s**L, d * d), dtype=complex)
    for x1 in range(1, L + 1):
        for x2 in range(x1 + 1, L + 1):
            op = np.exp(1j * (p1 * x1 + p2 * x2)) * np.eye(d * d) + np.exp(1j * (p2 * x1 + p1 * x2)) * PS
            for k, a in enumerate(sc.labels):
                for l, b in enumerate(sc.labels):
                    idx = product_index(model, L, {x1: a, x2: b})
                    out[idx, :] += op[k * d + l, :]
    return out


def phi2_swap_residual(model: XXModel, L: int, p1: float, p2: float) -> float:
    """Phi2(p2, p1) against Scheck(p2, p1) Phi2(p1, p2)."""
    sc = small_chain(model)
    check = small_perm(sc) @ smatrix_xx(sc, p2, p1)
    a = build_phi2(model, L, p2, p1)
    b = build_phi2(model, L, p1, p2) @ check.T
    return float(np.linalg.norm(a - b))


@dataclass
class EigenReport:
    residual_t0: float
    residual_h: float
    energies: list
    details: dict = field(default_factory=dict)

    def passed(self, tol: float) -> bool:
        return self.residual_t0 <= tol and self.residual_h <= tol


def phi1_report(model: XXModel, L: int, label: int, p: float) -> EigenReport:
    sc = small_chain(model)
    v = build_phi1(model, L, label, p)
    H = hamiltonian_xx(model, L)
    t0 = transfer_xx(model, 0.0, L)
    E = 2 * np.cos(p) if label in sc.barred else 0.0
    nv = np.linalg.norm(v)
    return EigenReport(
        float(np.linalg.norm(t0 @ v - np.exp(1j * p) * v) / nv),
        float(np.linalg.norm(H @ v - E * v) / nv),
        [float(E)],
        {"bae": float(abs(np.exp(1j * p * L) - 1))},
    )


def phi2_component_report(model: XXModel, L: int, p1: float, p2: float, i: int, j: int) -> EigenReport:
    """Eigen-residuals of the (i, j) small-chain component (0-based labels)."""
    sc = small_chain(model)
    d = sc.dim
    v = build_phi2(model, L, p1, p2)[:, i * d + j]
    nv = np.linalg.norm(v)
    if nv == 0:
        raise GradingError("component vanishes identically")
    E = (2 * np.cos(p1) if sc.is_barred(i) else 0.0) + (2 * np.cos(p2) if sc.is_barred(j) else 0.0)
    H = hamiltonian_xx(model, L)
    t0 = transfer_xx(model, 0.0, L)
    return EigenReport(
        float(np.linalg.norm(t0 @ v - np.exp(1j * (p1 + p2)) * v) / nv),
        float(np.linalg.norm(H @ v - E * v) / nv),
        [float(E)],
    )


# --------------------------------------------------------------------------
# pseudo-vacuum


def pseudo_vacuum_check(model: XXModel, L: int, lambdas=(0.0, 0.37, -0.9)) -> dict:
    """Action of t(lambda) on (W)^L against cos^L shift + sin^L sdim(Wbar).

    Wbar is the complement of W; its superdimension counts odd states with
    a minus sign, which is what the supertrace over the auxiliary space picks up.
    """
    if model.r == 0:
        raise GradingError("no vacuum: N is empty")
    digits = chain.basis_digits(model.space, L)
    inW = np.isin(digits, [i - 1 for i in model.subset_N]).all(axis=1)
    idx = np.flatnonzero(inW)
    shift = transfer_xx(model, 0.0, L)[np.ix_(idx, idx)]
    out = {"shift_leaks": 0.0, "transfer": 0.0}
    sdim_bar = sum((-1) ** model.space.grades[i - 1] for i in model.complement)
    for lam in lambdas:
        t = transfer_xx(model, lam, L)
        out["shift_leaks"] = max(out["shift_leaks"], float(np.abs(t[np.ix_(~inW, idx)]).max(initial=0.0)))
        pred = np.cos(lam) ** L * shift + np.sin(lam) ** L * sdim_bar * np.eye(len(idx))
        out["transfer"] = max(out["transfer"], residual_value(t[np.ix_(idx, idx)], pred))
    vac = vacuum_state(model, L)
    H = hamiltonian_xx(model, L)
    out["h_vacuum"] = float(np.linalg.norm(H @ vac))
    t0 = transfer_xx(model, 0.0, L)
    out["t0_vacuum"] = float(np.linalg.norm(t0 @ vac - vac))
    M11 = chain.global_generator(_elem(model.s, model.subset_N[0], model.subset_N[0]), model.space, L)
    out["charge"] = float(np.real(vac.conj() @ M11 @ vac))
    return out


def _elem(s, j, k):
    e = np.zeros((s, s))
    e[j - 1, k - 1] = 1.0
    return e


def lowered_vacuum(model: XXModel, L: int, a: int) -> np.ndarray:
    """(M_{a,v})^L applied to the vacuum (v = min N)."""
    M = chain.global_generator(_elem(model.s, a, model.subset_N[0]), model.space, L)
    v = vacuum_state(model, L)
    for _ in range(L):
        v = M @ v
    return v


# --------------------------------------------------------------------------
# S-matrix identities


def smatrix_identities(model: XXModel, momenta) -> dict:
    """Worst residuals of unitarity, YBE and the braided relations."""
    sc = small_chain(model)
    d = sc.dim
    P = small_perm(sc)
    eye = np.eye(d * d)
    S = lambda a, b: smatrix_xx(sc, a, b)
    Sc = lambda a, b: P @ S(a, b)
    on3 = lambda op, i, j: on_small(op, sc, 3, [i, j])
    out = dict.fromkeys(["unitarity", "YBE", "braided_YBE", "braided_unitarity"], 0.0)
    for p1, p2, p3 in momenta:
        out["unitarity"] = max(out["unitarity"], residual_value(S(p1, p2) @ P @ S(p2, p1) @ P, eye))
        lhs = on3(S(p1, p2), 0, 1) @ on3(S(p1, p3), 0, 2) @ on3(S(p2, p3), 1, 2)
        rhs = on3(S(p2, p3), 1, 2) @ on3(S(p1, p3), 0, 2) @ on3(S(p1, p2), 0, 1)
        out["YBE"] = max(out["YBE"], residual_value(lhs, rhs))
        lhs = on3(Sc(p1, p2), 1, 2) @ on3(Sc(p1, p3), 0, 1) @ on3(Sc(p2, p3), 1, 2)
        rhs = on3(Sc(p2, p3), 0, 1) @ on3(Sc(p1, p3), 1, 2) @ on3(Sc(p1, p2), 0, 1)
        out["braided_YBE"] = max(out["braided_YBE"], residual_value(lhs, rhs))
        out["braided_unitarity"] = max(out["braided_unitarity"], residual_value(Sc(p1, p2) @ Sc(p2, p1), eye))
    return out


# --------------------------------------------------------------------------
# product formula


def precedes_order(j: int, M: int) -> list[int]:
    """j+1, ..., M, 1, ..., j-1 (1-based)."""
    return list(range(j + 1, M + 1)) + list(range(1, j))


def telescoped_product(sc: SmallChain, p: Sequence[float], j: int) -> np.ndarray:
    """S_{j+1,j} ... S_{M,j} S_{1,j} ... S_{j-1,j} on the length-M small chain."""
    M = len(p)
    out = np.eye(sc.dim**M, dtype=complex)
    for k in precedes_order(j, M):
        out = out @ on_small(smatrix_xx(sc, p[k - 1], p[j - 1]), sc, M, [k - 1, j - 1])
    return out


def product_formula_rhs(sc: SmallChain, p: Sequence[float], j: int) -> np.ndarray:
    """Sum over ordered partitions with signed permutation chains."""
    M = len(p)
    pc, pb = sc.pi_circ(), sc.pi_bar()
    P = small_perm(sc)
    others = precedes_order(j, M)
    out = np.zeros((sc.dim**M,) * 2, dtype=complex)
    proj = lambda mat, k: on_small(mat, sc, M, [k - 1])
    for n in range(M):
        for J in itertools.combinations(others, n):
            # combinations keep the precedes order of ``others``
            K = [k for k in others if k not in J]
            chain_op = np.eye(sc.dim**M)
            for jj in J:
                chain_op = chain_op @ on_small(P, sc, M, [j - 1, jj - 1])
            a = proj(pc, j)
            for jj in J:
                a = a @ proj(pc, jj)
            for k in K:
                a = a @ proj(pb, k)
            b = proj(pb, j)
            for jj in J:
                b = b @ proj(pb, jj)
            for k in K:
                b = b @ proj(pc, k)
            term = a * np.exp(1j * (M - 1 - n) * p[j - 1]) + b * np.exp(-1j * sum(p[k - 1] for k in K))
            out += (-1) ** n * chain_op @ term
    return out


def product_formula_check(model: XXModel, p: Sequence[float]) -> dict:
    sc = small_chain(model)
    M = len(p)
    if M > 4:
        raise GradingError("product formula check limited to M <= 4")
    worst = 0.0
    for j in range(1, M + 1):
        worst = max(worst, float(np.abs(telescoped_product(sc, p, j) - product_formula_rhs(sc, p, j)).max()))
    return {"M": M, "max_entry_difference": worst}


def cyclic_small(sc: SmallChain, M: int) -> np.ndarray:
    """P_{12} P_{13} ... P_{1M} on the small chain of length M."""
    P = small_perm(sc)
    out = np.eye(sc.dim**M, dtype=complex)
    for k in range(1, M):
        out = out @ on_small(P, sc, M, [0, k])
    return out


# --------------------------------------------------------------------------
# Bethe equations


@dataclass(frozen=True)
class ExcitationSpec:
    L: int
    unbarred_count: int
    barred_count: int
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        if self.unbarred_count < 0 or self.barred_count < 0:
            raise GradingError("excitation counts must be non-negative")
        if self.unbarred_count + self.barred_count > self.L:
            raise GradingError("more excitations than sites")


@dataclass
class BAERootSet:
    q: tuple
    qbar: tuple
    branch_unbarred: complex
    branch_barred: complex
    admissible: bool = True

    @property
    def energy(self) -> float:
        return float(sum(2 * np.cos(x) for x in self.qbar))

    @property
    def momentum(self) -> float:
        return float(sum(self.q) + sum(self.qbar))

    def residuals(self, L: int) -> list[float]:
        Mb = len(self.qbar)
        out = [abs(np.exp(1j * x * (L - Mb)) - self.branch_unbarred) for x in self.q]
        tot = sum(self.q)
        out += [abs(np.exp(1j * L * x) - self.branch_barred * np.exp(-1j * tot)) for x in self.qbar]
        return out


def wrap(x):
    """Reduce to (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(np.isclose(y, -np.pi, atol=1e-13), np.pi, y)


def phase_roots(phase: complex, n: int) -> np.ndarray:
    """All x in (-pi, pi] with e^{i n x} = phase."""
    base = np.angle(phase)
    return np.sort(wrap((base + 2 * np.pi * np.arange(n)) / n))


def _unique_phases(values, tol=1e-9):
    out = []
    for v in values:
        if not any(abs(v - w) < tol for w in out):
            out.append(complex(v))
    return out


def cyclic_phases(space: GradedSpace, M: int, content=None) -> list[complex]:
    """Eigenvalues of the graded cyclic permutation of M factors of ``space``.

    With ``content`` (count per basis vector) the operator is restricted to
    arrangements with that content.
    """
    if M == 0:
        return [1.0 + 0j]
    sc = SmallChain(0, (), tuple(range(space.dim)), space)
    cyc = cyclic_small(sc, M)
    if content is not None:
        digits = np.indices([space.dim] * M).reshape(M, -1).T
        counts = np.stack([(digits == a).sum(axis=1) for a in range(space.dim)], axis=1)
        idx = np.flatnonzero((counts == np.asarray(content)).all(axis=1))
        if idx.size == 0:
            return []
        cyc = cyc[np.ix_(idx, idx)]
    return _unique_phases(np.linalg.eigvals(cyc))


def _sub_space(sc: SmallChain, barred: bool) -> GradedSpace | None:
    g = sc.space.grades
    n = len(sc.unbarred)
    part = g[n:] if barred else g[:n]
    return GradedSpace(part) if part else None


def solve_bae_xx(model: XXModel, spec: ExcitationSpec, content=None, vacuum=None) -> list[BAERootSet]:
    """Enumerate root sets of the XX Bethe equations.

    Every branch of the root-of-unity choices is returned. A set is
    tagged admissible when its phases are eigenvalues of (-1)^{M-1} times the
    graded cyclic permutation on the label sector (times (-1)^L on the barred
    side for an odd reference state) (``content`` restricts the
    label arrangement: counts of unbarred labels then barred labels).
    """
    sc = small_chain(model, vacuum)
    L, Mu, Mb = spec.L, spec.unbarred_count, spec.barred_count
    nu = len(sc.unbarred)
    if Mu and nu == 0:
        raise GradingError("model has no unbarred excitations")
    if Mb and len(sc.barred) == 0:
        raise GradingError("model has no barred excitations")
    cu = cb = None
    if content is not None:
        cu, cb = tuple(content[:nu]), tuple(content[nu:])
    allowed_u = [(-1) ** (Mu - 1) * z for z in cyclic_phases(_sub_space(sc, False), Mu, cu)] if Mu else [1.0]
    # an odd reference state contributes (-1)^L to the barred phase
    vsign = (-1) ** (model.space.grades[sc.vacuum - 1] * L)
    allowed_b = (
        [vsign * (-1) ** (Mb - 1) * z for z in cyclic_phases(_sub_space(sc, True), Mb, cb)] if Mb else [1.0]
    )
    root_u = [(-1) ** (Mu - 1) * np.exp(2j * np.pi * k / Mu) for k in range(1, Mu + 1)] if Mu else [1.0]
    root_b = [np.exp(2j * np.pi * k / Mb) for k in range(1, Mb + 1)] if Mb else [1.0]
    branches_u = _unique_phases(list(root_u) + list(allowed_u))
    branches_b = _unique_phases(list(root_b) + list(allowed_b))
    out = []
    for wu in branches_u:
        qgrid = phase_roots(wu, L - Mb) if Mu else np.array([])
        q_sets = itertools.combinations_with_replacement(qgrid, Mu) if Mu else [()]
        for q in q_sets:
            tot = float(sum(q))
            for wb in branches_b:
                qbar_sets = (
                    itertools.combinations(phase_roots(wb * np.exp(-1j * tot), L), Mb) if Mb else [()]
                )
                ok = any(abs(wu - z) < 1e-9 for z in allowed_u) and any(abs(wb - z) < 1e-9 for z in allowed_b)
                for qb in qbar_sets:
                    out.append(BAERootSet(tuple(map(float, q)), tuple(map(float, qb)), wu, wb, ok))
    return out


def ed_sector_energies(model: XXModel, L: int) -> dict:
    H = hamiltonian_xx(model, L)
    labels = chain.occupation_labels(model.space, L)
    return chain.sector_spectra(H, labels)


def _distinct(vals, tol):
    out = []
    for v in sorted(vals):
        if not out or abs(v - out[-1]) > tol:
            out.append(float(v))
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


def bae_predictions(model: XXModel, L: int, admissible_only: bool = True) -> dict:
    """Predicted energies per charge sector from the Bethe equations.

    Each sector is described above a reference state (e_v)^L whose flavour v
    in N occurs in the sector (any v in N when none does).
    """
    out = {}
    for occ in _compositions(L, model.s):
        present = [i for i in model.subset_N if occ[i - 1] > 0]
        vac = present[0] if present else model.subset_N[0]
        sc = small_chain(model, vac)
        content = tuple(occ[lab - 1] for lab in sc.labels)
        Mu = sum(content[: len(sc.unbarred)])
        Mb = sum(content) - Mu
        roots = solve_bae_xx(model, ExcitationSpec(L, Mu, Mb), content, vac)
        energies = [r.energy for r in roots if r.admissible or not admissible_only]
        if energies:
            out[tuple(occ)] = energies
    return out


def bae_vs_ed(model: XXModel, L: int, tol: float = 1e-10, exact: bool = False) -> dict:
    """Compare Bethe-equation energies with exact diagonalization per sector.

    ``exact`` also demands that the distinct energies in each sector agree.
    """
    ed = ed_sector_energies(model, L)
    pred = bae_predictions(model, L)
    missing, extra, sector_mismatch = [], [], []
    worst = 0.0
    for lab, energies in pred.items():
        spec = ed.get(lab)
        if spec is None:
            missing.append((lab, None))
            continue
        for e in _distinct(energies, tol):
            d = float(np.min(np.abs(spec - e)))
            worst = max(worst, d)
            if d > tol:
                missing.append((lab, e))
        if exact:
            a = _distinct(energies, tol)
            b = _distinct(spec, tol)
            if len(a) != len(b) or not np.allclose(a, b, atol=tol, rtol=0):
                sector_mismatch.append(lab)
    if exact:
        extra = [lab for lab in ed if lab not in pred]
    return {
        "model": model.label(),
        "L": L,
        "sectors": len(pred),
        "max_distance": worst,
        "missing": missing,
        "sector_mismatch": sector_mismatch,
        "unpredicted_sectors": extra,
        "pass": not missing and not sector_mismatch and not extra,
    }
