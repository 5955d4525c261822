"""Chain-level machinery shared by the XX and Hubbard models.

Transfer matrices are evaluated by applying the auxiliary-space R-matrices
one site at a time to a block of vectors, so the monodromy matrix on
aux (x) chain is never stored.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .graded import MAX_DIM, GradedSpace, GradingError, embed_factors, factor_permutation, total_parity


def check_cap(site: GradedSpace, L: int, extra: int = 1) -> int:
    D = site.dim**L
    if D * extra > MAX_DIM:
        raise GradingError(f"chain dimension {D * extra} exceeds cap {MAX_DIM}")
    return D


def _apply_aux_site(op, X, aux: GradedSpace, sites: Sequence[GradedSpace], j: int):
    """Apply an even operator on (aux, site j) to X of shape (d0, D, N)."""
    d0 = aux.dim
    dims = [s.dim for s in sites]
    dj = dims[j]
    B = int(np.prod(dims[:j])) if j else 1
    A = int(np.prod(dims[j + 1 :])) if j + 1 < len(dims) else 1
    N = X.shape[-1]
    Xr = X.reshape(d0, B, dj, A, N)

    def contract(O, Y):
        Yt = Y.transpose(0, 2, 1, 3, 4).reshape(d0 * dj, B * A * N)
        Z = (O @ Yt).reshape(d0, dj, B, A, N)
        return Z.transpose(0, 2, 1, 3, 4)

    before = total_parity(sites[:j]) if j else np.zeros(1, dtype=np.int8)
    flip = (aux.parity[:, None] ^ aux.parity[None, :]).astype(bool)
    if not flip.any() or not before.any():
        out = contract(op, Xr)
    else:
        O4 = op.reshape(d0, dj, d0, dj)
        same = (O4 * (~flip)[:, None, :, None]).reshape(d0 * dj, -1)
        odd = (O4 * flip[:, None, :, None]).reshape(d0 * dj, -1)
        sign = np.where(before, -1.0, 1.0)[None, :, None, None, None]
        out = contract(same, Xr) + contract(odd, Xr * sign)
    return out.reshape(d0, B * dj * A, N)


def transfer(rmats, aux: GradedSpace, sites: Sequence[GradedSpace], ordinary: bool = False, drmats=None):
    """(Super)trace over the auxiliary space of R_{01} R_{02} ... R_{0L}.

    ``rmats[k]`` acts on aux (x) site k. With ``drmats`` the exact derivative
    (product rule) is returned alongside.
    """
    sites = list(sites)
    D = int(np.prod([s.dim for s in sites]))
    if D * aux.dim > MAX_DIM:
        raise GradingError(f"monodromy dimension {D * aux.dim} exceeds cap {MAX_DIM}")
    d0 = aux.dim
    dtype = np.result_type(*rmats, complex)
    t = np.zeros((D, D), dtype=dtype)
    dt = np.zeros((D, D), dtype=dtype) if drmats is not None else None
    for a in range(d0):
        X = np.zeros((d0, D, D), dtype=dtype)
        X[a] = np.eye(D)
        dX = np.zeros_like(X) if drmats is not None else None
        for k in reversed(range(len(sites))):
            if drmats is not None:
                dX = _apply_aux_site(rmats[k], dX, aux, sites, k) + _apply_aux_site(
                    drmats[k], X, aux, sites, k
                )
            X = _apply_aux_site(rmats[k], X, aux, sites, k)
        s = 1.0 if ordinary or aux.grades[a] == 0 else -1.0
        t += s * X[a]
        if drmats is not None:
            dt += s * dX[a]
    return (t, dt) if drmats is not None else t


def monodromy(rmats, aux: GradedSpace, sites: Sequence[GradedSpace]) -> np.ndarray:
    """Dense monodromy R_{01} ... R_{0L} on aux (x) chain (small chains only)."""
    spaces = [aux] + list(sites)
    side = int(np.prod([s.dim for s in spaces]))
    if side > MAX_DIM:
        raise GradingError(f"monodromy dimension {side} exceeds cap {MAX_DIM}")
    out = np.eye(side, dtype=complex)
    for k, R in enumerate(rmats):
        out = out @ embed_factors(R, spaces, [0, k + 1])
    return out


def local_sum(op, site: GradedSpace, L: int, span: int, sparse: bool = False, periodic: bool = True):
    """sum_j op_{j..j+span-1} with periodic wrap-around."""
    spaces = [site] * L
    D = site.dim**L
    if D > MAX_DIM:
        raise GradingError(f"chain dimension {D} exceeds cap {MAX_DIM}")
    if span > L:
        raise GradingError(f"a {span}-site density does not fit on {L} sites")
    stop = L if periodic else L - span + 1
    out = sp.csr_matrix((D, D), dtype=np.result_type(op, float))
    for j in range(stop):
        targets = [(j + i) % L for i in range(span)]
        out = out + embed_factors(op, spaces, targets, sparse=True)
    return out if sparse else out.toarray()


def site_operator(op, site: GradedSpace, L: int, j: int, sparse: bool = False):
    """One-site operator at site j (0-based), Koszul signs included."""
    return embed_factors(op, [site] * L, [j], sparse=sparse)


def global_generator(op, site: GradedSpace, L: int, sparse: bool = False):
    """M_<1...L> = M_1 + ... + M_L."""
    return local_sum(op, site, L, 1, sparse=sparse)


def cyclic_shift(site: GradedSpace, L: int) -> np.ndarray:
    """Graded shift moving the content of site k to site k+1 (mod L)."""
    order = [(k - 1) % L for k in range(L)]
    return factor_permutation([site] * L, order)


def basis_digits(site: GradedSpace, L: int) -> np.ndarray:
    """Local basis index of each site for every chain basis vector, shape (D, L)."""
    return np.indices([site.dim] * L).reshape(L, -1).T


def occupation_labels(site: GradedSpace, L: int) -> list[tuple[int, ...]]:
    """Cartan charges (count of each local basis vector) of every basis state."""
    digits = basis_digits(site, L)
    counts = np.stack([(digits == a).sum(axis=1) for a in range(site.dim)], axis=1)
    return [tuple(int(c) for c in row) for row in counts]


def sectors(labels) -> dict:
    out = defaultdict(list)
    for i, lab in enumerate(labels):
        out[lab].append(i)
    return {k: np.asarray(v) for k, v in out.items()}


def sector_spectra(H, labels) -> dict:
    """Eigenvalues of H restricted to each charge sector."""
    H = H.toarray() if sp.issparse(H) else np.asarray(H)
    out = {}
    for lab, idx in sectors(labels).items():
        block = H[np.ix_(idx, idx)]
        if np.linalg.norm(block - block.conj().T) > 1e-10 * max(1, len(idx)):
            raise GradingError("sector block is not Hermitian")
        out[lab] = np.linalg.eigvalsh(block)
    return out
