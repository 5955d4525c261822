"""Dense linear algebra on Z2-graded tensor-product spaces.

Operators are stored as ordinary complex matrices acting on the Kronecker
product basis (first factor most significant). The grading only enters
through Koszul signs: in graded tensor products, in permutations of tensor
factors and in (super)traces.

Sign convention for tensor products of homogeneous operators::

    (A (x) B)(u (x) v) = (-1)^{[B][u]} Au (x) Bv

where the grade of a matrix entry B_kl is [k] + [l].
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp

MAX_DIM = 20_000


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradedSpace:
    """Finite dimensional graded space given by the grade of each basis vector."""

    grades: tuple[int, ...]

    def __post_init__(self):
        grades = tuple(int(g) for g in self.grades)
        if len(grades) < 1:
            raise GradingError("a graded space needs at least one basis vector")
        if any(g not in (0, 1) for g in grades):
            raise GradingError(f"grades must be 0 or 1, got {grades}")
        object.__setattr__(self, "grades", grades)

    @classmethod
    def gl(cls, m: int, n: int = 0) -> "GradedSpace":
        """The defining space C^{m|n}: m even vectors followed by n odd ones."""
        if m < 0 or n < 0 or m + n < 1:
            raise GradingError(f"invalid gl({m}|{n})")
        return cls((0,) * m + (1,) * n)

    @classmethod
    def even(cls, dim: int) -> "GradedSpace":
        return cls((0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.grades)

    @property
    def parity(self) -> np.ndarray:
        return np.asarray(self.grades, dtype=np.int8)

    @property
    def is_even(self) -> bool:
        return not any(self.grades)

    def __mul__(self, other: "GradedSpace") -> "GradedSpace":
        """Fused space V (x) W with grades [v] + [w] mod 2."""
        g = (self.parity[:, None] + other.parity[None, :]) % 2
        return GradedSpace(tuple(g.ravel()))

    def __repr__(self):
        m = self.grades.count(0)
        n = self.grades.count(1)
        if self.grades == (0,) * m + (1,) * n:
            return f"GradedSpace(gl({m}|{n}))"
        return f"GradedSpace({self.grades})"


def total_parity(spaces: Sequence[GradedSpace]) -> np.ndarray:
    """Grade of every basis vector of the product space, in Kronecker order."""
    par = np.zeros(1, dtype=np.int8)
    for s in spaces:
        par = ((par[:, None] + s.parity[None, :]) % 2).ravel()
    return par


def entry_parity(spaces: Sequence[GradedSpace]) -> np.ndarray:
    """Matrix of entry grades [i] + [j] on the product space."""
    par = total_parity(spaces)
    return (par[:, None] + par[None, :]) % 2


@dataclass(frozen=True)
class ChainOperator:
    """Dense operator on an ordered tensor product of site spaces."""

    sites: tuple[GradedSpace, ...]
    matrix: np.ndarray

    def __post_init__(self):
        sites = tuple(self.sites)
        object.__setattr__(self, "sites", sites)
        mat = np.asarray(self.matrix)
        side = int(np.prod([s.dim for s in sites]))
        if mat.shape != (side, side):
            raise GradingError(
                f"matrix of shape {mat.shape} does not match sites of total dimension {side}"
            )
        if not np.all(np.isfinite(mat)):
            raise GradingError("operator has non-finite entries")
        object.__setattr__(self, "matrix", mat)

    @property
    def side(self) -> int:
        return self.matrix.shape[0]

    @property
    def parity(self) -> np.ndarray:
        return total_parity(self.sites)

    @classmethod
    def identity(cls, sites: Sequence[GradedSpace]) -> "ChainOperator":
        side = int(np.prod([s.dim for s in sites]))
        return cls(tuple(sites), np.eye(side, dtype=complex))

    def _check_same(self, other: "ChainOperator"):
        if self.sites != other.sites:
            raise GradingError("operators act on different site lists")

    def __matmul__(self, other: "ChainOperator") -> "ChainOperator":
        self._check_same(other)
        return ChainOperator(self.sites, self.matrix @ other.matrix)

    def __add__(self, other: "ChainOperator") -> "ChainOperator":
        self._check_same(other)
        return ChainOperator(self.sites, self.matrix + other.matrix)

    def __sub__(self, other: "ChainOperator") -> "ChainOperator":
        self._check_same(other)
        return ChainOperator(self.sites, self.matrix - other.matrix)

    def __mul__(self, c) -> "ChainOperator":
        return ChainOperator(self.sites, c * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "ChainOperator":
        return ChainOperator(self.sites, -self.matrix)


def as_operator(op, sites: Sequence[GradedSpace]) -> ChainOperator:
    if isinstance(op, ChainOperator):
        return op
    return ChainOperator(tuple(sites), np.asarray(op))


# --------------------------------------------------------------------------
# tensor products and permutations


def graded_kron(A: ChainOperator, B: ChainOperator) -> ChainOperator:
    """Graded tensor product on the concatenated site list."""
    a, b = A.matrix, B.matrix
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise GradingError("dimension cap exceeded")
    # sign (-1)^{([k]+[l]) [j]}: j column of A, (k, l) entry of B
    col_par = A.parity
    b_par = entry_parity(B.sites)
    out = np.kron(a, b).reshape(a.shape[0], b.shape[0], a.shape[1], b.shape[1])
    sign = np.where((col_par[:, None, None] * b_par[None, :, :]) % 2, -1, 1)
    out = out * sign.transpose(1, 0, 2)[None, :, :, :]
    return ChainOperator(A.sites + B.sites, out.reshape(a.shape[0] * b.shape[0], -1))


def _koszul_signs(spaces: Sequence[GradedSpace], order: Sequence[int]):
    """New index and Koszul sign of each basis vector under a factor reordering.

    Factor k of the result is factor order[k] of the input.
    """
    dims = [s.dim for s in spaces]
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise GradingError(f"{order} is not a permutation of {n} factors")
    idx = np.indices(dims).reshape(n, -1)
    grades = np.stack([spaces[k].parity[idx[k]] for k in range(n)])
    pos = np.empty(n, dtype=int)
    pos[list(order)] = np.arange(n)
    expo = np.zeros(idx.shape[1], dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            if pos[a] > pos[b]:
                expo += grades[a] * grades[b]
    new_dims = [dims[k] for k in order]
    new_idx = np.ravel_multi_index(tuple(idx[k] for k in order), new_dims)
    sign = np.where(expo % 2, -1.0, 1.0)
    return new_idx, sign


def factor_permutation(spaces: Sequence[GradedSpace], order: Sequence[int], sparse: bool = False):
    """Signed permutation matrix reordering the tensor factors.

    Maps v_0 (x) ... (x) v_{n-1} to the Koszul-signed product with factor k of
    the result equal to v_{order[k]}.
    """
    new_idx, sign = _koszul_signs(spaces, order)
    side = new_idx.size
    mat = sp.csr_matrix((sign, (new_idx, np.arange(side))), shape=(side, side))
    return mat if sparse else mat.toarray()


def graded_permutation(V: GradedSpace, W: GradedSpace | None = None) -> ChainOperator:
    """P(u (x) w) = (-1)^{[u][w]} w (x) u, mapping V (x) W to W (x) V."""
    W = V if W is None else W
    mat = factor_permutation([V, W], [1, 0]).astype(complex)
    # labelled by the source sites when V != W
    return ChainOperator((V, W), mat)


def embed_factors(op: np.ndarray, spaces: Sequence[GradedSpace], targets: Sequence[int], sparse: bool = False):
    """Embed an operator acting on factors ``targets`` (in that order) of ``spaces``.

    Uses conjugation by a graded factor permutation, which reproduces the
    Koszul rule for odd operators as well.
    """
    targets = list(targets)
    rest = [k for k in range(len(spaces)) if k not in targets]
    order = targets + rest
    side = int(np.prod([s.dim for s in spaces]))
    if side > MAX_DIM:
        raise GradingError(f"dimension {side} exceeds cap {MAX_DIM}")
    rest_dim = int(np.prod([spaces[k].dim for k in rest])) if rest else 1
    Q = factor_permutation(spaces, order, sparse=True)
    if sparse:
        full = sp.kron(sp.csr_matrix(op), sp.identity(rest_dim, format="csr"), format="csr")
        return (Q.T @ full @ Q).tocsr()
    full = np.kron(op, np.eye(rest_dim))
    # Q is a signed permutation, so Q^{-1} = Q^T
    return np.asarray(Q.T @ np.asarray(full @ Q))


def embed(A: ChainOperator, j: int, L: int, site: GradedSpace | None = None) -> ChainOperator:
    """Embed a k-site operator at sites j..j+k-1 (1-based) of an L-site chain.

    A two-site operator with j == L wraps around onto the pair (L, 1).
    """
    k = len(A.sites)
    site = A.sites[0] if site is None else site
    if any(s != site for s in A.sites):
        raise GradingError("embed expects a homogeneous chain")
    if j < 1 or j > L or k > L:
        raise GradingError(f"site index {j} out of range for L={L}")
    spaces = [site] * L
    if j + k - 1 <= L:
        left = ChainOperator.identity([site] * (j - 1)) if j > 1 else None
        right = ChainOperator.identity([site] * (L - j - k + 1)) if j + k - 1 < L else None
        out = A
        if left is not None:
            out = graded_kron(left, out)
        if right is not None:
            out = graded_kron(out, right)
        return out
    targets = [(j - 1 + i) % L for i in range(k)]
    return ChainOperator(tuple(spaces), embed_factors(A.matrix, spaces, targets))


# --------------------------------------------------------------------------
# traces and conjugations


def supertrace(A) -> complex:
    """sum_i (-1)^{[i]} A_ii over the full product space."""
    sign = np.where(A.parity % 2, -1.0, 1.0)
    return complex(np.sum(sign * np.diag(A.matrix)))


def partial_supertrace_first_site(A: ChainOperator, ordinary: bool = False) -> ChainOperator:
    """Supertrace over the first site only; str_1(A (x) B) = str(A) B."""
    first, rest = A.sites[0], A.sites[1:]
    d = first.dim
    D = A.side // d
    blocks = A.matrix.reshape(d, D, d, D)
    diag = np.einsum("aiaj->aij", blocks)
    if ordinary:
        return ChainOperator(rest, diag.sum(axis=0))
    rest_par = entry_parity(rest) if rest else np.zeros((1, 1), dtype=np.int8)
    expo = (first.parity[:, None, None] * (1 + rest_par[None, :, :])) % 2
    sign = np.where(expo, -1.0, 1.0)
    return ChainOperator(rest, np.sum(sign * diag, axis=0))


def super_transpose(A: ChainOperator) -> ChainOperator:
    """(A^st)_ij = (-1)^{([i]+[j])[j]} A_ji."""
    par = A.parity
    expo = ((par[:, None] + par[None, :]) * par[None, :]) % 2
    return ChainOperator(A.sites, np.where(expo, -1.0, 1.0) * A.matrix.T)


def hermitian_conjugate(A: ChainOperator) -> ChainOperator:
    return ChainOperator(A.sites, super_transpose(A).matrix.conj())


# --------------------------------------------------------------------------
# numerics


@dataclass(frozen=True)
class Residual:
    value: float
    tolerance: float

    def __post_init__(self):
        if self.value < 0 or not np.isfinite(self.value):
            raise ValueError(f"invalid residual {self.value}")

    @property
    def passed(self) -> bool:
        return self.value <= self.tolerance

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {"residual": self.value, "tolerance": self.tolerance, "pass": self.passed}


def _mat(A):
    if isinstance(A, ChainOperator):
        return A.matrix
    if sp.issparse(A):
        return A.toarray()
    return np.asarray(A)


def residual_value(A, B) -> float:
    """Frobenius norm of A - B normalised by the matrix side."""
    a, b = _mat(A), _mat(B)
    if a.ndim == 1:
        return float(np.linalg.norm(a - b))
    return float(np.linalg.norm(a - b) / a.shape[0])


def residual(A, B, tol: float = 1e-10) -> Residual:
    return Residual(residual_value(A, B), tol)


def commutator_norm(A, B, tol: float = 1e-10) -> Residual:
    a, b = _mat(A), _mat(B)
    return Residual(float(np.linalg.norm(a @ b - b @ a) / a.shape[0]), tol)


def eigh(A, check_tol: float = 1e-10):
    """Eigen-decomposition of a Hermitian operator, eigenvalues ascending."""
    a = _mat(A)
    side = a.shape[0]
    if np.linalg.norm(a - a.conj().T) > check_tol * side:
        raise GradingError("eigh called on a non-Hermitian operator")
    if np.isrealobj(a) or not np.any(np.imag(a)):
        return scipy.linalg.eigh(np.real(a))
    return scipy.linalg.eigh(a)


def kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)
