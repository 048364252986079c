"""Bipartite pure states, Schmidt decomposition and Kraus witness states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .errors import DimensionMismatch, NotNormalized, RankTooLarge, ZeroMatrix

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class BipartitePureState:
    """Pure state on ``C^{N_left} (x) C^{N_right}``; amplitude ``(i, j)`` at ``i*N_right + j``."""

    dims: tuple[int, int]
    amplitudes: np.ndarray

    def __post_init__(self):
        nl, nr = (int(x) for x in self.dims)
        if nl < 1 or nr < 1:
            raise DimensionMismatch("dims must be positive")
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != nl * nr:
            raise DimensionMismatch(f"expected {nl * nr} amplitudes for dims {(nl, nr)}, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise mk.NonFinite("state amplitudes contain non-finite entries")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"state norm is {norm!r}, expected 1")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "dims", (nl, nr))
        object.__setattr__(self, "amplitudes", amps)

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes as an ``N_left x N_right`` matrix ``Psi[i, j]``."""
        return self.amplitudes.reshape(self.dims)

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    rank: int

    def reassemble(self) -> np.ndarray:
        return np.einsum("i,ai,bi->ab", self.coefficients, self.left_basis, self.right_basis).reshape(-1)


def schmidt_decompose(state: BipartitePureState, rel_tol: float = 1e-10) -> SchmidtDecomposition:
    """``|psi> = sum_i s_i |l_i> (x) |r_i>`` with ``s`` descending; only ``s_i > rel_tol*s_max`` kept."""
    W, s, vh = np.linalg.svd(state.matrix, full_matrices=False)
    r = int(np.count_nonzero(s > rel_tol * s[0]))
    # Psi = W S Vh  =>  |r_i> = row i of Vh
    return SchmidtDecomposition(s[:r], W[:, :r], vh[:r].T, r)


def schmidt_rank(state: BipartitePureState, rel_tol: float = 1e-10) -> int:
    return schmidt_decompose(state, rel_tol).rank


def maximally_entangled(n: int) -> BipartitePureState:
    if n < 1:
        raise ValueError("n must be >= 1")
    return BipartitePureState((n, n), np.eye(n).reshape(-1) / np.sqrt(n))


def product_state(a, b) -> BipartitePureState:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    return BipartitePureState((a.size, b.size), np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b)))


def schmidt_state(coeffs, U, V) -> BipartitePureState:
    """``sum_i s_i (U|i>) (x) (V|i>)`` for ``i < m = len(coeffs)``."""
    s = np.asarray(coeffs, dtype=float).reshape(-1)
    U = mk.as_matrix(U, "U")
    V = mk.as_matrix(V, "V")
    if U.shape != V.shape or U.shape[0] != U.shape[1]:
        raise DimensionMismatch("U and V must be square with equal shape")
    N = U.shape[0]
    m = s.size
    if m > N:
        raise RankTooLarge(f"{m} Schmidt coefficients exceed dimension {N}")
    if abs(float(np.sum(s ** 2)) - 1.0) > NORM_TOL:
        raise NotNormalized("Schmidt coefficients must satisfy sum s_i^2 = 1")
    Psi = (U[:, :m] * s) @ V[:, :m].T
    return BipartitePureState((N, N), Psi.reshape(-1))


def witness_state_from_kraus(L, rank_tol: float = mk.RANK_TOL) -> BipartitePureState:
    """Schmidt witness state of a Kraus matrix.

    With ``L = U M`` (polar form), takes the ``r = rank(L)`` eigenvectors
    ``|i^Q>`` of ``M`` with nonzero eigenvalue and returns
    ``(1/sqrt r) sum_i |i^Q> (x) |i>`` on dims ``(N, r)``.
    """
    L = mk.as_matrix(L, "Kraus matrix")
    _, s, V = mk.svd(L)
    if s.size == 0 or s[0] == 0.0:
        raise ZeroMatrix("Kraus matrix is zero")
    r = int(np.count_nonzero(s > rank_tol * s[0]))
    # eigenvectors of M are the right singular vectors of L
    Psi = V[:, :r] / np.sqrt(r)
    return BipartitePureState((L.shape[0], r), Psi.reshape(-1))
