"""Linear maps in B-form and their canonical Kraus decomposition.

A map on ``N x N`` matrices is stored as the ``N^2 x N^2`` matrix

    B[i'*N + i, j'*N + j] = Lambda_{i'i, j'j},   [Lambda(rho)]_{i'j'} = sum_ij Lambda_{i'i,j'j} rho_ij

so that ``B = sum_ij Lambda(E_ij) (x) E_ij`` (output factor first). This is the
unnormalized Choi matrix; :func:`choi_state` divides by ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import matkernel as mk
from .errors import BadParamCount, DimensionMismatch, NotNormalized, UnknownBuiltin

BUILTINS = ("identity", "transpose", "reduction", "depolarizing")
_N_PARAMS = {"identity": 0, "transpose": 0, "reduction": 0, "depolarizing": 1}


@dataclass(frozen=True, eq=False)
class BFormMap:
    """Hermiticity-preserving map on ``dim x dim`` matrices, in B-form.

    ``origin`` records ``(name, params)`` for maps produced by
    :func:`builtin_map`; it is metadata only and never affects numerics.
    """

    dim: int
    matrix: np.ndarray
    origin: tuple[str, tuple[float, ...]] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch("dim must be >= 1")
        n2 = self.dim * self.dim
        M = mk.as_matrix(self.matrix, "B-form matrix")
        if M.shape != (n2, n2):
            raise DimensionMismatch(f"B-form for dim={self.dim} must be {n2}x{n2}, got {M.shape}")
        M = mk.check_hermitian(M, name="B-form matrix").copy()
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def tensor(self) -> np.ndarray:
        """View as ``T[i', i, j', j]``."""
        N = self.dim
        return self.matrix.reshape(N, N, N, N)

    @property
    def norm(self) -> float:
        """Spectral norm of the B-form matrix."""
        return float(np.linalg.norm(self.matrix, 2))


@dataclass(frozen=True)
class KrausDecomposition:
    eigenvalues: np.ndarray
    kraus: list[np.ndarray]
    ranks: list[int]

    def __len__(self):
        return len(self.kraus)


def vec(K: np.ndarray) -> np.ndarray:
    """Row-major flattening ``k = i'*N + i``; inverse of ``unvec``."""
    return np.asarray(K, dtype=np.complex128).reshape(-1)


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim)


def bform_from_kraus(terms: Sequence[tuple[float, np.ndarray]]) -> BFormMap:
    """Build ``B = sum_k w_k vec(K_k) vec(K_k)^dag``.

    Weights may be negative; no complete-positivity check is made.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("at least one Kraus term is required")
    dim = None
    B = None
    for w, K in terms:
        K = mk.as_matrix(K, "Kraus matrix")
        if K.shape[0] != K.shape[1] or (dim is not None and K.shape[0] != dim):
            raise DimensionMismatch(f"Kraus matrices must all be {dim or K.shape[0]}-square, got {K.shape}")
        w = float(w)
        if not np.isfinite(w):
            raise ValueError("Kraus weights must be finite")
        if dim is None:
            dim = K.shape[0]
            B = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
        v = vec(K)
        B += w * np.outer(v, v.conj())
    return BFormMap(dim, B)


def apply_map(B: BFormMap, rho) -> np.ndarray:
    """``[Lambda(rho)]_{i'j'} = sum_ij Lambda_{i'i,j'j} rho_ij``."""
    rho = mk.as_matrix(rho, "rho")
    if rho.shape != (B.dim, B.dim):
        raise DimensionMismatch(f"rho must be {B.dim}x{B.dim}, got {rho.shape}")
    return np.einsum("aibj,ij->ab", B.tensor, rho)


def canonical_decompose(B: BFormMap, rank_tol: float = mk.RANK_TOL) -> KrausDecomposition:
    """Eigen-decompose the B-form; eigenvectors reshaped into orthonormal Kraus matrices.

    Eigenvalues are returned in descending order.
    """
    w, V = mk.eig_hermitian(B.matrix)
    order = np.argsort(w, kind="stable")[::-1]
    w = w[order]
    V = V[:, order]
    kraus = [unvec(V[:, k], B.dim).copy() for k in range(V.shape[1])]
    ranks = [mk.numeric_rank(L, rank_tol) for L in kraus]
    return KrausDecomposition(w, kraus, ranks)


def choi_state(B: BFormMap) -> np.ndarray:
    """``(Lambda (x) I_N)(|Phi><Phi|)`` for the maximally entangled ``|Phi>``, i.e. ``B / N``."""
    return B.matrix / B.dim


def trace_out_output(B: BFormMap) -> np.ndarray:
    """``sum_{i'} Lambda_{i'i,i'j}``; the identity iff the map is trace preserving."""
    return np.einsum("aiaj->ij", B.tensor)


def _matrix_units(N: int):
    for i in range(N):
        for j in range(N):
            E = np.zeros((N, N), dtype=np.complex128)
            E[i, j] = 1.0
            yield i, j, E


def bform_from_action(action, dim: int) -> np.ndarray:
    """``sum_ij action(E_ij) (x) E_ij`` for a callable acting on ``dim x dim`` matrices."""
    B = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i, j, E in _matrix_units(dim):
        B += np.kron(np.asarray(action(E), dtype=np.complex128), E)
    return B


def builtin_map(name: str, dim: int, params: Sequence[float] = ()) -> BFormMap:
    """One of the named maps.

    ``identity``      rho -> rho
    ``transpose``     rho -> rho^T
    ``reduction``     rho -> tr(rho) I - rho
    ``depolarizing``  rho -> (1-p) rho + p tr(rho) I / N     (one parameter ``p``)
    """
    if name not in _N_PARAMS:
        raise UnknownBuiltin(f"unknown builtin map {name!r}; expected one of {', '.join(BUILTINS)}")
    params = tuple(float(p) for p in params)
    if len(params) != _N_PARAMS[name]:
        raise BadParamCount(f"builtin {name!r} takes {_N_PARAMS[name]} parameter(s), got {len(params)}")
    if dim < 1:
        raise DimensionMismatch("dim must be >= 1")
    N = dim
    eye = np.eye(N * N, dtype=np.complex128)
    phi = vec(np.eye(N))  # unnormalized sum_i |ii>
    P = np.outer(phi, phi)  # = N * projector onto |Phi>
    if name == "identity":
        M = P
    elif name == "transpose":
        M = bform_from_action(lambda E: E.T, N)
    elif name == "reduction":
        M = eye - P
    else:
        (p,) = params
        M = (1.0 - p) * P + (p / N) * eye
    return BFormMap(N, M, origin=(name, params))


def make_qubit_map(A: float, B: float, C: float, D: float,
                   a: complex, b: complex, c: complex, d: complex,
                   tol: float = 1e-10) -> BFormMap:
    """Two-qubit B-form with eigenpairs

        A: a|00> + b|11>      B: b*|00> - a*|11>
        C: c|01> + d|10>      D: d*|01> - c*|10>
    """
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > tol or abs(abs(c) ** 2 + abs(d) ** 2 - 1) > tol:
        raise NotNormalized("need |a|^2+|b|^2 = 1 and |c|^2+|d|^2 = 1")
    v = np.array([a, 0, 0, b])
    w = np.array([b.conjugate(), 0, 0, -a.conjugate()])
    x = np.array([0, c, d, 0])
    y = np.array([0, d.conjugate(), -c.conjugate(), 0])
    M = sum(float(lam) * np.outer(u, u.conj()) for lam, u in ((A, v), (B, w), (C, x), (D, y)))
    return BFormMap(2, M)
