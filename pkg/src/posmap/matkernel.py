"""Dense complex linear-algebra kernel.

Thin, validated wrappers around LAPACK (through numpy) for the decompositions
the rest of the package consumes. All tolerances are relative to the scale of
the input so that behaviour does not depend on units.
"""

from __future__ import annotations

import numpy as np

from .errors import NonFinite, NotHermitian, NotSkewHermitian

SYMMETRY_TOL = 1e-10
RANK_TOL = 1e-10


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Return ``M`` as a 2-D complex128 array, rejecting NaN/Inf."""
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{name} contains non-finite entries")
    return arr


def _require_square(M: np.ndarray, name: str) -> None:
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")


def hermiticity_defect(H: np.ndarray) -> float:
    """Max-entry deviation ``||H - H^dag||_max``."""
    return float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0


def is_hermitian(H, tol: float = SYMMETRY_TOL) -> bool:
    H = as_matrix(H)
    if H.shape[0] != H.shape[1]:
        return False
    scale = 1.0 + (float(np.max(np.abs(H))) if H.size else 0.0)
    return hermiticity_defect(H) <= tol * scale


def check_hermitian(H, tol: float = SYMMETRY_TOL, name: str = "matrix") -> np.ndarray:
    H = as_matrix(H, name)
    _require_square(H, name)
    scale = 1.0 + (float(np.max(np.abs(H))) if H.size else 0.0)
    defect = hermiticity_defect(H)
    if defect > tol * scale:
        raise NotHermitian(
            f"{name} is not Hermitian: ||H - H^dag||_max = {defect:.3e} exceeds "
            f"tolerance {tol:g}*(1+||H||_max) = {tol * scale:.3e}"
        )
    return H


def eig_hermitian(H, tol: float = SYMMETRY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray
        Real, ascending.
    eigenvectors : ndarray
        Orthonormal columns, ``H @ v[:, k] = eigenvalues[k] * v[:, k]``.
    """
    H = check_hermitian(H, tol)
    # eigh reads one triangle only; symmetrize so both triangles count
    w, v = np.linalg.eigh(0.5 * (H + H.conj().T))
    return w, v


def svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``M = left @ diag(singulars) @ right^dag``.

    ``right`` holds the right singular vectors as columns (not ``V^dag``).
    """
    M = as_matrix(M)
    left, s, vh = np.linalg.svd(M, full_matrices=False)
    return left, s, vh.conj().T


def polar_decompose(M) -> tuple[np.ndarray, np.ndarray]:
    """Left polar decomposition ``M = unitary @ positive``.

    For singular ``M`` the unitary factor is completed through the SVD,
    ``unitary = W V^dag`` where ``M = W S V^dag``.
    """
    M = as_matrix(M)
    _require_square(M, "matrix")
    W, s, V = svd(M)
    unitary = W @ V.conj().T
    positive = (V * s) @ V.conj().T
    positive = 0.5 * (positive + positive.conj().T)
    return unitary, positive


def numeric_rank(M, rel_tol: float = RANK_TOL) -> int:
    """Number of singular values above ``rel_tol * sigma_max``."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    M = as_matrix(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def expm_skew_hermitian(A, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Matrix exponential of a skew-Hermitian matrix, returned exactly unitary.

    Writes ``A = i H`` with ``H = -i A`` Hermitian, diagonalizes ``H = V diag(t) V^dag``
    and returns ``V diag(exp(i t)) V^dag``.
    """
    A = as_matrix(A)
    _require_square(A, "matrix")
    scale = 1.0 + (float(np.max(np.abs(A))) if A.size else 0.0)
    defect = float(np.max(np.abs(A + A.conj().T))) if A.size else 0.0
    if defect > tol * scale:
        raise NotSkewHermitian(f"A^dag != -A (defect {defect:.3e})")
    H = -1j * A
    t, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    return (V * np.exp(1j * t)) @ V.conj().T


def haar_random_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix with the phases of ``diag(R)`` pushed into
    ``Q`` (Mezzadri's construction). ``seed`` may be an int, a sequence of ints
    or a :class:`numpy.random.Generator`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol)


def random_hermitian(n: int, seed=None, scale: float = 1.0) -> np.ndarray:
    """GUE-style random Hermitian matrix (used by tests and demos)."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (X + X.conj().T)
