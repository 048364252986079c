"""Positivity analysis of B-form maps.

Covers the action of ``Lambda (x) I_m`` on bipartite pure states, the
rank bound from negative Kraus matrices, the complete-positivity test, the
projected-unitary matrix whose positivity over all ``U`` is equivalent to
``m``-positivity, and structural checks for qubit maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from . import matkernel as mk
from .errors import DimensionMismatch, NotUnitary, WrongDimension
from .mapcore import BFormMap, canonical_decompose, trace_out_output
from .schmidt import BipartitePureState

NEG_TOL = 1e-10
CLUSTER_TOL = 1e-8

Bound = Union[int, Literal["unbounded"]]


@dataclass(frozen=True)
class PositivityReport:
    eigenvalues: np.ndarray  # descending
    kraus_ranks: list[int]
    negative_kraus: list[tuple[float, int]]
    upper_bound: Bound
    cp: bool
    trace_preserving: bool
    hermitian: bool
    degenerate_negative: bool = False

    def as_dict(self) -> dict:
        return {
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "kraus_ranks": list(self.kraus_ranks),
            "negative_kraus": [{"eigenvalue": float(e), "rank": int(r)} for e, r in self.negative_kraus],
            "upper_bound": self.upper_bound,
            "cp": self.cp,
            "trace_preserving": self.trace_preserving,
            "hermitian": self.hermitian,
            "degenerate_negative": self.degenerate_negative,
        }


def negativity_threshold(B: BFormMap, tol: float = NEG_TOL) -> float:
    return tol * B.norm


def apply_extended(B: BFormMap, state: BipartitePureState) -> np.ndarray:
    """``(Lambda (x) I_m)(|psi><psi|)`` on ``C^N (x) C^m``.

    With ``Psi`` the ``N x m`` amplitude matrix this is
    ``(I (x) Psi^T) B (I (x) Psi^T)^dag``.
    """
    N = B.dim
    if state.dims[0] != N:
        raise DimensionMismatch(f"state left dimension {state.dims[0]} != map dimension {N}")
    Q = state.matrix.T  # m x N
    out = np.einsum("ka,xayb,lb->xkyl", Q, B.tensor, Q.conj())
    m = Q.shape[0]
    out = out.reshape(N * m, N * m)
    return 0.5 * (out + out.conj().T)


def min_eigenvalue(H: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(H)[0])


def positivity_upper_bound(B: BFormMap, tol: float = NEG_TOL) -> PositivityReport:
    """Decompose ``B`` and bound its positivity by the negative Kraus ranks.

    A negative Kraus matrix of rank ``r`` rules out ``r``-positivity, so the
    bound is ``min(r) - 1``; ``"unbounded"`` means completely positive.
    """
    dec = canonical_decompose(B)
    thr = negativity_threshold(B, tol)
    neg = [(float(lam), r) for lam, r in zip(dec.eigenvalues, dec.ranks) if lam < -thr]
    bound: Bound = "unbounded" if not neg else min(r for _, r in neg) - 1
    scale = max(B.norm, 1e-300)
    degenerate = False
    lams = [lam for lam, _ in neg]
    for i in range(len(lams) - 1):
        if abs(lams[i] - lams[i + 1]) <= CLUSTER_TOL * scale:
            degenerate = True
    tp = bool(np.max(np.abs(trace_out_output(B) - np.eye(B.dim))) <= 1e-9)
    return PositivityReport(
        eigenvalues=dec.eigenvalues,
        kraus_ranks=list(dec.ranks),
        negative_kraus=neg,
        upper_bound=bound,
        cp=not neg,
        trace_preserving=tp,
        hermitian=mk.is_hermitian(B.matrix),
        degenerate_negative=degenerate,
    )


def is_completely_positive(B: BFormMap, tol: float = NEG_TOL) -> bool:
    """True iff ``lambda_min(B) >= -tol * ||B||_2`` (positivity of the Choi state)."""
    return min_eigenvalue(B.matrix) >= -negativity_threshold(B, tol)


def projected_map(B: BFormMap, U, m: int) -> np.ndarray:
    """Compression of ``(I (x) P U) B (I (x) P U)^dag`` to the ``N*m``-dimensional range.

    ``P`` projects onto the first ``m`` basis vectors, so only the first ``m``
    rows of ``U`` enter. ``projected_map(B, U, m) / m`` is the extended-map
    output on the uniform-coefficient Schmidt state with basis ``U[:m].T``.
    """
    N = B.dim
    U = mk.as_matrix(U, "U")
    if U.shape != (N, N):
        raise DimensionMismatch(f"U must be {N}x{N}, got {U.shape}")
    if not 1 <= m <= N:
        raise DimensionMismatch(f"m must satisfy 1 <= m <= {N}, got {m}")
    if not mk.is_unitary(U):
        raise NotUnitary("U is not unitary within 1e-10")
    W = U[:m]
    out = np.einsum("ka,xayb,lb->xkyl", W, B.tensor, W.conj()).reshape(N * m, N * m)
    return 0.5 * (out + out.conj().T)


def projected_state(U, m: int) -> BipartitePureState:
    """The uniform-coefficient Schmidt state whose extended image is ``projected_map / m``."""
    U = np.asarray(U, dtype=np.complex128)
    N = U.shape[0]
    return BipartitePureState((N, m), U[:m].T.reshape(-1) / np.sqrt(m))


@dataclass(frozen=True)
class QubitCheck:
    """Necessary conditions for 1-positivity of a qubit map.

    Each condition is ``True`` (pass), ``False`` (fail) or ``None`` (not applicable).
    """

    single_negative: bool
    negative_rank_two: bool
    diagonal_conditions: bool | None
    diagonal_values: tuple[float, float] | None = None
    negative_eigenvalues: list[float] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.single_negative and self.negative_rank_two and self.diagonal_conditions is not False

    def as_dict(self) -> dict:
        return {
            "single_negative": self.single_negative,
            "negative_rank_two": self.negative_rank_two,
            "diagonal_conditions": ("not applicable" if self.diagonal_conditions is None
                                    else self.diagonal_conditions),
            "passed": self.passed,
        }


_BLOCK_MASK = np.array([[1, 0, 0, 1],
                        [0, 1, 1, 0],
                        [0, 1, 1, 0],
                        [1, 0, 0, 1]], dtype=bool)


def has_qubit_block_form(B: BFormMap, tol: float = CLUSTER_TOL) -> bool:
    """Whether the eigenvectors can be split between span{|00>,|11>} and span{|01>,|10>}."""
    if B.dim != 2:
        return False
    off = np.abs(B.matrix[~_BLOCK_MASK])
    return bool(off.size == 0 or np.max(off) <= tol * max(B.norm, 1.0))


def qubit_one_positive_check(B: BFormMap, tol: float = NEG_TOL) -> QubitCheck:
    """Three necessary conditions for a qubit map to be 1-positive.

    1. at most one negative eigenvalue;
    2. every negative Kraus matrix has rank 2;
    3. for maps whose eigenvectors split over {|00>,|11>} and {|01>,|10>},
       ``A|a|^2 + B|b|^2 >= 0`` and ``C|c|^2 + D|d|^2 >= 0``. These two numbers
       are the ``|00>`` and ``|01>`` diagonal entries of ``B`` whatever the
       labelling of the eigenpairs inside each block.
    """
    if B.dim != 2:
        raise WrongDimension(f"qubit check needs dim 2, got {B.dim}")
    rep = positivity_upper_bound(B, tol)
    thr = negativity_threshold(B, tol)
    c1 = len(rep.negative_kraus) <= 1
    c2 = all(r == 2 for _, r in rep.negative_kraus)
    c3 = None
    diag = None
    if has_qubit_block_form(B):
        diag = (float(B.matrix[0, 0].real), float(B.matrix[1, 1].real))
        c3 = diag[0] >= -thr and diag[1] >= -thr
    return QubitCheck(c1, c2, c3, diag, [lam for lam, _ in rep.negative_kraus])
