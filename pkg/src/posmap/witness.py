"""Positive maps as entanglement witnesses, with the partial-transpose oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from . import matkernel as mk
from .errors import DimensionMismatch, NotAState
from .mapcore import BFormMap, builtin_map
from .positivity import is_completely_positive, qubit_one_positive_check

STATE_TOL = 1e-9
WITNESS_TOL = 1e-9

Entangled = Union[bool, Literal["inconclusive"]]


@dataclass(frozen=True)
class WitnessVerdict:
    entangled: Entangled
    lambda_min: float
    map_used: str
    caveat: bool

    def as_dict(self) -> dict:
        return {
            "entangled": self.entangled,
            "lambda_min": self.lambda_min,
            "map_used": self.map_used,
            "caveat": self.caveat,
        }


def _check_dims(rho: np.ndarray, dims) -> tuple[int, int]:
    N, m = (int(x) for x in dims)
    if rho.shape != (N * m, N * m):
        raise DimensionMismatch(f"matrix of shape {rho.shape} does not match dims {(N, m)}")
    return N, m


def partial_transpose(rho, dims) -> np.ndarray:
    """Transpose on the second tensor factor: ``((i,j),(k,l)) -> ((i,l),(k,j))``."""
    rho = mk.as_matrix(rho, "rho")
    N, m = _check_dims(rho, dims)
    return rho.reshape(N, m, N, m).transpose(0, 3, 2, 1).reshape(N * m, N * m)


def validate_state(rho, dims, tol: float = STATE_TOL) -> np.ndarray:
    """Check that ``rho`` is a density matrix on ``dims``; returns it as an array."""
    try:
        rho = mk.check_hermitian(rho, name="density matrix")
    except mk.NotHermitian as exc:
        raise NotAState(str(exc)) from exc
    _check_dims(rho, dims)
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise NotAState(f"trace of density matrix is {tr.real:.12g}; states must be trace-normalized to 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam < -tol:
        raise NotAState(f"density matrix has eigenvalue {lam:.3e} < -{tol:g} (not positive semidefinite)")
    return rho


def apply_extended_mixed(B: BFormMap, rho, dims) -> np.ndarray:
    """``(Lambda (x) I_m)(rho)`` for an arbitrary operator on ``C^N (x) C^m``."""
    rho = mk.as_matrix(rho, "rho")
    N, m = _check_dims(rho, dims)
    if B.dim != N:
        raise DimensionMismatch(f"map dimension {B.dim} != first factor dimension {N}")
    R = rho.reshape(N, m, N, m)
    out = np.einsum("xayb,akbl->xkyl", B.tensor, R).reshape(N * m, N * m)
    return 0.5 * (out + out.conj().T)


def known_positive(B: BFormMap) -> bool:
    """True when ``B`` is verifiably 1-positive.

    Accepts unmodified builtins that are positive (identity, transpose,
    reduction, depolarizing with ``0 <= p <= N/(N-1)``), any completely
    positive map, and qubit maps passing every applicable necessary check.
    """
    if B.origin is not None:
        name, params = B.origin
        ref = builtin_map(name, B.dim, params)
        if np.array_equal(ref.matrix, B.matrix):
            if name in ("identity", "transpose", "reduction"):
                return True
            if name == "depolarizing":
                p = params[0]
                upper = np.inf if B.dim == 1 else B.dim / (B.dim - 1)
                return 0.0 <= p <= upper
    if is_completely_positive(B):
        return True
    if B.dim == 2:
        return qubit_one_positive_check(B).passed
    return False


def map_label(B: BFormMap) -> str:
    if B.origin is None:
        return "custom"
    name, params = B.origin
    return name if not params else f"{name}({', '.join(f'{p:.12g}' for p in params)})"


def detect_entanglement(rho, dims, B: BFormMap, tol: float = WITNESS_TOL) -> WitnessVerdict:
    """Apply ``Lambda (x) I_m`` to ``rho``; a negative eigenvalue proves entanglement.

    The proof is only valid if the map is positive, so ``caveat`` is set
    whenever that cannot be confirmed (see :func:`known_positive`).
    """
    rho = validate_state(rho, dims)
    out = apply_extended_mixed(B, rho, dims)
    lam = float(np.linalg.eigvalsh(out)[0])
    entangled: Entangled = True if lam < -tol else "inconclusive"
    return WitnessVerdict(entangled, lam, map_label(B), not known_positive(B))


def random_pure_state(n: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_separable_state(dims, terms: int, seed=None) -> np.ndarray:
    """``sum_k p_k |a_k><a_k| (x) |b_k><b_k|`` with Haar pure factors and flat-Dirichlet weights."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    N, m = (int(x) for x in dims)
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(terms))
    rho = np.zeros((N * m, N * m), dtype=np.complex128)
    for k in range(terms):
        v = np.kron(random_pure_state(N, rng), random_pure_state(m, rng))
        rho += p[k] * np.outer(v, v.conj())
    return 0.5 * (rho + rho.conj().T)
