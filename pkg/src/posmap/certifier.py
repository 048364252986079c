"""One-sided numerical search for violations of m-positivity.

The map is ``m``-positive iff ``projected_map(B, U, m) >= 0`` for every
unitary ``U``. We minimize ``f(U) = lambda_min(projected_map(B, U, m)) / m``
over ``U = U0 exp(i sum_k x_k G_k)`` with ``G_k`` the ``N^2 - 1`` generalized
Gell-Mann matrices, using Nelder-Mead from several starting unitaries. The
``1/m`` makes ``f`` the smallest eigenvalue of ``(Lambda (x) I_m)`` applied to
the normalized uniform-coefficient Schmidt state.

A violation is a certificate (it can be re-checked from ``(B, U, m)`` alone);
the absence of one is only evidence.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from . import matkernel as mk
from .errors import DimensionMismatch, NotViolating
from .mapcore import BFormMap, canonical_decompose
from .positivity import apply_extended, min_eigenvalue, negativity_threshold, projected_map, projected_state
from .schmidt import BipartitePureState


class Verdict(str, Enum):
    VIOLATION_FOUND = "ViolationFound"
    NO_VIOLATION_FOUND = "NoViolationFound"


@dataclass(frozen=True)
class CertificationConfig:
    m: int
    restarts: int = 64
    max_iters: int = 500
    step_tol: float = 1e-10
    violation_tol: float = 1e-9
    master_seed: int = 0
    initial_step: float = 0.5

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True, eq=False)
class CertificationResult:
    verdict: Verdict
    lambda_min: float
    restarts_used: int
    m: int
    best_unitary: np.ndarray
    witness_unitary: np.ndarray | None = None
    witness_state: BipartitePureState | None = None
    best_restart: int = 0

    @property
    def violated(self) -> bool:
        return self.verdict is Verdict.VIOLATION_FOUND


@lru_cache(maxsize=None)
def gell_mann_basis(n: int) -> tuple[np.ndarray, ...]:
    """The ``n^2 - 1`` traceless Hermitian generalized Gell-Mann matrices."""
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            S = np.zeros((n, n), dtype=np.complex128)
            S[j, k] = S[k, j] = 1.0
            A = np.zeros((n, n), dtype=np.complex128)
            A[j, k] = -1j
            A[k, j] = 1j
            mats += [S, A]
    for l in range(1, n):
        D = np.zeros((n, n), dtype=np.complex128)
        D[np.arange(l), np.arange(l)] = 1.0
        D[l, l] = -l
        mats.append(D * np.sqrt(2.0 / (l * (l + 1))))
    for M in mats:
        M.setflags(write=False)
    return tuple(mats)


def unitary_from_coords(x: np.ndarray, n: int, base: np.ndarray | None = None) -> np.ndarray:
    G = gell_mann_basis(n)
    H = np.tensordot(np.asarray(x, dtype=float), np.array(G), axes=1) if G else np.zeros((n, n))
    U = mk.expm_skew_hermitian(1j * H)
    return U if base is None else base @ U


def objective(B: BFormMap, U, m: int) -> float:
    """``lambda_min(projected_map(B, U, m)) / m``."""
    return min_eigenvalue(projected_map(B, U, m)) / m


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # singular vectors are defined up to phase; make each column's largest entry real positive
    piv = V[np.argmax(np.abs(V), axis=0), np.arange(V.shape[1])]
    return V * (np.abs(piv) / piv)


def seeded_starts(B: BFormMap, m: int, count: int, seed: int = 0) -> list[np.ndarray]:
    """Starting unitaries for the search.

    For each negative Kraus matrix (most negative first) the rows of ``U`` are
    set to its right singular vectors, so the projected block contains that
    Kraus matrix: the top-``m`` singular vectors first, then the remaining
    ``m``-subsets in shuffled order. Seeded starts take at most half of
    ``count`` (at least one when any exist); the rest are Haar-random, the
    ``k``-th drawn from seed ``(seed, k)``.
    """
    N = B.dim
    if not 1 <= m <= N:
        raise DimensionMismatch(f"m must satisfy 1 <= m <= {N}, got {m}")
    if count < 1:
        return []
    dec = canonical_decompose(B)
    thr = negativity_threshold(B)
    rng = np.random.default_rng([seed, 2**31 - 1])
    seeded: list[np.ndarray] = []
    negatives = [k for k in range(len(dec.eigenvalues) - 1, -1, -1) if dec.eigenvalues[k] < -thr]
    per_kraus: list[list[np.ndarray]] = []
    for k in negatives:
        _, _, V = mk.svd(dec.kraus[k])
        V = _fix_phases(V)
        subsets = list(itertools.combinations(range(N), m))
        top, rest = subsets[0], subsets[1:]
        rng.shuffle(rest)
        starts = []
        for sub in [top, *rest]:
            order = list(sub) + [i for i in range(N) if i not in sub]
            # row i of U = i-th chosen right singular vector (transposed)
            starts.append(np.ascontiguousarray(V[:, order].T))
        per_kraus.append(starts)
    # round-robin: every negative Kraus gets its top subset before any second subset
    for group in itertools.zip_longest(*per_kraus):
        seeded.extend(U for U in group if U is not None)
    budget = max(1, count // 2) if seeded else 0
    seeded = seeded[:budget]
    haar = [mk.haar_random_unitary(N, [seed, k]) for k in range(len(seeded), count)]
    return seeded + haar


@dataclass(frozen=True)
class _RestartOutcome:
    index: int
    value: float
    unitary: np.ndarray


def _run_restart(B: BFormMap, m: int, U0: np.ndarray, index: int, config: CertificationConfig) -> _RestartOutcome:
    N = B.dim
    best = {"f": objective(B, U0, m), "U": U0}
    if N == 1 or m == N:
        # I (x) U is unitary at m = N: the spectrum does not depend on U
        return _RestartOutcome(index, best["f"], U0)

    def f(x):
        U = unitary_from_coords(x, N, U0)
        val = min_eigenvalue(projected_map(B, U, m)) / m
        if val < best["f"]:
            best["f"], best["U"] = val, U
        return val

    dimx = N * N - 1
    simplex = np.vstack([np.zeros(dimx), config.initial_step * np.eye(dimx)])
    minimize(
        f,
        np.zeros(dimx),
        method="Nelder-Mead",
        options={
            "maxiter": config.max_iters,
            "xatol": config.step_tol,
            "fatol": config.step_tol,
            "initial_simplex": simplex,
        },
    )
    return _RestartOutcome(index, float(best["f"]), best["U"])


def certify_m_positivity(B: BFormMap, config: CertificationConfig, workers: int = 1) -> CertificationResult:
    """Search for a Schmidt-rank-``m`` state on which ``Lambda (x) I_m`` is negative.

    Restarts are evaluated in index order, in batches of ``workers``. The
    search stops after the batch in which the first violating restart
    (``f < -violation_tol``) occurs; that restart's result is returned and
    ``restarts_used`` is its index + 1. Without a violation all restarts run
    and the lowest ``f`` wins, ties going to the lowest index. The outcome is
    therefore independent of ``workers``.
    """
    m = config.m
    if m > B.dim:
        raise DimensionMismatch(f"m={m} exceeds map dimension {B.dim}")
    starts = seeded_starts(B, m, config.restarts, config.master_seed)
    workers = max(1, int(workers))
    outcomes: list[_RestartOutcome] = []
    violating: _RestartOutcome | None = None

    def run(i):
        return _run_restart(B, m, starts[i], i, config)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for lo in range(0, config.restarts, workers):
            idx = range(lo, min(lo + workers, config.restarts))
            batch = list(pool.map(run, idx)) if pool else [run(i) for i in idx]
            outcomes.extend(batch)
            hits = [o for o in batch if o.value < -config.violation_tol]
            if hits:
                violating = min(hits, key=lambda o: o.index)
                break
    finally:
        if pool:
            pool.shutdown()

    if violating is not None:
        U = violating.unitary
        return CertificationResult(
            verdict=Verdict.VIOLATION_FOUND,
            lambda_min=violating.value,
            restarts_used=violating.index + 1,
            m=m,
            best_unitary=U,
            witness_unitary=U,
            witness_state=projected_state(U, m),
            best_restart=violating.index,
        )
    best = min(outcomes, key=lambda o: (o.value, o.index))
    return CertificationResult(
        verdict=Verdict.NO_VIOLATION_FOUND,
        lambda_min=best.value,
        restarts_used=config.restarts,
        m=m,
        best_unitary=best.unitary,
        best_restart=best.index,
    )


def extract_witness(B: BFormMap, U, m: int, tol: float = 1e-9) -> BipartitePureState:
    """Schmidt-rank-``<= m`` state exposing a violation found at ``(U, m)``.

    The state is ``(1/sqrt m) sum_{i<m} (U^T|i>) (x) |i>``; the extended map
    sends it to ``projected_map(B, U, m) / m``, so its smallest eigenvalue is
    exactly the violating value.
    """
    val = objective(B, U, m)
    if val >= -tol:
        raise NotViolating(f"lambda_min = {val:.3e} is not below -{tol:g}")
    return projected_state(np.asarray(U, dtype=np.complex128), m)


def verify_witness(B: BFormMap, U, m: int, lambda_min: float, tol: float = 1e-9) -> bool:
    """Recompute ``lambda_min`` from ``(B, U, m)`` alone and from the witness state."""
    val = objective(B, U, m)
    if abs(val - lambda_min) > tol or val >= -tol:
        return False
    state = projected_state(np.asarray(U, dtype=np.complex128), m)
    return abs(min_eigenvalue(apply_extended(B, state)) - val) <= tol
