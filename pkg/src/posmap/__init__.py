"""Positivity of linear maps on density matrices via Schmidt states."""

from .certifier import (
    CertificationConfig,
    CertificationResult,
    Verdict,
    certify_m_positivity,
    extract_witness,
    seeded_starts,
)
from .errors import PosmapError
from .mapcore import (
    BFormMap,
    KrausDecomposition,
    apply_map,
    bform_from_kraus,
    builtin_map,
    canonical_decompose,
    choi_state,
    make_qubit_map,
)
from .positivity import (
    PositivityReport,
    apply_extended,
    is_completely_positive,
    positivity_upper_bound,
    projected_map,
    qubit_one_positive_check,
)
from .schmidt import (
    BipartitePureState,
    SchmidtDecomposition,
    maximally_entangled,
    schmidt_decompose,
    schmidt_state,
    witness_state_from_kraus,
)
from .witness import WitnessVerdict, detect_entanglement, partial_transpose, random_separable_state

__version__ = "0.1.0"
