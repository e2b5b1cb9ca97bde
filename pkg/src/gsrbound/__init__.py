"""Jacobi operators on Z and Z^2: ground-state representations, eigenvalue
comparison certificates, Lieb-Thirring moment checks and band-edge tools."""

__version__ = "0.1.0"

from .bounds import (
    ComparisonCertificate,
    MomentReport,
    SzegoReport,
    lt_bound_rhs,
    lt_sandwich_check,
    moment_sum,
    normalized_background,
    szego_sum,
    theorem41_certificate,
    theorem43_certificate,
)
from .eigensolve import ClampedLevels, Spectrum, eig_extreme, extract_levels, sturm_count
from .errors import GsrError
from .floquet import FloquetData, discriminant, floquet_data, monodromy
from .groundstate import ComparisonConstants, GroundState, comparison_constants, generic_ground_state, periodic_edge_state
from .lattice import LatticeBox
from .operator import (
    JacobiCoefficients,
    JacobiOperator,
    Perturbation,
    apply,
    apply_perturbation,
    build_operator,
    conjugate_W,
    discretize_schrodinger,
    dominating_potential,
    free_operator,
    shift,
)
from .quadform import commutator_check, gsr_both_sides

__all__ = [name for name in dir() if not name.startswith("_")]
