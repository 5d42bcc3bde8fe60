"""Executable index theory for closed characteristics on star-shaped hypersurfaces."""

from .angles import Angle, set_precision
from .certificate import CERTIFIED, INCONCLUSIVE, NON_REALIZABLE, CertificateReport, certify
from .ellipsoid import EllipsoidSpec, Irrational, ellipsoid_system
from .errors import (ConsistencyError, DimensionError, DomainError, HypothesisError, MikError,
                     OracleInconclusive, PrecisionError, SchemaError)
from .io import emit_report, emit_system, parse_system
from .iteration import (OrbitRecord, brute_mbar, index_at, index_table, is_nondegenerate, mbar,
                        mean_index, nullity_at, viterbo_at)
from .jump import (JumpTuple, SearchExhausted, compute_offsets, conjugate_pair,
                   find_conjugate_pair, scan_tuples, verify_tuple)
from .morse import betti, betti_sum, euler_hat, identity_residual, morse_inequality, morse_numbers
from .normal_form import D, N1, N2, R, NormalFormDecomposition, diamond_sum, validate_symplectic
from .oracle import oracle_splitting, path_index_oracle
from .splitting import block_splitting, splitting_at

__version__ = "0.1.0"

__all__ = [
    "Angle",
    "set_precision",
    "CERTIFIED",
    "INCONCLUSIVE",
    "NON_REALIZABLE",
    "CertificateReport",
    "certify",
    "EllipsoidSpec",
    "Irrational",
    "ellipsoid_system",
    "ConsistencyError",
    "DimensionError",
    "DomainError",
    "HypothesisError",
    "MikError",
    "OracleInconclusive",
    "PrecisionError",
    "SchemaError",
    "emit_report",
    "emit_system",
    "parse_system",
    "OrbitRecord",
    "brute_mbar",
    "index_at",
    "index_table",
    "is_nondegenerate",
    "mbar",
    "mean_index",
    "nullity_at",
    "viterbo_at",
    "JumpTuple",
    "SearchExhausted",
    "conjugate_pair",
    "find_conjugate_pair",
    "compute_offsets",
    "scan_tuples",
    "verify_tuple",
    "betti",
    "betti_sum",
    "euler_hat",
    "identity_residual",
    "morse_inequality",
    "morse_numbers",
    "D",
    "N1",
    "N2",
    "R",
    "NormalFormDecomposition",
    "diamond_sum",
    "validate_symplectic",
    "oracle_splitting",
    "path_index_oracle",
    "block_splitting",
    "splitting_at",
]
