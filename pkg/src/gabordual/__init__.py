"""Compactly supported dual windows for Gabor frames.

Windows g live in V^n_+: n times continuously differentiable, supported
exactly on [-1, 1], nonvanishing inside.  With translation step 1 and any
modulation step b in (0, 1) such a window generates a Gabor frame; this
package constructs all of its compactly supported dual windows from a
parametrizing function z on [0, 1], controls their smoothness, symmetry
and support through z, and verifies every characterizing property
numerically.
"""

from .dualwin import (
    DualWindow,
    build_dual,
    canonical_painless_dual,
    eta_k,
    gamma_k,
    kmax,
    support_set,
)
from .errors import (
    DegenerateSignalError,
    DegenerateWindowError,
    EndpointUndefinedError,
    GaborDualError,
    PainlessRegionError,
    ParameterError,
    PreconditionError,
    UnsupportedOrderError,
)
from .periodization import Periodization, faa_di_bruno, partitions
from .verify import (
    GaborGridParams,
    VerificationReport,
    builtin_signal,
    duality_residual,
    frame_bounds_painless,
    full_report,
    obstruction_jump_sum,
    reconstruct,
    reconstruct_sweep,
    seam_jump_probe,
    support_leak,
    symmetry_defect,
)
from .window import (
    CallablePiece,
    PiecewiseWindow,
    PolyPiece,
    TrigPolyPiece,
    ValidationReport,
    builtin,
    builtin_names,
    dump_window,
    load_window,
    validate_window,
)
from .zgen import (
    BoundaryTargets,
    ZFunction,
    boundary_targets,
    hermite_interpolant,
    recover_z,
    z_min_poly,
    z_small_support,
    z_standard,
)

__version__ = "0.1.0"

__all__ = [
    "DualWindow",
    "build_dual",
    "canonical_painless_dual",
    "eta_k",
    "gamma_k",
    "kmax",
    "support_set",
    "Periodization",
    "faa_di_bruno",
    "partitions",
    "GaborGridParams",
    "VerificationReport",
    "builtin_signal",
    "duality_residual",
    "frame_bounds_painless",
    "full_report",
    "obstruction_jump_sum",
    "reconstruct",
    "reconstruct_sweep",
    "seam_jump_probe",
    "support_leak",
    "symmetry_defect",
    "CallablePiece",
    "PiecewiseWindow",
    "PolyPiece",
    "TrigPolyPiece",
    "ValidationReport",
    "builtin",
    "builtin_names",
    "dump_window",
    "load_window",
    "validate_window",
    "BoundaryTargets",
    "ZFunction",
    "boundary_targets",
    "hermite_interpolant",
    "recover_z",
    "z_min_poly",
    "z_small_support",
    "z_standard",
    "GaborDualError",
    "ParameterError",
    "UnsupportedOrderError",
    "DegenerateWindowError",
    "PreconditionError",
    "PainlessRegionError",
    "EndpointUndefinedError",
    "DegenerateSignalError",
]
