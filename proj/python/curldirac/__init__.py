"""Tensor frame reformulation of the Dirac equation.

Bispinors cross the boundary as complex length 4 arrays (xi then eta),
four vectors as real length 4 arrays. See the individual docstrings.
"""

from ._core import (
    BoundState,
    FrameTensors,
    GapPair,
    InputError,
    LorentzTransform,
    NumericalError,
    PencilMatrices,
    PencilSpectrum,
    PlanarGrid,
    PlanarPotential,
    RadialChannel,
    RadialGrid,
    ResidualStats,
    ScaledPotential,
    SquaredIdentityReport,
    SweepResult,
    SweepRow,
    Tridiagonal,
    WeylPacket,
    assemble_pencil,
    assemble_radial_matrix,
    bispinor_from_frame,
    frame_from_bispinor,
    identity_residual,
    make_weyl_packet,
    nearest_gap_state,
    orthonormality_defect,
    pencil_spectrum,
    scaling_sweep,
    solve_bound_states,
    squared_identity_residual,
    symbol_det,
    transform_frame,
    weyl_residual,
)

__version__ = "0.1.0"

__all__ = [
    "BoundState",
    "FrameTensors",
    "GapPair",
    "InputError",
    "LorentzTransform",
    "NumericalError",
    "PencilMatrices",
    "PencilSpectrum",
    "PlanarGrid",
    "PlanarPotential",
    "RadialChannel",
    "RadialGrid",
    "ResidualStats",
    "ScaledPotential",
    "SquaredIdentityReport",
    "SweepResult",
    "SweepRow",
    "Tridiagonal",
    "WeylPacket",
    "assemble_pencil",
    "assemble_radial_matrix",
    "bispinor_from_frame",
    "frame_from_bispinor",
    "identity_residual",
    "make_weyl_packet",
    "nearest_gap_state",
    "orthonormality_defect",
    "pencil_spectrum",
    "scaling_sweep",
    "solve_bound_states",
    "squared_identity_residual",
    "symbol_det",
    "transform_frame",
    "weyl_residual",
]
