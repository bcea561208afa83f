"""
Tunneling through a rectangular barrier: transmission amplitudes,
stationary-phase transit times, modulated-spectrum maximizers, and
direct wave-packet synthesis (natural units, hbar = 1).
"""

from ._version import __version__
from .barrier import (
    BarrierSpec,
    EvanescentParams,
    evanescent_params,
    opaque_limit_time,
    phase_derivative,
    phase_time,
    plateau_fraction,
    transmission_log_derivative,
    transmission_modulus,
    transmission_phase,
)
from .packets import (
    ComplexField,
    ConvergenceError,
    FieldAxis,
    PeakEstimate,
    QuadratureConfig,
    WindowBoundaryError,
    arrival_time,
    field_scan,
    forward_tail_ratio,
    incident_psi,
    integrate_spectrum,
    peak_of,
    transmitted_psi,
)
from .report import (
    Axis,
    SweepTable,
    emit,
    generate_kmax_table,
    sweep_phase_time,
    transmission_table,
)
from .spectrum import (
    AdmissibilityWarning,
    KmaxResult,
    PacketSpec,
    SpectralRegime,
    boundary_slope,
    distortion_threshold,
    distortion_threshold_exact,
    find_kmax,
    gaussian_amplitude,
    modulated_amplitude,
    modulated_log_slope,
)

__all__ = [
    "__version__",
    "BarrierSpec",
    "EvanescentParams",
    "evanescent_params",
    "transmission_modulus",
    "transmission_phase",
    "transmission_log_derivative",
    "phase_derivative",
    "phase_time",
    "plateau_fraction",
    "opaque_limit_time",
    "AdmissibilityWarning",
    "PacketSpec",
    "SpectralRegime",
    "KmaxResult",
    "gaussian_amplitude",
    "modulated_amplitude",
    "modulated_log_slope",
    "find_kmax",
    "boundary_slope",
    "distortion_threshold",
    "distortion_threshold_exact",
    "FieldAxis",
    "QuadratureConfig",
    "ConvergenceError",
    "WindowBoundaryError",
    "ComplexField",
    "PeakEstimate",
    "integrate_spectrum",
    "transmitted_psi",
    "incident_psi",
    "field_scan",
    "peak_of",
    "arrival_time",
    "forward_tail_ratio",
    "Axis",
    "SweepTable",
    "generate_kmax_table",
    "sweep_phase_time",
    "transmission_table",
    "emit",
]
