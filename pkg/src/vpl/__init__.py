"""vpl: photon-pair generation in fibers with a laser-modulated optical length.

A standing laser wave modulates the optical length of a fiber through the
Kerr nonlinearity; the modulation pumps vacuum fluctuations into photon
pairs emitted by the reflecting end.  This package computes the weak and
nonperturbative pair spectra, the resonance drive amplitude, laboratory
design estimates, and cross-validates the closed forms against an
independent time-domain mode-evolution oracle.
"""
from .bogolyubov import (
    USING_COMPILED,
    BogolyubovCoefficients,
    ModeSystem,
    OracleSpectrum,
    compare_to_analytic,
    evolve,
    extract_coefficients,
    oracle_spectrum,
)
from .errors import (
    DomainError,
    NumericalError,
    QuadratureError,
    ValidationError,
    VplError,
)
from .fiber import (
    DriveParams,
    FiberParams,
    PulseDesign,
    derive_drive,
    design_pulse,
)
from .kernel import g_paper, g_pv, g_pv_closed, response_r, weak_band_shape
from .spectrum import (
    EmissionSummary,
    SpectralCurve,
    SweepAxis,
    YieldReport,
    find_resonance,
    photon_yield,
    rate_full,
    rate_weak,
    spectral_curve,
    sweep,
    total_photons,
)

__version__ = "0.1.0"

__all__ = [
    "BogolyubovCoefficients",
    "DomainError",
    "DriveParams",
    "EmissionSummary",
    "FiberParams",
    "ModeSystem",
    "NumericalError",
    "OracleSpectrum",
    "PulseDesign",
    "QuadratureError",
    "SpectralCurve",
    "SweepAxis",
    "USING_COMPILED",
    "ValidationError",
    "VplError",
    "YieldReport",
    "compare_to_analytic",
    "derive_drive",
    "design_pulse",
    "evolve",
    "extract_coefficients",
    "find_resonance",
    "g_paper",
    "g_pv",
    "g_pv_closed",
    "oracle_spectrum",
    "photon_yield",
    "rate_full",
    "rate_weak",
    "response_r",
    "spectral_curve",
    "sweep",
    "total_photons",
    "weak_band_shape",
]
