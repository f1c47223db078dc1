"""Laboratory parameterization of the driven fiber.

Converts fiber geometry, Kerr index and laser intensity into the
dimensionless drive parameters of the theory, and computes the
experiment-design estimates (optimal intensity/energy, excitation quanta).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SPEED_OF_LIGHT = 2.99792458e8  # m/s
HBAR = 1.054571817e-34  # J*s

# The theory assumes the refractive-index modulation depth is tiny; this
# bound comfortably admits every realistic fiber scenario while rejecting
# inputs the linearized wave equation cannot describe.
DELTA_N_MAX = 1e-3


@dataclass(frozen=True)
class FiberParams:
    """Physical description of fiber plus standing laser wave.

    n2            nonlinear refractive index, m^2/W
    length        fiber length L, m
    cross_section fiber cross-section area S, m^2
    wavelength    laser vacuum wavelength, m
    intensity     laser intensity, W/m^2 (0 allowed: undriven fiber)
    """

    n2: float = 3.5e-20
    length: float = 100.0
    cross_section: float = 1e-10
    wavelength: float = 0.5e-6
    intensity: float = 1e6

    def __post_init__(self):
        for name in ("n2", "length", "cross_section", "wavelength"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise ValidationError(f"{name} must be positive, got {value!r}")
        if not np.isfinite(self.intensity) or self.intensity < 0.0:
            raise ValidationError(f"intensity must be >= 0, got {self.intensity!r}")
        if self.delta_n > DELTA_N_MAX:
            raise ValidationError(
                f"index modulation n2*I = {self.delta_n:.3e} exceeds {DELTA_N_MAX:g}; "
                "the linearized model does not apply"
            )

    @property
    def delta_n(self) -> float:
        """Amplitude of the refractive-index oscillation, n2*I."""
        return self.n2 * self.intensity


@dataclass(frozen=True)
class DriveParams:
    """Dimensionless drive state derived from FiberParams.

    amplitude  optical-length oscillation amplitude a = n2*I*L, m
    nu         dimensionless drive rate amplitude omega0*a/c
    omega0     laser angular frequency, rad/s
    gamma      inverse pulse duration c/L, 1/s
    """

    amplitude: float
    nu: float
    omega0: float
    gamma: float

    @property
    def gamma_over_omega0(self) -> float:
        return self.gamma / self.omega0


@dataclass(frozen=True)
class PulseDesign:
    """Optimal-pulse estimates for reaching the resonant drive.

    intensity_opt  intensity giving full half-wavelength amplitude, W/m^2
    energy_opt     pulse energy at that intensity, J
    power_opt      laser power intensity_opt * S, W
    duration       pulse duration L/c, s
    quanta         number of excitation quanta S*I/(Gamma*hbar*omega0)
                   at the configured intensity (not the optimal one)
    """

    intensity_opt: float
    energy_opt: float
    power_opt: float
    duration: float
    quanta: float


def derive_drive(params: FiberParams) -> DriveParams:
    """Dimensionless drive parameters for a given fiber + laser.

    a = n2*I*L, nu = omega0*a/c = 2*pi*n2*I*L/lambda0, omega0 = 2*pi*c/lambda0,
    gamma = c/L.
    """
    amplitude = params.n2 * params.intensity * params.length
    nu = 2.0 * np.pi * amplitude / params.wavelength
    omega0 = 2.0 * np.pi * SPEED_OF_LIGHT / params.wavelength
    gamma = SPEED_OF_LIGHT / params.length
    return DriveParams(amplitude=amplitude, nu=nu, omega0=omega0, gamma=gamma)


def design_pulse(params: FiberParams) -> PulseDesign:
    """Optimal-pulse estimates: I_opt = lambda0/(2*n2*L), E_opt = lambda0*S/(2*n2*c).

    I_opt makes the optical-length amplitude a = lambda0/2, i.e. nu = pi.
    The quanta count uses the intensity stored in ``params``.
    """
    intensity_opt = params.wavelength / (2.0 * params.n2 * params.length)
    energy_opt = params.wavelength * params.cross_section / (2.0 * params.n2 * SPEED_OF_LIGHT)
    duration = params.length / SPEED_OF_LIGHT
    drive = derive_drive(params)
    quanta = (params.cross_section * params.intensity
              / (drive.gamma * HBAR * drive.omega0))
    return PulseDesign(
        intensity_opt=intensity_opt,
        energy_opt=energy_opt,
        power_opt=intensity_opt * params.cross_section,
        duration=duration,
        quanta=quanta,
    )
