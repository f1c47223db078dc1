"""Weak and nonperturbative photon-pair spectra and integrated quantities.

Rates are dimensionless spectral densities over x = omega/omega0 (photons
per unit time per unit angular frequency).  Integrated totals are quoted
in units of omega0; dividing by Gamma/omega0 gives the photon number for
a pulse of duration 1/Gamma.  Everything refers to a single reflecting
fiber end; the optional two_end factor doubles the emission.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import kernel
from .errors import NumericalError, QuadratureError, ValidationError
from .fiber import FiberParams, derive_drive, design_pulse

# |1 - nu^2 R| is clipped at this value before squaring so the rate stays
# finite at exact resonance; affected curves carry a saturation flag.
DENOMINATOR_FLOOR = 1e-12

SWEEP_PARAMETERS = ("nu", "intensity", "length", "wavelength")
MAX_SWEEP_POINTS = 1_000_000


def default_grid(grid_points: int = 2001) -> np.ndarray:
    """Uniform grid on [guard, 2-guard], symmetric about x = 1 by construction.

    grid_points must be odd and >= 3 so x = 1 is a sample and the mirror
    pairing grid[i] <-> grid[n-1-i] is bitwise exact.
    """
    if grid_points < 3 or grid_points % 2 == 0:
        raise ValidationError(f"grid_points must be odd and >= 3, got {grid_points}")
    half = (grid_points - 1) // 2
    left = np.linspace(kernel.EDGE_GUARD, 1.0, half, endpoint=False)
    return np.concatenate([left, [1.0], (2.0 - left)[::-1]])


def rate_weak(x, nu: float):
    """Weak-drive spectral rate pi*nu^2*x*(2-x)/2."""
    if nu < 0:
        raise ValidationError(f"drive amplitude nu must be >= 0, got {nu}")
    shape = kernel.weak_band_shape(x)
    return nu * nu * shape


def rate_full(x, nu: float, variant: str = "pv", floor: float = DENOMINATOR_FLOOR,
              floor_policy: str = "floor"):
    """Nonperturbative spectral rate rate_weak / |1 - nu^2 R(x)|^2.

    The denominator magnitude is clipped at ``floor`` before squaring.
    With floor_policy="reject" a clipped denominator raises NumericalError
    instead.
    """
    weak = rate_weak(x, nu)
    den = np.abs(1.0 - nu * nu * kernel.response_r(x, variant))
    clipped = np.any(den < floor)
    if clipped and floor_policy == "reject":
        raise NumericalError(
            f"resonance denominator |1 - nu^2 R| below floor {floor:g} at nu = {nu}"
        )
    den = np.maximum(den, floor)
    out = weak / (den * den)
    return out if np.ndim(x) else float(out)


@dataclass(frozen=True)
class SpectralCurve:
    """Sampled spectral rate density over normalized frequency."""

    grid: np.ndarray
    values: np.ndarray
    nu: float
    variant: str
    mode: str
    saturated: bool = False

    def __post_init__(self):
        if np.any(self.values < 0):
            raise NumericalError("spectral density must be non-negative")


def spectral_curve(nu: float, mode: str = "full", variant: str = "pv",
                   grid_points: int = 2001, two_end: bool = False,
                   floor: float = DENOMINATOR_FLOOR) -> SpectralCurve:
    """Sample the weak or full spectral rate on the symmetric default grid.

    Both rates satisfy rate(2 - x) = rate(x) exactly (pair-frequency
    conservation), so only the lower half-band is evaluated and the upper
    half is its mirror.  Besides enforcing the symmetry structurally this
    avoids the precision loss of forming 2 - x near the band edges.
    """
    grid = default_grid(grid_points)
    half = grid[: (grid_points - 1) // 2 + 1]  # includes the x = 1 sample
    if mode == "weak":
        lower = rate_weak(half, nu)
        saturated = False
    elif mode == "full":
        den = np.abs(1.0 - nu * nu * kernel.response_r(half, variant))
        saturated = bool(np.any(den < floor))
        den = np.maximum(den, floor)
        lower = rate_weak(half, nu) / (den * den)
    else:
        raise ValidationError(f"mode must be 'weak' or 'full', got {mode!r}")
    values = np.concatenate([lower, lower[:-1][::-1]])
    if two_end:
        values = 2.0 * values
    return SpectralCurve(grid=grid, values=values, nu=nu, variant=variant,
                         mode=mode, saturated=saturated)


def _half_crossing(x0, y0, x1, y1, level):
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def curve_peak_and_fwhm(curve: SpectralCurve) -> tuple[float, float]:
    """Peak location and full width at half maximum by linear interpolation."""
    x, y = curve.grid, curve.values
    i = int(np.argmax(y))
    peak_x = float(x[i])
    half = y[i] / 2.0
    above = np.nonzero(y >= half)[0]
    lo_i, hi_i = int(above[0]), int(above[-1])
    lo = x[0] if lo_i == 0 else _half_crossing(x[lo_i - 1], y[lo_i - 1], x[lo_i], y[lo_i], half)
    hi = x[-1] if hi_i == len(x) - 1 else _half_crossing(x[hi_i], y[hi_i], x[hi_i + 1], y[hi_i + 1], half)
    return peak_x, float(hi - lo)


@dataclass(frozen=True)
class EmissionSummary:
    """Integrated emission for one drive setting.

    total_rate      band-integrated rate in units of omega0 (dimensionless)
    total_photons   total_rate / (Gamma/omega0), photons per pulse
    peak_frequency  x of the spectral maximum
    fwhm            full width at half maximum in units of omega0
    """

    nu: float
    variant: str
    mode: str
    total_rate: float
    total_photons: float
    peak_frequency: float
    fwhm: float
    saturated: bool = False


def total_photons(nu: float, gamma_over_omega0: float, variant: str = "pv",
                  mode: str = "full", grid_points: int = 2001,
                  two_end: bool = False) -> EmissionSummary:
    """Integrate the spectral density over the band and summarize the emission.

    Adaptive quadrature at relative tolerance 1e-8; for mode="weak" the
    result is cross-checked against the closed form 2*pi*nu^2/3 and a
    mismatch beyond 1e-6 relative raises QuadratureError.
    """
    if gamma_over_omega0 <= 0:
        raise ValidationError("gamma_over_omega0 must be positive")
    lo, hi = kernel.EDGE_GUARD, 2.0 - kernel.EDGE_GUARD
    if mode == "weak":
        integrand = lambda t: rate_weak(t, nu)
        points = None
    elif mode == "full":
        integrand = lambda t: rate_full(t, nu, variant)
        points = [1.0]
    else:
        raise ValidationError(f"mode must be 'weak' or 'full', got {mode!r}")
    result = quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-8, limit=400,
                  points=points, full_output=1)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        raise QuadratureError(f"band integration failed: {result[3]}")
    if mode == "weak" and nu > 0:
        closed = 2.0 * np.pi * nu * nu / 3.0
        if abs(value - closed) > 1e-6 * closed:
            raise QuadratureError(
                f"weak-band quadrature {value!r} deviates from closed form {closed!r}"
            )
    curve = spectral_curve(nu, mode=mode, variant=variant, grid_points=grid_points)
    peak, fwhm = curve_peak_and_fwhm(curve)
    factor = 2.0 if two_end else 1.0
    rate = factor * value
    return EmissionSummary(nu=nu, variant=variant, mode=mode, total_rate=rate,
                           total_photons=rate / gamma_over_omega0,
                           peak_frequency=peak, fwhm=fwhm,
                           saturated=curve.saturated)


@dataclass(frozen=True)
class YieldReport:
    """Photon yield per excitation quantum, first principles vs closed form."""

    nu: float
    quanta: float
    pair_yield: float
    pair_yield_formula: float
    summary: EmissionSummary


def yield_closed_form(params: FiberParams) -> float:
    """Weak-excitation yield from the printed closed form.

    eta = 16*pi^3*(L/lambda0)^2*n2^2*I*hbar*omega0^2 / (3*S).  Carries the
    same factor-2 excess over the direct band integral as the printed total
    photon number (see notes in ``vpl verify``).
    """
    from .fiber import HBAR

    drive = derive_drive(params)
    ratio = params.length / params.wavelength
    return (16.0 * np.pi ** 3 * ratio ** 2 * params.n2 ** 2 * params.intensity
            * HBAR * drive.omega0 ** 2 / (3.0 * params.cross_section))


def photon_yield(params: FiberParams, mode: str = "weak", variant: str = "pv",
                 nu_override: Optional[float] = None, grid_points: int = 2001,
                 two_end: bool = False) -> YieldReport:
    """Pairs generated per excitation quantum for one pulse.

    Both the total photon number (band quadrature) and the quanta count
    come from first principles; the printed closed form is reported
    alongside for comparison.
    """
    drive = derive_drive(params)
    nu = drive.nu if nu_override is None else float(nu_override)
    quanta = design_pulse(params).quanta
    summary = total_photons(nu, drive.gamma_over_omega0, variant=variant,
                            mode=mode, grid_points=grid_points, two_end=two_end)
    eta = summary.total_photons / quanta if quanta > 0 else 0.0
    return YieldReport(nu=nu, quanta=quanta, pair_yield=eta,
                       pair_yield_formula=yield_closed_form(params),
                       summary=summary)


def find_resonance(variant: str = "pv") -> float:
    """Drive amplitude nu0 at which the band-center denominator vanishes.

    Since Im R(1) = 0, nu0 solves 1 - nu^2 Re R(1) = 0; located by
    bracketed root finding.
    """
    r1 = kernel.response_r(1.0, variant).real
    return float(brentq(lambda nu: 1.0 - nu * nu * r1, 1e-6, 10.0,
                        xtol=1e-14, rtol=8.9e-16))


def max_photons_formula(omega0_over_gamma: float, nu0: float) -> float:
    """Quoted ceiling 9*pi^4*(omega0/Gamma)^2/(4*nu0^2) for the resonant peak.

    Reported verbatim; no independent check is available.
    """
    return 9.0 * np.pi ** 4 * omega0_over_gamma ** 2 / (4.0 * nu0 ** 2)


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: 'nu', 'intensity', 'length' or 'wavelength'."""

    parameter: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValidationError(
                f"unknown sweep parameter {self.parameter!r}; "
                f"expected one of {SWEEP_PARAMETERS}"
            )
        if self.count < 1:
            raise ValidationError("sweep axis needs at least one point")
        if not (np.isfinite(self.start) and np.isfinite(self.stop)):
            raise ValidationError("sweep range must be finite")
        if self.start > self.stop:
            raise ValidationError("sweep range must have start <= stop")

    def grid(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class SweepTable:
    columns: list[str]
    rows: list[list[float]] = field(default_factory=list)

    def argmax_row(self, column: str) -> list[float]:
        j = self.columns.index(column)
        return max(self.rows, key=lambda r: r[j])


def _worker_count() -> int:
    raw = os.environ.get("VPL_THREADS", "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError(f"VPL_THREADS must be an integer, got {raw!r}") from exc
    if n <= 0:
        return min(32, os.cpu_count() or 1)
    return n


def sweep(params: FiberParams, axes: Sequence[SweepAxis], mode: str = "full",
          variant: str = "pv", grid_points: int = 2001,
          two_end: bool = False) -> SweepTable:
    """Evaluate emission over a 1D or 2D parameter grid.

    Rows are emitted in row-major axis order and are independent of the
    worker count (each grid point is evaluated in isolation).
    """
    if not 1 <= len(axes) <= 2:
        raise ValidationError("sweep takes one or two axes")
    total = int(np.prod([ax.count for ax in axes]))
    if total > MAX_SWEEP_POINTS:
        raise ValidationError(f"sweep grid of {total} points exceeds {MAX_SWEEP_POINTS}")

    names = [ax.parameter for ax in axes]
    if len(set(names)) != len(names):
        raise ValidationError("sweep axes must use distinct parameters")
    columns = names + ["total_photons", "pair_yield", "peak_frequency", "fwhm"]

    def evaluate(values: tuple[float, ...]) -> list[float]:
        overrides = dict(zip(names, values))
        nu_override = overrides.pop("nu", None)
        p = params
        if overrides:
            p = FiberParams(
                n2=params.n2,
                length=overrides.get("length", params.length),
                cross_section=params.cross_section,
                wavelength=overrides.get("wavelength", params.wavelength),
                intensity=overrides.get("intensity", params.intensity),
            )
        report = photon_yield(p, mode=mode, variant=variant,
                              nu_override=nu_override, grid_points=grid_points,
                              two_end=two_end)
        s = report.summary
        return list(values) + [s.total_photons, report.pair_yield,
                               s.peak_frequency, s.fwhm]

    combos = list(product(*(ax.grid() for ax in axes)))
    workers = _worker_count()
    if workers > 1 and len(combos) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate, combos))
    else:
        rows = [evaluate(c) for c in combos]
    return SweepTable(columns=columns, rows=rows)
