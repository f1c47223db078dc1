"""Dimensionless spectral kernels of the pair-generation theory.

All functions live on the normalized frequency x = omega/omega0 of one
photon of a pair; energy conservation (omega + omega' = 2*omega0) maps a
pair to (x, 2 - x), so the physical band is [0, 2].

Two closed-form variants of the kernel G are shipped side by side:

``g_paper``
    the form with coefficient ``x`` on the logarithm,
    G(x) = (2 + x*ln((2-x)/(2+x)) + i*pi*x/2) / (2*pi)

``g_pv_closed``
    the form with coefficient ``x/2``,
    G(x) = (2 + (x/2)*ln((2-x)/(2+x)) + i*pi*x/2) / (2*pi)

which is what the retarded band kernel actually integrates to:

    G(x) = (1/2pi) * [ PV int_0^2 y^2/(y^2 - x^2) dy + i*pi*x/2 ]

``g_pv`` evaluates that principal-value integral numerically and is the
independent oracle for ``g_pv_closed``.  The two closed forms disagree by
a factor 2 on the log coefficient; only the PV form reproduces the known
resonance drive amplitude near 2.94 (the other gives 3.47), so "pv" is
the default variant everywhere.  The discrepancy is surfaced by
``vpl verify``, never hidden.
"""
from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError

# Guard width around the band edges x = 0 and x = 2 (log singularity at 2).
EDGE_GUARD = 1e-6

VARIANTS = ("pv", "paper")

_PV_ABS_TOL = 1e-10


def _as_band_array(x, lo: float, hi: float):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("normalized frequency must be finite")
    if np.any(arr < lo) or np.any(arr > hi):
        raise DomainError(
            f"normalized frequency must lie in [{lo:g}, {hi:g}]; got {x!r}"
        )
    return arr


def weak_band_shape(x):
    """Drive-independent factor pi*x*(2-x)/2 of the weak spectral rate.

    Defined on the closed band [0, 2]; vanishes at both edges and peaks
    at pi/2 for x = 1.  Accepts scalars or arrays.
    """
    arr = _as_band_array(x, 0.0, 2.0)
    out = 0.5 * np.pi * arr * (2.0 - arr)
    return out if arr.ndim else float(out)


def _log_kernel(x, log_coeff: float):
    arr = _as_band_array(x, EDGE_GUARD, 2.0 - EDGE_GUARD)
    # imaginary part (pi*x/2)/(2*pi) built as x/4 directly so it is exact
    val = ((2.0 + log_coeff * arr * np.log((2.0 - arr) / (2.0 + arr)))
           / (2.0 * np.pi) + 0.25j * arr)
    return val if arr.ndim else complex(val)


def g_paper(x):
    """Kernel G(x) evaluated exactly as printed (coefficient x on the log).

    Imaginary part is x/4 identically.  Domain [EDGE_GUARD, 2 - EDGE_GUARD].
    """
    return _log_kernel(x, 1.0)


def g_pv_closed(x):
    """Closed form of the PV-integral kernel (coefficient x/2 on the log)."""
    return _log_kernel(x, 0.5)


def g_pv(x) -> complex:
    """Kernel from numerical principal-value quadrature (independent oracle).

    Returns (1/2pi) * [ PV int_0^2 y^2/(y^2-x^2) dy + i*pi*x/2 ].  The pole
    is handled by folding the largest symmetric interval [x-d, x+d] onto
    [0, d], where the odd part cancels and the integrand becomes the smooth
    (6x^2 - 2u^2)/(4x^2 - u^2); the pole-free remainder is integrated
    adaptively with geometric subdivision hints toward its boundary layer.
    Scalar only.

    Raises QuadratureError if the integral does not converge to 1e-10.
    """
    arr = _as_band_array(x, EDGE_GUARD, 2.0 - EDGE_GUARD)
    if arr.ndim:
        raise TypeError("g_pv evaluates scalars only; vectorize externally")
    xv = float(arr)

    def f(y):
        return y * y / (y * y - xv * xv)

    def folded(u):
        return (6.0 * xv * xv - 2.0 * u * u) / (4.0 * xv * xv - u * u)

    d = min(xv, 2.0 - xv)
    center, err_c = quad(folded, 0.0, d, epsabs=1e-13, epsrel=1e-12, limit=200)
    if xv <= 1.0:
        a, b, layer_edge = 2.0 * xv, 2.0, 2.0 * xv
        hints = [a + xv * 4.0 ** k for k in range(1, 12)]
    else:
        a, b, layer_edge = 0.0, 2.0 * xv - 2.0, 2.0 * xv - 2.0
        hints = [b - (2.0 - xv) * 4.0 ** k for k in range(1, 12)]
    hints = sorted(h for h in hints if a < h < b)
    if a < b:
        rest, err_r = quad(f, a, b, epsabs=1e-13, epsrel=1e-12, limit=300,
                           points=hints or None)
    else:
        rest, err_r = 0.0, 0.0
    if err_c + err_r > _PV_ABS_TOL:
        raise QuadratureError(
            f"PV quadrature error estimate {err_c + err_r:.2e} exceeds "
            f"{_PV_ABS_TOL:g} at x = {xv}"
        )
    return complex((center + rest) / (2.0 * np.pi) + 0.25j * xv)


def kernel_value(x, variant: str = "pv"):
    """Evaluate the selected kernel variant (closed forms; vectorized)."""
    if variant == "pv":
        return g_pv_closed(x)
    if variant == "paper":
        return g_paper(x)
    raise DomainError(f"unknown kernel variant {variant!r}; expected 'pv' or 'paper'")


def response_r(x, variant: str = "pv"):
    """Pair response R(x) = G(x) * conj(G(2 - x)) for the selected variant.

    Satisfies response_r(2 - x) = conj(response_r(x)); real at x = 1.
    """
    arr = _as_band_array(x, EDGE_GUARD, 2.0 - EDGE_GUARD)
    # the mirror of an admissible point is admissible; clip the one-ulp
    # rounding spill of 2 - x at the guard edges
    mirror = np.clip(2.0 - arr, EDGE_GUARD, 2.0 - EDGE_GUARD)
    val = kernel_value(arr, variant) * np.conj(kernel_value(mirror, variant))
    return val if arr.ndim else complex(val)
