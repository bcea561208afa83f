"""
Closed-form quantities for tunneling through a rectangular barrier.

A particle of mass m (hbar = 1 throughout) meets a barrier of height
V0 = w^2 / (2 m) and extension L.  For sub-barrier wavenumbers
0 < k <= w the wave inside the barrier is evanescent with decay
constant kappa = sqrt(w^2 - k^2) and opacity alpha = kappa * L.  The
transmitted plane-wave component picks up a modulus and a phase

    T(k, L)     = [1 + w^4 sinh^2(alpha) / (4 k^2 kappa^2)]^(-1/2)
    Theta(k, L) = arctan[ (2 k^2 - w^2) tanh(alpha) / (2 k kappa) ]

and the stationary-phase transit time of a packet peaked at k is

    t_T(k, L) = (m / k) * dTheta/dk.

For opaque barriers (alpha >> 1) the transit time saturates at
2 m / (k kappa), independent of L; near k = w it instead grows with L.
The crossover is carried by the saturation shape
G(alpha) = (sinh(alpha) cosh(alpha) - alpha) / sinh^2(alpha), exposed
here as ``plateau_fraction``.

All functions are pure, deterministic, and accept scalar or ndarray
wavenumber input.  The removable 0/0 singularities at k = w are served
by series branches; large-opacity evaluation goes through exp/expm1
rearrangements so nothing overflows for any alpha.

Domain contract: the propagating regime k > w is rejected, not
analytically continued.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
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
]

# Series/direct switch points for the removable-singularity ratios.
# Below _ALPHA_SERIES the truncated expansions are exact to < 1e-12;
# the auxiliary ratios h, sigma, s^2 switch at _ALPHA_AUX because their
# direct forms lose ~8 digits to cancellation near alpha = 1e-4.
_ALPHA_SERIES = 1e-4
_ALPHA_AUX = 1e-2
_ALPHA_SCALED = 0.5


@dataclass(frozen=True)
class BarrierSpec:
    """Rectangular barrier: strength w = sqrt(2 m V0), extension L, mass m."""

    w: float
    L: float
    m: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.w) and self.w > 0):
            raise ValueError(f"barrier strength w must be finite and > 0, got {self.w}")
        if not (math.isfinite(self.L) and self.L >= 0):
            raise ValueError(f"barrier extension L must be finite and >= 0, got {self.L}")
        if not (math.isfinite(self.m) and self.m > 0):
            raise ValueError(f"mass m must be finite and > 0, got {self.m}")

    @property
    def v0(self) -> float:
        """Barrier height V0 = w^2 / (2 m)."""
        return self.w * self.w / (2.0 * self.m)


@dataclass(frozen=True)
class EvanescentParams:
    """Decay constant kappa = sqrt(w^2 - k^2) and opacity alpha = kappa * L."""

    kappa: float
    alpha: float


def _as_domain_array(k, w: float) -> np.ndarray:
    """Validate wavenumbers against (0, w] and return a float ndarray."""
    karr = np.asarray(k, dtype=float)
    if karr.size and (np.any(~np.isfinite(karr)) or np.any(karr <= 0.0)):
        raise ValueError("wavenumber k must be finite and > 0")
    if karr.size and np.any(karr > w):
        raise ValueError(f"wavenumber k must satisfy k <= w = {w} (propagating regime not modeled)")
    return karr


def _scalar_like(out: np.ndarray, template) -> float | np.ndarray:
    return float(out[()]) if np.ndim(template) == 0 else out


def _sinhc_sq(alpha: np.ndarray) -> np.ndarray:
    """(sinh(alpha)/alpha)^2 with a series branch below _ALPHA_AUX."""
    small = alpha < _ALPHA_AUX
    a_ser = np.where(small, alpha, 0.0)
    a2 = a_ser * a_ser
    series = 1.0 + a2 / 3.0 + 2.0 * a2 * a2 / 45.0 + a2 * a2 * a2 / 315.0
    a_dir = np.where(small, 1.0, alpha)
    direct = np.sinh(a_dir) / a_dir
    return np.where(small, series, direct * direct)


def _h_ratio(alpha: np.ndarray) -> np.ndarray:
    """(sinh(2 alpha)/(2 alpha) - 1) / alpha^2 with a series branch."""
    small = alpha < _ALPHA_AUX
    a_ser = np.where(small, alpha, 0.0)
    a2 = a_ser * a_ser
    series = 2.0 / 3.0 + 2.0 * a2 / 15.0 + 4.0 * a2 * a2 / 315.0 + 2.0 * a2 * a2 * a2 / 2835.0
    a_dir = np.where(small, 1.0, alpha)
    direct = (np.sinh(2.0 * a_dir) / (2.0 * a_dir) - 1.0) / (a_dir * a_dir)
    return np.where(small, series, direct)


def _sigma_ratio(alpha: np.ndarray) -> np.ndarray:
    """((sinh(alpha)/alpha)^2 - 1) / alpha^2 with a series branch."""
    small = alpha < _ALPHA_AUX
    a_ser = np.where(small, alpha, 0.0)
    a2 = a_ser * a_ser
    series = 1.0 / 3.0 + 2.0 * a2 / 45.0 + a2 * a2 / 315.0
    a_dir = np.where(small, 1.0, alpha)
    direct = (_sinhc_sq(a_dir) - 1.0) / (a_dir * a_dir)
    return np.where(small, series, direct)


def _tanhc(alpha: np.ndarray) -> np.ndarray:
    """tanh(alpha)/alpha with a series branch below _ALPHA_SERIES."""
    small = alpha < _ALPHA_SERIES
    a_ser = np.where(small, alpha, 0.0)
    a2 = a_ser * a_ser
    series = 1.0 - a2 / 3.0 + 2.0 * a2 * a2 / 15.0
    a_dir = np.where(small, 1.0, alpha)
    return np.where(small, series, np.tanh(a_dir) / a_dir)


def evanescent_params(k: float, b: BarrierSpec) -> EvanescentParams:
    """
    Evanescent decay constant and opacity at wavenumber k.

    Parameters
    ----------
    k : float
        Sub-barrier wavenumber, 0 <= k <= w.
    b : BarrierSpec

    Returns
    -------
    EvanescentParams
        kappa = sqrt(w^2 - k^2) and alpha = kappa * L; both are exactly
        0 at k = w.
    """
    if not (math.isfinite(k) and 0.0 <= k <= b.w):
        raise ValueError(f"wavenumber k must lie in [0, w] = [0, {b.w}], got {k}")
    kappa = math.sqrt(max(b.w * b.w - k * k, 0.0))
    return EvanescentParams(kappa=kappa, alpha=kappa * b.L)


def _kappa_alpha(karr: np.ndarray, b: BarrierSpec) -> tuple[np.ndarray, np.ndarray]:
    kap2 = np.maximum(b.w * b.w - karr * karr, 0.0)
    kappa = np.sqrt(kap2)
    return kappa, kappa * b.L


def transmission_modulus(k, b: BarrierSpec):
    """
    Modulus of the transmission amplitude, T(k, L) in (0, 1].

    Evaluates [1 + w^4 sinh^2(alpha) / (4 k^2 kappa^2)]^(-1/2) through
    log-space so large opacities cannot overflow; at k = w the
    removable singularity gives T = (1 + w^2 L^2 / 4)^(-1/2).

    Parameters
    ----------
    k : float or ndarray
        Wavenumber(s) in (0, w].
    b : BarrierSpec
    """
    karr = _as_domain_array(k, b.w)
    kappa, alpha = _kappa_alpha(karr, b)
    small = alpha < _ALPHA_SERIES

    a_ser = np.where(small, alpha, 0.0)
    x_series = b.w**4 * b.L * b.L * _sinhc_sq(a_ser) / (4.0 * karr * karr)
    out_series = np.exp(-0.5 * np.log1p(x_series))

    a_dir = np.where(small, 1.0, alpha)
    kap_dir = np.where(small, 1.0, kappa)
    em = -np.expm1(-2.0 * a_dir)
    ln_x = (
        4.0 * math.log(b.w)
        - math.log(4.0)
        - 2.0 * np.log(karr)
        - 2.0 * np.log(kap_dir)
        + 2.0 * a_dir
        + 2.0 * np.log(0.5 * em)
    )
    out_direct = np.exp(-0.5 * np.logaddexp(0.0, ln_x))

    return _scalar_like(np.where(small, out_series, out_direct), k)


def transmission_phase(k, b: BarrierSpec):
    """
    Phase Theta(k, L) of the transmission amplitude, in radians.

    Theta = arctan[(2 k^2 - w^2) tanh(alpha) / (2 k kappa)] on the
    principal branch, continuous on (0, w]; at k = w the limit is
    arctan(w L / 2), and Theta vanishes identically for L = 0.
    """
    karr = _as_domain_array(k, b.w)
    kappa, alpha = _kappa_alpha(karr, b)
    small = alpha < _ALPHA_SERIES

    arg_series = (2.0 * karr * karr - b.w**2) * b.L * _tanhc(alpha) / (2.0 * karr)
    kap_dir = np.where(small, 1.0, kappa)
    arg_direct = (2.0 * karr * karr - b.w**2) * np.tanh(alpha) / (2.0 * karr * kap_dir)
    return _scalar_like(np.arctan(np.where(small, arg_series, arg_direct)), k)


def phase_derivative(k, b: BarrierSpec):
    """
    Analytic derivative dTheta/dk (units of length).

    Two exact rearrangements of the closed-form derivative

        dTheta/dk = 2 [w^4 sinh(a) cosh(a) / kappa - (2k^2 - w^2) k^2 L]
                    / [4 k^2 kappa^2 + w^4 sinh^2(a)]

    are used: a kappa-free form for alpha < 0.5, which covers the
    k -> w removable singularity (limit 2L (3 + 2 w^2 L^2 / 3) /
    (4 + w^2 L^2)), and an exp(-2 alpha)-scaled form above it, which
    saturates at 2/kappa without overflow.  Positive everywhere on
    (0, w] for L > 0.
    """
    karr = _as_domain_array(k, b.w)
    kappa, alpha = _kappa_alpha(karr, b)
    kap2 = kappa * kappa
    w4 = b.w**4
    L = b.L
    k2 = karr * karr
    low_mask = alpha < _ALPHA_SCALED

    a_low = np.where(low_mask, alpha, 0.0)
    low = (
        2.0
        * L
        * (3.0 * b.w**2 - 2.0 * kap2 + w4 * L * L * _h_ratio(a_low))
        / (4.0 * k2 + w4 * L * L * _sinhc_sq(a_low))
    )

    a_high = np.where(low_mask, 1.0, alpha)
    kap_high = np.where(low_mask, 1.0, kappa)
    p = np.exp(-2.0 * a_high)
    em = -np.expm1(-2.0 * a_high)
    high = (
        2.0
        * (w4 * em * (1.0 + p) / kap_high - 4.0 * (2.0 * k2 - b.w**2) * k2 * L * p)
        / (16.0 * k2 * kap2 * p + w4 * em * em)
    )
    return _scalar_like(np.where(low_mask, low, high), k)


def phase_time(k, b: BarrierSpec):
    """
    Stationary-phase transit time t_T(k, L) = (m / k) * dTheta/dk.

    Saturates at the opaque plateau 2 m / (k kappa) for alpha >> 1
    (the Hartman regime) and, at k = w, equals
    (2 m L / (3 w)) (2 w^2 L^2 + 9) / (w^2 L^2 + 4), which approaches
    4 m L / (3 w) once w L >> 1.
    """
    karr = _as_domain_array(k, b.w)
    out = (b.m / karr) * np.asarray(phase_derivative(karr, b))
    return _scalar_like(out, k)


def transmission_log_derivative(k, b: BarrierSpec):
    """
    Logarithmic derivative T'(k, L) / T(k, L) of the transmission modulus.

    Strictly positive on (0, w) for L > 0 (the modulus always grows
    with k); the k -> w limit is
    (w L^2 / 4) (1 + w^2 L^2 / 3) / (1 + w^2 L^2 / 4), and is never
    larger than w L^2 / 3.
    """
    karr = _as_domain_array(k, b.w)
    kappa, alpha = _kappa_alpha(karr, b)
    kap2 = kappa * kappa
    w4 = b.w**4
    L = b.L
    k2 = karr * karr
    low_mask = alpha < _ALPHA_SCALED

    a_low = np.where(low_mask, alpha, 0.0)
    low = (
        (w4 * L * L / karr)
        * (1.0 + L * L * (k2 * _h_ratio(a_low) + (b.w**2 - 2.0 * k2) * _sigma_ratio(a_low)))
        / (4.0 * k2 + w4 * L * L * _sinhc_sq(a_low))
    )

    a_high = np.where(low_mask, 1.0, alpha)
    kap_high = np.where(low_mask, 1.0, kappa)
    p = np.exp(-2.0 * a_high)
    em = -np.expm1(-2.0 * a_high)
    high = (
        w4
        * em
        * (k2 * kappa * L * (1.0 + p) + (b.w**2 - 2.0 * k2) * em)
        / (karr * kap_high * kap_high * (16.0 * k2 * kap2 * p + w4 * em * em))
    )
    return _scalar_like(np.where(low_mask, low, high), k)


def plateau_fraction(alpha):
    """
    Saturation shape G(alpha) = (sinh(a) cosh(a) - a) / sinh^2(a).

    Strictly increasing from G(0) = 0 (series 2 alpha / 3 for small
    opacity) to 1 as alpha -> infinity; computed via expm1 so large
    arguments neither overflow nor lose the approach to 1.
    """
    aarr = np.asarray(alpha, dtype=float)
    if aarr.size and (np.any(np.isnan(aarr)) or np.any(aarr < 0.0)):
        raise ValueError("opacity alpha must be >= 0")
    small = aarr < _ALPHA_AUX

    a_ser = np.where(small, aarr, 0.0)
    a2 = a_ser * a_ser
    series = (2.0 / 3.0) * a_ser - (4.0 / 45.0) * a2 * a_ser + (4.0 / 315.0) * a2 * a2 * a_ser

    a_dir = np.where(small | ~np.isfinite(aarr), 1.0, aarr)
    p = np.exp(-2.0 * a_dir)
    em = -np.expm1(-2.0 * a_dir)
    one_m_p2 = -np.expm1(-4.0 * a_dir)
    direct = (one_m_p2 - 4.0 * a_dir * p) / (em * em)
    direct = np.where(np.isposinf(aarr), 1.0, direct)
    return _scalar_like(np.where(small, series, direct), alpha)


def opaque_limit_time(k, b: BarrierSpec, *, kappa_rel_eps: float = 1e-12):
    """
    Opaque-barrier saturation value of the transit time, 2 m / (k kappa).

    Independent of L for fixed k < w; diverges as k -> w.  Returns the
    +infinity sentinel wherever kappa < kappa_rel_eps * w.
    """
    karr = _as_domain_array(k, b.w)
    kappa, _ = _kappa_alpha(karr, b)
    tiny = kappa < kappa_rel_eps * b.w
    out = np.where(tiny, np.inf, 2.0 * b.m / (karr * np.where(tiny, 1.0, kappa)))
    return _scalar_like(out, k)
