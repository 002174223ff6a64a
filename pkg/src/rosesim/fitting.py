"""Parameter extraction for decay, bandwidth and scrambler datasets.

All three fits are linear least squares in transformed coordinates
(log efficiency, or the homogeneous rate directly), mirroring how the
calibration measurements are analysed: first the exponential decay fixes
(eta0, T2), then the ISD coefficient is the only free parameter of the
bandwidth scan, and the scrambler scan gives an independent slope.
A seeded synthetic-data generator exercises each model.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .materials import IsdCoefficient
from .units import TWO_PI


class FitError(ValueError):
    """Dataset unsuitable for the requested fit."""


@dataclass(frozen=True)
class FitResult:
    """Fitted parameters with delta-method standard errors.

    ``params`` and ``std_errors`` share keys; ``std_errors`` values are
    NaN when the fit is exactly determined (n_points == n_params).
    """

    params: dict
    std_errors: dict
    residual_rms: float
    n_points: int
    warnings: tuple = field(default=())


def _ols(x: np.ndarray, y: np.ndarray):
    """Slope/intercept OLS with standard errors; returns a 5-tuple."""
    n = len(x)
    if n < 2:
        raise FitError("need at least 2 points")
    sxx = float(np.sum((x - x.mean()) ** 2))
    if sxx == 0:
        raise FitError("degenerate abscissae: all x identical")
    slope = float(np.sum((x - x.mean()) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    rms = float(np.sqrt(np.mean(resid**2)))
    if n > 2:
        s2 = float(np.sum(resid**2) / (n - 2))
        se_slope = math.sqrt(s2 / sxx)
        se_intercept = math.sqrt(s2 * (1.0 / n + x.mean() ** 2 / sxx))
    else:
        se_slope = se_intercept = float("nan")
    return slope, intercept, se_slope, se_intercept, rms


def fit_exponential_decay(points) -> FitResult:
    """Fit (t23, eta) pairs to eta = eta0 * exp(-4*t23/T2).

    OLS on ln(eta) versus t23; the slope is -4/T2 and the intercept
    ln(eta0).  Standard errors are propagated with the delta method.
    Returns params ``eta0`` (dimensionless) and ``t2`` (seconds).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise FitError("need >= 2 (t23, eta) points")
    t23, eta = pts[:, 0], pts[:, 1]
    if np.any(eta <= 0):
        raise FitError("efficiencies must be > 0 for the log-linear fit")
    slope, intercept, se_slope, se_intercept, rms = _ols(t23, np.log(eta))
    if slope >= 0:
        raise FitError("non-decaying data: fitted slope must be negative")
    t2 = -4.0 / slope
    eta0 = math.exp(intercept)
    warn = () if pts.shape[0] > 2 else ("exactly determined: std errors undefined",)
    return FitResult(
        params={"eta0": eta0, "t2": t2},
        std_errors={"eta0": eta0 * se_intercept, "t2": 4.0 / slope**2 * se_slope},
        residual_rms=rms,
        n_points=pts.shape[0],
        warnings=warn,
    )


def fit_isd_quadratic(
    points,
    eta0: float,
    t2_at_bref: float,
    b_ref: float,
    rabi_peak: float,
) -> FitResult:
    """One-parameter fit of the ISD coefficient from a bandwidth scan.

    With eta0, T2(B_ref) and Omega_0 fixed from prior calibration, the
    log-efficiency model is affine in kappa:

        ln eta + (64*pi/Omega_0^2) * B / T2(B_ref) - ln eta0
            = -kappa * (32/Omega_0^2) * B * (B - B_ref)

    so kappa follows from a through-origin OLS.  Also returns the
    implied bare coherence time ``t2_zero``.  A negative best-fit kappa
    is returned with a warning rather than clipped.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise FitError("need >= 2 (bandwidth, eta) points")
    if eta0 <= 0 or t2_at_bref <= 0 or rabi_peak <= 0 or b_ref < 0:
        raise FitError("calibration parameters must be positive")
    b, eta = pts[:, 0], pts[:, 1]
    if np.any(eta <= 0):
        raise FitError("efficiencies must be > 0 for the log fit")
    y = np.log(eta) - math.log(eta0) + 64.0 * math.pi / rabi_peak**2 * b / t2_at_bref
    x = -(32.0 / rabi_peak**2) * b * (b - b_ref)
    sxx = float(np.sum(x * x))
    if sxx == 0:
        raise FitError("degenerate abscissae: all bandwidths at the reference")
    kappa = float(np.sum(x * y) / sxx)
    resid = y - kappa * x
    rms = float(np.sqrt(np.mean(resid**2)))
    n = pts.shape[0]
    se_kappa = math.sqrt(float(np.sum(resid**2)) / (n - 1) / sxx) if n > 1 else float("nan")
    warn = ()
    if kappa < 0:
        warn = ("unphysical: best-fit kappa < 0",)
    inv_t2_zero = 1.0 / t2_at_bref - kappa * b_ref / TWO_PI
    t2_zero = 1.0 / inv_t2_zero if inv_t2_zero > 0 else float("inf")
    return FitResult(
        params={"kappa_per_hz": kappa, "t2_zero": t2_zero},
        std_errors={
            "kappa_per_hz": se_kappa,
            "t2_zero": t2_zero**2 * b_ref / TWO_PI * se_kappa if math.isfinite(t2_zero) else float("nan"),
        },
        residual_rms=rms,
        n_points=n,
        warnings=warn,
    )


def fit_scrambler_linear(points) -> FitResult:
    """Fit (scrambler bandwidth, 1/T2) pairs to the ISD dephasing line.

    OLS of 1/T2 = 1/T2_0 + kappa * B/(2*pi); requires a scrambler-off
    point (B = 0) so the intercept is anchored.  Returns
    ``inv_t2_zero`` (1/s) and ``kappa_per_hz``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise FitError("need >= 3 (bandwidth, 1/T2) points")
    b, inv_t2 = pts[:, 0], pts[:, 1]
    if not np.any(b == 0):
        raise FitError("need a scrambler-off (B = 0) point")
    slope, intercept, se_slope, se_intercept, rms = _ols(b / TWO_PI, inv_t2)
    return FitResult(
        params={"inv_t2_zero": intercept, "kappa_per_hz": slope},
        std_errors={"inv_t2_zero": se_intercept, "kappa_per_hz": se_slope},
        residual_rms=rms,
        n_points=pts.shape[0],
    )


class DecayModel(enum.Enum):
    """Which law a synthetic dataset follows."""

    STORAGE_TIME = "storage-time"    # eta(t23), exponential
    SCRAMBLER = "scrambler"          # 1/T2(B), linear
    BANDWIDTH_ISD = "bandwidth-isd"  # eta(B), log-quadratic


def generate_synthetic(
    model: DecayModel,
    truth: dict,
    grid,
    noise_pct: float = 0.0,
    seed: int = 0,
) -> np.ndarray:
    """Seeded synthetic dataset for one of the three fit models.

    ``truth`` keys by model:

    * STORAGE_TIME: eta0, t2; grid of t23 (s); noise multiplicative on eta.
    * SCRAMBLER: t2_zero, kappa (IsdCoefficient or s^-1/Hz); grid of
      bandwidths (rad/s); Gaussian noise applied to 1/T2, scaled to
      noise_pct of each value.
    * BANDWIDTH_ISD: eta0, rabi_peak, t2_at_bref, b_ref, kappa; grid of
      bandwidths (rad/s); noise multiplicative on eta.

    Deterministic for a fixed seed; returns an (n, 2) array.
    """
    if noise_pct < 0:
        raise FitError("noise_pct must be >= 0")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise FitError("empty grid")
    rng = np.random.default_rng(seed)
    frac = noise_pct / 100.0

    def _kappa_val(v):
        return v.kappa_per_hz if isinstance(v, IsdCoefficient) else float(v)

    if model is DecayModel.STORAGE_TIME:
        clean = truth["eta0"] * np.exp(-4.0 * grid / truth["t2"])
    elif model is DecayModel.SCRAMBLER:
        clean = 1.0 / truth["t2_zero"] + _kappa_val(truth["kappa"]) * grid / TWO_PI
    elif model is DecayModel.BANDWIDTH_ISD:
        rate = 1.0 / truth["t2_at_bref"] + _kappa_val(truth["kappa"]) * (
            grid - truth["b_ref"]
        ) / TWO_PI
        clean = truth["eta0"] * np.exp(
            -64.0 * math.pi * grid / truth["rabi_peak"] ** 2 * rate
        )
    else:
        raise FitError(f"unknown model {model}")

    noisy = clean * (1.0 + frac * rng.standard_normal(grid.shape)) if frac > 0 else clean
    return np.column_stack([grid, noisy])
