"""Analytic ROSE protocol model: timing, efficiency, pulse-train capacity.

The storage time and bandwidth are linked through the adiabatic working
point of the rephasing pulses: the minimum delays scale as 1/beta, so a
wider swept band forces slower sweeps and a longer sequence, and the
coherence decay turns that into an efficiency-versus-bandwidth law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RoseTiming:
    """Sequence delays and derived echo epochs (all seconds).

    With the signal at t = 0, the rephasing pulses arrive at t12 and
    t12 + t23; the useful echo is emitted at 2*t23 and the silenced one
    at 2*t12.  The minimum-spacing rule (t12 >= 4*pi/beta and
    t23 >= 8*pi/beta) keeps the truncated pulse supports from
    overlapping the signal, the echoes, or each other.
    """

    t12: float
    t23: float
    beta: float

    @property
    def echo_time(self) -> float:
        return 2.0 * self.t23

    @property
    def silenced_echo_time(self) -> float:
        return 2.0 * self.t12

    @property
    def first_rephase_time(self) -> float:
        return self.t12

    @property
    def second_rephase_time(self) -> float:
        return self.t12 + self.t23

    @property
    def overlap_safe(self) -> bool:
        """True when both delays satisfy the minimum-spacing rule."""
        return (
            self.t12 >= 4.0 * math.pi / self.beta - 1e-15
            and self.t23 >= 8.0 * math.pi / self.beta - 1e-15
        )


def min_timing(beta: float) -> RoseTiming:
    """Shortest overlap-safe sequence for sweep rate beta (rad/s)."""
    if beta <= 0:
        raise ValueError("beta must be > 0")
    return RoseTiming(t12=4.0 * math.pi / beta, t23=8.0 * math.pi / beta, beta=beta)


def t23_min_of_bandwidth(bandwidth: float, rabi_peak: float) -> float:
    """Minimum t23 for a design-point pulse of the given bandwidth.

    beta = Omega_0^2/(2B) gives t23_min = 8*pi/beta = 16*pi*B/Omega_0^2.
    """
    return 16.0 * math.pi * bandwidth / rabi_peak**2


def eta_zero(alphaL: float) -> float:
    """Zero-decoherence efficiency (alphaL)^2 * exp(-alphaL)."""
    if alphaL <= 0:
        raise ValueError("alphaL must be > 0")
    return alphaL**2 * math.exp(-alphaL)


def efficiency_basic(alphaL: float, t23: float, t2: float) -> float:
    """Echo efficiency for storage time 2*t23 and coherence time T2.

    eta = (alphaL)^2 exp(-alphaL) exp(-4 t23 / T2).  ``t2`` may be
    ``math.inf`` for the no-decoherence limit.
    """
    if t23 < 0 or t2 <= 0:
        raise ValueError("t23 must be >= 0 and t2 > 0")
    return eta_zero(alphaL) * math.exp(-4.0 * t23 / t2)


def efficiency_bandwidth(eta0: float, bandwidth: float, rabi_peak: float, t2: float) -> float:
    """Efficiency versus bandwidth at minimum timing.

    Substituting t23 = 16*pi*B/Omega_0^2 into the decay law gives
    eta = eta0 * exp(-64*pi*B / (Omega_0^2 * T2)).
    """
    if eta0 < 0 or bandwidth < 0 or rabi_peak <= 0 or t2 <= 0:
        raise ValueError("inputs must be positive (bandwidth may be 0)")
    return eta0 * math.exp(-64.0 * math.pi * bandwidth / (rabi_peak**2 * t2))


def pulse_capacity(bandwidth: float, rabi_peak: float) -> float:
    """Number of bandwidth-limited pulses fitting in t12 at minimum timing.

    Equals t12 * B/(2*pi) = 4 * B^2/Omega_0^2.  This is *not* the
    multiplexing capacity: the efficiency itself decays with bandwidth,
    so the usable mode count saturates well below this number.
    """
    if bandwidth < rabi_peak:
        raise ValueError("capacity formula requires bandwidth >= rabi_peak (mu >= 1)")
    return 4.0 * bandwidth**2 / rabi_peak**2
