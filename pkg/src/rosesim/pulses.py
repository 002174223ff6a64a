"""Complex hyperbolic secant (CHS) rephasing pulses.

A CHS pulse has envelope Omega_0*sech(beta*(t - t_c)) and an
instantaneous frequency omega_0 + mu*beta*tanh(beta*(t - t_c)); it
performs a rapid adiabatic passage that inverts every ion within the
swept bandwidth 2*mu*beta.  ``design_pulse`` picks (mu, beta) for a
target bandwidth and available Rabi frequency at the working adiabatic
point mu*beta^2 = Omega_0^2/4.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .units import TWO_PI, khz_from_rad_per_s, rad_per_s_from_khz, seconds_from_us, us_from_seconds


class PulseDesignError(ValueError):
    """Requested pulse parameters cannot satisfy the protocol constraints."""


class WavevectorTag(enum.Enum):
    """Which beam a pulse travels on; fixes its spatial phase k.x."""

    SIGNAL = "signal"
    REPHASE = "rephase"


@dataclass(frozen=True)
class ChsPulse:
    """One chirped rephasing pulse.

    Attributes
    ----------
    rabi_peak : float
        Peak Rabi frequency Omega_0, rad/s (> 0).
    rate : float
        Sweep rate beta, rad/s (> 0); 1/beta is the pulse duration scale.
    chirp_factor : float
        Dimensionless mu >= 1 for full inversion across the band.
    center_detuning : float
        Sweep center omega_0 relative to line center, rad/s.
    arrival_time : float
        Envelope peak time, seconds.
    tag : WavevectorTag
        Beam assignment for spatial phase matching.
    """

    rabi_peak: float
    rate: float
    chirp_factor: float
    center_detuning: float = 0.0
    arrival_time: float = 0.0
    tag: WavevectorTag = WavevectorTag.REPHASE

    def __post_init__(self):
        if self.rabi_peak <= 0:
            raise PulseDesignError("rabi_peak must be > 0")
        if self.rate <= 0:
            raise PulseDesignError("rate must be > 0")
        if self.chirp_factor <= 0:
            raise PulseDesignError("chirp_factor must be > 0")

    @property
    def bandwidth(self) -> float:
        """Swept (inversion) bandwidth 2*mu*beta, rad/s."""
        return 2.0 * self.chirp_factor * self.rate

    @property
    def support_half_width(self) -> float:
        """Truncated half support 2*pi/beta used by the sequencer.

        The envelope at the cutoff is sech(2*pi) ~ 3.7e-3 of the peak, and
        consecutive pulse centers spaced 4*pi/beta apart never overlap.
        """
        return TWO_PI / self.rate

    @property
    def is_protocol_valid(self) -> bool:
        """True at the working design point (adiabaticity 1/4, mu >= 1)."""
        return self.chirp_factor >= 1.0 and abs(adiabaticity_ratio(self) - 0.25) < 1e-9


def envelope(p: ChsPulse, t):
    """Rabi envelope Omega_0*sech(beta*(t - arrival)), rad/s.

    Accepts scalar or ndarray times.
    """
    x = p.rate * (np.asarray(t, dtype=float) - p.arrival_time)
    out = p.rabi_peak / np.cosh(x)
    return float(out) if np.ndim(t) == 0 else out


def instantaneous_detuning(p: ChsPulse, t):
    """Instantaneous sweep frequency omega_0 + mu*beta*tanh(...), rad/s."""
    x = p.rate * (np.asarray(t, dtype=float) - p.arrival_time)
    out = p.center_detuning + p.chirp_factor * p.rate * np.tanh(x)
    return float(out) if np.ndim(t) == 0 else out


def phase(p: ChsPulse, t):
    """Accumulated drive phase, rad, with the reference phi(arrival) = 0.

    Analytic integral of the instantaneous detuning:
    mu*ln(cosh(beta*(t - t_c))) + omega_0*(t - t_c).
    """
    dt = np.asarray(t, dtype=float) - p.arrival_time
    x = p.rate * dt
    # log(cosh) via |x| + log1p(exp(-2|x|)) - log 2 stays finite for large sweeps
    log_cosh = np.abs(x) + np.log1p(np.exp(-2.0 * np.abs(x))) - math.log(2.0)
    out = p.chirp_factor * log_cosh + p.center_detuning * dt
    return float(out) if np.ndim(t) == 0 else out


def adiabaticity_ratio(p: ChsPulse) -> float:
    """mu*beta^2 / Omega_0^2; the working design point returns 1/4."""
    if p.rabi_peak == 0:
        raise PulseDesignError("rabi_peak must be nonzero")
    return p.chirp_factor * p.rate**2 / p.rabi_peak**2


def design_pulse(
    bandwidth: float,
    rabi_peak: float,
    center_detuning: float = 0.0,
    arrival_time: float = 0.0,
    tag: WavevectorTag = WavevectorTag.REPHASE,
) -> ChsPulse:
    """Design a protocol-valid CHS pulse for a target bandwidth.

    Solving 2*mu*beta = B together with mu*beta^2 = Omega_0^2/4 gives
    beta = Omega_0^2/(2B) and mu = B^2/Omega_0^2.  Requires mu >= 1,
    i.e. B >= Omega_0, for the inversion to cover the full band.

    Parameters are in rad/s; raises :class:`PulseDesignError` when the
    bandwidth sits below the available Rabi frequency.
    """
    if bandwidth <= 0 or rabi_peak <= 0:
        raise PulseDesignError("bandwidth and rabi_peak must be > 0")
    mu = bandwidth**2 / rabi_peak**2
    if mu < 1.0:
        raise PulseDesignError(
            "bandwidth below Rabi frequency; CHS design point invalid "
            f"(mu = {mu:.4g} < 1)"
        )
    beta = rabi_peak**2 / (2.0 * bandwidth)
    return ChsPulse(
        rabi_peak=rabi_peak,
        rate=beta,
        chirp_factor=mu,
        center_detuning=center_detuning,
        arrival_time=arrival_time,
        tag=tag,
    )


def pulse_to_descriptor(p: ChsPulse) -> dict:
    """JSON-safe descriptor; frequency keys in ordinary kHz, times in us."""
    return {
        "rabi_khz": khz_from_rad_per_s(p.rabi_peak),
        "beta_khz": khz_from_rad_per_s(p.rate),
        "mu": p.chirp_factor,
        "center_detuning_khz": khz_from_rad_per_s(p.center_detuning),
        "arrival_us": us_from_seconds(p.arrival_time),
        "tag": p.tag.value,
    }


def pulse_from_descriptor(d: dict) -> ChsPulse:
    return ChsPulse(
        rabi_peak=rad_per_s_from_khz(float(d["rabi_khz"])),
        rate=rad_per_s_from_khz(float(d["beta_khz"])),
        chirp_factor=float(d["mu"]),
        center_detuning=rad_per_s_from_khz(float(d.get("center_detuning_khz", 0.0))),
        arrival_time=seconds_from_us(float(d.get("arrival_us", 0.0))),
        tag=WavevectorTag(d.get("tag", "rephase")),
    )


def save_pulse(p: ChsPulse, path) -> None:
    Path(path).write_text(json.dumps(pulse_to_descriptor(p), indent=2) + "\n")


def load_pulse(path) -> ChsPulse:
    return pulse_from_descriptor(json.loads(Path(path).read_text()))


def shifted(p: ChsPulse, arrival_time: float) -> ChsPulse:
    """Copy of the pulse rescheduled to a new arrival time."""
    return replace(p, arrival_time=arrival_time)
