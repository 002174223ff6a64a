"""Unit conventions and boundary conversions.

Internal convention used throughout the package:

* angular frequencies (Rabi peak, sweep rate, bandwidth, detunings,
  inhomogeneous linewidth) in rad/s
* times in seconds
* densities in 1/m^3
* ISD coefficients in s^-1 per Hz of excited bandwidth

Ordinary-frequency values (Hz, kHz, MHz) appear only at I/O boundaries
(CLI flags, JSON files, CSV columns) and are converted exactly once with
the helpers below.  Keeping one canonical convention avoids silent 2*pi
errors when mixing Rabi frequencies, sweep rates and linewidths.
"""

import math

TWO_PI = 2.0 * math.pi


def rad_per_s_from_hz(f_hz: float) -> float:
    """Ordinary frequency in Hz -> angular frequency in rad/s."""
    return TWO_PI * f_hz


def hz_from_rad_per_s(omega: float) -> float:
    """Angular frequency in rad/s -> ordinary frequency in Hz."""
    return omega / TWO_PI


def rad_per_s_from_khz(f_khz: float) -> float:
    return TWO_PI * f_khz * 1e3


def khz_from_rad_per_s(omega: float) -> float:
    return omega / TWO_PI / 1e3


def rad_per_s_from_mhz(f_mhz: float) -> float:
    return TWO_PI * f_mhz * 1e6


def mhz_from_rad_per_s(omega: float) -> float:
    return omega / TWO_PI / 1e6


def seconds_from_us(t_us: float) -> float:
    return t_us * 1e-6


def us_from_seconds(t_s: float) -> float:
    return t_s * 1e6
