"""Instantaneous spectral diffusion: phenomenology and microscopic estimate.

Two complementary descriptions of excitation-induced dephasing:

* phenomenological -- a coefficient kappa adds kappa * B/(2*pi) to the
  homogeneous rate 1/T2 when a bandwidth B is inverted, which turns the
  efficiency-versus-bandwidth law into a quadratic on a log scale;
* microscopic -- the statistical (Stoneham/Mims) broadening from
  randomly placed excited dipoles predicts kappa from the ground/excited
  difference of magnetic and electric dipole moments.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .constants import EPSILON_0, HBAR, H_PLANCK, MU_0
from .materials import IsdCoefficient, MaterialParams
from .units import TWO_PI

STONEHAM_FWHM_COEF = 16.0 * math.pi**2 / (9.0 * math.sqrt(3.0))


class IsdModelError(ValueError):
    """Inputs outside the validity of the ISD model."""


class CouplingKind(enum.Enum):
    MAGNETIC = "magnetic"
    ELECTRIC = "electric"


@dataclass(frozen=True)
class DipoleCoupling:
    """Dipole-dipole interaction constant A, m^3 rad/s."""

    value: float
    kind: CouplingKind

    def __post_init__(self):
        if self.value < 0:
            raise IsdModelError("coupling constant must be >= 0")


def t2_of_bandwidth(t2_zero: float, kappa: IsdCoefficient, bandwidth: float) -> float:
    """ISD-shortened coherence time 1/(1/T2_0 + kappa * B/(2*pi))."""
    if t2_zero <= 0 or bandwidth < 0:
        raise IsdModelError("t2_zero must be > 0 and bandwidth >= 0")
    return 1.0 / (1.0 / t2_zero + kappa.kappa_per_hz * bandwidth / TWO_PI)


def efficiency_with_isd(
    eta0: float,
    bandwidth: float,
    rabi_peak: float,
    t2_zero: float,
    kappa: IsdCoefficient,
) -> float:
    """Efficiency at minimum timing with the ISD-corrected coherence time.

    ln eta = ln eta0 - (64*pi/Omega_0^2) * B * (1/T2_0 + kappa*B/(2*pi)),
    quadratic in B on a log scale; kappa = 0 recovers the plain
    bandwidth law.
    """
    if eta0 <= 0 or bandwidth < 0 or rabi_peak <= 0 or t2_zero <= 0:
        raise IsdModelError("inputs must be positive (bandwidth may be 0)")
    rate = 1.0 / t2_zero + kappa.kappa_per_hz * bandwidth / TWO_PI
    return eta0 * math.exp(-64.0 * math.pi * bandwidth / rabi_peak**2 * rate)


def efficiency_with_isd_calibrated(
    eta0: float,
    bandwidth: float,
    rabi_peak: float,
    t2_at_bref: float,
    b_ref: float,
    kappa: IsdCoefficient,
) -> float:
    """Same law re-anchored to a coherence time measured at bandwidth b_ref.

    ln eta = ln eta0 - (64*pi/Omega_0^2) * B * (1/T2(B_ref) +
    kappa*(B - B_ref)/(2*pi)).  Identical to :func:`efficiency_with_isd`
    when 1/T2(B_ref) = 1/T2_0 + kappa*B_ref/(2*pi); convenient when only
    the dressed coherence time at a reference bandwidth is known.
    """
    if eta0 <= 0 or bandwidth < 0 or rabi_peak <= 0 or t2_at_bref <= 0 or b_ref < 0:
        raise IsdModelError("inputs must be positive (bandwidths may be 0)")
    rate = 1.0 / t2_at_bref + kappa.kappa_per_hz * (bandwidth - b_ref) / TWO_PI
    return eta0 * math.exp(-64.0 * math.pi * bandwidth / rabi_peak**2 * rate)


def excited_density(m: MaterialParams, bandwidth: float, exact: bool = False) -> float:
    """Ions per m^3 inverted by a top-hat excitation of width ``bandwidth``.

    Line-center approximation of the Lorentzian inhomogeneous profile:
    n_e = n_Y * C * (2/(pi*Gamma_inh)) * B.  Warns when B exceeds
    Gamma_inh/3 where the approximation degrades; ``exact=True`` switches
    to the integral of the Lorentzian over [-B/2, B/2].
    """
    if bandwidth < 0:
        raise IsdModelError("bandwidth must be >= 0")
    if bandwidth > m.gamma_inh:
        raise IsdModelError("bandwidth exceeds the inhomogeneous linewidth")
    if bandwidth > m.gamma_inh / 3.0 and not exact:
        warnings.warn(
            "bandwidth > Gamma_inh/3: line-center approximation is marginal; "
            "consider exact=True",
            stacklevel=2,
        )
    if exact:
        # integral of the unit-area Lorentzian (FWHM Gamma_inh) over +-B/2
        fraction = (2.0 / math.pi) * math.atan(bandwidth / m.gamma_inh)
        return m.n_dopant * fraction
    return m.n_dopant * (2.0 / (math.pi * m.gamma_inh)) * bandwidth


def stoneham_broadening(coupling: DipoleCoupling, n_e: float) -> float:
    """FWHM broadening (rad/s) from random dipoles at density n_e (1/m^3).

    Delta_omega = (16*pi^2 / (9*sqrt(3))) * A * n_e.
    """
    if n_e < 0:
        raise IsdModelError("excited density must be >= 0")
    return STONEHAM_FWHM_COEF * coupling.value * n_e


def kappa_micro(a_total: float, m: MaterialParams) -> IsdCoefficient:
    """Microscopic ISD coefficient from the total coupling constant.

    The statistical broadening enters the echo-measured rate as
    1/T2 <- 1/T2_0 + Delta_omega/4, and Delta_omega is linear in the
    excited density, itself linear in bandwidth, so per Hz of bandwidth:
    kappa = (8*pi^3/(9*sqrt(3))) * A * n_Y * C * 2/(pi*Gamma_inh).
    """
    if a_total < 0:
        raise IsdModelError("total coupling must be >= 0")
    kappa = (
        8.0 * math.pi**3 / (9.0 * math.sqrt(3.0))
        * a_total * m.n_dopant * 2.0 / (math.pi * m.gamma_inh)
    )
    return IsdCoefficient(kappa)


def coupling_magnetic(delta_mu_mag: float) -> DipoleCoupling:
    """Magnetic dipole-dipole constant from a moment difference.

    A = (mu_0*hbar/(4*pi)) * |delta mu_mag|^2 with the moment difference
    in rad s^-1 T^-1.
    """
    a = MU_0 * HBAR / (4.0 * math.pi) * delta_mu_mag**2
    return DipoleCoupling(a, CouplingKind.MAGNETIC)


def coupling_electric(delta_mu_el: float, epsilon_r: float) -> DipoleCoupling:
    """Electric dipole-dipole constant from a moment difference in C*m.

    A = |delta mu_el|^2 / (4*pi*eps_r*eps_0*hbar).
    """
    if epsilon_r < 1:
        raise IsdModelError("epsilon_r must be >= 1")
    a = delta_mu_el**2 / (4.0 * math.pi * epsilon_r * EPSILON_0 * HBAR)
    return DipoleCoupling(a, CouplingKind.ELECTRIC)


def stark_to_dipole(shift_hz_per_v_m: float) -> float:
    """Electric dipole-moment difference (C*m) from a Stark coefficient.

    delta mu_el = h * shift for the shift in Hz per (V/m).
    """
    if shift_hz_per_v_m < 0:
        raise IsdModelError("Stark shift must be >= 0")
    return H_PLANCK * shift_hz_per_v_m
