"""Material parameters, ISD coefficient type, and unit cross-conversions.

The material description bundles everything the protocol and ISD models
need about the crystal: optical depth, bare coherence time, inhomogeneous
linewidth, host and dopant densities, dielectric constant, Stark
coefficient, and the angle tables (|delta mu_mag|(theta), T2_0(theta))
used by the performance maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .units import TWO_PI, rad_per_s_from_hz


class MaterialError(ValueError):
    """Invalid or inconsistent material parameters."""


@dataclass(frozen=True)
class IsdCoefficient:
    """ISD coefficient: added homogeneous rate per Hz of excited bandwidth.

    Stored in s^-1 per Hz.  The conventional display unit in the
    rare-earth literature is s^-1 per kHz; the conversion is an exact
    factor 10^3.
    """

    kappa_per_hz: float

    def __post_init__(self):
        if self.kappa_per_hz < 0:
            raise MaterialError("ISD coefficient must be >= 0")

    @classmethod
    def from_per_khz(cls, kappa_per_khz: float) -> "IsdCoefficient":
        return cls(kappa_per_khz * 1e-3)

    @property
    def per_khz(self) -> float:
        return self.kappa_per_hz * 1e3


@dataclass(frozen=True)
class MaterialParams:
    """Crystal and transition parameters.

    Attributes
    ----------
    alphaL : float
        Optical depth (dimensionless), > 0.
    t2_zero : float
        Coherence time without excitation-induced dephasing, seconds.
    gamma_inh : float
        Inhomogeneous linewidth FWHM, rad/s.
    n_y : float
        Spatial density of substitutable host ions, 1/m^3.
    concentration : float
        Site-resolved dopant fraction (dimensionless).  Already includes
        the split over crystallographic sites, i.e. the fraction of host
        ions replaced by dopants that are resonant with the transition.
    epsilon_r : float
        Relative permittivity along the relevant direction.
    stark_shift : float
        Transition Stark coefficient, Hz per (V/m).
    delta_mu_mag_table : tuple[tuple[float, float], ...]
        (theta_deg, |delta mu_mag| in rad s^-1 T^-1) rows, sorted by angle.
    t2_zero_table : tuple[tuple[float, float], ...]
        (theta_deg, T2_0 in seconds) rows, sorted by angle.
    """

    alphaL: float
    t2_zero: float
    gamma_inh: float
    n_y: float
    concentration: float
    epsilon_r: float
    stark_shift: float
    delta_mu_mag_table: tuple = field(default=())
    t2_zero_table: tuple = field(default=())

    def __post_init__(self):
        for name in ("alphaL", "t2_zero", "gamma_inh", "n_y", "concentration"):
            if getattr(self, name) <= 0:
                raise MaterialError(f"{name} must be > 0")
        if self.epsilon_r < 1:
            raise MaterialError("epsilon_r must be >= 1")
        if self.stark_shift < 0:
            raise MaterialError("stark_shift must be >= 0")
        for label in ("delta_mu_mag_table", "t2_zero_table"):
            _validate_angle_table(getattr(self, label), label)

    @property
    def n_dopant(self) -> float:
        """Resonant dopant density, 1/m^3."""
        return self.n_y * self.concentration


def _validate_angle_table(table, label: str) -> None:
    thetas = [row[0] for row in table]
    if any(not (0.0 <= th <= 180.0) for th in thetas):
        raise MaterialError(f"{label}: angles must lie in [0, 180] degrees")
    if sorted(thetas) != thetas or len(set(thetas)) != len(thetas):
        raise MaterialError(f"{label}: angles must be sorted and unique")


def load_material(path) -> MaterialParams:
    """Read a material JSON file.

    Expected keys: ``alphaL``, ``t2_zero_s``, ``gamma_inh_hz_fwhm``,
    ``n_y_per_cm3``, ``concentration_ppm_nominal``, ``site_fraction``,
    ``epsilon_r``, ``stark_shift_khz_per_v_cm``, and optionally
    ``delta_mu_mag_table`` / ``t2_zero_table`` as arrays of
    ``[theta_deg, value]``.

    The nominal doping (ppm over host sites) is reduced to the
    site-resolved concentration by the explicit ``site_fraction`` factor;
    ordinary-frequency and mixed units are converted here, once.
    """
    raw = json.loads(Path(path).read_text())
    try:
        return MaterialParams(
            alphaL=float(raw["alphaL"]),
            t2_zero=float(raw["t2_zero_s"]),
            gamma_inh=rad_per_s_from_hz(float(raw["gamma_inh_hz_fwhm"])),
            n_y=float(raw["n_y_per_cm3"]) * 1e6,
            concentration=float(raw["concentration_ppm_nominal"]) * 1e-6
            * float(raw.get("site_fraction", 1.0)),
            epsilon_r=float(raw["epsilon_r"]),
            # kHz/(V/cm) -> Hz/(V/m): *1e3 for kHz->Hz, /100 for 1/cm -> 1/m
            stark_shift=float(raw["stark_shift_khz_per_v_cm"]) * 1e3 / 100.0,
            delta_mu_mag_table=tuple(
                (float(t), float(v)) for t, v in raw.get("delta_mu_mag_table", [])
            ),
            t2_zero_table=tuple(
                (float(t), float(v)) for t, v in raw.get("t2_zero_table", [])
            ),
        )
    except KeyError as exc:
        raise MaterialError(f"material file missing key {exc}") from exc


@dataclass(frozen=True)
class KappaDensityConversion:
    """kappa expressed as linewidth added per excited-ion density.

    ``value`` is in Hz per (ion/cm^3).  The metadata records the
    convention, because the literature unit is not fully specified: the
    homogeneous linewidth in Hz is taken as the Lorentzian FWHM
    1/(pi*T2), and the excited density is the site-resolved one obtained
    from the line-center excitation formula.  Counting the total dopant
    density of both sites instead would double the value.
    """

    value: float
    linewidth_convention: str
    density_convention: str
    value_total_density: float


def convert_kappa_to_per_ion_density(
    kappa: IsdCoefficient, m: MaterialParams
) -> KappaDensityConversion:
    """Express an ISD coefficient in Hz of linewidth per (excited ion/cm^3).

    Chain: a bandwidth B excites n_e = n_dopant * (2/(pi*Gamma_inh)) * B
    ions per m^3 and adds kappa*B/(2*pi) to 1/T2.  The linewidth
    contribution in Hz is Delta(1/T2)/pi, so the per-density coefficient
    is kappa * Gamma_inh / (4*pi * n_dopant), with the density converted
    to cm^-3.  The bandwidth cancels.
    """
    if m.gamma_inh <= 0 or m.concentration <= 0:
        raise MaterialError("gamma_inh and concentration must be positive")
    n_dopant_cm3 = m.n_dopant * 1e-6
    four_pi = 2.0 * TWO_PI
    value = kappa.kappa_per_hz * m.gamma_inh / (four_pi * n_dopant_cm3)
    return KappaDensityConversion(
        value=value,
        linewidth_convention="fwhm = 1/(pi*T2)",
        density_convention="site-resolved dopant density",
        value_total_density=2.0 * value,
    )
