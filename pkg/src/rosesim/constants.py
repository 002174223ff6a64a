"""Physical constants (CODATA 2018, via scipy.constants).

All values are SI. Angular frequencies elsewhere in the package are kept
in rad/s; these constants carry no 2*pi ambiguity.
"""

import scipy.constants as _sc

H_PLANCK = _sc.h           # J*s
HBAR = _sc.hbar            # J*s
MU_0 = _sc.mu_0            # N/A^2  (vacuum permeability)
EPSILON_0 = _sc.epsilon_0  # F/m    (vacuum permittivity)
MU_BOHR = _sc.physical_constants["Bohr magneton"][0]  # J/T
