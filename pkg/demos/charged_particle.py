"""A charge in a weak static gravity well with electric and magnetic fields.

The coordinate-time run and the proper-time run start from the same event.
Mapping the first onto proper time reproduces the second, and running the
unscaled Hamiltonian instead of h~ = h/2 doubles every velocity.
"""

import numpy as np

from rimech import el_integrator as eli
from rimech import rel_particle as rp
from rimech.acceptance import gravity_em_fields

f = gravity_em_fields()
v3 = np.array([0.1, 0.4, 0.05])
coord = rp.integrate_coordinate_time(f, [0.5, 0.0, 0.0], v3, np.linspace(0.0, 4.0, 801))
h = coord.diagnostics["h"]
print(f"energy drift over t in [0, 4]: {np.ptp(h):.2e}")

x0 = coord.x[0]
u0 = rp.on_shell_four_velocity(f, x0, v3)
tau = eli.reparametrize(coord, lambda lam, x, aux: 1.0 / rp.gamma_factor(f, x, rp.velocity_from_momentum(f, x, aux[1:])),
                        xi0=0.0)
proper = rp.integrate_proper_time(f, x0, u0, tau.lam)
print(f"elapsed proper time {tau.lam[-1]:.6f} for coordinate time 4")
print(f"largest position mismatch between the two runs: {np.max(np.abs(proper.x - coord.x)):.2e}")

two = rp.factor_of_two(f, x0, u0, np.linspace(0.0, 1.0, 101))
print(f"velocity ratio h : h~ ranges over [{two.ratio.min():.12f}, {two.ratio.max():.12f}]")
