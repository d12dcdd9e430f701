"""Same one-dimensional motion under three choices of the evolution parameter.

The Lagrangian L = phi(q) v is first-order homogeneous, so its Euler-Lagrange
equation is empty until a gauge is picked.  We close it with dL/dlam = 0,
then relabel the path by proper length and by an arbitrary smooth rate.
"""

import numpy as np

from rimech import el_integrator as eli
from rimech import lagrangian as lg


def phi(q):
    return 1.0 + q**2


def dphi(q):
    return 2.0 * q


L = lg.phi_v_lagrangian(phi, dphi)
traj = eli.integrate_el(L, [0.0], [1.0], np.linspace(0.0, 2.0, 401), closure=eli.conserved_lagrangian(L))
print(f"q(2) = {traj.x[-1, 0]:.6f}, L stays at {L(traj.x[-1], traj.aux[-1]):.12f}")

length = eli.gauge_invariance_check(phi, traj, eli.proper_length_rate(phi))
print(f"proper-length gauge: L - 1 at most {np.max(np.abs(length.new_lagrangian - 1)):.2e}")

wobble = eli.gauge_invariance_check(phi, traj, lambda lam, x, v: 1 + 0.5 * np.sin(lam))
print(f"wobbling gauge: equation mismatch {wobble.max_mismatch:.2e}")
print(f"action in both labellings: {eli.action(L, traj):.10f} vs {eli.action(L, wobble.trajectory):.10f}")
