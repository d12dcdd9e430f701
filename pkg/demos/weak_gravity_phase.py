"""Rest-frame wave function in an oscillating weak potential U = u0 sin(w t).

Prints the imaginary part of i hbar gamma psi'/psi next to -(hbar/c^2) dU/dt
and next to half of it.  The measured values follow the half coefficient.
"""

import numpy as np

from rimech.acceptance import rms_relative, weak_gravity_run

grid, ratio, ref = weak_gravity_run()
for i in np.linspace(5, grid.size - 6, 6).astype(int):
    print(f"t={grid[i]:7.3f}  Im E/mc^2={ratio.imag[i]: .4e}  full={ref.imag[i]: .4e}  half={0.5 * ref.imag[i]: .4e}")
print(f"rms relative error against the full coefficient: {rms_relative(ratio.imag, ref.imag):.3f}")
print(f"rms relative error against half of it:           {rms_relative(ratio.imag, 0.5 * ref.imag):.2e}")
