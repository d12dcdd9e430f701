"""Central finite differences with the step policy used throughout the package.

First derivatives use ``h = cbrt(eps) * max(1, |z|)`` per component; second
derivatives use ``h = eps**(1/4) * max(1, |z|)``.  Steps are adjusted so that
``z + h`` is exactly representable, which makes linear functions differentiate
to rounding level.
"""

import numpy as np

from .errors import DerivativeFailureError

EPS = np.finfo(float).eps
FIRST_STEP = EPS ** (1.0 / 3.0)
SECOND_STEP = EPS ** 0.25


def _steps(z, base):
    z = np.asarray(z, dtype=float)
    h = base * np.maximum(1.0, np.abs(z))
    # representable step
    return (z + h) - z


def _check(value, what):
    if not np.all(np.isfinite(value)):
        raise DerivativeFailureError(f"non-finite {what}")
    return value


def gradient(f, z, base=FIRST_STEP):
    """Central-difference gradient of scalar ``f`` at the vector ``z``."""
    z = np.array(z, dtype=float)
    h = _steps(z, base)
    g = np.empty_like(z)
    for k in range(z.size):
        zp = z.copy()
        zm = z.copy()
        zp[k] += h[k]
        zm[k] -= h[k]
        g[k] = (f(zp) - f(zm)) / (2.0 * h[k])
    return _check(g, "gradient")


def jacobian(f, z, base=FIRST_STEP):
    """Central-difference Jacobian ``J[i, k] = d f_i / d z_k`` of a vector map."""
    z = np.array(z, dtype=float)
    h = _steps(z, base)
    cols = []
    for k in range(z.size):
        zp = z.copy()
        zm = z.copy()
        zp[k] += h[k]
        zm[k] -= h[k]
        cols.append((np.asarray(f(zp), dtype=float) - np.asarray(f(zm), dtype=float)) / (2.0 * h[k]))
    return _check(np.stack(cols, axis=-1), "jacobian")


def hessian(f, z, base=SECOND_STEP):
    """Nested central-difference Hessian of scalar ``f``; symmetrized."""
    z = np.array(z, dtype=float)
    n = z.size
    h = _steps(z, base)
    H = np.empty((n, n))
    f0 = f(z)
    for i in range(n):
        e_i = np.zeros(n)
        e_i[i] = h[i]
        H[i, i] = (f(z + e_i) - 2.0 * f0 + f(z - e_i)) / h[i] ** 2
        for j in range(i + 1, n):
            e_j = np.zeros(n)
            e_j[j] = h[j]
            H[i, j] = (
                f(z + e_i + e_j) - f(z + e_i - e_j) - f(z - e_i + e_j) + f(z - e_i - e_j)
            ) / (4.0 * h[i] * h[j])
            H[j, i] = H[i, j]
    return _check(H, "hessian")


def derivative(f, s, base=FIRST_STEP):
    """Central difference of a scalar function of one scalar argument."""
    s = float(s)
    h = float(_steps(s, base))
    d = (f(s + h) - f(s - h)) / (2.0 * h)
    return _check(d, "derivative")


def d_dlambda(values, lam):
    """Derivative of sampled ``values`` along the sample coordinate ``lam``.

    Uses the five-point fourth-order stencil on uniform grids (with one-sided
    fourth-order closures at the two first and last samples) and
    :func:`numpy.gradient` otherwise.
    """
    values = np.asarray(values)
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    steps = np.diff(lam)
    uniform = n >= 5 and np.allclose(steps, steps[0], rtol=1e-9, atol=0.0)
    if not uniform:
        return np.gradient(values, lam, axis=0, edge_order=2)
    h = steps[0]
    out = np.empty_like(values, dtype=np.result_type(values, float))
    y = values
    out[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    out[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h)
    out[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h)
    out[-1] = (25 * y[-1] - 48 * y[-2] + 36 * y[-3] - 16 * y[-4] + 3 * y[-5]) / (12 * h)
    out[-2] = (3 * y[-1] + 10 * y[-2] - 18 * y[-3] + 6 * y[-4] - y[-5]) / (12 * h)
    return out


def rk4_step(rhs, lam, y, h):
    k1 = rhs(lam, y)
    k2 = rhs(lam + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(lam + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(lam + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
