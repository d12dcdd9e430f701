"""Wave functions of the one-dimensional extended Hamiltonians and their inner products.

Quadrature is trapezoidal and derivatives are second-order central
differences with second-order one-sided ends.  Synthesis refuses grids that
cannot resolve the phase: the spacing must satisfy ``h <= hbar / (20 max|phi|)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad, trapezoid

from .errors import DivisionDegenerateError, KindMismatchError, ResolutionError, WindowOutOfRangeError
from .fields import PhiField
from .rel_particle import BackgroundFields, gamma_factor

RESOLUTION_FACTOR = 20.0


@dataclass(frozen=True)
class WaveFunction:
    """Complex samples on a uniform grid of ``t`` (``var_kind="time"``) or ``q`` (``"space"``)."""

    grid: np.ndarray
    values: np.ndarray
    hbar: float = 1.0
    var_kind: str = "time"

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        values = np.array(self.values, dtype=complex)
        if grid.ndim != 1 or grid.size < 3 or values.shape != grid.shape:
            raise ValueError("a wave function needs at least 3 samples matching its grid")
        d = np.diff(grid)
        if np.max(np.abs(d - d[0])) > 1e-12 * max(abs(d[0]), np.max(np.abs(grid))) or d[0] <= 0:
            raise ValueError("grid must be increasing and uniform")
        if not np.all(np.isfinite(values)):
            raise ValueError("wave-function values must be finite")
        if self.var_kind not in ("time", "space"):
            raise ValueError(f"unknown var_kind {self.var_kind!r}")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def h(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def conj(self) -> "WaveFunction":
        return replace(self, values=np.conj(self.values))

    def combine(self, alpha: complex, other: "WaveFunction", beta: complex) -> "WaveFunction":
        """``alpha * self + beta * other`` on the shared grid."""
        if other.grid.shape != self.grid.shape or np.any(other.grid != self.grid):
            raise ValueError("superposition needs a shared grid")
        return replace(self, values=alpha * self.values + beta * other.values)


def check_resolution(phi_values, h: float, hbar: float) -> None:
    peak = float(np.max(np.abs(phi_values)))
    if peak > 0 and h > hbar / (RESOLUTION_FACTOR * peak):
        raise ResolutionError(
            f"grid step {h:.3g} exceeds hbar/(20 max|phi|) = {hbar / (RESOLUTION_FACTOR * peak):.3g}"
        )


def _prepare(phi: PhiField, grid, hbar):
    grid = np.asarray(grid, dtype=float)
    vals = np.asarray(phi(grid), dtype=float) * np.ones_like(grid)
    check_resolution(vals, grid[1] - grid[0], hbar)
    phase = cumulative_trapezoid(vals, grid, initial=0.0)
    return grid, vals, phase


def synth_psi_coordinate(phi: PhiField, grid, hbar: float = 1.0, N: float = 1.0) -> WaveFunction:
    """``psi(t) = exp(-(i/hbar) int_0^t phi) / N``."""
    if not N > 0:
        raise ValueError("normalization N must be positive")
    grid, _, phase = _prepare(phi, grid, hbar)
    return WaveFunction(grid, np.exp(-1j * phase / hbar) / N, hbar, "time")


def synth_psi_proper(phi: PhiField, grid, hbar: float = 1.0, N: float = 1.0) -> WaveFunction:
    """``psi(t) = sqrt(phi(t)) exp(-(i/hbar) int_0^t phi) / N``."""
    if not N > 0:
        raise ValueError("normalization N must be positive")
    grid, vals, phase = _prepare(phi, grid, hbar)
    if np.any(vals <= 0):
        raise ValueError("proper-time synthesis needs phi > 0")
    return WaveFunction(grid, np.sqrt(vals) * np.exp(-1j * phase / hbar) / N, hbar, "time")


def synth_psi_spatial(phi: PhiField, grid, hbar: float = 1.0, N: float = 1.0,
                      gauge: str = "momentum") -> WaveFunction:
    """``psi(q) = exp(+(i/hbar) int_0^q phi) / N``; the ``proper-length`` gauge multiplies by ``sqrt(phi)``."""
    if not N > 0:
        raise ValueError("normalization N must be positive")
    if gauge not in ("momentum", "proper-length"):
        raise ValueError(f"unknown spatial gauge {gauge!r}")
    grid, vals, phase = _prepare(phi, grid, hbar)
    psi = np.exp(1j * phase / hbar) / N
    if gauge == "proper-length":
        if np.any(vals < 0):
            raise ValueError("proper-length synthesis needs phi >= 0")
        psi = np.sqrt(vals) * psi
    return WaveFunction(grid, psi, hbar, "space")


def _window(grid, y, a, b):
    """Trapezoid integral of samples ``y`` over ``[a, b]`` with interpolated end values."""
    inside = (grid > a) & (grid < b)
    xs = np.concatenate([[a], grid[inside], [b]])
    ya = np.interp(a, grid, y.real) + 1j * np.interp(a, grid, y.imag)
    yb = np.interp(b, grid, y.real) + 1j * np.interp(b, grid, y.imag)
    ys = np.concatenate([[ya], y[inside], [yb]])
    return trapezoid(ys, xs)


def inner_product_windowed(a: WaveFunction, b: WaveFunction, t0: float, Delta: float) -> complex:
    """``(1/Delta) int_{t0}^{t0+Delta} a* b``."""
    if not Delta > 0:
        raise ValueError("window length must be positive")
    lo = max(a.grid[0], b.grid[0])
    hi = min(a.grid[-1], b.grid[-1])
    eps = 1e-12 * max(1.0, abs(hi))
    if t0 < lo - eps or t0 + Delta > hi + eps:
        raise WindowOutOfRangeError(f"window [{t0:g}, {t0 + Delta:g}] leaves the grid range [{lo:g}, {hi:g}]")
    if a.grid.shape == b.grid.shape and np.all(a.grid == b.grid):
        grid, y = a.grid, np.conj(a.values) * b.values
    else:
        grid = a.grid
        bv = np.interp(grid, b.grid, b.values.real) + 1j * np.interp(grid, b.grid, b.values.imag)
        y = np.conj(a.values) * bv
    return complex(_window(grid, y, t0, min(t0 + Delta, hi)) / Delta)


def inner_product(a: WaveFunction, b: WaveFunction) -> complex:
    """Unwindowed ``int a* b`` over the shared grid."""
    if a.grid.shape != b.grid.shape or np.any(a.grid != b.grid):
        raise ValueError("plain inner product needs a shared grid")
    return complex(trapezoid(np.conj(a.values) * b.values, a.grid))


def _derivative(psi: WaveFunction) -> np.ndarray:
    return np.gradient(psi.values, psi.h, edge_order=2)


def apply_p0(psi: WaveFunction) -> WaveFunction:
    """``i hbar d/dt``."""
    if psi.var_kind != "time":
        raise KindMismatchError("p0 acts on functions of time")
    return replace(psi, values=1j * psi.hbar * _derivative(psi))


def apply_p1(psi: WaveFunction) -> WaveFunction:
    """``-i hbar d/dq``."""
    if psi.var_kind != "space":
        raise KindMismatchError("p1 acts on functions of position")
    return replace(psi, values=-1j * psi.hbar * _derivative(psi))


def local_ratio(num: WaveFunction, den: WaveFunction, floor: float = 1e-300) -> np.ndarray:
    """Pointwise ``num / den``; refuses samples where ``|den|`` is below ``floor``."""
    mag = np.abs(den.values)
    if np.any(mag <= floor):
        raise DivisionDegenerateError("wave function vanishes on the grid")
    return num.values / den.values


def eigenvalue_estimate(psi: WaveFunction, interior: int = 2) -> complex:
    """Mean of ``(p psi) / psi`` over interior samples, with ``p`` chosen from ``var_kind``."""
    op = apply_p0 if psi.var_kind == "time" else apply_p1
    ratio = local_ratio(op(psi), psi)
    return complex(np.mean(ratio[interior:-interior] if interior else ratio))


def schrodinger_residual(psi: WaveFunction, phi: PhiField, proper: bool = False) -> np.ndarray:
    """``i hbar psi' - phi psi``; with ``proper`` the symmetrized ``phi + (i hbar/2)(ln phi)'`` is used."""
    vals = np.asarray(phi(psi.grid), dtype=float) * np.ones_like(psi.grid)
    coef = vals.astype(complex)
    if proper:
        coef = coef + 0.5j * psi.hbar * np.gradient(np.log(vals), psi.h, edge_order=2)
    return apply_p0(psi).values - coef * psi.values


def running_average(phi: PhiField, Delta: float, n: int = 20001) -> float:
    """``(1/Delta) int_0^Delta phi``, split at the fluctuation scale ``delta`` when it lies inside."""
    if not Delta > 0:
        raise ValueError("Delta must be positive")
    cuts = [0.0, Delta]
    if 0.0 < phi.delta < Delta:
        cuts = [0.0, phi.delta, Delta]
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        s = np.linspace(a, b, n)
        total += trapezoid(np.asarray(phi(s), dtype=float) * np.ones_like(s), s)
    return total / Delta


# --------------------------------------------------------------------------
# rest frame in a weak gravitational field


def rest_frame_phi(fields: BackgroundFields, x3=None) -> PhiField:
    """``phi(t) = m c sqrt(g00(c t, x))`` for a particle at rest at ``x3``."""
    x3 = np.zeros(fields.dim - 1) if x3 is None else np.asarray(x3, dtype=float)

    def ev(t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t)
        out = np.array([fields.m * fields.c * np.sqrt(fields.g00(np.concatenate([[fields.c * s], x3])))
                        for s in flat])
        return out.reshape(t.shape) if t.ndim else float(out[0])

    return PhiField(ev, name="m c sqrt(g00)")


def synth_psi_rest_frame(fields: BackgroundFields, grid, N: float = 1.0, hbar: float = 1.0, x3=None) -> WaveFunction:
    """``psi(t) = sqrt(phi) exp(-(i c/hbar) int phi dt) / N`` with ``phi = m c sqrt(g00)``.

    The phase uses ``hbar / c`` while the returned function carries ``hbar``.
    """
    psi = synth_psi_proper(rest_frame_phi(fields, x3), grid, hbar / fields.c, N)
    return replace(psi, hbar=hbar)


def energy_shift_weak_gravity(fields: BackgroundFields, psi: WaveFunction, t=None, x3=None):
    """Pointwise ``(c P^0 psi) / psi = i hbar gamma psi' / psi`` with ``gamma = 1/sqrt(g00)`` at rest.

    Returns the array over the grid, or its interpolation at ``t``.
    """
    x3 = np.zeros(fields.dim - 1) if x3 is None else np.asarray(x3, dtype=float)
    gam = np.array([gamma_factor(fields, np.concatenate([[fields.c * s], x3]), np.zeros_like(x3))
                    for s in psi.grid])
    ratio = gam * local_ratio(apply_p0(psi), psi)
    if t is None:
        return ratio
    return complex(np.interp(t, psi.grid, ratio.real) + 1j * np.interp(t, psi.grid, ratio.imag))


def weak_gravity_reference(fields: BackgroundFields, dU_dt, t, hbar: float = 1.0, coefficient: float = 1.0):
    """``m c^2 - coefficient * (i hbar / c^2) dU/dt``."""
    t = np.asarray(t, dtype=float)
    return fields.m * fields.c**2 - coefficient * 1j * hbar / fields.c**2 * dU_dt(t)


def proper_time_norm(psi: WaveFunction, fields: BackgroundFields, t0: float, T: float, x3=None) -> float:
    """``(1/Delta_tau) int |psi|^2 dt`` over the coordinate window ``[t0, t0 + T]``.

    ``Delta_tau = int sqrt(g00) dt`` is the elapsed proper time of a particle at rest.
    """
    x3 = np.zeros(fields.dim - 1) if x3 is None else np.asarray(x3, dtype=float)
    dtau, _ = quad(lambda s: 1.0 / gamma_factor(fields, np.concatenate([[fields.c * s], x3]), np.zeros_like(x3)),
                   t0, t0 + T, limit=500, epsabs=0.0, epsrel=1e-13)
    prob = np.abs(psi.values) ** 2
    return float(_window(psi.grid, prob.astype(complex), t0, t0 + T).real / dtau)
