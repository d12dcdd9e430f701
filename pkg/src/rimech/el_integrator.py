"""Euler-Lagrange flows under an arbitrary process parameter, and reparametrizations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid, simpson

from . import numdiff
from .errors import (
    GaugeDegenerateError,
    IntegrationDivergedError,
    SpaceLikeSegmentError,
    UnderdeterminedSystemError,
)
from .extended_phase import Metric, Trajectory
from .lagrangian import (
    LagrangianSpec,
    canonical_momentum,
    mixed_jacobian,
    position_gradient,
    scaled_hessian_determinant,
    velocity_hessian,
)


@dataclass(frozen=True)
class GaugeClosure:
    """Extra condition ``d G(x, v) / dlam = 0`` completing a singular Euler-Lagrange system."""

    name: str
    constraint: Callable[[np.ndarray, np.ndarray], float]


def conserved_lagrangian(L: LagrangianSpec) -> GaugeClosure:
    """Closure ``dL/dlam = 0``; for ``L = phi(q) v`` it gives ``dv/dlam = -v^2 dln(phi)/dq``."""
    return GaugeClosure("conserved-L", L.eval)


def coordinate_time(axis: int = 0) -> GaugeClosure:
    """Closure ``d v^axis / dlam = 0``: lambda proportional to the coordinate ``x^axis``."""
    return GaugeClosure("coordinate-time", lambda x, v: v[axis])


def el_acceleration(L: LagrangianSpec, x, v, closure: Optional[GaugeClosure] = None,
                    singular_threshold: float = 1e-6) -> np.ndarray:
    """Solve ``M a = dL/dx - J v`` for ``a = dv/dlam`` with ``M`` the velocity Hessian."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    M = velocity_hessian(L, x, v)
    rhs = position_gradient(L, x, v) - mixed_jacobian(L, x, v) @ v
    singular = abs(scaled_hessian_determinant(L, x, v)) < singular_threshold
    if not singular:
        return np.linalg.solve(M, rhs)
    if closure is None:
        raise UnderdeterminedSystemError(
            f"velocity Hessian of {L.name} is singular at x={x}, v={v}; supply a gauge closure"
        )
    gv = numdiff.gradient(lambda w: closure.constraint(x, w), v)
    gx = numdiff.gradient(lambda y: closure.constraint(y, v), x)
    scale = max(np.max(np.abs(M)), 1.0) / max(np.max(np.abs(gv)), 1e-300)
    A = np.vstack([M, scale * gv])
    b = np.concatenate([rhs, [-scale * (gx @ v)]])
    a, *_ = np.linalg.lstsq(A, b, rcond=None)
    return a


def integrate_el(L: LagrangianSpec, x0, v0, grid, closure: Optional[GaugeClosure] = None,
                 singular_threshold: float = 1e-6, blowup: float = 1e12) -> Trajectory:
    """Fixed-step classical RK4 integration of the Euler-Lagrange equations on ``grid``.

    A singular velocity Hessian (first-order homogeneous ``L``) needs a
    ``closure``; otherwise :class:`UnderdeterminedSystemError` is raised.
    """
    grid = np.asarray(grid, dtype=float)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    v0 = np.atleast_1d(np.asarray(v0, dtype=float))
    n = x0.size

    def rhs(lam, y):
        return np.concatenate([y[n:], el_acceleration(L, y[:n], y[n:], closure, singular_threshold)])

    ys = np.empty((grid.size, 2 * n))
    ys[0] = np.concatenate([x0, v0])
    for i in range(grid.size - 1):
        y = numdiff.rk4_step(rhs, grid[i], ys[i], grid[i + 1] - grid[i])
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > blowup:
            raise IntegrationDivergedError(f"Euler-Lagrange flow diverged at lambda={grid[i + 1]:g}")
        ys[i + 1] = y
    xs, vs = ys[:, :n], ys[:, n:]
    Ls = np.array([L(x, v) for x, v in zip(xs, vs)])
    return Trajectory(grid, xs, vs, "configuration", {"L": Ls})


def _rate_values(traj: Trajectory, rate) -> np.ndarray:
    if callable(rate):
        r = np.array([float(rate(l, x, a)) for l, x, a in zip(traj.lam, traj.x, traj.aux)])
    else:
        r = np.full(traj.lam.size, float(rate))
    if not np.all(np.isfinite(r)) or np.any(r == 0.0) or not (np.all(r > 0) or np.all(r < 0)):
        raise GaugeDegenerateError("reparametrization rate vanishes or changes sign on the grid")
    return r


def reparametrize(traj: Trajectory, rate, xi0: Optional[float] = None) -> Trajectory:
    """Relabel ``traj`` by ``xi`` with ``dxi/dlam = rate``.

    ``rate`` is a constant or a callable ``rate(lam, x, aux)``.  The new
    parameter is accumulated with cumulative Simpson quadrature and
    configuration velocities are rescaled by ``dlam/dxi``.
    """
    r = _rate_values(traj, rate)
    start = traj.lam[0] if xi0 is None else float(xi0)
    if traj.lam.size >= 3:
        xi = start + cumulative_simpson(r, x=traj.lam, initial=0.0)
    else:
        xi = start + cumulative_trapezoid(r, traj.lam, initial=0.0)
    aux = traj.aux / r[:, None] if traj.kind == "configuration" else traj.aux
    diag = dict(traj.diagnostics)
    diag["rate"] = r
    diag["lambda_old"] = traj.lam
    return Trajectory(xi, traj.x, aux, traj.kind, diag)


def action(L: LagrangianSpec, traj: Trajectory) -> float:
    """``int L(x, v) dlam`` over the samples (Simpson's rule)."""
    vals = np.array([L(x, v) for x, v in zip(traj.x, traj.aux)])
    return float(simpson(vals, x=traj.lam))


def proper_time_along(traj: Trajectory, m: Metric, c: float = 1.0, tol: float = 1e-12) -> np.ndarray:
    """Cumulative ``tau(lam) = int sqrt(g(v, v)) dlam / c`` (trapezoid rule).

    For minus-plus metrics the radicand is ``-g(v, v)``.  Null samples
    contribute zero; space-like samples raise :class:`SpaceLikeSegmentError`.
    """
    sign = 1.0 if m.signature[0] > 0 else -1.0
    s = np.array([sign * float(v @ m(x) @ v) for x, v in zip(traj.x, traj.aux)])
    scale = np.array([max(1.0, float(v @ v)) for v in traj.aux])
    if np.any(s < -tol * scale):
        i = int(np.argmin(s / scale))
        raise SpaceLikeSegmentError(f"space-like velocity at lambda={traj.lam[i]:g} (g(v,v)={sign * s[i]:.3g})")
    return cumulative_trapezoid(np.sqrt(np.clip(s, 0.0, None)), traj.lam, initial=0.0) / c


def proper_length_rate(phi) -> Callable:
    """Rate ``dl/dlam = phi(q) v`` of the proper length ``dl = phi(q) dq``."""
    return lambda lam, x, v: phi(x[0]) * v[0]


@dataclass(frozen=True)
class GaugeCheckReport:
    max_mismatch: float
    lhs: np.ndarray
    rhs: np.ndarray
    new_lagrangian: np.ndarray
    trajectory: Trajectory


def gauge_invariance_check(phi, traj: Trajectory, rate) -> GaugeCheckReport:
    """Compare ``d(1/w)/dxi`` with ``d ln(psi)/dq`` after reparametrizing a 1-D closure flow.

    ``w = dq/dxi`` and ``psi(q) = phi(q) / lam'(q)`` with ``lam' = dlam/dxi``;
    the ``lam'`` contributions to both sides cancel when ``traj`` solves the
    conserved-``L`` closure for ``phi``.
    """
    new = reparametrize(traj, rate)
    r = new.diagnostics["rate"]
    q = traj.x[:, 0]
    v = traj.aux[:, 0]
    w = new.aux[:, 0]
    lhs = numdiff.d_dlambda(1.0 / w, traj.lam) / r
    dlnphi = np.array([numdiff.derivative(phi, s) / phi(s) for s in q])
    rhs = dlnphi + numdiff.d_dlambda(np.log(np.abs(r)), traj.lam) / v
    new_L = np.array([phi(s) for s in q]) * w
    return GaugeCheckReport(float(np.max(np.abs(lhs - rhs))), lhs, rhs, new_L, new)


def momentum_along(L: LagrangianSpec, traj: Trajectory) -> np.ndarray:
    return np.array([canonical_momentum(L, x, v) for x, v in zip(traj.x, traj.aux)])
