"""Lagrangian evaluation, momenta, homogeneity diagnostics and Hessian checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import numdiff
from .errors import DegenerateProbeError, DerivativeFailureError, NotApplicableError
from .extended_phase import Metric, Trajectory


@dataclass(frozen=True)
class LagrangianSpec:
    """Scalar ``L(x, v)`` with optional exact partial derivatives.

    ``order`` records the declared homogeneity degree in ``v`` when known.
    """

    dim: int
    eval: Callable[[np.ndarray, np.ndarray], float]
    exact_dv: Optional[Callable] = None
    exact_dx: Optional[Callable] = None
    time_dependent: bool = False
    order: Optional[float] = None
    name: str = "custom"

    def __call__(self, x, v) -> float:
        return float(self.eval(np.asarray(x, dtype=float), np.asarray(v, dtype=float)))

    def without_exact(self) -> "LagrangianSpec":
        """Same Lagrangian with every derivative taken by finite differences."""
        return LagrangianSpec(self.dim, self.eval, time_dependent=self.time_dependent,
                              order=self.order, name=self.name + "[fd]")


def _vec(a):
    return np.atleast_1d(np.asarray(a, dtype=float))


def canonical_momentum(L: LagrangianSpec, x, v) -> np.ndarray:
    """``p_a = dL/dv^a`` from the exact derivative if supplied, else central differences."""
    x, v = _vec(x), _vec(v)
    if L.exact_dv is not None:
        p = _vec(L.exact_dv(x, v))
    else:
        p = numdiff.gradient(lambda w: L(x, w), v)
    if not np.all(np.isfinite(p)):
        raise DerivativeFailureError(f"non-finite momentum at x={x}, v={v}")
    return p


def position_gradient(L: LagrangianSpec, x, v) -> np.ndarray:
    x, v = _vec(x), _vec(v)
    if L.exact_dx is not None:
        g = _vec(L.exact_dx(x, v))
    else:
        g = numdiff.gradient(lambda y: L(y, v), x)
    if not np.all(np.isfinite(g)):
        raise DerivativeFailureError(f"non-finite dL/dx at x={x}, v={v}")
    return g


def homogeneity_degree(L: LagrangianSpec, x, v, tol: float = 1e-12) -> float:
    """Euler ratio ``(v . dL/dv) / L``; refused where ``|L| < tol`` (e.g. null vectors)."""
    x, v = _vec(x), _vec(v)
    value = L(x, v)
    if abs(value) < tol:
        raise DegenerateProbeError(f"|L| = {abs(value):.3g} below {tol:g}; homogeneity degree undefined")
    return float(v @ canonical_momentum(L, x, v) / value)


def hamiltonian_function(L: LagrangianSpec, x, v) -> float:
    """``H = p . v - L``."""
    x, v = _vec(x), _vec(v)
    return float(canonical_momentum(L, x, v) @ v - L(x, v))


def velocity_hessian(L: LagrangianSpec, x, v) -> np.ndarray:
    x, v = _vec(x), _vec(v)
    if L.exact_dv is not None:
        H = numdiff.jacobian(lambda w: L.exact_dv(x, w), v)
        return 0.5 * (H + H.T)
    return numdiff.hessian(lambda w: L(x, w), v)


def mixed_jacobian(L: LagrangianSpec, x, v) -> np.ndarray:
    """``J[a, b] = d^2 L / dv^a dx^b``."""
    x, v = _vec(x), _vec(v)
    return numdiff.jacobian(lambda y: canonical_momentum(L, y, v), x)


def hessian_determinant(L: LagrangianSpec, x, v) -> float:
    """Determinant of ``d^2 L / dv^a dv^b``."""
    H = velocity_hessian(L, x, v)
    det = float(np.linalg.det(H))
    if not np.isfinite(det):
        raise DerivativeFailureError("non-finite Hessian determinant")
    return det


def scaled_hessian_determinant(L: LagrangianSpec, x, v) -> float:
    """Hessian determinant after dividing by the largest row magnitude."""
    H = velocity_hessian(L, x, v)
    scale = np.max(np.linalg.norm(H, axis=1))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.det(H / scale))


def is_hessian_singular(L: LagrangianSpec, x, v, threshold: float = 1e-6) -> bool:
    return abs(scaled_hessian_determinant(L, x, v)) < threshold


def el_residual(L: LagrangianSpec, traj: Trajectory) -> np.ndarray:
    """``d/dlam (dL/dv) - dL/dx`` at every sample of a configuration trajectory.

    The lambda derivative of the sampled momenta uses a fourth-order stencil,
    so the residual is independent of whatever equations generated ``traj``.
    """
    p = np.array([canonical_momentum(L, x, v) for x, v in zip(traj.x, traj.aux)])
    force = np.array([position_gradient(L, x, v) for x, v in zip(traj.x, traj.aux)])
    return numdiff.d_dlambda(p, traj.lam) - force


# --------------------------------------------------------------------------
# Lagrangian families


def phi_v_lagrangian(phi, dphi=None) -> LagrangianSpec:
    """One-dimensional ``L(q, v) = phi(q) v``."""

    def dv(x, v):
        return np.array([phi(x[0])])

    def dx(x, v):
        d = dphi(x[0]) if dphi is not None else numdiff.derivative(phi, x[0])
        return np.array([d * v[0]])

    return LagrangianSpec(1, lambda x, v: phi(x[0]) * v[0], exact_dv=dv, exact_dx=dx,
                          order=1, name="phi-v")


def metric_power_lagrangian(metric: Metric, n: float = 1.0, sign: float = 1.0) -> LagrangianSpec:
    """``L = (sign * g(v, v))^(n/2)``: ``n = 1`` is the line element, ``n = 2`` the quadratic form.

    ``sign = -1`` is used for minus-plus metrics so the radicand is positive on
    time-like vectors.
    """

    def ev(x, v):
        return (sign * (v @ metric(x) @ v)) ** (0.5 * n)

    def dv(x, v):
        g = metric(x)
        Q = sign * (v @ g @ v)
        return n * Q ** (0.5 * n - 1.0) * sign * (g @ v)

    dx = None
    if metric.is_constant:
        def dx(x, v):
            return np.zeros_like(x)

    name = "L1" if n == 1 else ("L2" if n == 2 else f"L1^{n:g}")
    if n == 2 and sign == 1.0:
        ev = lambda x, v: float(v @ metric(x) @ v)  # noqa: E731  exact for null vectors too
    return LagrangianSpec(metric.dim, ev, exact_dv=dv, exact_dx=dx, order=n, name=name)


def charged_line_element(metric: Metric, A, mass: float = 1.0, charge: float = 1.0,
                         sign: float = 1.0) -> LagrangianSpec:
    """``L = mass * sqrt(sign * g(v, v)) + charge * A(x) . v``; first-order homogeneous."""

    def ev(x, v):
        return mass * np.sqrt(sign * (v @ metric(x) @ v)) + charge * (np.asarray(A(x)) @ v)

    def dv(x, v):
        g = metric(x)
        return mass * sign * (g @ v) / np.sqrt(sign * (v @ g @ v)) + charge * np.asarray(A(x), dtype=float)

    return LagrangianSpec(metric.dim, ev, exact_dv=dv, order=1, name="L1+A")


def quadratic_kinetic(dim: int = 1, mass: float = 1.0) -> LagrangianSpec:
    """Newtonian free particle ``L = mass v^2 / 2``."""
    return LagrangianSpec(dim, lambda x, v: 0.5 * mass * float(v @ v),
                          exact_dv=lambda x, v: mass * v, exact_dx=lambda x, v: np.zeros_like(x),
                          order=2, name="kinetic")


def constant_lagrangian(value: float, dim: int = 1) -> LagrangianSpec:
    return LagrangianSpec(dim, lambda x, v: value, exact_dv=lambda x, v: np.zeros_like(v),
                          exact_dx=lambda x, v: np.zeros_like(x), order=0, name="constant")


def compose(L: LagrangianSpec, f, fprime=None, name=None) -> LagrangianSpec:
    """``f(L)``; momenta by the chain rule when ``L`` carries exact derivatives."""
    dv = dx = None
    fp = fprime if fprime is not None else (lambda s: numdiff.derivative(f, s))
    if L.exact_dv is not None:
        def dv(x, v):
            return fp(L(x, v)) * L.exact_dv(x, v)
    if L.exact_dx is not None:
        def dx(x, v):
            return fp(L(x, v)) * L.exact_dx(x, v)
    order = None
    return LagrangianSpec(L.dim, lambda x, v: f(L(x, v)), exact_dv=dv, exact_dx=dx,
                          time_dependent=L.time_dependent, order=order,
                          name=name or f"f({L.name})")


def power(L: LagrangianSpec, n: float) -> LagrangianSpec:
    """``L^n``; homogeneous of order ``n * L.order``."""
    out = compose(L, lambda s: s ** n, lambda s: n * s ** (n - 1), name=f"({L.name})^{n:g}")
    order = None if L.order is None else n * L.order
    return LagrangianSpec(out.dim, out.eval, out.exact_dv, out.exact_dx, out.time_dependent, order, out.name)


# --------------------------------------------------------------------------
# f(L) equivalence


@dataclass(frozen=True)
class FLEquivalenceReport:
    max_residual: float
    max_drift: float
    base_residual: float
    tolerance: float

    @property
    def equivalent(self) -> bool:
        return self.max_residual < self.tolerance and self.max_drift < self.tolerance


def check_fL_equivalence(L: LagrangianSpec, f, traj: Trajectory, tol: float = 1e-8,
                         fprime=None) -> FLEquivalenceReport:
    """Evaluate the Euler-Lagrange residual of ``f(L)`` along a solution of ``EL(L)``.

    Raises :class:`NotApplicableError` when ``dL/dlam`` drifts above ``tol``:
    the equivalence only holds for motions that conserve ``L``.
    """
    values = np.array([L(x, v) for x, v in zip(traj.x, traj.aux)])
    drift = float(np.max(np.abs(numdiff.d_dlambda(values, traj.lam))))
    base = float(np.max(np.abs(el_residual(L, traj))))
    fL = compose(L, f, fprime)
    resid = float(np.max(np.abs(el_residual(fL, traj))))
    report = FLEquivalenceReport(resid, drift, base, tol)
    if drift >= tol:
        raise NotApplicableError(f"dL/dlambda drifts by {drift:.3g} along the trajectory", report)
    return report
