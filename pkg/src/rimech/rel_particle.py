"""Relativistic spinless particle in electromagnetic and gravitational backgrounds.

Coordinates are ``x = (c t, x^1, ..., x^n)`` with a minus-plus metric and
``g_{0i} = 0``.  ``g00`` below always denotes the positive number
``-g_{00}``.  Coordinate-time flows use the state ``(x^i, pi_i)`` with
canonical momenta ``pi_i = m gamma g_ij v^j + q A_i``.  Proper-time flows use
``(x^mu, pi_mu)`` under ``h~ = g^{mu nu} P_mu P_nu / 2m + m c^2 / 2``,
``P = pi - q A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import numdiff
from .el_integrator import reparametrize
from .errors import (
    IntegrationDivergedError,
    InvalidDimensionError,
    OffShellStateError,
    SuperluminalStateError,
)
from .ext_hamiltonian import ExtHamiltonian, evolve, make_ext_hamiltonian
from .extended_phase import ExtendedState, Metric, Trajectory
from .lagrangian import LagrangianSpec


@dataclass(frozen=True)
class BackgroundFields:
    """Metric, covariant potential ``A_mu(x)``, charge, rest mass and optional weak-field ``U(x)``.

    ``dA(x)[rho, mu] = d_rho A_mu`` and ``dmetric(x)[rho, mu, nu] = d_rho g_{mu nu}``
    may be supplied; otherwise central differences are used.
    """

    metric: Metric
    A: Optional[Callable] = None
    q_charge: float = 0.0
    m: float = 1.0
    U: Optional[Callable] = None
    c: float = 1.0
    dA: Optional[Callable] = None
    dmetric: Optional[Callable] = None

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"rest mass must be positive, got {self.m}")
        sig = self.metric.signature
        if sig[0] != -1 or any(s != 1 for s in sig[1:]):
            raise ValueError("background metric must have minus-plus signature")
        if self.U is not None:
            x = np.zeros(self.dim)
            want = 1.0 - 2.0 * self.U(x) / self.c**2
            if abs(self.g00(x) - want) >= 1e-12:
                raise ValueError(f"g00 = {self.g00(x)} differs from 1 - 2U/c^2 = {want}")

    @property
    def dim(self) -> int:
        return self.metric.dim

    def g00(self, x) -> float:
        return -float(self.metric(x)[0, 0])

    def potential(self, x) -> np.ndarray:
        if self.A is None:
            return np.zeros(self.dim)
        return np.asarray(self.A(np.asarray(x, dtype=float)), dtype=float)

    def potential_gradient(self, x) -> np.ndarray:
        """``[rho, mu] = d_rho A_mu``."""
        x = np.asarray(x, dtype=float)
        if self.A is None:
            return np.zeros((self.dim, self.dim))
        if self.dA is not None:
            return np.asarray(self.dA(x), dtype=float)
        return numdiff.jacobian(self.potential, x).T

    def metric_gradient(self, x) -> np.ndarray:
        """``[rho, mu, nu] = d_rho g_{mu nu}``."""
        x = np.asarray(x, dtype=float)
        n = self.dim
        if self.metric.is_constant:
            return np.zeros((n, n, n))
        if self.dmetric is not None:
            return np.asarray(self.dmetric(x), dtype=float)
        J = numdiff.jacobian(lambda y: self.metric(y).ravel(), x)
        return J.T.reshape(n, n, n)


def _full(x):
    return np.atleast_1d(np.asarray(x, dtype=float))


def _spatial(fields: BackgroundFields, x):
    g = fields.metric(x)
    if np.max(np.abs(g[0, 1:])) > 1e-12:
        raise InvalidDimensionError("time-space metric components g_0i must vanish")
    return -g[0, 0], g[1:, 1:]


def gamma_factor(fields: BackgroundFields, x, v3) -> float:
    """``1 / sqrt(g00 - g_ij v^i v^j / c^2)``."""
    x, v3 = _full(x), _full(v3)
    g00, gij = _spatial(fields, x)
    rad = g00 - float(v3 @ gij @ v3) / fields.c**2
    if not rad > 0:
        raise SuperluminalStateError(f"g00 - v^2/c^2 = {rad:.3g} is not positive")
    return 1.0 / np.sqrt(rad)


def kinetic_momentum(fields: BackgroundFields, x, v3) -> np.ndarray:
    """Covariant spatial ``p_i = m gamma g_ij v^j``."""
    x, v3 = _full(x), _full(v3)
    _, gij = _spatial(fields, x)
    return fields.m * gamma_factor(fields, x, v3) * (gij @ v3)


def canonical_momentum(fields: BackgroundFields, x, v3) -> np.ndarray:
    return kinetic_momentum(fields, x, v3) + fields.q_charge * fields.potential(x)[1:]


def _p_squared(fields, x, p3):
    _, gij = _spatial(fields, x)
    return float(p3 @ np.linalg.solve(gij, p3))


def gamma_from_momentum(fields: BackgroundFields, x, p3) -> float:
    """On-shell ``gamma = sqrt(m^2 c^2 + p^2) / (m c sqrt(g00))`` from kinetic ``p_i``."""
    x, p3 = _full(x), _full(p3)
    g00, _ = _spatial(fields, x)
    mc = fields.m * fields.c
    return np.sqrt(mc**2 + _p_squared(fields, x, p3)) / (mc * np.sqrt(g00))


def gamma_from_p0(fields: BackgroundFields, x, p3, p0: float) -> float:
    """``gamma = (g00 - p^2 / (p^0)^2)^(-1/2)`` from contravariant ``p^0``."""
    x, p3 = _full(x), _full(p3)
    g00, _ = _spatial(fields, x)
    rad = g00 - _p_squared(fields, x, p3) / p0**2
    if not rad > 0:
        raise OffShellStateError(f"g00 - p^2/(p^0)^2 = {rad:.3g}; (p^0, p) is inconsistent")
    return 1.0 / np.sqrt(rad)


def velocity_from_momentum(fields: BackgroundFields, x, pi3) -> np.ndarray:
    """Invert ``pi_i = m gamma g_ij v^j + q A_i`` in closed form."""
    x, pi3 = _full(x), _full(pi3)
    p3 = pi3 - fields.q_charge * fields.potential(x)[1:]
    _, gij = _spatial(fields, x)
    gamma = gamma_from_momentum(fields, x, p3)
    return np.linalg.solve(gij, p3) / (fields.m * gamma)


def lorentz_force(fields: BackgroundFields, x, v3) -> np.ndarray:
    """``dpi_i/dt = q d_i A_mu V^mu + (m gamma / 2) d_i g_{mu nu} V^mu V^nu`` with ``V = (c, v)``.

    Written for the kinetic momentum this is
    ``q c (d_i A_0 - d_0 A_i) + q (d_i A_j - d_j A_i) v^j + m c^2 gamma^-2 d_i gamma``.
    """
    x, v3 = _full(x), _full(v3)
    V = np.concatenate([[fields.c], v3])
    dA = fields.potential_gradient(x)
    dg = fields.metric_gradient(x)
    gamma = gamma_factor(fields, x, v3)
    force = fields.q_charge * (dA @ V) + 0.5 * fields.m * gamma * np.einsum("rmn,m,n->r", dg, V, V)
    return force[1:]


def coordinate_time_rhs(fields: BackgroundFields, t: float, x3, pi3):
    """``(dx^i/dt, dpi_i/dt)`` at coordinate time ``t``."""
    x = np.concatenate([[fields.c * t], _full(x3)])
    v3 = velocity_from_momentum(fields, x, pi3)
    return v3, lorentz_force(fields, x, v3)


def energy_h(fields: BackgroundFields, x, v3) -> float:
    """``h = -q c A_0 + m gamma c^2 g00``."""
    x = _full(x)
    g00, _ = _spatial(fields, x)
    gamma = gamma_factor(fields, x, v3)
    return -fields.q_charge * fields.c * fields.potential(x)[0] + fields.m * gamma * fields.c**2 * g00


def energy_h_momentum(fields: BackgroundFields, x, pi3, p0: Optional[float] = None) -> float:
    """``h = (pi - qA)^2 / (m gamma) - q c A_0 + m c^2 / gamma``.

    ``gamma`` comes from ``p0`` (contravariant kinetic ``p^0``) when given,
    else from the mass shell.
    """
    x, pi3 = _full(x), _full(pi3)
    p3 = pi3 - fields.q_charge * fields.potential(x)[1:]
    if p0 is None:
        gamma = gamma_from_momentum(fields, x, p3)
    else:
        gamma = gamma_from_p0(fields, x, p3, p0)
    m, c = fields.m, fields.c
    return _p_squared(fields, x, p3) / (m * gamma) - fields.q_charge * c * fields.potential(x)[0] + m * c**2 / gamma


def integrate_coordinate_time(fields: BackgroundFields, x3_0, v3_0, t_grid, blowup: float = 1e12) -> Trajectory:
    """RK4 in coordinate time for ``(x^i, pi_i)``.

    Samples hold ``x = (c t, x^i)`` and ``aux = (h / c, pi_i)``; diagnostics
    carry ``gamma``, the velocities ``v`` and the energy ``h``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    x3_0 = _full(x3_0)
    n = x3_0.size
    if n + 1 != fields.dim:
        raise InvalidDimensionError(f"expected {fields.dim - 1} spatial coordinates, got {n}")
    x_start = np.concatenate([[fields.c * t_grid[0]], x3_0])
    y = np.concatenate([x3_0, canonical_momentum(fields, x_start, v3_0)])

    def rhs(t, y):
        dx, dp = coordinate_time_rhs(fields, t, y[:n], y[n:])
        return np.concatenate([dx, dp])

    ys = np.empty((t_grid.size, 2 * n))
    ys[0] = y
    for i in range(t_grid.size - 1):
        y = numdiff.rk4_step(rhs, t_grid[i], ys[i], t_grid[i + 1] - t_grid[i])
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > blowup:
            raise IntegrationDivergedError(f"coordinate-time flow diverged at t={t_grid[i + 1]:g}")
        ys[i + 1] = y
    xs = np.column_stack([fields.c * t_grid, ys[:, :n]])
    vs = np.array([velocity_from_momentum(fields, x, pi) for x, pi in zip(xs, ys[:, n:])])
    gam = np.array([gamma_factor(fields, x, v) for x, v in zip(xs, vs)])
    hs = np.array([energy_h(fields, x, v) for x, v in zip(xs, vs)])
    aux = np.column_stack([hs / fields.c, ys[:, n:]])
    return Trajectory(t_grid, xs, aux, "phase", {"gamma": gam, "v": vs, "h": hs})


# --------------------------------------------------------------------------
# proper time


def tilde_h(fields: BackgroundFields, x, pi, factor: float = 0.5) -> float:
    """``factor * (g^{mu nu} P_mu P_nu / m + m c^2)``; ``factor = 1/2`` is ``h~``, ``1`` the unmodified ``h``."""
    x, pi = _full(x), _full(pi)
    P = pi - fields.q_charge * fields.potential(x)
    m, c = fields.m, fields.c
    return factor * (float(P @ np.linalg.solve(fields.metric(x), P)) / m + m * c**2)


def proper_time_rhs_tilde(fields: BackgroundFields, s: ExtendedState):
    """``u^rho = g^{rho mu} P_mu / m`` and ``dpi_rho/dtau = q u^mu d_rho A_mu + (m/2) d_rho g_{mu nu} u^mu u^nu``."""
    x, pi = s.x, s.p
    P = pi - fields.q_charge * fields.potential(x)
    u = np.linalg.solve(fields.metric(x), P) / fields.m
    dA = fields.potential_gradient(x)
    dg = fields.metric_gradient(x)
    dpi = fields.q_charge * (dA @ u) + 0.5 * fields.m * np.einsum("rmn,m,n->r", dg, u, u)
    return u, dpi


def make_rel_tilde_H(fields: BackgroundFields, factor: float = 0.5) -> ExtHamiltonian:
    """``h~`` (or ``h`` with ``factor=1``) as an extended Hamiltonian with the all-plus bracket."""
    name = "h~" if factor == 0.5 else f"{2 * factor:g}*h~"
    return make_ext_hamiltonian(lambda x, p: tilde_h(fields, x, p, factor), fields.dim,
                                "proper-time", fields.c, name=name, convention="all-plus")


def four_velocity_momentum(fields: BackgroundFields, x, u) -> np.ndarray:
    """Canonical ``pi_mu = m g_{mu nu} u^nu + q A_mu``."""
    x, u = _full(x), _full(u)
    return fields.m * (fields.metric(x) @ u) + fields.q_charge * fields.potential(x)


def on_shell_four_velocity(fields: BackgroundFields, x, v3) -> np.ndarray:
    """``u = gamma (c, v)`` for a coordinate velocity ``v``."""
    x = _full(x)
    gamma = gamma_factor(fields, x, v3)
    return gamma * np.concatenate([[fields.c], _full(v3)])


def integrate_proper_time(fields: BackgroundFields, x0, u0, tau_grid, factor: float = 0.5) -> Trajectory:
    """RK4 of the ``h~`` flow in ``(x^mu, pi_mu)``; diagnostics ``mass_shell``, ``p0`` and ``gamma``.

    ``p0`` is the contravariant kinetic ``p^0 = m u^0`` and ``gamma`` is
    ``p^0 / sqrt(-g p p)``.
    """
    x0 = _full(x0)
    s0 = ExtendedState(x0, four_velocity_momentum(fields, x0, u0), tau_grid[0])
    H = make_rel_tilde_H(fields, factor)
    traj = evolve(H, s0, tau_grid, monitor_only=True)
    shell, p0, gam = [], [], []
    for x, pi in zip(traj.x, traj.aux):
        P = pi - fields.q_charge * fields.potential(x)
        p = np.linalg.solve(fields.metric(x), P)
        shell.append(mass_shell_residual(fields, p, x))
        p0.append(p[0])
        norm = -float(p @ fields.metric(x) @ p)
        gam.append(p[0] / np.sqrt(norm) if norm > 0 else np.nan)
    diag = dict(traj.diagnostics)
    diag.update(mass_shell=np.array(shell), p0=np.array(p0), gamma=np.array(gam))
    return Trajectory(traj.lam, traj.x, traj.aux, "phase", diag)


def proper_time_lagrangian(fields: BackgroundFields) -> LagrangianSpec:
    """``L = q A_mu u^mu + (m/2) g_{mu nu} u^mu u^nu``: its Euler-Lagrange flow is the ``h~`` flow."""
    m, q = fields.m, fields.q_charge

    def ev(x, u):
        return q * float(fields.potential(x) @ u) + 0.5 * m * float(u @ fields.metric(x) @ u)

    def dv(x, u):
        return q * fields.potential(x) + m * (fields.metric(x) @ u)

    return LagrangianSpec(fields.dim, ev, exact_dv=dv, order=None, name="proper-time-L")


def mass_shell_residual(fields: BackgroundFields, p, x=None) -> float:
    """``|g_{mu nu} p^mu p^nu + m^2 c^2|`` for contravariant ``p``."""
    p = _full(p)
    x = np.zeros(fields.dim) if x is None else _full(x)
    return abs(float(p @ fields.metric(x) @ p) + (fields.m * fields.c) ** 2)


# --------------------------------------------------------------------------
# extended Hamiltonians


def make_rel_coordinate_H(fields: BackgroundFields) -> ExtHamiltonian:
    """``H = h(x, pi) - c p^0`` with the momentum slot 0 holding ``p^0 = E / c``.

    ``h`` is written with ``gamma`` eliminated through the mass shell,
    ``h = c sqrt(g00 (m^2 c^2 + p^2)) - q c A_0``, so ``dx^0/dlam = c``.
    """
    m, c, q = fields.m, fields.c, fields.q_charge

    def func(x, p):
        A = fields.potential(x)
        P = p[1:] - q * A[1:]
        g00, gij = _spatial(fields, x)
        return c * np.sqrt(g00 * ((m * c) ** 2 + float(P @ np.linalg.solve(gij, P)))) - q * c * A[0] - c * p[0]

    return make_ext_hamiltonian(func, fields.dim, "coordinate-time", c, name="h-cp0")


def make_rel_proper_H(fields: BackgroundFields) -> ExtHamiltonian:
    """``H = (p_i p^i / 2m + m c^2) + p_0 c gamma`` with covariant ``p_0`` in slot 0 (all-plus bracket).

    ``gamma = (g00 - p^2/(p^0)^2)^(-1/2)`` with ``p^0 = -p_0 / g00``.  On
    ``H = 0`` at rest this gives ``p^0 = m c``; ``dx^0/dlam`` is close to
    ``c gamma`` for slow motion.
    """
    m, c, q = fields.m, fields.c, fields.q_charge

    def func(x, p):
        A = fields.potential(x)
        P = p[1:] - q * A[1:]
        g00, gij = _spatial(fields, x)
        p2 = float(P @ np.linalg.solve(gij, P))
        p0_up = -p[0] / g00
        gamma = gamma_from_p0(fields, x, P, p0_up)
        return p2 / (2 * m) + m * c**2 + p[0] * c * gamma

    return make_ext_hamiltonian(func, fields.dim, "proper-time", c, name="hc+p0*c*gamma",
                                convention="all-plus")


def coordinate_state(fields: BackgroundFields, x3, v3, t: float = 0.0) -> ExtendedState:
    """On-shell start for :func:`make_rel_coordinate_H`: ``(c t, x^i)`` with ``(h / c, pi_i)``."""
    x = np.concatenate([[fields.c * t], _full(x3)])
    return ExtendedState(x, np.concatenate([[energy_h(fields, x, v3) / fields.c], canonical_momentum(fields, x, v3)]), t)


def proper_state(fields: BackgroundFields, x3, p3, t: float = 0.0) -> ExtendedState:
    """On-shell start for :func:`make_rel_proper_H` with kinetic spatial momenta ``p3`` and ``q = 0``."""
    x = np.concatenate([[fields.c * t], _full(x3)])
    p3 = _full(p3)
    g00, gij = _spatial(fields, x)
    m, c = fields.m, fields.c
    p2 = float(p3 @ np.linalg.solve(gij, p3))
    hc = p2 / (2 * m) + m * c**2
    # H = 0 is a quadratic in y = p_0^2: (c/hc)^2 y^2 - g00 y + p^2 g00^2 = 0
    k = (c / hc) ** 2
    disc = g00**2 - 4.0 * k * p2 * g00**2
    if disc < 0:
        raise OffShellStateError("no on-shell p_0 for this spatial momentum")
    p0 = -np.sqrt((g00 + np.sqrt(disc)) / (2.0 * k))
    return ExtendedState(x, np.concatenate([[p0], p3]), t)


def comoving_consistency_residual(fields: BackgroundFields, x) -> np.ndarray:
    """``q A_{rho,0} - q A_{0,rho} - (m c / 2) d_rho g00`` for every ``rho`` (diagnostic only)."""
    x = _full(x)
    dA = fields.potential_gradient(x)
    dg00 = -fields.metric_gradient(x)[:, 0, 0]
    q = fields.q_charge
    return q * dA[0, :] - q * dA[:, 0] - 0.5 * fields.m * fields.c * dg00


# --------------------------------------------------------------------------
# cross checks


def gamma_identity_error(fields: BackgroundFields, traj: Trajectory) -> np.ndarray:
    """Relative difference of ``dt/dtau`` (from sampled ``x^0``) and ``p^0 / sqrt(-g p p)`` along an ``h~`` flow."""
    dt_dtau = numdiff.d_dlambda(traj.x[:, 0], traj.lam) / fields.c
    gam = traj.diagnostics["gamma"]
    return np.abs(dt_dtau - gam) / np.abs(gam)


def coordinate_gamma_identity_error(fields: BackgroundFields, traj: Trajectory) -> np.ndarray:
    """Relative difference of ``gamma(v)`` with ``v`` differentiated from positions and ``gamma`` from momenta.

    ``p^0`` is taken from the sampled energy slot, ``p^0 = (h/c + q A_0) / g00 / (m c) * m c``.
    """
    v = numdiff.d_dlambda(traj.x[:, 1:], traj.lam)
    out = np.empty(len(traj))
    for i, (x, aux) in enumerate(zip(traj.x, traj.aux)):
        g00, _ = _spatial(fields, x)
        A = fields.potential(x)
        p3 = aux[1:] - fields.q_charge * A[1:]
        p0 = (aux[0] + fields.q_charge * A[0]) / g00
        gp = gamma_from_p0(fields, x, p3, p0)
        gv = gamma_factor(fields, x, v[i])
        out[i] = abs(gv - gp) / gp
    return out


def coordinate_to_proper(fields: BackgroundFields, traj: Trajectory) -> Trajectory:
    """Relabel a coordinate-time trajectory by ``dtau = dt / gamma``."""
    return reparametrize(traj, lambda lam, x, aux: 1.0 / gamma_factor(fields, x, velocity_from_momentum(fields, x, aux[1:])),
                         xi0=0.0)


@dataclass(frozen=True)
class FactorOfTwoResult:
    lam: np.ndarray
    velocity_h: np.ndarray
    velocity_tilde: np.ndarray
    ratio: np.ndarray
    max_position_mismatch: float
    trajectory_h: Trajectory
    trajectory_tilde: Trajectory


def factor_of_two(fields: BackgroundFields, x0, u0, lam_grid) -> FactorOfTwoResult:
    """Flow the unmodified ``h`` on ``lam_grid`` and ``h~`` on ``2 * lam_grid``.

    Both start from ``pi = m g u0 + q A``; the ``h`` flow is the ``h~`` flow
    run twice as fast, so its ``dx/dlam`` is twice the ``h~`` four-velocity.
    """
    lam_grid = np.asarray(lam_grid, dtype=float)
    x0 = _full(x0)
    s0 = ExtendedState(x0, four_velocity_momentum(fields, x0, u0), lam_grid[0])
    Hh = make_rel_tilde_H(fields, 1.0)
    Ht = make_rel_tilde_H(fields, 0.5)
    th = evolve(Hh, s0, lam_grid, monitor_only=True)
    tt = evolve(Ht, s0, 2.0 * lam_grid, monitor_only=True)
    n = fields.dim
    vh = np.array([Hh.vector_field(np.concatenate([x, p]))[:n] for x, p in zip(th.x, th.aux)])
    vt = np.array([Ht.vector_field(np.concatenate([x, p]))[:n] for x, p in zip(tt.x, tt.aux)])
    ratio = np.linalg.norm(vh, axis=1) / np.linalg.norm(vt, axis=1)
    mismatch = float(np.max(np.abs(th.x - tt.x)))
    return FactorOfTwoResult(lam_grid, vh, vt, ratio, mismatch, th, tt)
