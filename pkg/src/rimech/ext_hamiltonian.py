"""Extended Poisson bracket on phase-space-time and flows of extended Hamiltonians.

The bracket pairs each coordinate ``x^mu`` with ``p_mu``.  With the default
``"minus-time"`` convention the ``(x^0, p_0)`` pair enters with the opposite
sign, so that ``[[x^0, p_0]] = -1`` while ``[[q_i, p_i]] = +1``.  The
``"all-plus"`` convention uses ``[[x^mu, p_nu]] = delta^mu_nu`` throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import numdiff
from .errors import (
    ConstraintViolationError,
    GaugeDegenerateError,
    IntegrationDivergedError,
    InvalidDimensionError,
    NotAnIntegralError,
)
from .extended_phase import ExtendedState, Trajectory

CONVENTIONS = ("minus-time", "all-plus")
LABELS = ("coordinate-time", "proper-time", "proper-length", "momentum", "moving-particle", "custom")


@dataclass(frozen=True)
class Observable:
    """Phase-space-time function ``f(x, p)``.

    ``exact_grad(x, p)`` may return the concatenated gradient
    ``(df/dx, df/dp)``; otherwise central differences are used.
    """

    func: Callable[[np.ndarray, np.ndarray], float]
    exact_grad: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    name: str = "f"

    def __call__(self, s: ExtendedState) -> float:
        return float(self.func(s.x, s.p))

    def value(self, z) -> float:
        z = np.asarray(z, dtype=float)
        n = z.size // 2
        return float(self.func(z[:n], z[n:]))

    def grad(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.exact_grad is not None:
            n = z.size // 2
            return np.asarray(self.exact_grad(z[:n], z[n:]), dtype=float)
        return numdiff.gradient(self.value, z)

    def __neg__(self):
        g = None if self.exact_grad is None else (lambda x, p: -np.asarray(self.exact_grad(x, p)))
        return Observable(lambda x, p: -self.func(x, p), g, f"-({self.name})")

    def __add__(self, other):
        other = as_observable(other)
        g = None
        if self.exact_grad is not None and other.exact_grad is not None:
            g = lambda x, p: np.asarray(self.exact_grad(x, p)) + np.asarray(other.exact_grad(x, p))  # noqa: E731
        return Observable(lambda x, p: self.func(x, p) + other.func(x, p), g, f"{self.name}+{other.name}")

    def __sub__(self, other):
        return self + (-as_observable(other))

    def __rmul__(self, a: float):
        a = float(a)
        g = None if self.exact_grad is None else (lambda x, p: a * np.asarray(self.exact_grad(x, p)))
        return Observable(lambda x, p: a * self.func(x, p), g, f"{a:g}*{self.name}")


def as_observable(f) -> Observable:
    if isinstance(f, Observable):
        return f
    if callable(f):
        return Observable(f)
    value = float(f)
    return Observable(lambda x, p: value, lambda x, p: np.zeros(2 * len(x)), f"{value:g}")


def coordinate(mu: int) -> Observable:
    def grad(x, p):
        g = np.zeros(2 * len(x))
        g[mu] = 1.0
        return g
    return Observable(lambda x, p: x[mu], grad, f"x{mu}")


def momentum(mu: int) -> Observable:
    def grad(x, p):
        g = np.zeros(2 * len(x))
        g[len(x) + mu] = 1.0
        return g
    return Observable(lambda x, p: p[mu], grad, f"p{mu}")


def polynomial(terms: dict, name: str = "poly") -> Observable:
    """Polynomial in ``z = (x, p)`` from ``{exponent tuple: coefficient}`` with an exact gradient."""
    exps = np.array(list(terms.keys()), dtype=int)
    coefs = np.array(list(terms.values()), dtype=float)

    def f(x, p):
        z = np.concatenate([x, p])
        return float(coefs @ np.prod(z[None, :] ** exps, axis=1))

    def grad(x, p):
        z = np.concatenate([x, p])
        g = np.zeros(z.size)
        for k in range(z.size):
            e = exps.copy()
            lead = e[:, k].astype(float)
            e[:, k] = np.maximum(e[:, k] - 1, 0)
            g[k] = coefs @ (lead * np.prod(z[None, :] ** e, axis=1))
        return g

    return Observable(f, grad, name)


def _signs(n: int, convention: str) -> np.ndarray:
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown bracket convention {convention!r}")
    s = np.ones(n)
    if convention == "minus-time":
        s[0] = -1.0
    return s


def ext_bracket(f, g, s: ExtendedState, convention: str = "minus-time") -> float:
    """``[[f, g]] = sum_i (f_qi g_pi - f_pi g_qi) - (f_x0 g_p0 - f_p0 g_x0)``."""
    f, g = as_observable(f), as_observable(g)
    n = s.dim
    z = s.as_vector()
    df, dg = f.grad(z), g.grad(z)
    sg = _signs(n, convention)
    return float(np.sum(sg * (df[:n] * dg[n:] - df[n:] * dg[:n])))


def bracket_observable(f, g, convention: str = "minus-time") -> Observable:
    """``[[f, g]]`` as an observable (its own gradient by finite differences)."""
    f, g = as_observable(f), as_observable(g)

    def func(x, p):
        return ext_bracket(f, g, ExtendedState(x, p), convention)

    return Observable(func, None, f"[[{f.name},{g.name}]]")


@dataclass(frozen=True)
class ExtHamiltonian(Observable):
    """Extended Hamiltonian: generator of the lambda-flow; physical states satisfy ``H = 0``."""

    dim: int = 1
    label: str = "custom"
    c: float = 1.0
    convention: str = "minus-time"

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown Hamiltonian label {self.label!r}")
        _signs(self.dim, self.convention)

    def vector_field(self, z) -> np.ndarray:
        """``(dx/dlam, dp/dlam) = ([[x, H]], [[p, H]])``."""
        n = self.dim
        dH = self.grad(z)
        sg = _signs(n, self.convention)
        return np.concatenate([sg * dH[n:], -sg * dH[:n]])

    def __neg__(self):
        base = Observable.__neg__(self)
        return replace(self, func=base.func, exact_grad=base.exact_grad, name=base.name)


def make_ext_hamiltonian(func, dim, label="custom", c=1.0, exact_grad=None, name="H",
                         convention="minus-time") -> ExtHamiltonian:
    return ExtHamiltonian(func, exact_grad, name, dim, label, c, convention)


def constraint_residual(H: ExtHamiltonian, s: ExtendedState) -> float:
    """``|H(s)|``."""
    return abs(H(s))


def parametrization_rate(H: ExtHamiltonian, s: ExtendedState) -> float:
    """``[[x^0, H]] / c``, i.e. ``dt/dlam``; it identifies what lambda means for ``H``."""
    return ext_bracket(coordinate(0), H, s, H.convention) / H.c


def evolve(H: ExtHamiltonian, s0: ExtendedState, grid, init_tol: float = 1e-10,
           drift_tol: float = 1e-7, monitor_only: bool = False, blowup: float = 1e12) -> Trajectory:
    """RK4 flow ``df/dlam = [[f, H]]`` of all coordinates and momenta on ``grid``.

    The constraint ``|H|`` is recorded per sample.  Unless ``monitor_only``,
    the start must satisfy ``|H(s0)| < init_tol`` and the run aborts with
    :class:`ConstraintViolationError` once ``|H|`` exceeds
    ``|H(s0)| + drift_tol * max(1, |lam - lam0|)``.  No projection is applied.
    """
    if s0.dim != H.dim:
        raise InvalidDimensionError(f"state has dim {s0.dim}, Hamiltonian expects {H.dim}")
    grid = np.asarray(grid, dtype=float)
    h0 = constraint_residual(H, s0)
    if not monitor_only and h0 >= init_tol:
        raise ConstraintViolationError(f"initial state is off the constraint surface (|H| = {h0:.3g})")
    zs = np.empty((grid.size, 2 * H.dim))
    res = np.empty(grid.size)
    zs[0] = s0.as_vector()
    res[0] = h0
    rhs = lambda lam, z: H.vector_field(z)  # noqa: E731
    for i in range(grid.size - 1):
        z = numdiff.rk4_step(rhs, grid[i], zs[i], grid[i + 1] - grid[i])
        if not np.all(np.isfinite(z)) or np.max(np.abs(z)) > blowup:
            raise IntegrationDivergedError(f"extended flow diverged at lambda={grid[i + 1]:g}")
        zs[i + 1] = z
        res[i + 1] = abs(H.value(z))
        limit = h0 + drift_tol * max(1.0, abs(grid[i + 1] - grid[0]))
        if not monitor_only and res[i + 1] > limit:
            partial = Trajectory(grid[: i + 2], zs[: i + 2, : H.dim], zs[: i + 2, H.dim:], "phase",
                                 {"H": res[: i + 2]})
            raise ConstraintViolationError(
                f"|H| = {res[i + 1]:.3g} exceeds {limit:.3g} at lambda={grid[i + 1]:g}", partial
            )
    return Trajectory(grid, zs[:, : H.dim], zs[:, H.dim:], "phase", {"H": res})


# --------------------------------------------------------------------------
# catalog


def _positive(phi, s):
    value = phi(s)
    if not np.isfinite(value) or value <= 0.0:
        raise GaugeDegenerateError(f"phi({s:g}) = {value:g}; the gauge needs phi > 0")
    return value


def make_coordinate_time_H(Hcl, c: float = 1.0, dim: Optional[int] = None) -> ExtHamiltonian:
    """``H = Hcl(q, p) - c p_0``; ``Hcl`` must not depend on ``p_0``."""
    Hcl = as_observable(Hcl)
    return make_ext_hamiltonian(lambda x, p: Hcl.func(x, p) - c * p[0], dim or 1, "coordinate-time", c,
                                name=f"{Hcl.name}-c*p0")


def make_phi_coordinate_H(phi, c: float = 1.0) -> ExtHamiltonian:
    """``H = phi(t) - p_0`` of the one-dimensional ``phi(q) v`` system."""
    return make_coordinate_time_H(Observable(lambda x, p: phi(x[0] / c), name="phi(t)"), c, dim=1)


def make_proper_time_H(phi, c: float = 1.0, dim: int = 1) -> ExtHamiltonian:
    """``H = 1 - p_0 / phi(t)``; ``dt/dlam = 1/phi``, so lambda is the proper time."""
    return make_ext_hamiltonian(lambda x, p: 1.0 - p[0] / _positive(phi, x[0] / c), dim, "proper-time", c,
                                name="1-p0/phi(t)")


def make_proper_length_H(phi, axis: int = 1, dim: int = 2) -> ExtHamiltonian:
    """``H = p_1 / phi(q_1) - 1``; ``dq_1/dlam = 1/phi``, so lambda is the proper length."""
    return make_ext_hamiltonian(lambda x, p: p[axis] / _positive(phi, x[axis]) - 1.0, dim, "proper-length",
                                name="p1/phi(q1)-1")


def make_momentum_H(p_ref: float, axis: int = 1, dim: int = 2) -> ExtHamiltonian:
    """``H = p_1 - p_1(0)``: translation along ``q_1``."""
    def grad(x, p):
        g = np.zeros(2 * dim)
        g[dim + axis] = 1.0
        return g
    return make_ext_hamiltonian(lambda x, p: p[axis] - p_ref, dim, "momentum", exact_grad=grad,
                                name="p1-p1(0)")


def make_energy_H(E: float, dim: int = 1) -> ExtHamiltonian:
    """``H = p_0 - E``: backward coordinate-time translation."""
    def grad(x, p):
        g = np.zeros(2 * dim)
        g[dim] = 1.0
        return g
    return make_ext_hamiltonian(lambda x, p: p[0] - E, dim, "custom", exact_grad=grad, name="p0-E")


def make_moving_particle_H(v: float, p1_0: float, E: float) -> ExtHamiltonian:
    """``H_t = v (p_1 - p_1(0)) - (p_0 - E)`` on the ``(t, q)`` plane."""
    def grad(x, p):
        return np.array([0.0, 0.0, -1.0, v])
    return make_ext_hamiltonian(lambda x, p: v * (p[1] - p1_0) - (p[0] - E), 2, "moving-particle",
                                exact_grad=grad, name="v(p1-p1(0))-(p0-E)")


def gauge_relate_H(H_lambda: ExtHamiltonian, rate, I, probes: Sequence[ExtendedState] = (),
                   tol: float = 1e-8) -> ExtHamiltonian:
    """``H_xi = (H_lambda + I) / rate`` with ``rate = dxi/dlam``.

    ``rate`` is a constant or a callable ``rate(x, p)``.  ``I`` must be an
    integral of the ``H_lambda`` flow; this is checked at every probe state and
    :class:`NotAnIntegralError` is raised otherwise.
    """
    I = as_observable(I)
    for s in probes:
        b = ext_bracket(I, H_lambda, s, H_lambda.convention)
        if abs(b) > tol:
            raise NotAnIntegralError(f"[[I, H]] = {b:.3g} at x={s.x}, p={s.p}")
    r = rate if callable(rate) else (lambda x, p, _r=float(rate): _r)

    def func(x, p):
        value = r(x, p)
        if value == 0.0 or not np.isfinite(value):
            raise GaugeDegenerateError("gauge rate vanishes")
        return (H_lambda.func(x, p) + I.func(x, p)) / value

    return make_ext_hamiltonian(func, H_lambda.dim, "custom", H_lambda.c, name=f"({H_lambda.name}+I)/rate",
                                convention=H_lambda.convention)
