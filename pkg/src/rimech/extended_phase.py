"""Metrics, extended phase-space-time points, trajectories and signature analysis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidDimensionError

MAX_DIM = 8


@dataclass(frozen=True)
class Constants:
    """Unit record shared by all operations; ``c = hbar = 1`` by default."""

    c: float = 1.0
    hbar: float = 1.0


NATURAL = Constants()


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


def parse_signature(signature) -> tuple:
    """Accept ``"+---"``, ``"(-+++)"`` or a sequence of +/-1 and return a tuple of ints."""
    if isinstance(signature, str):
        chars = [ch for ch in signature if ch in "+-"]
        out = tuple(1 if ch == "+" else -1 for ch in chars)
    else:
        out = tuple(int(np.sign(s)) for s in signature)
    if len(out) == 0 or any(s == 0 for s in out):
        raise InvalidDimensionError("signature must be a non-empty list of +1/-1 entries")
    return out


@dataclass(frozen=True)
class Metric:
    """Position-dependent symmetric metric ``g_{mu nu}(x)`` with a declared signature.

    ``constant`` holds the matrix for metrics that do not depend on ``x``; when
    present, :meth:`__call__` returns it without calling ``eval``.
    """

    dim: int
    signature: tuple
    eval: Optional[Callable[[np.ndarray], np.ndarray]] = None
    constant: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.dim < 1 or self.dim > MAX_DIM:
            raise InvalidDimensionError(f"metric dimension must be in 1..{MAX_DIM}, got {self.dim}")
        if len(self.signature) != self.dim:
            raise InvalidDimensionError("signature length differs from dim")
        if self.eval is None and self.constant is None:
            raise ValueError("a metric needs either eval or constant")
        if self.constant is not None:
            object.__setattr__(self, "constant", _frozen(self.constant))

    def __call__(self, x) -> np.ndarray:
        if self.constant is not None:
            return self.constant
        return np.asarray(self.eval(np.asarray(x, dtype=float)), dtype=float)

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def inverse(self, x) -> np.ndarray:
        return np.linalg.inv(self(x))

    def check(self, xs, tol=1e-12) -> None:
        """Verify symmetry and eigenvalue signs at the sample points ``xs``."""
        want = sorted(self.signature)
        for x in xs:
            g = self(x)
            if g.shape != (self.dim, self.dim):
                raise InvalidDimensionError(f"metric returned shape {g.shape}")
            if np.max(np.abs(g - g.T)) >= tol:
                raise ValueError(f"metric not symmetric at x={x}")
            got = sorted(int(s) for s in np.sign(np.linalg.eigvalsh(g)))
            if got != want:
                raise ValueError(f"metric signature {got} differs from declared {want} at x={x}")


def make_minkowski(dim: int, signature: str = "plus-minus") -> Metric:
    """Flat metric ``diag(+1,-1,...)`` (``plus-minus``) or ``diag(-1,+1,...)`` (``minus-plus``)."""
    if dim < 1:
        raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
    if signature not in ("plus-minus", "minus-plus"):
        raise ValueError(f"unknown signature tag {signature!r}")
    time_sign = 1 if signature == "plus-minus" else -1
    diag = np.full(dim, -time_sign, dtype=float)
    diag[0] = time_sign
    return Metric(dim=dim, signature=tuple(int(s) for s in diag), constant=np.diag(diag))


def make_metric(func, dim, signature) -> Metric:
    """Wrap a callable ``x -> g(x)`` as a :class:`Metric`.

    ``signature`` is an explicit sign list or one of the tags ``plus-minus`` and
    ``minus-plus``.
    """
    if signature in ("plus-minus", "minus-plus"):
        signature = make_minkowski(dim, signature).signature
    return Metric(dim=dim, signature=parse_signature(signature), eval=func)


def weak_field_metric(U, c: float = 1.0, signature: str = "minus-plus", dim: int = 4) -> Metric:
    """Metric with ``|g_00| = 1 - 2U/c^2`` and flat spatial part.

    ``U`` is a callable of the full coordinate vector ``x`` (with ``x[0] = c t``).
    """

    def g(x):
        g00 = 1.0 - 2.0 * U(x) / c**2
        d = np.ones(dim)
        if signature == "minus-plus":
            d[0] = -g00
        else:
            d[0] = g00
            d[1:] = -1.0
        return np.diag(d)

    sig = (-1,) + (1,) * (dim - 1) if signature == "minus-plus" else (1,) + (-1,) * (dim - 1)
    return Metric(dim=dim, signature=sig, eval=g)


def _check_len(m: Metric, v):
    v = np.asarray(v, dtype=float)
    if v.shape != (m.dim,):
        raise InvalidDimensionError(f"expected a vector of length {m.dim}, got shape {v.shape}")
    return v


def norm_squared(m: Metric, x, v) -> float:
    """Double contraction ``g_{mu nu}(x) v^mu v^nu``."""
    v = _check_len(m, v)
    return float(v @ m(x) @ v)


def lower_index(m: Metric, x, v) -> np.ndarray:
    return m(x) @ _check_len(m, v)


def raise_index(m: Metric, x, w) -> np.ndarray:
    return np.linalg.solve(m(x), _check_len(m, w))


@dataclass(frozen=True)
class ExtendedState:
    """Point of phase-space-time: coordinates ``x`` (``x[0] = c t``) and momenta ``p``."""

    x: np.ndarray
    p: np.ndarray
    lam: float = 0.0

    def __post_init__(self):
        x = _frozen(np.atleast_1d(self.x))
        p = _frozen(np.atleast_1d(self.p))
        if x.ndim != 1 or x.shape != p.shape:
            raise InvalidDimensionError(f"x and p must be vectors of equal length, got {x.shape} and {p.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise ValueError("extended state entries must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "lam", float(self.lam))

    @property
    def dim(self) -> int:
        return self.x.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_vector(cls, z, lam=0.0) -> "ExtendedState":
        z = np.asarray(z, dtype=float)
        n = z.size // 2
        return cls(z[:n], z[n:], lam)


@dataclass(frozen=True)
class Trajectory:
    """Ordered samples ``(lam_i, x_i, aux_i)``.

    ``aux`` holds velocities for ``kind == "configuration"`` and momenta for
    ``kind == "phase"``.  ``diagnostics`` maps names to per-sample arrays.
    """

    lam: np.ndarray
    x: np.ndarray
    aux: np.ndarray
    kind: str = "configuration"
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        lam = _frozen(self.lam)
        x = _frozen(np.atleast_2d(self.x))
        aux = _frozen(np.atleast_2d(self.aux))
        if x.shape[0] != lam.size:
            x = _frozen(x.T)
        if aux.shape[0] != lam.size:
            aux = _frozen(aux.T)
        if self.kind not in ("configuration", "phase"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if x.shape != aux.shape or x.shape[0] != lam.size:
            raise InvalidDimensionError("samples must share one dimension")
        if lam.size > 1:
            d = np.diff(lam)
            if not (np.all(d > 0) or np.all(d < 0)):
                raise ValueError("lambda must be strictly monotone")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "aux", aux)
        object.__setattr__(self, "diagnostics", {k: _frozen(v) for k, v in self.diagnostics.items()})

    def __len__(self):
        return self.lam.size

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @property
    def direction(self) -> int:
        """+1 for increasing lambda, -1 for decreasing."""
        if self.lam.size < 2:
            return 1
        return 1 if self.lam[-1] > self.lam[0] else -1

    def state(self, i) -> ExtendedState:
        return ExtendedState(self.x[i], self.aux[i], self.lam[i])


@dataclass(frozen=True)
class SpeedBound:
    status: str  # "bounded", "unbounded" or "infeasible"
    bound: float

    @property
    def bounded(self) -> bool:
        return self.status == "bounded"

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def max_spatial_speed(signature, tol: float = 1e-6) -> SpeedBound:
    """Largest squared spatial speed ``sum_a (v^a / v^0)^2`` allowed by ``g(v, v) >= 0``.

    The reference time axis is the first ``+`` entry, with ``v^0 = 1`` along it.
    A direction ``d`` on the unit sphere of the remaining axes admits speeds up
    to ``1 / -Q(d)`` where ``Q(d) = sum_a s_a d_a^2``; any direction with
    ``Q(d) >= 0`` is unbounded.  ``max Q`` is located by a lattice search over
    directions followed by local refinement.
    """
    sig = parse_signature(signature)
    if 1 not in sig:
        return SpeedBound("infeasible", float("nan"))
    t = sig.index(1)
    rest = np.array(sig[:t] + sig[t + 1:], dtype=float)
    k = rest.size
    if k == 0:
        return SpeedBound("bounded", 0.0)

    def q(d):
        d = np.asarray(d, dtype=float)
        return float(rest @ (d * d) / (d @ d))

    levels = np.linspace(-1.0, 1.0, 5 if k <= 6 else 3)
    cands = [np.array(p) for p in itertools.product(levels, repeat=k) if np.any(p)]
    vals = np.array([q(d) for d in cands])
    best = [cands[i] for i in np.argsort(vals)[::-1][:4]]
    qmax = float(vals.max())
    for d0 in best:
        res = minimize(lambda d: -q(d), d0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
        qmax = max(qmax, -float(res.fun))
    if qmax >= -tol:
        return SpeedBound("unbounded", float("inf"))
    return SpeedBound("bounded", 1.0 / -qmax)
