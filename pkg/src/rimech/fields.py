"""Registry of parameterized scalar fields used by configs and demos.

Each factory returns a :class:`PhiField`.  Scalar evaluation accepts floats
or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class PhiField:
    """Positive scalar ``phi(s)`` with fluctuation scale ``delta`` and asymptotic value.

    ``antiderivative`` (if known) gives ``int_0^s phi``.  ``positive=False``
    admits ``phi >= 0`` (used by the localized zero-momentum case).
    """

    eval: Callable
    delta: float = 0.0
    asymptotic: Optional[float] = None
    band: float = 1e-12
    antiderivative: Optional[Callable] = None
    positive: bool = True
    name: str = "phi"

    def __call__(self, s):
        out = self.eval(np.asarray(s, dtype=float))
        return float(out) if np.ndim(out) == 0 else np.asarray(out, dtype=float)

    def check(self, samples) -> None:
        """Verify positivity on ``samples`` and the asymptotic band for ``s > 10 delta``."""
        samples = np.asarray(samples, dtype=float)
        vals = np.asarray(self(samples), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"{self.name} is not finite on the samples")
        if self.positive and np.any(vals <= 0):
            raise ValueError(f"{self.name} must be positive")
        if not self.positive and np.any(vals < 0):
            raise ValueError(f"{self.name} must be non-negative")
        if self.asymptotic is not None:
            far = samples > 10 * self.delta
            if np.any(np.abs(vals[far] - self.asymptotic) >= self.band):
                raise ValueError(f"{self.name} leaves its asymptotic band beyond 10 delta")


def constant(value: float) -> PhiField:
    value = float(value)
    return PhiField(lambda s: value + 0.0 * s, 0.0, value, antiderivative=lambda s: value * s,
                    positive=value > 0, name=f"constant({value:g})")


def polynomial(coeffs) -> PhiField:
    """``sum_k coeffs[k] s^k``."""
    poly = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    anti = poly.integ()
    return PhiField(poly, antiderivative=lambda s: anti(s) - anti(0.0), name="polynomial")


def sinusoid(offset: float, amplitude: float, omega: float, phase: float = 0.0) -> PhiField:
    """``offset + amplitude sin(omega s + phase)``; its mean over whole periods is ``offset``."""
    def anti(s):
        return offset * s - amplitude / omega * (np.cos(omega * s + phase) - np.cos(phase))
    return PhiField(lambda s: offset + amplitude * np.sin(omega * s + phase), antiderivative=anti,
                    name="sinusoid")


def bump(base: float, amplitude: float, delta: float) -> PhiField:
    """``base + amplitude sin^2(pi s / delta)`` on ``[0, delta]`` and ``base`` elsewhere.

    The fluctuation integrates to ``amplitude * delta / 2``.
    """
    def ev(s):
        s = np.asarray(s, dtype=float)
        inside = (s >= 0) & (s <= delta)
        return base + np.where(inside, amplitude * np.sin(np.pi * s / delta) ** 2, 0.0)

    def anti(s):
        s = np.asarray(s, dtype=float)
        w = np.clip(s, 0.0, delta)
        inner = amplitude * (w / 2 - delta / (4 * np.pi) * np.sin(2 * np.pi * w / delta))
        return base * s + inner

    return PhiField(ev, delta, base, antiderivative=anti, positive=base > 0,
                    name="bump")


def bump_integral(amplitude: float, delta: float) -> float:
    return 0.5 * amplitude * delta


def weak_potential(u0: float, omega: float, c: float = 1.0, phase: float = 0.0):
    """``(U, dU/dt)`` for ``U = u0 sin(omega t + phase)`` with ``t = x^0 / c``."""
    def U(x):
        return u0 * np.sin(omega * np.atleast_1d(x)[0] / c + phase)

    def dU_dt(t):
        return u0 * omega * np.cos(omega * np.asarray(t, dtype=float) + phase)

    return U, dU_dt


REGISTRY = {
    "constant": constant,
    "polynomial": polynomial,
    "sinusoid": sinusoid,
    "bump": bump,
}


def from_spec(spec) -> PhiField:
    """Build a field from ``{"family": name, "params": {...} or [...]}``."""
    family = spec["family"]
    if family not in REGISTRY:
        raise KeyError(f"unknown field family {family!r}")
    params = spec.get("params", {})
    factory = REGISTRY[family]
    if isinstance(params, dict):
        return factory(**params)
    return factory(*params)
