"""Firefly moves over bounded parameter vectors.

Positions are 5-vectors (beta, rho, q0, gamma, delta): the first three feed
tour construction, the last two steer the firefly dynamics themselves.
Distances are normalized per dimension because the raw ranges differ by
more than an order of magnitude, which would otherwise make the light
absorption coefficient meaningless for the narrow dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PARAM_NAMES = ("beta", "rho", "q0", "gamma", "delta")


@dataclass(frozen=True)
class ParamBounds:
    """Per-dimension (low, high) box for parameter vectors."""

    beta: tuple[float, float] = (0.0, 8.0)
    rho: tuple[float, float] = (0.5, 1.0)
    q0: tuple[float, float] = (0.5, 1.0)
    gamma: tuple[float, float] = (0.0, 10.0)
    delta: tuple[float, float] = (0.8, 1.0)

    def __post_init__(self) -> None:
        for name in PARAM_NAMES:
            low, high = getattr(self, name)
            if not low < high:
                raise ValueError(f"{name} bounds must satisfy low < high, got ({low}, {high})")
        lows = np.array([getattr(self, n)[0] for n in PARAM_NAMES])
        highs = np.array([getattr(self, n)[1] for n in PARAM_NAMES])
        lows.setflags(write=False)
        highs.setflags(write=False)
        object.__setattr__(self, "_lows", lows)
        object.__setattr__(self, "_highs", highs)

    @property
    def lows(self) -> np.ndarray:
        return self._lows  # type: ignore[attr-defined]

    @property
    def highs(self) -> np.ndarray:
        return self._highs  # type: ignore[attr-defined]

    @property
    def widths(self) -> np.ndarray:
        return self.highs - self.lows

    def contains(self, vec: "ParamVector") -> bool:
        a = vec.as_array()
        return bool((a >= self.lows).all() and (a <= self.highs).all())

    def clamp(self, values: np.ndarray) -> np.ndarray:
        return np.clip(values, self.lows, self.highs)


@dataclass(frozen=True)
class ParamVector:
    """One firefly's position."""

    beta: float
    rho: float
    q0: float
    gamma: float
    delta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.beta, self.rho, self.q0, self.gamma, self.delta])

    @classmethod
    def from_array(cls, values) -> "ParamVector":
        return cls(*(float(v) for v in values))


@dataclass
class FaState:
    """Mutable randomization-weight state; alpha only ever shrinks."""

    alpha: float = 2.3
    beta0: float = 1.0
    alpha0: float = 2.3

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must start positive, got {self.alpha}")


def param_distance(a: ParamVector, b: ParamVector, bounds: ParamBounds) -> float:
    """Euclidean distance after dividing each difference by its range width."""
    diff = (a.as_array() - b.as_array()) / bounds.widths
    return float(math.sqrt(float((diff * diff).sum())))


def attractiveness(beta0: float, gamma: float, r: float) -> float:
    """beta0 * exp(-gamma * r^2); beta0 is the attraction at r = 0."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if r < 0:
        raise ValueError(f"distance must be >= 0, got {r}")
    return float(beta0 * math.exp(-gamma * r * r))


def move(
    xi: ParamVector,
    xj: ParamVector,
    fa: FaState,
    gamma: float,
    bounds: ParamBounds,
    rng: np.random.Generator,
) -> ParamVector:
    """Move ``xi`` toward ``xj`` with one uniform random kick per dimension.

    The result is clamped to the bounds, so the step is total. Full
    attraction (b == 1, e.g. gamma == 0 with the default beta0) lands on
    ``xj`` exactly rather than within rounding error.
    """
    b = attractiveness(fa.beta0, gamma, param_distance(xi, xj, bounds))
    a = xi.as_array()
    attracted = xj.as_array() if b == 1.0 else a + b * (xj.as_array() - a)
    x = attracted + fa.alpha * (rng.random(5) - 0.5)
    return ParamVector.from_array(bounds.clamp(x))


def reduce_alpha(fa: FaState, delta: float) -> None:
    """Shrink the randomization weight once: alpha <- alpha * delta."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    fa.alpha *= delta


def sweep(
    vecs: list[ParamVector],
    light: list[float],
    fa: FaState,
    bounds: ParamBounds,
    rng: np.random.Generator,
) -> list[ParamVector]:
    """One full pairwise sweep, preserving the caller's ordering.

    Sweep order is ascending i, ascending j; ``i`` moves toward every
    strictly brighter ``j`` using j's own gamma, and updated positions take
    effect immediately within the sweep. The brightest firefly never moves.
    """
    if not vecs or len(vecs) != len(light):
        raise ValueError("population must be non-empty with one brightness per vector")
    if not all(math.isfinite(b) for b in light):
        raise ValueError("brightness values must be finite")
    vecs = list(vecs)
    for i in range(len(vecs)):
        for j in range(len(vecs)):
            if light[j] > light[i]:
                vecs[i] = move(vecs[i], vecs[j], fa, vecs[j].gamma, bounds, rng)
    return vecs


def firefly_step(
    population: list[tuple[ParamVector, float]],
    fa: FaState,
    bounds: ParamBounds,
    rng: np.random.Generator,
) -> list[tuple[ParamVector, float]]:
    """One sweep over (vector, brightness) pairs, returned ranked brightest-first."""
    vecs = [v for v, _ in population]
    light = [b for _, b in population]
    moved = sweep(vecs, light, fa, bounds, rng)
    return sorted(zip(moved, light), key=lambda pair: pair[1], reverse=True)
