"""Hybrid solver: every ant carries its own parameter vector.

Ants build tours under their individual (beta, rho, q0) while sharing one
pheromone matrix; after each iteration the population of parameter vectors
takes a firefly sweep with tour quality (inverse length) as brightness, so
the solver tunes its own parameters as it runs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .acs import (
    RunRecord,
    compute_tau0,
    construct_tour,
    global_update,
    heuristic_matrix,
    init_pheromone,
    nearest_neighbor_tour,
)
from .firefly import PARAM_NAMES, FaState, ParamBounds, ParamVector, reduce_alpha, sweep
from .tsplib import Tour, TspInstance


@dataclass(frozen=True)
class HybridConfig:
    """Settings for a hybrid run; defaults follow the standard setup."""

    iterations: int = 1000
    m: int = 10
    bounds: ParamBounds = field(default_factory=ParamBounds)
    alpha: float = 0.1
    fa_alpha0: float = 2.3
    fa_beta0: float = 1.0

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ValueError(f"iterations must be >= 0, got {self.iterations}")
        if self.m < 1:
            raise ValueError(f"ant count m must be >= 1, got {self.m}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.fa_alpha0 > 0:
            raise ValueError(f"fa_alpha0 must be positive, got {self.fa_alpha0}")


@dataclass(frozen=True, eq=False)
class ParameterTrace:
    """Per-iteration population statistics of the tuned parameters.

    Column order matches ``names``; one row per completed iteration. Means
    are what the usual evolution plots show, min/max are extra diagnostics.
    """

    names: tuple[str, ...]
    means: np.ndarray
    mins: np.ndarray
    maxs: np.ndarray

    def __len__(self) -> int:
        return self.means.shape[0]


class _AntParams(NamedTuple):
    beta: float
    theta: float
    rho: float
    q0: float
    tau0: float


def brightness(length: int) -> float:
    """Firefly brightness of a tour: the inverse of its length."""
    if length < 1:
        raise ValueError(f"tour length must be a positive integer, got {length}")
    return 1.0 / length


def init_population(bounds: ParamBounds, m: int, rng: np.random.Generator) -> list[ParamVector]:
    """m parameter vectors sampled uniformly within the box."""
    if m < 1:
        raise ValueError(f"population size must be >= 1, got {m}")
    sample = bounds.lows + rng.random((m, len(PARAM_NAMES))) * bounds.widths
    return [ParamVector.from_array(row) for row in sample]


def run_acsfa(
    inst: TspInstance,
    config: HybridConfig,
    rng: np.random.Generator,
) -> tuple[RunRecord, ParameterTrace]:
    """Run the self-tuning hybrid; returns the run record and parameter trace.

    Per iteration: each ant builds a tour from a random start under its own
    parameters (local updates on the shared matrix, using that ant's rho),
    the global best reinforces the matrix, the firefly sweep evolves the
    parameter population, and the randomization weight shrinks by the best
    firefly's delta. Ants keep their own vector across iterations (the sweep
    moves vectors in place rather than reassigning them by rank); that
    identity-stable pairing measurably tightens solution quality.
    """
    t0 = time.perf_counter()
    n = inst.dimension
    m = config.m
    tau0 = compute_tau0(inst)
    tau = init_pheromone(n, tau0)
    eta = heuristic_matrix(inst)
    pop = init_population(config.bounds, m, rng)
    fa = FaState(alpha=config.fa_alpha0, beta0=config.fa_beta0, alpha0=config.fa_alpha0)

    dims = len(PARAM_NAMES)
    means = np.empty((config.iterations, dims))
    mins = np.empty((config.iterations, dims))
    maxs = np.empty((config.iterations, dims))
    best: Tour | None = None
    trace: list[int] = []

    brightest = 0
    for it in range(config.iterations):
        lengths = []
        for k in range(m):
            v = pop[k]
            ant = _AntParams(beta=v.beta, theta=1.0, rho=v.rho, q0=v.q0, tau0=tau0)
            start = int(rng.integers(n))
            tour = construct_tour(inst, tau, ant, rng, start, eta_pow=eta ** v.beta)
            lengths.append(tour.length)
            if best is None or tour.length < best.length:
                best = tour
        global_update(tau, best, config)
        light = [brightness(length) for length in lengths]
        pop = sweep(pop, light, fa, config.bounds, rng)
        brightest = int(np.argmin(lengths))  # the brightest firefly never moved
        reduce_alpha(fa, pop[brightest].delta)
        positions = np.stack([v.as_array() for v in pop])
        means[it] = positions.mean(axis=0)
        mins[it] = positions.min(axis=0)
        maxs[it] = positions.max(axis=0)
        trace.append(best.length)

    best_params = pop[brightest] if config.iterations > 0 else None
    if best is None:
        best = nearest_neighbor_tour(inst, 0)
    record = RunRecord(
        algorithm="acsfa",
        instance=inst.name,
        best_tour=best,
        best_lengths=tuple(trace),
        wall_time_s=time.perf_counter() - t0,
        best_params=best_params,
    )
    return record, ParameterTrace(names=PARAM_NAMES, means=means, mins=mins, maxs=maxs)
