"""Ant colony system engine: transition rule, pheromone updates, baseline solver.

The pheromone matrix is a plain (n, n) float array. Tour construction
mutates it in place (local updates happen as edges are traversed), so a run
owns its matrix exclusively. All randomness comes from the caller's
generator; nothing here touches global state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from .tsplib import Tour, TspInstance, tour_length

if TYPE_CHECKING:
    from .firefly import ParamVector


@dataclass(frozen=True)
class AcsParams:
    """Parameter bundle for the fixed-parameter baseline solver.

    ``tau0`` is derived from the instance (see :func:`compute_tau0`) whenever
    it is left as None.
    """

    beta: float = 2.0
    theta: float = 1.0
    rho: float = 0.1
    q0: float = 0.85
    alpha: float = 0.1
    m: int = 10
    tau0: float | None = None

    def __post_init__(self) -> None:
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if self.theta < 0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if not 0.0 <= self.q0 <= 1.0:
            raise ValueError(f"q0 must lie in [0, 1], got {self.q0}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.m < 1:
            raise ValueError(f"ant count m must be >= 1, got {self.m}")
        if self.tau0 is not None and not self.tau0 > 0:
            raise ValueError(f"tau0 must be positive, got {self.tau0}")


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one seeded solver run.

    ``best_lengths`` traces the global best after every iteration;
    ``best_params`` is filled by the hybrid solver only.
    """

    algorithm: str
    instance: str
    best_tour: Tour
    best_lengths: tuple[int, ...]
    wall_time_s: float
    seed: int | None = None
    best_params: "ParamVector | None" = None


def nearest_neighbor_tour(inst: TspInstance, start: int = 0) -> Tour:
    """Greedy tour, always visiting the nearest unvisited city (ties: lowest index)."""
    n = inst.dimension
    if not 0 <= start < n:
        raise IndexError(f"start city {start} out of range for n={n}")
    d = inst.dist
    order = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    order[0] = start
    visited[start] = True
    r = start
    for k in range(1, n):
        row = d[r].astype(float)
        row[visited] = np.inf
        r = int(np.argmin(row))
        order[k] = r
        visited[r] = True
    return Tour(order=tuple(int(c) for c in order), length=tour_length(inst, order))


def compute_tau0(inst: TspInstance) -> float:
    """Initial pheromone level 1 / (n * L_nn) from the greedy tour at city 0."""
    return 1.0 / (inst.dimension * nearest_neighbor_tour(inst, 0).length)


def init_pheromone(n: int, tau0: float) -> np.ndarray:
    """Fresh symmetric pheromone matrix at the base level everywhere."""
    if not tau0 > 0:
        raise ValueError(f"tau0 must be positive, got {tau0}")
    return np.full((n, n), float(tau0))


def heuristic_matrix(inst: TspInstance) -> np.ndarray:
    """Inverse-distance attractiveness; zero-distance pairs count as distance 1."""
    d = np.maximum(inst.dist.astype(float), 1.0)
    return 1.0 / d


def _pick(J: np.ndarray, w: np.ndarray, q0: float, rng: np.random.Generator) -> int:
    """Exploit (argmax) with probability q0, otherwise sample proportionally."""
    if rng.random() <= q0:
        return int(J[int(np.argmax(w))])
    c = np.cumsum(w)
    total = float(c[-1])
    if total > 0.0 and np.isfinite(total):
        x = rng.random() * total
        return int(J[min(int(np.searchsorted(c, x, side="right")), J.size - 1)])
    # weights can underflow to all-zero after very long decay: fall back to uniform
    return int(J[min(int(rng.random() * J.size), J.size - 1)])


def transition_probabilities(
    r: int,
    unvisited,
    tau: np.ndarray,
    inst: TspInstance,
    params,
) -> np.ndarray:
    """Normalized choice distribution over the unvisited cities, sorted by index."""
    J = np.sort(np.asarray(list(unvisited), dtype=np.int64))
    if J.size == 0:
        raise ValueError("no unvisited cities to choose from")
    eta = heuristic_matrix(inst)
    t = tau[r, J]
    if params.theta != 1.0:
        t = t ** params.theta
    w = t * eta[r, J] ** params.beta
    total = w.sum()
    if total <= 0.0 or not np.isfinite(total):
        return np.full(J.size, 1.0 / J.size)
    return w / total


def select_next_city(
    r: int,
    unvisited,
    tau: np.ndarray,
    inst: TspInstance,
    params,
    rng: np.random.Generator,
) -> int:
    """One application of the pseudo-random-proportional transition rule."""
    J = np.sort(np.asarray(list(unvisited), dtype=np.int64))
    if J.size == 0:
        raise ValueError("no unvisited cities to choose from")
    eta = heuristic_matrix(inst)
    t = tau[r, J]
    if params.theta != 1.0:
        t = t ** params.theta
    w = t * eta[r, J] ** params.beta
    return _pick(J, w, params.q0, rng)


def local_update(tau: np.ndarray, r: int, s: int, params) -> None:
    """Evaporate edge (r, s) toward the base level, symmetrically."""
    if params.tau0 is None:
        raise ValueError("local_update needs params.tau0 to be set")
    v = (1.0 - params.rho) * tau[r, s] + params.rho * params.tau0
    tau[r, s] = v
    tau[s, r] = v


def global_update(tau: np.ndarray, best: Tour, params) -> None:
    """Evaporate and reward the global-best tour's edges, symmetrically.

    Only edges on the best tour are touched: tau <- (1-alpha)*tau + alpha/L.
    Evaporating the whole matrix instead freezes the search within a few
    dozen iterations (cold edges decay geometrically and stop being
    sampled), which measurably destroys solution quality on small
    instances, so the update stays confined to the reinforced edges.
    """
    alpha = params.alpha
    o = np.asarray(best.order, dtype=np.int64)
    nxt = np.roll(o, -1)
    bonus = alpha / max(best.length, 1)  # zero-length tours only on degenerate data
    tau[o, nxt] *= 1.0 - alpha
    tau[nxt, o] *= 1.0 - alpha
    tau[o, nxt] += bonus
    tau[nxt, o] += bonus


def construct_tour(
    inst: TspInstance,
    tau: np.ndarray,
    params,
    rng: np.random.Generator,
    start: int,
    *,
    eta_pow: np.ndarray | None = None,
) -> Tour:
    """Build one complete tour, locally updating every traversed edge.

    ``params`` is any bundle exposing beta, theta, rho, q0 and tau0; the
    hybrid solver passes per-ant values here. ``eta_pow`` (the heuristic
    matrix already raised to beta) can be supplied to avoid recomputation.
    """
    n = inst.dimension
    if not 0 <= start < n:
        raise IndexError(f"start city {start} out of range for n={n}")
    tau0 = params.tau0 if params.tau0 is not None else compute_tau0(inst)
    if eta_pow is None:
        eta_pow = heuristic_matrix(inst) ** params.beta
    theta = params.theta
    rho = params.rho
    q0 = params.q0

    order = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    order[0] = start
    visited[start] = True
    r = start
    for k in range(1, n):
        J = np.flatnonzero(~visited)
        t = tau[r, J]
        if theta != 1.0:
            t = t ** theta
        s = _pick(J, t * eta_pow[r, J], q0, rng)
        v = (1.0 - rho) * tau[r, s] + rho * tau0
        tau[r, s] = v
        tau[s, r] = v
        order[k] = s
        visited[s] = True
        r = s
    first = int(order[0])
    v = (1.0 - rho) * tau[r, first] + rho * tau0
    tau[r, first] = v
    tau[first, r] = v
    return Tour(order=tuple(int(c) for c in order), length=tour_length(inst, order))


def run_acs(
    inst: TspInstance,
    params: AcsParams,
    iterations: int,
    rng: np.random.Generator,
) -> RunRecord:
    """Fixed-parameter solver: m ants per iteration from random starts.

    With ``iterations=0`` the greedy tour used for tau0 is returned, so the
    contract stays total.
    """
    if iterations < 0:
        raise ValueError(f"iterations must be >= 0, got {iterations}")
    t0 = time.perf_counter()
    tau0 = params.tau0 if params.tau0 is not None else compute_tau0(inst)
    eff = replace(params, tau0=tau0)
    n = inst.dimension
    tau = init_pheromone(n, tau0)
    eta_pow = heuristic_matrix(inst) ** eff.beta
    best: Tour | None = None
    trace: list[int] = []
    for _ in range(iterations):
        for _ in range(eff.m):
            start = int(rng.integers(n))
            tour = construct_tour(inst, tau, eff, rng, start, eta_pow=eta_pow)
            if best is None or tour.length < best.length:
                best = tour
        global_update(tau, best, eff)
        trace.append(best.length)
    if best is None:
        best = nearest_neighbor_tour(inst, 0)
    return RunRecord(
        algorithm="acs",
        instance=inst.name,
        best_tour=best,
        best_lengths=tuple(trace),
        wall_time_s=time.perf_counter() - t0,
    )
