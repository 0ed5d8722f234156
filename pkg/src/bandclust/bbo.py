"""Permutation BBO minimising the weighted bandwidth of a two-mode matrix.

Each habitat (island) carries a full candidate solution: a row order and a
column order. A generation visits the two modes in turn, rows first. For the
active mode, islands are ranked by cost (lower cost means a higher suitability
index); every non-elite island then imports positions from donor islands at
its immigration rate, donors being drawn in proportion to their emigration
rate. Rates come from a Lotka-Volterra schedule. A value is imported by
swapping it into place, so islands stay valid permutations, and the swap is
kept only when it strictly lowers the island's cost. Random swap trials under
the same acceptance rule refine each island, and an unconditional random
transposition (mutation) keeps the population from collapsing.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from .errors import ConfigError, InputError
from .matrix import (COLS, ROWS, Arrangement, _swap_delta, _weighted_cost, as_data_matrix,
                     inverse_permutation, is_permutation, normalize_mode)
from .migration import LVParams, migration_schedule

THREADS_ENV = "BANDCLUST_THREADS"

# substream identifiers for SeedSequence spawn keys
_STREAMS = {"scramble": 0, "init": 1, "migration": 2, "mutation": 3, "start": 4}
_MODE_KEY = {ROWS: 0, COLS: 1}


def substream(seed: int, name: str, *keys: int) -> np.random.Generator:
    """Independent generator for a named purpose, derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_STREAMS[name], *keys)))


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


class Interchange(NamedTuple):
    """Swap of two rows (mode ``rows``) or two columns (mode ``cols``)."""

    mode: str
    k_s: int
    k_d: int


def interchanges_to_arrangement(moves, m: int, n: int) -> Arrangement:
    """Compose a list of interchanges, applied in order to the identity."""
    perms = {ROWS: np.arange(m), COLS: np.arange(n)}
    for move in moves:
        mode, ks, kd = move
        mode = normalize_mode(mode)
        perm = perms[mode]
        if ks == kd:
            raise ValueError(f"interchange {move} swaps an index with itself")
        if not (0 <= ks < perm.size and 0 <= kd < perm.size):
            raise IndexError(f"interchange {move} out of range for {mode} of size {perm.size}")
        perm[ks], perm[kd] = perm[kd], perm[ks]
    return Arrangement(perms[ROWS], perms[COLS])


def arrangement_to_interchanges(arr: Arrangement) -> List[Interchange]:
    """A shortest interchange list that rebuilds ``arr`` from the identity."""
    moves = []
    for mode in (ROWS, COLS):
        target = arr.perm(mode)
        current = np.arange(target.size)
        where = np.arange(target.size)
        for p in range(target.size):
            v = target[p]
            if current[p] != v:
                q = int(where[v])
                moves.append(Interchange(mode, p, q))
                u = current[p]
                current[p], current[q] = v, u
                where[v], where[u] = p, q
    return moves


@dataclass
class Island:
    """One habitat: a row order, a column order and their cached cost (None when stale)."""

    row_perm: np.ndarray
    col_perm: np.ndarray
    cost: Optional[float] = None

    def perm(self, mode: str) -> np.ndarray:
        return self.row_perm if normalize_mode(mode) == ROWS else self.col_perm

    def with_perm(self, mode: str, perm: np.ndarray, cost: Optional[float] = None) -> "Island":
        if normalize_mode(mode) == ROWS:
            return Island(perm, self.col_perm.copy(), cost)
        return Island(self.row_perm.copy(), perm, cost)

    def arrangement(self) -> Arrangement:
        return Arrangement(self.row_perm, self.col_perm)

    def copy(self) -> "Island":
        return Island(self.row_perm.copy(), self.col_perm.copy(), self.cost)


@dataclass(frozen=True)
class BboConfig:
    pop_size: int = 30
    generations: int = 100
    mutation_prob: float = 0.05
    swap_trial_rate: float = 0.5
    elite_count: int = 2
    stagnation_window: int = 25
    seed: int = 0
    lv: LVParams = field(default_factory=LVParams)

    def __post_init__(self):
        for name in ("pop_size", "generations", "elite_count", "stagnation_window", "seed"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, np.integer)) or int(value) != value:
                raise ConfigError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("mutation_prob", "swap_trial_rate"):
            try:
                object.__setattr__(self, name, float(getattr(self, name)))
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be a real number, got {getattr(self, name)!r}") from None
        if self.pop_size < 2:
            raise ConfigError(f"pop_size must be >= 2, got {self.pop_size}")
        if self.generations < 1:
            raise ConfigError(f"generations must be >= 1, got {self.generations}")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ConfigError(f"mutation_prob must lie in [0, 1], got {self.mutation_prob}")
        if not 0.0 <= self.swap_trial_rate <= 1.0:
            raise ConfigError(f"swap_trial_rate must lie in [0, 1], got {self.swap_trial_rate}")
        if not 1 <= self.elite_count < self.pop_size:
            raise ConfigError(f"elite_count must satisfy 1 <= elite_count < pop_size, got {self.elite_count}")
        if self.stagnation_window < 0:
            raise ConfigError("stagnation_window must be >= 0 (0 disables it)")
        if self.seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {self.seed}")
        if isinstance(self.lv, dict):
            object.__setattr__(self, "lv", LVParams(**self.lv))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BboConfig":
        data = dict(data)
        if "lv" in data and isinstance(data["lv"], dict):
            data["lv"] = LVParams(**data["lv"])
        return cls(**data)


@dataclass
class SolveResult:
    best: Arrangement
    best_cost: float
    cost_trace: List[float]
    generations_run: int
    wall_time: float
    seed: Optional[int]
    config: dict
    initial_cost: Optional[float] = None
    method: str = "bbo"

    def to_dict(self, include_timing: bool = False) -> dict:
        doc = {
            "method": self.method,
            "shape": list(self.best.shape),
            "best": self.best.to_dict(),
            "best_cost": self.best_cost,
            "initial_cost": self.initial_cost,
            "cost_trace": list(self.cost_trace),
            "generations_run": self.generations_run,
            "seed": self.seed,
            "config": self.config,
        }
        if include_timing:
            doc["wall_time"] = self.wall_time
        return doc

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "SolveResult":
        return cls(best=Arrangement.from_dict(doc["best"]), best_cost=doc["best_cost"],
                   cost_trace=list(doc.get("cost_trace", [])),
                   generations_run=doc.get("generations_run", 0),
                   wall_time=doc.get("wall_time", 0.0), seed=doc.get("seed"),
                   config=doc.get("config", {}), initial_cost=doc.get("initial_cost"),
                   method=doc.get("method", "bbo"))


def initialize_population(k: int, pop_size: int, rng: np.random.Generator) -> List[np.ndarray]:
    """One mode's starting orders: the identity plus ``pop_size - 1`` uniform random permutations."""
    if pop_size < 2:
        raise ConfigError(f"pop_size must be >= 2, got {pop_size}")
    return [np.arange(k)] + [rng.permutation(k) for _ in range(pop_size - 1)]


def rank_by_hsi(population) -> np.ndarray:
    """Rank of each island; 0 is the highest cost (worst), ties keep index order.

    Accepts a sequence of islands or of plain costs.
    """
    costs = [isl.cost if isinstance(isl, Island) else isl for isl in population]
    if any(c is None for c in costs):
        raise ValueError("every island needs a cached cost before ranking")
    order = sorted(range(len(costs)), key=lambda i: (-costs[i], i))
    ranks = np.empty(len(costs), dtype=np.intp)
    ranks[order] = np.arange(len(costs))
    return ranks


def migrate_position(target: Island, p: int, donor: Island, mode: str = ROWS) -> Island:
    """Import the donor's value at position p of ``mode`` into ``target`` by a repair swap."""
    perm = target.perm(mode).copy()
    v = donor.perm(mode)[p]
    if perm[p] == v:
        return target.with_perm(mode, perm, target.cost)
    q = int(np.flatnonzero(perm == v)[0])
    perm[p], perm[q] = perm[q], perm[p]
    return target.with_perm(mode, perm)


def _random_transposition(k: int, rng: np.random.Generator):
    p = int(rng.integers(k))
    q = int(rng.integers(k - 1))
    if q >= p:
        q += 1
    return p, q


def mutate(island: Island, prob: float, rng: np.random.Generator, mode: str = ROWS) -> Island:
    """With probability ``prob`` swap two random positions of ``mode``; the cost cache is cleared."""
    perm = island.perm(mode).copy()
    k = perm.size
    if k < 2 or rng.random() >= prob:
        return island.copy()
    p, q = _random_transposition(k, rng)
    perm[p], perm[q] = perm[q], perm[p]
    return island.with_perm(mode, perm)


@dataclass
class GenerationState:
    """Snapshot handed to the ``on_generation`` callback after each generation."""

    generation: int
    population: List[Island]
    best: Arrangement
    best_cost: float


def _sweep(W: np.ndarray, other_pos: np.ndarray, perm: np.ndarray, immigration: float,
           snapshot: np.ndarray, donor_cum: np.ndarray, config: "BboConfig",
           mig_rng: np.random.Generator, mut_rng: np.random.Generator) -> np.ndarray:
    """One island's update of the active mode; ``W`` is oriented so that mode indexes rows."""
    perm = perm.copy()
    k = perm.size
    pos = inverse_permutation(perm)

    def try_swap(p, q, force=False):
        a, b = perm[p], perm[q]
        if force or _swap_delta(W, other_pos, a, b, p, q) < 0:
            perm[p], perm[q] = b, a
            pos[a], pos[b] = q, p

    triggered = np.flatnonzero(mig_rng.random(k) < immigration)
    if triggered.size and donor_cum[-1] > 0:
        donors = np.searchsorted(donor_cum, mig_rng.random(triggered.size) * donor_cum[-1], side="right")
        for p, d in zip(triggered.tolist(), donors.tolist()):
            v = snapshot[d, p]
            if perm[p] != v:
                try_swap(p, int(pos[v]))
    if k >= 2:
        for p in np.flatnonzero(mut_rng.random(k) < config.swap_trial_rate).tolist():
            q = int(mut_rng.integers(k - 1))
            try_swap(p, q + (q >= p))
        if mut_rng.random() < config.mutation_prob:
            try_swap(*_random_transposition(k, mut_rng), force=True)
    return perm


def run_bbo(A, config: Optional[BboConfig] = None, *, threads: Optional[int] = None,
            on_generation: Optional[Callable[[GenerationState], None]] = None) -> SolveResult:
    """Minimise the weighted bandwidth of ``A`` over row and column orders.

    Deterministic for a given ``config.seed``: every island draws from its own
    random stream and sweeps within a phase read only a snapshot of the
    population, so the thread count never changes the result.
    """
    config = config or BboConfig()
    A = as_data_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        raise InputError(f"cannot optimise an empty {m}x{n} matrix")
    started = time.perf_counter()
    P, seed = config.pop_size, config.seed
    schedule = migration_schedule(P, config.lv)
    W = A.values ** 2
    oriented = {ROWS: W, COLS: np.ascontiguousarray(W.T)}
    streams = {(name, mode): [substream(seed, name, _MODE_KEY[mode], i) for i in range(P)]
               for name in ("migration", "mutation") for mode in (ROWS, COLS)}
    row_orders = initialize_population(m, P, substream(seed, "init", _MODE_KEY[ROWS]))
    col_orders = initialize_population(n, P, substream(seed, "init", _MODE_KEY[COLS]))
    population = [Island(r, c) for r, c in zip(row_orders, col_orders)]

    def refresh():
        for isl in population:
            if isl.cost is None:
                isl.cost = _weighted_cost(W, inverse_permutation(isl.row_perm),
                                          inverse_permutation(isl.col_perm))

    refresh()
    initial_cost = population[0].cost
    champion = population[int(np.argmin([isl.cost for isl in population]))].copy()
    trace, stale, generation = [], 0, 0
    workers = min(resolve_threads(threads), P)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for generation in range(1, config.generations + 1):
            improved = False
            for mode in (ROWS, COLS):
                other = COLS if mode == ROWS else ROWS
                ranks = rank_by_hsi(population)
                snapshot = np.stack([isl.perm(mode) for isl in population])
                emigration = schedule.emigration[ranks]
                movers = [i for i in range(P) if ranks[i] < P - config.elite_count]

                def work(i, mode=mode, other=other, ranks=ranks, snapshot=snapshot, emigration=emigration):
                    weights = emigration.copy()
                    weights[i] = 0.0
                    isl = population[i]
                    other_pos = inverse_permutation(isl.perm(other)).astype(np.float64)
                    return _sweep(oriented[mode], other_pos, isl.perm(mode), schedule.immigration[ranks[i]],
                                  snapshot, np.cumsum(weights), config,
                                  streams["migration", mode][i], streams["mutation", mode][i])

                perms = list(pool.map(work, movers)) if pool else [work(i) for i in movers]
                for i, perm in zip(movers, perms):
                    population[i] = population[i].with_perm(mode, perm)
                refresh()
                leader = population[int(np.argmin([isl.cost for isl in population]))]
                if leader.cost < champion.cost:
                    champion = leader.copy()
                    improved = True
            trace.append(float(champion.cost))
            stale = 0 if improved else stale + 1
            if on_generation is not None:
                on_generation(GenerationState(generation, list(population), champion.arrangement(),
                                              float(champion.cost)))
            if champion.cost == 0 or (config.stagnation_window and stale >= config.stagnation_window):
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return SolveResult(best=champion.arrangement(), best_cost=float(champion.cost), cost_trace=trace,
                       generations_run=generation, wall_time=time.perf_counter() - started, seed=seed,
                       config=config.to_dict(), initial_cost=float(initial_cost))


def check_population(population, shape) -> bool:
    """True when every island holds valid row and column permutations for ``shape``."""
    m, n = shape
    return all(is_permutation(isl.row_perm, m) and is_permutation(isl.col_perm, n) for isl in population)
