"""Lotka-Volterra driven immigration/emigration rates for the BBO population.

The two-species system

    dx/dt = alpha*x - beta*x*y
    dy/dt = gamma*y - delta*x*y

is integrated with fixed-step RK4. Sampled prey values ``x`` become the
immigration curve and predator values ``y`` the emigration curve, after
min-max normalisation and sorting so that better-ranked habitats immigrate
less and emigrate more.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError, ScheduleError

DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class LVParams:
    alpha: float = 1.0
    beta: float = 0.5
    gamma: float = 1.0
    delta: float = 0.5
    x0: float = 1.5
    y0: float = 1.5
    t_end: float = 10.0
    steps: int = 1000
    # False integrates the system exactly as written above; True flips the predator
    # equation to the textbook form dy/dt = -gamma*y + delta*x*y.
    conventional: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "x0", "y0", "t_end"):
            try:
                object.__setattr__(self, name, float(getattr(self, name)))
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be a real number, got {getattr(self, name)!r}") from None
        for name in ("alpha", "beta", "gamma", "delta"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be a nonnegative real, got {value}")
        for name in ("x0", "y0", "t_end"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise ConfigError(f"steps must be an integer >= 2, got {self.steps}")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "conventional", bool(self.conventional))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "LVParams":
        return cls(**data)


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    truncated: bool = False

    def __len__(self):
        return self.t.size

    def samples(self):
        return list(zip(self.t.tolist(), self.x.tolist(), self.y.tolist()))


def _rhs(params: LVParams):
    a, b, g, d = params.alpha, params.beta, params.gamma, params.delta
    if params.conventional:
        return lambda x, y: (a * x - b * x * y, -g * y + d * x * y)
    return lambda x, y: (a * x - b * x * y, g * y - d * x * y)


def integrate_lv(params: LVParams = LVParams()) -> Trajectory:
    """Classical RK4 with ``h = t_end / steps``; returns ``steps + 1`` samples.

    If either population leaves ``[-1e6, 1e6]`` (or stops being finite) the
    trajectory ends at the last sample inside that range and ``truncated`` is set.
    """
    f = _rhs(params)
    h = params.t_end / params.steps
    t = np.empty(params.steps + 1)
    x = np.empty(params.steps + 1)
    y = np.empty(params.steps + 1)
    t[0], x[0], y[0] = 0.0, params.x0, params.y0
    xi, yi = float(params.x0), float(params.y0)
    last = params.steps
    truncated = False
    for i in range(params.steps):
        k1x, k1y = f(xi, yi)
        k2x, k2y = f(xi + 0.5 * h * k1x, yi + 0.5 * h * k1y)
        k3x, k3y = f(xi + 0.5 * h * k2x, yi + 0.5 * h * k2y)
        k4x, k4y = f(xi + h * k3x, yi + h * k3y)
        xn = xi + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        yn = yi + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        if not (abs(xn) <= DIVERGENCE_LIMIT and abs(yn) <= DIVERGENCE_LIMIT):
            last, truncated = i, True
            break
        xi, yi = xn, yn
        t[i + 1], x[i + 1], y[i + 1] = (i + 1) * h, xi, yi
    n = last + 1
    return Trajectory(t[:n].copy(), x[:n].copy(), y[:n].copy(), truncated)


@dataclass(frozen=True, eq=False)
class MigrationSchedule:
    """Rates indexed by fitness rank; rank 0 is the worst habitat."""

    immigration: np.ndarray
    emigration: np.ndarray

    @property
    def pop_size(self) -> int:
        return self.immigration.size

    def to_dict(self) -> dict:
        return {"immigration": self.immigration.tolist(), "emigration": self.emigration.tolist()}


def _normalize(samples: np.ndarray) -> np.ndarray:
    lo, hi = samples.min(), samples.max()
    if hi - lo <= 0.0:
        return np.full(samples.size, 0.5)
    return (samples - lo) / (hi - lo)


def build_schedule(traj: Trajectory, pop_size: int) -> MigrationSchedule:
    if int(pop_size) != pop_size or pop_size < 2:
        raise ConfigError(f"pop_size must be an integer >= 2, got {pop_size}")
    pop_size = int(pop_size)
    if len(traj) < 2 * pop_size:
        raise ScheduleError(
            f"trajectory has {len(traj)} samples; need at least {2 * pop_size} for {pop_size} habitats"
            + (" (integration diverged early)" if traj.truncated else ""))
    idx = np.round(np.linspace(0, len(traj) - 1, pop_size)).astype(int)
    immigration = np.sort(_normalize(traj.x[idx]))[::-1]
    emigration = np.sort(_normalize(traj.y[idx]))
    return MigrationSchedule(np.clip(immigration, 0.0, 1.0), np.clip(emigration, 0.0, 1.0))


def migration_schedule(pop_size: int, params: LVParams = LVParams()) -> MigrationSchedule:
    """Integrate ``params`` and build the schedule for ``pop_size`` habitats."""
    return build_schedule(integrate_lv(params), pop_size)
