"""Domain types: intervals, main games, strategy profiles and tolerances.

Payoff evaluators take a full profile ``(x_1, ..., x_n)`` as a sequence and
return ``phi_i``. They may receive numpy arrays in place of scalars; an
evaluator that broadcasts is evaluated on whole grids at once, anything else
falls back to a scalar loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BadInterval, EmptyGame, NonFinitePayoff, OutOfDomain

Payoff = Callable[[Sequence[float]], float]

DEFAULT_PROBES_PER_AXIS = 9
MAX_PROBE_POINTS = 100_000


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with ``lo < hi``, both finite."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise BadInterval(f"interval bounds must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise BadInterval(f"interval needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def coerce(cls, value) -> "Interval":
        if isinstance(value, Interval):
            return value
        try:
            lo, hi = value
        except (TypeError, ValueError):
            raise BadInterval(f"cannot read an interval from {value!r}") from None
        return cls(lo, hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def grid(self, points: int) -> np.ndarray:
        """Uniform grid with both endpoints included."""
        return np.linspace(self.lo, self.hi, points)

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by optimizers, solver and checks.

    ``opt_tol`` is the final bracket width of 1-D searches, ``fp_tol`` the
    sup-norm step that stops the fixed-point iteration, ``eq_tol`` the slack
    of every equality verification and ``tie_tol`` the value gap under which
    two scan points count as tied.
    """

    opt_tol: float = 1e-9
    fp_tol: float = 1e-8
    eq_tol: float = 1e-6
    tie_tol: float = 1e-7
    scan_points: int = 257

    def __post_init__(self):
        for name in ("opt_tol", "fp_tol", "eq_tol", "tie_tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value}")
        if self.opt_tol > self.eq_tol:
            raise ValueError("opt_tol must not exceed eq_tol")
        if int(self.scan_points) < 3:
            raise ValueError("scan_points must be at least 3")


@dataclass(frozen=True)
class StrategyProfile:
    x: tuple
    f: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if self.f is not None:
            object.__setattr__(self, "f", float(self.f))

    @classmethod
    def coerce(cls, value) -> "StrategyProfile":
        if isinstance(value, StrategyProfile):
            return value
        return cls(tuple(value))


@dataclass(frozen=True)
class MainGame:
    """n-player game on a product of intervals with payoffs ``phi_i``.

    Build instances through :func:`validate_game`, which also probes the
    payoffs for finiteness.
    """

    spaces: tuple
    payoffs: tuple
    name: str = field(default="game", compare=False)

    def __post_init__(self):
        spaces = tuple(Interval.coerce(s) for s in self.spaces)
        payoffs = tuple(self.payoffs)
        if not spaces:
            raise EmptyGame("a game needs at least one player")
        if len(spaces) != len(payoffs):
            raise ValueError(
                f"got {len(spaces)} strategy spaces but {len(payoffs)} payoffs"
            )
        for i, p in enumerate(payoffs):
            if not callable(p):
                raise TypeError(f"payoff {i} is not callable")
        object.__setattr__(self, "spaces", spaces)
        object.__setattr__(self, "payoffs", payoffs)

    @property
    def n(self) -> int:
        return len(self.spaces)

    def midpoint(self) -> tuple:
        return tuple(s.midpoint for s in self.spaces)

    def check_profile(self, x: Sequence[float]) -> tuple:
        x = tuple(float(v) for v in x)
        if len(x) != self.n:
            raise OutOfDomain(f"profile has {len(x)} coordinates, game has {self.n} players")
        for i, (xi, space) in enumerate(zip(x, self.spaces)):
            if not space.contains(xi):
                raise OutOfDomain(
                    f"x_{i + 1}={xi!r} outside [{space.lo}, {space.hi}]"
                )
        return x

    def phi(self, player: int, x: Sequence) -> float:
        """``phi_i`` at ``x`` without domain checks (hot path)."""
        return self.payoffs[player](x)


def broadcast_call(func, args, shape):
    """Evaluate ``func(*args)`` on broadcastable arrays, falling back to a loop.

    Returns a float array of ``shape``.
    """
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(func(*args), dtype=float)
        if np.broadcast_shapes(out.shape, shape) == shape:
            return np.broadcast_to(out, shape).astype(float, copy=True)
    except (TypeError, ValueError):
        pass
    full = [np.broadcast_to(np.asarray(a, dtype=float), shape) for a in args]
    out = np.empty(shape)
    for idx in np.ndindex(*shape):
        out[idx] = float(func(*(a[idx] for a in full)))
    return out


def _probe_axes(spaces, per_axis, cap):
    n = len(spaces)
    m = per_axis
    while m > 2 and m**n > cap:
        m -= 1
    return [s.grid(m) for s in spaces]


def validate_game(
    spaces,
    payoffs=None,
    *,
    probes_per_axis: int = DEFAULT_PROBES_PER_AXIS,
    max_probes: int = MAX_PROBE_POINTS,
    name: str = "game",
) -> MainGame:
    """Build a :class:`MainGame` and probe every payoff on a coarse grid.

    ``spaces`` are intervals or ``(lo, hi)`` pairs; an existing
    :class:`MainGame` is accepted in their place. The probe grid has
    ``probes_per_axis`` points per player, reduced until the product fits
    within ``max_probes``.

    Raises
    ------
    EmptyGame, BadInterval
        Structural problems.
    NonFinitePayoff
        A payoff is NaN or infinite at a probe point.
    """
    if isinstance(spaces, MainGame):
        game = spaces
    else:
        spaces = list(spaces)
        if not spaces:
            raise EmptyGame("a game needs at least one player")
        game = MainGame(tuple(spaces), tuple(payoffs), name=name)

    axes = _probe_axes(game.spaces, probes_per_axis, max_probes)
    mesh = np.meshgrid(*axes, indexing="ij", sparse=True)
    shape = tuple(len(a) for a in axes)
    for i, payoff in enumerate(game.payoffs):
        values = broadcast_call(lambda *xs: payoff(list(xs)), mesh, shape)
        bad = ~np.isfinite(values)
        if bad.any():
            idx = tuple(int(k) for k in np.argwhere(bad)[0])
            profile = [axes[j][idx[j]] for j in range(game.n)]
            raise NonFinitePayoff(i, profile, float(values[idx]))
    return game


def eval_phi(game: MainGame, profile) -> list:
    """Payoffs ``(phi_1, ..., phi_n)`` at ``profile``."""
    profile = StrategyProfile.coerce(profile)
    x = game.check_profile(profile.x)
    return [float(p(x)) for p in game.payoffs]


def profile_with(others: Sequence[float], player: int, value):
    """Insert ``value`` at position ``player`` into the other players' strategies."""
    others = list(others)
    return others[:player] + [value] + others[player:]


def others_of(x: Sequence[float], player: int) -> list:
    return [v for j, v in enumerate(x) if j != player]
