"""Zero-sum extension of a main game by a virtual-subsidy player.

Player ``n+1`` picks ``f`` from an interval ``F`` and pays every main player
the same subsidy ``psi(f)``; its own payoff is minus the total, so the
``n+1`` payoffs always sum to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    Interval,
    MainGame,
    StrategyProfile,
    Tolerances,
    broadcast_call,
    profile_with,
    validate_game,
)
from .errors import (
    GameError,
    MissingSubsidyStrategy,
    NonUniqueMinimizer,
    NonZeroMinimum,
    OutOfDomain,
)
from .optimize import argmax_invariance, golden_section, maximin, minimax, minimize_1d

DEFAULTS = Tolerances()


@dataclass(frozen=True)
class Subsidy:
    """Subsidy ``psi`` on ``domain``; ``vertex_hint`` is the claimed minimizer."""

    domain: Interval
    psi: Callable[[float], float]
    vertex_hint: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "domain", Interval.coerce(self.domain))

    def shifted(self, amount: float) -> "Subsidy":
        psi = self.psi
        return replace(self, psi=lambda f: psi(f) - amount)


def quadratic_subsidy(vertex: float, f_bounds) -> Subsidy:
    """``psi(f) = (f - vertex)**2`` on ``f_bounds``, the subsidy of the Cournot example."""
    vertex = float(vertex)
    return Subsidy(Interval.coerce(f_bounds), lambda f: (f - vertex) ** 2, vertex_hint=vertex)


def subsidy_minimizer(subsidy: Subsidy, tol: Tolerances = DEFAULTS) -> float:
    """Unique minimizer ``a`` of the subsidy, enforcing ``min psi = 0``.

    Raises
    ------
    NonZeroMinimum
        ``min psi`` differs from zero by more than ``eq_tol``.
    NonUniqueMinimizer
        A second scan point, away from the first, ties with the minimum.
    """
    res = minimize_1d(
        subsidy.psi, subsidy.domain, tol.opt_tol,
        scan_points=tol.scan_points, tie_tol=tol.tie_tol,
    )
    if abs(res.value) > tol.eq_tol:
        raise NonZeroMinimum(res.value, res.arg)

    grid = subsidy.domain.grid(tol.scan_points)
    values = broadcast_call(subsidy.psi, (grid,), grid.shape)
    if values.min() < -tol.eq_tol:
        k = int(np.argmin(values))
        raise NonZeroMinimum(float(values[k]), float(grid[k]))
    if res.multiplicity_flag:
        tied = grid[values <= res.value + tol.tie_tol]
        raise NonUniqueMinimizer(tied.tolist())
    others = _other_basin_minima(subsidy.psi, grid, values, res.arg, tol)
    if others:
        raise NonUniqueMinimizer([res.arg] + others)
    if subsidy.vertex_hint is not None and abs(res.arg - subsidy.vertex_hint) > tol.eq_tol:
        raise GameError(
            f"subsidy minimizer {res.arg:.9g} disagrees with vertex_hint {subsidy.vertex_hint:.9g}"
        )
    return res.arg


def _other_basin_minima(psi, grid, values, a, tol):
    """Refine every local minimum of the scan away from ``a``; return those tying with 0."""
    found = []
    m = len(grid)
    for k in range(m):
        left = values[k - 1] if k > 0 else np.inf
        right = values[k + 1] if k < m - 1 else np.inf
        if not (values[k] <= left and values[k] <= right):
            continue
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, m - 1)]
        if lo - 10 * tol.opt_tol <= a <= hi + 10 * tol.opt_tol:
            continue
        x, v = golden_section(lambda f: float(psi(f)), lo, hi, tol.opt_tol)
        if v > values[k]:
            x, v = float(grid[k]), float(values[k])
        if v <= tol.tie_tol:
            found.append(float(x))
    return found


@dataclass(frozen=True)
class ZeroSumExtension:
    """Main game plus subsidy player; ``a`` is the subsidy minimizer."""

    game: MainGame
    subsidy: Subsidy
    a: float

    @property
    def n(self) -> int:
        return self.game.n

    @property
    def f_domain(self) -> Interval:
        return self.subsidy.domain

    def pi(self, player: int, x: Sequence, f):
        """``pi_i = phi_i(x) + psi(f)`` for a main player (broadcasts)."""
        return self.game.payoffs[player](x) + self.subsidy.psi(f)

    def pi_subsidy_player(self, x: Sequence, f):
        """``pi_{n+1} = -sum_i phi_i(x) - n psi(f)``, never the negated sum of ``pi_i``."""
        total = sum(p(x) for p in self.game.payoffs)
        return -total - self.n * self.subsidy.psi(f)

    def pair_objective(self, player: int, others: Sequence[float]):
        """``(x_i, f) -> pi_i`` with the other main players fixed."""
        head = [float(v) for v in others[:player]]
        tail = [float(v) for v in others[player:]]
        phi = self.game.payoffs[player]
        psi = self.subsidy.psi
        return lambda xi, f: phi(head + [xi] + tail) + psi(f)

    def restrict(self, player: int, others: Sequence[float]) -> "ZeroSumExtension":
        """Two-player extension: ``player`` against the subsidy player, others fixed."""
        others = _check_others(self.game, player, others)
        phi = self.game.payoffs[player]
        game = MainGame(
            (self.game.spaces[player],),
            (lambda x: phi(profile_with(others, player, x[0])),),
            name=f"{self.game.name}[player {player + 1}]",
        )
        return ZeroSumExtension(game, self.subsidy, self.a)


def extend(
    game: MainGame,
    subsidy: Subsidy,
    tol: Tolerances = DEFAULTS,
    *,
    normalize: bool = False,
) -> ZeroSumExtension:
    """Build the (n+1)-player zero-sum extension.

    With ``normalize=True`` a subsidy whose minimum is not zero is shifted
    by its minimum instead of being rejected.
    """
    game = validate_game(game)
    if normalize:
        res = minimize_1d(subsidy.psi, subsidy.domain, tol.opt_tol,
                          scan_points=tol.scan_points, tie_tol=tol.tie_tol)
        subsidy = subsidy.shifted(res.value)
    a = subsidy_minimizer(subsidy, tol)
    return ZeroSumExtension(game, subsidy, a)


def eval_pi(ext: ZeroSumExtension, profile: StrategyProfile) -> list:
    """Payoffs ``(pi_1, ..., pi_n, pi_{n+1})`` at a full profile including ``f``."""
    profile = StrategyProfile.coerce(profile)
    if profile.f is None:
        raise MissingSubsidyStrategy("profile has no subsidy strategy f")
    x = ext.game.check_profile(profile.x)
    f = profile.f
    if not ext.f_domain.contains(f):
        raise OutOfDomain(f"f={f!r} outside [{ext.f_domain.lo}, {ext.f_domain.hi}]")
    phis = [float(p(x)) for p in ext.game.payoffs]
    s = float(ext.subsidy.psi(f))
    return [p + s for p in phis] + [-sum(phis) - ext.n * s]


def _check_others(game: MainGame, player: int, others) -> list:
    if not 0 <= player < game.n:
        raise IndexError(f"player index {player} out of range for {game.n} players")
    others = [float(v) for v in others]
    if len(others) != game.n - 1:
        raise OutOfDomain(f"expected {game.n - 1} other strategies, got {len(others)}")
    spaces = [s for j, s in enumerate(game.spaces) if j != player]
    for v, s in zip(others, spaces):
        if not s.contains(v):
            raise OutOfDomain(f"fixed strategy {v!r} outside [{s.lo}, {s.hi}]")
    return others


def quasi_concave_on_grid(values, tol: float = 0.0) -> bool:
    """True when the sequence rises then falls, i.e. has no interior dip deeper than ``tol``."""
    values = np.asarray(values, dtype=float)
    peak = values[0]
    falling_from = None
    for v in values[1:]:
        if falling_from is None:
            if v < peak - tol:
                falling_from = v
            peak = max(peak, v)
        else:
            if v > falling_from + tol:
                return False
            falling_from = min(falling_from, v)
    return True


@dataclass(frozen=True)
class SionReport:
    """Max-min vs min-max for one pair (player i, subsidy player)."""

    player: int
    maximin_value: float
    minimax_value: float
    gap: float
    arg_x: float
    arg_f: float
    passed: bool
    quasi_concave: bool = True
    expected_x: Optional[float] = None
    multiplicity_flag: bool = False
    details: dict = field(default_factory=dict, compare=False)


def sion_check(
    ext: ZeroSumExtension,
    player: int,
    others: Sequence[float],
    tol: Tolerances = DEFAULTS,
    *,
    expected_x: Optional[float] = None,
) -> SionReport:
    """Compare ``max_x min_f pi_i`` with ``min_f max_x pi_i`` for fixed others.

    Passes when the two values agree within ``eq_tol`` and the minimax
    ``f`` sits at the subsidy minimizer ``a``; with ``expected_x`` the
    maximin argument must also match it.
    """
    others = _check_others(ext.game, player, others)
    objective = ext.pair_objective(player, others)
    space = ext.game.spaces[player]
    kw = dict(scan_points=tol.scan_points, tie_tol=tol.tie_tol)
    lower = maximin(objective, space, ext.f_domain, tol.opt_tol, **kw)
    upper = minimax(objective, space, ext.f_domain, tol.opt_tol, **kw)
    gap = abs(lower.value - upper.value)

    phi = ext.game.payoffs[player]
    line = space.grid(tol.scan_points)
    phi_line = broadcast_call(lambda x: phi(profile_with(others, player, x)), (line,), line.shape)
    qc = quasi_concave_on_grid(phi_line, tol.tie_tol)

    passed = gap <= tol.eq_tol and abs(upper.arg - ext.a) <= tol.eq_tol
    if expected_x is not None:
        passed = passed and abs(lower.arg - expected_x) <= tol.eq_tol
    return SionReport(
        player=player,
        maximin_value=lower.value,
        minimax_value=upper.value,
        gap=gap,
        arg_x=lower.arg,
        arg_f=upper.arg,
        passed=passed,
        quasi_concave=qc,
        expected_x=expected_x,
        multiplicity_flag=lower.multiplicity_flag or upper.multiplicity_flag,
        details={"maximin_inner_f": lower.inner_arg, "minimax_inner_x": upper.inner_arg},
    )


def argmax_invariance_check(
    ext: ZeroSumExtension,
    player: int,
    others: Sequence[float],
    f_samples: Sequence[float],
    tol: Tolerances = DEFAULTS,
) -> bool:
    """Whether player i's best reply to ``others`` is the same for every sampled f."""
    others = _check_others(ext.game, player, others)
    for f in f_samples:
        if not ext.f_domain.contains(f):
            raise OutOfDomain(f"f sample {f!r} outside the subsidy domain")
    return argmax_invariance(
        ext.pair_objective(player, others), ext.game.spaces[player], f_samples, tol
    )


def zero_sum_residual(ext: ZeroSumExtension, x: Sequence[float], f: float) -> float:
    """``|sum of all n+1 payoffs|`` relative to the largest payoff magnitude."""
    payoffs = eval_pi(ext, StrategyProfile(tuple(x), f))
    scale = max(abs(p) for p in payoffs)
    total = math.fsum(payoffs)
    return abs(total) / scale if scale > 0 else abs(total)
