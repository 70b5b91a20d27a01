"""Equilibria as fixed points of maximin strategies, and their verification.

Each main player's maximin strategy against the subsidy player is computed
with the other players held fixed. A profile that reproduces itself under
this map is an equilibrium of the zero-sum extension (with ``f = a``) and a
Nash equilibrium of the main game. The verification functions check both
directions numerically on a given instance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import MainGame, StrategyProfile, Tolerances, others_of, profile_with
from .embedding import SionReport, ZeroSumExtension, sion_check, zero_sum_residual
from .errors import NonConvergence, NotANash, OutOfDomain
from .optimize import OptResult, maximin, maximize_1d

log = logging.getLogger(__name__)

DEFAULTS = Tolerances()


@dataclass(frozen=True)
class SolveReport:
    equilibrium_x: tuple
    equilibrium_f: float
    values: tuple
    iterations: int
    converged: bool
    residual: float
    damping: float = 0.5
    init: tuple = ()


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one or both theorems on an extension.

    ``theorem1_passed`` holds when every deviation gap is within ``eq_tol``
    and the subsidy player cannot gain by moving away from ``a``;
    ``theorem2_passed`` when every per-pair Sion report passed.
    """

    candidate: tuple
    sion_reports: tuple
    deviation_gaps: tuple
    zero_sum_residual: float
    theorem1_passed: bool
    theorem2_passed: bool
    equilibrium_f: float
    subsidy_argmax: Optional[float] = None
    subsidy_deviation_gap: Optional[float] = None
    solve: Optional[SolveReport] = None
    extra: dict = field(default_factory=dict, compare=False)


def _kw(tol: Tolerances):
    return dict(scan_points=tol.scan_points, tie_tol=tol.tie_tol)


def best_response(
    game: MainGame, player: int, others: Sequence[float], tol: Tolerances = DEFAULTS
) -> OptResult:
    """Argmax of ``phi_i`` over player i's interval with the others fixed."""
    others = [float(v) for v in others]
    if len(others) != game.n - 1:
        raise OutOfDomain(f"expected {game.n - 1} other strategies, got {len(others)}")
    phi = game.payoffs[player]
    res = maximize_1d(
        lambda xi: phi(profile_with(others, player, xi)),
        game.spaces[player], tol.opt_tol, **_kw(tol),
    )
    if res.multiplicity_flag:
        log.warning("best response of player %d is not unique near %g", player + 1, res.arg)
    return res


def maximin_response(
    ext: ZeroSumExtension, player: int, others: Sequence[float], tol: Tolerances = DEFAULTS
) -> OptResult:
    """Player i's maximin strategy against the subsidy player, others fixed."""
    return maximin(
        ext.pair_objective(player, others),
        ext.game.spaces[player], ext.f_domain, tol.opt_tol, **_kw(tol),
    )


def _initial(ext: ZeroSumExtension, init) -> np.ndarray:
    if init is None:
        return np.array(ext.game.midpoint())
    if isinstance(init, StrategyProfile):
        init = init.x
    return np.array(ext.game.check_profile(init))


def solve_maximin_fixed_point(
    ext: ZeroSumExtension,
    init=None,
    tol: Tolerances = DEFAULTS,
    damping: float = 0.5,
    max_iter: int = 10_000,
) -> SolveReport:
    """Damped simultaneous iteration ``x <- (1 - d) x + d M(x)``.

    ``M(x)_i`` is player i's maximin strategy against the subsidy player
    with the other coordinates of ``x`` fixed. Stops once the sup-norm step
    is at most ``tol.fp_tol``; the subsidy strategy is set to ``a``.

    Raises
    ------
    NonConvergence
        ``max_iter`` steps without meeting ``fp_tol``.
    """
    if not 0 < damping <= 1:
        raise ValueError(f"damping must lie in (0, 1], got {damping}")
    x = _initial(ext, init)
    start = tuple(float(v) for v in x)
    lo = np.array([s.lo for s in ext.game.spaces])
    hi = np.array([s.hi for s in ext.game.spaces])
    residual = float("inf")
    for it in range(1, max_iter + 1):
        target = np.array([
            maximin_response(ext, i, others_of(x, i), tol).arg for i in range(ext.n)
        ])
        new = np.clip((1.0 - damping) * x + damping * target, lo, hi)
        residual = float(np.max(np.abs(new - x)))
        x = new
        if residual <= tol.fp_tol:
            values = tuple(float(p(list(x))) for p in ext.game.payoffs)
            return SolveReport(
                equilibrium_x=tuple(float(v) for v in x),
                equilibrium_f=ext.a,
                values=values,
                iterations=it,
                converged=True,
                residual=residual,
                damping=damping,
                init=start,
            )
    raise NonConvergence(x, residual, max_iter)


def multi_start(
    ext: ZeroSumExtension,
    starts: int,
    seed: int = 0,
    tol: Tolerances = DEFAULTS,
    damping: float = 0.5,
    max_iter: int = 10_000,
) -> list:
    """Solve from the midpoint plus ``starts`` uniform random initial profiles."""
    rng = np.random.default_rng(seed)
    inits = [None] + [
        [rng.uniform(s.lo, s.hi) for s in ext.game.spaces] for _ in range(starts)
    ]
    return [solve_maximin_fixed_point(ext, init, tol, damping, max_iter) for init in inits]


def verify_nash(game: MainGame, candidate: Sequence[float], tol: Tolerances = DEFAULTS) -> list:
    """Deviation gaps ``max_{x_i} phi_i(x_i, x_-i) - phi_i(candidate)`` per player."""
    x = list(game.check_profile(candidate))
    gaps = []
    for i in range(game.n):
        best = best_response(game, i, others_of(x, i), tol)
        gaps.append(best.value - float(game.payoffs[i](x)))
    return gaps


def _subsidy_deviation(ext: ZeroSumExtension, x, tol: Tolerances):
    res = maximize_1d(lambda f: ext.pi_subsidy_player(x, f), ext.f_domain, tol.opt_tol, **_kw(tol))
    return res.arg, res.value - float(ext.pi_subsidy_player(x, ext.a))


def _sion_reports(ext: ZeroSumExtension, x, tol: Tolerances) -> tuple:
    return tuple(
        sion_check(ext, i, others_of(x, i), tol, expected_x=x[i]) for i in range(ext.n)
    )


def verify_theorem1(
    ext: ZeroSumExtension,
    tol: Tolerances = DEFAULTS,
    *,
    init=None,
    damping: float = 0.5,
    max_iter: int = 10_000,
) -> VerificationReport:
    """Solve the maximin fixed point, then check it is a Nash equilibrium.

    Checks the main players' deviation gaps and the subsidy player's
    deviation over ``f``. Per-pair Sion reports at the solution are included,
    so ``theorem2_passed`` is filled in as well.
    """
    solve = solve_maximin_fixed_point(ext, init, tol, damping, max_iter)
    x = list(solve.equilibrium_x)
    gaps = verify_nash(ext.game, x, tol)
    f_arg, f_gap = _subsidy_deviation(ext, x, tol)
    subsidy_ok = abs(f_arg - ext.a) <= tol.eq_tol and f_gap <= tol.eq_tol
    reports = _sion_reports(ext, x, tol)
    return VerificationReport(
        candidate=tuple(x),
        sion_reports=reports,
        deviation_gaps=tuple(gaps),
        zero_sum_residual=zero_sum_residual(ext, x, ext.a),
        theorem1_passed=all(g <= tol.eq_tol for g in gaps) and subsidy_ok,
        theorem2_passed=all(r.passed for r in reports),
        equilibrium_f=solve.equilibrium_f,
        subsidy_argmax=f_arg,
        subsidy_deviation_gap=f_gap,
        solve=solve,
    )


def verify_theorem2(
    ext: ZeroSumExtension, nash_x: Sequence[float], tol: Tolerances = DEFAULTS
) -> VerificationReport:
    """From a Nash equilibrium, check the max-min = min-max equality for every pair.

    Each pair must also have its maximin argument at ``nash_x[i]`` and its
    minimax ``f`` at ``a``.

    Raises
    ------
    NotANash
        Some deviation gap of ``nash_x`` exceeds ``eq_tol``.
    """
    x = list(ext.game.check_profile(nash_x))
    gaps = verify_nash(ext.game, x, tol)
    if any(g > tol.eq_tol for g in gaps):
        raise NotANash(gaps, tol.eq_tol)
    f_arg, f_gap = _subsidy_deviation(ext, x, tol)
    subsidy_ok = abs(f_arg - ext.a) <= tol.eq_tol and f_gap <= tol.eq_tol
    reports = _sion_reports(ext, x, tol)
    return VerificationReport(
        candidate=tuple(x),
        sion_reports=reports,
        deviation_gaps=tuple(gaps),
        zero_sum_residual=zero_sum_residual(ext, x, ext.a),
        theorem1_passed=subsidy_ok,
        theorem2_passed=all(r.passed for r in reports),
        equilibrium_f=ext.a,
        subsidy_argmax=f_arg,
        subsidy_deviation_gap=f_gap,
    )


__all__ = [
    "SionReport",
    "SolveReport",
    "VerificationReport",
    "best_response",
    "maximin_response",
    "multi_start",
    "solve_maximin_fixed_point",
    "verify_nash",
    "verify_theorem1",
    "verify_theorem2",
]
