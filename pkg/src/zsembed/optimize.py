"""Scalar optimization on intervals and nested max-min / min-max values.

Every search runs a uniform coarse scan, keeps the best scan point and its
two neighbours as a bracket, and refines the bracket by golden-section
search. The scan makes the method robust to non-unimodal objectives (the
best basin wins) and gives the tie detector something to look at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import Interval, Tolerances, broadcast_call
from .errors import NonFiniteObjective

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULTS = Tolerances()


@dataclass(frozen=True)
class OptResult:
    """Outcome of a 1-D (or nested) search.

    ``multiplicity_flag`` is set when a second, separate scan point came
    within ``tie_tol`` of the optimum, i.e. the optimizer is probably not
    unique. ``inner_arg`` is the inner optimizer at ``arg`` for nested
    problems.
    """

    arg: float
    value: float
    multiplicity_flag: bool = False
    evals: int = 0
    inner_arg: Optional[float] = None


class _Counter:
    def __init__(self):
        self.n = 0


def _checked_point(fn, counter):
    def point(x):
        counter.n += 1
        v = float(fn(x))
        if not math.isfinite(v):
            raise NonFiniteObjective(x, v)
        return v

    return point


def _checked_grid(fn, counter):
    def grid(xs):
        counter.n += xs.size
        v = np.asarray(fn(xs), dtype=float)
        bad = ~np.isfinite(v)
        if bad.any():
            k = int(np.flatnonzero(bad)[0])
            raise NonFiniteObjective(float(xs[k]), float(v[k]))
        return v

    return grid


def golden_section(fn, lo: float, hi: float, tol: float):
    """Golden-section minimization of ``fn`` on ``[lo, hi]`` to bracket width ``tol``.

    Returns the best evaluated point and its value.
    """
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = fn(c), fn(d)
    best_x, best_v = (c, fc) if fc <= fd else (d, fd)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = fn(c)
            if fc < best_v:
                best_x, best_v = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = fn(d)
            if fd < best_v:
                best_x, best_v = d, fd
    return best_x, best_v


def _search_min(point, grid_values, grid, tol, tie_tol):
    values = grid_values(grid)
    k = int(np.argmin(values))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, len(grid) - 1)]
    x, fx = golden_section(point, lo, hi, tol)
    # the scan point itself wins exact boundary optima and ties
    fk = point(grid[k])
    if fk <= fx:
        x, fx = float(grid[k]), fk

    tied = np.flatnonzero(values <= values[k] + tie_tol)
    first, last = int(tied[0]), int(tied[-1])
    flag = last - first >= 2 and grid[last] - grid[first] > 10 * tol
    return float(x), float(fx), bool(flag)


def _minimize_on(objective, grid, tol, tie_tol, counter):
    point = _checked_point(objective, counter)
    values = _checked_grid(lambda xs: broadcast_call(objective, (xs,), xs.shape), counter)
    return _search_min(point, values, grid, tol, tie_tol)


def minimize_1d(
    objective: Callable[[float], float],
    domain,
    tol: float = DEFAULTS.opt_tol,
    *,
    scan_points: int = DEFAULTS.scan_points,
    tie_tol: float = DEFAULTS.tie_tol,
) -> OptResult:
    """Minimize a scalar function on a closed interval.

    Exact for boundary minima of monotone functions; for unimodal objectives
    the returned ``arg`` is within ``tol`` of the minimizer. Ties between
    separate scan points resolve to the leftmost one.

    Raises
    ------
    NonFiniteObjective
        The objective returned NaN or an infinity.
    """
    domain = Interval.coerce(domain)
    counter = _Counter()
    x, v, flag = _minimize_on(objective, domain.grid(scan_points), tol, tie_tol, counter)
    return OptResult(x, v, flag, counter.n)


def maximize_1d(objective, domain, tol: float = DEFAULTS.opt_tol, **kwargs) -> OptResult:
    """Maximize by minimizing the negated objective; see :func:`minimize_1d`."""
    res = minimize_1d(lambda x: -objective(x), domain, tol, **kwargs)
    return OptResult(res.arg, -res.value, res.multiplicity_flag, res.evals)


def _mesh(objective, xs, fs):
    return broadcast_call(objective, (xs[:, None], fs[None, :]), (xs.size, fs.size))


def maximin(
    objective: Callable[[float, float], float],
    x_domain,
    f_domain,
    tol: float = DEFAULTS.opt_tol,
    *,
    scan_points: int = DEFAULTS.scan_points,
    tie_tol: float = DEFAULTS.tie_tol,
) -> OptResult:
    """``max_x min_f objective(x, f)``; the result's ``arg`` is the maximizing x.

    Inner problems are solved to ``tol / 10``. The coarse outer scan uses the
    grid minimum over f, the golden refinement uses fully solved inner
    problems.
    """
    x_domain, f_domain = Interval.coerce(x_domain), Interval.coerce(f_domain)
    inner_tol = tol / 10
    counter = _Counter()
    fs = f_domain.grid(scan_points)

    def inner(x):
        return _minimize_on(lambda f: objective(x, f), fs, inner_tol, tie_tol, counter)

    def neg_envelope_grid(xs):
        counter.n += xs.size * fs.size
        mesh = _mesh(objective, xs, fs)
        if not np.isfinite(mesh).all():
            i, j = np.argwhere(~np.isfinite(mesh))[0]
            raise NonFiniteObjective((float(xs[i]), float(fs[j])), float(mesh[i, j]))
        return -mesh.min(axis=1)

    x, neg_v, flag = _search_min(
        lambda x: -inner(x)[1], neg_envelope_grid, x_domain.grid(scan_points), tol, tie_tol
    )
    return OptResult(x, -neg_v, flag, counter.n, inner(x)[0])


def minimax(
    objective: Callable[[float, float], float],
    x_domain,
    f_domain,
    tol: float = DEFAULTS.opt_tol,
    *,
    scan_points: int = DEFAULTS.scan_points,
    tie_tol: float = DEFAULTS.tie_tol,
) -> OptResult:
    """``min_f max_x objective(x, f)``; the result's ``arg`` is the minimizing f.

    Mirror image of :func:`maximin` with the same ``objective(x, f)``
    argument order.
    """
    x_domain, f_domain = Interval.coerce(x_domain), Interval.coerce(f_domain)
    inner_tol = tol / 10
    counter = _Counter()
    xs = x_domain.grid(scan_points)

    def inner(f):
        x, neg_v, _ = _minimize_on(lambda x: -objective(x, f), xs, inner_tol, tie_tol, counter)
        return x, -neg_v

    def envelope_grid(fs):
        counter.n += xs.size * fs.size
        mesh = _mesh(objective, xs, fs)
        if not np.isfinite(mesh).all():
            i, j = np.argwhere(~np.isfinite(mesh))[0]
            raise NonFiniteObjective((float(xs[i]), float(fs[j])), float(mesh[i, j]))
        return mesh.max(axis=0)

    f, v, flag = _search_min(
        lambda f: inner(f)[1], envelope_grid, f_domain.grid(scan_points), tol, tie_tol
    )
    return OptResult(f, v, flag, counter.n, inner(f)[0])


def argmax_invariance(
    objective: Callable[[float, float], float],
    x_domain,
    f_samples: Sequence[float],
    tol: Tolerances = DEFAULTS,
) -> bool:
    """True when ``argmax_x objective(x, f)`` agrees within ``eq_tol`` for all samples."""
    if len(f_samples) == 0:
        raise ValueError("f_samples must not be empty")
    args = [
        maximize_1d(
            lambda x, f=f: objective(x, f), x_domain, tol.opt_tol,
            scan_points=tol.scan_points, tie_tol=tol.tie_tol,
        ).arg
        for f in f_samples
    ]
    return max(args) - min(args) <= tol.eq_tol
