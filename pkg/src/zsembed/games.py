"""Builtin parametric game families.

The three-firm Cournot game with differentiated goods comes with its
closed-form equilibrium, which is the main quantitative oracle for the
solver. Quadratic games are the generic concave test family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import MainGame, validate_game
from .errors import BadSpec, NegativeOutput


def _finite(field_name, value):
    value = float(value)
    if not math.isfinite(value):
        raise BadSpec(field_name, f"must be finite, got {value}")
    return value


@dataclass(frozen=True)
class CournotSpec:
    """Three firms, inverse demand ``p_i = A - x_i - b * sum_{j != i} x_j``.

    ``output_bound`` defaults to ``demand_intercept``; every firm chooses
    its output in ``[0, output_bound]``.
    """

    demand_intercept: float
    b: float
    c: tuple
    output_bound: Optional[float] = None

    def __post_init__(self):
        A = _finite("demand_intercept", self.demand_intercept)
        b = _finite("b", self.b)
        c = tuple(_finite(f"c[{i}]", v) for i, v in enumerate(self.c))
        if len(c) != 3:
            raise BadSpec("c", f"needs 3 unit costs, got {len(c)}")
        if A <= 0:
            raise BadSpec("demand_intercept", f"must be positive, got {A}")
        if not 0 <= b < 1:
            raise BadSpec("b", f"must lie in [0, 1), got {b}")
        if A <= max(c):
            raise BadSpec("c", f"every unit cost must be below demand_intercept={A}")
        bound = A if self.output_bound is None else _finite("output_bound", self.output_bound)
        if bound <= 0:
            raise BadSpec("output_bound", f"must be positive, got {bound}")
        object.__setattr__(self, "demand_intercept", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "output_bound", bound)


def _cournot_profit(A, b, c, i):
    def phi(x):
        rivals = sum(x) - x[i]
        return (A - x[i] - b * rivals) * x[i] - c * x[i]

    return phi


def cournot_game(spec: CournotSpec) -> MainGame:
    """Profits ``phi_i = (A - x_i - b * sum_{j != i} x_j) x_i - c_i x_i`` on ``[0, bound]^3``."""
    payoffs = tuple(
        _cournot_profit(spec.demand_intercept, spec.b, spec.c[i], i) for i in range(3)
    )
    spaces = [(0.0, spec.output_bound)] * 3
    return validate_game(spaces, payoffs, name="cournot")


def cournot_closed_form(spec: CournotSpec) -> list:
    """Interior equilibrium outputs of the three-firm game.

    ``x_i = ((2-b) A + b (c_j + c_k) - (2+b) c_i) / (2 (2-b) (1+b))``.

    Raises
    ------
    NegativeOutput
        Some output is negative, so the equilibrium is a corner and the
        formula does not apply.
    BadSpec
        An output exceeds ``output_bound``.
    """
    A, b, c = spec.demand_intercept, spec.b, spec.c
    denom = 2.0 * (2.0 - b) * (1.0 + b)
    out = []
    for i in range(3):
        rivals = sum(c) - c[i]
        out.append(((2.0 - b) * A + b * rivals - (2.0 + b) * c[i]) / denom)
    for i, v in enumerate(out):
        if v < 0:
            raise NegativeOutput(f"closed-form output of firm {i + 1} is {v:.6g} < 0")
        if v > spec.output_bound:
            raise BadSpec("output_bound", f"{spec.output_bound} is below the equilibrium output {v:.6g}")
    return out


def cournot_foc_residuals(spec: CournotSpec, x: Sequence[float]) -> list:
    """``A - 2 x_i - b sum_{j != i} x_j - c_i`` for each firm."""
    A, b = spec.demand_intercept, spec.b
    total = sum(x)
    return [A - 2.0 * x[i] - b * (total - x[i]) - spec.c[i] for i in range(3)]


def symmetric_cournot_game(n: int, demand_intercept: float, b: float, c: float,
                           output_bound: Optional[float] = None) -> MainGame:
    """n firms with a common unit cost; a scaling extension of the three-firm game.

    The interior equilibrium is ``(A - c) / (2 + b (n - 1))`` for every firm.
    """
    if n < 1:
        raise BadSpec("n", f"needs at least one firm, got {n}")
    if not 0 <= b < 1:
        raise BadSpec("b", f"must lie in [0, 1), got {b}")
    if demand_intercept <= c:
        raise BadSpec("c", "unit cost must be below demand_intercept")
    bound = demand_intercept if output_bound is None else output_bound
    payoffs = tuple(_cournot_profit(demand_intercept, b, c, i) for i in range(n))
    return validate_game([(0.0, bound)] * n, payoffs, name=f"cournot{n}")


@dataclass(frozen=True)
class QuadraticGameSpec:
    """``phi_i = own_i x_i^2 + sum_{j != i} cross_ij x_i x_j + linear_i x_i + constant_i``.

    ``cross`` is an n x n matrix whose diagonal is ignored. Every ``own_i``
    must be negative so that each payoff is strictly concave in the
    player's own strategy.
    """

    own: tuple
    bounds: tuple
    cross: Optional[tuple] = None
    linear: Optional[tuple] = None
    constant: Optional[tuple] = None
    n: int = field(init=False)

    def __post_init__(self):
        own = tuple(float(v) for v in self.own)
        n = len(own)
        if n == 0:
            raise BadSpec("own", "needs at least one player")
        for i, q in enumerate(own):
            if not (math.isfinite(q) and q < 0):
                raise BadSpec(f"own[{i}]", f"must be negative for strict concavity, got {q}")
        bounds = tuple(tuple(float(v) for v in b) for b in self.bounds)
        if len(bounds) != n:
            raise BadSpec("bounds", f"needs {n} intervals, got {len(bounds)}")
        cross = np.zeros((n, n)) if self.cross is None else np.asarray(self.cross, dtype=float)
        if cross.shape != (n, n):
            raise BadSpec("cross", f"must be {n}x{n}, got shape {cross.shape}")
        linear = (0.0,) * n if self.linear is None else tuple(float(v) for v in self.linear)
        constant = (0.0,) * n if self.constant is None else tuple(float(v) for v in self.constant)
        if len(linear) != n:
            raise BadSpec("linear", f"needs {n} entries")
        if len(constant) != n:
            raise BadSpec("constant", f"needs {n} entries")
        object.__setattr__(self, "own", own)
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "cross", tuple(tuple(r) for r in cross.tolist()))
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "constant", constant)
        object.__setattr__(self, "n", n)


def _quadratic_payoff(spec: QuadraticGameSpec, i: int):
    own, lin, const = spec.own[i], spec.linear[i], spec.constant[i]
    cross = [(j, spec.cross[i][j]) for j in range(spec.n) if j != i and spec.cross[i][j] != 0]

    def phi(x):
        xi = x[i]
        rival = sum(w * x[j] for j, w in cross)
        return own * xi * xi + rival * xi + lin * xi + const

    return phi


def quadratic_game(spec: QuadraticGameSpec) -> MainGame:
    payoffs = tuple(_quadratic_payoff(spec, i) for i in range(spec.n))
    return validate_game(list(spec.bounds), payoffs, name="quadratic")


def quadratic_best_response(spec: QuadraticGameSpec, player: int, x: Sequence[float]) -> float:
    """Closed-form best reply: the clipped vertex of the concave parabola in ``x_i``."""
    i = player
    slope = spec.linear[i] + sum(spec.cross[i][j] * x[j] for j in range(spec.n) if j != i)
    lo, hi = spec.bounds[i]
    return min(max(-slope / (2.0 * spec.own[i]), lo), hi)
