"""Exhaustive computations on uniformly discretized extensions.

Ground truth for small instances: every max, min and deviation check is an
exact enumeration over the grid, with ties broken toward the smallest index
(the same convention as the continuous optimizer's leftmost rule).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Tolerances, broadcast_call
from .embedding import ZeroSumExtension
from .errors import GridTooLarge
from .optimize import maximin, minimax

MAX_GRID_POINTS = 10_000_000


@dataclass(frozen=True)
class GridGame:
    """Discretized extension.

    ``axes`` holds one grid per main player followed by the f grid.
    ``phi_tables[i]`` is ``phi_i`` on the product of the x-axes and
    ``psi_values`` is ``psi`` on the f grid; payoff tables over all n+1
    axes are assembled on demand by :meth:`payoff_table`.
    """

    axes: tuple
    phi_tables: tuple
    psi_values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.phi_tables)

    @property
    def size(self) -> int:
        return math.prod(len(a) for a in self.axes)

    def payoff_table(self, player: int) -> np.ndarray:
        """pi table of a main player (``0 <= player < n``) or of the subsidy player (``player == n``)."""
        psi = self.psi_values.reshape((1,) * self.n + (-1,))
        if player == self.n:
            total = sum(self.phi_tables)
            return -total[..., None] - self.n * psi
        return self.phi_tables[player][..., None] + psi

    def pair_table(self, player: int, others_idx: Sequence[int]) -> np.ndarray:
        """``pi_i`` over (x_i grid, f grid) with the other players at grid indices."""
        others_idx = [int(k) for k in others_idx]
        if len(others_idx) != self.n - 1:
            raise IndexError(f"expected {self.n - 1} grid indices, got {len(others_idx)}")
        index = others_idx[:player] + [slice(None)] + others_idx[player:]
        for axis, k in enumerate(index):
            if isinstance(k, int) and not 0 <= k < len(self.axes[axis]):
                raise IndexError(f"grid index {k} out of range on axis {axis}")
        line = self.phi_tables[player][tuple(index)]
        return line[:, None] + self.psi_values[None, :]


def discretize(ext: ZeroSumExtension, resolution: int, *, max_points: int = MAX_GRID_POINTS) -> GridGame:
    """Uniform grids with ``resolution`` points per axis, endpoints included.

    Raises
    ------
    GridTooLarge
        ``resolution ** (n + 1)`` exceeds ``max_points``.
    """
    resolution = int(resolution)
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    total = resolution ** (ext.n + 1)
    if total > max_points:
        raise GridTooLarge(
            f"{resolution}^{ext.n + 1} = {total:.3g} grid points exceeds the limit {max_points:.3g}"
        )
    x_axes = [s.grid(resolution) for s in ext.game.spaces]
    f_axis = ext.f_domain.grid(resolution)
    mesh = np.meshgrid(*x_axes, indexing="ij", sparse=True)
    shape = (resolution,) * ext.n
    tables = tuple(
        broadcast_call(lambda *xs, p=p: p(list(xs)), mesh, shape) for p in ext.game.payoffs
    )
    psi = broadcast_call(ext.subsidy.psi, (f_axis,), f_axis.shape)
    return GridGame(tuple(x_axes) + (f_axis,), tables, psi)


def from_tables(x_axes, f_axis, phi_tables, psi_values) -> GridGame:
    """GridGame from explicit tables, for hand-built instances."""
    return GridGame(
        tuple(np.asarray(a, dtype=float) for a in x_axes) + (np.asarray(f_axis, dtype=float),),
        tuple(np.asarray(t, dtype=float) for t in phi_tables),
        np.asarray(psi_values, dtype=float),
    )


def brute_maximin(gg: GridGame, player: int, others_idx: Sequence[int] = ()):
    """``(x index, max over x of min over f)`` on the grid."""
    table = gg.pair_table(player, others_idx)
    envelope = table.min(axis=1)
    k = int(np.argmax(envelope))
    return k, float(envelope[k])


def brute_minimax(gg: GridGame, player: int, others_idx: Sequence[int] = ()):
    """``(f index, min over f of max over x)`` on the grid."""
    table = gg.pair_table(player, others_idx)
    envelope = table.max(axis=0)
    k = int(np.argmin(envelope))
    return k, float(envelope[k])


def brute_nash(gg: GridGame) -> list:
    """All grid profiles where no main player has a strictly better grid deviation.

    Compares ``phi_i`` directly, so adding the subsidy cannot blur ties.
    """
    mask = np.ones(gg.phi_tables[0].shape, dtype=bool)
    for i, table in enumerate(gg.phi_tables):
        mask &= table >= table.max(axis=i, keepdims=True)
    return [tuple(int(k) for k in idx) for idx in np.argwhere(mask)]


def nearest_index(axis: np.ndarray, value: float) -> int:
    return int(np.argmin(np.abs(np.asarray(axis) - value)))


def local_lipschitz(values: np.ndarray, axis: np.ndarray, center: int, window: int = 5) -> float:
    """Largest finite-difference slope of ``values`` within ``window`` cells of ``center``."""
    lo = max(center - window, 0)
    hi = min(center + window, len(axis) - 1)
    if hi == lo:
        return 0.0
    v = np.asarray(values[lo:hi + 1], dtype=float)
    x = np.asarray(axis[lo:hi + 1], dtype=float)
    return float(np.max(np.abs(np.diff(v) / np.diff(x))))


@dataclass(frozen=True)
class OracleComparison:
    player: int
    others: tuple
    resolution: int
    brute_maximin: float
    brute_minimax: float
    continuous_maximin: float
    continuous_minimax: float
    maximin_discrepancy: float
    minimax_discrepancy: float
    grid_step: float
    lipschitz: float


def compare_with_continuous(ext: ZeroSumExtension, gg: GridGame, player: int,
                            others_idx: Sequence[int] = (), tol=None) -> OracleComparison:
    """Brute-force grid values against the continuous nested optimizer for one pair.

    The continuous problem fixes the other players at exactly the grid
    values selected by ``others_idx``, so discrepancies come from the grid
    resolution along ``x_i`` and ``f`` only.
    """
    tol = tol or Tolerances()
    others_idx = [int(k) for k in others_idx]
    other_axes = [a for j, a in enumerate(gg.axes[:gg.n]) if j != player]
    others = [float(a[k]) for a, k in zip(other_axes, others_idx)]
    objective = ext.pair_objective(player, others)
    space = ext.game.spaces[player]
    kw = dict(scan_points=tol.scan_points, tie_tol=tol.tie_tol)
    lower = maximin(objective, space, ext.f_domain, tol.opt_tol, **kw)
    upper = minimax(objective, space, ext.f_domain, tol.opt_tol, **kw)

    kx, bmax = brute_maximin(gg, player, others_idx)
    kf, bmin = brute_minimax(gg, player, others_idx)
    table = gg.pair_table(player, others_idx)
    x_axis, f_axis = gg.axes[player], gg.axes[-1]
    lip = max(
        local_lipschitz(table.min(axis=1), x_axis, kx),
        local_lipschitz(table.max(axis=0), f_axis, kf),
    )
    step = max(x_axis[1] - x_axis[0], f_axis[1] - f_axis[0])
    return OracleComparison(
        player=player,
        others=tuple(others),
        resolution=len(x_axis),
        brute_maximin=bmax,
        brute_minimax=bmin,
        continuous_maximin=lower.value,
        continuous_minimax=upper.value,
        maximin_discrepancy=abs(lower.value - bmax),
        minimax_discrepancy=abs(upper.value - bmin),
        grid_step=float(step),
        lipschitz=lip,
    )
