"""sklearn-style wrapper around the maximin fixed-point solver."""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import Tolerances
from .embedding import ZeroSumExtension
from .solver import solve_maximin_fixed_point, verify_nash


class MaximinEquilibrium(BaseEstimator):
    """Equilibrium of a zero-sum extension via damped maximin iteration.

    ``fit`` takes a :class:`ZeroSumExtension` in place of a data matrix.
    Hyperparameters are plain constructor arguments, so ``get_params``,
    ``set_params`` and ``sklearn.base.clone`` work as usual.

    Attributes
    ----------
    equilibrium_ : tuple of float
        Fixed point of the main players' maximin strategies.
    subsidy_strategy_ : float
        Subsidy player's strategy, the minimizer of psi.
    payoffs_ : tuple of float
        ``phi_i`` at the equilibrium.
    n_iter_ : int
    report_ : SolveReport
    """

    def __init__(self, damping=0.5, max_iter=10_000, init=None, opt_tol=1e-9,
                 fp_tol=1e-8, eq_tol=1e-6, tie_tol=1e-7, scan_points=257):
        self.damping = damping
        self.max_iter = max_iter
        self.init = init
        self.opt_tol = opt_tol
        self.fp_tol = fp_tol
        self.eq_tol = eq_tol
        self.tie_tol = tie_tol
        self.scan_points = scan_points

    def _tolerances(self):
        return Tolerances(self.opt_tol, self.fp_tol, self.eq_tol, self.tie_tol, self.scan_points)

    def fit(self, ext: ZeroSumExtension, y=None):
        if not isinstance(ext, ZeroSumExtension):
            raise TypeError(f"fit expects a ZeroSumExtension, got {type(ext).__name__}")
        report = solve_maximin_fixed_point(
            ext, self.init, self._tolerances(), self.damping, self.max_iter
        )
        self.report_ = report
        self.equilibrium_ = report.equilibrium_x
        self.subsidy_strategy_ = report.equilibrium_f
        self.payoffs_ = report.values
        self.n_iter_ = report.iterations
        self.n_players_ = ext.n
        return self

    def deviation_gaps(self, ext: ZeroSumExtension):
        check_is_fitted(self, "equilibrium_")
        return verify_nash(ext.game, self.equilibrium_, self._tolerances())

    def score(self, ext: ZeroSumExtension, y=None) -> float:
        """Minus the largest deviation gap; 0 at an exact equilibrium."""
        return -max(self.deviation_gaps(ext))
