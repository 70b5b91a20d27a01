"""Non-zero-sum games as zero-sum games with a virtual-subsidy player."""

from .core import Interval, MainGame, StrategyProfile, Tolerances, eval_phi, validate_game
from .embedding import (
    SionReport,
    Subsidy,
    ZeroSumExtension,
    argmax_invariance_check,
    eval_pi,
    extend,
    quadratic_subsidy,
    sion_check,
    subsidy_minimizer,
)
from .games import (
    CournotSpec,
    QuadraticGameSpec,
    cournot_closed_form,
    cournot_game,
    quadratic_game,
    symmetric_cournot_game,
)
from .optimize import OptResult, maximin, maximize_1d, minimax, minimize_1d
from .solver import (
    SolveReport,
    VerificationReport,
    best_response,
    solve_maximin_fixed_point,
    verify_nash,
    verify_theorem1,
    verify_theorem2,
)

__version__ = "0.1.0"


def __getattr__(name):
    # sklearn is heavy to import; only the estimator needs it
    if name == "MaximinEquilibrium":
        from .estimator import MaximinEquilibrium

        return MaximinEquilibrium
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
