import math

import numpy as np
import pytest

from zsembed import StrategyProfile, extend, quadratic_subsidy, validate_game
from zsembed.embedding import (
    Subsidy,
    argmax_invariance_check,
    eval_pi,
    quasi_concave_on_grid,
    sion_check,
    subsidy_minimizer,
    zero_sum_residual,
)
from zsembed.errors import (
    MissingSubsidyStrategy,
    NonUniqueMinimizer,
    NonZeroMinimum,
    OutOfDomain,
)

from conftest import cournot_ext, toy_game


def test_subsidy_minimizer_quadratic():
    assert subsidy_minimizer(quadratic_subsidy(4, (0, 8))) == pytest.approx(4, abs=1e-8)


def test_subsidy_vertex_outside_domain():
    with pytest.raises(NonZeroMinimum) as info:
        subsidy_minimizer(quadratic_subsidy(4, (0, 3)))
    assert info.value.minimum == pytest.approx(1.0)
    assert info.value.location == 3.0


def test_subsidy_abs_sin():
    xs = np.linspace(1, 5, 1_000_001)
    brute = xs[np.argmin(np.abs(np.sin(xs)))]
    a = subsidy_minimizer(Subsidy((1, 5), lambda f: np.abs(np.sin(f))))
    assert brute == pytest.approx(math.pi, abs=1e-5)
    assert a == pytest.approx(math.pi, abs=1e-8)


def test_subsidy_non_unique_minimizer():
    with pytest.raises(NonUniqueMinimizer):
        subsidy_minimizer(Subsidy((0, 10), lambda f: np.abs(np.sin(f))))


def test_negative_subsidy_rejected_and_normalization_opt_in():
    shifted = Subsidy((0, 8), lambda f: (f - 4) ** 2 - 1.0)
    with pytest.raises(NonZeroMinimum):
        extend(toy_game(), shifted)
    ext = extend(toy_game(), shifted, normalize=True)
    assert ext.a == pytest.approx(4, abs=1e-8)
    assert ext.subsidy.psi(ext.a) == pytest.approx(0, abs=1e-12)


def test_extend_toy(toy_ext):
    assert eval_pi(toy_ext, StrategyProfile((3,), 2)) == [0.0, 0.0]


def test_extend_cournot_payoffs():
    ext = cournot_ext(c=(1, 1, 1))
    # phi_i = 9, psi(5) = 1 -> pi_i = 10; pi_4 = -27 - 3 = -30 ... check by arithmetic
    got = eval_pi(ext, StrategyProfile((3, 3, 3), 5))
    assert got[:3] == [10.0, 10.0, 10.0]
    assert got[3] == -3 * 9.0 - 3 * 1.0


def test_eval_pi_toy_zero_phi():
    ext = extend(validate_game([(0, 1)], [lambda x: 0.0]), quadratic_subsidy(1, (0, 2)))
    assert eval_pi(ext, StrategyProfile((0.5,), 0)) == [1.0, -1.0]


def test_eval_pi_at_closed_form(cournot_asym):
    x = (10 / 3, 8 / 3, 2.0)
    got = eval_pi(cournot_asym, StrategyProfile(x, 4))
    phis = [float(p(list(x))) for p in cournot_asym.game.payoffs]
    assert got[3] == -sum(phis)


def test_eval_pi_errors(toy_ext):
    with pytest.raises(MissingSubsidyStrategy):
        eval_pi(toy_ext, StrategyProfile((1.0,)))
    with pytest.raises(OutOfDomain):
        eval_pi(toy_ext, StrategyProfile((1.0,), 6.0))
    with pytest.raises(OutOfDomain):
        eval_pi(toy_ext, StrategyProfile((11.0,), 1.0))


def test_zero_sum_identity_random_profiles(cournot_asym):
    rng = np.random.default_rng(0)
    for _ in range(1000):
        x = rng.uniform(0, 10, 3)
        f = rng.uniform(0, 8)
        assert zero_sum_residual(cournot_asym, x, f) <= 1e-12


def test_subsidy_separability_pointwise(cournot_asym):
    rng = np.random.default_rng(1)
    psi = cournot_asym.subsidy.psi
    for _ in range(200):
        x = list(rng.uniform(0, 10, 3))
        f1, f2 = rng.uniform(0, 8, 2)
        for i in range(3):
            diff = cournot_asym.pi(i, x, f1) - cournot_asym.pi(i, x, f2)
            assert diff == pytest.approx(psi(f1) - psi(f2), abs=1e-12)


def test_sion_check_toy(toy_ext):
    rep = sion_check(toy_ext, 0, [])
    assert rep.maximin_value == pytest.approx(0, abs=1e-12)
    assert rep.minimax_value == pytest.approx(0, abs=1e-12)
    assert rep.arg_x == pytest.approx(3, abs=1e-7)
    assert rep.arg_f == pytest.approx(2, abs=1e-7)
    assert rep.passed and rep.quasi_concave


def test_sion_check_cournot_symmetric(cournot_sym):
    rep = sion_check(cournot_sym, 0, [3, 3])
    assert rep.maximin_value == pytest.approx(9, abs=1e-9)
    assert rep.minimax_value == pytest.approx(9, abs=1e-9)
    assert rep.arg_f == pytest.approx(4, abs=1e-6)
    assert rep.passed


def test_sion_check_cournot_player_two(cournot_asym):
    rep = sion_check(cournot_asym, 1, [10 / 3, 2.0])
    # (a - c_2 - b x_1 - b x_3) / 2
    assert rep.arg_x == pytest.approx((10 - 2 - 0.5 * 10 / 3 - 0.5 * 2) / 2, abs=1e-7)
    assert rep.passed


def test_sion_check_reports_expected_x(cournot_asym):
    assert sion_check(cournot_asym, 0, [3, 3], expected_x=3.0).passed
    assert not sion_check(cournot_asym, 0, [3, 3], expected_x=2.0).passed


def test_argmax_invariance_check_examples(toy_ext, cournot_sym):
    assert argmax_invariance_check(toy_ext, 0, [], [0, 2, 5])
    assert argmax_invariance_check(cournot_sym, 0, [3, 3], [0, 4, 8])
    with pytest.raises(OutOfDomain):
        argmax_invariance_check(cournot_sym, 0, [3, 3], [9.0])


def test_argmin_f_is_a_for_every_player():
    ext = cournot_ext(c=(0.5, 1.5, 2.5), b=0.3, vertex=2.5, f_bounds=(0, 7))
    rng = np.random.default_rng(5)
    for _ in range(5):
        x = list(rng.uniform(0, 10, 3))
        for i in range(3):
            rep = sion_check(ext, i, x[:i] + x[i + 1:])
            assert abs(rep.arg_f - ext.a) <= 1e-6


def test_quasi_concavity_diagnostic():
    assert quasi_concave_on_grid([0, 1, 2, 2, 1, 0])
    assert quasi_concave_on_grid([3, 2, 1])
    assert not quasi_concave_on_grid([0, 2, 1, 2, 0])
    # non-quasi-concave phi is reported but the check still runs
    ext = extend(validate_game([(0, 4)], [lambda x: np.cos(np.pi * x[0])]),
                 quadratic_subsidy(1, (0, 2)))
    assert not sion_check(ext, 0, []).quasi_concave


def test_restrict_gives_two_player_pair(cournot_asym):
    pair = cournot_asym.restrict(1, [3.0, 3.0])
    assert pair.n == 1
    assert pair.game.payoffs[0]([2.0]) == cournot_asym.game.payoffs[1]([3.0, 2.0, 3.0])
    with pytest.raises(OutOfDomain):
        cournot_asym.restrict(1, [3.0])
