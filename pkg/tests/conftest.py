import numpy as np
import pytest

from zsembed import CournotSpec, cournot_game, extend, quadratic_subsidy, validate_game

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def toy_game():
    return validate_game([(0, 10)], [lambda x: -(x[0] - 3) ** 2])


@pytest.fixture
def toy_ext():
    return extend(toy_game(), quadratic_subsidy(2, (0, 5)))


def cournot_ext(c=(1, 2, 3), b=0.5, A=10.0, vertex=4.0, f_bounds=(0, 8), bound=None):
    spec = CournotSpec(A, b, tuple(c), bound)
    return extend(cournot_game(spec), quadratic_subsidy(vertex, f_bounds))


@pytest.fixture
def cournot_asym():
    return cournot_ext()


@pytest.fixture
def cournot_sym():
    return cournot_ext(c=(1, 1, 1))


def random_cournot_specs(count, seed):
    """Draws with b in [0, 0.9] and c_i in [0, A/2]."""
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(count):
        A = float(rng.uniform(5, 20))
        b = float(rng.uniform(0, 0.9))
        c = tuple(float(v) for v in rng.uniform(0, A / 2, size=3))
        specs.append(CournotSpec(A, b, c))
    return specs
