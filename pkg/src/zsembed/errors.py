"""Exception types raised across the package."""


class GameError(ValueError):
    """Base class for invalid games, specs and profiles."""


class EmptyGame(GameError):
    pass


class BadInterval(GameError):
    pass


class NonFinitePayoff(GameError):
    def __init__(self, player, profile, value):
        self.player = player
        self.profile = tuple(float(v) for v in profile)
        self.value = value
        super().__init__(
            f"payoff of player {player + 1} is {value} at profile {self.profile}"
        )


class OutOfDomain(GameError):
    pass


class MissingSubsidyStrategy(GameError):
    pass


class BadSpec(GameError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class NegativeOutput(GameError):
    pass


class NonFiniteObjective(ArithmeticError):
    def __init__(self, location, value):
        self.location = location
        self.value = value
        super().__init__(f"objective is {value} at {location}")


class NonZeroMinimum(GameError):
    def __init__(self, minimum, location):
        self.minimum = minimum
        self.location = location
        super().__init__(
            f"subsidy minimum is {minimum:.6g} at f={location:.6g}, expected 0"
        )


class NonUniqueMinimizer(GameError):
    def __init__(self, locations):
        self.locations = tuple(locations)
        super().__init__(f"subsidy has several minimizers near {self.locations}")


class GridTooLarge(GameError):
    pass


class NonConvergence(RuntimeError):
    def __init__(self, last_iterate, residual, iterations):
        self.last_iterate = tuple(last_iterate)
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"fixed-point iteration did not converge after {iterations} steps "
            f"(residual {residual:.3g}, last iterate {self.last_iterate})"
        )


class NotANash(GameError):
    def __init__(self, gaps, eq_tol):
        self.gaps = tuple(gaps)
        self.eq_tol = eq_tol
        worst = max(range(len(self.gaps)), key=lambda i: self.gaps[i])
        super().__init__(
            f"candidate is not a Nash equilibrium: player {worst + 1} "
            f"gains {self.gaps[worst]:.6g} by deviating (eq_tol {eq_tol:g})"
        )
