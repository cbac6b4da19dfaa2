"""Exception types shared across the package."""


class DesignError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class NotUniform(DesignError):
    """Blocks do not all have the same size."""


class NotBalanced(DesignError):
    """Point pairs (or points) are not covered uniformly."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class DegenerateK(DesignError):
    """Block size outside 1 < k < v-1."""


class IndexOutOfRange(DesignError, IndexError):
    pass


class NotSymmetric(DesignError):
    pass


class OddSize(DesignError):
    """A switching set must have an even number of blocks."""


class NotSwitchingSet(DesignError):
    def __init__(self, point: int, degree: int, size: int):
        super().__init__(
            f"point {point} lies on {degree} of the {size} blocks "
            f"(needs 0, {size // 2} or {size})"
        )
        self.point = point
        self.degree = degree


class StaleSwitchingSet(DesignError):
    """The stored point partition no longer matches the design."""


class OverlappingSets(DesignError):
    pass


class BudgetExceeded(DesignError):
    """A search exhausted its node budget before finishing."""


class NotPrime(DesignError):
    pass


class NotHadamard(DesignError):
    pass


class NotRegular(DesignError):
    pass


class WrongRowSum(DesignError):
    def __init__(self, row_sum: int, expected: int):
        super().__init__(f"row sum {row_sum}, expected +{expected}")
        self.row_sum = row_sum


class OrderMismatch(DesignError):
    pass


class NotBushStructured(DesignError):
    pass


class OrbitSplitsClasses(DesignError):
    def __init__(self, orbit: int):
        super().__init__(
            f"point orbit {orbit} is neither missed, covered nor balanced by the rows"
        )
        self.orbit = orbit


class FixtureMissing(FileNotFoundError):
    """A literature fixture needed for a golden comparison is absent."""


class WrongParameters(DesignError):
    """The structure does not have the parameters an operation requires."""
