"""Custom exceptions for growthforms."""


class GrowthFormsError(Exception):
    """Base exception for growthforms."""

    def __init__(self, message: str, exit_code: int = 1) -> None:
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code


class ConfigurationError(GrowthFormsError):
    """Invalid run configuration (unknown scenario, bad numbers, unreadable file)."""

    def __init__(self, message: str) -> None:
        super().__init__(message, exit_code=2)


class DimensionMismatchError(GrowthFormsError):
    """Operands live on charts of different dimension."""
    pass


class DegreeError(GrowthFormsError):
    """Form degree does not fit the operation."""
    pass


class DegenerateFieldError(GrowthFormsError):
    """A field divides by a value that vanishes at an evaluation point."""
    pass


class DegenerateVolumeElementError(DegenerateFieldError):
    """Volume element coefficient is zero where a kinematic flux is requested."""
    pass


class DomainError(GrowthFormsError):
    """A point, seed or support lies outside its chart domain."""
    pass


class ScenarioError(GrowthFormsError):
    """Scenario parameters describe a degenerate or inconsistent setup."""

    def __init__(self, message: str) -> None:
        super().__init__(message, exit_code=2)
