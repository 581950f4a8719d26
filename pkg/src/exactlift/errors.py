"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called outside its stated precondition."""


class CapExceeded(RuntimeError):
    """A brute-force or size guard refused an instance that is too large."""


class ParseError(ValueError):
    """A file did not conform to its line-oriented format."""


class SolverDegeneracy(RuntimeError):
    """The ellipsoid shape matrix lost positive definiteness."""
