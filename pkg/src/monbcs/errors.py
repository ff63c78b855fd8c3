"""Exception types shared across the package.

Exit-code mapping used by the CLI: ConfigError -> 2, IntegrityError
(and subclasses) / NumericsError -> 3.
"""


class ConfigError(Exception):
    """Invalid, missing, or unknown configuration input."""


class IntegrityError(Exception):
    """A numerical invariant was violated beyond the abort threshold.

    Signals a logic error, not ordinary floating-point drift.
    """


class BranchForbiddenError(IntegrityError):
    """A projective branch with (near-)zero Born probability was requested."""


class NumericsError(Exception):
    """A numerical routine (quadrature, eigensolver) failed to converge."""
