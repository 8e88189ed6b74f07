"""Error types shared across the package.

The CLI maps ConstraintError to exit code 1 (bad configuration) and
UnrecoverableError to exit code 2 (data loss beyond what the code can
repair), so library code should raise these rather than bare ValueError
whenever a named parameter constraint or a recoverability budget is the
thing being violated.
"""


class ConstraintError(ValueError):
    """A parameter constraint does not hold; message names the inequality."""


class SelectionError(ValueError):
    """A chosen locator subset is not P-independent; caller must re-select."""


class UnrecoverableError(RuntimeError):
    """More failures than the code can repair."""
