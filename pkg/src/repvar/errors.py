"""Exception hierarchy shared by the pipeline.

The CLI maps each family to an exit code: hypothesis refusals exit 1,
numerical failures exit 2, detected inconsistencies exit 3.
"""


class RepvarError(Exception):
    pass


class InputError(RepvarError, ValueError):
    """Malformed knot input or unsupported diagram."""


class HypothesisError(RepvarError):
    """The knot/root does not satisfy the hypotheses of the construction."""


class NumericalError(RepvarError):
    """A numerical procedure failed to converge or decide."""


class RankIndeterminateError(NumericalError):
    """Singular values straddle the rank threshold; more precision is needed."""


class InconsistencyError(RepvarError):
    """A computed quantity contradicts a proven statement (e.g. a nonzero obstruction)."""
