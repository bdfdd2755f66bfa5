"""Exception hierarchy. Each class carries a stable ``code`` used by the CLI."""


class TrimapError(Exception):
    code = "error"
    exit_code = 3


class InputError(TrimapError):
    """Bad user input: malformed specs, degenerate arrangements, bad ranges."""

    code = "invalid_input"
    exit_code = 2


class DegenerateInputError(InputError):
    code = "degenerate_input"


class ParallelLinesError(InputError):
    code = "parallel_lines"


class ConcurrentLinesError(InputError):
    code = "concurrent_lines"


class DegenerateTriangleError(InputError):
    code = "degenerate_triangle"


class DomainError(InputError):
    code = "domain"


class OffBoundaryError(InputError):
    code = "off_boundary"


class DegenerateStateError(InputError):
    code = "degenerate_state"


class InvalidBracketError(InputError):
    code = "invalid_bracket"


class OrientationError(InputError):
    code = "orientation"


class NoValidProjectionError(TrimapError):
    code = "no_valid_projection"


class BranchError(TrimapError):
    code = "branch"


class StaleBranchError(TrimapError):
    """The closed-form periodic point does not follow the detected itinerary.

    ``tie_point`` is set when re-simulation stopped on a fixed point.
    """

    code = "stale_branch"

    def __init__(self, msg: str, tie_point=None):
        super().__init__(msg)
        self.tie_point = tie_point


class IncomparablePairError(TrimapError):
    code = "incomparable_pair"


class AttributionError(TrimapError):
    code = "attribution"
