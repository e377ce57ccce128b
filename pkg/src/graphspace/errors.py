"""Exception hierarchy shared by all graphspace modules."""

from __future__ import annotations


class GraphSpaceError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    code = "graphspace_error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class IncompatiblePeriodic(GraphSpaceError):
    code = "incompatible_periodic"


class OracleTagMismatch(GraphSpaceError):
    code = "oracle_tag_mismatch"


class DepthExhausted(GraphSpaceError):
    code = "depth_exhausted"


class TooManySupergraphs(GraphSpaceError):
    code = "too_many_supergraphs"


class EmptySupport(GraphSpaceError):
    code = "empty_support"


class NotSeparated(GraphSpaceError):
    code = "not_separated"


class EndpointExcluded(GraphSpaceError):
    code = "endpoint_excluded"


class InadmissibleProbe(GraphSpaceError):
    code = "inadmissible_probe"


class CLimitMissing(GraphSpaceError):
    code = "c_limit_missing"


class UnknownPartDerivative(GraphSpaceError):
    code = "unknown_part_derivative"


class BadEpsilon(GraphSpaceError):
    code = "bad_epsilon"


class GrowthBoundViolated(GraphSpaceError):
    code = "growth_bound_violated"


class ConstructionError(GraphSpaceError):
    code = "construction_error"


class TooLargePattern(GraphSpaceError):
    code = "too_large_pattern"
