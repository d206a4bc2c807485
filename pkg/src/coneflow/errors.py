"""Exception types shared across the package."""


class LightConeError(ValueError):
    """Chart point outside the open unit ball (no ray intersection)."""


class SpacelikeViolationError(ValueError):
    """Surface fails the spacelike condition v^2 > 0 at some point.

    Carries optional node location information when raised from mesh code.
    """

    def __init__(self, msg, node=None):
        super().__init__(msg)
        self.node = node


class BoundaryDomainError(ValueError):
    """Point handed to a boundary operation does not lie on the boundary."""


class NonConvexConeError(ValueError):
    """Cross-section fails the convexity requirement."""


class StiffnessError(RuntimeError):
    """Stable time step fell below dt_min; carries a parabolicity report."""

    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class StepRejectedError(RuntimeError):
    """A time step kept failing the post-step checks after retries."""


class ConfigError(ValueError):
    """Configuration failed validation; .violations lists every problem."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" + "\n".join(
            f"  - {v}" for v in self.violations))
