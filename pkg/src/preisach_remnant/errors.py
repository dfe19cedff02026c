"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inconsistent inputs: box mismatches, bad parameters, invalid config."""


class OutOfRangeError(ValueError):
    """A queried line does not intersect the memory interface."""


class EmptyIntersectionError(ValueError):
    """The weighting support does not meet the remnant quadrant."""


class DegenerateBoundsError(ValueError):
    """Sector bounds vanish on Q; the remnant is not controllable there."""


class AdmissibilityError(ValueError):
    """Initial interface violates the controller's admissibility conditions."""
