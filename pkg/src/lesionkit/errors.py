"""Exception types shared across the toolkit.

Every error raised by lesionkit derives from :class:`LesionKitError`, so
callers (including the CLI) can catch one base class.
"""


class LesionKitError(Exception):
    """Base class for all lesionkit errors."""


# --- annotation parsing ---

class MalformedRow(LesionKitError):
    """A CSV row has the wrong arity or an unparseable cell."""


class InvariantViolation(LesionKitError):
    """A record field violates a documented invariant."""


class UnknownOrganCode(LesionKitError):
    """Organ code outside the documented 1..8 range."""


# --- windowing / geometry ---

class NonPositiveWidth(LesionKitError):
    """Window width must be strictly positive."""


class ShapeMismatch(LesionKitError):
    """Arrays that must share a shape do not."""


class NonPositiveSpacing(LesionKitError):
    """Voxel spacing must be strictly positive."""


class DegenerateMeasurement(LesionKitError):
    """RECIST endpoints are zero-length or colinear."""


class ParamOutOfRange(LesionKitError):
    """Augmentation parameter outside its declared range."""


# --- anchors ---

class NonPositiveInput(LesionKitError):
    """Anchor size or ratio must be strictly positive."""


class EmptyConfig(LesionKitError):
    """Anchor configuration has no sizes or no ratios."""


class EmptyGroundTruth(LesionKitError):
    """An operation that needs ground-truth boxes got none."""


class InvalidDeParams(LesionKitError):
    """Differential-evolution hyperparameters violate their bounds."""


# --- fusion ---

class DimensionMismatch(LesionKitError):
    """Tensor or parameter dimensions are inconsistent."""


class EmptyBlock(LesionKitError):
    """A feature block must contain at least one view."""


class TauOutOfRange(LesionKitError):
    """Polyak coefficient must lie in [0, 1]."""


# --- evaluation ---

class MissingAttribute(LesionKitError):
    """Ground-truth records lack the attribute needed for stratification."""


# --- synthetic phantoms ---

class InfeasiblePlacement(LesionKitError):
    """A lesion could not be placed inside its organ region."""
