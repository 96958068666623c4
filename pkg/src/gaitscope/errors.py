"""Exception hierarchy for gaitscope."""


class GaitscopeError(Exception):
    """Base class for all gaitscope errors."""


# --- geometry ---------------------------------------------------------------

class TooFewCorrespondences(GaitscopeError):
    pass


class DegenerateConfiguration(GaitscopeError):
    pass


class PointAtInfinity(GaitscopeError):
    pass


class SingularMatrix(GaitscopeError):
    pass


# --- signal -----------------------------------------------------------------

class EmptySeries(GaitscopeError):
    pass


class NonpositiveSigma(GaitscopeError):
    pass


class EmptyStance(GaitscopeError):
    pass


# --- gait -------------------------------------------------------------------

class NoStancesFound(GaitscopeError):
    pass


class InsufficientStances(GaitscopeError):
    def __init__(self, message, person_id=None):
        super().__init__(message)
        self.person_id = person_id


class InsufficientFrames(GaitscopeError):
    def __init__(self, message, person_id=None):
        super().__init__(message)
        self.person_id = person_id


# --- classify ---------------------------------------------------------------

class ZeroVariance(GaitscopeError):
    pass


class SingleClassTrainingSet(GaitscopeError):
    pass


class FoldDegenerate(GaitscopeError):
    pass


class SingleClassScores(GaitscopeError):
    pass


# --- pipeline / annotation parsing ------------------------------------------

class AnnotationError(GaitscopeError):
    """Base for annotation-document problems; carries a JSON-path-like location."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class AnnotationSyntaxError(AnnotationError):
    pass


class SchemaError(AnnotationError):
    pass


class InvariantViolation(AnnotationError):
    pass
