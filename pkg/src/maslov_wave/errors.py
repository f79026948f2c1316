"""Exception hierarchy shared by all modules."""


class MaslovWaveError(Exception):
    """Base class for every error raised by this package."""


class InputError(MaslovWaveError, ValueError):
    """Malformed arguments (shapes, signs, tolerances)."""


class NotAFrameError(InputError):
    """A matrix meant to be a Lagrangian frame is rank deficient."""


class NotIsotropicError(InputError):
    """A full-rank frame whose column span is not isotropic."""


class NoCrossingError(MaslovWaveError):
    """A crossing form was requested at a parameter with trivial intersection."""


class NonRegularCrossingError(MaslovWaveError):
    """A crossing form has a nontrivial kernel.

    Attributes
    ----------
    t0 : float
        Parameter value of the offending crossing.
    """

    def __init__(self, message, t0):
        super().__init__(message)
        self.t0 = t0


class RefinementExhaustedError(MaslovWaveError):
    """Crossings could not be isolated at the available resolution."""


class RankAmbiguityError(MaslovWaveError):
    """An integer output changed when the rank tolerance was rescaled."""


class ConsistencyError(MaslovWaveError):
    """Two routes that must agree exactly produced different integers."""


class IllConditionedError(MaslovWaveError):
    """A linear solve was too ill-conditioned to trust."""


class HypothesisError(MaslovWaveError):
    """A structural hypothesis (H1, hyperbolicity, transversality) failed."""


class HyperbolicityError(HypothesisError):
    """A matrix has an eigenvalue within the margin of the imaginary axis."""


class ParameterRegimeError(MaslovWaveError):
    """Model parameters outside the regime where the construction applies."""


class ConvergenceError(MaslovWaveError):
    """Newton or continuation failed.

    Attributes
    ----------
    last_good : object or None
        The last converged iterate, when one exists.
    """

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class OrientationError(MaslovWaveError):
    """The computed wave speed is not positive."""


class IntegrationError(MaslovWaveError):
    """ODE integration failed."""


class ProfileError(MaslovWaveError):
    """A wave profile file is malformed or is not a solution."""


class PipelineError(MaslovWaveError):
    """A stage of the analysis pipeline failed.

    Attributes
    ----------
    stage : str
        Name of the failing stage ("wave", "bundle", "boundary", "evans", ...).
    """

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
