"""Exception and warning types shared across the package."""


class Emg2KinError(Exception):
    """Base class for all package errors."""


# --- dataset loading ---

class DataError(Emg2KinError):
    """Base class for dataset loading/parsing failures."""


class MissingColumn(DataError):
    pass


class NaNData(DataError):
    pass


class RateMismatch(DataError):
    pass


class EmptyTrial(DataError):
    pass


class UnknownTaskId(DataError):
    pass


class InvalidConfig(Emg2KinError):
    pass


# --- signal processing ---

class CutoffOutOfRange(Emg2KinError):
    pass


class SignalTooShort(Emg2KinError):
    pass


class FactorNotPositive(Emg2KinError):
    pass


class TooShort(Emg2KinError):
    pass


# --- features ---

class LengthMismatch(Emg2KinError):
    pass


class RankDeficientWarning(UserWarning):
    """PCA input had fewer nonzero eigenvalues than requested components."""


# --- networks and training ---

class ShapeMismatch(Emg2KinError):
    pass


class NonFiniteActivation(Emg2KinError):
    pass


class EmptyDataset(Emg2KinError):
    pass


class DivergedLoss(Emg2KinError):
    """Training loss became non-finite. Carries the partial history if available."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history


# --- evaluation ---

class ConstantInput(Emg2KinError):
    pass


class ConstantTruth(Emg2KinError):
    pass


class NegativeLevel(Emg2KinError):
    pass


class UntrainedModel(Emg2KinError):
    pass


# --- orchestration ---

class ConfigError(Emg2KinError):
    pass


class MissingArtifact(Emg2KinError):
    """A pipeline stage was run before the stage that produces its input."""
