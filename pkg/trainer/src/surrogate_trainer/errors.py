"""Exception hierarchy for the surrogate trainer."""


class TrainerError(Exception):
    """Base class for all trainer failures."""


class ConfigInvalid(TrainerError):
    """A model or training configuration violates its invariants."""


class ShapeMismatch(TrainerError):
    """Prediction and target tensors disagree in shape."""


class DataMissing(TrainerError):
    """A dataset manifest or a referenced image file is absent."""


class DivergedLoss(TrainerError):
    """Training hit a non-finite loss; history up to that point is on disk."""


class EmptySplit(TrainerError):
    """The requested dataset split contains no records."""
