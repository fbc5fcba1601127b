"""Exception types raised across the package."""


class InvalidObservableError(ValueError):
    """Observable references a particle the state does not have, or a bad axis."""


class IncompleteAssignmentError(KeyError):
    """An assignment lacks a value that an observable needs."""


class ContextArityError(ValueError):
    """Number of measurement contexts does not match number of observables."""


class ConfigError(ValueError):
    """Experiment configuration outside its allowed range."""


class PairingError(ValueError):
    """Run records cannot be paired into composite events."""


class KindError(ValueError):
    """Composite event of the wrong kind handed to a filter."""


class InsufficientDataError(ValueError):
    """An estimator was asked for a ratio with an empty denominator."""
