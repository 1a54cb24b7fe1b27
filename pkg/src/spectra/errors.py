"""Exception layering shared by the whole package.

The CLI maps these onto exit codes: InputError -> 2, RegimeError -> 3,
ViolationError -> 4.
"""


class SpectraError(Exception):
    """Base class for package errors."""


class InputError(SpectraError):
    """Malformed arguments, files, or incompatible shapes."""


class RegimeError(SpectraError):
    """A stated hypothesis or regime precondition does not hold."""


class ViolationError(SpectraError):
    """A certified bound failed inside its stated regime.

    Raised only for inconsistencies that should be impossible; regime gaps at
    small scale are reported as flags, not as this error.
    """
