"""Exception hierarchy shared by the library and the command line tool."""


class FermibundleError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FermibundleError):
    """Malformed or out-of-contract input: bad dimensions, bad files, bad flags."""


class ValidationError(FermibundleError):
    """A mathematical precondition or consistency requirement failed."""


class NumericError(FermibundleError):
    """A computation could not be completed reliably at the given resolution."""
