"""Exception hierarchy; each class maps to one CLI exit code."""


class WcloneError(Exception):
    exit_code = 2


class InputError(WcloneError, ValueError):
    """Malformed or inconsistent input (arity/domain mismatch, bad JSON, ...)."""

    exit_code = 2


class ValidityError(InputError):
    """A weighting places negative weight on a non-projection."""

    def __init__(self, message, operation=None):
        super().__init__(message)
        self.operation = operation


class ProperError(ValidityError):
    """A superposition required to be proper was not."""


class CertificateError(WcloneError):
    exit_code = 1


class ResourceError(WcloneError):
    """An enumeration or search exceeded its configured cap."""

    exit_code = 3

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class TheoremContradiction(WcloneError):
    """An outcome the main classification theorem rules out was observed."""

    exit_code = 4

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump or {}
