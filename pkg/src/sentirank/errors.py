"""Exception hierarchy. InputError maps to CLI exit code 2, AnalysisError to 3."""


class SentirankError(Exception):
    exit_code = 1


class InputError(SentirankError, ValueError):
    """Bad or missing input data (files, rows, parameters)."""

    exit_code = 2


class AnalysisError(SentirankError):
    """A computation is undefined for the data it was given."""

    exit_code = 3
