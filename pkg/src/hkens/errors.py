"""Exception hierarchy. The CLI maps each class to an exit status."""


class HKError(Exception):
    exit_code = 1


class ConfigError(HKError, ValueError):
    exit_code = 2


class DataError(HKError, ValueError):
    exit_code = 3


class InvariantError(HKError, AssertionError):
    exit_code = 4


class UnsplittableError(HKError, ValueError):
    """No cluster in the partition has two distinct points."""
