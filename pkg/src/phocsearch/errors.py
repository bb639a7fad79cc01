class PhocError(Exception):
    """Base class for user-facing errors (bad input, bad files, bad configs)."""


class ConfigError(PhocError):
    pass


class CapacityError(PhocError):
    pass


class CorpusFormatError(PhocError):
    pass


class IndexFormatError(PhocError):
    pass


class RunFormatError(PhocError):
    pass
