class LasqError(Exception):
    '''
        Base class for every error raised by the library
    '''


class InvalidInputError(LasqError, ValueError):
    '''
        An argument violates the precondition of an operation
    '''


class ShapeError(InvalidInputError):
    '''
        Array dimensions do not agree
    '''


class ConfigError(LasqError):
    '''
        The run configuration could not be parsed or is invalid
    '''


class ImageIOError(LasqError):
    '''
        Base class for image file problems
    '''


class MissingFileError(ImageIOError):
    pass


class MalformedHeaderError(ImageIOError):
    pass


class UnsupportedFormatError(ImageIOError):
    pass


class TruncatedImageError(ImageIOError):
    pass


class UnwritablePathError(ImageIOError):
    pass


class CheckpointError(LasqError):
    '''
        A checkpoint file has the wrong magic, version or is truncated
    '''


class NumericError(LasqError):
    '''
        A computation produced non-finite values
    '''


# exit codes surfaced by the command line interface
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4


def exit_code(error):
    '''
        Map an exception onto the stable command line exit code
    '''

    if isinstance(error, ConfigError):
        return EXIT_CONFIG
    if isinstance(error, (ImageIOError, CheckpointError, OSError)):
        return EXIT_IO
    if isinstance(error, (NumericError, InvalidInputError)):
        return EXIT_NUMERIC
    return EXIT_NUMERIC
