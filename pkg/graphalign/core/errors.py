#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exception types that the command line turns into exit codes.

    0 success
    1 usage or configuration error
    2 data error
    3 numerical failure
"""

###############################################################################
class ConfigError(ValueError):
    """Invalid configuration value or unknown configuration key."""
    exit_code = 1

class DataError(ValueError):
    """Input data that cannot be processed."""
    exit_code = 2

class MissingArtifactError(DataError, FileNotFoundError):
    """
    A stage was started before the stage producing one of its inputs.
    The message names both the missing file and the producing stage.
    """

    def __init__(self, path, stage):
        self.path  = path
        self.stage = stage
        msg = "Missing artifact '%s'. It is produced by the stage '%s',"
        msg += " run that stage first."
        super().__init__(msg % (path, stage))

class NumericalError(ArithmeticError):
    """Non-finite likelihood or loss."""
    exit_code = 3

###############################################################################
def exit_code_of(error):
    """Return the process exit code corresponding to an exception."""
    return getattr(error, 'exit_code', 1)
