# -*- coding: utf-8 -*-
#
# License:      GPL-3.0-or-later
# Version:      0.1
#
# This file is part of MicroCal.
#
# MicroCal is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# any later version.
#
# MicroCal is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with MicroCal.  If not, see <https://www.gnu.org/licenses/>.

from typing import List, Optional, Tuple

from microCal.status import ExitCode


class GException(Exception):
    """ Superclass of all exceptions """
    exitCode: ExitCode = ExitCode.FAILURE

    def __init__(self, title: str = '', message: str = ''):
        super().__init__()
        self.title: str = title
        self.message: str = message

    def __str__(self) -> str:
        return self.message


class _NamedException(GException):
    """ Uses the class name as title """

    def __init__(self, message: str):
        super().__init__(title=self.__class__.__name__, message=message)


# Numeric substrate

class DimensionError(_NamedException):
    """ Shapes of the operands are not compatible """
    exitCode = ExitCode.USAGE


class NumericError(_NamedException):
    """ A value left the finite range or an operation was applied outside its domain """
    exitCode = ExitCode.DIVERGENCE


class UsageError(_NamedException):
    """ An API was called with arguments that violate its preconditions """
    exitCode = ExitCode.USAGE


# Model and data

class DomainError(_NamedException):
    """ A parameter vector lies outside the support where it is defined """
    exitCode = ExitCode.USAGE


class ConfigError(_NamedException):
    """ Signal invalid configuration values. Each entry of 'invalid' is a (key, message) pair """
    exitCode = ExitCode.USAGE

    def __init__(self, invalid: List[Tuple[str, str]], message: Optional[str] = None):
        if message is None:
            message = '; '.join('{}: {}'.format(k, m) for k, m in invalid)
        super().__init__(message)
        self.invalid: List[Tuple[str, str]] = invalid


class TraceValidationError(_NamedException):
    """ A graph trace violates one of its invariants """
    exitCode = ExitCode.USAGE

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step: Optional[int] = step


class SimulationError(_NamedException):
    """ A simulation task failed. 'index' identifies the task within its batch """
    exitCode = ExitCode.DIVERGENCE

    def __init__(self, index, message: str):
        super().__init__('Simulation {} failed: {}'.format(index, message))
        self.index = index
        self.detail: str = message


class TrainingError(_NamedException):
    """ Training diverged. Carries the partial report collected so far """
    exitCode = ExitCode.DIVERGENCE

    def __init__(self, message: str, report: 'TrainReport' = None, batchIndex: Optional[int] = None):
        super().__init__(message)
        self.report = report
        self.batchIndex: Optional[int] = batchIndex


class FingerprintError(_NamedException):
    """ An observation does not have the (N, K, T) shape a model was trained on """
    exitCode = ExitCode.USAGE


class StoreError(_NamedException):
    """ A file store cannot be read or written, or its content is inconsistent """
    exitCode = ExitCode.IO


# Operations

class OperationError(_NamedException):
    """ Base class for operation exceptions """
    exitCode = ExitCode.USAGE


class OptionValidationError(OperationError):
    """ Used to signal specific errors in the Operation options """

    def __init__(self, invalid: List[Tuple[str, str]], message=None):
        """

        :param invalid: for each error contains a tuple with the option name and its message
        :param message: optional summary. If not set it is built from 'invalid'
        """
        if message is None:
            message = '; '.join('{}: {}'.format(k, m) for k, m in invalid)
        super().__init__(message)
        self.invalid: List[Tuple[str, str]] = invalid
