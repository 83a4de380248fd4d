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

import argparse
import logging
import sys
from typing import List, Optional

from microCal import exceptions as exp, flogging, operation
from microCal.operation.interface import Operation
from microCal.status import ExitCode

FILE_FORMAT = '%(asctime)s:%(levelname)s:%(module)s.%(funcName)s:%(lineno)d:%(message)s'

_loggingReady = False


def setUpLogging(root: Optional[str] = None) -> None:
    """ Creates the log files of a run. Only the first call in a process has effect """
    global _loggingReady
    if _loggingReady:
        return
    flogging.setUpRootLogger(root)
    flogging.setUpLogger(name='app', folder='app', fmt=FILE_FORMAT, level=flogging.LEVEL, root=root)
    flogging.setUpLogger(name='ops', folder='operations', fmt='%(message)s', level=flogging.INFO, root=root)
    flogging.setUpLogger(name='train', folder='train', fmt='%(asctime)s:%(message)s', level=flogging.INFO,
                         root=root)
    flogging.setUpConsole('app', logging.WARNING)
    flogging.deleteOldLogs(root=root)
    _loggingReady = True


def buildParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='microCal',
                                     description='Neural posterior estimation for the Hopfield opinion '
                                                 'model from fully observed traces')
    subParsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subParsers.required = True
    for name, cls in operation.commands().items():
        sub = subParsers.add_parser(name, help=cls.shortDescription(), description=cls.shortDescription())
        cls.addArguments(sub)
        sub.add_argument('--log-dir', dest='logDir', help='folder of the log files (default: ./logs)')
        sub.set_defaults(operation=cls)
    return parser


def runCommand(command: Operation) -> None:
    """
    Executes a configured command and logs it with its result

    :raise OperationError: if the command still has options to set

    """
    if not command.hasOptions():
        flogging.appLogger.error('Command "{}" not started: options are not set'.format(command.name()))
        raise exp.OperationError('Command "{}" has options to set'.format(command.name()))
    flogging.appLogger.info('Running command "{}"'.format(command.name()))
    result = command.execute()
    flogging.OperationLogger(flogging.opsLogger).log(command, result)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs one command

    :return: the exit code: 0 on success, 2 on invalid usage or validation errors, 3 on I/O errors,
        4 on numeric divergence

    """
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else int(ExitCode.SUCCESS)
    setUpLogging(args.logDir)
    command = args.operation()
    try:
        command.setOptionsFromArgs(args)
        runCommand(command)
    except exp.GException as e:
        flogging.appLogger.error('{}: {}'.format(e.title, e.message))
        return int(e.exitCode)
    except OSError as e:
        flogging.appLogger.error('I/O error: {}'.format(e))
        return int(ExitCode.IO)
    return int(ExitCode.SUCCESS)


def run() -> None:
    sys.exit(main())
