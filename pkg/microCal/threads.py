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

import traceback
from typing import Any, Callable, List, Sequence, Tuple

from joblib import Parallel, delayed

from microCal import flogging, exceptions as exp


class Worker:
    """
    Wraps a callable to run it as a single task of a parallel batch
    """

    def __init__(self, executable: Callable[..., Any], args: Tuple = tuple(), identifier: Any = None):
        """
        Builds a worker to run a task

        :param executable: the callable doing the work
        :param args: arguments to pass to the callable (omit them if there are none)
        :param identifier: object identifying the task in errors and logs
        """
        self._executable = executable
        self._args = args
        self._identifier = identifier

    def run(self) -> Any:
        """ Runs the task. Any failure is logged and re-raised as SimulationError """
        try:
            result = self._executable(*self._args)
        except exp.SimulationError:
            raise
        except Exception as e:
            flogging.appLogger.debug('Worker got exception: id={}'.format(self._identifier))
            flogging.appLogger.error(traceback.format_exc())
            raise exp.SimulationError(self._identifier, '{}: {}'.format(type(e).__name__, e)) from e
        flogging.appLogger.debug('Worker finished: id={}'.format(self._identifier))
        return result


def _runWorker(worker: Worker) -> Tuple[bool, Any]:
    # exceptions are rebuilt in the parent process
    try:
        return True, worker.run()
    except exp.SimulationError as e:
        return False, (e.index, e.detail)


def runTasks(fn: Callable[..., Any], argsList: Sequence[Tuple], jobs: int = 1) -> List[Any]:
    """
    Runs 'fn' over every tuple of arguments. Results are returned in the order of 'argsList'
    whatever the number of jobs, so deterministic tasks give identical outputs for any 'jobs'

    :param fn: a picklable callable
    :param argsList: one tuple of positional arguments per task
    :param jobs: number of parallel processes. 1 runs in the calling process

    :return: the list of results

    :raise SimulationError: if a task fails. The error carries the index of the task

    """
    workers = [Worker(fn, args, identifier=i) for i, args in enumerate(argsList)]
    if jobs == 1 or len(workers) <= 1:
        return [w.run() for w in workers]
    outcomes = Parallel(n_jobs=jobs)(delayed(_runWorker)(w) for w in workers)
    for ok, value in outcomes:
        if not ok:
            raise exp.SimulationError(*value)
    return [value for _, value in outcomes]
