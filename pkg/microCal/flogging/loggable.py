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

from abc import ABC
from typing import Optional


class Loggable(ABC):
    def __init__(self):
        super().__init__()
        self._logExecutionString: Optional[str] = None
        self._logOptionsString: Optional[str] = None

    def logOptions(self) -> Optional[str]:
        """
        Return a string which logs the options set in a command, or None if no option are used.
        By default returns the field _logOptionsString
        """
        return self._logOptionsString

    def logMessage(self) -> Optional[str]:
        """
        Return the formatted message to log after a command completes. Should include details about
        the execution, like the number of written traces or the best validation loss, that can only be
        known inside the :func:`~microCal.operation.interface.operation.Operation.execute` method. By
        default returns the field _logExecutionString """
        return self._logExecutionString
