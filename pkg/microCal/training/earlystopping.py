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

import math
from typing import Optional


class EarlyStopping:
    """
    Tracks the best validation loss. An epoch improves only if its loss is strictly lower than the
    best one; training should stop once 'patience' consecutive epochs did not improve
    """

    def __init__(self, patience: int = 20):
        self.patience: int = patience
        self.counter: int = 0
        self.bestLoss: float = math.inf
        self.bestEpoch: Optional[int] = None

    def update(self, loss: float, epoch: int) -> bool:
        """
        Registers the validation loss of an epoch

        :return: True if the epoch is the new best

        """
        if loss < self.bestLoss:
            self.bestLoss = loss
            self.bestEpoch = epoch
            self.counter = 0
            return True
        self.counter += 1
        return False

    @property
    def shouldStop(self) -> bool:
        return self.counter >= self.patience
