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

from typing import Dict


class Shape:
    """
    Fingerprint of a graph trace: number of agents N, number of topics K and number of steps T.
    A trained model only accepts observations with its own shape
    """

    def __init__(self, nAgents: int = 0, nTopics: int = 0, nSteps: int = 0):
        self.nAgents: int = nAgents
        self.nTopics: int = nTopics
        self.nSteps: int = nSteps

    def __eq__(self, other):
        if isinstance(other, self.__class__):
            return self.serialize() == other.serialize()
        return False

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.nAgents, self.nTopics, self.nSteps))

    def __str__(self):
        return '(N={:d}, K={:d}, T={:d})'.format(self.nAgents, self.nTopics, self.nSteps)

    def serialize(self) -> Dict[str, int]:
        """ Serialize a shape object in a dictionary """
        return {'n_agents': self.nAgents, 'n_topics': self.nTopics, 'n_steps': self.nSteps}

    @staticmethod
    def deserialize(state: Dict[str, int]) -> 'Shape':
        """ Create a new shape from a serialization """
        return Shape(int(state['n_agents']), int(state['n_topics']), int(state['n_steps']))

    def clone(self) -> 'Shape':
        return Shape(self.nAgents, self.nTopics, self.nSteps)

    @staticmethod
    def fromConfig(config: 'SimConfig') -> 'Shape':
        return Shape(config.nAgents, config.nTopics, config.nSteps)
