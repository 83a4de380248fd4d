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
from abc import abstractmethod, ABC
from typing import Any, Dict

from microCal.flogging import Loggable


class Operation(Loggable, ABC):
    """ Base class of every command. Options are set and validated first, then the command is
    executed """

    def __init__(self):
        super().__init__()

    @abstractmethod
    def execute(self) -> Any:
        """ Contains the logic of the command

        :return: a short description of the produced artifact, logged with the command

        """
        pass

    def getOptions(self) -> Dict[str, Any]:
        """
        Returns the options currently set, by name. By default returns an empty dictionary
        """
        return dict()

    @abstractmethod
    def setOptions(self, *args, **kwargs) -> None:
        """
        Configure the command. Every invalid option is collected and reported at once with
        :class:`~microCal.exceptions.OptionValidationError`

        :raise OptionValidationError: if options are not valid

        """
        pass

    @staticmethod
    def name() -> str:
        """
        The name of the command on the command line
        """
        pass

    @staticmethod
    def shortDescription() -> str:
        """
        One line shown in the command line help
        """
        pass

    @staticmethod
    def addArguments(parser: argparse.ArgumentParser) -> None:
        """ Registers the command line flags of the command """
        pass

    def setOptionsFromArgs(self, args: argparse.Namespace) -> None:
        """ Calls setOptions with the parsed flags. Flag names match the option names """
        keys = self.getOptions().keys()
        self.setOptions(**{k: getattr(args, k) for k in keys if hasattr(args, k)})

    def hasOptions(self) -> bool:
        """
        Tells if all the options the user must supply are set

        :return: True if the command can be executed, False otherwise

        """
        return all(v is not None for v in self.getOptions().values())
