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

import importlib
import json
import os
from typing import Dict, Type

rootdir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Read command modules (only names)
with open(os.path.join(rootdir, 'config', 'commands.json'), 'r') as config:
    d = json.load(config)
    __all_modules__ = d['modules']


def commands() -> Dict[str, Type['Operation']]:
    """ Imports every command module and collects the classes of its 'export' by command name """
    found = dict()
    for moduleName in __all_modules__:
        module = importlib.import_module(moduleName)
        exported = getattr(module, 'export', tuple())
        if not isinstance(exported, (tuple, list)):
            exported = (exported,)
        for cls in exported:
            found[cls.name()] = cls
    return found
