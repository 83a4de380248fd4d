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

from microCal.diagnostics.samplers import Sampler, PriorSampler, ShrunkSampler
from microCal.diagnostics.posterior import posteriorSample, truthDensityCheck, TruthCheck, posteriorSummary, \
    PosteriorSummary
from microCal.diagnostics.corner import CornerData, cornerData
from microCal.diagnostics.sbc import SbcResult, sbc, rankUniformity
from microCal.diagnostics.ppc import DEFAULT_SUMMARIES, PpcResult, PpcSummary, ppc, meanOpinion, meanAbsTie, \
    polarization
