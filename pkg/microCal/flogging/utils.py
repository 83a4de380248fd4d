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

import datetime
import logging
import os
import sys

import prettytable as pt

LEVEL = logging.DEBUG
INFO = logging.INFO
LOG_FOLDER = 'logs'
# Contains path of current file log
LOG_PATH = ''


def _logFolder(folder: str, root: str = None) -> str:
    path = os.path.join(root if root else os.path.join(os.getcwd(), LOG_FOLDER), folder)
    if not os.path.exists(path):
        os.makedirs(path)
    return path


def setUpRootLogger(root: str = None) -> None:
    """ Sets up a root logger with everything

    :param root: the folder holding all logs. Defaults to "logs" in the working directory

    """
    log_path = _logFolder('root', root)
    timestamp = datetime.datetime.now().strftime('%Y-%m-%d_%H.%M.%S.%f')
    global LOG_PATH
    LOG_PATH = os.path.join(log_path, timestamp + '.log')
    logging.basicConfig(filename=LOG_PATH, level=LEVEL,
                        filemode='w',
                        format='%(asctime)s:%(levelname)s:%(module)s.%(funcName)s:%(lineno)d:%('
                               'message)s')
    logging.info('Created log file in {}'.format(LOG_PATH))


def setUpLogger(name: str, folder: str, fmt: str, level: int, root: str = None) -> logging.Logger:
    """
    Creates a logger with specified name, format and level in folder

    :param name: log name
    :param folder: the name of the folder (not path). Path will be "{root}/{folder}"
    :param fmt: format as for logging
    :param level: level as for logging
    :param root: the folder holding all logs. Defaults to "logs" in the working directory

    :return: the created logger

    """
    log_path = _logFolder(folder, root)
    timestamp = datetime.datetime.now().strftime('%Y-%m-%d_%H.%M.%S.%f')
    log_path = os.path.join(log_path, timestamp + '.log')
    handler = logging.FileHandler(log_path)
    formatter = logging.Formatter(fmt)
    handler.setFormatter(formatter)

    logger = logging.getLogger(name)
    logger.setLevel(level)
    logger.addHandler(handler)
    logger.info('Created log file "{}"'.format(name))

    return logger


def setUpConsole(name: str = 'app', level: int = logging.WARNING) -> None:
    """ Mirror messages of a logger with at least 'level' severity to stderr """
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    logging.getLogger(name).addHandler(handler)


def _table(fieldNames) -> pt.PrettyTable:
    tt = pt.PrettyTable(field_names=fieldNames)
    tt.float_format = '.4'
    return tt


def logCorpusInfo(corpus) -> str:
    """ Returns a table describing a corpus: its size, the simulation shape and the range of the
    sampled parameters """
    cfg = corpus.simConfig
    tt = _table(['N Sims', 'N Agents', 'N Topics', 'N Steps', 'Seed'])
    tt.add_row([len(corpus), cfg.nAgents, cfg.nTopics, cfg.nSteps, corpus.seed])
    out = tt.get_string(border=True, vrules=pt.ALL).strip()
    if len(corpus):
        thetas = corpus.thetaArray()
        rt = _table(['Parameter', 'Min', 'Mean', 'Max'])
        for name, col in zip(corpus.paramNames, thetas.T):
            rt.add_row([name, col.min(), col.mean(), col.max()])
        out += '\n' + rt.get_string(border=True, vrules=pt.ALL).strip()
    return out


def logEpoch(epoch: int, trainLoss: float, valLoss: float, best: bool) -> str:
    """ One line for the epoch log """
    return 'epoch {:4d} | train {:>12.5f} | val {:>12.5f}{}'.format(
        epoch, trainLoss, valLoss, ' *' if best else '')


def logTrainHistory(report) -> str:
    """ Returns the training history as a table, marking the best validation epoch """
    tt = _table(['Epoch', 'Train loss', 'Validation loss', 'Best'])
    for epoch, val in enumerate(report.valLosses):
        train = report.trainLosses[epoch - 1] if epoch > 0 else float('nan')
        tt.add_row([epoch, train, val, '*' if epoch == report.bestEpoch else ''])
    summary = 'Stopped: {} | best epoch {} | best validation loss {:.5f}'.format(
        report.stopReason.value, report.bestEpoch, report.bestValLoss)
    return tt.get_string(border=True, vrules=pt.ALL).strip() + '\n' + summary


def logPosteriorSummary(summary) -> str:
    """ Returns per-parameter posterior statistics as a table """
    tt = _table(['Parameter', 'Mean', 'Std', 'Median', '2.5%', '97.5%', 'Truth', 'Truth inside'])
    for i, name in enumerate(summary.names):
        truth = summary.truth[i] if summary.truth is not None else ''
        inside = summary.inside[i] if summary.inside is not None else ''
        tt.add_row([name, summary.mean[i], summary.std[i], summary.median[i], summary.lower[i],
                    summary.upper[i], truth, inside])
    return tt.get_string(border=True, vrules=pt.ALL).strip()


def logSbcResult(result) -> str:
    """ Returns the per-dimension KS statistics of a simulation-based calibration run """
    tt = _table(['Parameter', 'KS statistic', 'p-value'])
    for name, ks, p in zip(result.names, result.ksStatistic, result.pValue):
        tt.add_row([name, ks, p])
    return tt.get_string(border=True, vrules=pt.ALL).strip()


def logPpcResult(result) -> str:
    """ Returns the observed summaries against their posterior predictive distribution """
    tt = _table(['Summary', 'Observed', '5%', '50%', '95%', 'Quantile of observed'])
    for s in result.summaries:
        tt.add_row([s.name, s.observed, s.q05, s.q50, s.q95, s.quantile])
    return tt.get_string(border=True, vrules=pt.ALL).strip()


def deleteOldLogs(keepLastN: int = 5, root: str = None) -> None:
    """ Delete older logs keeping the last N """
    logF = root if root else os.path.join(os.getcwd(), LOG_FOLDER)
    if not os.path.isdir(logF):
        return
    subDirs = next(os.walk(logF))[1]
    for subDir in subDirs:
        for path, _, files in os.walk(os.path.join(logF, subDir)):
            ascendingFiles = sorted(files)
            tn = len(ascendingFiles) - keepLastN
            for file in ascendingFiles[:max(tn, 0)]:
                os.remove(os.path.join(path, file))
