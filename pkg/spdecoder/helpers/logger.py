import logging
import os

from spdecoder.helpers import settings

HIGHLIGHT_LEVEL_NUM = 25
logging.addLevelName(HIGHLIGHT_LEVEL_NUM, 'HIGHLIGHT')


class SimLogger(logging.Logger):
    """Logger class with an extra level for run results"""
    def highlight(self, message, *args, **kws):
        """Custom logger level name highlight

        Used for the finished FER points, so the highlight file reads as the
        summary of a sweep.
        """
        self.log(HIGHLIGHT_LEVEL_NUM, message, *args, **kws)


class SingleLevelClassFilter(logging.Filter):
    """Logging filter letting through (or rejecting) a single level"""
    def __init__(self, level, reject):
        """
        :param int level: The level number to filter on
        :param bool reject: Rejects the level if True, keeps only the level if False
        """
        super().__init__()
        self.level = level
        self.reject = reject

    def filter(self, record):
        if self.reject:
            return record.levelno != self.level
        return record.levelno == self.level


def logger():
    """Logger to log messages to console and to files

    This logger creates two files, named in the LOGGING settings section:
    log_file: Contains all logging level logs
    highlight_file: Contains only highlight level logs, i.e. one line per
    simulated operating point

    :returns object log: Logger object to log different logging levels
    """
    logging.setLoggerClass(SimLogger)
    log = logging.getLogger('spdecoder')
    logging.setLoggerClass(logging.Logger)
    if not log.handlers:
        logfile_path = os.path.abspath(settings.logging.log_file)
        highlight_path = os.path.abspath(settings.logging.highlight_file)
        formatter = logging.Formatter('%(asctime)s %(levelname)s %(message)s')
        hdlr = logging.FileHandler(logfile_path, delay=True)
        hdlr.setFormatter(formatter)
        hdlr2 = logging.FileHandler(highlight_path, delay=True)
        hdlr2.setFormatter(formatter)
        hdlr2.addFilter(SingleLevelClassFilter(HIGHLIGHT_LEVEL_NUM, False))
        ch = logging.StreamHandler()
        ch.setFormatter(formatter)
        log.addHandler(hdlr)
        log.addHandler(hdlr2)
        log.addHandler(ch)
        log.setLevel(settings.logging.level)
    return log
