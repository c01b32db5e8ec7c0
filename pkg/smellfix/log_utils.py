import sys

from loguru import logger

_LEVELS = ('WARNING', 'INFO', 'DEBUG')

LOG_FORMAT = '<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {name}:{line} - {message}'


def level_for_verbosity(verbosity):
    return _LEVELS[max(0, min(verbosity, len(_LEVELS) - 1))]


def configure_logging(verbosity=0, log_file=None):
    """Routes loguru output to stderr and, optionally, to a run log file."""
    logger.remove()
    level = level_for_verbosity(verbosity)
    logger.add(sys.stderr, level=level, format=LOG_FORMAT)
    if log_file:
        logger.add(str(log_file), level='DEBUG', format=LOG_FORMAT, encoding='utf-8')
    return level
