import logging
import sys

from cdislogging import get_logger

from agreetest.config import config
from agreetest.settings import CONFIG_FILE_NAME, CONFIG_SEARCH_FOLDERS

__version__ = "0.3.1"

logger = get_logger(__name__)

# loggers whose console handlers configure_logging owns
LOGGER_ROOTS = ("agreetest", "gen3config")


def load_config(config_path=None, file_name=None, search=False):
    """
    Overlay a user configuration file on top of the defaults.

    Args:
        config_path (str): explicit path to a yaml config file
        file_name (str): file name to look for in CONFIG_SEARCH_FOLDERS
        search (bool): look in CONFIG_SEARCH_FOLDERS when no path is given

    Return:
        None
    """
    if config_path:
        logger.info("Loading configuration from {}".format(config_path))
        config.load(config_path=config_path)
    elif search:
        try:
            config.load(
                search_folders=CONFIG_SEARCH_FOLDERS,
                file_name=file_name or CONFIG_FILE_NAME,
            )
        except Exception as exc:
            # no user config anywhere, the defaults stay in place
            logger.debug("No user configuration loaded: {}".format(exc))
    configure_logging(debug=config["DEBUG"])


def configure_logging(debug=False, quiet=False):
    """
    Set the level of every package logger created so far and send their
    console output to stderr. stdout carries the JSON reports and CSV rows.
    """
    if quiet:
        level = "warning"
    elif debug:
        level = "debug"
    else:
        level = "info"
    for name in list(logging.Logger.manager.loggerDict):
        if name.split(".")[0] not in LOGGER_ROOTS:
            continue
        package_logger = get_logger(name, log_level=level)
        for handler in package_logger.handlers:
            # FileHandler is a StreamHandler too; leave log files alone
            if isinstance(handler, logging.StreamHandler) and not isinstance(
                handler, logging.FileHandler
            ):
                handler.setStream(sys.stderr)
    return level
