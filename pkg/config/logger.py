import logging

from pprint import pformat

from pythonjsonlogger import jsonlogger

from config.config import LOG_FORMAT, DEBUG_FLAG


class Logger:
    """
    Module logger accepting structured messages.

    Dicts and other objects are pretty-printed in text mode. With
    ``AMO_LAB_LOG_FORMAT=json`` every record becomes one JSON object and dict
    messages are merged into it as fields.

    Attributes
    ----------
    __logger : logging.Logger
        The underlying logger instance.

    Methods
    -------
    info(message), debug(message), warning(message), error(message)
        Log `message` at the given level.
    get_name()
        Returns the name of the logger.
    """

    class __PrettyFormatter(logging.Formatter):
        """Strips surrounding whitespace from every line of a multi-line message."""

        def formatMessage(self, record):
            record.message = "\n".join(map(str.strip, record.message.splitlines()))
            return super().formatMessage(record)

    __logger: logging.Logger

    def __init__(self, name: str, level=None) -> None:
        """
        Parameters
        ----------
        name : str
            The name of the logger.
        level : int, optional
            Logging level; DEBUG when `AMO_LAB_DEBUG` is set, INFO otherwise.
        """

        self.__logger = logging.getLogger(name)
        self.__logger.setLevel(level if level is not None else (logging.DEBUG if DEBUG_FLAG else logging.INFO))
        self.__logger.propagate = False
        if not self.__logger.handlers:
            console_handler = logging.StreamHandler()
            if LOG_FORMAT == "json":
                console_handler.setFormatter(jsonlogger.JsonFormatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
            else:
                console_handler.setFormatter(self.__PrettyFormatter("[%(levelname)s] %(name)s: %(message)s"))
            self.__logger.addHandler(console_handler)

    def __emit(self, level: int, message) -> None:
        if not self.__logger.isEnabledFor(level):
            return
        if LOG_FORMAT == "json":
            self.__logger.log(level, message if isinstance(message, (str, dict)) else repr(message))
        else:
            self.__logger.log(level, message if isinstance(message, str) else pformat(message, sort_dicts=False))

    def info(self, message) -> None:
        self.__emit(logging.INFO, message)

    def debug(self, message) -> None:
        self.__emit(logging.DEBUG, message)

    def warning(self, message) -> None:
        self.__emit(logging.WARNING, message)

    def error(self, message) -> None:
        self.__emit(logging.ERROR, message)

    def get_name(self) -> str:
        return self.__logger.name


if __name__ == '__main__':
    raise SystemExit("Cannot run this file.")
