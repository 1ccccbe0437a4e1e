import logging
from pathlib import Path
from typing import Dict, List, Optional

from config import LoggingConfig, config


class LoggerManager:
    """Per-module loggers sharing one console handler and one run log file.

    Handler settings come from the ``logging`` configuration section; ``configure``
    re-applies them to every logger already handed out.
    """

    _loggers: Dict[str, logging.Logger] = {}
    _handlers: List[logging.Handler] = []
    _settings: Optional[LoggingConfig] = None

    @classmethod
    def _build_handlers(cls, settings: LoggingConfig) -> List[logging.Handler]:
        formatter = logging.Formatter(settings.format, datefmt=settings.date_format)

        console_handler = logging.StreamHandler()
        console_handler.setLevel(logging.INFO)
        console_handler.setFormatter(formatter)

        log_dir = Path(settings.directory)
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_dir / settings.file, encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(
            logging.Formatter(
                settings.format.replace("%(name)s", "%(name)s:%(lineno)d"), datefmt=settings.date_format
            )
        )
        return [console_handler, file_handler]

    @classmethod
    def _ensure_handlers(cls) -> None:
        if cls._settings is None:
            cls._settings = config.logging
            cls._handlers = cls._build_handlers(cls._settings)

    @classmethod
    def get_logger(cls, name: str, log_level: Optional[str] = None) -> logging.Logger:
        if name in cls._loggers:
            return cls._loggers[name]

        cls._ensure_handlers()
        logger = logging.getLogger(name)
        level = log_level or cls._settings.level
        logger.setLevel(getattr(logging, level.upper(), logging.INFO))

        # Prevent duplicate handlers
        if not logger.handlers:
            for handler in cls._handlers:
                logger.addHandler(handler)

        cls._loggers[name] = logger
        return logger

    @classmethod
    def configure(cls, settings: Optional[LoggingConfig] = None, level: Optional[str] = None) -> None:
        """Rebuild the handlers from ``settings`` and apply ``level`` (or the configured one) everywhere."""
        settings = settings or config.logging
        old_handlers = cls._handlers
        cls._settings = settings
        cls._handlers = cls._build_handlers(settings)
        numeric = getattr(logging, (level or settings.level).upper(), logging.INFO)
        for logger in cls._loggers.values():
            for handler in old_handlers:
                logger.removeHandler(handler)
            for handler in cls._handlers:
                logger.addHandler(handler)
            logger.setLevel(numeric)
        for handler in old_handlers:
            handler.close()


def get_logger(name: str) -> logging.Logger:
    return LoggerManager.get_logger(name)
