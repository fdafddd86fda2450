# core/logger.py

import logging
import os
import sys
from datetime import datetime
from typing import Optional


class Logger:
    """
    Centralized logging system for osmoflow
    One named logger per component channel, optional dated log files
    """

    CHANNELS = ('ontology', 'workflow', 'ttl', 'scheduler', 'perf', 'eos', 'crash')

    def __init__(self, logs_dir: Optional[str] = None, echo: bool = False):
        self.logs_dir = logs_dir
        self.echo = echo
        self.loggers = {}
        self.log_files = {}

        if self.logs_dir and not os.path.exists(self.logs_dir):
            os.makedirs(self.logs_dir)

        self._setup_loggers()

    def _setup_loggers(self):
        """Set up loggers for different components"""
        date_str = datetime.now().strftime('%Y%m%d')

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        for name in self.CHANNELS:
            # Unregistered: each Logger owns its handlers and nothing stays in logging.root.manager
            logger = logging.Logger(f"osmoflow.{name}")
            logger.setLevel(logging.DEBUG)
            logger.propagate = False

            if self.logs_dir:
                filename = f"crash_log_{date_str}.log" if name == 'crash' else f"{name}_debug_{date_str}.log"
                file_path = os.path.join(self.logs_dir, filename)
                file_handler = logging.FileHandler(file_path, encoding='utf-8')
                file_handler.setLevel(logging.DEBUG)
                file_handler.setFormatter(formatter)
                logger.addHandler(file_handler)
                self.log_files[name] = file_path

            if self.echo:
                stream_handler = logging.StreamHandler(sys.stderr)
                stream_handler.setLevel(logging.INFO)
                stream_handler.setFormatter(logging.Formatter('%(message)s'))
                logger.addHandler(stream_handler)

            if not logger.handlers:
                logger.addHandler(logging.NullHandler())

            self.loggers[name] = logger

    def get_logger(self, name: str) -> logging.Logger:
        """Get logger by name"""
        return self.loggers.get(name, self.loggers['crash'])

    def close(self):
        """Release file handles"""
        for logger in self.loggers.values():
            for handler in list(logger.handlers):
                handler.close()
                logger.removeHandler(handler)

    def log_crash(self, error: Exception, context: str = ""):
        """Log crash to dedicated crash log"""
        self.loggers['crash'].error(f"CRASH - {context}: {error}", exc_info=error)

    def ontology(self, message: str):
        """Log vocabulary store activity"""
        self.loggers['ontology'].info(message)

    def workflow(self, message: str):
        """Log workflow graph activity"""
        self.loggers['workflow'].info(message)

    def ttl(self, message: str):
        """Log TTL parsing and mapping"""
        self.loggers['ttl'].info(message)

    def scheduler(self, message: str):
        """Log workflow manager activity"""
        self.loggers['scheduler'].info(message)

    def perf(self, message: str):
        """Log performance provider activity"""
        self.loggers['perf'].info(message)

    def eos(self, message: str):
        """Log EOS campaign activity"""
        self.loggers['eos'].info(message)

    def debug(self, channel: str, message: str):
        self.get_logger(channel).debug(message)

    def warning(self, channel: str, message: str):
        """Log a warning on a component channel"""
        self.get_logger(channel).warning(f"⚠️ {message}")

    def crash(self, message: str):
        """Log errors and crashes"""
        self.loggers['crash'].error(f"ERROR: {message}")


_default_logger = None


def get_default_logger() -> Logger:
    """Quiet console-less logger shared by components created without one"""
    global _default_logger
    if _default_logger is None:
        _default_logger = Logger()
    return _default_logger
