"""
Configuración de logging compartida por la app Flask y la CLI.
"""
import logging
import os
import sys

VALID_LEVELS = {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}
LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


def resolve_log_level(default="INFO"):
    level = os.getenv("LOG_LEVEL", default).upper()
    if level not in VALID_LEVELS:
        level = default
    return level


def configure_logging(default="INFO", stream=None):
    """Nivel desde LOG_LEVEL; la CLI usa WARNING para no mezclar logs con la salida."""
    level = resolve_log_level(default)
    logging.basicConfig(
        level=getattr(logging, level),
        format=LOG_FORMAT,
        stream=stream or sys.stdout,
        force=True,
    )
    return level
