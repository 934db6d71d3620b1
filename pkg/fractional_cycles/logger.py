import logging

import frappe

ROOT = "fractional_cycles"


def get_logger(module=None):
    """Package logger from frappe's factory, e.g. ``get_logger("transitions")``.

    Handlers write to stderr only, so command output on stdout stays byte-stable.
    """
    name = f"{ROOT}.{module}" if module else ROOT
    return frappe.logger(name, stream_only=True)


def get_traceback():
    return frappe.get_traceback()


def log_error(message=None, title=None):
    """Record an unexpected failure, usually ``log_error(get_traceback(), "Title")``."""
    get_logger("errors").error("%s\n%s", title or "Error", message or "")


def configure(level="WARNING"):
    """Set the level of every package logger, including ones created later."""
    level = getattr(logging, str(level).upper(), logging.WARNING)
    frappe.log_level = level
    for name, logger in frappe.loggers.items():
        if name.startswith(ROOT):
            logger.setLevel(level)
    return level
