import uuid

import frappe

from fractional_cycles import __version__
from fractional_cycles.exceptions import DomainRefusal, FractionalCyclesError
from fractional_cycles.logger import get_traceback, log_error
from fractional_cycles.utils import dumps

# fixed namespace so request ids depend only on the run configuration
REQUEST_NAMESPACE = uuid.UUID("6f1c3d52-2a8e-5b7f-9c41-0d2e8a7b5f13")


def request_id(config):
    return str(uuid.uuid5(REQUEST_NAMESPACE, dumps(config.to_dict())))


def meta(config):
    return frappe._dict(
        request_id=request_id(config),
        command=config.command,
        seed=config.seed,
        version=__version__,
    )


def success(config, data, message, code=200):
    return frappe._dict(data=data, status="success", code=code, message=message, meta=meta(config))


def error(config, exc, message, title=None):
    """Envelope for a failed command; unexpected exceptions are logged with their traceback."""
    if isinstance(exc, FractionalCyclesError):
        code = exc.http_status_code
    else:
        code = 500
        log_error(get_traceback(), title or f"{config.command} failed")

    errors = frappe._dict(description=str(exc))
    if isinstance(exc, DomainRefusal):
        errors.type = type(exc).__name__
        if exc.diagnostics:
            errors.diagnostics = exc.diagnostics
        pair = getattr(exc, "pair", None)
        if pair is not None:
            errors.pair = [list(x) if isinstance(x, tuple) else x for x in pair]
        certificate = getattr(exc, "certificate", None)
        if certificate is not None:
            errors.certificate = certificate
    elif hasattr(exc, "prop"):
        errors.property = exc.prop
        errors.index = exc.index
    elif hasattr(exc, "index"):
        errors.index = exc.index

    return frappe._dict(
        data=None,
        status="error",
        code=code,
        message=message,
        errors=errors,
        meta=meta(config),
    )


def exit_code(response):
    code = response["code"]
    if code < 400:
        return 0
    if code == DomainRefusal.http_status_code:
        return 2
    return 1
