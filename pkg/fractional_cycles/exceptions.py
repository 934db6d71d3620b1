import frappe

# Exception classes carry the status code the API layer reports for them.
# ValidationError-like errors are input problems (CLI exit 1), DomainRefusal
# subclasses are well-formed requests the mathematics refuses (CLI exit 2).


class FractionalCyclesError(Exception):
    http_status_code = 500


class ValidationError(FractionalCyclesError, frappe.ValidationError):
    http_status_code = 400


class DoesNotExistError(ValidationError, frappe.DoesNotExistError):
    http_status_code = 404


class NotAWalkError(ValidationError):
    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class TransporterValidationError(ValidationError):
    def __init__(self, message, prop, index=None):
        super().__init__(message)
        self.prop = prop
        self.index = index


class DomainRefusal(FractionalCyclesError, frappe.ValidationError):
    http_status_code = 422

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class GenerationError(DomainRefusal):
    pass


class SamplingError(DomainRefusal):
    pass


class CertificationError(DomainRefusal):
    pass


class TransportError(DomainRefusal):
    def __init__(self, message, pair=None, diagnostics=None):
        super().__init__(message, diagnostics)
        self.pair = pair


class PipelineAbort(DomainRefusal):
    def __init__(self, message, pair=None, diagnostics=None):
        super().__init__(message, diagnostics)
        self.pair = pair


class InfeasibleError(DomainRefusal):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
