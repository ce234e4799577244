"""Shared exception types."""


class InputFormatError(ValueError):
    """A JSON document does not match the documented file layout."""


class SignatureMismatchError(ValueError):
    """A structure's signature does not fit the requested kind."""


class UnboundVariableError(LookupError):
    """An equation mentions a variable the system does not declare."""


class InvalidCertificateError(ValueError):
    """A certificate does not re-verify against the structure it claims to describe."""
