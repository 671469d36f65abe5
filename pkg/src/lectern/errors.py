"""Shared exception types.

Every error the service maps to an HTTP status lives here so the route
layer can translate by isinstance checks instead of string matching.
"""

from __future__ import annotations


class LecternError(Exception):
    """Base class; carries a short machine-readable code."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class EncodingError(LecternError):
    code = "bad-encoding"


class InvalidMediaType(LecternError):
    code = "invalid-media-type"


class TemplateParseError(LecternError):
    """Raised by the template-record parser; code names the violation."""


class QueryError(LecternError):
    """Raised by the query parser and by evaluators given unusable queries."""


class TypesetError(LecternError):
    code = "invalid-typeset-options"


class NotFoundError(LecternError):
    code = "not-found"


class StorageError(LecternError):
    code = "storage"


class LockBusyError(StorageError):
    code = "writer-busy"


class AuthError(LecternError):
    code = "auth"


class TokenError(AuthError):
    code = "invalid-token"


class ReadOnlyError(LecternError):
    code = "published-read-only"


class AnnotationTooLarge(LecternError):
    code = "annotation-too-large"


class NameTakenError(LecternError):
    code = "name-taken"


class PolicyRejectedError(LecternError):
    code = "policy-rejected"

    def __init__(self, reasons: list[str]):
        super().__init__("rejected by collection policy: " + ", ".join(reasons))
        self.reasons = reasons


class RecordInvalidError(LecternError):
    code = "record-invalid"

    def __init__(self, violations):
        super().__init__(
            "record failed validation: "
            + "; ".join(f"{v.field}: {v.code}" for v in violations)
        )
        self.violations = violations


class EmptyCollectionError(LecternError):
    code = "empty-collection"


class ConfigError(LecternError):
    code = "config"


# -- fetch errors ------------------------------------------------------------

class FetchError(LecternError):
    code = "fetch"


class UnsupportedSchemeError(FetchError):
    code = "unsupported-scheme"


class NetworkError(FetchError):
    code = "network"


class FetchTimeout(FetchError):
    code = "timeout"


class HttpStatusError(FetchError):
    code = "http-status"

    def __init__(self, status: int, url: str):
        super().__init__(f"{url} answered {status}")
        self.status = status
        self.url = url


class RedirectLimitError(FetchError):
    code = "redirect-limit"


class RedirectLoopError(FetchError):
    code = "redirect-loop"


class RobotsDisallowedError(FetchError):
    code = "robots-disallowed"
