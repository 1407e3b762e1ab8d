"""Exception types shared across the package."""


class CapabilityError(RuntimeError):
    """Requested size lies outside what exhaustive methods here can handle."""


class PreconditionError(ValueError):
    """An operation was called with arguments violating its contract."""


class ValidationError(ValueError):
    """A construction's side conditions do not hold.

    ``clause`` names the violated condition so callers can report it.
    """

    def __init__(self, clause, message):
        super().__init__(f"{clause}: {message}")
        self.clause = clause


class CertificateError(ValueError):
    """A certificate document is malformed or inconsistent.

    ``code`` is one of ``syntax``, ``dimension``, ``negative-diagonal``,
    ``negative-coefficient``, ``unknown-graph``, ``index-map``.
    """

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code
