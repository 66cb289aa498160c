"""Exception types.  Failures carry the certificate that proves them."""


class LvmbError(ValueError):
    """Invalid input or violated precondition."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NotLvmbError(LvmbError):
    """An operation required an LVMB datum and did not get one."""


class NotInjectiveError(LvmbError):
    """The quotient map is not injective on the support of the fan."""


class NotCompleteError(LvmbError):
    """A fan (or projected fan) fails the completeness test."""


class InternalInconsistency(RuntimeError):
    """Two independent checks disagreed; indicates a bug, never bad data."""

    def __init__(self, message, certificates=None):
        super().__init__(message)
        self.certificates = certificates
