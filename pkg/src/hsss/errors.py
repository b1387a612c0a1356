"""Exception hierarchy shared by every module."""


class HSSSError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(HSSSError, ValueError):
    pass


class ForeignParticipantError(HSSSError, KeyError):
    """A participant id that the group assignment does not know."""

    def __init__(self, participant):
        self.participant = participant
        super().__init__(f"unknown participant {participant!r}")

    def __str__(self):
        return self.args[0]


class InvalidShareError(HSSSError):
    def __init__(self, participant):
        self.participant = participant
        super().__init__(f"share submitted by {participant} is not in g*")


class InsufficientSharesError(HSSSError):
    def __init__(self, count, required):
        self.count = count
        self.required = required
        super().__init__(f"insufficient distinct shares: got {count}, need {required}")


class ExcessSharesError(HSSSError):
    def __init__(self, count, required):
        self.count = count
        self.required = required
        super().__init__(f"too many distinct shares: got {count}, expected {required}")


class UnknownSecretIndex(HSSSError, IndexError):
    pass


class BasisIndexError(HSSSError, IndexError):
    pass


class RefreshRefused(HSSSError):
    pass


class VaultAuthenticationError(HSSSError):
    pass


class FormatError(HSSSError, ValueError):
    """A file does not follow its text format or carries the wrong version."""


class EpochMismatchError(HSSSError):
    def __init__(self, **epochs):
        self.epochs = epochs
        detail = ", ".join(f"{k}={v}" for k, v in epochs.items())
        super().__init__(f"epoch mismatch ({detail})")
