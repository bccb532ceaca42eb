"""Exception types raised across the toolkit.

All errors derive from :class:`TTNError` so callers (and the CLI) can catch
one base class. Parsers re-raise model errors with the input line number
prepended to the message, preserving the concrete type.
"""


class TTNError(Exception):
    """Base class for all toolkit errors."""


class DuplicateMessageId(TTNError):
    pass


class UnknownMessage(TTNError):
    pass


class TimeOrderViolation(TTNError):
    """A message was received before it was produced."""


class DuplicateRecipient(TTNError):
    pass


class SelfLink(TTNError):
    pass


class RepostTimeViolation(TTNError):
    """A repost points at a message produced after the repost itself."""


class NoRecipients(TTNError):
    pass


class MalformedRecord(TTNError):
    pass


class UnknownRetweetTarget(TTNError):
    pass


class BadCutpoints(TTNError):
    pass


class EmptyKeywordList(TTNError):
    pass


class BadWidth(TTNError):
    pass


class UncoveredMessage(TTNError):
    pass


class BadK(TTNError):
    pass


class AsymmetricMatrix(TTNError):
    pass


class EmptyNetwork(TTNError):
    pass
