"""Exception hierarchy.

Every computational failure raised by the library derives from
:class:`RiglabError`; configuration problems raise :class:`ConfigError`.
The CLI maps the first family to exit code 3 and the second to exit code 2.
"""

from __future__ import annotations


class RiglabError(Exception):
    """Base class for computational errors."""


class ConfigError(ValueError):
    """A configuration document or flag is malformed.

    ``field`` names the offending key so the CLI can report it.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# seq
class NonIncreasing(RiglabError):
    pass


class RuleDomain(RiglabError):
    pass


# cfrac
class OutOfRange(RiglabError):
    pass


class PrecisionExhausted(RiglabError):
    pass


# ipset
class IndexOutOfPrefix(RiglabError):
    pass


class PrefixTooShort(RiglabError):
    pass


class Infeasible(RiglabError):
    pass


class WindowTooWide(RiglabError):
    pass


# gp
class NotMultiplicative(RiglabError):
    pass


class RatioConditionFailed(RiglabError):
    pass


class GapTooSmall(RiglabError):
    pass


class IntegerT(RiglabError):
    pass


class DichotomyViolation(RiglabError):
    """Raised if the Erdos-Taylor dichotomy premise holds but the conclusion fails."""


# rankone
class BaseNotOne(RiglabError):
    pass


class CutTooSmall(RiglabError):
    pass


class WordTooLarge(RiglabError):
    pass


class NoSpacerStageAhead(RiglabError):
    pass


# measure
class TailNotSummable(RiglabError):
    pass


class DepthTooLarge(RiglabError):
    pass


class DepthInsufficient(RiglabError):
    pass


# odometer
class Overflow(RiglabError):
    pass


class DepthTooSmall(RiglabError):
    pass
