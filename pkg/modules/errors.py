# modules/errors.py


class HyperspaceError(Exception):
    """Base class for every error raised by the library"""


class MalformedInputError(HyperspaceError, ValueError):
    """Input file, JSON document or argument that cannot be parsed"""


class IndexOutOfRangeError(HyperspaceError, IndexError):
    """Element or relation index outside the structure"""


class GroundSetMismatchError(HyperspaceError, ValueError):
    """Set system ground set does not match the relation index set"""


class PartialColoringError(HyperspaceError, ValueError):
    """Coloring does not cover the carrier or uses an invalid color"""


class EnumerationRepeatError(HyperspaceError):
    """A stream enumeration produced the same element twice"""


class ProfileMissingError(HyperspaceError):
    """Declared profile lacks the full index set required by the greedy coloring"""


class GeneralPositionError(HyperspaceError):
    """Spray centers are not in general position"""


class UnverifiedWitnessError(HyperspaceError):
    """A morphism witness failed its checker"""


class SearchTooLargeError(HyperspaceError):
    """Exhaustive procedure refused because the instance is too large"""


class ConfigurationError(HyperspaceError):
    """Environment variable with an unusable value"""


class IdentityRefutedError(HyperspaceError):
    """A checked identity produced a counterexample"""

    def __init__(self, suite: str, counterexample):
        super().__init__(f"{suite}: counterexample {counterexample}")
        self.suite = suite
        self.counterexample = counterexample


class IndeterminateError(HyperspaceError):
    """Search budget exhausted before an answer was reached"""
