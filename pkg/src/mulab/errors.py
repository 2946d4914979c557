"""Exception hierarchy for mulab.

Every error the library raises deliberately derives from MulabError so the
CLI can map failures onto its two non-zero exit codes: config problems
(exit 2) versus coverage/budget problems discovered during compute (exit 3).
"""


class MulabError(Exception):
    """Base class for all mulab errors."""


class ConfigError(MulabError):
    """Invalid user-supplied configuration (CLI exit code 2)."""


class InvalidRange(ConfigError):
    """start >= end, start < 1, or otherwise malformed range."""


class RangeTooLarge(MulabError):
    """Requested range exceeds the configured memory budget (exit 3)."""


class IntervalOutOfBlock(MulabError):
    """An averaging interval is not contained in the block's range."""


class CoverageGap(MulabError):
    """A block is too short for the shifts/dilations a computation needs."""


class NonsignValues(MulabError):
    """Operation requires values in {-1,+1} but the block has others."""


class PatternLengthCap(ConfigError):
    """Requested cylinder/pattern length exceeds the hard cap (20)."""


class BadCharacterIndex(ConfigError):
    """Dirichlet character index outside [0, phi(q))."""


class NonunitPrimeValue(ConfigError):
    """A prime value of modulus != 1 where complete multiplicativity needs 1."""


class MethodMismatch(ConfigError):
    """Norm evaluation method incompatible with the requested order s."""


class CostGuardExceeded(MulabError):
    """Work estimate for an exact evaluation exceeds the configured guard."""


class InsufficientPrimes(ConfigError):
    """Fewer than two primes below the bilinear-criterion cutoff K."""


class BadWindow(ConfigError):
    """Correlation window parameters out of order (e.g. R > M)."""


class EmptyGrid(ConfigError):
    """A scan grid specification produced no evaluation points."""


class MismatchedSources(ConfigError):
    """Two empirical measures do not come from the same block/interval/kind."""


class ZeroFrequency(ConfigError):
    """The zero frequency vector was passed to an equidistribution test."""


class DegreeCap(ConfigError):
    """Polynomial phase degree exceeds the supported cap (8)."""


class CacheFormatError(MulabError):
    """A sequence cache file is corrupt or has the wrong magic/version."""
