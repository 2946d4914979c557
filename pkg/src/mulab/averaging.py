"""Cesaro and logarithmic averages over interval schemes.

Intervals are integer pairs (a, b] standing for {a+1, ..., b}; a scheme is
an ordered family of such intervals together with the averaging kind, the
finite stand-in for a Folner sequence of intervals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .errors import ConfigError, IntervalOutOfBlock
from .seqgen import COMPLEX_PAIR, SequenceBlock

CESARO = "cesaro"
LOG = "log"


@dataclass(frozen=True)
class IntervalScheme:
    """Ordered intervals (a_k, b_k] with an averaging kind.

    Folner-style growth conditions are checked by folner_check, not at
    construction, so that degenerate schemes can be built and diagnosed.
    """

    intervals: tuple
    kind: str = CESARO

    def __post_init__(self):
        if not self.intervals:
            raise ConfigError("interval scheme must be nonempty")
        if self.kind not in (CESARO, LOG):
            raise ConfigError(f"averaging kind must be cesaro or log, got {self.kind!r}")
        for a, b in self.intervals:
            if not (0 <= a < b):
                raise ConfigError(f"bad interval ({a}, {b}]: need 0 <= a < b")

    @classmethod
    def prefixes(cls, ends, kind: str = CESARO) -> "IntervalScheme":
        """Scheme of prefix intervals [N] = (0, N] for N in ends."""
        return cls(tuple((0, int(n)) for n in ends), kind)

    @classmethod
    def single(cls, a: int, b: int, kind: str = CESARO) -> "IntervalScheme":
        return cls(((int(a), int(b)),), kind)

    @classmethod
    def from_rule(cls, base: float, ratio: float, count: int,
                  kind: str = CESARO) -> "IntervalScheme":
        ends = [int(base * ratio**k) for k in range(count)]
        if any(e2 <= e1 for e1, e2 in zip(ends, ends[1:])) or ends[0] < 1:
            raise ConfigError("prefix rule must produce strictly increasing ends")
        return cls.prefixes(ends, kind)

    @classmethod
    def from_json(cls, text: str, kind: str = CESARO) -> "IntervalScheme":
        """JSON list of [a, b] pairs or {"rule": "prefix", base, ratio, count}."""
        obj = json.loads(text)
        if isinstance(obj, dict):
            if obj.get("rule") != "prefix":
                raise ConfigError(f"unknown scheme rule {obj.get('rule')!r}")
            return cls.from_rule(obj["base"], obj["ratio"], obj["count"], kind)
        return cls(tuple((int(a), int(b)) for a, b in obj), kind)

    @property
    def last(self):
        return self.intervals[-1]

    def __iter__(self):
        return iter(self.intervals)


@dataclass(frozen=True)
class MeanReport:
    """Per-interval means, the last mean as extrapolation, and the maximum
    successive jump as a finite-scale stability defect."""

    per_interval: tuple
    extrapolated: complex
    stability_defect: float


@dataclass(frozen=True)
class FolnerReport:
    valid: bool
    witness: int | None
    ratio: float


def _require_inside(block: SequenceBlock, interval) -> None:
    a, b = interval
    if not block.covers(a + 1, b + 1):
        raise IntervalOutOfBlock(
            f"interval ({a}, {b}] not inside block [{block.start}, {block.end})")


def cesaro_avg(block: SequenceBlock, interval) -> complex:
    """(1/|A|) sum_{n in A} a(n) on A = (a, b]; exact integer sum for signs."""
    _require_inside(block, interval)
    a, b = interval
    vals = block.slice_values(a + 1, b + 1)
    if block.storage == COMPLEX_PAIR:
        return K.kahan_sum_complex(vals) / (b - a)
    return complex(int(np.sum(vals, dtype=np.int64))) / (b - a)


@lru_cache(maxsize=4096)
def harmonic_mass(a: int, b: int) -> float:
    """sum_{n=a+1}^{b} 1/n with compensated summation."""
    return K.harmonic_mass(a + 1, b - a)


def log_avg(block: SequenceBlock, interval) -> complex:
    """(1 / sum 1/n) * sum a(n)/n on (a, b]."""
    _require_inside(block, interval)
    a, b = interval
    vals = block.slice_values(a + 1, b + 1)
    if block.storage == COMPLEX_PAIR:
        num = K.weighted_inv_sum_complex(vals, a + 1)
    else:
        num = complex(K.weighted_inv_sum_i8(vals, a + 1))
    return num / harmonic_mass(a, b)


def interval_avg(block: SequenceBlock, interval, kind: str) -> complex:
    return cesaro_avg(block, interval) if kind == CESARO else log_avg(block, interval)


def folner_check(scheme: IntervalScheme, threshold: float = 10.0) -> FolnerReport:
    """Finite-scale Folner validity.

    cesaro: lengths strictly increasing and last/first length >= threshold.
    log: b_k / max(a_k, 1) increasing and the final ratio >= threshold.
    Returns the first offending index as witness.
    """
    iv = scheme.intervals
    if scheme.kind == CESARO:
        lengths = [b - a for a, b in iv]
        for k in range(1, len(lengths)):
            if lengths[k] <= lengths[k - 1]:
                return FolnerReport(False, k, lengths[-1] / lengths[0])
        ratio = lengths[-1] / lengths[0]
        if len(iv) > 1 and ratio < threshold:
            return FolnerReport(False, len(iv) - 1, ratio)
        return FolnerReport(True, None, ratio)
    ratios = [b / max(a, 1) for a, b in iv]
    for k in range(1, len(ratios)):
        if ratios[k] <= ratios[k - 1]:
            return FolnerReport(False, k, ratios[-1])
    if len(iv) > 1 and ratios[-1] < threshold:
        return FolnerReport(False, len(iv) - 1, ratios[-1])
    return FolnerReport(True, None, ratios[-1])


def mean_stability(block: SequenceBlock, scheme: IntervalScheme) -> MeanReport:
    """Per-interval means plus the max successive-difference defect."""
    means = tuple(interval_avg(block, iv, scheme.kind) for iv in scheme)
    defect = max((abs(m2 - m1) for m1, m2 in zip(means, means[1:])), default=0.0)
    return MeanReport(means, means[-1], float(defect))
