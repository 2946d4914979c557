"""Chowla/Elliott-type correlation averages, sign-pattern statistics, and
the bilinear orthogonality criterion table.

A correlation query is a list of terms (c_i, n_i, conj_i); its value on an
interval I under kind in {cesaro, log} is the average over m in I of
prod_i C^{conj_i} a_i(c_i m + n_i).  Queries with c_i n_j = c_j n_i for some
i != j are degenerate in the sense of the nondegeneracy condition for
Chowla-type statements; they are computed anyway and flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from . import parallel
from .averaging import CESARO, IntervalScheme, harmonic_mass
from .errors import (
    ConfigError,
    CoverageGap,
    InsufficientPrimes,
    NonsignValues,
    PatternLengthCap,
)
from .seqgen import COMPLEX_PAIR, SequenceBlock, primes_upto

PATTERN_CAP = 20


@dataclass(frozen=True)
class CorrelationTerm:
    dilation: int
    shift: int
    conjugate: bool = False

    def __post_init__(self):
        if self.dilation < 1:
            raise ConfigError(f"dilation must be >= 1, got {self.dilation}")
        if self.shift < 0:
            raise ConfigError(f"shift must be >= 0, got {self.shift}")


@dataclass(frozen=True)
class CorrelationQuery:
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ConfigError("correlation query needs at least one term")

    @classmethod
    def of(cls, *terms) -> "CorrelationQuery":
        """Terms as (dilation, shift) or (dilation, shift, conj) tuples."""
        return cls(tuple(CorrelationTerm(*t) for t in terms))

    @classmethod
    def shifts(cls, shifts, conj=None) -> "CorrelationQuery":
        """Pure shift query: dilations all 1."""
        conj = conj or [False] * len(shifts)
        return cls(tuple(CorrelationTerm(1, int(n), bool(c))
                         for n, c in zip(shifts, conj)))

    @property
    def degenerate(self) -> bool:
        t = self.terms
        return any(
            t[i].dilation * t[j].shift == t[j].dilation * t[i].shift
            for i in range(len(t)) for j in range(len(t)) if i != j)


@dataclass(frozen=True)
class CorrelationReport:
    per_interval: tuple
    extrapolated: complex
    stability_defect: float
    degenerate: bool


@dataclass(frozen=True)
class PatternStats:
    """Weights of length-ell sign words over one interval.

    Pattern index: bit j set <=> the symbol at offset j is -1, so index 0
    is the all-plus word.
    """

    ell: int
    kind: str
    interval: tuple
    weights: np.ndarray
    total_weight: float

    @property
    def frequencies(self) -> np.ndarray:
        return self.weights / self.total_weight

    def frequency_map(self) -> dict:
        f = self.frequencies
        return {pattern_string(c, self.ell): float(f[c]) for c in range(1 << self.ell)}


def pattern_string(code: int, ell: int) -> str:
    return "".join("-" if (code >> j) & 1 else "+" for j in range(ell))


@dataclass(frozen=True)
class KataiResult:
    max_value: float
    argmax: tuple
    table: tuple  # rows (p, q, M, abs_value)


def _term_blocks(blocks, query):
    if isinstance(blocks, SequenceBlock):
        return [blocks] * len(query.terms)
    blocks = list(blocks)
    if len(blocks) != len(query.terms):
        raise ConfigError(
            f"got {len(blocks)} blocks for {len(query.terms)} terms")
    return blocks


def correlation(blocks, query: CorrelationQuery, scheme: IntervalScheme,
                jobs: int = 1) -> CorrelationReport:
    """Per-interval correlation averages of the query under the scheme."""
    terms = query.terms
    tblocks = _term_blocks(blocks, query)
    for t, blk in zip(terms, tblocks):
        a, b = scheme.last
        lo = t.dilation * (a + 1) + t.shift
        hi = t.dilation * b + t.shift
        for a2, b2 in scheme:
            lo = min(lo, t.dilation * (a2 + 1) + t.shift)
            hi = max(hi, t.dilation * b2 + t.shift)
        if not blk.covers(lo, hi + 1):
            raise CoverageGap(
                f"term (c={t.dilation}, n={t.shift}) needs [{lo}, {hi}] but "
                f"block holds [{blk.start}, {blk.end})")

    all_sign = all(blk.storage != COMPLEX_PAIR for blk in tblocks)
    use_int = all_sign  # conjugation is a no-op on real +-1/0 data
    distinct = []
    offsets = []
    for blk in tblocks:
        for i, seen in enumerate(distinct):
            if seen is blk:
                offsets.append(i)
                break
        else:
            offsets.append(len(distinct))
            distinct.append(blk)
    if use_int:
        arrays = [blk.values for blk in distinct]
    else:
        arrays = [blk.complex_values() for blk in distinct]
    starts = np.cumsum([0] + [len(a) for a in arrays[:-1]])
    data = arrays[0] if len(arrays) == 1 else np.concatenate(arrays)
    bases = np.array(
        [starts[offsets[i]] + terms[i].shift - tblocks[i].start
         for i in range(len(terms))], dtype=np.int64)
    strides = np.array([t.dilation for t in terms], dtype=np.int64)
    conj = np.array([t.conjugate for t in terms], dtype=np.bool_)

    values = []
    for a, b in scheme:
        m0, m1 = a + 1, b + 1
        if scheme.kind == CESARO:
            if use_int:
                parts = parallel.chunked_map(
                    lambda lo, hi: K.corr_product_sum_i8(data, bases, strides, lo, hi),
                    m0, m1, jobs=jobs)
                total = sum(parts)
                values.append(complex(total) / (b - a))
            else:
                parts = parallel.chunked_map(
                    lambda lo, hi: K.corr_product_sum_complex(
                        data, bases, strides, conj, lo, hi),
                    m0, m1, jobs=jobs)
                values.append(complex(math.fsum(p.real for p in parts),
                                      math.fsum(p.imag for p in parts)) / (b - a))
        else:
            if use_int:
                parts = parallel.chunked_map(
                    lambda lo, hi: K.corr_product_logsum_i8(data, bases, strides, lo, hi),
                    m0, m1, jobs=jobs)
                num = complex(math.fsum(parts))
            else:
                parts = parallel.chunked_map(
                    lambda lo, hi: K.corr_product_logsum_complex(
                        data, bases, strides, conj, lo, hi),
                    m0, m1, jobs=jobs)
                num = complex(math.fsum(p.real for p in parts),
                              math.fsum(p.imag for p in parts))
            values.append(num / harmonic_mass(a, b))

    defect = max((abs(v2 - v1) for v1, v2 in zip(values, values[1:])), default=0.0)
    return CorrelationReport(tuple(values), values[-1], float(defect),
                             query.degenerate)


def pattern_densities(block: SequenceBlock, ell: int, scheme: IntervalScheme,
                      jobs: int = 1) -> PatternStats:
    """Cesaro or logarithmic weight of every length-ell sign word, read at
    positions n in the scheme's last interval."""
    if ell < 1 or ell > PATTERN_CAP:
        raise PatternLengthCap(f"pattern length {ell} not in [1, {PATTERN_CAP}]")
    if not block.is_sign_valued():
        raise NonsignValues("pattern statistics need values in {-1,+1}")
    a, b = scheme.last
    if not block.covers(a + 1, b + ell):
        raise CoverageGap(
            f"patterns on ({a}, {b}] with ell={ell} need block through {b + ell - 1}")
    i0 = a + 1 - block.start
    i1 = b + 1 - block.start
    if scheme.kind == CESARO:
        parts = parallel.chunked_map(
            lambda lo, hi: K.pattern_counts(block.values, lo, hi, ell),
            i0, i1, jobs=jobs)
        weights = np.sum(parts, axis=0).astype(np.float64)
    else:
        parts = parallel.chunked_map(
            lambda lo, hi: K.pattern_logweights(
                block.values, lo, hi, ell, block.start + lo),
            i0, i1, jobs=jobs)
        weights = parts[0]
        for p in parts[1:]:
            weights = weights + p
    total = float(math.fsum(weights.tolist()))
    weights.setflags(write=False)
    return PatternStats(ell, scheme.kind, (a, b), weights, total)


def katai_bilinear_max(block: SequenceBlock, n_max: int, k_cut: int,
                       jobs: int = 1) -> KataiResult:
    """max over primes 1 < p < q < K of |E_{n <= N/q} a(pn) conj(a(qn))|.

    The full (p, q) table is returned; ties resolve to the lexicographically
    smallest pair.
    """
    if k_cut < 3:
        raise InsufficientPrimes(f"K={k_cut} leaves no prime pair")
    primes = [int(p) for p in primes_upto(k_cut - 1)]
    if len(primes) < 2:
        raise InsufficientPrimes(f"fewer than two primes below K={k_cut}")
    if not block.covers(1, n_max + 1):
        raise CoverageGap(f"katai needs block covering [1, {n_max}]")
    data = block.complex_values()
    pairs = [(p, q) for i, p in enumerate(primes) for q in primes[i + 1:]]

    def one(pair):
        p, q = pair
        m = n_max // q
        s = K.katai_pair_complex(data, block.start, p, q, m)
        return (p, q, m, abs(s) / m)

    if jobs > 1 and len(pairs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(one, pairs))
    else:
        rows = [one(pair) for pair in pairs]
    best = max(range(len(rows)), key=lambda i: rows[i][3])
    # first index attaining the max = lexicographically smallest pair
    for i, row in enumerate(rows):
        if row[3] == rows[best][3]:
            best = i
            break
    return KataiResult(rows[best][3], (rows[best][0], rows[best][1]), tuple(rows))
