"""Empirical cylinder measures on sign-sequence space, shift-invariance
defects, an ergodicity diagnostic, and divergence from the Bernoulli measure.

The empirical measure at scale N is the frequency (Cesaro or logarithmic)
of each length-ell sign word read at positions n in the interval; the
weak-* limit object is never formed, only the finite-N truncations.  The
ergodicity diagnostic is one-sided: it can refute ergodicity at finite
scale but cannot certify it, since the defining identity quantifies over
an infinite family of shift-products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .averaging import CESARO, IntervalScheme, harmonic_mass
from .correlations import pattern_densities, pattern_string
from .errors import CoverageGap, MismatchedSources, NonsignValues
from .seqgen import SequenceBlock


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Length-ell cylinder frequencies over one interval.

    Word index: bit j set <=> symbol at offset j is -1 (index 0 is the
    all-plus word); frequencies are nonnegative and sum to 1.
    """

    ell: int
    kind: str
    interval: tuple
    frequencies: np.ndarray
    total_weight: float

    def frequency_map(self) -> dict:
        return {pattern_string(c, self.ell): float(self.frequencies[c])
                for c in range(1 << self.ell)}

    def report(self) -> dict:
        a, b = self.interval
        ordered = dict(sorted(self.frequency_map().items()))
        return {"ell": self.ell, "kind": self.kind, "interval": [a, b],
                "frequencies": ordered}


@dataclass(frozen=True)
class ErgodicityPair:
    b_shifts: tuple
    c_shifts: tuple
    lhs: complex
    rhs: complex

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass(frozen=True)
class ErgodicityReport:
    pairs: tuple
    max_deviation: float
    n_cap: int


def empirical_measure(block: SequenceBlock, interval, ell: int,
                      kind: str = CESARO, jobs: int = 1) -> EmpiricalMeasure:
    """Cylinder frequencies of words read at positions n in (a, b]."""
    scheme = IntervalScheme((tuple(interval),), kind)
    stats = pattern_densities(block, ell, scheme, jobs=jobs)
    freqs = stats.frequencies
    freqs.setflags(write=False)
    return EmpiricalMeasure(ell, kind, stats.interval, freqs, stats.total_weight)


def invariance_defect(m_low: EmpiricalMeasure, m_high: EmpiricalMeasure) -> float:
    """Finite-scale shift-invariance: compare length-ell frequencies with
    both marginals of the length-(ell+1) measure; returns the larger of the
    two max-deviations (boundary terms only, O(ell/|I|))."""
    if m_high.ell != m_low.ell + 1:
        raise MismatchedSources(
            f"need lengths ell and ell+1, got {m_low.ell} and {m_high.ell}")
    if m_low.kind != m_high.kind or m_low.interval != m_high.interval:
        raise MismatchedSources("measures come from different intervals or kinds")
    ell = m_low.ell
    f1 = m_low.frequencies
    f2 = m_high.frequencies
    left = 0.0
    right = 0.0
    for w in range(1 << ell):
        # left extension x.w: word (x, w_0, ..., w_{ell-1}) = x | (w << 1)
        lsum = f2[w << 1] + f2[(w << 1) | 1]
        # right extension w.x: word code w | (x << ell)
        rsum = f2[w] + f2[w | (1 << ell)]
        left = max(left, abs(f1[w] - lsum))
        right = max(right, abs(f1[w] - rsum))
    return max(left, right)


def bernoulli_divergence(measure: EmpiricalMeasure) -> dict:
    """Total variation and max gap against the uniform Bernoulli measure."""
    target = 2.0 ** -measure.ell
    gaps = np.abs(measure.frequencies - target)
    return {"total_variation": 0.5 * float(math.fsum(gaps.tolist())),
            "max_pattern_gap": float(np.max(gaps))}


def _product_values(block: SequenceBlock, shifts, conj, n0: int, n1: int):
    """prod_i C^{conj_i} a(m + h_i) for m in [n0, n1)."""
    sign = block.storage != "complex_pair"
    if sign:
        out = np.ones(n1 - n0, dtype=np.int64)
        for h in shifts:
            out = out * block.slice_values(n0 + h, n1 + h).astype(np.int64)
        return out
    out = np.ones(n1 - n0, dtype=np.complex128)
    for h, c in zip(shifts, conj):
        v = block.slice_values(n0 + h, n1 + h)
        out = out * (np.conj(v) if c else v)
    return out


def _deterministic_family(shift_cap: int):
    fam = [(h,) for h in range(shift_cap + 1)]
    fam += [(h1, h2) for h1 in range(shift_cap + 1)
            for h2 in range(h1, shift_cap + 1)]
    return fam


def ergodicity_diagnostic(block: SequenceBlock, scheme: IntervalScheme,
                          term_budget: int = 3, shift_cap: int = 5,
                          n_cap: int = 1000, seed: int = 0,
                          n_random: int = 32) -> ErgodicityReport:
    """Finite-scale mean-factorization test for shift-product pairs.

    For pairs (b, c) of shift-products of the sequence, compares
    E_{n in [n_cap]} E_{m in I} b(m+n) c(m) against E_I b * E_I c, where I
    is the scheme's last interval.  The pair family is deterministic: all
    (b, b) and (b, a) with b ranging over products with s <= 2 and shifts
    <= shift_cap, plus `n_random` seeded random pairs with s <= term_budget.
    Cesaro sums over sign data are exact integer arithmetic, so constant
    sequences report deviation exactly 0.
    """
    a0, b0 = scheme.last
    base = _deterministic_family(shift_cap)
    rng = np.random.default_rng(seed)
    rand_pairs = []
    for _ in range(n_random):
        s1 = int(rng.integers(1, term_budget + 1))
        s2 = int(rng.integers(1, term_budget + 1))
        bsh = tuple(sorted(int(x) for x in rng.integers(0, shift_cap + 1, s1)))
        csh = tuple(sorted(int(x) for x in rng.integers(0, shift_cap + 1, s2)))
        rand_pairs.append((bsh, csh))
    pairs = [(bs, bs) for bs in base] + [(bs, (0,)) for bs in base] + rand_pairs

    max_shift = max(max(bs + cs) for bs, cs in pairs)
    lo, hi = a0 + 1, b0 + 1
    if not block.covers(lo, hi + n_cap + max_shift):
        raise CoverageGap(
            f"ergodicity diagnostic needs block through {b0 + n_cap + max_shift}")

    length = b0 - a0
    is_log = scheme.kind != CESARO
    inv_m = 1.0 / np.arange(lo, hi, dtype=np.float64) if is_log else None
    mass = harmonic_mass(a0, b0) if is_log else float(length)

    results = []
    conj_all = (False,) * 16
    for bs, cs in pairs:
        bvals = _product_values(block, bs, conj_all, lo, hi + n_cap)
        cvals = _product_values(block, cs, conj_all, lo, hi)
        sign = bvals.dtype == np.int64
        # window sums W(m) = sum_{n=1..n_cap} b(m+n)
        csum = np.cumsum(bvals)
        w = csum[n_cap:length + n_cap] - csum[:length]
        if is_log:
            def _csum(arr):
                if arr.dtype == np.complex128:
                    return complex(math.fsum(arr.real.tolist()),
                                   math.fsum(arr.imag.tolist()))
                return complex(math.fsum(arr.tolist()))

            lhs = _csum(cvals * w * inv_m) / (n_cap * mass)
            mb = _csum(bvals[:length] * inv_m) / mass
            mc = _csum(cvals * inv_m) / mass
        else:
            if sign:
                lhs = complex(int(np.sum(cvals * w))) / (n_cap * length)
                mb = complex(int(np.sum(bvals[:length]))) / length
                mc = complex(int(np.sum(cvals))) / length
            else:
                prod = cvals * w
                lhs = complex(math.fsum(prod.real), math.fsum(prod.imag))
                lhs /= n_cap * length
                mb = complex(math.fsum(bvals[:length].real),
                             math.fsum(bvals[:length].imag)) / length
                mc = complex(math.fsum(cvals.real), math.fsum(cvals.imag)) / length
        results.append(ErgodicityPair(bs, cs, lhs, complex(mb) * complex(mc)))
    max_dev = max(p.deviation for p in results)
    return ErgodicityReport(tuple(results), float(max_dev), n_cap)
