"""Pretentious distance between multiplicative functions, minimization over
archimedean twists n^{it}, and aperiodicity / strong-aperiodicity scans.

The distance D(f, g; N)^2 = sum_{p <= N} (1 - Re f(p) conj(g(p)))/p is a sum
of nonnegative terms; where a character vanishes (p | q) the term is 1/p.
The twist scan minimizes D(f, n^{it}; N)^2 over a t-grid: the full range
|t| <= N of the definition is infeasible at interesting N, so the default
window is [-T, T] with T = max(10, log N), a documented deviation that can
be overridden (window="full").
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from . import characters
from .errors import ConfigError, CoverageGap, EmptyGrid
from .seqgen import COMPLEX_PAIR, MultFuncSpec, SequenceBlock, primes_upto


@dataclass(frozen=True)
class DistanceResult:
    n: int
    squared_distance: float
    prime_count: int


@dataclass(frozen=True)
class GridSpec:
    """Scan grid on t: window 'auto' (max(10, log N)), 'full' (N), or a
    number; two-stage refinement shrinks the step around the coarse argmin."""

    window: object = "auto"
    step: float = 0.01
    refine_factor: int = 100
    max_points: int = 5_000_000

    def half_width(self, n: int) -> float:
        if self.window == "auto":
            return max(10.0, math.log(n))
        if self.window == "full":
            return float(n)
        w = float(self.window)
        if w <= 0:
            raise EmptyGrid(f"window must be positive, got {w}")
        return w

    def coarse(self, n: int) -> np.ndarray:
        t = self.half_width(n)
        count = int(2 * t / self.step) + 1
        if count > self.max_points:
            raise ConfigError(
                f"scan grid of {count} points exceeds max_points={self.max_points}")
        if count < 1:
            raise EmptyGrid("empty scan grid")
        return np.linspace(-t, t, count)


@dataclass(frozen=True)
class MScanResult:
    n: int
    t_grid: np.ndarray
    d2_values: np.ndarray
    min_value: float
    argmin_t: float


@dataclass(frozen=True)
class AperiodicityRow:
    modulus: int
    index: int
    n: int
    min_value: float
    argmin_t: float


def _term_array(phases_f, zero_f, phases_g, zero_g, invp):
    either_zero = zero_f | zero_g
    delta = 2.0 * np.pi * (phases_f - phases_g)
    terms = np.where(either_zero, 1.0, 1.0 - np.cos(delta)) * invp
    return terms


def distance(f: MultFuncSpec, g: MultFuncSpec, n: int) -> DistanceResult:
    """D(f, g; N)^2 = sum_{p <= N} (1 - Re f(p) conj(g(p)))/p."""
    if n < 2:
        raise ConfigError(f"need N >= 2, got {n}")
    primes = primes_upto(n)
    phases_f, zero_f = f.phase_at_primes(primes)
    phases_g, zero_g = g.phase_at_primes(primes)
    invp = 1.0 / primes.astype(np.float64)
    terms = _term_array(phases_f, zero_f, phases_g, zero_g, invp)
    return DistanceResult(n, float(math.fsum(terms.tolist())), len(primes))


def _scan_min(phases, zero, logp, invp, grid) -> tuple[float, float, np.ndarray]:
    d2 = K.mscan_grid(True, phases, zero, logp, invp, grid)
    i = int(np.argmin(d2))
    return float(d2[i]), float(grid[i]), d2


def m_scan(f: MultFuncSpec, n: int, grid: GridSpec | None = None) -> MScanResult:
    """min over the t-grid of D(f, n^{it}; N)^2, with local refinement.

    Refinement never raises the reported minimum: the final value is the
    minimum over both stages.  argmin ties resolve to the smallest t.
    """
    grid = grid or GridSpec()
    primes = primes_upto(n)
    phases, zero = f.phase_at_primes(primes)
    pf = primes.astype(np.float64)
    logp = np.log(pf)
    invp = 1.0 / pf
    coarse = grid.coarse(n)
    best, arg, d2 = _scan_min(phases, zero, logp, invp, coarse)
    fine_step = grid.step / grid.refine_factor
    fine = np.arange(arg - grid.step, arg + grid.step + fine_step / 2, fine_step)
    fbest, farg, _ = _scan_min(phases, zero, logp, invp, fine)
    if fbest < best:
        best, arg = fbest, farg
    return MScanResult(n, coarse, d2, best, arg)


def strong_aperiodicity_scan(f: MultFuncSpec, n_list, q_max: int,
                             grid: GridSpec | None = None):
    """M(f * chi; N) for every Dirichlet character of modulus <= q_max and
    every N in n_list.

    Returns (rows, growth_observed): rows are AperiodicityRow in (q, index,
    N) order; growth_observed is True when every (q, chi) row strictly
    increases in N (beyond a 1e-9 tolerance), so rows stalling at a
    constant, like the principal character against itself, do not count.
    """
    if q_max > 100:
        raise ConfigError(f"character-table budget allows q_max <= 100, got {q_max}")
    if q_max < 1:
        raise ConfigError(f"q_max must be >= 1, got {q_max}")
    grid = grid or GridSpec()
    n_list = sorted(int(n) for n in n_list)
    n_top = n_list[-1]
    primes = primes_upto(n_top)
    phases_f, zero_f = f.phase_at_primes(primes)
    pf = primes.astype(np.float64)
    logp_all = np.log(pf)
    invp_all = 1.0 / pf
    rows = []
    growth = True
    for q in range(1, q_max + 1):
        for index in range(characters.phi(q)):
            tab, ztab = characters.character_table(q, index)
            idx = primes % q if q > 1 else np.zeros(len(primes), dtype=np.int64)
            phases = np.mod(phases_f + tab[idx], 1.0)
            zero = zero_f | ztab[idx]
            prev = -math.inf
            for n in n_list:
                cut = int(np.searchsorted(primes, n, side="right"))
                coarse = grid.coarse(n)
                best, arg, _ = _scan_min(
                    phases[:cut], zero[:cut], logp_all[:cut], invp_all[:cut], coarse)
                fine_step = grid.step / grid.refine_factor
                fine = np.arange(arg - grid.step, arg + grid.step + fine_step / 2,
                                 fine_step)
                fbest, farg, _ = _scan_min(
                    phases[:cut], zero[:cut], logp_all[:cut], invp_all[:cut], fine)
                if fbest < best:
                    best, arg = fbest, farg
                rows.append(AperiodicityRow(q, index, n, best, arg))
                if best <= prev + 1e-9:
                    growth = False
                prev = best
    return rows, growth


def aperiodicity_test(block: SequenceBlock, a: int, b: int, n: int) -> float:
    """|E_{n' <= N} f(a n' + b)| read from a materialized block."""
    if a < 1 or b < 0:
        raise ConfigError(f"need a >= 1 and b >= 0, got a={a}, b={b}")
    hi = a * n + b
    lo = a + b
    if not block.covers(lo, hi + 1):
        raise CoverageGap(
            f"progression needs [{lo}, {hi}], block holds [{block.start}, {block.end})")
    idx = a * np.arange(1, n + 1, dtype=np.int64) + b - block.start
    vals = block.values[idx]
    if block.storage == COMPLEX_PAIR:
        return abs(K.kahan_sum_complex(np.ascontiguousarray(vals))) / n
    return abs(int(np.sum(vals, dtype=np.int64))) / n
