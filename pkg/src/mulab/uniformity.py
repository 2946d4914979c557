"""Gowers uniformity norms over Z_N, the interval normalization U^s[N],
finite-scale local seminorms and star seminorms along interval schemes, and
executable forms of the box/star comparison, the Gowers-Cauchy-Schwarz
inequality, its nonperiodic variant with the trapezoid-smoothing constant,
and the numeric van der Corput inequality.

Conventions.  [[s]] = {0,1}^s; C is conjugation applied |eps| times; the
h-box average over [H]^s truncates the unbounded h-averages of the local
seminorms, and the finite value at truncation (H, N) is reported as is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels as K
from .averaging import CESARO, IntervalScheme, harmonic_mass
from .errors import (
    BadWindow,
    ConfigError,
    CostGuardExceeded,
    CoverageGap,
    MethodMismatch,
)
from .seqgen import SequenceBlock

NEG_CLAMP = -1e-9
DEFAULT_COST_GUARD = 4 * 10**9

DIRECT = "direct"
FFT_U2 = "fft_u2"
RECURSIVE = "recursive"


@dataclass(frozen=True)
class GowersResult:
    s: int
    n: int
    value: float
    method: str
    clamped: bool = False
    estimate: bool = False

    def report(self) -> dict:
        return {"s": self.s, "N": self.n, "value": self.value,
                "method": self.method, "clamped": self.clamped,
                "estimate": self.estimate}


@dataclass(frozen=True)
class LocalSeminormResult:
    """Box-truncated local seminorm values.

    grid[(H, (a, b))] holds the complex inner average at that truncation;
    value is the 2^s-th root of the clamped real part at (H_box, last
    interval).
    """

    s: int
    h_box: int
    grid: dict
    value: float
    clamped: bool


@dataclass(frozen=True)
class StarSeminormResult:
    s: int
    window: int
    value: float
    per_interval: tuple
    estimate: bool


def _as_array(values) -> np.ndarray:
    if isinstance(values, SequenceBlock):
        values = values.values
    a = np.asarray(values)
    if a.dtype != np.complex128:
        a = a.astype(np.complex128)
    return a


def _root_clamped(power_avg: float, s: int) -> tuple[float, bool]:
    if power_avg < NEG_CLAMP:
        raise ConfigError(
            f"norm power average {power_avg} below clamp {NEG_CLAMP}; "
            "input values must be bounded by 1")
    if power_avg < 0.0:
        return 0.0, True
    return power_avg ** (1.0 / (1 << s)), False


def _u_power_recursive(a: np.ndarray, s: int, stride: int) -> float:
    """||a||_{U^s(Z_N)}^{2^s} by the inductive definition, h-subsampled
    by `stride` at levels above the compiled bases."""
    n = len(a)
    if s == 1:
        return abs(np.mean(a)) ** 2
    if s == 2:
        return float(K.u2_recursive(a))
    if s == 3 and stride == 1:
        return float(K.u3_recursive(a))
    acc = 0.0
    count = 0
    for h in range(0, n, stride):
        b = np.roll(a, -h) * np.conj(a)
        acc += _u_power_recursive(b, s - 1, stride)
        count += 1
    return acc / count


def gowers_zn(values, s: int, method: str = "auto",
              cost_guard: int = DEFAULT_COST_GUARD, stride: int = 1) -> GowersResult:
    """Gowers norm ||a||_{U^s(Z_N)} of the periodic extension of `values`.

    methods: direct (product formula, O(N^{s+1}), s <= 3), fft_u2 (fourth
    moment of the DFT, s = 2 only), recursive (inductive definition,
    O(N^s)); auto picks fft_u2 for s = 2 and recursive otherwise.
    """
    a = _as_array(values)
    n = len(a)
    if s < 1:
        raise ConfigError(f"s must be >= 1, got {s}")
    if n < 2:
        raise ConfigError(f"need N >= 2, got {n}")
    if method == "auto":
        method = FFT_U2 if s == 2 else RECURSIVE
    if s == 1 and method in (DIRECT, RECURSIVE, "mean"):
        # all methods coincide: |E a|
        return GowersResult(1, n, abs(np.mean(a)), method)
    if method == FFT_U2:
        if s != 2:
            raise MethodMismatch(f"fft_u2 computes U^2 only, got s={s}")
        ahat = np.fft.fft(a)
        raw = float(np.sum(np.abs(ahat) ** 4) / n**4)
        val, clamped = _root_clamped(raw, 2)
        return GowersResult(2, n, val, FFT_U2, clamped)
    if method == DIRECT:
        if s > 3:
            raise MethodMismatch(f"direct evaluation supports s <= 3, got s={s}")
        if n ** (s + 1) > cost_guard:
            raise CostGuardExceeded(
                f"direct U^{s} at N={n} needs ~N^{s + 1} = {n ** (s + 1):.2e} ops")
        raw = float(K.u2_direct(a)) if s == 2 else float(K.u3_direct(a))
        val, clamped = _root_clamped(raw, s)
        return GowersResult(s, n, val, DIRECT, clamped)
    if method == RECURSIVE:
        st = max(stride, 1)
        work = n**2 * max(n // st, 1) ** (s - 2) if s >= 2 else n
        if work > cost_guard:
            raise CostGuardExceeded(
                f"recursive U^{s} at N={n}, stride={stride} needs ~{work:.2e} ops; "
                "raise cost_guard or use a larger stride")
        raw = _u_power_recursive(a, s, st)
        val, clamped = _root_clamped(raw, s)
        return GowersResult(s, n, val, RECURSIVE, clamped,
                            estimate=st > 1 and s >= 3)
    raise MethodMismatch(f"unknown method {method!r}")


@lru_cache(maxsize=256)
def _indicator_norm(n: int, s: int, method: str) -> float:
    ind = np.zeros(2 * n, dtype=np.complex128)
    ind[:n] = 1.0
    return gowers_zn(ind, s, method=method).value


def gowers_interval(values, s: int, method: str = "auto",
                    cost_guard: int = DEFAULT_COST_GUARD, stride: int = 1) -> GowersResult:
    """||a||_{U^s[N]} = ||a 1_[N]||_{U^s(Z_2N)} / ||1_[N]||_{U^s(Z_2N)}."""
    a = _as_array(values)
    n = len(a)
    emb = np.zeros(2 * n, dtype=np.complex128)
    emb[:n] = a
    if method == "auto":
        method = FFT_U2 if s == 2 else RECURSIVE
    num = gowers_zn(emb, s, method=method, cost_guard=cost_guard, stride=stride)
    if s == 1:
        den = 0.5
    elif method == RECURSIVE and stride > 1 and s >= 3:
        ind = np.zeros(2 * n, dtype=np.complex128)
        ind[:n] = 1.0
        den = gowers_zn(ind, s, method=method, cost_guard=cost_guard,
                        stride=stride).value
    else:
        den = _indicator_norm(n, s, method)
    return GowersResult(s, n, num.value / den, num.method, num.clamped, num.estimate)


# ---------------------------------------------------------------------------
# local seminorms U^s(I) truncated to an h-box


def _box_power(b: np.ndarray, i0: int, i1: int, big_h: int, s: int) -> complex:
    """E_{h in [H]^s} E_{n in [i0,i1)} prod_{eps} C^{|eps|} b(n + eps.h).

    Recursion: level s averages the level s-1 value of
    d_h(b)(n) = b(n) conj(b(n+h)) over h in [1, H].
    """
    if s == 1:
        return K.box_corr_level1(b, i0, i1, big_h)
    acc_r = []
    acc_i = []
    top = i1 + (s - 1) * big_h
    for h in range(1, big_h + 1):
        d = b[: top] * np.conj(b[h: top + h])
        v = _box_power(d, i0, i1, big_h, s - 1)
        acc_r.append(v.real)
        acc_i.append(v.imag)
    return complex(math.fsum(acc_r) / big_h, math.fsum(acc_i) / big_h)


def local_seminorm(block: SequenceBlock, scheme: IntervalScheme, s: int,
                   h_box: int, h_ladder=None,
                   cost_guard: int = DEFAULT_COST_GUARD) -> LocalSeminormResult:
    """Finite-scale ||a||_{U^s(I)} with E_{h in N^s} truncated to [H]^s.

    Values are computed for every interval of the scheme and every H in the
    ladder (default: just h_box), so convergence in both truncation
    parameters can be inspected.  Intervals are averaged with the Cesaro
    weighting of the inner average in the defining formula.
    """
    if s < 1:
        raise ConfigError(f"s must be >= 1, got {s}")
    if h_box < 1:
        raise ConfigError(f"H must be >= 1, got {h_box}")
    ladder = sorted(set(h_ladder or [h_box]) | {h_box})
    a_last, b_last = scheme.last
    need_hi = max(b for _, b in scheme) + s * max(ladder)
    if not block.covers(min(a for a, _ in scheme) + 1, need_hi + 1):
        raise CoverageGap(
            f"local seminorm at s={s}, H={max(ladder)} needs block through "
            f"{need_hi}, block ends at {block.end - 1}")
    if max(ladder) ** (s - 1) * (b_last - a_last + max(ladder)) > cost_guard:
        raise CostGuardExceeded(
            f"s={s}, H={max(ladder)}, |I|={b_last - a_last}: H^(s-1)*N too large")
    vals = block.complex_values()
    grid = {}
    for big_h in ladder:
        for a, b in scheme:
            i0 = a + 1 - block.start
            i1 = b + 1 - block.start
            grid[(big_h, (a, b))] = _box_power(vals, i0, i1, big_h, s)
    head = grid[(h_box, (a_last, b_last))]
    # the box truncation is a signed quantity at finite scale; report the
    # clamped root and keep the raw complex value in the grid
    if head.real < 0.0:
        value, clamped = 0.0, True
    else:
        value, clamped = head.real ** (1.0 / (1 << s)), False
    return LocalSeminormResult(s, h_box, grid, value, clamped)


def local_star_seminorm(block: SequenceBlock, scheme: IntervalScheme, s: int,
                        window: int, kind: str | None = None,
                        n_samples: int = 1 << 14,
                        cost_guard: int = DEFAULT_COST_GUARD) -> StarSeminormResult:
    """Finite-scale star seminorm: average over n in I of ||S_n a||_{U^s[H]}.

    s = 1 is evaluated exactly by sliding window sums; s = 2 subsamples the
    start points to n_samples (estimate flag) and batches the embedded
    Z_{2H} DFTs; s >= 3 falls back to per-window recursion under the cost
    guard.  The n-average uses the scheme kind (or the override `kind`).
    """
    kind = kind or scheme.kind
    if s < 1 or window < 1:
        raise ConfigError(f"need s >= 1 and H >= 1, got s={s}, H={window}")
    need_hi = max(b for _, b in scheme) + 2 * window + s
    if not block.covers(min(a for a, _ in scheme) + 1, need_hi + 1):
        raise CoverageGap(
            f"star seminorm needs block through {need_hi}, block ends at "
            f"{block.end - 1}")
    vals = block.complex_values()
    per_interval = []
    estimate = False
    for a, b in scheme:
        length = b - a
        if s == 1:
            norms = K.window_abs_mean(vals, a + 1 - block.start, length, window)
            ns = np.arange(a + 1, b + 1, dtype=np.float64)
        else:
            stride = max(1, length // n_samples)
            estimate = estimate or stride > 1
            ns_int = np.arange(a + 1, b + 1, stride, dtype=np.int64)
            if s == 2:
                norms = _batched_u2_windows(vals, ns_int - block.start, window)
            else:
                if len(ns_int) * window**s > cost_guard:
                    raise CostGuardExceeded(
                        f"star seminorm s={s} with {len(ns_int)} windows of "
                        f"H={window} exceeds the cost guard")
                norms = np.array([
                    gowers_interval(vals[i: i + window], s).value
                    for i in ns_int - block.start])
            ns = ns_int.astype(np.float64)
        if kind == CESARO:
            per_interval.append(float(np.mean(norms)))
        else:
            w = 1.0 / ns
            per_interval.append(float(np.sum(norms * w) / np.sum(w)))
    return StarSeminormResult(s, window, per_interval[-1], tuple(per_interval),
                              estimate)


def _batched_u2_windows(vals: np.ndarray, starts: np.ndarray, window: int,
                        batch: int = 2048) -> np.ndarray:
    """||a(n+.)||_{U^2[H]} for each start n via the Z_{2H} fourth moment."""
    den = _indicator_norm(window, 2, FFT_U2)
    out = np.empty(len(starts), dtype=np.float64)
    two_h = 2 * window
    for lo in range(0, len(starts), batch):
        sub = starts[lo: lo + batch]
        mat = np.zeros((len(sub), two_h), dtype=np.complex128)
        for r, st in enumerate(sub):
            mat[r, :window] = vals[st + 1: st + 1 + window]
        ft = np.fft.fft(mat, axis=1)
        raw = np.sum(np.abs(ft) ** 4, axis=1) / two_h**4
        out[lo: lo + batch] = np.maximum(raw, 0.0) ** 0.25 / den
    return out


@dataclass(frozen=True)
class InequalityCheck:
    lhs: float
    rhs: float
    holds: bool
    detail: dict = field(default_factory=dict)


def normequiv_check(block: SequenceBlock, scheme: IntervalScheme, s: int,
                    h_box: int, window: int, tol: float = 1e-9) -> InequalityCheck:
    """Finite-scale form of the star-vs-box comparison with the factor 4.

    lhs: star seminorm at window H.  rhs: 4 * box value at H_box plus the
    finite-truncation slack 2^s (sum_j H_j^{-1} + H^{-1} sum_j H_j)^{1/2^s}
    with all H_j = H_box, mirroring the error terms of the comparison proof.
    """
    star = local_star_seminorm(block, scheme, s, window)
    box = local_seminorm(block, scheme, s, h_box)
    slack = 2**s * (s / h_box + s * h_box / window) ** (1.0 / (1 << s))
    rhs = 4.0 * box.value + slack
    return InequalityCheck(star.value, rhs, bool(star.value <= rhs + tol),
                           {"star": star.value, "box": box.value, "slack": slack})


# ---------------------------------------------------------------------------
# Gowers-Cauchy-Schwarz checks


def eps_star(s: int):
    """[[s]]* = {0,1}^s minus the zero tuple, lexicographic order."""
    return [e for e in product((0, 1), repeat=s) if any(e)]


def _check_eps_inputs(seqs, s: int, length: int):
    eps = eps_star(s)
    if isinstance(seqs, dict):
        arrs = [np.asarray(seqs[e], dtype=np.complex128) for e in eps]
    else:
        arrs = [np.asarray(x, dtype=np.complex128) for x in seqs]
    if len(arrs) != len(eps):
        raise ConfigError(f"need {len(eps)} sequences for s={s}, got {len(arrs)}")
    for a in arrs:
        if len(a) != length:
            raise ConfigError(f"sequences must have length {length}, got {len(a)}")
    return eps, arrs


def _guard_gcs(s: int, m: int):
    cap = {2: 64, 3: 24}.get(s)
    if cap is None:
        raise CostGuardExceeded(f"GCS checks support s in {{2, 3}}, got s={s}")
    if m > cap:
        raise CostGuardExceeded(f"s={s} GCS check capped at M={cap}, got M={m}")


def gcs_check(seqs, s: int, m: int, tol: float = 1e-9) -> InequalityCheck:
    """Gowers-Cauchy-Schwarz over Z_M:
    E_m |E_{h in Z_M^s} prod a_eps(m+eps.h)| <= prod ||a_eps||_{U^s(Z_M)}."""
    _guard_gcs(s, m)
    eps, arrs = _check_eps_inputs(seqs, s, m)
    idx = np.arange(m)
    lhs_terms = []
    for mm in range(m):
        acc = 0.0 + 0.0j
        for h_head in product(range(m), repeat=s - 1):
            t = np.ones(m, dtype=np.complex128)
            for e, a in zip(eps, arrs):
                off = mm + sum(ei * hi for ei, hi in zip(e[:-1], h_head))
                if e[-1]:
                    t = t * a[(off + idx) % m]
                else:
                    t = t * a[off % m]
            acc += t.sum()
        lhs_terms.append(abs(acc) / m**s)
    lhs = math.fsum(lhs_terms) / m
    rhs = 1.0
    for a in arrs:
        rhs *= gowers_zn(a, s, method=RECURSIVE).value
    return InequalityCheck(float(lhs), float(rhs), bool(lhs <= rhs + tol))


def trapezoid_window(m: int, m_tilde: int, r: int) -> np.ndarray:
    """The trapezoid weight on Z_{m_tilde}: 0 at 0, up to 1 on [0, R],
    flat on [R, M-R], down to 0 on [M-R, M], zero beyond M."""
    phi = np.zeros(m_tilde, dtype=np.float64)
    for j in range(m_tilde):
        if j <= r:
            phi[j] = j / r
        elif j <= m - r:
            phi[j] = 1.0
        elif j <= m:
            phi[j] = (m - j) / r
    return phi


def _nonper_lhs(eps, arrs, s: int, m: int) -> float:
    # indices are 1-based positions into [ (s+1) M ]
    lhs_terms = []
    hs = np.arange(1, m + 1)
    for mm in range(1, m + 1):
        acc = 0.0 + 0.0j
        for h_head in product(range(1, m + 1), repeat=s - 1):
            t = np.ones(m, dtype=np.complex128)
            for e, a in zip(eps, arrs):
                off = mm + sum(ei * hi for ei, hi in zip(e[:-1], h_head))
                if e[-1]:
                    t = t * a[off + hs - 1]
                else:
                    t = t * a[off - 1]
            acc += t.sum()
        lhs_terms.append(abs(acc) / m**s)
    return math.fsum(lhs_terms) / m


def _trapezoid_diag(eps, arrs, s: int, m: int, u_min: float) -> dict:
    m_tilde = (s + 1) * m
    r = int(u_min ** (1.0 / (s + 1)) * m_tilde / (4 * s)) + 1
    r = min(r, max(m // 2, 1))
    phi = trapezoid_window(m, m_tilde, r)
    idx = np.arange(m_tilde)
    terms = []
    for mm in range(m_tilde):
        acc = 0.0 + 0.0j
        for h_head in product(range(m_tilde), repeat=s - 1):
            w = 1.0
            for hi in h_head:
                w *= phi[hi]
            if w == 0.0:
                continue
            t = np.full(m_tilde, w, dtype=np.complex128) * phi
            for e, a in zip(eps, arrs):
                off = mm + sum(ei * hi for ei, hi in zip(e[:-1], h_head))
                if e[-1]:
                    t = t * a[(off + idx) % m_tilde]
                else:
                    t = t * a[off % m_tilde]
            acc += t.sum()
        terms.append(abs(acc) / m_tilde**s)
    return {"trapezoid_value": math.fsum(terms) / m_tilde, "R": r}


def nonperiodic_gcs_check(seqs, s: int, m: int, tol: float = 1e-9,
                          with_trapezoid: bool = False) -> InequalityCheck:
    """Nonperiodic GCS bound with constant C_s = (s+1)^{s+1}((2s)^s + 1):

    E_{m in [M]} |E_{h in [M]^s} prod a_eps(m+eps.h)|
        <= C_s (min_eps ||a_eps||_{U^s(Z_{(s+1)M})}^{1/(s+1)} + 1/M).

    The derivation-route bound (s+1)^{s+1}(((4s)^s+1) U^{1/(s+1)} + 2/M) is
    also evaluated; `detail["needed"]` records which constant sufficed.
    Optionally exposes the trapezoid-smoothed intermediate average.
    """
    _guard_gcs(s, m)
    eps, arrs = _check_eps_inputs(seqs, s, (s + 1) * m)
    lhs = _nonper_lhs(eps, arrs, s, m)
    u_min = min(gowers_zn(a, s, method=RECURSIVE).value for a in arrs)
    c_stated = (s + 1) ** (s + 1) * ((2 * s) ** s + 1)
    bound_stated = c_stated * (u_min ** (1.0 / (s + 1)) + 1.0 / m)
    bound_proof = (s + 1) ** (s + 1) * (
        ((4 * s) ** s + 1) * u_min ** (1.0 / (s + 1)) + 2.0 / m)
    holds_stated = bool(lhs <= bound_stated + tol)
    holds_proof = bool(lhs <= bound_proof + tol)
    needed = "stated" if holds_stated else ("proof" if holds_proof else "none")
    detail = {"u_min": u_min, "bound_stated": bound_stated,
              "bound_proof": bound_proof, "needed": needed, "C_s": c_stated}
    if with_trapezoid:
        detail.update(_trapezoid_diag(eps, arrs, s, m, u_min))
    return InequalityCheck(float(lhs), float(max(bound_stated, bound_proof)),
                           bool(holds_stated or holds_proof), detail)


def vdc_check(values, m: int, r: int, tol: float = 1e-9) -> InequalityCheck:
    """Numeric van der Corput inequality at n = 0:

    |E_{m in [M]} a(m)|^2 <= 4 (E_{r in [R]} (1 - r/R)
        Re E_{m in [M]} a(m+r) conj(a(m)) + 1/R + R/M).

    `values` must cover positions 1 .. M+R (index 0 <-> position 1).
    """
    if r > m:
        raise BadWindow(f"need R <= M, got R={r} > M={m}")
    if r < 1:
        raise BadWindow(f"need R >= 1, got R={r}")
    a = _as_array(values)
    if len(a) < m + r:
        raise CoverageGap(f"need at least M+R={m + r} values, got {len(a)}")
    lhs = abs(np.mean(a[:m])) ** 2
    terms = [(1.0 - rr / r) * float(np.real(np.mean(a[rr: rr + m] * np.conj(a[:m]))))
             for rr in range(1, r + 1)]
    rhs_sum = math.fsum(terms) / r
    rhs = 4.0 * (rhs_sum + 1.0 / r + r / m)
    return InequalityCheck(float(lhs), float(rhs), bool(lhs <= rhs + tol),
                           {"shift_sum": rhs_sum})
