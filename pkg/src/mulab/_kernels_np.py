"""Vectorized numpy implementations of the hot kernels.

This is the fallback path selected by MULAB_DISABLE_NUMBA=1 (see _kernels).
Each function here has a loop-style twin that numba compiles; the two paths
agree exactly on integer outputs and to ~1e-13 on float reductions (summation
order differs).  Keep signatures in sync with _kernels_loops.
"""

from __future__ import annotations

import math

import numpy as np


# ---------------------------------------------------------------------------
# sieves


def liouville_segment(start, length, primes):
    """Liouville lambda(n) for n in [start, start+length) as int8 +-1.

    `primes` must contain every prime <= sqrt(start+length-1).  Parity of
    Omega(n) is accumulated by sign flips at multiples of every prime power,
    with a final flip where a prime cofactor > sqrt(end) remains.
    """
    end = start + length
    out = np.ones(length, dtype=np.int8)
    prod = np.ones(length, dtype=np.int64)
    for p in primes:
        p = int(p)
        q = p
        while q < end:
            j0 = ((start + q - 1) // q) * q - start
            sl = slice(j0, length, q)
            out[sl] = -out[sl]
            prod[sl] *= p
            if q > (end - 1) // p:
                break
            q *= p
    n_vals = np.arange(start, end, dtype=np.int64)
    out[prod != n_vals] *= -1
    return out


def mobius_segment(start, length, primes):
    """Mobius mu(n) for n in [start, start+length) as int8 in {-1,0,1}."""
    end = start + length
    out = np.ones(length, dtype=np.int8)
    prod = np.ones(length, dtype=np.int64)
    for p in primes:
        p = int(p)
        j0 = ((start + p - 1) // p) * p - start
        sl = slice(j0, length, p)
        out[sl] = -out[sl]
        prod[sl] *= p
        p2 = p * p
        if p2 < end:
            j0 = ((start + p2 - 1) // p2) * p2 - start
            out[j0:length:p2] = 0
    n_vals = np.arange(start, end, dtype=np.int64)
    out[(prod != n_vals) & (out != 0)] *= -1
    return out


def phase_segment(start, length, primes, prime_phases, vanish_high_powers):
    """Phase (in turns) of a multiplicative f on [start, start+length).

    f(p) = e(prime_phases[i]) for primes[i]; the completely multiplicative
    extension adds e * phase(p) for p^e || n.  Returns (phase, zero, prod)
    where `prod` is the part of n explained by primes <= sqrt(end); the
    caller adds cofactor phases.  With vanish_high_powers the entries with
    p^2 | n are flagged zero (mu-style prime power rule).
    """
    end = start + length
    phase = np.zeros(length, dtype=np.float64)
    zero = np.zeros(length, dtype=np.bool_)
    prod = np.ones(length, dtype=np.int64)
    for i in range(len(primes)):
        p = int(primes[i])
        ph = float(prime_phases[i])
        q = p
        k = 0
        while q < end:
            k += 1
            j0 = ((start + q - 1) // q) * q - start
            sl = slice(j0, length, q)
            if vanish_high_powers and k == 2:
                zero[sl] = True
            phase[sl] += ph
            prod[sl] *= p
            if q > (end - 1) // p:
                break
            q *= p
    return phase, zero, prod


# ---------------------------------------------------------------------------
# compensated reductions


def kahan_sum_complex(values):
    """Sum of a complex array; exact per component via math.fsum."""
    v = np.asarray(values)
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


def kahan_sum_f64(values):
    return math.fsum(np.asarray(values, dtype=np.float64).tolist())


def harmonic_mass(n0, length):
    """sum_{i<length} 1/(n0+i)."""
    n = np.arange(n0, n0 + length, dtype=np.float64)
    return math.fsum((1.0 / n).tolist())


def weighted_inv_sum_complex(values, n0):
    """sum_i values[i]/(n0+i) for complex values."""
    n = np.arange(n0, n0 + len(values), dtype=np.float64)
    w = np.asarray(values) / n
    return complex(math.fsum(w.real.tolist()), math.fsum(w.imag.tolist()))


def weighted_inv_sum_i8(values, n0):
    """sum_i values[i]/(n0+i) for sign values."""
    n = np.arange(n0, n0 + len(values), dtype=np.float64)
    w = np.asarray(values, dtype=np.float64) / n
    return math.fsum(w.tolist())


# ---------------------------------------------------------------------------
# correlation products


def corr_product_sum_i8(data, bases, strides, m0, m1):
    """sum_{m0 <= m < m1} prod_j data[bases[j] + strides[j]*m] (sign data)."""
    m = np.arange(m0, m1, dtype=np.int64)
    acc = np.ones(m1 - m0, dtype=np.int64)
    for j in range(len(bases)):
        acc *= data[bases[j] + strides[j] * m]
    return int(acc.sum())


def corr_product_logsum_i8(data, bases, strides, m0, m1):
    """sum_{m} prod_j data[...] / m for sign data."""
    m = np.arange(m0, m1, dtype=np.int64)
    acc = np.ones(m1 - m0, dtype=np.float64)
    for j in range(len(bases)):
        acc *= data[bases[j] + strides[j] * m]
    return math.fsum((acc / m).tolist())


def corr_product_sum_complex(data, bases, strides, conj, m0, m1):
    m = np.arange(m0, m1, dtype=np.int64)
    acc = np.ones(m1 - m0, dtype=np.complex128)
    for j in range(len(bases)):
        t = data[bases[j] + strides[j] * m]
        acc *= np.conj(t) if conj[j] else t
    return complex(math.fsum(acc.real.tolist()), math.fsum(acc.imag.tolist()))


def corr_product_logsum_complex(data, bases, strides, conj, m0, m1):
    m = np.arange(m0, m1, dtype=np.int64)
    acc = np.ones(m1 - m0, dtype=np.complex128)
    for j in range(len(bases)):
        t = data[bases[j] + strides[j] * m]
        acc *= np.conj(t) if conj[j] else t
    acc /= m
    return complex(math.fsum(acc.real.tolist()), math.fsum(acc.imag.tolist()))


# ---------------------------------------------------------------------------
# cylinder patterns

def _window_codes(signs, i0, i1, ell):
    # code bit j set <=> value at offset j equals -1
    bits = (np.asarray(signs[i0:i1 + ell - 1]) == -1).astype(np.int64)
    codes = np.zeros(i1 - i0, dtype=np.int64)
    for j in range(ell):
        codes |= bits[j:j + (i1 - i0)] << j
    return codes


def pattern_counts(signs, i0, i1, ell):
    """Counts of length-ell sign words starting at indices [i0, i1)."""
    codes = _window_codes(signs, i0, i1, ell)
    return np.bincount(codes, minlength=1 << ell).astype(np.int64)


def pattern_logweights(signs, i0, i1, ell, n_start):
    """1/n-weighted counts; n_start is the integer at index i0."""
    codes = _window_codes(signs, i0, i1, ell)
    w = 1.0 / np.arange(n_start, n_start + (i1 - i0), dtype=np.float64)
    return np.bincount(codes, weights=w, minlength=1 << ell)


# ---------------------------------------------------------------------------
# Katai bilinear pair


def katai_pair_complex(data, start, p, q, count):
    """sum_{n=1..count} a(p n) conj(a(q n)) with a indexed from `start`."""
    n = np.arange(1, count + 1, dtype=np.int64)
    t = data[p * n - start] * np.conj(data[q * n - start])
    return complex(math.fsum(t.real.tolist()), math.fsum(t.imag.tolist()))


# ---------------------------------------------------------------------------
# Gowers norms over Z_N


def u2_direct(a):
    """U^2(Z_N)^4 by direct evaluation of the 4-term product formula."""
    a = np.asarray(a, dtype=np.complex128)
    n = len(a)
    idx = np.arange(n)
    tot = 0.0
    for h1 in range(n):
        b = a * np.conj(a[(idx + h1) % n])
        for h2 in range(n):
            tot += np.real(np.sum(b * np.conj(np.roll(b, -h2))))
    return tot / n**3


def u2_recursive(a):
    """U^2(Z_N)^4 via E_h |E_m a(m+h) conj(a(m))|^2."""
    a = np.asarray(a, dtype=np.complex128)
    n = len(a)
    tot = 0.0
    for h in range(n):
        tot += abs(np.mean(np.roll(a, -h) * np.conj(a))) ** 2
    return tot / n


def u3_direct(a):
    """U^3(Z_N)^8 by direct evaluation (O(N^4))."""
    a = np.asarray(a, dtype=np.complex128)
    n = len(a)
    idx = np.arange(n)
    tot = 0.0
    for h1 in range(n):
        b1 = a * np.conj(a[(idx + h1) % n])
        for h2 in range(n):
            b2 = b1 * np.conj(np.roll(b1, -h2))
            for h3 in range(n):
                tot += np.real(np.sum(b2 * np.conj(np.roll(b2, -h3))))
    return tot / n**4


def u3_recursive(a):
    a = np.asarray(a, dtype=np.complex128)
    n = len(a)
    tot = 0.0
    for h in range(n):
        tot += u2_recursive(np.roll(a, -h) * np.conj(a))
    return tot / n


# ---------------------------------------------------------------------------
# local seminorm building block


def box_corr_level1(b, i0, i1, big_h):
    """E_{h in [1,H]} E_{n in [i0,i1)} b(n) conj(b(n+h)).

    Needs len(b) >= i1 - 1 + H + 1.  Uses a sliding window sum of b.
    """
    b = np.asarray(b, dtype=np.complex128)
    c = np.cumsum(b)
    # W(n) = sum_{h=1..H} b(n+h) = c[n+H] - c[n]
    n = np.arange(i0, i1)
    w = c[n + big_h] - c[n]
    val = np.sum(b[n] * np.conj(w)) / (big_h * (i1 - i0))
    return complex(val)


def window_abs_mean(a, i0, count, big_h):
    """|mean of a over (n, n+H]| for n = i0, i0+1, ..., i0+count-1."""
    a = np.asarray(a, dtype=np.complex128)
    c = np.cumsum(a)
    n = np.arange(i0, i0 + count)
    w = (c[n + big_h] - c[n]) / big_h
    return np.abs(w)


# ---------------------------------------------------------------------------
# pretentious distance grid


def mscan_grid(cos_needed, phases, zero_mask, logp, invp, t_grid):
    """D(f, n^{it}; N)^2 on a grid of t values.

    Term at prime p: (1 - cos(2 pi phase_p - t log p))/p, or 1/p where
    f(p) = 0 (zero_mask).  cos_needed is ignored (numba twin signature).
    """
    base = 2.0 * np.pi * phases
    out = np.empty(len(t_grid), dtype=np.float64)
    zero_extra = float(np.sum(invp[zero_mask]))
    live = ~zero_mask
    lp = logp[live]
    bp = base[live]
    ip = invp[live]
    for i, t in enumerate(t_grid):
        out[i] = float(np.sum((1.0 - np.cos(bp - t * lp)) * ip)) + zero_extra
    return out


# ---------------------------------------------------------------------------
# polynomial phase by compensated finite-difference accumulation


def poly_phase_diffs(diffs, count):
    """Phases P(start+i) mod 1, i < count, from the finite-difference table
    diffs[k] = Delta^k P(start) mod 1.  Kahan-compensated per level so the
    drift stays O(eps) per step."""
    deg1 = len(diffs)
    val = [float(d) for d in diffs]
    comp = [0.0] * deg1
    out = np.empty(count, dtype=np.float64)
    for i in range(count):
        v0 = val[0] + comp[0]
        out[i] = v0 - math.floor(v0)
        for k in range(deg1 - 1):
            add = val[k + 1] + comp[k + 1]
            t = val[k] + add
            if abs(val[k]) >= abs(add):
                comp[k] += (val[k] - t) + add
            else:
                comp[k] += (add - t) + val[k]
            val[k] = t
            f = math.floor(val[k])
            val[k] -= f
    return out


# ---------------------------------------------------------------------------
# Heisenberg orbit (sequential recurrence; plain loop, kept simple)


def heisenberg_orbit(alpha, beta, n_steps):
    """Reduced Malcev coordinates of b^n.e_X, b = (alpha, beta, 0).

    Returns (x, y, z, corr) with coordinates in [0,1).  corr tracks the
    accumulated non-integer effect of the Gamma reductions on z (both the
    direct x*floor(y) jumps and the compounded alpha*floor(y) deficit in
    later steps), so z + corr = C(n,2) alpha beta (mod 1) in exact
    arithmetic.  Compensated accumulation keeps float drift O(eps)/step.
    """
    x = np.empty(n_steps, dtype=np.float64)
    y = np.empty(n_steps, dtype=np.float64)
    z = np.empty(n_steps, dtype=np.float64)
    corr = np.empty(n_steps, dtype=np.float64)

    # accumulators as (value, compensation) pairs
    xv = xc = yv = yc = zv = zc = 0.0
    dv = dc = 0.0  # deficit D = z_reduced - C(n,2) alpha beta (mod 1)
    uv = uc = 0.0  # u = alpha * (accumulated integer y-reduction) mod 1

    def _add(v, c, add):
        t = v + add
        c += (v - t) + add if abs(v) >= abs(add) else (add - t) + v
        return t, c

    for i in range(n_steps):
        xv, xc = _add(xv, xc, alpha)
        # z += alpha * y with the previous reduced y; the deficit against
        # the unreduced y is u, which goes into D
        zv, zc = _add(zv, zc, alpha * yv)
        zv, zc = _add(zv, zc, alpha * yc)
        dv, dc = _add(dv, dc, uv)
        dv, dc = _add(dv, dc, uc)
        yv, yc = _add(yv, yc, beta)
        fx = math.floor(xv)
        xv -= fx
        fy = math.floor(yv)
        yv -= fy
        if fy:
            jump = -(xv + fx + xc) * fy  # pre-reduction x times the shift
            zv, zc = _add(zv, zc, jump)
            dv, dc = _add(dv, dc, jump)
            uv, uc = _add(uv, uc, -alpha * fy)
            uv -= math.floor(uv + uc)
        zv -= math.floor(zv + zc)
        dv -= math.floor(dv + dc)
        x[i] = xv
        y[i] = yv
        zi = zv + zc
        z[i] = zi + 1.0 if zi < 0.0 else (zi - 1.0 if zi >= 1.0 else zi)
        ci = -(dv + dc)
        ci -= math.floor(ci)
        corr[i] = ci if ci < 1.0 else 0.0
    return x, y, z, corr
