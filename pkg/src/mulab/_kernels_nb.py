"""Numba-compiled loop kernels (default hot path).

Signatures mirror _kernels_np; integer outputs are bit-identical to the
numpy path, float reductions use Kahan compensation and agree with the
numpy path to ~1e-13.  All kernels are nogil so the chunk pool in
mulab.parallel gets real thread parallelism.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_OPTS = dict(cache=True, nogil=True)


@njit(**_OPTS)
def liouville_segment(start, length, primes):
    end = start + length
    out = np.ones(length, dtype=np.int8)
    prod = np.ones(length, dtype=np.int64)
    for idx in range(len(primes)):
        p = primes[idx]
        q = p
        while q < end:
            j0 = ((start + q - 1) // q) * q - start
            for j in range(j0, length, q):
                out[j] = -out[j]
                prod[j] *= p
            if q > (end - 1) // p:
                break
            q *= p
    for j in range(length):
        if prod[j] != start + j:
            out[j] = -out[j]
    return out


@njit(**_OPTS)
def mobius_segment(start, length, primes):
    end = start + length
    out = np.ones(length, dtype=np.int8)
    prod = np.ones(length, dtype=np.int64)
    for idx in range(len(primes)):
        p = primes[idx]
        j0 = ((start + p - 1) // p) * p - start
        for j in range(j0, length, p):
            out[j] = -out[j]
            prod[j] *= p
        p2 = p * p
        if p2 < end:
            j0 = ((start + p2 - 1) // p2) * p2 - start
            for j in range(j0, length, p2):
                out[j] = 0
    for j in range(length):
        if out[j] != 0 and prod[j] != start + j:
            out[j] = -out[j]
    return out


@njit(**_OPTS)
def phase_segment(start, length, primes, prime_phases, vanish_high_powers):
    end = start + length
    phase = np.zeros(length, dtype=np.float64)
    zero = np.zeros(length, dtype=np.bool_)
    prod = np.ones(length, dtype=np.int64)
    for idx in range(len(primes)):
        p = primes[idx]
        ph = prime_phases[idx]
        q = p
        k = 0
        while q < end:
            k += 1
            j0 = ((start + q - 1) // q) * q - start
            for j in range(j0, length, q):
                if vanish_high_powers and k == 2:
                    zero[j] = True
                phase[j] += ph
                prod[j] *= p
            if q > (end - 1) // p:
                break
            q *= p
    return phase, zero, prod


@njit(**_OPTS)
def kahan_sum_complex(values):
    sr = 0.0
    cr = 0.0
    si = 0.0
    ci = 0.0
    for k in range(len(values)):
        v = values[k]
        y = v.real - cr
        t = sr + y
        cr = (t - sr) - y
        sr = t
        y = v.imag - ci
        t = si + y
        ci = (t - si) - y
        si = t
    return complex(sr, si)


@njit(**_OPTS)
def kahan_sum_f64(values):
    s = 0.0
    c = 0.0
    for k in range(len(values)):
        y = values[k] - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(**_OPTS)
def harmonic_mass(n0, length):
    s = 0.0
    c = 0.0
    for i in range(length):
        y = 1.0 / (n0 + i) - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(**_OPTS)
def weighted_inv_sum_complex(values, n0):
    sr = cr = si = ci = 0.0
    for i in range(len(values)):
        w = 1.0 / (n0 + i)
        v = values[i]
        y = v.real * w - cr
        t = sr + y
        cr = (t - sr) - y
        sr = t
        y = v.imag * w - ci
        t = si + y
        ci = (t - si) - y
        si = t
    return complex(sr, si)


@njit(**_OPTS)
def weighted_inv_sum_i8(values, n0):
    s = 0.0
    c = 0.0
    for i in range(len(values)):
        y = values[i] / (n0 + i) - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(**_OPTS)
def corr_product_sum_i8(data, bases, strides, m0, m1):
    nterms = len(bases)
    acc = 0
    for m in range(m0, m1):
        t = 1
        for j in range(nterms):
            t *= data[bases[j] + strides[j] * m]
        acc += t
    return acc


@njit(**_OPTS)
def corr_product_logsum_i8(data, bases, strides, m0, m1):
    nterms = len(bases)
    s = 0.0
    c = 0.0
    for m in range(m0, m1):
        t = 1
        for j in range(nterms):
            t *= data[bases[j] + strides[j] * m]
        y = t / m - c
        u = s + y
        c = (u - s) - y
        s = u
    return s


@njit(**_OPTS)
def corr_product_sum_complex(data, bases, strides, conj, m0, m1):
    nterms = len(bases)
    sr = cr = si = ci = 0.0
    for m in range(m0, m1):
        t = 1.0 + 0.0j
        for j in range(nterms):
            v = data[bases[j] + strides[j] * m]
            if conj[j]:
                v = v.conjugate()
            t *= v
        y = t.real - cr
        u = sr + y
        cr = (u - sr) - y
        sr = u
        y = t.imag - ci
        u = si + y
        ci = (u - si) - y
        si = u
    return complex(sr, si)


@njit(**_OPTS)
def corr_product_logsum_complex(data, bases, strides, conj, m0, m1):
    nterms = len(bases)
    sr = cr = si = ci = 0.0
    for m in range(m0, m1):
        t = 1.0 + 0.0j
        for j in range(nterms):
            v = data[bases[j] + strides[j] * m]
            if conj[j]:
                v = v.conjugate()
            t *= v
        w = 1.0 / m
        y = t.real * w - cr
        u = sr + y
        cr = (u - sr) - y
        sr = u
        y = t.imag * w - ci
        u = si + y
        ci = (u - si) - y
        si = u
    return complex(sr, si)


@njit(**_OPTS)
def pattern_counts(signs, i0, i1, ell):
    out = np.zeros(1 << ell, dtype=np.int64)
    code = 0
    for j in range(ell):
        if signs[i0 + j] == -1:
            code |= 1 << j
    out[code] += 1
    top = ell - 1
    for i in range(i0 + 1, i1):
        code >>= 1
        if signs[i + top] == -1:
            code |= 1 << top
        out[code] += 1
    return out


@njit(**_OPTS)
def pattern_logweights(signs, i0, i1, ell, n_start):
    out = np.zeros(1 << ell, dtype=np.float64)
    code = 0
    for j in range(ell):
        if signs[i0 + j] == -1:
            code |= 1 << j
    out[code] += 1.0 / n_start
    top = ell - 1
    for i in range(i0 + 1, i1):
        code >>= 1
        if signs[i + top] == -1:
            code |= 1 << top
        out[code] += 1.0 / (n_start + (i - i0))
    return out


@njit(**_OPTS)
def katai_pair_complex(data, start, p, q, count):
    sr = cr = si = ci = 0.0
    for n in range(1, count + 1):
        t = data[p * n - start] * (data[q * n - start]).conjugate()
        y = t.real - cr
        u = sr + y
        cr = (u - sr) - y
        sr = u
        y = t.imag - ci
        u = si + y
        ci = (u - si) - y
        si = u
    return complex(sr, si)


@njit(**_OPTS)
def u2_direct(a):
    n = len(a)
    s = 0.0
    c = 0.0
    for h1 in range(n):
        for h2 in range(n):
            inner = 0.0
            for m in range(n):
                i1 = m + h1
                if i1 >= n:
                    i1 -= n
                i2 = m + h2
                if i2 >= n:
                    i2 -= n
                i3 = i1 + h2
                if i3 >= n:
                    i3 -= n
                t = (a[m] * a[i1].conjugate() * a[i2].conjugate() * a[i3])
                inner += t.real
            y = inner - c
            u = s + y
            c = (u - s) - y
            s = u
    return s / n**3


@njit(**_OPTS)
def u2_recursive(a):
    n = len(a)
    s = 0.0
    c = 0.0
    for h in range(n):
        tr = 0.0
        ti = 0.0
        for m in range(n):
            i1 = m + h
            if i1 >= n:
                i1 -= n
            v = a[i1] * a[m].conjugate()
            tr += v.real
            ti += v.imag
        y = (tr * tr + ti * ti) / (n * n) - c
        u = s + y
        c = (u - s) - y
        s = u
    return s / n


@njit(**_OPTS)
def _u2_recursive_inner(a):
    n = len(a)
    s = 0.0
    for h in range(n):
        tr = 0.0
        ti = 0.0
        for m in range(n):
            i1 = m + h
            if i1 >= n:
                i1 -= n
            v = a[i1] * a[m].conjugate()
            tr += v.real
            ti += v.imag
        s += (tr * tr + ti * ti) / (n * n)
    return s / n


@njit(**_OPTS)
def u3_direct(a):
    n = len(a)
    s = 0.0
    c = 0.0
    b1 = np.empty(n, dtype=np.complex128)
    b2 = np.empty(n, dtype=np.complex128)
    for h1 in range(n):
        for m in range(n):
            i1 = m + h1
            if i1 >= n:
                i1 -= n
            b1[m] = a[m] * a[i1].conjugate()
        for h2 in range(n):
            for m in range(n):
                i2 = m + h2
                if i2 >= n:
                    i2 -= n
                b2[m] = b1[m] * b1[i2].conjugate()
            for h3 in range(n):
                inner = 0.0
                for m in range(n):
                    i3 = m + h3
                    if i3 >= n:
                        i3 -= n
                    inner += (b2[m] * b2[i3].conjugate()).real
                y = inner - c
                u = s + y
                c = (u - s) - y
                s = u
    return s / n**4


@njit(**_OPTS)
def u3_recursive(a):
    n = len(a)
    s = 0.0
    c = 0.0
    b = np.empty(n, dtype=np.complex128)
    for h in range(n):
        for m in range(n):
            i1 = m + h
            if i1 >= n:
                i1 -= n
            b[m] = a[i1] * a[m].conjugate()
        y = _u2_recursive_inner(b) - c
        u = s + y
        c = (u - s) - y
        s = u
    return s / n


@njit(**_OPTS)
def box_corr_level1(b, i0, i1, big_h):
    # E_{h in [1,H]} E_{n in [i0,i1)} b(n) conj(b(n+h)), sliding window sum
    wr = 0.0
    wi = 0.0
    for h in range(1, big_h + 1):
        v = b[i0 + h]
        wr += v.real
        wi += v.imag
    sr = cr = si = ci = 0.0
    for n in range(i0, i1):
        vn = b[n]
        # vn * conj(w)
        y = (vn.real * wr + vn.imag * wi) - cr
        t = sr + y
        cr = (t - sr) - y
        sr = t
        y = (vn.imag * wr - vn.real * wi) - ci
        t = si + y
        ci = (t - si) - y
        si = t
        if n + 1 < i1:
            vout = b[n + 1]
            vin = b[n + 1 + big_h]
            wr += vin.real - vout.real
            wi += vin.imag - vout.imag
    denom = big_h * (i1 - i0)
    return complex(sr / denom, si / denom)


@njit(**_OPTS)
def window_abs_mean(a, i0, count, big_h):
    out = np.empty(count, dtype=np.float64)
    sr = 0.0
    si = 0.0
    for m in range(1, big_h + 1):
        v = a[i0 + m]
        sr += v.real
        si += v.imag
    out[0] = math.sqrt(sr * sr + si * si) / big_h
    for k in range(1, count):
        n = i0 + k
        vout = a[n]
        vin = a[n + big_h]
        sr += vin.real - vout.real
        si += vin.imag - vout.imag
        out[k] = math.sqrt(sr * sr + si * si) / big_h
    return out


@njit(**_OPTS)
def mscan_grid(cos_needed, phases, zero_mask, logp, invp, t_grid):
    out = np.empty(len(t_grid), dtype=np.float64)
    two_pi = 2.0 * np.pi
    for i in range(len(t_grid)):
        t = t_grid[i]
        s = 0.0
        c = 0.0
        for k in range(len(phases)):
            if zero_mask[k]:
                term = invp[k]
            else:
                term = (1.0 - math.cos(two_pi * phases[k] - t * logp[k])) * invp[k]
            y = term - c
            u = s + y
            c = (u - s) - y
            s = u
        out[i] = s
    return out


@njit(**_OPTS)
def poly_phase_diffs(diffs, count):
    deg1 = len(diffs)
    val = diffs.copy()
    comp = np.zeros(deg1, dtype=np.float64)
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


@njit(**_OPTS)
def heisenberg_orbit(alpha, beta, n_steps):
    x = np.empty(n_steps, dtype=np.float64)
    y = np.empty(n_steps, dtype=np.float64)
    z = np.empty(n_steps, dtype=np.float64)
    corr = np.empty(n_steps, dtype=np.float64)
    xv = xc = yv = yc = zv = zc = 0.0
    dv = dc = 0.0  # deficit D = z_reduced - C(n,2) alpha beta (mod 1)
    uv = uc = 0.0  # u = alpha * (accumulated integer y-reduction) mod 1
    for i in range(n_steps):
        t = xv + alpha
        if abs(xv) >= abs(alpha):
            xc += (xv - t) + alpha
        else:
            xc += (alpha - t) + xv
        xv = t
        for add in (alpha * yv, alpha * yc):
            t = zv + add
            if abs(zv) >= abs(add):
                zc += (zv - t) + add
            else:
                zc += (add - t) + zv
            zv = t
        for add in (uv, uc):
            t = dv + add
            if abs(dv) >= abs(add):
                dc += (dv - t) + add
            else:
                dc += (add - t) + dv
            dv = t
        t = yv + beta
        if abs(yv) >= abs(beta):
            yc += (yv - t) + beta
        else:
            yc += (beta - t) + yv
        yv = t
        fx = math.floor(xv)
        xv -= fx
        fy = math.floor(yv)
        yv -= fy
        if fy != 0.0:
            jump = -(xv + fx + xc) * fy
            t = zv + jump
            if abs(zv) >= abs(jump):
                zc += (zv - t) + jump
            else:
                zc += (jump - t) + zv
            zv = t
            t = dv + jump
            if abs(dv) >= abs(jump):
                dc += (dv - t) + jump
            else:
                dc += (jump - t) + dv
            dv = t
            add = -alpha * fy
            t = uv + add
            if abs(uv) >= abs(add):
                uc += (uv - t) + add
            else:
                uc += (add - t) + uv
            uv = t
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
