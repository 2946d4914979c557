"""Dirichlet characters mod q, built by brute force from the group structure.

(Z/q)* is decomposed into cyclic factors (for 2^e with e >= 3 the pair
<-1> x <3>, otherwise a primitive root), characters are indexed in
[0, phi(q)) by little-endian mixed radix over those factors, index 0 being
the principal character.  Values are kept as phases in turns so rational
phases stay exact; residues with gcd(n, q) > 1 carry a zero flag.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import BadCharacterIndex


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def phi(q: int) -> int:
    out = 1
    for p, e in factorize(q):
        out *= (p - 1) * p ** (e - 1)
    return out


def _primitive_root(pe: int, p: int) -> int:
    m = phi(pe)
    factors = [f for f, _ in factorize(m)]
    for g in range(2, pe):
        if math.gcd(g, pe) != 1:
            continue
        if all(pow(g, m // f, pe) != 1 for f in factors):
            return g
    raise ArithmeticError(f"no primitive root mod {pe}")


def _component_dlogs(p: int, e: int):
    """Cyclic factor sizes and discrete-log tables for (Z/p^e)*.

    Returns (pe, [(order, dlog_dict), ...]); dlog_dict maps coprime residues
    to exponents.  For 2^e, e >= 3, two factors: sign (order 2) and <3>.
    """
    pe = p**e
    if p == 2:
        if e == 1:
            return pe, [(1, {1: 0})]
        if e == 2:
            return pe, [(2, {1: 0, 3: 1})]
        half = pe // 4
        sign_log = {}
        main_log = {}
        r = 1
        for b in range(half):
            sign_log[r] = 0
            main_log[r] = b
            sign_log[pe - r] = 1
            main_log[pe - r] = b
            r = (r * 3) % pe
        return pe, [(2, sign_log), (half, main_log)]
    g = _primitive_root(pe, p)
    m = phi(pe)
    dlog = {}
    r = 1
    for k in range(m):
        dlog[r] = k
        r = (r * g) % pe
    return pe, [(m, dlog)]


@lru_cache(maxsize=None)
def _group_structure(q: int):
    comps = []
    for p, e in sorted(factorize(q)):
        comps.append(_component_dlogs(p, e))
    return comps


@lru_cache(maxsize=None)
def character_table(q: int, index: int):
    """Phases (turns) and zero flags of character `index` mod q, per residue.

    Returns (phases float64[q], zero bool[q]).
    """
    if q < 1:
        raise BadCharacterIndex(f"modulus must be >= 1, got {q}")
    nchar = phi(q)
    if not 0 <= index < nchar:
        raise BadCharacterIndex(f"character index {index} not in [0, {nchar}) for q={q}")
    phases = np.zeros(q if q > 1 else 1, dtype=np.float64)
    zero = np.zeros(q if q > 1 else 1, dtype=bool)
    if q == 1:
        phases.setflags(write=False)
        zero.setflags(write=False)
        return phases, zero
    comps = _group_structure(q)
    # split index into per-factor exponents, little-endian
    js = []
    rem = index
    for _, factors in comps:
        for order, _ in factors:
            js.append(rem % order)
            rem //= order
    for n in range(q):
        if math.gcd(n, q) != 1:
            zero[n] = True
            continue
        ph = 0.0
        pos = 0
        for pe, factors in comps:
            npe = n % pe
            for order, dlog in factors:
                ph += js[pos] * dlog[npe] / order
                pos += 1
        phases[n] = ph % 1.0
    phases.setflags(write=False)
    zero.setflags(write=False)
    return phases, zero


def character_values(q: int, index: int) -> np.ndarray:
    """Complex character values per residue class mod q."""
    phases, zero = character_table(q, index)
    vals = np.exp(2j * np.pi * phases)
    vals[zero] = 0.0
    return vals


def is_real_character(q: int, index: int) -> bool:
    phases, zero = character_table(q, index)
    live = phases[~zero]
    return bool(np.all((live == 0.0) | (live == 0.5)))
