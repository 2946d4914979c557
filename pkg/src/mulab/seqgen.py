"""Sequence generation: Liouville/Moebius sieves, multiplicative functions,
Dirichlet characters as sequences, and the synthetic test sequences.

Blocks hold values for a contiguous range [start, end) with start >= 1.
Sign-valued data lives in int8 arrays in memory; the 1-bit / 2-bit packing
promised by the block cache applies to the on-disk format (see write_cache).
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import characters, parallel
from .errors import (
    CacheFormatError,
    ConfigError,
    InvalidRange,
    NonunitPrimeValue,
    RangeTooLarge,
)

SIGN1BIT = "sign1bit"
TRIT2BIT = "trit2bit"
COMPLEX_PAIR = "complex_pair"

COMPLETELY_MULTIPLICATIVE = "completely_multiplicative"
MULT_WITH_PRIME_POWER_RULE = "multiplicative_with_prime_power_rule"

DEFAULT_BLOCK_SIZE = 1 << 18
_CACHE_MAGIC = b"MULAB1"
_STORAGE_TAGS = {SIGN1BIT: 0, TRIT2BIT: 1, COMPLEX_PAIR: 2}
_TAG_STORAGE = {v: k for k, v in _STORAGE_TAGS.items()}


def max_range() -> int:
    """Memory budget on end-start, overridable via MULAB_MAX_RANGE."""
    return int(os.environ.get("MULAB_MAX_RANGE", str(1 << 31)))


def _check_range(start: int, end: int) -> None:
    if start < 1 or start >= end:
        raise InvalidRange(f"need 1 <= start < end, got [{start}, {end})")
    if end - start > max_range() or end >= 1 << 62:
        raise RangeTooLarge(f"range [{start}, {end}) exceeds the memory budget")


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, as an int64 array (simple Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p:: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


@dataclass(frozen=True)
class SequenceBlock:
    """Values of a sequence on [start, end), immutable after construction."""

    start: int
    values: np.ndarray
    storage: str

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def end(self) -> int:
        return self.start + len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def covers(self, n0: int, n1: int) -> bool:
        """True if the block holds every n in [n0, n1)."""
        return self.start <= n0 and n1 <= self.end

    def value_at(self, n: int):
        return self.values[n - self.start]

    def slice_values(self, n0: int, n1: int) -> np.ndarray:
        """View of the values for n in [n0, n1)."""
        return self.values[n0 - self.start: n1 - self.start]

    def is_sign_valued(self) -> bool:
        if self.storage == SIGN1BIT:
            return True
        if self.storage == TRIT2BIT:
            return bool(np.all(self.values != 0))
        return False

    def complex_values(self) -> np.ndarray:
        if self.storage == COMPLEX_PAIR:
            return self.values
        return self.values.astype(np.complex128)


@dataclass(frozen=True)
class MultFuncSpec:
    """A bounded multiplicative function given by its values at primes.

    kind is one of liouville | mobius | dirichlet | custom.  Custom specs
    map primes to phases in turns (None = value 0 at that prime, only legal
    with the prime-power vanish rule); unspecified primes default to phase 0.
    """

    kind: str
    modulus: int = 0
    index: int = 0
    prime_phase: tuple = ()
    completeness: str = COMPLETELY_MULTIPLICATIVE

    @classmethod
    def liouville(cls):
        return cls(kind="liouville")

    @classmethod
    def mobius(cls):
        return cls(kind="mobius", completeness=MULT_WITH_PRIME_POWER_RULE)

    @classmethod
    def dirichlet(cls, modulus: int, index: int):
        characters.character_table(modulus, index)  # validates index
        return cls(kind="dirichlet", modulus=modulus, index=index)

    @classmethod
    def custom(cls, prime_phase: dict, completeness: str = COMPLETELY_MULTIPLICATIVE):
        items = []
        for p, ph in sorted(prime_phase.items()):
            if ph is None:
                if completeness == COMPLETELY_MULTIPLICATIVE:
                    raise NonunitPrimeValue(
                        f"prime {p}: value 0 not allowed for a completely "
                        "multiplicative unit-valued function"
                    )
            elif not math.isfinite(ph):
                raise NonunitPrimeValue(f"prime {p}: phase must be finite or None")
            items.append((int(p), ph))
        return cls(kind="custom", prime_phase=tuple(items), completeness=completeness)

    def phase_at_primes(self, primes: np.ndarray):
        """(phases in turns, zero mask) of f at the given primes."""
        phases = np.zeros(len(primes), dtype=np.float64)
        zero = np.zeros(len(primes), dtype=bool)
        if self.kind in ("liouville", "mobius"):
            phases[:] = 0.5
        elif self.kind == "dirichlet":
            tab, ztab = characters.character_table(self.modulus, self.index)
            idx = np.asarray(primes) % self.modulus if self.modulus > 1 else np.zeros(len(primes), dtype=np.int64)
            phases[:] = tab[idx]
            zero[:] = ztab[idx]
        elif self.kind == "custom":
            lookup = dict(self.prime_phase)
            for i, p in enumerate(np.asarray(primes).tolist()):
                ph = lookup.get(p, 0.0)
                if ph is None:
                    zero[i] = True
                else:
                    phases[i] = ph % 1.0
        else:
            raise ConfigError(f"unknown multiplicative function kind {self.kind!r}")
        return phases, zero


@dataclass(frozen=True)
class SyntheticSpec:
    """Deterministic test sequences: constants, alternating signs,
    polynomial phases, the two square-block sign sequences, seeded noise."""

    kind: str
    value: complex = 1.0
    coeffs: tuple = ()
    seed: int = 0

    @classmethod
    def constant(cls, c=1.0):
        return cls(kind="constant", value=complex(c))

    @classmethod
    def alternating(cls):
        return cls(kind="alternating")

    @classmethod
    def poly_phase(cls, coeffs):
        coeffs = tuple(float(c) for c in coeffs)
        if len(coeffs) > 9:
            from .errors import DegreeCap

            raise DegreeCap(f"polynomial degree {len(coeffs) - 1} exceeds cap 8")
        return cls(kind="poly_phase", coeffs=coeffs)

    @classmethod
    def block_sign_a(cls):
        return cls(kind="block_sign_a")

    @classmethod
    def block_sign_b(cls):
        return cls(kind="block_sign_b")

    @classmethod
    def random(cls, seed: int):
        return cls(kind="random", seed=int(seed))


# ---------------------------------------------------------------------------
# sieves


def sieve_liouville(start: int, end: int, block_size: int = DEFAULT_BLOCK_SIZE,
                    jobs: int = 1) -> SequenceBlock:
    """Liouville lambda on [start, end), segmented; sign1bit storage."""
    _check_range(start, end)
    primes = primes_upto(math.isqrt(end - 1))
    parts = parallel.chunked_map(
        lambda a, b: K.liouville_segment(a, b - a, primes), start, end,
        jobs=jobs, chunk=block_size)
    return SequenceBlock(start, np.concatenate(parts), SIGN1BIT)


def sieve_mobius(start: int, end: int, block_size: int = DEFAULT_BLOCK_SIZE,
                 jobs: int = 1) -> SequenceBlock:
    """Moebius mu on [start, end), segmented; trit2bit storage."""
    _check_range(start, end)
    primes = primes_upto(math.isqrt(end - 1))
    parts = parallel.chunked_map(
        lambda a, b: K.mobius_segment(a, b - a, primes), start, end,
        jobs=jobs, chunk=block_size)
    return SequenceBlock(start, np.concatenate(parts), TRIT2BIT)


def _isqrt_array(n: np.ndarray) -> np.ndarray:
    k = np.sqrt(n).astype(np.int64)
    k = np.where((k + 1) * (k + 1) <= n, k + 1, k)
    return np.where(k * k > n, k - 1, k)


def poly_phase_values(coeffs, start: int, end: int) -> np.ndarray:
    """e(P(n)) for n in [start, end), P given by coefficients in turns.

    Evaluated by finite-difference accumulation with per-step fractional
    reduction: the table Delta^k P(start) is seeded exactly via rational
    arithmetic, then advanced with compensated additions, so the phase
    drift stays O(eps) per step even for high-degree P at large n.
    """
    from fractions import Fraction

    count = end - start
    if count <= 0:
        return np.empty(0, dtype=np.complex128)
    cf = [Fraction(float(c)) for c in coeffs]
    if not cf:
        cf = [Fraction(0)]
    deg = len(cf) - 1

    def p_exact(n):
        acc = Fraction(0)
        for c in reversed(cf):
            acc = acc * n + c
        return acc

    # Delta^k P(start) via the forward-difference formula, exact
    values = [p_exact(start + j) for j in range(deg + 1)]
    diffs = np.empty(deg + 1, dtype=np.float64)
    for k in range(deg + 1):
        acc = Fraction(0)
        for j in range(k + 1):
            acc += (-1) ** (k - j) * math.comb(k, j) * values[j]
        diffs[k] = float(acc % 1)
    phases = K.poly_phase_diffs(diffs, count)
    return np.exp(2j * np.pi * phases)


def _materialize_custom(spec: MultFuncSpec, start: int, end: int,
                        block_size: int, jobs: int) -> SequenceBlock:
    primes = primes_upto(math.isqrt(end - 1))
    phases, zero_at_p = spec.phase_at_primes(primes)
    # zero-valued small primes: handled by vanish flags per exponent >= 1
    vanish = spec.completeness == MULT_WITH_PRIME_POWER_RULE
    lookup = dict(spec.prime_phase)

    def one(a, b):
        ph, zero, prod = K.phase_segment(a, b - a, primes, phases, vanish)
        zero = zero.copy()
        n_vals = np.arange(a, b, dtype=np.int64)
        cof = n_vals // np.where(prod == 0, 1, prod)
        big = cof > 1
        if np.any(big):
            # cofactor is a single prime > sqrt(end): add its phase
            cof_big = cof[big]
            extra = np.zeros(len(cof_big), dtype=np.float64)
            ez = np.zeros(len(cof_big), dtype=bool)
            if lookup:
                for i, c in enumerate(cof_big.tolist()):
                    lph = lookup.get(c, 0.0)
                    if lph is None:
                        ez[i] = True
                    else:
                        extra[i] = lph
            ph[big] += extra
            zero[big] |= ez
        # primes with explicit zero value kill every multiple
        if np.any(zero_at_p):
            for p in np.asarray(primes)[zero_at_p].tolist():
                j0 = ((a + p - 1) // p) * p - a
                zero[j0:: p] = True
        return ph, zero

    parts = parallel.chunked_map(one, start, end, jobs=jobs, chunk=block_size)
    phase = np.concatenate([p for p, _ in parts])
    zero = np.concatenate([z for _, z in parts])
    phase = np.mod(phase, 1.0)
    if np.all((phase == 0.0) | (phase == 0.5)):
        vals = np.where(phase == 0.0, 1, -1).astype(np.int8)
        if np.any(zero):
            vals[zero] = 0
            return SequenceBlock(start, vals, TRIT2BIT)
        return SequenceBlock(start, vals, SIGN1BIT)
    vals = np.exp(2j * np.pi * phase)
    vals[zero] = 0.0
    return SequenceBlock(start, vals, COMPLEX_PAIR)


def materialize(spec, start: int, end: int, block_size: int = DEFAULT_BLOCK_SIZE,
                jobs: int = 1) -> SequenceBlock:
    """Values of a multiplicative-function or synthetic spec on [start, end)."""
    _check_range(start, end)
    if isinstance(spec, MultFuncSpec):
        if spec.kind == "liouville":
            return sieve_liouville(start, end, block_size, jobs)
        if spec.kind == "mobius":
            return sieve_mobius(start, end, block_size, jobs)
        if spec.kind == "dirichlet":
            tab, ztab = characters.character_table(spec.modulus, spec.index)
            q = max(spec.modulus, 1)
            idx = np.arange(start, end, dtype=np.int64) % q
            ph = tab[idx]
            zero = ztab[idx]
            if np.all((ph == 0.0) | (ph == 0.5)):
                vals = np.where(ph == 0.0, 1, -1).astype(np.int8)
                vals[zero] = 0
                storage = TRIT2BIT if np.any(zero) else SIGN1BIT
                return SequenceBlock(start, vals, storage)
            vals = np.exp(2j * np.pi * ph)
            vals[zero] = 0.0
            return SequenceBlock(start, vals, COMPLEX_PAIR)
        if spec.kind == "custom":
            return _materialize_custom(spec, start, end, block_size, jobs)
        raise ConfigError(f"unknown spec kind {spec.kind!r}")

    if isinstance(spec, SyntheticSpec):
        n_count = end - start
        if spec.kind == "constant":
            c = spec.value
            if c in (1 + 0j, -1 + 0j):
                return SequenceBlock(
                    start, np.full(n_count, int(c.real), dtype=np.int8), SIGN1BIT)
            return SequenceBlock(
                start, np.full(n_count, c, dtype=np.complex128), COMPLEX_PAIR)
        if spec.kind == "alternating":
            n = np.arange(start, end, dtype=np.int64)
            return SequenceBlock(
                start, np.where(n % 2 == 0, 1, -1).astype(np.int8), SIGN1BIT)
        if spec.kind == "poly_phase":
            return SequenceBlock(
                start, poly_phase_values(spec.coeffs, start, end), COMPLEX_PAIR)
        if spec.kind in ("block_sign_a", "block_sign_b"):
            n = np.arange(start, end, dtype=np.int64)
            k = _isqrt_array(n)
            if spec.kind == "block_sign_a":
                vals = np.where(k % 2 == 0, 1, -1).astype(np.int8)
            else:
                vals = np.where((n + k) % 2 == 0, 1, -1).astype(np.int8)
            return SequenceBlock(start, vals, SIGN1BIT)
        if spec.kind == "random":
            rng = np.random.default_rng(spec.seed)
            vals = (rng.integers(0, 2, size=n_count) * 2 - 1).astype(np.int8)
            return SequenceBlock(start, vals, SIGN1BIT)
        raise ConfigError(f"unknown synthetic kind {spec.kind!r}")

    raise ConfigError(f"cannot materialize object of type {type(spec).__name__}")


# ---------------------------------------------------------------------------
# block cache files: magic + u8 storage tag + u64 start + u64 length + payload


def write_cache(path, block: SequenceBlock) -> None:
    tag = _STORAGE_TAGS[block.storage]
    header = _CACHE_MAGIC + struct.pack("<BQQ", tag, block.start, len(block))
    if block.storage == SIGN1BIT:
        payload = np.packbits(block.values == 1, bitorder="little").tobytes()
    elif block.storage == TRIT2BIT:
        codes = np.zeros(len(block), dtype=np.uint8)
        codes[block.values == 1] = 1
        codes[block.values == -1] = 2
        n4 = (len(codes) + 3) // 4 * 4
        padded = np.zeros(n4, dtype=np.uint8)
        padded[: len(codes)] = codes
        quads = padded.reshape(-1, 4)
        packed = (quads[:, 0] | (quads[:, 1] << 2) | (quads[:, 2] << 4)
                  | (quads[:, 3] << 6)).astype(np.uint8)
        payload = packed.tobytes()
    else:
        payload = block.values.astype("<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_cache(path) -> SequenceBlock:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:6] != _CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {raw[:6]!r}")
    tag, start, length = struct.unpack("<BQQ", raw[6:23])
    if tag not in _TAG_STORAGE:
        raise CacheFormatError(f"{path}: unknown storage tag {tag}")
    storage = _TAG_STORAGE[tag]
    payload = raw[23:]
    if storage == SIGN1BIT:
        bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8),
                             count=length, bitorder="little")
        vals = np.where(bits == 1, 1, -1).astype(np.int8)
    elif storage == TRIT2BIT:
        packed = np.frombuffer(payload, dtype=np.uint8)
        quads = np.empty((len(packed), 4), dtype=np.uint8)
        quads[:, 0] = packed & 3
        quads[:, 1] = (packed >> 2) & 3
        quads[:, 2] = (packed >> 4) & 3
        quads[:, 3] = (packed >> 6) & 3
        codes = quads.reshape(-1)[:length]
        vals = np.zeros(length, dtype=np.int8)
        vals[codes == 1] = 1
        vals[codes == 2] = -1
    else:
        vals = np.frombuffer(payload, dtype="<c16", count=length).astype(np.complex128)
    return SequenceBlock(int(start), vals, storage)


def cache_path(cache_dir, label: str, start: int, end: int) -> str:
    return os.path.join(cache_dir, f"{label}_{start}_{end}.mulab")
