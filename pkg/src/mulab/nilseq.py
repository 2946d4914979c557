"""Heisenberg nilmanifold orbits in Malcev coordinates, vertical character
evaluation, the quadratic-phase difference identity, polynomial phases, and
Weyl equidistribution sums.

The Heisenberg group multiplies as (x,y,z)(x',y',z') = (x+x', y+y',
z+z'+x y'); the lattice of integer points acts on the right, and reduction
to the fundamental domain subtracts integer parts of x and y (with the
induced z correction) and then reduces z mod 1.  Orbit entry i holds
b^{i+1} e_X for b = (alpha, beta, 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels as K
from .errors import ConfigError, DegreeCap, ZeroFrequency
from .seqgen import poly_phase_values

NAMED_CONSTANTS = {
    "sqrt2m1": math.sqrt(2.0) - 1.0,
    "sqrt3m1": math.sqrt(3.0) - 1.0,
    "golden": (math.sqrt(5.0) - 1.0) / 2.0,
}


def named_real(value) -> float:
    """Decimal or one of the named generator constants."""
    if isinstance(value, str) and value in NAMED_CONSTANTS:
        return NAMED_CONSTANTS[value]
    return float(value)


@dataclass(frozen=True)
class HeisenbergPoint:
    x: float
    y: float
    z: float

    def reduced(self) -> "HeisenbergPoint":
        """Right-multiply by the lattice element bringing coordinates to
        [0,1); idempotent on already-reduced points."""
        fx = math.floor(self.x)
        fy = math.floor(self.y)
        z = self.z - self.x * fy
        return HeisenbergPoint(self.x - fx, self.y - fy, z - math.floor(z))


@dataclass(frozen=True)
class OrbitSpec:
    alpha: float
    beta: float
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ConfigError(f"orbit length must be >= 1, got {self.length}")


@dataclass(frozen=True)
class HeisenbergOrbit:
    """Reduced orbit coordinates plus the accumulated non-integer part of
    the z reductions (corr), so z + corr = C(n,2) alpha beta mod 1."""

    spec: OrbitSpec
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    corr: np.ndarray

    def __len__(self) -> int:
        return self.spec.length

    def point(self, i: int) -> HeisenbergPoint:
        return HeisenbergPoint(float(self.x[i]), float(self.y[i]), float(self.z[i]))

    def points(self) -> list:
        return [self.point(i) for i in range(len(self))]


def heisenberg_orbit(spec: OrbitSpec) -> HeisenbergOrbit:
    """Orbit of the identity coset under left multiplication by
    b = (alpha, beta, 0), reduced to the fundamental domain each step."""
    x, y, z, corr = K.heisenberg_orbit(float(spec.alpha), float(spec.beta),
                                       int(spec.length))
    for arr in (x, y, z, corr):
        arr.setflags(write=False)
    return HeisenbergOrbit(spec, x, y, z, corr)


def vertical_character_eval(orbit: HeisenbergOrbit, k: int) -> np.ndarray:
    """e(k z_n) along the orbit: the frequency-k vertical character read in
    fundamental-domain coordinates.

    The fundamental-domain section is discontinuous on a measure-zero
    boundary; correlation statistics tolerate this.  k = 0 gives the
    trivial character (constant 1).
    """
    if k == 0:
        return np.ones(len(orbit), dtype=np.complex128)
    return np.exp(2j * np.pi * k * orbit.z)


def exact_frac(coeff: int, value: float) -> float:
    """coeff * value mod 1 computed exactly via rationals."""
    return float((coeff * Fraction(value)) % 1)


def char_difference_identity(alpha: float, h: int, n_max: int) -> dict:
    """Check e((n+h)^2 a) conj(e(n^2 a)) = e(h^2 a) e(2 h a n) on [1, n_max].

    Returns the max pointwise error, the reduced linear frequency
    beta = 2 h alpha mod 1, and the constant e(h^2 alpha).
    """
    if h < 1:
        raise ConfigError(f"need h >= 1, got {h}")
    lhs = (poly_phase_values((0.0, 0.0, alpha), 1 + h, n_max + 1 + h)
           * np.conj(poly_phase_values((0.0, 0.0, alpha), 1, n_max + 1)))
    beta = exact_frac(2 * h, alpha)
    const = np.exp(2j * np.pi * exact_frac(h * h, alpha))
    rhs = const * poly_phase_values((0.0, beta), 1, n_max + 1)
    max_error = float(np.max(np.abs(lhs - rhs)))
    return {"max_error": max_error, "beta": beta, "constant": complex(const)}


def weyl_test(points, freqs) -> dict:
    """|E_n e(k . x_n)| for each nonzero integer frequency (vector) k."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        raise ConfigError("need at least one point")
    if pts.ndim == 1:
        pts = pts[:, None]
    rows = []
    for k in freqs:
        kv = np.atleast_1d(np.asarray(k, dtype=np.float64))
        if kv.shape[0] != pts.shape[1]:
            raise ConfigError(
                f"frequency vector length {kv.shape[0]} != point dim {pts.shape[1]}")
        if np.all(kv == 0):
            raise ZeroFrequency("zero frequency vector rejected")
        phase = pts @ kv
        s = np.mean(np.exp(2j * np.pi * phase))
        rows.append((tuple(int(c) for c in kv), float(abs(s))))
    return {"sums": rows, "max": max(v for _, v in rows)}


def poly_phase(coeffs, start: int, end: int) -> np.ndarray:
    """e(P(n)) for n in [start, end), coefficients in turns, degree <= 8."""
    coeffs = tuple(float(c) for c in coeffs)
    if len(coeffs) > 9:
        raise DegreeCap(f"degree {len(coeffs) - 1} exceeds the cap of 8")
    return poly_phase_values(coeffs, start, end)
