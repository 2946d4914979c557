import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from mulab import nilseq
from mulab.errors import ConfigError, DegreeCap, ZeroFrequency
from mulab.nilseq import HeisenbergPoint, OrbitSpec

SQRT2M1 = nilseq.NAMED_CONSTANTS["sqrt2m1"]
SQRT3M1 = nilseq.NAMED_CONSTANTS["sqrt3m1"]


def test_zero_generator_constant_orbit():
    orb = nilseq.heisenberg_orbit(OrbitSpec(0.0, 0.0, 10))
    assert np.all(orb.x == 0) and np.all(orb.y == 0) and np.all(orb.z == 0)


def test_orbit_z_equals_binomial_phase():
    # z + corr = C(n,2) alpha beta mod 1, exactly in rational arithmetic
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, 10**4))
    ab = Fraction(SQRT2M1) * Fraction(SQRT3M1)
    worst = 0.0
    for i in range(len(orb)):
        n = i + 1
        want = float((n * (n - 1) // 2 * ab) % 1)
        got = (orb.z[i] + orb.corr[i]) % 1.0
        worst = max(worst, abs(np.exp(2j * np.pi * got) - np.exp(2j * np.pi * want)))
    assert worst <= 1e-12


def test_orbit_matches_matrix_oracle():
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, 10**4))
    mx, my, mz = oracles.heisenberg_matrix_orbit(SQRT2M1, SQRT3M1, 10**4)
    assert np.max(np.abs(orb.x - mx)) <= 1e-9
    assert np.max(np.abs(orb.y - my)) <= 1e-9
    assert np.max(np.abs(orb.z - mz)) <= 1e-9


def test_orbit_in_fundamental_domain():
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, 5000))
    for arr in (orb.x, orb.y, orb.z):
        assert np.all(arr >= 0.0) and np.all(arr < 1.0)


def test_reduce_idempotent():
    p = HeisenbergPoint(2.7, -1.3, 5.25)
    r = p.reduced()
    assert 0 <= r.x < 1 and 0 <= r.y < 1 and 0 <= r.z < 1
    again = r.reduced()
    assert (again.x, again.y, again.z) == (r.x, r.y, r.z)


def test_orbit_points_accessor():
    orb = nilseq.heisenberg_orbit(OrbitSpec(0.25, 0.5, 4))
    pts = orb.points()
    assert len(pts) == 4
    assert pts[0].x == pytest.approx(0.25)
    with pytest.raises(ConfigError):
        OrbitSpec(0.1, 0.2, 0)


def test_vertical_character_trivial_and_degenerate():
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, 100))
    assert np.all(nilseq.vertical_character_eval(orb, 0) == 1.0)
    degenerate = nilseq.heisenberg_orbit(OrbitSpec(0.0, SQRT3M1, 100))
    vals = nilseq.vertical_character_eval(degenerate, 1)
    assert np.max(np.abs(vals - 1.0)) < 1e-12


def test_vertical_character_equidistributes():
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, 10**5))
    vals = nilseq.vertical_character_eval(orb, 1)
    assert abs(np.mean(vals)) <= 0.05


def test_char_difference_identity_exact_small():
    for alpha, h in ((0.31637, 1), (SQRT2M1, 3), (0.725, 7)):
        res = nilseq.char_difference_identity(alpha, h, 1000)
        assert res["max_error"] <= 1e-12


def test_char_difference_identity_rational_collapse():
    res = nilseq.char_difference_identity(0.25, 2, 1000)
    assert res["beta"] == 0.0
    assert res["constant"] == pytest.approx(1.0, abs=1e-12)
    assert res["max_error"] <= 1e-12


def test_char_difference_identity_long_range():
    res = nilseq.char_difference_identity(SQRT2M1, 1, 10**6)
    assert res["max_error"] <= 1e-9
    assert res["beta"] == pytest.approx(float((2 * Fraction(SQRT2M1)) % 1), abs=1e-15)


def test_weyl_linear_phase_geometric_bound():
    n = 10**5
    pts = np.mod(np.arange(1, n + 1, dtype=np.float64) * SQRT2M1, 1.0)
    res = nilseq.weyl_test(pts, [1])
    dist = min(SQRT2M1, 1 - SQRT2M1)
    assert res["max"] <= max(1.0 / (2 * n * dist), 1e-4)


def test_weyl_degenerate_point_mass():
    res = nilseq.weyl_test(np.zeros(100), [1])
    assert res["max"] == 1.0


def test_weyl_rejects_zero_frequency():
    with pytest.raises(ZeroFrequency):
        nilseq.weyl_test(np.linspace(0, 1, 50), [0])
    with pytest.raises(ZeroFrequency):
        nilseq.weyl_test(np.zeros((50, 2)), [(0, 0)])


def test_weyl_heisenberg_marginals():
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, 10**5))
    pts = np.stack([orb.x, orb.y], axis=1)
    res = nilseq.weyl_test(pts, [(1, 0), (0, 1), (2, -1)])
    assert res["max"] <= 0.05


def test_weyl_phase_shift_invariance(rng):
    pts = rng.random(2000)
    base = nilseq.weyl_test(pts, [3])["max"]
    shifted = nilseq.weyl_test(np.mod(pts + 0.37, 1.0), [3])["max"]
    assert abs(base - shifted) <= 1e-12


def test_poly_phase_basics():
    assert np.all(nilseq.poly_phase([0.0], 1, 50) == 1.0)
    vals = nilseq.poly_phase([0.0, 0.0, 0.5], 1, 101)
    want = np.where(np.arange(1, 101) % 2 == 0, 1.0, -1.0)
    assert np.max(np.abs(vals - want)) < 1e-12
    with pytest.raises(DegreeCap):
        nilseq.poly_phase([0.1] * 10, 1, 10)


def test_quadratic_phase_matches_vertical_character():
    # C(n,2) alpha beta = (n^2 - n) alpha beta / 2: the vertical character
    # on the orbit equals the quadratic phase once the reduction correction
    # is folded back in
    n = 1000
    orb = nilseq.heisenberg_orbit(OrbitSpec(SQRT2M1, SQRT3M1, n))
    ab2 = float(Fraction(SQRT2M1) * Fraction(SQRT3M1) / 2)
    poly = nilseq.poly_phase([0.0, -ab2, ab2], 1, n + 1)
    folded = np.exp(2j * np.pi * (orb.z + orb.corr))
    assert np.max(np.abs(folded - poly)) <= 1e-9


def test_named_constants():
    assert nilseq.named_real("sqrt2m1") == pytest.approx(math.sqrt(2) - 1)
    assert nilseq.named_real("0.125") == 0.125
    assert nilseq.named_real(0.5) == 0.5
