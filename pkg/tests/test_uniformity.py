import math

import numpy as np
import pytest

import oracles
from mulab import averaging, seqgen, uniformity
from mulab.averaging import IntervalScheme
from mulab.errors import (
    BadWindow,
    ConfigError,
    CostGuardExceeded,
    CoverageGap,
    MethodMismatch,
)
from mulab.seqgen import SequenceBlock, SyntheticSpec


def sign_block(values, start=1):
    return SequenceBlock(start, np.asarray(values, dtype=np.int8), "sign1bit")


# ---------------------------------------------------------------------------
# Gowers norms over Z_N


def test_constant_norm_is_one():
    for s in (1, 2, 3):
        assert uniformity.gowers_zn(np.ones(24), s, "recursive").value == \
            pytest.approx(1.0, abs=1e-12)


def test_methods_agree_with_product_formula(rng):
    for n in (6, 9, 12):
        a = np.exp(2j * np.pi * rng.random(n))
        want2 = oracles.gowers_product_formula(a, 2)
        for method in ("direct", "fft_u2", "recursive"):
            got = uniformity.gowers_zn(a, 2, method).value
            assert got == pytest.approx(want2, abs=1e-9), method
        want3 = oracles.gowers_product_formula(a, 3)
        for method in ("direct", "recursive"):
            got = uniformity.gowers_zn(a, 3, method).value
            assert got == pytest.approx(want3, abs=1e-9), method


def test_methods_agree_random(rng):
    for n in (16, 64):
        for _ in range(5):
            a = np.exp(2j * np.pi * rng.random(n))
            d = uniformity.gowers_zn(a, 2, "direct").value
            f = uniformity.gowers_zn(a, 2, "fft_u2").value
            r = uniformity.gowers_zn(a, 2, "recursive").value
            assert abs(d - f) < 1e-9 and abs(r - f) < 1e-9


def test_modulation_invariance(rng):
    n = 48
    a = np.exp(2j * np.pi * rng.random(n))
    mod = a * np.exp(2j * np.pi * 7 * np.arange(n) / n)
    for s in (2, 3):
        v1 = uniformity.gowers_zn(a, s, "recursive").value
        v2 = uniformity.gowers_zn(mod, s, "recursive").value
        assert abs(v1 - v2) < 1e-9


def test_shift_invariance(rng):
    n = 40
    a = np.exp(2j * np.pi * rng.random(n))
    for s in (1, 2, 3):
        v1 = uniformity.gowers_zn(a, s, "recursive").value
        v2 = uniformity.gowers_zn(np.roll(a, 13), s, "recursive").value
        assert abs(v1 - v2) < 1e-9


def test_monotonicity_in_s(rng):
    for _ in range(20):
        n = int(rng.integers(4, 65))
        a = (rng.integers(0, 2, n) * 2 - 1).astype(float)
        u1 = uniformity.gowers_zn(a, 1).value
        u2 = uniformity.gowers_zn(a, 2, "recursive").value
        u3 = uniformity.gowers_zn(a, 3, "recursive").value
        assert u1 <= u2 + 1e-9 and u2 <= u3 + 1e-9


def test_gowers_guards():
    a = np.ones(64)
    with pytest.raises(MethodMismatch):
        uniformity.gowers_zn(a, 3, "fft_u2")
    with pytest.raises(MethodMismatch):
        uniformity.gowers_zn(a, 4, "direct")
    with pytest.raises(CostGuardExceeded):
        uniformity.gowers_zn(np.ones(10**6), 2, "recursive")
    with pytest.raises(ConfigError):
        uniformity.gowers_zn(a, 0)


def test_u2_values_real_nonnegative(rng):
    for _ in range(10):
        a = np.exp(2j * np.pi * rng.random(32))
        res = uniformity.gowers_zn(a, 2, "fft_u2")
        assert res.value >= 0.0


# ---------------------------------------------------------------------------
# interval normalization U^s[N]


def test_interval_constant_is_one():
    for s in (1, 2):
        assert uniformity.gowers_interval(np.ones(64), s).value == \
            pytest.approx(1.0, abs=1e-9)


def test_interval_u1_is_normalized_partial_sum(rng):
    a = np.exp(2j * np.pi * rng.random(257))
    got = uniformity.gowers_interval(a, 1).value
    assert got == pytest.approx(abs(a.sum()) / len(a), abs=1e-12)


def test_interval_liouville_u2_trend(lam_100k):
    vals = [uniformity.gowers_interval(
        lam_100k.slice_values(1, n + 1).astype(np.complex128), 2).value
        for n in (10**3, 10**4, 10**5)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[-1] <= 0.1


# ---------------------------------------------------------------------------
# local seminorm


def test_local_seminorm_matches_bruteforce(rng):
    vals = (rng.integers(0, 2, 260) * 2 - 1).astype(np.int8)
    blk = sign_block(vals)
    sch = IntervalScheme.prefixes([60, 120])
    for s, big_h in ((1, 6), (2, 5), (3, 4)):
        res = uniformity.local_seminorm(blk, sch, s, big_h, h_ladder=[2, big_h])
        for h in (2, big_h):
            for iv in ((0, 60), (0, 120)):
                want = oracles.local_box_average(vals.astype(float), iv, s, h)
                got = res.grid[(h, iv)]
                assert abs(got - want) < 1e-10, (s, h, iv)


def test_local_seminorm_complex_conjugation(rng):
    vals = np.exp(2j * np.pi * rng.random(200))
    blk = SequenceBlock(1, vals, "complex_pair")
    sch = IntervalScheme.prefixes([80])
    res = uniformity.local_seminorm(blk, sch, 2, 4)
    want = oracles.local_box_average(vals, (0, 80), 2, 4)
    assert abs(res.grid[(4, (0, 80))] - want) < 1e-10


def test_local_seminorm_constant_one():
    blk = seqgen.materialize(SyntheticSpec.constant(1), 1, 3000)
    sch = IntervalScheme.prefixes([1000])
    for s in (1, 2):
        res = uniformity.local_seminorm(blk, sch, s, 100)
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert not res.clamped


def test_local_seminorm_block_sign_a_matched_scale():
    # H well below sqrt(N): the square-block sequence looks locally constant
    blk = seqgen.materialize(SyntheticSpec.block_sign_a(), 1, 10**6 + 300)
    sch = IntervalScheme.prefixes([10**6])
    res = uniformity.local_seminorm(blk, sch, 1, 100)
    assert res.value >= 0.9


def test_local_seminorm_block_sign_b_matched_scale():
    blk = seqgen.materialize(SyntheticSpec.block_sign_b(), 1, 10**5 + 300)
    sch = IntervalScheme.prefixes([10**5])
    res = uniformity.local_seminorm(blk, sch, 2, 100)
    assert res.value >= 0.88


def test_local_seminorm_coverage():
    blk = seqgen.materialize(SyntheticSpec.constant(1), 1, 150)
    with pytest.raises(CoverageGap):
        uniformity.local_seminorm(blk, IntervalScheme.prefixes([100]), 2, 100)


# ---------------------------------------------------------------------------
# star seminorm


def test_star_constant_one():
    blk = seqgen.materialize(SyntheticSpec.constant(1), 1, 5000)
    sch = IntervalScheme.prefixes([1000])
    for s, h in ((1, 50), (2, 50)):
        res = uniformity.local_star_seminorm(blk, sch, s, h)
        assert res.value == pytest.approx(1.0, abs=1e-9)


def test_star_block_sign_a():
    blk = seqgen.materialize(SyntheticSpec.block_sign_a(), 1, 10**6 + 500)
    sch = IntervalScheme.prefixes([10**6])
    res = uniformity.local_star_seminorm(blk, sch, 1, 100)
    assert res.value >= 0.9


def test_star_liouville_below_baseline_and_decreasing_in_h(lam_1m):
    sch = IntervalScheme.prefixes([10**5])
    v100 = uniformity.local_star_seminorm(lam_1m, sch, 2, 100,
                                          n_samples=4096).value
    v1000 = uniformity.local_star_seminorm(lam_1m, sch, 2, 1000,
                                           n_samples=2048).value
    assert v1000 < v100 < 1.0


def test_star_windowed_norm_agrees_with_gowers_interval(lam_100k):
    # spot-check the batched window evaluation against gowers_interval
    sch = IntervalScheme.single(0, 64)
    res = uniformity.local_star_seminorm(lam_100k, sch, 2, 32)
    vals = lam_100k.complex_values()
    norms = [uniformity.gowers_interval(vals[n: n + 32], 2).value
             for n in range(1, 65)]
    assert res.value == pytest.approx(float(np.mean(norms)), abs=1e-9)


def test_normequiv_cases(rng):
    blk = seqgen.materialize(SyntheticSpec.constant(1), 1, 4000)
    sch = IntervalScheme.prefixes([1000])
    chk = uniformity.normequiv_check(blk, sch, 1, 50, 100)
    assert chk.holds and chk.lhs == pytest.approx(1.0, abs=1e-9)

    per = seqgen.materialize(SyntheticSpec.poly_phase([0.0, 1.0 / 3.0]), 1, 4000)
    chk = uniformity.normequiv_check(per, sch, 2, 20, 60)
    assert chk.holds

    vals = (rng.integers(0, 2, 12000) * 2 - 1).astype(np.int8)
    blk = sign_block(vals)
    chk = uniformity.normequiv_check(blk, IntervalScheme.prefixes([10**4]),
                                     2, 100, 100)
    assert chk.holds


# ---------------------------------------------------------------------------
# inequality checkers


def test_gcs_all_ones():
    seqs = [np.ones(16)] * 3
    chk = uniformity.gcs_check(seqs, 2, 16)
    assert chk.lhs == pytest.approx(1.0, abs=1e-12)
    assert chk.rhs == pytest.approx(1.0, abs=1e-12)
    assert chk.holds


def test_gcs_zero_sequence():
    seqs = [np.ones(16), np.zeros(16), np.ones(16)]
    chk = uniformity.gcs_check(seqs, 2, 16)
    assert chk.lhs == pytest.approx(0.0, abs=1e-12)
    assert chk.rhs == pytest.approx(0.0, abs=1e-12)


def test_gcs_random_complex(rng):
    for _ in range(10):
        seqs = [np.exp(2j * np.pi * rng.random(16)) for _ in range(3)]
        chk = uniformity.gcs_check(seqs, 2, 16)
        assert chk.holds


def test_gcs_s3_small(rng):
    seqs = [np.exp(2j * np.pi * rng.random(8)) for _ in range(7)]
    chk = uniformity.gcs_check(seqs, 3, 8)
    assert chk.holds


def test_gcs_cost_guard(rng):
    with pytest.raises(CostGuardExceeded):
        uniformity.gcs_check([np.ones(128)] * 3, 2, 128)
    with pytest.raises(CostGuardExceeded):
        uniformity.gcs_check([np.ones(32)] * 7, 3, 32)


def test_nonper_all_ones():
    m = 8
    seqs = [np.ones(3 * m)] * 3
    chk = uniformity.nonperiodic_gcs_check(seqs, 2, m)
    c2 = 27 * 17
    assert chk.lhs == pytest.approx(1.0, abs=1e-12)
    assert chk.detail["bound_stated"] == pytest.approx(c2 * (1 + 1 / m), rel=1e-12)
    assert chk.holds and chk.detail["needed"] == "stated"


def test_nonper_single_spike():
    m = 8
    spike = np.zeros(3 * m)
    spike[0] = 1.0
    seqs = [spike.copy() for _ in range(3)]
    chk = uniformity.nonperiodic_gcs_check(seqs, 2, m)
    assert chk.lhs <= 1.0 / m + 1e-12
    assert chk.holds


def test_nonper_random_signs(rng):
    for _ in range(10):
        seqs = [(rng.integers(0, 2, 48) * 2 - 1).astype(float) for _ in range(3)]
        chk = uniformity.nonperiodic_gcs_check(seqs, 2, 16)
        assert chk.holds and chk.detail["needed"] == "stated"


def test_nonper_trapezoid_diagnostic(rng):
    seqs = [(rng.integers(0, 2, 24) * 2 - 1).astype(float) for _ in range(3)]
    chk = uniformity.nonperiodic_gcs_check(seqs, 2, 8, with_trapezoid=True)
    assert "trapezoid_value" in chk.detail and chk.detail["R"] >= 1
    assert chk.detail["trapezoid_value"] >= 0.0


def test_vdc_constant():
    chk = uniformity.vdc_check(np.ones(200), 100, 50)
    assert chk.holds
    assert chk.lhs == pytest.approx(1.0, abs=1e-12)
    assert chk.rhs > 1.0


def test_vdc_random_signs(rng):
    for _ in range(100):
        m = int(rng.integers(16, 200))
        r = int(rng.integers(1, m + 1))
        vals = (rng.integers(0, 2, m + r) * 2 - 1).astype(float)
        chk = uniformity.vdc_check(vals, m, r)
        assert chk.holds


def test_vdc_linear_phase_small_lhs():
    alpha = math.sqrt(2.0) - 1.0
    vals = seqgen.poly_phase_values([0.0, alpha], 1, 10**4 + 101)
    chk = uniformity.vdc_check(vals, 10**4, 100)
    assert chk.lhs < 1e-4
    assert chk.holds


def test_vdc_bad_window():
    with pytest.raises(BadWindow):
        uniformity.vdc_check(np.ones(300), 100, 101)
