import json
import math

import numpy as np
import pytest

from mulab import averaging, furstenberg, seqgen
from mulab.averaging import IntervalScheme
from mulab.errors import CoverageGap, MismatchedSources, NonsignValues
from mulab.seqgen import SequenceBlock, SyntheticSpec


def test_alternating_length_one():
    alt = seqgen.materialize(SyntheticSpec.alternating(), 1, 10**4 + 4)
    m = furstenberg.empirical_measure(alt, (0, 10**4), 1)
    assert m.frequencies.tolist() == [0.5, 0.5]


def test_constant_point_mass():
    const = seqgen.materialize(SyntheticSpec.constant(1), 1, 2000)
    for ell in (1, 3, 5):
        m = furstenberg.empirical_measure(const, (0, 1000), ell)
        assert m.frequencies[0] == 1.0
        assert math.fsum(m.frequencies.tolist()) == 1.0


def test_liouville_signed_mean_identity(lam_1m):
    n = 10**6
    m = furstenberg.empirical_measure(lam_1m, (0, n), 1)
    mean = averaging.cesaro_avg(lam_1m, (0, n)).real
    delta = m.frequencies[0] - m.frequencies[1]
    assert abs(delta - mean) < 1e-12
    assert abs(delta) <= 0.006


def test_invariance_defect_constant_zero():
    const = seqgen.materialize(SyntheticSpec.constant(1), 1, 2000)
    m1 = furstenberg.empirical_measure(const, (0, 1000), 2)
    m2 = furstenberg.empirical_measure(const, (0, 1000), 3)
    assert furstenberg.invariance_defect(m1, m2) == 0.0


def test_invariance_defect_boundary_bound(lam_1m, rng):
    n = 10**4
    for ell in (1, 2, 3):
        m1 = furstenberg.empirical_measure(lam_1m, (0, n), ell)
        m2 = furstenberg.empirical_measure(lam_1m, (0, n), ell + 1)
        assert furstenberg.invariance_defect(m1, m2) <= (ell + 1) / n
    vals = (rng.integers(0, 2, 2100) * 2 - 1).astype(np.int8)
    blk = SequenceBlock(1, vals, "sign1bit")
    m1 = furstenberg.empirical_measure(blk, (0, 2000), 3)
    m2 = furstenberg.empirical_measure(blk, (0, 2000), 4)
    assert furstenberg.invariance_defect(m1, m2) <= 4 / 2000


def test_invariance_defect_liouville_1m(lam_1m):
    n = 10**6
    m3 = furstenberg.empirical_measure(lam_1m, (0, n), 3)
    m4 = furstenberg.empirical_measure(lam_1m, (0, n), 4)
    assert furstenberg.invariance_defect(m3, m4) <= 4e-6


def test_mismatched_sources(lam_1m):
    m1 = furstenberg.empirical_measure(lam_1m, (0, 1000), 2)
    m2 = furstenberg.empirical_measure(lam_1m, (0, 2000), 3)
    with pytest.raises(MismatchedSources):
        furstenberg.invariance_defect(m1, m2)
    m3 = furstenberg.empirical_measure(lam_1m, (0, 1000), 4)
    with pytest.raises(MismatchedSources):
        furstenberg.invariance_defect(m1, m3)


def test_measure_errors(mob_100k, lam_100k):
    with pytest.raises(NonsignValues):
        furstenberg.empirical_measure(mob_100k, (0, 100), 2)
    with pytest.raises(CoverageGap):
        furstenberg.empirical_measure(lam_100k, (0, 10**5 + 63), 3)


def test_report_schema(lam_100k):
    m = furstenberg.empirical_measure(lam_100k, (0, 1000), 2, kind="log")
    rep = m.report()
    assert set(rep) == {"ell", "kind", "interval", "frequencies"}
    keys = list(rep["frequencies"])
    assert keys == sorted(keys)
    assert set(keys) == {"++", "+-", "-+", "--"}
    json.dumps(rep)


def test_ergodicity_constant_exact_zero():
    const = seqgen.materialize(SyntheticSpec.constant(1), 1, 3000)
    sch = IntervalScheme.prefixes([1000])
    rep = furstenberg.ergodicity_diagnostic(const, sch, n_cap=100)
    assert rep.max_deviation == 0.0


def test_ergodicity_alternating_small():
    n = 10**6
    alt = seqgen.materialize(SyntheticSpec.alternating(), 1, n + 10**4 + 40)
    sch = IntervalScheme.prefixes([n])
    rep = furstenberg.ergodicity_diagnostic(alt, sch, n_cap=10**4)
    assert rep.max_deviation <= 1e-3


def test_ergodicity_block_sign_a_refuted():
    # scales matched to the block structure: shift window n_cap well below
    # the block length sqrt(N), so shifted products stay inside blocks
    n = 10**6
    blk = seqgen.materialize(SyntheticSpec.block_sign_a(), 1, n + 1100)
    sch = IntervalScheme.prefixes([n])
    rep = furstenberg.ergodicity_diagnostic(blk, sch, n_cap=1000)
    diag = [p for p in rep.pairs if p.b_shifts == (0,) and p.c_shifts == (0,)]
    assert diag[0].deviation >= 0.1
    assert rep.max_deviation >= 0.1


def test_ergodicity_deterministic(lam_1m):
    sch = IntervalScheme.prefixes([10**5])
    r1 = furstenberg.ergodicity_diagnostic(lam_1m, sch, n_cap=500, seed=3)
    r2 = furstenberg.ergodicity_diagnostic(lam_1m, sch, n_cap=500, seed=3)
    assert r1.max_deviation == r2.max_deviation
    assert [p.lhs for p in r1.pairs] == [p.lhs for p in r2.pairs]


def test_bernoulli_divergence_exact():
    freqs = np.full(4, 0.25)
    m = furstenberg.EmpiricalMeasure(2, "cesaro", (0, 100), freqs, 100.0)
    d = furstenberg.bernoulli_divergence(m)
    assert d["total_variation"] == 0.0 and d["max_pattern_gap"] == 0.0


def test_bernoulli_divergence_point_mass():
    freqs = np.array([1.0, 0.0, 0.0, 0.0])
    m = furstenberg.EmpiricalMeasure(2, "cesaro", (0, 100), freqs, 100.0)
    d = furstenberg.bernoulli_divergence(m)
    assert d["total_variation"] == pytest.approx(0.75, abs=1e-15)
    assert d["max_pattern_gap"] == pytest.approx(0.75, abs=1e-15)


def test_liouville_bernoulli_gap(lam_1m):
    # the 1/n weights put ~1/3 of the mass below n = 100 where patterns are
    # biased, so the log gap decays only like 1/log N: about 0.063 at 1e6
    m = furstenberg.empirical_measure(lam_1m, (0, 10**6), 3, kind="log")
    d = furstenberg.bernoulli_divergence(m)
    assert d["max_pattern_gap"] <= 0.07
    # the Cesaro frequencies are nearly exactly Bernoulli already at 1e6
    mc = furstenberg.empirical_measure(lam_1m, (0, 10**6), 3, kind="cesaro")
    dc = furstenberg.bernoulli_divergence(mc)
    assert dc["max_pattern_gap"] <= 0.001
