import math

import numpy as np
import pytest

import oracles
from mulab import pretentious, seqgen
from mulab.errors import ConfigError, CoverageGap
from mulab.pretentious import GridSpec
from mulab.seqgen import MultFuncSpec, SyntheticSpec

LAM = MultFuncSpec.liouville()
ONE = MultFuncSpec.custom({})


def test_distance_self_zero():
    assert pretentious.distance(LAM, LAM, 10**4).squared_distance == 0.0
    spec = MultFuncSpec.custom({2: 0.25, 5: 0.1})
    assert pretentious.distance(spec, spec, 1000).squared_distance == 0.0


def test_distance_liouville_to_one():
    d = pretentious.distance(LAM, ONE, 100)
    expect = 2 * sum(1.0 / p for p in oracles.primes_trial(100))
    assert d.prime_count == 25
    assert d.squared_distance == pytest.approx(expect, abs=1e-12)


def test_distance_character_zero_convention():
    # lambda * principal character mod 2 differs from lambda only at p = 2,
    # where the character vanishes: the term is (1 - 0)/2
    table = {int(p): 0.5 for p in oracles.primes_trial(100)}
    table[2] = None
    lam_chi = MultFuncSpec.custom(
        table, completeness=seqgen.MULT_WITH_PRIME_POWER_RULE)
    d = pretentious.distance(LAM, lam_chi, 100)
    assert d.squared_distance == pytest.approx(0.5, abs=1e-12)


def test_distance_symmetry_and_monotonicity():
    g = MultFuncSpec.dirichlet(4, 1)
    d1 = pretentious.distance(LAM, g, 10**3).squared_distance
    d1r = pretentious.distance(g, LAM, 10**3).squared_distance
    assert d1 == d1r
    d2 = pretentious.distance(LAM, g, 10**4).squared_distance
    assert d2 >= d1


def test_mscan_constant_one():
    res = pretentious.m_scan(ONE, 1000)
    assert res.min_value <= 1e-9
    assert res.argmin_t == pytest.approx(0.0, abs=1e-9)


def test_mscan_archimedean_twist_recovered():
    # f(p) = p^{i t0} with t0 = 1: phases log(p)/(2 pi) turns
    n = 1000
    phases = {int(p): math.log(p) / (2 * math.pi) % 1.0
              for p in oracles.primes_trial(n)}
    spec = MultFuncSpec.custom(phases)
    res = pretentious.m_scan(spec, n)
    assert res.min_value <= 1e-9
    assert abs(res.argmin_t - 1.0) <= 0.01


def test_mscan_min_at_most_t0_value():
    res = pretentious.m_scan(LAM, 10**3)
    d0 = pretentious.distance(LAM, ONE, 10**3).squared_distance
    assert res.min_value <= d0 + 1e-12
    # t = 0 is on the grid; the grid value there matches the distance
    i0 = int(np.argmin(np.abs(res.t_grid)))
    assert res.t_grid[i0] == 0.0
    assert res.d2_values[i0] == pytest.approx(d0, abs=1e-9)


def test_mscan_liouville_increasing():
    vals = [pretentious.m_scan(LAM, n).min_value for n in (10**3, 10**4, 10**5)]
    assert vals[0] < vals[1] < vals[2]


def test_mscan_grid_validation():
    with pytest.raises(ConfigError):
        pretentious.m_scan(LAM, 10**3, GridSpec(window=1e6, step=1e-9))
    with pytest.raises(ConfigError):
        pretentious.distance(LAM, ONE, 1)


def test_strong_aperiodicity_liouville():
    rows, growth = pretentious.strong_aperiodicity_scan(
        LAM, [10**3, 10**4], 3)
    assert growth
    assert len(rows) == (1 + 1 + 2) * 2  # q=1,2,3 have phi 1,1,2; two N's


def test_strong_aperiodicity_principal_self():
    chi0 = MultFuncSpec.dirichlet(4, 0)
    rows, growth = pretentious.strong_aperiodicity_scan(
        chi0, [10**3, 10**4], 4)
    assert not growth
    # the (q=4, principal) row stalls at 1/2: only the vanished prime 2
    # contributes, and t = 0 kills every other term
    r4 = [r for r in rows if r.modulus == 4 and r.index == 0]
    for r in r4:
        assert r.min_value == pytest.approx(0.5, abs=1e-9)


def test_strong_aperiodicity_third_root_phases():
    # f(p) = e(1/3) for all p: rows grow like (1 - cos(2pi/3)) sum 1/p
    # unless a character cancels the phase, which no real character can
    primes = oracles.primes_trial(10**4)
    spec = MultFuncSpec.custom({int(p): 1.0 / 3.0 for p in primes})
    rows, growth = pretentious.strong_aperiodicity_scan(spec, [10**3, 10**4], 3)
    assert growth


def test_aperiodicity_test_cases(lam_1m):
    const = seqgen.materialize(SyntheticSpec.constant(1), 1, 1001)
    assert pretentious.aperiodicity_test(const, 1, 0, 1000) == 1.0
    assert pretentious.aperiodicity_test(lam_1m, 1, 0, 10**6) <= 0.005
    chi = seqgen.materialize(MultFuncSpec.dirichlet(4, 1), 1, 4 * 10**4 + 2)
    assert pretentious.aperiodicity_test(chi, 4, 1, 10**4) == 1.0
    with pytest.raises(CoverageGap):
        pretentious.aperiodicity_test(const, 2, 0, 1000)


def test_q_max_budget():
    with pytest.raises(ConfigError):
        pretentious.strong_aperiodicity_scan(LAM, [100], 101)
