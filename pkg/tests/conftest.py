import numpy as np
import pytest

from mulab import seqgen


@pytest.fixture(scope="session")
def lam_100k():
    """Liouville block covering [1, 1e5] with slack for shifts."""
    return seqgen.sieve_liouville(1, 10**5 + 64)


@pytest.fixture(scope="session")
def lam_1m():
    return seqgen.sieve_liouville(1, 10**6 + 2 * 10**4 + 64)


@pytest.fixture(scope="session")
def mob_100k():
    return seqgen.sieve_mobius(1, 10**5 + 64)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
