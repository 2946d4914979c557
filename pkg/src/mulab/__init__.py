"""mulab: finite-scale statistics of bounded multiplicative functions.

Sequence generation (Liouville, Moebius, Dirichlet characters, custom
multiplicative functions, synthetic test sequences), Cesaro/logarithmic
averaging over interval schemes, Chowla-type correlations and sign-pattern
densities, Gowers-type uniformity norms and local seminorms, pretentious
distance scans, empirical shift-invariant measures with an ergodicity
diagnostic, and Heisenberg nilsequence equidistribution tests.
"""

__version__ = "0.1.0"

from ._kernels import NUMBA_ENABLED, backend  # noqa: F401
from .seqgen import (  # noqa: F401
    MultFuncSpec,
    SequenceBlock,
    SyntheticSpec,
    materialize,
    sieve_liouville,
    sieve_mobius,
)
