"""Kernel dispatch: numba-compiled loops by default, numpy fallback on demand.

Set MULAB_DISABLE_NUMBA=1 (or install without numba) to select the pure
numpy path.  The selected backend is fixed at import time; benchmarks and
tests that want to compare both paths import _kernels_nb / _kernels_np
directly.
"""

from __future__ import annotations

import os

from . import _kernels_np

_flag = os.environ.get("MULAB_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag in {"1", "true", "yes", "on"}

if not _disabled:
    try:
        from . import _kernels_nb as _impl

        NUMBA_ENABLED = True
    except ImportError:  # numba not installed
        _impl = _kernels_np
        NUMBA_ENABLED = False
else:
    _impl = _kernels_np
    NUMBA_ENABLED = False


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


liouville_segment = _impl.liouville_segment
mobius_segment = _impl.mobius_segment
phase_segment = _impl.phase_segment
kahan_sum_complex = _impl.kahan_sum_complex
kahan_sum_f64 = _impl.kahan_sum_f64
harmonic_mass = _impl.harmonic_mass
weighted_inv_sum_complex = _impl.weighted_inv_sum_complex
weighted_inv_sum_i8 = _impl.weighted_inv_sum_i8
corr_product_sum_i8 = _impl.corr_product_sum_i8
corr_product_logsum_i8 = _impl.corr_product_logsum_i8
corr_product_sum_complex = _impl.corr_product_sum_complex
corr_product_logsum_complex = _impl.corr_product_logsum_complex
pattern_counts = _impl.pattern_counts
pattern_logweights = _impl.pattern_logweights
katai_pair_complex = _impl.katai_pair_complex
u2_direct = _impl.u2_direct
u2_recursive = _impl.u2_recursive
u3_direct = _impl.u3_direct
u3_recursive = _impl.u3_recursive
box_corr_level1 = _impl.box_corr_level1
window_abs_mean = _impl.window_abs_mean
mscan_grid = _impl.mscan_grid
poly_phase_diffs = _impl.poly_phase_diffs
heisenberg_orbit = _impl.heisenberg_orbit
