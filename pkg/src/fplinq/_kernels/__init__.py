"""Hot per-iteration kernels with a compiled core and a numpy fallback.

The compiled extension (``fplinq._kernels._core``, Cython + LAPACK) is
selected at import when present; set ``FPLINQ_PURE_PYTHON=1`` to force the
pure-numpy reference implementation. Both backends implement the same six
array-in/array-out functions and are cross-checked for equality in the test
suite; ``benchmarks/bench_kernels.py`` compares their speed.
"""

import os

from . import numpy_ref

if os.environ.get("FPLINQ_PURE_PYTHON"):
    _impl = numpy_ref
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = numpy_ref

received_cov = _impl.received_cov
aux_update = _impl.aux_update
tx_quadratic = _impl.tx_quadratic
candidate_beams = _impl.candidate_beams
pair_rates = _impl.pair_rates
scheduled_rates = _impl.scheduled_rates


def backend_name():
    return "compiled" if _impl is not numpy_ref else "numpy"
