"""Simulation backends: a compiled extension when available, pure Python otherwise.

Both backends implement one contract::

    simulate_packed(codes, p1, p2, p3, x0, xm1, steps, stop_below, overflow_limit)
        -> (values, status)

where ``values`` holds x[1..m] (m < steps when a guard fired) and ``status``
is one of the STATUS_* constants below.  Arithmetic order is identical in
both, and the extension is compiled without FP contraction, so the two
produce bit-identical trajectories.

Set ``PPLAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from pplab import models

STATUS_OK = 0
STATUS_OVERFLOW = 1
STATUS_UNDERFLOW = 2

CODE_PIELOU = 0
CODE_BEVERTON_HOLT = 1
CODE_RATIONAL = 2

if os.environ.get("PPLAB_PURE_PYTHON", "") not in ("", "0"):
    from pplab.kernels import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from pplab.kernels import _speedups as _impl

        BACKEND = "compiled"
    except ImportError:
        from pplab.kernels import _fallback as _impl

        BACKEND = "python"

simulate_packed = _impl.simulate_packed


def pack_system(system):
    """Encode the system's families as (codes, p1, p2, p3) kernel arrays.

    Returns None when some coefficient is a custom family the kernels cannot
    evaluate; callers then fall back to a generic step loop.
    """
    k = system.period
    codes = np.empty(k, dtype=np.int32)
    p1 = np.zeros(k, dtype=np.float64)
    p2 = np.zeros(k, dtype=np.float64)
    p3 = np.zeros(k, dtype=np.float64)
    for i, fam in enumerate(system.coefficients):
        if isinstance(fam, models.Pielou):
            codes[i] = CODE_PIELOU
            p1[i] = fam.beta
        elif isinstance(fam, models.BevertonHolt):
            codes[i] = CODE_BEVERTON_HOLT
            p1[i] = fam.lam
            p2[i] = fam.capacity
        elif isinstance(fam, models.RationalSaturating):
            codes[i] = CODE_RATIONAL
            p1[i] = fam.beta
            p2[i] = fam.alpha1
            p3[i] = fam.alpha2
        else:
            return None
    return codes, p1, p2, p3
