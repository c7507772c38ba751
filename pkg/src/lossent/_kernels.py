"""Hot loops: loss-channel action on one mode of a two-mode density tensor,
and the first-index argmin over tail ratios.

Each kernel has a numba implementation and a pure-numpy one.  The numba
path is used when numba imports and ``LOSSENT_NUMBA`` is not set to a false
value (``0``, ``false``, ``no``, ``off``).  Both implementations are always
importable under explicit names so tests and benchmarks can compare them.
"""

import os

import numpy as np

_FALSE = {"0", "false", "no", "off"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is optional
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("LOSSENT_NUMBA", "1").strip().lower() not in _FALSE


def loss_first_mode_numpy(rho4, weights):
    """Apply the loss channel to the first mode of ``rho4[i, b, j, c]``.

    ``weights[n, k]`` is the matrix element <k|V_n|k+n>.  The output is

        out[i, b, j, c] = sum_n weights[n, i] * weights[n, j] * rho4[i+n, b, j+n, c]
    """
    d = rho4.shape[0]
    out = np.zeros_like(rho4)
    for n in range(d):
        m = d - n
        w = weights[n, :m]
        out[:m, :, :m, :] += (
            w[:, None, None, None] * w[None, None, :, None] * rho4[n:, :, n:, :]
        )
    return out


def min_ratio_numpy(num, den):
    """(min, first argmin) of num/den; entries with den == 0 are skipped."""
    mask = den > 0
    ratios = np.full(num.shape, np.inf)
    ratios[mask] = num[mask] / den[mask]
    i = int(np.argmin(ratios))
    return float(ratios[i]), i


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def loss_first_mode_numba(rho4, weights):
        d, db = rho4.shape[0], rho4.shape[1]
        out = np.zeros_like(rho4)
        for i in range(d):
            for j in range(d):
                top = d - max(i, j)
                for n in range(top):
                    w = weights[n, i] * weights[n, j]
                    if w == 0.0:
                        continue
                    for b in range(db):
                        for c in range(db):
                            out[i, b, j, c] += w * rho4[i + n, b, j + n, c]
        return out

    @numba.njit(cache=True)
    def min_ratio_numba(num, den):
        best = np.inf
        arg = 0
        for i in range(num.shape[0]):
            if den[i] > 0.0:
                r = num[i] / den[i]
                if r < best:
                    best = r
                    arg = i
        return best, arg

else:  # pragma: no cover
    loss_first_mode_numba = None
    min_ratio_numba = None


if USE_NUMBA:
    loss_first_mode = loss_first_mode_numba
    _min_ratio = min_ratio_numba
else:
    loss_first_mode = loss_first_mode_numpy
    _min_ratio = min_ratio_numpy


def min_ratio(num, den):
    best, arg = _min_ratio(np.ascontiguousarray(num, dtype=float),
                           np.ascontiguousarray(den, dtype=float))
    return float(best), int(arg)


def backend():
    return "numba" if USE_NUMBA else "numpy"
