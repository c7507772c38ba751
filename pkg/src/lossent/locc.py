"""Optimal single-copy LOCC conversion probability between pure states.

For a source with squared Schmidt coefficients s_n and a target with t_n,
the best achievable probability is

    p* = min_i  (sum_{n>=i} s_n) / (sum_{n>=i} t_n)

with i running over the target's support.  For a twin-beam source
(geometric spectrum, ratio x) and an M-dimensional maximally entangled
target the terms are M x^i / (M - i), and

    p* <= p' = M x^(M-1)

with equality whenever x <= 1/e.  The equality follows from
(k + 1) x^k <= 1 for k >= 1, which holds because k + 1 <= e^k.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .states import SchmidtSpectrum

_CHUNK = 1 << 16


@dataclass(frozen=True)
class ConversionResult:
    """Outcome of an optimal conversion.

    ``p_prime`` is the bound M x^(M-1), reported only for the twin-beam
    specialization.  It is a bound expression, not a probability, and may
    exceed 1.  ``log_p_star`` and ``log_p_prime`` stay finite where the
    floating-point probabilities underflow to zero.
    """

    p_star: float
    argmin_index: int
    p_prime: Optional[float] = None
    log_p_star: Optional[float] = None
    log_p_prime: Optional[float] = None


def vidal_probability(source, target):
    """Minimum tail ratio over i in [0, rank(target) - 1]; ties go to the smallest i."""
    rank = target.rank
    if rank is None:
        raise ValueError("target must have finite Schmidt rank")
    best, arg = math.inf, 0
    for start in range(0, rank, _CHUNK):
        idx = np.arange(start, min(rank, start + _CHUNK))
        num = source.tails(idx)
        den = target.tails(idx)
        val, i = _kernels.min_ratio(num, den)
        if val < best:
            best, arg = val, start + i
        if num[-1] == 0.0:
            break  # every later ratio is zero too
    return ConversionResult(p_star=best, argmin_index=arg,
                            log_p_star=math.log(best) if best > 0 else -math.inf)


def _log_terms(x, M, idx):
    if x == 0.0:
        return np.where(idx == 0, 0.0, -np.inf)
    return math.log(M) + idx * math.log(x) - np.log(M - idx)


def twinbeam_to_maxent(x, M):
    """Closed-form fast path for a geometric(x) source and uniform(M) target.

    Only a few indices around the analytic minimizer are evaluated: the
    terms M x^i / (M - i) decrease while M - i > 1/(1 - x) and increase
    afterwards.  Each term is computed exactly as the general route does.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"effective ratio x must lie in [0, 1), got {x}")
    if int(M) != M or M < 1:
        raise ValueError(f"target rank must be an integer >= 1, got {M}")
    M = int(M)
    log_p_prime = math.log(M) + (M - 1) * math.log(x) if x > 0 else (0.0 if M == 1 else -math.inf)
    p_prime = M * x ** (M - 1)

    if x == 0.0:
        i = 0 if M == 1 else 1
        return ConversionResult(float(i == 0), i, p_prime, 0.0 if i == 0 else -math.inf, log_p_prime)

    turn = max(0, min(M - 1, math.ceil(M - 1.0 / (1.0 - x))))
    idx = np.unique(np.clip(np.arange(turn - 2, turn + 3), 0, M - 1))
    idx = np.union1d(idx, [0])
    logs = _log_terms(x, M, idx)
    # smallest index within rounding of the minimum
    i = int(idx[np.flatnonzero(logs <= logs.min() + 1e-13)[0]])
    log_p_star = float(_log_terms(x, M, np.array([i]))[0])

    src = SchmidtSpectrum.geometric(x)
    tgt = SchmidtSpectrum.uniform(M)
    p_star = float(src.tails(np.array([i]))[0] / tgt.tails(np.array([i]))[0])
    return ConversionResult(p_star, i, p_prime, log_p_star, log_p_prime)


def effective_ratio(lambda_mag, eta):
    """x = eta * |lambda|^2, the geometric ratio of the twin beam after loss."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if not 0.0 <= abs(lambda_mag) < 1.0:
        raise ValueError(f"|lambda| must lie in [0, 1), got {lambda_mag}")
    return eta * abs(lambda_mag) ** 2


def threshold_holds(lambda_mag, eta):
    """True iff |lambda| <= (eta e)^(-1/2), i.e. x <= 1/e, where p* = p'."""
    return effective_ratio(lambda_mag, eta) <= math.exp(-1.0)
