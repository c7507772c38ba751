"""N polarization ebits versus one LOCC-assisted twin beam under loss.

Ebits: each photon survives with probability eta, so p_b = eta^N.
Twin beam: it survives as a (rescaled) twin beam with probability
q = (1 - lam^2)/(1 - eta lam^2), after which optimal LOCC reaches the
2^N-dimensional maximally entangled state with probability p*.  The emode
success probability is p_C = q p* (also written p_m).

r = p_b / p' is a cheap lower bound on the true advantage p_b / p_C:

    r <= p_b / (q p') <= p_b / (q p*) = p_b / p_C
"""

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

from .locc import effective_ratio, twinbeam_to_maxent

N_MAX = 30
_LOG_SLACK = math.log1p(1e-12)


def _check_n(N):
    if int(N) != N or N < 1:
        raise ValueError(f"N must be an integer >= 1, got {N}")
    if N > N_MAX:
        raise ValueError(f"N = {N} exceeds the cap N <= {N_MAX} (M = 2^N indices)")
    return int(N)


def _check_eta(eta):
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")


def _check_lambda(lambda_mag):
    if not 0.0 <= lambda_mag < 1.0:
        raise ValueError(f"lambda must lie in [0, 1), got {lambda_mag}")


def ebit_probability(eta, N):
    _check_eta(eta)
    return eta ** _check_n(N)


def survival_q(lambda_mag, eta):
    _check_lambda(lambda_mag)
    _check_eta(eta)
    return (1.0 - lambda_mag ** 2) / (1.0 - eta * lambda_mag ** 2)


class Ratio(NamedTuple):
    r: float
    ln_r: float


def ratio_r(eta, lambda_mag, N):
    """(r, ln r) with ln r = (1 - 2^N) ln(eta lam^2) + N ln(eta/2).

    r saturates to inf when it overflows; ln r stays exact.
    """
    N = _check_n(N)
    x = effective_ratio(lambda_mag, eta)
    if x == 0.0:
        raise ValueError("r diverges at eta * lambda^2 = 0 (ebits dominate trivially)")
    ln_r = (1.0 - 2.0 ** N) * math.log(x) + N * math.log(eta / 2.0)
    try:
        r = math.exp(ln_r)
    except OverflowError:
        r = math.inf
    return Ratio(r, ln_r)


@dataclass(frozen=True)
class ComparisonPoint:
    """All derived quantities at one (N, eta, lambda).  ``p_C`` is the paper's p_m.

    ``r`` is the analytic bound proxy; the true advantage is ``p_b / p_C``.
    Where x = 0, r is inf (eta > 0) or nan (eta = 0, where p_b = 0 as well).
    """

    eta: float
    lambda_mag: float
    N: int
    M: int
    p_b: float
    q: float
    p_star: float
    p_prime: float
    p_C: float
    r: float
    ln_r: float
    argmin_index: int
    log_p_b: float
    log_q: float
    log_p_star: float
    log_p_prime: float
    log_p_C: float

    @property
    def ebits_win_bound(self):
        """r > 1, which already implies p_b > p_C."""
        return self.r > 1.0

    def as_dict(self):
        return asdict(self)


def _log(v):
    return math.log(v) if v > 0 else -math.inf


def emode_probability(lambda_mag, eta, N):
    """Evaluate both schemes at one point; p_C = q * p*."""
    N = _check_n(N)
    _check_eta(eta)
    _check_lambda(lambda_mag)
    M = 2 ** N
    x = effective_ratio(lambda_mag, eta)
    conv = twinbeam_to_maxent(x, M)
    q = survival_q(lambda_mag, eta)
    p_b = ebit_probability(eta, N)
    if x > 0:
        r, ln_r = ratio_r(eta, lambda_mag, N)
    elif eta > 0:
        r = ln_r = math.inf
    else:
        r = ln_r = math.nan
    return ComparisonPoint(
        eta=eta, lambda_mag=lambda_mag, N=N, M=M,
        p_b=p_b, q=q, p_star=conv.p_star, p_prime=conv.p_prime,
        p_C=q * conv.p_star, r=r, ln_r=ln_r, argmin_index=conv.argmin_index,
        log_p_b=N * _log(eta), log_q=math.log(q),
        log_p_star=conv.log_p_star, log_p_prime=conv.log_p_prime,
        log_p_C=math.log(q) + conv.log_p_star,
    )


def advantage_log(point):
    """ln(p_b / p_C), finite even where p_C underflows."""
    return point.log_p_b - point.log_p_C


class ChainCheck(NamedTuple):
    holds: bool
    vacuous: bool

    def __bool__(self):
        return self.holds


def chain_check(point):
    """r <= p_b/(q p') <= p_b/p_C at 1e-12 relative tolerance, compared in log space.

    With p_C = 0 the right end is infinite; the result is flagged vacuous.
    """
    if point.p_C == 0.0 and point.log_p_C == -math.inf:
        return ChainCheck(True, True)
    mid = point.log_p_b - point.log_q - point.log_p_prime
    right = point.log_p_b - point.log_p_C
    ok = point.ln_r <= mid + _LOG_SLACK and mid <= right + _LOG_SLACK
    return ChainCheck(bool(ok), False)


def crossover_N(eta, lambda_mag, n_limit=1000):
    """Smallest N >= 1 with r > 1, scanning ln r upward from N = 1.

    Not bound by the N <= 30 cap, since only ln r is needed.
    """
    x = effective_ratio(lambda_mag, eta)
    if not 0.0 < x < 1.0:
        raise ValueError(f"crossover needs 0 < eta lambda^2 < 1, got {x}")
    lx, lh = math.log(x), math.log(eta / 2.0)
    for N in range(1, n_limit + 1):
        if (1.0 - 2.0 ** N) * lx + N * lh > 0.0:
            return N
    raise ValueError(f"no crossover below N = {n_limit} at x = {x}")
