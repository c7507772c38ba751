"""Analytic state families and their Schmidt spectra.

Three families appear: the single-photon ebit, the twin beam
sqrt(1 - lam^2) * sum_i lam^i |i>|i>, and the M-dimensional maximally
entangled state.  Bipartite vectors are laid out with index ``i * dim + j``
for |i>_a |j>_b.
"""

import math
from dataclasses import dataclass, field

import numpy as np

TAIL_TOL = 1e-12


class TruncationError(ValueError):
    """A Fock cutoff too small to hold the state within the tail budget."""

    def __init__(self, message, required_dim):
        super().__init__(message)
        self.required_dim = required_dim


def required_cutoff(lambda_mag, tail_tol=TAIL_TOL):
    """Smallest cutoff ``dim`` with neglected twin-beam mass lam^(2 dim) <= tail_tol."""
    x = float(lambda_mag) ** 2
    if x == 0.0:
        return 1
    dim = max(1, math.ceil(math.log(tail_tol) / math.log(x)))
    # guard the log rounding in both directions
    while dim > 1 and x ** (dim - 1) <= tail_tol:
        dim -= 1
    while x ** dim > tail_tol:
        dim += 1
    return dim


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients, nonincreasing, summing to one.

    Build with :meth:`uniform`, :meth:`geometric` or :meth:`explicit`.
    """

    kind: str
    M: int = 0
    x: float = 0.0
    values: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind == "uniform":
            if int(self.M) != self.M or self.M < 1:
                raise ValueError(f"uniform spectrum needs integer M >= 1, got {self.M}")
        elif self.kind == "geometric":
            if not 0.0 <= self.x < 1.0:
                raise ValueError(f"geometric ratio must lie in [0, 1), got {self.x}")
        elif self.kind == "explicit":
            vals = np.asarray(self.values, dtype=float)
            if vals.ndim != 1 or vals.size == 0:
                raise ValueError("explicit spectrum needs a nonempty 1-d list")
            if np.any(vals < 0) or not np.all(np.isfinite(vals)):
                raise ValueError("squared Schmidt coefficients must be finite and nonnegative")
            if abs(math.fsum(vals) - 1.0) > 1e-12:
                raise ValueError(f"squared Schmidt coefficients sum to {math.fsum(vals)!r}, not 1")
            ordered = np.sort(vals)[::-1]
            tails = np.cumsum(ordered[::-1])[::-1]
            object.__setattr__(self, "values", tuple(ordered.tolist()))
            object.__setattr__(self, "_tails", np.append(tails, 0.0))
        else:
            raise ValueError(f"unknown spectrum kind {self.kind!r}")

    @classmethod
    def uniform(cls, M):
        return cls("uniform", M=int(M))

    @classmethod
    def geometric(cls, x):
        return cls("geometric", x=float(x))

    @classmethod
    def explicit(cls, values):
        return cls("explicit", values=tuple(float(v) for v in values))

    @property
    def rank(self):
        """Number of nonzero coefficients; ``None`` for an infinite geometric tail."""
        if self.kind == "uniform":
            return self.M
        if self.kind == "geometric":
            return 1 if self.x == 0.0 else None
        nz = np.flatnonzero(np.asarray(self.values) > 0)
        return int(nz[-1]) + 1

    def coefficient(self, i):
        if i < 0:
            raise ValueError("index must be >= 0")
        if self.kind == "uniform":
            return 1.0 / self.M if i < self.M else 0.0
        if self.kind == "geometric":
            return (1.0 - self.x) * self.x ** i
        return self.values[i] if i < len(self.values) else 0.0

    def tail(self, i):
        """Mass sum_{n >= i} of the squared coefficients."""
        return float(self.tails(np.array([i]))[0])

    def tails(self, idx):
        """Vectorized :meth:`tail` over an integer array of indices."""
        idx = np.asarray(idx, dtype=np.int64)
        if np.any(idx < 0):
            raise ValueError("index must be >= 0")
        if self.kind == "geometric":
            return np.power(self.x, idx.astype(float))
        if self.kind == "uniform":
            M = self.M
            return np.where(idx < M, (M - idx) / M, 0.0)
        t = self._tails
        return t[np.minimum(idx, len(t) - 1)]


def schmidt_tail(spectrum, i):
    return spectrum.tail(i)


@dataclass(frozen=True)
class TwinBeam:
    """Twin beam with gain parameter magnitude ``lambda_mag`` in [0, 1).

    A complex ``lambda_mag`` is accepted and reduced to its modulus: every
    quantity computed here depends on |lambda| only.
    """

    lambda_mag: float

    def __post_init__(self):
        lam = abs(complex(self.lambda_mag))
        if not 0.0 <= lam < 1.0:
            raise ValueError(f"|lambda| must lie in [0, 1), got {lam}")
        object.__setattr__(self, "lambda_mag", float(lam))

    @property
    def gain(self):
        return 1.0 / (1.0 - self.lambda_mag ** 2)

    def spectrum(self):
        return SchmidtSpectrum.geometric(self.lambda_mag ** 2)


@dataclass(frozen=True)
class MaxEntangled:
    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"Schmidt rank must be an integer >= 1, got {self.M}")

    def spectrum(self):
        return SchmidtSpectrum.uniform(self.M)


def loss_rescaled(tb, eta):
    """The twin beam that survives end-to-end transmissivity ``eta``: lam -> sqrt(eta) lam."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    return TwinBeam(math.sqrt(eta) * tb.lambda_mag)


def ebit_vector(dim=2):
    """(|0>_a|1>_b + |1>_a|0>_b)/sqrt(2) on a ``dim`` x ``dim`` Fock cutoff."""
    if dim < 2:
        raise ValueError(f"ebit needs cutoff >= 2, got {dim}")
    psi = np.zeros(dim * dim)
    psi[0 * dim + 1] = psi[1 * dim + 0] = 1.0 / math.sqrt(2.0)
    return psi


def twin_beam_vector(tb, dim, tail_tol=TAIL_TOL):
    """Truncated twin beam; amplitudes are left unnormalized on the cutoff.

    Raises :class:`TruncationError` when the mass beyond the cutoff exceeds
    ``tail_tol``.
    """
    if isinstance(tb, (int, float)):
        tb = TwinBeam(tb)
    need = required_cutoff(tb.lambda_mag, tail_tol)
    if dim < need:
        raise TruncationError(
            f"cutoff {dim} leaves twin-beam tail {tb.lambda_mag ** (2 * dim):.3e} > "
            f"{tail_tol:g} at |lambda|={tb.lambda_mag}; need dim >= {need}",
            need,
        )
    lam = tb.lambda_mag
    amps = math.sqrt(1.0 - lam ** 2) * np.power(lam, np.arange(dim, dtype=float))
    psi = np.zeros(dim * dim)
    psi[np.arange(dim) * (dim + 1)] = amps
    return psi


def max_entangled_vector(M, dim=None):
    dim = M if dim is None else dim
    if dim < M:
        raise ValueError(f"cutoff {dim} cannot hold Schmidt rank {M}")
    psi = np.zeros(dim * dim)
    psi[np.arange(M) * (dim + 1)] = 1.0 / math.sqrt(M)
    return psi
