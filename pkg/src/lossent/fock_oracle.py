"""Dense truncated-Fock-space oracle for the photon-loss channel.

Everything here is brute-force linear algebra on a finite cutoff.  The loss
channel never raises photon number, so the span of |0>..|dim-1> is mapped
into itself and the Kraus set {V_0, ..., V_{dim-1}} is exactly complete
there.  That is what lets these checks hit 1e-10 and better.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .states import TAIL_TOL, TruncationError, TwinBeam, required_cutoff, twin_beam_vector

HERMITIAN_TOL = 1e-12
PSD_TOL = -1e-10


@dataclass(frozen=True)
class LossChannel:
    """Pure-loss channel with energy transmissivity ``eta`` in [0, 1]."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta}")
        object.__setattr__(self, "eta", float(self.eta))


def _as_channel(ch):
    return ch if isinstance(ch, LossChannel) else LossChannel(ch)


def kraus_weights(eta, dim):
    """Table ``w[n, k] = <k|V_n|k+n> = sqrt(C(k+n, n)) (1-eta)^(n/2) eta^(k/2)``.

    At eta = 0 this is the total-loss limit: only w[n, 0] = 1 survives.
    """
    w = np.zeros((dim, dim))
    for n in range(dim):
        for k in range(dim - n):
            w[n, k] = math.sqrt(math.comb(k + n, n)) * (1.0 - eta) ** (n / 2) * eta ** (k / 2)
    return w


def kraus_operator(n, channel, dim):
    """Matrix of V_n on the cutoff |0>..|dim-1>.

    Built from the binomial form of the matrix elements rather than from
    the operator product, which would overflow (1/eta - 1)^(n/2) at small eta.
    """
    channel = _as_channel(channel)
    if n < 0 or dim < 1:
        raise ValueError(f"need n >= 0 and dim >= 1, got n={n}, dim={dim}")
    if channel.eta == 0.0 and n >= 1:
        raise ValueError(
            "V_n with n >= 1 is singular at eta = 0; use apply_loss, which maps "
            "everything to vacuum in that limit"
        )
    V = np.zeros((dim, dim))
    eta = channel.eta
    for k in range(n, dim):
        V[k - n, k] = math.sqrt(math.comb(k, n)) * (1.0 - eta) ** (n / 2) * eta ** ((k - n) / 2)
    return V


def annihilation(dim):
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def number_operator(dim):
    return np.diag(np.arange(dim, dtype=float))


class BipartiteDensity:
    """Two-mode density matrix on cutoffs ``dim_a`` x ``dim_b``.

    Validated on construction: Hermitian to 1e-12 elementwise, eigenvalues
    >= -1e-10, trace in [1 - tail_tol, 1] (up to rounding).
    """

    def __init__(self, matrix, dim_a, dim_b=None, tail_tol=TAIL_TOL, validate=True):
        dim_b = dim_a if dim_b is None else dim_b
        matrix = np.asarray(matrix)
        if matrix.shape != (dim_a * dim_b, dim_a * dim_b):
            raise ValueError(
                f"matrix shape {matrix.shape} does not match cutoffs {dim_a} x {dim_b}"
            )
        self.matrix = matrix
        self.dim_a = int(dim_a)
        self.dim_b = int(dim_b)
        self.tail_tol = tail_tol
        if validate:
            check_density(matrix, tail_tol)

    @classmethod
    def from_vector(cls, psi, dim_a, dim_b=None, tail_tol=TAIL_TOL):
        psi = np.asarray(psi)
        return cls(np.outer(psi, psi.conj()), dim_a, dim_b, tail_tol)

    @property
    def tensor(self):
        """View as ``rho[i, b, j, c]`` = <i b| rho |j c>."""
        return self.matrix.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    def trace(self):
        return float(np.trace(self.matrix).real)

    def reduced(self, mode):
        t = self.tensor
        if mode == "a":
            return np.einsum("ibjb->ij", t)
        if mode == "b":
            return np.einsum("aiaj->ij", t)
        raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")

    def mean_photons(self, mode):
        red = self.reduced(mode)
        return float(np.real(np.trace(red @ number_operator(red.shape[0]))))

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.matrix)[0])


def check_density(matrix, tail_tol=TAIL_TOL):
    """Reject a matrix that is not a valid (possibly truncated) density."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"density must be square, got shape {matrix.shape}")
    herm = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
    if herm > HERMITIAN_TOL:
        raise ValueError(f"density is not Hermitian (max deviation {herm:.3e})")
    tr = float(np.trace(matrix).real)
    if not (1.0 - tail_tol - 1e-14 <= tr <= 1.0 + 1e-12):
        raise ValueError(f"trace {tr!r} outside [1 - {tail_tol:g}, 1]")
    lo = float(np.linalg.eigvalsh(matrix)[0])
    if lo < PSD_TOL:
        raise ValueError(f"density is not positive semidefinite (min eigenvalue {lo:.3e})")


def _loss_tensor_mode_a(t4, eta):
    d = t4.shape[0]
    if eta == 1.0:
        return t4.copy()
    if eta == 0.0:
        out = np.zeros_like(t4)
        out[0, :, 0, :] = np.einsum("ibic->bc", t4)
        return out
    return _kernels.loss_first_mode(np.ascontiguousarray(t4), kraus_weights(eta, d))


def apply_loss(rho, eta_a, eta_b=None):
    """Loss channel on each mode of a :class:`BipartiteDensity`, or on a
    single-mode density matrix (pass only ``eta_a``).

    Accepts floats or :class:`LossChannel` instances for the factors.
    """
    eta_a = _as_channel(eta_a).eta
    if isinstance(rho, BipartiteDensity):
        eta_b = eta_a if eta_b is None else _as_channel(eta_b).eta
        t = _loss_tensor_mode_a(rho.tensor, eta_a)
        t = _loss_tensor_mode_a(t.transpose(1, 0, 3, 2), eta_b).transpose(1, 0, 3, 2)
        n = rho.dim_a * rho.dim_b
        return BipartiteDensity(
            np.ascontiguousarray(t).reshape(n, n), rho.dim_a, rho.dim_b,
            rho.tail_tol, validate=False,
        )
    if eta_b is not None:
        raise TypeError("a single-mode density takes one loss factor")
    rho = np.asarray(rho)
    check_density(rho)
    d = rho.shape[0]
    return _loss_tensor_mode_a(rho.reshape(d, 1, d, 1), eta_a).reshape(d, d)


def apply_kraus_sum(rho, eta_a, eta_b=None):
    """Literal sum_n,m (V_n x V_m) rho (V_n x V_m)^dag.  Slow reference path.

    Takes a single-mode matrix or a :class:`BipartiteDensity`; returns a plain
    matrix.  Only defined for eta > 0.
    """
    if isinstance(rho, BipartiteDensity):
        eta_b = eta_a if eta_b is None else eta_b
        ka = [kraus_operator(n, eta_a, rho.dim_a) for n in range(rho.dim_a)]
        kb = [kraus_operator(n, eta_b, rho.dim_b) for n in range(rho.dim_b)]
        ops = [np.kron(A, B) for A in ka for B in kb]
        m = rho.matrix
    else:
        m = np.asarray(rho)
        ops = [kraus_operator(n, eta_a, m.shape[0]) for n in range(m.shape[0])]
    return sum(K @ m @ K.conj().T for K in ops)


def kraus_completeness_residual(channel, k, dim=None):
    """max |sum_{n<=k} V_n^dag V_n - 1| on the protected subspace |0>..|k>."""
    channel = _as_channel(channel)
    dim = max(2 * k, k + 1) if dim is None else dim
    if dim < k + 1:
        raise ValueError(f"cutoff {dim} cannot hold the subspace up to |{k}>")
    if channel.eta == 0.0:
        # total-loss limit: V_n = |0><n|
        ops = [np.eye(1, dim, n) for n in range(k + 1)]
    else:
        ops = [kraus_operator(n, channel, dim) for n in range(k + 1)]
    total = sum(V.conj().T @ V for V in ops)
    return float(np.max(np.abs(total[: k + 1, : k + 1] - np.eye(k + 1))))


def normal_ordered(p, q, dim):
    """Truncated a^dag^p a^q (exact on the cutoff for normal-ordered products)."""
    a = annihilation(dim)
    return np.linalg.matrix_power(a.T, p) @ np.linalg.matrix_power(a, q)


def check_dual_normal_order(p, q, rho, channel):
    """|Tr[L(rho) a^dag^p a^q] - eta^((p+q)/2) Tr[rho a^dag^p a^q]| for a single mode."""
    channel = _as_channel(channel)
    rho = np.asarray(rho)
    dim = rho.shape[0]
    if p < 0 or q < 0:
        raise ValueError("powers must be nonnegative")
    if p + q > dim - 1:
        raise ValueError(f"p + q = {p + q} exceeds the safe window dim - 1 = {dim - 1}")
    op = normal_ordered(p, q, dim)
    lhs = np.trace(apply_loss(rho, channel) @ op)
    rhs = channel.eta ** ((p + q) / 2) * np.trace(rho @ op)
    return float(abs(lhs - rhs))


@dataclass(frozen=True)
class TwinBeamDecomposition:
    dim: int
    q_expected: float
    q_measured: float
    overlap: float
    sigma_min_eig: float
    sigma_trace: float


def check_twinbeam_decomposition(lambda_mag, channel, dim=None, tail_tol=TAIL_TOL):
    """Split the lossy twin beam into its surviving twin-beam part and a residual.

    ``channel`` carries the end-to-end transmissivity eta; each arm gets
    sqrt(eta), so the no-loss Kraus term V_0 x V_0 maps the twin beam onto
    q |chi(sqrt(eta) lam)><chi(sqrt(eta) lam)| with q = (1-lam^2)/(1-eta lam^2).
    ``dim`` defaults to the smallest cutoff meeting ``tail_tol``.
    """
    channel = _as_channel(channel)
    tb = TwinBeam(lambda_mag)
    lam, eta = tb.lambda_mag, channel.eta
    need = required_cutoff(lam, tail_tol)
    if dim is None:
        dim = need
    elif dim < need:
        raise TruncationError(
            f"cutoff {dim} cannot hold the twin beam at |lambda|={lam} within "
            f"{tail_tol:g}; need dim >= {need}",
            need,
        )
    arm = math.sqrt(eta)
    chi = twin_beam_vector(tb, dim, tail_tol)
    rho = BipartiteDensity.from_vector(chi, dim, dim, tail_tol)
    out = apply_loss(rho, arm, arm)

    v0 = np.diag(np.power(arm, np.arange(dim) / 2.0))
    kept = np.kron(v0, v0) @ chi
    q_measured = float(kept @ kept)

    q_expected = (1.0 - lam ** 2) / (1.0 - eta * lam ** 2)
    # the rescaled beam sits inside the same cutoff, so its tail is no larger
    chi_out = twin_beam_vector(TwinBeam(arm * lam), dim, tail_tol)
    overlap = float((chi_out @ kept) ** 2 / ((chi_out @ chi_out) * q_measured)) if q_measured else 0.0

    sigma = out.matrix - q_expected * np.outer(chi_out, chi_out)
    return TwinBeamDecomposition(
        dim=dim,
        q_expected=q_expected,
        q_measured=q_measured,
        overlap=overlap,
        sigma_min_eig=float(np.linalg.eigvalsh(sigma)[0]),
        sigma_trace=float(np.trace(sigma)),
    )


def ebit_mixture_residual(eta, dim=4):
    """Frobenius distance between L x L(|psi><psi|) and eta|psi><psi| + (1-eta)|00><00|."""
    from .states import ebit_vector

    psi = ebit_vector(dim)
    rho = BipartiteDensity.from_vector(psi, dim)
    out = apply_loss(rho, eta, eta)
    vac = np.zeros(dim * dim)
    vac[0] = 1.0
    expected = eta * np.outer(psi, psi) + (1.0 - eta) * np.outer(vac, vac)
    return float(np.linalg.norm(out.matrix - expected))


def schmidt_coefficients(psi, dim_a, dim_b=None):
    """Squared Schmidt coefficients of a bipartite vector via SVD, descending."""
    dim_b = dim_a if dim_b is None else dim_b
    s = np.linalg.svd(np.asarray(psi).reshape(dim_a, dim_b), compute_uv=False)
    return s ** 2


MAX_DENSE_CUTOFF = 50


def _probe_state(dim):
    # truncated coherent-like pure state, normalized on the cutoff
    k = np.arange(dim)
    amps = np.array([0.8 ** i / math.sqrt(math.factorial(i)) for i in k])
    amps /= np.linalg.norm(amps)
    return np.outer(amps, amps)


def oracle_suite(trunc, eta=0.5, lambda_mag=0.5, tol=1e-10):
    """Run every oracle identity at one cutoff; returns ``[(name, residual, passed)]``.

    Raises :class:`TruncationError` or ``ValueError`` when the cutoff is out
    of budget for the dense oracle or for the twin beam at ``lambda_mag``.
    """
    if trunc > MAX_DENSE_CUTOFF:
        raise ValueError(f"cutoff {trunc} exceeds the dense budget of {MAX_DENSE_CUTOFF} per mode")
    if trunc < 2:
        raise TruncationError(f"cutoff {trunc} cannot hold the ebit or a twin beam", 2)
    channel = LossChannel(eta)
    need = required_cutoff(lambda_mag)
    if trunc < need:
        raise TruncationError(
            f"cutoff {trunc} cannot hold the twin beam at |lambda|={lambda_mag} "
            f"within {TAIL_TOL:g}; need --trunc >= {need}",
            need,
        )
    rows = []

    def record(name, residual):
        rows.append((name, float(residual), bool(residual <= tol)))

    record("kraus_completeness", kraus_completeness_residual(channel, trunc - 1, trunc))
    record("ebit_mixture", ebit_mixture_residual(eta, trunc))

    probe = _probe_state(trunc)
    window = [(p, q) for p, q in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1), (3, 3)]
              if p + q <= trunc - 1]
    record("energy_scaling", check_dual_normal_order(1, 1, probe, channel))
    record("normal_order_scaling",
           max(check_dual_normal_order(p, q, probe, channel) for p, q in window))
    once = apply_loss(apply_loss(probe, channel), channel)
    record("channel_composition", np.linalg.norm(once - apply_loss(probe, eta * eta)))

    chi = twin_beam_vector(TwinBeam(lambda_mag), trunc)
    tb = BipartiteDensity.from_vector(chi, trunc)
    lossy = apply_loss(tb, channel, channel)
    record("bipartite_energy_scaling",
           max(abs(lossy.mean_photons(m) - eta * tb.mean_photons(m)) for m in "ab"))

    dec = check_twinbeam_decomposition(lambda_mag, channel, trunc)
    record("twinbeam_q", abs(dec.q_measured - dec.q_expected))
    record("twinbeam_overlap", 1.0 - dec.overlap)
    record("twinbeam_sigma_psd", max(0.0, -dec.sigma_min_eig))
    record("twinbeam_sigma_trace", abs(dec.sigma_trace - (1.0 - dec.q_expected)))
    return rows
