"""Photon-loss comparison of N polarization ebits against a single twin beam
upgraded by optimal LOCC, with a truncated-Fock-space oracle."""

from .compare import (
    ComparisonPoint,
    chain_check,
    crossover_N,
    ebit_probability,
    emode_probability,
    ratio_r,
    survival_q,
)
from .fock_oracle import (
    BipartiteDensity,
    LossChannel,
    apply_loss,
    check_dual_normal_order,
    check_twinbeam_decomposition,
    kraus_operator,
)
from .locc import ConversionResult, threshold_holds, twinbeam_to_maxent, vidal_probability
from .states import (
    MaxEntangled,
    SchmidtSpectrum,
    TruncationError,
    TwinBeam,
    ebit_vector,
    loss_rescaled,
    schmidt_tail,
    twin_beam_vector,
)

__version__ = "0.1.0"
