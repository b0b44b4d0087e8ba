"""Entanglement evolution of bipartite d-level systems under local channels."""

from .linalg import DimensionError, det, haar_unitary, kron, partial_trace, svd
from .measures import (
    SchmidtSpectrum,
    c_k_pure,
    concurrence_trajectory,
    drop_time,
    g_concurrence_pure,
    isotropic_concurrence,
    isotropic_schmidt_number,
    rate_ratio,
    schmidt_rank,
    schmidt_spectrum,
    wootters_concurrence,
)
from .roof import RoofEstimate, RoofParams, roof_estimate
from .states import (
    DensityMatrix,
    KrausChannel,
    PureState,
    apply_one_sided,
    apply_two_sided,
    channel_from_jamiolkowski,
    depolarizing_channel,
    dual_form,
    filtering_operator,
    fidelity_at_time,
    isotropic_state,
    jamiolkowski_state,
    max_entangled,
    random_channel,
)

__version__ = "0.1.0"
