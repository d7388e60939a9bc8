"""fermikit public API."""

from fermikit.__about__ import __version__
from fermikit.algebra import (
    Operator,
    SingleMode,
    elementary,
    embed,
    jw_ladder,
    lambda_map,
    ordered_product,
    partial_trace,
    phi,
    psi_map,
    tensor_fermionic,
)
from fermikit.core.config import Settings, get_settings, use_settings
from fermikit.core.errors import ErrorKind, FermikitError
from fermikit.core.results import CheckReport, ErrorPayload
from fermikit.maps import (
    MapKind,
    choi,
    is_local_map,
    is_tpcp,
    locality_certificate,
    map_embed,
    map_parity,
    map_tensor,
)
from fermikit.modes import ModeSet, OccPattern, OrderedPartition, Partition
from fermikit.parity import (
    ParityClass,
    ParitySector,
    StateVector,
    local_parity_projector,
    operator_parity,
    parity_sectors,
    product_extension_classify,
    tps_unitary,
    tps_vector,
)
from fermikit.phase import PhaseKind, emit_table, phase_f, phase_h, phase_l, phase_u
from fermikit.states import CorrelationMode, DensityMatrix, classify_correlation, coeffs, reduce_state
from fermikit.superop import SuperOp

__all__ = [
    "CheckReport",
    "CorrelationMode",
    "DensityMatrix",
    "ErrorKind",
    "ErrorPayload",
    "FermikitError",
    "MapKind",
    "ModeSet",
    "OccPattern",
    "Operator",
    "OrderedPartition",
    "ParityClass",
    "ParitySector",
    "Partition",
    "PhaseKind",
    "Settings",
    "SingleMode",
    "StateVector",
    "SuperOp",
    "__version__",
    "choi",
    "classify_correlation",
    "coeffs",
    "elementary",
    "embed",
    "emit_table",
    "get_settings",
    "is_local_map",
    "is_tpcp",
    "jw_ladder",
    "lambda_map",
    "local_parity_projector",
    "locality_certificate",
    "map_embed",
    "map_parity",
    "map_tensor",
    "operator_parity",
    "ordered_product",
    "parity_sectors",
    "partial_trace",
    "phase_f",
    "phase_h",
    "phase_l",
    "phase_u",
    "phi",
    "product_extension_classify",
    "psi_map",
    "reduce_state",
    "tensor_fermionic",
    "tps_unitary",
    "tps_vector",
    "use_settings",
]
