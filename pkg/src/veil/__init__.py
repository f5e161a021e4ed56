"""Three-crystal induced-coherence simulator with absorbing idler objects."""

from veil.algebra import (
    LinearForm,
    ModeId,
    ModeRegistry,
    TwoPhotonState,
    bilinear_product,
    inner_product,
    state_add,
)
from veil.analysis import (
    check_invisibility,
    dual_condition_feasibility,
    object2_independence_scan,
    solve_invisibility,
    sweep,
)
from veil.detection import (
    ProbabilityReport,
    coincidence_probability,
    full_report,
    reduce,
    singles_probability,
)
from veil.elements import (
    BeamSplitterSpec,
    CrystalSpec,
    ObjectSpec,
    PhaseSpec,
    balanced_bs,
    effective_gamma,
    object_as_bs,
    spdc_split,
    validate_bs,
)
from veil.network import Network, NetworkConfig, build_network, output_state, propagate_pump

__version__ = "0.1.0"

__all__ = [
    "BeamSplitterSpec",
    "CrystalSpec",
    "LinearForm",
    "ModeId",
    "ModeRegistry",
    "Network",
    "NetworkConfig",
    "ObjectSpec",
    "PhaseSpec",
    "ProbabilityReport",
    "TwoPhotonState",
    "balanced_bs",
    "bilinear_product",
    "build_network",
    "check_invisibility",
    "coincidence_probability",
    "dual_condition_feasibility",
    "effective_gamma",
    "full_report",
    "inner_product",
    "object2_independence_scan",
    "object_as_bs",
    "output_state",
    "propagate_pump",
    "reduce",
    "singles_probability",
    "solve_invisibility",
    "spdc_split",
    "state_add",
    "sweep",
    "validate_bs",
]
