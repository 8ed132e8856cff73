"""Coupling-matrix (N2) analysis toolkit for systems of systems.

Models live in a line-oriented .sosm format; every analysis is a pure
function over the parsed model or its coupling matrix.
"""

from .errors import AnalysisError, ParseError, SosmError
from .model import (
    Adapter,
    Capability,
    Diagnostic,
    Exchange,
    SosModel,
    SystemNode,
    VersionTriple,
    structurally_equal,
    validate_model,
)
from .parser import parse_model
from .modelio import export_model, load_model_text, model_from_json
from .matrix import CouplingMatrix, build_matrix, density, permute, render, sources_and_sinks
from .emergence import (
    DependencyChain,
    check_capabilities,
    connectivity_index,
    emergent_paths,
    format_chain,
    strongly_connected_components,
)
from .clustering import Clustering, cluster_exhaustive, cluster_greedy, clustering_cost
from .compatibility import (
    CompatReport,
    ImpactReport,
    VersionChange,
    check_compatibility,
    evolution_impact,
)
from .governance import (
    Bridge,
    ContractMap,
    compose_sos,
    contract_map,
    integrator_report,
    interop_gaps,
    introduce_infrastructure,
)
from .timeline import Bundle, ModelDiff, apply_diff, bundle_report, diff, intertwining
from .fixtures import efs_path, load_efs

__version__ = "0.1.0"
