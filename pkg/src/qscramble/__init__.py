"""Haar-averaged bipartite OTOCs, operator entanglement, and entropy production
for closed and GKSL-open quantum models (Dicke, Tavis-Cummings, tilted-field
Ising), built on dense vectorized superoperators."""

__version__ = "0.1.0"

from .linalg import (BipartiteSpace, apply_factorwise, devectorize, expm,
                     haar_unitary, herm_eig, kron, log_psd, partial_trace,
                     vectorize)
from .liouville import (CptpReport, PropagatorFamily, Superoperator,
                        build_adjoint_liouvillian, build_state_liouvillian,
                        check_cptp, propagate, unitary_adjoint_propagators)
from .models import (BathSpec, IsingParams, ModelSpec, build_dicke,
                     build_ising, build_tc)
from .operators import (BosonOperators, SiteOperator, SpinJOperators,
                        boson_ops, collective_spin, pauli_site)
from .scenario import (ResultTable, ScenarioConfig, ScenarioError,
                       load_scenario, parse_scenario, run_scenario,
                       shipped_scenarios, sweep)
from .scrambling import (OtocSeries, SwapSet, build_swaps,
                         operator_entanglement, otoc_haar_mc, otoc_open,
                         otoc_unitary)
from .thermo import (ThermoSeries, default_initial_states,
                     entropy_production_gksl, entropy_production_unitary,
                     gibbs_state, ground_state_density, rel_entropy,
                     validate_density_matrix, vn_entropy)

__all__ = [
    "BathSpec", "BipartiteSpace", "BosonOperators", "CptpReport",
    "IsingParams", "ModelSpec", "OtocSeries", "PropagatorFamily",
    "ResultTable", "ScenarioConfig", "ScenarioError", "SiteOperator",
    "SpinJOperators", "Superoperator", "SwapSet", "ThermoSeries",
    "apply_factorwise", "boson_ops", "build_adjoint_liouvillian",
    "build_dicke", "build_ising", "build_state_liouvillian", "build_swaps",
    "build_tc", "check_cptp", "collective_spin", "default_initial_states",
    "devectorize", "entropy_production_gksl", "entropy_production_unitary",
    "expm", "gibbs_state", "ground_state_density", "haar_unitary",
    "herm_eig", "kron", "load_scenario", "log_psd", "operator_entanglement",
    "otoc_haar_mc", "otoc_open", "otoc_unitary", "parse_scenario",
    "partial_trace", "pauli_site", "propagate", "rel_entropy",
    "run_scenario", "shipped_scenarios", "sweep",
    "unitary_adjoint_propagators", "validate_density_matrix", "vn_entropy",
]
