"""Desk-scale simulator for navigating measurement branches by local memory
operations: GHZ-type record formation, two-CNOT memory erasure, coordination
failures, no-signalling verification, and the nonlinear-filter extension.
"""

__version__ = "0.1.0"

from .channels import (
    CptpCheck,
    KrausChannel,
    NonlinearFilter,
    apply_antilinear,
    apply_local_channel,
    apply_nonlinear_filter,
    nonlinear_probabilities,
    random_channel,
    validate_cptp,
)
from .protocol import (
    DECOUPLING_FEASIBLE_THRESHOLD,
    MAX_QUBITS,
    BranchStructure,
    DecouplingResult,
    Participation,
    RecordEncoding,
    Scenario,
    TrialEngine,
    TrialReport,
    canonical_scenario,
    clinic_erase,
    conditional_clinic,
    decoupling_diagnostic,
    decoupling_sweep,
    observe,
    prepare_cat,
    record_value,
    reobserve,
    rewrite_record,
    run_ensemble,
    run_trial,
    scenario_layout,
    spread_to_environment,
)
from .seeding import as_generator, derive_seed, draw_index
from .statevec import (
    EXACT_TOL,
    NORM_TOL,
    DensityMatrix,
    GateSpec,
    RegisterLayout,
    StateVector,
    apply_gate,
    basis_index,
    born_probabilities,
    init_register,
    partial_trace,
    project_onto,
    purity,
    sample_outcome,
    trace_distance,
    von_neumann_entropy,
)
from .verify import (
    CHECK_NAMES,
    Verdict,
    born_statistics_test,
    check_circuit_equivalence,
    check_coordination,
    check_indistinguishability,
    check_no_signalling,
    check_nonlinear_witness,
    expected_post_probabilities,
    run_checks,
)

__all__ = [
    "BranchStructure",
    "CHECK_NAMES",
    "CptpCheck",
    "DECOUPLING_FEASIBLE_THRESHOLD",
    "DecouplingResult",
    "DensityMatrix",
    "EXACT_TOL",
    "GateSpec",
    "KrausChannel",
    "MAX_QUBITS",
    "NORM_TOL",
    "NonlinearFilter",
    "Participation",
    "RecordEncoding",
    "RegisterLayout",
    "Scenario",
    "StateVector",
    "TrialEngine",
    "TrialReport",
    "Verdict",
    "apply_antilinear",
    "apply_gate",
    "apply_local_channel",
    "apply_nonlinear_filter",
    "as_generator",
    "basis_index",
    "born_probabilities",
    "born_statistics_test",
    "canonical_scenario",
    "check_circuit_equivalence",
    "check_coordination",
    "check_indistinguishability",
    "check_no_signalling",
    "check_nonlinear_witness",
    "clinic_erase",
    "conditional_clinic",
    "decoupling_diagnostic",
    "decoupling_sweep",
    "derive_seed",
    "draw_index",
    "expected_post_probabilities",
    "init_register",
    "nonlinear_probabilities",
    "observe",
    "partial_trace",
    "prepare_cat",
    "project_onto",
    "purity",
    "random_channel",
    "record_value",
    "reobserve",
    "rewrite_record",
    "run_checks",
    "run_ensemble",
    "run_trial",
    "sample_outcome",
    "scenario_layout",
    "spread_to_environment",
    "trace_distance",
    "validate_cptp",
    "von_neumann_entropy",
]
