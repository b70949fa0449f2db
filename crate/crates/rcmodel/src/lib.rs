//! Random-cluster (Fortuin-Kasteleyn) model on finite rectangular sublattices
//! of Z^2: exact enumeration for small graphs, seeded Monte Carlo for larger
//! ones, crossing events, planar duality, and sharp-threshold diagnostics.

pub mod analysis;
pub mod config;
pub mod duality;
pub mod error;
pub mod events;
pub mod exact;
pub mod experiments;
pub mod flow;
pub mod lattice;
pub mod plots;
pub mod records;
pub mod sampler;
pub mod unionfind;

pub use analysis::{
    check_combination, check_gluing, check_hamming_lemma_exact, check_hamming_lemma_mc,
    check_translation_difference_exact, check_translation_difference_mc, derive_seed, estimate_pc,
    estimate_window, fit_decay, influence_mc, influence_profile_mc, sharp_threshold_diagnostic_exact,
    sharp_threshold_diagnostic_mc, threshold_curve, CheckMode, DecayFit, DecayPoint,
    InequalityCheck, PcEstimate, SharpThresholdDiagnostic, SharpThresholdReport, ThresholdCurve,
    ThresholdPoint, TranslationDifferenceCheck, WindowEstimate, DEFAULT_PC_BRACKET,
    MIN_DECAY_SUCCESSES, WINDOW_LEVELS,
};
pub use config::{ExperimentConfig, ExperimentKind};
pub use duality::{
    dual_configuration, dual_crossing_event, dual_crossing_pair, dual_parameter,
    dual_strip_configuration, self_dual_point, wired_free_duality_tv,
};
pub use experiments::{brute_force_min_closure, run, MENGER_EDGE_LIMIT};
pub use plots::emit_plot_script;
pub use records::{read_records, validate_schema, write_records, ResultRecord, CSV_COLUMNS};
pub use error::{Error, Result};
pub use events::{
    count_disjoint_crossings, crossing_pivotal_edges, hamming_to_complement, EventSpec,
    GENERIC_HAMMING_LIMIT,
};
pub use exact::{
    cluster_count, enumerate_measure, enumerate_with_table, event_vector, hamming_expectation,
    russo_check, tv_distance_vec, Bc, ClusterTable, ExactDistribution, ModelParams,
    ENUMERATION_EDGE_LIMIT,
};
pub use flow::FlowNetwork;
pub use sampler::{
    conditional_open_probability, connected, estimate_event, estimate_statistic,
    heat_bath_sweep_law, run_chain, Algorithm, ChainState, EstimateWithError, Schedule,
    GENERATOR_NAME, N_BATCHES,
};
pub use lattice::{
    apply_symmetry, build_region, dual_graph, Configuration, DualGraph, Edge, EdgeId, Orientation,
    Region, SymmetryTransform, Vertex,
};
