//! Cubic-lattice pipeline: tagged determinant, its naive reduction, Ψ^{1/2} and log Ψ
//! expansions, the closedness filter and comparison against brute-force counts.

mod filter;
mod pipeline;
mod psi;

pub use filter::{
    apply_actions, compare_with_oracle, extract_gr, ComparisonRow, FilterDiagnostics, FilteredSeries, GenericGroup,
    GrRow, Verdict,
};
pub use psi::{
    expand_log, expand_sqrt, naive_critical_point, naive_reduce, naive_zero_angle_coeffs, per_site_log, symbolic_psi_sc,
    TaggedPsi, DEFAULT_MAX_ORDER, DEFAULT_TERM_BUDGET,
};
pub use pipeline::{
    naive_check, run_sc_series, NaiveResult, OracleSide, PipelineResult, PipelineSource, ScSeriesOptions,
    ScSeriesReport,
};
