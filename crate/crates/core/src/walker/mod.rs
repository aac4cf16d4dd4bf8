//! Non-backtracking walks with turn phases, propagator matrices and loop
//! decompositions of edge multisets.

mod direction;
mod graph_sum;
mod loops;
mod propagator;
mod whitney;

pub use direction::{plane_distance, project_sc, reverse, turn_phase, Geometry};
pub use graph_sum::{
    apply_graph_actions, graph_loop_sum, Decomposition, GraphEdge, GraphLoopSum, LoopFactor, LoopGraph,
    MAX_GRAPH_EDGES, REFERENCE_WALKS,
};
pub use loops::{enumerate_loops, for_each_loop, DedupPolicy, LoopWalk, DEFAULT_MAX_LEN, DEFAULT_NODE_BUDGET};
pub use propagator::{
    build_pt_propagator, build_pt_propagator_with, build_sc_propagator, det_one_minus_x, fourier_matrix,
    trace_power, PropagatorMatrix,
};
pub use whitney::{count_crossings, whitney_check, whitney_survey, WhitneyOutcome, WhitneySurvey};
