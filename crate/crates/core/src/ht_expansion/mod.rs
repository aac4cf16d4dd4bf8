//! High-temperature expansion by direct multiplication of bond factors over a window.

mod expand;
mod pipeline;
mod sweep;
mod window;

pub use expand::{expand_and_reduce, sum_over_configurations, Expansion, SpinMonomial, DEFAULT_STATE_BUDGET};
pub use pipeline::{center_local_series, full_partition_polynomial, max_order, run_window, WindowOptions, WindowRun};
pub use sweep::{sweep_series, SweepSeries, MAX_FRONTIER};
pub use window::{build_product_terms, lattice_factors, BondFactor, WindowLattice};
