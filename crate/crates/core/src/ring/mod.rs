//! Exact arithmetic: cyclotomic phases, tagged Laurent monomials, sparse
//! polynomials and truncated power series in `x`.

mod cyclo;
mod monomial;
mod poly;
mod series;

pub use cyclo::{cyclo_pow, CycloNum};
pub use monomial::{Tag, TagMonomial};
pub use poly::{poly_mul, TaggedPoly};
pub use series::{project_mode_sum, series_exp, series_log, series_log_budget, series_sqrt, series_sqrt_budget, ModeSide, XSeries};
