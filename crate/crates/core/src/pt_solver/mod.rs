//! Triangular-lattice solution: determinant, free energy, critical point, specific heat.

mod psi;
mod quadrature;
mod thermo;

pub use psi::{f_poly_derivative, f_poly_eval, symbolic_psi_pt, symbolic_psi_pt_with, theta, PsiPolynomial, ThetaForm, F_COEFFS};
pub use quadrature::{graded_integral, log_theta_mean, log_theta_mode_mean, QuadOptions, QuadResult};
pub use thermo::{
    critical_point, free_energy, free_energy_finite, log_window_grid, specific_heat, specific_heat_scan, t_of, x_of,
    CriticalFit, CriticalPoint, CvSample, LinearFit, ScanOptions, ThermoResult,
};
