use crate::ring::{TaggedPoly, XSeries};
use crate::walker::{build_pt_propagator_with, det_one_minus_x, fourier_matrix, Geometry};
use serde::{Deserialize, Serialize};

/// det(1 − xΩ) of the mode-diagonal triangular propagator, in Fourier symbols e_p, e_q.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiPolynomial {
    pub geometry: Geometry,
    series: XSeries,
}

impl PsiPolynomial {
    pub fn series(&self) -> &XSeries {
        &self.series
    }

    pub fn coeff(&self, k: usize) -> &TaggedPoly {
        self.series.coeff(k)
    }

    /// Numeric value with e_p → e^{iω₁}, e_q → e^{iω₂}.
    pub fn eval(&self, x: f64, w1: f64, w2: f64) -> f64 {
        let mut acc = 0.0;
        let mut xp = 1.0;
        for k in 0..=self.series.order() {
            acc += xp * self.series.coeff(k).eval([1.0; 6], [w1, w2, 0.0]).re;
            xp *= x;
        }
        acc
    }
}

/// Ψ for the printed triangular recurrence.
pub fn symbolic_psi_pt() -> PsiPolynomial {
    symbolic_psi_pt_with(Geometry::PtPrinted)
}

pub fn symbolic_psi_pt_with(geometry: Geometry) -> PsiPolynomial {
    let prop = fourier_matrix(&build_pt_propagator_with(geometry));
    PsiPolynomial {
        geometry,
        series: det_one_minus_x(&prop),
    }
}

/// Which continuum integrand to use.
///
/// `Printed` carries 8cos(2(ω₁−ω₂)) in the x³ term, as produced by the printed shift table;
/// `Planar` carries the constant 8 of the consistently oriented lattice. Both agree at ω = 0,
/// hence share f(x) and x_c, but only `Planar` gives a monotone free energy with Φ/N → −3J
/// as T → 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaForm {
    Printed,
    #[default]
    Planar,
}

impl ThetaForm {
    pub fn geometry(self) -> Geometry {
        match self {
            ThetaForm::Printed => Geometry::PtPrinted,
            ThetaForm::Planar => Geometry::PtPlanar,
        }
    }
}

/// Coefficients of f(x) = Θ(x; 0, 0), lowest power first.
pub const F_COEFFS: [f64; 7] = [1.0, -6.0, 3.0, 20.0, 3.0, -6.0, 1.0];

/// f(x), evaluated in the factored form (1+x)²(1−4x+x²)² for accuracy near its double roots.
pub fn f_poly_eval(x: f64) -> f64 {
    let g = 1.0 - 4.0 * x + x * x;
    (1.0 + x) * (1.0 + x) * g * g
}

/// k-th derivative of f from its coefficients.
pub fn f_poly_derivative(x: f64, k: usize) -> f64 {
    F_COEFFS
        .iter()
        .enumerate()
        .skip(k)
        .map(|(n, &c)| c * (0..k).map(|i| (n - i) as f64).product::<f64>())
        .rev()
        .fold(0.0, |a, c| a * x + c)
}

/// Θ(x; ω₁, ω₂) written as f(x) plus non-negative-at-small-ω corrections:
/// Θ = f + 2x(1−x²)²(3 − S) [− 16x³ sin²(ω₁−ω₂) for the printed form],
/// with 3 − S = 2[sin²(ω₁/2) + sin²(ω₂/2) + sin²((ω₁−ω₂)/2)].
pub fn theta(form: ThetaForm, x: f64, w1: f64, w2: f64) -> f64 {
    let d = w1 - w2;
    let s2 = |a: f64| {
        let s = (0.5 * a).sin();
        s * s
    };
    let three_minus_s = 2.0 * (s2(w1) + s2(w2) + s2(d));
    let omx2 = 1.0 - x * x;
    let mut t = f_poly_eval(x) + 2.0 * x * omx2 * omx2 * three_minus_s;
    if form == ThetaForm::Printed {
        let sd = d.sin();
        t -= 16.0 * x * x * x * sd * sd;
    }
    t
}
