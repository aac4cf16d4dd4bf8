use crate::error::{Error, Result};
use crate::ring::{
    project_mode_sum, series_log_budget, series_sqrt_budget, Tag, TaggedPoly, XSeries, ModeSide,
};
use crate::walker::{build_sc_propagator, det_one_minus_x, fourier_matrix};
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub const DEFAULT_MAX_ORDER: usize = 8;
pub const DEFAULT_TERM_BUDGET: usize = 10_000_000;

/// det(1 − xΩ) of the tagged, mode-diagonal cubic propagator.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedPsi {
    series: XSeries,
}

impl TaggedPsi {
    pub fn series(&self) -> &XSeries {
        &self.series
    }

    pub fn coeff(&self, k: usize) -> &TaggedPoly {
        self.series.coeff(k)
    }

    /// Ψ padded with zero coefficients up to `order`.
    fn padded(&self, order: usize) -> XSeries {
        let mut c = self.series.coeffs().to_vec();
        c.resize(order + 1, TaggedPoly::zero());
        c.truncate(order + 1);
        XSeries::from_coeffs(order, c)
    }
}

pub fn symbolic_psi_sc() -> TaggedPsi {
    TaggedPsi {
        series: det_one_minus_x(&fourier_matrix(&build_sc_propagator())),
    }
}

/// All six u, v, w, l, m, n set to 1; only Fourier symbols remain.
pub fn naive_reduce(psi: &TaggedPsi) -> XSeries {
    psi.series
        .map_coeffs(|p| p.substitute_one(&[Tag::U, Tag::V, Tag::W, Tag::L, Tag::M, Tag::N]))
}

/// Naive Ψ at zero angles: exact integer coefficients of x⁰..x⁶.
pub fn naive_zero_angle_coeffs(naive: &XSeries) -> Result<Vec<BigRational>> {
    naive
        .coefficient_sums()
        .into_iter()
        .map(|c| {
            c.as_rational()
                .cloned()
                .ok_or_else(|| Error::Integrity(format!("non-rational zero-angle coefficient {c}")))
        })
        .collect()
}

/// Double root in (0.2, 0.3) of the naive zero-angle polynomial.
pub fn naive_critical_point(naive: &XSeries) -> Result<f64> {
    let c: Vec<f64> = naive_zero_angle_coeffs(naive)?
        .iter()
        .map(|r| r.to_f64().unwrap_or(f64::NAN))
        .collect();
    let d = |x: f64, k: usize| -> f64 {
        c.iter()
            .enumerate()
            .skip(k)
            .map(|(n, &a)| a * (0..k).map(|i| (n - i) as f64).product::<f64>())
            .rev()
            .fold(0.0, |acc, a| acc * x + a)
    };
    let (mut a, mut b) = (0.2, 0.3);
    if !(d(a, 1) < 0.0 && d(b, 1) > 0.0) {
        return Err(Error::Numeric("no minimum of the zero-angle polynomial in (0.2, 0.3)".into()));
    }
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if d(m, 1) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..8 {
        x -= d(x, 1) / d(x, 2);
    }
    Ok(x)
}

/// Ψ^{1/2} by the binomial series, before any projection.
pub fn expand_sqrt(psi: &TaggedPsi, order: usize, term_budget: usize) -> Result<XSeries> {
    series_sqrt_budget(&psi.padded(order), term_budget)
}

/// log Ψ, before any projection.
pub fn expand_log(psi: &TaggedPsi, order: usize, term_budget: usize) -> Result<XSeries> {
    series_log_budget(&psi.padded(order), term_budget)
}

/// Per-site mode average of a tagged series (zero Fourier exponents only).
pub fn per_site_log(log_psi: &XSeries) -> XSeries {
    project_mode_sum(log_psi, ModeSide::Symbolic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{CycloNum, TagMonomial};

    #[test]
    fn psi_low_and_top_coefficients() {
        let psi = symbolic_psi_sc();
        assert_eq!(psi.coeff(0), &TaggedPoly::one());
        let x2 = TaggedPoly::from_terms(
            [[4, 0, 0], [0, 4, 0], [0, 0, 4]]
                .iter()
                .map(|u| (TagMonomial::from_exps([u[0], u[1], u[2], 0, 0, 0, 0, 0, 0]), CycloNum::one())),
        );
        assert_eq!(psi.coeff(2), &x2);
        assert_eq!(
            psi.coeff(6),
            &TaggedPoly::term(TagMonomial::from_exps([4, 4, 4, 0, 0, 0, 0, 0, 0]), CycloNum::one())
        );
        let wind = TagMonomial::from_exps([2, 2, 2, -2, -2, -2, 1, 1, 1]);
        assert_eq!(psi.coeff(3).coeff(&wind), CycloNum::from_int(4));
    }

    #[test]
    fn every_term_pairs_steps_with_tags() {
        let psi = symbolic_psi_sc();
        for k in 0..=6 {
            for (m, _) in psi.coeff(k).terms() {
                assert_eq!(m.du() + m.dv() + m.dw(), 2 * k as i32);
            }
        }
    }

    #[test]
    fn naive_reduction_reaches_the_triangular_critical_point() {
        let n = naive_reduce(&symbolic_psi_sc());
        let c: Vec<i64> = naive_zero_angle_coeffs(&n).unwrap().iter().map(|r| r.to_integer().try_into().unwrap()).collect();
        assert_eq!(c, vec![1, -6, 3, 20, 3, -6, 1]);
        assert!((naive_critical_point(&n).unwrap() - (2.0 - 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(n.coeff(0), &TaggedPoly::one());
    }

    #[test]
    fn sqrt_squares_back() {
        let psi = symbolic_psi_sc();
        let s = expand_sqrt(&psi, 6, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(&s.mul(&s), psi.series());
    }

    #[test]
    fn per_site_log_vanishes_below_four() {
        let l = per_site_log(&expand_log(&symbolic_psi_sc(), 4, DEFAULT_TERM_BUDGET).unwrap());
        for k in 0..4 {
            assert!(l.coeff(k).is_zero(), "x^{k}: {}", l.coeff(k));
        }
        assert!(!l.coeff(4).is_zero());
    }

    #[test]
    fn budget_reports_reached_order() {
        let e = expand_log(&symbolic_psi_sc(), 6, 5);
        assert!(matches!(e, Err(Error::Budget { .. })));
    }
}
