use super::psi::{theta, ThetaForm};
use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::num::NonZeroUsize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadOptions {
    pub form: ThetaForm,
    /// Gauss–Legendre points per axis on each cell.
    pub gauss_points: usize,
    /// Half-width of the innermost square around ω = 0.
    pub min_half: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            form: ThetaForm::Planar,
            gauss_points: 20,
            min_half: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// |difference| against a rule with fewer points per cell.
    pub error: f64,
    pub evals: usize,
}

fn rule(m: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(m).expect("at least one point"))
        .as_node_weight_pairs()
        .to_vec()
}

/// Cells of the graded cover of [−π, π]²: nested square annuli halving towards the origin,
/// each split into the 12 outer cells of a 4×4 grid, plus the innermost square.
fn graded_cells(min_half: f64) -> Vec<[f64; 3]> {
    let mut cells = Vec::new();
    let mut h = PI;
    while h > min_half {
        let s = h / 2.0;
        for i in 0..4 {
            for j in 0..4 {
                if (1..=2).contains(&i) && (1..=2).contains(&j) {
                    continue;
                }
                cells.push([-h + i as f64 * s, -h + j as f64 * s, s]);
            }
        }
        h = s;
    }
    cells.push([-h, -h, 2.0 * h]);
    cells
}

/// ∬ f over [−π, π]² on the graded cover. Deterministic: cell sums are added in a fixed order.
pub fn graded_integral<F: Fn(f64, f64) -> f64 + Sync>(f: &F, gauss_points: usize, min_half: f64) -> (f64, usize) {
    let nodes = rule(gauss_points);
    let cells = graded_cells(min_half);
    let parts: Vec<f64> = cells
        .par_iter()
        .map(|&[x0, y0, s]| {
            let half = 0.5 * s;
            let mut acc = 0.0;
            for &(a, wa) in &nodes {
                let x = x0 + half * (a + 1.0);
                for &(b, wb) in &nodes {
                    acc += wa * wb * f(x, y0 + half * (b + 1.0));
                }
            }
            acc * half * half
        })
        .collect();
    (parts.iter().sum(), cells.len() * nodes.len() * nodes.len())
}

/// (2π)⁻² ∬ log Θ(x; ω₁, ω₂) dω₁dω₂.
pub fn log_theta_mean(x: f64, opts: &QuadOptions) -> QuadResult {
    let f = |a: f64, b: f64| theta(opts.form, x, a, b).ln();
    let norm = 1.0 / (4.0 * PI * PI);
    let (hi, n1) = graded_integral(&f, opts.gauss_points, opts.min_half);
    let (lo, n2) = graded_integral(&f, (opts.gauss_points * 2 / 3).max(2), opts.min_half);
    QuadResult {
        value: hi * norm,
        error: (hi - lo).abs() * norm,
        evals: n1 + n2,
    }
}

/// Mean of log Ψ over the L×L mode grid ω = 2π(p, q)/L.
pub fn log_theta_mode_mean(x: f64, l: usize, form: ThetaForm) -> f64 {
    let step = 2.0 * PI / l as f64;
    let rows: Vec<f64> = (0..l)
        .into_par_iter()
        .map(|p| (0..l).map(|q| theta(form, x, p as f64 * step, q as f64 * step).ln()).sum())
        .collect();
    rows.iter().sum::<f64>() / (l * l) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_cover_tiles_the_square() {
        let (area, _) = graded_integral(&|_, _| 1.0, 3, 1e-6);
        assert!((area - 4.0 * PI * PI).abs() < 1e-12);
        let (m, _) = graded_integral(&|a: f64, b: f64| a * a * b.cos(), 8, 1e-6);
        // ∫a² da · ∫cos b db = (2π³/3)·0
        assert!(m.abs() < 1e-12);
    }

    #[test]
    fn smooth_case_agrees_with_periodic_rule() {
        for form in [ThetaForm::Printed, ThetaForm::Planar] {
            let q = log_theta_mean(0.1, &QuadOptions { form, ..Default::default() });
            let p = log_theta_mode_mean(0.1, 128, form);
            assert!((q.value - p).abs() < 1e-13, "{form:?} {} {}", q.value, p);
            assert!(q.error < 1e-12);
        }
    }

    #[test]
    fn critical_integrand_converges() {
        let xc = 2.0 - 3f64.sqrt();
        let a = log_theta_mean(xc, &QuadOptions::default());
        let b = log_theta_mean(
            xc,
            &QuadOptions {
                min_half: 1e-11,
                gauss_points: 24,
                ..Default::default()
            },
        );
        assert!(a.value.is_finite());
        assert!((a.value - b.value).abs() < 1e-12, "{} {}", a.value, b.value);
    }
}
