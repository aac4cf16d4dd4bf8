use super::psi::{f_poly_derivative, f_poly_eval};
use super::quadrature::{log_theta_mean, log_theta_mode_mean, QuadOptions};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoResult {
    pub t: f64,
    pub j: f64,
    pub x: f64,
    /// Free energy per site Φ/N.
    pub phi: f64,
    pub c_v: Option<f64>,
    pub quad_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub x_c: f64,
    /// T_c/J = 1/artanh(x_c).
    pub t_c: f64,
    pub f_at_xc: f64,
    pub df_at_xc: f64,
    pub d2f_at_xc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    /// Slope against log|x − x_c|.
    pub b: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CvSample {
    pub t: f64,
    pub x: f64,
    pub c_v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalFit {
    pub critical: CriticalPoint,
    pub pooled: LinearFit,
    pub below: Option<LinearFit>,
    pub above: Option<LinearFit>,
    pub samples: Vec<CvSample>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ScanOptions {
    pub quad: QuadOptions,
    /// Finite-difference step as a fraction of |T − T_c|.
    pub rho: f64,
    /// Excluded |x − x_c| around the critical point.
    pub blackout: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            quad: QuadOptions::default(),
            rho: 0.1,
            blackout: 1e-5,
        }
    }
}

pub fn x_of(t: f64, j: f64) -> f64 {
    (j / t).tanh()
}

pub fn t_of(x: f64, j: f64) -> f64 {
    j / x.atanh()
}

/// Minimum of f in (0.2, 0.3): bisection on f′ then Newton polish.
pub fn critical_point() -> CriticalPoint {
    let (mut a, mut b) = (0.2, 0.3);
    let df = |x: f64| f_poly_derivative(x, 1);
    debug_assert!(df(a) < 0.0 && df(b) > 0.0);
    for _ in 0..40 {
        let m = 0.5 * (a + b);
        if df(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..8 {
        let step = df(x) / f_poly_derivative(x, 2);
        x -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    CriticalPoint {
        x_c: x,
        t_c: 1.0 / x.atanh(),
        f_at_xc: f_poly_eval(x),
        df_at_xc: df(x),
        d2f_at_xc: f_poly_derivative(x, 2),
    }
}

fn phi_from_mean(t: f64, x: f64, mean_log: f64) -> f64 {
    -t * std::f64::consts::LN_2 + 1.5 * t * (1.0 - x * x).ln() - 0.5 * t * mean_log
}

/// Φ/N from the continuum integral.
pub fn free_energy(t: f64, j: f64, opts: &QuadOptions) -> Result<ThermoResult> {
    if !(t > 0.0 && t.is_finite()) || !(j > 0.0) {
        return Err(Error::Invalid(format!("need T > 0 and J > 0, got T={t}, J={j}")));
    }
    let x = x_of(t, j);
    let q = log_theta_mean(x, opts);
    Ok(ThermoResult {
        t,
        j,
        x,
        phi: phi_from_mean(t, x, q.value),
        c_v: None,
        quad_error: 0.5 * t * q.error,
    })
}

/// Φ/N from the finite product over the L×L modes.
pub fn free_energy_finite(t: f64, j: f64, l: usize, opts: &QuadOptions) -> f64 {
    let x = x_of(t, j);
    phi_from_mean(t, x, log_theta_mode_mean(x, l, opts.form))
}

/// C_V = −T ∂²(Φ/N)/∂T² by a central difference with step h.
pub fn specific_heat(t: f64, j: f64, h: f64, opts: &QuadOptions) -> Result<f64> {
    let p = |tt: f64| free_energy(tt, j, opts).map(|r| r.phi);
    let (a, b, c) = (p(t - h)?, p(t)?, p(t + h)?);
    Ok(-t * (a - 2.0 * b + c) / (h * h))
}

fn regress(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let b = sxy / sxx;
    let intercept = my - b * mx;
    let ss_res: f64 = points.iter().map(|p| (p.1 - intercept - b * p.0).powi(2)).sum();
    LinearFit {
        b,
        intercept,
        r2: 1.0 - ss_res / syy,
        n: points.len(),
    }
}

/// Temperatures with |x − x_c| log-spaced over `window`, `per_side` on each side.
pub fn log_window_grid(window: (f64, f64), per_side: usize, j: f64) -> Vec<f64> {
    let xc = critical_point().x_c;
    let (lo, hi) = (window.0.ln(), window.1.ln());
    let mut ts = Vec::with_capacity(2 * per_side);
    for k in 0..per_side {
        let d = if per_side == 1 {
            lo.exp()
        } else {
            (lo + (hi - lo) * k as f64 / (per_side - 1) as f64).exp()
        };
        ts.push(t_of(xc - d, j));
        ts.push(t_of(xc + d, j));
    }
    ts.sort_by(|a, b| a.total_cmp(b));
    ts
}

/// C_V over a temperature grid straddling T_c and its fit against log|x − x_c|.
pub fn specific_heat_scan(t_grid: &[f64], j: f64, opts: &ScanOptions) -> Result<CriticalFit> {
    let crit = critical_point();
    let tc = crit.t_c * j;
    let mut samples = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let x = x_of(t, j);
        if (x - crit.x_c).abs() < opts.blackout {
            return Err(Error::Invalid(format!(
                "T = {t} lies inside the blackout |x − x_c| < {}",
                opts.blackout
            )));
        }
        let h = opts.rho * (t - tc).abs();
        samples.push(CvSample {
            t,
            x,
            c_v: specific_heat(t, j, h, &opts.quad)?,
        });
    }
    let side = |below: bool| -> Vec<(f64, f64)> {
        samples
            .iter()
            .filter(|s| (s.x < crit.x_c) == below)
            .map(|s| ((s.x - crit.x_c).abs().ln(), s.c_v))
            .collect()
    };
    let (lo, hi) = (side(true), side(false));
    if lo.len() + hi.len() < 3 || lo.is_empty() || hi.is_empty() {
        return Err(Error::Invalid(
            "grid must straddle T_c with at least 3 points in total, one on each side".into(),
        ));
    }
    let all: Vec<(f64, f64)> = lo.iter().chain(hi.iter()).copied().collect();
    Ok(CriticalFit {
        critical: crit,
        pooled: regress(&all),
        below: (lo.len() >= 3).then(|| regress(&lo)),
        above: (hi.len() >= 3).then(|| regress(&hi)),
        samples,
    })
}
