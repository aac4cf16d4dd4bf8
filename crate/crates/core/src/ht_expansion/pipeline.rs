use super::expand::DEFAULT_STATE_BUDGET;
use super::sweep::sweep_series;
use super::window::{build_product_terms, lattice_factors, WindowLattice};
use crate::error::{Error, Result};
use crate::oracle::{log_series, LatticeKind, LatticeSpec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Largest order accepted per lattice kind.
pub fn max_order(kind: LatticeKind) -> usize {
    match kind {
        LatticeKind::Sc => 8,
        _ => 10,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowOptions {
    pub kind: LatticeKind,
    pub order: usize,
    /// Defaults to ceil(order/2) + 1.
    pub radius: Option<usize>,
    /// One factor per undirected bond instead of one per direction.
    pub bond_dedup: bool,
    /// Keep only terms containing the centre spin.
    pub through_center: bool,
    pub state_budget: usize,
}

impl WindowOptions {
    pub fn new(kind: LatticeKind, order: usize) -> Self {
        WindowOptions {
            kind,
            order,
            radius: None,
            bond_dedup: true,
            through_center: true,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRun {
    pub radius: usize,
    pub n_factors: usize,
    /// g_r for r = 0..=order_reached.
    pub coeffs: Vec<BigInt>,
    pub order_reached: usize,
    pub peak_states: usize,
}

/// Expand the window product and sum over configurations.
pub fn run_window(opts: &WindowOptions) -> Result<WindowRun> {
    if opts.order > max_order(opts.kind) {
        return Err(Error::Invalid(format!(
            "order {} above the maximum {} for {}",
            opts.order,
            max_order(opts.kind),
            opts.kind.name()
        )));
    }
    let radius = opts.radius.unwrap_or_else(|| WindowLattice::default_radius(opts.order));
    let w = WindowLattice::new(opts.kind, radius)?;
    let factors = build_product_terms(&w, opts.bond_dedup);
    let center = opts.through_center.then_some(w.center);
    let s = sweep_series(&factors, w.lattice.n_sites(), Some(&w.lattice), opts.order, center, opts.state_budget)?;
    Ok(WindowRun {
        radius,
        n_factors: factors.len(),
        order_reached: s.order,
        coeffs: s.coeffs,
        peak_states: s.peak_states,
    })
}

/// S(x) = 2^{-N} Σ_σ Π_bonds (1 + xσσ′) on a finite lattice by direct product expansion,
/// trailing zeros removed.
pub fn full_partition_polynomial(spec: &LatticeSpec, state_budget: usize) -> Result<Vec<BigInt>> {
    let lat = spec.build()?;
    let factors = lattice_factors(&lat);
    let order = factors.len();
    let geometry = (!spec.periodic).then_some(&lat);
    let s = sweep_series(&factors, lat.n_sites(), geometry, order, None, state_budget)?;
    if s.order < order {
        return Err(Error::Budget {
            what: format!("partition polynomial exceeded {state_budget} states"),
            reached: s.order,
        });
    }
    let mut c = s.coeffs;
    while c.len() > 1 && c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
    Ok(c)
}

/// log S_W − log S_{W∖c} from the unrestricted series S_W and the through-centre series T_W
/// (S_{W∖c} = S_W − T_W). Unlike T_W itself this does not grow with the window.
pub fn center_local_series(s_w: &[BigInt], t_w: &[BigInt]) -> Result<Vec<BigRational>> {
    if s_w.len() != t_w.len() {
        return Err(Error::Invalid("series lengths differ".into()));
    }
    let rest: Vec<BigInt> = s_w.iter().zip(t_w).map(|(s, t)| s - t).collect();
    let a = log_series(s_w)?;
    let b = log_series(&rest)?;
    Ok(a.into_iter().zip(b).map(|(x, y)| x - y).collect())
}
