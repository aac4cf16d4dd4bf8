use crate::error::{Error, Result};
use crate::oracle::{Lattice, LatticeKind, LatticeSpec};
use serde::Serialize;

/// Open box of sites within `radius` (sup norm) of a central site.
#[derive(Clone, Debug)]
pub struct WindowLattice {
    pub kind: LatticeKind,
    pub radius: usize,
    pub lattice: Lattice,
    pub center: u32,
}

impl WindowLattice {
    pub fn new(kind: LatticeKind, radius: usize) -> Result<Self> {
        if !matches!(kind, LatticeKind::Sq | LatticeKind::Sc) {
            return Err(Error::Invalid("window products are defined for sq and sc".into()));
        }
        let lattice = LatticeSpec::cube(kind, 2 * radius + 1, false)?.build()?;
        let center = lattice.center() as u32;
        Ok(WindowLattice {
            kind,
            radius,
            lattice,
            center,
        })
    }

    /// ceil(R/2) + 1: no closed graph of R bonds through the centre reaches the boundary.
    pub fn default_radius(order: usize) -> usize {
        order.div_ceil(2) + 1
    }

    /// Site at offset `d` from the centre, if inside.
    pub fn site_at(&self, d: [i64; 3]) -> Option<u32> {
        let c = self.lattice.coords[self.center as usize];
        self.lattice.site_index([c[0] + d[0], c[1] + d[1], c[2] + d[2]]).map(|s| s as u32)
    }
}

/// One factor (1 + x σ_a σ_b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BondFactor {
    /// Product family letter.
    pub family: char,
    pub a: u32,
    pub b: u32,
}

/// (family, axis, step sign, per-axis upper index bound as an offset from L)
type Family = (char, usize, i64, [i64; 3]);

fn families(kind: LatticeKind) -> Vec<Family> {
    // every index runs from 0; upper bounds L+δ are written as δ
    match kind {
        LatticeKind::Sq => vec![
            ('A', 1, 1, [0, -1, 0]),
            ('B', 1, -1, [0, 1, 0]),
            ('C', 0, 1, [-1, 0, 0]),
            ('D', 0, -1, [1, 0, 0]),
        ],
        LatticeKind::Sc => vec![
            ('A', 0, 1, [-1, 0, 0]),
            ('B', 1, 1, [0, -1, 0]),
            ('C', 2, 1, [0, 0, -1]),
            ('D', 0, -1, [1, 0, 0]),
            ('E', 1, -1, [0, 1, 0]),
            ('F', 2, -1, [0, 0, 1]),
        ],
        _ => Vec::new(),
    }
}

/// Product factors over the window. Indices i, j, k = 0..=L map to offsets −ρ..=ρ (L = 2ρ);
/// the backward families run one index past the window and those factors are clipped.
/// With `bond_dedup` only the forward families are kept, one factor per undirected bond;
/// otherwise every bond appears once per direction.
pub fn build_product_terms(w: &WindowLattice, bond_dedup: bool) -> Vec<BondFactor> {
    let rho = w.radius as i64;
    let big_l = 2 * rho;
    let dim = w.kind.dim();
    let mut out = Vec::new();
    for (family, axis, sign, ranges) in families(w.kind) {
        if bond_dedup && sign < 0 {
            continue;
        }
        let hi: Vec<i64> = (0..3).map(|k| if k < dim { big_l + ranges[k] } else { 0 }).collect();
        for k in 0..=hi[2] {
            for j in 0..=hi[1] {
                for i in 0..=hi[0] {
                    let mut from = [i - rho, j - rho, 0];
                    if dim == 3 {
                        from[2] = k - rho;
                    }
                    let mut to = from;
                    to[axis] += sign;
                    if let (Some(a), Some(b)) = (w.site_at(from), w.site_at(to)) {
                        out.push(BondFactor { family, a, b });
                    }
                }
            }
        }
    }
    out
}

/// One factor per bond of a finite lattice (parallel bonds kept).
pub fn lattice_factors(lat: &Lattice) -> Vec<BondFactor> {
    lat.bonds
        .iter()
        .map(|&(a, b)| BondFactor { family: 'L', a, b })
        .collect()
}
