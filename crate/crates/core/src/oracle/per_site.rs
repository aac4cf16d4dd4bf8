use super::lattice::{Lattice, LatticeKind, LatticeSpec};
use super::subgraphs::{assemble_families, enumerate_connected, EvenCounts, EvenSubgraph, Root};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// How connected subgraphs are attributed to a single site on the infinite lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    /// Every subgraph touching the origin, weighted 1/|V|.
    Vertex,
    /// Subgraphs whose least bond (translation-invariant order) starts at the origin.
    MinBond,
}

/// Connected even subgraph up to translation: (offset of the bond's base site, direction index).
pub type Representative = Vec<([i64; 3], u8)>;

/// Open box of side 2·radius+1 around the origin.
pub fn infinite_box(kind: LatticeKind, radius: usize) -> Result<Lattice> {
    if kind == LatticeKind::Chain {
        return Err(Error::Invalid("chain has no closed subgraphs on the infinite lattice".into()));
    }
    LatticeSpec::cube(kind, 2 * radius + 1, false)?.build()
}

fn bond_key(lat: &Lattice, b: u32) -> (i64, i64, i64, u8) {
    let s = lat.bonds[b as usize].0 as usize;
    let c = lat.coords[s];
    (c[2], c[1], c[0], lat.bond_dir[b as usize])
}

fn girth(kind: LatticeKind) -> usize {
    match kind {
        LatticeKind::Pt => 3,
        _ => 4,
    }
}

/// Connected even subgraphs with least bond at the origin, one per translation class.
pub fn rooted_representatives(kind: LatticeKind, r_max: usize, budget: u64) -> Result<Vec<Representative>> {
    let lat = infinite_box(kind, r_max.max(1))?;
    let c = lat.center();
    let origin = lat.coords[c];
    let mut out = Vec::new();
    for dir in 0..kind.positive_dirs().len() as u8 {
        let root = lat.bond_at(c, dir).expect("interior bond");
        let rk = bond_key(&lat, root);
        enumerate_connected(&lat, Root::Bond(root), r_max, budget, |b| bond_key(&lat, b) > rk, |bs| {
            let mut rep: Representative = bs
                .iter()
                .map(|&b| {
                    let s = lat.coords[lat.bonds[b as usize].0 as usize];
                    ([s[0] - origin[0], s[1] - origin[1], s[2] - origin[2]], lat.bond_dir[b as usize])
                })
                .collect();
            rep.sort_unstable();
            out.push(rep);
        })?;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(out)
}

/// Connected even subgraphs per site on the infinite lattice, index r = 0..=r_max.
pub fn per_site_connected(kind: LatticeKind, r_max: usize, method: RootMethod, budget: u64) -> Result<Vec<BigRational>> {
    let mut out = vec![BigRational::zero(); r_max + 1];
    match method {
        RootMethod::MinBond => {
            for rep in rooted_representatives(kind, r_max, budget)? {
                out[rep.len()] += BigRational::one();
            }
        }
        RootMethod::Vertex => {
            let lat = infinite_box(kind, r_max.max(1))?;
            let c = lat.center() as u32;
            enumerate_connected(&lat, Root::Site(c), r_max, budget, |_| true, |bs| {
                let mut sites: Vec<u32> = bs
                    .iter()
                    .flat_map(|&b| {
                        let (s, t) = lat.bonds[b as usize];
                        [s, t]
                    })
                    .collect();
                sites.sort_unstable();
                sites.dedup();
                out[bs.len()] += BigRational::new(BigInt::one(), BigInt::from(sites.len()));
            })?;
        }
    }
    Ok(out)
}

/// Every translate of the representatives that fits in `lat`. On a periodic lattice all
/// sides must exceed the largest representative so that translates stay distinct.
pub fn place_representatives(reps: &[Representative], lat: &Lattice) -> Result<Vec<EvenSubgraph>> {
    let r_max = reps.iter().map(|r| r.len()).max().unwrap_or(0);
    if lat.spec.periodic && lat.spec.sides.iter().any(|&s| s <= r_max) {
        return Err(Error::Invalid(format!("periodic sides must exceed {r_max} for translation placement")));
    }
    let mut out = Vec::new();
    for t in 0..lat.n_sites() {
        let base = lat.coords[t];
        'rep: for rep in reps {
            let mut bonds = Vec::with_capacity(rep.len());
            for (off, dir) in rep {
                let Some(s) = lat.site_index([base[0] + off[0], base[1] + off[1], base[2] + off[2]]) else {
                    continue 'rep;
                };
                let Some(b) = lat.bond_at(s, *dir) else {
                    continue 'rep;
                };
                bonds.push(b);
            }
            out.push(EvenSubgraph::new(lat, bonds)?);
        }
    }
    Ok(out)
}

/// Even-subgraph counts on an open box or a torus wider than r_max, built from translated
/// representatives instead of a per-bond search. Agrees with `count_even_subgraphs` there.
pub fn count_even_subgraphs_by_translation(
    lat: &Lattice,
    r_max: usize,
    through: Option<u32>,
    budget: u64,
) -> Result<EvenCounts> {
    let reps = rooted_representatives(lat.spec.kind, r_max, budget)?;
    let comps = place_representatives(&reps, lat)?;
    let total = assemble_families(&comps, lat.n_sites(), r_max, through);
    let mut connected = vec![BigInt::zero(); r_max + 1];
    for g in comps.iter().filter(|g| through.is_none_or(|s| g.contains_site(s))) {
        connected[g.len()] += 1;
    }
    Ok(EvenCounts {
        total,
        connected,
        through,
        complete_through: r_max,
    })
}

/// Per-site log of the even-subgraph generating function on the infinite lattice, from the
/// polymer cluster expansion (connected even subgraphs as polymers, incompatible when they
/// share a site). Exact while no cluster of three polymers fits, i.e. r_max < 3·girth.
pub fn per_site_log_series(kind: LatticeKind, r_max: usize, budget: u64) -> Result<Vec<BigRational>> {
    let g = girth(kind);
    if r_max >= 3 * g {
        return Err(Error::TooLarge(format!("r_max {r_max} needs clusters of three polymers")));
    }
    let lat = infinite_box(kind, r_max.max(1))?;
    let c = lat.center();
    let origin = lat.coords[c];
    let mut out = vec![BigRational::zero(); r_max + 1];
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for rep in rooted_representatives(kind, r_max, budget)? {
        let a = rep.len();
        out[a] += BigRational::one();
        if a + g > r_max {
            continue;
        }
        let sites: HashSet<u32> = rep
            .iter()
            .flat_map(|(off, dir)| {
                let s = lat.site_index([origin[0] + off[0], origin[1] + off[1], origin[2] + off[2]]).expect("inside");
                let (p, q) = lat.bonds[lat.bond_at(s, *dir).expect("inside") as usize];
                [p, q]
            })
            .collect();
        let mut partners: HashSet<Vec<u32>> = HashSet::new();
        for &v in &sites {
            enumerate_connected(&lat, Root::Site(v), r_max - a, budget, |_| true, |bs| {
                let mut k = bs.to_vec();
                k.sort_unstable();
                partners.insert(k);
            })?;
        }
        for p in partners {
            out[a + p.len()] -= &half;
        }
    }
    Ok(out)
}

/// log S(x) of an integer series with S(0) = 1, exact, through the series length.
pub fn log_series(s: &[BigInt]) -> Result<Vec<BigRational>> {
    if s.first().is_none_or(|c| !c.is_one()) {
        return Err(Error::NonUnitConstant);
    }
    let s: Vec<BigRational> = s.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut l = vec![BigRational::zero(); s.len()];
    for n in 1..s.len() {
        // n l_n = n s_n − Σ_{k<n} k l_k s_{n−k}
        let mut acc = &s[n] * BigInt::from(n);
        for k in 1..n {
            acc -= &l[k] * &s[n - k] * BigInt::from(k);
        }
        l[n] = acc / BigInt::from(n);
    }
    Ok(l)
}

/// Per-site log series from raw counts on a torus of the given side (side > r_max).
pub fn torus_log_series(kind: LatticeKind, side: usize, r_max: usize, budget: u64) -> Result<Vec<BigRational>> {
    let lat = LatticeSpec::cube(kind, side, true)?.build()?;
    let counts = count_even_subgraphs_by_translation(&lat, r_max, None, budget)?;
    let n = BigInt::from(lat.n_sites());
    Ok(log_series(&counts.total)?.into_iter().map(|c| c / &n).collect())
}
