use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    /// One-dimensional chain (a ring when periodic).
    Chain,
    Sq,
    Pt,
    Sc,
}

impl LatticeKind {
    pub fn dim(self) -> usize {
        match self {
            LatticeKind::Chain => 1,
            LatticeKind::Sq | LatticeKind::Pt => 2,
            LatticeKind::Sc => 3,
        }
    }

    pub fn coordination(self) -> usize {
        2 * self.positive_dirs().len()
    }

    /// One representative of each ± pair of bond directions.
    pub fn positive_dirs(self) -> &'static [[i64; 3]] {
        match self {
            LatticeKind::Chain => &[[1, 0, 0]],
            LatticeKind::Sq => &[[1, 0, 0], [0, 1, 0]],
            LatticeKind::Pt => &[[1, 0, 0], [0, 1, 0], [-1, 1, 0]],
            LatticeKind::Sc => &[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Chain => "chain",
            LatticeKind::Sq => "sq",
            LatticeKind::Pt => "pt",
            LatticeKind::Sc => "sc",
        }
    }

    /// Graph distance between lattice points in the infinite lattice.
    pub fn distance(self, a: [i64; 3], b: [i64; 3]) -> i64 {
        let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        match self {
            LatticeKind::Pt => (d[0].abs() + d[1].abs() + (d[0] + d[1]).abs()) / 2,
            _ => d[0].abs() + d[1].abs() + d[2].abs(),
        }
    }
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chain" | "ring" | "1d" => Ok(LatticeKind::Chain),
            "sq" => Ok(LatticeKind::Sq),
            "pt" => Ok(LatticeKind::Pt),
            "sc" => Ok(LatticeKind::Sc),
            _ => Err(Error::Invalid(format!("unknown lattice kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub sides: Vec<usize>,
    pub periodic: bool,
}

impl LatticeSpec {
    pub fn new(kind: LatticeKind, sides: Vec<usize>, periodic: bool) -> Result<Self> {
        if sides.len() != kind.dim() {
            return Err(Error::Invalid(format!("{} needs {} side lengths", kind.name(), kind.dim())));
        }
        if sides.iter().any(|&s| s == 0 || (periodic && s < 2)) {
            return Err(Error::Invalid("sides must be ≥ 1, and ≥ 2 when periodic".into()));
        }
        Ok(LatticeSpec { kind, sides, periodic })
    }

    /// Equal sides in every direction.
    pub fn cube(kind: LatticeKind, side: usize, periodic: bool) -> Result<Self> {
        Self::new(kind, vec![side; kind.dim()], periodic)
    }

    pub fn n_sites(&self) -> usize {
        self.sides.iter().product()
    }

    pub fn build(&self) -> Result<Lattice> {
        Lattice::new(self.clone())
    }
}

/// Sites in lexicographic order (x fastest) and bonds (site, site + d) per positive direction.
/// On a periodic side of length 2 both bonds of a pair are kept, so the bond count is always Nq/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub spec: LatticeSpec,
    pub coords: Vec<[i64; 3]>,
    pub bonds: Vec<(u32, u32)>,
    /// Positive-direction index of each bond.
    pub bond_dir: Vec<u8>,
    /// Bond ids incident to each site.
    pub incident: Vec<Vec<u32>>,
}

impl Lattice {
    fn new(spec: LatticeSpec) -> Result<Self> {
        let mut side = [1i64; 3];
        for (k, &s) in spec.sides.iter().enumerate() {
            side[k] = s as i64;
        }
        let n = spec.n_sites();
        if n > u32::MAX as usize / 4 {
            return Err(Error::TooLarge(format!("{n} sites")));
        }
        let mut coords = Vec::with_capacity(n);
        for z in 0..side[2] {
            for y in 0..side[1] {
                for x in 0..side[0] {
                    coords.push([x, y, z]);
                }
            }
        }
        let mut lat = Lattice {
            spec,
            coords,
            bonds: Vec::new(),
            bond_dir: Vec::new(),
            incident: vec![Vec::new(); n],
        };
        for s in 0..n {
            for (k, d) in lat.spec.kind.positive_dirs().iter().enumerate() {
                let c = lat.coords[s];
                if let Some(t) = lat.site_index([c[0] + d[0], c[1] + d[1], c[2] + d[2]]) {
                    let id = lat.bonds.len() as u32;
                    lat.bonds.push((s as u32, t as u32));
                    lat.bond_dir.push(k as u8);
                    lat.incident[s].push(id);
                    lat.incident[t].push(id);
                }
            }
        }
        Ok(lat)
    }

    pub fn n_sites(&self) -> usize {
        self.coords.len()
    }

    pub fn n_bonds(&self) -> usize {
        self.bonds.len()
    }

    fn side(&self, k: usize) -> i64 {
        self.spec.sides.get(k).copied().unwrap_or(1) as i64
    }

    /// Index of a coordinate, wrapped when periodic; `None` outside an open lattice.
    pub fn site_index(&self, c: [i64; 3]) -> Option<usize> {
        let mut idx = 0i64;
        let mut stride = 1i64;
        for k in 0..3 {
            let s = self.side(k);
            let mut v = c[k];
            if self.spec.periodic {
                v = v.rem_euclid(s);
            } else if v < 0 || v >= s {
                return None;
            }
            idx += v * stride;
            stride *= s;
        }
        Some(idx as usize)
    }

    /// Bond from `site` along positive direction `dir`, if present.
    pub fn bond_at(&self, site: usize, dir: u8) -> Option<u32> {
        self.incident[site]
            .iter()
            .copied()
            .find(|&b| self.bonds[b as usize].0 as usize == site && self.bond_dir[b as usize] == dir)
    }

    /// Central site of an open box (odd sides give a unique centre).
    pub fn center(&self) -> usize {
        let c = [self.side(0) / 2, self.side(1) / 2, self.side(2) / 2];
        self.site_index(c).expect("centre inside")
    }

    pub fn degree(&self, site: usize) -> usize {
        self.incident[site].len()
    }
}
