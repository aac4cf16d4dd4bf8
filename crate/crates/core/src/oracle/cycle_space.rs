use super::lattice::Lattice;
use crate::error::{Error, Result};

/// Cycle-space dimension limit for full enumeration.
pub const MAX_CYCLE_DIM: usize = 28;

/// Even-subgraph counts by size from the GF(2) cycle space: every even subgraph is a unique
/// sum of basis cycles, so walking all 2^dim sums in Gray-code order visits each once.
/// Needs at most 128 bonds.
pub fn cycle_space_counts(lat: &Lattice) -> Result<Vec<u64>> {
    let e = lat.n_bonds();
    if e > 128 {
        return Err(Error::TooLarge(format!("{e} bonds > 128")));
    }
    let basis = cycle_basis(lat);
    if basis.len() > MAX_CYCLE_DIM {
        return Err(Error::TooLarge(format!("cycle space dimension {} > {MAX_CYCLE_DIM}", basis.len())));
    }
    let mut counts = vec![0u64; e + 1];
    let mut cur = 0u128;
    counts[0] = 1;
    for g in 1u64..1 << basis.len() {
        cur ^= basis[g.trailing_zeros() as usize];
        counts[cur.count_ones() as usize] += 1;
    }
    Ok(counts)
}

/// Fundamental cycles of a BFS spanning forest, as bond bitsets.
pub fn cycle_basis(lat: &Lattice) -> Vec<u128> {
    let n = lat.n_sites();
    let mut parent_bond: Vec<Option<u32>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree = vec![false; lat.n_bonds()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &b in &lat.incident[v] {
                let (s, t) = lat.bonds[b as usize];
                let w = if s as usize == v { t } else { s } as usize;
                if !seen[w] {
                    seen[w] = true;
                    tree[b as usize] = true;
                    parent_bond[w] = Some(b);
                    queue.push_back(w);
                }
            }
        }
    }
    let path_to_root = |mut v: usize| {
        let mut bits = 0u128;
        while let Some(b) = parent_bond[v] {
            bits ^= 1u128 << b;
            let (s, t) = lat.bonds[b as usize];
            v = if s as usize == v { t } else { s } as usize;
        }
        bits
    };
    (0..lat.n_bonds())
        .filter(|&b| !tree[b])
        .map(|b| {
            let (s, t) = lat.bonds[b];
            (1u128 << b) ^ path_to_root(s as usize) ^ path_to_root(t as usize)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::lattice::{LatticeKind, LatticeSpec};

    #[test]
    fn dimensions() {
        let sq = LatticeSpec::cube(LatticeKind::Sq, 4, true).unwrap().build().unwrap();
        assert_eq!(cycle_basis(&sq).len(), 17);
        let sc = LatticeSpec::cube(LatticeKind::Sc, 2, true).unwrap().build().unwrap();
        assert_eq!(cycle_basis(&sc).len(), 17);
    }

    #[test]
    fn ring_counts() {
        let l = LatticeSpec::new(LatticeKind::Chain, vec![5], true).unwrap().build().unwrap();
        assert_eq!(cycle_space_counts(&l).unwrap(), vec![1, 0, 0, 0, 0, 1]);
    }
}
