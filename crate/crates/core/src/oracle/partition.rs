use super::lattice::Lattice;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Largest lattice for the exhaustive spin sum.
pub const MAX_EXHAUSTIVE_SITES: usize = 27;

/// Spins fixed by the outer (parallel) loop.
const OUTER_BITS: usize = 8;

/// S(x) = 2^{-N} Σ_σ Π_bonds (1 + xσσ′) as exact integer coefficients, index = power of x.
///
/// Global spin flip symmetry fixes σ₀ = +1. The inner loop walks the remaining spins in
/// Gray-code order, keeping the number of agreeing bonds up to date.
pub fn exhaustive_partition(lat: &Lattice) -> Result<Vec<BigInt>> {
    let n = lat.n_sites();
    if n > MAX_EXHAUSTIVE_SITES {
        return Err(Error::TooLarge(format!("{n} sites > {MAX_EXHAUSTIVE_SITES}")));
    }
    let e = lat.n_bonds();
    if n <= 1 {
        return Ok(vec![BigInt::one()]);
    }
    let free = n - 1;
    let outer = OUTER_BITS.min(free);
    let inner = free - outer;
    let hist_parts: Vec<Vec<u64>> = (0u64..1 << outer)
        .into_par_iter()
        .map(|hi| {
            let mut spins = vec![1i8; n];
            for k in 0..outer {
                if hi >> k & 1 == 1 {
                    spins[1 + inner + k] = -1;
                }
            }
            let mut agree = lat
                .bonds
                .iter()
                .filter(|&&(s, t)| spins[s as usize] == spins[t as usize])
                .count() as i64;
            let mut hist = vec![0u64; e + 1];
            hist[agree as usize] += 1;
            for g in 1u64..1 << inner {
                let site = 1 + g.trailing_zeros() as usize;
                let sv = spins[site];
                for &b in &lat.incident[site] {
                    let (s, t) = lat.bonds[b as usize];
                    let other = if s as usize == site { t } else { s } as usize;
                    if other == site {
                        continue;
                    }
                    agree += if spins[other] == sv { -1 } else { 1 };
                }
                spins[site] = -sv;
                hist[agree as usize] += 1;
            }
            hist
        })
        .collect();
    let mut hist = vec![0u64; e + 1];
    for h in hist_parts {
        for (a, c) in h.into_iter().enumerate() {
            hist[a] += c;
        }
    }
    let mut poly = vec![BigInt::zero(); e + 1];
    let plus = binomial_row(e);
    for (a, &count) in hist.iter().enumerate() {
        if count == 0 {
            continue;
        }
        // (1+x)^a (1−x)^(e−a)
        let p = mul_poly(&plus[a], &alternate(&plus[e - a]));
        for (k, c) in p.into_iter().enumerate() {
            poly[k] += c * count;
        }
    }
    let denom = BigInt::one() << free;
    let mut out = Vec::with_capacity(e + 1);
    for c in poly {
        let (q, r) = c.div_rem(&denom);
        if !r.is_zero() {
            return Err(Error::Integrity("partition coefficient not divisible by 2^(N-1)".into()));
        }
        out.push(q);
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// Coefficients of (1+x)^k for k = 0..=n.
fn binomial_row(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![BigInt::one(); k + 1];
        for i in 1..k {
            row[i] = &prev[i - 1] + &prev[i];
        }
        rows.push(row);
    }
    rows
}

fn alternate(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect()
}

fn mul_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::lattice::{LatticeKind, LatticeSpec};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn single_bond_gives_one() {
        let l = LatticeSpec::new(LatticeKind::Chain, vec![2], false).unwrap().build().unwrap();
        assert_eq!(exhaustive_partition(&l).unwrap(), ints(&[1]));
    }

    #[test]
    fn ring_of_four() {
        let l = LatticeSpec::new(LatticeKind::Chain, vec![4], true).unwrap().build().unwrap();
        assert_eq!(exhaustive_partition(&l).unwrap(), ints(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn two_site_ring_is_a_double_bond() {
        // two parallel bonds between the same pair: (1+xσσ')² averages to 1 + x²
        let l = LatticeSpec::new(LatticeKind::Chain, vec![2], true).unwrap().build().unwrap();
        assert_eq!(exhaustive_partition(&l).unwrap(), ints(&[1, 0, 1]));
    }

    #[test]
    fn torus_three_has_winding_triangles() {
        let l = LatticeSpec::cube(LatticeKind::Sq, 3, true).unwrap().build().unwrap();
        let s = exhaustive_partition(&l).unwrap();
        assert_eq!(s[3], BigInt::from(6));
        assert_eq!(s[4], BigInt::from(9));
    }

    #[test]
    fn value_at_one_counts_cycle_space() {
        // S(1) = 2^(E − N + 1) for a connected graph
        let l = LatticeSpec::cube(LatticeKind::Sq, 3, true).unwrap().build().unwrap();
        let s: BigInt = exhaustive_partition(&l).unwrap().iter().sum();
        assert_eq!(s, BigInt::one() << (18 - 9 + 1));
    }

    #[test]
    fn too_large() {
        let l = LatticeSpec::cube(LatticeKind::Sq, 6, true).unwrap().build().unwrap();
        assert!(matches!(exhaustive_partition(&l), Err(Error::TooLarge(_))));
    }
}
