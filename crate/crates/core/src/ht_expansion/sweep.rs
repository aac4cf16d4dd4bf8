use super::expand::add_into;
use super::window::BondFactor;
use crate::error::{Error, Result};
use crate::oracle::Lattice;
use num_bigint::BigInt;
use rayon::prelude::*;

/// Largest number of simultaneously open sites the sweep supports.
pub const MAX_FRONTIER: usize = 256;

const PAR_THRESHOLD: usize = 4096;

/// Even-term series of a factor product, complete through `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSeries {
    pub coeffs: Vec<BigInt>,
    /// Order actually completed (below the request if the state budget forced truncation).
    pub order: usize,
    pub peak_states: usize,
}

/// Odd sites as a bitset over frontier slots, plus the centre flag.
type Key = ([u64; 4], bool);

fn flip(k: &mut [u64; 4], slot: u16) {
    k[slot as usize / 64] ^= 1 << (slot % 64);
}

fn has(k: &[u64; 4], slot: u16) -> bool {
    k[slot as usize / 64] >> (slot % 64) & 1 == 1
}

/// Same result as `sum_over_configurations(expand_and_reduce(..))`, computed by sweeping the
/// factors in site order and discarding states that can no longer become all-even within
/// the order: a site whose last factor has passed must be even, and with `lattice` given
/// (open boundary) the remaining odd sites must be pairable by paths that fit in the order.
pub fn sweep_series(
    factors: &[BondFactor],
    n_sites: usize,
    lattice: Option<&Lattice>,
    order: usize,
    require_center: Option<u32>,
    state_budget: usize,
) -> Result<SweepSeries> {
    let mut fs: Vec<BondFactor> = factors.to_vec();
    fs.sort_by_key(|f| (f.a.max(f.b), f.a.min(f.b)));
    let plan = Plan::new(&fs, n_sites);
    let mut slots = Slots::new(n_sites);
    let mut order = order;
    let mut unit = vec![0u128; order + 1];
    unit[0] = 1;
    let mut states: Vec<(Key, Vec<u128>)> = vec![(([0; 4], false), unit)];
    let mut peak = 1;
    for (k, f) in fs.iter().enumerate() {
        let k = k as i64;
        let (sa, sb) = (slots.open(f.a)?, slots.open(f.b)?);
        let hit = require_center.is_some_and(|c| f.a == c || f.b == c);
        let center_closed = require_center.is_some_and(|c| plan.last_use[c as usize] <= k);
        let mut closing = Vec::new();
        for (s, slot) in [(f.a, sa), (f.b, sb)] {
            if plan.last_use[s as usize] == k {
                closing.push(slot);
            }
        }
        let keep = |key: &Key| !(closing.iter().any(|&sl| has(&key.0, sl)) || (center_closed && !key.1));
        // a state's bound depends only on its odd sites, and only a and b change status here
        let slots_ref = &slots;
        let prune = |key: &Key, coeffs: &mut [u128], order: usize| {
            if let Some(lat) = lattice {
                let mut buf = [0u32; 64];
                let n = slots_ref.sites_of(&key.0, &mut buf);
                let Some(lo) = coeffs.iter().position(|&c| c != 0) else {
                    return;
                };
                let need = plan.lower_bound(lat, &buf[..n], k, order - lo);
                for c in coeffs.iter_mut().skip((order + 1).saturating_sub(need)) {
                    *c = 0;
                }
            }
        };
        let step = |(key, mut coeffs): (Key, Vec<u128>)| {
            let mut out: Vec<(Key, Vec<u128>)> = Vec::with_capacity(2);
            if order > 0 {
                let mut t = key;
                flip(&mut t.0, sa);
                flip(&mut t.0, sb);
                t.1 |= hit;
                if keep(&t) {
                    let mut shifted = vec![0u128; order + 1];
                    shifted[1..].copy_from_slice(&coeffs[..order]);
                    prune(&t, &mut shifted, order);
                    if shifted.iter().any(|&v| v != 0) {
                        out.push((t, shifted));
                    }
                }
            }
            if keep(&key) {
                if has(&key.0, sa) || has(&key.0, sb) {
                    prune(&key, &mut coeffs, order);
                }
                if coeffs.iter().any(|&v| v != 0) {
                    out.push((key, coeffs));
                }
            }
            out
        };
        let mut next: Vec<(Key, Vec<u128>)> = if states.len() >= PAR_THRESHOLD {
            states.into_par_iter().flat_map_iter(step).collect()
        } else {
            states.into_iter().flat_map(step).collect()
        };
        next.par_sort_unstable_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(Key, Vec<u128>)> = Vec::with_capacity(next.len());
        for (key, c) in next {
            match merged.last_mut() {
                Some((lk, lc)) if *lk == key => add_into(lc, &c, 0)?,
                _ => merged.push((key, c)),
            }
        }
        while merged.len() > state_budget {
            if order == 0 {
                return Err(Error::Budget {
                    what: format!("sweep exceeded {state_budget} states"),
                    reached: 0,
                });
            }
            order -= 1;
            merged.retain_mut(|(key, c)| {
                c.truncate(order + 1);
                prune(key, c, order);
                c.iter().any(|&v| v != 0)
            });
        }
        for s in [f.a, f.b] {
            if plan.last_use[s as usize] == k {
                slots.close(s);
            }
        }
        peak = peak.max(merged.len());
        states = merged;
    }
    let mut coeffs = vec![BigInt::from(0); order + 1];
    for ((odd, touched), c) in states {
        if odd == [0; 4] && (require_center.is_none() || touched) {
            for (p, v) in c.into_iter().enumerate().take(order + 1) {
                coeffs[p] += v;
            }
        }
    }
    Ok(SweepSeries {
        coeffs,
        order,
        peak_states: peak,
    })
}

/// Frontier slot allocation: a site holds a slot from its first factor to its last.
struct Slots {
    of_site: Vec<u16>,
    site_of: Vec<u32>,
    free: Vec<u16>,
}

impl Slots {
    fn new(n: usize) -> Self {
        Slots {
            of_site: vec![u16::MAX; n],
            site_of: vec![u32::MAX; MAX_FRONTIER],
            free: (0..MAX_FRONTIER as u16).rev().collect(),
        }
    }

    fn open(&mut self, s: u32) -> Result<u16> {
        let cur = self.of_site[s as usize];
        if cur != u16::MAX {
            return Ok(cur);
        }
        let slot = self
            .free
            .pop()
            .ok_or_else(|| Error::TooLarge(format!("more than {MAX_FRONTIER} open sites")))?;
        self.of_site[s as usize] = slot;
        self.site_of[slot as usize] = s;
        Ok(slot)
    }

    fn close(&mut self, s: u32) {
        let slot = std::mem::replace(&mut self.of_site[s as usize], u16::MAX);
        self.free.push(slot);
    }

    /// Sites of the set bits, written into `buf`; returns how many.
    fn sites_of(&self, bits: &[u64; 4], buf: &mut [u32; 64]) -> usize {
        let mut n = 0;
        for (w, &word) in bits.iter().enumerate() {
            let mut b = word;
            while b != 0 && n < buf.len() {
                buf[n] = self.site_of[w * 64 + b.trailing_zeros() as usize];
                n += 1;
                b &= b - 1;
            }
        }
        n
    }
}

struct Plan {
    /// Position of the last factor touching each site (−1 if none).
    last_use: Vec<i64>,
    /// From this position on, every remaining factor of the site joins `final_nbr`.
    single_from: Vec<i64>,
    final_nbr: Vec<u32>,
}

impl Plan {
    fn new(fs: &[BondFactor], n: usize) -> Self {
        let mut last_use = vec![-1i64; n];
        let mut final_nbr = vec![u32::MAX; n];
        for (k, f) in fs.iter().enumerate() {
            last_use[f.a as usize] = k as i64;
            last_use[f.b as usize] = k as i64;
            final_nbr[f.a as usize] = f.b;
            final_nbr[f.b as usize] = f.a;
        }
        let mut single_from = vec![-1i64; n];
        for (k, f) in fs.iter().enumerate() {
            for (s, t) in [(f.a, f.b), (f.b, f.a)] {
                if final_nbr[s as usize] != t {
                    single_from[s as usize] = k as i64;
                }
            }
        }
        Plan {
            last_use,
            single_from,
            final_nbr,
        }
    }

    /// Bonds still needed to make every site in `odd` even, after position `k`: each odd
    /// site must be joined to another by a path of unused bonds.
    /// Stops early once the bound exceeds `cap`.
    fn lower_bound(&self, lat: &Lattice, odd: &[u32], k: i64, cap: usize) -> usize {
        let m = odd.len();
        if m < 2 || m.div_ceil(2) > cap {
            return m.div_ceil(2);
        }
        let cap2 = 2 * cap as i64;
        let kind = lat.spec.kind;
        // a site left with a single neighbour must step there first
        let mut heads = [(0i64, 0u32, [0i64; 3]); 64];
        for (h, &s) in heads.iter_mut().zip(odd) {
            let forced = self.single_from[s as usize] <= k && k < self.last_use[s as usize];
            let p = if forced { self.final_nbr[s as usize] } else { s };
            *h = (forced as i64, p, lat.coords[p as usize]);
        }
        let mut total = 0i64;
        for i in 0..m {
            let (ci, pi, xi) = heads[i];
            let mut best = i64::MAX;
            for j in 0..m {
                if i == j {
                    continue;
                }
                let (cj, pj, xj) = heads[j];
                let d = if (ci == 1 && pi == odd[j]) || (cj == 1 && pj == odd[i]) {
                    1
                } else {
                    ci + cj + kind.distance(xi, xj)
                };
                best = best.min(d);
                if best <= 1 {
                    break;
                }
            }
            total += best;
            if total > cap2 {
                break;
            }
        }
        ((total + 1) / 2) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::super::expand::{expand_and_reduce, sum_over_configurations, DEFAULT_STATE_BUDGET};
    use super::super::window::{build_product_terms, WindowLattice};
    use super::*;
    use crate::oracle::LatticeKind;

    #[test]
    fn matches_literal_expansion() {
        for (kind, radius, order, dedup) in [
            (LatticeKind::Sq, 1, 8, true),
            (LatticeKind::Sq, 1, 8, false),
            (LatticeKind::Sq, 2, 4, true),
            (LatticeKind::Sq, 2, 4, false),
            (LatticeKind::Sc, 1, 4, true),
            (LatticeKind::Sc, 1, 2, false),
        ] {
            let w = WindowLattice::new(kind, radius).unwrap();
            {
                let fs = build_product_terms(&w, dedup);
                for center in [None, Some(w.center)] {
                    let lit = expand_and_reduce(&fs, order, center, DEFAULT_STATE_BUDGET).unwrap();
                    assert_eq!(lit.order, order);
                    let want = sum_over_configurations(&lit.monomials, order);
                    let n = w.lattice.n_sites();
                    let got = sweep_series(&fs, n, Some(&w.lattice), order, center, DEFAULT_STATE_BUDGET).unwrap();
                    assert_eq!(got.coeffs, want, "{kind:?} r{radius} dedup={dedup} center={center:?}");
                    let plain = sweep_series(&fs, n, None, order, center, DEFAULT_STATE_BUDGET).unwrap();
                    assert_eq!(plain.coeffs, want);
                }
            }
        }
    }

    #[test]
    fn budget_lowers_order() {
        let w = WindowLattice::new(LatticeKind::Sq, 3).unwrap();
        let fs = build_product_terms(&w, true);
        let s = sweep_series(&fs, w.lattice.n_sites(), None, 8, None, 20).unwrap();
        assert!(s.order < 8);
    }
}
