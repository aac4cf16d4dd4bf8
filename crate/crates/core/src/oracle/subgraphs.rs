use super::lattice::Lattice;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use rayon::prelude::*;

/// Default node budget for connected-subgraph enumeration.
pub const DEFAULT_ENUM_BUDGET: u64 = 2_000_000_000;

/// Bond subset of a lattice with every vertex of even degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvenSubgraph {
    /// Sorted bond ids.
    pub bonds: Vec<u32>,
    /// Sorted ids of sites with positive degree.
    pub sites: Vec<u32>,
}

impl EvenSubgraph {
    /// Validates evenness.
    pub fn new(lat: &Lattice, mut bonds: Vec<u32>) -> Result<Self> {
        bonds.sort_unstable();
        bonds.dedup();
        let mut deg = std::collections::BTreeMap::<u32, u32>::new();
        for &b in &bonds {
            let (s, t) = *lat
                .bonds
                .get(b as usize)
                .ok_or_else(|| Error::Invalid(format!("bond {b} out of range")))?;
            *deg.entry(s).or_default() += 1;
            *deg.entry(t).or_default() += 1;
        }
        if let Some((s, _)) = deg.iter().find(|(_, &d)| d % 2 == 1) {
            return Err(Error::OddVertex(format!("site {s}")));
        }
        Ok(EvenSubgraph {
            bonds,
            sites: deg.into_keys().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn contains_site(&self, s: u32) -> bool {
        self.sites.binary_search(&s).is_ok()
    }
}

/// Where a connected enumeration is anchored.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Root {
    /// Subgraphs whose least allowed bond is this one.
    Bond(u32),
    /// Subgraphs touching this site.
    Site(u32),
}

/// Redelmeier enumeration of connected bond sets with at most `r_max` bonds, restricted to
/// bonds passing `allowed`, reporting the even ones. Branches whose odd-vertex count cannot
/// be repaired within the remaining bonds are cut.
pub(crate) fn enumerate_connected<A, V>(
    lat: &Lattice,
    root: Root,
    r_max: usize,
    budget: u64,
    allowed: A,
    mut visit: V,
) -> Result<u64>
where
    A: Fn(u32) -> bool,
    V: FnMut(&[u32]),
{
    let mut st = State {
        lat,
        r_max,
        budget,
        nodes: 0,
        deg: vec![0; lat.n_sites()],
        odd: 0,
        marked: vec![false; lat.n_bonds()],
        current: Vec::with_capacity(r_max),
    };
    let mut untried = Vec::new();
    match root {
        Root::Bond(b) => {
            if r_max == 0 {
                return Ok(0);
            }
            st.marked[b as usize] = true;
            st.push(b);
            if st.odd == 0 {
                visit(&st.current);
            }
            st.extend_frontier(b, &allowed, &mut untried);
            st.recurse(untried, &allowed, &mut visit)?;
        }
        Root::Site(s) => {
            for &b in &lat.incident[s as usize] {
                if allowed(b) && !st.marked[b as usize] {
                    st.marked[b as usize] = true;
                    untried.push(b);
                }
            }
            st.recurse(untried, &allowed, &mut visit)?;
        }
    }
    Ok(st.nodes)
}

struct State<'a> {
    lat: &'a Lattice,
    r_max: usize,
    budget: u64,
    nodes: u64,
    deg: Vec<u8>,
    odd: usize,
    marked: Vec<bool>,
    current: Vec<u32>,
}

impl State<'_> {
    fn toggle_deg(&mut self, s: u32, up: bool) {
        let d = &mut self.deg[s as usize];
        if up {
            *d += 1;
        } else {
            *d -= 1;
        }
        if *d % 2 == 1 {
            self.odd += 1;
        } else {
            self.odd -= 1;
        }
    }

    fn push(&mut self, b: u32) {
        let (s, t) = self.lat.bonds[b as usize];
        self.toggle_deg(s, true);
        self.toggle_deg(t, true);
        self.current.push(b);
    }

    fn pop(&mut self) {
        let b = self.current.pop().expect("non-empty");
        let (s, t) = self.lat.bonds[b as usize];
        self.toggle_deg(s, false);
        self.toggle_deg(t, false);
    }

    fn extend_frontier<A: Fn(u32) -> bool>(&mut self, b: u32, allowed: &A, out: &mut Vec<u32>) {
        let (s, t) = self.lat.bonds[b as usize];
        for v in [s, t] {
            for &nb in &self.lat.incident[v as usize] {
                if !self.marked[nb as usize] && allowed(nb) {
                    self.marked[nb as usize] = true;
                    out.push(nb);
                }
            }
        }
    }

    fn recurse<A, V>(&mut self, mut untried: Vec<u32>, allowed: &A, visit: &mut V) -> Result<()>
    where
        A: Fn(u32) -> bool,
        V: FnMut(&[u32]),
    {
        while let Some(b) = untried.pop() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::Budget {
                    what: format!("subgraph enumeration exceeded {} nodes", self.budget),
                    reached: 0,
                });
            }
            self.push(b);
            if self.odd == 0 {
                visit(&self.current);
            }
            let len = self.current.len();
            if len < self.r_max && self.odd <= 2 * (self.r_max - len) {
                let mut next = untried.clone();
                let first_new = next.len();
                self.extend_frontier(b, allowed, &mut next);
                let added: Vec<u32> = next[first_new..].to_vec();
                self.recurse(next, allowed, visit)?;
                for nb in added {
                    self.marked[nb as usize] = false;
                }
            }
            self.pop();
        }
        Ok(())
    }
}

/// All connected even subgraphs of `lat` with 1..=r_max bonds, each once (rooted at its least bond id).
pub fn connected_even_subgraphs(lat: &Lattice, r_max: usize, budget: u64) -> Result<Vec<EvenSubgraph>> {
    let per_root: Vec<Result<Vec<EvenSubgraph>>> = (0..lat.n_bonds() as u32)
        .into_par_iter()
        .map(|b0| {
            let mut found = Vec::new();
            enumerate_connected(lat, Root::Bond(b0), r_max, budget, |b| b > b0, |bs| {
                found.push(bs.to_vec());
            })?;
            Ok(found
                .into_iter()
                .map(|bs| EvenSubgraph::new(lat, bs).expect("enumerated subgraph is even"))
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for r in per_root {
        out.extend(r?);
    }
    Ok(out)
}

/// Connected even subgraphs of `lat` touching `site`.
pub fn connected_through_site(lat: &Lattice, site: u32, r_max: usize, budget: u64) -> Result<Vec<EvenSubgraph>> {
    let mut found = Vec::new();
    enumerate_connected(lat, Root::Site(site), r_max, budget, |_| true, |bs| found.push(bs.to_vec()))?;
    Ok(found
        .into_iter()
        .map(|bs| EvenSubgraph::new(lat, bs).expect("enumerated subgraph is even"))
        .collect())
}

/// Even-subgraph counts by number of bonds, index r = 0..=r_max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenCounts {
    /// All even subgraphs (disjoint unions counted once each); `total[0] = 1` unless restricted.
    pub total: Vec<BigInt>,
    /// Connected ones only.
    pub connected: Vec<BigInt>,
    /// Restricted to subgraphs incident to this site.
    pub through: Option<u32>,
    /// Highest r for which the table is complete.
    pub complete_through: usize,
}

/// Counts of vertex-disjoint unions of `comps` by total size, optionally requiring one
/// component to contain `through`.
pub fn assemble_families(comps: &[EvenSubgraph], n_sites: usize, r_max: usize, through: Option<u32>) -> Vec<BigInt> {
    let mut sorted: Vec<&EvenSubgraph> = comps.iter().filter(|c| c.len() <= r_max).collect();
    sorted.sort_by_key(|c| c.len());
    let mut counts = vec![0u128; r_max + 1];
    let mut used = vec![false; n_sites];
    match through {
        None => {
            counts[0] = 1;
            families(&sorted, 0, 0, r_max, &mut used, &mut counts, None);
        }
        Some(c) => {
            for comp in sorted.iter().filter(|g| g.contains_site(c)) {
                mark(&mut used, comp, true);
                counts[comp.len()] += 1;
                families(&sorted, 0, comp.len(), r_max, &mut used, &mut counts, Some(c));
                mark(&mut used, comp, false);
            }
        }
    }
    counts.into_iter().map(BigInt::from).collect()
}

fn mark(used: &mut [bool], g: &EvenSubgraph, v: bool) {
    for &s in &g.sites {
        used[s as usize] = v;
    }
}

fn families(
    sorted: &[&EvenSubgraph],
    start: usize,
    size: usize,
    r_max: usize,
    used: &mut [bool],
    counts: &mut [u128],
    skip_site: Option<u32>,
) {
    for i in start..sorted.len() {
        let g = sorted[i];
        if size + g.len() > r_max {
            break;
        }
        if g.sites.iter().any(|&s| used[s as usize]) || skip_site.is_some_and(|c| g.contains_site(c)) {
            continue;
        }
        mark(used, g, true);
        counts[size + g.len()] += 1;
        families(sorted, i + 1, size + g.len(), r_max, used, counts, skip_site);
        mark(used, g, false);
    }
}

fn connected_table(comps: &[EvenSubgraph], r_max: usize, through: Option<u32>) -> Vec<BigInt> {
    let mut c = vec![BigInt::from(0); r_max + 1];
    for g in comps {
        if g.len() <= r_max && through.is_none_or(|s| g.contains_site(s)) {
            c[g.len()] += 1;
        }
    }
    c
}

/// Even-subgraph counts on a finite lattice, winding graphs included. Connected pieces are
/// enumerated directly on the lattice graph, then combined into vertex-disjoint unions.
/// On budget exhaustion the table is returned complete through the last finished order.
pub fn count_even_subgraphs(lat: &Lattice, r_max: usize, through: Option<u32>, budget: u64) -> Result<EvenCounts> {
    if let Some(s) = through {
        if s as usize >= lat.n_sites() {
            return Err(Error::Invalid(format!("site {s} out of range")));
        }
    }
    let mut reached = r_max;
    let comps = match connected_even_subgraphs(lat, r_max, budget) {
        Ok(c) => c,
        Err(Error::Budget { .. }) => {
            let mut best = None;
            for r in (0..r_max).rev() {
                if let Ok(c) = connected_even_subgraphs(lat, r, budget) {
                    best = Some(c);
                    reached = r;
                    break;
                }
            }
            best.unwrap_or_default()
        }
        Err(e) => return Err(e),
    };
    let mut total = assemble_families(&comps, lat.n_sites(), reached, through);
    let mut connected = connected_table(&comps, reached, through);
    total.resize(r_max + 1, BigInt::from(0));
    connected.resize(r_max + 1, BigInt::from(0));
    Ok(EvenCounts {
        total,
        connected,
        through,
        complete_through: reached,
    })
}
