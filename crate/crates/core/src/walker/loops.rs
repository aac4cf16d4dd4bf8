use super::direction::{plane_distance, reverse, turn_phase, Geometry};
use crate::error::{Error, Result};
use crate::ring::{CycloNum, TagMonomial};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default depth bound for loop enumeration.
pub const DEFAULT_MAX_LEN: usize = 12;
/// Default DFS node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Closed non-backtracking walk, closing turn included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopWalk {
    pub geometry: Geometry,
    pub base: [i64; 3],
    pub dirs: Vec<u8>,
    /// Sum of turns (units of 60°) over all r transitions.
    pub turn_sum: i32,
    /// Product of per-step tags, each step contributing its tag squared (SC only).
    pub tag: TagMonomial,
}

impl LoopWalk {
    /// Validates cyclic non-backtracking and closure in the triangular plane.
    pub fn from_dirs(geometry: Geometry, base: [i64; 3], dirs: Vec<u8>) -> Result<Self> {
        if dirs.is_empty() || dirs.iter().any(|d| !(1..=6).contains(d)) {
            return Err(Error::Invalid("directions must be non-empty and in 1..=6".into()));
        }
        let r = dirs.len();
        let mut turn_sum = 0;
        let mut tag = TagMonomial::ONE;
        let mut pos = [0i64; 2];
        for i in 0..r {
            let prev = dirs[(i + r - 1) % r];
            let t = geometry
                .turn(prev, dirs[i])
                .ok_or_else(|| Error::Invalid(format!("backtracking step at position {i}")))?;
            turn_sum += t;
            let s = geometry.step_tag(dirs[i]);
            tag = tag * s * s;
            let st = geometry.plane_step(dirs[i]);
            pos = [pos[0] + st[0], pos[1] + st[1]];
        }
        if pos != [0, 0] {
            return Err(Error::Invalid("walk does not close in the plane".into()));
        }
        Ok(LoopWalk {
            geometry,
            base,
            dirs,
            turn_sum,
            tag,
        })
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    /// Accumulated phase A^{Σ turns}.
    pub fn phase(&self) -> CycloNum {
        turn_phase(self.turn_sum)
    }

    /// Total tangent rotation in units of 2π, when it is an integer.
    pub fn rotation(&self) -> Option<i32> {
        (self.turn_sum % 6 == 0).then_some(self.turn_sum / 6)
    }

    /// Lattice displacement (3D for SC, plane for the triangular layouts).
    pub fn displacement(&self) -> [i64; 3] {
        let mut d = [0i64; 3];
        for &nu in &self.dirs {
            let s = self.geometry.shift(nu);
            for k in 0..3 {
                d[k] += s[k];
            }
        }
        d
    }

    /// Closed on the underlying lattice, not only in the projection.
    pub fn is_lattice_closed(&self) -> bool {
        self.displacement() == [0, 0, 0]
    }

    /// Vertices in the plane, starting at the base point.
    pub fn plane_vertices(&self) -> Vec<[i64; 2]> {
        let mut out = Vec::with_capacity(self.len());
        let mut p = [0i64; 2];
        for &nu in &self.dirs {
            out.push(p);
            let s = self.geometry.plane_step(nu);
            p = [p[0] + s[0], p[1] + s[1]];
        }
        out
    }

    /// Same loop traversed backwards from the same base point.
    pub fn reversed(&self) -> LoopWalk {
        let dirs: Vec<u8> = self.dirs.iter().rev().map(|&d| reverse(d)).collect();
        LoopWalk::from_dirs(self.geometry, self.base, dirs).expect("reversal of a valid loop is valid")
    }

    /// Lexicographically least rotation over both traversal senses.
    pub fn canonical_cyclic(&self) -> Vec<u8> {
        let rev: Vec<u8> = self.dirs.iter().rev().map(|&d| reverse(d)).collect();
        let mut best = self.dirs.clone();
        for seq in [&self.dirs, &rev] {
            for k in 0..seq.len() {
                let rot: Vec<u8> = seq[k..].iter().chain(seq[..k].iter()).copied().collect();
                if rot < best {
                    best = rot;
                }
            }
        }
        best
    }
}

/// Which rooted walks count as the same loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupPolicy {
    /// Every rooted walk from the base point.
    None,
    /// A walk and its reversal are identified.
    Reversal,
    /// All rotations and reversals are identified (unrooted loops).
    CyclicShift,
}

/// Visit every closed non-backtracking walk of length 1..=max_len from the origin.
///
/// Returns the number of DFS nodes used. `visit` sees the direction sequence.
pub fn for_each_loop<F>(geometry: Geometry, max_len: usize, node_budget: u64, visit: F) -> Result<u64>
where
    F: Fn(&[u8]) + Sync,
{
    let per_start: Vec<Result<u64>> = (1..=6u8)
        .into_par_iter()
        .map(|d0| {
            let mut dirs = vec![d0];
            let mut nodes = 0u64;
            let s = geometry.plane_step(d0);
            dfs(geometry, max_len, node_budget / 6 + 1, &mut dirs, s, &mut nodes, &visit)?;
            Ok(nodes)
        })
        .collect();
    let mut total = 0;
    for r in per_start {
        total += r?;
    }
    Ok(total)
}

fn dfs<F: Fn(&[u8])>(
    g: Geometry,
    max_len: usize,
    budget: u64,
    dirs: &mut Vec<u8>,
    pos: [i64; 2],
    nodes: &mut u64,
    visit: &F,
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::Budget {
            what: format!("loop enumeration exceeded {budget} nodes per start direction"),
            reached: dirs.len().saturating_sub(1),
        });
    }
    let last = *dirs.last().expect("non-empty");
    if pos == [0, 0] && g.turn(last, dirs[0]).is_some() {
        visit(dirs);
    }
    if dirs.len() == max_len {
        return Ok(());
    }
    let remaining = (max_len - dirs.len()) as i64;
    for next in 1..=6u8 {
        if next == reverse(last) {
            continue;
        }
        let s = g.plane_step(next);
        let p = [pos[0] + s[0], pos[1] + s[1]];
        if plane_distance(p) > remaining - 1 {
            continue;
        }
        dirs.push(next);
        dfs(g, max_len, budget, dirs, p, nodes, visit)?;
        dirs.pop();
    }
    Ok(())
}

/// All closed non-backtracking walks up to `max_len` from the origin, deduplicated per `dedup`.
pub fn enumerate_loops(
    geometry: Geometry,
    max_len: usize,
    dedup: DedupPolicy,
    node_budget: u64,
) -> Result<Vec<LoopWalk>> {
    if max_len > DEFAULT_MAX_LEN.max(16) {
        return Err(Error::TooLarge(format!("max_len {max_len} above the enumeration bound")));
    }
    let found = std::sync::Mutex::new(Vec::new());
    for_each_loop(geometry, max_len, node_budget, |d| {
        found.lock().expect("poisoned").push(d.to_vec());
    })?;
    let mut seqs = found.into_inner().expect("poisoned");
    seqs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let walks = seqs
        .into_iter()
        .map(|d| LoopWalk::from_dirs(geometry, [0, 0, 0], d).expect("enumerated walk is valid"));
    let out = match dedup {
        DedupPolicy::None => walks.collect(),
        DedupPolicy::Reversal => walks
            .filter(|w| {
                let r = w.reversed();
                w.dirs <= r.dirs
            })
            .collect(),
        DedupPolicy::CyclicShift => {
            let mut seen = std::collections::BTreeSet::new();
            walks.filter(|w| seen.insert(w.canonical_cyclic())).collect()
        }
    };
    Ok(out)
}
