use super::direction::Geometry;
use super::loops::{for_each_loop, LoopWalk};
use crate::error::Result;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Lattice units per edge when perturbing vertices.
const SCALE: i128 = 1_000_000;
/// Maximum per-coordinate vertex displacement, in the same units.
const JITTER: i64 = 2_000;
const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WhitneyOutcome {
    /// Tangent rotation in units of 2π, if the turn sum is a multiple of 6.
    pub rotation: Option<i32>,
    /// Transversal self-crossings of a generic perturbation of the loop.
    pub crossings: u32,
    /// Phase equals (−1)^(crossings + 1).
    pub passes: bool,
}

/// Compare the accumulated phase with the parity of geometric self-crossings.
pub fn whitney_check(walk: &LoopWalk) -> WhitneyOutcome {
    let crossings = count_crossings(&walk.plane_vertices(), seed_of(&walk.dirs));
    let rotation = walk.rotation();
    let passes = match rotation {
        Some(k) => (k as i64 + crossings as i64 + 1).rem_euclid(2) == 0,
        None => false,
    };
    WhitneyOutcome {
        rotation,
        crossings,
        passes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhitneySurvey {
    pub geometry: Geometry,
    pub max_len: usize,
    /// Rooted closed walks checked, by length.
    pub by_len: Vec<(usize, u64, u64)>,
    pub checked: u64,
    pub failed: u64,
    /// Up to ten failing direction sequences, shortest first.
    pub failures: Vec<Vec<u8>>,
}

/// Run `whitney_check` on every rooted closed non-backtracking walk up to `max_len`.
pub fn whitney_survey(geometry: Geometry, max_len: usize, node_budget: u64) -> Result<WhitneySurvey> {
    let total: Vec<AtomicU64> = (0..=max_len).map(|_| AtomicU64::new(0)).collect();
    let bad: Vec<AtomicU64> = (0..=max_len).map(|_| AtomicU64::new(0)).collect();
    let failures = Mutex::new(Vec::new());
    for_each_loop(geometry, max_len, node_budget, |d| {
        let w = LoopWalk::from_dirs(geometry, [0; 3], d.to_vec()).expect("enumerated walk is valid");
        total[d.len()].fetch_add(1, Ordering::Relaxed);
        if !whitney_check(&w).passes {
            bad[d.len()].fetch_add(1, Ordering::Relaxed);
            failures.lock().expect("poisoned").push(d.to_vec());
        }
    })?;
    let mut failures = failures.into_inner().expect("poisoned");
    failures.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    failures.truncate(10);
    let by_len: Vec<(usize, u64, u64)> = (1..=max_len)
        .map(|k| (k, total[k].load(Ordering::Relaxed), bad[k].load(Ordering::Relaxed)))
        .filter(|t| t.1 > 0)
        .collect();
    Ok(WhitneySurvey {
        geometry,
        max_len,
        checked: by_len.iter().map(|t| t.1).sum(),
        failed: by_len.iter().map(|t| t.2).sum(),
        by_len,
        failures,
    })
}

fn seed_of(dirs: &[u8]) -> u64 {
    dirs.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &d| (h ^ d as u64).wrapping_mul(0x0100_0000_01b3))
}

fn orient(a: [i128; 2], b: [i128; 2], c: [i128; 2]) -> i128 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Proper crossings between non-adjacent edges of the closed polygon, after a small
/// seeded perturbation of every vertex occurrence. Degenerate draws are retried.
pub fn count_crossings(vertices: &[[i64; 2]], seed: u64) -> u32 {
    let n = vertices.len();
    'attempt: for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        let pts: Vec<[i128; 2]> = vertices
            .iter()
            .map(|v| {
                [
                    v[0] as i128 * SCALE + rng.gen_range(-JITTER..=JITTER) as i128,
                    v[1] as i128 * SCALE + rng.gen_range(-JITTER..=JITTER) as i128,
                ]
            })
            .collect();
        let mut count = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                let o = [orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)];
                if o.contains(&0) {
                    continue 'attempt;
                }
                if (o[0] > 0) != (o[1] > 0) && (o[2] > 0) != (o[3] > 0) {
                    count += 1;
                }
            }
        }
        return count;
    }
    panic!("no generic perturbation found after {MAX_ATTEMPTS} attempts");
}
