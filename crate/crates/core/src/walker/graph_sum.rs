use super::direction::{project_sc, reverse, Geometry};
use super::loops::LoopWalk;
use crate::error::{Error, Result};
use crate::ring::{cyclo_pow, CycloNum, TagMonomial, TaggedPoly};
use std::collections::{BTreeMap, BTreeSet};

/// Largest graph accepted by [`graph_loop_sum`].
pub const MAX_GRAPH_EDGES: usize = 14;

/// Reference graphs as cubic direction sequences from the origin, with their expected
/// value after the counting actions.
pub const REFERENCE_WALKS: [(&str, &[u8], i64); 3] = [
    ("example1_hexagon", &[1, 2, 3, 4, 5, 6], 1),
    ("example2_doubled_edge", &[1, 2, 6, 5, 3, 2, 4, 5], 0),
    ("example3_open_walk", &[1, 6, 2, 4, 3, 4, 4, 5, 5, 1, 6], 0),
];

/// Edge with a reference orientation: from `tail` one step in direction `dir`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GraphEdge {
    pub tail: [i64; 3],
    pub dir: u8,
}

/// Edge multiset on the triangular lattice or on the cubic lattice seen through its projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopGraph {
    pub geometry: Geometry,
    pub edges: Vec<GraphEdge>,
}

fn add3(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

impl LoopGraph {
    /// Edges of a closed walk, oriented along the walk.
    pub fn from_walk(geometry: Geometry, base: [i64; 3], dirs: &[u8]) -> Self {
        let mut p = base;
        let mut edges = Vec::with_capacity(dirs.len());
        for &d in dirs {
            edges.push(GraphEdge { tail: p, dir: d });
            p = add3(p, geometry.shift(d));
        }
        LoopGraph { geometry, edges }
    }

    /// Orient an undirected edge list along Euler circuits of each component.
    ///
    /// Circuits are taken on the lattice graph when every lattice degree is even,
    /// otherwise on the projected graph.
    pub fn from_undirected(geometry: Geometry, pairs: &[([i64; 3], [i64; 3])]) -> Result<Self> {
        let dir_of = |a: [i64; 3], b: [i64; 3]| -> Result<u8> {
            let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            (1..=6u8)
                .find(|&nu| geometry.shift(nu) == d)
                .ok_or_else(|| Error::Invalid(format!("{a:?} and {b:?} are not lattice neighbours")))
        };
        let lattice_key = |p: [i64; 3]| p;
        let plane_key = |p: [i64; 3]| match geometry {
            Geometry::Sc => {
                let q = project_sc(p);
                [q[0], q[1], 0]
            }
            _ => p,
        };
        let lattice_even = degrees_even(pairs, lattice_key);
        let key: &dyn Fn([i64; 3]) -> [i64; 3] = if lattice_even { &lattice_key } else { &plane_key };
        let order = euler_orientation(pairs, key)?;
        let edges = order
            .into_iter()
            .map(|(i, forward)| {
                let (a, b) = pairs[i];
                let (t, h) = if forward { (a, b) } else { (b, a) };
                Ok(GraphEdge {
                    tail: t,
                    dir: dir_of(t, h)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sorted: Vec<(usize, GraphEdge)> = Vec::new();
        // keep the caller's edge order for the lowest-index convention
        for (i, _) in pairs.iter().enumerate() {
            let e = edges
                .iter()
                .find(|e| {
                    let h = add3(e.tail, geometry.shift(e.dir));
                    (e.tail, h) == pairs[i] || (h, e.tail) == pairs[i]
                })
                .copied()
                .expect("every edge oriented");
            sorted.push((i, e));
        }
        Ok(LoopGraph {
            geometry,
            edges: sorted.into_iter().map(|(_, e)| e).collect(),
        })
    }

    fn head(&self, e: &GraphEdge) -> [i64; 3] {
        add3(e.tail, self.geometry.shift(e.dir))
    }

    fn vertex_key(&self, p: [i64; 3]) -> [i64; 2] {
        match self.geometry {
            Geometry::Sc => project_sc(p),
            _ => [p[0], p[1]],
        }
    }
}

fn degrees_even<K: Fn([i64; 3]) -> [i64; 3]>(pairs: &[([i64; 3], [i64; 3])], key: K) -> bool {
    let mut deg: BTreeMap<[i64; 3], usize> = BTreeMap::new();
    for &(a, b) in pairs {
        *deg.entry(key(a)).or_default() += 1;
        *deg.entry(key(b)).or_default() += 1;
    }
    deg.values().all(|d| d % 2 == 0)
}

/// Hierholzer: returns (edge index, traversed a→b) for every edge.
fn euler_orientation(pairs: &[([i64; 3], [i64; 3])], key: &dyn Fn([i64; 3]) -> [i64; 3]) -> Result<Vec<(usize, bool)>> {
    if !degrees_even(pairs, key) {
        return Err(Error::OddVertex("graph has no Eulerian orientation".into()));
    }
    let mut adj: BTreeMap<[i64; 3], Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        adj.entry(key(a)).or_default().push(i);
        adj.entry(key(b)).or_default().push(i);
    }
    let mut used = vec![false; pairs.len()];
    let mut out = Vec::with_capacity(pairs.len());
    for start in 0..pairs.len() {
        if used[start] {
            continue;
        }
        let mut v = key(pairs[start].0);
        loop {
            let next = adj[&v].iter().copied().find(|&i| !used[i]);
            let Some(i) = next else { break };
            used[i] = true;
            let (a, b) = pairs[i];
            if key(a) == v {
                out.push((i, true));
                v = key(b);
            } else {
                out.push((i, false));
                v = key(a);
            }
        }
    }
    // Greedy walks from each start close up because all degrees are even, but they can
    // split one component into several circuits; any such split is still a valid orientation.
    Ok(out)
}

/// One loop of a decomposition, oriented by the lowest-index rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopFactor {
    pub dirs: Vec<u8>,
    pub turn_sum: i32,
    pub tag: TagMonomial,
}

impl LoopFactor {
    pub fn phase(&self) -> CycloNum {
        cyclo_pow(self.turn_sum as i64)
    }
}

/// One class of topologically equivalent loop decompositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub loops: Vec<LoopFactor>,
    /// (−1)^{number of loops}
    pub sign: i32,
    /// Product of loop tags.
    pub tag: TagMonomial,
    /// Product of loop phases, A^{Σ turns}.
    pub phase: CycloNum,
}

impl Decomposition {
    /// Total factor: sign × phase.
    pub fn coefficient(&self) -> CycloNum {
        &CycloNum::from_int(self.sign as i64) * &self.phase
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphLoopSum {
    /// u, v, w exponents shared by every decomposition.
    pub generic: (i32, i32, i32),
    pub decompositions: Vec<Decomposition>,
    /// Σ sign · phase · tag over decompositions.
    pub total: TaggedPoly,
}

impl GraphLoopSum {
    /// Some decomposition carries l⁰m⁰n⁰.
    pub fn has_neutral_term(&self) -> bool {
        self.decompositions.iter().any(|d| d.tag.lmn() == (0, 0, 0))
    }
}

/// Counting actions on a single graph: sum everything with tags set to 1 when some
/// decomposition is l,m,n-neutral; otherwise the graph counts 0.
pub fn apply_graph_actions(sum: &GraphLoopSum) -> CycloNum {
    if sum.has_neutral_term() {
        sum.total.coefficient_sum()
    } else {
        CycloNum::zero()
    }
}

type End = (usize, usize); // (edge, side 0 = tail, 1 = head)

/// Sum over all inequivalent decompositions of the edge multiset into closed
/// non-backtracking loops, in the triangular projection.
pub fn graph_loop_sum(graph: &LoopGraph) -> Result<GraphLoopSum> {
    let n = graph.edges.len();
    if n == 0 {
        return Ok(GraphLoopSum {
            generic: (0, 0, 0),
            decompositions: vec![Decomposition {
                loops: vec![],
                sign: 1,
                tag: TagMonomial::ONE,
                phase: CycloNum::one(),
            }],
            total: TaggedPoly::one(),
        });
    }
    if n > MAX_GRAPH_EDGES {
        return Err(Error::TooLarge(format!("{n} edges; at most {MAX_GRAPH_EDGES} supported")));
    }
    let g = graph.geometry;
    let out_dir = |(e, side): End| -> u8 {
        let d = graph.edges[e].dir;
        if side == 0 {
            d
        } else {
            reverse(d)
        }
    };
    let mut at: BTreeMap<[i64; 2], Vec<End>> = BTreeMap::new();
    for (i, e) in graph.edges.iter().enumerate() {
        at.entry(graph.vertex_key(e.tail)).or_default().push((i, 0));
        at.entry(graph.vertex_key(graph.head(e))).or_default().push((i, 1));
    }
    for (v, ends) in &at {
        if ends.len() % 2 == 1 {
            return Err(Error::OddVertex(format!("{v:?}")));
        }
    }
    let per_vertex: Vec<Vec<Vec<(End, End)>>> = at
        .values()
        .map(|ends| {
            let mut out = Vec::new();
            matchings(ends, &mut Vec::new(), &mut out, &|a, b| out_dir(a) != out_dir(b));
            out
        })
        .collect();
    if per_vertex.iter().any(Vec::is_empty) {
        return Ok(GraphLoopSum {
            generic: generic_of(graph),
            decompositions: vec![],
            total: TaggedPoly::zero(),
        });
    }

    // edges that coincide in the projection are indistinguishable
    let geo_key = |e: usize, forward: bool| -> ([i64; 2], [i64; 2], bool) {
        let ed = &graph.edges[e];
        let (a, b) = (graph.vertex_key(ed.tail), graph.vertex_key(graph.head(ed)));
        if a <= b {
            (a, b, forward)
        } else {
            (b, a, !forward)
        }
    };

    let mut seen: BTreeSet<Vec<Vec<([i64; 2], [i64; 2], bool)>>> = BTreeSet::new();
    let mut decomps = Vec::new();
    let mut idx = vec![0usize; per_vertex.len()];
    loop {
        let mut partner: BTreeMap<End, End> = BTreeMap::new();
        for (k, &i) in idx.iter().enumerate() {
            for &(a, b) in &per_vertex[k][i] {
                partner.insert(a, b);
                partner.insert(b, a);
            }
        }
        let mut visited = vec![false; n];
        let mut loops = Vec::new();
        let mut keys = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut dirs = Vec::new();
            let mut key = Vec::new();
            let mut cur: End = (start, 0);
            loop {
                let (e, side) = cur;
                visited[e] = true;
                dirs.push(out_dir(cur));
                key.push(geo_key(e, side == 0));
                let arrive = (e, 1 - side);
                let next = partner[&arrive];
                if next == (start, 0) {
                    break;
                }
                cur = next;
            }
            let walk = LoopWalk::from_dirs(g, graph.edges[start].tail, dirs)?;
            loops.push(LoopFactor {
                dirs: walk.dirs.clone(),
                turn_sum: walk.turn_sum,
                tag: walk.tag,
            });
            keys.push(canonical_cycle(&key));
        }
        keys.sort();
        if seen.insert(keys) {
            let tag = loops.iter().fold(TagMonomial::ONE, |acc, l| acc * l.tag);
            let turns: i32 = loops.iter().map(|l| l.turn_sum).sum();
            decomps.push(Decomposition {
                sign: if loops.len() % 2 == 0 { 1 } else { -1 },
                tag,
                phase: cyclo_pow(turns as i64),
                loops,
            });
        }
        // odometer over per-vertex matchings
        let mut k = 0;
        loop {
            if k == idx.len() {
                let total = TaggedPoly::from_terms(decomps.iter().map(|d| (d.tag, d.coefficient())));
                return Ok(GraphLoopSum {
                    generic: generic_of(graph),
                    decompositions: decomps,
                    total,
                });
            }
            idx[k] += 1;
            if idx[k] < per_vertex[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn generic_of(graph: &LoopGraph) -> (i32, i32, i32) {
    let t = graph
        .edges
        .iter()
        .fold(TagMonomial::ONE, |acc, e| {
            let s = graph.geometry.step_tag(e.dir);
            acc * s * s
        });
    t.uvw()
}

/// Least rotation of a cyclic sequence of oriented edges over both senses.
fn canonical_cycle<T: Ord + Clone>(seq: &[([i64; 2], [i64; 2], T)]) -> Vec<([i64; 2], [i64; 2], T)>
where
    T: std::ops::Not<Output = T>,
{
    let rev: Vec<_> = seq.iter().rev().map(|(a, b, f)| (*a, *b, !f.clone())).collect();
    let mut best = seq.to_vec();
    for s in [seq.to_vec(), rev] {
        for k in 0..s.len() {
            let rot: Vec<_> = s[k..].iter().chain(s[..k].iter()).cloned().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

/// All perfect matchings of `ends` whose pairs satisfy `ok`.
fn matchings(ends: &[End], cur: &mut Vec<(End, End)>, out: &mut Vec<Vec<(End, End)>>, ok: &dyn Fn(End, End) -> bool) {
    if ends.is_empty() {
        out.push(cur.clone());
        return;
    }
    let a = ends[0];
    for j in 1..ends.len() {
        let b = ends[j];
        if !ok(a, b) {
            continue;
        }
        let rest: Vec<End> = ends[1..].iter().enumerate().filter(|&(i, _)| i + 1 != j).map(|(_, &e)| e).collect();
        cur.push((a, b));
        matchings(&rest, cur, out, ok);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_planar_triangle_counts_one() {
        let g = LoopGraph::from_walk(Geometry::PtPlanar, [0; 3], &[1, 3, 5]);
        let s = graph_loop_sum(&g).unwrap();
        assert_eq!(s.decompositions.len(), 1);
        assert!(s.total.constant_term().is_one());
    }

    #[test]
    fn bowtie_has_three_decompositions_summing_to_one() {
        let g = LoopGraph::from_walk(Geometry::PtPlanar, [0; 3], &[1, 3, 5, 4, 6, 2]);
        let s = graph_loop_sum(&g).unwrap();
        assert_eq!(s.decompositions.len(), 3);
        assert!(s.total.constant_term().is_one());
    }

    #[test]
    fn odd_vertex_is_rejected() {
        let g = LoopGraph {
            geometry: Geometry::PtPlanar,
            edges: vec![GraphEdge { tail: [0; 3], dir: 1 }],
        };
        assert!(matches!(graph_loop_sum(&g), Err(Error::OddVertex(_))));
    }

    #[test]
    fn projected_triangle_is_not_neutral() {
        // x, y, z on the cubic lattice: open there, closed after projection
        let g = LoopGraph::from_walk(Geometry::Sc, [0; 3], &[1, 2, 3]);
        let s = graph_loop_sum(&g).unwrap();
        assert!(!s.has_neutral_term());
        assert!(apply_graph_actions(&s).is_zero());
    }

    #[test]
    fn undirected_input_gets_an_euler_orientation() {
        let sq = [
            ([0, 0, 0], [1, 0, 0]),
            ([1, 0, 0], [1, 1, 0]),
            ([0, 1, 0], [1, 1, 0]),
            ([0, 0, 0], [0, 1, 0]),
        ];
        let g = LoopGraph::from_undirected(Geometry::Sc, &sq).unwrap();
        let s = graph_loop_sum(&g).unwrap();
        assert_eq!(s.generic, (4, 4, 0));
        assert!(s.has_neutral_term());
        assert!(apply_graph_actions(&s).is_one());
    }

    #[test]
    fn hexagon_through_the_projected_origin() {
        let g = LoopGraph::from_walk(Geometry::Sc, [0; 3], &[1, 2, 3, 4, 5, 6]);
        let s = graph_loop_sum(&g).unwrap();
        assert_eq!(s.generic, (4, 4, 4));
        assert_eq!(s.decompositions.len(), 3);
        let mut coeffs: Vec<(i32, (i32, i32, i32), CycloNum)> = s
            .decompositions
            .iter()
            .map(|d| (d.loops.len() as i32, d.tag.lmn(), d.coefficient()))
            .collect();
        coeffs.sort_by_key(|c| (c.0, c.1));
        assert_eq!(coeffs[0].1, (0, 0, 0));
        assert_eq!(coeffs[1].1, (4, 4, 4));
        assert_eq!(coeffs[2], (2, (0, 0, 0), CycloNum::one()));
        assert!(apply_graph_actions(&s).is_one());
    }

    #[test]
    fn doubled_edge_cancels() {
        let g = LoopGraph::from_walk(Geometry::Sc, [0; 3], &[1, 2, 6, 5, 3, 2, 4, 5]);
        let s = graph_loop_sum(&g).unwrap();
        assert_eq!(s.decompositions.len(), 2);
        let one = s.decompositions.iter().find(|d| d.loops.len() == 1).unwrap();
        assert_eq!(one.coefficient(), CycloNum::from_int(-1));
        assert_eq!(one.tag.lmn(), (0, 0, 0));
        let two = s.decompositions.iter().find(|d| d.loops.len() == 2).unwrap();
        assert!(two.coefficient().is_one());
        assert!(apply_graph_actions(&s).is_zero());
    }

    #[test]
    fn open_walk_has_single_decomposition_and_counts_zero() {
        let g = LoopGraph::from_walk(Geometry::Sc, [0; 3], &[1, 6, 2, 4, 3, 4, 4, 5, 5, 1, 6]);
        let s = graph_loop_sum(&g).unwrap();
        assert_eq!(s.decompositions.len(), 1);
        let d = &s.decompositions[0];
        assert_eq!(d.tag, TagMonomial::from_exps([10, 6, 6, -2, -2, -2, 0, 0, 0]));
        assert_eq!(d.phase, CycloNum::from_int(-1));
        assert!(apply_graph_actions(&s).is_zero());
    }

    type Pair = ([i64; 3], [i64; 3]);

    fn subsets(edges: &[Pair], mut f: impl FnMut(&[Pair])) {
        for mask in 1u32..(1 << edges.len()) {
            let sub: Vec<Pair> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            f(&sub);
        }
    }

    fn even_under<K: Ord>(sub: &[Pair], key: impl Fn([i64; 3]) -> K) -> bool {
        let mut deg = BTreeMap::new();
        for &(a, b) in sub {
            *deg.entry(key(a)).or_insert(0) += 1;
            *deg.entry(key(b)).or_insert(0) += 1;
        }
        deg.values().all(|d: &i32| d % 2 == 0)
    }

    #[test]
    fn cube_cell_proper_graphs_count_one_and_improper_zero() {
        let mut edges = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let p = [x, y, z];
                    for a in 0..3 {
                        if p[a] == 0 {
                            let mut q = p;
                            q[a] = 1;
                            edges.push((p, q));
                        }
                    }
                }
            }
        }
        let (mut proper, mut improper) = (0, 0);
        subsets(&edges, |sub| {
            if !even_under(sub, project_sc) {
                return;
            }
            let s = graph_loop_sum(&LoopGraph::from_undirected(Geometry::Sc, sub).unwrap()).unwrap();
            let v = apply_graph_actions(&s);
            if even_under(sub, |p| p) {
                proper += 1;
                assert!(v.is_one(), "{sub:?}");
            } else {
                improper += 1;
                assert!(v.is_zero(), "{sub:?}");
            }
        });
        assert_eq!((proper, improper), (31, 32));
    }

    #[test]
    fn planar_even_subgraphs_of_a_hexagon_sum_to_one() {
        let g = Geometry::PtPlanar;
        let mut edges = Vec::new();
        let cells: Vec<[i64; 3]> = (1..=6u8).map(|nu| g.shift(nu)).chain([[0; 3]]).collect();
        for &a in &cells {
            for nu in 1..=3u8 {
                let b = add3(a, g.shift(nu));
                if cells.contains(&b) {
                    edges.push((a, b));
                }
            }
        }
        assert_eq!(edges.len(), 12);
        let mut n = 0;
        subsets(&edges, |sub| {
            if !even_under(sub, |p| p) {
                return;
            }
            n += 1;
            let s = graph_loop_sum(&LoopGraph::from_undirected(g, sub).unwrap()).unwrap();
            assert!(s.total.constant_term().is_one(), "{sub:?}");
        });
        assert!(n > 20);
    }
}
