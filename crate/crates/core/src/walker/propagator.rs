use super::direction::{turn_phase, Geometry};
use crate::ring::{poly_mul, CycloNum, TaggedPoly, XSeries};
use num_bigint::BigInt;
use num_rational::BigRational;

/// 6×6 one-step matrix; entry (row ν, column ν′) weights a step in direction ν after ν′.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagatorMatrix {
    pub geometry: Geometry,
    /// true once the e^{−shift} Fourier factors are attached.
    pub fourier: bool,
    entries: Vec<Vec<TaggedPoly>>,
}

impl PropagatorMatrix {
    /// Entry with 1-based indices as in the usual matrix notation.
    pub fn entry(&self, row: usize, col: usize) -> &TaggedPoly {
        &self.entries[row - 1][col - 1]
    }

    pub fn entries(&self) -> &[Vec<TaggedPoly>] {
        &self.entries
    }

    fn build(geometry: Geometry) -> Self {
        let mut entries = vec![vec![TaggedPoly::zero(); 6]; 6];
        for row in 1..=6u8 {
            for col in 1..=6u8 {
                if let Some(t) = geometry.turn(col, row) {
                    let tag = geometry.step_tag(col) * geometry.step_tag(row);
                    entries[row as usize - 1][col as usize - 1] = TaggedPoly::term(tag, turn_phase(t));
                }
            }
        }
        PropagatorMatrix {
            geometry,
            fourier: false,
            entries,
        }
    }

    pub fn identity_like(&self) -> Vec<Vec<TaggedPoly>> {
        (0..6)
            .map(|i| (0..6).map(|j| if i == j { TaggedPoly::one() } else { TaggedPoly::zero() }).collect())
            .collect()
    }
}

/// Plain triangular-lattice propagator (phases only); position shifts follow `geometry`.
pub fn build_pt_propagator_with(geometry: Geometry) -> PropagatorMatrix {
    assert!(!geometry.is_sc(), "use build_sc_propagator for the cubic lattice");
    PropagatorMatrix::build(geometry)
}

/// The triangular propagator with the printed shift bookkeeping.
pub fn build_pt_propagator() -> PropagatorMatrix {
    build_pt_propagator_with(Geometry::PtPrinted)
}

/// Tagged cubic propagator: entry = (axis·sign tag of ν′)(axis·sign tag of ν)·A^turn.
pub fn build_sc_propagator() -> PropagatorMatrix {
    PropagatorMatrix::build(Geometry::Sc)
}

/// Attach e^{−shift(ν′)} to every entry of column ν′.
pub fn fourier_matrix(prop: &PropagatorMatrix) -> PropagatorMatrix {
    assert!(!prop.fourier, "Fourier factors already attached");
    let mut out = prop.clone();
    for col in 1..=6u8 {
        let f = prop.geometry.fourier_factor(col);
        for row in 0..6 {
            let e = &prop.entries[row][col as usize - 1];
            out.entries[row][col as usize - 1] = e.mul_monomial(f);
        }
    }
    out.fourier = true;
    out
}

fn mat_mul(a: &[Vec<TaggedPoly>], b: &[Vec<TaggedPoly>]) -> Vec<Vec<TaggedPoly>> {
    (0..6)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let mut acc = TaggedPoly::zero();
                    for k in 0..6 {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &poly_mul(&a[i][k], &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// tr Ω^r and f_r = tr Ω^r / (2r).
pub fn trace_power(prop: &PropagatorMatrix, r: usize) -> (TaggedPoly, TaggedPoly) {
    assert!(r >= 1, "trace_power needs r >= 1");
    let mut m = prop.entries.clone();
    for _ in 1..r {
        m = mat_mul(&m, &prop.entries);
    }
    let mut tr = TaggedPoly::zero();
    for (i, row) in m.iter().enumerate() {
        tr = &tr + &row[i];
    }
    let f = tr.scale_rational(&BigRational::new(BigInt::from(1), BigInt::from(2 * r as i64)));
    (tr, f)
}

/// det(I − xΩ) as an x-polynomial: Σ_k (−x)^k Σ_{|S|=k} det Ω_S over principal minors.
pub fn det_one_minus_x(prop: &PropagatorMatrix) -> XSeries {
    let mut coeffs = vec![TaggedPoly::zero(); 7];
    coeffs[0] = TaggedPoly::one();
    for mask in 1u32..64 {
        let rows: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
        let k = rows.len();
        let minor = principal_minor(&prop.entries, &rows);
        let signed = if k % 2 == 1 { -&minor } else { minor };
        coeffs[k] = &coeffs[k] + &signed;
    }
    XSeries::from_coeffs(6, coeffs)
}

/// Determinant of the principal submatrix on `rows` by permutation expansion.
fn principal_minor(m: &[Vec<TaggedPoly>], rows: &[usize]) -> TaggedPoly {
    let k = rows.len();
    let mut total = TaggedPoly::zero();
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let mut prod = TaggedPoly::constant(CycloNum::from_int(perm_sign(p)));
        for (i, &pi) in p.iter().enumerate() {
            let e = &m[rows[i]][rows[pi]];
            if e.is_zero() {
                return;
            }
            prod = poly_mul(&prod, e);
        }
        total = &total + &prod;
    });
    total
}

fn permute(p: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if start == p.len() {
        f(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permute(p, start + 1, f);
        p.swap(start, i);
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{cyclo_pow, project_mode_sum, ModeSide, Tag, TagMonomial};

    fn m(e: [i32; 9]) -> TagMonomial {
        TagMonomial::from_exps(e)
    }

    #[test]
    fn printed_triangular_entries() {
        let p = build_pt_propagator();
        assert!(p.entry(1, 1).constant_term().is_one());
        assert!(p.entry(1, 4).is_zero());
        assert_eq!(p.entry(2, 1).constant_term(), cyclo_pow(1));
        // rows of the printed recurrence: 1 A⁻¹ A⁻² 0 A² A
        let row1 = [0, -1, -2, 99, 2, 1];
        for (j, k) in row1.iter().enumerate() {
            let e = p.entry(1, j + 1);
            if *k == 99 {
                assert!(e.is_zero());
            } else {
                assert_eq!(e.constant_term(), cyclo_pow(*k));
            }
        }
    }

    #[test]
    fn zero_pattern_and_phase_set() {
        for prop in [build_pt_propagator(), build_sc_propagator()] {
            for nu in 1..=6u8 {
                assert!(prop.entry(nu as usize, super::super::direction::reverse(nu) as usize).is_zero());
            }
            let allowed: Vec<CycloNum> = [-2, -1, 0, 1, 2].iter().map(|&k| cyclo_pow(k)).collect();
            for row in prop.entries() {
                for e in row {
                    for (_, c) in e.terms() {
                        assert!(allowed.contains(c));
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_entries() {
        let p = build_sc_propagator();
        assert_eq!(p.entry(1, 1), &TaggedPoly::term(m([2, 0, 0, 2, 0, 0, 0, 0, 0]), CycloNum::one()));
        assert_eq!(p.entry(1, 2), &TaggedPoly::term(m([1, 1, 0, 1, 1, 0, 0, 0, 0]), cyclo_pow(-2)));
        assert_eq!(p.entry(4, 4), &TaggedPoly::term(m([2, 0, 0, -2, 0, 0, 0, 0, 0]), CycloNum::one()));
        // (2,4): (uv)(m l⁻¹) A⁻¹
        assert_eq!(p.entry(2, 4), &TaggedPoly::term(m([1, 1, 0, -1, 1, 0, 0, 0, 0]), cyclo_pow(-1)));
    }

    #[test]
    fn fourier_entries() {
        let pt = fourier_matrix(&build_pt_propagator());
        assert_eq!(pt.entry(1, 1), &TaggedPoly::term(TagMonomial::fourier(-1, 0, 0), CycloNum::one()));
        assert_eq!(pt.entry(1, 3), &TaggedPoly::term(TagMonomial::fourier(-1, 1, 0), cyclo_pow(-2)));
        let sc = fourier_matrix(&build_sc_propagator());
        assert_eq!(sc.entry(1, 1), &TaggedPoly::term(m([2, 0, 0, 2, 0, 0, -1, 0, 0]), CycloNum::one()));
        assert!(sc.entry(1, 4).is_zero());
    }

    #[test]
    fn trace_small_powers() {
        let p = build_pt_propagator();
        let (t1, _) = trace_power(&p, 1);
        assert_eq!(t1.constant_term(), CycloNum::from_int(6));
        // two-step returns are impossible without backtracking
        let f = fourier_matrix(&p);
        let (t2, _) = trace_power(&f, 2);
        let mut s = XSeries::zero(0);
        s.set_coeff(0, t2);
        assert!(project_mode_sum(&s, ModeSide::Symbolic).coeff(0).is_zero());
    }

    #[test]
    fn determinant_constant_and_top_terms() {
        let d = det_one_minus_x(&fourier_matrix(&build_pt_propagator()));
        assert!(d.coeff(0).constant_term().is_one());
        assert_eq!(d.coeff(6), &TaggedPoly::one());
        let sc = det_one_minus_x(&fourier_matrix(&build_sc_propagator()));
        let top = m([4, 4, 4, 0, 0, 0, 0, 0, 0]);
        assert_eq!(sc.coeff(6), &TaggedPoly::term(top, CycloNum::one()));
        assert!(sc.coeff(1).terms().all(|(mo, _)| mo.get(Tag::P) != 0 || mo.get(Tag::Q) != 0 || mo.get(Tag::R) != 0));
    }

    fn projected_trace(prop: &PropagatorMatrix, r: usize) -> TaggedPoly {
        let (t, _) = trace_power(&fourier_matrix(prop), r);
        t.filter(|mo| mo.pqr() == (0, 0, 0))
    }

    fn walk_sum(g: Geometry, r: usize) -> TaggedPoly {
        use crate::walker::{enumerate_loops, DedupPolicy};
        let mut acc = TaggedPoly::zero();
        for w in enumerate_loops(g, r, DedupPolicy::None, 1 << 40).unwrap() {
            if w.len() == r && w.is_lattice_closed() {
                acc.add_term(w.tag, &w.phase());
            }
        }
        acc
    }

    #[test]
    fn trace_matches_walk_enumeration() {
        for g in [Geometry::PtPrinted, Geometry::PtPlanar] {
            for r in 1..=8 {
                assert_eq!(projected_trace(&build_pt_propagator_with(g), r), walk_sum(g, r), "{g:?} r={r}");
            }
        }
        for r in 1..=8 {
            assert_eq!(projected_trace(&build_sc_propagator(), r), walk_sum(Geometry::Sc, r), "sc r={r}");
        }
    }
}
