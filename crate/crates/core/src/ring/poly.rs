use super::{CycloNum, Tag, TagMonomial};
use num_complex::Complex64;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse polynomial: TagMonomial → CycloNum, zero coefficients never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct TaggedPoly {
    terms: BTreeMap<TagMonomial, CycloNum>,
}

impl TaggedPoly {
    pub fn zero() -> Self {
        TaggedPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(CycloNum::one())
    }

    pub fn constant(c: CycloNum) -> Self {
        Self::term(TagMonomial::ONE, c)
    }

    pub fn term(m: TagMonomial, c: CycloNum) -> Self {
        let mut p = TaggedPoly::zero();
        p.add_term(m, &c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (TagMonomial, CycloNum)>>(it: I) -> Self {
        let mut p = TaggedPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: TagMonomial, c: &CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TagMonomial, &CycloNum)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<TagMonomial, CycloNum> {
        self.terms
    }

    pub fn coeff(&self, m: &TagMonomial) -> CycloNum {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant coefficient (monomial 1).
    pub fn constant_term(&self) -> CycloNum {
        self.coeff(&TagMonomial::ONE)
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        if c.is_zero() {
            return TaggedPoly::zero();
        }
        TaggedPoly::from_terms(self.terms.iter().map(|(m, v)| (*m, v * c)))
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        TaggedPoly::from_terms(self.terms.iter().map(|(m, v)| (*m, v.scale(r))))
    }

    pub fn mul_monomial(&self, mono: TagMonomial) -> Self {
        TaggedPoly {
            terms: self.terms.iter().map(|(m, v)| (*m * mono, v.clone())).collect(),
        }
    }

    /// Apply a monomial map, merging collisions.
    pub fn map_monomials<F: Fn(&TagMonomial) -> TagMonomial>(&self, f: F) -> Self {
        let mut out = TaggedPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(f(m), c);
        }
        out
    }

    /// Set the listed symbols to 1.
    pub fn substitute_one(&self, tags: &[Tag]) -> Self {
        self.map_monomials(|m| m.without(tags))
    }

    pub fn filter<F: Fn(&TagMonomial) -> bool>(&self, keep: F) -> Self {
        TaggedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Sum of all coefficients (every symbol set to 1).
    pub fn coefficient_sum(&self) -> CycloNum {
        let mut s = CycloNum::zero();
        for c in self.terms.values() {
            s += c;
        }
        s
    }

    /// Numeric value with u,v,w,l,m,n set to `tags` and e_p,e_q,e_r = exp(i·angles).
    pub fn eval(&self, tags: [f64; 6], angles: [f64; 3]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let e = m.exps();
            let mut mag = 1.0;
            for k in 0..6 {
                if e[k] != 0 {
                    mag *= tags[k].powi(e[k]);
                }
            }
            let phase = e[6] as f64 * angles[0] + e[7] as f64 * angles[1] + e[8] as f64 * angles[2];
            acc += c.to_complex() * Complex64::from_polar(mag, phase);
        }
        acc
    }
}

/// Distributive product; exponent tuples add, coefficients multiply in the cyclotomic ring.
pub fn poly_mul(a: &TaggedPoly, b: &TaggedPoly) -> TaggedPoly {
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out = TaggedPoly::zero();
    for (ma, ca) in &small.terms {
        for (mb, cb) in &big.terms {
            out.add_term(*ma * *mb, &(ca * cb));
        }
    }
    out
}

impl Add for &TaggedPoly {
    type Output = TaggedPoly;
    fn add(self, rhs: &TaggedPoly) -> TaggedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl Sub for &TaggedPoly {
    type Output = TaggedPoly;
    fn sub(self, rhs: &TaggedPoly) -> TaggedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &(-c.clone()));
        }
        out
    }
}

impl Neg for &TaggedPoly {
    type Output = TaggedPoly;
    fn neg(self) -> TaggedPoly {
        TaggedPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Mul for &TaggedPoly {
    type Output = TaggedPoly;
    fn mul(self, rhs: &TaggedPoly) -> TaggedPoly {
        poly_mul(self, rhs)
    }
}

impl fmt::Debug for TaggedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TaggedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == TagMonomial::ONE {
                    format!("{}", c)
                } else if c.is_one() {
                    format!("{}", m)
                } else {
                    format!("{}*{}", c, m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::cyclo_pow;
    use proptest::prelude::*;

    fn mono(e: [i32; 9]) -> TagMonomial {
        TagMonomial::from_exps(e)
    }

    fn l(e: i32) -> TagMonomial {
        TagMonomial::single(Tag::L, e)
    }

    #[test]
    fn single_term_product() {
        let a = TaggedPoly::term(mono([2, 0, 0, 2, 0, 0, 0, 0, 0]), CycloNum::one());
        let b = TaggedPoly::term(mono([0, 2, 0, 0, 2, 0, 0, 0, 0]), CycloNum::one());
        let p = poly_mul(&a, &b);
        assert_eq!(p.len(), 1);
        assert!(p.coeff(&mono([2, 2, 0, 2, 2, 0, 0, 0, 0])).is_one());
    }

    #[test]
    fn difference_of_squares() {
        let a = TaggedPoly::from_terms([(l(1), CycloNum::one()), (l(-1), CycloNum::one())]);
        let b = TaggedPoly::from_terms([(l(1), CycloNum::one()), (l(-1), CycloNum::from_int(-1))]);
        let expect = TaggedPoly::from_terms([(l(2), CycloNum::one()), (l(-2), CycloNum::from_int(-1))]);
        assert_eq!(poly_mul(&a, &b), expect);
    }

    #[test]
    fn phase_product_reduces_to_minus_one() {
        let u = TagMonomial::single(Tag::U, 1);
        let a = TaggedPoly::term(u, cyclo_pow(1));
        let b = TaggedPoly::term(u, cyclo_pow(5));
        let p = poly_mul(&a, &b);
        // independent: A·A⁵ via the complex embedding is e^{iπ} = −1
        let c = p.coeff(&TagMonomial::single(Tag::U, 2));
        assert!((c.to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert_eq!(c, CycloNum::from_int(-1));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = TaggedPoly::term(l(1), CycloNum::one());
        p.add_term(l(1), &CycloNum::from_int(-1));
        assert!(p.is_zero());
    }

    fn arb_poly() -> impl Strategy<Value = TaggedPoly> {
        let term = (
            prop::array::uniform3(0i32..3),
            prop::array::uniform6(-2i32..3),
            prop::array::uniform4(-3i64..4),
        );
        prop::collection::vec(term, 0..5).prop_map(|ts| {
            TaggedPoly::from_terms(ts.into_iter().map(|(a, b, c)| {
                let e = [a[0], a[1], a[2], b[0], b[1], b[2], b[3], b[4], b[5]];
                (TagMonomial::from_exps(e), CycloNum::from_ints(c))
            }))
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(poly_mul(&a, &b), poly_mul(&b, &a));
            prop_assert_eq!(poly_mul(&poly_mul(&a, &b), &c), poly_mul(&a, &poly_mul(&b, &c)));
        }

        #[test]
        fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(poly_mul(&a, &(&b + &c)), &poly_mul(&a, &b) + &poly_mul(&a, &c));
        }

        #[test]
        fn no_stored_zero(a in arb_poly(), b in arb_poly()) {
            let p = &poly_mul(&a, &b) - &poly_mul(&b, &a);
            prop_assert!(p.is_zero());
            prop_assert!(poly_mul(&a, &b).terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn numeric_evaluation_is_multiplicative(a in arb_poly(), b in arb_poly(), w in prop::array::uniform3(-3.0f64..3.0)) {
            let t = [1.1, 0.9, 1.3, 0.8, 1.2, 0.7];
            let lhs = poly_mul(&a, &b).eval(t, w);
            let rhs = a.eval(t, w) * b.eval(t, w);
            prop_assert!((lhs - rhs).norm() < 1e-8 * (1.0 + rhs.norm()));
        }
    }
}
