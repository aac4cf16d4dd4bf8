use super::{poly_mul, CycloNum, TagMonomial, TaggedPoly};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Truncated power series Σ_{k=0}^{R} c_k x^k with TaggedPoly coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct XSeries {
    order: usize,
    coeffs: Vec<TaggedPoly>,
}

impl XSeries {
    pub fn zero(order: usize) -> Self {
        XSeries {
            order,
            coeffs: vec![TaggedPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = TaggedPoly::one();
        s
    }

    /// Build from coefficients; extra entries beyond `order` are dropped.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<TaggedPoly>) -> Self {
        coeffs.resize(order + 1, TaggedPoly::zero());
        XSeries { order, coeffs }
    }

    /// Scalar integer series, handy in tests and the CLI.
    pub fn from_ints(order: usize, c: &[i64]) -> Self {
        Self::from_coeffs(
            order,
            c.iter().map(|&v| TaggedPoly::constant(CycloNum::from_int(v))).collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &TaggedPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[TaggedPoly] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, p: TaggedPoly) {
        if k <= self.order {
            self.coeffs[k] = p;
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        XSeries {
            order,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().map(TaggedPoly::len).sum()
    }

    pub fn map_coeffs<F: Fn(&TaggedPoly) -> TaggedPoly>(&self, f: F) -> Self {
        XSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &XSeries) -> XSeries {
        let order = self.order.min(other.order);
        XSeries {
            order,
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    pub fn sub(&self, other: &XSeries) -> XSeries {
        let order = self.order.min(other.order);
        XSeries {
            order,
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(),
        }
    }

    pub fn mul(&self, other: &XSeries) -> XSeries {
        self.mul_budget(other, usize::MAX)
            .expect("unbounded budget cannot be exceeded")
    }

    pub fn scale_rational(&self, r: &BigRational) -> XSeries {
        self.map_coeffs(|p| p.scale_rational(r))
    }

    /// Truncated product; fails when any coefficient exceeds `budget` terms.
    fn mul_budget(&self, other: &XSeries, budget: usize) -> Result<XSeries> {
        let order = self.order.min(other.order);
        let mut out = XSeries::zero(order);
        for n in 0..=order {
            let mut acc = TaggedPoly::zero();
            for i in 0..=n {
                let (a, b) = (&self.coeffs[i], &other.coeffs[n - i]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = &acc + &poly_mul(a, b);
            }
            if acc.len() > budget {
                return Err(Error::Budget {
                    what: format!("{} terms at x^{}", acc.len(), n),
                    reached: n.saturating_sub(1),
                });
            }
            out.coeffs[n] = acc;
        }
        Ok(out)
    }

    /// Substitute the scalar value 1 for every symbol in every coefficient.
    pub fn coefficient_sums(&self) -> Vec<CycloNum> {
        self.coeffs.iter().map(TaggedPoly::coefficient_sum).collect()
    }
}

/// Size of the Fourier mode lattice behind a projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSide {
    /// Side larger than any exponent that can occur: keep exactly the zero exponents.
    Symbolic,
    Finite(u32),
}

/// Per-site Fourier mode average: keeps terms whose e_p, e_q, e_r exponents are all ≡ 0 mod L.
pub fn project_mode_sum(s: &XSeries, side: ModeSide) -> XSeries {
    let keep = |m: &TagMonomial| {
        let (p, q, r) = m.pqr();
        match side {
            ModeSide::Symbolic => p == 0 && q == 0 && r == 0,
            ModeSide::Finite(l) => {
                let l = l as i32;
                p.rem_euclid(l) == 0 && q.rem_euclid(l) == 0 && r.rem_euclid(l) == 0
            }
        }
    };
    s.map_coeffs(|p| p.filter(keep))
}

fn check_unit(s: &XSeries) -> Result<XSeries> {
    let c0 = s.coeff(0);
    if c0.len() != 1 || !c0.constant_term().is_one() {
        return Err(Error::NonUnitConstant);
    }
    let mut d = s.clone();
    d.coeffs[0] = TaggedPoly::zero();
    Ok(d)
}

/// Σ_{k≥0} a_k D^k with D = s − 1, truncated at the order of `s`.
fn compose_with_unit(s: &XSeries, a: impl Fn(usize) -> BigRational, budget: usize) -> Result<XSeries> {
    let d = check_unit(s)?;
    let order = s.order;
    let mut out = XSeries::zero(order);
    out.coeffs[0] = TaggedPoly::constant(CycloNum::from_rational(a(0)));
    let mut power = XSeries::one(order);
    for k in 1..=order {
        power = power.mul_budget(&d, budget).map_err(|e| match e {
            Error::Budget { what, .. } => Error::Budget {
                what,
                reached: k - 1,
            },
            other => other,
        })?;
        let ak = a(k);
        if !ak.is_zero() {
            out = out.add(&power.scale_rational(&ak));
        }
    }
    Ok(out)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient (1/2 choose k) as an exact rational.
pub(crate) fn half_choose(k: usize) -> BigRational {
    let mut c = BigRational::one();
    for j in 0..k {
        c = c * (rat(1, 2) - rat(j as i64, 1)) / rat(j as i64 + 1, 1);
    }
    c
}

/// Square root by the binomial series Σ (1/2 choose k)(s − 1)^k.
pub fn series_sqrt(s: &XSeries) -> Result<XSeries> {
    series_sqrt_budget(s, usize::MAX)
}

pub fn series_sqrt_budget(s: &XSeries, budget: usize) -> Result<XSeries> {
    compose_with_unit(s, half_choose, budget)
}

/// log s = −Σ_{k≥1} (1 − s)^k / k.
pub fn series_log(s: &XSeries) -> Result<XSeries> {
    series_log_budget(s, usize::MAX)
}

pub fn series_log_budget(s: &XSeries, budget: usize) -> Result<XSeries> {
    compose_with_unit(
        s,
        |k| {
            if k == 0 {
                BigRational::zero()
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                rat(sign, k as i64)
            }
        },
        budget,
    )
}

/// exp of a series with zero constant term; inverse of [`series_log`].
pub fn series_exp(s: &XSeries) -> Result<XSeries> {
    if !s.coeff(0).is_zero() {
        return Err(Error::Invalid("exp needs a zero constant term".into()));
    }
    let shifted = s.add(&XSeries::one(s.order));
    let mut fact = BigInt::one();
    let inv_fact: Vec<BigRational> = (0..=s.order)
        .map(|k| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            BigRational::new(BigInt::one(), fact.clone())
        })
        .collect();
    compose_with_unit(&shifted, |k| inv_fact[k].clone(), usize::MAX)
}

impl fmt::Debug for XSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for XSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("[{}] x^{}", c, k))
            .collect();
        if parts.is_empty() {
            write!(f, "0 + O(x^{})", self.order + 1)
        } else {
            write!(f, "{} + O(x^{})", parts.join(" + "), self.order + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Tag, TagMonomial};
    use proptest::prelude::*;

    fn scalar(order: usize, c: &[(i64, i64)]) -> XSeries {
        XSeries::from_coeffs(
            order,
            c.iter().map(|&(n, d)| TaggedPoly::constant(CycloNum::from_frac(n, d))).collect(),
        )
    }

    #[test]
    fn sqrt_of_one_plus_two_x() {
        let s = scalar(2, &[(1, 1), (2, 1)]);
        assert_eq!(series_sqrt(&s).unwrap(), scalar(2, &[(1, 1), (1, 1), (-1, 2)]));
    }

    #[test]
    fn sqrt_and_log_of_one() {
        let one = XSeries::one(5);
        assert_eq!(series_sqrt(&one).unwrap(), one);
        assert_eq!(series_log(&one).unwrap(), XSeries::zero(5));
    }

    #[test]
    fn log_of_one_minus_x() {
        let s = scalar(3, &[(1, 1), (-1, 1)]);
        assert_eq!(series_log(&s).unwrap(), scalar(3, &[(0, 1), (-1, 1), (-1, 2), (-1, 3)]));
    }

    #[test]
    fn non_unit_constant_is_rejected() {
        let s = scalar(2, &[(2, 1), (1, 1)]);
        assert!(matches!(series_sqrt(&s), Err(Error::NonUnitConstant)));
        assert!(matches!(series_log(&s), Err(Error::NonUnitConstant)));
    }

    #[test]
    fn half_choose_values() {
        assert_eq!(half_choose(0), rat(1, 1));
        assert_eq!(half_choose(1), rat(1, 2));
        assert_eq!(half_choose(2), rat(-1, 8));
        assert_eq!(half_choose(3), rat(1, 16));
    }

    #[test]
    fn projection_drops_nonzero_fourier_exponents() {
        let mut s = XSeries::zero(3);
        s.set_coeff(1, TaggedPoly::term(TagMonomial::fourier(1, 0, 0), CycloNum::one()));
        s.set_coeff(2, TaggedPoly::term(TagMonomial::ONE, CycloNum::one()));
        let p = project_mode_sum(&s, ModeSide::Finite(10));
        assert!(p.coeff(1).is_zero());
        assert_eq!(p.coeff(2), s.coeff(2));
    }

    #[test]
    fn projection_on_small_side_keeps_multiples() {
        // (1/3) Σ_p ε^{3p} over p = 0..2 is 1 per site.
        let direct: num_complex::Complex64 = (0..3)
            .map(|p| num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 3.0 * p as f64 / 3.0))
            .sum::<num_complex::Complex64>()
            / 3.0;
        let mut s = XSeries::zero(1);
        s.set_coeff(1, TaggedPoly::term(TagMonomial::fourier(3, 0, 0), CycloNum::one()));
        let p = project_mode_sum(&s, ModeSide::Finite(3));
        let kept = p.coeff(1).coefficient_sum().to_complex();
        assert!((kept - direct).norm() < 1e-12);
    }

    #[test]
    fn budget_reports_reached_order() {
        let mut s = XSeries::one(6);
        s.set_coeff(
            1,
            TaggedPoly::from_terms((0..4).map(|k| (TagMonomial::fourier(k, 0, 0), CycloNum::one()))),
        );
        match series_log_budget(&s, 5) {
            Err(Error::Budget { reached, .. }) => assert_eq!(reached, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn arb_unit_series() -> impl Strategy<Value = XSeries> {
        let coeff = prop::collection::vec((-2i32..3, -2i32..3, -3i64..4), 0..3);
        prop::collection::vec(coeff, 4).prop_map(|cs| {
            let mut s = XSeries::one(4);
            for (k, terms) in cs.into_iter().enumerate() {
                let p = TaggedPoly::from_terms(terms.into_iter().map(|(a, b, c)| {
                    let m = TagMonomial::single(Tag::L, a) * TagMonomial::fourier(b, 0, 0);
                    (m, CycloNum::from_ints([c, 0, c % 2, 0]))
                }));
                s.set_coeff(k + 1, p);
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sqrt_squared_is_identity(s in arb_unit_series()) {
            let t = series_sqrt(&s).unwrap();
            prop_assert_eq!(t.mul(&t), s);
        }

        #[test]
        fn exp_inverts_log(s in arb_unit_series()) {
            let l = series_log(&s).unwrap();
            prop_assert_eq!(series_exp(&l).unwrap(), s);
        }

        #[test]
        fn projection_is_idempotent_and_linear(a in arb_unit_series(), b in arb_unit_series()) {
            let pa = project_mode_sum(&a, ModeSide::Symbolic);
            prop_assert_eq!(project_mode_sum(&pa, ModeSide::Symbolic), pa.clone());
            let pb = project_mode_sum(&b, ModeSide::Symbolic);
            prop_assert_eq!(project_mode_sum(&a.add(&b), ModeSide::Symbolic), pa.add(&pb));
            let fa = project_mode_sum(&a, ModeSide::Finite(2));
            prop_assert_eq!(project_mode_sum(&fa, ModeSide::Finite(2)), fa);
        }
    }
}
