//! Printed reference polynomials, stored as plain term lists under `fixtures/`.
//!
//! Each non-comment line reads `x^K COEF MONO`, where `COEF` is an integer or fraction and
//! `MONO` uses the same notation as the `TagMonomial` display (`u^2 l^-2 e_p`, or `1`).

use crate::error::{Error, Result};
use crate::ring::{CycloNum, Tag, TagMonomial, TaggedPoly, XSeries};
use num_rational::BigRational;
use serde::Serialize;

pub const PSI_SC: &str = include_str!("../fixtures/psi_sc.txt");
pub const PSI_SC_NAIVE: &str = include_str!("../fixtures/psi_sc_naive.txt");
pub const PSI_PT: &str = include_str!("../fixtures/psi_pt.txt");
pub const SQRT_SC_BRACKET: &str = include_str!("../fixtures/sqrt_sc_bracket.txt");

fn parse_monomial(tokens: &[&str]) -> Result<TagMonomial> {
    let mut exps = [0i32; 9];
    for &tok in tokens {
        if tok == "1" {
            continue;
        }
        let (name, e) = match tok.split_once('^') {
            Some((n, e)) => (n, e.parse::<i32>().map_err(|_| Error::Invalid(format!("bad exponent in {tok}")))?),
            None => (tok, 1),
        };
        let tag = Tag::ALL
            .iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| Error::Invalid(format!("unknown symbol {name}")))?;
        exps[*tag as usize] += e;
    }
    if exps[..3].iter().any(|&e| e < 0) {
        return Err(Error::Invalid("negative u, v, w exponent".into()));
    }
    Ok(TagMonomial::from_exps(exps))
}

/// Parse a term list into a series whose order is the largest x-power present.
pub fn parse_series(text: &str) -> Result<XSeries> {
    let mut terms: Vec<(usize, TagMonomial, CycloNum)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Invalid(format!("line {}: {line}", i + 1));
        if toks.len() < 3 {
            return Err(bad());
        }
        let k: usize = toks[0].strip_prefix("x^").and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let c: BigRational = toks[1].parse().map_err(|_| bad())?;
        terms.push((k, parse_monomial(&toks[2..])?, CycloNum::from_rational(c)));
    }
    let order = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut coeffs = vec![TaggedPoly::zero(); order + 1];
    for (k, m, c) in terms {
        coeffs[k].add_term(m, &c);
    }
    Ok(XSeries::from_coeffs(order, coeffs))
}

/// Tagged cubic determinant as printed.
pub fn psi_sc() -> XSeries {
    parse_series(PSI_SC).expect("bundled fixture parses")
}

/// Cubic determinant with all six tags set to 1, as printed.
pub fn psi_sc_naive() -> XSeries {
    parse_series(PSI_SC_NAIVE).expect("bundled fixture parses")
}

/// Triangular determinant as printed (cosines in exponential form).
pub fn psi_pt() -> XSeries {
    parse_series(PSI_PT).expect("bundled fixture parses")
}

/// Ψ^{1/2} through x² as printed, built from its displayed bracket.
pub fn sqrt_sc_order2() -> XSeries {
    let b = parse_series(SQRT_SC_BRACKET).expect("bundled fixture parses").coeff(1).clone();
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let mut x2 = TaggedPoly::from_terms(
        [[4, 0, 0], [0, 4, 0], [0, 0, 4]]
            .iter()
            .map(|u| (TagMonomial::from_exps([u[0], u[1], u[2], 0, 0, 0, 0, 0, 0]), CycloNum::one())),
    );
    let b2 = crate::ring::poly_mul(&b, &b).scale_rational(&(-quarter));
    for (m, c) in b2.terms() {
        x2.add_term(*m, c);
    }
    XSeries::from_coeffs(2, vec![TaggedPoly::one(), b.scale_rational(&half), x2.scale_rational(&half)])
}

/// Outcome of comparing a computed series with a printed one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub pass: bool,
    pub terms_expected: usize,
    pub terms_computed: usize,
    /// First few differing terms, `x^k: mono (computed vs expected)`.
    pub mismatches: Vec<String>,
}

/// Exact term-by-term comparison over x⁰..x^order of `expected`.
pub fn compare_series(name: &str, computed: &XSeries, expected: &XSeries) -> FixtureCheck {
    let order = expected.order().max(computed.order());
    let get = |s: &XSeries, k: usize| if k <= s.order() { s.coeff(k).clone() } else { TaggedPoly::zero() };
    let mut mismatches = Vec::new();
    let (mut ne, mut nc) = (0, 0);
    for k in 0..=order {
        let (c, e) = (get(computed, k), get(expected, k));
        ne += e.len();
        nc += c.len();
        let mut monos: Vec<TagMonomial> = c.terms().chain(e.terms()).map(|(m, _)| *m).collect();
        monos.sort();
        monos.dedup();
        for m in monos {
            let (a, b) = (c.coeff(&m), e.coeff(&m));
            if a != b && mismatches.len() < 8 {
                mismatches.push(format!("x^{k}: {m} ({a} vs {b})"));
            }
        }
    }
    FixtureCheck {
        name: name.to_string(),
        pass: mismatches.is_empty(),
        terms_expected: ne,
        terms_computed: nc,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse_with_expected_sizes() {
        assert_eq!(psi_sc().term_count(), 34);
        assert_eq!(psi_sc_naive().term_count(), 24);
        assert_eq!(psi_pt().term_count(), 24);
        assert_eq!(sqrt_sc_order2().order(), 2);
    }

    #[test]
    fn monomial_notation_round_trips() {
        let m = TagMonomial::from_exps([4, 2, 0, 0, -2, 0, 1, 0, -1]);
        let s = m.to_string();
        let toks: Vec<&str> = s.split_whitespace().collect();
        assert_eq!(parse_monomial(&toks).unwrap(), m);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(parse_series("x^1 2").is_err());
        assert!(parse_series("y^1 2 u").is_err());
        assert!(parse_series("x^1 2 z^3").is_err());
        assert!(parse_series("x^1 2 u^-2").is_err());
    }

    #[test]
    fn computed_determinants_match_printed_ones() {
        use crate::sc_series::{expand_sqrt, naive_reduce, symbolic_psi_sc, DEFAULT_TERM_BUDGET};
        let sc = symbolic_psi_sc();
        assert!(compare_series("sc", sc.series(), &psi_sc()).pass);
        assert!(compare_series("naive", &naive_reduce(&sc), &psi_sc_naive()).pass);
        let pt = crate::pt_solver::symbolic_psi_pt();
        assert!(compare_series("pt", pt.series(), &psi_pt()).pass);
        let s = expand_sqrt(&sc, 2, DEFAULT_TERM_BUDGET).unwrap();
        assert!(compare_series("sqrt", &s, &sqrt_sc_order2()).pass);
    }

    #[test]
    fn comparison_reports_differences() {
        let a = parse_series("x^0 1 1\nx^1 2 u^2").unwrap();
        let b = parse_series("x^0 1 1\nx^1 3 u^2").unwrap();
        assert!(compare_series("same", &a, &a).pass);
        let c = compare_series("diff", &a, &b);
        assert!(!c.pass);
        assert_eq!(c.mismatches.len(), 1);
    }
}
