use crate::error::{Error, Result};
use crate::ring::{CycloNum, XSeries};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Terms of one x-power sharing the generic monomial u^a v^b w^c.
#[derive(Clone, Debug, PartialEq)]
pub struct GenericGroup {
    pub r: usize,
    pub key: (i32, i32, i32),
    /// (l, m, n) exponents → coefficient.
    pub members: BTreeMap<(i32, i32, i32), CycloNum>,
}

impl GenericGroup {
    pub fn has_neutral_member(&self) -> bool {
        self.members.contains_key(&(0, 0, 0))
    }

    pub fn member_sum(&self) -> CycloNum {
        let mut s = CycloNum::zero();
        for c in self.members.values() {
            s += c;
        }
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FilterDiagnostics {
    pub groups_kept: usize,
    pub groups_dropped: usize,
    /// x-power → (kept, dropped).
    pub by_order: BTreeMap<usize, (usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilteredSeries {
    pub coeffs: Vec<CycloNum>,
    pub diagnostics: FilterDiagnostics,
}

/// Group the terms of a mode-projected tagged series by x-power and (du, dv, dw).
pub fn group_terms(series: &XSeries) -> Result<Vec<GenericGroup>> {
    let mut groups: BTreeMap<(usize, (i32, i32, i32)), GenericGroup> = BTreeMap::new();
    for r in 0..=series.order() {
        for (m, c) in series.coeff(r).terms() {
            if m.pqr() != (0, 0, 0) {
                return Err(Error::Integrity(format!("x^{r} term {m} still carries a Fourier symbol")));
            }
            let key = m.uvw();
            if key.0 + key.1 + key.2 != 2 * r as i32 {
                return Err(Error::Integrity(format!(
                    "x^{r} term {m}: u,v,w degree {} is not 2r",
                    key.0 + key.1 + key.2
                )));
            }
            let g = groups.entry((r, key)).or_insert_with(|| GenericGroup {
                r,
                key,
                members: BTreeMap::new(),
            });
            g.members.insert(m.lmn(), c.clone());
        }
    }
    Ok(groups.into_values().collect())
}

/// Keep a group (summing all its members, then setting u, v, w to 1) when it has an
/// l⁰m⁰n⁰ member; drop it otherwise.
pub fn apply_actions(series: &XSeries) -> Result<FilteredSeries> {
    let mut coeffs = vec![CycloNum::zero(); series.order() + 1];
    let mut diag = FilterDiagnostics::default();
    for g in group_terms(series)? {
        let entry = diag.by_order.entry(g.r).or_default();
        if g.has_neutral_member() {
            coeffs[g.r] += &g.member_sum();
            diag.groups_kept += 1;
            entry.0 += 1;
        } else {
            diag.groups_dropped += 1;
            entry.1 += 1;
        }
    }
    Ok(FilteredSeries {
        coeffs,
        diagnostics: diag,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrRow {
    pub r: usize,
    /// Exact value, printed in the cyclotomic basis when not rational.
    pub value: String,
    #[serde(skip)]
    pub rational: Option<BigRational>,
    pub anomaly: Option<String>,
}

/// Read x^r coefficients as g_r; odd-r nonzero or non-rational values are flagged.
pub fn extract_gr(filtered: &FilteredSeries) -> Vec<GrRow> {
    filtered
        .coeffs
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let rational = c.as_rational().cloned();
            let anomaly = match &rational {
                None => Some("non-rational coefficient".to_string()),
                Some(v) if r % 2 == 1 && !v.is_zero() => Some("nonzero odd-order coefficient".to_string()),
                _ => None,
            };
            GrRow {
                r,
                value: c.to_string(),
                rational,
                anomaly,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Agree,
    Disagree,
    NoOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub r: usize,
    pub filter: String,
    pub oracle: Option<String>,
    pub verdict: Verdict,
}

/// Row-by-row comparison; disagreements are reported as such.
pub fn compare_with_oracle(rows: &[GrRow], oracle: &BTreeMap<usize, BigRational>) -> Vec<ComparisonRow> {
    rows.iter()
        .map(|row| {
            let o = oracle.get(&row.r);
            let verdict = match (o, &row.rational) {
                (None, _) => Verdict::NoOracle,
                (Some(v), Some(f)) if v == f => Verdict::Agree,
                _ => Verdict::Disagree,
            };
            ComparisonRow {
                r: row.r,
                filter: row.value.clone(),
                oracle: o.map(|v| v.to_string()),
                verdict,
            }
        })
        .collect()
}
