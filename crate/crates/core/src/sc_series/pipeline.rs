use super::filter::{apply_actions, compare_with_oracle, extract_gr, ComparisonRow, FilterDiagnostics, GrRow, Verdict};
use super::psi::{
    expand_log, expand_sqrt, naive_critical_point, naive_reduce, naive_zero_angle_coeffs, per_site_log, symbolic_psi_sc,
    TaggedPsi, DEFAULT_MAX_ORDER, DEFAULT_TERM_BUDGET,
};
use crate::error::{Error, Result};
use crate::golden::{self, FixtureCheck};
use crate::oracle::{per_site_connected, per_site_log_series, LatticeKind, RootMethod, DEFAULT_ENUM_BUDGET};
use crate::ring::{project_mode_sum, ModeSide, XSeries};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScSeriesOptions {
    pub order: usize,
    pub term_budget: usize,
    pub oracle_budget: u64,
    pub check_det: bool,
    pub naive: bool,
}

impl Default for ScSeriesOptions {
    fn default() -> Self {
        ScSeriesOptions {
            order: DEFAULT_MAX_ORDER,
            term_budget: DEFAULT_TERM_BUDGET,
            oracle_budget: DEFAULT_ENUM_BUDGET,
            check_det: false,
            naive: false,
        }
    }
}

/// Which expansion fed the filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineSource {
    /// Mode-projected Ψ^{1/2}, compared with per-site connected closed-graph counts.
    Sqrt,
    /// ½ × per-site log Ψ, compared with the per-site log of the closed-graph series.
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineResult {
    pub source: PipelineSource,
    pub order_reached: usize,
    pub rows: Vec<GrRow>,
    pub diagnostics: FilterDiagnostics,
    pub comparison: Vec<ComparisonRow>,
    pub odd_rows_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSide {
    pub order_reached: usize,
    /// Per-site connected even-subgraph counts, least-bond rooting.
    pub connected: Vec<String>,
    /// Same counts, vertex rooting with weight 1/|V|.
    pub connected_vertex_rooted: Vec<String>,
    pub methods_agree: bool,
    /// Per-site log of Σ g_r x^r.
    pub log: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NaiveResult {
    pub fixture: FixtureCheck,
    pub zero_angle_coeffs: Vec<String>,
    pub x_c: f64,
    pub triangular_x_c: f64,
    pub reproduces_triangular: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScSeriesReport {
    pub sqrt: PipelineResult,
    pub log: PipelineResult,
    pub oracle: OracleSide,
    pub fixture: Option<FixtureCheck>,
    pub naive: Option<NaiveResult>,
    /// Set when some stage stopped short of the requested order.
    pub partial: Option<String>,
}

impl ScSeriesReport {
    pub fn any_disagreement(&self) -> bool {
        [&self.sqrt, &self.log]
            .iter()
            .any(|p| p.comparison.iter().any(|c| c.verdict == Verdict::Disagree) || !p.odd_rows_zero)
            || !self.oracle.methods_agree
            || self.fixture.as_ref().is_some_and(|f| !f.pass)
            || self.naive.as_ref().is_some_and(|n| !n.fixture.pass || !n.reproduces_triangular)
    }
}

/// Run `f` at `order`; on a budget error retry once at the reached order.
fn with_fallback<T>(order: usize, partial: &mut Vec<String>, f: impl Fn(usize) -> Result<T>) -> Result<(T, usize)> {
    match f(order) {
        Ok(v) => Ok((v, order)),
        Err(Error::Budget { what, reached }) => {
            partial.push(format!("{what}: stopped at order {reached}"));
            Ok((f(reached)?, reached))
        }
        Err(e) => Err(e),
    }
}

fn run_pipeline(
    source: PipelineSource,
    series: &XSeries,
    order: usize,
    oracle: &BTreeMap<usize, BigRational>,
) -> Result<PipelineResult> {
    let filtered = apply_actions(series)?;
    let rows = extract_gr(&filtered);
    let odd_rows_zero = rows.iter().all(|r| r.r % 2 == 0 || r.anomaly.is_none());
    let comparison = compare_with_oracle(&rows, oracle);
    Ok(PipelineResult {
        source,
        order_reached: order,
        rows,
        diagnostics: filtered.diagnostics,
        comparison,
        odd_rows_zero,
    })
}

fn sqrt_series(psi: &TaggedPsi, order: usize, budget: usize) -> Result<XSeries> {
    Ok(project_mode_sum(&expand_sqrt(psi, order, budget)?, ModeSide::Symbolic))
}

fn log_series(psi: &TaggedPsi, order: usize, budget: usize) -> Result<XSeries> {
    let half = BigRational::new(1.into(), 2.into());
    Ok(per_site_log(&expand_log(psi, order, budget)?).scale_rational(&half))
}

pub fn naive_check(psi: &TaggedPsi) -> Result<NaiveResult> {
    let naive = naive_reduce(psi);
    let fixture = golden::compare_series("naive cubic determinant", &naive, &golden::psi_sc_naive());
    let x_c = naive_critical_point(&naive)?;
    let triangular_x_c = 2.0 - 3f64.sqrt();
    Ok(NaiveResult {
        fixture,
        zero_angle_coeffs: naive_zero_angle_coeffs(&naive)?.iter().map(|c| c.to_string()).collect(),
        x_c,
        triangular_x_c,
        reproduces_triangular: (x_c - triangular_x_c).abs() < 1e-12,
    })
}

/// Both filtered pipelines, the brute-force counts they are compared with, and optional
/// determinant checks.
pub fn run_sc_series(opts: &ScSeriesOptions) -> Result<ScSeriesReport> {
    if opts.order > DEFAULT_MAX_ORDER {
        return Err(Error::Invalid(format!("order {} exceeds the maximum {DEFAULT_MAX_ORDER}", opts.order)));
    }
    let psi = symbolic_psi_sc();
    let mut partial = Vec::new();

    let ((conn, conn_v), oracle_order) = with_fallback(opts.order, &mut partial, |r| {
        Ok((
            per_site_connected(LatticeKind::Sc, r, RootMethod::MinBond, opts.oracle_budget)?,
            per_site_connected(LatticeKind::Sc, r, RootMethod::Vertex, opts.oracle_budget)?,
        ))
    })?;
    let (olog, _) = with_fallback(oracle_order, &mut partial, |r| {
        per_site_log_series(LatticeKind::Sc, r, opts.oracle_budget)
    })?;

    let mut conn_map: BTreeMap<usize, BigRational> = conn.iter().cloned().enumerate().collect();
    conn_map.insert(0, BigRational::one());
    let log_map: BTreeMap<usize, BigRational> = olog.iter().cloned().enumerate().collect();

    let (s, so) = with_fallback(opts.order, &mut partial, |r| sqrt_series(&psi, r, opts.term_budget))?;
    let sqrt = run_pipeline(PipelineSource::Sqrt, &s, so, &conn_map)?;
    let (l, lo) = with_fallback(opts.order, &mut partial, |r| log_series(&psi, r, opts.term_budget))?;
    let log = run_pipeline(PipelineSource::Log, &l, lo, &log_map)?;

    let fixture = opts
        .check_det
        .then(|| golden::compare_series("tagged cubic determinant", psi.series(), &golden::psi_sc()));
    let naive = if opts.naive { Some(naive_check(&psi)?) } else { None };

    let show = |v: &[BigRational]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let oracle = OracleSide {
        order_reached: oracle_order,
        methods_agree: conn == conn_v,
        connected: show(&conn),
        connected_vertex_rooted: show(&conn_v),
        log: show(&olog),
    };
    debug_assert!(oracle.log.first().map_or(true, |c| c == &BigRational::zero().to_string()));
    Ok(ScSeriesReport {
        sqrt,
        log,
        oracle,
        fixture,
        naive,
        partial: (!partial.is_empty()).then(|| partial.join("; ")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(order: usize) -> ScSeriesOptions {
        ScSeriesOptions {
            order,
            check_det: true,
            naive: true,
            ..Default::default()
        }
    }

    #[test]
    fn order_four_log_pipeline_agrees_with_plaquettes() {
        let rep = run_sc_series(&opts(4)).unwrap();
        assert!(rep.partial.is_none());
        assert_eq!(rep.oracle.connected[4], "3");
        assert!(rep.oracle.methods_agree);
        assert_eq!(rep.log.rows[4].value, "3");
        assert_eq!(rep.log.comparison[4].verdict, Verdict::Agree);
        assert!(rep.sqrt.odd_rows_zero && rep.log.odd_rows_zero);
        assert!(rep.fixture.as_ref().unwrap().pass);
        let n = rep.naive.as_ref().unwrap();
        assert!(n.fixture.pass && n.reproduces_triangular);
    }

    #[test]
    fn sqrt_rows_are_reported_not_assumed() {
        let rep = run_sc_series(&opts(4)).unwrap();
        let v: Vec<&str> = rep.sqrt.rows.iter().map(|r| r.value.as_str()).collect();
        assert_eq!(v, ["1", "0", "3/4", "0", "207/64"]);
        assert_eq!(rep.sqrt.comparison[0].verdict, Verdict::Agree);
        assert_eq!(rep.sqrt.comparison[4].verdict, Verdict::Disagree);
        assert!(rep.any_disagreement());
    }

    #[test]
    fn budget_gives_partial_report() {
        let rep = run_sc_series(&ScSeriesOptions {
            order: 6,
            term_budget: 200,
            ..Default::default()
        })
        .unwrap();
        assert!(rep.partial.is_some());
        assert!(rep.sqrt.order_reached < 6);
    }

    #[test]
    fn order_above_maximum_is_rejected() {
        assert!(matches!(run_sc_series(&opts(9)), Err(Error::Invalid(_))));
    }
}
