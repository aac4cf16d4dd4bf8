use super::{HtExpandArgs, LoopsArgs, OracleArgs, PtSolveArgs, ScSeriesArgs};
use crate::config::ConfigFile;
use crate::error::{Error, Result};
use crate::ht_expansion::{
    full_partition_polynomial, max_order, run_window, WindowLattice, WindowOptions, DEFAULT_STATE_BUDGET,
};
use crate::oracle::{
    count_even_subgraphs, count_even_subgraphs_by_translation, cycle_space_counts, exhaustive_partition,
    per_site_connected, per_site_log_series, LatticeKind, LatticeSpec, RootMethod, DEFAULT_ENUM_BUDGET,
    MAX_EXHAUSTIVE_SITES,
};
use crate::pt_solver::{
    critical_point, free_energy, log_theta_mean, log_window_grid, specific_heat_scan, t_of, QuadOptions,
    ScanOptions, ThetaForm,
};
use crate::report::{Report, Row};
use crate::sc_series::{run_sc_series, ScSeriesOptions, Verdict, DEFAULT_TERM_BUDGET};
use crate::walker::{
    apply_graph_actions, enumerate_loops, graph_loop_sum, whitney_check, whitney_survey, DedupPolicy, Geometry,
    LoopGraph, DEFAULT_NODE_BUDGET, REFERENCE_WALKS,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

fn parse_theta(s: &str) -> Result<ThetaForm> {
    match s {
        "planar" => Ok(ThetaForm::Planar),
        "printed" => Ok(ThetaForm::Printed),
        _ => Err(Error::Invalid(format!("theta must be planar or printed, got {s:?}"))),
    }
}

fn parse_geometry(s: &str) -> Result<Geometry> {
    match s {
        "planar" => Ok(Geometry::PtPlanar),
        "printed" => Ok(Geometry::PtPrinted),
        _ => Err(Error::Invalid(format!("geometry must be planar or printed, got {s:?}"))),
    }
}

fn parse_dedup(s: &str) -> Result<DedupPolicy> {
    match s {
        "none" => Ok(DedupPolicy::None),
        "reversal" => Ok(DedupPolicy::Reversal),
        "cyclic-shift" => Ok(DedupPolicy::CyclicShift),
        _ => Err(Error::Invalid(format!("dedup must be none, reversal or cyclic-shift, got {s:?}"))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| Error::Invalid(format!("{what}: cannot parse {p:?}"))))
        .collect()
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Invalid(format!("fit window must be LO:HI with 0 < LO < HI, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(a > 0.0 && a < b) {
        return Err(bad());
    }
    Ok((a, b))
}

fn coeff_rows(rows: &mut Vec<Row>, coeffs: &[BigInt], source: &str, flags: &[String]) {
    for (r, c) in coeffs.iter().enumerate() {
        rows.push(Row::series(r, c, source, flags.to_vec()));
    }
}

fn odd_zero(coeffs: &[BigInt]) -> bool {
    coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
}

fn equal_prefix(a: &[BigInt], b: &[BigInt], upto: usize) -> bool {
    (0..=upto).all(|r| {
        let z = BigInt::zero();
        a.get(r).unwrap_or(&z) == b.get(r).unwrap_or(&z)
    })
}

#[derive(Serialize)]
struct PtConfig {
    j: f64,
    theta: ThetaForm,
    at_x: Option<f64>,
    temps: Vec<f64>,
    fit_window: (f64, f64),
    fit_points: usize,
    gauss_points: usize,
}

pub fn cmd_pt_solve(a: &PtSolveArgs, cfg: &ConfigFile) -> Result<Report> {
    let theta = parse_theta(&cfg.pick(a.theta.clone(), "theta", "planar".to_string())?)?;
    let temps = match cfg.pick_opt(a.temps.clone(), "temps")? {
        Some(s) => parse_list(&s, "temps")?,
        None => (1..=12).map(|k| 0.5 * k as f64).collect(),
    };
    let c = PtConfig {
        j: cfg.pick(a.j, "J", 1.0)?,
        theta,
        at_x: cfg.pick_opt(a.at_x, "at-x")?,
        temps,
        fit_window: parse_window(&cfg.pick(a.fit_window.clone(), "fit-window", "1e-4:1e-2".to_string())?)?,
        fit_points: cfg.pick(a.fit_points, "fit-points", 21)?,
        gauss_points: cfg.pick(a.gauss_points, "gauss-points", QuadOptions::default().gauss_points)?,
    };
    if !(c.j > 0.0) || c.temps.iter().any(|&t| !(t > 0.0)) || c.fit_points < 2 || c.gauss_points < 2 {
        return Err(Error::Invalid("need J > 0, positive temperatures, fit-points ≥ 2, gauss-points ≥ 2".into()));
    }
    let quad = QuadOptions {
        form: c.theta,
        gauss_points: c.gauss_points,
        ..QuadOptions::default()
    };
    let mut rep = Report::new("pt-solve", &c);
    let crit = critical_point();
    rep.rows.push(Row::scalar(format!("{:.16}", crit.x_c), "pt-critical-x", vec![]));
    rep.rows.push(Row::scalar(format!("{:.16}", crit.t_c), "pt-critical-t-over-j", vec![]));
    rep.check("x_c_is_two_minus_root_three", (crit.x_c - (2.0 - 3f64.sqrt())).abs() < 1e-10);
    rep.check("f_vanishes_at_x_c", crit.f_at_xc.abs() < 1e-12);
    rep.check("f_prime_vanishes_at_x_c", crit.df_at_xc.abs() < 1e-9);
    rep.diag("critical", crit);
    rep.diag("second_derivative_vanishes_at_x_c", crit.d2f_at_xc.abs() < 1e-9);

    if let Some(x) = c.at_x {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::Invalid(format!("at-x must lie in [0, 1), got {x}")));
        }
        let q = log_theta_mean(x, &quad);
        let per_t = -std::f64::consts::LN_2 + 1.5 * (1.0 - x * x).ln() - 0.5 * q.value;
        let t = (x > 0.0).then(|| t_of(x, c.j));
        let mut row = Row::thermal(t, x, per_t, "pt-free-energy-over-t");
        row.flags.push("phi/(N T)".into());
        rep.rows.push(row);
        if let Some(t) = t {
            rep.rows.push(Row::thermal(Some(t), x, t * per_t, "pt-free-energy"));
        }
        rep.diag("quad_error_over_t", 0.5 * q.error);
        rep.finish(false, false);
        return Ok(rep);
    }

    let mut phis = Vec::new();
    for &t in &c.temps {
        let r = free_energy(t, c.j, &quad)?;
        rep.rows.push(Row::thermal(Some(t), r.x, r.phi, "pt-free-energy"));
        phis.push((t, r.phi, r.quad_error));
    }
    let mut sorted = phis.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    rep.check("free_energy_decreasing_in_t", sorted.windows(2).all(|w| w[1].1 < w[0].1));
    rep.diag("free_energy_quad_errors", phis.iter().map(|p| p.2).collect::<Vec<_>>());

    let grid = log_window_grid(c.fit_window, c.fit_points, c.j);
    let fit = specific_heat_scan(&grid, c.j, &ScanOptions { quad, ..ScanOptions::default() })?;
    for s in &fit.samples {
        rep.rows.push(Row::thermal(Some(s.t), s.x, s.c_v, "pt-specific-heat"));
    }
    rep.check("cv_log_fit_r2_above_0_99", fit.pooled.r2 > 0.99);
    rep.check("cv_slope_negative", fit.pooled.b < 0.0);
    rep.diag("fit_pooled", fit.pooled);
    rep.diag("fit_below", fit.below);
    rep.diag("fit_above", fit.above);
    rep.finish(false, false);
    Ok(rep)
}

pub fn cmd_sc_series(a: &ScSeriesArgs, cfg: &ConfigFile) -> Result<Report> {
    let d = ScSeriesOptions::default();
    let opts = ScSeriesOptions {
        order: cfg.pick(a.order, "order", d.order)?,
        term_budget: cfg.pick(a.term_budget, "term-budget", DEFAULT_TERM_BUDGET)?,
        oracle_budget: cfg.pick(a.enum_budget, "enum-budget", DEFAULT_ENUM_BUDGET)?,
        check_det: cfg.pick_flag(a.check_det, "check-det")?,
        naive: cfg.pick_flag(a.naive, "naive")?,
    };
    let res = run_sc_series(&opts)?;
    let mut rep = Report::new("sc-series", &opts);
    rep.budget.insert("term_budget".into(), opts.term_budget as u64);
    rep.budget.insert("enum_budget".into(), opts.oracle_budget);
    for (p, src) in [(&res.sqrt, "sc-sqrt"), (&res.log, "sc-log")] {
        for (row, cmp) in p.rows.iter().zip(&p.comparison) {
            let mut flags = vec![
                "per-site".to_string(),
                match cmp.verdict {
                    Verdict::Agree => "agree".into(),
                    Verdict::Disagree => format!("disagree:oracle={}", cmp.oracle.as_deref().unwrap_or("")),
                    Verdict::NoOracle => "no-oracle".into(),
                },
            ];
            flags.extend(row.anomaly.clone());
            rep.rows.push(Row::series(row.r, &row.value, src, flags));
        }
        rep.check(&format!("{src}_odd_rows_zero"), p.odd_rows_zero);
    }
    let o = &res.oracle;
    for (r, v) in o.connected.iter().enumerate() {
        rep.rows.push(Row::series(r, v, "oracle-connected", vec!["per-site".into(), "min-bond-rooted".into()]));
    }
    for (r, v) in o.connected_vertex_rooted.iter().enumerate() {
        rep.rows.push(Row::series(r, v, "oracle-connected", vec!["per-site".into(), "vertex-rooted".into()]));
    }
    for (r, v) in o.log.iter().enumerate() {
        rep.rows.push(Row::series(r, v, "oracle-log", vec!["per-site".into()]));
    }
    if o.order_reached >= 4 {
        rep.check("oracle_sc_g4_is_3", o.connected[4] == "3");
    }
    rep.check("oracle_rooting_methods_agree", o.methods_agree);
    if let Some(f) = &res.fixture {
        rep.check("determinant_matches_printed", f.pass);
    }
    if let Some(n) = &res.naive {
        rep.rows.push(Row::scalar(format!("{:.16}", n.x_c), "sc-naive-critical-x", vec!["naive=true".into()]));
        rep.check("naive_determinant_matches_printed", n.fixture.pass);
        rep.check("naive_reproduces_triangular_x_c", n.reproduces_triangular);
    }
    rep.diag("normalization", "sc-sqrt: mode-projected sqrt(Psi) vs per-site connected counts; sc-log: half the per-site log Psi vs per-site log of the closed-graph series");
    rep.diag("sqrt_filter", &res.sqrt.diagnostics);
    rep.diag("log_filter", &res.log.diagnostics);
    rep.diag("determinant_fixture", &res.fixture);
    rep.diag("naive", &res.naive);
    rep.diag("partial", &res.partial);
    let disagree = res.sqrt.comparison.iter().chain(&res.log.comparison).any(|c| c.verdict == Verdict::Disagree);
    rep.finish(disagree, res.partial.is_some());
    Ok(rep)
}

#[derive(Serialize)]
struct HtConfig {
    lattice: LatticeKind,
    order: usize,
    radius: Option<usize>,
    bond_dedup: bool,
    through_center: bool,
    state_budget: usize,
    oracle: bool,
    full: bool,
    side: Option<usize>,
    open: bool,
    enum_budget: u64,
}

pub fn cmd_ht_expand(a: &HtExpandArgs, cfg: &ConfigFile) -> Result<Report> {
    let kind: LatticeKind = cfg.pick(a.lattice.clone(), "lattice", "sq".to_string())?.parse()?;
    let full = cfg.pick_flag(a.full, "full")?;
    let c = HtConfig {
        lattice: kind,
        order: cfg.pick(a.order, "order", max_order(kind))?,
        radius: cfg.pick_opt(a.radius, "radius")?,
        bond_dedup: !cfg.pick_flag(a.literal, "literal")?,
        through_center: cfg.pick_flag(a.through_center, "through-center")?,
        state_budget: cfg.pick(a.state_budget, "state-budget", DEFAULT_STATE_BUDGET)?,
        oracle: cfg.pick_flag(a.oracle, "oracle")?,
        full,
        side: if full { Some(cfg.pick(a.side, "L", 3)?) } else { None },
        open: cfg.pick_flag(a.open, "open")?,
        enum_budget: cfg.pick(a.enum_budget, "enum-budget", DEFAULT_ENUM_BUDGET)?,
    };
    let mut rep = Report::new("ht-expand", &c);
    rep.budget.insert("state_budget".into(), c.state_budget as u64);

    if let Some(side) = c.side {
        let spec = LatticeSpec::cube(kind, side, !c.open)?;
        let poly = full_partition_polynomial(&spec, c.state_budget)?;
        coeff_rows(&mut rep.rows, &poly, "ht-full", &[format!("sites={}", spec.n_sites())]);
        if spec.n_sites() <= MAX_EXHAUSTIVE_SITES {
            rep.check("matches_exhaustive", exhaustive_partition(&spec.build()?)? == poly);
        }
        rep.finish(false, false);
        return Ok(rep);
    }

    let mut opts = WindowOptions::new(kind, c.order);
    opts.radius = c.radius;
    opts.bond_dedup = c.bond_dedup;
    opts.through_center = c.through_center;
    opts.state_budget = c.state_budget;
    let run = run_window(&opts)?;
    let flags = vec![
        if c.through_center { "through-center" } else { "all-graphs" }.to_string(),
        if c.bond_dedup { "bond-dedup" } else { "literal" }.to_string(),
        format!("radius={}", run.radius),
    ];
    coeff_rows(&mut rep.rows, &run.coeffs, "ht-expansion", &flags);
    rep.check("odd_coefficients_vanish", odd_zero(&run.coeffs));
    if c.oracle {
        if c.bond_dedup {
            let w = WindowLattice::new(kind, run.radius)?;
            let through = c.through_center.then_some(w.center);
            let counts = count_even_subgraphs_by_translation(&w.lattice, run.order_reached, through, c.enum_budget)?;
            coeff_rows(&mut rep.rows, &counts.total, "oracle-window", &flags);
            rep.check("matches_oracle", equal_prefix(&counts.total, &run.coeffs, run.order_reached));
        } else {
            rep.diag("oracle", "skipped: literal mode counts a doubled-bond multigraph");
        }
    }
    rep.diag("radius", run.radius);
    rep.diag("factors", run.n_factors);
    rep.diag("peak_states", run.peak_states);
    rep.diag("order_reached", run.order_reached);
    rep.finish(false, run.order_reached < c.order);
    Ok(rep)
}

#[derive(Serialize)]
struct OracleConfig {
    lattice: LatticeKind,
    sides: Vec<usize>,
    periodic: bool,
    exhaustive: bool,
    order: usize,
    through_center: bool,
    per_site: bool,
    enum_budget: u64,
}

pub fn cmd_oracle(a: &OracleArgs, cfg: &ConfigFile) -> Result<Report> {
    let kind: LatticeKind = cfg.pick(a.lattice.clone(), "lattice", "sq".to_string())?.parse()?;
    let sides = match cfg.pick_opt(a.sides.clone(), "sides")? {
        Some(s) => parse_list(&s, "sides")?,
        None => vec![cfg.pick(a.side, "L", 4)?; kind.dim()],
    };
    let c = OracleConfig {
        lattice: kind,
        sides,
        periodic: !cfg.pick_flag(a.open, "open")?,
        exhaustive: cfg.pick_flag(a.exhaustive, "exhaustive")?,
        order: cfg.pick(a.order, "order", 8)?,
        through_center: cfg.pick_flag(a.through_center, "through-center")?,
        per_site: cfg.pick_flag(a.per_site, "per-site")?,
        enum_budget: cfg.pick(a.enum_budget, "enum-budget", DEFAULT_ENUM_BUDGET)?,
    };
    let mut rep = Report::new("oracle", &c);
    rep.budget.insert("enum_budget".into(), c.enum_budget);

    if c.per_site {
        let mb = per_site_connected(kind, c.order, RootMethod::MinBond, c.enum_budget)?;
        let vx = per_site_connected(kind, c.order, RootMethod::Vertex, c.enum_budget)?;
        let lg = per_site_log_series(kind, c.order, c.enum_budget)?;
        for (r, v) in mb.iter().enumerate() {
            rep.rows.push(Row::series(r, v, "oracle-connected", vec!["per-site".into(), "min-bond-rooted".into()]));
        }
        for (r, v) in vx.iter().enumerate() {
            rep.rows.push(Row::series(r, v, "oracle-connected", vec!["per-site".into(), "vertex-rooted".into()]));
        }
        for (r, v) in lg.iter().enumerate() {
            rep.rows.push(Row::series(r, v, "oracle-log", vec!["per-site".into()]));
        }
        rep.check("rooting_methods_agree", mb == vx);
        rep.finish(false, false);
        return Ok(rep);
    }

    let spec = LatticeSpec::new(kind, c.sides.clone(), c.periodic)?;
    let lat = spec.build()?;
    let through = c.through_center.then(|| lat.center() as u32);
    rep.diag("sites", lat.n_sites());
    rep.diag("bonds", lat.n_bonds());

    if c.exhaustive {
        let poly = exhaustive_partition(&lat)?;
        coeff_rows(&mut rep.rows, &poly, "oracle-exhaustive", &[]);
        match cycle_space_counts(&lat) {
            Ok(cs) => {
                let cs: Vec<BigInt> = cs.into_iter().map(BigInt::from).collect();
                rep.check("matches_cycle_space", equal_prefix(&cs, &poly, lat.n_bonds()));
            }
            Err(e) => rep.diag("cycle_space", format!("skipped: {e}")),
        }
        match full_partition_polynomial(&spec, DEFAULT_STATE_BUDGET) {
            Ok(ht) => rep.check("matches_ht_full", ht == poly),
            Err(e) => rep.diag("ht_full", format!("skipped: {e}")),
        }
        let counts = count_even_subgraphs(&lat, c.order, None, c.enum_budget)?;
        rep.check(
            "matches_even_subgraphs",
            equal_prefix(&counts.total, &poly, counts.complete_through),
        );
        rep.diag("even_subgraphs_complete_through", counts.complete_through);
        rep.finish(false, counts.complete_through < c.order);
        return Ok(rep);
    }

    let counts = count_even_subgraphs(&lat, c.order, through, c.enum_budget)?;
    let mut flags = vec![format!("sites={}", lat.n_sites())];
    if let Some(s) = through {
        flags.push(format!("through-site={s}"));
    }
    coeff_rows(&mut rep.rows, &counts.total, "oracle-even-total", &flags);
    coeff_rows(&mut rep.rows, &counts.connected, "oracle-even-connected", &flags);
    rep.diag("complete_through", counts.complete_through);
    rep.finish(false, counts.complete_through < c.order);
    Ok(rep)
}

#[derive(Serialize)]
struct LoopsConfig {
    examples: bool,
    whitney: Option<usize>,
    geometry: Geometry,
    dedup: DedupPolicy,
    node_budget: u64,
}

#[derive(Serialize)]
struct DecompositionView {
    loops: usize,
    sign: i32,
    tag: String,
    phase: String,
    coefficient: String,
}

pub fn cmd_loops(a: &LoopsArgs, cfg: &ConfigFile) -> Result<Report> {
    let examples = cfg.pick_flag(a.examples, "examples")?;
    let whitney = cfg.pick_opt(a.whitney, "whitney")?;
    let neither = !examples && whitney.is_none();
    let c = LoopsConfig {
        examples: examples || neither,
        whitney: if neither { Some(10) } else { whitney },
        geometry: parse_geometry(&cfg.pick(a.geometry.clone(), "geometry", "planar".to_string())?)?,
        dedup: parse_dedup(&cfg.pick(a.dedup.clone(), "dedup", "none".to_string())?)?,
        node_budget: cfg.pick(a.node_budget, "node-budget", DEFAULT_NODE_BUDGET)?,
    };
    let mut rep = Report::new("loops", &c);
    rep.budget.insert("node_budget".into(), c.node_budget);

    if c.examples {
        let mut views = serde_json::Map::new();
        for (name, dirs, expected) in REFERENCE_WALKS {
            let g = LoopGraph::from_walk(Geometry::Sc, [0; 3], dirs);
            let sum = graph_loop_sum(&g)?;
            let v = apply_graph_actions(&sum);
            let shown = match v.as_rational() {
                Some(q) if q.is_integer() && *q.numer() > BigInt::zero() => format!("+{q}"),
                _ => v.to_string(),
            };
            rep.rows.push(Row::scalar(shown, "loops-example", vec![name.to_string()]));
            rep.check(name, v == crate::ring::CycloNum::from_int(expected));
            let ds: Vec<DecompositionView> = sum
                .decompositions
                .iter()
                .map(|d| DecompositionView {
                    loops: d.loops.len(),
                    sign: d.sign,
                    tag: d.tag.to_string(),
                    phase: d.phase.to_string(),
                    coefficient: d.coefficient().to_string(),
                })
                .collect();
            views.insert(name.to_string(), serde_json::to_value(ds).expect("serializes"));
        }
        rep.diag("decompositions", views);
    }

    if let Some(max_len) = c.whitney {
        let (by_len, failures) = if c.dedup == DedupPolicy::None {
            let s = whitney_survey(c.geometry, max_len, c.node_budget)?;
            (s.by_len, s.failures)
        } else {
            let loops = enumerate_loops(c.geometry, max_len, c.dedup, c.node_budget)?;
            let mut by = std::collections::BTreeMap::<usize, (u64, u64)>::new();
            let mut fails = Vec::new();
            for w in &loops {
                let e = by.entry(w.len()).or_default();
                e.0 += 1;
                if !whitney_check(w).passes {
                    e.1 += 1;
                    if fails.len() < 10 {
                        fails.push(w.dirs.clone());
                    }
                }
            }
            (by.into_iter().map(|(k, (n, f))| (k, n, f)).collect(), fails)
        };
        for &(len, n, f) in &by_len {
            rep.rows.push(Row::series(len, n, "whitney", vec![format!("failed={f}")]));
        }
        rep.check("whitney_all_pass", by_len.iter().all(|t| t.2 == 0));
        rep.diag("whitney_checked", by_len.iter().map(|t| t.1).sum::<u64>());
        rep.diag("whitney_failures", failures);
    }
    rep.finish(false, false);
    Ok(rep)
}
