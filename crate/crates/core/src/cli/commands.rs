use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::args::{Format, TauArgs};
use super::config::RunConfig;
use super::output::{self, num, opt, CsvTable};
use crate::error::{Error, Result};
use crate::exact::{exact_flux, exact_u, ProblemSpec};
use crate::hdg::{solve_hdg, HdgSolution};
use crate::mesh::{build_dual, uniform_mesh};
use crate::metrics::{error_report, observed_order, ErrorReport};
use crate::sgfv::solve_sg;
use crate::stabilization::{delta_closed_form, delta_numeric, resolve_tau, TauChoice, TauSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything a single solve produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub version: String,
    pub config: RunConfig,
    pub stabilization: TauChoice,
    pub nodes: Vec<f64>,
    pub trace: Vec<f64>,
    pub exact: Vec<f64>,
    pub u_coeffs: Vec<Vec<f64>>,
    pub flux_coeffs: Vec<Vec<f64>>,
    pub sg_values: Option<Vec<f64>>,
    pub sg_discrepancy: Option<f64>,
    pub errors: ErrorReport,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauRecord {
    pub version: String,
    pub k: usize,
    pub alpha: f64,
    pub h: f64,
    pub peclet: f64,
    pub delta: f64,
    pub delta_closed_form: Option<f64>,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRecord {
    pub version: String,
    pub config: RunConfig,
    pub stabilization: TauChoice,
    pub discrepancy: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    pub errors: Option<ErrorReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub version: String,
    pub config: RunConfig,
    pub reference: Option<TauChoice>,
    pub nearest_index: Option<usize>,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub cells: usize,
    pub stabilization: TauChoice,
    pub errors: ErrorReport,
    pub order_trace_linf: Option<f64>,
    pub order_u_l2: Option<f64>,
    pub order_midpoint_linf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub version: String,
    pub config: RunConfig,
    pub rows: Vec<ConvergenceRow>,
}

fn report(sol: &HdgSolution) -> ErrorReport {
    let p = sol.problem;
    error_report(
        sol,
        |x| exact_u(&p, x).unwrap_or(f64::NAN),
        Some(&|x| exact_flux(&p, x).unwrap_or(f64::NAN)),
    )
}

fn solve_one(
    p: &ProblemSpec,
    cells: usize,
    k: usize,
    tau: TauSpec,
) -> Result<(TauChoice, HdgSolution)> {
    let mesh = uniform_mesh(p.domain, cells)?;
    let choice = resolve_tau(tau, k, mesh.h(), p.alpha, p.beta)?;
    let sol = solve_hdg(p, &mesh, k, choice.tau)?;
    Ok((choice, sol))
}

/// `(max_i |u_hat_i - v_i|, max(1, max_i |v_i|), v)`
fn sg_discrepancy(sol: &HdgSolution) -> Result<(f64, f64, Vec<f64>)> {
    let sg = solve_sg(&sol.problem, &build_dual(&sol.mesh))?;
    let d = sol
        .trace
        .iter()
        .zip(&sg.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = sg.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok((d, scale, sg.values))
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::param(format!("cannot start worker threads: {e}")))
}

fn config_meta(t: &mut CsvTable, c: &RunConfig) {
    t.meta("sghdg", VERSION);
    t.meta(
        "config",
        serde_json::to_string(c).expect("config serializes"),
    );
    t.meta("k", c.k);
    t.meta("alpha", num(c.problem.alpha));
    t.meta("beta", num(c.problem.beta));
    t.meta("f", num(c.problem.f));
    t.meta(
        "bc",
        format!("{},{}", num(c.problem.u_left), num(c.problem.u_right)),
    );
    t.meta(
        "domain",
        format!("{},{}", num(c.problem.domain.0), num(c.problem.domain.1)),
    );
    t.meta("tau_spec", c.tau);
}

fn choice_meta(t: &mut CsvTable, c: &TauChoice) {
    t.meta("h", num(c.peclet.h));
    t.meta("peclet", num(c.peclet.value));
    t.meta("delta", num(c.delta));
    t.meta("tau", num(c.tau));
}

pub fn solve(c: &RunConfig) -> Result<ResultRecord> {
    let start = Instant::now();
    let (choice, sol) = solve_one(&c.problem, c.cells[0], c.k, c.tau)?;
    let errors = report(&sol);
    let (sg_values, sg_discrepancy) = if c.with_sg {
        let (d, _, v) = sg_discrepancy(&sol)?;
        (Some(v), Some(d))
    } else {
        (None, None)
    };
    let exact = sol
        .mesh
        .nodes()
        .iter()
        .map(|&x| exact_u(&c.problem, x))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultRecord {
        version: VERSION.to_string(),
        config: c.clone(),
        stabilization: choice,
        nodes: sol.mesh.nodes().to_vec(),
        exact,
        sg_values,
        sg_discrepancy,
        errors,
        wall_time_s: start.elapsed().as_secs_f64(),
        trace: sol.trace,
        u_coeffs: sol.u_coeffs,
        flux_coeffs: sol.flux_coeffs,
    })
}

pub fn solve_csv(r: &ResultRecord) -> String {
    let mut header = vec!["x", "trace", "exact"];
    if r.sg_values.is_some() {
        header.push("sg");
    }
    let mut t = CsvTable::new(&header);
    config_meta(&mut t, &r.config);
    t.meta("cells", r.config.cells[0]);
    choice_meta(&mut t, &r.stabilization);
    t.meta("trace_linf", num(r.errors.trace_linf));
    t.meta("u_l2", num(r.errors.u_l2));
    t.meta("midpoint_linf", num(r.errors.midpoint_linf));
    for i in 0..r.nodes.len() {
        let mut row = vec![num(r.nodes[i]), num(r.trace[i]), num(r.exact[i])];
        if let Some(v) = &r.sg_values {
            row.push(num(v[i]));
        }
        t.row(row);
    }
    t.render()
}

pub fn tau(a: &TauArgs) -> Result<TauRecord> {
    if !(a.alpha > 0.0) || !a.alpha.is_finite() {
        return Err(Error::param("alpha must be positive"));
    }
    let h = match (a.h, a.peclet) {
        (Some(h), _) => h,
        (None, Some(_)) => 1.0,
        (None, None) => return Err(Error::param("either --h or --peclet is required")),
    };
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::param("h must be positive"));
    }
    if a.k > super::config::MAX_DEGREE {
        return Err(Error::param(format!(
            "k must be at most {}",
            super::config::MAX_DEGREE
        )));
    }
    let peclet = a.peclet.unwrap_or(a.beta * h / a.alpha);
    let delta = delta_numeric(a.k, peclet)?;
    let delta_closed = (a.k <= 4)
        .then(|| delta_closed_form(a.k, peclet))
        .transpose()?;
    Ok(TauRecord {
        version: VERSION.to_string(),
        k: a.k,
        alpha: a.alpha,
        h,
        peclet,
        delta,
        delta_closed_form: delta_closed,
        tau: a.alpha / h * delta,
    })
}

pub fn tau_text(r: &TauRecord) -> String {
    let mut s = format!(
        "k = {}\nh = {}\nP = {}\ndelta = {}\n",
        r.k,
        num(r.h),
        num(r.peclet),
        num(r.delta)
    );
    if let Some(d) = r.delta_closed_form {
        s += &format!("delta_closed_form = {}\n", num(d));
    }
    s += &format!("tau = {}\n", num(r.tau));
    s
}

pub fn sweep(c: &RunConfig) -> Result<SweepRecord> {
    let range = c.sweep.expect("sweep range");
    let cells = c.cells[0];
    let mesh = uniform_mesh(c.problem.domain, cells)?;
    let reference = match resolve_tau(
        TauSpec::Sg {
            degenerate_fallback: false,
        },
        c.k,
        mesh.h(),
        c.problem.alpha,
        c.problem.beta,
    ) {
        Ok(r) => Some(r),
        Err(e) => {
            log::warn!("no SG reference tau for this sweep: {e}");
            None
        }
    };
    let taus = range.values();
    let rows: Vec<SweepRow> = pool(c.jobs)?.install(|| {
        taus.par_iter()
            .map(|&tau| {
                let errors = match solve_hdg(&c.problem, &mesh, c.k, tau) {
                    Ok(sol) => Some(report(&sol)),
                    Err(e) => {
                        log::warn!("solve failed at tau = {tau:e}: {e}");
                        None
                    }
                };
                SweepRow { tau, errors }
            })
            .collect()
    });
    let nearest_index = reference.map(|r| {
        let target = r.tau.ln();
        (0..taus.len())
            .min_by(|&i, &j| {
                (taus[i].ln() - target)
                    .abs()
                    .total_cmp(&(taus[j].ln() - target).abs())
            })
            .unwrap_or(0)
    });
    Ok(SweepRecord {
        version: VERSION.to_string(),
        config: c.clone(),
        reference,
        nearest_index,
        rows,
    })
}

pub fn sweep_csv(r: &SweepRecord) -> String {
    let mut t = CsvTable::new(&["tau", "trace_linf", "u_l2", "midpoint_linf"]);
    config_meta(&mut t, &r.config);
    t.meta("cells", r.config.cells[0]);
    match &r.reference {
        Some(c) => {
            choice_meta(&mut t, c);
            t.meta("tau_k", num(c.tau));
        }
        None => t.meta("tau_k", "undefined"),
    }
    if let Some(i) = r.nearest_index {
        t.meta("nearest_row", i);
    }
    for row in &r.rows {
        let e = row.errors;
        t.row(vec![
            num(row.tau),
            opt(e.map(|e| e.trace_linf)),
            opt(e.map(|e| e.u_l2)),
            opt(e.map(|e| e.midpoint_linf)),
        ]);
    }
    t.render()
}

pub fn convergence(c: &RunConfig) -> Result<ConvergenceRecord> {
    let solved: Vec<Result<(TauChoice, ErrorReport)>> = pool(c.jobs)?.install(|| {
        c.cells
            .par_iter()
            .map(|&n| {
                let (choice, sol) = solve_one(&c.problem, n, c.k, c.tau)?;
                Ok((choice, report(&sol)))
            })
            .collect()
    });
    let solved = solved.into_iter().collect::<Result<Vec<_>>>()?;
    let orders = |f: fn(&ErrorReport) -> f64| -> Result<Vec<Option<f64>>> {
        let pts: Vec<_> = solved.iter().map(|(c, e)| (c.peclet.h, f(e))).collect();
        let mut o = observed_order(&pts)?;
        o.insert(0, None);
        Ok(o)
    };
    let ot = orders(|e| e.trace_linf)?;
    let ol = orders(|e| e.u_l2)?;
    let om = orders(|e| e.midpoint_linf)?;
    let rows = solved
        .into_iter()
        .enumerate()
        .map(|(i, (choice, errors))| ConvergenceRow {
            cells: c.cells[i],
            stabilization: choice,
            errors,
            order_trace_linf: ot[i],
            order_u_l2: ol[i],
            order_midpoint_linf: om[i],
        })
        .collect();
    Ok(ConvergenceRecord {
        version: VERSION.to_string(),
        config: c.clone(),
        rows,
    })
}

pub fn convergence_csv(r: &ConvergenceRecord) -> String {
    let mut t = CsvTable::new(&[
        "cells",
        "h",
        "peclet",
        "delta",
        "tau",
        "trace_linf",
        "u_l2",
        "midpoint_linf",
        "flux_l2",
        "order_trace_linf",
        "order_u_l2",
        "order_midpoint_linf",
    ]);
    config_meta(&mut t, &r.config);
    for row in &r.rows {
        let (s, e) = (&row.stabilization, &row.errors);
        t.row(vec![
            row.cells.to_string(),
            num(s.peclet.h),
            num(s.peclet.value),
            num(s.delta),
            num(s.tau),
            num(e.trace_linf),
            num(e.u_l2),
            num(e.midpoint_linf),
            opt(e.flux_l2),
            opt(row.order_trace_linf),
            opt(row.order_u_l2),
            opt(row.order_midpoint_linf),
        ]);
    }
    t.render()
}

pub fn compare(c: &RunConfig) -> Result<CompareRecord> {
    let (choice, sol) = solve_one(&c.problem, c.cells[0], c.k, c.tau)?;
    let (discrepancy, scale, _) = sg_discrepancy(&sol)?;
    let tolerance = c.tolerance.unwrap_or(1e-9);
    Ok(CompareRecord {
        version: VERSION.to_string(),
        config: c.clone(),
        stabilization: choice,
        discrepancy,
        scale,
        tolerance,
        passed: discrepancy <= tolerance * scale,
    })
}

pub fn compare_text(r: &CompareRecord) -> String {
    format!(
        "k = {}\ncells = {}\ntau = {}\nmax |u_hat - v| = {}\ntolerance = {}\nscale = {}\nstatus = {}\n",
        r.config.k,
        r.config.cells[0],
        num(r.stabilization.tau),
        num(r.discrepancy),
        num(r.tolerance),
        num(r.scale),
        if r.passed { "ok" } else { "exceeded" }
    )
}

pub fn compare_csv(r: &CompareRecord) -> String {
    let mut t = CsvTable::new(&["discrepancy", "scale", "tolerance", "passed"]);
    config_meta(&mut t, &r.config);
    t.meta("cells", r.config.cells[0]);
    choice_meta(&mut t, &r.stabilization);
    t.row(vec![
        num(r.discrepancy),
        num(r.scale),
        num(r.tolerance),
        r.passed.to_string(),
    ]);
    t.render()
}

pub fn tau_csv(r: &TauRecord) -> String {
    let mut t = CsvTable::new(&["k", "h", "peclet", "delta", "delta_closed_form", "tau"]);
    t.meta("sghdg", VERSION);
    t.meta("alpha", num(r.alpha));
    t.row(vec![
        r.k.to_string(),
        num(r.h),
        num(r.peclet),
        num(r.delta),
        opt(r.delta_closed_form),
        num(r.tau),
    ]);
    t.render()
}

pub fn render<T: Serialize>(format: Format, value: &T, csv: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Csv => csv(value),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("record serializes");
            s.push('\n');
            s
        }
    }
}

pub use output::{convergence_plot_script, sweep_plot_script};
