//! The five experiment pipelines. Each grid point is an independent task;
//! results come back in input order whatever the worker count.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Value};

use qbattery_core::fit::{linear_fit, power_law_fit};
use qbattery_core::floquet::{DrivenChain, FloquetSystem};
use qbattery_core::integrable::{distance_from_scalar, floquet_su2, resonance_frequencies, ModeSet, Resonance};
use qbattery_core::magnus::{magnus_error, transcription_deviation, ORACLE_MAX_SITES};
use qbattery_core::{Error, StroboscopicRecord};

use crate::config::{Engine, ExperimentConfig, ExperimentKind};
use crate::output::{Cell, Table, BUILD};

pub struct ExperimentResult {
    pub table: Table,
    pub summary: Value,
}

const ENGINE_INTEGRABLE: &str = "integrable";
const ENGINE_ED: &str = "ed";

fn par_map<T: Sync, R: Send>(
    pool: &rayon::ThreadPool,
    items: &[T],
    f: impl Fn(&T) -> Result<R, Error> + Sync + Send,
) -> Result<Vec<R>, Error> {
    pool.install(|| items.par_iter().map(f).collect())
}

fn prefix(cfg: &ExperimentConfig, engine: &str) -> Vec<Cell> {
    vec![
        cfg.experiment.as_str().into(),
        engine.into(),
        cfg.boundary().as_str().into(),
        cfg.params.h_z.into(),
        cfg.params.j0.into(),
        cfg.params.h0.into(),
    ]
}

fn header(tail: &[&str]) -> Table {
    let mut h = vec!["experiment", "engine", "boundary", "h_z", "j0", "h0"];
    h.extend_from_slice(tail);
    h.push("build");
    Table::new(&h)
}

fn row(cfg: &ExperimentConfig, engine: &str, tail: Vec<Cell>) -> Vec<Cell> {
    let mut r = prefix(cfg, engine);
    r.extend(tail);
    r.push(BUILD.into());
    r
}

fn record_cells(r: &StroboscopicRecord) -> Vec<Cell> {
    vec![
        r.n.into(),
        r.energy.into(),
        r.power.into(),
        r.var_battery.into(),
        r.var_charging.into(),
        r.power_commutator.into(),
        r.bound_slack.into(),
    ]
}

const RECORD_COLUMNS: [&str; 7] = [
    "n",
    "energy",
    "power",
    "var_battery",
    "var_charging",
    "power_commutator",
    "bound_slack",
];

fn engines(engine: Engine) -> Vec<&'static str> {
    let mut e = Vec::new();
    if engine.uses_integrable() {
        e.push(ENGINE_INTEGRABLE);
    }
    if engine.uses_ed() {
        e.push(ENGINE_ED);
    }
    e
}

pub fn run_experiment(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<ExperimentResult, Error> {
    match cfg.experiment {
        ExperimentKind::SweepFrequency => sweep_frequency(cfg, pool),
        ExperimentKind::BandwidthScan => bandwidth_scan(cfg, pool),
        ExperimentKind::PowerScaling => power_scaling(cfg, pool),
        ExperimentKind::MagnusCheck => magnus_check(cfg, pool),
        ExperimentKind::StroboscopicTrace => stroboscopic_trace(cfg, pool),
    }
}

/// Indices where the discrete slope changes sign.
pub fn local_extrema(values: &[f64]) -> Vec<(usize, &'static str)> {
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b) = (values[i] - values[i - 1], values[i + 1] - values[i]);
        if a > 0.0 && b < 0.0 {
            out.push((i, "max"));
        } else if a < 0.0 && b > 0.0 {
            out.push((i, "min"));
        }
    }
    out
}

fn sweep_frequency(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<ExperimentResult, Error> {
    let mut omegas = cfg.omegas();
    omegas.sort_by(f64::total_cmp);
    let num_sites = cfg.sites()[0];
    let n = cfg.n();
    let engines = engines(cfg.engine);

    let per_omega = par_map(pool, &omegas, |&omega| {
        let spec = cfg.chain(num_sites, omega);
        let mut recs = Vec::new();
        for &e in &engines {
            let r = if e == ENGINE_INTEGRABLE {
                ModeSet::new(&spec.params)?.observables(n)?
            } else {
                *FloquetSystem::new(&spec)?
                    .stroboscopic_series(n)?
                    .last()
                    .expect("n >= 1")
            };
            recs.push(r);
        }
        Ok(recs)
    })?;

    let mut cols = vec!["num_sites", "omega", "period"];
    cols.extend(RECORD_COLUMNS);
    let mut table = header(&cols);
    for (ei, &e) in engines.iter().enumerate() {
        for (&omega, recs) in omegas.iter().zip(&per_omega) {
            let mut tail = vec![num_sites.into(), omega.into(), (2.0 * PI / omega).into()];
            tail.extend(record_cells(&recs[ei]));
            table.push(row(cfg, e, tail));
        }
    }

    let step = if omegas.len() > 1 {
        (omegas[omegas.len() - 1] - omegas[0]) / (omegas.len() - 1) as f64
    } else {
        0.0
    };
    let mut engine_summaries = serde_json::Map::new();
    for (ei, &e) in engines.iter().enumerate() {
        let energy: Vec<f64> = per_omega.iter().map(|r| r[ei].energy).collect();
        let var_b: Vec<f64> = per_omega.iter().map(|r| r[ei].var_battery).collect();
        let extrema = local_extrema(&energy);
        let ext_omegas: Vec<f64> = extrema.iter().map(|&(i, _)| omegas[i]).collect();
        let resonances: Vec<Value> = resonance_frequencies(cfg.params.h_z, omegas[0], omegas[omegas.len() - 1])
            .into_iter()
            .map(|(w, kind)| {
                let nearest = ext_omegas
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - w).abs().total_cmp(&(b - w).abs()));
                let scalar = match kind {
                    Resonance::Identity => 1.0,
                    Resonance::MinusIdentity => -1.0,
                };
                let p = cfg.chain(num_sites, w).params;
                let deviation = distance_from_scalar(&floquet_su2(0.0, &p), scalar)
                    .max(distance_from_scalar(&floquet_su2(PI, &p), scalar));
                json!({
                    "omega": w,
                    "boundary_modes": if scalar > 0.0 { "identity" } else { "minus-identity" },
                    "boundary_mode_deviation": deviation,
                    "nearest_extremum": nearest,
                    "distance_in_steps": nearest.map(|x| if step > 0.0 { (x - w).abs() / step } else { 0.0 }),
                })
            })
            .collect();
        engine_summaries.insert(
            e.to_string(),
            json!({
                "energy_extrema": extrema.iter().map(|&(i, k)| json!({"omega": omegas[i], "kind": k})).collect::<Vec<_>>(),
                "var_battery_extrema": local_extrema(&var_b).iter().map(|&(i, k)| json!({"omega": omegas[i], "kind": k})).collect::<Vec<_>>(),
                "resonances": resonances,
            }),
        );
    }
    let mut summary = json!({ "grid_step": step, "engines": engine_summaries });
    if engines.len() == 2 {
        let diff = per_omega
            .iter()
            .map(|r| (r[0].energy - r[1].energy).abs())
            .fold(0.0, f64::max);
        summary["max_engine_energy_difference"] = json!(diff);
    }
    Ok(ExperimentResult { table, summary })
}

fn bandwidth_scan(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<ExperimentResult, Error> {
    let omegas = cfg.omegas();
    let mut sites = cfg.sites();
    sites.sort_unstable();
    let tasks: Vec<(f64, usize)> = omegas
        .iter()
        .flat_map(|&w| sites.iter().map(move |&n| (w, n)))
        .collect();
    let widths = par_map(pool, &tasks, |&(w, n)| Ok(FloquetSystem::new(&cfg.chain(n, w))?.bandwidth()))?;

    let mut table = header(&["num_sites", "omega", "bandwidth", "two_pi_over_t"]);
    for (&(w, n), &width) in tasks.iter().zip(&widths) {
        table.push(row(cfg, ENGINE_ED, vec![n.into(), w.into(), width.into(), w.into()]));
    }

    let fraction = cfg.saturation_fraction();
    let mut per_omega = Vec::new();
    for (wi, &w) in omegas.iter().enumerate() {
        let ws = &widths[wi * sites.len()..(wi + 1) * sites.len()];
        // branch width 2π/T equals ω
        let pre: usize = ws.iter().take_while(|&&x| x < fraction * w).count();
        let x: Vec<f64> = sites[..pre].iter().map(|&n| n as f64).collect();
        let fit = linear_fit(&x, &ws[..pre]).ok();
        per_omega.push(json!({
            "omega": w,
            "two_pi_over_t": w,
            "fitted_sites": &sites[..pre],
            "slope": fit.map(|f| f.slope),
            "intercept": fit.map(|f| f.intercept),
            "r_squared": fit.map(|f| f.r_squared),
            "max_width_over_branch": ws.iter().fold(0.0f64, |m, &x| m.max(x / w)),
            "within_branch": ws.iter().all(|&x| x <= w + 1e-9),
        }));
    }
    Ok(ExperimentResult {
        table,
        summary: json!({ "saturation_fraction": fraction, "frequencies": per_omega }),
    })
}

fn power_scaling(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<ExperimentResult, Error> {
    let omegas = cfg.omegas();
    let mut sites = cfg.sites();
    sites.sort_unstable();
    let n_max = cfg.n_max();
    let per_size = par_map(pool, &sites, |&n| {
        let chain = DrivenChain::new(&cfg.chain(n, omegas[0]))?;
        omegas.iter().map(|&w| chain.max_power(w, n_max)).collect::<Result<Vec<_>, _>>()
    })?;

    let mut table = header(&["num_sites", "omega", "n_max", "n_star", "p_star"]);
    for (wi, &w) in omegas.iter().enumerate() {
        for (&n, best) in sites.iter().zip(&per_size) {
            let (n_star, p_star) = best[wi];
            table.push(row(cfg, ENGINE_ED, vec![n.into(), w.into(), n_max.into(), n_star.into(), p_star.into()]));
        }
    }
    let mut per_omega = Vec::new();
    for (wi, &w) in omegas.iter().enumerate() {
        let x: Vec<f64> = sites.iter().map(|&n| n as f64).collect();
        let y: Vec<f64> = per_size.iter().map(|b| b[wi].1).collect();
        let fit = power_law_fit(&x, &y)?;
        per_omega.push(json!({
            "omega": w,
            "exponent": fit.slope,
            "log_prefactor": fit.intercept,
            "r_squared": fit.r_squared,
            "rms_residual": fit.rms_residual,
        }));
    }
    Ok(ExperimentResult {
        table,
        summary: json!({ "n_max": n_max, "frequencies": per_omega }),
    })
}

fn magnus_check(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<ExperimentResult, Error> {
    let n = cfg.sites()[0];
    let orders = cfg.orders();
    let periods = cfg.grid.periods.clone().unwrap_or_default();
    let tasks: Vec<(usize, f64)> = orders
        .iter()
        .flat_map(|&o| periods.iter().map(move |&t| (o, t)))
        .collect();
    let errors = par_map(pool, &tasks, |&(o, t)| magnus_error(&cfg.chain(n, 2.0 * PI / t), o))?;

    let mut table = header(&["num_sites", "order", "period", "omega", "rel_error"]);
    for (&(o, t), &e) in tasks.iter().zip(&errors) {
        table.push(row(cfg, ENGINE_ED, vec![n.into(), o.into(), t.into(), (2.0 * PI / t).into(), e.into()]));
    }

    let mut per_order = Vec::new();
    for (oi, &o) in orders.iter().enumerate() {
        let errs = &errors[oi * periods.len()..(oi + 1) * periods.len()];
        let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
        let fit = power_law_fit(&periods, errs).ok();
        per_order.push(json!({
            "order": o,
            "nominal_ratio": 2f64.powi(o as i32 + 1),
            "ratios": ratios,
            "exponent": fit.map(|f| f.slope),
        }));
    }
    let mut summary = json!({ "orders": per_order });
    if n <= ORACLE_MAX_SITES && cfg.boundary == crate::config::BoundaryName::Periodic {
        let spec = cfg.chain(n, 2.0 * PI / periods[0]);
        let audit = orders
            .iter()
            .map(|&o| Ok(json!({ "order": o, "max_deviation": transcription_deviation(&spec, o)? })))
            .collect::<Result<Vec<_>, Error>>()?;
        summary["transcription_audit"] = json!(audit);
    }
    Ok(ExperimentResult { table, summary })
}

fn stroboscopic_trace(cfg: &ExperimentConfig, pool: &rayon::ThreadPool) -> Result<ExperimentResult, Error> {
    let omegas = cfg.omegas();
    let sites = cfg.sites();
    let n_max = cfg.n_max();
    let engines = engines(cfg.engine);
    let tasks: Vec<(usize, f64)> = sites
        .iter()
        .flat_map(|&n| omegas.iter().map(move |&w| (n, w)))
        .collect();
    let traces = par_map(pool, &tasks, |&(n, w)| {
        let spec = cfg.chain(n, w);
        engines
            .iter()
            .map(|&e| {
                if e == ENGINE_INTEGRABLE {
                    let modes = ModeSet::new(&spec.params)?;
                    (1..=n_max).map(|k| modes.observables(k)).collect()
                } else {
                    FloquetSystem::new(&spec)?.stroboscopic_series(n_max)
                }
            })
            .collect::<Result<Vec<Vec<StroboscopicRecord>>, Error>>()
    })?;

    let mut cols = vec!["num_sites", "omega", "period"];
    cols.extend(RECORD_COLUMNS);
    let mut table = header(&cols);
    let mut points = Vec::new();
    for (&(n, w), trace) in tasks.iter().zip(&traces) {
        let mut per_engine = serde_json::Map::new();
        for (ei, &e) in engines.iter().enumerate() {
            for r in &trace[ei] {
                let mut tail = vec![n.into(), w.into(), (2.0 * PI / w).into()];
                tail.extend(record_cells(r));
                table.push(row(cfg, e, tail));
            }
            let best = trace[ei]
                .iter()
                .fold(None::<&StroboscopicRecord>, |b, r| match b {
                    Some(b) if r.power <= b.power => Some(b),
                    _ => Some(r),
                })
                .expect("n_max >= 1");
            per_engine.insert(
                e.to_string(),
                json!({
                    "n_star": best.n,
                    "p_star": best.power,
                    "min_energy": trace[ei].iter().map(|r| r.energy).fold(f64::INFINITY, f64::min),
                    "min_bound_slack": trace[ei].iter().map(|r| r.bound_slack).fold(f64::INFINITY, f64::min),
                }),
            );
        }
        let mut point = json!({ "num_sites": n, "omega": w, "engines": per_engine });
        if engines.len() == 2 {
            let diff = |f: fn(&StroboscopicRecord) -> f64| {
                trace[0]
                    .iter()
                    .zip(&trace[1])
                    .map(|(a, b)| (f(a) - f(b)).abs())
                    .fold(0.0, f64::max)
            };
            point["max_energy_difference"] = json!(diff(|r| r.energy));
            point["max_var_battery_difference"] = json!(diff(|r| r.var_battery));
        }
        points.push(point);
    }
    Ok(ExperimentResult {
        table,
        summary: json!({ "n_max": n_max, "points": points }),
    })
}
