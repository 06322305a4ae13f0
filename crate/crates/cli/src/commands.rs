use std::io::Write;

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use curvaspec::dynamics::{integrate_trajectory, Termination};
use curvaspec::oracle::{compare_spectra, CompareOptions, RadialGrid};
use curvaspec::quantization::Dimension;
use curvaspec::spectrum::{admissible_levels_with, hypergeometric_params, max_admissible_n, Eigenstate, Hypergeometric};
use curvaspec::verify::{run_suite, Suite, VerifyOptions};
use curvaspec::{Curvature, DynamicsParams, EnergyBranch, Level, PhaseState, PhysicalScales, RadialPoint};

use crate::config::Config;
use crate::output::{float_json, Cell, Format, Table};
use crate::{BranchArg, Cli, Command, OracleArgs, SpectrumArgs, SweepArgs, TrajectoryArgs, VerifyArgs, WavefunctionArgs};

/// Settings shared by every command after merging flags, config and defaults.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub branch: EnergyBranch,
    pub file: Config,
}

impl RunConfig {
    fn kappa(&self, flag: Option<f64>) -> Result<Curvature> {
        let k = self.file.resolve(flag, "kappa", 0.0)?;
        Ok(Curvature::new(k)?)
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    let file = Config::discover(cli.config.as_deref())?;
    let format = file.resolve(cli.format, "format", Format::Csv)?;
    let branch = match cli.energy_branch {
        Some(BranchArg::Printed) => EnergyBranch::AsPrinted,
        _ => EnergyBranch::Corrected,
    };
    let cfg = RunConfig { format, branch, file };
    match &cli.command {
        Command::Spectrum(a) => spectrum(&cfg, a, out),
        Command::Wavefunction(a) => wavefunction(&cfg, a, out),
        Command::Verify(a) => verify(&cfg, a, out),
        Command::Sweep(a) => sweep(&cfg, a, out),
        Command::Oracle(a) => oracle(&cfg, a, out),
        Command::Trajectory(a) => trajectory(&cfg, a, out),
    }
}

fn emit(cfg: &RunConfig, table: &Table, tolerances: Map<String, Value>, out: &mut dyn Write) -> Result<()> {
    table.write(cfg.format, &tolerances, out)
}

fn tolerances(pairs: &[(&str, f64)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), float_json(*v))).collect()
}

fn parse_scales(text: &str) -> Result<PhysicalScales> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number '{p}' in --physical")))
        .collect::<Result<_>>()?;
    let [hbar, mass, omega] = parts[..] else {
        bail!("--physical expects HBAR,MASS,OMEGA, got '{text}'");
    };
    Ok(PhysicalScales::new(hbar, mass, omega)?)
}

fn branch_name(b: EnergyBranch) -> &'static str {
    match b {
        EnergyBranch::Corrected => "corrected",
        EnergyBranch::AsPrinted => "printed",
    }
}

fn spectrum(cfg: &RunConfig, a: &SpectrumArgs, out: &mut dyn Write) -> Result<u8> {
    let levels = cfg.file.resolve(a.levels, "levels", 5)?;
    let m_max = cfg.file.resolve_opt(a.m_max, "m_max")?;
    let physical = cfg.file.resolve_opt(a.physical.clone(), "physical")?;
    let scales = physical.as_deref().map(parse_scales).transpose()?;
    let k_in = cfg.file.resolve(a.kappa, "kappa", 0.0)?;
    let kappa = match &scales {
        Some(s) => Curvature::new(s.to_dimensionless(Dimension::Curvature, k_in))?,
        None => Curvature::new(k_in)?,
    };

    let mut inputs = Map::new();
    inputs.insert("kappa".into(), float_json(k_in));
    inputs.insert("levels".into(), json!(levels));
    inputs.insert("m_max".into(), json!(m_max));
    if let Some(s) = &scales {
        inputs.insert("physical".into(), json!([float_json(s.hbar), float_json(s.mass), float_json(s.omega)]));
    }
    let mut columns = vec!["N_r", "m", "n", "E_bar"];
    if scales.is_some() {
        columns.push("E_physical");
    }
    columns.push("degeneracy");
    let mut table = Table::new(columns, inputs);
    table.meta_float("kappa_dimensionless", kappa.value());
    table.meta("energy_branch", branch_name(cfg.branch));

    if levels > 0 {
        let found = admissible_levels_with(kappa, levels - 1, cfg.branch);
        for l in found.iter().filter(|l| m_max.map_or(true, |mm| l.beta <= mm)) {
            let mut row: Vec<Cell> = vec![l.nr.into(), l.m.into(), l.n.into(), l.e_bar.into()];
            if let Some(s) = &scales {
                row.push(s.from_dimensionless(Dimension::Energy, l.e_bar).into());
            }
            row.push(l.degeneracy().into());
            table.push(row);
        }
        match max_admissible_n(kappa) {
            Ok(Some(top)) if top + 1 < levels => {
                table.meta(
                    "notice",
                    format!(
                        "kappa={} admits only {} energy levels (n <= {top}); the list is the complete bound set",
                        kappa.value(),
                        top + 1
                    ),
                );
            }
            Err(_) => {
                table.meta("notice", format!("kappa={} admits no bound states", kappa.value()));
            }
            _ => {}
        }
    }
    emit(cfg, &table, tolerances(&[]), out)?;
    Ok(0)
}

fn wavefunction(cfg: &RunConfig, a: &WavefunctionArgs, out: &mut dyn Write) -> Result<u8> {
    let kappa = cfg.kappa(a.kappa)?;
    let samples = cfg.file.resolve(a.samples, "samples", 100)?;
    if samples == 0 {
        bail!(curvaspec::Error::Parameter("--samples must be at least 1".into()));
    }
    let default_rmax = kappa.boundary_radius().map_or(4.0, |b| (0.99 * b).min(4.0));
    let rmax = cfg.file.resolve(a.rmax, "rmax", default_rmax)?;
    kappa.check_radius(rmax)?;
    let level = Level::with_branch(kappa, a.nr, a.m, cfg.branch)?;
    let normalized = Eigenstate::normalized(level)?;
    let state = if a.normalized { normalized.clone() } else { Eigenstate::new(level)? };

    let mut inputs = Map::new();
    inputs.insert("kappa".into(), float_json(kappa.value()));
    inputs.insert("nr".into(), json!(a.nr));
    inputs.insert("m".into(), json!(a.m));
    inputs.insert("rmax".into(), float_json(rmax));
    inputs.insert("samples".into(), json!(samples));
    inputs.insert("normalized".into(), json!(a.normalized));
    let mut table = Table::new(vec!["r", "R"], inputs);
    table.meta_float("E_bar", level.e_bar);
    table.meta_float("q", level.q);
    match level.s {
        Some(s) => table.meta_float("s", s),
        None => table.meta("s", Value::Null),
    }
    match level.hyper {
        Hypergeometric::Gauss { .. } => {
            let (ha, hb, hc) = hypergeometric_params(&level)?;
            table.meta("hypergeometric", "2F1(a, b; c; -kappa r^2)");
            table.meta_float("a", ha);
            table.meta_float("b", hb);
            table.meta_float("c", hc);
        }
        Hypergeometric::Kummer { a: ka, c } => {
            table.meta("hypergeometric", "M(a; c; r^2)");
            table.meta_float("a", ka);
            table.meta_float("c", c);
        }
    }
    table.meta_float("C", normalized.scale);
    for i in 0..=samples {
        let r = rmax * i as f64 / samples as f64;
        let value = state.radial(RadialPoint::from_projective(kappa, r));
        table.push(vec![r.into(), value.into()]);
    }
    emit(cfg, &table, tolerances(&[("normalization", 1e-12)]), out)?;
    Ok(0)
}

fn verify(cfg: &RunConfig, a: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let seed = cfg.file.resolve(a.seed, "seed", 42)?;
    let suites: Vec<Suite> = if a.suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let options = VerifyOptions { seed, branch: cfg.branch };

    let mut inputs = Map::new();
    inputs.insert("suite".into(), json!(a.suite.to_ascii_lowercase()));
    inputs.insert("seed".into(), json!(seed));
    let mut table = Table::new(vec!["suite", "check", "worst", "tolerance", "status", "note"], inputs);
    table.meta("energy_branch", branch_name(cfg.branch));
    let mut tols = Map::new();
    let mut comparisons = Vec::new();
    let mut all_passed = true;
    for suite in suites {
        let report = run_suite(suite, &options);
        all_passed &= report.passed();
        for c in &report.checks {
            tols.insert(format!("{suite}/{}", c.name), float_json(c.tolerance));
            table.push(vec![
                suite.name().into(),
                c.name.as_str().into(),
                c.worst.into(),
                c.tolerance.into(),
                if c.passed { "PASS" } else { "FAIL" }.into(),
                c.note.as_str().into(),
            ]);
        }
        for comp in &report.comparisons {
            for row in &comp.rows {
                comparisons.push(json!({
                    "kappa": float_json(comp.kappa.value()),
                    "beta": comp.beta,
                    "N_r": row.nr,
                    "E_closed": float_json(row.closed),
                    "E_oracle": float_json(row.oracle_fine),
                    "rel_err": float_json(row.rel_err),
                    "rel_err_richardson": float_json(row.rel_err_extrapolated),
                }));
            }
        }
    }
    if !comparisons.is_empty() {
        table.meta("comparisons", Value::Array(comparisons));
    }
    table.meta("result", if all_passed { "PASS" } else { "FAIL" });
    emit(cfg, &table, tols, out)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn sweep(cfg: &RunConfig, a: &SweepArgs, out: &mut dyn Write) -> Result<u8> {
    if !(a.kappa_min.is_finite() && a.kappa_max.is_finite()) || a.kappa_min > a.kappa_max {
        bail!(curvaspec::Error::Parameter(format!(
            "need finite kappa-min <= kappa-max, got [{}, {}]",
            a.kappa_min, a.kappa_max
        )));
    }
    let mut inputs = Map::new();
    inputs.insert("kappa_min".into(), float_json(a.kappa_min));
    inputs.insert("kappa_max".into(), float_json(a.kappa_max));
    inputs.insert("steps".into(), json!(a.steps));
    inputs.insert("nr".into(), json!(a.nr));
    inputs.insert("m".into(), json!(a.m));
    let mut table = Table::new(vec!["kappa", "E_bar", "admissible"], inputs);
    table.meta("n", 2 * a.nr + a.m.unsigned_abs());
    for i in 0..=a.steps {
        let k = if a.steps == 0 {
            a.kappa_min
        } else {
            a.kappa_min + (a.kappa_max - a.kappa_min) * f64::from(i) / f64::from(a.steps)
        };
        let kappa = Curvature::new(k)?;
        match Level::with_branch(kappa, a.nr, a.m, cfg.branch) {
            Ok(l) => table.push(vec![k.into(), l.e_bar.into(), true.into()]),
            Err(curvaspec::Error::NotAdmissible { .. }) => table.push(vec![k.into(), Cell::Empty, false.into()]),
            Err(e) => return Err(e.into()),
        }
    }
    emit(cfg, &table, tolerances(&[]), out)?;
    Ok(0)
}

fn oracle(cfg: &RunConfig, a: &OracleArgs, out: &mut dyn Write) -> Result<u8> {
    let kappa = cfg.kappa(a.kappa)?;
    let tol = cfg.file.resolve(a.tolerance, "tolerance", 1e-4)?;
    let points = cfg.file.resolve_opt(a.points, "points")?;
    let rho_max = cfg.file.resolve_opt(a.rho_max, "rho_max")?;
    let grid = match (points, rho_max) {
        (None, None) => None,
        (p, r) => {
            let default = RadialGrid::for_curvature(kappa);
            Some(RadialGrid::new(kappa, r.unwrap_or(default.rho_max), p.unwrap_or(default.n_points))?)
        }
    };
    let options = CompareOptions { grid, branch: cfg.branch, ..CompareOptions::default() };
    let comparison = compare_spectra(kappa, a.beta, a.count, &options)?;

    let mut inputs = Map::new();
    inputs.insert("kappa".into(), float_json(kappa.value()));
    inputs.insert("beta".into(), json!(a.beta));
    inputs.insert("count".into(), json!(a.count));
    let mut table = Table::new(
        vec!["N_r", "E_closed", "E_oracle_h", "E_oracle_h2", "E_richardson", "abs_err", "rel_err", "rel_err_richardson"],
        inputs,
    );
    let g = comparison.grid;
    table.meta_float("rho_max", g.rho_max);
    table.meta("n_points", g.n_points);
    table.meta_float("h", g.h);
    table.meta("energy_branch", branch_name(cfg.branch));
    if let Some(count) = comparison.oracle_bound_count {
        table.meta("oracle_bound_states", count);
        table.meta("closed_form_bound_states", comparison.rows.len());
    }
    for r in &comparison.rows {
        table.push(vec![
            r.nr.into(),
            r.closed.into(),
            r.oracle_coarse.into(),
            r.oracle_fine.into(),
            r.extrapolated.into(),
            r.abs_err.into(),
            r.rel_err.into(),
            r.rel_err_extrapolated.into(),
        ]);
    }
    let worst = comparison.max_rel_err();
    table.meta_float("max_rel_err", worst);
    let ok = worst < tol && comparison.bound_count_matches();
    table.meta("result", if ok { "PASS" } else { "FAIL" });
    emit(cfg, &table, tolerances(&[("rel_err", tol), ("domain", options.domain_tol)]), out)?;
    Ok(if ok { 0 } else { 1 })
}

fn trajectory(cfg: &RunConfig, a: &TrajectoryArgs, out: &mut dyn Write) -> Result<u8> {
    let kappa = cfg.kappa(a.kappa)?;
    let alpha = cfg.file.resolve(a.alpha, "alpha", 1.0)?;
    let mass = cfg.file.resolve(a.mass, "mass", 1.0)?;
    let t_end = cfg.file.resolve(a.t_end, "t_end", 10.0)?;
    let dt = cfg.file.resolve(a.dt, "dt", 1e-3)?;
    if a.every == 0 {
        bail!(curvaspec::Error::Parameter("--every must be at least 1".into()));
    }
    let params = DynamicsParams::with_mass(kappa, alpha, mass)?;
    let start = PhaseState::new(a.r, a.phi, a.pr, a.pphi);
    let traj = integrate_trajectory(&params, start, t_end, dt)?;

    let mut inputs = Map::new();
    for (key, v) in [
        ("kappa", kappa.value()),
        ("alpha", alpha),
        ("mass", mass),
        ("r", a.r),
        ("phi", a.phi),
        ("pr", a.pr),
        ("pphi", a.pphi),
        ("t_end", t_end),
        ("dt", dt),
    ] {
        inputs.insert(key.into(), float_json(v));
    }
    let mut table = Table::new(vec!["t", "r", "phi", "p_r", "p_phi", "H", "J", "P1", "P2"], inputs);
    let drift = traj.max_drift();
    table.meta(
        "termination",
        match traj.termination {
            Termination::Completed => "completed",
            Termination::DomainExit => "domain_exit",
        },
    );
    table.meta_float("drift_H", drift.h);
    table.meta_float("drift_J", drift.j);
    table.meta_float("drift_P1", drift.p1);
    table.meta_float("drift_P2", drift.p2);
    let last = traj.samples.len() - 1;
    for (i, s) in traj.samples.iter().enumerate() {
        if i % a.every != 0 && i != last {
            continue;
        }
        let inv = s.invariants;
        table.push(vec![
            s.t.into(),
            s.state.r.into(),
            s.state.phi.into(),
            s.state.p_r.into(),
            s.state.p_phi.into(),
            inv.h.into(),
            inv.j.into(),
            inv.p1.into(),
            inv.p2.into(),
        ]);
    }
    emit(cfg, &table, tolerances(&[]), out)?;
    Ok(0)
}
