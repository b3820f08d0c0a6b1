//! The experiment registry and runners.
//!
//! Each runner reads the parts of the config it needs, writes its CSV
//! artifacts through the single [`ArtifactSink`] writer, and returns the
//! `results` section of the summary JSON. Replicates (seeds, table rows)
//! are scheduled on the rayon pool and reassembled by index, so artifact
//! bodies do not depend on thread count.

use levylab::kernels::{density_bound_check, ell_integral, script_l};
use levylab::mechanism::{
    doubling_report, estimate_exponents, phi_log, psi_inv, BranchingMechanism, GaugeFunction,
    LevyMeasure,
};
use levylab::packing::{packing_vs_mass_with, PackingGauge};
use levylab::realtree::{code_tree, CodedTree};
use levylab::samplers::{
    liminf_ratio, sample_contour_excursion, sample_subordinator, sample_walk_excursion_with,
    spine_laplace_row,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::artifacts::{fmt_f64, json_f64, toml_to_json, ArtifactSink};
use crate::config::LabConfig;
use crate::error::CliError;

/// Registered experiments: (name, one-line description, stochastic).
pub const EXPERIMENTS: &[(&str, &str, bool)] = &[
    ("mech-report", "tables of ψ, ψ′, ψ̃, ψ⁻¹, φ and the gauge g", false),
    ("kernels-check", "𝓛 route agreement, integral identity, density bound", false),
    ("doubling", "g(2r)/g(r) along dyadic or atom scales", false),
    ("counterexample", "exponent estimates and doubling blow-up of an atom series", false),
    ("spine-laplace", "Monte Carlo E[exp(−λM*_r)] against the kernel value", true),
    ("subliminf", "subordinator S_r/g(r) window minima across seeds", true),
    ("density", "ball-mass/gauge profiles on sampled trees", true),
    ("packing-ratio", "packing value vs mass over tree intervals", true),
];

pub fn names() -> Vec<&'static str> {
    EXPERIMENTS.iter().map(|e| e.0).collect()
}

/// Whether `name` is registered, and if so whether it consumes seeds.
pub fn stochastic(name: &str) -> Option<bool> {
    EXPERIMENTS.iter().find(|e| e.0 == name).map(|e| e.2)
}

/// Environment variable that overrides the config's output directory.
pub const OUTPUT_DIR_ENV: &str = "LEVYTREE_LAB_OUT";

/// Runs the configured experiment; returns the manifest path.
pub fn run(config: &LabConfig) -> Result<std::path::PathBuf, CliError> {
    let dir = std::env::var(OUTPUT_DIR_ENV).unwrap_or_else(|_| config.output_dir.clone());
    let mut sink = ArtifactSink::create(std::path::Path::new(&dir))?;
    let results = match config.experiment.as_str() {
        "mech-report" => mech_report(config, &mut sink)?,
        "kernels-check" => kernels_check(config, &mut sink)?,
        "doubling" => doubling(config, &mut sink)?,
        "counterexample" => counterexample(config, &mut sink)?,
        "spine-laplace" => spine_laplace(config, &mut sink)?,
        "subliminf" => subliminf(config, &mut sink)?,
        "density" => density(config, &mut sink)?,
        "packing-ratio" => packing_ratio(config, &mut sink)?,
        other => {
            return Err(CliError::Schema(format!("unknown experiment \"{other}\"")));
        }
    };
    let mut summary = Map::new();
    summary.insert(
        "tool".into(),
        json!({"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")}),
    );
    summary.insert("experiment".into(), Value::String(config.experiment.clone()));
    summary.insert("config".into(), toml_to_json(&toml::Value::Table(config.raw.clone())));
    summary.insert("results".into(), Value::Object(results));
    sink.write_json("summary.json", &Value::Object(summary))?;
    sink.finish(&config.experiment)
}

/// Samples one coded tree at the config's scales. γ = 2 uses the exact
/// fixed-size contour coding (vertex mass 1/p² ⟺ step duration 1/(2p²),
/// heights in units of 1/p); γ < 2 uses the rejection-sampled offspring
/// walk.
fn sample_tree(
    mech: &BranchingMechanism,
    walk_length: usize,
    scale_p: u32,
    seed: u64,
) -> Result<CodedTree, CliError> {
    let gamma = mech.stable_index().ok_or_else(|| {
        CliError::Runtime("tree sampling is only wired up for stable mechanisms".into())
    })?;
    let p = f64::from(scale_p);
    let path = if gamma == 2.0 {
        sample_contour_excursion(walk_length, 1.0 / (2.0 * p * p), 1.0 / p, seed)?
    } else {
        sample_walk_excursion_with(mech, scale_p, walk_length, Some(4 * walk_length), 100_000, seed)?
            .to_path()?
    };
    Ok(code_tree(path)?)
}

fn row_strings(cells: &[f64]) -> Vec<String> {
    cells.iter().map(|&x| fmt_f64(x)).collect()
}

/// Interpolated quantile of a sorted slice, q ∈ [0, 1].
fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

fn mech_report(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let n = config.scales.grid_points;
    let (lo, hi) = (1e-3f64.ln(), 1e6f64.ln());
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let lx = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let lambda = lx.exp();
        rows.push(row_strings(&[
            lambda,
            mech.psi(lambda),
            mech.psi_prime(lambda),
            mech.psi_tilde(lambda),
            psi_inv(&mech, lambda)?,
            phi_log(&mech, lx)?.exp(),
        ]));
    }
    sink.write_csv(
        "mech_tables.csv",
        &["lambda", "psi", "psi_prime", "psi_tilde", "psi_inv", "phi"],
        &rows,
    )?;

    let gauge = GaugeFunction::new(mech.clone());
    let mut gauge_rows = Vec::new();
    let mut skipped = 0usize;
    for j in 2..=config.scales.dyadic_depth {
        let r = f64::powi(2.0, -(j as i32));
        if r >= gauge.r0() {
            skipped += 1;
            continue;
        }
        match gauge.eval_log(r.ln()) {
            Ok(lg) => gauge_rows.push(row_strings(&[r, lg.exp(), lg])),
            Err(_) => skipped += 1,
        }
    }
    sink.write_csv("gauge.csv", &["r", "g", "log_g"], &gauge_rows)?;

    let mut out = Map::new();
    out.insert("lambda_rows".into(), json!(rows.len()));
    out.insert("gauge_rows".into(), json!(gauge_rows.len()));
    out.insert("gauge_rows_skipped".into(), json!(skipped));
    out.insert("gauge_r0".into(), json_f64(gauge.r0()));
    out.insert("extinction_holds".into(), json!(mech.extinction_holds()));
    Ok(out)
}

fn kernels_check(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let rtol = config.tolerances.identity_rtol;
    let r_grid = config.r_grid(&[0.01, 0.1, 1.0]);
    let l_grid = config.lambda_grid(&[0.5, 1.0, 10.0]);

    let mut rows = Vec::new();
    let mut max_discrepancy = 0.0f64;
    let mut max_identity_residual = 0.0f64;
    for &r in &r_grid {
        for &lambda in &l_grid {
            let s = script_l(&mech, r, lambda)?;
            // The value is e^{−x*} where x* solves ∫₀^x ds/φ(λ(1−e^{−s})) = r;
            // re-evaluating the integral at x* certifies the root.
            let back = ell_integral(&mech, lambda, s.minus_log)?;
            max_identity_residual = max_identity_residual.max((back - r).abs() / r);
            max_discrepancy = max_discrepancy.max(s.discrepancy);
            rows.push(row_strings(&[r, lambda, s.route_ode, s.route_integral, s.discrepancy]));
        }
    }
    sink.write_csv(
        "laplace_routes.csv",
        &["r", "lambda", "L_ode", "L_integral", "discrepancy"],
        &rows,
    )?;

    // The lower-bound check needs r deep enough that ln ln(2/r) ≥ 2, so it
    // keeps its own fixed grid rather than reusing the r_values override.
    let bound_radii: [f64; 5] = [1e-4, 1e-5, 1e-6, 1e-7, 1e-8];
    let mut bound_rows = Vec::new();
    let mut bound_all_pass = true;
    for &r in &bound_radii {
        let b = density_bound_check(&mech, r)?;
        bound_all_pass &= b.pass;
        bound_rows.push(vec![
            fmt_f64(b.r),
            fmt_f64(b.lhs_log),
            fmt_f64(b.rhs_log),
            b.pass.to_string(),
        ]);
    }
    sink.write_csv("density_bound.csv", &["r", "lhs_log", "rhs_log", "pass"], &bound_rows)?;

    let mut out = Map::new();
    out.insert(
        "integral_identity".into(),
        json!({
            "max_residual": json_f64(max_identity_residual),
            "rtol": json_f64(rtol),
            "pass": max_identity_residual <= rtol,
        }),
    );
    out.insert(
        "route_agreement".into(),
        json!({
            "max_discrepancy": json_f64(max_discrepancy),
            "rtol": json_f64(rtol),
            "pass": max_discrepancy <= rtol,
        }),
    );
    out.insert(
        "density_bound".into(),
        json!({"rows": bound_rows.len(), "all_pass": bound_all_pass}),
    );
    Ok(out)
}

/// Scales for the doubling probe: the mechanism's own atom radii when it
/// has them (that is where the blow-up lives), dyadic radii in the config
/// window otherwise.
fn doubling_scales(mech: &BranchingMechanism, config: &LabConfig) -> Vec<f64> {
    match &mech.measure {
        LevyMeasure::AtomList { atoms } => atoms.iter().map(|a| a.log_r).collect(),
        _ => (1..=60)
            .map(|j| f64::powi(2.0, -j))
            .filter(|&r| r >= config.scales.window_lo && r <= config.scales.window_hi)
            .map(f64::ln)
            .collect(),
    }
}

fn doubling_table(
    gauge: &GaugeFunction,
    log_scales: &[f64],
    sink: &mut ArtifactSink,
) -> Result<(Option<f64>, usize, Vec<Value>), CliError> {
    let report = doubling_report(gauge, log_scales);
    let rows: Vec<Vec<String>> = report
        .ratios
        .iter()
        .map(|&(lr, ratio)| row_strings(&[lr, lr.exp(), ratio]))
        .collect();
    sink.write_csv("doubling.csv", &["log_r", "r", "ratio"], &rows)?;
    let skipped: Vec<Value> = report
        .skipped
        .iter()
        .map(|(lr, reason)| json!({"log_r": json_f64(*lr), "reason": reason}))
        .collect();
    Ok((report.max_ratio, rows.len(), skipped))
}

fn doubling(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let gauge = GaugeFunction::new(mech.clone());
    let scales = doubling_scales(&mech, config);
    let (max_ratio, n_rows, skipped) = doubling_table(&gauge, &scales, sink)?;
    let mut out = Map::new();
    out.insert(
        "max_ratio".into(),
        max_ratio.map(json_f64).unwrap_or(Value::Null),
    );
    out.insert("valid_scales".into(), json!(n_rows));
    out.insert("skipped".into(), Value::Array(skipped));
    Ok(out)
}

fn counterexample(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let atoms = match &mech.measure {
        LevyMeasure::AtomList { atoms } => atoms,
        _ => return Err(CliError::Schema("counterexample needs an atom-series mechanism".into())),
    };
    // Scan window: from λ = 1 out past the last atom, where ψ turns
    // terminally linear and every exponent witness lives.
    let theta_max = atoms.iter().map(|a| -a.log_r).fold(f64::MIN, f64::max);
    let n_max = f64::from(config.mechanism.n_max.unwrap_or(atoms.len() as u32));
    let x_hi = theta_max + 2.0 * (n_max.ln() + 1.0);
    let report = estimate_exponents(&mech, (0.0, x_hi), config.scales.grid_points)?;
    let scan_rows: Vec<Vec<String>> = report
        .scan_grid
        .iter()
        .map(|&(x, lp)| row_strings(&[x, lp]))
        .collect();
    sink.write_csv("scan.csv", &["log_lambda", "log_psi"], &scan_rows)?;

    let gauge = GaugeFunction::new(mech.clone());
    let scales = doubling_scales(&mech, config);
    let (max_ratio, n_rows, skipped) = doubling_table(&gauge, &scales, sink)?;

    let mut out = Map::new();
    out.insert("delta_hat".into(), json_f64(report.delta_hat));
    out.insert("gamma_hat".into(), json_f64(report.gamma_hat));
    out.insert("eta_hat".into(), json_f64(report.eta_hat));
    out.insert("scan_window_hi".into(), json_f64(x_hi));
    out.insert("notes".into(), Value::String(report.notes.clone()));
    out.insert(
        "max_doubling_ratio".into(),
        max_ratio.map(json_f64).unwrap_or(Value::Null),
    );
    out.insert("doubling_scales".into(), json!(n_rows));
    out.insert("doubling_skipped".into(), Value::Array(skipped));
    Ok(out)
}

fn spine_laplace(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let r_grid = config.r_grid(&[0.5, 1.0]);
    let l_grid = config.lambda_grid(&[0.5, 1.0, 2.0]);
    let mut specs = Vec::new();
    for &r in &r_grid {
        for &lambda in &l_grid {
            for &seed in &config.seeds {
                specs.push((r, lambda, seed));
            }
        }
    }
    let rows: Vec<_> = specs
        .par_iter()
        .map(|&(r, lambda, seed)| {
            spine_laplace_row(&mech, r, lambda, config.scales.scale_p, config.scales.replicates, seed)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut csv_rows = Vec::with_capacity(rows.len());
    let mut max_sigmas = 0.0f64;
    for (spec, row) in specs.iter().zip(&rows) {
        let sigmas = (row.mc_mean - row.target).abs() / row.mc_se;
        max_sigmas = max_sigmas.max(sigmas);
        csv_rows.push(vec![
            fmt_f64(row.r),
            fmt_f64(row.lambda),
            spec.2.to_string(),
            row.scale_p.to_string(),
            row.reps.to_string(),
            fmt_f64(row.mc_mean),
            fmt_f64(row.mc_se),
            fmt_f64(row.finite_scale_oracle),
            fmt_f64(row.target),
            fmt_f64(sigmas),
        ]);
    }
    sink.write_csv(
        "spine_laplace.csv",
        &[
            "r",
            "lambda",
            "seed",
            "scale_p",
            "replicates",
            "mc_mean",
            "mc_se",
            "finite_scale_oracle",
            "target",
            "sigmas",
        ],
        &csv_rows,
    )?;

    let band = config.tolerances.sigma_band;
    let mut out = Map::new();
    out.insert("rows".into(), json!(csv_rows.len()));
    out.insert("max_sigmas".into(), json_f64(max_sigmas));
    out.insert("sigma_band".into(), json_f64(band));
    out.insert("pass".into(), json!(max_sigmas <= band));
    Ok(out)
}

fn subliminf(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let gauge = GaugeFunction::new(mech.clone());
    let window = (config.scales.window_lo, config.scales.window_hi);
    let paths: Vec<_> = config
        .seeds
        .par_iter()
        .map(|&seed| sample_subordinator(&mech, config.scales.dyadic_depth, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mut profile_rows = Vec::new();
    let mut minima = Vec::new();
    let mut s_ones = Vec::new();
    for (seed, path) in config.seeds.iter().zip(&paths) {
        // Row 0 is the origin (r = 0, S = 0); the ratio grid starts after it.
        let (min_ratio, argmin, profile) =
            liminf_ratio(&path.radii[1..], &path.values[1..], &gauge, window)?;
        for &(r, ratio) in &profile {
            profile_rows.push(vec![seed.to_string(), fmt_f64(r), fmt_f64(ratio)]);
        }
        minima.push((*seed, min_ratio, argmin));
        s_ones.push(*path.values.last().unwrap());
    }
    sink.write_csv("subliminf.csv", &["seed", "r", "ratio"], &profile_rows)?;
    let minima_rows: Vec<Vec<String>> = minima
        .iter()
        .map(|&(seed, m, a)| vec![seed.to_string(), fmt_f64(m), fmt_f64(a)])
        .collect();
    sink.write_csv("seed_minima.csv", &["seed", "min_ratio", "argmin_r"], &minima_rows)?;

    let min = minima.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    let max = minima.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);

    // Point check of the marginal law: E[e^{−S_1}] = e^{−φ*(1)}.
    let n = s_ones.len() as f64;
    let mean: f64 = s_ones.iter().map(|&s| (-s).exp()).sum::<f64>() / n;
    let var: f64 = s_ones.iter().map(|&s| ((-s).exp() - mean).powi(2)).sum::<f64>()
        / (n - 1.0).max(1.0);
    let se = (var / n).sqrt();
    let target = (-(phi_log(&mech, 0.0)?.exp() - mech.alpha)).exp();
    let sigmas = if se > 0.0 { (mean - target).abs() / se } else { f64::INFINITY };

    let mut out = Map::new();
    out.insert("seeds".into(), json!(config.seeds.len()));
    out.insert("min_of_minima".into(), json_f64(min));
    out.insert("max_of_minima".into(), json_f64(max));
    out.insert("spread".into(), json_f64(max / min));
    out.insert(
        "laplace_point".into(),
        json!({
            "mc_mean": json_f64(mean),
            "mc_se": json_f64(se),
            "target": json_f64(target),
            "sigmas": json_f64(sigmas),
            "pass": sigmas <= config.tolerances.sigma_band,
        }),
    );
    Ok(out)
}

fn density(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let gauge = GaugeFunction::new(mech.clone());
    let window = (config.scales.window_lo, config.scales.window_hi);
    let trees: Vec<_> = config
        .seeds
        .par_iter()
        .map(|&seed| sample_tree(&mech, config.scales.walk_length, config.scales.scale_p, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    let mut min_ratios = Vec::new();
    for (tree_id, tree) in trees.iter().enumerate() {
        // One artifact per tree: the coding excursion itself.
        let samples = tree.path().samples();
        let dt = tree.path().dt();
        let tree_rows: Vec<Vec<String>> = samples
            .iter()
            .enumerate()
            .map(|(i, &h)| vec![fmt_f64(i as f64 * dt), fmt_f64(h)])
            .collect();
        sink.write_csv(&format!("tree_{tree_id}.csv"), &["time", "height"], &tree_rows)?;

        let zeta = tree.path().zeta();
        for c in 0..config.scales.centers {
            let t = zeta * (c + 1) as f64 / (config.scales.centers + 1) as f64;
            let profile =
                levylab::packing::density_profile(tree, t, &gauge, window, config.scales.dyadic_depth)?;
            for (i, &r) in profile.radii.iter().enumerate() {
                rows.push(vec![
                    tree_id.to_string(),
                    c.to_string(),
                    fmt_f64(r),
                    fmt_f64(profile.masses[i]),
                    fmt_f64(gauge.eval(r)?),
                    fmt_f64(profile.ratios[i]),
                ]);
            }
            min_ratios.push(profile.min_ratio);
        }
    }
    sink.write_csv(
        "density.csv",
        &["tree_id", "center_index", "r", "mass", "gauge", "ratio"],
        &rows,
    )?;

    min_ratios.sort_by(f64::total_cmp);
    let median = quantile(&min_ratios, 0.5);
    let q1 = quantile(&min_ratios, 0.25);
    let q3 = quantile(&min_ratios, 0.75);
    let mut out = Map::new();
    out.insert("trees".into(), json!(trees.len()));
    out.insert("centers_per_tree".into(), json!(config.scales.centers));
    out.insert("median_min_ratio".into(), json_f64(median));
    out.insert("iqr_max_over_min".into(), json_f64(q3 / q1));
    out.insert(
        "window".into(),
        json!([json_f64(window.0), json_f64(window.1)]),
    );
    Ok(out)
}

fn packing_ratio(config: &LabConfig, sink: &mut ArtifactSink) -> Result<Map<String, Value>, CliError> {
    let mech = config.mechanism.build()?;
    let gauge = PackingGauge::Mechanism(GaugeFunction::new(mech.clone()));
    let trees: Vec<_> = config
        .seeds
        .par_iter()
        .map(|&seed| sample_tree(&mech, config.scales.walk_length, config.scales.scale_p, seed))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    let mut constancies = Vec::new();
    for (seed, tree) in config.seeds.iter().zip(&trees) {
        let zeta = tree.path().zeta();
        let k = config.scales.intervals;
        let intervals: Vec<(f64, f64)> = (0..k)
            .map(|i| (zeta * i as f64 / k as f64, zeta * (i + 1) as f64 / k as f64))
            .collect();
        let table = packing_vs_mass_with(
            tree,
            &intervals,
            &gauge,
            config.scales.epsilon,
            config.scales.max_points,
        )?;
        for (i, row) in table.rows.iter().enumerate() {
            rows.push(vec![
                seed.to_string(),
                i.to_string(),
                fmt_f64(row.packing),
                fmt_f64(row.mass),
                fmt_f64(row.ratio),
                format!("{:?}", row.method),
                row.note.clone().unwrap_or_default(),
            ]);
        }
        constancies.push(table.constancy);
    }
    sink.write_csv(
        "packing_ratio.csv",
        &["seed", "interval_id", "P_estimate", "mass", "ratio", "method", "note"],
        &rows,
    )?;

    let max_constancy = constancies.iter().copied().fold(f64::NAN, f64::max);
    let mut out = Map::new();
    out.insert("trees".into(), json!(trees.len()));
    out.insert("intervals_per_tree".into(), json!(config.scales.intervals));
    out.insert("epsilon".into(), json_f64(config.scales.epsilon));
    out.insert(
        "constancy_per_tree".into(),
        Value::Array(constancies.iter().map(|&c| json_f64(c)).collect()),
    );
    out.insert("max_constancy".into(), json_f64(max_constancy));
    Ok(out)
}
