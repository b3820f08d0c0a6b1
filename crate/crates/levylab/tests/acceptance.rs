//! Acceptance gate: twelve numbered end-to-end checks, one test each,
//! printing one `criterion N: PASS/FAIL — detail` line per criterion.
//!
//! Tolerances and grids are pinned here on purpose; loosening them is a
//! substantive change, not a cleanup. Checks 10 and 11 probe almost-sure
//! liminf statements whose log log r normalizations converge too slowly
//! for desk-scale windows; they are kept faithful and allowed to fail
//! rather than widened until they pass.

use std::time::Instant;

use levylab::kernels::{density_bound_check, ell_integral, kappa_solve, script_l};
use levylab::mechanism::{
    build_counterexample, doubling_report, estimate_exponents, phi_inv_log, phi_log, psi_inv,
    psi_inv_log, solve_u, solve_v, Atom, BranchingMechanism, GaugeFunction, LevyMeasure,
};
use levylab::num::stream;
use levylab::packing::{
    density_profile, packing_value_exact, packing_value_greedy, packing_vs_mass, PackingGauge,
    PackingInstance,
};
use levylab::realtree::{code_tree, CodedTree};
use levylab::samplers::{
    liminf_ratio, sample_contour_excursion, sample_subordinator, sample_walk_excursion_with,
    spine_laplace_row,
};
use rand::Rng;

fn verdict(n: u32, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} — {detail}");
    assert!(pass, "criterion {n}: {status} — {detail}");
}

fn stable(gamma: f64) -> BranchingMechanism {
    BranchingMechanism::stable(gamma).unwrap()
}

fn rel(err: f64, reference: f64) -> f64 {
    (err - reference).abs() / reference.abs()
}

/// Interpolated quantile of an unsorted sample.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

/// The fixed-duration lattice excursion whose coded tree approximates the
/// quadratic-mechanism tree: `n_up` rising steps of height 1/p lasting
/// 1/(2p²) each, so the total contour length is n_up/p².
fn brownian_like_tree(n_up: usize, p: u32, seed: u64) -> CodedTree {
    let p = f64::from(p);
    let path = sample_contour_excursion(n_up, 1.0 / (2.0 * p * p), 1.0 / p, seed).unwrap();
    code_tree(path).unwrap()
}

#[test]
fn criterion_01_closed_form_oracles() {
    let t0 = Instant::now();
    let gammas = [1.2, 1.5, 2.0];
    let mut worst_inv = 0.0f64;
    let mut worst_v = 0.0f64;
    let mut worst_u = 0.0f64;

    for &g in &gammas {
        let mech = stable(g);
        // ψ(λ) = λ^γ exactly, so ψ⁻¹(y) = y^{1/γ}.
        for &y in &[1e-6, 1e-4, 1e-2, 0.5, 1.0, 2.0, 10.0, 1e3, 1e6] {
            worst_inv = worst_inv.max(rel(psi_inv(&mech, y).unwrap(), y.powf(1.0 / g)));
        }
        // Height tail: v(a) = ((γ−1)a)^{−1/(γ−1)}.
        for &a in &[0.01, 0.1, 1.0, 10.0, 100.0] {
            let closed = ((g - 1.0) * a).powf(-1.0 / (g - 1.0));
            worst_v = worst_v.max(rel(solve_v(&mech, a).unwrap(), closed));
        }
        // Semigroup: u(t,λ) = (λ^{1−γ} + (γ−1)t)^{−1/(γ−1)}.
        for &t in &[0.0, 0.01, 0.5, 2.0] {
            for &lambda in &[0.1f64, 1.0, 10.0] {
                let closed = (lambda.powf(1.0 - g) + (g - 1.0) * t).powf(-1.0 / (g - 1.0));
                worst_u = worst_u.max(rel(solve_u(&mech, t, lambda).unwrap(), closed));
            }
        }
    }

    // Local-time exponent κ_a(λ,0): closed form √λ·tanh(a√λ) in the
    // quadratic case, the exact self-similarity κ_a(λ,0) = λ^{1/γ}
    // κ_{aλ^{(γ−1)/γ}}(1,0) otherwise.
    let mut worst_kappa = 0.0f64;
    let m2 = stable(2.0);
    for &a in &[0.1, 0.5, 1.0, 2.0] {
        for &lambda in &[0.5f64, 1.0, 4.0] {
            let closed = lambda.sqrt() * (a * lambda.sqrt()).tanh();
            worst_kappa = worst_kappa.max(rel(kappa_solve(&m2, a, lambda, 0.0).unwrap().kappa, closed));
        }
    }
    for &g in &[1.2, 1.5] {
        let mech = stable(g);
        for &(a, lambda) in &[(0.2f64, 0.5f64), (1.0, 2.0), (0.5, 4.0)] {
            let left = kappa_solve(&mech, a, lambda, 0.0).unwrap().kappa;
            let right = lambda.powf(1.0 / g)
                * kappa_solve(&mech, a * lambda.powf((g - 1.0) / g), 1.0, 0.0).unwrap().kappa;
            worst_kappa = worst_kappa.max(rel(left, right));
        }
    }

    // Ball-mass transform in the quadratic case: 𝓛_r(λ) = sech²(r√λ).
    let mut worst_l = 0.0f64;
    for &r in &[0.1, 0.5, 1.0, 2.0] {
        for &lambda in &[0.5f64, 1.0, 4.0] {
            let closed = (1.0 / (r * lambda.sqrt()).cosh()).powi(2);
            worst_l = worst_l.max(rel(script_l(&m2, r, lambda).unwrap().value, closed));
        }
    }

    let elapsed = t0.elapsed().as_secs_f64();
    let worst = worst_inv.max(worst_v).max(worst_u).max(worst_kappa).max(worst_l);
    let detail = format!(
        "max rel err: psi_inv {worst_inv:.2e}, v {worst_v:.2e}, u {worst_u:.2e}, \
         kappa {worst_kappa:.2e}, ball-mass transform {worst_l:.2e}; {elapsed:.2} s"
    );
    verdict(1, worst <= 1e-8 && elapsed < 10.0, &detail);
}

#[test]
fn criterion_02_transform_integral_identity() {
    // x* = −log 𝓛_r(λ) must send the defining integral back to r, and the
    // ODE and integral routes must agree.
    let mut worst_residual = 0.0f64;
    let mut worst_discrepancy = 0.0f64;
    for &g in &[1.2, 1.5, 2.0] {
        let mech = stable(g);
        for &r in &[0.01, 0.1, 1.0] {
            for &lambda in &[0.5, 1.0, 10.0] {
                let s = script_l(&mech, r, lambda).unwrap();
                let back = ell_integral(&mech, lambda, s.minus_log).unwrap();
                worst_residual = worst_residual.max((back - r).abs() / r);
                worst_discrepancy = worst_discrepancy.max(s.discrepancy);
            }
        }
    }
    let detail = format!(
        "27 (γ,r,λ) combinations: max integral residual {worst_residual:.2e}, \
         max route discrepancy {worst_discrepancy:.2e}"
    );
    verdict(2, worst_residual <= 1e-6 && worst_discrepancy <= 1e-6, &detail);
}

#[test]
fn criterion_03_convexity_sandwich() {
    // ψ(2λ) ≤ 4ψ(λ), ψ̃ ≤ ψ′ ≤ 4ψ̃, λ/ψ⁻¹(λ) ≤ φ(λ) ≤ 4λ/ψ⁻¹(λ),
    // log-domain with 1e−12 slack, for every built-in family.
    let atoms = vec![Atom { log_r: 0.7f64.ln(), log_weight: 2.5f64.ln() }];
    let mechs = [
        stable(1.2),
        stable(1.5),
        stable(2.0),
        BranchingMechanism::new(0.7, 0.4, LevyMeasure::Null).unwrap(),
        BranchingMechanism::new(0.3, 0.1, LevyMeasure::AtomList { atoms }).unwrap(),
        build_counterexample(1.5, 40).unwrap(),
        build_counterexample(2.0, 25).unwrap(),
    ];
    let ln4 = 4.0f64.ln();
    let (lo, hi) = (1e-3f64.ln(), 1e6f64.ln());
    let mut checked = 0u32;
    let mut violations = 0u32;
    for mech in &mechs {
        for k in 0..60 {
            let lx = lo + (hi - lo) * k as f64 / 59.0;
            let lpsi = mech.log_psi(lx);
            let ltilde = lpsi - lx;
            let lprime = mech.log_psi_prime(lx);
            let lratio = lx - psi_inv_log(mech, lx).unwrap();
            let lphi = phi_log(mech, lx).unwrap();
            let ok = mech.log_psi(lx + std::f64::consts::LN_2) <= ln4 + lpsi + 1e-12
                && ltilde <= lprime + 1e-12
                && lprime <= ln4 + ltilde + 1e-12
                && lratio <= lphi + 1e-12
                && lphi <= ln4 + lratio + 1e-12;
            checked += 1;
            if !ok {
                violations += 1;
            }
        }
    }
    let detail = format!("{violations} violations over {checked} (mechanism, λ) points");
    verdict(3, violations == 0, &detail);
}

#[test]
fn criterion_04_exponent_estimates() {
    let window = (1e-3f64.ln(), 1e9f64.ln());
    let mut parts = Vec::new();
    let mut pass = true;
    for &g in &[1.2, 1.5, 2.0] {
        let rep = estimate_exponents(&stable(g), window, 4096).unwrap();
        let ok = (rep.delta_hat - g).abs() <= 0.05
            && (rep.gamma_hat - g).abs() <= 0.05
            && (rep.eta_hat - g).abs() <= 0.05;
        pass &= ok;
        parts.push(format!(
            "stable({g}): δ̂={:.3} γ̂={:.3} η̂={:.3}",
            rep.delta_hat, rep.gamma_hat, rep.eta_hat
        ));
    }

    // Sparse atom series keep γ̂ near the design index while δ̂ collapses
    // to 1. The scan must reach past the last atom into the linear tail.
    let ce_window = |theta_max: f64, n_max: f64| (0.0, theta_max + 2.0 * (n_max.ln() + 1.0));

    let ce15 = build_counterexample(1.5, 40).unwrap();
    let rep15 = estimate_exponents(&ce15, ce_window(40.0 * 40.0f64.ln(), 40.0), 4096).unwrap();
    let ok15 = (1.4..=1.6).contains(&rep15.gamma_hat) && rep15.delta_hat <= 1.1;
    pass &= ok15;
    parts.push(format!("atoms(1.5,40): δ̂={:.3} γ̂={:.3}", rep15.delta_hat, rep15.gamma_hat));

    let ce2 = build_counterexample(2.0, 25).unwrap();
    let rep2 = estimate_exponents(&ce2, ce_window(625.0, 25.0), 4096).unwrap();
    let ok2 = rep2.gamma_hat >= 1.9 && rep2.delta_hat <= 1.1;
    pass &= ok2;
    parts.push(format!("atoms(2,25): δ̂={:.3} γ̂={:.3}", rep2.delta_hat, rep2.gamma_hat));

    verdict(4, pass, &parts.join("; "));
}

#[test]
fn criterion_05_gauge_doubling() {
    // Quadratic-limit gauge: g(2r)/g(r) → 4; at dyadic r ≤ 2⁻²⁰ every
    // ratio must sit in [3.5, 4.5].
    let gauge2 = GaugeFunction::new(stable(2.0));
    let scales: Vec<f64> = (20..=60).map(|j| -(j as f64) * std::f64::consts::LN_2).collect();
    let report = doubling_report(&gauge2, &scales);
    let in_band = report.ratios.iter().all(|&(_, q)| (3.5..=4.5).contains(&q));
    let (lo_q, hi_q) = report
        .ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, q)| (lo.min(q), hi.max(q)));

    // The sparse atom series fails doubling along its own scales
    // rₙ = e^{−n log n}.
    let ce = build_counterexample(1.5, 40).unwrap();
    let ce_gauge = GaugeFunction::new(ce);
    let ce_scales: Vec<f64> = (3..=40).map(|n| -(n as f64) * (n as f64).ln()).collect();
    let ce_report = doubling_report(&ce_gauge, &ce_scales);
    let ce_max = ce_report.max_ratio.unwrap_or(f64::NAN);

    let detail = format!(
        "quadratic-limit ratios in [{lo_q:.4}, {hi_q:.4}] over {} dyadic scales \
         (skipped {}); atom-series max ratio {ce_max:.3}",
        report.ratios.len(),
        report.skipped.len()
    );
    verdict(5, in_band && !report.ratios.is_empty() && ce_max > 10.0, &detail);
}

#[test]
fn criterion_06_height_tail_vs_gauge_constancy() {
    // v(r)/(r·φ⁻¹(1/r)) is exactly (γ−1)^{−1/(γ−1)} γ^{γ/(γ−1)} for the
    // stable family (4 in the quadratic limit); the solver routes must
    // reproduce the constant to 1e−6 across six decades.
    let mut parts = Vec::new();
    let mut pass = true;
    for &g in &[1.2, 1.5, 2.0] {
        let mech = stable(g);
        let constant = (g - 1.0).powf(-1.0 / (g - 1.0)) * g.powf(g / (g - 1.0));
        let (llo, lhi) = (1e-8f64.ln(), 1e-2f64.ln());
        let mut min_ratio = f64::INFINITY;
        let mut max_ratio = f64::NEG_INFINITY;
        for k in 0..49 {
            let lr = llo + (lhi - llo) * k as f64 / 48.0;
            let lv = solve_v(&mech, lr.exp()).unwrap().ln();
            let lphi_inv = phi_inv_log(&mech, -lr).unwrap();
            let ratio = (lv - lr - lphi_inv).exp();
            min_ratio = min_ratio.min(ratio);
            max_ratio = max_ratio.max(ratio);
        }
        let spread = max_ratio / min_ratio - 1.0;
        let value_err = rel(0.5 * (min_ratio + max_ratio), constant);
        pass &= spread <= 1e-6 && value_err <= 1e-6;
        parts.push(format!("γ={g}: spread {spread:.2e}, value err {value_err:.2e} (target {constant:.6})"));
    }
    verdict(6, pass, &parts.join("; "));
}

#[test]
fn criterion_07_lower_density_bound() {
    let mut pass = true;
    let mut worst_margin = f64::NEG_INFINITY;
    for &g in &[1.5, 2.0] {
        let mech = stable(g);
        for &r in &[1e-4, 1e-5, 1e-6, 1e-7, 1e-8] {
            let b = density_bound_check(&mech, r).unwrap();
            pass &= b.pass;
            worst_margin = worst_margin.max(b.lhs_log - b.rhs_log);
        }
    }
    let detail = format!("10 (γ,r) points; worst log(lhs/rhs) = {worst_margin:.3} (≤ 0 required)");
    verdict(7, pass, &detail);
}

#[test]
fn criterion_08_spine_mass_transform() {
    // Monte Carlo E[e^{−λ·(mass within r of a spine point)}] against the
    // exact sech²(r√λ) in the quadratic case, 10⁴ replicates per point.
    // The lattice scale is chosen per point so the O(1/p) discretization
    // bias stays well under one standard error.
    let t0 = Instant::now();
    let mech = stable(2.0);
    let table: [(f64, f64, u32); 6] = [
        (0.5, 0.5, 400),
        (0.5, 1.0, 400),
        (0.5, 2.0, 800),
        (1.0, 0.5, 400),
        (1.0, 1.0, 400),
        (1.0, 2.0, 400),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (k, &(r, lambda, p)) in table.iter().enumerate() {
        let row = spine_laplace_row(&mech, r, lambda, p, 10_000, 0xACCE55 + k as u64).unwrap();
        let sigmas = (row.mc_mean - row.target).abs() / row.mc_se;
        pass &= sigmas <= 3.0;
        parts.push(format!("(r={r}, λ={lambda}): {sigmas:.2}σ"));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    pass &= elapsed < 300.0;
    let detail = format!("{}; {elapsed:.1} s", parts.join(", "));
    verdict(8, pass, &detail);
}

#[test]
fn criterion_09_tree_geometry() {
    // 20 simulated trees: 10 lattice-contour trees (quadratic limit) and
    // 10 rejection-sampled offspring walks (γ = 1.5).
    let mut trees: Vec<CodedTree> = (0..10).map(|k| brownian_like_tree(20_000, 100, 900 + k)).collect();
    let m15 = stable(1.5);
    for k in 0..10 {
        let exc = sample_walk_excursion_with(&m15, 80, 4_000, Some(32_000), 100_000, 910 + k).unwrap();
        trees.push(code_tree(exc.to_path().unwrap()).unwrap());
    }

    let mut four_point_violations = 0u64;
    let mut quadruples = 0u64;
    let mut root_identity_exact = true;
    for (k, tree) in trees.iter().enumerate() {
        let n = tree.n();
        let mut rng = stream(940, k as u64);
        for _ in 0..5_000 {
            let idx = [
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            ];
            quadruples += 1;
            if !tree.four_point_check_idx(idx) {
                four_point_violations += 1;
            }
        }
        // Distance to the root is the height, exactly.
        let h = tree.path().samples();
        for _ in 0..50 {
            let i = rng.gen_range(0..n);
            root_identity_exact &= tree.distance_idx(0, i) == h[i];
        }
        // The ball at the root is the sublevel set, exactly.
        for &r in &[0.05, 0.3, 1.0] {
            root_identity_exact &= tree.root_ball_mass(r) == tree.ball_mass(0.0, r).unwrap();
        }
    }

    // Occupation consistency: the level-count local time integrates back
    // to the contour mass.
    let m2 = stable(2.0);
    let delta_a = 0.01;
    let epsilon = 0.01;
    let v_eps = solve_v(&m2, epsilon).unwrap();
    let dt = 1e-4f64;
    let p_from_dt = (1.0 / (2.0 * dt)).sqrt();
    let mut total_mass = 0.0;
    let mut total_integral = 0.0;
    for seed in 0..4u64 {
        let path = sample_contour_excursion(20_000, dt, 1.0 / p_from_dt, 990 + seed).unwrap();
        let tree = code_tree(path).unwrap();
        total_mass += tree.path().zeta();
        let top = tree.path().max_height();
        let mut level = delta_a;
        while level < top {
            let est = tree.local_time_estimate(level, epsilon, v_eps).unwrap();
            total_integral += est.value * delta_a;
            level += delta_a;
        }
    }
    let local_time_err = (total_integral - total_mass).abs() / total_mass;

    let detail = format!(
        "{four_point_violations}/{quadruples} four-point violations; root identities exact: \
         {root_identity_exact}; local-time mass error {:.1}% (≤ 10% required)",
        100.0 * local_time_err
    );
    verdict(
        9,
        four_point_violations == 0
            && quadruples == 100_000
            && root_identity_exact
            && local_time_err <= 0.10,
        &detail,
    );
}

#[test]
fn criterion_10_subordinator_liminf() {
    // Windowed minima of S_r/g(r) across 50 seeds. The almost-sure
    // constant emerges as r → 0; over the desk-scale window
    // [2⁻³⁰, 2⁻⁵] the log log r normalization has not converged and the
    // cross-seed spread stays far above the 5× band, so this check fails
    // honestly. The marginal transform at r = 1 is exact and must pass.
    let window = (f64::powi(2.0, -30) * 0.999, f64::powi(2.0, -5) * 1.001);
    let mut parts = Vec::new();
    let mut pass = true;
    for &g in &[1.5, 2.0] {
        let mech = stable(g);
        let gauge = GaugeFunction::new(mech.clone());
        let mut minima = Vec::new();
        let mut s_one = Vec::new();
        for seed in 0..50u64 {
            let path = sample_subordinator(&mech, 30, seed).unwrap();
            let (min_ratio, _, _) =
                liminf_ratio(&path.radii[1..], &path.values[1..], &gauge, window).unwrap();
            minima.push(min_ratio);
            s_one.push(*path.values.last().unwrap());
        }
        let positive = minima.iter().all(|&m| m > 0.0 && m.is_finite());
        let lo = minima.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = minima.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let spread = hi / lo;

        let n = s_one.len() as f64;
        let mean = s_one.iter().map(|&s| (-s).exp()).sum::<f64>() / n;
        let var =
            s_one.iter().map(|&s| ((-s).exp() - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let target = (-phi_log(&mech, 0.0).unwrap().exp()).exp();
        let sigmas = (mean - target).abs() / se;

        pass &= positive && spread <= 5.0 && sigmas <= 3.0;
        parts.push(format!(
            "γ={g}: minima in [{lo:.3}, {hi:.3}], spread {spread:.1} (≤ 5 required), \
             marginal at r=1 within {sigmas:.2}σ"
        ));
    }
    verdict(10, pass, &parts.join("; "));
}

#[test]
fn criterion_11_ball_mass_density() {
    // 200 window minima of ball-mass/gauge across 20 contour trees of
    // 2²⁰ rising steps. The continuum statement pins the liminf constant
    // at 1; at these radii the gauge's log log(1/r) factor is far from
    // its limit and the sampled minima undershoot, so the median lands
    // below the [0.3, 3] bracket — kept as an honest failure. The spread
    // of the minima (interquartile max/min) is scale-free and must pass.
    let t0 = Instant::now();
    let gauge = GaugeFunction::new(stable(2.0));
    let window = (f64::powi(2.0, -12), f64::powi(2.0, -4));
    let mut min_ratios = Vec::with_capacity(200);
    for seed in 0..20u64 {
        let tree = brownian_like_tree(1 << 20, 1 << 10, 1_100 + seed);
        let zeta = tree.path().zeta();
        for c in 0..10 {
            let t = zeta * (c + 1) as f64 / 11.0;
            let profile = density_profile(&tree, t, &gauge, window, 12).unwrap();
            min_ratios.push(profile.min_ratio);
        }
    }
    let median = quantile(&min_ratios, 0.5);
    let iqr_spread = quantile(&min_ratios, 0.75) / quantile(&min_ratios, 0.25);
    let elapsed = t0.elapsed().as_secs_f64();
    let detail = format!(
        "median min-ratio {median:.3} (required in [0.3, 3]), interquartile max/min \
         {iqr_spread:.2} (≤ 3 required) over {} centers; {elapsed:.0} s",
        min_ratios.len()
    );
    verdict(
        11,
        (0.3..=3.0).contains(&median) && iqr_spread <= 3.0 && elapsed < 1_800.0,
        &detail,
    );
}

#[test]
fn criterion_12_packing_optimizer() {
    // (a) Exact solver against subset enumeration on 50 random line
    // instances with ≤ 12 candidate balls; greedy never exceeds exact.
    let mut rng = stream(0xACC, 12);
    let mut worst_gap = 0.0f64;
    let mut greedy_ok = true;
    for _ in 0..50 {
        let n_pts = rng.gen_range(2..=4usize);
        let n_radii = rng.gen_range(1..=3usize);
        let coords: Vec<f64> = (0..n_pts).map(|_| rng.gen::<f64>() * 2.0).collect();
        let eps = 0.1 + rng.gen::<f64>() * 0.5;
        let grid: Vec<f64> = (0..n_radii).map(|i| eps / f64::powi(2.0, i as i32)).collect();
        let inst = PackingInstance::on_line(
            &coords,
            PackingGauge::linear(&grid, 1.0),
            eps,
            grid.clone(),
        )
        .unwrap();
        assert!(inst.n_pairs() <= 12);

        // Independent enumeration over every subset of (point, radius)
        // pairs, rejecting any pair of balls that touch or overlap.
        let cands: Vec<(usize, f64)> = (0..n_pts)
            .flat_map(|i| grid.iter().map(move |&r| (i, r)))
            .collect();
        let m = cands.len();
        let mut oracle = 0.0f64;
        for mask in 0u32..(1 << m) {
            let mut value = 0.0;
            let mut ok = true;
            'subset: for a in 0..m {
                if mask & (1 << a) == 0 {
                    continue;
                }
                value += cands[a].1;
                for b in a + 1..m {
                    if mask & (1 << b) != 0
                        && (coords[cands[a].0] - coords[cands[b].0]).abs()
                            <= cands[a].1 + cands[b].1
                    {
                        ok = false;
                        break 'subset;
                    }
                }
            }
            if ok && value > oracle {
                oracle = value;
            }
        }

        let exact = packing_value_exact(&inst).unwrap();
        worst_gap = worst_gap.max((exact.value - oracle).abs());
        greedy_ok &= packing_value_greedy(&inst).unwrap().value <= exact.value + 1e-12;
    }

    // (b) Separated clusters add exactly.
    let grid = vec![0.4, 0.2, 0.1];
    let gauge = PackingGauge::linear(&grid, 1.0);
    let near = [0.0, 0.3, 0.9];
    let far = [10.0, 10.2, 10.8];
    let both: Vec<f64> = near.iter().chain(far.iter()).copied().collect();
    let value = |coords: &[f64]| {
        packing_value_exact(
            &PackingInstance::on_line(coords, gauge.clone(), 0.4, grid.clone()).unwrap(),
        )
        .unwrap()
        .value
    };
    let additivity_gap = (value(&both) - value(&near) - value(&far)).abs();

    // (c) Packing value tracks mass across 10 disjoint contour intervals
    // of a 2²⁰-step tree in the quadratic limit.
    let tree = brownian_like_tree(1 << 20, 1 << 10, 1_200);
    let zeta = tree.path().zeta();
    let intervals: Vec<(f64, f64)> =
        (0..10).map(|i| (zeta * i as f64 / 10.0, zeta * (i + 1) as f64 / 10.0)).collect();
    let mech_gauge = PackingGauge::Mechanism(GaugeFunction::new(stable(2.0)));
    let table = packing_vs_mass(&tree, &intervals, &mech_gauge, f64::powi(2.0, -6)).unwrap();
    let ratios_valid = table.rows.iter().all(|row| row.ratio.is_finite() && row.ratio > 0.0);

    let detail = format!(
        "enumeration gap {worst_gap:.2e} over 50 instances; greedy ≤ exact: {greedy_ok}; \
         additivity gap {additivity_gap:.2e}; interval ratio max/min {:.2} (≤ 3 required)",
        table.constancy
    );
    verdict(
        12,
        worst_gap < 1e-12 && greedy_ok && additivity_gap < 1e-12 && ratios_valid && table.constancy <= 3.0,
        &detail,
    );
}
