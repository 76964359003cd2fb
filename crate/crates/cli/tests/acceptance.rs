//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Thresholds are fixed constants below.

use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use psusy_core::calculus::l2_norm;
use psusy_core::dws::{
    energy_closed_form, matching_residuals, residual_r, solve_matching, Branch, DwsFamily,
};
use psusy_core::oracle::{discretize, eigen_real, eigenvectors, refine_until, OracleConfig, Problem, Solver};
use psusy_core::susy::{apply_lowering, hierarchy_energies, partner_potentials, shape_invariance_residual, SuperpotentialFamily};
use psusy_core::{Complex64, Convention, DwsParams, Error, Grid, SampledFunction, Superpotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn psusy(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_psusy"))
        .args(args)
        .env_remove("PSUSY_MAX_QR_SIZE")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn csv_rows(bytes: &[u8]) -> Vec<Vec<f64>> {
    String::from_utf8_lossy(bytes)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

fn problem(v: impl Fn(f64) -> Complex64 + Send + Sync + 'static, lo: f64, hi: f64, count: usize, n: usize) -> Problem {
    Problem {
        potential: Arc::new(v),
        x_min: lo,
        x_max: hi,
        mu: 1.0,
        count,
        n_points: n,
        solver: Solver::Auto,
    }
}

/// Random DWS parameter sets over the ranges the figures explore.
fn random_params(rng: &mut ChaCha8Rng) -> DwsParams {
    let a0 = rng.gen_range(10.0..250.0);
    DwsParams::new(
        rng.gen_range(20.0..80.0),
        rng.gen_range(0.3..1.2),
        rng.gen_range(0.1..3.0),
        DwsParams::default_radius(a0),
        rng.gen_range(-20.0..20.0),
        a0,
    )
    .unwrap()
}

// 1. Oracle against analytic spectra.
fn oracle_validation() -> Outcome {
    const BOX_TOL: f64 = 1e-5;
    const OSC_TOL: f64 = 1e-4;
    const IM_TOL: f64 = 1e-8;
    const BUDGET: Duration = Duration::from_secs(30);
    let t = Instant::now();
    let cfg = OracleConfig::default();

    let g = Grid::new(0.0, 1.0, 4001).unwrap();
    let h = discretize(&SampledFunction::zeros(g), 1.0).unwrap();
    let boxed = eigen_real(&h, 5).unwrap();
    let box_err = (1..=5)
        .zip(&boxed.eigenvalues)
        .map(|(n, e)| (e.re - (n as f64 * PI).powi(2)).abs() / (n as f64 * PI).powi(2))
        .fold(0.0, f64::max);

    let osc = refine_until(&problem(|x| Complex64::new(x * x, 0.0), -10.0, 10.0, 6, 2001), 1e-8, 3, &cfg).unwrap();
    let osc_err = osc
        .spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(n, e)| (e.re - (2 * n + 1) as f64).abs())
        .fold(0.0, f64::max);

    let lambda = 1.0;
    let pt = refine_until(&problem(move |x| Complex64::new(x * x, lambda * x), -12.0, 12.0, 6, 301), 1e-6, 6, &cfg).unwrap();
    let mut pt_err = 0.0f64;
    let mut pt_im = 0.0f64;
    for (n, e) in pt.spectrum.eigenvalues.iter().enumerate() {
        pt_err = pt_err.max((e.re - (2 * n + 1) as f64 - lambda * lambda / 4.0).abs());
        pt_im = pt_im.max(e.im.abs());
    }
    let elapsed = t.elapsed();
    outcome(
        box_err <= BOX_TOL && osc_err <= OSC_TOL && pt_err <= OSC_TOL && pt_im <= IM_TOL && elapsed <= BUDGET,
        format!(
            "box rel {box_err:.1e} (<= {BOX_TOL:e}), oscillator {osc_err:.1e} (<= {OSC_TOL:e}), \
             PT {pt_err:.1e} (<= {OSC_TOL:e}), PT |Im| {pt_im:.1e} (<= {IM_TOL:e}), {elapsed:.2?} (<= 30s)"
        ),
    )
}

// 2. Matching conditions on a 100-point random sweep.
fn matching() -> Outcome {
    const TOL: f64 = 1e-12;
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut solved = 0;
    for i in 0..100 {
        let p = random_params(&mut rng);
        let b = if i % 2 == 0 { Branch::Minus } else { Branch::Plus };
        match solve_matching(&p, 1.0, b) {
            Ok(m) => {
                let r = matching_residuals(&p, 1.0, m.params.g1, m.params.g2, m.e0, m.params.alpha);
                worst = worst.max(r.max());
                solved += 1;
            }
            Err(Error::DegenerateRoot) => {}
            Err(e) => return outcome(false, format!("solve_matching failed: {e}")),
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst <= TOL && solved == 100 && elapsed <= Duration::from_secs(1),
        format!("{solved}/100 solved, max residual {worst:.1e} (<= {TOL:e}), {elapsed:.2?} (<= 1s)"),
    )
}

// 3. Shape invariance on the default window.
fn shape_invariance() -> Outcome {
    const TOL: f64 = 1e-9;
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_var = 0.0f64;
    let mut worst_r = 0.0f64;
    for i in 0..20 {
        let p = random_params(&mut rng);
        let b = if i % 2 == 0 { Branch::Minus } else { Branch::Plus };
        let m = match solve_matching(&p, 1.0, b) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("set {i}: {e}")),
        };
        let family = DwsFamily { params: p, mu: 1.0 };
        let a1 = m.params.g2;
        let a2 = family.parameter_map(a1);
        let (lo, hi) = p.default_window();
        let g = Grid::new(lo, hi, 2001).unwrap();
        let s = shape_invariance_residual(&family, a1, a2, 1.0, Convention::TransposeAdjoint, g).unwrap();
        let r = residual_r(a1, a2, &p, 1.0).unwrap();
        worst_var = worst_var.max(s.x_variance / (1.0 + r.norm()));
        worst_r = worst_r.max((s.r - r).norm());
    }
    let elapsed = t.elapsed();
    outcome(
        worst_var <= TOL && worst_r <= TOL && elapsed <= Duration::from_secs(5),
        format!(
            "20 sets, variance/(1+|R|) {worst_var:.1e} (<= {TOL:e}), |R - closed form| {worst_r:.1e} (<= {TOL:e}), \
             {elapsed:.2?} (<= 5s)"
        ),
    )
}

// 4. Closed-form ladder against the hierarchy.
fn telescoping() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut ground_exact = true;
    for i in 0..20 {
        let p = random_params(&mut rng);
        let b = if i % 2 == 0 { Branch::Minus } else { Branch::Plus };
        let m = match solve_matching(&p, 1.0, b) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("set {i}: {e}")),
        };
        let family = DwsFamily { params: p, mu: 1.0 };
        let levels = match hierarchy_energies(
            &family,
            m.params.g2,
            |a| family.parameter_map(a),
            |a1, a2| residual_r(a1, a2, &p, 1.0),
            11,
        ) {
            Ok(l) => l,
            Err(e) => return outcome(false, format!("set {i}: {e}")),
        };
        for n in 0..=10 {
            let e = energy_closed_form(n, &p, 1.0, b).unwrap();
            worst = worst.max((e.relative - levels[n].cumulative_energy).norm());
            if n == 0 {
                ground_exact &= e.relative == Complex64::new(0.0, 0.0);
            }
        }
    }
    outcome(
        worst <= TOL && ground_exact,
        format!("20 sets x 11 levels, max |closed - hierarchy| {worst:.1e} (<= {TOL:e}), E0(-) = 0 exactly: {ground_exact}"),
    )
}

// 5. Partner isospectrality and ground-state annihilation.
fn isospectrality() -> Outcome {
    const TOL: f64 = 1e-4;
    const C: f64 = 1.0;
    let f = Superpotential::linear(Complex64::new(1.0, 0.0));
    let zero = Complex64::new(0.0, 0.0);
    let g = Grid::new(-8.0, 8.0, 4001).unwrap();
    let (vm, vp) = partner_potentials(&f, 1.0, Convention::Standard, zero, g).unwrap();
    let em = eigen_real(&discretize(&vm, 1.0).unwrap(), 6).unwrap().eigenvalues;
    let ep = eigen_real(&discretize(&vp, 1.0).unwrap(), 5).unwrap().eigenvalues;
    let iso = (0..5).map(|n| (ep[n] - em[n + 1]).norm()).fold(0.0, f64::max);

    let ratio = |n: usize| {
        let g = Grid::new(-8.0, 8.0, n).unwrap();
        let (vm, _) = partner_potentials(&f, 1.0, Convention::Standard, zero, g).unwrap();
        let h = discretize(&vm, 1.0).unwrap();
        let e0 = eigen_real(&h, 1).unwrap().eigenvalues;
        let phi = eigenvectors(&h, &e0).unwrap().remove(0);
        let low = apply_lowering(&f, 1.0, Convention::Standard, &phi).unwrap();
        (l2_norm(&low) / l2_norm(&phi), g.h())
    };
    let (r1, h1) = ratio(801);
    let (r2, h2) = ratio(1601);
    let order = (r1 / r2).log2();
    let bounded = r1 <= C * h1 * h1 && r2 <= C * h2 * h2;
    outcome(
        iso <= TOL && bounded && (1.8..=2.2).contains(&order),
        format!(
            "max |E+_n - E-_(n+1)| {iso:.1e} (<= {TOL:e}); annihilation {r1:.2e}, {r2:.2e} (<= {C} h^2), order {order:.3} in [1.8, 2.2]"
        ),
    )
}

// 6. Figure sweeps.
fn figures() -> Outcome {
    let t = Instant::now();
    let mut problems = Vec::new();
    let fig = ["--A0", "40", "--a", "0.65", "--mu", "1", "--no-banner"];
    let run = |extra: &[&str]| {
        let mut args = vec!["scan"];
        args.extend_from_slice(extra);
        args.extend_from_slice(&fig);
        let (code, out) = psusy(&args);
        (code, csv_rows(&out))
    };

    // Deformation sweep on [0.1, 3].
    let (code, q) = run(&["--sweep", "q", "--from", "0.1", "--to", "3", "--steps", "59"]);
    if code != 0 || q.len() != 59 {
        problems.push(format!("q scan exit {code}, {} rows", q.len()));
    }
    for col in 1..5 {
        if !q.windows(2).all(|w| w[1][col] > w[0][col]) || q.iter().any(|r| r[col] >= 0.0) {
            problems.push(format!("E_{} not strictly increasing toward 0 in q", col - 1));
        }
    }

    // Depth sweep at q = 1.5 over the captioned V0 = 40.5 + 0.13 A0 for A0 in [10, 300].
    let (v_lo, v_hi) = (40.5 + 0.13 * 10.0, 40.5 + 0.13 * 300.0);
    let (lo_s, hi_s) = (v_lo.to_string(), v_hi.to_string());
    let (code, v) = run(&["--sweep", "V0", "--q", "1.5", "--from", &lo_s, "--to", &hi_s, "--steps", "59"]);
    if code != 0 || v.len() != 59 {
        problems.push(format!("V0 scan exit {code}, {} rows", v.len()));
    }
    for col in 1..5 {
        if !v.windows(2).all(|w| w[1][col] < w[0][col]) {
            problems.push(format!("E_{} not strictly decreasing in V0", col - 1));
        }
    }

    for (name, rows) in [("q", &q), ("V0", &v)] {
        if let Some(r) = rows.iter().find(|r| !(r[1] < r[2] && r[2] < r[3] && r[3] < r[4])) {
            problems.push(format!("ordering E0 < E1 < E2 < E3 broken in the {name} scan at {}", r[0]));
        }
    }
    let elapsed = t.elapsed();
    if elapsed > Duration::from_secs(5) {
        problems.push(format!("took {elapsed:.2?}"));
    }
    let detail = if problems.is_empty() {
        format!("q in [0.1, 3] and V0 in [{v_lo}, {v_hi}], monotone and ordered, {elapsed:.2?} (<= 5s)")
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

// 7. Errata in the verify report.
fn errata() -> Outcome {
    let (code, out) = psusy(&["verify", "--A0", "40", "--a", "0.65", "--q", "1", "--mu", "1", "--no-banner"]);
    let v: serde_json::Value = match serde_json::from_slice(&out) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("verify output is not JSON: {e}")),
    };
    let residual = |id: &str| {
        v["errata"]
            .as_array()
            .and_then(|a| a.iter().find(|e| e["id"] == id))
            .and_then(|e| e["residual"].as_f64())
    };
    let radicand = residual("g2-radicand-sign");
    let numerator = residual("ladder-unit-numerator");

    let (lit_code, lit_out) = psusy(&["verify", "--A0", "40", "--a", "0.65", "--q", "1", "--G2-override", "paper", "--no-banner"]);
    let lit: serde_json::Value = serde_json::from_slice(&lit_out).unwrap_or_default();
    let lit_matching = lit["checks"]
        .as_array()
        .and_then(|a| a.iter().find(|c| c["name"] == "matching"))
        .and_then(|c| c["value"].as_f64());

    let pass = code == 0
        && radicand.is_some_and(|r| r > 0.0)
        && numerator.is_some_and(|r| r > 0.0)
        && lit_code == 1
        && lit_matching.is_some_and(|r| r > 0.0);
    outcome(
        pass,
        format!(
            "verify exit {code}; radicand residual {radicand:?}; unit-numerator residual {numerator:?}; \
             literal G2 exit {lit_code}, matching residual {lit_matching:?}"
        ),
    )
}

// 8. Byte-identical reruns.
fn determinism() -> Outcome {
    let commands: &[&[&str]] = &[
        &["spectrum", "--no-banner"],
        &["spectrum", "--model", "pt-oscillator", "--no-banner"],
        &["scan", "--sweep", "q", "--from", "0.1", "--to", "3", "--steps", "40", "--no-banner"],
        &["verify", "--no-banner"],
        &["wavefunction", "--model", "oscillator", "--n", "2", "--no-banner"],
        &["reduce", "--model", "dws", "--M", "1", "--epsilon", "0.5", "--no-banner"],
    ];
    let mut bad = Vec::new();
    for args in commands {
        let a = psusy(args);
        let b = psusy(args);
        if a != b || a.1.is_empty() {
            bad.push(args[0]);
        }
    }
    let detail = if bad.is_empty() {
        format!("{} commands identical across two runs", commands.len())
    } else {
        format!("differing output: {bad:?}")
    };
    outcome(bad.is_empty(), detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle validation", oracle_validation),
        ("matching conditions", matching),
        ("shape invariance", shape_invariance),
        ("telescoping spectrum", telescoping),
        ("SUSY isospectrality", isospectrality),
        ("figure reproduction", figures),
        ("errata machine-readability", errata),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!("criterion {} [{}] {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
