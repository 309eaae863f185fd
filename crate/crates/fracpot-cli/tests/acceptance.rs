//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Closed-form oracles pin the operator quadrature; the verification suites
//! must report finite fitted constants, stable under simultaneous resolution
//! and ball-family doubling; exact-constant inequalities carry their stated
//! constants; outputs are byte-deterministic.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use fracpot::funcspace::{sample, Expression, GridBox, GridFunction};
use fracpot::geom::{self, point2, ORIGIN};
use fracpot::inequalities::{
    checks::canonical_ball, run_suite, FieldCache, HarnessSettings, SuiteOutcome, Verdict,
};
use fracpot::kernel::{ball_ls_integral, Kernel};
use fracpot::norms::{self, Region};
use fracpot::operators::{self, KernelChoice, OperatorParams};
use fracpot::zoo::sample_zoo;

const PI: f64 = std::f64::consts::PI;

struct SuiteStore {
    cache: std::sync::Arc<FieldCache>,
    outcomes: BTreeMap<String, (SuiteOutcome, Duration)>,
}

fn store() -> &'static Mutex<SuiteStore> {
    static STORE: OnceLock<Mutex<SuiteStore>> = OnceLock::new();
    STORE.get_or_init(|| {
        Mutex::new(SuiteStore {
            cache: FieldCache::new(),
            outcomes: BTreeMap::new(),
        })
    })
}

/// Run a suite at the default scale once per process; reuse across criteria.
fn suite(name: &str) -> (SuiteOutcome, Duration) {
    let mut guard = store().lock().unwrap();
    if let Some(entry) = guard.outcomes.get(name) {
        return entry.clone();
    }
    let t0 = Instant::now();
    let outcome = run_suite(name, 2, &HarnessSettings::default(), guard.cache.clone())
        .unwrap_or_else(|e| panic!("suite {name} failed to run: {e}"));
    let elapsed = t0.elapsed();
    guard
        .outcomes
        .insert(name.to_string(), (outcome.clone(), elapsed));
    (outcome, elapsed)
}

fn verdict_line(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn unit_disk(res: usize) -> GridFunction {
    sample(
        &Expression::BallIndicator {
            center: ORIGIN,
            radius: 1.0,
        },
        &GridBox::square2(res),
    )
}

#[test]
fn criterion_01_closed_form_operator_values() {
    let t0 = Instant::now();
    let f = unit_disk(256);
    let riesz = operators::riesz_potential(&f, 1.0, ORIGIN).unwrap();
    let params = OperatorParams::riesz(2, 1.0).unwrap();
    let maximal = operators::frac_maximal(&f, &params, ORIGIN).unwrap();
    let elapsed = t0.elapsed();
    let riesz_err = (riesz - 1.0).abs();
    let maximal_err = ((maximal - PI.sqrt()) / PI.sqrt()).abs();
    verdict_line(
        "criterion 1 (closed-form operator values)",
        riesz_err <= 2e-2 && maximal_err <= 2e-2 && elapsed < Duration::from_secs(10),
        &format!(
            "I_1(indicator)(0) = {riesz:.5} (target 1), M_1(indicator)(0) = {maximal:.5} \
             (target {:.5}), runtime {elapsed:?}",
            PI.sqrt()
        ),
    );
}

#[test]
fn criterion_02_identity_kernel_reduction() {
    // T with Ω ≡ 1 equals γ(α) I_α, and M with Ω ≡ 1 equals M_α, to 1e-10
    // relative on the full zoo at 100 lattice points.
    let grid = GridBox::square2(128);
    let lattice = operators::eval_lattice(&grid, 10);
    let zoo = sample_zoo(&grid, 42);
    let alpha = 0.5;
    let gamma = operators::gamma_alpha(alpha, 2).unwrap();
    let const_kernel = KernelChoice::omega(Kernel::constant(2));
    let ident = OperatorParams::riesz(2, alpha).unwrap();
    let with_const = OperatorParams::new(2, alpha, const_kernel).unwrap();

    let mut worst: f64 = 0.0;
    for f in &zoo {
        let t = operators::frac_integral_field(f, &with_const, &lattice).unwrap();
        let i = operators::riesz_potential_field(f, alpha, &lattice).unwrap();
        for (a, b) in t.values.iter().zip(&i.values) {
            worst = worst.max((a - gamma * b).abs() / (1.0 + a.abs()));
        }
        let m_const = operators::frac_maximal_field(f, &with_const, &lattice).unwrap();
        let m_ident = operators::frac_maximal_field(f, &ident, &lattice).unwrap();
        for (a, b) in m_const.values.iter().zip(&m_ident.values) {
            worst = worst.max((a - b).abs() / (1.0 + a.abs()));
        }
    }
    verdict_line(
        "criterion 2 (identity-kernel reduction)",
        worst <= 1e-10,
        &format!("worst relative deviation {worst:.3e} over 20 functions x 100 points"),
    );
}

#[test]
fn criterion_03_scaling_covariance() {
    // T(f(λ·))(x) = λ^{-α} (Tf)(λx) for λ in {1/2, 2}, 3 kernels x 5 functions.
    let grid = GridBox::square2(192);
    let functions = [
        Expression::Gaussian {
            center: [0.0, 0.0, 0.0],
            sigma: 0.5,
        },
        Expression::Gaussian {
            center: [-0.6, 0.5, 0.0],
            sigma: 0.8,
        },
        Expression::Gaussian {
            center: [0.3, -0.2, 0.0],
            sigma: 0.35,
        },
        Expression::BumpSum { seed: 42000 },
        Expression::BumpSum { seed: 42003 },
    ];
    let kernels = [
        KernelChoice::Identity,
        KernelChoice::omega(Kernel::by_name(2, "cos2").unwrap()),
        KernelChoice::omega(Kernel::by_name(2, "bump").unwrap()),
    ];
    let alpha = 0.5;
    let points = [point2(0.25, 0.25), point2(-0.4, 0.1), point2(0.3, -0.55)];
    let mut worst: f64 = 0.0;
    for kernel in &kernels {
        let params = OperatorParams::new(2, alpha, kernel.clone()).unwrap();
        for expr in &functions {
            let f = sample(expr, &grid);
            // Normalize cancellation-prone values by the field scale at the
            // probe points.
            let scale = points
                .iter()
                .map(|&x| operators::frac_integral(&f, &params, x).unwrap().abs())
                .fold(0.0f64, f64::max);
            for lambda in [0.5, 2.0] {
                let fl = f.dilate(lambda).unwrap();
                for &x in &points {
                    let lhs = operators::frac_integral(&fl, &params, x).unwrap();
                    let rhs = lambda.powf(-alpha)
                        * operators::frac_integral(&f, &params, geom::scale(x, lambda)).unwrap();
                    worst = worst.max((lhs - rhs).abs() / rhs.abs().max(0.1 * scale));
                }
            }
        }
    }
    verdict_line(
        "criterion 3 (scaling covariance)",
        worst <= 2e-2,
        &format!("worst relative deviation {worst:.3e} over 3 kernels x 5 functions x 2 dilations"),
    );
}

#[test]
fn criterion_04_polar_identity_for_ball_integrals() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for name in ["const", "cos", "cos2", "bump"] {
        let kernel = Kernel::by_name(2, name).unwrap();
        let s = 2.0;
        let sphere_pow = {
            let norm = fracpot::kernel::sphere_norm(&kernel, s).unwrap();
            norm.powf(s)
        };
        for radius in [0.5, 1.0, 2.0] {
            let v = ball_ls_integral(&kernel, s, radius).unwrap();
            let closed = (sphere_pow * radius.powi(2) / 2.0).powf(1.0 / s);
            worst = worst.max(((v - closed) / closed).abs());
        }
    }
    let elapsed = t0.elapsed();
    verdict_line(
        "criterion 4 (polar identity)",
        worst <= 1e-6 && elapsed < Duration::from_secs(1),
        &format!("worst relative deviation {worst:.3e}, runtime {elapsed:?}"),
    );
}

#[test]
fn criterion_05_hedberg_and_adams_stability() {
    let (hed, _) = suite("hedberg");
    let (adams, _) = suite("adams");
    let mut detail = String::new();
    let mut pass = true;
    for outcome in [&hed, &adams] {
        for r in &outcome.reports {
            let finite = r.ratios.iter().all(|e| e.ratio.is_finite());
            let ok = finite && r.verdict == Verdict::Pass;
            pass &= ok;
            detail.push_str(&format!(
                "{}[{}] C={:.4} d={:.2}% ",
                r.check_id,
                r.config.kernel,
                r.fitted_constant,
                r.refinement_deltas.first().unwrap_or(&f64::NAN) * 100.0
            ));
        }
    }
    verdict_line(
        "criterion 5 (Hedberg/Adams pointwise estimates)",
        pass,
        detail.trim(),
    );
}

#[test]
fn criterion_06_exact_constant_inequalities() {
    let (embeddings, _) = suite("embeddings");
    let (domination, _) = suite("domination");
    let (olsen, _) = suite("olsen");
    let mut pass = true;
    let mut detail = String::new();

    for r in &embeddings.reports {
        pass &= r.verdict == Verdict::Pass;
        detail.push_str(&format!("{} max={:.4} ", r.check_id, r.fitted_constant));
    }
    // The domination reports must carry the exact constant 2√π for α = 1.
    for r in &domination.reports {
        pass &= r.verdict == Verdict::Pass;
        pass &= r
            .notes
            .iter()
            .any(|n| n.contains("3.544908"));
        detail.push_str(&format!("domination max={:.4} ", r.fitted_constant));
    }
    // Hölder lemmas with constant one on Lebesgue and Morrey scales.
    for r in olsen.reports.iter().filter(|r| r.check_id == "holder-lemmas") {
        pass &= r.verdict == Verdict::Pass;
        detail.push_str(&format!("holder max={:.4} ", r.fitted_constant));
    }
    verdict_line("criterion 6 (exact-constant inequalities)", pass, detail.trim());
}

#[test]
fn criterion_07_luxemburg_closed_forms_and_lplogl() {
    // Indicator closed forms at measure 1 and 4 (discrete cell measure).
    let grid = GridBox::square2(256);
    let everything = canonical_ball(&grid);
    let c = 2.5;
    let sq1 = GridFunction::from_fn(grid.clone(), "sq1", move |p| {
        if p[0].abs() < 0.5 && p[1].abs() < 0.5 {
            c
        } else {
            0.0
        }
    });
    let v1 = norms::luxemburg_lplogl(&sq1, 1.0, everything).unwrap();
    let sq4 = GridFunction::from_fn(grid.clone(), "sq4", |p| {
        if p[0].abs() < 1.0 && p[1].abs() < 1.0 {
            1.0
        } else {
            0.0
        }
    });
    let v4 = norms::luxemburg_lplogl(&sq4, 1.0, everything).unwrap();
    let closed_ok = ((v1 - c) / c).abs() <= 1e-6 && ((v4 - 4.0) / 4.0).abs() <= 1e-6;

    // ‖f‖_{L^p(B)} <= ‖f‖_{L^p log L(B)} across the zoo at p = 1 and 2.
    let zoo = sample_zoo(&grid, 42);
    let mut lplogl_ok = true;
    for f in &zoo {
        for p in [1.0, 2.0] {
            let lux = norms::luxemburg_lplogl(f, p, everything).unwrap();
            let lp = norms::lp_norm(f, p, Region::Ball(everything)).unwrap();
            lplogl_ok &= lp <= lux * (1.0 + 1e-9);
        }
    }
    verdict_line(
        "criterion 7 (Luxemburg closed forms and L^p domination)",
        closed_ok && lplogl_ok,
        &format!("measure-1 norm {v1:.8} (target {c}), measure-4 norm {v4:.8} (target 4)"),
    );
}

#[test]
fn criterion_07_pp_inequality_with_unit_constant() {
    // ‖|f|^p‖_{L log L(B)} <= ‖f‖^p_{L^p log L(B)} asserted with constant 1
    // on the full zoo, at the endpoint exponents p = 1 and p = 2 used by the
    // harness. At p = 1 the two sides coincide by definition. For p > 1 the
    // substitution λ = μ^p produces the Young function t^p (1 + p log⁺ t),
    // which strictly dominates t^p (1 + log⁺ t) wherever |f| exceeds the
    // norm, so the unit-constant comparison fails for peaked zoo members
    // (the provable form carries the constant p). The measured excess is
    // reported and the criterion is left red rather than loosened.
    let grid = GridBox::square2(256);
    let ball = canonical_ball(&grid);
    let zoo = sample_zoo(&grid, 42);
    let mut worst: f64 = 0.0;
    let mut worst_label = String::new();
    let mut pass = true;
    for f in &zoo {
        for p in [1.0, 2.0] {
            let lhs =
                norms::luxemburg_lplogl(&f.map("pow", |v| v.abs().powf(p)), 1.0, ball).unwrap();
            let rhs = norms::luxemburg_lplogl(f, p, ball).unwrap().powf(p);
            if rhs == 0.0 {
                continue;
            }
            let ratio = lhs / rhs;
            if ratio > worst {
                worst = ratio;
                worst_label = format!("{} at p = {p}", f.label);
            }
            pass &= ratio <= 1.0 + 1e-6;
        }
    }
    verdict_line(
        "criterion 7 (power identity with unit constant)",
        pass,
        &format!("worst ratio {worst:.6} [{worst_label}]; unit constant refuted for p > 1"),
    );
}

#[test]
fn criterion_08_boundedness_suites_stable() {
    let names = [
        "lebesgue",
        "morrey",
        "endpoint-logl",
        "critical-bmo",
        "critical-linf",
    ];
    let mut total = Duration::ZERO;
    let mut pass = true;
    let mut detail = String::new();
    for name in names {
        let (outcome, elapsed) = suite(name);
        total += elapsed;
        for r in &outcome.reports {
            let finite = r.ratios.iter().all(|e| e.ratio.is_finite());
            pass &= finite && r.verdict == Verdict::Pass;
            detail.push_str(&format!(
                "{} C={:.3} d={:+.1}% | ",
                r.check_id,
                r.fitted_constant,
                r.refinement_deltas.first().unwrap_or(&0.0) * 100.0
            ));
        }
    }
    pass &= total < Duration::from_secs(600);
    verdict_line(
        "criterion 8 (boundedness suites)",
        pass,
        &format!("total runtime {total:?}; {}", detail.trim()),
    );
}

#[test]
fn criterion_09_hls_brute_force_equivalence() {
    let grid = GridBox::square2(64);
    let disk = unit_disk(64);
    let gauss = sample(
        &Expression::Gaussian {
            center: [0.4, -0.2, 0.0],
            sigma: 0.5,
        },
        &grid,
    );
    let bump = sample(&Expression::BumpSum { seed: 42001 }, &grid).abs();
    let kernel = KernelChoice::Identity;
    let mut worst_value: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for (f, g) in [(&disk, &disk), (&disk, &gauss), (&gauss, &bump)] {
        let form = fracpot::inequalities::hls_form(f, g, &kernel, 1.0).unwrap();
        let oracle = brute_force_form(f, g, 1.0);
        worst_value = worst_value.max(((form.value - oracle) / oracle).abs());
        worst_gap = worst_gap.max(form.relative_gap());
    }
    verdict_line(
        "criterion 9 (bilinear form vs brute force)",
        worst_value <= 2e-2 && worst_gap <= 1e-2,
        &format!("worst oracle deviation {worst_value:.3e}, worst Fubini gap {worst_gap:.3e}"),
    );
}

fn brute_force_form(f: &GridFunction, g: &GridFunction, lambda: f64) -> f64 {
    let grid = &f.grid;
    let n = grid.cell_count();
    let vol = grid.cell_volume();
    let mut centers = Vec::with_capacity(n);
    for i in 0..n {
        centers.push(grid.cell_center(grid.multi_index(i)));
    }
    let sub = 16;
    let h0 = grid.cell_extent(0);
    let h1 = grid.cell_extent(1);
    let mut self_cell = 0.0;
    for a in 0..sub {
        for b in 0..sub {
            let z0 = ((a as f64 + 0.5) / sub as f64 - 0.5) * h0;
            let z1 = ((b as f64 + 0.5) / sub as f64 - 0.5) * h1;
            self_cell += (z0 * z0 + z1 * z1).sqrt().powf(-lambda);
        }
    }
    self_cell *= vol / (sub * sub) as f64;
    let mut total = 0.0;
    for i in 0..n {
        let fi = f.values[i];
        if fi == 0.0 {
            continue;
        }
        let xi = centers[i];
        let mut row = 0.0;
        for (j, gj) in g.values.iter().enumerate() {
            if *gj == 0.0 {
                continue;
            }
            if i == j {
                row += gj * self_cell / vol;
                continue;
            }
            let dx = xi[0] - centers[j][0];
            let dy = xi[1] - centers[j][1];
            row += gj * (dx * dx + dy * dy).sqrt().powf(-lambda);
        }
        total += fi * row;
    }
    (total * vol * vol).abs()
}

#[test]
fn criterion_10_kernel_shift_lemma() {
    let (outcome, _) = suite("dini-lemma");
    let mut pass = true;
    let mut detail = String::new();
    for r in outcome
        .reports
        .iter()
        .filter(|r| r.check_id == "shell-shift-lemma")
    {
        pass &= r.verdict == Verdict::Pass;
        let ratios: Vec<f64> = r.ratios.iter().map(|e| e.ratio).collect();
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        detail.push_str(&format!("{} band {:.3} ", r.config.kernel, hi / lo));
    }
    verdict_line(
        "criterion 10 (kernel-shift shell estimate)",
        pass,
        &format!("{} (bands must stay within factor 4)", detail.trim()),
    );
}

#[test]
fn criterion_11_verify_outputs_are_byte_deterministic() {
    let exe = env!("CARGO_BIN_EXE_fracpot");
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("exp.toml");
    std::fs::write(
        &config_path,
        "[grid]\ndimension = 2\nlower = [-2.0, -2.0]\nupper = [2.0, 2.0]\nresolution = 48\n\n\
         [run]\nsuites = [\"embeddings\"]\nlattice_per_axis = 12\n\n\
         [family]\ncenters_per_axis = 4\nradii_count = 5\n",
    )
    .unwrap();
    let mut bytes = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("out{run}"));
        let status = std::process::Command::new(exe)
            .args([
                "verify",
                "embeddings",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "verify failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        let csv = std::fs::read(out.join("embeddings.csv")).unwrap();
        let json = std::fs::read(out.join("embeddings.json")).unwrap();
        bytes.push((csv, json));
    }
    let identical = bytes[0] == bytes[1];
    verdict_line(
        "criterion 11 (byte-deterministic verify outputs)",
        identical,
        &format!(
            "csv {} bytes, json {} bytes, identical across runs: {identical}",
            bytes[0].0.len(),
            bytes[0].1.len()
        ),
    );
}
