//! Named verification suites: each one builds its exponent configurations,
//! runs the checks at the base scale and at a refined scale (resolution and
//! ball-family doubling) and reports fitted constants with stability deltas.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::GridBox;
use crate::kernel::{dini_integral, Kernel};
use crate::norms::{self, Region};
use crate::operators::KernelChoice;
use crate::zoo;

use super::checks::{
    adams_check, attach_stability, boundedness_sweep, domination_check, embedding_check,
    hedberg_check, hls_form, holder_lemma_check, shell_lemma_check, FieldCache, Harness,
    HarnessSettings, OperatorTag, SourceNorm, TargetNorm, EXACT_CONSTANT_TOL,
    STABILITY_THRESHOLD,
};
use super::exponents::ExponentConfig;
use super::report::{relative_delta, ConfigSummary, RatioEntry, Verdict, VerificationReport};

pub const SUITE_NAMES: &[&str] = &[
    "hedberg",
    "adams",
    "lebesgue",
    "morrey",
    "endpoint-logl",
    "critical-bmo",
    "critical-linf",
    "embeddings",
    "hls",
    "olsen",
    "domination",
    "dini-lemma",
];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub reports: Vec<VerificationReport>,
}

impl SuiteOutcome {
    pub fn overall(&self) -> Verdict {
        let mut verdict = Verdict::Pass;
        for r in &self.reports {
            match r.verdict {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Inconclusive => verdict = Verdict::Inconclusive,
                Verdict::Pass => {}
            }
        }
        verdict
    }
}

fn kernel_by_name(dim: usize, name: &str) -> Result<KernelChoice> {
    if name == "identity" {
        Ok(KernelChoice::Identity)
    } else {
        Ok(KernelChoice::omega(Kernel::by_name(dim, name)?))
    }
}

/// Run both scales of a check and attach the stability delta.
fn paired<F>(base: &Harness, refined: &Harness, threshold: Option<f64>, run: F) -> Result<VerificationReport>
where
    F: Fn(&Harness) -> Result<VerificationReport>,
{
    let a = run(base)?;
    let b = run(refined)?;
    match threshold {
        Some(t) => Ok(attach_stability(&a, b, t)),
        None => {
            let mut out = b;
            out.refinement_deltas = vec![relative_delta(a.fitted_constant, out.fitted_constant)];
            if a.verdict == Verdict::Fail {
                out.verdict = Verdict::Fail;
                out.notes.push("base-scale run failed".to_string());
            }
            Ok(out)
        }
    }
}

/// Execute a named suite.
pub fn run_suite(
    name: &str,
    dim: usize,
    settings: &HarnessSettings,
    cache: Arc<FieldCache>,
) -> Result<SuiteOutcome> {
    if !SUITE_NAMES.contains(&name) {
        return Err(Error::param(format!(
            "unknown suite {name:?}; available: {}",
            SUITE_NAMES.join(", ")
        )));
    }
    if name == "dini-lemma" {
        return dini_lemma_suite(dim);
    }
    let base = Harness::new(dim, settings.clone(), cache.clone());
    let refined = base.refined();
    let reports = match name {
        "hedberg" => hedberg_suite(&base, &refined)?,
        "adams" => adams_suite(&base, &refined)?,
        "lebesgue" => lebesgue_suite(&base, &refined)?,
        "morrey" => morrey_suite(&base, &refined)?,
        "endpoint-logl" => endpoint_logl_suite(&base, &refined)?,
        "critical-bmo" => critical_bmo_suite(&base, &refined)?,
        "critical-linf" => critical_linf_suite(&base, &refined)?,
        "embeddings" => embeddings_suite(&base, &refined)?,
        "hls" => hls_suite(&base, &refined)?,
        "olsen" => olsen_suite(&base, &refined)?,
        "domination" => domination_suite(&base, &refined)?,
        _ => unreachable!(),
    };
    Ok(SuiteOutcome {
        suite: name.to_string(),
        reports,
    })
}

fn hedberg_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let configs = [
        ("identity", ExponentConfig::new(dim, 0.5, f64::INFINITY, 2.0)),
        ("cos2", ExponentConfig::new(dim, 0.5, 2.0, 2.0)),
        ("cos2", ExponentConfig::new(dim, 0.5, 4.0, 2.0)),
    ];
    let mut reports = Vec::new();
    for (kname, cfg) in configs {
        let kernel = kernel_by_name(dim, kname)?;
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            hedberg_check(h, &kernel, &cfg)
        })?);
    }
    Ok(reports)
}

fn adams_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let configs = [
        (
            "identity",
            ExponentConfig::new(dim, 0.5, f64::INFINITY, 2.0).with_kappa(0.25),
        ),
        ("cos2", ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_kappa(0.25)),
    ];
    let mut reports = Vec::new();
    for (kname, cfg) in configs {
        let kernel = kernel_by_name(dim, kname)?;
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            adams_check(h, &kernel, &cfg)
        })?);
    }
    Ok(reports)
}

fn lebesgue_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let mut reports = Vec::new();

    // Strong (p, q) for the integral and the maximal operator.
    for (kname, s) in [("identity", f64::INFINITY), ("cos2", 4.0)] {
        let kernel = kernel_by_name(dim, kname)?;
        let cfg = ExponentConfig::new(dim, 0.5, s, 2.0).with_q(4.0);
        for (op, id) in [
            (OperatorTag::FracIntegral, "lebesgue-strong-integral"),
            (OperatorTag::FracMaximal, "lebesgue-strong-maximal"),
        ] {
            reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
                boundedness_sweep(h, op, &kernel, &cfg, SourceNorm::Lp, TargetNorm::Lq, id, vec![])
            })?);
        }
    }

    // Weak (p, q) at s' = p, with the strong ratio reported for contrast.
    let kernel = kernel_by_name(dim, "cos2")?;
    let cfg = ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_q(4.0);
    for (op, id) in [
        (OperatorTag::FracIntegral, "lebesgue-weak-integral"),
        (OperatorTag::FracMaximal, "lebesgue-weak-maximal"),
    ] {
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            let mut report = boundedness_sweep(
                h,
                op,
                &kernel,
                &cfg,
                SourceNorm::Lp,
                TargetNorm::WeakLq,
                id,
                vec![],
            )?;
            // Strong-norm ratio on the same configuration, for contrast only.
            let mut contrast: f64 = 0.0;
            for f in &h.zoo {
                let src = norms::lp_norm(f, cfg.p, Region::All)?;
                if src == 0.0 {
                    continue;
                }
                let field = match op {
                    OperatorTag::FracIntegral => h.t_field(f, &kernel, cfg.alpha)?,
                    OperatorTag::FracMaximal => h.m_field(f, &kernel, cfg.alpha)?,
                };
                let tgt = norms::lp_norm(&field, cfg.q.unwrap(), Region::All)?;
                contrast = contrast.max(tgt / src);
            }
            report
                .notes
                .push(format!("strong-norm ratio on the weak config: {contrast:.6}"));
            Ok(report)
        })?);
    }
    Ok(reports)
}

fn morrey_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let mut reports = Vec::new();
    let strong_cfg = ExponentConfig::new(dim, 0.5, f64::INFINITY, 2.0).with_kappa(0.25);
    let weak_cfg = ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_kappa(0.25);
    let identity = kernel_by_name(dim, "identity")?;
    let cos2 = kernel_by_name(dim, "cos2")?;
    for (op, id) in [
        (OperatorTag::FracIntegral, "morrey-strong-integral"),
        (OperatorTag::FracMaximal, "morrey-strong-maximal"),
    ] {
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            boundedness_sweep(
                h,
                op,
                &identity,
                &strong_cfg,
                SourceNorm::Morrey,
                TargetNorm::Morrey,
                id,
                vec![],
            )
        })?);
    }
    for (op, id) in [
        (OperatorTag::FracIntegral, "morrey-weak-integral"),
        (OperatorTag::FracMaximal, "morrey-weak-maximal"),
    ] {
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            boundedness_sweep(
                h,
                op,
                &cos2,
                &weak_cfg,
                SourceNorm::Morrey,
                TargetNorm::WeakMorrey,
                id,
                vec![],
            )
        })?);
    }
    Ok(reports)
}

fn endpoint_logl_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let kernel = kernel_by_name(dim, "cos2")?;
    let lebesgue_cfg = ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_q(4.0);
    let morrey_cfg = ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_kappa(0.25);
    let mut reports = Vec::new();
    reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
        boundedness_sweep(
            h,
            OperatorTag::FracIntegral,
            &kernel,
            &lebesgue_cfg,
            SourceNorm::LpLoglBall,
            TargetNorm::LqBall,
            "logl-endpoint-ball",
            vec![],
        )
    })?);
    reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
        boundedness_sweep(
            h,
            OperatorTag::FracIntegral,
            &kernel,
            &morrey_cfg,
            SourceNorm::MorreyLlogl,
            TargetNorm::Morrey,
            "morrey-logl-endpoint",
            vec![],
        )
    })?);
    Ok(reports)
}

/// Gate a critical-case check on the kernel's Dini integral being finite.
fn dini_gate(dim: usize, kname: &str, s: f64) -> Result<Option<String>> {
    if kname == "identity" {
        return Ok(None);
    }
    let kernel = Kernel::by_name(dim, kname)?;
    let report = dini_integral(&kernel, if s.is_finite() { s } else { 2.0 })?;
    if report.is_finite() {
        Ok(None)
    } else {
        Ok(Some(format!(
            "kernel {kname} fails the Dini condition (fitted exponent {:?})",
            report.fitted_exponent
        )))
    }
}

fn critical_bmo_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let n = dim as f64;
    let mut reports = Vec::new();

    // Critical Lebesgue index p = n/α, s >= n/(n-α).
    let alpha = n / 2.0;
    for (kname, s) in [("cos2", n / (n - alpha)), ("cos", 4.0)] {
        let cfg = ExponentConfig::new(dim, alpha, s, 2.0);
        if let Some(reason) = dini_gate(dim, kname, s)? {
            reports.push(VerificationReport::inconclusive(
                "critical-bmo-integral",
                ConfigSummary::from_config(&cfg, kname),
                reason,
            ));
            continue;
        }
        let kernel = kernel_by_name(dim, kname)?;
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            boundedness_sweep(
                h,
                OperatorTag::FracIntegral,
                &kernel,
                &cfg,
                SourceNorm::Lp,
                TargetNorm::Bmo,
                "critical-bmo-integral",
                vec![],
            )
        })?);
    }

    // Weak-Lebesgue source at the critical index (s strictly above n/(n-α)).
    let cfg = ExponentConfig::new(dim, alpha, 4.0, 2.0);
    if dini_gate(dim, "cos", 4.0)?.is_none() {
        let kernel = kernel_by_name(dim, "cos")?;
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            boundedness_sweep(
                h,
                OperatorTag::FracIntegral,
                &kernel,
                &cfg,
                SourceNorm::WeakLp,
                TargetNorm::Bmo,
                "weak-source-bmo",
                vec![],
            )
        })?);
    }

    // Critical Morrey parameter κ = 1 - αp/n.
    let cfg = ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_kappa(1.0 - 0.5 * 2.0 / n);
    if let Some(reason) = dini_gate(dim, "cos2", 2.0)? {
        reports.push(VerificationReport::inconclusive(
            "morrey-critical-bmo",
            ConfigSummary::from_config(&cfg, "cos2"),
            reason,
        ));
    } else {
        let kernel = kernel_by_name(dim, "cos2")?;
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            boundedness_sweep(
                h,
                OperatorTag::FracIntegral,
                &kernel,
                &cfg,
                SourceNorm::Morrey,
                TargetNorm::Bmo,
                "morrey-critical-bmo",
                vec![],
            )
        })?);
    }
    Ok(reports)
}

fn critical_linf_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let n = dim as f64;
    let alpha = n / 2.0;
    let mut reports = Vec::new();
    for (kname, s) in [("cos2", n / (n - alpha)), ("cos", 4.0)] {
        let kernel = kernel_by_name(dim, kname)?;
        let cfg = ExponentConfig::new(dim, alpha, s, 2.0);
        reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
            boundedness_sweep(
                h,
                OperatorTag::FracMaximal,
                &kernel,
                &cfg,
                SourceNorm::Lp,
                TargetNorm::Linf,
                "critical-linf-maximal",
                vec![],
            )
        })?);
    }

    let kernel = kernel_by_name(dim, "cos")?;
    let cfg = ExponentConfig::new(dim, alpha, 4.0, 2.0);
    reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
        boundedness_sweep(
            h,
            OperatorTag::FracMaximal,
            &kernel,
            &cfg,
            SourceNorm::WeakLp,
            TargetNorm::Linf,
            "weak-source-linf",
            vec![],
        )
    })?);

    let cfg = ExponentConfig::new(dim, 0.5, 2.0, 2.0).with_kappa(1.0 - 0.5 * 2.0 / n);
    let kernel = kernel_by_name(dim, "cos2")?;
    reports.push(paired(base, refined, Some(STABILITY_THRESHOLD), |h| {
        boundedness_sweep(
            h,
            OperatorTag::FracMaximal,
            &kernel,
            &cfg,
            SourceNorm::Morrey,
            TargetNorm::Linf,
            "morrey-critical-linf",
            vec![],
        )
    })?);
    Ok(reports)
}

fn embeddings_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();

    // Inclusion between Morrey spaces (constant 1) plus the explicit-constant
    // weak-Lebesgue embedding, on a shared configuration.
    reports.push(paired(base, refined, None, |h| {
        let mut ratios = Vec::new();
        for f in &h.zoo {
            let rep = embedding_check(f, Some(4.0), 2.0, 0.5, Some(1.0), &h.family)?;
            if rep.ratios.is_empty() {
                continue;
            }
            ratios.push(RatioEntry {
                label: f.label.clone(),
                ratio: rep.fitted_constant,
            });
        }
        let fitted = ratios.iter().map(|r| r.ratio).fold(0.0, f64::max);
        Ok(VerificationReport::finish(
            "embedding-inclusion",
            ConfigSummary {
                dim: h.dim,
                alpha: f64::NAN,
                s: f64::INFINITY,
                p: 4.0,
                q: Some(2.0),
                kappa: Some(0.5),
                r: None,
                lambda_hls: None,
                kernel: String::new(),
            },
            ratios,
            fitted,
            Some(1.0 + EXACT_CONSTANT_TOL),
            Vec::new(),
            None,
            vec!["Morrey inclusion with constant 1 and weak-source embedding".to_string()],
        ))
    })?);

    // Explicit-constant embedding on three exponent pairs.
    for (p, q) in [(2.0, 1.0), (3.0, 1.5), (4.0, 2.0)] {
        let kappa = 1.0 - q / p;
        reports.push(paired(base, refined, None, |h| {
            let mut ratios = Vec::new();
            for f in &h.zoo {
                let rep = embedding_check(f, Some(p), q, kappa, None, &h.family)?;
                if rep.ratios.is_empty() {
                    continue;
                }
                ratios.push(RatioEntry {
                    label: f.label.clone(),
                    ratio: rep.fitted_constant,
                });
            }
            let fitted = ratios.iter().map(|r| r.ratio).fold(0.0, f64::max);
            Ok(VerificationReport::finish(
                "embedding-weak-constant",
                ConfigSummary {
                    dim: h.dim,
                    alpha: f64::NAN,
                    s: f64::INFINITY,
                    p,
                    q: Some(q),
                    kappa: Some(kappa),
                    r: None,
                    lambda_hls: None,
                    kernel: String::new(),
                },
                ratios,
                fitted,
                Some(1.0 + EXACT_CONSTANT_TOL),
                Vec::new(),
                None,
                vec![format!(
                    "constant (p/(p-q))^(1/q) = {}",
                    (p / (p - q)).powf(1.0 / q)
                )],
            ))
        })?);
    }
    Ok(reports)
}

fn hls_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let n = dim as f64;
    let mut reports = Vec::new();

    // Bilinear form against the product of Lebesgue norms.
    let lambda = n / 2.0;
    let pq = 2.0 * n / (2.0 * n - lambda); // 1/p + 1/q + λ/n = 2 with p = q.
    for kname in ["identity", "cos2"] {
        let kernel = kernel_by_name(dim, kname)?;
        let s = if kname == "identity" { f64::INFINITY } else { 8.0 };
        let cfg = ExponentConfig::new(dim, n - lambda, s, pq)
            .with_q(pq)
            .with_lambda(lambda);
        reports.push(paired(base, refined, None, |h| {
            let grid = hls_grid(h);
            let zoo = zoo::sample_zoo(&grid, h.settings.zoo_seed);
            let mut ratios = Vec::new();
            let mut max_gap: f64 = 0.0;
            for &(i, j) in &h.pairs() {
                let f = &zoo[i];
                let g = &zoo[j];
                let form = hls_form(f, g, &kernel, lambda)?;
                let fp = norms::lp_norm(f, pq, Region::All)?;
                let gq = norms::lp_norm(g, pq, Region::All)?;
                if fp == 0.0 || gq == 0.0 {
                    continue;
                }
                // Mean-zero kernels make the form itself nearly cancel, so
                // the Fubini gap is normalized by the Hölder scale of the
                // estimate rather than by the (possibly tiny) form value.
                max_gap = max_gap.max((form.value - form.adjoint).abs() / (fp * gq));
                ratios.push(RatioEntry {
                    label: format!("{} x {}", f.label, g.label),
                    ratio: form.value / (fp * gq),
                });
            }
            let fitted = ratios.iter().map(|r| r.ratio).fold(0.0, f64::max);
            let mut report = VerificationReport::finish(
                "hls-form",
                ConfigSummary::from_config(&cfg, &kernel.label()),
                ratios,
                fitted,
                None,
                Vec::new(),
                None,
                vec![format!(
                    "max Fubini/adjoint gap over the Holder scale: {max_gap:.2e} (must be <= 1e-2)"
                )],
            );
            if max_gap > 1e-2 {
                report.verdict = Verdict::Fail;
            }
            Ok(report)
        })?);
    }

    // Product bound ‖f · T g‖_r on Lebesgue spaces (strict and boundary r).
    let strong_cases = [
        ("identity", f64::INFINITY, 3.0, 3.0, 0.5),
        ("identity", f64::INFINITY, 2.0, 2.0, 1.0),
    ];
    for (kname, s, p, q, alpha) in strong_cases {
        let kernel = kernel_by_name(dim, kname)?;
        let r = 1.0 / (1.0 / p + 1.0 / q - alpha / n);
        let cfg = ExponentConfig::new(dim, alpha, s, p).with_q(q).with_r(r);
        reports.push(paired(base, refined, None, |h| {
            product_sweep(h, &kernel, &cfg, ProductKind::Strong, "hls-product-strong")
        })?);
    }

    // Weak product and the L^p log L ball variant at s' = p.
    let p = 2.0;
    let q = 3.0;
    let alpha = 0.5;
    let r = 1.0 / (1.0 / p + 1.0 / q - alpha / n);
    let cfg = ExponentConfig::new(dim, alpha, 2.0, p).with_q(q).with_r(r);
    let kernel = kernel_by_name(dim, "cos2")?;
    reports.push(paired(base, refined, None, |h| {
        product_sweep(h, &kernel, &cfg, ProductKind::Weak, "hls-product-weak")
    })?);
    reports.push(paired(base, refined, None, |h| {
        product_sweep(h, &kernel, &cfg, ProductKind::LogLBall, "hls-product-logl")
    })?);
    Ok(reports)
}

fn hls_grid(h: &Harness) -> GridBox {
    match h.dim {
        2 => GridBox::square2(h.settings.hls_resolution),
        _ => GridBox::cube3(h.settings.hls_resolution.min(24)),
    }
}

enum ProductKind {
    Strong,
    Weak,
    LogLBall,
    OlsenStrong,
    OlsenWeak,
    OlsenLogL,
}

/// Sweep ‖f · T g‖ over zoo pairs for the product/trace inequalities.
fn product_sweep(
    h: &Harness,
    kernel: &KernelChoice,
    cfg: &ExponentConfig,
    kind: ProductKind,
    check_id: &str,
) -> Result<VerificationReport> {
    let r = cfg.r.expect("product checks need r");
    let q = cfg.q.expect("product checks need q");
    let kappa = cfg.kappa;
    let ball = h.endpoint_ball();
    let mut ratios = Vec::new();
    for &(i, j) in &h.pairs() {
        let f_fine = &h.zoo[i];
        let g_fine = &h.zoo[j];
        let f_lat = h.on_lattice(i);
        let tg = h.t_field(g_fine, kernel, cfg.alpha)?;
        let product = f_lat.mul(&tg);

        let (num, den) = match kind {
            ProductKind::Strong => {
                let num = norms::lp_norm(&product, r, Region::All)?;
                let den = norms::lp_norm(f_fine, cfg.p, Region::All)?
                    * norms::lp_norm(g_fine, q, Region::All)?;
                (num, den)
            }
            ProductKind::Weak => {
                let num = norms::weak_lp_norm(&product, r, Region::All)?;
                let den = norms::lp_norm(f_fine, cfg.p, Region::All)?
                    * norms::lp_norm(g_fine, q, Region::All)?;
                (num, den)
            }
            ProductKind::LogLBall => {
                let num = norms::lp_norm(&product, r, Region::Ball(ball))?;
                let den = norms::luxemburg_lplogl(f_fine, cfg.p, ball)?
                    * norms::lp_norm(g_fine, q, Region::Ball(ball))?;
                (num, den)
            }
            ProductKind::OlsenStrong => {
                let kappa = kappa.expect("Olsen checks need kappa");
                let num = norms::morrey_norm(&product, r, kappa, &h.family)?;
                let den = norms::morrey_norm(f_fine, cfg.p, kappa, &h.family)?
                    * norms::morrey_norm(g_fine, q, kappa, &h.family)?;
                (num, den)
            }
            ProductKind::OlsenWeak => {
                let kappa = kappa.expect("Olsen checks need kappa");
                let num = norms::weak_morrey_norm(&product, r, kappa, &h.family)?;
                let den = norms::morrey_norm(f_fine, cfg.p, kappa, &h.family)?
                    * norms::morrey_norm(g_fine, q, kappa, &h.family)?;
                (num, den)
            }
            ProductKind::OlsenLogL => {
                let kappa = kappa.expect("Olsen checks need kappa");
                let num = norms::morrey_norm(&product, r, kappa, &h.family)?;
                let den = norms::morrey_llogl_norm(f_fine, cfg.p, kappa, &h.family)?
                    * norms::morrey_norm(g_fine, q, kappa, &h.family)?;
                (num, den)
            }
        };
        if den > 0.0 {
            ratios.push(RatioEntry {
                label: format!("{} x {}", f_fine.label, g_fine.label),
                ratio: num / den,
            });
        }
    }
    let fitted = ratios.iter().map(|e| e.ratio).fold(0.0, f64::max);
    Ok(VerificationReport::finish(
        check_id,
        ConfigSummary::from_config(cfg, &kernel.label()),
        ratios,
        fitted,
        None,
        Vec::new(),
        None,
        Vec::new(),
    ))
}

fn olsen_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let n = dim as f64;
    let alpha = 0.5;
    let kappa = 0.25;
    let p = 2.0;
    let q = 2.0;
    let r = 1.0 / (1.0 / p + 1.0 / q - alpha / (n * (1.0 - kappa)));
    let mut reports = Vec::new();

    let strong_cfg = ExponentConfig::new(dim, alpha, 8.0, p)
        .with_q(q)
        .with_kappa(kappa)
        .with_r(r);
    let kernel = kernel_by_name(dim, "cos2")?;
    reports.push(paired(base, refined, None, |h| {
        product_sweep(h, &kernel, &strong_cfg, ProductKind::OlsenStrong, "olsen-strong")
    })?);

    let weak_cfg = ExponentConfig::new(dim, alpha, 2.0, p)
        .with_q(q)
        .with_kappa(kappa)
        .with_r(r);
    let weak_kernel = kernel_by_name(dim, "cos2")?;
    reports.push(paired(base, refined, None, |h| {
        product_sweep(h, &weak_kernel, &weak_cfg, ProductKind::OlsenWeak, "olsen-weak")
    })?);
    reports.push(paired(base, refined, None, |h| {
        product_sweep(h, &weak_kernel, &weak_cfg, ProductKind::OlsenLogL, "olsen-logl")
    })?);

    // Hölder's inequality for Morrey spaces with constant one.
    reports.push(paired(base, refined, None, |h| {
        holder_lemma_check(h, p, q, kappa)
    })?);
    Ok(reports)
}

fn domination_suite(base: &Harness, refined: &Harness) -> Result<Vec<VerificationReport>> {
    let dim = base.dim;
    let alpha = dim as f64 / 2.0;
    let mut reports = Vec::new();
    for kname in ["cos2", "bump"] {
        let kernel = kernel_by_name(dim, kname)?;
        reports.push(paired(base, refined, None, |h| {
            domination_check(h, &kernel, alpha)
        })?);
    }
    Ok(reports)
}

fn dini_lemma_suite(dim: usize) -> Result<SuiteOutcome> {
    let mut reports = Vec::new();
    for kname in ["cos", "bump"] {
        let kernel = Kernel::by_name(dim, kname)?;
        reports.push(shell_lemma_check(&kernel, dim as f64 / 2.0, 2.0)?);
    }

    // Dini integral report across the kernel zoo.
    let mut ratios = Vec::new();
    let mut all_finite = true;
    for kname in crate::kernel::Profile::zoo_names() {
        let kernel = Kernel::by_name(dim, kname)?;
        for s in [2.0, f64::INFINITY] {
            let rep = dini_integral(&kernel, s)?;
            all_finite &= rep.is_finite();
            ratios.push(RatioEntry {
                label: format!("{kname},s={}", if s.is_finite() { s.to_string() } else { "inf".into() }),
                ratio: rep.total(),
            });
        }
    }
    let fitted = ratios.iter().map(|e| e.ratio).fold(0.0, f64::max);
    let mut report = VerificationReport::finish(
        "dini-integrals",
        ConfigSummary::bare(dim, f64::NAN, ""),
        ratios,
        fitted,
        None,
        Vec::new(),
        None,
        vec!["Dini integrals of the kernel zoo".to_string()],
    );
    if !all_finite {
        report.verdict = Verdict::Fail;
    }
    reports.push(report);
    Ok(SuiteOutcome {
        suite: "dini-lemma".to_string(),
        reports,
    })
}
