//! Per-check verification records: measured ratios, fitted constants,
//! refinement deltas and the pass/fail verdict.

use serde::Serialize;

use super::exponents::ExponentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One measured ratio, labelled by the test function (or pair) it came from.
#[derive(Clone, Debug, Serialize)]
pub struct RatioEntry {
    pub label: String,
    pub ratio: f64,
}

/// Exponent snapshot attached to every report row.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigSummary {
    pub dim: usize,
    pub alpha: f64,
    #[serde(serialize_with = "super::exponents::serialize_exp")]
    pub s: f64,
    pub p: f64,
    pub q: Option<f64>,
    pub kappa: Option<f64>,
    pub r: Option<f64>,
    pub lambda_hls: Option<f64>,
    pub kernel: String,
}

impl ConfigSummary {
    pub fn from_config(cfg: &ExponentConfig, kernel: &str) -> ConfigSummary {
        ConfigSummary {
            dim: cfg.dim,
            alpha: cfg.alpha,
            s: cfg.s,
            p: cfg.p,
            q: cfg.q,
            kappa: cfg.kappa,
            r: cfg.r,
            lambda_hls: cfg.lambda_hls,
            kernel: kernel.to_string(),
        }
    }

    pub fn bare(dim: usize, alpha: f64, kernel: &str) -> ConfigSummary {
        ConfigSummary {
            dim,
            alpha,
            s: f64::INFINITY,
            p: f64::NAN,
            q: None,
            kappa: None,
            r: None,
            lambda_hls: None,
            kernel: kernel.to_string(),
        }
    }
}

/// Record of one verification check across the zoo.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub config: ConfigSummary,
    pub ratios: Vec<RatioEntry>,
    /// The fitted constant: the observed sup of the relevant ratio.
    pub fitted_constant: f64,
    /// Relative changes of the fitted constant under refinement.
    pub refinement_deltas: Vec<f64>,
    /// Threshold applied to the deltas, when stability is part of the verdict.
    pub delta_threshold: Option<f64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// Assemble a report: pass requires every ratio finite, the fitted
    /// constant below `constant_bound` (when one is asserted) and every
    /// refinement delta below the threshold (when one is set).
    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        check_id: impl Into<String>,
        config: ConfigSummary,
        ratios: Vec<RatioEntry>,
        fitted_constant: f64,
        constant_bound: Option<f64>,
        refinement_deltas: Vec<f64>,
        delta_threshold: Option<f64>,
        notes: Vec<String>,
    ) -> VerificationReport {
        let finite = ratios.iter().all(|r| r.ratio.is_finite()) && fitted_constant.is_finite();
        let within_bound = constant_bound.map(|b| fitted_constant <= b).unwrap_or(true);
        let stable = match delta_threshold {
            Some(t) => refinement_deltas.iter().all(|d| d.abs() <= t),
            None => true,
        };
        let verdict = if ratios.is_empty() {
            Verdict::Inconclusive
        } else if finite && within_bound && stable {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        VerificationReport {
            check_id: check_id.into(),
            config,
            ratios,
            fitted_constant,
            refinement_deltas,
            delta_threshold,
            verdict,
            notes,
        }
    }

    pub fn inconclusive(
        check_id: impl Into<String>,
        config: ConfigSummary,
        reason: impl Into<String>,
    ) -> VerificationReport {
        VerificationReport {
            check_id: check_id.into(),
            config,
            ratios: Vec::new(),
            fitted_constant: f64::NAN,
            refinement_deltas: Vec::new(),
            delta_threshold: None,
            verdict: Verdict::Inconclusive,
            notes: vec![reason.into()],
        }
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios
            .iter()
            .map(|r| r.ratio)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Relative change between two fitted constants.
pub fn relative_delta(base: f64, refined: f64) -> f64 {
    if base == 0.0 && refined == 0.0 {
        0.0
    } else {
        (refined - base) / base.abs().max(1e-300)
    }
}
