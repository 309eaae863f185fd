//! Exponent bookkeeping: the configuration tuple (n, α, s, p, q, κ, r, λ) and
//! the classifier that decides which boundedness results apply to it.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance for testing the exponent relations for equality.
pub const REL_TOL: f64 = 1e-9;

/// The exponent tuple of a verification configuration. Optional members are
/// present only when the checks that use them are requested.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentConfig {
    pub dim: usize,
    pub alpha: f64,
    /// Kernel integrability exponent on the sphere (∞ allowed).
    #[serde(serialize_with = "serialize_exp")]
    pub s: f64,
    pub p: f64,
    pub q: Option<f64>,
    pub kappa: Option<f64>,
    pub r: Option<f64>,
    pub lambda_hls: Option<f64>,
}

pub(crate) fn serialize_exp<S: serde::Serializer>(v: &f64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        ser.serialize_f64(*v)
    } else {
        ser.serialize_str("inf")
    }
}

impl ExponentConfig {
    pub fn new(dim: usize, alpha: f64, s: f64, p: f64) -> ExponentConfig {
        ExponentConfig {
            dim,
            alpha,
            s,
            p,
            q: None,
            kappa: None,
            r: None,
            lambda_hls: None,
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda_hls = Some(lambda);
        self
    }

    /// Hölder conjugate of the kernel exponent: s' = s/(s-1), with s = ∞
    /// giving s' = 1.
    pub fn s_conj(&self) -> f64 {
        conjugate(self.s)
    }

    /// 1/q = 1/p - α/n.
    pub fn q_sobolev(&self) -> Option<f64> {
        let inv = 1.0 / self.p - self.alpha / self.dim as f64;
        (inv > 0.0).then(|| 1.0 / inv)
    }

    /// 1/q = 1/p - α/(n(1-κ)).
    pub fn q_adams(&self) -> Option<f64> {
        let kappa = self.kappa?;
        let inv = 1.0 / self.p - self.alpha / (self.dim as f64 * (1.0 - kappa));
        (inv > 0.0).then(|| 1.0 / inv)
    }

    /// The critical Morrey parameter κ = 1 - αp/n (= p/q at the Sobolev q).
    pub fn kappa_critical(&self) -> f64 {
        1.0 - self.alpha * self.p / self.dim as f64
    }

    /// The critical Lebesgue index n/α.
    pub fn p_critical(&self) -> f64 {
        self.dim as f64 / self.alpha
    }
}

pub fn conjugate(e: f64) -> f64 {
    if e.is_infinite() {
        1.0
    } else {
        e / (e - 1.0)
    }
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Which results of the theory apply to a configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum TheoremTag {
    /// Strong (p, q) boundedness of T and M on Lebesgue spaces (s' < p < n/α).
    StrongPQ,
    /// Weak (p, q) boundedness at the endpoint s' = p.
    WeakPQ,
    /// L^q(B) against the L^p log L(B) Luxemburg norm at s' = p.
    LpLogLEndpoint,
    /// L^{n/α} → BMO for Dini kernels at the critical index.
    CriticalBmo,
    /// L^{n/α} → L^∞ for the maximal operator at the critical index.
    CriticalLinf,
    /// Strong Morrey boundedness with the Adams exponent relation.
    MorreyStrong,
    /// Weak Morrey boundedness at s' = p.
    MorreyWeak,
    /// Morrey-Orlicz endpoint at s' = p.
    MorreyLoglEndpoint,
    /// L^{p,κ} → BMO at the critical κ = 1 - αp/n (Dini kernels).
    MorreyCriticalBmo,
    /// L^{p,κ} → L^∞ for the maximal operator at the critical κ.
    MorreyCriticalLinf,
    /// Weak-Lebesgue source → BMO at p = n/α (s > n/(n-α) strictly).
    WeakSourceBmo,
    /// Weak-Lebesgue source → L^∞ at p = n/α (s > n/(n-α) strictly).
    WeakSourceLinf,
    /// Bilinear Hardy–Littlewood–Sobolev form bound.
    Hls,
    /// Product bound ‖f·T g‖_{L^r} on Lebesgue spaces.
    ProductStrong,
    /// Weak product bound at s' = p or s' = q.
    ProductWeak,
    /// Product bound with an L^p log L factor on a ball.
    ProductLogL,
    /// Olsen trace inequality on Morrey spaces.
    OlsenStrong,
    /// Weak-Morrey Olsen inequality at s' = p or s' = q.
    OlsenWeak,
    /// Olsen inequality with a Morrey-Orlicz factor.
    OlsenLogL,
}

/// Derived exponents the classifier solves for.
#[derive(Clone, Debug, Default, Serialize)]
pub struct DerivedExponents {
    pub q_sobolev: Option<f64>,
    pub q_adams: Option<f64>,
    pub kappa_critical: Option<f64>,
    /// Olsen dual exponents 1/q* = 1/q - α/(n(1-κ)), 1/p* = 1/p - α/(n(1-κ)).
    pub q_star: Option<f64>,
    pub p_star: Option<f64>,
    /// Embedding target 1 - κ* = (1 - κ)(q*/q) for the declared q, κ and
    /// the Sobolev q* of the configuration, when available.
    pub kappa_star: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub tags: Vec<TheoremTag>,
    pub derived: DerivedExponents,
    /// Explanations for hypotheses that failed; relations that do not hold
    /// produce an explanation instead of a tag.
    pub explanations: Vec<String>,
}

impl Classification {
    pub fn has(&self, tag: TheoremTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn require(&self, tag: TheoremTag) -> Result<()> {
        if self.has(tag) {
            Ok(())
        } else {
            Err(Error::Hypothesis(format!(
                "{tag:?} does not apply: {}",
                self.explanations.join("; ")
            )))
        }
    }
}

/// Decide which theorems apply to the configuration and solve the derived
/// exponents. Structural violations (α outside (0, n), s <= 1, p < 1) are
/// errors; failed relations are reported as explanations.
pub fn classify(cfg: &ExponentConfig) -> Result<Classification> {
    let n = cfg.dim as f64;
    if cfg.dim != 2 && cfg.dim != 3 {
        return Err(Error::param(format!("dimension must be 2 or 3, got {}", cfg.dim)));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < n) {
        return Err(Error::param(format!(
            "order must lie in (0, {n}), got {}",
            cfg.alpha
        )));
    }
    if !(cfg.s > 1.0) {
        return Err(Error::param(format!(
            "kernel integrability must satisfy s > 1, got {}",
            cfg.s
        )));
    }
    if !(cfg.p >= 1.0) {
        return Err(Error::param(format!("p must be >= 1, got {}", cfg.p)));
    }

    let sc = cfg.s_conj();
    let p_crit = cfg.p_critical();
    let mut tags = Vec::new();
    let mut notes = Vec::new();
    let mut derived = DerivedExponents {
        q_sobolev: cfg.q_sobolev(),
        q_adams: cfg.q_adams(),
        kappa_critical: Some(cfg.kappa_critical()),
        ..Default::default()
    };

    // A declared q must match one of the operator relations, unless it is the
    // second-factor exponent of a product/bilinear configuration (those are
    // validated against their own relation below).
    if let Some(q) = cfg.q {
        let sobolev_ok = derived.q_sobolev.map(|qq| approx_eq(q, qq)).unwrap_or(false);
        let adams_ok = derived.q_adams.map(|qq| approx_eq(q, qq)).unwrap_or(false);
        if !sobolev_ok && !adams_ok && cfg.lambda_hls.is_none() && cfg.r.is_none() {
            notes.push(format!(
                "declared q = {q} satisfies neither 1/q = 1/p - a/n (q = {:?}) nor 1/q = 1/p - a/(n(1-k)) (q = {:?})",
                derived.q_sobolev, derived.q_adams
            ));
        }
    }

    // Lebesgue-scale tags.
    if cfg.p < p_crit {
        if sc < cfg.p - REL_TOL {
            tags.push(TheoremTag::StrongPQ);
        } else if approx_eq(sc, cfg.p) {
            tags.push(TheoremTag::WeakPQ);
            tags.push(TheoremTag::LpLogLEndpoint);
        } else {
            notes.push(format!(
                "s' = {sc} exceeds p = {}: neither strong nor weak (p, q) hypothesis holds",
                cfg.p
            ));
        }
    } else if approx_eq(cfg.p, p_crit) {
        let s_critical = n / (n - cfg.alpha);
        if cfg.s >= s_critical - REL_TOL {
            tags.push(TheoremTag::CriticalBmo);
            tags.push(TheoremTag::CriticalLinf);
            if cfg.s > s_critical + REL_TOL {
                tags.push(TheoremTag::WeakSourceBmo);
                tags.push(TheoremTag::WeakSourceLinf);
            }
        } else {
            notes.push(format!(
                "critical index p = n/a requires s >= n/(n-a) = {s_critical}, got s = {}",
                cfg.s
            ));
        }
    } else {
        notes.push(format!(
            "p = {} exceeds the critical index n/a = {p_crit}",
            cfg.p
        ));
    }

    // Morrey-scale tags.
    if let Some(kappa) = cfg.kappa {
        if !(0.0..1.0).contains(&kappa) || kappa <= 0.0 {
            notes.push(format!("Morrey parameter must lie in (0, 1), got {kappa}"));
        } else {
            let kappa_max = 1.0 - cfg.alpha * cfg.p / n;
            if kappa < kappa_max - REL_TOL && cfg.p < p_crit {
                if sc < cfg.p - REL_TOL {
                    tags.push(TheoremTag::MorreyStrong);
                } else if approx_eq(sc, cfg.p) {
                    tags.push(TheoremTag::MorreyWeak);
                    tags.push(TheoremTag::MorreyLoglEndpoint);
                }
            } else if approx_eq(kappa, kappa_max) && sc <= cfg.p + REL_TOL && cfg.p < p_crit {
                tags.push(TheoremTag::MorreyCriticalBmo);
                tags.push(TheoremTag::MorreyCriticalLinf);
            } else if kappa > kappa_max + REL_TOL {
                notes.push(format!(
                    "Morrey parameter {kappa} exceeds the admissible bound 1 - ap/n = {kappa_max}"
                ));
            }
        }
    }

    // Bilinear HLS form.
    if let (Some(lambda), Some(q)) = (cfg.lambda_hls, cfg.q) {
        if !(lambda > 0.0 && lambda < n) {
            notes.push(format!("HLS power must lie in (0, n), got {lambda}"));
        } else if !approx_eq(1.0 / cfg.p + 1.0 / q + lambda / n, 2.0) {
            notes.push(format!(
                "HLS relation 1/p + 1/q + lambda/n = 2 fails: {}",
                1.0 / cfg.p + 1.0 / q + lambda / n
            ));
        } else if sc < cfg.p - REL_TOL && sc < q - REL_TOL {
            tags.push(TheoremTag::Hls);
        } else {
            notes.push(format!("HLS requires s' < p and s' < q, got s' = {sc}"));
        }
    }

    // Product bounds ‖f · T g‖.
    if let (Some(r), Some(q)) = (cfg.r, cfg.q) {
        let min_pq = cfg.p.min(q);
        match cfg.kappa {
            None => {
                let relation = 1.0 / cfg.p + 1.0 / q - cfg.alpha / n;
                if approx_eq(relation, 1.0 / r) {
                    if r > min_pq + REL_TOL {
                        notes.push(format!("product exponent r = {r} exceeds min(p, q) = {min_pq}"));
                    } else {
                        if approx_eq(r, min_pq) {
                            notes.push(format!(
                                "product exponent r = {r} sits on the critical boundary r = min(p, q)"
                            ));
                        }
                        if sc < cfg.p - REL_TOL && sc < q - REL_TOL {
                            tags.push(TheoremTag::ProductStrong);
                        } else if approx_eq(sc, cfg.p) || approx_eq(sc, q) {
                            tags.push(TheoremTag::ProductWeak);
                            tags.push(TheoremTag::ProductLogL);
                        } else {
                            notes.push(format!("product bound requires s' <= p, q; s' = {sc}"));
                        }
                    }
                } else {
                    notes.push(format!(
                        "product relation 1/p + 1/q = 1/r + a/n fails: lhs-a/n = {relation}, 1/r = {}",
                        1.0 / r
                    ));
                }
            }
            Some(kappa) if kappa > 0.0 && kappa < 1.0 => {
                let relation = 1.0 / cfg.p + 1.0 / q - cfg.alpha / (n * (1.0 - kappa));
                if approx_eq(relation, 1.0 / r) {
                    if r > min_pq + REL_TOL {
                        notes.push(format!("Olsen exponent r = {r} exceeds min(p, q) = {min_pq}"));
                    } else if sc < cfg.p - REL_TOL && sc < q - REL_TOL {
                        tags.push(TheoremTag::OlsenStrong);
                    } else if approx_eq(sc, cfg.p) || approx_eq(sc, q) {
                        tags.push(TheoremTag::OlsenWeak);
                        tags.push(TheoremTag::OlsenLogL);
                    } else {
                        notes.push(format!("Olsen bound requires s' <= p, q; s' = {sc}"));
                    }
                } else {
                    notes.push(format!(
                        "Olsen relation 1/p + 1/q = 1/r + a/(n(1-k)) fails: lhs-a/(n(1-k)) = {relation}, 1/r = {}",
                        1.0 / r
                    ));
                }
            }
            Some(kappa) => notes.push(format!("Olsen requires 0 < kappa < 1, got {kappa}")),
        }
    }

    // Olsen dual exponents.
    if let (Some(q), Some(kappa)) = (cfg.q, cfg.kappa) {
        let inv_qs = 1.0 / q - cfg.alpha / (n * (1.0 - kappa));
        if inv_qs > 0.0 {
            derived.q_star = Some(1.0 / inv_qs);
        }
        let inv_ps = 1.0 / cfg.p - cfg.alpha / (n * (1.0 - kappa));
        if inv_ps > 0.0 {
            derived.p_star = Some(1.0 / inv_ps);
        }
        if let Some(qs) = derived.q_sobolev {
            derived.kappa_star = Some(1.0 - (1.0 - kappa) * (qs / q).min(1.0));
        }
    }

    tags.sort();
    tags.dedup();
    Ok(Classification {
        tags,
        derived,
        explanations: notes,
    })
}
