//! Homogeneous degree-zero kernels Ω: evaluation, spherical L^s norms, the
//! polar-coordinate ball integral, integral moduli of continuity under
//! rotations and the kernel-shift shell estimate.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{self, Point, Rotation};

/// Number of equispaced trapezoid angles for quadrature on S^1.
pub const SPHERE_NODES_2D: usize = 2048;
/// Product Gauss×trapezoid resolution on S^2 (polar × azimuthal).
pub const SPHERE_NODES_3D_POLAR: usize = 100;
pub const SPHERE_NODES_3D_AZIMUTH: usize = 200;

/// Number of sampled rotation magnitudes for the integral modulus of
/// continuity. The magnitudes are log-spaced on a fixed master grid so that
/// the sampled sup over `|ρ| < δ` is nondecreasing in δ by construction.
pub const ROTATION_ANGLES_2D: usize = 512;
pub const ROTATION_AXES_3D: usize = 64;
pub const ROTATION_ANGLES_3D: usize = 64;

/// Lower cutoff for the Dini integral; below it a power-law tail fit is used.
pub const DINI_DELTA_MIN: f64 = 1e-4;

/// Surface measure of S^{n-1} for n ∈ {2, 3}.
pub fn sphere_measure(dim: usize) -> f64 {
    match dim {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// Angular profile of a degree-zero homogeneous kernel, evaluated on unit
/// vectors. The named variants form the kernel zoo selectable from configs.
#[derive(Clone)]
pub enum Profile {
    /// Ω ≡ 1 (the Riesz case).
    Const,
    /// First direction cosine: Ω(u) = u·e1.
    Cos,
    /// Second Chebyshev harmonic of the angle to e1: Ω(u) = 2(u·e1)^2 - 1.
    Cos2,
    /// Smoothed sign of the first coordinate: tanh(k · u·e1).
    SgnSmooth { steepness: f64 },
    /// Angular Gaussian bump around e1: exp(-(θ/width)^2), θ = angle to e1.
    Bump { width: f64 },
    /// Arbitrary profile, used by tests.
    Custom(Arc<dyn Fn(Point) -> f64 + Send + Sync>),
}

impl Profile {
    pub fn eval(&self, u: Point) -> f64 {
        match self {
            Profile::Const => 1.0,
            Profile::Cos => u[0],
            Profile::Cos2 => 2.0 * u[0] * u[0] - 1.0,
            Profile::SgnSmooth { steepness } => (steepness * u[0]).tanh(),
            Profile::Bump { width } => {
                let theta = u[0].clamp(-1.0, 1.0).acos();
                (-(theta / width) * (theta / width)).exp()
            }
            Profile::Custom(f) => f(u),
        }
    }

    /// Look up a named zoo profile.
    pub fn by_name(name: &str) -> Result<Profile> {
        match name {
            "const" => Ok(Profile::Const),
            "cos" => Ok(Profile::Cos),
            "cos2" => Ok(Profile::Cos2),
            "sgn-smooth" => Ok(Profile::SgnSmooth { steepness: 5.0 }),
            "bump" => Ok(Profile::Bump { width: 0.5 }),
            other => Err(Error::param(format!("unknown kernel profile {other:?}"))),
        }
    }

    pub fn zoo_names() -> &'static [&'static str] {
        &["const", "cos", "cos2", "sgn-smooth", "bump"]
    }
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Profile::Const => write!(f, "const"),
            Profile::Cos => write!(f, "cos"),
            Profile::Cos2 => write!(f, "cos2"),
            Profile::SgnSmooth { steepness } => write!(f, "sgn-smooth({steepness})"),
            Profile::Bump { width } => write!(f, "bump({width})"),
            Profile::Custom(_) => write!(f, "custom"),
        }
    }
}

/// Quadrature rule on the unit sphere S^{n-1} with positive weights summing to
/// the (unnormalized) surface measure: 2π for n = 2, 4π for n = 3.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    pub dim: usize,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    /// Default rule: trapezoid on 2048 angles for n = 2 (spectrally accurate
    /// for smooth profiles), 100×200 Gauss×trapezoid product grid for n = 3.
    pub fn standard(dim: usize) -> SphereQuadrature {
        match dim {
            2 => Self::circle(SPHERE_NODES_2D),
            3 => Self::product_3d(SPHERE_NODES_3D_POLAR, SPHERE_NODES_3D_AZIMUTH),
            _ => panic!("dimension must be 2 or 3"),
        }
    }

    pub fn circle(count: usize) -> SphereQuadrature {
        let w = 2.0 * PI / count as f64;
        let mut nodes = Vec::with_capacity(count);
        for k in 0..count {
            let theta = 2.0 * PI * k as f64 / count as f64;
            nodes.push([theta.cos(), theta.sin(), 0.0]);
        }
        SphereQuadrature {
            dim: 2,
            nodes,
            weights: vec![w; count],
        }
    }

    /// Gauss–Legendre in cos(polar) × trapezoid in azimuth.
    pub fn product_3d(n_polar: usize, n_azimuth: usize) -> SphereQuadrature {
        let (zs, wz) = geom::gauss_legendre(n_polar);
        let waz = 2.0 * PI / n_azimuth as f64;
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        for (z, wzi) in zs.iter().zip(&wz) {
            let r = (1.0 - z * z).sqrt();
            for k in 0..n_azimuth {
                let phi = 2.0 * PI * k as f64 / n_azimuth as f64;
                nodes.push([r * phi.cos(), r * phi.sin(), *z]);
                weights.push(wzi * waz);
            }
        }
        SphereQuadrature {
            dim: 3,
            nodes,
            weights,
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// A homogeneous degree-zero kernel: an angular profile on S^{n-1} together
/// with the quadrature rule used for its spherical integrals.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub dim: usize,
    pub profile: Profile,
    pub label: String,
    quadrature: Arc<SphereQuadrature>,
}

impl Kernel {
    pub fn new(dim: usize, profile: Profile, label: impl Into<String>) -> Kernel {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        Kernel {
            dim,
            profile,
            label: label.into(),
            quadrature: Arc::new(SphereQuadrature::standard(dim)),
        }
    }

    pub fn by_name(dim: usize, name: &str) -> Result<Kernel> {
        Ok(Kernel::new(dim, Profile::by_name(name)?, name))
    }

    pub fn constant(dim: usize) -> Kernel {
        Kernel::new(dim, Profile::Const, "const")
    }

    pub fn quadrature(&self) -> &SphereQuadrature {
        &self.quadrature
    }

    /// Evaluate Ω at a nonzero point: Ω(x) = profile(x / |x|).
    pub fn eval(&self, x: Point) -> Result<f64> {
        let n = geom::norm(x);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::domain(
                "homogeneous kernel evaluated at the zero vector",
            ));
        }
        Ok(self.profile.eval([x[0] / n, x[1] / n, x[2] / n]))
    }

    /// Evaluate the profile directly on a unit vector.
    pub fn eval_dir(&self, u: Point) -> f64 {
        self.profile.eval(u)
    }

    /// ∫_{S^{n-1}} Ω dσ by quadrature (signed).
    pub fn sphere_mean_signed(&self) -> f64 {
        self.quadrature
            .nodes
            .iter()
            .zip(&self.quadrature.weights)
            .map(|(&u, &w)| w * self.profile.eval(u))
            .sum()
    }

    /// ∫_{S^{n-1}} |Ω| dσ by quadrature.
    pub fn sphere_mean_abs(&self) -> f64 {
        self.quadrature
            .nodes
            .iter()
            .zip(&self.quadrature.weights)
            .map(|(&u, &w)| w * self.profile.eval(u).abs())
            .sum()
    }

    /// ‖Ω‖_{L^s(S^{n-1})} for any s >= 1 (including s = ∞). Internal helper;
    /// the public operation validates s > 1 per the hypotheses in use.
    pub(crate) fn sphere_norm_unchecked(&self, s: f64) -> f64 {
        if s.is_infinite() {
            return self
                .quadrature
                .nodes
                .iter()
                .map(|&u| self.profile.eval(u).abs())
                .fold(0.0, f64::max);
        }
        let total: f64 = self
            .quadrature
            .nodes
            .iter()
            .zip(&self.quadrature.weights)
            .map(|(&u, &w)| w * self.profile.eval(u).abs().powf(s))
            .sum();
        total.powf(1.0 / s)
    }
}

/// (∫_{S^{n-1}} |Ω|^s dσ)^{1/s}; the essential sup over nodes for s = ∞.
pub fn sphere_norm(kernel: &Kernel, s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::param(format!(
            "sphere norm requires s > 1, got {s}"
        )));
    }
    Ok(kernel.sphere_norm_unchecked(s))
}

/// (∫_{|y| < R} |Ω(y)|^s dy)^{1/s}. Equals (‖Ω‖_{L^s(S^{n-1})}^s R^n / n)^{1/s}
/// exactly by polar coordinates; computed from the spherical quadrature.
pub fn ball_ls_integral(kernel: &Kernel, s: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::param(format!("radius must be positive, got {radius}")));
    }
    if !(s >= 1.0) {
        return Err(Error::param(format!("exponent must satisfy s >= 1, got {s}")));
    }
    if s.is_infinite() {
        return Ok(kernel.sphere_norm_unchecked(s));
    }
    let n = kernel.dim as f64;
    let sphere_pow: f64 = kernel
        .quadrature
        .nodes
        .iter()
        .zip(&kernel.quadrature.weights)
        .map(|(&u, &w)| w * kernel.profile.eval(u).abs().powf(s))
        .sum();
    Ok((sphere_pow * radius.powf(n) / n).powf(1.0 / s))
}

/// Master grid of sampled rotations, log-spaced in the rotation angle so that
/// the set of rotations with |ρ| < δ is nested as δ grows.
fn rotation_grid(dim: usize) -> Vec<Rotation> {
    let angle_min = 1e-5;
    let angle_max = PI;
    match dim {
        2 => {
            let count = ROTATION_ANGLES_2D;
            (0..count)
                .map(|k| {
                    let t = k as f64 / (count - 1) as f64;
                    let angle = angle_min * (angle_max / angle_min).powf(t);
                    Rotation::planar(angle)
                })
                .collect()
        }
        3 => {
            let axes = geom::fibonacci_sphere(ROTATION_AXES_3D);
            let count = ROTATION_ANGLES_3D;
            let mut rotations = Vec::with_capacity(axes.len() * count);
            for k in 0..count {
                let t = k as f64 / (count - 1) as f64;
                let angle = angle_min * (angle_max / angle_min).powf(t);
                for &axis in &axes {
                    rotations.push(Rotation::axis_angle(axis, angle));
                }
            }
            rotations
        }
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// Integral modulus of continuity of order s:
/// ω_s(δ) = sup over sampled rotations with |ρ| < δ of ‖Ω∘ρ - Ω‖_{L^s(S^{n-1})}
/// (the sup-norm variant for s = ∞). Sampled over a fixed log-spaced master
/// grid of rotation angles, so ω_s is nondecreasing in δ by construction.
pub fn dini_modulus(kernel: &Kernel, delta: f64, s: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    if !(s >= 1.0) {
        return Err(Error::param(format!("exponent must satisfy s >= 1, got {s}")));
    }
    let quad = kernel.quadrature();
    let mut sup: f64 = 0.0;
    for rot in rotation_grid(kernel.dim) {
        if rot.operator_distance() >= delta {
            continue;
        }
        let val = if s.is_infinite() {
            quad.nodes
                .iter()
                .map(|&u| (kernel.profile.eval(rot.apply(u)) - kernel.profile.eval(u)).abs())
                .fold(0.0, f64::max)
        } else {
            let total: f64 = quad
                .nodes
                .iter()
                .zip(&quad.weights)
                .map(|(&u, &w)| {
                    let d = (kernel.profile.eval(rot.apply(u)) - kernel.profile.eval(u)).abs();
                    w * d.powf(s)
                })
                .sum();
            total.powf(1.0 / s)
        };
        sup = sup.max(val);
    }
    Ok(sup)
}

/// Result of the Dini integral ∫_0^1 ω_s(δ)/δ dδ: trapezoid value on a
/// log-spaced grid over [δ_min, 1] plus a power-law extrapolated tail.
#[derive(Clone, Debug)]
pub struct DiniReport {
    /// ∫_{δ_min}^{1} ω_s(δ)/δ dδ by log-trapezoid quadrature.
    pub partial: f64,
    /// Extrapolated ∫_0^{δ_min}, assuming ω_s(δ) ≈ C δ^γ near zero.
    pub tail: f64,
    /// Fitted small-δ exponent γ, when the modulus is not identically zero.
    pub fitted_exponent: Option<f64>,
    /// Set when the fitted exponent is ≤ 0, i.e. the integral looks divergent.
    pub divergence_suspected: bool,
}

impl DiniReport {
    pub fn total(&self) -> f64 {
        self.partial + self.tail
    }

    /// True when the sampled integral is finite and the tail fit converges.
    pub fn is_finite(&self) -> bool {
        !self.divergence_suspected && self.total().is_finite()
    }
}

/// Number of log-spaced δ samples for the Dini integral.
const DINI_SAMPLES: usize = 48;

/// Numerically integrate ω_s(δ)/δ over [δ_min, 1] and extrapolate the tail
/// below δ_min with a power-law fit of the modulus.
pub fn dini_integral(kernel: &Kernel, s: f64) -> Result<DiniReport> {
    let ratio = 1.0 / DINI_DELTA_MIN;
    let deltas: Vec<f64> = (0..DINI_SAMPLES)
        .map(|k| DINI_DELTA_MIN * ratio.powf(k as f64 / (DINI_SAMPLES - 1) as f64))
        .collect();
    let omegas: Vec<f64> = deltas
        .iter()
        .map(|&d| dini_modulus(kernel, d, s))
        .collect::<Result<_>>()?;

    // In log coordinates t = ln δ the integrand is ω_s(e^t); trapezoid there.
    let mut partial = 0.0;
    for k in 1..DINI_SAMPLES {
        let dt = deltas[k].ln() - deltas[k - 1].ln();
        partial += 0.5 * (omegas[k] + omegas[k - 1]) * dt;
    }

    // Fit ω ≈ C δ^γ over the smallest sampled decade.
    let fit_end = deltas
        .iter()
        .position(|&d| d > 10.0 * DINI_DELTA_MIN)
        .unwrap_or(DINI_SAMPLES);
    let pts: Vec<(f64, f64)> = deltas[..fit_end]
        .iter()
        .zip(&omegas[..fit_end])
        .filter(|(_, &w)| w > 1e-14)
        .map(|(&d, &w)| (d.ln(), w.ln()))
        .collect();

    if pts.len() < 2 {
        // Modulus vanishes near zero (e.g. a rotation-invariant kernel).
        return Ok(DiniReport {
            partial,
            tail: 0.0,
            fitted_exponent: None,
            divergence_suspected: false,
        });
    }

    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let gamma = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let ln_c = (sy - gamma * sx) / n;

    if gamma <= 0.0 {
        return Ok(DiniReport {
            partial,
            tail: f64::INFINITY,
            fitted_exponent: Some(gamma),
            divergence_suspected: true,
        });
    }
    // ∫_0^{δ_min} C δ^{γ-1} dδ = C δ_min^γ / γ.
    let tail = ln_c.exp() * DINI_DELTA_MIN.powf(gamma) / gamma;
    Ok(DiniReport {
        partial,
        tail,
        fitted_exponent: Some(gamma),
        divergence_suspected: false,
    })
}

/// Radial resolution of the shell quadrature in `shell_shift_deviation`.
const SHELL_RADIAL_NODES: usize = 96;

/// Left- and right-hand shapes of the kernel-shift shell estimate: for
/// |x| < R/2,
///   lhs = (∫_{R<=|z|<2R} |Ω(z-x)/|z-x|^{n-α} - Ω(z)/|z|^{n-α}|^s dz)^{1/s},
///   rhs_shape = R^{n/s-(n-α)} (|x|/R + ∫_{|x|/2R}^{|x|/R} ω_s(δ)/δ dδ).
/// The harness checks that lhs <= C · rhs_shape with C stable across R and x.
pub fn shell_shift_deviation(
    kernel: &Kernel,
    alpha: f64,
    radius: f64,
    x: Point,
    s: f64,
) -> Result<(f64, f64)> {
    let n = kernel.dim as f64;
    if !(alpha > 0.0 && alpha < n) {
        return Err(Error::param(format!("order must lie in (0, n), got {alpha}")));
    }
    if !(radius > 0.0) {
        return Err(Error::param("shell radius must be positive".to_string()));
    }
    let x_norm = geom::norm(x);
    if x_norm == 0.0 {
        return Err(Error::domain("shift point must be nonzero"));
    }
    if x_norm >= radius / 2.0 {
        return Err(Error::domain(format!(
            "shift point must satisfy |x| < R/2, got |x| = {x_norm}, R = {radius}"
        )));
    }

    let quad = kernel.quadrature();
    let (rads, wr) = geom::gauss_legendre_on(SHELL_RADIAL_NODES, radius, 2.0 * radius);
    let kexp = alpha - n;

    let eval_diff = |z: Point| -> f64 {
        let zx = geom::sub(z, x);
        let rz = geom::norm(z);
        let rzx = geom::norm(zx);
        let kz = kernel.profile.eval(geom::scale(z, 1.0 / rz)) * rz.powf(kexp);
        let kzx = kernel.profile.eval(geom::scale(zx, 1.0 / rzx)) * rzx.powf(kexp);
        (kzx - kz).abs()
    };

    let lhs = if s.is_infinite() {
        let mut sup: f64 = 0.0;
        for &rho in &rads {
            for &u in &quad.nodes {
                sup = sup.max(eval_diff(geom::scale(u, rho)));
            }
        }
        sup
    } else {
        let mut total = 0.0;
        for (&rho, &wrho) in rads.iter().zip(&wr) {
            let rpow = rho.powf(n - 1.0);
            for (&u, &wu) in quad.nodes.iter().zip(&quad.weights) {
                total += wrho * wu * rpow * eval_diff(geom::scale(u, rho)).powf(s);
            }
        }
        total.powf(1.0 / s)
    };

    // ∫_{|x|/2R}^{|x|/R} ω_s(δ)/δ dδ by log-trapezoid on the modulus.
    let d_lo = x_norm / (2.0 * radius);
    let d_hi = x_norm / radius;
    let steps = 16;
    let mut omega_int = 0.0;
    let mut prev = dini_modulus(kernel, d_lo, s)?;
    for k in 1..=steps {
        let d = d_lo * (d_hi / d_lo).powf(k as f64 / steps as f64);
        let cur = dini_modulus(kernel, d, s)?;
        omega_int += 0.5 * (prev + cur) * (2.0f64).ln() / steps as f64;
        prev = cur;
    }

    let rhs_shape = radius.powf(n / s - (n - alpha)) * (x_norm / radius + omega_int);
    Ok((lhs, rhs_shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::point2;
    use proptest::prelude::*;

    #[test]
    fn quadrature_weights_sum_to_surface_measure() {
        for dim in [2_usize, 3] {
            let quad = SphereQuadrature::standard(dim);
            let total = quad.total_weight();
            let expect = sphere_measure(dim);
            assert!(
                ((total - expect) / expect).abs() <= 1e-10,
                "dim {dim}: {total} vs {expect}"
            );
            assert!(quad.weights.iter().all(|&w| w > 0.0));
            // Integrating the constant 1 reproduces the surface measure.
            let one: f64 = quad.weights.iter().sum();
            assert_eq!(one, total);
        }
    }

    #[test]
    fn kernel_eval_examples() {
        let k = Kernel::constant(2);
        assert_eq!(k.eval(point2(3.0, -4.0)).unwrap(), 1.0);

        let kc = Kernel::by_name(2, "cos").unwrap();
        assert_eq!(kc.eval(point2(1.0, 0.0)).unwrap(), 1.0);

        assert!(k.eval([0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn kernel_eval_scaling_by_two_is_exact() {
        let k = Kernel::by_name(2, "cos2").unwrap();
        let x = point2(0.37, -1.21);
        let a = k.eval(x).unwrap();
        let b = k.eval(geom::scale(x, 2.0)).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        // Power-of-two rescalings commute exactly with normalization, so
        // degree-zero homogeneity is bitwise; arbitrary positive factors
        // agree to machine precision.
        #[test]
        fn homogeneity(
            x in -10.0f64..10.0, y in -10.0f64..10.0,
            e in -20i32..20, c in 0.01f64..100.0,
            which in 0usize..5,
        ) {
            prop_assume!(x != 0.0 || y != 0.0);
            let name = Profile::zoo_names()[which];
            let k = Kernel::by_name(2, name).unwrap();
            let p = point2(x, y);
            let v = k.eval(p).unwrap();

            let exact = k.eval(geom::scale(p, (2.0f64).powi(e))).unwrap();
            prop_assert_eq!(v, exact);

            let close = k.eval(geom::scale(p, c)).unwrap();
            prop_assert!((close - v).abs() <= 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn sphere_norm_closed_forms() {
        let k1 = Kernel::constant(2);
        let v = sphere_norm(&k1, 2.0).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-10, "{v}");

        // ∫_0^{2π} cos^2 θ dθ = π.
        let kc = Kernel::by_name(2, "cos").unwrap();
        let v = sphere_norm(&kc, 2.0).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-10, "{v}");

        let v = sphere_norm(&kc, f64::INFINITY).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        assert!(sphere_norm(&k1, 1.0).is_err());
        assert!(sphere_norm(&k1, 0.5).is_err());
    }

    #[test]
    fn sphere_norm_power_mean_monotone_in_s() {
        // Normalized by total measure, ‖Ω‖_s / σ^{1/s} is nondecreasing in s.
        for name in Profile::zoo_names() {
            let k = Kernel::by_name(2, name).unwrap();
            let sigma = sphere_measure(2);
            let exps = [1.5, 2.0, 3.0, 4.0, 8.0];
            let mut prev = 0.0;
            for &s in &exps {
                let normalized = k.sphere_norm_unchecked(s) / sigma.powf(1.0 / s);
                assert!(
                    normalized >= prev - 1e-12,
                    "{name}: power mean decreased at s={s}"
                );
                prev = normalized;
            }
            let sup = k.sphere_norm_unchecked(f64::INFINITY);
            assert!(sup >= prev - 1e-12);
        }
    }

    #[test]
    fn ball_integral_polar_identity() {
        // Ω ≡ 1, n = 2, s = 1: ∫_{|y|<R} dy = π R^2.
        let k = Kernel::constant(2);
        let v = ball_ls_integral(&k, 1.0, 1.0).unwrap();
        assert!(((v - PI) / PI).abs() < 1e-10, "{v}");
        let v = ball_ls_integral(&k, 1.0, 2.0).unwrap();
        assert!(((v - 4.0 * PI) / (4.0 * PI)).abs() < 1e-10, "{v}");

        let zero = Kernel::new(2, Profile::Custom(Arc::new(|_| 0.0)), "zero");
        assert_eq!(ball_ls_integral(&zero, 1.0, 3.0).unwrap(), 0.0);

        // Closed form against the quadrature for every zoo profile.
        for name in Profile::zoo_names() {
            for dim in [2usize, 3] {
                let k = Kernel::by_name(dim, name).unwrap();
                for s in [1.0, 2.0, 3.0] {
                    for radius in [0.5, 1.0, 2.0] {
                        let v = ball_ls_integral(&k, s, radius).unwrap();
                        let norm_s = k.sphere_norm_unchecked(s);
                        let closed = (norm_s.powf(s) * radius.powf(dim as f64) / dim as f64)
                            .powf(1.0 / s);
                        if closed > 0.0 {
                            assert!(
                                ((v - closed) / closed).abs() <= 1e-6,
                                "{name} dim {dim} s {s} R {radius}: {v} vs {closed}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dini_modulus_basics() {
        let k1 = Kernel::constant(2);
        assert_eq!(dini_modulus(&k1, 0.5, 2.0).unwrap(), 0.0);
        assert!(dini_modulus(&k1, -0.1, 2.0).is_err());

        let kc = Kernel::by_name(2, "cos").unwrap();
        // Monotone in δ.
        let mut prev = 0.0;
        for delta in [0.01, 0.05, 0.2, 0.5, 1.0, 2.0] {
            let w = dini_modulus(&kc, delta, 2.0).unwrap();
            assert!(w >= prev, "modulus decreased at delta {delta}");
            prev = w;
        }
        // Triangle-inequality bound: ω_s(δ) <= 2 ‖Ω‖_{L^s}.
        let bound = 2.0 * kc.sphere_norm_unchecked(2.0);
        assert!(prev <= bound * (1.0 + 1e-8));

        // |cos(θ+a) - cos θ| = 2 sin(a/2) |sin(θ+a/2)| <= |ρ| < δ.
        for delta in [0.01, 0.1, 0.3] {
            let w = dini_modulus(&kc, delta, f64::INFINITY).unwrap();
            assert!(w <= delta, "sup-modulus {w} exceeds delta {delta}");
            assert!(w > 0.3 * delta, "sup-modulus {w} unexpectedly small");
        }
    }

    #[test]
    fn dini_modulus_3d_lipschitz() {
        let kc = Kernel::by_name(3, "cos").unwrap();
        for delta in [0.05, 0.2] {
            let w = dini_modulus(&kc, delta, f64::INFINITY).unwrap();
            assert!(w <= delta, "{w} > {delta}");
        }
    }

    #[test]
    fn dini_integral_reports() {
        let k1 = Kernel::constant(2);
        let rep = dini_integral(&k1, 2.0).unwrap();
        assert_eq!(rep.total(), 0.0);
        assert!(rep.is_finite());

        // Lipschitz profile with constant 1: ∫_0^1 ω_∞(δ)/δ dδ <= 1.
        let kc = Kernel::by_name(2, "cos").unwrap();
        let rep = dini_integral(&kc, f64::INFINITY).unwrap();
        assert!(rep.is_finite());
        assert!(rep.total() <= 1.0 + 1e-6, "total {}", rep.total());
        assert!(rep.total() > 0.1);

        // cos 2θ oscillates twice as fast; its modulus dominates.
        let k2 = Kernel::by_name(2, "cos2").unwrap();
        let rep2 = dini_integral(&k2, f64::INFINITY).unwrap();
        assert!(rep2.total() >= rep.total());
    }

    #[test]
    fn shell_shift_small_x_limit() {
        let k = Kernel::constant(2);
        let (lhs, _) = shell_shift_deviation(&k, 1.0, 1.0, point2(1e-6, 0.0), 2.0).unwrap();
        assert!(lhs < 1e-4, "lhs {lhs} should vanish as |x| -> 0");
        assert!(shell_shift_deviation(&k, 1.0, 1.0, point2(0.6, 0.0), 2.0).is_err());
    }

    #[test]
    fn shell_shift_ratio_stable_across_radii() {
        let k = Kernel::by_name(2, "cos").unwrap();
        let mut ratios = Vec::new();
        for radius in [1.0, 2.0, 4.0] {
            let x = point2(0.1 * radius, 0.0);
            let (lhs, rhs) = shell_shift_deviation(&k, 1.0, radius, x, 2.0).unwrap();
            assert!(lhs.is_finite() && rhs > 0.0);
            ratios.push(lhs / rhs);
        }
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 4.0, "ratios {ratios:?}");
    }
}
