//! Small geometric helpers shared by the kernel and operator modules:
//! fixed-size points, Gauss–Legendre rules and rotations in 2 and 3 dimensions.

/// A point in R^n for n ∈ {2, 3}. The unused third coordinate is kept at zero
/// so points stay `Copy` and dimension-generic code can treat them uniformly.
pub type Point = [f64; 3];

pub const ORIGIN: Point = [0.0, 0.0, 0.0];

pub fn point2(x: f64, y: f64) -> Point {
    [x, y, 0.0]
}

pub fn point3(x: f64, y: f64, z: f64) -> Point {
    [x, y, z]
}

pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: Point, c: f64) -> Point {
    [a[0] * c, a[1] * c, a[2] * c]
}

pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm_sq(a: Point) -> f64 {
    dot(a, a)
}

pub fn norm(a: Point) -> f64 {
    norm_sq(a).sqrt()
}

/// x / |x|. Caller guarantees x != 0.
pub fn unit(a: Point) -> Point {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

/// Nodes and weights of the k-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; accurate to machine precision
/// for the orders used here (k <= 256).
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1);
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let m = k.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_k(x) and P_k'(x) via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=k {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    (nodes, weights)
}

/// Map a Gauss–Legendre rule on [-1, 1] to [a, b].
pub fn gauss_legendre_on(k: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(k);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|&x| mid + half * x).collect(),
        ws.iter().map(|&w| w * half).collect(),
    )
}

/// A rotation of R^n, stored as an axis–angle pair. In two dimensions the axis
/// is ignored and the rotation acts in the xy-plane.
#[derive(Clone, Copy, Debug)]
pub struct Rotation {
    pub dim: usize,
    pub axis: Point,
    pub angle: f64,
}

impl Rotation {
    pub fn planar(angle: f64) -> Self {
        Rotation {
            dim: 2,
            axis: [0.0, 0.0, 1.0],
            angle,
        }
    }

    pub fn axis_angle(axis: Point, angle: f64) -> Self {
        Rotation {
            dim: 3,
            axis: unit(axis),
            angle,
        }
    }

    /// Operator distance |ρ| = sup_{|x|=1} |ρx - x| = 2 sin(angle / 2).
    pub fn operator_distance(&self) -> f64 {
        2.0 * (0.5 * self.angle).sin()
    }

    /// Apply the rotation to a vector (Rodrigues formula in 3-D).
    pub fn apply(&self, v: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        if self.dim == 2 {
            [c * v[0] - s * v[1], s * v[0] + c * v[1], 0.0]
        } else {
            let k = self.axis;
            let kv = [
                k[1] * v[2] - k[2] * v[1],
                k[2] * v[0] - k[0] * v[2],
                k[0] * v[1] - k[1] * v[0],
            ];
            let kd = dot(k, v) * (1.0 - c);
            [
                v[0] * c + kv[0] * s + k[0] * kd,
                v[1] * c + kv[1] * s + k[1] * kd,
                v[2] * c + kv[2] * s + k[2] * kd,
            ]
        }
    }
}

/// `count` quasi-uniform directions on S^2 (Fibonacci lattice). Deterministic.
pub fn fibonacci_sphere(count: usize) -> Vec<Point> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = 2.0 * std::f64::consts::PI * (i as f64 / golden).fract();
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // A k-point rule is exact for degree 2k-1.
        let (xs, ws) = gauss_legendre(8);
        let int_x2: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x * x).sum();
        assert!((int_x2 - 2.0 / 3.0).abs() < 1e-14);
        let int_x14: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(14)).sum();
        assert!((int_x14 - 2.0 / 15.0).abs() < 1e-13);
        let total: f64 = ws.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_preserves_length_and_distance_formula() {
        let rot = Rotation::axis_angle([1.0, 2.0, -0.5], 0.7);
        let v = unit([0.3, -1.0, 0.4]);
        let rv = rot.apply(v);
        assert!((norm(rv) - 1.0).abs() < 1e-14);

        // |ρ| is attained on the equator orthogonal to the axis.
        let mut max_disp: f64 = 0.0;
        for dir in fibonacci_sphere(5000) {
            let d = norm(sub(rot.apply(dir), dir));
            max_disp = max_disp.max(d);
        }
        let claimed = rot.operator_distance();
        assert!((max_disp - claimed).abs() < 1e-3, "{max_disp} vs {claimed}");
    }

    #[test]
    fn planar_rotation_matches_angle() {
        let rot = Rotation::planar(std::f64::consts::FRAC_PI_2);
        let r = rot.apply([1.0, 0.0, 0.0]);
        assert!((r[0]).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15);
    }
}
