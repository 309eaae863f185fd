//! Sampled test functions, boxes and ball families: the desk-scale stand-ins
//! for measurable functions on R^n and for "the supremum over all balls".

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{self, Point};

/// An axis-aligned box with a uniform grid resolution per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct GridBox {
    pub dim: usize,
    pub lower: Point,
    pub upper: Point,
    pub resolution: [usize; 3],
}

impl GridBox {
    pub fn new(dim: usize, lower: Point, upper: Point, resolution: [usize; 3]) -> GridBox {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        for axis in 0..dim {
            assert!(upper[axis] > lower[axis], "degenerate box on axis {axis}");
            assert!(resolution[axis] > 0, "zero resolution on axis {axis}");
        }
        let mut lo = lower;
        let mut up = upper;
        let mut res = resolution;
        for axis in dim..3 {
            lo[axis] = 0.0;
            up[axis] = 0.0;
            res[axis] = 1;
        }
        GridBox {
            dim,
            lower: lo,
            upper: up,
            resolution: res,
        }
    }

    /// The standard desk-scale square [-2, 2]^2.
    pub fn square2(resolution: usize) -> GridBox {
        GridBox::new(
            2,
            [-2.0, -2.0, 0.0],
            [2.0, 2.0, 0.0],
            [resolution, resolution, 1],
        )
    }

    pub fn cube3(resolution: usize) -> GridBox {
        GridBox::new(
            3,
            [-2.0, -2.0, -2.0],
            [2.0, 2.0, 2.0],
            [resolution, resolution, resolution],
        )
    }

    pub fn cell_extent(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / self.resolution[axis] as f64
    }

    /// Largest cell extent over the active axes.
    pub fn max_cell_extent(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.cell_extent(a))
            .fold(0.0, f64::max)
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.cell_extent(a)).product()
    }

    pub fn cell_count(&self) -> usize {
        (0..self.dim).map(|a| self.resolution[a]).product()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.upper[a] - self.lower[a])
            .product()
    }

    /// Euclidean diameter of the box.
    pub fn diameter(&self) -> f64 {
        (0..self.dim)
            .map(|a| (self.upper[a] - self.lower[a]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn center(&self) -> Point {
        let mut c = [0.0; 3];
        for axis in 0..self.dim {
            c[axis] = 0.5 * (self.lower[axis] + self.upper[axis]);
        }
        c
    }

    /// Center of the cell with the given per-axis indices.
    pub fn cell_center(&self, idx: [usize; 3]) -> Point {
        let mut c = [0.0; 3];
        for axis in 0..self.dim {
            c[axis] = self.lower[axis] + (idx[axis] as f64 + 0.5) * self.cell_extent(axis);
        }
        c
    }

    /// Flat index with the x-axis fastest.
    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        (idx[2] * self.resolution[1] + idx[1]) * self.resolution[0] + idx[0]
    }

    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let nx = self.resolution[0];
        let ny = self.resolution[1];
        [flat % nx, (flat / nx) % ny, flat / (nx * ny)]
    }

    pub fn contains(&self, p: Point) -> bool {
        (0..self.dim).all(|a| p[a] >= self.lower[a] && p[a] <= self.upper[a])
    }

    /// Per-axis coordinates of all cell centers (used by the hot loops).
    pub fn axis_centers(&self, axis: usize) -> Vec<f64> {
        let h = self.cell_extent(axis);
        (0..self.resolution[axis])
            .map(|i| self.lower[axis] + (i as f64 + 0.5) * h)
            .collect()
    }

    /// Box for samples of x ↦ f(λx): every coordinate shrinks by λ.
    pub fn rescaled(&self, lambda: f64) -> GridBox {
        let mut lo = self.lower;
        let mut up = self.upper;
        for axis in 0..self.dim {
            lo[axis] /= lambda;
            up[axis] /= lambda;
        }
        GridBox::new(self.dim, lo, up, self.resolution)
    }
}

/// A real-valued function sampled at cell centers of a [`GridBox`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub grid: GridBox,
    pub values: Vec<f64>,
    pub label: String,
}

impl GridFunction {
    pub fn from_values(grid: GridBox, values: Vec<f64>, label: impl Into<String>) -> GridFunction {
        assert_eq!(values.len(), grid.cell_count(), "value array length mismatch");
        assert!(values.iter().all(|v| v.is_finite()), "non-finite sample");
        GridFunction {
            grid,
            values,
            label: label.into(),
        }
    }

    /// Sample an analytic function at cell centers.
    pub fn from_fn(
        grid: GridBox,
        label: impl Into<String>,
        f: impl Fn(Point) -> f64,
    ) -> GridFunction {
        let mut values = Vec::with_capacity(grid.cell_count());
        for iz in 0..grid.resolution[2] {
            for iy in 0..grid.resolution[1] {
                for ix in 0..grid.resolution[0] {
                    values.push(f(grid.cell_center([ix, iy, iz])));
                }
            }
        }
        GridFunction::from_values(grid, values, label)
    }

    pub fn zeros(grid: GridBox, label: impl Into<String>) -> GridFunction {
        let n = grid.cell_count();
        GridFunction::from_values(grid, vec![0.0; n], label)
    }

    pub fn value(&self, idx: [usize; 3]) -> f64 {
        self.values[self.grid.flat_index(idx)]
    }

    /// Riemann-sum integral over the whole box.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Pointwise map with a new label.
    pub fn map(&self, label: impl Into<String>, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_values(
            self.grid.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
            label,
        )
    }

    pub fn abs(&self) -> GridFunction {
        self.map(format!("|{}|", self.label), f64::abs)
    }

    pub fn scaled(&self, c: f64) -> GridFunction {
        self.map(format!("{}*{c}", self.label), |v| c * v)
    }

    /// Pointwise sum; the grids must agree.
    pub fn add(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        GridFunction::from_values(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            format!("{}+{}", self.label, other.label),
        )
    }

    /// Pointwise product; the grids must agree.
    pub fn mul(&self, other: &GridFunction) -> GridFunction {
        assert_eq!(self.grid, other.grid, "grid mismatch");
        GridFunction::from_values(
            self.grid.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
            format!("{}*{}", self.label, other.label),
        )
    }

    /// Samples of x ↦ f(λx). Cell centers of the rescaled box map exactly onto
    /// the original centers, so the value array is reused unchanged.
    pub fn dilate(&self, lambda: f64) -> Result<GridFunction> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::param(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        Ok(GridFunction {
            grid: self.grid.rescaled(lambda),
            values: self.values.clone(),
            label: format!("{}(dilated {lambda})", self.label),
        })
    }
}

/// Named analytic test functions. Sampling is deterministic for a fixed seed.
#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    /// exp(-|x-c|^2 / (2 σ^2)).
    Gaussian { center: Point, sigma: f64 },
    /// Indicator of the ball B(c, R).
    BallIndicator { center: Point, radius: f64 },
    /// |x|^{-β}; the non-finite sample in a cell whose center hits the origin
    /// is replaced by a 16-point sub-sampled cell average.
    Power { beta: f64 },
    /// Sum of a few randomly placed signed Gaussian bumps.
    BumpSum { seed: u64 },
    /// log |x|, with the same origin-cell replacement policy as `Power`.
    LogAbs,
    /// The zero function.
    Zero,
}

impl Expression {
    fn eval(&self, p: Point) -> f64 {
        match self {
            Expression::Gaussian { center, sigma } => {
                let d2 = geom::norm_sq(geom::sub(p, *center));
                (-d2 / (2.0 * sigma * sigma)).exp()
            }
            Expression::BallIndicator { center, radius } => {
                if geom::norm(geom::sub(p, *center)) < *radius {
                    1.0
                } else {
                    0.0
                }
            }
            Expression::Power { beta } => geom::norm(p).powf(-beta),
            Expression::BumpSum { .. } => unreachable!("bump sums are pre-expanded"),
            Expression::LogAbs => geom::norm(p).ln(),
            Expression::Zero => 0.0,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Expression::Gaussian { center, sigma } => {
                format!("gaussian(c=({:.2},{:.2},{:.2}),sigma={sigma})", center[0], center[1], center[2])
            }
            Expression::BallIndicator { center, radius } => {
                format!("ball(c=({:.2},{:.2},{:.2}),R={radius})", center[0], center[1], center[2])
            }
            Expression::Power { beta } => format!("power(beta={beta})"),
            Expression::BumpSum { seed } => format!("bump-sum(seed={seed})"),
            Expression::LogAbs => "log-abs".to_string(),
            Expression::Zero => "zero".to_string(),
        }
    }
}

/// Cell-centered samples of an analytic expression. Non-finite samples (the
/// origin cell of `power` and `log-abs`) are replaced by the 16-point
/// sub-sampled cell average and the replacement is recorded in the label.
pub fn sample(expr: &Expression, grid: &GridBox) -> GridFunction {
    if let Expression::BumpSum { seed } = expr {
        return sample_bump_sum(*seed, grid);
    }
    let mut label = expr.label();
    let mut replaced = false;
    let mut values = Vec::with_capacity(grid.cell_count());
    for iz in 0..grid.resolution[2] {
        for iy in 0..grid.resolution[1] {
            for ix in 0..grid.resolution[0] {
                let c = grid.cell_center([ix, iy, iz]);
                let mut v = expr.eval(c);
                if !v.is_finite() {
                    v = subsampled_cell_average(expr, grid, c);
                    replaced = true;
                }
                values.push(v);
            }
        }
    }
    if replaced {
        label.push_str("[origin-cell-avg]");
    }
    GridFunction::from_values(grid.clone(), values, label)
}

/// 16-point (4 per active axis pair) sub-sampled average of the analytic
/// expression over one cell; sub-points avoid the cell center.
fn subsampled_cell_average(expr: &Expression, grid: &GridBox, center: Point) -> f64 {
    let k = 4usize;
    let mut total = 0.0;
    let mut count = 0usize;
    let offsets: Vec<f64> = (0..k).map(|i| (i as f64 + 0.5) / k as f64 - 0.5).collect();
    match grid.dim {
        2 => {
            for &ox in &offsets {
                for &oy in &offsets {
                    let p = [
                        center[0] + ox * grid.cell_extent(0),
                        center[1] + oy * grid.cell_extent(1),
                        0.0,
                    ];
                    let v = expr.eval(p);
                    if v.is_finite() {
                        total += v;
                        count += 1;
                    }
                }
            }
        }
        _ => {
            for &ox in &offsets {
                for &oy in &offsets {
                    for &oz in &offsets {
                        let p = [
                            center[0] + ox * grid.cell_extent(0),
                            center[1] + oy * grid.cell_extent(1),
                            center[2] + oz * grid.cell_extent(2),
                        ];
                        let v = expr.eval(p);
                        if v.is_finite() {
                            total += v;
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

const BUMPS_PER_SUM: usize = 3;

fn sample_bump_sum(seed: u64, grid: &GridBox) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bumps = Vec::with_capacity(BUMPS_PER_SUM);
    for _ in 0..BUMPS_PER_SUM {
        let mut center = [0.0; 3];
        for axis in 0..grid.dim {
            let lo = grid.lower[axis];
            let hi = grid.upper[axis];
            let mid = 0.5 * (lo + hi);
            let half = 0.4 * (hi - lo);
            center[axis] = rng.gen_range(mid - half..mid + half);
        }
        let sigma: f64 = rng.gen_range(0.25..0.6);
        let amp: f64 = rng.gen_range(-1.0..1.0);
        bumps.push((center, sigma, amp));
    }
    GridFunction::from_fn(grid.clone(), format!("bump-sum(seed={seed})"), |p| {
        bumps
            .iter()
            .map(|&(c, sigma, amp)| {
                amp * (-geom::norm_sq(geom::sub(p, c)) / (2.0 * sigma * sigma)).exp()
            })
            .sum()
    })
}

/// An open ball, the elementary region for Morrey/BMO suprema.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Ball {
        assert!(radius > 0.0, "ball radius must be positive");
        Ball { center, radius }
    }

    pub fn contains(&self, p: Point) -> bool {
        geom::norm(geom::sub(p, self.center)) < self.radius
    }
}

/// Finite surrogate for "the supremum over all balls": centers on a coarse
/// sub-grid, radii log-spaced from twice the cell size to the half-diameter.
#[derive(Clone, Debug)]
pub struct BallFamily {
    pub balls: Vec<Ball>,
    pub provenance: String,
}

impl BallFamily {
    pub fn singleton(ball: Ball) -> BallFamily {
        BallFamily {
            balls: vec![ball],
            provenance: "singleton".to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Largest ball of the family (by radius).
    pub fn largest(&self) -> Option<Ball> {
        self.balls
            .iter()
            .cloned()
            .max_by(|a, b| a.radius.total_cmp(&b.radius))
    }
}

/// Build a ball family over the box: `centers_per_axis`^dim centers on a
/// uniform sub-grid, `radii_count` log-spaced radii from 2× the cell size to
/// the box half-diameter. Family size = centers × radii.
pub fn make_ball_family(grid: &GridBox, centers_per_axis: usize, radii_count: usize) -> BallFamily {
    assert!(centers_per_axis > 0 && radii_count > 0);
    let r_min = 2.0 * grid.max_cell_extent();
    let r_max = 0.5 * grid.diameter();
    let radii: Vec<f64> = if radii_count == 1 {
        vec![r_max]
    } else {
        (0..radii_count)
            .map(|k| r_min * (r_max / r_min).powf(k as f64 / (radii_count - 1) as f64))
            .collect()
    };

    let mut centers = Vec::new();
    match grid.dim {
        2 => {
            for iy in 0..centers_per_axis {
                for ix in 0..centers_per_axis {
                    centers.push(sub_grid_point(grid, [ix, iy, 0], centers_per_axis));
                }
            }
        }
        _ => {
            for iz in 0..centers_per_axis {
                for iy in 0..centers_per_axis {
                    for ix in 0..centers_per_axis {
                        centers.push(sub_grid_point(grid, [ix, iy, iz], centers_per_axis));
                    }
                }
            }
        }
    }

    let mut balls = Vec::with_capacity(centers.len() * radii.len());
    for &c in &centers {
        for &r in &radii {
            balls.push(Ball::new(c, r));
        }
    }
    BallFamily {
        balls,
        provenance: format!("grid({centers_per_axis}^{} x {radii_count} radii)", grid.dim),
    }
}

fn sub_grid_point(grid: &GridBox, idx: [usize; 3], per_axis: usize) -> Point {
    let mut p = [0.0; 3];
    for axis in 0..grid.dim {
        let extent = grid.upper[axis] - grid.lower[axis];
        p[axis] = grid.lower[axis] + (idx[axis] as f64 + 0.5) * extent / per_axis as f64;
    }
    p
}

const GRID_FILE_MAGIC: &str = "gridfn v1";

/// Write a grid function as a structured-text header followed by the raw
/// little-endian f64 value array.
pub fn write_grid_function(f: &GridFunction, path: &Path) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
    let g = &f.grid;
    let mut header = String::new();
    header.push_str(GRID_FILE_MAGIC);
    header.push('\n');
    header.push_str(&format!("dim {}\n", g.dim));
    header.push_str(&format!(
        "lower {} {} {}\n",
        g.lower[0], g.lower[1], g.lower[2]
    ));
    header.push_str(&format!(
        "upper {} {} {}\n",
        g.upper[0], g.upper[1], g.upper[2]
    ));
    header.push_str(&format!(
        "resolution {} {} {}\n",
        g.resolution[0], g.resolution[1], g.resolution[2]
    ));
    header.push_str(&format!("label {}\n", f.label.replace('\n', " ")));
    header.push_str(&format!("values {}\n", f.values.len()));
    out.write_all(header.as_bytes()).map_err(io_err)?;
    for v in &f.values {
        out.write_all(&v.to_le_bytes()).map_err(io_err)?;
    }
    Ok(())
}

/// Read a grid function written by [`write_grid_function`].
pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let bad = |reason: &str| Error::Format {
        path: path.display().to_string(),
        reason: reason.to_string(),
    };
    let mut reader = BufReader::new(std::fs::File::open(path).map_err(io_err)?);

    let mut line = String::new();
    let next_line = |reader: &mut BufReader<std::fs::File>, line: &mut String| -> Result<String> {
        line.clear();
        reader.read_line(line).map_err(io_err)?;
        Ok(line.trim_end().to_string())
    };

    if next_line(&mut reader, &mut line)? != GRID_FILE_MAGIC {
        return Err(bad("missing magic line"));
    }
    let parse_f64s = |s: &str, n: usize| -> Result<Vec<f64>> {
        let vals: Vec<f64> = s
            .split_whitespace()
            .skip(1)
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("malformed numeric field"))?;
        if vals.len() != n {
            return Err(bad("wrong field arity"));
        }
        Ok(vals)
    };

    let dim_line = next_line(&mut reader, &mut line)?;
    let dim: usize = dim_line
        .strip_prefix("dim ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("missing dim"))?;
    let lower = parse_f64s(&next_line(&mut reader, &mut line)?, 3)?;
    let upper = parse_f64s(&next_line(&mut reader, &mut line)?, 3)?;
    let res_line = next_line(&mut reader, &mut line)?;
    let res: Vec<usize> = res_line
        .split_whitespace()
        .skip(1)
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad("malformed resolution"))?;
    if res.len() != 3 {
        return Err(bad("wrong resolution arity"));
    }
    let label_line = next_line(&mut reader, &mut line)?;
    let label = label_line
        .strip_prefix("label ")
        .ok_or_else(|| bad("missing label"))?
        .to_string();
    let count_line = next_line(&mut reader, &mut line)?;
    let count: usize = count_line
        .strip_prefix("values ")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad("missing value count"))?;

    let grid = GridBox::new(
        dim,
        [lower[0], lower[1], lower[2]],
        [upper[0], upper[1], upper[2]],
        [res[0], res[1], res[2]],
    );
    if count != grid.cell_count() {
        return Err(bad("value count does not match resolution"));
    }
    let mut bytes = vec![0u8; count * 8];
    reader.read_exact(&mut bytes).map_err(io_err)?;
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite value"));
    }
    Ok(GridFunction::from_values(grid, values, label))
}
