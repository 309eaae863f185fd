//! The fixed, seeded zoo of test functions used by the verification sweeps:
//! 5 ball indicators, 5 Gaussians, 5 truncated sub-critical powers and
//! 5 random bump sums, all reproducible from a single seed.

use crate::funcspace::{sample, Expression, GridBox, GridFunction};
use crate::geom::Point;

/// Number of functions in the standard zoo.
pub const ZOO_SIZE: usize = 20;

fn indicator_params(dim: usize) -> Vec<(Point, f64)> {
    match dim {
        2 => vec![
            ([0.0, 0.0, 0.0], 1.0),
            ([0.5, 0.3, 0.0], 0.7),
            ([-0.8, 0.6, 0.0], 0.4),
            ([0.2, -0.9, 0.0], 1.3),
            ([-0.3, -0.2, 0.0], 0.55),
        ],
        _ => vec![
            ([0.0, 0.0, 0.0], 1.0),
            ([0.5, 0.3, -0.4], 0.7),
            ([-0.8, 0.6, 0.2], 0.5),
            ([0.2, -0.9, 0.5], 1.2),
            ([-0.3, -0.2, -0.6], 0.6),
        ],
    }
}

fn gaussian_params(dim: usize) -> Vec<(Point, f64)> {
    match dim {
        2 => vec![
            ([0.0, 0.0, 0.0], 0.5),
            ([0.7, -0.4, 0.0], 0.3),
            ([-0.6, 0.5, 0.0], 0.8),
            ([0.1, 0.8, 0.0], 0.25),
            ([-0.9, -0.7, 0.0], 0.6),
        ],
        _ => vec![
            ([0.0, 0.0, 0.0], 0.5),
            ([0.7, -0.4, 0.3], 0.35),
            ([-0.6, 0.5, -0.2], 0.8),
            ([0.1, 0.8, -0.5], 0.3),
            ([-0.9, -0.7, 0.6], 0.6),
        ],
    }
}

/// Sub-critical exponents: |x|^{-β} must lie in every space the sweeps use,
/// the binding constraint being the critical Morrey scale n(1-κ)/p = 1/2
/// (p = 2, κ = 1/2, n = 2), hence β < 1/2 throughout.
const POWER_BETAS: [f64; 5] = [0.10, 0.20, 0.25, 0.30, 0.40];

/// The twenty zoo expressions for a given dimension and seed.
pub fn zoo_expressions(dim: usize, seed: u64) -> Vec<Expression> {
    let mut exprs = Vec::with_capacity(ZOO_SIZE);
    for (center, radius) in indicator_params(dim) {
        exprs.push(Expression::BallIndicator { center, radius });
    }
    for (center, sigma) in gaussian_params(dim) {
        exprs.push(Expression::Gaussian { center, sigma });
    }
    for beta in POWER_BETAS {
        exprs.push(Expression::Power { beta });
    }
    for k in 0..5u64 {
        exprs.push(Expression::BumpSum {
            seed: seed.wrapping_mul(1000).wrapping_add(k),
        });
    }
    exprs
}

/// Sample the full zoo on a grid.
pub fn sample_zoo(grid: &GridBox, seed: u64) -> Vec<GridFunction> {
    zoo_expressions(grid.dim, seed)
        .iter()
        .map(|e| sample(e, grid))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_is_reproducible_and_complete() {
        let grid = GridBox::square2(32);
        let a = sample_zoo(&grid, 42);
        let b = sample_zoo(&grid, 42);
        assert_eq!(a.len(), ZOO_SIZE);
        for (f, g) in a.iter().zip(&b) {
            assert_eq!(f.values, g.values);
            assert_eq!(f.label, g.label);
        }
        let c = sample_zoo(&grid, 43);
        // Only the bump sums depend on the seed.
        assert_eq!(a[0].values, c[0].values);
        assert_ne!(a[15].values, c[15].values);
    }
}
