//! Gauss–Legendre rules on arbitrary intervals.

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// An `n`-point Gauss–Legendre rule on `[−1, 1]`, exact through degree `2n − 1`.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pairs: Vec<(f64, f64)>,
}

impl GaussRule {
    pub fn new(order: usize) -> Result<Self> {
        let pairs = match order {
            0 => return Err(Error::invalid("quadrature order must be at least 1")),
            1 => vec![(0.0, 2.0)],
            n => GaussLegendre::new(n)
                .map_err(|e| Error::invalid(e.to_string()))?
                .as_node_weight_pairs()
                .to_vec(),
        };
        Ok(GaussRule { pairs })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Applies the rule on `[a, b]`, stopping at the first non-finite value.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for &(x, w) in &self.pairs {
            let t = mid + half * x;
            let y = f(t);
            if !y.is_finite() {
                return Err(Error::Evaluation { x: t, value: y });
            }
            sum += w * y;
        }
        Ok(half * sum)
    }
}
