//! Gauss–Legendre panels and Halton low-discrepancy points.

use std::num::NonZeroUsize;

const PRIMES: [u8; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// `index`-th point of the Halton sequence in `dim <= 16` dimensions; every
/// coordinate lies in `(0, 1)` for `index >= 1`.
pub fn halton(index: usize, dim: usize) -> Vec<f64> {
    assert!(dim <= PRIMES.len(), "Halton dimension {dim} exceeds {}", PRIMES.len());
    PRIMES[..dim].iter().map(|&p| halton::number(p, index)).collect()
}

/// Gauss–Legendre rule on `[-1, 1]` that can be mapped onto panels.
#[derive(Clone, Debug)]
pub struct Panel {
    pairs: Vec<(f64, f64)>,
}

impl Panel {
    pub fn new(order: usize) -> Self {
        let order = NonZeroUsize::new(order).expect("panel order must be positive");
        let rule = gauss_quad::legendre::GaussLegendre::new(order);
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, r) = ((a + b) / 2.0, (b - a) / 2.0);
        self.pairs.iter().map(move |&(x, w)| (c + r * x, r * w))
    }
}
