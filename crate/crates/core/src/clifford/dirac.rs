use num_complex::Complex64;

use super::{ComplexVector, Multivector};
use crate::error::{Error, Result};

/// Uniform grid on a real box `[lower, upper]` in `R^n`, `points` samples per axis.
#[derive(Clone, Debug)]
pub struct BoxGrid {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiracSide {
    /// `Df = Σ e_j ∂_j f`
    Left,
    /// `fD = Σ ∂_j f e_j`
    Right,
}

/// Samples of a `Cl_n(C)`-valued function on a [`BoxGrid`], row-major with the
/// last axis fastest.
#[derive(Clone, Debug)]
pub struct GridSamples {
    pub grid: BoxGrid,
    pub values: Vec<Multivector>,
}

impl BoxGrid {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, points: usize) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch(lower.len(), upper.len()));
        }
        super::check_dim(lower.len())?;
        if points < 3 {
            return Err(Error::GridTooSmall(points));
        }
        Ok(Self { lower, upper, points })
    }

    pub fn n(&self) -> usize {
        self.lower.len()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        (self.upper[axis] - self.lower[axis]) / (self.points - 1) as f64
    }

    fn len(&self) -> usize {
        self.points.pow(self.n() as u32)
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n()];
        for a in (0..self.n()).rev() {
            idx[a] = flat % self.points;
            flat /= self.points;
        }
        idx
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i)
    }

    /// Samples `f` at `base + x` for every grid point `x`. A complex `base`
    /// probes a holomorphic extension along real directions, where
    /// `∂/∂z_j` coincides with `∂/∂x_j`.
    pub fn sample<F>(&self, base: Option<&ComplexVector>, f: F) -> GridSamples
    where
        F: Fn(&ComplexVector) -> Multivector,
    {
        let n = self.n();
        let values = (0..self.len())
            .map(|flat| {
                let idx = self.multi_index(flat);
                let x: Vec<f64> = (0..n).map(|a| self.lower[a] + idx[a] as f64 * self.spacing(a)).collect();
                let mut z = ComplexVector::from_real(&x).expect("grid dimension");
                if let Some(b) = base {
                    z = z + *b;
                }
                f(&z)
            })
            .collect();
        GridSamples {
            grid: self.clone(),
            values,
        }
    }
}

/// Max-norm of the centered-difference Dirac derivative over interior grid points.
pub fn dirac_residual(samples: &GridSamples, side: DiracSide) -> Result<f64> {
    let grid = &samples.grid;
    let n = grid.n();
    if grid.points < 3 {
        return Err(Error::GridTooSmall(grid.points));
    }
    if samples.values.len() != grid.len() {
        return Err(Error::DimensionMismatch(samples.values.len(), grid.len()));
    }
    let gens: Vec<Multivector> = (1..=n).map(|j| Multivector::basis(n, j)).collect();
    let mut worst = 0.0f64;
    for flat in 0..grid.len() {
        let idx = grid.multi_index(flat);
        if idx.iter().any(|&i| i == 0 || i == grid.points - 1) {
            continue;
        }
        let mut d = Multivector::zero(n);
        for a in 0..n {
            let mut up = idx.clone();
            up[a] += 1;
            let mut down = idx.clone();
            down[a] -= 1;
            let diff = (samples.values[grid.flat_index(&up)] - samples.values[grid.flat_index(&down)])
                * Complex64::new(0.5 / grid.spacing(a), 0.0);
            d += match side {
                DiracSide::Left => gens[a] * diff,
                DiracSide::Right => diff * gens[a],
            };
        }
        worst = worst.max(d.norm());
    }
    Ok(worst)
}
