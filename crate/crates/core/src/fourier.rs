//! Trigonometric interpolation of equispaced periodic samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Fourier coefficients of the trigonometric interpolant of equispaced samples
/// on `[0, 2π)`, in FFT order, normalised so that `f(θ_j) = Σ_k c_k e^{ikθ_j}`.
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
}

fn wavenumber(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

impl TrigInterpolant {
    pub fn new(samples: &[Complex64]) -> Self {
        let n = samples.len();
        let mut coeffs = samples.to_vec();
        FftPlanner::new().plan_fft_forward(n).process(&mut coeffs);
        let scale = 1.0 / n as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplier of mode `k` under the shift `θ -> θ + δ`; the Nyquist mode of an
    /// even grid is treated as `cos(Nθ/2)` so real data stay real.
    fn shift_factor(&self, k: usize, delta: f64) -> Complex64 {
        let n = self.len();
        if n % 2 == 0 && k == n / 2 {
            Complex64::new((n as f64 / 2.0 * delta).cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, wavenumber(k, n) * delta)
        }
    }

    /// Interpolant at `θ_j + δ` for every grid point `θ_j = 2πj/N`.
    pub fn shifted(&self, delta: f64) -> Vec<Complex64> {
        let n = self.len();
        let mut buf: Vec<Complex64> = (0..n).map(|k| self.coeffs[k] * self.shift_factor(k, delta)).collect();
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        buf
    }

    /// Interpolant at an arbitrary `θ` (direct `O(N)` sum).
    pub fn eval(&self, theta: f64) -> Complex64 {
        let n = self.len();
        (0..n).map(|k| self.coeffs[k] * self.shift_factor(k, theta)).sum()
    }

    /// Largest coefficient modulus among wavenumbers `|k| > band`, a cheap
    /// resolution indicator.
    pub fn tail(&self, band: usize) -> f64 {
        let n = self.len();
        (0..n)
            .filter(|&k| wavenumber(k, n).abs() > band as f64)
            .map(|k| self.coeffs[k].norm())
            .fold(0.0, f64::max)
    }
}

/// Equispaced grid `θ_j = 2πj/N`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}
