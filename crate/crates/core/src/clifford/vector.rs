use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_dim, BladeTable, Multivector, MAX_DIM};
use crate::error::{Error, Result};

/// Relative null-cone tolerance: `|z^2| <= NULL_TOL * (1 + ||z||^2)` counts as null.
pub const NULL_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A vector `z_1 e_1 + ... + z_n e_n` of `C^n`.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexVector {
    n: u8,
    z: [Complex64; MAX_DIM],
}

impl std::fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.components()).finish()
    }
}

impl ComplexVector {
    pub fn zero(n: usize) -> Self {
        check_dim(n).expect("ComplexVector dimension");
        Self {
            n: n as u8,
            z: [ZERO; MAX_DIM],
        }
    }

    pub fn new(components: &[Complex64]) -> Result<Self> {
        let n = components.len();
        check_dim(n)?;
        let mut v = Self::zero(n);
        v.z[..n].copy_from_slice(components);
        Ok(v)
    }

    pub fn from_real(components: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = components.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&c)
    }

    /// `e_j` scaled by `s`, 1-based.
    pub fn axis(n: usize, j: usize, s: f64) -> Self {
        let mut v = Self::zero(n);
        v.z[j - 1] = Complex64::new(s, 0.0);
        v
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn components(&self) -> &[Complex64] {
        &self.z[..self.n()]
    }

    #[inline]
    pub fn components_mut(&mut self) -> &mut [Complex64] {
        let n = self.n();
        &mut self.z[..n]
    }

    /// Complex-bilinear form `<z, w> = Σ z_j w_j`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        self.components().iter().zip(other.components()).map(|(a, b)| a * b).sum()
    }

    /// Clifford square `z^2 = -Σ z_j^2`, a complex scalar.
    pub fn square(&self) -> Complex64 {
        -self.dot(self)
    }

    /// Inner product of `C^n` identified with `R^{2n}`.
    pub fn real_inner(&self, other: &Self) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// Euclidean norm in `R^{2n}`.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components().iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.components().iter().all(|c| c.im == 0.0)
    }

    pub fn is_null(&self) -> bool {
        self.square().norm() <= NULL_TOL * (1.0 + self.norm_sqr())
    }

    pub fn re(&self) -> Self {
        let mut v = *self;
        for c in v.components_mut() {
            *c = Complex64::new(c.re, 0.0);
        }
        v
    }

    pub fn im(&self) -> Self {
        let mut v = *self;
        for c in v.components_mut() {
            *c = Complex64::new(c.im, 0.0);
        }
        v
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut v = *self;
        for c in v.components_mut() {
            *c *= s;
        }
        v
    }

    pub fn to_multivector(&self) -> Multivector {
        let n = self.n();
        let idx = BladeTable::get(n).vector_indices();
        let mut m = Multivector::zero(n);
        for j in 0..n {
            m.coeffs_mut()[idx[j]] = self.z[j];
        }
        m
    }

    /// Grade-1 part of a multivector.
    pub fn from_multivector(m: &Multivector) -> Self {
        let n = m.n();
        let idx = BladeTable::get(n).vector_indices();
        let mut v = Self::zero(n);
        for j in 0..n {
            v.z[j] = m.coeffs()[idx[j]];
        }
        v
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for ComplexVector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.components_mut().iter_mut().zip(rhs.components()) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexVector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.components_mut().iter_mut().zip(rhs.components()) {
            *a -= b;
        }
        self
    }
}

impl Neg for ComplexVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<f64> for ComplexVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for ComplexVector {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

// Serialized as a list of [re, im] pairs, one per component.
impl Serialize for ComplexVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.components().iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        let c: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        ComplexVector::new(&c).map_err(serde::de::Error::custom)
    }
}

fn null_check(z: &ComplexVector) -> Result<Complex64> {
    let sq = z.square();
    if sq.norm() <= NULL_TOL * (1.0 + z.norm_sqr()) {
        return Err(Error::NullVector {
            square_abs: sq.norm(),
        });
    }
    Ok(sq)
}

/// Multiplicative inverse `z / z^2` of a non-null vector; on real vectors this is
/// `-x / ||x||^2`.
pub fn vector_inverse(z: &ComplexVector) -> Result<ComplexVector> {
    let sq = null_check(z)?;
    Ok(z.scale(sq.inv()))
}

/// Surface area of the unit sphere in `R^n`.
pub fn omega(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / statrs::function::gamma::gamma(half)
}

/// Cauchy kernel `G(z) = (-1)^{n/2} z^{-n+1}`, evaluated as `(-1)^{n/2} z (z^2)^{-n/2}`.
///
/// For odd `n` only real arguments are accepted; there it is `x / ||x||^n`.
pub fn cauchy_kernel(z: &ComplexVector) -> Result<ComplexVector> {
    let n = z.n();
    if n % 2 == 1 {
        if !z.is_real() {
            return Err(Error::OddDimensionComplexArgument(n));
        }
        null_check(z)?;
        let r = z.norm();
        return Ok(z.scale(1.0 / r.powi(n as i32)));
    }
    let sq = null_check(z)?;
    let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(z.scale(sq.powi(-((n / 2) as i32)) * sign))
}
