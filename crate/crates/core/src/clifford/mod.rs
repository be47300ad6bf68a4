//! Clifford algebra `Cl_n` and its complexification `Cl_n(C)` for `2 <= n <= 5`.
//!
//! Multivectors store `2^n` complex coefficients indexed by blades in graded
//! lexicographic order: the scalar, then `e_1..e_n`, then `e_1e_2, e_1e_3, ...`,
//! up to the pseudoscalar. Generators satisfy `e_i e_j + e_j e_i = -2 δ_ij`.

mod dirac;
mod table;
mod vector;

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use dirac::{dirac_residual, BoxGrid, DiracSide, GridSamples};
pub use table::BladeTable;
pub use vector::{cauchy_kernel, omega, vector_inverse, ComplexVector, NULL_TOL};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 5;
pub const MAX_BLADES: usize = 1 << MAX_DIM;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// Element of `Cl_n(C)`.
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    n: u8,
    coeffs: [Complex64; MAX_BLADES],
}

impl std::fmt::Debug for Multivector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let table = BladeTable::get(self.n());
        let mut first = true;
        write!(f, "Cl{}[", self.n)?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6e}{:+.6e}i){}", c.re, c.im, table.blade_name(i))?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "]")
    }
}

/// Serialized as `{"n": n, "coeffs": [[re, im], ...]}` in blade order.
impl serde::Serialize for Multivector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pairs: Vec<[f64; 2]> = self.coeffs().iter().map(|c| [c.re, c.im]).collect();
        let mut st = s.serialize_struct("Multivector", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("coeffs", &pairs)?;
        st.end()
    }
}

impl Multivector {
    /// Zero element. Panics if `n` is outside `2..=5`.
    pub fn zero(n: usize) -> Self {
        check_dim(n).expect("Multivector dimension");
        Self {
            n: n as u8,
            coeffs: [ZERO; MAX_BLADES],
        }
    }

    pub fn scalar(n: usize, value: impl Into<Complex64>) -> Self {
        let mut m = Self::zero(n);
        m.coeffs[0] = value.into();
        m
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    /// The generator `e_j`, 1-based as in the usual notation.
    pub fn basis(n: usize, j: usize) -> Self {
        assert!((1..=n).contains(&j), "generator index {j} out of range for n = {n}");
        Self::blade(n, &[j])
    }

    /// The basis blade `e_{j_1} ... e_{j_r}` for strictly increasing 1-based indices.
    pub fn blade(n: usize, indices: &[usize]) -> Self {
        let mut mask = 0u32;
        for w in indices.windows(2) {
            assert!(w[0] < w[1], "blade indices must be strictly increasing");
        }
        for &j in indices {
            assert!((1..=n).contains(&j), "generator index {j} out of range for n = {n}");
            mask |= 1 << (j - 1);
        }
        let mut m = Self::zero(n);
        m.coeffs[BladeTable::get(n).index_of_mask(mask)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_coeffs(n: usize, coeffs: &[Complex64]) -> Result<Self> {
        check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::DimensionMismatch(coeffs.len(), 1 << n));
        }
        let mut m = Self::zero(n);
        m.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(m)
    }

    pub fn from_real(n: usize, coeffs: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_coeffs(n, &c)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Number of coefficients, `2^n`.
    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs[..self.dim()]
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        let d = self.dim();
        &mut self.coeffs[..d]
    }

    #[inline]
    pub fn scalar_part(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Geometric product; fails on mismatched dimensions.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let table = BladeTable::get(self.n());
        let d = self.dim();
        let mut out = Self::zero(self.n());
        for i in 0..d {
            let a = self.coeffs[i];
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for j in 0..d {
                let b = other.coeffs[j];
                if b.re == 0.0 && b.im == 0.0 {
                    continue;
                }
                let (k, s) = table.product(i, j);
                out.coeffs[k] += a * b * s;
            }
        }
        out
    }

    /// Reversion composed with the grade involution:
    /// `e_{j_1}...e_{j_r} -> (-1)^r e_{j_r}...e_{j_1}`, extended complex-linearly.
    pub fn reverse(&self) -> Self {
        let table = BladeTable::get(self.n());
        let mut out = *self;
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c *= table.reverse_sign(i);
        }
        out
    }

    /// Componentwise complex conjugation.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in out.coeffs_mut() {
            *c = c.conj();
        }
        out
    }

    /// Complex conjugate of the reverse.
    pub fn star(&self) -> Self {
        self.reverse().conj()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs().iter().map(|c| c.norm_sqr()).sum()
    }

    /// `(Σ |a_A|^2)^{1/2}`; for real coefficients this is the usual Clifford norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs().iter().all(|c| c.im == 0.0)
    }

    /// True when only grade-1 coefficients are non-zero.
    pub fn is_vector(&self) -> bool {
        let table = BladeTable::get(self.n());
        self.coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| table.grade(i) == 1 || (c.re == 0.0 && c.im == 0.0))
    }

    pub fn grade_part(&self, r: usize) -> Self {
        let table = BladeTable::get(self.n());
        let mut out = Self::zero(self.n());
        for i in 0..self.dim() {
            if table.grade(i) == r {
                out.coeffs[i] = self.coeffs[i];
            }
        }
        out
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut out = *self;
        for c in out.coeffs_mut() {
            *c *= s;
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Matrix of `b -> a b` acting on coefficient vectors.
    pub fn left_matrix(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::from_element(d, d, ZERO);
        let table = BladeTable::get(self.n());
        for i in 0..d {
            let a = self.coeffs[i];
            if a == ZERO {
                continue;
            }
            for j in 0..d {
                let (k, s) = table.product(i, j);
                m[(k, j)] += a * s;
            }
        }
        m
    }

    /// Adds `w` times the left-multiplication matrix into a row-major buffer with
    /// row stride `stride` (the block occupies columns `0..d` of rows `0..d`).
    pub(crate) fn add_left_matrix(&self, w: Complex64, out: &mut [Complex64], stride: usize) {
        let d = self.dim();
        let table = BladeTable::get(self.n());
        for i in 0..d {
            let a = self.coeffs[i] * w;
            if a == ZERO {
                continue;
            }
            for j in 0..d {
                let (k, s) = table.product(i, j);
                out[k * stride + j] += a * s;
            }
        }
    }

    /// Maximum coefficient distance, used throughout the test suites.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.coeffs_mut().iter_mut().zip(rhs.coeffs()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.coeffs_mut().iter_mut().zip(rhs.coeffs()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Geometric product. Panics on mismatched dimensions; use [`Multivector::product`]
/// for the fallible form.
impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        self.mul_unchecked(&rhs)
    }
}

impl Mul<Complex64> for Multivector {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn arb_mv(n: usize) -> impl Strategy<Value = Multivector> {
        proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1 << n).prop_map(move |v| {
            let cs: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            Multivector::from_coeffs(n, &cs).unwrap()
        })
    }

    #[test]
    fn generating_relations_are_exact() {
        for n in MIN_DIM..=MAX_DIM {
            for i in 1..=n {
                for j in 1..=n {
                    let ei = Multivector::basis(n, i);
                    let ej = Multivector::basis(n, j);
                    let anti = ei * ej + ej * ei;
                    let expected = if i == j { Multivector::scalar(n, -2.0) } else { Multivector::zero(n) };
                    assert_eq!(anti, expected, "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn e1_squares_to_minus_one() {
        let e1 = Multivector::basis(3, 1);
        assert_eq!(e1 * e1, Multivector::scalar(3, -1.0));
    }

    #[test]
    fn isotropic_vector_squares_to_zero() {
        let z = Multivector::basis(2, 1) + Multivector::basis(2, 2) * c(0.0, 1.0);
        assert_eq!(z * z, Multivector::zero(2));
    }

    #[test]
    fn blade_order_is_graded_lex() {
        let t = BladeTable::get(3);
        let names: Vec<String> = (0..8).map(|i| t.blade_name(i)).collect();
        assert_eq!(names, ["1", "e1", "e2", "e3", "e12", "e13", "e23", "e123"]);
    }

    #[test]
    fn reverse_examples() {
        let n = 2;
        assert_eq!(Multivector::one(n).reverse(), Multivector::one(n));
        assert_eq!(Multivector::basis(n, 1).reverse(), -Multivector::basis(n, 1));
        let e12 = Multivector::blade(n, &[1, 2]);
        assert_eq!(e12.reverse(), -e12);
    }

    #[test]
    fn star_examples() {
        let n = 2;
        assert_eq!(Multivector::one(n).star(), Multivector::one(n));
        let ie1 = Multivector::basis(n, 1) * c(0.0, 1.0);
        assert_eq!(ie1.star(), ie1);
        let e12 = Multivector::blade(n, &[1, 2]);
        assert_eq!(e12.star(), -e12);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Multivector::basis(2, 1).norm(), 1.0);
        let a = Multivector::scalar(2, 3.0) + Multivector::blade(2, &[1, 2]) * 4.0;
        assert!((a.norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn product_rejects_mismatched_dimensions() {
        let a = Multivector::one(2);
        let b = Multivector::one(3);
        assert!(matches!(a.product(&b), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn left_matrix_of_unit_and_generator() {
        for n in MIN_DIM..=MAX_DIM {
            let d = 1 << n;
            assert_eq!(Multivector::one(n).left_matrix(), DMatrix::identity(d, d));
            let l = Multivector::basis(n, 1).left_matrix();
            assert_eq!(&l * &l, -DMatrix::<Complex64>::identity(d, d));
        }
    }

    proptest! {
        #[test]
        fn unit_is_neutral(a in arb_mv(3)) {
            prop_assert_eq!(Multivector::one(3) * a, a);
            prop_assert_eq!(a * Multivector::one(3), a);
        }

        #[test]
        fn associativity(a in arb_mv(4), b in arb_mv(4), c in arb_mv(4)) {
            let lhs = (a * b) * c;
            let rhs = a * (b * c);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * (1.0 + lhs.norm()));
        }

        #[test]
        fn reverse_is_an_antiautomorphism(a in arb_mv(3), b in arb_mv(3)) {
            let lhs = (a * b).reverse();
            let rhs = b.reverse() * a.reverse();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            prop_assert_eq!(a.reverse().reverse(), a);
        }

        #[test]
        fn real_norm_from_reverse(v in proptest::collection::vec(-3.0f64..3.0, 16)) {
            let a = Multivector::from_real(4, &v).unwrap();
            let s = (a * a.reverse()).scalar_part();
            prop_assert!((s.re - a.norm_sqr()).abs() < 1e-12 * (1.0 + a.norm_sqr()));
            prop_assert!(s.im.abs() < 1e-14);
        }

        #[test]
        fn left_matrix_is_a_homomorphism(a in arb_mv(2), b in arb_mv(2)) {
            let prod = (a * b).left_matrix();
            let composed = a.left_matrix() * b.left_matrix();
            prop_assert!((prod - composed).camax() < 1e-12);
            let bv = nalgebra::DVector::from_column_slice(b.coeffs());
            let ab = a.left_matrix() * bv;
            let direct = a * b;
            for (x, y) in ab.iter().zip(direct.coeffs()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
