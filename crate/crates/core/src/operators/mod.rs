//! Boundary functions and dense block operators acting on them.
//!
//! A [`BlockOperator`] on a mesh with `N` nodes in dimension `n` is a dense
//! `N 2^n x N 2^n` complex matrix; block `(i, j)` is the matrix of left
//! multiplication by a Clifford element. Boundary functions are flattened node
//! by node, each node contributing its `2^n` coefficients in blade order.

mod assemble;
mod band;
mod transform;

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{ComplexVector, Multivector};
use crate::error::{Error, Result};
use crate::manifold::BoundaryMesh;

pub use assemble::{
    assemble_adjoint_cauchy, assemble_kerzman_stein, assemble_singular_cauchy, generic_kernel_operator,
    kerzman_stein_density, plemelj, Sign,
};
pub use band::BandBasis;
pub use transform::{cauchy_transform, CauchyEvaluator};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// A Clifford-valued function sampled at the nodes of a mesh.
#[derive(Clone, Debug)]
pub struct BoundaryFunction {
    mesh: Arc<BoundaryMesh>,
    values: Vec<Multivector>,
}

impl BoundaryFunction {
    pub fn new(mesh: &Arc<BoundaryMesh>, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::DimensionMismatch(values.len(), mesh.len()));
        }
        if let Some(v) = values.iter().find(|v| v.n() != mesh.n) {
            return Err(Error::DimensionMismatch(v.n(), mesh.n));
        }
        Ok(Self {
            mesh: Arc::clone(mesh),
            values,
        })
    }

    pub fn from_fn<F: Fn(usize, &ComplexVector) -> Multivector>(mesh: &Arc<BoundaryMesh>, f: F) -> Self {
        let values = mesh.nodes.iter().enumerate().map(|(i, z)| f(i, z)).collect();
        Self {
            mesh: Arc::clone(mesh),
            values,
        }
    }

    pub fn constant(mesh: &Arc<BoundaryMesh>, value: Multivector) -> Self {
        Self::from_fn(mesh, |_, _| value)
    }

    pub fn zero(mesh: &Arc<BoundaryMesh>) -> Self {
        Self::constant(mesh, Multivector::zero(mesh.n))
    }

    pub fn mesh(&self) -> &Arc<BoundaryMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_vector(&self) -> CVec {
        let d = self.mesh.blades();
        CVec::from_iterator(self.len() * d, self.values.iter().flat_map(|v| v.coeffs().iter().copied()))
    }

    pub fn from_vector(mesh: &Arc<BoundaryMesh>, v: &CVec) -> Result<Self> {
        let d = mesh.blades();
        if v.len() != mesh.len() * d {
            return Err(Error::DimensionMismatch(v.len(), mesh.len() * d));
        }
        let values = v
            .as_slice()
            .chunks(d)
            .map(|c| Multivector::from_coeffs(mesh.n, c))
            .collect::<Result<_>>()?;
        Ok(Self {
            mesh: Arc::clone(mesh),
            values,
        })
    }

    pub fn same_mesh(&self, other: &Self) -> bool {
        same_mesh(&self.mesh, &other.mesh)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Multivector, Multivector) -> Multivector) -> Result<Self> {
        if !self.same_mesh(other) {
            return Err(Error::MeshMismatch);
        }
        Ok(Self {
            mesh: Arc::clone(&self.mesh),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self {
            mesh: Arc::clone(&self.mesh),
            values: self.values.iter().map(|v| *v * c).collect(),
        }
    }

    /// Node-wise `a f(z)`.
    pub fn left_mul(&self, a: &Multivector) -> Self {
        Self {
            mesh: Arc::clone(&self.mesh),
            values: self.values.iter().map(|v| *a * *v).collect(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(self)
    }

    /// Largest coefficient difference over all nodes.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn same_mesh(a: &Arc<BoundaryMesh>, b: &Arc<BoundaryMesh>) -> bool {
    Arc::ptr_eq(a, b) || (a.n == b.n && a.nodes == b.nodes && a.sigma == b.sigma)
}

/// Clifford-valued pairing `Σ_j reverse(f_j) g_j σ_j`.
pub fn pairing(f: &BoundaryFunction, g: &BoundaryFunction) -> Result<Multivector> {
    if !f.same_mesh(g) {
        return Err(Error::MeshMismatch);
    }
    let mut acc = Multivector::zero(f.mesh.n);
    for ((a, b), s) in f.values.iter().zip(&g.values).zip(&f.mesh.sigma) {
        acc += (a.reverse() * *b) * *s;
    }
    Ok(acc)
}

/// `L^2(|σ|)` norm: square root of the scalar part of `Σ_j star(f_j) f_j |σ|_j`.
pub fn l2_norm(f: &BoundaryFunction) -> f64 {
    f.values
        .iter()
        .zip(&f.mesh.sigma_abs)
        .map(|(v, w)| v.norm_sqr() * w)
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OperatorLabel {
    Cauchy,
    AdjointCauchy,
    KerzmanStein,
    PlemeljPlus,
    PlemeljMinus,
    SzegoPlus,
    SzegoMinus,
    GenericKernel,
    Custom(String),
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorLabel::Cauchy => f.write_str("C"),
            OperatorLabel::AdjointCauchy => f.write_str("C*"),
            OperatorLabel::KerzmanStein => f.write_str("A"),
            OperatorLabel::PlemeljPlus => f.write_str("S+"),
            OperatorLabel::PlemeljMinus => f.write_str("S-"),
            OperatorLabel::SzegoPlus => f.write_str("P+"),
            OperatorLabel::SzegoMinus => f.write_str("P-"),
            OperatorLabel::GenericKernel => f.write_str("T_K"),
            OperatorLabel::Custom(s) => f.write_str(s),
        }
    }
}

/// Dense operator on boundary functions of one mesh.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    mesh: Arc<BoundaryMesh>,
    label: OperatorLabel,
    matrix: CMat,
}

impl BlockOperator {
    pub fn from_matrix(mesh: &Arc<BoundaryMesh>, label: OperatorLabel, matrix: CMat) -> Result<Self> {
        let size = mesh.len() * mesh.blades();
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::DimensionMismatch(matrix.nrows(), size));
        }
        Ok(Self {
            mesh: Arc::clone(mesh),
            label,
            matrix,
        })
    }

    pub fn identity(mesh: &Arc<BoundaryMesh>) -> Self {
        let size = mesh.len() * mesh.blades();
        Self {
            mesh: Arc::clone(mesh),
            label: OperatorLabel::Custom("I".into()),
            matrix: CMat::identity(size, size),
        }
    }

    pub fn mesh(&self) -> &Arc<BoundaryMesh> {
        &self.mesh
    }

    pub fn label(&self) -> &OperatorLabel {
        &self.label
    }

    pub fn with_label(mut self, label: OperatorLabel) -> Self {
        self.label = label;
        self
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    /// Block `(i, j)` as a `2^n x 2^n` matrix.
    pub fn block(&self, i: usize, j: usize) -> CMat {
        let d = self.mesh.blades();
        self.matrix.view((i * d, j * d), (d, d)).into_owned()
    }

    pub fn apply(&self, f: &BoundaryFunction) -> Result<BoundaryFunction> {
        if !same_mesh(&self.mesh, &f.mesh) {
            return Err(Error::MeshMismatch);
        }
        BoundaryFunction::from_vector(&self.mesh, &(&self.matrix * f.to_vector()))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_mesh(&self.mesh, &other.mesh) {
            Ok(())
        } else {
            Err(Error::MeshMismatch)
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            mesh: Arc::clone(&self.mesh),
            label: OperatorLabel::Custom(format!("{}{}", self.label, other.label)),
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            mesh: Arc::clone(&self.mesh),
            label: OperatorLabel::Custom(format!("{} + {}", self.label, other.label)),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            mesh: Arc::clone(&self.mesh),
            label: OperatorLabel::Custom(format!("{} - {}", self.label, other.label)),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        Self {
            mesh: Arc::clone(&self.mesh),
            label: self.label.clone(),
            matrix: &self.matrix * c.into(),
        }
    }

    /// Largest Frobenius norm of a block.
    pub fn max_block_norm(&self) -> f64 {
        let n = self.mesh.len();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                m = m.max(self.block(i, j).norm());
            }
        }
        m
    }

    /// Largest imaginary part of any entry.
    pub fn max_imag(&self) -> f64 {
        self.matrix.iter().map(|x| x.im.abs()).fold(0.0, f64::max)
    }

    /// JSON export: blocks in row-major block order, each block row-major, scalars as `[re, im]`.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Export<'a> {
            label: String,
            n: usize,
            nodes: usize,
            block_size: usize,
            blocks: Vec<Vec<[f64; 2]>>,
            #[serde(skip)]
            _m: std::marker::PhantomData<&'a ()>,
        }
        let (n, d) = (self.mesh.len(), self.mesh.blades());
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut b = Vec::with_capacity(d * d);
                for r in 0..d {
                    for c in 0..d {
                        let x = self.matrix[(i * d + r, j * d + c)];
                        b.push([x.re, x.im]);
                    }
                }
                blocks.push(b);
            }
        }
        Ok(serde_json::to_string(&Export {
            label: self.label.to_string(),
            n: self.mesh.n,
            nodes: n,
            block_size: d,
            blocks,
            _m: std::marker::PhantomData,
        })?)
    }
}

/// CSV spectrum dump: `index,singular_value`.
pub fn spectrum_csv(singular_values: &[f64]) -> String {
    let mut s = String::from("index,singular_value\n");
    for (k, v) in singular_values.iter().enumerate() {
        s.push_str(&format!("{k},{v:.17e}\n"));
    }
    s
}
