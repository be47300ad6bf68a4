use std::sync::Arc;

use num_complex::Complex64;

use super::{BlockOperator, CMat};
use crate::error::{Error, Result};
use crate::linalg::{norm2, orthonormal_columns};
use crate::manifold::BoundaryMesh;

/// Low-frequency test space used to measure operator residuals.
///
/// On closed curves the space is spanned by `e^{ikθ} e_A` for `|k| <= band` and
/// every blade `e_A`; on other meshes by coordinate monomials of degree at
/// most `min(band, 3)` times each blade, keeping the first coordinate to
/// degree at most one since the mesh lies on a quadric. The columns are orthonormal in the
/// `|σ|`-weighted `L^2` inner product, so `‖W^{1/2} T B‖_2` is the norm of `T`
/// restricted to the space.
#[derive(Clone, Debug)]
pub struct BandBasis {
    mesh: Arc<BoundaryMesh>,
    columns: CMat,
    sqrt_w: Vec<f64>,
}

impl BandBasis {
    pub fn new(mesh: &Arc<BoundaryMesh>, band: usize) -> Result<Self> {
        let (count, d) = (mesh.len(), mesh.blades());
        let scalars = if mesh.curve.is_some() {
            let band = band.min((count - 1) / 2);
            let dt = 2.0 * std::f64::consts::PI / count as f64;
            (-(band as i64)..=band as i64)
                .map(|k| (0..count).map(|j| Complex64::from_polar(1.0, k as f64 * j as f64 * dt)).collect())
                .collect::<Vec<Vec<Complex64>>>()
        } else {
            monomials(mesh, band.min(3))
        };
        if scalars.is_empty() || scalars.len() * d > count * d {
            return Err(Error::InvalidArgument("band basis larger than the mesh".into()));
        }
        let sqrt_w: Vec<f64> = mesh.sigma_abs.iter().map(|w| w.sqrt()).collect();
        let m = scalars.len() * d;
        let mut raw = CMat::zeros(count * d, m);
        for (s, col) in scalars.iter().enumerate() {
            for b in 0..d {
                for j in 0..count {
                    raw[(j * d + b, s * d + b)] = col[j] * sqrt_w[j];
                }
            }
        }
        let mut columns = orthonormal_columns(&raw);
        for j in 0..count {
            for b in 0..d {
                let mut row = columns.row_mut(j * d + b);
                row /= Complex64::new(sqrt_w[j], 0.0);
            }
        }
        Ok(Self {
            mesh: Arc::clone(mesh),
            columns,
            sqrt_w,
        })
    }

    pub fn mesh(&self) -> &Arc<BoundaryMesh> {
        &self.mesh
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn columns(&self) -> &CMat {
        &self.columns
    }

    /// `‖W^{1/2} Y‖_2` for the image `Y` of the basis under some operator.
    pub fn image_norm(&self, image: &CMat) -> f64 {
        let d = self.mesh.blades();
        let mut y = image.clone();
        for (r, mut row) in y.row_iter_mut().enumerate() {
            row *= Complex64::new(self.sqrt_w[r / d], 0.0);
        }
        norm2(&y)
    }

    /// Norm of `op` on the band space.
    pub fn restricted_norm(&self, op: &BlockOperator) -> Result<f64> {
        if !super::same_mesh(op.mesh(), &self.mesh) {
            return Err(Error::MeshMismatch);
        }
        Ok(self.image_norm(&(op.matrix() * &self.columns)))
    }
}

fn monomials(mesh: &BoundaryMesh, degree: usize) -> Vec<Vec<Complex64>> {
    let n = mesh.n;
    let mut exps: Vec<Vec<usize>> = vec![vec![0; n]];
    for _ in 0..degree {
        let mut next = exps.clone();
        for e in &exps {
            for k in 0..n {
                let mut f = e.clone();
                f[k] += 1;
                if f[0] <= 1 && f.iter().sum::<usize>() <= degree && !next.contains(&f) {
                    next.push(f);
                }
            }
        }
        exps = next;
    }
    exps.iter()
        .map(|e| {
            mesh.nodes
                .iter()
                .map(|z| {
                    z.components()
                        .iter()
                        .zip(e)
                        .map(|(c, &p)| c.powu(p as u32))
                        .product()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_weighted_orthonormal() {
        let mesh = Arc::new(BoundaryMesh::deformed_curve(64, 0.1, 3).unwrap());
        let b = BandBasis::new(&mesh, 8).unwrap();
        assert_eq!(b.dim(), 17 * 4);
        let id = BlockOperator::identity(&mesh);
        assert!((b.restricted_norm(&id).unwrap() - 1.0).abs() < 1e-10);
        let mut y = b.columns().clone();
        for (r, mut row) in y.row_iter_mut().enumerate() {
            row *= Complex64::new(mesh.sigma_abs[r / 4], 0.0);
        }
        let gram = b.columns().adjoint() * y;
        assert!((gram - CMat::identity(68, 68)).norm() < 1e-10);
    }

    #[test]
    fn sphere_uses_monomials() {
        let mesh = Arc::new(BoundaryMesh::sphere(162, 1.0).unwrap());
        let b = BandBasis::new(&mesh, 8).unwrap();
        // polynomials of degree <= 3 on the sphere
        assert_eq!(b.dim(), 16 * 8);
        let id = BlockOperator::identity(&mesh);
        assert!((b.restricted_norm(&id).unwrap() - 1.0).abs() < 1e-8);
    }
}
