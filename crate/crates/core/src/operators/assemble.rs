use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{BlockOperator, CMat, OperatorLabel};
use crate::clifford::{cauchy_kernel, omega, ComplexVector, Multivector};
use crate::error::{Error, Result};
use crate::manifold::{validate_domain_manifold, BoundaryMesh, DEFAULT_MARGIN};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Expands one row of Clifford coefficients per node into the dense block matrix.
fn expand<F>(mesh: &Arc<BoundaryMesh>, label: OperatorLabel, row: F) -> Result<BlockOperator>
where
    F: Fn(usize) -> Result<Vec<Multivector>> + Sync,
{
    let (count, d) = (mesh.len(), mesh.blades());
    let width = count * d;
    let rows: Vec<Vec<Complex64>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let coeffs = row(i)?;
            let mut buf = vec![Complex64::new(0.0, 0.0); d * width];
            for (j, m) in coeffs.iter().enumerate() {
                m.add_left_matrix(Complex64::new(1.0, 0.0), &mut buf[j * d..], width);
            }
            Ok(buf)
        })
        .collect::<Result<_>>()?;
    let data: Vec<Complex64> = rows.into_iter().flatten().collect();
    BlockOperator::from_matrix(mesh, label, CMat::from_row_slice(width, width, &data))
}

fn validated(mesh: &BoundaryMesh) -> Result<()> {
    validate_domain_manifold(mesh, DEFAULT_MARGIN)
        .map(|_| ())
        .map_err(Error::ValidationFailed)
}

/// `G(z_i - z_j)` for every `j != i` (zero on the diagonal).
fn kernel_row(mesh: &BoundaryMesh, i: usize) -> Result<Vec<Multivector>> {
    mesh.nodes
        .iter()
        .enumerate()
        .map(|(j, zj)| {
            if j == i {
                Ok(Multivector::zero(mesh.n))
            } else {
                Ok(cauchy_kernel(&(mesh.nodes[i] - *zj))?.to_multivector())
            }
        })
        .collect()
}

fn normals(mesh: &BoundaryMesh) -> Vec<Multivector> {
    mesh.normals.iter().map(ComplexVector::to_multivector).collect()
}

/// Singular Cauchy integral `C` on the boundary, `(Cf)(z_i) ≈ PV ∫ G(z_i - w) n(w) f(w) dσ(w) / ω`.
///
/// Off-diagonal blocks are the punctured trapezoid rule. The diagonal is fixed
/// by requiring `C 1 = 1/2` row by row; on closed curves a fourth-order
/// difference term in the density removes the remaining `O(1)` error of the
/// punctured rule, so that band-limited data are integrated to the accuracy of
/// the difference stencil.
pub fn assemble_singular_cauchy(mesh: &Arc<BoundaryMesh>) -> Result<BlockOperator> {
    validated(mesh)?;
    let nrm = normals(mesh);
    let inv = 1.0 / omega(mesh.n);
    let count = mesh.len();
    let half = Multivector::scalar(mesh.n, 0.5);
    let corrections: Option<Vec<Multivector>> = match &mesh.curve {
        Some(curve) => Some(
            curve
                .tangents
                .iter()
                .map(|t| {
                    let c = t.components();
                    let perp = ComplexVector::new(&[c[1], -c[0]])?.to_multivector();
                    Ok(cauchy_kernel(t)?.to_multivector() * perp * (-inv))
                })
                .collect::<Result<_>>()?,
        ),
        None => None,
    };
    expand(mesh, OperatorLabel::Cauchy, |i| {
        let mut row = kernel_row(mesh, i)?;
        let mut diag = half;
        for (j, m) in row.iter_mut().enumerate() {
            if j != i {
                *m = (*m * nrm[j]) * (mesh.sigma[j] * inv);
                diag -= *m;
            }
        }
        row[i] = diag;
        if let Some(c) = &corrections {
            let c = c[i];
            for (offset, w) in [(1, 8.0), (count - 1, -8.0), (2, -1.0), (count - 2, 1.0)] {
                row[(i + offset) % count] += c * (w / 12.0);
            }
        }
        Ok(row)
    })
}

/// Kernel density `(G(z_i - z_j) n_j + n_i G(z_i - z_j)) / ω` of `A = C - C★` for `i != j`.
pub fn kerzman_stein_density(mesh: &BoundaryMesh, i: usize, j: usize) -> Result<Multivector> {
    let g = cauchy_kernel(&(mesh.nodes[i] - mesh.nodes[j]))?.to_multivector();
    let (ni, nj) = (mesh.normals[i].to_multivector(), mesh.normals[j].to_multivector());
    Ok((g * nj + ni * g) * (1.0 / omega(mesh.n)))
}

/// Kerzman–Stein operator `A = C - C★`.
///
/// Its kernel is weakly singular, so off-diagonal blocks are plain trapezoid
/// entries. The diagonal density is extrapolated from the neighbours: on closed
/// curves by Richardson extrapolation of the `±1` and `±2` averages, elsewhere
/// by the mean over mesh neighbours.
pub fn assemble_kerzman_stein(mesh: &Arc<BoundaryMesh>) -> Result<BlockOperator> {
    validated(mesh)?;
    let nrm = normals(mesh);
    let inv = 1.0 / omega(mesh.n);
    let count = mesh.len();
    expand(mesh, OperatorLabel::KerzmanStein, |i| {
        let g = kernel_row(mesh, i)?;
        let dens: Vec<Multivector> = g
            .iter()
            .zip(&nrm)
            .map(|(g, nj)| (*g * *nj + nrm[i] * *g) * inv)
            .collect();
        let diag = if mesh.curve.is_some() {
            let avg = |k: usize| (dens[(i + k) % count] + dens[(i + count - k) % count]) * 0.5;
            (avg(1) * 4.0 - avg(2)) * (1.0 / 3.0)
        } else {
            let nb = mesh.neighbors_of(i);
            let mut acc = Multivector::zero(mesh.n);
            for &j in &nb {
                acc += dens[j];
            }
            acc * (1.0 / nb.len().max(1) as f64)
        };
        let mut row: Vec<Multivector> = dens.iter().zip(&mesh.sigma).map(|(a, s)| *a * *s).collect();
        row[i] = diag * mesh.sigma[i];
        Ok(row)
    })
}

/// Adjoint `C★ = C - A` with respect to the Clifford pairing.
pub fn assemble_adjoint_cauchy(mesh: &Arc<BoundaryMesh>) -> Result<BlockOperator> {
    let c = assemble_singular_cauchy(mesh)?;
    let a = assemble_kerzman_stein(mesh)?;
    Ok(c.sub(&a)?.with_label(OperatorLabel::AdjointCauchy))
}

/// Plemelj projections `S± = I/2 ± C`.
pub fn plemelj(cauchy: &BlockOperator, sign: Sign) -> BlockOperator {
    let half = BlockOperator::identity(cauchy.mesh()).scale(0.5);
    let (m, label) = match sign {
        Sign::Plus => (half.matrix() + cauchy.matrix(), OperatorLabel::PlemeljPlus),
        Sign::Minus => (half.matrix() - cauchy.matrix(), OperatorLabel::PlemeljMinus),
    };
    BlockOperator::from_matrix(cauchy.mesh(), label, m).expect("same shape")
}

/// Singular integral with a user kernel: off-diagonal blocks
/// `K(z_i - z_j) n_j σ_j / ω`, zero diagonal blocks.
pub fn generic_kernel_operator<K>(mesh: &Arc<BoundaryMesh>, kernel: K) -> Result<BlockOperator>
where
    K: Fn(&ComplexVector) -> Multivector + Sync,
{
    let nrm = normals(mesh);
    let inv = 1.0 / omega(mesh.n);
    expand(mesh, OperatorLabel::GenericKernel, |i| {
        (0..mesh.len())
            .map(|j| {
                if j == i {
                    return Ok(Multivector::zero(mesh.n));
                }
                let k = kernel(&(mesh.nodes[i] - mesh.nodes[j]));
                if k.n() != mesh.n {
                    return Err(Error::DimensionMismatch(k.n(), mesh.n));
                }
                if !k.is_finite() {
                    return Err(Error::NonFiniteKernel { row: i, col: j });
                }
                Ok((k * nrm[j]) * (mesh.sigma[j] * inv))
            })
            .collect()
    })
}
