use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::BoundaryMesh;
use crate::clifford::ComplexVector;

/// Default margin `c` in `|(z_i - z_j)^2| > c ||z_i - z_j||^2`.
pub const DEFAULT_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationKind {
    /// Two nodes are (nearly) null-separated: `N(z_i) ∩ M ≠ {z_i}`.
    Pair,
    /// A discrete tangent at a node is (nearly) null: `N(z_i) ∩ TM ≠ {z_i}`.
    Tangent,
}

/// Witness of a failed domain-manifold check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationFailure {
    pub kind: ValidationKind,
    pub i: usize,
    /// Second node of the pair, or the neighbour spanning the tangent
    /// (`None` for the analytic tangent of a parametrized curve).
    pub j: Option<usize>,
    pub ratio: f64,
    pub margin: f64,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ValidationKind::Pair => "node pair",
            ValidationKind::Tangent => "tangent at node",
        };
        match self.j {
            Some(j) => write!(f, "{what} ({}, {j})", self.i)?,
            None => write!(f, "{what} {}", self.i)?,
        }
        write!(f, " has |square|/norm^2 = {:.3e} <= margin {:.3e}", self.ratio, self.margin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub pair_margin: f64,
    pub tangent_margin: f64,
}

fn ratio(v: &ComplexVector) -> f64 {
    let nn = v.norm_sqr();
    if nn == 0.0 {
        0.0
    } else {
        v.square().norm() / nn
    }
}

fn worst<I: Iterator<Item = (f64, usize, Option<usize>)>>(it: I) -> Option<(f64, usize, Option<usize>)> {
    it.min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Checks both domain-manifold conditions on the mesh, returning the smallest
/// observed ratios on success and the worst offender otherwise.
pub fn validate_domain_manifold(mesh: &BoundaryMesh, margin: f64) -> Result<ValidationReport, ValidationFailure> {
    let nodes = &mesh.nodes;
    let pair = (0..nodes.len())
        .into_par_iter()
        .filter_map(|i| worst(((i + 1)..nodes.len()).map(|j| (ratio(&(nodes[i] - nodes[j])), i, Some(j)))))
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((r, i, j)) = pair {
        if r <= margin {
            return Err(ValidationFailure {
                kind: ValidationKind::Pair,
                i,
                j,
                ratio: r,
                margin,
            });
        }
    }
    let tangent = (0..nodes.len())
        .into_par_iter()
        .filter_map(|i| {
            let chords = mesh
                .neighbors_of(i)
                .into_iter()
                .map(|j| (ratio(&(nodes[j] - nodes[i])), i, Some(j)));
            let analytic = mesh.curve.as_ref().map(|c| (ratio(&c.tangents[i]), i, None));
            worst(chords.chain(analytic))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0));
    if let Some((r, i, j)) = tangent {
        if r <= margin {
            return Err(ValidationFailure {
                kind: ValidationKind::Tangent,
                i,
                j,
                ratio: r,
                margin,
            });
        }
    }
    Ok(ValidationReport {
        pair_margin: pair.map_or(f64::INFINITY, |p| p.0),
        tangent_margin: tangent.map_or(f64::INFINITY, |p| p.0),
    })
}
