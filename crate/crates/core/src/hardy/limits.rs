use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::manifold::{approach_path, cone_parameters, ConeParams, PathRegion};
use crate::operators::{assemble_singular_cauchy, plemelj, BlockOperator, BoundaryFunction, CauchyEvaluator, Sign};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitRow {
    pub k: usize,
    pub s: f64,
    pub error: f64,
}

/// `L^2` distance between the Cauchy transform along normal paths and the
/// boundary target, one row per path step.
#[derive(Clone, Debug, Serialize)]
pub struct LimitTest {
    pub region: PathRegion,
    pub radius: f64,
    pub rows: Vec<LimitRow>,
    /// Projection defect of the target, `‖S(Sf) - Sf‖`, the level below which
    /// the errors cannot be expected to fall at this resolution.
    pub floor: f64,
}

impl LimitTest {
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }

    /// CSV `k,s_k,L2_error`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,s_k,L2_error\n");
        for r in &self.rows {
            s.push_str(&format!("{},{:.17e},{:.17e}\n", r.k, r.s, r.error));
        }
        s
    }
}

/// Limit test with cone parameters computed from the mesh.
pub fn boundary_limit_test(f: &BoundaryFunction, region: PathRegion, depth: usize) -> Result<LimitTest> {
    let cone = cone_parameters(f.mesh())?;
    let cauchy = assemble_singular_cauchy(f.mesh())?;
    boundary_limit_test_with(f, region, depth, &cone, &cauchy)
}

/// Evaluates the Cauchy transform at `w ∓ s_k n̂_w`, `s_k = r 2^{-k}`, `k = 1..=depth`,
/// for every node `w`, and compares with `S^+ f` (interior) or `-S^- f` (exterior).
pub fn boundary_limit_test_with(
    f: &BoundaryFunction,
    region: PathRegion,
    depth: usize,
    cone: &ConeParams,
    cauchy: &BlockOperator,
) -> Result<LimitTest> {
    let mesh = f.mesh();
    let (s, sign) = match region {
        PathRegion::Interior => (plemelj(cauchy, Sign::Plus), 1.0),
        PathRegion::Exterior => (plemelj(cauchy, Sign::Minus), -1.0),
    };
    let sf = s.apply(f)?;
    let target = sf.scale(sign);
    let floor = s.apply(&sf)?.sub(&sf)?.l2_norm();
    let eval = CauchyEvaluator::new(f)?;
    let per_node: Vec<Vec<_>> = (0..mesh.len())
        .into_par_iter()
        .map(|i| {
            let path = approach_path(mesh, i, region, cone, depth)?;
            (1..=depth).map(|k| eval.eval(&path.point(k))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rows = (1..=depth)
        .map(|k| {
            let values = BoundaryFunction::from_fn(mesh, |i, _| per_node[i][k - 1]);
            Ok(LimitRow {
                k,
                s: cone.radius * 0.5f64.powi(k as i32),
                error: values.sub(&target)?.l2_norm(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(LimitTest {
        region,
        radius: cone.radius,
        rows,
        floor,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::clifford::Multivector;
    use crate::manifold::BoundaryMesh;

    #[test]
    fn constants_converge_from_both_sides() {
        let mesh = Arc::new(BoundaryMesh::circle(64, 1.0).unwrap());
        let one = BoundaryFunction::constant(&mesh, Multivector::one(2));
        let inside = boundary_limit_test(&one, PathRegion::Interior, 8).unwrap();
        assert_eq!(inside.rows.len(), 8);
        assert!(inside.errors().iter().all(|&e| e < 1e-6), "{:?}", inside.errors());
        let outside = boundary_limit_test(&one, PathRegion::Exterior, 8).unwrap();
        assert!(outside.errors().iter().all(|&e| e < 1e-6), "{:?}", outside.errors());
        assert_eq!(inside.to_csv().lines().count(), 9);
    }

    #[test]
    fn monogenic_data_converge_linearly() {
        let mesh = Arc::new(BoundaryMesh::circle(128, 1.0).unwrap());
        let e12 = Multivector::blade(2, &[1, 2]);
        let f = BoundaryFunction::from_fn(&mesh, |_, z| {
            let c = z.components();
            (Multivector::scalar(2, c[0]) - e12 * c[1]) * Multivector::basis(2, 1) + Multivector::one(2)
        });
        let t = boundary_limit_test(&f, PathRegion::Interior, 16).unwrap();
        let e = t.errors();
        assert!(e.windows(2).take(12).all(|w| w[1] < w[0]), "{e:?}");
        assert!(*e.last().unwrap() < 1e-4, "{e:?}");
    }
}
