//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use plemelj::{BoundaryFunction, BoundaryMesh, Multivector};

pub fn circle(n: usize) -> Arc<BoundaryMesh> {
    Arc::new(BoundaryMesh::circle(n, 1.0).expect("circle mesh"))
}

pub fn deformed(n: usize) -> Arc<BoundaryMesh> {
    Arc::new(BoundaryMesh::deformed_curve(n, 0.05, 2).expect("deformed mesh"))
}

/// `x1 e2 + x2 e1 + 1`, smooth data for transforms.
pub fn smooth_data(mesh: &Arc<BoundaryMesh>) -> BoundaryFunction {
    BoundaryFunction::from_fn(mesh, |_, z| {
        let c = z.components();
        Multivector::basis(2, 2) * c[0] + Multivector::basis(2, 1) * c[1] + Multivector::one(2)
    })
}
