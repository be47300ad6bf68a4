//! Hardy-space splitting of boundary data, the Szegő projection through the
//! Kerzman–Stein equation, and numerical boundary-limit checks.

mod identities;
mod limits;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{gmres, Factorized, GmresOptions};
use crate::manifold::BoundaryMesh;
use crate::operators::{
    assemble_kerzman_stein, assemble_singular_cauchy, plemelj, BlockOperator, BoundaryFunction, CMat, CVec, OperatorLabel,
    Sign,
};

pub use identities::{
    refine, residuals, verify_identities, verify_identity_pair, IdentityKind, IdentityReport, IdentityResidual, RESIDUAL_BAND,
};
pub use limits::{boundary_limit_test, boundary_limit_test_with, LimitRow, LimitTest};

/// Condition estimates above this make the Szegő solve fail.
pub const CONDITION_LIMIT: f64 = 1e8;
/// Meshes with more nodes than this solve the Kerzman–Stein equation iteratively.
pub const DENSE_NODE_LIMIT: usize = 3000;

enum Solver {
    Dense(Factorized),
    Iterative(CMat),
}

/// `C`, `A`, `S^±` and a factorization of `I + A` on one mesh.
pub struct HardyOperators {
    mesh: Arc<BoundaryMesh>,
    cauchy: BlockOperator,
    kerzman_stein: BlockOperator,
    s_plus: BlockOperator,
    s_minus: BlockOperator,
    solver: Solver,
    condition: f64,
}

impl HardyOperators {
    pub fn new(mesh: &Arc<BoundaryMesh>) -> Result<Self> {
        let cauchy = assemble_singular_cauchy(mesh)?;
        let kerzman_stein = assemble_kerzman_stein(mesh)?;
        let s_plus = plemelj(&cauchy, Sign::Plus);
        let s_minus = plemelj(&cauchy, Sign::Minus);
        let size = kerzman_stein.matrix().nrows();
        let system = CMat::identity(size, size) + kerzman_stein.matrix();
        let (solver, condition) = if mesh.len() <= DENSE_NODE_LIMIT {
            let f = Factorized::new(&system)?;
            let cond = f.condition;
            if !(cond <= CONDITION_LIMIT) {
                return Err(Error::IllConditioned { estimate: cond });
            }
            (Solver::Dense(f), cond)
        } else {
            (Solver::Iterative(system), f64::NAN)
        };
        Ok(Self {
            mesh: Arc::clone(mesh),
            cauchy,
            kerzman_stein,
            s_plus,
            s_minus,
            solver,
            condition,
        })
    }

    pub fn mesh(&self) -> &Arc<BoundaryMesh> {
        &self.mesh
    }

    pub fn cauchy(&self) -> &BlockOperator {
        &self.cauchy
    }

    pub fn kerzman_stein(&self) -> &BlockOperator {
        &self.kerzman_stein
    }

    pub fn plemelj(&self, sign: Sign) -> &BlockOperator {
        match sign {
            Sign::Plus => &self.s_plus,
            Sign::Minus => &self.s_minus,
        }
    }

    /// 1-norm condition estimate of `I + A` (NaN for iterative solves).
    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// `(I + A)^{-1}` applied to each column.
    pub fn solve(&self, rhs: &CMat) -> Result<CMat> {
        match &self.solver {
            Solver::Dense(f) => Ok(f.solve_matrix(rhs)),
            Solver::Iterative(m) => {
                let mut out = CMat::zeros(rhs.nrows(), rhs.ncols());
                for (k, col) in rhs.column_iter().enumerate() {
                    let b: CVec = col.into_owned();
                    let r = gmres(|x| m * x, &b, GmresOptions::default())?;
                    out.set_column(k, &r.x);
                }
                Ok(out)
            }
        }
    }

    /// `P^± X = S^± (I + A)^{-1} X`, from `P^±(I - (C★ - C)) = S^±` with `C★ - C = -A`.
    pub fn szego_columns(&self, sign: Sign, x: &CMat) -> Result<CMat> {
        Ok(self.plemelj(sign).matrix() * self.solve(x)?)
    }

    /// Dense `P^±`.
    pub fn szego_operator(&self, sign: Sign) -> Result<BlockOperator> {
        let size = self.cauchy.matrix().nrows();
        let m = self.szego_columns(sign, &CMat::identity(size, size))?;
        let label = match sign {
            Sign::Plus => OperatorLabel::SzegoPlus,
            Sign::Minus => OperatorLabel::SzegoMinus,
        };
        BlockOperator::from_matrix(&self.mesh, label, m)
    }

    pub fn szego_project(&self, f: &BoundaryFunction, sign: Sign) -> Result<BoundaryFunction> {
        let x = CMat::from_column_slice(f.len() * self.mesh.blades(), 1, f.to_vector().as_slice());
        let y = self.szego_columns(sign, &x)?;
        BoundaryFunction::from_vector(&self.mesh, &y.column(0).into_owned())
    }

    pub fn decompose(&self, f: &BoundaryFunction) -> Result<HardyDecomposition> {
        let f_plus = self.s_plus.apply(f)?;
        let f_minus = f.sub(&f_plus)?;
        let residual = f.sub(&f_plus)?.sub(&f_minus)?.l2_norm();
        let s_minus_gap = f_minus.sub(&self.s_minus.apply(f)?)?.l2_norm();
        Ok(HardyDecomposition {
            f: f.clone(),
            f_plus,
            f_minus,
            residual,
            s_minus_gap,
        })
    }
}

/// `f = f^+ + f^-` with `f^+ = S^+ f` and `f^- = f - f^+`.
#[derive(Clone, Debug)]
pub struct HardyDecomposition {
    pub f: BoundaryFunction,
    pub f_plus: BoundaryFunction,
    pub f_minus: BoundaryFunction,
    /// `‖f - f^+ - f^-‖`, zero up to rounding.
    pub residual: f64,
    /// `‖f^- - S^- f‖`: the stored exterior part against `S^- f`.
    pub s_minus_gap: f64,
}

impl HardyDecomposition {
    /// CSV with one row per node: `node`, then the blade coefficients of `f`,
    /// `f^+` and `f^-` as real/imaginary column pairs.
    pub fn to_csv(&self) -> String {
        let d = self.f.mesh().blades();
        let mut s = String::from("node");
        for name in ["f", "f_plus", "f_minus"] {
            for b in 0..d {
                s.push_str(&format!(",{name}_{b}_re,{name}_{b}_im"));
            }
        }
        s.push('\n');
        for i in 0..self.f.len() {
            s.push_str(&i.to_string());
            for g in [&self.f, &self.f_plus, &self.f_minus] {
                for c in g.values()[i].coeffs() {
                    s.push_str(&format!(",{:.17e},{:.17e}", c.re, c.im));
                }
            }
            s.push('\n');
        }
        s
    }
}

/// One-shot decomposition; assembles the operators on `f`'s mesh.
pub fn decompose(f: &BoundaryFunction) -> Result<HardyDecomposition> {
    let cauchy = assemble_singular_cauchy(f.mesh())?;
    let f_plus = plemelj(&cauchy, Sign::Plus).apply(f)?;
    let f_minus = f.sub(&f_plus)?;
    let residual = f.sub(&f_plus)?.sub(&f_minus)?.l2_norm();
    let s_minus_gap = f_minus.sub(&plemelj(&cauchy, Sign::Minus).apply(f)?)?.l2_norm();
    Ok(HardyDecomposition {
        f: f.clone(),
        f_plus,
        f_minus,
        residual,
        s_minus_gap,
    })
}

/// One-shot Szegő projection `P^± f`.
pub fn szego_project(f: &BoundaryFunction, sign: Sign) -> Result<BoundaryFunction> {
    HardyOperators::new(f.mesh())?.szego_project(f, sign)
}
