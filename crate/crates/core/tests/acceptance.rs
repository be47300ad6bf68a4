//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use plemelj::hardy::{boundary_limit_test_with, HardyOperators};
use plemelj::linalg::{orthonormal_columns, singular_values};
use plemelj::manifold::{cone_parameters, validate_domain_manifold, ValidationKind, CONE_SAMPLES, DEFAULT_MARGIN};
use plemelj::maximal::{
    bound_diagnostics, default_radii, maximal_function, random_test_functions, MaximalReport, MaximalSummary,
};
use plemelj::mobius::{covariance_check, isometry_check, kernel_intertwining_check, KelvinMap, INTERTWINING_TOL};
use plemelj::operators::{
    assemble_kerzman_stein, assemble_singular_cauchy, kerzman_stein_density, plemelj as plemelj_op, BandBasis, CMat,
    CauchyEvaluator, Sign,
};
use plemelj::{cauchy_kernel, BoundaryFunction, BoundaryMesh, ComplexVector, Multivector, PathRegion, Result};

const BAND: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn circle(n: usize) -> Arc<BoundaryMesh> {
    Arc::new(BoundaryMesh::circle(n, 1.0).unwrap())
}

fn deformed(n: usize) -> Arc<BoundaryMesh> {
    Arc::new(BoundaryMesh::deformed_curve(n, 0.05, 2).unwrap())
}

fn e(j: usize) -> Multivector {
    Multivector::basis(2, j)
}

fn real_point(x: f64, y: f64) -> ComplexVector {
    ComplexVector::from_real(&[x, y]).unwrap()
}

/// `(x1 - e12 x2) e1 + 1`, the trace of a left-monogenic polynomial.
fn monogenic_trace(mesh: &Arc<BoundaryMesh>) -> BoundaryFunction {
    let e12 = Multivector::blade(2, &[1, 2]);
    BoundaryFunction::from_fn(mesh, |_, z| {
        let c = z.components();
        (Multivector::scalar(2, c[0]) - e12 * c[1]) * e(1) + Multivector::one(2)
    })
}

fn random_mv(rng: &mut ChaCha8Rng, n: usize) -> Multivector {
    let c: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Multivector::from_coeffs(n, &c).unwrap()
}

fn clifford_exactness() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut relations = 0.0f64;
    for n in 2..=5 {
        for i in 1..=n {
            for j in 1..=n {
                let delta = if i == j { 2.0 } else { 0.0 };
                let r = Multivector::basis(n, i) * Multivector::basis(n, j)
                    + Multivector::basis(n, j) * Multivector::basis(n, i)
                    + Multivector::scalar(n, delta);
                relations = relations.max(r.norm());
            }
        }
    }
    let (mut assoc, mut rev) = (0.0f64, 0.0f64);
    for t in 0..1000 {
        let n = 2 + t % 4;
        let (a, b, c) = (random_mv(&mut rng, n), random_mv(&mut rng, n), random_mv(&mut rng, n));
        let scale = a.norm() * b.norm() * c.norm();
        assoc = assoc.max(((a * b) * c - a * (b * c)).norm() / scale);
        rev = rev.max(((a * b).reverse() - b.reverse() * a.reverse()).norm() / (a.norm() * b.norm()));
    }
    let worst = relations.max(assoc).max(rev);
    outcome(
        worst <= 1e-12,
        format!("relations {relations:.1e}, associativity {assoc:.1e}, reverse {rev:.1e}"),
    )
}

fn cauchy_reproduction() -> Result<Outcome> {
    let mesh = circle(256);
    let pole = real_point(3.0, 0.0);
    let extension = |k: usize, u: &ComplexVector| -> Multivector {
        let c = u.components();
        match k {
            0 => Multivector::one(2),
            1 => e(2) * c[0] + e(1) * c[1],
            _ => cauchy_kernel(&(*u - pole)).unwrap().to_multivector(),
        }
    };
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let inside: Vec<_> = (0..50)
        .map(|k| {
            let r = 0.98 * ((k as f64 + 0.5) / 50.0).sqrt();
            let t = golden * k as f64;
            real_point(r * t.cos(), r * t.sin())
        })
        .collect();
    let mut interior = 0.0f64;
    for k in 0..3 {
        let f = BoundaryFunction::from_fn(&mesh, |_, z| extension(k, z));
        let eval = CauchyEvaluator::new(&f)?;
        for u in &inside {
            interior = interior.max((eval.eval(u)? - extension(k, u)).norm());
        }
    }
    let one = CauchyEvaluator::new(&BoundaryFunction::constant(&mesh, Multivector::one(2)))?;
    let mut exterior = 0.0f64;
    for k in 0..50 {
        let r = 1.02 + 2.0 * k as f64 / 49.0;
        let t = golden * k as f64;
        exterior = exterior.max(one.eval(&real_point(r * t.cos(), r * t.sin()))?.norm());
    }
    outcome(
        interior <= 1e-6 && exterior <= 1e-8,
        format!("interior max error {interior:.2e}, exterior constant {exterior:.2e}"),
    )
}

/// `‖S+²−S+‖`, `‖C²−¼I‖`, `‖S+S−‖` on the band test space.
fn projection_residuals(mesh: &Arc<BoundaryMesh>) -> Result<[f64; 3]> {
    let basis = BandBasis::new(mesh, BAND)?;
    let b = basis.columns();
    let c = assemble_singular_cauchy(mesh)?;
    let sp = plemelj_op(&c, Sign::Plus);
    let sm = plemelj_op(&c, Sign::Minus);
    let (spb, smb, cb) = (sp.matrix() * b, sm.matrix() * b, c.matrix() * b);
    Ok([
        basis.image_norm(&(sp.matrix() * &spb - &spb)),
        basis.image_norm(&(c.matrix() * &cb - b * Complex64::new(0.25, 0.0))),
        basis.image_norm(&(sp.matrix() * &smb)),
    ])
}

fn projection_algebra() -> Result<Outcome> {
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, make, cap) in [
        ("circle", circle as fn(usize) -> Arc<BoundaryMesh>, 1e-3),
        ("deformed", deformed, 1e-2),
    ] {
        let coarse = projection_residuals(&make(128))?;
        let fine = projection_residuals(&make(256))?;
        pass &= coarse.iter().zip(&fine).all(|(c, f)| *c <= cap && f < c);
        detail.push(format!(
            "{name} N=128 [{:.1e} {:.1e} {:.1e}] N=256 [{:.1e} {:.1e} {:.1e}]",
            coarse[0], coarse[1], coarse[2], fine[0], fine[1], fine[2]
        ));
    }
    outcome(pass, detail.join("; "))
}

fn hardy_decomposition() -> Result<Outcome> {
    let mesh = circle(256);
    let c = assemble_singular_cauchy(&mesh)?;
    let (sp, sm) = (plemelj_op(&c, Sign::Plus), plemelj_op(&c, Sign::Minus));
    let (mut split, mut cross) = (0.0f64, 0.0f64);
    for f in random_test_functions(&mesh, 20, 7) {
        let f = f.scale(1.0 / f.l2_norm());
        let fp = sp.apply(&f)?;
        let fm = f.sub(&fp)?;
        split = split.max(fp.add(&fm)?.sub(&f)?.l2_norm());
        cross = cross.max(sm.apply(&fp)?.l2_norm());
    }
    outcome(
        split <= 1e-12 && cross <= 1e-3,
        format!("split {split:.1e}, cross term {cross:.1e} (unit-norm data)"),
    )
}

/// Weighted orthogonal projector onto traces `ζ^k c`, `k ≤ 12`, `c ∈ {1, e1, e2, e12}`.
fn qr_projector(mesh: &Arc<BoundaryMesh>, f: &BoundaryFunction) -> Result<BoundaryFunction> {
    let d = mesh.blades();
    let e12 = Multivector::blade(2, &[1, 2]);
    let mut columns = Vec::new();
    for k in 0..=12 {
        for blade in 0..d {
            let mut c = vec![Complex64::new(0.0, 0.0); d];
            c[blade] = Complex64::new(1.0, 0.0);
            let c = Multivector::from_coeffs(2, &c)?;
            let g = BoundaryFunction::from_fn(mesh, |_, z| {
                let x = z.components();
                let zeta = Multivector::scalar(2, x[0]) - e12 * x[1];
                let mut p = Multivector::one(2);
                for _ in 0..k {
                    p = p * zeta;
                }
                p * c
            });
            columns.push(g.to_vector());
        }
    }
    let root: Vec<f64> = (0..mesh.len() * d).map(|r| mesh.sigma_abs[r / d].sqrt()).collect();
    let basis = CMat::from_fn(root.len(), columns.len(), |r, j| columns[j][r] * root[r]);
    let q = orthonormal_columns(&basis);
    let fv = f.to_vector();
    let weighted = CMat::from_fn(root.len(), 1, |r, _| fv[r] * root[r]);
    let proj = &q * (q.adjoint() * weighted);
    let out = CMat::from_fn(root.len(), 1, |r, _| proj[(r, 0)] / root[r]);
    BoundaryFunction::from_vector(mesh, &out.column(0).into_owned())
}

fn szego_projection() -> Result<Outcome> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (name, mesh) in [("circle", circle(128)), ("deformed", deformed(128))] {
        let ops = HardyOperators::new(&mesh)?;
        let basis = BandBasis::new(&mesh, BAND)?;
        let b = basis.columns();
        let ppb = ops.szego_columns(Sign::Plus, b)?;
        let idem = basis.image_norm(&(ops.szego_columns(Sign::Plus, &ppb)? - &ppb));
        let spb = ops.plemelj(Sign::Plus).matrix() * b;
        let ps = basis.image_norm(&(ops.szego_columns(Sign::Plus, &spb)? - &spb));
        pass &= idem <= 1e-3 && ps <= 1e-3;
        detail.push(format!("{name} P+^2 {idem:.1e} P+S+ {ps:.1e}"));
        if name == "circle" {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let coeffs: Vec<Complex64> = (0..13)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let f = BoundaryFunction::from_fn(&mesh, |_, z| {
                let x = z.components();
                let theta = x[1].re.atan2(x[0].re);
                let v: Complex64 = (-6i32..=6)
                    .zip(&coeffs)
                    .map(|(m, a)| a * Complex64::from_polar(1.0, m as f64 * theta))
                    .sum();
                Multivector::scalar(2, v)
            });
            let oracle = qr_projector(&mesh, &f)?;
            let gap = ops.szego_project(&f, Sign::Plus)?.sub(&oracle)?.l2_norm() / f.l2_norm();
            pass &= gap <= 1e-4;
            detail.push(format!("QR oracle gap {gap:.1e}"));
        }
    }
    let mut conditions = Vec::new();
    for (name, mesh) in [
        ("circle", circle(256)),
        ("deformed", deformed(256)),
        ("sphere", Arc::new(BoundaryMesh::sphere(162, 1.0)?)),
    ] {
        let cond = HardyOperators::new(&mesh)?.condition();
        pass &= cond <= 100.0;
        conditions.push(format!("{name} {cond:.2}"));
    }
    detail.push(format!("condition {}", conditions.join(", ")));
    outcome(pass, detail.join("; "))
}

fn boundary_limits() -> Result<Outcome> {
    let mesh = circle(256);
    let cone = cone_parameters(&mesh)?;
    let c = assemble_singular_cauchy(&mesh)?;
    let inside = boundary_limit_test_with(&monogenic_trace(&mesh), PathRegion::Interior, 16, &cone, &c)?.errors();
    let decreasing = inside[1..6].windows(2).all(|w| w[1] < w[0]);
    let reached = inside.iter().copied().fold(f64::INFINITY, f64::min);
    let one = BoundaryFunction::constant(&mesh, Multivector::one(2));
    let outside = boundary_limit_test_with(&one, PathRegion::Exterior, 16, &cone, &c)?.errors();
    let exterior = outside.iter().copied().fold(f64::INFINITY, f64::min);
    outcome(
        decreasing && reached <= 1e-4 && exterior <= 1e-6,
        format!(
            "interior e_2..e_6 decreasing {decreasing}, best {reached:.1e}; exterior constants best {exterior:.1e}"
        ),
    )
}

fn max_density(mesh: &BoundaryMesh) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..mesh.len() {
        for j in 0..mesh.len() {
            if i != j {
                worst = worst.max(kerzman_stein_density(mesh, i, j)?.norm());
            }
        }
    }
    Ok(worst)
}

/// Singular values below this fraction of the largest `C` entry are treated as zero.
const RANK_FLOOR: f64 = 1e-12;

fn max_entry(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn compactness() -> Result<Outcome> {
    let mesh = circle(128);
    let floor = RANK_FLOOR * max_entry(assemble_singular_cauchy(&mesh)?.matrix());
    let sv = singular_values(assemble_kerzman_stein(&mesh)?.matrix());
    let rank = sv.iter().filter(|&&s| s > floor).count();
    let tail = if rank == 0 { 0.0 } else { sv[9] / sv[0] };
    let (a128, a512) = (max_density(&mesh)?, max_density(&circle(512))?);
    // A vanishes on the circle, so the entry comparison is between two rounding-level values.
    let stable = if a128.max(a512) <= RANK_FLOOR { true } else { a512 <= 2.0 * a128 && a128 <= 2.0 * a512 };

    let d = assemble_kerzman_stein(&deformed(128))?;
    let dsv = singular_values(d.matrix());
    let (d128, d512) = (max_density(&deformed(128))?, max_density(&deformed(512))?);
    outcome(
        tail <= 0.1 && stable,
        format!(
            "circle numerical rank {rank}, sigma_1 {:.1e}, sigma_10/sigma_1 {tail:.1e}, max density {a128:.1e} -> {a512:.1e}; \
             deformed sigma_1 {:.2e} sigma_10 {:.2e} sigma_17 {:.2e} sigma_33 {:.2e}, max density {d128:.3e} -> {d512:.3e}",
            sv[0], dsv[0], dsv[9], dsv[16], dsv[32]
        ),
    )
}

fn maximal_summary(n: usize) -> Result<MaximalSummary> {
    let mesh = circle(n);
    let reports = bound_diagnostics(&mesh, 20, 5, &cone_parameters(&mesh)?, CONE_SAMPLES)?;
    Ok(MaximalSummary::new(&reports, n, 5))
}

fn maximal_diagnostics() -> Result<Outcome> {
    let (s64, s128) = (maximal_summary(64)?, maximal_summary(128)?);
    let rm = s128.c_m_max / s64.c_m_max;
    let rn = s128.c_n_max / s64.c_n_max;
    let stable = |r: f64| (1.0 / 1.2..=1.2).contains(&r);
    let mesh = circle(128);
    let one = BoundaryFunction::constant(&mesh, Multivector::one(2));
    let radii = default_radii(&mesh);
    let m1 = maximal_function(&one, &radii)?;
    let exact = m1.iter().all(|&v| v == 1.0);
    let r1 = MaximalReport::compute(&one, &radii, &cone_parameters(&mesh)?, CONE_SAMPLES)?;
    let finite = s64.all_cotlar_finite && s128.all_cotlar_finite && r1.cotlar.iter().all(|c| c.is_finite());
    outcome(
        stable(rm) && stable(rn) && exact && finite,
        format!("C_M ratio {rm:.3}, C_N ratio {rn:.3}, M(1)=1 exactly {exact}, Cotlar finite {finite}"),
    )
}

fn mobius() -> Result<Outcome> {
    let a = ComplexVector::axis(2, 1, 2.0);
    let mut iso = Vec::new();
    let mut cov = 0.0;
    for n in [256, 512] {
        let mesh = circle(n);
        let map = KelvinMap::new(&mesh, a)?;
        let one = BoundaryFunction::constant(&mesh, Multivector::one(2));
        iso.push(isometry_check(&one, &map)?.gap);
        if n == 256 {
            let g = monogenic_trace(&mesh);
            cov = covariance_check(&one, &g, &map)?.gap;
        }
    }
    let k = kernel_intertwining_check(&ComplexVector::zero(2), 200, 3)?;
    let best = [k.literal, k.shifted, k.literal_reversed, k.shifted_reversed]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    outcome(
        iso[0] <= 1e-3 && iso[1] <= 0.5 * iso[0] && cov <= 1e-3 && best <= INTERTWINING_TOL,
        format!(
            "isometry gap {:.1e} -> {:.1e}, covariance {cov:.1e}, operative reading at a=0: {} ({best:.1e})",
            iso[0], iso[1], k.operative_reading
        ),
    )
}

fn checker() -> Result<Outcome> {
    let accepted = [
        BoundaryMesh::circle(128, 1.0)?,
        BoundaryMesh::sphere(162, 1.0)?,
        BoundaryMesh::deformed_curve(128, 0.05, 2)?,
    ]
    .iter()
    .all(|m| validate_domain_manifold(m, DEFAULT_MARGIN).is_ok());
    let mut bad = BoundaryMesh::circle(64, 1.0)?;
    let z = bad.nodes[0];
    let offset = ComplexVector::new(&[Complex64::new(0.05, 0.0), Complex64::new(0.0, 0.05)])?;
    bad.nodes[20] = z + offset;
    let rejected = matches!(
        validate_domain_manifold(&bad, DEFAULT_MARGIN),
        Err(f) if f.kind == ValidationKind::Pair
    );
    let big = BoundaryMesh::from_shape(512, plemelj::manifold::CurveShape::Deformed { eps: 0.05, mode: 2 })?;
    let t = Instant::now();
    let ok512 = validate_domain_manifold(&big, DEFAULT_MARGIN).is_ok();
    let secs = t.elapsed().as_secs_f64();
    outcome(
        accepted && rejected && ok512 && secs < 5.0,
        format!("accepts shipped geometries {accepted}, rejects null pair {rejected}, N=512 in {secs:.3} s"),
    )
}

fn main() {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, Check, Option<f64>); 10] = [
        ("Clifford algebra exactness", clifford_exactness, Some(1.0)),
        ("Cauchy reproduction", cauchy_reproduction, Some(5.0)),
        ("projection algebra", projection_algebra, Some(30.0)),
        ("Hardy decomposition", hardy_decomposition, None),
        ("Szego projection", szego_projection, None),
        ("boundary limits", boundary_limits, None),
        ("Kerzman-Stein compactness", compactness, None),
        ("maximal diagnostics", maximal_diagnostics, None),
        ("Mobius covariance", mobius, None),
        ("domain-manifold checker", checker, None),
    ];
    let mut failures = 0;
    for (k, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && budget.is_none_or(|b| secs < b), o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let budget = budget.map_or(String::new(), |b| format!(", budget {b} s"));
        println!(
            "criterion {:>2} {} {name}: {detail} ({secs:.2} s{budget})",
            k + 1,
            if pass { "PASS" } else { "FAIL" }
        );
        failures += usize::from(!pass);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
