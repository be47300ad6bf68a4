use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use plemelj::hardy::{
    boundary_limit_test_with, decompose, residuals, verify_identity_pair, HardyOperators, IdentityReport, RESIDUAL_BAND,
};
use plemelj::manifold::{cone_parameters, validate_domain_manifold, DEFAULT_MARGIN};
use plemelj::maximal::{bound_diagnostics, random_test_functions, MaximalSummary};
use plemelj::mobius::mobius_report;
use plemelj::operators::{assemble_singular_cauchy, Sign};
use plemelj::{BoundaryFunction, BoundaryMesh, ComplexVector, Error, Multivector, PathRegion};

use crate::config::{Command, Data, Geometry, RunConfig};
use crate::error::{CliError, CliResult};

/// Runs the configured command, writing reports into `config.out`, and returns
/// summary lines for the console.
pub fn run(config: &RunConfig) -> CliResult<Vec<String>> {
    config.validate()?;
    std::fs::create_dir_all(&config.out)?;
    write(&config.out, "config.json", &config.to_json()?)?;
    match config.command {
        Command::Mesh => cmd_mesh(config),
        Command::Verify => cmd_verify(config),
        Command::Decompose => cmd_decompose(config),
        Command::Szego => cmd_szego(config),
        Command::Limits => cmd_limits(config),
        Command::Maximal => cmd_maximal(config),
        Command::Mobius => cmd_mobius(config),
        Command::Converge => cmd_converge(config),
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn build_mesh(geometry: &Geometry, count: usize) -> CliResult<Arc<BoundaryMesh>> {
    let mesh = match *geometry {
        Geometry::Circle { radius } => BoundaryMesh::circle(count, radius)?,
        Geometry::Sphere { radius } => BoundaryMesh::sphere(count, radius)?,
        Geometry::Deformed { eps, mode } => BoundaryMesh::deformed_curve(count, eps, mode)?,
    };
    Ok(Arc::new(mesh))
}

pub fn boundary_data(data: Data, mesh: &Arc<BoundaryMesh>, seed: u64) -> BoundaryFunction {
    let n = mesh.n;
    match data {
        Data::One => BoundaryFunction::constant(mesh, Multivector::one(n)),
        // x1 e2 + x2 e1 + 1 is left-monogenic in every dimension
        Data::Monogenic => BoundaryFunction::from_fn(mesh, |_, z| {
            let c = z.components();
            Multivector::basis(n, 2) * c[0] + Multivector::basis(n, 1) * c[1] + Multivector::one(n)
        }),
        Data::Random => random_test_functions(mesh, 1, seed).remove(0),
    }
}

/// CSV with one row per node and the blade coefficients of each named function.
fn function_table(columns: &[(&str, &BoundaryFunction)]) -> String {
    let d = columns[0].1.mesh().blades();
    let mut s = String::from("node");
    for (name, _) in columns {
        for b in 0..d {
            s.push_str(&format!(",{name}_{b}_re,{name}_{b}_im"));
        }
    }
    s.push('\n');
    for i in 0..columns[0].1.len() {
        s.push_str(&i.to_string());
        for (_, f) in columns {
            for c in f.values()[i].coeffs() {
                s.push_str(&format!(",{:.17e},{:.17e}", c.re, c.im));
            }
        }
        s.push('\n');
    }
    s
}

fn cmd_mesh(config: &RunConfig) -> CliResult<Vec<String>> {
    let count = config.sizes[0];
    let mesh = build_mesh(&config.geometry, count)?;
    let report = validate_domain_manifold(&mesh, DEFAULT_MARGIN).map_err(Error::ValidationFailed)?;
    write(&config.out, "mesh.json", &mesh.to_json()?)?;
    Ok(vec![
        format!("mesh: {} nodes in C^{}", mesh.len(), mesh.n),
        format!("total |sigma| = {:.12}", mesh.total_measure()),
        format!(
            "validation: pass (pair margin {:.3e}, tangent margin {:.3e})",
            report.pair_margin, report.tangent_margin
        ),
    ])
}

fn cmd_verify(config: &RunConfig) -> CliResult<Vec<String>> {
    let meshes = config
        .sizes
        .iter()
        .map(|&n| build_mesh(&config.geometry, n))
        .collect::<CliResult<Vec<_>>>()?;
    let cap = config.tolerances.identity;
    let reports: Vec<IdentityReport> = if meshes.len() == 1 {
        vec![verify_identity_pair(&meshes[0], None, cap)?]
    } else {
        meshes
            .windows(2)
            .map(|w| verify_identity_pair(&w[0], Some(&w[1]), cap))
            .collect::<Result<_, _>>()?
    };
    write(
        &config.out,
        "verify.json",
        &to_json(&json!({ "seed": config.seed, "geometry": config.geometry, "reports": reports }))?,
    )?;
    let mut lines = Vec::new();
    for r in &reports {
        let refined = r.refined_nodes.map_or(String::new(), |m| format!(" -> {m}"));
        lines.push(format!("N = {}{refined}, condition {:.3}", r.nodes, r.condition));
        for i in &r.identities {
            let fine = i.residual_2n.map_or(String::new(), |f| format!(" -> {f:.3e}"));
            lines.push(format!(
                "  {:<24} {:.3e}{fine} {}",
                i.identity,
                i.residual_n,
                if i.pass { "pass" } else { "FAIL" }
            ));
        }
    }
    if reports.iter().all(IdentityReport::all_pass) {
        Ok(lines)
    } else {
        print_lines(&lines);
        Err(CliError::CheckFailed("identity residuals did not meet caps or did not decrease".into()))
    }
}

fn print_lines(lines: &[String]) {
    for l in lines {
        println!("{l}");
    }
}

fn cmd_decompose(config: &RunConfig) -> CliResult<Vec<String>> {
    let mesh = build_mesh(&config.geometry, config.sizes[0])?;
    let f = boundary_data(config.data, &mesh, config.seed);
    let d = decompose(&f)?;
    write(&config.out, "decompose.csv", &d.to_csv())?;
    write(
        &config.out,
        "decompose.json",
        &to_json(&json!({
            "seed": config.seed,
            "data": config.data,
            "N": mesh.len(),
            "norm_f": f.l2_norm(),
            "norm_f_plus": d.f_plus.l2_norm(),
            "norm_f_minus": d.f_minus.l2_norm(),
            "residual": d.residual,
            "s_minus_gap": d.s_minus_gap,
        }))?,
    )?;
    let lines = vec![format!(
        "|f| = {:.6e}, |f+| = {:.6e}, |f-| = {:.6e}, split residual {:.1e}",
        f.l2_norm(),
        d.f_plus.l2_norm(),
        d.f_minus.l2_norm(),
        d.residual
    )];
    if d.residual <= 1e-12 * f.l2_norm().max(1.0) {
        Ok(lines)
    } else {
        Err(CliError::CheckFailed(format!("f+ + f- differs from f by {:.3e}", d.residual)))
    }
}

fn cmd_szego(config: &RunConfig) -> CliResult<Vec<String>> {
    let mesh = build_mesh(&config.geometry, config.sizes[0])?;
    let f = boundary_data(config.data, &mesh, config.seed);
    let ops = HardyOperators::new(&mesh)?;
    let plus = ops.szego_project(&f, Sign::Plus)?;
    let minus = ops.szego_project(&f, Sign::Minus)?;
    let scale = f.l2_norm().max(f64::MIN_POSITIVE);
    let idempotence = ops.szego_project(&plus, Sign::Plus)?.sub(&plus)?.l2_norm() / scale;
    write(
        &config.out,
        "szego.csv",
        &function_table(&[("f", &f), ("p_plus", &plus), ("p_minus", &minus)]),
    )?;
    write(
        &config.out,
        "szego.json",
        &to_json(&json!({
            "seed": config.seed,
            "data": config.data,
            "N": mesh.len(),
            "condition": ops.condition(),
            "norm_f": f.l2_norm(),
            "norm_p_plus": plus.l2_norm(),
            "norm_p_minus": minus.l2_norm(),
            "idempotence_gap": idempotence,
        }))?,
    )?;
    Ok(vec![format!(
        "condition {:.3}, |P+ f| = {:.6e}, |P+P+ f - P+ f|/|f| = {idempotence:.1e}",
        ops.condition(),
        plus.l2_norm()
    )])
}

fn cmd_limits(config: &RunConfig) -> CliResult<Vec<String>> {
    let mesh = build_mesh(&config.geometry, config.sizes[0])?;
    let f = boundary_data(config.data, &mesh, config.seed);
    let cone = cone_parameters(&mesh)?;
    let cauchy = assemble_singular_cauchy(&mesh)?;
    let mut lines = Vec::new();
    let mut summary = Vec::new();
    for (region, name) in [(PathRegion::Interior, "interior"), (PathRegion::Exterior, "exterior")] {
        let t = boundary_limit_test_with(&f, region, config.depth, &cone, &cauchy)?;
        write(&config.out, &format!("limits_{name}.csv"), &t.to_csv())?;
        let last = t.rows.last().map_or(f64::NAN, |r| r.error);
        lines.push(format!("{name}: final error {last:.3e}, floor {:.3e}", t.floor));
        summary.push(json!({ "region": name, "radius": t.radius, "floor": t.floor, "final_error": last }));
    }
    write(
        &config.out,
        "limits.json",
        &to_json(&json!({ "seed": config.seed, "data": config.data, "N": mesh.len(), "depth": config.depth, "tests": summary }))?,
    )?;
    Ok(lines)
}

fn cmd_maximal(config: &RunConfig) -> CliResult<Vec<String>> {
    let mesh = build_mesh(&config.geometry, config.sizes[0])?;
    let cone = cone_parameters(&mesh)?;
    let reports = bound_diagnostics(&mesh, config.functions, config.seed, &cone, config.samples_per_cone)?;
    for (k, r) in reports.iter().enumerate() {
        write(&config.out, &format!("maximal_{k:02}.csv"), &r.to_csv())?;
    }
    let summary = MaximalSummary::new(&reports, mesh.len(), config.seed);
    write(&config.out, "maximal_summary.json", &(summary.to_json()? + "\n"))?;
    let lines = vec![format!(
        "C_M {:.4}, C_N {:.4}, Cotlar max {:.4} over {} functions",
        summary.c_m_max, summary.c_n_max, summary.cotlar_max, summary.functions
    )];
    if summary.all_cotlar_finite {
        Ok(lines)
    } else {
        Err(CliError::CheckFailed("Cotlar ratio is not finite at every node".into()))
    }
}

fn cmd_mobius(config: &RunConfig) -> CliResult<Vec<String>> {
    if !matches!(config.geometry, Geometry::Circle { radius } if radius == 1.0) {
        return Err(CliError::Usage("mobius runs on the unit circle".into()));
    }
    let a = ComplexVector::from_real(&config.shift)?;
    let entries = mobius_report(config.sizes[0], &a, config.pairs, config.seed)?;
    write(
        &config.out,
        "mobius.json",
        &to_json(&json!({ "seed": config.seed, "shift": config.shift, "entries": entries }))?,
    )?;
    let mut failures = Vec::new();
    let mut lines = Vec::new();
    for e in &entries {
        let refined = e.gap_refined.map_or(String::new(), |g| format!(" -> {g:.3e}"));
        let reading = e.operative_reading.as_deref().map_or(String::new(), |r| format!(" [{r}]"));
        lines.push(format!("{:<16} gap {:.3e}{refined}{reading}", e.check, e.gap));
        let ok = match e.check.as_str() {
            "isometry" | "covariance" => e.gap <= config.tolerances.mobius,
            "intertwining_a0" => e.operative_reading.as_deref() != Some("none"),
            _ => true,
        };
        if !ok {
            failures.push(e.check.clone());
        }
    }
    if failures.is_empty() {
        Ok(lines)
    } else {
        print_lines(&lines);
        Err(CliError::CheckFailed(format!("failed: {}", failures.join(", "))))
    }
}

/// Least-squares slope of `-ln v` against `ln N`; `None` when the column is
/// constant or at rounding level, where no order is defined.
pub fn fitted_order(sizes: &[usize], values: &[f64]) -> Option<f64> {
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) || max <= 1e-13 || max - min <= 1e-12 * max {
        return None;
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(-sxy / sxx)
}

fn cmd_converge(config: &RunConfig) -> CliResult<Vec<String>> {
    if config.sizes.len() < 2 {
        return Err(CliError::Usage("converge needs a sweep of at least two node counts".into()));
    }
    let mut names: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut lines = Vec::new();
    for &count in &config.sizes {
        let start = Instant::now();
        let mesh = build_mesh(&config.geometry, count)?;
        let ops = HardyOperators::new(&mesh)?;
        let ident = residuals(&ops, RESIDUAL_BAND)?;
        let f = boundary_data(config.data, &mesh, config.seed);
        let cone = cone_parameters(&mesh)?;
        let limit = boundary_limit_test_with(&f, PathRegion::Interior, config.depth, &cone, ops.cauchy())?;
        drop(ops);
        let reports = bound_diagnostics(&mesh, config.functions, config.seed, &cone, config.samples_per_cone)?;
        let summary = MaximalSummary::new(&reports, mesh.len(), config.seed);
        if names.is_empty() {
            names = ident.iter().map(|(name, _, _)| name.to_string()).collect();
            names.extend(["limit_floor", "c_m", "c_n"].map(String::from));
        }
        let mut row: Vec<f64> = ident.iter().map(|r| r.2).collect();
        row.extend([limit.floor, summary.c_m_max, summary.c_n_max]);
        rows.push(row);
        lines.push(format!("N = {count}: {:.2} s", start.elapsed().as_secs_f64()));
    }
    let sizes: Vec<usize> = config.sizes.clone();
    let mut csv = String::from("N");
    for name in &names {
        csv.push(',');
        csv.push_str(name);
    }
    csv.push('\n');
    for (n, row) in sizes.iter().zip(&rows) {
        csv.push_str(&n.to_string());
        for v in row {
            csv.push_str(&format!(",{v:.17e}"));
        }
        csv.push('\n');
    }
    csv.push_str("order");
    let mut columns = Vec::new();
    for (c, name) in names.iter().enumerate() {
        let values: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        let order = fitted_order(&sizes, &values);
        match order {
            Some(o) => csv.push_str(&format!(",{o:.6}")),
            None => csv.push_str(",NaN"),
        }
        lines.push(match order {
            Some(o) => format!("  {name:<24} order {o:.2}"),
            None => format!("  {name:<24} exact"),
        });
        columns.push(json!({
            "name": name,
            "values": values,
            "order": order,
            "status": if order.is_some() { "fitted" } else { "exact" },
        }));
    }
    csv.push('\n');
    write(&config.out, "converge.csv", &csv)?;
    write(
        &config.out,
        "converge.json",
        &to_json(&json!({ "seed": config.seed, "geometry": config.geometry, "N": sizes, "columns": columns }))?,
    )?;
    Ok(lines)
}
