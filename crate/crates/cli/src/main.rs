use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use plemelj_cli::config::parse_sizes;
use plemelj_cli::{run, CliError, CliResult, Command, Geometry, RunConfig};

/// Comma-separated node counts, kept as one flag value.
#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

fn sizes(s: &str) -> Result<Sizes, String> {
    parse_sizes(s).map(Sizes)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeometryName {
    Circle,
    Sphere,
    Deformed,
}

/// Boundary integral operators of Clifford analysis: batch runs with CSV/JSON reports.
///
/// Exit codes: 0 all checks pass, 2 validation failure, 3 ill-conditioned
/// solve, 4 check failure, 1 any other error.
#[derive(Debug, Parser)]
#[command(name = "plemelj", version)]
struct Args {
    /// JSON run configuration; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Ambient dimension.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    geometry: Option<GeometryName>,
    /// Node count, or a comma-separated sweep such as 64,128,256.
    #[arg(long = "N", value_parser = sizes)]
    sizes: Option<Sizes>,
    /// Deformation amplitude (deformed geometry).
    #[arg(long)]
    eps: Option<f64>,
    /// Deformation mode (deformed geometry).
    #[arg(long)]
    mode: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn configure(args: Args) -> CliResult<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(c) = args.command {
        config.command = c;
    }
    if let Some(g) = args.geometry {
        let (eps, mode) = match config.geometry {
            Geometry::Deformed { eps, mode } => (eps, mode),
            _ => (0.05, 2),
        };
        config.geometry = match g {
            GeometryName::Circle => Geometry::Circle { radius: 1.0 },
            GeometryName::Sphere => Geometry::Sphere { radius: 1.0 },
            GeometryName::Deformed => Geometry::Deformed { eps, mode },
        };
        config.n = config.geometry.dimension();
    }
    if args.eps.is_some() || args.mode.is_some() {
        match &mut config.geometry {
            Geometry::Deformed { eps, mode } => {
                *eps = args.eps.unwrap_or(*eps);
                *mode = args.mode.unwrap_or(*mode);
            }
            _ => return Err(CliError::Usage("--eps and --mode apply to the deformed geometry only".into())),
        }
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(Sizes(sizes)) = args.sizes {
        config.sizes = sizes;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.out = out;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure(args).and_then(|config| {
        let lines = run(&config)?;
        println!("{}: reports in {}", config.command.name(), config.out.display());
        Ok(lines)
    });
    match result {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
