//! `cotangent`: command-line driver for the cotangent-operad library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical non-convergence.

mod selftest;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cotangent_operad::complex::{bracket_with, coboundary, verify_product_with};
use cotangent_operad::config::{DEFAULT_MAX_TREE_WEIGHT, DEFAULT_MAX_TRUNCATION};
use cotangent_operad::groupoid::{extract_poisson, invert_morphism_with, structure_maps, transform_product_with};
use cotangent_operad::operad::{compose_series, numeric_phi_series, NumericOptions};
use cotangent_operad::solver::{solve_deformation_with, validate_poisson, Gauge, PoissonStructure};
use cotangent_operad::symbols::json::{series_from_json, series_to_json};
use cotangent_operad::trees::{enumerate_rooted_with, enumerate_unrooted_with, Color, Unrestricted};
use cotangent_operad::{Error, FormalSeries, Limits, Rational};
use num_traits::ToPrimitive;

#[derive(Parser, Debug)]
#[command(name = "cotangent", version, about = "Exact computations in the formal cotangent Lagrangian operad")]
struct Cli {
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 4)]
    order: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on tree weight; values above the default also raise the truncation cap.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_TREE_WEIGHT)]
    max_tree_weight: usize,
    /// Convergence tolerance of numerical iterations.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tree enumeration.
    Trees {
        #[command(subcommand)]
        command: TreesCommand,
    },
    /// Compose generating functions by tree expansion.
    Compose {
        #[arg(long)]
        outer: PathBuf,
        /// Comma-separated inner series, one per outer argument.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        inner: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the truncated expansion with the fixed-point oracle.
    NumericCheck {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        inner: Vec<PathBuf>,
        /// JSON array of numbers: inner covectors block by block, then x.
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        eps: f64,
    },
    /// Coboundary d F.
    Cobound {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gerstenhaber bracket [A, B].
    Bracket {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the associativity residuals of an arity-2 series.
    VerifySga {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Build an associative deformation from a Poisson structure.
    Solve {
        #[arg(long)]
        poisson: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check antisymmetry and the Jacobi identity.
    Validate {
        #[arg(long)]
        poisson: PathBuf,
    },
    /// F(S)(F⁻¹, F⁻¹).
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse of an arity-1 morphism.
    Invert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The Poisson structure of an arity-2 series.
    Poisson {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Source and target maps.
    Maps {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum TreesCommand {
    /// One tree per line: encoding, σ, |t|, ‖t‖.
    Enum {
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        rooted: bool,
        #[arg(long, value_enum, requires = "rooted")]
        root_color: Option<RootColor>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RootColor {
    W,
    B,
}

/// A failed run with its exit code.
#[derive(Debug)]
enum Failure {
    Verification(String),
    Usage(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::NonConvergence(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NonConvergence { .. } | Error::NonFinite => Failure::NonConvergence(msg),
            Error::NotAntisymmetric { .. }
            | Error::JacobiFailure { .. }
            | Error::NotAProduct { .. }
            | Error::SgsFailure(_)
            | Error::Infeasible { .. } => Failure::Verification(msg),
            _ => Failure::Usage(msg),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Context {
    order: usize,
    seed: u64,
    tol: f64,
    limits: Limits,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if cli.order == 0 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let w = cli.max_tree_weight;
    let ctx = Context {
        order: cli.order,
        seed: cli.seed,
        tol: cli.tol,
        limits: Limits {
            max_tree_weight: w,
            max_truncation: if w > DEFAULT_MAX_TREE_WEIGHT { w } else { w.min(DEFAULT_MAX_TRUNCATION) },
        },
    };
    match cli.command {
        Command::Trees {
            command: TreesCommand::Enum { max_order, rooted, root_color },
        } => trees_enum(&ctx, max_order, rooted, root_color),
        Command::Compose { outer, inner, out } => {
            let f = read_series(&outer)?;
            let gs = inner.iter().map(|p| read_series(p)).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&FormalSeries> = gs.iter().collect();
            let h = compose_series(&f, &refs, ctx.order, &ctx.limits)?;
            emit(out.as_deref(), &series_to_json(&h))
        }
        Command::NumericCheck { outer, inner, point, eps } => numeric_check(&ctx, &outer, &inner, &point, eps),
        Command::Cobound { input, out } => emit(out.as_deref(), &series_to_json(&coboundary(&read_series(&input)?)?)),
        Command::Bracket { a, b, out } => {
            let h = bracket_with(&read_series(&a)?, &read_series(&b)?, ctx.order, &ctx.limits)?;
            emit(out.as_deref(), &series_to_json(&h))
        }
        Command::VerifySga { input } => verify_sga(&ctx, &input),
        Command::Solve { poisson, out } => {
            let alpha = read_poisson(&poisson)?;
            let s = solve_deformation_with(&alpha, ctx.order, Gauge::SgsConstrained, &ctx.limits)?;
            emit(out.as_deref(), &series_to_json(&s))
        }
        Command::Validate { poisson } => {
            let report = validate_poisson(&read_poisson(&poisson)?);
            if report.is_valid() {
                println!("valid");
                Ok(())
            } else {
                Err(report.into_result().unwrap_err().into())
            }
        }
        Command::Transform { input, morphism, out } => {
            let t = transform_product_with(&read_series(&input)?, &read_series(&morphism)?, ctx.order, &ctx.limits)?;
            emit(out.as_deref(), &series_to_json(&t))
        }
        Command::Invert { input, out } => {
            let g = invert_morphism_with(&read_series(&input)?, ctx.order, &ctx.limits)?;
            emit(out.as_deref(), &series_to_json(&g))
        }
        Command::Poisson { input, out } => emit(out.as_deref(), &extract_poisson(&read_series(&input)?)?.to_json()),
        Command::Maps { input, out } => {
            let maps = structure_maps(&read_series(&input)?, ctx.order)?;
            let doc = serde_json::json!({
                "source": maps.source.iter().map(series_value).collect::<Vec<_>>(),
                "target": maps.target.iter().map(series_value).collect::<Vec<_>>(),
            });
            emit(out.as_deref(), &serde_json::to_string_pretty(&doc).expect("values serialize"))
        }
        Command::Selftest => selftest::run(ctx.seed),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_series(path: &Path) -> Result<FormalSeries, Failure> {
    series_from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_poisson(path: &Path) -> Result<PoissonStructure, Failure> {
    PoissonStructure::from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn series_value(s: &FormalSeries) -> serde_json::Value {
    serde_json::from_str(&series_to_json(s)).expect("series JSON is valid")
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn trees_enum(ctx: &Context, max_order: usize, rooted: bool, root_color: Option<RootColor>) -> Outcome {
    let mut text = String::new();
    if rooted {
        let color = root_color.map(|c| match c {
            RootColor::W => Color::White,
            RootColor::B => Color::Black,
        });
        for t in enumerate_rooted_with(max_order, color, &Unrestricted, &ctx.limits)? {
            writeln!(text, "{}\t{}\t{}\t{}", t.encoding(), t.symmetry_coefficient(), t.vertex_count(), t.total_weight()).unwrap();
        }
    } else {
        for t in enumerate_unrooted_with(max_order, &Unrestricted, &ctx.limits)? {
            writeln!(text, "{}\t{}\t{}\t{}", t.encoding(), t.symmetry_coefficient(), t.vertex_count(), t.total_weight()).unwrap();
        }
    }
    print!("{text}");
    Ok(())
}

fn numeric_check(ctx: &Context, outer: &Path, inner: &[PathBuf], point: &Path, eps: f64) -> Outcome {
    let f = read_series(outer)?;
    let gs = inner.iter().map(|p| read_series(p)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&FormalSeries> = gs.iter().collect();
    let values: Vec<f64> =
        serde_json::from_str(&read(point)?).map_err(|e| Failure::Usage(format!("{}: {e}", point.display())))?;
    let opts = NumericOptions {
        tol: ctx.tol,
        ..NumericOptions::default()
    };
    let numeric = numeric_phi_series(&f, &refs, &values, eps, &opts)?;
    let series = compose_series(&f, &refs, ctx.order, &ctx.limits)?;
    let exact: Vec<Rational> = values
        .iter()
        .map(|&v| Rational::from_float(v).ok_or_else(|| Failure::Usage("point must be finite".into())))
        .collect::<Result<_, _>>()?;
    let eps_exact = Rational::from_float(eps).ok_or_else(|| Failure::Usage("eps must be finite".into()))?;
    let truncated = series.series_eval(&exact, &eps_exact, ctx.order)?.to_f64().unwrap_or(f64::NAN);
    println!("series\t{truncated:e}");
    println!("numeric\t{:e}", numeric.deformation);
    println!("discrepancy\t{:e}", (numeric.deformation - truncated).abs());
    println!("iterations\t{}", numeric.iterations);
    Ok(())
}

fn verify_sga(ctx: &Context, input: &Path) -> Outcome {
    let s = read_series(input)?;
    let report = verify_product_with(&s, ctx.order, &ctx.limits)?;
    match report.first_nonzero() {
        None => {
            println!("all residuals zero through order {}", ctx.order);
            Ok(())
        }
        Some((n, residual)) => {
            println!("order {n}: {residual}");
            Err(Failure::Verification(format!("nonzero residual at order {n}")))
        }
    }
}
