//! `dirichlet`: batch front end for the dirichlet-bidisc library.
//!
//! Every subcommand writes JSON (or CSV for `gram`) to stdout or `--out`.
//! Exit status: 0 all contracts hold, 1 a contract failed, 2 bad input,
//! 3 ill-conditioned Gram matrix, 4 inconsistent moment data, 5 other errors.

mod report;
mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet_bidisc::comparison::{chavan_lic_check, ChavanSpace};
use dirichlet_bidisc::dirichlet2d::{
    gram_2d, norm_sq_split, seminorm_quadrature, seminorm_series, Which, DEFAULT_ANGULAR_NODES,
    DEFAULT_RADIAL_NODES,
};
use dirichlet_bidisc::extraction::model_roundtrip;
use dirichlet_bidisc::io::{matrix_to_json, parse_measure, parse_poly, parse_spec, parse_table, spec_to_json};
use dirichlet_bidisc::multishift::{
    generate_example, is_commuting, is_doubly_commuting, is_left_inverse_commuting, joint_kernel,
    wandering_reconstruction, ExampleKind, MultishiftSpec,
};
use dirichlet_bidisc::operators::{doubly_commuting_residual, two_isometry_form_residual, left_inverse_commuting_residual};
use dirichlet_bidisc::{Complex, FourierMeasure, ProductMeasure, MAX_DEGREE};
use serde_json::{json, Value};

use report::{cnum, emit, num, read, CliError};

#[derive(Parser)]
#[command(name = "dirichlet", version, about = "Weighted Dirichlet spaces on the bidisc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MeasureArgs {
    /// Measure for the first variable (JSON)
    #[arg(long)]
    measure: PathBuf,
    /// Measure for the second variable; defaults to --measure
    #[arg(long)]
    measure2: Option<PathBuf>,
}

#[derive(Args)]
struct DegreeArgs {
    /// Degree in z1 (and z2 unless --deg2 is given)
    #[arg(long)]
    deg: usize,
    #[arg(long)]
    deg2: Option<usize>,
}

#[derive(Args)]
struct OutArgs {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GramFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Coordinate-separated weights
    Doubly,
    /// |α|-dependent weights
    Lic,
}

#[derive(Subcommand)]
enum Command {
    /// Gram matrix of the monomials
    Gram {
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        deg: DegreeArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: GramFormat,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Norm of a polynomial, with its Hardy and semi-norm parts
    Norm {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Semi-norms by series and by quadrature
    Seminorm {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        poly: PathBuf,
        /// Radius, repeatable
        #[arg(long = "R", default_values_t = [1.0])]
        r: Vec<f64>,
        /// 1, 2 or 3; all when omitted
        #[arg(long)]
        which: Option<u8>,
        /// Relative tolerance for series against quadrature
        #[arg(long, default_value_t = suite::ORACLE_TOL)]
        tol: f64,
        /// Gauss-Legendre nodes in each radius
        #[arg(long)]
        n_rad: Option<usize>,
        /// Trapezoid nodes in each angle
        #[arg(long)]
        n_ang: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Truncated reproducing kernel K(z, w)
    Kernel {
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        deg: DegreeArgs,
        /// z1.re z1.im z2.re z2.im
        #[arg(long, num_args = 4, allow_negative_numbers = true, required = true)]
        z: Vec<f64>,
        /// w1.re w1.im w2.re w2.im
        #[arg(long, num_args = 4, allow_negative_numbers = true, required = true)]
        w: Vec<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Full identity suite for a product measure
    Verify {
        #[command(flatten)]
        measure: MeasureArgs,
        #[command(flatten)]
        deg: DegreeArgs,
        /// Radii for the semi-norm checks, repeatable
        #[arg(long = "R", default_values_t = [0.5, 0.9])]
        r: Vec<f64>,
        /// Tolerance for the quadrature oracle
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Central-block margin for adjoint checks
        #[arg(long)]
        margin: Option<usize>,
        /// Random polynomials per randomized identity
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Operator-weighted multishifts
    Multishift {
        #[command(subcommand)]
        action: MultishiftCommand,
    },
    /// D²(μ) against the Chavan-type space
    Compare {
        /// Defaults to the classical measure
        #[arg(long)]
        measure: Option<PathBuf>,
        #[arg(long)]
        measure2: Option<PathBuf>,
        #[command(flatten)]
        deg: DegreeArgs,
        #[arg(long)]
        margin: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recover the measures from a moment table
    Extract {
        #[arg(long)]
        table: PathBuf,
        /// Tolerance on the rebuilt table
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum MultishiftCommand {
    /// Commuting, left-inverse commuting and doubly commuting residuals
    Check {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Seeded example spec
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "N", default_value_t = 5)]
        big_n: usize,
        #[arg(long, default_value_t = 1)]
        fiber: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Joint kernel of the adjoints and the wandering reconstruction
    Wander {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn degree_cap() -> Result<usize, CliError> {
    match std::env::var("DIRICHLET_MAX_DEG") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Config(format!("DIRICHLET_MAX_DEG={v} is not an integer"))),
        Err(_) => Ok(MAX_DEGREE),
    }
}

fn degrees(args: &DegreeArgs) -> Result<(usize, usize), CliError> {
    let cap = degree_cap()?;
    let d = (args.deg, args.deg2.unwrap_or(args.deg));
    if d.0 > cap || d.1 > cap {
        return Err(CliError::Config(format!("degrees {d:?} exceed the cap {cap} (set DIRICHLET_MAX_DEG)")));
    }
    Ok(d)
}

fn check_radii(r: &[f64]) -> Result<(), CliError> {
    match r.iter().find(|&&r| !(r > 0.0 && r <= 1.0)) {
        Some(bad) => Err(CliError::Config(format!("R = {bad} outside (0, 1]"))),
        None => Ok(()),
    }
}

fn check_tol(t: f64) -> Result<(), CliError> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("tolerance {t} must be positive")))
    }
}

fn load_measure(path: &Path) -> Result<FourierMeasure<f64>, CliError> {
    let ctx = path.display().to_string();
    let nu = parse_measure(&read(path)?).map_err(CliError::core(ctx.clone()))?;
    nu.checked().map_err(CliError::core(ctx))
}

fn load_product(first: &Path, second: Option<&Path>) -> Result<ProductMeasure<f64>, CliError> {
    let mu1 = load_measure(first)?;
    let mu2 = match second {
        Some(p) => load_measure(p)?,
        None => mu1.clone(),
    };
    Ok(ProductMeasure::new(mu1, mu2))
}

fn measure_id(first: &Path, second: Option<&Path>) -> String {
    let stem = |p: &Path| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match second {
        Some(s) if s != first => format!("{}x{}", stem(first), stem(s)),
        _ => stem(first),
    }
}

fn load_spec(path: &Path) -> Result<MultishiftSpec<f64>, CliError> {
    parse_spec(&read(path)?).map_err(CliError::core(path.display().to_string()))
}

/// Runs a command; `Ok(false)` when a contract fails.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Gram { measure, deg, format, out } => {
            let mu = load_product(&measure.measure, measure.measure2.as_deref())?;
            let (d1, d2) = degrees(&deg)?;
            let g = gram_2d(&mu, d1, d2)?.dense();
            let text = match format {
                GramFormat::Csv => report::csv_matrix(&g),
                GramFormat::Json => report::pretty(matrix_to_json(d1, d2, &g)),
            };
            emit(&text, out.out.as_deref())?;
            Ok(true)
        }
        Command::Norm { measure, poly, out } => {
            let mu = load_product(&measure.measure, measure.measure2.as_deref())?;
            let f = parse_poly(&read(&poly)?).map_err(CliError::core(poly.display().to_string()))?;
            let (d1, d2) = f.degrees();
            let gram = gram_2d(&mu, d1, d2)?.norm_sq(&f)?;
            let split = norm_sq_split(&mu, &f)?;
            let mut semi = Vec::new();
            for which in Which::ALL {
                semi.push(json!({"which": which.index(), "value": num(seminorm_series(&mu, &f, which, 1.0)?)}));
            }
            let err = (gram - split).abs() / (1.0 + gram);
            let pass = err <= 1e-10;
            let v = json!({
                "degrees": [d1, d2],
                "norm_sq": num(gram),
                "hardy": num(f.hardy_norm_sq()),
                "seminorms": semi,
                "split_rel_err": num(err),
                "pass": pass,
            });
            emit(&report::pretty(v), out.out.as_deref())?;
            Ok(pass)
        }
        Command::Seminorm { measure, poly, r, which, tol, n_rad, n_ang, out } => {
            check_radii(&r)?;
            check_tol(tol)?;
            let mu = load_product(&measure.measure, measure.measure2.as_deref())?;
            let f = parse_poly(&read(&poly)?).map_err(CliError::core(poly.display().to_string()))?;
            let selected = match which {
                Some(w) => vec![Which::try_from(w).map_err(|e| CliError::Config(e.to_string()))?],
                None => Which::ALL.to_vec(),
            };
            let d = f.degrees().0.max(f.degrees().1);
            let n_rad = n_rad.unwrap_or(DEFAULT_RADIAL_NODES).max(d + 1);
            let n_ang = n_ang.unwrap_or(DEFAULT_ANGULAR_NODES).max(2 * d + 1);
            let mut records = Vec::new();
            let mut pass = true;
            for w in selected {
                for &radius in &r {
                    let s = seminorm_series(&mu, &f, w, radius)?;
                    let q = seminorm_quadrature(&mu, &f, w, radius, n_rad, n_ang)?;
                    let abs_err = (s - q).abs();
                    pass &= abs_err / (1.0 + s) <= tol;
                    records.push(json!({
                        "which": w.index(),
                        "R": num(radius),
                        "series": num(s),
                        "quadrature": num(q),
                        "abs_err": num(abs_err),
                    }));
                }
            }
            emit(&report::lines(records), out.out.as_deref())?;
            Ok(pass)
        }
        Command::Kernel { measure, deg, z, w, out } => {
            let mu = load_product(&measure.measure, measure.measure2.as_deref())?;
            let (d1, d2) = degrees(&deg)?;
            let (z1, z2) = (Complex::new(z[0], z[1]), Complex::new(z[2], z[3]));
            let (w1, w2) = (Complex::new(w[0], w[1]), Complex::new(w[2], w[3]));
            let k = dirichlet_bidisc::dirichlet2d::kernel_eval(&mu, d1, d2, (z1, z2), (w1, w2))?;
            let v = json!({"degrees": [d1, d2], "z": [cnum(z1), cnum(z2)], "w": [cnum(w1), cnum(w2)], "value": cnum(k)});
            emit(&report::pretty(v), out.out.as_deref())?;
            Ok(true)
        }
        Command::Verify { measure, deg, r, tol, seed, margin, samples, out } => {
            check_radii(&r)?;
            let oracle_tol = tol.unwrap_or(suite::ORACLE_TOL);
            check_tol(oracle_tol)?;
            let mu = load_product(&measure.measure, measure.measure2.as_deref())?;
            let id = measure_id(&measure.measure, measure.measure2.as_deref());
            let cfg = suite::Config {
                measure_id: &id,
                degrees: degrees(&deg)?,
                radii: &r,
                oracle_tol,
                seed,
                margin,
                samples,
            };
            let records = suite::run(&mu, &cfg)?;
            let pass = records.iter().all(|r| r.pass());
            emit(&report::lines(records.iter().map(|r| r.to_json(&cfg)).collect()), out.out.as_deref())?;
            Ok(pass)
        }
        Command::Multishift { action } => multishift(action),
        Command::Compare { measure, measure2, deg, margin, out } => {
            let mu = match measure {
                Some(p) => load_product(&p, measure2.as_deref())?,
                None => ProductMeasure::classical(),
            };
            let (d1, d2) = degrees(&deg)?;
            let d = d1.min(d2);
            if d < 2 {
                return Err(CliError::Config("compare needs degrees ≥ 2".into()));
            }
            let margin = margin.unwrap_or_else(|| mu.adjoint_margin(d));
            let chavan = ChavanSpace::from_product(&mu);
            let mut records = Vec::new();
            let mut pass = true;
            let two_iso = |space: &dyn dirichlet_bidisc::operators::GramSpace<f64>| -> Result<f64, CliError> {
                Ok(two_isometry_form_residual(space, 1, d1, d2)?.max(two_isometry_form_residual(space, 2, d1, d2)?))
            };
            let d2_rows = [
                ("doubly_commuting", doubly_commuting_residual(&mu, d, margin)?, 1e-8),
                ("two_isometry", two_iso(&mu)?, 1e-10 * (1.0 + gram_scale(&mu, d1, d2)?)),
                ("left_inverse_commuting", left_inverse_commuting_residual::<f64>(d1, d2), 0.0),
            ];
            for (identity, residual, tol) in d2_rows {
                let ok = residual <= tol;
                pass &= ok;
                records.push(json!({"space": "D2", "identity": identity, "residual": num(residual), "tolerance": num(tol), "pass": ok}));
            }
            let lic = chavan_lic_check(&chavan, d1, d2)?;
            let chavan_rows = [
                ("doubly_commuting", doubly_commuting_residual(&chavan, d, margin)?),
                ("two_isometry", lic.two_isometry_residual),
                ("left_inverse_commuting", lic.lic_residual),
            ];
            for (identity, residual) in chavan_rows {
                records.push(json!({"space": "chavan", "identity": identity, "residual": num(residual)}));
            }
            emit(&report::lines(records), out.out.as_deref())?;
            Ok(pass)
        }
        Command::Extract { table, tol, out } => {
            check_tol(tol)?;
            let t = parse_table(&read(&table)?).map_err(CliError::core(table.display().to_string()))?;
            let r = model_roundtrip(&t)?;
            let pass = r.roundtrip_dev <= tol;
            let v = json!({
                "nu1_coeffs": r.nu1.coeffs.iter().map(|&c| cnum(c)).collect::<Vec<_>>(),
                "nu2_coeffs": r.nu2.coeffs.iter().map(|&c| cnum(c)).collect::<Vec<_>>(),
                "splitting_residual": num(r.splitting_residual),
                "roundtrip_dev": num(r.roundtrip_dev),
                "consistency": [num(r.nu1.consistency), num(r.nu2.consistency)],
                "toeplitz_min_eigenvalue": [num(r.toeplitz_min.0), num(r.toeplitz_min.1)],
                "cyclicity": "assumed",
                "tolerance": num(tol),
                "pass": pass,
            });
            emit(&report::pretty(v), out.out.as_deref())?;
            Ok(pass)
        }
    }
}

fn gram_scale(mu: &ProductMeasure<f64>, d1: usize, d2: usize) -> Result<f64, CliError> {
    Ok(dirichlet_bidisc::linalg::max_abs(&gram_2d(mu, d1 + 2, d2 + 2)?.dense()))
}

fn multishift(action: MultishiftCommand) -> Result<bool, CliError> {
    match action {
        MultishiftCommand::Check { spec, out } => {
            let s = load_spec(&spec)?;
            let c = is_commuting(&s);
            let l = is_left_inverse_commuting(&s)?;
            let d = is_doubly_commuting(&s)?;
            let commuting = c <= 1e-12;
            let equivalent = commuting == (l <= 1e-10);
            let wander = if commuting { Some(wandering_reconstruction(&s)?) } else { None };
            let pass = equivalent && wander.is_none_or(|w| w <= 1e-10);
            let v = json!({
                "n": s.n(),
                "N": s.truncation(),
                "fiber_dim": s.fiber_dim(),
                "commuting": num(c),
                "left_inverse_commuting": num(l),
                "doubly_commuting": num(d),
                "equivalence_holds": equivalent,
                "wandering_reconstruction": wander.map_or(Value::Null, num),
                "pass": pass,
            });
            emit(&report::pretty(v), out.out.as_deref())?;
            Ok(pass)
        }
        MultishiftCommand::Generate { kind, n, big_n, fiber, seed, out } => {
            if n == 0 || big_n == 0 || fiber == 0 {
                return Err(CliError::Config("n, N and fiber must be positive".into()));
            }
            let kind = match kind {
                Kind::Doubly => ExampleKind::Doubly,
                Kind::Lic => ExampleKind::LicNotDoubly,
            };
            let s = generate_example::<f64>(kind, n, big_n, fiber, seed)?;
            emit(&report::pretty(spec_to_json(&s)), out.out.as_deref())?;
            Ok(true)
        }
        MultishiftCommand::Wander { spec, out } => {
            let s = load_spec(&spec)?;
            let dim = joint_kernel(&s).ncols();
            let residual = if dim > 0 { Some(wandering_reconstruction(&s)?) } else { None };
            let pass = residual.is_some_and(|r| r <= 1e-10);
            let v = json!({
                "joint_kernel_dim": dim,
                "fiber_dim": s.fiber_dim(),
                "reconstruction_residual": residual.map_or(Value::Null, num),
                "pass": pass,
            });
            emit(&report::pretty(v), out.out.as_deref())?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
