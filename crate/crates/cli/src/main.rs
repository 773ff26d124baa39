//! `shapes`: command-line front end for the shape construction library.

mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use num_traits::Zero;
use serde_json::json;

use shapes_core::coulomb::{many_body_vee, vee_matrix, CoulombTable};
use shapes_core::counting::shape_polynomial;
use shapes_core::deflation::LevelBasis;
use shapes_core::format::{
    polynomial_from_json, polynomial_to_json, rational_to_string, read_catalog, shape_polynomial_to_json,
    write_catalog, FORMAT_VERSION,
};
use shapes_core::realize::{
    one_particle_density, parse_grid, two_particle_density_cut, Realization, RealizationKind,
};
use shapes_core::schur::{factor_1d, schur_ratio, schur_ssyt, Partition};
use shapes_core::shapegen::{generate_shapes_with, GenerateOptions, ShapeId};
use shapes_core::{Error, OrbitalVector, SlaterState, Statistics};

#[derive(Parser)]
#[command(name = "shapes", version, about = "Shape polynomials and shape generators of N-particle Hilbert spaces")]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the shape polynomial P_d(N, q).
    Poly {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "fermion", value_parser = parse_stat)]
        stat: Statistics,
        /// Print {"lowest", "coeffs"} JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Construct all shapes up to a grade and write the catalog as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "fermion", value_parser = parse_stat)]
        stat: Statistics,
        /// Last grade to process (default: degree of the shape polynomial).
        #[arg(long)]
        max_grade: Option<u32>,
        /// Largest level to enumerate; overrides SHAPES_STATE_CAP.
        #[arg(long)]
        state_cap: Option<usize>,
        /// Catalog file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report each level on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Expand a polynomial over the Slater (permanent) basis of its level.
    Deflate {
        /// Polynomial JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        grade: Option<u32>,
        #[arg(long, default_value = "fermion", value_parser = parse_stat)]
        stat: Statistics,
        #[arg(long)]
        json: bool,
    },
    /// Schur polynomials, or the partition of a one-dimensional determinant.
    #[command(group(ArgGroup::new("what").required(true).args(["partition", "factor"])))]
    Schur {
        /// Partition as comma-separated parts, e.g. 2,1.
        #[arg(long)]
        partition: Option<String>,
        /// Number of variables.
        #[arg(long)]
        n: Option<usize>,
        /// Use the determinant ratio instead of tableaux.
        #[arg(long)]
        ratio: bool,
        /// Orbitals of a 1D Slater determinant, e.g. 3,1,0.
        #[arg(long)]
        factor: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Densities of a catalog shape on a grid, written as CSV.
    Density {
        #[arg(long)]
        catalog: PathBuf,
        /// GRADE:INDEX.
        #[arg(long)]
        shape_id: String,
        #[arg(long, default_value = "hermite")]
        realization: String,
        /// Oscillator length or box size.
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        /// Axes as NAME:MIN:MAX:COUNT, comma separated.
        #[arg(long)]
        grid: String,
        /// Pair density with particle 1 on the diagonal at x and particle 2 at y.
        #[arg(long)]
        pair: bool,
        /// CSV file; metadata goes next to it with a .json extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coulomb expectation values among the shapes and trivial states of a grade.
    Coulomb {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        grade: u32,
        /// Full matrix instead of the diagonal.
        #[arg(long)]
        pairwise: bool,
        #[arg(long, default_value_t = 1.0)]
        length: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite for (N, d) and print a pass/fail table.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Restrict to one statistics (default: both).
        #[arg(long, value_parser = parse_stat)]
        stat: Option<Statistics>,
        #[arg(long)]
        state_cap: Option<usize>,
    },
}

fn parse_stat(s: &str) -> Result<Statistics, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a subcommand with the status it maps to.
pub(crate) enum Failure {
    Lib(Error),
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 3,
            Failure::Lib(e) => match e {
                Error::InvalidArgument(_) | Error::DimensionMismatch(_) | Error::StateCap { .. } | Error::Format(_) => 2,
                Error::Consistency(_) => 3,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
            Failure::Check(m) => format!("internal consistency failure: {m}"),
        }
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.status())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Poly { n, d, stat, json } => poly(n, d, stat, json),
        Command::Generate {
            n,
            d,
            stat,
            max_grade,
            state_cap,
            out,
            progress,
        } => generate(n, d, stat, max_grade, state_cap, out.as_deref(), progress),
        Command::Deflate {
            input,
            n,
            d,
            grade,
            stat,
            json,
        } => deflate(&input, n, d, grade, stat, json),
        Command::Schur {
            partition,
            n,
            ratio,
            factor,
            json,
        } => schur(partition.as_deref(), n, ratio, factor.as_deref(), json),
        Command::Density {
            catalog,
            shape_id,
            realization,
            length,
            grid,
            pair,
            out,
        } => density(&catalog, &shape_id, &realization, length, &grid, pair, out.as_deref()),
        Command::Coulomb {
            catalog,
            grade,
            pairwise,
            length,
            out,
        } => coulomb(&catalog, grade, pairwise, length, out.as_deref()),
        Command::Verify { n, d, stat, state_cap } => verify::run(n, d, stat, options(None, state_cap)?),
    }
}

pub(crate) fn options(max_grade: Option<u32>, state_cap: Option<usize>) -> Result<GenerateOptions, Failure> {
    let mut opts = GenerateOptions::from_env()?;
    opts.max_grade = max_grade;
    if let Some(cap) = state_cap {
        opts.state_cap = cap;
    }
    Ok(opts)
}

fn emit(text: &str, out: Option<&Path>) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Lib(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_dims(n: usize, d: usize) -> CliResult {
    if n == 0 || d == 0 {
        return Err(Failure::Usage(format!("need --n >= 1 and --d >= 1, got {n} and {d}")));
    }
    Ok(())
}

fn poly(n: usize, d: usize, stat: Statistics, json: bool) -> CliResult {
    check_dims(n, d)?;
    let p = shape_polynomial(n, d, stat)?;
    if json {
        println!("{}", shape_polynomial_to_json(n, d, stat, &p)?);
    } else {
        println!("{p}");
    }
    Ok(())
}

fn generate(
    n: usize,
    d: usize,
    stat: Statistics,
    max_grade: Option<u32>,
    state_cap: Option<usize>,
    out: Option<&Path>,
    progress: bool,
) -> CliResult {
    check_dims(n, d)?;
    let opts = options(max_grade, state_cap)?;
    let catalog = generate_shapes_with(n, d, stat, &opts, |level| {
        if progress {
            eprintln!(
                "grade {:>3}: {:>7} states, {:>7} products, rank {:>7}, {} shapes",
                level.grade, level.states, level.trivial_products, level.trivial_rank, level.shapes
            );
        }
    })?;
    match out {
        Some(path) => write_catalog(&catalog, path)?,
        None => println!("{}", shapes_core::format::catalog_to_json(&catalog)?),
    }
    eprintln!("{} shapes through grade {}", catalog.len(), catalog.max_grade());
    Ok(())
}

fn deflate(input: &Path, n: Option<usize>, d: Option<usize>, grade: Option<u32>, stat: Statistics, json: bool) -> CliResult {
    let p = polynomial_from_json(&std::fs::read_to_string(input).map_err(|e| Failure::Lib(e.into()))?)?;
    if let Some(n) = n.filter(|&n| n != p.particle_count()) {
        return Err(Failure::Usage(format!("--n {n} but the polynomial has N = {}", p.particle_count())));
    }
    if let Some(d) = d.filter(|&d| d != p.dim()) {
        return Err(Failure::Usage(format!("--d {d} but the polynomial has d = {}", p.dim())));
    }
    let g = match (grade, p.grade()) {
        (_, None) => return Err(Failure::Usage("cannot deflate the zero polynomial".into())),
        (Some(g), Some(h)) if g != h => {
            return Err(Failure::Usage(format!("--grade {g} but the polynomial has grade {h}")))
        }
        (_, Some(h)) => h,
    };
    let basis = LevelBasis::new(p.particle_count(), p.dim(), g, stat)?;
    let coeffs = basis.deflate(&p)?;
    let nonzero: Vec<(&SlaterState, String)> = basis
        .states()
        .iter()
        .zip(&coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(s, c)| (s, rational_to_string(c)))
        .collect();
    if json {
        let terms: Vec<_> = nonzero
            .iter()
            .map(|(s, c)| {
                let orbitals: Vec<&[u8]> = s.orbitals().iter().map(OrbitalVector::exponents).collect();
                json!({ "state": orbitals, "coeff": c })
            })
            .collect();
        let doc = json!({
            "format_version": FORMAT_VERSION,
            "n": p.particle_count(),
            "d": p.dim(),
            "grade": g,
            "statistics": stat,
            "level_dimension": basis.len(),
            "terms": terms,
        });
        println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Lib(e.into()))?);
    } else {
        println!("# grade {g}, {} of {} states", nonzero.len(), basis.len());
        for (s, c) in nonzero {
            println!("{c}\t{s}");
        }
    }
    Ok(())
}

fn parse_list(s: &str, what: &str) -> Result<Vec<u32>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Failure::Usage(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn schur(partition: Option<&str>, n: Option<usize>, ratio: bool, factor: Option<&str>, json: bool) -> CliResult {
    if let Some(orbs) = factor {
        let orbitals = parse_list(orbs, "orbital")?
            .into_iter()
            .map(|k| {
                u8::try_from(k)
                    .map(|k| OrbitalVector::new(&[k]))
                    .map_err(|_| Failure::Usage(format!("orbital {k} is too large")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let state = SlaterState::new(orbitals, Statistics::Fermion)?;
        let lambda = factor_1d(&state)?;
        if json {
            println!("{}", json!({ "state": state.to_string(), "partition": lambda.parts() }));
        } else {
            println!("{state} = s_{lambda} * Vandermonde");
        }
        return Ok(());
    }
    let lambda = Partition::new(parse_list(partition.unwrap_or_default(), "partition")?)?;
    let n = n.ok_or_else(|| Failure::Usage("--partition needs --n".into()))?;
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let p = if ratio { schur_ratio(&lambda, n)? } else { schur_ssyt(&lambda, n) };
    if json {
        println!("{}", polynomial_to_json(&p)?);
    } else {
        println!("{}", p.display());
    }
    Ok(())
}

fn density(
    catalog: &Path,
    shape_id: &str,
    realization: &str,
    length: f64,
    grid: &str,
    pair: bool,
    out: Option<&Path>,
) -> CliResult {
    let id: ShapeId = shape_id.parse()?;
    let kind: RealizationKind = realization.parse()?;
    let r = Realization::new(kind, length)?;
    let axes = parse_grid(grid)?;
    let catalog = read_catalog(catalog)?;
    let shape = catalog
        .shape(id)
        .ok_or_else(|| Failure::Usage(format!("no shape {id} in the catalog")))?;
    let p = shape.materialize()?;
    let rho = if pair {
        let [x, y] = axes.as_slice() else {
            return Err(Failure::Usage("--pair needs a grid with exactly two axes".into()));
        };
        two_particle_density_cut(&p, r, x, y)?
    } else {
        one_particle_density(&p, r, &axes)?
    };
    match out {
        Some(path) => rho.write(path)?,
        None => print!("{}", rho.to_csv()),
    }
    eprintln!("grid integral {:.9} (normalization {})", rho.integral(), rho.normalization);
    Ok(())
}

fn coulomb(catalog: &Path, grade: u32, pairwise: bool, length: f64, out: Option<&Path>) -> CliResult {
    let r = Realization::new(RealizationKind::HermiteOscillator, length)?;
    let catalog = read_catalog(catalog)?;
    if grade > catalog.max_grade() {
        return Err(Failure::Usage(format!(
            "catalog only reaches grade {}, asked for {grade}",
            catalog.max_grade()
        )));
    }
    let mut labels = Vec::new();
    let mut states = Vec::new();
    for s in catalog.shapes_at(grade) {
        labels.push(format!("shape {}", s.id()));
        states.push(s.materialize()?);
    }
    for t in catalog.trivial_states(grade) {
        labels.push(t.to_string());
        states.push(t.materialize(&catalog)?);
    }
    if states.is_empty() {
        return Err(Failure::Usage(format!("no states at grade {grade}")));
    }
    let table = CoulombTable::new();
    let mut csv = String::new();
    if pairwise {
        let m = vee_matrix(&states, r, &table)?;
        csv.push_str("state");
        for l in &labels {
            write!(csv, ",{l}").unwrap();
        }
        csv.push('\n');
        for (l, row) in labels.iter().zip(&m) {
            csv.push_str(l);
            for v in row {
                write!(csv, ",{v:e}").unwrap();
            }
            csv.push('\n');
        }
    } else {
        csv.push_str("state,vee\n");
        for (l, s) in labels.iter().zip(&states) {
            writeln!(csv, "{l},{:e}", many_body_vee(s, s, r, &table)?).unwrap();
        }
    }
    emit(&csv, out)
}
