//! `wigner-codes` command-line front end.

mod verify;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wigner_codes::codes::{cosets, hamming_code, simplex_code, LinearCode};
use wigner_codes::faceops::{distances, face_operator, face_operator_unit_trace, FaceLabel, FaceOperatorRecord};
use wigner_codes::gfield::FieldSpec;
use wigner_codes::mub::{verify_mub, MubSet};
use wigner_codes::wigner::{dwf, stab_polytope_min, DwfSpec};
use wigner_codes::{ComplexMatrix, GaloisField};

/// Codes with at most this many words list them in full.
const LIST_LIMIT: u128 = 4096;

#[derive(Parser)]
#[command(name = "wigner-codes", version, about = "q-ary codes, MUB face operators and discrete Wigner functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order, a prime power up to 64.
    #[arg(long)]
    q: u64,
    /// Monic modulus coefficients c0,c1,...,cn overriding the Conway polynomial.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// Comparison tolerance.
    #[arg(long, env = "WIGNER_CODES_TOL", default_value_t = wigner_codes::TOLERANCE)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Field description, powers of the primitive element and the trace table.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Simplex and Hamming codes.
    Code {
        #[command(subcommand)]
        command: CodeCommand,
    },
    /// Mutually unbiased bases.
    Mub {
        #[command(subcommand)]
        command: MubCommand,
    },
    /// Face or facet operator for a label.
    Facet {
        #[command(flatten)]
        field: FieldArgs,
        /// Values as canonical indices, one per basis.
        #[arg(long, value_delimiter = ',', required = true)]
        label: Vec<usize>,
        /// Basis positions (0 = inf, then 0, alpha, ..., 1); defaults to all q+1.
        #[arg(long, value_delimiter = ',')]
        bases: Option<Vec<usize>>,
        /// Use the unit-trace normalization.
        #[arg(long)]
        unit_trace: bool,
    },
    /// Distances between two labels over the same bases.
    Distance {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        bases: Option<Vec<usize>>,
    },
    /// Discrete Wigner function of a state file.
    Wigner {
        #[command(flatten)]
        field: FieldArgs,
        /// Matrix JSON file: {"dim": d, "entries": [[[re, im], ...], ...]}.
        #[arg(long)]
        state: std::path::PathBuf,
        /// Coset leader selecting the phase-space structure; defaults to zeros.
        #[arg(long, value_delimiter = ',')]
        w: Option<Vec<usize>>,
        #[arg(long)]
        negativity: bool,
        #[arg(long)]
        polytope: bool,
    },
    /// Invariant checks.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum FieldCommand {
    Info {
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Subcommand)]
enum CodeCommand {
    Simplex {
        #[command(flatten)]
        field: FieldArgs,
    },
    Hamming {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Coset leaders of the simplex code.
    Cosets {
        #[command(flatten)]
        field: FieldArgs,
    },
    Weights {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum)]
        which: Which,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Simplex,
    Hamming,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum MubCommand {
    Table {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    Verify {
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    All {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sampled labels for the purity average when q^(q+1) exceeds 1024.
        #[arg(long, default_value_t = 100_000)]
        purity_samples: usize,
    },
}

/// Exit status 2 for bad input, 1 for a failed check.
enum Failure {
    Invalid(String),
    Check(String),
}

impl From<wigner_codes::Error> for Failure {
    fn from(e: wigner_codes::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type CliResult = Result<String, Failure>;

impl FieldArgs {
    fn field(&self) -> Result<Arc<GaloisField>, Failure> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Failure::Invalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        let field = match &self.modulus {
            None => GaloisField::with_order(self.q)?,
            Some(m) => {
                let (p, n) = FieldSpec::factor_order(self.q)?;
                GaloisField::from_spec(FieldSpec::new(p, n, m.clone())?)?
            }
        };
        Ok(Arc::new(field))
    }

    fn mub(&self) -> Result<Arc<MubSet>, Failure> {
        Ok(Arc::new(MubSet::new(self.field()?)?))
    }
}

fn to_json<T: Serialize>(value: &T) -> CliResult {
    serde_json::to_string(value).map_err(|e| Failure::Invalid(e.to_string()))
}

fn label(field: &GaloisField, values: &[usize], bases: Option<&[usize]>) -> Result<FaceLabel, Failure> {
    Ok(match bases {
        Some(b) => FaceLabel::from_positions(field, b, values)?,
        None => FaceLabel::facet_from_indices(field, values)?,
    })
}

fn code_summary(code: &LinearCode, weights: bool) -> CliResult {
    to_json(&code.summary(code.size() <= LIST_LIMIT, weights)?)
}

fn field_info(args: &FieldArgs) -> CliResult {
    let f = args.field()?;
    let q = f.q();
    let powers: Vec<_> = (0..q - 1).map(|k| json!({"power": k, "index": f.alpha_power(k as u64).index()})).collect();
    let elements: Vec<_> = f
        .elements()
        .map(|e| {
            json!({
                "index": e.index(),
                "coeffs": f.coeffs(e),
                "log": f.log_alpha(e),
                "trace": f.trace(e),
            })
        })
        .collect();
    to_json(&json!({
        "spec": f.spec(),
        "q": q,
        "alpha": f.alpha().index(),
        "alpha_powers": powers,
        "elements": elements,
    }))
}

fn cosets_info(args: &FieldArgs) -> CliResult {
    let f = args.field()?;
    let code = simplex_code(Arc::clone(&f));
    let table = cosets(&code)?;
    let leaders: Vec<Vec<usize>> = table.leaders().iter().map(|w| w.indices()).collect();
    let total = (f.q() as u128).checked_pow(f.q() as u32 + 1);
    let rows = if total.is_some_and(|t| t <= LIST_LIMIT) {
        Some(table.rows()?.iter().map(|r| r.iter().map(|w| w.indices()).collect::<Vec<_>>()).collect::<Vec<_>>())
    } else {
        None
    };
    let mut out = json!({"q": f.q(), "N": code.length(), "count": table.len(), "leaders": leaders});
    if let Some(rows) = rows {
        out["rows"] = json!(rows);
    }
    to_json(&out)
}

fn mub_table(args: &FieldArgs, format: Format) -> CliResult {
    let m = args.mub()?;
    let table = m.table();
    match format {
        Format::Json => to_json(&table),
        Format::Text => {
            let mut out = String::new();
            for basis in &table.bases {
                let name = serde_json::to_value(basis.label).map_err(|e| Failure::Invalid(e.to_string()))?;
                for (v, vector) in basis.vectors.iter().enumerate() {
                    let cells: Vec<String> = vector.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
                    let _ = writeln!(out, "B={name} V={v}: {}", cells.join(" "));
                }
            }
            Ok(out.trim_end().to_string())
        }
    }
}

fn mub_verify(args: &FieldArgs) -> CliResult {
    let m = args.mub()?;
    let deviation = verify_mub(&m);
    let pass = deviation <= args.tol;
    let out = to_json(&json!({"q": m.q(), "max_deviation": deviation, "tolerance": args.tol, "pass": pass}))?;
    if pass {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn read_state(path: &std::path::Path) -> Result<ComplexMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: malformed state: {e}", path.display())))
}

fn wigner(
    args: &FieldArgs,
    state: &std::path::Path,
    w: Option<&[usize]>,
    negativity: bool,
    polytope: bool,
) -> CliResult {
    let m = args.mub()?;
    let rho = read_state(state)?;
    let leader = match w {
        Some(w) => FaceLabel::facet_from_indices(m.field(), w)?,
        None => FaceLabel::facet_from_indices(m.field(), &vec![0; m.q() + 1])?,
    };
    let spec = DwfSpec::new(Arc::clone(&m), leader)?;
    let table = dwf(&spec, &rho)?;
    let mut out = json!({"table": table.values(), "sum": table.sum()});
    if negativity {
        out["negativity"] = json!(table.negativity());
    }
    if polytope {
        let report = stab_polytope_min(&m, &rho)?;
        out["polytope"] = json!({
            "min": report.min,
            "member": report.min >= -args.tol,
            "argmin": report.argmin.indices(),
        });
    }
    to_json(&out)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Field { command: FieldCommand::Info { field } } => field_info(&field),
        Command::Code { command } => match command {
            CodeCommand::Simplex { field } => code_summary(&simplex_code(field.field()?), false),
            CodeCommand::Hamming { field } => code_summary(&hamming_code(field.field()?), false),
            CodeCommand::Cosets { field } => cosets_info(&field),
            CodeCommand::Weights { field, which } => {
                let f = field.field()?;
                let code = match which {
                    Which::Simplex => simplex_code(f),
                    Which::Hamming => hamming_code(f),
                };
                to_json(&code.summary(false, true)?)
            }
        },
        Command::Mub { command } => match command {
            MubCommand::Table { field, format } => mub_table(&field, format),
            MubCommand::Verify { field } => mub_verify(&field),
        },
        Command::Facet { field, label: values, bases, unit_trace } => {
            let m = field.mub()?;
            let l = label(m.field(), &values, bases.as_deref())?;
            let a = if unit_trace { face_operator_unit_trace(&m, &l)? } else { face_operator(&m, &l)? };
            to_json(&FaceOperatorRecord::from(&a))
        }
        Command::Distance { field, r, s, bases } => {
            let f = field.field()?;
            let lr = label(&f, &r, bases.as_deref())?;
            let ls = label(&f, &s, bases.as_deref())?;
            to_json(&distances(f.q(), &lr, &ls)?)
        }
        Command::Wigner { field, state, w, negativity, polytope } => {
            wigner(&field, &state, w.as_deref(), negativity, polytope)
        }
        Command::Verify { command: VerifyCommand::All { field, seed, purity_samples } } => {
            let (report, pass) = verify::all(&field.mub()?, field.tol, seed, purity_samples)?;
            if pass {
                Ok(report)
            } else {
                Err(Failure::Check(report))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(out)) => {
            println!("{out}");
            ExitCode::from(1)
        }
    }
}
