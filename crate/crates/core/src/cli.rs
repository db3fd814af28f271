//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or shape error, 3 failed property check or
//! a map that is not completely positive, 4 numeric failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::io::{builtin_basis, BasisJson, ChannelFile, Metadata, StateFile};
use crate::random::{random_cptp, random_density_matrix, random_unitary, seeded_rng, RNG_NAME};
use crate::representations::{ChoiConvention, KrausRep, PropertyCheck};
use crate::transforms::{convert, AnyChannel, ConvertOptions, RepKind, DEFAULT_RANK_TOL};
use crate::vectorize::{BasisKind, VecConvention, DEFAULT_TOL};

pub const TOL_ENV: &str = "CHANNELFORGE_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "channelforge", version, about = "Convert, check and apply quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a channel file into another representation.
    Convert(ConvertArgs),
    /// Check trace preservation, hermiticity preservation and complete positivity.
    Check(CheckArgs),
    /// Apply a channel to a state.
    Apply(ApplyArgs),
    /// Generate a random channel, unitary or state.
    Random(RandomArgs),
    /// List or export the built-in operator bases.
    Basis(BasisArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Kraus,
    Superop,
    Choi,
    Chi,
    Stinespring,
}

impl From<Target> for RepKind {
    fn from(t: Target) -> Self {
        match t {
            Target::Kraus => RepKind::Kraus,
            Target::Superop => RepKind::Superop,
            Target::Choi => RepKind::Choi,
            Target::Chi => RepKind::Chi,
            Target::Stinespring => RepKind::Stinespring,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VecConv {
    Col,
    Row,
    Pauli,
    Elementary,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ChoiConv {
    Col,
    Row,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuiltinBasis {
    Pauli,
    Elementary,
}

impl From<BuiltinBasis> for BasisKind {
    fn from(b: BuiltinBasis) -> Self {
        match b {
            BuiltinBasis::Pauli => BasisKind::Pauli,
            BuiltinBasis::Elementary => BasisKind::Elementary,
        }
    }
}

#[derive(Args, Debug)]
struct TolArg {
    /// Numerical tolerance (default 1e-10, or $CHANNELFORGE_TOL).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    input: PathBuf,
    /// Target representation.
    #[arg(long = "to")]
    to: Target,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Vectorization convention of a superoperator target.
    #[arg(long, value_enum, default_value = "col")]
    vec_convention: VecConv,
    /// Convention of a Choi target.
    #[arg(long, value_enum, default_value = "col")]
    choi_convention: ChoiConv,
    /// Basis of a chi target (Pauli for qubit endomorphisms by default).
    #[arg(long, value_enum)]
    basis: Option<BuiltinBasis>,
    /// Relative eigenvalue cut for canonical Kraus operators.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Args, Debug)]
struct CheckArgs {
    input: PathBuf,
    #[arg(long)]
    cp: bool,
    #[arg(long)]
    tp: bool,
    #[arg(long)]
    hp: bool,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Args, Debug)]
struct ApplyArgs {
    channel: PathBuf,
    state: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RandomKind {
    Unitary,
    Cptp,
    State,
}

#[derive(Args, Debug)]
struct RandomArgs {
    #[arg(long = "type", value_enum)]
    kind: RandomKind,
    /// Input dimension (the only dimension for unitaries and states).
    #[arg(long)]
    dim: usize,
    /// Output dimension of a CPTP map; defaults to --dim.
    #[arg(long)]
    dim_out: Option<usize>,
    /// Kraus rank of a CPTP map; defaults to dim * dim_out.
    #[arg(long)]
    kraus_rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BasisArgs {
    #[command(subcommand)]
    action: BasisAction,
}

#[derive(Subcommand, Debug)]
enum BasisAction {
    /// List the built-in bases.
    List,
    /// Write a built-in basis of `dim x dim` operators with its elements.
    Export {
        #[arg(value_enum)]
        basis: BuiltinBasis,
        #[arg(long)]
        dim: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Shape(_) | Error::Domain(_) | Error::Convention(_) | Error::Parse(_) | Error::Io(_) => EXIT_PARSE,
        Error::NotCp { .. } => EXIT_PROPERTY,
        Error::Numeric(_) => EXIT_NUMERIC,
    }
}

/// Explicit `--tol`, then `$CHANNELFORGE_TOL`, then the library default.
fn resolve_tol(flag: &TolArg) -> Result<f64> {
    let tol = match flag.tol {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{TOL_ENV}='{s}' is not a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Parse(format!("tolerance must be positive, got {tol}")));
    }
    Ok(tol)
}

/// Runs the tool with `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Convert(a) => cmd_convert(a, out, err),
        Command::Check(a) => cmd_check(a, out),
        Command::Apply(a) => cmd_apply(a, out, err),
        Command::Random(a) => cmd_random(a, out),
        Command::Basis(a) => cmd_basis(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
    }
}

fn load_channel(path: &Path, tol: f64) -> Result<(AnyChannel, Metadata)> {
    let file = ChannelFile::read(path)?;
    let ch = file.to_channel(tol)?;
    Ok((ch, file.metadata))
}

fn cmd_convert(a: ConvertArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let tol = resolve_tol(&a.tol)?;
    let (ch, mut meta) = load_channel(&a.input, tol)?;
    let (dx, dy) = (ch.as_channel().input_dim(), ch.as_channel().output_dim());
    let vec_convention = match a.vec_convention {
        VecConv::Col => VecConvention::Col,
        VecConv::Row => VecConvention::Row,
        VecConv::Pauli => VecConvention::Basis(builtin_basis(BasisKind::Pauli, dx, dy)?),
        VecConv::Elementary => VecConvention::Basis(builtin_basis(BasisKind::Elementary, dx, dy)?),
    };
    let chi_basis = a.basis.map(|b| builtin_basis(b.into(), dx, dy)).transpose()?;
    let opts = ConvertOptions {
        vec_convention,
        choi_convention: match a.choi_convention {
            ChoiConv::Col => ChoiConvention::Col,
            ChoiConv::Row => ChoiConvention::Row,
        },
        chi_basis,
        env_state: None,
        rank_tol: a.rank_tol,
        tol,
    };
    let target: RepKind = a.to.into();
    let conv = convert(&ch, target, &opts)?;
    let steps = if conv.path.is_empty() {
        "(none)".to_string()
    } else {
        conv.path.join(" -> ")
    };
    let _ = writeln!(err, "path: {} => {}: {steps}", ch.kind().as_str(), target.as_str());
    meta.tool_version = crate::io::TOOL_VERSION.to_string();
    meta.path.extend(conv.path.iter().map(|s| s.to_string()));
    let file = ChannelFile::from_channel(&conv.channel, meta);
    emit(&file.to_json(), a.output.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<i32> {
    let tol = resolve_tol(&a.tol)?;
    let (ch, _) = load_channel(&a.input, tol)?;
    let c = ch.as_channel();
    let all = !(a.cp || a.tp || a.hp);
    let mut checks: Vec<PropertyCheck> = Vec::new();
    if all || a.tp {
        checks.push(c.check_tp(tol)?);
    }
    if all || a.hp {
        checks.push(c.check_hp(tol)?);
    }
    if all || a.cp {
        checks.push(c.check_cp(tol)?);
    }
    let _ = writeln!(
        out,
        "{} dx={} dy={} tol={tol:e}",
        ch.kind().as_str(),
        c.input_dim(),
        c.output_dim()
    );
    for check in &checks {
        let _ = writeln!(out, "{check}");
    }
    Ok(if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_PROPERTY
    })
}

fn cmd_apply(a: ApplyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let tol = resolve_tol(&a.tol)?;
    let (ch, _) = load_channel(&a.channel, tol)?;
    let rho = StateFile::read(&a.state)?.to_state(true, tol)?;
    let result = ch.as_channel().apply(&rho)?;
    let _ = writeln!(err, "trace: {:.17e}", result.trace());
    let file = StateFile::from_state(&result, Metadata::new());
    emit(&file.to_json(), a.output.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn cmd_random(a: RandomArgs, out: &mut dyn Write) -> Result<i32> {
    let mut rng = seeded_rng(a.seed);
    let mut meta = Metadata::new();
    meta.seed = Some(a.seed);
    meta.rng = Some(RNG_NAME.to_string());
    let text = match a.kind {
        RandomKind::Unitary => {
            let u = random_unitary(a.dim, &mut rng)?;
            let ch = AnyChannel::Kraus(KrausRep::new(vec![u])?);
            ChannelFile::from_channel(&ch, meta).to_json()
        }
        RandomKind::Cptp => {
            let dy = a.dim_out.unwrap_or(a.dim);
            let rank = a.kraus_rank.unwrap_or(a.dim * dy);
            let se = random_cptp(a.dim, dy, rank, &mut rng)?;
            ChannelFile::from_channel(&AnyChannel::Stinespring(se), meta).to_json()
        }
        RandomKind::State => {
            let rho = random_density_matrix(a.dim, &mut rng)?;
            StateFile::from_state(&rho, meta).to_json()
        }
    };
    emit(&text, a.output.as_deref(), out)?;
    Ok(EXIT_OK)
}

fn cmd_basis(a: BasisArgs, out: &mut dyn Write) -> Result<i32> {
    match a.action {
        BasisAction::List => {
            let _ = writeln!(out, "elementary  matrix units E_ij in col-vec order, any dimension");
            let _ = writeln!(out, "pauli       normalized Pauli products, dimension 2^n (n <= 6)");
        }
        BasisAction::Export { basis, dim, output } => {
            let b = builtin_basis(basis.into(), dim, dim)?;
            let json = BasisJson {
                label: b.label().to_string(),
                elements: Some(b.elements().iter().map(crate::io::matrix_to_json).collect()),
            };
            let mut text = serde_json::to_string_pretty(&json).map_err(|e| Error::Io(e.to_string()))?;
            text.push('\n');
            emit(&text, output.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}
