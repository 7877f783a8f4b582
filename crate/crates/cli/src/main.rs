//! k3moduli: decide whether the sheaf moduli space M_X(2, H, 2) on a
//! degree-8 K3 surface is forced isomorphic to X by its Picard lattice, and
//! produce the witnesses and certificates.

mod io;
mod render;

use std::io::{IsTerminal, Read};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;

use k3moduli::chambers::{is_not_pseudo_effective, minus_two_classes};
use k3moduli::criterion::{
    search_d, search_h1, validate_input, verdict, SearchOptions, VerdictStatus,
};
use k3moduli::lattice::{IntegerLattice, LatVec};
use k3moduli::oracle::{compare_d, compare_h1};
use k3moduli::Vector;
use num_traits::One;

use io::{InputDocument, OutputDocument, SweepRowJson};

#[derive(Parser)]
#[command(
    name = "k3moduli",
    version,
    about = "Lattice criterion for M_X(2, H, 2) on a degree-8 K3 surface to be isomorphic to X",
    after_help = "Exit codes: 0 criterion holds / success, 2 no witness within bound, \
                  3 invalid input, 4 oracle mismatch, 5 necessary condition fails."
)]
struct Cli {
    /// Box bound for searches, roots, and certificates (overrides the input
    /// document; default 64)
    #[arg(long, global = true)]
    bound: Option<u32>,

    /// Reflection-orbit depth for the norm -4 fallback (overrides the input
    /// document; default 8)
    #[arg(long, global = true)]
    depth: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Deliberately weaken a search filter so the oracle can demonstrate a
    /// mismatch
    #[arg(long, global = true, hide = true, value_enum)]
    inject_fault: Option<Fault>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    /// Drop the "H.h1 even" filter from the searches
    SkipParity,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// Search for h1 with h1^2 = +-4 directly
    H1,
    /// Search for D with (H + 2D)^2 = +-4
    D,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the input and decide the criterion, emitting witness and chain
    Check {
        /// Input JSON path ("-" or omitted reads standard input)
        input: Option<PathBuf>,
    },
    /// List all witnesses inside the box, in deterministic order
    Search {
        #[arg(long, value_enum, default_value_t = Target::H1)]
        target: Target,
        input: Option<PathBuf>,
    },
    /// Re-run the searches with an independent brute-force oracle and diff
    Oracle {
        input: Option<PathBuf>,
    },
    /// Decide the criterion across the family [[8, e], [e, 2f]] with H = (1, 0)
    Sweep {
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        e_min: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        e_max: i64,
        #[arg(long, default_value_t = -8, allow_hyphen_values = true)]
        f_min: i64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        f_max: i64,
    },
    /// Enumerate (-2)-classes; with --h1, also certify non-pseudo-effectivity
    Walls {
        /// Comma-separated coordinates of a norm -4 class
        #[arg(long, allow_hyphen_values = true)]
        h1: Option<String>,
        input: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Core(k3moduli::Error),
    Io(std::io::Error),
    Json(serde_json::Error),
    Input(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "invalid input document: {e}"),
            CliError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<k3moduli::Error> for CliError {
    fn from(e: k3moduli::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Check { .. } => "check",
        Command::Search { .. } => "search",
        Command::Oracle { .. } => "oracle",
        Command::Sweep { .. } => "sweep",
        Command::Walls { .. } => "walls",
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<InputDocument, CliError> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)?,
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    Ok(serde_json::from_str(&text)?)
}

struct Prepared {
    lattice: k3moduli::Lattice,
    h: Vector,
    bound: u32,
    depth: u32,
    assert_nef: bool,
}

fn prepare(cli: &Cli, path: &Option<PathBuf>) -> Result<Prepared, CliError> {
    let doc = read_input(path)?;
    let lattice = doc.lattice()?;
    let h = doc.polarization();
    Ok(Prepared {
        lattice,
        h,
        bound: cli.bound.or(doc.bound).unwrap_or(64),
        depth: cli.depth.or(doc.orbit_depth).unwrap_or(8),
        assert_nef: doc.assert_nef.unwrap_or(true),
    })
}

fn search_options(cli: &Cli) -> SearchOptions {
    SearchOptions {
        check_pairing_parity: !matches!(cli.inject_fault, Some(Fault::SkipParity)),
    }
}

fn cmd_check(cli: &Cli, input: &Option<PathBuf>) -> Result<(OutputDocument, i32), CliError> {
    let p = prepare(cli, input)?;
    let mut out = OutputDocument::new("check");
    out.bound = Some(p.bound);
    out.orbit_depth = Some(p.depth);
    let validation = validate_input(&p.lattice, &p.h, p.assert_nef, p.bound)?;
    out.validation = Some(io::validation_json(&validation));
    if !validation.passed() {
        out.verdict = Some("invalid-input");
        out.diagnostics = validation.failures();
        let div = p.lattice.divisibility(&p.h)?;
        out.necessary_report = Some(io::NecessaryJson {
            mukai_condition: div.is_one(),
            h_divisibility: io::JsonInt(div),
            rank: p.lattice.rank(),
            notes: Vec::new(),
        });
        return Ok((out, 3));
    }
    let v = verdict(&p.lattice, &p.h, p.bound, p.depth)?;
    out.necessary_report = Some(io::necessary_json(&v.necessary_report));
    out.diagnostics = v.diagnostics.clone();
    let code = match &v.status {
        VerdictStatus::SufficientHolds { witness, chain } => {
            out.verdict = Some("sufficient-holds");
            out.case = Some(witness.case_tag.to_string());
            out.witness = Some(io::witness_json(witness));
            out.chain = Some(io::chain_json(chain));
            out.chain_text = Some(io::chain_text(chain));
            0
        }
        VerdictStatus::NotFoundWithinBound { .. } => {
            out.verdict = Some("not-found-within-bound");
            2
        }
        VerdictStatus::NecessaryFails { reason } => {
            out.verdict = Some("necessary-fails");
            out.reason = Some(reason.clone());
            5
        }
    };
    Ok((out, code))
}

fn cmd_search(
    cli: &Cli,
    target: Target,
    input: &Option<PathBuf>,
) -> Result<(OutputDocument, i32), CliError> {
    let p = prepare(cli, input)?;
    let opts = search_options(cli);
    let mut out = OutputDocument::new("search");
    out.bound = Some(p.bound);
    let validation = validate_input(&p.lattice, &p.h, p.assert_nef, p.bound)?;
    if !validation.passed() {
        out.diagnostics.push(
            "input fails validation; the enumeration below is purely formal".to_string(),
        );
    }
    out.validation = Some(io::validation_json(&validation));
    let hits = match target {
        Target::H1 => search_h1(&p.lattice, &p.h, p.bound, &opts)?,
        Target::D => search_d(&p.lattice, &p.h, p.bound, &opts)?,
    };
    out.witnesses = Some(hits.iter().map(io::json_vec).collect());
    Ok((out, 0))
}

fn cmd_oracle(cli: &Cli, input: &Option<PathBuf>) -> Result<(OutputDocument, i32), CliError> {
    let p = prepare(cli, input)?;
    let opts = search_options(cli);
    let rh = compare_h1(&p.lattice, &p.h, p.bound, &opts)?;
    let rd = compare_d(&p.lattice, &p.h, p.bound, &opts)?;
    let ok = rh.matches() && rd.matches();
    let mut out = OutputDocument::new("oracle");
    out.bound = Some(p.bound);
    out.oracle = Some(vec![io::oracle_json("h1", &rh), io::oracle_json("D", &rd)]);
    Ok((out, if ok { 0 } else { 4 }))
}

fn cmd_sweep(
    cli: &Cli,
    e_range: (i64, i64),
    f_range: (i64, i64),
) -> Result<(OutputDocument, i32), CliError> {
    if e_range.0 > e_range.1 || f_range.0 > f_range.1 {
        return Err(CliError::Input("empty sweep range".to_string()));
    }
    let bound = cli.bound.unwrap_or(64);
    let depth = cli.depth.unwrap_or(8);
    let mut grid = Vec::new();
    for e in e_range.0..=e_range.1 {
        for f in f_range.0..=f_range.1 {
            grid.push((e, f));
        }
    }
    let rows: Result<Vec<SweepRowJson>, k3moduli::Error> = grid
        .par_iter()
        .map(|&(e, f)| {
            let l = IntegerLattice::<i64>::new(vec![vec![8, e], vec![e, 2 * f]])?;
            let h = LatVec::new(vec![1i64, 0]);
            let validation = validate_input(&l, &h, true, bound.min(16))?;
            let mukai = l.divisibility(&h)?.is_one();
            if !validation.passed() {
                return Ok(SweepRowJson {
                    e,
                    f,
                    hyperbolic: validation.hyperbolic,
                    mukai,
                    verdict: "invalid-input",
                    case: None,
                });
            }
            let v = verdict(&l, &h, bound, depth)?;
            let (verdict_str, case) = match &v.status {
                VerdictStatus::SufficientHolds { witness, .. } => {
                    ("sufficient-holds", Some(witness.case_tag.to_string()))
                }
                VerdictStatus::NotFoundWithinBound { .. } => ("not-found-within-bound", None),
                VerdictStatus::NecessaryFails { .. } => ("necessary-fails", None),
            };
            Ok(SweepRowJson {
                e,
                f,
                hyperbolic: true,
                mukai,
                verdict: verdict_str,
                case,
            })
        })
        .collect();
    let mut out = OutputDocument::new("sweep");
    out.bound = Some(bound);
    out.sweep = Some(rows?);
    Ok((out, 0))
}

fn parse_h1(s: &str, rank: usize) -> Result<Vector, CliError> {
    let coords: Result<Vec<BigInt>, _> =
        s.split(',').map(|t| t.trim().parse::<BigInt>()).collect();
    let coords =
        coords.map_err(|_| CliError::Input(format!("--h1 expects comma-separated integers, got {s:?}")))?;
    if coords.len() != rank {
        return Err(CliError::Input(format!(
            "--h1 has {} coordinates, the lattice has rank {rank}",
            coords.len()
        )));
    }
    Ok(LatVec::new(coords))
}

fn cmd_walls(
    cli: &Cli,
    h1: &Option<String>,
    input: &Option<PathBuf>,
) -> Result<(OutputDocument, i32), CliError> {
    let p = prepare(cli, input)?;
    let mut out = OutputDocument::new("walls");
    out.bound = Some(p.bound);
    let walls = minus_two_classes(&p.lattice, &p.h, p.bound)?;
    out.walls = Some(io::walls_json(&walls));
    if let Some(arg) = h1 {
        let h1 = parse_h1(arg, p.lattice.rank())?;
        let cert = is_not_pseudo_effective(&p.lattice, &p.h, &h1, p.bound)?;
        out.effectivity = Some(io::effectivity_json(&cert));
    }
    Ok((out, 0))
}

fn run(cli: &Cli) -> Result<(OutputDocument, i32), CliError> {
    match &cli.command {
        Command::Check { input } => cmd_check(cli, input),
        Command::Search { target, input } => cmd_search(cli, *target, input),
        Command::Oracle { input } => cmd_oracle(cli, input),
        Command::Sweep {
            e_min,
            e_max,
            f_min,
            f_max,
        } => cmd_sweep(cli, (*e_min, *e_max), (*f_min, *f_max)),
        Command::Walls { h1, input } => cmd_walls(cli, h1, input),
    }
}

fn print_doc(doc: &OutputDocument, format: Format) {
    match format {
        Format::Json => print!("{}", doc.to_json()),
        Format::Text => {
            let color = std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none();
            print!("{}", render::render_text(doc, color));
        }
        Format::Csv => print!("{}", render::render_csv(doc)),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok((doc, code)) => {
            print_doc(&doc, cli.format);
            std::process::exit(code);
        }
        Err(err) => {
            eprintln!("error: {err}");
            let mut doc = OutputDocument::new(command_name(&cli.command));
            doc.error = Some(err.to_string());
            if cli.format != Format::Text {
                print_doc(&doc, cli.format);
            }
            std::process::exit(3);
        }
    }
}
