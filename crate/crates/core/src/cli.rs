//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or input error, 3 finding
//! (a centered ratio above 1, archived rather than failed).

use std::ffi::OsString;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::lemmas::{run_checks, BoundCheck, CheckId};
use crate::maximal::{build_profile, OperatorKind};
use crate::peaks::{extract_system, peak_class, Peak, PeakClass};
use crate::rational::{self, Rational};
use crate::search::{
    enumerate_campaign, local_search, with_thread_cap, CampaignReport, FamilySpec, SearchSpec,
    DEFAULT_CAP, DEFAULT_DENOMINATOR,
};
use crate::sequence::{FiniteSequence, Interval};
use crate::variation::{report_from_profile, windowed_variation, VariationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

pub const TOOL: &str = "maxvar";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "maxvar", version, about = "Exact variation of discrete maximal functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OpArg {
    Centered,
    Noncentered,
}

impl From<OpArg> for OperatorKind {
    fn from(op: OpArg) -> Self {
        match op {
            OpArg::Centered => OperatorKind::Centered,
            OpArg::Noncentered => OperatorKind::NonCentered,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Climb,
}

#[derive(Debug, Args)]
struct SeqArg {
    /// Sequence file (`offset N` line, then the values).
    #[arg(long)]
    seq: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print maximal function values, one `n<TAB>value` per line.
    Eval {
        #[command(flatten)]
        seq: SeqArg,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long, conflicts_with = "window", allow_hyphen_values = true)]
        at: Option<i64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
        window: Option<Vec<i64>>,
        #[arg(long)]
        json: bool,
    },
    /// Print Var f, Var(Mf) and their ratio.
    Variation {
        #[command(flatten)]
        seq: SeqArg,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long)]
        json: bool,
    },
    /// List the peaks of the centered maximal function on a window.
    Peaks {
        #[command(flatten)]
        seq: SeqArg,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
        window: Vec<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Run lemma and bound checks.
    Verify {
        #[command(flatten)]
        seq: SeqArg,
        /// Comma-separated: 1,2,3,4,5,thm,conj,nc
        #[arg(long, value_delimiter = ',', required = true)]
        lemmas: Vec<CheckId>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive or hill-climbing campaigns; the report goes to stdout as JSON.
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    len: usize,
    /// Comma-separated non-negative rationals (exhaustive mode).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<String>>,
    /// Quotient the family by translation, reflection and scaling.
    #[arg(long)]
    dedup: bool,
    /// Checks run on every instance (exhaustive mode).
    #[arg(long, value_delimiter = ',', default_value = "thm,conj,nc,1,3,4")]
    checks: Vec<CheckId>,
    /// Objective operator for the ratio.
    #[arg(long, value_enum, default_value = "centered")]
    op: OpArg,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    restarts: u32,
    #[arg(long, default_value_t = DEFAULT_DENOMINATOR)]
    denominator: u32,
    /// Append one `seq;var_f;var_Mf;ratio` row per instance.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Accepted for uniformity; search reports are always JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Serialize)]
struct InputInfo {
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputInfo>,
    result: T,
}

#[derive(Debug, Serialize)]
struct EvalPoint {
    n: i64,
    #[serde(with = "rational::serde_str")]
    value: Rational,
}

#[derive(Debug, Serialize)]
struct EvalResult {
    kind: OperatorKind,
    values: Vec<EvalPoint>,
}

#[derive(Debug, Serialize)]
struct PeakRow {
    #[serde(flatten)]
    peak: Peak,
    class: Option<PeakClass>,
}

#[derive(Debug, Serialize)]
struct PeaksResult {
    window: Interval,
    sigma: usize,
    peaks: Vec<PeakRow>,
    #[serde(with = "rational::serde_vec_str")]
    boundary_terms: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    telescoped_variation: Rational,
    #[serde(with = "rational::serde_str")]
    windowed_variation: Rational,
}

#[derive(Debug, Serialize)]
struct VerifyResult {
    all_pass: bool,
    checks: Vec<BoundCheck>,
}

/// Failure that ends a command with a given exit code.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NegativeValue(_)
            | Error::EmptyInterval { .. }
            | Error::NegativeRadius(_)
            | Error::Parse { .. }
            | Error::WindowTooSmall { .. }
            | Error::DegenerateWindow
            | Error::CapExceeded { .. }
            | Error::Precondition(_) => EXIT_USAGE,
            _ => EXIT_CHECK_FAILED,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit::usage(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match with_thread_cap(|| dispatch(cli.command)) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_CHECK_FAILED;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "maxvar: {}", e.message);
            e.code
        }
    }
}

fn load(path: &Path) -> Result<(FiniteSequence, InputInfo), Exit> {
    let bytes = std::fs::read(path)
        .map_err(|e| Exit::usage(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Exit::usage(format!("{} is not UTF-8", path.display())))?;
    let f = FiniteSequence::parse_seqtext(&text)?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    Ok((f, InputInfo { sha256 }))
}

fn window_of(v: &[i64]) -> Result<Interval, Exit> {
    Ok(Interval::new(v[0], v[1])?)
}

fn to_json<T: Serialize>(command: &'static str, input: Option<InputInfo>, result: T) -> String {
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        command,
        input,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: Command) -> Result<(String, i32), Exit> {
    match cmd {
        Command::Eval {
            seq,
            op,
            at,
            window,
            json,
        } => {
            let (f, input) = load(&seq.seq)?;
            let profile = build_profile(&f, op.into())?;
            let points: Vec<i64> = match (at, window) {
                (Some(n), _) => vec![n],
                (None, Some(w)) => window_of(&w)?.iter().collect(),
                (None, None) => profile
                    .guarded_window()
                    .map(|w| w.iter().collect())
                    .unwrap_or_default(),
            };
            let values: Vec<EvalPoint> = points
                .into_iter()
                .map(|n| EvalPoint {
                    n,
                    value: profile.value_at(n),
                })
                .collect();
            let text = if json {
                to_json(
                    "eval",
                    Some(input),
                    EvalResult {
                        kind: op.into(),
                        values,
                    },
                )
            } else {
                values
                    .iter()
                    .map(|p| format!("{}\t{}\n", p.n, rational::fmt(&p.value)))
                    .collect()
            };
            Ok((text, EXIT_OK))
        }
        Command::Variation { seq, op, json } => {
            let (f, input) = load(&seq.seq)?;
            let report: VariationReport = report_from_profile(&build_profile(&f, op.into())?);
            let text = if json {
                to_json("variation", Some(input), &report)
            } else {
                format!(
                    "var_f={}\nvar_Mf={}\nratio={}\n",
                    rational::fmt(&report.var_f),
                    rational::fmt(&report.var_mf),
                    report
                        .ratio
                        .as_ref()
                        .map_or("undefined".into(), rational::fmt)
                )
            };
            Ok((text, EXIT_OK))
        }
        Command::Peaks { seq, window, json } => {
            let (f, input) = load(&seq.seq)?;
            let window = window_of(&window)?;
            let profile = build_profile(&f, OperatorKind::Centered)?;
            let sys = extract_system(&profile, window)?;
            let text = if json {
                let (first, last) = sys.boundary_terms();
                let result = PeaksResult {
                    window,
                    sigma: sys.sigma(),
                    peaks: sys
                        .peaks
                        .iter()
                        .map(|p| PeakRow {
                            peak: p.clone(),
                            class: peak_class(p),
                        })
                        .collect(),
                    boundary_terms: vec![first, last],
                    telescoped_variation: sys.telescoped_variation(),
                    windowed_variation: windowed_variation(&profile.values_on(window)),
                };
                to_json("peaks", Some(input), result)
            } else {
                sys.peaks
                    .iter()
                    .map(|p| {
                        format!(
                            "{} {} {} {} {} {} {}\n",
                            p.p,
                            p.r,
                            p.q,
                            rational::fmt(&p.var),
                            p.essential,
                            p.omega.map_or("-".into(), |w| w.to_string()),
                            peak_class(p).map_or("Unattained".into(), |c| c.to_string())
                        )
                    })
                    .collect()
            };
            Ok((text, EXIT_OK))
        }
        Command::Verify { seq, lemmas, json } => {
            let (f, input) = load(&seq.seq)?;
            let checks = run_checks(&f, &lemmas)?;
            let failed = checks
                .iter()
                .any(|c| !c.pass && c.lemma != CheckId::CenteredConjecture);
            let finding = checks
                .iter()
                .any(|c| !c.pass && c.lemma == CheckId::CenteredConjecture);
            let code = if failed {
                EXIT_CHECK_FAILED
            } else if finding {
                EXIT_FINDING
            } else {
                EXIT_OK
            };
            let text = if json {
                to_json(
                    "verify",
                    Some(input),
                    VerifyResult {
                        all_pass: !failed && !finding,
                        checks,
                    },
                )
            } else {
                checks
                    .iter()
                    .map(|c| {
                        format!(
                            "{}\t{}\tlhs={}\trhs={}\n",
                            c.lemma,
                            if c.pass { "pass" } else { "FAIL" },
                            rational::fmt(&c.lhs),
                            rational::fmt(&c.rhs)
                        )
                    })
                    .collect()
            };
            Ok((text, code))
        }
        Command::Search(args) => search(args),
    }
}

fn search(args: SearchArgs) -> Result<(String, i32), Exit> {
    let keep_rows = args.csv.is_some();
    let report: CampaignReport = match args.mode {
        ModeArg::Exhaustive => {
            let grid = args
                .grid
                .ok_or_else(|| Exit::usage("--mode exhaustive requires --grid"))?;
            let value_grid = grid
                .iter()
                .map(|s| {
                    rational::parse(s).ok_or_else(|| Exit::usage(format!("bad grid value {s:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let family = FamilySpec {
                support_len: args.len,
                value_grid,
                dedup: args.dedup,
            };
            enumerate_campaign(&family, &args.checks, args.op.into(), args.cap, keep_rows)?
        }
        ModeArg::Climb => {
            let iterations = args
                .iters
                .ok_or_else(|| Exit::usage("--mode climb requires --iters"))?;
            let seed = args
                .seed
                .ok_or_else(|| Exit::usage("--mode climb requires --seed"))?;
            let spec = SearchSpec {
                support_len: args.len,
                iterations,
                seed,
                restarts: args.restarts,
                denominator: args.denominator,
                objective: args.op.into(),
            };
            local_search(&spec, keep_rows)?
        }
    };
    if let Some(path) = &args.csv {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut buf = String::new();
        for row in &report.rows {
            buf.push_str(&row.csv_line());
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
    }
    let code = if !report.all_passed() {
        EXIT_CHECK_FAILED
    } else if !report.findings.is_empty() {
        EXIT_FINDING
    } else {
        EXIT_OK
    };
    Ok((to_json("search", None, &report), code))
}
