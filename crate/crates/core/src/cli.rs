//! Batch command-line front end.
//!
//! Exit codes: 0 when everything checked holds, 1 on a mathematical failure,
//! 2 on a usage or configuration error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::colors::{count_q_via_binomials, enumerate_q, ColorFamily};
use crate::conjectures::{default_n_max, verify_conjectures, Conjecture, ConjectureOutcome, FloorTable, FLOOR_TABLE};
use crate::error::{Error, Result};
use crate::esp::{at_least_two_ones, check_injectivity, image_dump_jsonl, image_multiset};
use crate::oeis::{self, OeisConfig};
use crate::partition::{count, enumerate, FamilyKind, PartitionFamily};
use crate::report::{rows_to_csv, Counterexample, ReportRow};
use crate::sequences::{delta, values, verify_all, Identity, IdentityOutcome, Route, SeqId};
use crate::series::Gf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "espart", version, about = "Elementary symmetric partitions: enumeration, sequences and identity checks")]
pub struct Cli {
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// `key=value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Allow HTTPS requests to the OEIS.
    #[arg(long, global = true)]
    pub network: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Directory for OEIS b-files fetched earlier.
    #[arg(long, global = true, env = oeis::CACHE_DIR_ENV)]
    pub oeis_cache: Option<PathBuf>,
    #[arg(long, global = true, env = oeis::ENDPOINT_ENV, default_value = oeis::DEFAULT_ENDPOINT)]
    pub oeis_endpoint: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the partitions of a family in canonical order.
    Enumerate(EnumerateArgs),
    /// Compute a sequence by one or more routes and compare them.
    Seq(SeqArgs),
    /// Check identities from the catalog.
    Verify(VerifyArgs),
    /// Check the conjectured identities.
    Conjecture(ConjectureArgs),
    /// Look for two sources with the same pre_k image.
    Injectivity(InjectivityArgs),
    /// List color partitions into distinct parts.
    Colors(ColorsArgs),
    /// Compare with or fetch OEIS b-files.
    #[command(subcommand)]
    Oeis(OeisCommand),
    /// Write series, images or reports to a file.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    All,
    Binary,
    Dary,
}

fn family_kind(family: FamilyArg, d: u64) -> Result<FamilyKind> {
    match family {
        FamilyArg::All => Ok(FamilyKind::All),
        FamilyArg::Binary => Ok(FamilyKind::Dary(2)),
        FamilyArg::Dary if d >= 2 => Ok(FamilyKind::Dary(d)),
        FamilyArg::Dary => Err(Error::InvalidArgument(format!("--d must be at least 2, got {d}"))),
    }
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::All)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    pub d: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, default_value_t = 0)]
    pub min_len: u64,
}

/// Inclusive `lo..hi`, or a single `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl std::str::FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad bound {t:?} in range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// `a`, `b`, `c`, `a(d)` or `b(d)`.
    #[arg(long)]
    pub id: SeqId,
    /// `all` or a comma list of brute-image, rooted-count, series, closed-b, closed-c, recurrence.
    #[arg(long, default_value = "all")]
    pub routes: String,
    #[arg(long, default_value = "0..20")]
    pub n: NRange,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// `all` or a comma list such as `T4f,TDd.b(3)`.
    #[arg(long, default_value = "all")]
    pub id: String,
    #[arg(long, default_value = "0..30")]
    pub n: NRange,
    /// Print every row, not only the summary.
    #[arg(long)]
    pub rows: bool,
    /// Write all rows as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    /// `all`, a family (`C9`, `C10`, `C11`, `C12`) or one check such as `C9(d=5)`.
    #[arg(long, default_value = "all")]
    pub id: String,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Values of k for the difference identities.
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 4])]
    pub k: Vec<u64>,
    /// Overrides the default range (n <= 30 for k <= 3, n <= 24 for k = 4).
    #[arg(long)]
    pub n: Option<NRange>,
    /// Floor-table config replacing the bundled one.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Write one JSON counterexample per failing check here.
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InjectivityArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::All)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 2)]
    pub d: u64,
    #[arg(long, default_value_t = 2)]
    pub k: u64,
    #[arg(long, default_value = "0..22")]
    pub n: NRange,
    /// Only sources with at least two 1's.
    #[arg(long)]
    pub two_ones: bool,
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColorArg {
    Plain,
    Pow,
    Odd,
}

#[derive(Debug, Args)]
pub struct ColorsArgs {
    #[arg(long, value_enum, default_value_t = ColorArg::Plain)]
    pub family: ColorArg,
    #[arg(long, default_value_t = 1)]
    pub d: u64,
    #[arg(long)]
    pub n: u64,
}

fn color_family(family: ColorArg, d: u64) -> ColorFamily {
    match family {
        ColorArg::Plain => ColorFamily::PLAIN,
        ColorArg::Pow => ColorFamily::Pow(d),
        ColorArg::Odd => ColorFamily::Odd(d),
    }
}

#[derive(Debug, Subcommand)]
pub enum OeisCommand {
    /// Compare a computed sequence with a b-file: `s(n) = ref(n + offset) + shift`.
    Diff(DiffArgs),
    /// Download a b-file (requires --network) and cache it.
    Fetch(FetchArgs),
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    #[arg(long)]
    pub seq: SeqId,
    #[arg(long, default_value = "series")]
    pub route: Route,
    /// Compare the forward difference of the sequence instead.
    #[arg(long)]
    pub delta: bool,
    #[arg(long)]
    pub anum: String,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub offset: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub shift: i128,
    #[arg(long, default_value = "0..40")]
    pub n: NRange,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long)]
    pub anum: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Series,
    Images,
    Verify,
    Conjectures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GfArg {
    A,
    B,
    C,
    Ad,
    Bd,
    Color,
    Q,
    ColorPow,
    QPow,
    ColorOdd,
    QOdd,
}

fn gf_of(arg: GfArg, d: u64) -> Gf {
    match arg {
        GfArg::A => Gf::A,
        GfArg::B => Gf::B,
        GfArg::C => Gf::C,
        GfArg::Ad => Gf::Ad(d),
        GfArg::Bd => Gf::Bd(d),
        GfArg::Color => Gf::Color,
        GfArg::Q => Gf::ColorCount,
        GfArg::ColorPow => Gf::ColorPow(d),
        GfArg::QPow => Gf::ColorPowCount(d),
        GfArg::ColorOdd => Gf::ColorOdd(d),
        GfArg::QOdd => Gf::ColorOddCount(d),
    }
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum)]
    pub what: ExportWhat,
    /// Generating function for `--what series`.
    #[arg(long, value_enum, default_value_t = GfArg::A)]
    pub gf: GfArg,
    #[arg(long, default_value_t = 2)]
    pub d: u64,
    #[arg(long, default_value_t = 2)]
    pub k: u64,
    /// Series order, image weight, or top of the verification range.
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub path: Option<PathBuf>,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse_with_config(args) {
        Ok(cli) => cli,
        Err(Parsed::Clap(e)) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
        Err(Parsed::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start workers: {e}");
            return EXIT_USAGE;
        }
    };
    let mut buf_out = Vec::new();
    let mut buf_err = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf_out, &mut buf_err));
    let _ = out.write_all(&buf_out);
    let _ = err.write_all(&buf_err);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Only a disagreement with reference data is a mathematical failure; every
/// other error means the request could not be carried out.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Integrity { .. } => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

enum Parsed {
    Clap(clap::Error),
    Lib(Error),
}

/// Parses once to find `--config`, then again with the config's keys added
/// for every flag the command line leaves unset.
fn parse_with_config(mut args: Vec<OsString>) -> std::result::Result<Cli, Parsed> {
    let command = Cli::command();
    let loose = command.clone().ignore_errors(true).try_get_matches_from(&args).map_err(Parsed::Clap)?;
    let Some(path) = loose.get_one::<PathBuf>("config").cloned() else {
        return Cli::try_parse_from(&args).map_err(Parsed::Clap);
    };
    let config = read_config(&path).map_err(Parsed::Lib)?;
    let (leaf_cmd, leaf_matches) = leaf(&command, &loose);
    for (key, value) in config {
        let flag = key.replace('_', "-");
        let by_flag = |a: &&clap::Arg| a.get_long() == Some(flag.as_str());
        let Some(arg) = leaf_cmd.get_arguments().find(by_flag).or_else(|| command.get_arguments().find(by_flag)) else {
            return Err(Parsed::Lib(Error::Parse {
                line: 0,
                message: format!("{}: unknown key {key:?} for this command", path.display()),
            }));
        };
        let id = arg.get_id().as_str();
        if leaf_matches.value_source(id) == Some(ValueSource::CommandLine) {
            continue;
        }
        if arg.get_action().takes_values() {
            args.push(format!("--{flag}={value}").into());
        } else if matches!(value.as_str(), "true" | "yes" | "1") {
            args.push(format!("--{flag}").into());
        }
    }
    let matches = command.try_get_matches_from(&args).map_err(Parsed::Clap)?;
    Cli::from_arg_matches(&matches).map_err(Parsed::Clap)
}

fn leaf<'a>(cmd: &'a clap::Command, matches: &'a ArgMatches) -> (&'a clap::Command, &'a ArgMatches) {
    match matches.subcommand() {
        Some((name, sub)) => match cmd.find_subcommand(name) {
            Some(sub_cmd) => leaf(sub_cmd, sub),
            None => (cmd, matches),
        },
        None => (cmd, matches),
    }
}

/// `key=value` lines; `#` comments and blank lines are ignored.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected key=value, got {line:?}"),
        })?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse { line: idx + 1, message: format!("key {:?} repeated", k.trim()) });
        }
    }
    Ok(out)
}

fn oeis_config(cli: &Cli) -> OeisConfig {
    OeisConfig {
        cache_dir: cli.oeis_cache.clone(),
        endpoint: cli.oeis_endpoint.clone(),
        network: cli.network,
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<output>", e)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a, cli.format, out),
        Command::Seq(a) => cmd_seq(a, cli.format, out),
        Command::Verify(a) => cmd_verify(a, cli.format, out),
        Command::Conjecture(a) => cmd_conjecture(a, cli.format, out, err),
        Command::Injectivity(a) => cmd_injectivity(a, cli.format, out, err),
        Command::Colors(a) => cmd_colors(a, cli.format, out),
        Command::Oeis(OeisCommand::Diff(a)) => cmd_oeis_diff(a, cli, out),
        Command::Oeis(OeisCommand::Fetch(a)) => {
            let b = oeis::fetch(&a.anum, &oeis_config(cli))?;
            writeln!(out, "{}: {} terms fetched", b.sequence_id, b.len()).map_err(io_err)?;
            Ok(EXIT_PASS)
        }
        Command::Export(a) => cmd_export(a, out),
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_enumerate(a: &EnumerateArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let family = PartitionFamily::with_kind(family_kind(a.family, a.d)?, a.n)?.with_min_length(a.min_len);
    let parts = enumerate(&family);
    let total = count(&family)?;
    debug_assert_eq!(total as usize, parts.len());
    let text = match format {
        Format::Table => {
            let mut s: String = parts.iter().map(|p| format!("{p}\n")).collect();
            s.push_str(&format!("count {total}\n"));
            s
        }
        Format::Csv => {
            let mut s = String::from("partition\n");
            s.extend(parts.iter().map(|p| format!("{}\n", csv_quote(&p.to_string()))));
            s
        }
        Format::Json => {
            let list: Vec<String> = parts.iter().map(ToString::to_string).collect();
            format!(
                "{}\n",
                json!({"n": a.n, "min_length": a.min_len, "count": total.to_string(), "partitions": list})
            )
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(EXIT_PASS)
}

fn cmd_seq(a: &SeqArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let routes: Vec<Route> = if a.routes.trim() == "all" {
        Route::ALL.into_iter().filter(|r| r.applies_to(a.id)).collect()
    } else {
        a.routes.split(',').map(str::parse).collect::<Result<_>>()?
    };
    let columns: Vec<Vec<i128>> = routes.iter().map(|&r| values(a.id, r, a.n.hi)).collect::<Result<_>>()?;
    let mut all_agree = true;
    let mut rows = Vec::new();
    for n in a.n.lo..=a.n.hi {
        let vals: Vec<i128> = columns.iter().map(|c| c[n]).collect();
        let agree = vals.windows(2).all(|w| w[0] == w[1]);
        all_agree &= agree;
        rows.push((n, vals, agree));
    }
    let names: Vec<String> = routes.iter().map(Route::to_string).collect();
    let text = match format {
        Format::Table | Format::Csv => {
            let sep = if format == Format::Csv { "," } else { "\t" };
            let mut s = format!("n{sep}{}{sep}agree\n", names.join(sep));
            for (n, vals, agree) in &rows {
                let v: Vec<String> = vals.iter().map(ToString::to_string).collect();
                s.push_str(&format!("{n}{sep}{}{sep}{}\n", v.join(sep), if *agree { "yes" } else { "NO" }));
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(n, vals, agree)| {
                    let v: Vec<String> = vals.iter().map(ToString::to_string).collect();
                    json!({"n": n, "values": v, "agree": agree})
                })
                .collect();
            format!("{}\n", json!({"sequence": a.id.to_string(), "routes": names, "rows": rows}))
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if all_agree { EXIT_PASS } else { EXIT_FAIL })
}

fn select_identities(spec: &str) -> Result<Vec<Identity>> {
    if spec.trim() == "all" {
        return Ok(Identity::catalog());
    }
    spec.split(',').map(str::parse).collect()
}

fn trim_rows(outcomes: &mut [IdentityOutcome], lo: usize) {
    for o in outcomes {
        for r in &mut o.readings {
            r.rows.retain(|row| row.n >= lo as i64);
        }
    }
}

fn describe_failure(row: Option<&ReportRow>) -> String {
    row.map_or(String::new(), |r| format!("{} n={}: {} != {}", r.identity_id, r.n, r.lhs, r.rhs))
}

fn cmd_verify(a: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let ids = select_identities(&a.id)?;
    let mut outcomes = verify_all(&ids, a.n.hi)?;
    trim_rows(&mut outcomes, a.n.lo);
    if let Some(path) = &a.csv {
        let csv = rows_to_csv(outcomes.iter().flat_map(IdentityOutcome::rows));
        fs::write(path, csv).map_err(|e| Error::io(path, e))?;
    }
    let passed = outcomes.iter().all(IdentityOutcome::passed);
    let text = match format {
        Format::Csv => rows_to_csv(outcomes.iter().flat_map(IdentityOutcome::rows)),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&outcomes).expect("reports serialize")),
        Format::Table => {
            let mut s = String::new();
            for o in &outcomes {
                for r in &o.readings {
                    s.push_str(&format!(
                        "{:<24} {:<6} pass={} fail={} skip={} {}\n",
                        r.identity_id,
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.count(crate::report::Status::Pass),
                        r.count(crate::report::Status::Fail),
                        r.count(crate::report::Status::Skipped),
                        describe_failure(r.first_failure()),
                    ));
                    if a.rows {
                        for row in &r.rows {
                            s.push_str(&format!("  n={} lhs={} rhs={} {}\n", row.n, row.lhs, row.rhs, row.status));
                        }
                    }
                    for note in &r.notes {
                        s.push_str(&format!("  note: {note}\n"));
                    }
                }
                if o.is_ambiguous() {
                    let surviving = o.surviving();
                    let verdict = match surviving.len() {
                        0 => "no reading survives".to_string(),
                        1 => format!("resolved: {}", surviving[0]),
                        _ => format!("{} readings survive: {}", surviving.len(), surviving.join(", ")),
                    };
                    s.push_str(&format!("{:<24} {verdict}\n", o.identity_id));
                }
            }
            s.push_str(&format!(
                "{} of {} identities hold\n",
                outcomes.iter().filter(|o| o.passed()).count(),
                outcomes.len()
            ));
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
}

fn select_conjectures(a: &ConjectureArgs) -> Result<Vec<Conjecture>> {
    let all = Conjecture::catalog(&a.k);
    let spec = a.id.trim();
    let picked: Vec<Conjecture> = all
        .into_iter()
        .filter(|c| spec == "all" || c.family().eq_ignore_ascii_case(spec) || c.to_string().eq_ignore_ascii_case(spec))
        .filter(|c| match (c, a.d) {
            (Conjecture::FloorTable { d }, Some(want)) => *d == want,
            _ => true,
        })
        .filter(|c| match (c, a.p) {
            (Conjecture::PrimeRegular { p }, Some(want)) | (Conjecture::Delta { which: 6, p, .. }, Some(want)) => {
                *p == want
            }
            (Conjecture::Delta { .. }, Some(_)) => false,
            _ => true,
        })
        .collect();
    if picked.is_empty() {
        return Err(Error::InvalidArgument(format!("no conjecture matches {spec:?}")));
    }
    Ok(picked)
}

fn write_counterexample(dir: Option<&Path>, cx: &Counterexample, err: &mut dyn Write) -> Result<()> {
    let body = serde_json::to_string_pretty(cx).expect("counterexamples serialize");
    match dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let name: String = cx
                .identity_id
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
                .collect();
            let path = dir.join(format!("{name}.json"));
            fs::write(&path, body).map_err(|e| Error::io(&path, e))
        }
        None => writeln!(err, "counterexample {body}").map_err(io_err),
    }
}

fn cmd_conjecture(a: &ConjectureArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let picked = select_conjectures(a)?;
    let table = match &a.table {
        Some(path) => FloorTable::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)?,
        None => FloorTable::parse(FLOOR_TABLE)?,
    };
    let range = a.n;
    let mut outcomes = verify_conjectures(&picked, |k| range.map_or(default_n_max(k), |r| r.hi), &table)?;
    let lo = range.map_or(0, |r| r.lo) as i64;
    for o in &mut outcomes {
        for r in std::iter::once(&mut o.primary).chain(o.secondary.iter_mut()) {
            r.rows.retain(|row| row.n >= lo);
        }
    }
    for o in &outcomes {
        if let Some(cx) = o.primary.counterexample.as_ref().filter(|_| !o.passed()) {
            write_counterexample(a.dump_dir.as_deref(), cx, err)?;
        }
    }
    let passed = outcomes.iter().all(ConjectureOutcome::passed);
    let text = match format {
        Format::Csv => rows_to_csv(outcomes.iter().flat_map(|o| o.primary.rows.iter())),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&outcomes).expect("reports serialize")),
        Format::Table => {
            let mut s = String::new();
            for o in &outcomes {
                let p = &o.primary;
                s.push_str(&format!(
                    "{:<20} {:<6} [{}] n<={} {}\n",
                    o.conjecture_id,
                    if o.passed() { "PASS" } else { "FAIL" },
                    p.reading,
                    p.rows.last().map_or(0, |r| r.n),
                    describe_failure(p.first_failure()),
                ));
                for note in &p.notes {
                    s.push_str(&format!("  note: {note}\n"));
                }
                for sec in &o.secondary {
                    s.push_str(&format!(
                        "  also [{}]: {} {}\n",
                        sec.reading,
                        if sec.passed() { "holds" } else { "fails" },
                        describe_failure(sec.first_failure()),
                    ));
                }
            }
            s.push_str(&format!(
                "{} of {} checks hold\n",
                outcomes.iter().filter(|o| o.passed()).count(),
                outcomes.len()
            ));
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_injectivity(a: &InjectivityArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let kind = family_kind(a.family, a.d)?;
    let filter: Option<&(dyn Fn(&crate::Partition) -> bool + Sync)> =
        if a.two_ones { Some(&at_least_two_ones) } else { None };
    let report = check_injectivity(kind, a.n.hi as i64, a.k, filter)?;
    let collision = report.first_collision.as_ref().map(|c| {
        json!({"n": c.n, "first": c.first.to_string(), "second": c.second.to_string(), "image": c.image.to_string()})
    });
    if let Some(c) = &report.first_collision {
        let cx = Counterexample {
            identity_id: format!("injectivity(k={})", a.k),
            n: c.n,
            lhs: 0,
            rhs: 0,
            witnesses: vec![format!("{} -> {}", c.first, c.image), format!("{} -> {}", c.second, c.image)],
        };
        write_counterexample(a.dump_dir.as_deref(), &cx, err)?;
    }
    let text = match format {
        Format::Json => format!(
            "{}\n",
            json!({"k": a.k, "n_max": a.n.hi, "sources_checked": report.sources_checked, "injective": report.passed(), "collision": collision})
        ),
        Format::Csv => format!(
            "k,n_max,sources_checked,injective\n{},{},{},{}\n",
            a.k,
            a.n.hi,
            report.sources_checked,
            report.passed()
        ),
        Format::Table => match &report.first_collision {
            None => format!(
                "pre_{} injective for n <= {} ({} sources)\n",
                a.k, a.n.hi, report.sources_checked
            ),
            Some(c) => format!(
                "collision at n = {}: pre_{}{} = pre_{}{} = {}\n",
                c.n, a.k, c.first, a.k, c.second, c.image
            ),
        },
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_colors(a: &ColorsArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let family = color_family(a.family, a.d);
    let list = enumerate_q(family, a.n)?;
    let via_binomials = count_q_via_binomials(family, a.n)?;
    let text = match format {
        Format::Table => {
            let mut s: String = list.iter().map(|q| format!("{q}\n")).collect();
            s.push_str(&format!("count {} (binomial sum {via_binomials})\n", list.len()));
            s
        }
        Format::Csv => {
            let mut s = String::from("colored_partition\n");
            s.extend(list.iter().map(|q| format!("{}\n", csv_quote(&q.to_string()))));
            s
        }
        Format::Json => {
            let l: Vec<String> = list.iter().map(ToString::to_string).collect();
            format!("{}\n", json!({"family": family.to_string(), "n": a.n, "count": l.len(), "partitions": l}))
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if via_binomials == list.len() as u128 { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_oeis_diff(a: &DiffArgs, cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let reference = oeis::load_with(&a.anum, &oeis_config(cli))?;
    let vals = values(a.seq, a.route, a.n.hi + 1)?;
    let computed: Vec<(i64, i128)> = (a.n.lo..=a.n.hi)
        .map(|n| {
            let v = if a.delta { delta(&vals, n).expect("one extra value computed") } else { vals[n] };
            (n as i64, v)
        })
        .collect();
    let report = oeis::diff(&computed, &reference, a.offset, a.shift);
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("diff serializes")),
        _ => {
            let mut s = format!(
                "{} vs {}(n{:+}){:+}: {} compared, {} mismatches\n",
                if a.delta { format!("delta {}", a.seq) } else { a.seq.to_string() },
                a.anum,
                a.offset,
                a.shift,
                report.compared,
                report.mismatches.len()
            );
            for m in &report.mismatches {
                s.push_str(&format!("  n={} computed={} reference={}\n", m.n, m.computed, m.reference));
            }
            s
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write) -> Result<i32> {
    let mut code = EXIT_PASS;
    let body = match a.what {
        ExportWhat::Series => gf_of(a.gf, a.d).series(a.n)?.to_bfile(),
        ExportWhat::Images => {
            let records = image_multiset(&PartitionFamily::all(a.n as i64), a.k)?;
            image_dump_jsonl(a.n as i64, a.k, &records)
        }
        ExportWhat::Verify => {
            let outcomes = verify_all(&Identity::catalog(), a.n)?;
            if !outcomes.iter().all(IdentityOutcome::passed) {
                code = EXIT_FAIL;
            }
            rows_to_csv(outcomes.iter().flat_map(IdentityOutcome::rows))
        }
        ExportWhat::Conjectures => {
            let table = FloorTable::parse(FLOOR_TABLE)?;
            let outcomes = verify_conjectures(&Conjecture::catalog(&[2, 3, 4]), default_n_max, &table)?;
            if !outcomes.iter().all(ConjectureOutcome::passed) {
                code = EXIT_FAIL;
            }
            rows_to_csv(outcomes.iter().flat_map(|o| o.primary.rows.iter()))
        }
    };
    match &a.path {
        Some(path) => fs::write(path, body).map_err(|e| Error::io(path, e))?,
        None => out.write_all(body.as_bytes()).map_err(io_err)?,
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("espart").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges() {
        assert_eq!("0..40".parse::<NRange>().unwrap(), NRange { lo: 0, hi: 40 });
        assert_eq!("7".parse::<NRange>().unwrap(), NRange { lo: 7, hi: 7 });
        assert!("5..2".parse::<NRange>().is_err());
    }

    #[test]
    fn enumerate_examples() {
        let (code, out, _) = run_str(&["enumerate", "--family", "all", "--n", "5", "--min-len", "3"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("count 4\n"));
        let (_, out, _) = run_str(&["enumerate", "--family", "binary", "--n", "0"]);
        assert_eq!(out, "()\ncount 1\n");
        let (_, out, _) = run_str(&["enumerate", "--family", "dary", "--d", "3", "--n", "4"]);
        assert_eq!(out, "(3,1)\n(1,1,1,1)\ncount 2\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["enumerate", "--family", "dary", "--d", "1", "--n", "4"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["seq", "--id", "c", "--routes", "recurrence"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["oeis", "fetch", "--anum", "A000123"]).0, EXIT_USAGE);
    }

    #[test]
    fn config_supplies_missing_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# defaults\nn = 4\nfamily=dary\nd=3\nformat=csv\n").unwrap();
        let (code, out, err) = run_str(&["enumerate", "--config", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out, "partition\n\"(3,1)\"\n\"(1,1,1,1)\"\n");
        let (_, out, _) = run_str(&["enumerate", "--config", path.to_str().unwrap(), "--d", "2"]);
        assert!(out.contains("\"(2,2)\""));
        fs::write(&path, "nonsense=1\n").unwrap();
        assert_eq!(run_str(&["enumerate", "--config", path.to_str().unwrap()]).0, EXIT_USAGE);
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = run_str(&["verify", "--id", "T4f", "--n", "0..20"]);
        assert_eq!(code, 0);
        assert!(out.contains("T4f"));
        let (code, out, _) = run_str(&["verify", "--id", "TDd.b(3)", "--n", "0..12"]);
        assert_eq!(code, 0);
        assert!(out.contains("resolved: b_{n-k},delta(d|k)"));
    }

    #[test]
    fn output_is_deterministic_across_worker_counts() {
        let a = run_str(&["seq", "--id", "b", "--n", "0..16", "--jobs", "1"]);
        let b = run_str(&["seq", "--id", "b", "--n", "0..16", "--jobs", "4"]);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}
