//! Command-line front end. `main.rs` only forwards to [`main_with_args`].
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors
//! (bad flags, unknown family syntax, capacity exceeded, unwritable output).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::decimal::Fixed;
use crate::density::{
    estimate_density, longitudinal_asymptote, longitudinal_convergence_check, seconds_since, DensityConfig, DensityValue,
    RatioSample,
};
use crate::error::{Error, Result};
use crate::motzkin::{count_paths, enumerate_paths, PathSpec, Step};
use crate::sequences::{cat_transform, BigSeq};
use crate::subgroupoid::{semigroup_info, GenFamily};
use crate::term::{enumerate_terms_capped, DEFAULT_ENUMERATION_CAP};
use crate::verify::{verify_with, Scope, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "freemagma", version, about = "Counting and density tools for subgroupoids of the cyclic free magma")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every term of length N in encoding order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Largest length allowed.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Counting sequence |N|_n, n = 1..=N, of a family such as
    /// "finite:[(1+1),(1+(1+1))]", "shifted:(1+1)", "longitudinal:[2,3]",
    /// "seqfile:gens.csv" or "full".
    Count {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Catalan transform of a sequence CSV (header n,value).
    Transform {
        #[arg(long)]
        input: PathBuf,
        /// Truncate or zero-pad the input to this many entries.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the density of N in M from growth ratios up to NMAX.
    Density {
        #[arg(long)]
        n: String,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = crate::density::CI_HORIZON)]
        nmax: usize,
        /// Significant digits reported (at least 6).
        #[arg(long, default_value_t = 30)]
        precision: u32,
        /// Spread below which a window of accelerated values counts as settled.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Directory for trace.csv, accelerated.csv and report.json.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Residue-class asymptotes of the preimage of the semigroup <A>.
    Longitudinal {
        /// Comma-separated generators, e.g. 2,3.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u64>,
        /// Also compare the empirical ratio at this horizon.
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value_t = 2e-3)]
        tolerance: f64,
    },
    /// Count (or list) Motzkin paths with forbidden step pairs and coloured steps.
    Motzkin {
        #[arg(long)]
        length: usize,
        /// Comma-separated forbidden pairs, e.g. FU,FF.
        #[arg(long, default_value = "")]
        forbid: String,
        /// Colour multiplicities, e.g. F=2.
        #[arg(long = "color", value_parser = parse_color)]
        colors: Vec<(Step, u32)>,
        /// Print every path instead of the count.
        #[arg(long)]
        list: bool,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long)]
        scope: Option<String>,
        /// JSON file with suite settings; --scope overrides its scope.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

fn parse_color(s: &str) -> std::result::Result<(Step, u32), String> {
    let (step, k) = s.split_once('=').ok_or("expected STEP=K, e.g. F=2")?;
    let step = match step.trim() {
        "U" => Step::U,
        "D" => Step::D,
        "F" => Step::F,
        other => return Err(format!("unknown step {other:?}")),
    };
    let k: u32 = k.trim().parse().map_err(|e| format!("bad multiplicity: {e}"))?;
    if k == 0 {
        return Err("multiplicity must be at least 1".into());
    }
    Ok((step, k))
}

/// Outcome of a successful command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Enumerate { n, cap, format, output } => {
            if n == 0 {
                return Err(Error::ZeroLength);
            }
            check_output(output.as_deref())?;
            let terms = enumerate_terms_capped(n, cap)?;
            let body = match format {
                Format::Plain => terms.iter().map(|t| format!("{t}\n")).collect(),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["index", "term", "encoding"])?;
                    for (i, t) in terms.iter().enumerate() {
                        w.write_record([(i + 1).to_string(), t.to_string(), t.encode().to_string()])?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("utf-8 csv")
                }
                Format::Json => {
                    let list: Vec<_> =
                        terms.iter().map(|t| json!({ "term": t.to_string(), "encoding": t.encode().to_string() })).collect();
                    to_json(&json!({ "length": n, "count": terms.len(), "terms": list }))?
                }
            };
            emit(out, output.as_deref(), &body)?;
        }
        Command::Count { family, n, format, output } => {
            if n == 0 {
                return Err(Error::ZeroLength);
            }
            check_output(output.as_deref())?;
            let fam: GenFamily = family.parse()?;
            let seq = fam.counting_sequence(n)?;
            emit(out, output.as_deref(), &render_seq(&seq, format, &fam.to_string())?)?;
        }
        Command::Transform { input, n, format, output } => {
            check_output(output.as_deref())?;
            let mut seq = BigSeq::read_csv_file(&input)?;
            if let Some(n) = n {
                seq = seq.resized(n);
            }
            let label = format!("Cat({})", input.display());
            emit(out, output.as_deref(), &render_seq(&cat_transform(&seq), format, &label)?)?;
        }
        Command::Density { n, m, nmax, precision, tolerance, out_dir } => {
            density_command(out, &n, &m, nmax, precision, tolerance, out_dir.as_deref())?;
        }
        Command::Longitudinal { a, nmax, tolerance } => {
            let info = semigroup_info(&a)?;
            let asym = longitudinal_asymptote(&a)?;
            writeln!(out, "gcd = {}, reduced generators = {:?}, frobenius = {}", info.gcd, info.reduced_generators, info.frobenius)?;
            for (r, q) in asym.per_residue.iter().enumerate() {
                writeln!(out, "n ≡ {r} (mod {}): {q}", info.gcd)?;
            }
            writeln!(out, "residue mean = {}", asym.mean())?;
            if let Some(n_max) = nmax {
                let report = longitudinal_convergence_check(&a, n_max, tolerance)?;
                for c in &report.residues {
                    writeln!(out, "n = {}: empirical {:.6} expected {:.6} error {:.2e}", c.n, c.empirical, c.expected, c.error)?;
                }
                if !report.passed() {
                    writeln!(out, "FAIL: error above {tolerance}")?;
                    return Ok(Status::VerificationFailed);
                }
            }
        }
        Command::Motzkin { length, forbid, colors, list } => {
            let mut spec = PathSpec::plain(length).forbid_list(&forbid)?;
            for (step, k) in colors {
                spec = spec.color(step, k)?;
            }
            if list {
                for p in enumerate_paths(&spec)? {
                    writeln!(out, "{}", p.render(&spec))?;
                }
            } else {
                writeln!(out, "{}", count_paths(&spec))?;
            }
        }
        Command::Verify { scope, config, format } => {
            let mut cfg = match &config {
                Some(path) => serde_json::from_str::<VerifyConfig>(&fs::read_to_string(path)?)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
                None => VerifyConfig::default(),
            };
            if let Some(s) = scope {
                cfg.scope = s.parse::<Scope>()?;
            }
            let report = verify_with(&cfg);
            match format {
                Format::Json => writeln!(out, "{}", to_json(&report)?)?,
                _ => {
                    for c in &report.checks {
                        let mark = if c.passed { "PASS" } else { "FAIL" };
                        writeln!(out, "{mark} {} [{}] {} ({:.2}s)", c.name, c.source, c.detail, c.runtime_seconds)?;
                    }
                }
            }
            if !report.passed() {
                return Ok(Status::VerificationFailed);
            }
        }
    }
    Ok(Status::Success)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn render_seq(seq: &BigSeq, format: Format, label: &str) -> Result<String> {
    Ok(match format {
        Format::Plain => seq.iter().map(|(n, v)| format!("n={n} {v}\n")).collect(),
        Format::Csv => {
            let mut buf = Vec::new();
            seq.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("utf-8 csv")
        }
        Format::Json => {
            let values: Vec<String> = seq.entries().iter().map(ToString::to_string).collect();
            to_json(&json!({ "family": label, "n_max": seq.len(), "values": values }))?
        }
    })
}

/// Fails early when `path`'s directory cannot take a new file.
fn check_output(path: Option<&Path>) -> Result<()> {
    if let Some(path) = path {
        check_dir(parent_dir(path))?;
    }
    Ok(())
}

fn parent_dir(path: &Path) -> &Path {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn check_dir(dir: &Path) -> Result<()> {
    tempfile::NamedTempFile::new_in(dir)
        .map(drop)
        .map_err(|e| Error::Config(format!("output directory {} is not writable: {e}", dir.display())))
}

/// Writes `body` to `path` through a temporary file and rename, or to `out`.
fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(path) => write_atomic(path, body.as_bytes()),
        None => Ok(out.write_all(body.as_bytes())?),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(parent_dir(path))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn samples_csv(samples: &[RatioSample], header: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", header])?;
    for s in samples {
        w.write_record([s.n.to_string(), s.value.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("utf-8 csv"))
}

fn density_command(
    out: &mut dyn Write,
    n: &str,
    m: &str,
    nmax: usize,
    precision: u32,
    tolerance: f64,
    out_dir: Option<&Path>,
) -> Result<()> {
    let start = Instant::now();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        check_dir(dir)?;
    }
    let (fam_n, fam_m): (GenFamily, GenFamily) = (n.parse()?, m.parse()?);
    let config = DensityConfig::new(nmax).with_precision(precision).with_tolerance(tolerance);
    let est = estimate_density(&fam_n, &fam_m, &config)?;

    let sig = |v: &Fixed| v.to_significant(precision);
    let (status, value, per_residue) = match &est.value {
        DensityValue::Converged { value } => ("converged", Some(sig(value)), None),
        DensityValue::Inconclusive { last } => ("inconclusive", last.as_ref().map(sig), None),
        DensityValue::Oscillating { per_residue, .. } => {
            ("oscillating", None, Some(per_residue.iter().map(sig).collect::<Vec<_>>()))
        }
    };
    let (trace_path, accel_path) = match out_dir {
        Some(dir) => {
            let (t, a) = (dir.join("trace.csv"), dir.join("accelerated.csv"));
            write_atomic(&t, samples_csv(&est.trace, "ratio")?.as_bytes())?;
            write_atomic(&a, samples_csv(&est.accelerated, "accelerated")?.as_bytes())?;
            (Some(t.display().to_string()), Some(a.display().to_string()))
        }
        None => (None, None),
    };
    let mut report = json!({
        "family_n": fam_n.to_string(),
        "family_m": fam_m.to_string(),
        "n_max": nmax,
        "precision": precision,
        "status": status,
        "trace_csv_path": trace_path,
        "accelerated_csv_path": accel_path,
        "oscillation_period": est.oscillation_period,
        "diagnostics": est.diagnostics,
        "runtime_seconds": seconds_since(start),
    });
    match per_residue {
        Some(p) => report["per_residue"] = json!(p),
        None => report["value"] = json!(value),
    }
    let body = to_json(&report)?;
    if let Some(dir) = out_dir {
        write_atomic(&dir.join("report.json"), body.as_bytes())?;
    }
    out.write_all(body.as_bytes())?;
    Ok(())
}
