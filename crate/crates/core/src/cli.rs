//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{parse_config, parse_seed, Format, PartialConfig};
use crate::criteria::{self, Verdict};
use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::oracle::{run_verification, OracleConfig, OracleReport};
use crate::table::build_table;
use crate::weights::WeightSequence;

/// Environment variable naming the directory for outputs without `--out`.
pub const OUT_DIR_ENV: &str = "KSPECTRA_OUT_DIR";

/// Exit code for usage and runtime errors.
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "kspectra", version, about = "Spectral data and criteria for multiplication tuples on classical Cartan domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// key = value file; flags override its entries
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// I:n,m | II:n | III:n | IV:d
    #[arg(long, global = true)]
    pub domain: Option<String>,
    /// bergman:ν | hardy | classical-bergman | table:PATH | rule:NAME
    #[arg(long, global = true)]
    pub weights: Option<String>,
    #[arg(long, global = true)]
    pub weights2: Option<String>,
    #[arg(long, global = true)]
    pub max_weight: Option<u64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// "a,b" or "a" (expands to a,a+1)
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// json | csv | pretty
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print (r, a, b, d) and the ambient coordinates
    Invariants,
    /// Tabulate τ, δ and the row gap per signature
    Table,
    /// Run one decision criterion (exit 0 Holds, 1 Fails, 2 EvidenceOnly)
    Check {
        #[arg(value_enum)]
        criterion: CriterionName,
    },
    /// Compare oracle measurements with the closed forms
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionName {
    Bounded,
    ClosedRange,
    EssNormal,
    HardyIdentity,
    UnitaryEquiv,
    Similar,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub domain: Option<String>,
    pub weights: Option<String>,
    pub weights2: Option<String>,
    pub max_weight: u64,
    pub tol: f64,
    pub seed: (u64, u64),
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            domain: cli.domain.clone(),
            weights: cli.weights.clone(),
            weights2: cli.weights2.clone(),
            max_weight: cli.max_weight,
            tol: cli.tol,
            seed: cli.seed.as_deref().map(parse_seed).transpose()?,
            format: cli.format.as_deref().map(str::parse).transpose()?,
            out: cli.out.clone(),
        };
        let m = file.merged(flags);
        let tol = m.tol.unwrap_or(1e-8);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::ParameterBound(format!("tolerance must be positive, got {tol}")));
        }
        Ok(RunConfig {
            domain: m.domain,
            weights: m.weights,
            weights2: m.weights2,
            max_weight: m.max_weight.unwrap_or(4),
            tol,
            seed: m.seed.unwrap_or((1, 2)),
            format: m.format.unwrap_or_default(),
            out: m.out,
        })
    }

    fn domain(&self) -> Result<DomainSpec> {
        self.domain.as_deref().ok_or_else(|| Error::ParameterBound("missing --domain".into()))?.parse()
    }

    fn weights(&self, spec: &DomainSpec) -> Result<WeightSequence> {
        WeightSequence::parse(self.weights.as_deref().ok_or_else(|| Error::ParameterBound("missing --weights".into()))?, spec)
    }

    fn weights2(&self, spec: &DomainSpec) -> Result<WeightSequence> {
        WeightSequence::parse(self.weights2.as_deref().ok_or_else(|| Error::ParameterBound("missing --weights2".into()))?, spec)
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn file_stem(parts: &[&str]) -> String {
    parts
        .iter()
        .filter(|p| !p.is_empty())
        .map(|p| p.chars().map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' }).collect::<String>())
        .collect::<Vec<_>>()
        .join("-")
}

/// Writes to `--out`, else to the output directory from the environment, else to `stdout`.
fn emit(cfg: &RunConfig, payload: &str, stem: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let target = match (&cfg.out, &dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => {
            let ext = match cfg.format {
                Format::Json => "json",
                Format::Csv => "csv",
                Format::Pretty => "txt",
            };
            Some(d.join(format!("{stem}.{ext}")))
        }
        (None, None) => None,
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(&path, payload)?;
            writeln!(stderr, "wrote {}", display(&path))?;
        }
        None => stdout.write_all(payload.as_bytes())?,
    }
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn invariants(cfg: &RunConfig) -> Result<String> {
    let spec = cfg.domain()?;
    let coords: Vec<String> = spec.ambient_coordinates().iter().map(ToString::to_string).collect();
    let a = crate::number::Value::Exact(spec.a().clone());
    Ok(match cfg.format {
        Format::Json => json(&serde_json::json!({
            "domain": spec,
            "r": spec.rank(),
            "a": a,
            "b": spec.b(),
            "d": spec.dim(),
            "coordinates": coords,
        }))?,
        Format::Csv => format!("domain,r,a,b,d\n{},{},{},{},{}\n", spec, spec.rank(), a, spec.b(), spec.dim()),
        Format::Pretty => format!(
            "{spec}\n  r = {}\n  a = {a}\n  b = {}\n  d = {}\n  coordinates: {}\n",
            spec.rank(),
            spec.b(),
            spec.dim(),
            coords.join(" ")
        ),
    })
}

fn verdict_text(v: &Verdict, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json(v)?,
        Format::Csv => {
            let opt = |x: &Option<crate::number::Value>| x.as_ref().map(|y| crate::number::round15(y.to_f64()).to_string()).unwrap_or_default();
            let (ws, wv) = match &v.witness {
                Some(w) => (w.signature.to_string(), opt(&Some(w.value.clone()))),
                None => (String::new(), String::new()),
            };
            format!(
                "criterion,decision,truncation,bound,witness_signature,witness_value\n{},{},{},{},\"{}\",{}\n",
                v.criterion,
                v.decision,
                v.truncation.map(|t| t.to_string()).unwrap_or_default(),
                opt(&v.bound),
                ws,
                wv
            )
        }
        Format::Pretty => {
            let mut out = format!("{}: {}\n", v.criterion, v.decision);
            if let Some(t) = v.truncation {
                let _ = writeln!(out, "  truncation |s| ≤ {t}");
            }
            if let Some(b) = &v.bound {
                let _ = writeln!(out, "  bound {b}");
            }
            if let Some(w) = &v.witness {
                let _ = writeln!(out, "  witness {} = {}", w.signature, w.value);
            }
            if let Some([lo, hi]) = &v.envelope {
                let _ = writeln!(out, "  envelope [{lo}, {hi}]");
            }
            if let Some(s) = v.slope {
                let _ = writeln!(out, "  slope {s}");
            }
            for n in &v.notes {
                let _ = writeln!(out, "  {n}");
            }
            out
        }
    })
}

fn check(cfg: &RunConfig, name: CriterionName) -> Result<Verdict> {
    let spec = cfg.domain()?;
    match name {
        CriterionName::Bounded => criteria::boundedness_sup(&cfg.weights(&spec)?, cfg.max_weight),
        CriterionName::ClosedRange => criteria::closed_range_inf(&cfg.weights(&spec)?, cfg.max_weight),
        CriterionName::EssNormal => {
            let w = cfg.weights(&spec)?;
            let nu = w.parametric_nu().ok_or_else(|| Error::Incompatible(format!("ess-normal needs parametric weights, got {w}")))?;
            criteria::essential_normality(&nu, &spec)
        }
        CriterionName::HardyIdentity => criteria::hardy_identity_check(&spec, cfg.max_weight),
        CriterionName::UnitaryEquiv => criteria::unitary_equivalence(&cfg.weights(&spec)?, &cfg.weights2(&spec)?, cfg.max_weight),
        CriterionName::Similar => criteria::similarity(&cfg.weights(&spec)?, &cfg.weights2(&spec)?, cfg.max_weight),
    }
}

fn report_text(r: &OracleReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => json(r)?,
        Format::Csv => {
            let rank = r.domain.rank();
            let mut out: Vec<String> = (1..=rank).map(|j| format!("s{j}")).collect();
            out.extend(
                ["dim", "tau_measured", "tau_formula", "delta_measured", "delta_conjecture", "delta_source", "max_offscalar_residual"]
                    .map(String::from),
            );
            let mut text = out.join(",") + "\n";
            for p in &r.per_signature {
                let mut c: Vec<String> = p.s.parts().iter().map(u32::to_string).collect();
                c.push(p.dim.to_string());
                c.push(p.tau_measured.to_string());
                c.push(crate::number::round15(p.tau_formula.to_f64()).to_string());
                c.push(p.delta_measured.to_string());
                c.push(crate::number::round15(p.delta_conjecture.to_f64()).to_string());
                c.push(p.delta_source.to_string());
                c.push(p.max_offscalar_residual.to_string());
                text += &(c.join(",") + "\n");
            }
            text
        }
        Format::Pretty => {
            let mut out = format!("{} {} seeds {},{}\n", r.domain, r.weights, r.seed[0], r.seed[1]);
            for p in &r.per_signature {
                let _ = writeln!(
                    out,
                    "  {:<10} dim {:>3}  tau {:<20} ({})  delta {:<20} ({})  residual {:e}",
                    p.s.to_string(),
                    p.dim,
                    p.tau_measured,
                    p.tau_formula,
                    p.delta_measured,
                    p.delta_conjecture,
                    p.max_offscalar_residual
                );
            }
            let _ = writeln!(out, "max deviation {:e}, max residual {:e}", r.max_deviation(), r.max_residual());
            let _ = writeln!(out, "{}", if r.passed() { "PASS" } else { "FAIL" });
            for f in &r.failures {
                let _ = writeln!(out, "  {f}");
            }
            out
        }
    })
}

/// Runs a parsed command; returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::resolve(cli)?;
    let domain = cfg.domain.clone().unwrap_or_default();
    let weights = cfg.weights.clone().unwrap_or_default();
    match &cli.command {
        Command::Invariants => {
            emit(&cfg, &invariants(&cfg)?, &file_stem(&["invariants", &domain]), stdout, stderr)?;
            Ok(0)
        }
        Command::Table => {
            let spec = cfg.domain()?;
            let t = build_table(&cfg.weights(&spec)?, cfg.max_weight)?;
            let text = match cfg.format {
                Format::Json => json(&t)?,
                Format::Csv => t.to_csv(),
                Format::Pretty => t.to_pretty(),
            };
            emit(&cfg, &text, &file_stem(&["table", &domain, &weights]), stdout, stderr)?;
            Ok(0)
        }
        Command::Check { criterion } => {
            let v = check(&cfg, *criterion)?;
            let name = criterion.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default();
            emit(&cfg, &verdict_text(&v, cfg.format)?, &file_stem(&["check", &name, &domain, &weights]), stdout, stderr)?;
            Ok(v.decision.exit_code())
        }
        Command::Verify => {
            let spec = cfg.domain()?;
            let w = cfg.weights(&spec)?;
            let oracle = OracleConfig { seeds: cfg.seed, ..OracleConfig::default() };
            let r = run_verification(&spec, &w, cfg.max_weight, cfg.tol, &oracle)?;
            emit(&cfg, &report_text(&r, cfg.format)?, &file_stem(&["verify", &domain, &weights]), stdout, stderr)?;
            Ok(if r.passed() { 0 } else { 1 })
        }
    }
}

/// Parses arguments and runs; errors go to `stderr` with exit code [`EXIT_ERROR`].
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
