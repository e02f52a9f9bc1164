//! `tripart`: generate, assign, verify and schedule with three-part
//! Webster partitions.

mod input;
mod render;

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tripart::analysis::{
    discrepancy, empirical_error_densities, find_adjacent_pair_witness, find_optimality_witness,
    probe_violated_hypotheses, verify, AnalysisError, Check, Evaluation, Freq, VerifyOptions, WitnessKind,
};
use tripart::partition::{a_tilde, assign, b_tilde, c_tilde, DensityTriple};
use tripart::scheduler::{build_schedule, DemandSpec, ScheduleError};

use input::TripleSpec;

/// Largest index or rank accepted on the command line.
const MAX_INDEX: u64 = 1 << 40;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed")]
    Verification,
    #[error("invalid triple: condition `{clause}` violated; {detail}")]
    Triple { clause: &'static str, detail: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("{0}")]
    Schedule(#[from] ScheduleError),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Verification | CliError::Io(_) => 1,
            CliError::Triple { .. } | CliError::Input(_) => 2,
            CliError::Range(_) => 3,
            CliError::Schedule(_) => 4,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "tripart",
    version,
    about = "Partitions of the positive integers into one Webster and two almost-Webster sequences"
)]
struct Cli {
    /// Density of the exact Webster part, e.g. "sqrt(2)/4".
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Density of the B part, e.g. "sqrt(3)/8"; gamma = 1 - alpha - beta.
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    /// File of `alpha = ...` and `beta = ...` lines; inline values win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Seq {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// `m` in W_alpha and W_beta, `m+1` in W_gamma, `m+2` in W_alpha.
    CaseII,
    /// `m` in W_alpha and W_beta, `m+1` in W_alpha; reads alpha and beta
    /// as two free densities with alpha > 1/2.
    CaseI,
    /// Term construction on a triple violating the ordering conditions.
    Probe,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Terms of one part for ranks FROM..=TO.
    Terms {
        #[arg(long, value_enum)]
        seq: Seq,
        from: u64,
        to: u64,
    },
    /// Label and rule for each index FROM..=TO.
    Assign { from: u64, to: u64 },
    /// Run verification sweeps over 1..=N.
    Verify {
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        /// Comma-separated subset of partition, equivalence, quota,
        /// perturbation, sandwich, errors.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<Check>>,
        /// Corrupt b_tilde at this rank to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: Option<u64>,
    },
    /// Empirical error frequencies and mean squares against their limits.
    Stats {
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Step the fractional parts incrementally (default).
        #[arg(long, conflicts_with = "exact")]
        fast: bool,
        /// Recompute every index from scratch.
        #[arg(long)]
        exact: bool,
    },
    /// Search for a membership pattern ruling out two exact parts.
    Witness {
        #[arg(long, value_enum, default_value = "case-ii")]
        kind: Kind,
        #[arg(long, default_value_t = 100_000)]
        m: u64,
    },
    /// Fair schedule for three integer demands.
    Schedule {
        #[arg(required = true)]
        demands: Vec<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn check_range(from: u64, to: u64, allow_empty: bool) -> Result<(), CliError> {
    if from == 0 {
        return Err(CliError::Range("indices start at 1".into()));
    }
    if to > MAX_INDEX {
        return Err(CliError::Range(format!("{to} exceeds the supported maximum {MAX_INDEX}")));
    }
    if from > to && !(allow_empty && from == to + 1) {
        return Err(CliError::Range(format!("empty or reversed range {from}..={to}")));
    }
    Ok(())
}

fn check_n(n: u64) -> Result<(), CliError> {
    check_range(1, n, false)
}

fn terms(out: &mut impl Write, t: &DensityTriple, seq: Seq, from: u64, to: u64) -> Result<(), CliError> {
    check_range(from, to, false)?;
    writeln!(out, "n,term")?;
    for n in from..=to {
        let term = match seq {
            Seq::A => a_tilde(t, n),
            Seq::B => b_tilde(t, n).map_err(|e| CliError::Range(e.to_string()))?,
            Seq::C => c_tilde(t, n).map_err(|e| CliError::Range(e.to_string()))?,
        };
        writeln!(out, "{n},{term}")?;
    }
    Ok(())
}

fn assign_range(out: &mut impl Write, t: &DensityTriple, from: u64, to: u64) -> Result<(), CliError> {
    check_range(from, to, true)?;
    writeln!(out, "n,label,rule")?;
    for n in from..=to {
        let a = assign(t, n);
        writeln!(out, "{n},{},{}", a.label, a.rule)?;
    }
    Ok(())
}

fn run_verify(
    out: &mut impl Write,
    t: &DensityTriple,
    n: u64,
    checks: Option<Vec<Check>>,
    fault: Option<u64>,
) -> Result<(), CliError> {
    check_n(n)?;
    let checks = checks.unwrap_or_else(|| Check::ALL.to_vec());
    let opts = VerifyOptions { corrupt_b_tilde_at: fault };
    let outcomes = verify(t, n, &checks, &opts);
    for o in &outcomes {
        match &o.witness {
            None if o.passed => writeln!(out, "PASS {} ({} examined)", o.check, o.examined)?,
            None => writeln!(out, "FAIL {} ({} examined)", o.check, o.examined)?,
            Some((w, detail)) => writeln!(out, "FAIL {} at n = {w}: {detail}", o.check)?,
        }
    }
    if outcomes.iter().all(|o| o.passed) {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

fn freq_rows(out: &mut impl Write, name: &str, f: &Freq, pm: f64) -> Result<(), CliError> {
    for (v, target) in [(-1i8, pm), (0, 1.0 - 2.0 * pm), (1, pm)] {
        writeln!(out, "{name:<10} {v:>3}  {}  {target:.12}", render::rational(&f.ratio(v)))?;
    }
    Ok(())
}

fn stats(out: &mut impl Write, t: &DensityTriple, n: u64, eval: Evaluation) -> Result<(), CliError> {
    check_n(n)?;
    if !t.is_independent() {
        return Err(CliError::Triple {
            clause: "1, alpha, beta linearly independent over Q",
            detail: "the densities share a rational relation".into(),
        });
    }
    let rep = empirical_error_densities(t, n, eval);
    let disc = discrepancy(t, n)?;
    let th = &rep.theory;
    writeln!(out, "N = {n}")?;
    writeln!(out, "alpha = {}\nbeta = {}\ngamma = {}", t.alpha().value(), t.beta().value(), t.gamma().value())?;
    writeln!(out, "{:<10} {:>3}  {:<32}  theory", "quantity", "v", "empirical")?;
    freq_rows(out, "E_beta", &rep.e_beta, th.e_beta_pm)?;
    freq_rows(out, "E_gamma", &rep.e_gamma, th.e_gamma_pm)?;
    freq_rows(out, "b-b~", &rep.b_perturb, th.b_pm)?;
    freq_rows(out, "c-c~", &rep.c_perturb, th.c_pm)?;
    let ms = &rep.mean_squares;
    for (name, v, target) in [
        ("D_beta", &ms.d_beta_hat, th.d_beta),
        ("D_gamma", &ms.d_gamma_hat, th.d_gamma),
        ("Omega", &ms.omega_hat, th.omega),
        ("omega", &ms.omega_small_hat, th.omega_small),
    ] {
        writeln!(out, "{name:<10} {:>3}  {}  {target:.12}", "", render::rational(v))?;
    }
    writeln!(out, "{:<10} {:>3}  {}", "misplaced", "", render::rational(&ms.misplaced_hat))?;
    writeln!(out, "{:<10} {:>3}  {disc:.6}", "discrep.", "")?;
    Ok(())
}

fn witness(out: &mut impl Write, spec: &TripleSpec, kind: Kind, m: u64) -> Result<(), CliError> {
    check_n(m)?;
    let found = match kind {
        Kind::CaseII => find_optimality_witness(&spec.triple()?, WitnessKind::CaseII, m)?,
        Kind::CaseI => {
            let (a, b) = spec.pair()?;
            find_adjacent_pair_witness(&a, &b, m)?
        }
        Kind::Probe => {
            return match probe_violated_hypotheses(&spec.relaxed()?, m) {
                Some(p) => Ok(writeln!(out, "rank {}: c_tilde = {}, c = {}", p.rank, p.c_tilde, p.c)?),
                None => Ok(writeln!(out, "none up to {m}")?),
            };
        }
    };
    match found {
        Some(w) => writeln!(out, "m = {w}")?,
        None => writeln!(out, "none up to {m}")?,
    }
    Ok(())
}

fn schedule(out: &mut impl Write, demands: &[u64], format: Format) -> Result<(), CliError> {
    let s = build_schedule(&DemandSpec::from_slice(demands)?)?;
    match format {
        Format::Csv => render::write_csv(out, &s)?,
        Format::Json => render::write_json(out, &s)?,
    }
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let spec = TripleSpec::resolve(cli.alpha, cli.beta, cli.config.as_deref())?;
    match cli.command {
        Command::Terms { seq, from, to } => terms(out, &spec.triple()?, seq, from, to),
        Command::Assign { from, to } => assign_range(out, &spec.triple()?, from, to),
        Command::Verify { n, checks, inject_fault } => run_verify(out, &spec.triple()?, n, checks, inject_fault),
        Command::Stats { n, exact, .. } => {
            let eval = if exact { Evaluation::Independent } else { Evaluation::Incremental };
            stats(out, &spec.triple()?, n, eval)
        }
        Command::Witness { kind, m } => witness(out, &spec, kind, m),
        Command::Schedule { demands, format } => schedule(out, &demands, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout().lock());
    let res = run(cli, &mut out).and_then(|()| out.flush().map_err(CliError::from));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("tripart: {e}");
            ExitCode::from(e.code())
        }
    }
}
