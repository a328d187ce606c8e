//! `lcm`: certify, scan and synthesize from the command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcm_core::exec::Execution;
use lcm_core::fmt::g12;
use lcm_core::lcm::{
    auto_delta, certify, certify_corollary1, certify_theorem1, check_exact_polynomial, check_exact_sampled,
    check_necessary, default_strategy, LcmCertificate, Verdict,
};
use lcm_core::plant_file::parse_plant;
use lcm_core::positivity::{external_positivity, ExPos, ExPosVerdict, ExPosWitness};
use lcm_core::response::DEFAULT_SAMPLES;
use lcm_core::scan::ScanSpec;
use lcm_core::synthesis::{synthesize, Cost, SynthesisProblem, SynthesisResult, Tuning};
use lcm_core::{Complex64, Error, RationalTF};

mod exit {
    pub const CERTIFIED: u8 = 0;
    pub const REFUTED: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    pub const INFEASIBLE: u8 = 3;
    pub const SYNTHESIS_DOMAIN: u8 = 4;
    pub const VERIFICATION: u8 = 5;
    pub const USAGE: u8 = 64;
    pub const INVALID: u8 = 65;
    pub const NO_INPUT: u8 = 66;
    pub const CANT_CREATE: u8 = 73;
}

/// Step-response samples written by `synthesize`.
const STEP_SAMPLES: usize = 1000;

#[derive(Parser)]
#[command(name = "lcm", version, about = "LCM certification and monotonic-tracking synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a plant as LCM or externally positive.
    Certify(CertifyArgs),
    /// Sweep two pole parameters and emit a verdict CSV.
    Scan(ScanArgs),
    /// Synthesize a controller with a monotonic step response.
    Synthesize(SynthesizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Necessary conditions, sufficient certificates for mu = 1..3, then sampling.
    Auto,
    Necessary,
    Theorem1,
    Corollary1,
    Sampled,
    Polynomial,
    /// External positivity of the impulse response.
    Expos,
}

#[derive(Args)]
struct CertifyArgs {
    plant: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    #[arg(long, default_value_t = 1)]
    mu: u32,
    /// Shift; defaults to the automatic rule.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Sampling horizon for `sampled`.
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Commensurability rate for `polynomial`.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
}

#[derive(Args)]
struct ScanArgs {
    spec: PathBuf,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate cells on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SynthesizeArgs {
    plant: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    mu: u32,
    /// Number of real closed-loop poles.
    #[arg(long)]
    nr: Option<usize>,
    /// Shifted angle of one conjugate pole pair, in radians (repeatable).
    #[arg(long, allow_hyphen_values = true)]
    theta: Vec<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// `polezero`, `min-dominant` or `linear:a1,..;b1,..`.
    #[arg(long, default_value = "polezero")]
    cost: String,
    /// Step-response CSV destination.
    #[arg(long, default_value = "step_response.csv")]
    out: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(exit::NO_INPUT, format!("cannot read {}: {e}", path.display())))
}

fn located(path: &Path, e: Error, other: u8) -> Failure {
    match e {
        Error::Parse { line, column, message } => Failure::new(
            exit::USAGE,
            format!("{}:{line}:{column}: {message}", path.display()),
        ),
        Error::InvalidGrid(msg) => Failure::new(exit::INVALID, format!("invalid grid: {msg}")),
        e => Failure::new(other, e.to_string()),
    }
}

fn load_plant(path: &Path) -> Result<RationalTF, Failure> {
    parse_plant(&read_text(path)?).map_err(|e| located(path, e, exit::INVALID))
}

fn roots(r: &[Complex64]) -> String {
    r.iter()
        .map(|z| {
            if z.im == 0.0 {
                g12(z.re)
            } else {
                format!("{}{}{}i", g12(z.re), if z.im < 0.0 { "-" } else { "+" }, g12(z.im.abs()))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn coeffs(c: &[f64]) -> String {
    c.iter().map(|&x| g12(x)).collect::<Vec<_>>().join(" ")
}

fn lcm_report(cert: &LcmCertificate) -> (u8, String) {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", cert.verdict.label());
    let _ = writeln!(out, "method: {}", cert.method.label());
    if let Some(p) = cert.params {
        let _ = writeln!(out, "mu: {}", p.mu);
        let _ = writeln!(out, "delta: {}", g12(p.delta));
    }
    if let Some(w) = &cert.witness {
        let _ = writeln!(out, "witness: {w}");
    }
    let code = match cert.verdict {
        Verdict::Certified => exit::CERTIFIED,
        Verdict::Refuted => exit::REFUTED,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
    };
    (code, out)
}

fn expos_report(v: &ExPosVerdict) -> (u8, String) {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", v.verdict.label());
    let _ = writeln!(out, "method: {}", v.method.label());
    match v.witness {
        Some(ExPosWitness::Time { t, value, scaled }) => {
            let _ = writeln!(out, "witness: h({}) = {} (scaled {})", g12(t), g12(value), g12(scaled));
        }
        Some(ExPosWitness::Dirac { weight }) => {
            let _ = writeln!(out, "witness: impulse of weight {} at t = 0", g12(weight));
        }
        Some(ExPosWitness::Improper) => {
            let _ = writeln!(out, "witness: improper transfer function");
        }
        None => {}
    }
    let code = match v.verdict {
        ExPos::Positive | ExPos::PositiveSampled => exit::CERTIFIED,
        ExPos::NotPositive => exit::REFUTED,
    };
    (code, out)
}

fn cmd_certify(args: &CertifyArgs) -> Result<u8, Failure> {
    let tf = load_plant(&args.plant)?;
    if args.mu == 0 {
        return Err(Failure::new(exit::USAGE, "--mu must be positive"));
    }
    let delta = || args.delta.unwrap_or_else(|| auto_delta(&tf, args.mu));
    let cert = match args.method {
        Method::Expos => {
            let (code, text) = expos_report(&external_positivity(&tf));
            print!("{text}");
            return Ok(code);
        }
        Method::Auto => Ok(certify(&tf, &default_strategy())),
        Method::Necessary => Ok(check_necessary(&tf)),
        Method::Theorem1 => certify_theorem1(&tf, args.mu, delta()),
        Method::Corollary1 => certify_corollary1(&tf, args.mu, delta()),
        Method::Sampled => Ok(check_exact_sampled(&tf, args.tmax, args.samples)),
        Method::Polynomial => check_exact_polynomial(&tf, args.gamma),
    }
    .map_err(|e| Failure::new(exit::INVALID, e.to_string()))?;
    let (code, text) = lcm_report(&cert);
    print!("{text}");
    Ok(code)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::new(exit::CANT_CREATE, format!("cannot write {}: {e}", path.display())))
}

fn cmd_scan(args: &ScanArgs) -> Result<u8, Failure> {
    let spec = ScanSpec::parse(&read_text(&args.spec)?).map_err(|e| located(&args.spec, e, exit::INVALID))?;
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let csv = spec.run(exec).to_csv();
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(exit::CERTIFIED)
}

fn synthesis_report(problem: &SynthesisProblem, r: &SynthesisResult) -> String {
    let mut out = String::new();
    let auto = if problem.delta_is_auto() { " (auto)" } else { "" };
    let _ = writeln!(out, "delta: {}{auto}", g12(problem.delta()));
    let _ = writeln!(out, "mu: {}", problem.mu());
    let _ = writeln!(out, "epsilon: {}", g12(problem.epsilon()));
    let _ = writeln!(out, "f: {}", coeffs(r.f.coeffs()));
    let _ = writeln!(out, "g: {}", coeffs(r.g.coeffs()));
    let _ = writeln!(out, "kc: {}", g12(r.kc));
    let _ = writeln!(out, "closed-loop poles: {}", roots(&r.closed_loop_poles));
    let _ = writeln!(out, "sensitivity peak: {}", g12(r.sensitivity_peak));
    let _ = writeln!(out, "objective: {}", g12(r.diagnostics.objective));
    let _ = writeln!(out, "max violation: {}", g12(r.diagnostics.max_violation + 0.0));
    let _ = writeln!(out, "sylvester residual: {}", g12(r.sylvester_residual));
    out
}

fn cmd_synthesize(args: &SynthesizeArgs) -> Result<u8, Failure> {
    let plant = load_plant(&args.plant)?;
    let cost: Cost = args
        .cost
        .parse()
        .map_err(|e: Error| Failure::new(exit::USAGE, e.to_string()))?;
    let tuning = Tuning {
        mu: args.mu,
        delta: args.delta,
        n_r: args.nr,
        pair_angles: args.theta.clone(),
        epsilon: args.epsilon,
        cost,
    };
    let fail = |e: Error| match e {
        Error::Infeasible(info) => Failure::new(exit::INFEASIBLE, format!("infeasible: {info}")),
        Error::Verification(msg) => Failure::new(exit::VERIFICATION, format!("verification failed: {msg}")),
        e => Failure::new(exit::SYNTHESIS_DOMAIN, e.to_string()),
    };
    let problem = SynthesisProblem::from_tuning(plant, &tuning).map_err(fail)?;
    let result = synthesize(&problem).map_err(fail)?;
    let samples = result.step_samples(STEP_SAMPLES).map_err(fail)?;
    let mut csv = String::from("t,y\n");
    for (t, y) in samples {
        let _ = writeln!(csv, "{},{}", g12(t), g12(y));
    }
    write_file(&args.out, &csv)?;
    print!("{}", synthesis_report(&problem, &result));
    println!("step response: {}", args.out.display());
    Ok(exit::CERTIFIED)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Certify(a) => cmd_certify(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Synthesize(a) => cmd_synthesize(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
