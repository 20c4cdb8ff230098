use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tensor_sos::generators::{example51, example52, example53, example54, random_class, StructuredClass};
use tensor_sos::io::{parse_any, parse_rational, write_tensor};
use tensor_sos::repro::{run_examples, run_pd_suite, ExamplesConfig, PdSuiteConfig, PdSuiteReport, ReproRow};
use tensor_sos::sos::{certify_sos, sos_rank_bounds, Blockwise, SosOptions, SosOutcome};
use tensor_sos::spectral::{
    generate_procedure1, is_positive_definite, min_h_eigenvalue, BlockMethod, EigMinOptions, EigMinResult,
    OracleOptions, PdOptions, PdReport, PdVerdict,
};
use tensor_sos::structured::classify_all;
use tensor_sos::tensor::special::{all_one, cauchy, identity, partial_all_one};
use tensor_sos::tensor::SymmetricTensor;
use tensor_sos::Error;

const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "tensor-sos", version, about = "SOS certificates and H-eigenvalues of even-order symmetric tensors")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Primal feasibility tolerance of the SDP solver.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = BlockMode::Auto)]
    blockwise: BlockMode,
    /// Random starts of the brute-force minimizer (default 50 n).
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Output file (generated tensor, or certificate for `sos`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BlockMode {
    Auto,
    On,
    Off,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a tensor against every structured class.
    Classify { file: PathBuf },
    /// Search for a sum-of-squares decomposition.
    Sos { file: PathBuf },
    /// Smallest H-eigenvalue.
    Eigmin {
        file: PathBuf,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
    /// Positive definiteness of the associated form.
    Pd {
        file: PathBuf,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
    /// Write a named or random tensor.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Rerun the worked examples or the definiteness benchmark.
    Repro {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Args, Debug)]
struct SpectralArgs {
    /// Solve blocks with one mixed term in closed form.
    #[arg(long)]
    closed_form: bool,
    /// Skip the brute-force comparison.
    #[arg(long)]
    no_oracle: bool,
    /// Largest dimension handed to the brute-force minimizer.
    #[arg(long, default_value_t = 8)]
    oracle_max_dim: usize,
    /// Eigenvalue margin required to call a form positive definite.
    #[arg(long, default_value_t = 1e-6)]
    pd_tol: f64,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Identity {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    AllOne {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// All-one on the index set `--set` (1-based), zero elsewhere.
    PartialAllOne {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Cauchy tensor of a generating vector (rationals allowed).
    Cauchy {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        c: Vec<String>,
    },
    Example51,
    Example52 {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    Example53 {
        #[arg(long)]
        m: usize,
    },
    Example54 {
        #[arg(long)]
        n: usize,
    },
    Procedure1 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "big-m")]
        big_m: f64,
    },
    RandomClass {
        /// cauchy, weak-diag, b0, double-b, quasi-double-b0, mb0, h-nonneg,
        /// psd-z or psd-extended-z.
        #[arg(long)]
        class: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Smallest H-eigenvalues of the worked examples against known values.
    Examples {
        /// Smaller instances only.
        #[arg(long)]
        quick: bool,
    },
    /// Definiteness verdicts on random instances with known answers.
    PdTest {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        s: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long = "big-m", default_value_t = 100.0)]
        big_m: f64,
    },
}

/// Failure that maps to an exit code.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::InvalidParameter(_)
            | Error::IndexOutOfRange { .. }
            | Error::OddOrder(_)
            | Error::UnsupportedOrder(_)
            | Error::OrderMismatch { .. }
            | Error::DimensionMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { file } => classify(cli, file),
        Command::Sos { file } => sos(cli, file),
        Command::Eigmin { file, spectral } => eigmin(cli, file, spectral),
        Command::Pd { file, spectral } => pd(cli, file, spectral),
        Command::Gen { kind } => generate(cli, kind),
        Command::Repro { suite } => repro(cli, suite),
    }
}

fn read_tensor(path: &Path) -> Result<SymmetricTensor<BigRational>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_any(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn write_stdout(s: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Runtime(e.to_string())),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    match cli.format {
        Format::Json => {
            let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
            write_stdout(&format!("{s}\n"))?;
        }
        Format::Text => write_stdout(&text())?,
    }
    Ok(())
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn sos_options(cli: &Cli) -> SosOptions {
    let mut o = SosOptions::default();
    o.sdp.feas_tol = cli.tol;
    o.blockwise = match cli.blockwise {
        BlockMode::Auto => Blockwise::Auto,
        BlockMode::On => Blockwise::On,
        BlockMode::Off => Blockwise::Off,
    };
    o
}

fn oracle_options(cli: &Cli, args: &SpectralArgs) -> OracleOptions {
    OracleOptions {
        restarts: cli.restarts,
        seed: cli.seed,
        max_dim: args.oracle_max_dim,
        ..OracleOptions::default()
    }
}

fn eig_options(cli: &Cli, args: &SpectralArgs) -> EigMinOptions {
    EigMinOptions {
        sos: sos_options(cli),
        closed_form_single_term: args.closed_form,
        certificate: false,
        oracle: (!args.no_oracle).then(|| oracle_options(cli, args)),
    }
}

fn classify(cli: &Cli, file: &Path) -> Outcome {
    let a = read_tensor(file)?.to_f64();
    let report = classify_all(&a)?;
    emit(cli, &report, || report.to_text())?;
    Ok(0)
}

#[derive(Serialize)]
struct SosSummary<'a> {
    status: &'static str,
    rank_estimate: Option<usize>,
    lambda_bound: f64,
    bd_bound: Option<usize>,
    residual: Option<f64>,
    outcome: &'a SosOutcome,
}

fn sos(cli: &Cli, file: &Path) -> Outcome {
    let exact = read_tensor(file)?;
    let a = exact.to_f64();
    if a.order() % 2 != 0 {
        return Err(Failure::Usage(format!("order {} is odd", a.order())));
    }
    let f = a.to_polynomial()?;
    let outcome = certify_sos(&f, &sos_options(cli))?;
    let cert = outcome.certificate();
    let bounds = sos_rank_bounds(&a, cert.map_or(0, |c| c.rank_estimate));
    let status = match &outcome {
        SosOutcome::Certified(_) => "certified",
        SosOutcome::NotCertified { .. } => "not SOS",
        SosOutcome::Inconclusive { .. } => "inconclusive",
    };
    let summary = SosSummary {
        status,
        rank_estimate: cert.map(|c| c.rank_estimate),
        lambda_bound: bounds.lambda,
        bd_bound: bounds.bd,
        residual: cert.map(|c| c.residual),
        outcome: &outcome,
    };
    if let (Some(path), Some(c)) = (&cli.out, cert) {
        let s = serde_json::to_string_pretty(c).map_err(|e| Failure::Runtime(e.to_string()))?;
        write_out(path, &s)?;
    }
    emit(cli, &summary, || {
        let mut s = match &outcome {
            SosOutcome::Certified(c) => format!(
                "certified: {} squares, residual {:.2e}, Gram min eigenvalue {:.2e}\n",
                c.rank_estimate, c.residual, c.min_eigenvalue
            ),
            SosOutcome::NotCertified { evidence } => format!(
                "not SOS: separating functional takes value {:.6e} on f, moment matrix min eigenvalue {:.2e}\n",
                evidence.value, evidence.moment_matrix_min_eigenvalue
            ),
            SosOutcome::Inconclusive { best_residual, reason } => {
                format!("inconclusive: {reason} (best residual {best_residual:.2e})\n")
            }
        };
        s += &format!("rank bound Lambda = {:.4} (ceil {})", bounds.lambda, bounds.lambda.ceil());
        if let Some(bd) = bounds.bd {
            s += &format!(", bounded-exponent bound {bd} (e = {})", bounds.exponent);
        }
        s.push('\n');
        s
    })?;
    Ok(match outcome {
        SosOutcome::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        _ => 0,
    })
}

fn eig_text(r: &EigMinResult) -> String {
    let label = if r.exact { "smallest H-eigenvalue" } else { "lower bound on smallest H-eigenvalue" };
    let mut s = format!("{label}: {:.10}\n", r.lambda_min);
    s += &format!("SOS value r = mu = {:.10}\n", r.r);
    if !r.converged {
        s += &format!("solver did not converge; Gershgorin bound {:.10}\n", r.gershgorin_bound);
    }
    for b in &r.blocks {
        let vars: Vec<String> = b.vars.iter().map(|v| (v + 1).to_string()).collect();
        let how = match b.method {
            BlockMethod::Diagonal => "diagonal".to_string(),
            BlockMethod::SingleTerm => "single mixed term".to_string(),
            BlockMethod::Sdp => format!("SDP, {} iterations", b.iterations),
        };
        s += &format!("  block {{{}}}: {:.10} ({how})\n", vars.join(","), b.lower_bound);
    }
    if let Some(v) = r.oracle_value {
        s += &format!("brute-force minimum: {v:.10}\n");
    }
    s += &format!("time: {:.3} s\n", r.seconds);
    s
}

fn eigmin(cli: &Cli, file: &Path, args: &SpectralArgs) -> Outcome {
    let a = read_tensor(file)?.to_f64();
    let r = min_h_eigenvalue(&a, &eig_options(cli, args))?;
    emit(cli, &r, || eig_text(&r))?;
    Ok(if r.converged { 0 } else { EXIT_INCONCLUSIVE })
}

fn pd(cli: &Cli, file: &Path, args: &SpectralArgs) -> Outcome {
    let a = read_tensor(file)?.to_f64();
    let mut eig = eig_options(cli, args);
    eig.oracle = None;
    let opts = PdOptions {
        eig,
        pd_tol: args.pd_tol,
        use_oracle: !args.no_oracle,
        oracle: oracle_options(cli, args),
    };
    let rep: PdReport = is_positive_definite(&a, &opts)?;
    emit(cli, &rep, || {
        let v = match rep.verdict {
            PdVerdict::PositiveDefinite => "positive definite",
            PdVerdict::NotPositiveDefinite => "not positive definite",
            PdVerdict::Inconclusive => "inconclusive",
        };
        let mut s = format!("{v}\n");
        s += &eig_text(&rep.eig);
        if let Some(o) = rep.oracle_value {
            s += &format!("brute-force minimum: {o:.10}\n");
        }
        s
    })?;
    Ok(if rep.verdict == PdVerdict::Inconclusive { EXIT_INCONCLUSIVE } else { 0 })
}

fn rationals(items: &[String]) -> Result<Vec<BigRational>, Failure> {
    items
        .iter()
        .map(|s| parse_rational(s).map_err(Failure::Usage))
        .collect()
}

fn generate(cli: &Cli, kind: &GenKind) -> Outcome {
    let text = match kind {
        GenKind::Identity { m, n } => write_tensor(&identity::<BigRational>(*m, *n)?),
        GenKind::AllOne { m, n } => write_tensor(&all_one::<BigRational>(*m, *n)?),
        GenKind::PartialAllOne { m, n, set } => write_tensor(&partial_all_one::<BigRational>(*m, *n, set)?),
        GenKind::Cauchy { m, c } => write_tensor(&cauchy(&rationals(c)?, *m)?),
        GenKind::Example51 => write_tensor(&example51::<BigRational>()?),
        GenKind::Example52 { alpha, beta } => {
            let v = rationals(&[alpha.clone(), beta.clone()])?;
            write_tensor(&example52(v[0].clone(), v[1].clone())?)
        }
        GenKind::Example53 { m } => write_tensor(&example53::<BigRational>(*m)?),
        GenKind::Example54 { n } => write_tensor(&example54::<BigRational>(*n)?),
        GenKind::Procedure1 { m, n, s, k, big_m } => {
            write_tensor(&generate_procedure1(*m, *n, *s, *k, *big_m, cli.seed)?.tensor)
        }
        GenKind::RandomClass { class, m, n } => {
            let class: StructuredClass = class.parse()?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            write_tensor(&random_class(class, *m, *n, &mut rng)?)
        }
    };
    match &cli.out {
        Some(path) => write_out(path, &text)?,
        None => write_stdout(&text)?,
    }
    Ok(0)
}

fn rows_text(rows: &[ReproRow]) -> String {
    let mut s = format!(
        "{:<12} {:>3} {:>5} {:>16} {:>8} {:>10} {:>9}  {}\n",
        "problem", "m", "n", "computed", "true", "abs error", "time (s)", "note"
    );
    for r in rows {
        s += &format!(
            "{:<12} {:>3} {:>5} {:>16.10} {:>8} {:>10.2e} {:>9.3}  {}\n",
            r.problem, r.m, r.n, r.computed, r.truth, r.abs_error, r.seconds, r.note
        );
    }
    s
}

fn pd_text(cfg: &PdSuiteConfig, r: &PdSuiteReport) -> String {
    format!(
        "instances {} at (m, n, s, k, M) = ({}, {}, {}, {}, {})\n\
         positive definite {}\nnot positive definite {}\ninconclusive {}\n\
         correctness {:.1}%\ntime {:.2} s\n",
        r.instances, cfg.m, cfg.n, cfg.s, cfg.k, cfg.big_m, r.pd, r.not_pd, r.inconclusive, r.correctness, r.seconds
    )
}

fn repro(cli: &Cli, suite: &Suite) -> Outcome {
    match suite {
        Suite::Examples { quick } => {
            let mut cfg = ExamplesConfig {
                seed: cli.seed,
                ..ExamplesConfig::default()
            };
            if *quick {
                cfg.pairs = 10;
                cfg.example53_orders = vec![10];
                cfg.example54_monolithic = vec![4, 8];
                cfg.example54_blockwise = vec![100];
            }
            let base = EigMinOptions {
                sos: sos_options(cli),
                certificate: false,
                ..EigMinOptions::default()
            };
            let rows = run_examples(&cfg, &base)?;
            emit(cli, &rows, || rows_text(&rows))?;
            Ok(0)
        }
        Suite::PdTest {
            instances,
            m,
            n,
            s,
            k,
            big_m,
        } => {
            let cfg = PdSuiteConfig {
                instances: *instances,
                m: *m,
                n: *n,
                s: *s,
                k: *k,
                big_m: *big_m,
                seed: cli.seed,
            };
            let mut opts = PdOptions::default();
            opts.eig.sos = sos_options(cli);
            opts.oracle.restarts = cli.restarts;
            opts.oracle.seed = cli.seed;
            let rep = run_pd_suite(&cfg, &opts)?;
            emit(cli, &rep, || pd_text(&cfg, &rep))?;
            Ok(if rep.inconclusive > 0 { EXIT_INCONCLUSIVE } else { 0 })
        }
    }
}
