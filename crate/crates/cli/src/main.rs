//! Command-line front end: reads states and operators in the shared JSON
//! payload format, runs the library's norm and certification routines,
//! and prints either a human-readable text report (6 significant digits)
//! or compact JSON (full doubles, sorted keys — byte-identical for a
//! fixed seed).
//!
//! Exit codes: 0 on success, 2 for rejected input or flags, 3 when the
//! numerical backend fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use schmidt_norms::io::{
    norm_bounds_json, parse_payload, schmidt_json, state_payload, verdict_json,
    werner_report_json, Payload,
};
use schmidt_norms::opnorm::{op_norm_bruteforce, op_norm_heuristic};
use schmidt_norms::schmidt::schmidt_decompose;
use schmidt_norms::werner::{werner_limit_report, werner_pt_kpos, WernerParams, DEFAULT_SIZE_CAP};
use schmidt_norms::{
    certify_with, op_norm_bounds_with, vector_k_norm, BipartiteOperator, BoundsOptions, Error,
    HeuristicOptions, PureState, Verdict,
};

#[derive(Parser)]
#[command(
    name = "schmidt-norms",
    version,
    about = "Schmidt k-norms, k-block positivity certificates, and Werner-state criteria"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Best certified interval from every applicable bound.
    Bounds,
    /// Seeded multi-restart ascent with a witness state.
    Heuristic,
    /// Monte Carlo sampling over Schmidt-rank-k states.
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Schmidt coefficients, rank, and the k-norm of a pure state.
    Vecnorm {
        /// Path to a JSON payload with kind "vector".
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        /// Rescale the amplitudes to unit norm before evaluating.
        #[arg(long)]
        normalize: bool,
    },
    /// Certified bounds on an operator's Schmidt k-norm.
    Opnorm {
        /// Path to a JSON payload with kind "operator".
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Bounds)]
        method: Method,
        /// Restarts for the ascent heuristic.
        #[arg(long)]
        restarts: Option<u32>,
        /// Sample count for the Monte Carlo method.
        #[arg(long, default_value_t = 10_000)]
        samples: u32,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Certify or refute k-block positivity of a Hermitian operator.
    Kpos {
        /// Path to a JSON payload with kind "operator".
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        /// Restarts for the witness-search heuristic.
        #[arg(long)]
        restarts: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Werner-state PPT status and block-positivity thresholds.
    Werner {
        /// Local dimension.
        #[arg(long)]
        n: usize,
        /// Mixing parameter in [-1, 1].
        #[arg(long)]
        alpha: f64,
        /// Report the partial transpose's k-block positivity for this k
        /// (all k from 1 to n when omitted).
        #[arg(short)]
        k: Option<usize>,
    },
    /// Lower bounds on the negative-projector norms for growing tensor
    /// powers.
    WernerLimit {
        /// Local dimension.
        #[arg(long)]
        n: usize,
        /// Largest tensor power to report.
        #[arg(long)]
        rmax: usize,
        /// Largest matrix side to materialize for the heuristic column.
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Full Schmidt decomposition of a pure state.
    Schmidt {
        /// Path to a JSON payload with kind "vector".
        #[arg(long)]
        input: PathBuf,
        /// Relative cutoff for counting nonzero coefficients.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            use std::io::Write;
            // Exit quietly when the reader closes the pipe early.
            match writeln!(std::io::stdout(), "{report}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

/// Fixed 6-significant-digit rendering for text reports.
fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn read_vector(path: &Path, normalize: bool) -> Result<PureState, Error> {
    let text = std::fs::read_to_string(path)?;
    match parse_payload(&text)? {
        Payload::Vector { dims, amplitudes } => {
            if normalize {
                PureState::normalized(amplitudes, dims)
            } else {
                PureState::new(amplitudes, dims)
            }
        }
        Payload::Operator(_) => Err(Error::MalformedPayload(
            "expected a vector payload, got an operator".to_string(),
        )),
    }
}

fn read_operator(path: &Path) -> Result<BipartiteOperator, Error> {
    let text = std::fs::read_to_string(path)?;
    match parse_payload(&text)? {
        Payload::Operator(x) => Ok(x),
        Payload::Vector { .. } => Err(Error::MalformedPayload(
            "expected an operator payload, got a vector".to_string(),
        )),
    }
}

fn heuristic_options(restarts: Option<u32>, seed: Option<u64>) -> HeuristicOptions {
    let mut opts = HeuristicOptions::default();
    if let Some(r) = restarts {
        opts.restarts = r;
    }
    if let Some(s) = seed {
        opts.seed = s;
    }
    opts
}

fn run(cli: Cli) -> Result<String, Error> {
    let output = cli.output;
    match cli.command {
        Command::Vecnorm { input, k, normalize } => {
            let state = read_vector(&input, normalize)?;
            let norm = vector_k_norm(&state, k)?;
            let decomp = schmidt_decompose(&state, None)?;
            match output {
                Output::Json => Ok(json!({
                    "n": state.dims().n(),
                    "m": state.dims().m(),
                    "k": k,
                    "norm": norm,
                    "rank": decomp.rank(),
                    "coefficients": decomp.coefficients(),
                })
                .to_string()),
                Output::Text => {
                    let coeffs: Vec<String> =
                        decomp.coefficients().iter().map(|c| sig6(*c)).collect();
                    Ok(format!(
                        "n: {}  m: {}\nschmidt rank: {}\nschmidt coefficients: {}\ns({k}) norm: {}",
                        state.dims().n(),
                        state.dims().m(),
                        decomp.rank(),
                        coeffs.join(" "),
                        sig6(norm),
                    ))
                }
            }
        }
        Command::Opnorm {
            input,
            k,
            method,
            restarts,
            samples,
            seed,
        } => {
            let x = read_operator(&input)?;
            let opts = heuristic_options(restarts, seed);
            match method {
                Method::Brute => {
                    let estimate = op_norm_bruteforce(&x, k, samples, opts.seed)?;
                    match output {
                        Output::Json => Ok(json!({
                            "k": k,
                            "estimate": estimate,
                            "samples": samples,
                            "seed": opts.seed,
                        })
                        .to_string()),
                        Output::Text => Ok(format!(
                            "s({k}) norm estimate: {} ({} samples, seed {})",
                            sig6(estimate),
                            samples,
                            opts.seed,
                        )),
                    }
                }
                Method::Heuristic | Method::Bounds => {
                    let nb = match method {
                        Method::Heuristic => op_norm_heuristic(&x, k, &opts)?,
                        _ => op_norm_bounds_with(
                            &x,
                            k,
                            &BoundsOptions {
                                heuristic: opts,
                                skip_heuristic: false,
                            },
                        )?,
                    };
                    match output {
                        Output::Json => Ok(norm_bounds_json(&nb).to_string()),
                        Output::Text => {
                            let mut lines = vec![
                                format!(
                                    "s({k}) norm bounds: [{}, {}]",
                                    sig6(nb.lower),
                                    sig6(nb.upper)
                                ),
                                format!(
                                    "methods: {}",
                                    nb.methods
                                        .iter()
                                        .map(|m| m.as_str())
                                        .collect::<Vec<_>>()
                                        .join(", ")
                                ),
                            ];
                            if nb.lower_witness.is_some() {
                                lines.push("witness: attained by a stored state".to_string());
                            }
                            Ok(lines.join("\n"))
                        }
                    }
                }
            }
        }
        Command::Kpos {
            input,
            k,
            restarts,
            seed,
        } => {
            let x = read_operator(&input)?;
            let opts = heuristic_options(restarts, seed);
            let verdict = certify_with(&x, k, &opts)?;
            match output {
                Output::Json => {
                    let mut value = verdict_json(&verdict);
                    value["k"] = json!(k);
                    Ok(value.to_string())
                }
                Output::Text => Ok(render_verdict_text(&verdict, k)),
            }
        }
        Command::Werner { n, alpha, k } => {
            let params = WernerParams::new(n, alpha)?;
            let ppt = alpha <= 1.0 / n as f64;
            let ks: Vec<usize> = match k {
                Some(k) => vec![k],
                None => (1..=n).collect(),
            };
            let mut verdicts = Vec::with_capacity(ks.len());
            for k in &ks {
                verdicts.push(werner_pt_kpos(&params, *k)?);
            }
            match output {
                Output::Json => Ok(json!({
                    "n": n,
                    "alpha": alpha,
                    "ppt": ppt,
                    "pt_k_block_positive": ks
                        .iter()
                        .zip(&verdicts)
                        .map(|(k, v)| json!({"k": k, "positive": v}))
                        .collect::<Vec<_>>(),
                })
                .to_string()),
                Output::Text => {
                    let mut lines = vec![
                        format!("n: {n}"),
                        format!("alpha: {}", sig6(alpha)),
                        format!("ppt: {ppt}"),
                    ];
                    if ks.len() == 1 {
                        lines.push(format!("k-block positive: {}", verdicts[0]));
                    } else {
                        for (k, v) in ks.iter().zip(&verdicts) {
                            lines.push(format!("k={k}: k-block positive: {v}"));
                        }
                    }
                    Ok(lines.join("\n"))
                }
            }
        }
        Command::WernerLimit {
            n,
            rmax,
            size_cap,
            seed,
        } => {
            let opts = heuristic_options(None, seed);
            let rows = werner_limit_report(n, rmax, size_cap, &opts)?;
            match output {
                Output::Json => Ok(werner_report_json(&rows).to_string()),
                Output::Text => {
                    let header = format!(
                        "{:>4}  {:>14}  {:>12}  {:>12}  {:>12}  {:>9}  {:>7}",
                        "r", "rank", "bound_avg", "bound_rank", "heuristic", "threshold", "exceeds"
                    );
                    let mut lines = vec![header];
                    for row in &rows {
                        lines.push(format!(
                            "{:>4}  {:>14}  {:>12}  {:>12}  {:>12}  {:>9}  {:>7}",
                            row.r,
                            row.rank.to_string(),
                            sig6(row.bound_average),
                            sig6(row.bound_rank),
                            row.heuristic.map_or("-".to_string(), sig6),
                            sig6(row.threshold),
                            row.exceeds
                                .map_or("-".to_string(), |b| b.to_string()),
                        ));
                    }
                    Ok(lines.join("\n"))
                }
            }
        }
        Command::Schmidt { input, tol } => {
            let state = read_vector(&input, false)?;
            let decomp = schmidt_decompose(&state, tol)?;
            match output {
                Output::Json => Ok(schmidt_json(&decomp).to_string()),
                Output::Text => {
                    let coeffs: Vec<String> =
                        decomp.coefficients().iter().map(|c| sig6(*c)).collect();
                    Ok(format!(
                        "n: {}  m: {}\nrank: {}\ncoefficients: {}",
                        decomp.dims().n(),
                        decomp.dims().m(),
                        decomp.rank(),
                        coeffs.join(" "),
                    ))
                }
            }
        }
    }
}

fn render_verdict_text(verdict: &Verdict, k: usize) -> String {
    let mut lines = Vec::new();
    match verdict.decided() {
        Some(true) => lines.push(format!("{k}-block positive: true")),
        Some(false) => lines.push(format!("{k}-block positive: false")),
        None => lines.push(format!("{k}-block positive: unknown")),
    }
    if let Some(rule) = verdict.rule() {
        lines.push(format!("rule: {rule}"));
    }
    if let Verdict::NotKBlockPositive {
        witness,
        negative_count,
        ..
    } = verdict
    {
        if let Some((state, value)) = witness {
            lines.push(format!("witness expectation: {}", sig6(*value)));
            lines.push(format!("witness state: {}", state_payload(state)));
        }
        if let Some((count, max)) = negative_count {
            lines.push(format!(
                "negative eigenvalues: {count} (at most {max} allowed)"
            ));
        }
    }
    for b in verdict.bounds() {
        if b.lower == b.upper {
            lines.push(format!("{}: {}", b.name, sig6(b.lower)));
        } else {
            lines.push(format!(
                "{}: [{}, {}]",
                b.name,
                sig6(b.lower),
                sig6(b.upper)
            ));
        }
    }
    lines.join("\n")
}
