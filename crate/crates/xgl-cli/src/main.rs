//! Command-line front end: every library operation behind one binary with
//! reproducible seeds and machine-readable output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use xgl::approxnorm::{self, ClassifyMode, ClassifyOptions};
use xgl::boolfn::{fwht, norms, BoolFn, Density};
use xgl::bounds;
use xgl::compiler::{self, named_fn, ProtocolTree};
use xgl::error::Error;
use xgl::nlbox::{chsh_probability, IsotropicBox};
use xgl::xorgame::{self, JointDistribution};

#[derive(Parser)]
#[command(
    name = "xgl",
    version,
    about = "XOR games, nonlocal boxes, and spectral communication bounds",
    max_term_width = 100
)]
struct Cli {
    /// Seed for all randomized subcommands; identical seeds give
    /// byte-identical output regardless of thread count
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier spectrum of a boolean function
    Fourier {
        /// Function: a name (or, and, parity, eq, ip, bent2), inline table
        /// digits, or @path to a truth-table file
        #[arg(long = "fn")]
        function: String,
        /// Arity for named or inline functions
        #[arg(long)]
        n: Option<usize>,
    },
    /// Optimal XOR-game bias for g(x XOR y) under an XOR-shaped distribution
    Bias {
        /// Game function g (name, inline table, or @path)
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: Option<usize>,
        /// Density on z: `uniform` or @path
        #[arg(long, default_value = "uniform")]
        q: String,
    },
    /// Input density minimizing the optimal bias of g(x XOR y)
    WorstDist {
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Worst product distribution for the n-bit equality game
    EqLambda {
        #[arg(long)]
        n: u32,
    },
    /// CHSH winning probability of an isotropic box
    Chsh {
        #[arg(long)]
        delta: f64,
    },
    /// Compile a protocol tree into a box-powered XOR-game strategy
    Compile {
        /// Protocol tree JSON file
        #[arg(long)]
        tree: PathBuf,
        /// CHSH bias of the boxes
        #[arg(long)]
        delta: f64,
        /// Input distribution over pairs: `uniform` or @path
        #[arg(long, default_value = "uniform")]
        mu: String,
        /// Game function over pairs; defaults to the tree's own function
        #[arg(long)]
        f: Option<String>,
        /// Run a Monte Carlo check with this many samples
        #[arg(long)]
        simulate: Option<u64>,
        /// Also run the shared-randomness transcript-guessing baseline
        #[arg(long)]
        baseline: bool,
    },
    /// Count functions lying in their double dual sign class
    Classify {
        #[arg(long)]
        n: usize,
        /// Walk every function index
        #[arg(long, conflicts_with = "sample")]
        full: bool,
        /// Sample this many random functions instead
        #[arg(long)]
        sample: Option<u64>,
        /// Cap on examined functions (mandatory at arity 5)
        #[arg(long)]
        budget: Option<u64>,
        /// Directory for resumable per-range progress files
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Epsilon used for the per-function approximate norm in CSV output
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
    },
    /// Spectral norms plus the approximate l1 norm of one function
    Norms {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
    },
    /// Closed-form communication lower bounds
    Bound {
        #[command(subcommand)]
        which: BoundCmd,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// log2(rho / beta)
    Discrepancy {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        beta: f64,
    },
    /// log2(rho / beta) / log2(1 / delta)
    Nlbox {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        beta: f64,
    },
    /// The two amortized equality-game constants
    Exm,
    /// Spectral-l1 bound for the XOR function of g
    Ls {
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Entropy maximization behind the information-cost view
    Ic {
        /// Extra bits per direction; omitting it reports both 1 and 2
        #[arg(long)]
        extra: Option<f64>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("XGL_THREADS") {
        if let Ok(k) = threads.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad input, 3 for capacity and solver conditions.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::ArityMismatch { .. } | Error::Io(_) => 2,
        Error::Capacity { .. }
        | Error::Solver(_)
        | Error::Inconsistency(_)
        | Error::GuaranteeViolation(_) => 3,
    }
}

/// Resolve a function argument: `@path`, a library name, or inline table
/// digits (binary or hex; needs --n).
fn load_fn(spec: &str, n: Option<usize>) -> Result<BoolFn, Error> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(Path::new(path))?;
        let f = BoolFn::from_table_text(&text)?;
        if let Some(n) = n {
            if f.arity() != n {
                return Err(Error::ArityMismatch {
                    left: f.arity(),
                    right: n,
                });
            }
        }
        return Ok(f);
    }
    let n =
        n.ok_or_else(|| Error::Domain(format!("--n is required with the function `{spec}`")))?;
    if let Ok(f) = named_fn(spec, n) {
        return Ok(f);
    }
    let digits = spec.strip_prefix("0x").unwrap_or(spec);
    BoolFn::from_table_text(&format!("n={n}\n{digits}"))
}

fn load_density(spec: &str, n: usize) -> Result<Density, Error> {
    match spec.trim() {
        "uniform" => Density::uniform(n),
        other => {
            let path = other.strip_prefix('@').unwrap_or(other);
            let text = std::fs::read_to_string(Path::new(path))?;
            let q = Density::from_text(&text)?;
            if q.arity() != n {
                return Err(Error::ArityMismatch {
                    left: q.arity(),
                    right: n,
                });
            }
            Ok(q)
        }
    }
}

/// Pair-distribution text format: `n=<k>` then `2^{2k}` probabilities in
/// `x | y << k` order.
fn load_mu(spec: &str, n: usize) -> Result<JointDistribution, Error> {
    match spec.trim() {
        "uniform" => JointDistribution::uniform(n),
        other => {
            let path = other.strip_prefix('@').unwrap_or(other);
            let text = std::fs::read_to_string(Path::new(path))?;
            let text = text.trim_start();
            let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
            let header = first.trim();
            let file_n = header
                .strip_prefix("n=")
                .ok_or_else(|| Error::Parse(format!("expected `n=<k>`, got `{header}`")))?
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad arity: {e}")))?;
            if file_n != n {
                return Err(Error::ArityMismatch {
                    left: file_n,
                    right: n,
                });
            }
            let probs: Vec<f64> = rest
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad probability `{tok}`: {e}")))
                })
                .collect::<Result<_, _>>()?;
            JointDistribution::new(n, probs)
        }
    }
}

fn emit_json(value: serde_json::Value) {
    println!("{value}");
}

/// `%.12g`-style rendering: 12 significant digits, plain notation for
/// moderate exponents, trailing zeros trimmed.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = format!("{x:e}")
        .split_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(0);
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').unwrap();
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{e}")
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let format = cli.format;
    match cli.command {
        Command::Fourier { function, n } => {
            let f = load_fn(&function, n)?;
            let spec = fwht(&f.to_real());
            match format {
                Format::Json => emit_json(json!({
                    "n": f.arity(),
                    "coeffs": spec.coeffs(),
                })),
                Format::Csv => {
                    println!("set,coeff");
                    for (s, c) in spec.coeffs().iter().enumerate() {
                        println!("{s},{}", sig12(*c));
                    }
                }
            }
        }
        Command::Bias { g, n, q } => {
            let g = load_fn(&g, n)?;
            let q = load_density(&q, g.arity())?;
            let (beta, argmax) = xorgame::bias_xor_form(&g, &q)?;
            match format {
                Format::Json => emit_json(json!({ "beta": beta, "argmax_set": argmax })),
                Format::Csv => {
                    println!("beta,argmax_set");
                    println!("{},{argmax}", sig12(beta));
                }
            }
        }
        Command::WorstDist { g, n } => {
            let g = load_fn(&g, n)?;
            let (q, beta) = xorgame::worst_distribution(&g)?;
            match format {
                Format::Json => emit_json(json!({ "beta": beta, "q": q.weights() })),
                Format::Csv => {
                    println!("z,weight");
                    for (z, w) in q.weights().iter().enumerate() {
                        println!("{z},{}", sig12(*w));
                    }
                }
            }
        }
        Command::EqLambda { n } => {
            let (lambda_star, beta) = xorgame::eq_worst_product_lambda(n)?;
            match format {
                Format::Json => emit_json(json!({ "lambda_star": lambda_star, "beta": beta })),
                Format::Csv => {
                    println!("lambda_star,beta");
                    println!("{},{}", sig12(lambda_star), sig12(beta));
                }
            }
        }
        Command::Chsh { delta } => {
            let p = chsh_probability(&IsotropicBox::new(delta)?.distribution());
            match format {
                Format::Json => emit_json(json!({ "p_chsh": p })),
                Format::Csv => {
                    println!("p_chsh");
                    println!("{}", sig12(p));
                }
            }
        }
        Command::Compile {
            tree,
            delta,
            mu,
            f,
            simulate,
            baseline,
        } => {
            let tree = ProtocolTree::from_json_file(&tree)?;
            let n = tree.arity();
            let strategy = compiler::compile(&tree)?;
            let game_fn = match f {
                Some(spec) => load_fn(&spec, Some(2 * n))?,
                None => tree.computed_fn()?,
            };
            let mu = load_mu(&mu, n)?;
            let exact = compiler::exact_bias(&strategy, &game_fn, &mu, delta)?;
            let mut out = json!({
                "n": n,
                "depth": tree.depth(),
                "boxes": strategy.box_count(),
                "delta": delta,
                "exact_bias": exact,
            });
            if let Some(samples) = simulate {
                let report =
                    compiler::simulate(&strategy, &game_fn, &mu, delta, samples, cli.seed)?;
                out["empirical_bias"] = json!(report.empirical_bias);
                out["samples"] = json!(report.samples);
                out["stderr"] = json!(report.stderr);
            }
            if baseline {
                let samples = simulate.unwrap_or(100_000);
                let report = compiler::transcript_guessing_baseline(
                    &tree, &game_fn, &mu, samples, cli.seed,
                )?;
                out["baseline"] = json!({
                    "exact_bias": report.exact_bias,
                    "empirical_bias": report.empirical_bias,
                    "samples": report.samples,
                    "stderr": report.stderr,
                });
            }
            match format {
                Format::Json => emit_json(out),
                Format::Csv => {
                    println!("depth,boxes,delta,exact_bias,empirical_bias");
                    let emp = out
                        .get("empirical_bias")
                        .and_then(|v| v.as_f64())
                        .map_or(String::new(), sig12);
                    println!(
                        "{},{},{},{},{emp}",
                        tree.depth(),
                        strategy.box_count(),
                        sig12(delta),
                        sig12(exact)
                    );
                }
            }
        }
        Command::Classify {
            n,
            full,
            sample,
            budget,
            checkpoint,
            epsilon,
        } => {
            let mode = match (full, sample) {
                (_, Some(count)) => ClassifyMode::Sample {
                    count,
                    seed: cli.seed,
                },
                (true, None) => ClassifyMode::Full,
                (false, None) => {
                    return Err(Error::Domain("pass --full or --sample <K>".to_string()))
                }
            };
            if format == Format::Csv {
                if sample.is_some() {
                    return Err(Error::Domain(
                        "CSV output supports --full (optionally with --budget)".to_string(),
                    ));
                }
                return classify_csv(n, budget, epsilon);
            }
            let opts = ClassifyOptions {
                mode,
                budget,
                checkpoint_dir: checkpoint,
                ..ClassifyOptions::default()
            };
            let counts = approxnorm::classify_all(n, &opts)?;
            emit_json(json!({
                "members": counts.members,
                "examined": counts.examined,
                "total": counts.total,
                "exact": counts.exact,
            }));
        }
        Command::Norms {
            function,
            n,
            epsilon,
        } => {
            let f = load_fn(&function, n)?;
            let sn = norms(&f.spectrum());
            let approx = approxnorm::approx_l1(&f, epsilon)?;
            let (member, _) = approxnorm::in_double_dual(&f)?;
            match format {
                Format::Json => emit_json(json!({
                    "n": f.arity(),
                    "epsilon": epsilon,
                    "l1": sn.l1,
                    "linf": sn.linf,
                    "l0": sn.l0,
                    "approx_l1": approx.value,
                    "tight": approx.tight,
                    "member": member,
                })),
                Format::Csv => {
                    println!("l1,linf,l0,member,approx_l1,tight");
                    println!(
                        "{},{},{},{},{},{}",
                        sig12(sn.l1),
                        sig12(sn.linf),
                        sn.l0,
                        member,
                        sig12(approx.value),
                        approx.tight
                    );
                }
            }
        }
        Command::Bound { which } => run_bound(which, format)?,
    }
    Ok(())
}

fn classify_csv(n: usize, budget: Option<u64>, epsilon: f64) -> Result<(), Error> {
    use rayon::prelude::*;

    if n > 5 {
        return Err(Error::Capacity {
            what: "CSV classification arity",
            got: n,
            max: 5,
        });
    }
    let total: u64 = 1u64 << (1u32 << n);
    let span = budget.map_or(total, |b| b.min(total));
    if n >= 5 && budget.is_none() {
        return Err(Error::Domain(
            "full classification at arity 5 needs an explicit --budget".to_string(),
        ));
    }
    println!("fn_index,member,l1,approx_l1,tight");
    let chunk = 1u64 << 10;
    let rows: Result<Vec<Vec<String>>, Error> = (0..span.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let start = k * chunk;
            let end = (start + chunk).min(span);
            let mut lines = Vec::with_capacity((end - start) as usize);
            for idx in start..end {
                let rep = approxnorm::function_report(n, idx, epsilon)?;
                lines.push(format!(
                    "{},{},{},{},{}",
                    rep.index,
                    rep.member,
                    sig12(rep.l1),
                    sig12(rep.approx_l1),
                    rep.tight
                ));
            }
            Ok(lines)
        })
        .collect();
    for block in rows? {
        for line in block {
            println!("{line}");
        }
    }
    Ok(())
}

fn run_bound(which: BoundCmd, format: Format) -> Result<(), Error> {
    match which {
        BoundCmd::Discrepancy { rho, beta } => {
            let value = bounds::discrepancy_bound(rho, beta)?;
            match format {
                Format::Json => emit_json(json!({
                    "name": "discrepancy", "rho": rho, "beta": beta, "value": value,
                })),
                Format::Csv => {
                    println!("name,rho,beta,value");
                    println!(
                        "discrepancy,{},{},{}",
                        sig12(rho),
                        sig12(beta),
                        sig12(value)
                    );
                }
            }
        }
        BoundCmd::Nlbox { rho, delta, beta } => {
            let value = bounds::nlbox_bound(rho, delta, beta)?;
            match format {
                Format::Json => emit_json(json!({
                    "name": "nlbox", "rho": rho, "delta": delta, "beta": beta, "value": value,
                })),
                Format::Csv => {
                    println!("name,rho,delta,beta,value");
                    println!(
                        "nlbox,{},{},{},{}",
                        sig12(rho),
                        sig12(delta),
                        sig12(beta),
                        sig12(value)
                    );
                }
            }
        }
        BoundCmd::Exm => {
            let (general, product) = bounds::equality_bound_constants();
            match format {
                Format::Json => emit_json(json!({ "general": general, "product": product })),
                Format::Csv => {
                    println!("general,product");
                    println!("{},{}", sig12(general), sig12(product));
                }
            }
        }
        BoundCmd::Ls { g, n, epsilon } => {
            let g = load_fn(&g, n)?;
            let value = bounds::xor_l1_bound(&g, epsilon)?;
            match format {
                Format::Json => emit_json(json!({
                    "name": "ls", "epsilon": epsilon, "value": value,
                })),
                Format::Csv => {
                    println!("name,epsilon,value");
                    println!("ls,{},{}", sig12(epsilon), sig12(value));
                }
            }
        }
        BoundCmd::Ic { extra } => match extra {
            Some(extra) => {
                let (lambda_star, value) = bounds::ic_bound_maximize(extra)?;
                match format {
                    Format::Json => emit_json(json!({
                        "extra": extra, "lambda_star": lambda_star, "value": value,
                    })),
                    Format::Csv => {
                        println!("extra,lambda_star,value");
                        println!("{},{},{}", sig12(extra), sig12(lambda_star), sig12(value));
                    }
                }
            }
            None => {
                let (l1, v1) = bounds::ic_bound_maximize(1.0)?;
                let (l2, v2) = bounds::ic_bound_maximize(2.0)?;
                match format {
                    Format::Json => emit_json(json!({
                        "extra_1": { "lambda_star": l1, "value": v1 },
                        "extra_2": { "lambda_star": l2, "value": v2 },
                    })),
                    Format::Csv => {
                        println!("extra,lambda_star,value");
                        println!("1,{},{}", sig12(l1), sig12(v1));
                        println!("2,{},{}", sig12(l2), sig12(v2));
                    }
                }
            }
        },
    }
    Ok(())
}
