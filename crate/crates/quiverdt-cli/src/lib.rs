//! Command-line front end: parse quiver and stability inputs, dispatch
//! library computations, and emit deterministic text or JSON reports.
//!
//! Exit codes: 0 success, 1 a consistency check failed, 2 usage or input
//! error, 3 enumeration budget exhausted or non-generic stability.

mod input;
mod report;

use std::io::{Read, Write};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use quiverdt::coha::{
    chow_betti_dt, dim_component, shuffle_product, sst_presentation, st_presentation,
    star_product, tensor_check, twisted_commutativity_check,
};
use quiverdt::dt::{dt_invariants, semistable_series, series_a, wallcross_check};
use quiverdt::oracle::{count_semistable, stack_count_check, DEFAULT_BUDGET};
use quiverdt::sample::random_sym_element;
use quiverdt::{DimVector, Error, Quiver, Slope, Stability};

use report::{dims_line, dt_json, dt_row, element_json, emit_json, int_poly_q, quiver_json, say};

#[derive(Parser)]
#[command(
    name = "quiverdt",
    version,
    about = "Quantized Donaldson-Thomas invariants of quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct QuiverOpt {
    /// Quiver JSON file ({"vertices":[..],"arrows":[[..]]}); "-" reads stdin
    #[arg(long, value_name = "PATH")]
    quiver: Option<String>,
    /// Use the one-vertex quiver with M loops (takes precedence over --quiver)
    #[arg(long, value_name = "M")]
    m: Option<u32>,
}

#[derive(Args)]
struct FormatOpt {
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// DT invariants for every non-zero dimension vector in the box
    Dt {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Truncation box, comma-separated per-vertex bounds
        #[arg(long = "box")]
        bounds: DimVector,
        /// Only dimension vectors of this slope ("p/r" or an integer)
        #[arg(long)]
        slope: Option<Slope>,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Stack generating series; --theta with --slope selects one semistable slope
    Series {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Truncation box, comma-separated per-vertex bounds
        #[arg(long = "box")]
        bounds: DimVector,
        /// Stability weights (requires --slope)
        #[arg(long)]
        theta: Option<Stability>,
        /// Slope of the semistable series (requires --theta)
        #[arg(long)]
        slope: Option<Slope>,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Graded dimensions of the full algebra component at d
    CohaDims {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Dimension vector, comma-separated
        #[arg(long)]
        d: DimVector,
        /// Largest cohomological degree reported
        #[arg(long)]
        jmax: usize,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Graded dimensions of the semistable quotient at d
    SstDims {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Dimension vector, comma-separated
        #[arg(long)]
        d: DimVector,
        /// Largest cohomological degree reported
        #[arg(long)]
        jmax: usize,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Graded dimensions of the stable quotient at d
    StDims {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Dimension vector, comma-separated
        #[arg(long)]
        d: DimVector,
        /// Largest cohomological degree reported
        #[arg(long)]
        jmax: usize,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Shuffle product (or star product) of two elements
    Product {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Dimension vector of the left factor
        #[arg(long)]
        left_d: DimVector,
        /// Left factor, e.g. "2*[1|]-[|1]"
        #[arg(long)]
        left: String,
        /// Dimension vector of the right factor
        #[arg(long)]
        right_d: DimVector,
        /// Right factor
        #[arg(long)]
        right: String,
        /// Use the sign-twisted star product
        #[arg(long)]
        star: bool,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Count semistable representations over prime fields and compare with the series engine
    Oracle {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Dimension vector, comma-separated
        #[arg(long)]
        d: DimVector,
        /// Primes to count over
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u64, 3])]
        primes: Vec<u64>,
        /// Enumeration budget (overrides the QUIVERDT_BUDGET variable)
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Consistency checks (exit 1 when a check fails)
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum CheckCmd {
    /// The slope-ordered product of semistable series reconstructs the full series
    Wallcross {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Truncation box, comma-separated per-vertex bounds
        #[arg(long = "box")]
        bounds: DimVector,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Graded dimensions factor along Harder-Narasimhan strata
    Tensor {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Dimension vector, comma-separated
        #[arg(long)]
        d: DimVector,
        /// Largest compared cohomological degree
        #[arg(long)]
        jmax: usize,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Star-product sign laws on random homogeneous pairs (symmetric quivers)
    Supercomm {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Box the random dimension vectors are drawn from
        #[arg(long = "box")]
        bounds: DimVector,
        /// Number of random pairs
        #[arg(long, default_value_t = 20)]
        trials: u32,
        /// Sampler seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest sampled cohomological degree
        #[arg(long, default_value_t = 2)]
        degree_max: usize,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Quotient-dimension route agrees with the wall-crossing route
    Chowbetti {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Dimension vector, comma-separated
        #[arg(long)]
        d: DimVector,
        /// Defaults to the stabilization threshold max(0, 2 - chi(d,d))
        #[arg(long)]
        jmax: Option<usize>,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Invariants are non-negative with support inside [chi, 2 - chi]
    Positivity {
        #[command(flatten)]
        quiver: QuiverOpt,
        /// Stability weights, comma-separated in vertex order
        #[arg(long)]
        theta: Stability,
        /// Truncation box, comma-separated per-vertex bounds
        #[arg(long = "box")]
        bounds: DimVector,
        #[command(flatten)]
        format: FormatOpt,
    },
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                Error::BudgetExceeded { .. } | Error::NotGeneric { .. } => 3,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

/// Entry point shared by the binary and the tests; returns the exit code and
/// writes results to `out`, diagnostics to `err`.
pub fn run(
    argv: impl IntoIterator<Item = String>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            }
        }
    };
    match dispatch(cli.command, stdin, out) {
        Ok(code) => code,
        Err(e) => {
            say(err, &format!("error: {}", e.message()));
            e.exit_code()
        }
    }
}

fn load(opt: &QuiverOpt, stdin: &mut dyn Read) -> Result<Quiver, CliError> {
    input::load_quiver(opt.quiver.as_deref(), opt.m, stdin).map_err(CliError::Usage)
}

fn check_vertex_count(quiver: &Quiver, len: usize) -> Result<(), CliError> {
    if len != quiver.num_vertices() {
        return Err(CliError::Lib(Error::DimMismatch {
            expected: quiver.num_vertices(),
            got: len,
        }));
    }
    Ok(())
}

fn resolve_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("QUIVERDT_BUDGET") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|e| CliError::Usage(format!("QUIVERDT_BUDGET={s:?}: {e}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn object(value: Value) -> serde_json::Map<String, Value> {
    match value {
        Value::Object(m) => m,
        _ => unreachable!("context is a JSON object"),
    }
}

fn check_report(
    out: &mut dyn Write,
    format: Format,
    name: &str,
    ok: bool,
    failures: Vec<String>,
    context: Value,
) -> u8 {
    match format {
        Format::Text => {
            say(
                out,
                &format!("check {name}: {}", if ok { "ok" } else { "FAIL" }),
            );
            for f in &failures {
                say(out, &format!("  {f}"));
            }
        }
        Format::Json => {
            let mut doc = object(context);
            doc.insert("check".into(), json!(name));
            doc.insert("ok".into(), json!(ok));
            doc.insert("failures".into(), json!(failures));
            emit_json(out, &Value::Object(doc));
        }
    }
    u8::from(!ok)
}

fn dispatch(cmd: Cmd, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<u8, CliError> {
    match cmd {
        Cmd::Dt {
            quiver,
            theta,
            bounds,
            slope,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            cmd_dt(&q, &theta, &bounds, slope, format.format, out)
        }
        Cmd::Series {
            quiver,
            bounds,
            theta,
            slope,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            cmd_series(&q, &bounds, theta.as_ref(), slope, format.format, out)
        }
        Cmd::CohaDims {
            quiver,
            d,
            jmax,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            check_vertex_count(&q, d.len())?;
            let dims: Vec<usize> = (0..=jmax).map(|j| dim_component(&d, j)).collect();
            match format.format {
                Format::Text => say(out, &dims_line(&dims)),
                Format::Json => emit_json(
                    out,
                    &json!({
                        "command": "coha-dims",
                        "quiver": quiver_json(&q),
                        "d": d.entries(),
                        "jmax": jmax,
                        "dims": dims,
                    }),
                ),
            }
            Ok(0)
        }
        Cmd::SstDims {
            quiver,
            theta,
            d,
            jmax,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            cmd_pres(&q, &theta, &d, jmax, false, format.format, out)
        }
        Cmd::StDims {
            quiver,
            theta,
            d,
            jmax,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            cmd_pres(&q, &theta, &d, jmax, true, format.format, out)
        }
        Cmd::Product {
            quiver,
            left_d,
            left,
            right_d,
            right,
            star,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            let f = input::parse_element(&left_d, &left).map_err(CliError::Usage)?;
            let g = input::parse_element(&right_d, &right).map_err(CliError::Usage)?;
            let prod = if star {
                star_product(&q, &f, &g)?
            } else {
                shuffle_product(&q, &f, &g)?
            };
            match format.format {
                Format::Text => say(out, &prod.to_string()),
                Format::Json => emit_json(
                    out,
                    &json!({
                        "command": "product",
                        "quiver": quiver_json(&q),
                        "star": star,
                        "left": element_json(&f),
                        "right": element_json(&g),
                        "result": element_json(&prod),
                    }),
                ),
            }
            Ok(0)
        }
        Cmd::Oracle {
            quiver,
            theta,
            d,
            primes,
            budget,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            let budget = resolve_budget(budget)?;
            cmd_oracle(&q, &theta, &d, &primes, budget, format.format, out)
        }
        Cmd::Check(check) => cmd_check(check, stdin, out),
    }
}

fn cmd_dt(
    quiver: &Quiver,
    theta: &Stability,
    bounds: &DimVector,
    slope: Option<Slope>,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let mut results = Vec::new();
    for d in bounds.iter_box() {
        if d.is_zero() {
            continue;
        }
        if let Some(mu) = slope {
            if theta.slope(&d)? != mu {
                continue;
            }
        }
        results.push(dt_invariants(quiver, theta, &d, bounds)?);
    }
    match format {
        Format::Text => {
            for r in &results {
                say(out, &dt_row(r));
            }
        }
        Format::Json => {
            let mut doc = json!({
                "command": "dt",
                "quiver": quiver_json(quiver),
                "theta": theta.weights(),
                "box": bounds.entries(),
                "results": results.iter().map(dt_json).collect::<Vec<_>>(),
            });
            if let Some(mu) = slope {
                doc["slope"] = json!(mu.to_string());
            }
            emit_json(out, &doc);
        }
    }
    Ok(0)
}

fn cmd_series(
    quiver: &Quiver,
    bounds: &DimVector,
    theta: Option<&Stability>,
    slope: Option<Slope>,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let series = match (theta, slope) {
        (Some(theta), Some(mu)) => semistable_series(quiver, theta, mu, bounds)?,
        (None, None) => series_a(quiver, bounds)?,
        _ => {
            return Err(CliError::Usage(
                "--theta and --slope must be given together".into(),
            ))
        }
    };
    match format {
        Format::Text => {
            for (d, c) in series.iter() {
                say(out, &format!("d={d}: {c}"));
            }
        }
        Format::Json => {
            let coefficients: Vec<Value> = series
                .iter()
                .map(|(d, c)| json!({"d": d.entries(), "value": c.to_string()}))
                .collect();
            let mut doc = json!({
                "command": "series",
                "quiver": quiver_json(quiver),
                "box": bounds.entries(),
                "coefficients": coefficients,
            });
            if let (Some(theta), Some(mu)) = (theta, slope) {
                doc["theta"] = json!(theta.weights());
                doc["slope"] = json!(mu.to_string());
            }
            emit_json(out, &doc);
        }
    }
    Ok(0)
}

fn cmd_pres(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    jmax: usize,
    stable: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let pres = if stable {
        st_presentation(quiver, theta, d, jmax)?
    } else {
        sst_presentation(quiver, theta, d, jmax)?
    };
    let dims = pres.dims();
    let ranks: Vec<usize> = (0..=pres.jmax())
        .map(|j| pres.ideal_rank_at(j))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Text => say(out, &dims_line(&dims)),
        Format::Json => emit_json(
            out,
            &json!({
                "command": if stable { "st-dims" } else { "sst-dims" },
                "quiver": quiver_json(quiver),
                "theta": theta.weights(),
                "d": d.entries(),
                "jmax": jmax,
                "dims": dims,
                "ideal_ranks": ranks,
            }),
        ),
    }
    Ok(0)
}

fn cmd_oracle(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    primes: &[u64],
    budget: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    let mu = theta.slope(d)?;
    let coeff = semistable_series(quiver, theta, mu, d)?.coeff(d);
    let mut all_ok = true;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for &p in primes {
        let count = count_semistable(quiver, theta, d, p, budget)?;
        let ok = stack_count_check(quiver, theta, d, p, &coeff, budget)?;
        all_ok &= ok;
        rows.push(format!(
            "p={p}: count={count} check={}",
            if ok { "ok" } else { "FAIL" }
        ));
        json_rows.push(json!({"p": p, "count": count.to_string(), "check": ok}));
    }
    match format {
        Format::Text => {
            for row in &rows {
                say(out, row);
            }
        }
        Format::Json => emit_json(
            out,
            &json!({
                "command": "oracle",
                "quiver": quiver_json(quiver),
                "theta": theta.weights(),
                "d": d.entries(),
                "budget": budget,
                "results": json_rows,
            }),
        ),
    }
    Ok(u8::from(!all_ok))
}

fn cmd_check(check: CheckCmd, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<u8, CliError> {
    match check {
        CheckCmd::Wallcross {
            quiver,
            theta,
            bounds,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            let ok = wallcross_check(&q, &theta, &bounds)?;
            let failures = if ok {
                Vec::new()
            } else {
                vec!["slope-ordered product differs from the full series".into()]
            };
            let context = json!({
                "quiver": quiver_json(&q),
                "theta": theta.weights(),
                "box": bounds.entries(),
            });
            Ok(check_report(
                out,
                format.format,
                "wallcross",
                ok,
                failures,
                context,
            ))
        }
        CheckCmd::Tensor {
            quiver,
            theta,
            d,
            jmax,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            let ok = tensor_check(&q, &theta, &d, jmax)?;
            let failures = if ok {
                Vec::new()
            } else {
                vec!["graded dimensions do not factor along strata".into()]
            };
            let context = json!({
                "quiver": quiver_json(&q),
                "theta": theta.weights(),
                "d": d.entries(),
                "jmax": jmax,
            });
            Ok(check_report(
                out,
                format.format,
                "tensor",
                ok,
                failures,
                context,
            ))
        }
        CheckCmd::Supercomm {
            quiver,
            bounds,
            trials,
            seed,
            degree_max,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            if !q.is_symmetric() {
                return Err(CliError::Lib(Error::NotSymmetric));
            }
            let support: Vec<DimVector> = bounds
                .iter_box()
                .into_iter()
                .filter(|d| !d.is_zero())
                .collect();
            if support.is_empty() {
                return Err(CliError::Usage("the box contains no non-zero vectors".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            for trial in 0..trials {
                let df = support[rng.gen_range(0..support.len())].clone();
                let dg = support[rng.gen_range(0..support.len())].clone();
                let f = random_sym_element(&mut rng, &df, degree_max)?;
                let g = random_sym_element(&mut rng, &dg, degree_max)?;
                if !twisted_commutativity_check(&q, &f, &g)? {
                    failures.push(format!("trial {trial}: twisted commutativity fails"));
                    break;
                }
                let fg = star_product(&q, &f, &g)?;
                let gf = star_product(&q, &g, &f)?;
                let parity = (f.bidegree_n(&q)? * g.bidegree_n(&q)?).rem_euclid(2);
                let expected = if parity == 1 { gf.neg() } else { gf };
                if fg != expected {
                    failures.push(format!("trial {trial}: star super-commutativity fails"));
                    break;
                }
            }
            let ok = failures.is_empty();
            let context = json!({
                "quiver": quiver_json(&q),
                "box": bounds.entries(),
                "trials": trials,
                "seed": seed,
                "degree_max": degree_max,
            });
            Ok(check_report(
                out,
                format.format,
                "supercomm",
                ok,
                failures,
                context,
            ))
        }
        CheckCmd::Chowbetti {
            quiver,
            theta,
            d,
            jmax,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            let chi = q.euler_form(&d, &d)?;
            let jmax = jmax.unwrap_or_else(|| (2 - chi).max(0) as usize);
            let via_quotient = chow_betti_dt(&q, &theta, &d, jmax)?;
            let via_series = dt_invariants(&q, &theta, &d, &d)?;
            let ok = via_quotient.omega_tilde == via_series.omega_tilde;
            let failures = if ok {
                Vec::new()
            } else {
                vec![format!(
                    "quotient route {} vs wall-crossing route {}",
                    int_poly_q(&via_quotient.omega_tilde),
                    int_poly_q(&via_series.omega_tilde)
                )]
            };
            let context = json!({
                "quiver": quiver_json(&q),
                "theta": theta.weights(),
                "d": d.entries(),
                "jmax": jmax,
                "omega_tilde": int_poly_q(&via_series.omega_tilde).to_string(),
            });
            Ok(check_report(
                out,
                format.format,
                "chowbetti",
                ok,
                failures,
                context,
            ))
        }
        CheckCmd::Positivity {
            quiver,
            theta,
            bounds,
            format,
        } => {
            let q = load(&quiver, stdin)?;
            let mut failures = Vec::new();
            for d in bounds.iter_box() {
                if d.is_zero() {
                    continue;
                }
                let r = dt_invariants(&q, &theta, &d, &bounds)?;
                if !r.is_positive() {
                    failures.push(format!(
                        "d={}: negative coefficient in {}",
                        r.d,
                        int_poly_q(&r.omega_tilde)
                    ));
                }
                if !r.support_in_expected_range() {
                    failures.push(format!("d={}: support escapes [chi, 2-chi]", r.d));
                }
            }
            let ok = failures.is_empty();
            let context = json!({
                "quiver": quiver_json(&q),
                "theta": theta.weights(),
                "box": bounds.entries(),
            });
            Ok(check_report(
                out,
                format.format,
                "positivity",
                ok,
                failures,
                context,
            ))
        }
    }
}
