//! Command-line front end for the charp kernel: session setup, input
//! parsing, command dispatch, and structured output.
//!
//! Exit codes: 0 on success, 1 on a mathematical error (e.g. a
//! rank-deficient refit), 2 on an input error (syntax, unknown names,
//! bad flags). JSON mode emits a single object with the fields
//! `{command, inputs_echo, result, provenance}`; identical inputs always
//! produce byte-identical output.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use charp::groebner::{buchberger, Ideal, MonomialOrder};
use charp::jacobian::{
    quotient_p_basis, refit_p_basis, regularity_test, singular_locus, PrimeSpec,
};
use charp::orderloci::{diff_saturate, ideal_order_at, order_at, stratify, OrderValue};
use charp::polyring::{Polynomial, RingContext};
use charp::text::{
    multiindex_to_text, parse_generators, parse_multiindex, parse_point, parse_polynomial,
    point_to_text, polynomial_to_text,
};

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "charp", version, about = "Exact regularity and order-locus computations over F_p(v)")]
struct Cli {
    /// Prime modulus p of the ground field
    #[arg(long)]
    p: u64,

    /// Base parameter names, comma-separated (may be empty)
    #[arg(long, value_delimiter = ',')]
    base: Vec<String>,

    /// Geometric variable names, comma-separated
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,

    /// Monomial order: grevlex, lex, or block
    #[arg(long, default_value = "grevlex")]
    order: String,

    /// Output format: text or json (default from CHARP_OUTPUT, else text)
    #[arg(long)]
    format: Option<String>,

    /// Worker threads for the parallel kernels (default 1)
    #[arg(long)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PrimeArgs {
    /// Rational point, e.g. `x=0,y=(v+1)/v`
    #[arg(long)]
    point: Option<String>,

    /// Semicolon-separated generators of a prime ideal
    #[arg(long)]
    prime_gens: Option<String>,

    /// Trust that the generator list defines a prime ideal
    #[arg(long)]
    assert_prime: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular-locus ideal: generators plus all r x r Jacobian minors
    SingLocus {
        /// Generators, `;`-separated (or @file)
        gens: String,
        /// Height of the ideal (V(J) assumed equidimensional)
        #[arg(long)]
        r: usize,
    },
    /// Extended Jacobian regularity test at a prime
    Regular {
        gens: String,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        prime: PrimeArgs,
    },
    /// Order of a polynomial (or `;`-separated ideal) at a prime
    Order {
        input: String,
        #[command(flatten)]
        prime: PrimeArgs,
    },
    /// Order-locus chain for N = 1..n-max
    Stratify {
        ideal: String,
        #[arg(long)]
        n_max: u64,
        /// Interreduce each level with a Groebner basis
        #[arg(long)]
        reduce: bool,
    },
    /// Apply the Hasse operator D^beta
    Hasse {
        poly: String,
        /// Multi-index, e.g. `v:1,x:2` (empty for the identity)
        #[arg(long, default_value = "")]
        beta: String,
    },
    /// Differential saturation by operators of order at most n
    Saturate {
        ideal: String,
        #[arg(long)]
        n: u64,
        /// Interreduce the saturation with a Groebner basis
        #[arg(long)]
        reduce: bool,
    },
    /// Reduced Groebner basis of an ideal
    Groebner { ideal: String },
    /// Refit the p-basis along parameters z_1..z_d at a prime
    Refit {
        /// Parameters, `;`-separated
        params: String,
        #[command(flatten)]
        prime: PrimeArgs,
        /// Also report the quotient p-basis for J = <z_1..z_r>
        #[arg(long)]
        r: Option<usize>,
    },
    /// Decompose into p-th powers: f = sum g_a^p B^a
    DecomposeP { poly: String },
}

enum CliError {
    Input(String),
    Math(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Math(m) => m,
        }
    }
}

fn lift(err: charp::Error) -> CliError {
    use charp::Error::*;
    let msg = err.to_string();
    match err {
        UnitIdeal
        | BadSize { .. }
        | PrimeDoesNotContainIdeal(_)
        | RankDeficient
        | OrderViolation(_) => CliError::Math(msg),
        _ => CliError::Input(msg),
    }
}

fn lift_parse(err: charp::text::ParseError) -> CliError {
    CliError::Input(err.to_string())
}

/// `@path` arguments are replaced by the file's UTF-8 contents.
fn expand_at(input: &str) -> Result<String, CliError> {
    if let Some(path) = input.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Input(format!("cannot read `{path}`: {e}")))
    } else {
        Ok(input.to_string())
    }
}

struct Session {
    ring: RingContext,
    order: MonomialOrder,
}

struct CommandOutput {
    command: &'static str,
    inputs: Value,
    result: Value,
    provenance: Value,
    text: String,
}

fn echo_polys(polys: &[Polynomial]) -> Value {
    Value::Array(
        polys
            .iter()
            .map(|p| Value::String(polynomial_to_text(p)))
            .collect(),
    )
}

fn build_prime(session: &Session, args: &PrimeArgs) -> Result<(PrimeSpec, Value), CliError> {
    match (&args.point, &args.prime_gens) {
        (Some(point_text), None) => {
            let point_text = expand_at(point_text)?;
            let point = parse_point(&point_text, &session.ring).map_err(lift_parse)?;
            let echo = json!({ "point": point_to_text(&point) });
            Ok((PrimeSpec::point(point), echo))
        }
        (None, Some(gens_text)) => {
            let gens_text = expand_at(gens_text)?;
            let gens = parse_generators(&gens_text, &session.ring).map_err(lift_parse)?;
            let ideal = Ideal::new(&session.ring, gens).map_err(lift)?;
            let echo = json!({
                "prime_gens": echo_polys(ideal.generators()),
                "asserted_prime": args.assert_prime,
            });
            Ok((
                PrimeSpec::generators(ideal, args.assert_prime),
                echo,
            ))
        }
        (Some(_), Some(_)) => Err(CliError::Input(
            "give either --point or --prime-gens, not both".into(),
        )),
        (None, None) => Err(CliError::Input(
            "a prime is required: --point or --prime-gens".into(),
        )),
    }
}

fn order_value_json(v: OrderValue) -> Value {
    match v {
        OrderValue::Finite(n) => json!(n),
        OrderValue::Infinite => json!("inf"),
    }
}

fn dispatch(session: &Session, command: &Command) -> Result<CommandOutput, CliError> {
    let ring = &session.ring;
    match command {
        Command::SingLocus { gens, r } => {
            if *r < 1 {
                return Err(CliError::Input("--r must be at least 1".into()));
            }
            let gens_text = expand_at(gens)?;
            let gens = parse_generators(&gens_text, ring).map_err(lift_parse)?;
            let locus = singular_locus(&gens, *r).map_err(lift)?;
            let printed: Vec<String> = locus
                .ideal
                .generators()
                .iter()
                .map(polynomial_to_text)
                .collect();
            let mut text = format!("no-minors: {}\n", locus.no_minors);
            for g in &printed {
                text.push_str(g);
                text.push('\n');
            }
            Ok(CommandOutput {
                command: "sing-locus",
                inputs: json!({ "gens": echo_polys(&gens), "r": r }),
                result: json!({ "generators": printed, "no_minors": locus.no_minors }),
                provenance: Value::Null,
                text,
            })
        }
        Command::Regular { gens, r, prime } => {
            let gens_text = expand_at(gens)?;
            let gens = parse_generators(&gens_text, ring).map_err(lift_parse)?;
            let (prime_spec, prime_echo) = build_prime(session, prime)?;
            let report = regularity_test(&gens, &prime_spec, *r).map_err(lift)?;
            let (wr, wc) = match &report.witness {
                Some(w) => (json!(w.rows), json!(w.cols)),
                None => (Value::Null, Value::Null),
            };
            let mut text = format!(
                "regular: {}\nrank: {}\nr: {}\n",
                report.regular, report.rank_mod_prime, report.height
            );
            if let Some(w) = &report.witness {
                let fmt = |v: &[usize]| {
                    v.iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                text.push_str(&format!(
                    "witness-rows: {}\nwitness-cols: {}\n",
                    fmt(&w.rows),
                    fmt(&w.cols)
                ));
            }
            let mut inputs = json!({ "gens": echo_polys(&gens), "r": r });
            merge(&mut inputs, prime_echo);
            Ok(CommandOutput {
                command: "regular",
                inputs,
                result: json!({
                    "rank": report.rank_mod_prime,
                    "r": report.height,
                    "regular": report.regular,
                    "witness_rows": wr,
                    "witness_cols": wc,
                }),
                provenance: Value::Null,
                text,
            })
        }
        Command::Order { input, prime } => {
            let input_text = expand_at(input)?;
            let gens = parse_generators(&input_text, ring).map_err(lift_parse)?;
            let (prime_spec, prime_echo) = build_prime(session, prime)?;
            let (value, input_echo) = if gens.len() == 1 {
                let v = order_at(&gens[0], &prime_spec).map_err(lift)?;
                (v, json!({ "poly": polynomial_to_text(&gens[0]) }))
            } else {
                let ideal = Ideal::new(ring, gens.clone()).map_err(lift)?;
                let v = ideal_order_at(&ideal, &prime_spec).map_err(lift)?;
                (v, json!({ "ideal": echo_polys(ideal.generators()) }))
            };
            let mut inputs = input_echo;
            merge(&mut inputs, prime_echo);
            Ok(CommandOutput {
                command: "order",
                inputs,
                result: json!({ "order": order_value_json(value) }),
                provenance: Value::Null,
                text: format!("order: {value}\n"),
            })
        }
        Command::Stratify {
            ideal,
            n_max,
            reduce,
        } => {
            if *n_max < 1 {
                return Err(CliError::Input("--n-max must be at least 1".into()));
            }
            let ideal_text = expand_at(ideal)?;
            let gens = parse_generators(&ideal_text, ring).map_err(lift_parse)?;
            let ideal = Ideal::new(ring, gens).map_err(lift)?;
            let levels = stratify(&ideal, *n_max);
            let mut out_levels = Vec::new();
            let mut text = String::new();
            for (n, level) in &levels {
                let (printed, provenance) = if *reduce {
                    let gb = buchberger(level, session.order);
                    let printed: Vec<String> = gb
                        .elements_cleared()
                        .iter()
                        .map(polynomial_to_text)
                        .collect();
                    (printed, Value::Null)
                } else {
                    let sat = diff_saturate(&ideal, n - 1);
                    let printed: Vec<String> = sat
                        .generators
                        .iter()
                        .map(|g| polynomial_to_text(&g.value))
                        .collect();
                    let prov: Vec<Value> = sat
                        .generators
                        .iter()
                        .map(|g| {
                            json!({
                                "gen_index": g.gen_index,
                                "beta": multiindex_to_text(&g.beta, ring),
                            })
                        })
                        .collect();
                    (printed, Value::Array(prov))
                };
                text.push_str(&format!("N={n}:\n"));
                for g in &printed {
                    text.push_str("  ");
                    text.push_str(g);
                    text.push('\n');
                }
                out_levels.push(json!({
                    "N": n,
                    "generators": printed,
                    "provenance": provenance,
                }));
            }
            Ok(CommandOutput {
                command: "stratify",
                inputs: json!({
                    "ideal": echo_polys(ideal.generators()),
                    "n_max": n_max,
                    "reduce": reduce,
                }),
                result: json!({ "levels": out_levels }),
                provenance: Value::Null,
                text,
            })
        }
        Command::Hasse { poly, beta } => {
            let poly_text = expand_at(poly)?;
            let f = parse_polynomial(&poly_text, ring).map_err(lift_parse)?;
            let beta_idx = parse_multiindex(beta, ring).map_err(lift_parse)?;
            let result = charp::diffops::hasse(&f, &beta_idx);
            let printed = polynomial_to_text(&result);
            Ok(CommandOutput {
                command: "hasse",
                inputs: json!({
                    "poly": polynomial_to_text(&f),
                    "beta": multiindex_to_text(&beta_idx, ring),
                }),
                result: json!({ "value": printed }),
                provenance: Value::Null,
                text: format!("{printed}\n"),
            })
        }
        Command::Saturate { ideal, n, reduce } => {
            let ideal_text = expand_at(ideal)?;
            let gens = parse_generators(&ideal_text, ring).map_err(lift_parse)?;
            let ideal = Ideal::new(ring, gens).map_err(lift)?;
            let sat = diff_saturate(&ideal, *n);
            let (printed, provenance, text) = if *reduce {
                let locus = Ideal::new(ring, sat.polynomials()).map_err(lift)?;
                let gb = buchberger(&locus, session.order);
                let printed: Vec<String> = gb
                    .elements_cleared()
                    .iter()
                    .map(polynomial_to_text)
                    .collect();
                let text = printed
                    .iter()
                    .map(|g| format!("{g}\n"))
                    .collect::<String>();
                (printed, Value::Null, text)
            } else {
                let printed: Vec<String> = sat
                    .generators
                    .iter()
                    .map(|g| polynomial_to_text(&g.value))
                    .collect();
                let prov: Vec<Value> = sat
                    .generators
                    .iter()
                    .map(|g| {
                        json!({
                            "gen_index": g.gen_index,
                            "beta": multiindex_to_text(&g.beta, ring),
                        })
                    })
                    .collect();
                let text = sat
                    .generators
                    .iter()
                    .map(|g| {
                        format!(
                            "D[{}](g{}) = {}\n",
                            multiindex_to_text(&g.beta, ring),
                            g.gen_index,
                            polynomial_to_text(&g.value)
                        )
                    })
                    .collect::<String>();
                (printed, Value::Array(prov), text)
            };
            Ok(CommandOutput {
                command: "saturate",
                inputs: json!({
                    "ideal": echo_polys(ideal.generators()),
                    "n": n,
                    "reduce": reduce,
                }),
                result: json!({ "n": n, "generators": printed }),
                provenance,
                text,
            })
        }
        Command::Groebner { ideal } => {
            let ideal_text = expand_at(ideal)?;
            let gens = parse_generators(&ideal_text, ring).map_err(lift_parse)?;
            let ideal = Ideal::new(ring, gens).map_err(lift)?;
            let gb = buchberger(&ideal, session.order);
            let printed: Vec<String> = gb
                .elements_cleared()
                .iter()
                .map(polynomial_to_text)
                .collect();
            let text = printed.iter().map(|g| format!("{g}\n")).collect();
            Ok(CommandOutput {
                command: "groebner",
                inputs: json!({ "ideal": echo_polys(ideal.generators()) }),
                result: json!({ "basis": printed }),
                provenance: Value::Null,
                text,
            })
        }
        Command::Refit { params, prime, r } => {
            let params_text = expand_at(params)?;
            let params = parse_generators(&params_text, ring).map_err(lift_parse)?;
            if params.iter().any(Polynomial::is_zero) {
                return Err(CliError::Input("parameters must be nonzero".into()));
            }
            if params.is_empty() {
                return Err(CliError::Input("at least one parameter required".into()));
            }
            let (prime_spec, prime_echo) = build_prime(session, prime)?;
            let refit = refit_p_basis(&params, &prime_spec).map_err(lift)?;
            let removed: Vec<&str> = refit.removed.iter().map(|b| b.name()).collect();
            let kept: Vec<&str> = refit.kept.iter().map(|b| b.name()).collect();
            let printed_params: Vec<String> =
                refit.parameters.iter().map(polynomial_to_text).collect();
            let localizer = polynomial_to_text(&refit.localizer);
            let mut text = format!("removed: {}\nkept: {}\n", removed.join(", "), kept.join(", "));
            for z in &printed_params {
                text.push_str(&format!("parameter: {z}\n"));
            }
            text.push_str(&format!("localizer: {localizer}\n"));
            let mut result = json!({
                "removed": removed,
                "kept": kept,
                "parameters": printed_params,
                "localizer": localizer,
            });
            if let Some(r) = r {
                let quotient = quotient_p_basis(&params, *r, &prime_spec).map_err(lift)?;
                let residues: Vec<String> = quotient
                    .residue_parameters
                    .iter()
                    .map(polynomial_to_text)
                    .collect();
                for z in &residues {
                    text.push_str(&format!("residue-parameter: {z}\n"));
                }
                merge(
                    &mut result,
                    json!({ "quotient_basis_residues": residues, "quotient_r": r }),
                );
            }
            let mut inputs = json!({ "params": echo_polys(&params) });
            if let Some(r) = r {
                merge(&mut inputs, json!({ "r": r }));
            }
            merge(&mut inputs, prime_echo);
            Ok(CommandOutput {
                command: "refit",
                inputs,
                result,
                provenance: Value::Null,
                text,
            })
        }
        Command::DecomposeP { poly } => {
            let poly_text = expand_at(poly)?;
            let f = parse_polynomial(&poly_text, ring).map_err(lift_parse)?;
            let parts = f.p_power_decompose();
            let mut components = Vec::new();
            let mut text = String::new();
            for (alpha, g) in &parts {
                let idx = multiindex_to_text(alpha, ring);
                let val = polynomial_to_text(g);
                text.push_str(&format!("g[{idx}] = {val}\n"));
                components.push(json!({ "index": idx, "value": val }));
            }
            Ok(CommandOutput {
                command: "decompose-p",
                inputs: json!({ "poly": polynomial_to_text(&f) }),
                result: json!({ "components": components }),
                provenance: Value::Null,
                text,
            })
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

/// Runs one invocation. `env_format` is the value of `CHARP_OUTPUT`, used
/// as the default output format when `--format` is absent.
pub fn run(args: &[String], env_format: Option<&str>) -> Outcome {
    let mut argv = vec!["charp".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };

    let format = match cli.format.as_deref().or(env_format).unwrap_or("text") {
        "text" => Format::Text,
        "json" => Format::Json,
        other => {
            return input_failure(format!("unknown output format `{other}`"));
        }
    };

    let order: MonomialOrder = match cli.order.parse() {
        Ok(o) => o,
        Err(msg) => return input_failure(msg),
    };

    let ring = match RingContext::new(cli.p, &cli.base, &cli.vars) {
        Ok(ring) => ring,
        Err(e) => {
            let lifted = lift(e);
            return failure(&lifted);
        }
    };

    let session = Session { ring, order };
    let threads = cli.threads.unwrap_or(1);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => return input_failure(format!("cannot build thread pool: {e}")),
    };
    let dispatched = pool.install(|| dispatch(&session, &cli.command));

    match dispatched {
        Err(e) => failure(&e),
        Ok(output) => {
            let stdout = match format {
                Format::Text => output.text,
                Format::Json => {
                    let mut inputs = json!({
                        "p": cli.p,
                        "base": cli.base,
                        "vars": cli.vars,
                        "order": order.name(),
                    });
                    merge(&mut inputs, output.inputs);
                    let envelope = json!({
                        "command": output.command,
                        "inputs_echo": inputs,
                        "result": output.result,
                        "provenance": output.provenance,
                    });
                    format!("{envelope}\n")
                }
            };
            Outcome {
                code: 0,
                stdout,
                stderr: String::new(),
            }
        }
    }
}

enum Format {
    Text,
    Json,
}

fn failure(err: &CliError) -> Outcome {
    Outcome {
        code: err.code(),
        stdout: String::new(),
        stderr: format!("error: {}\n", err.message()),
    }
}

fn input_failure(msg: impl Into<String>) -> Outcome {
    failure(&CliError::Input(msg.into()))
}
