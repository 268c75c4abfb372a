mod inputs;
mod output;

use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;

use bellbound_core::inequality::{classical_bound_guarded, Mode, PairwiseInequality};
use bellbound_core::noise::{noise_quantity_guarded, noisy_curve, partitioned_threshold};
use bellbound_core::optimizer::{gram_ascent_guarded, scan_theta, ThetaFamily, DEFAULT_RESTARTS};
use bellbound_core::polytopes::{
    bipartite_coefficients, complete_coefficients, cut_coefficients, facet_check, membership,
    PolytopeSpec,
};
use bellbound_core::quantum::{bouquet, quantum_value, UnitVectorConfig};
use bellbound_core::reproduce::reproduce_paper;
use bellbound_core::tsirelson::{realize, verify_realization};
use bellbound_core::webs::{
    antiweb_edges, clique_web_inequality, verify_alon_theorem, web_edges, WebSpec,
};
use bellbound_core::Error;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{error_document, Format, Output};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

#[derive(Parser)]
#[command(
    name = "bellbound",
    version,
    about = "Bell inequalities: classical bounds, quantum violations and noise thresholds"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Seed for randomised searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest variable count enumerated exhaustively.
    #[arg(long, global = true, env = "BELLBOUND_GUARD", default_value_t = bellbound_core::inequality::DEFAULT_GUARD)]
    guard: usize,
}

#[derive(Args)]
struct WebArgs {
    #[arg(long)]
    p: usize,
    /// Defaults to `p - 2r - 1`.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    r: usize,
}

impl WebArgs {
    fn spec(&self) -> Result<WebSpec, CliError> {
        Ok(match self.q {
            Some(q) => WebSpec::new(self.p, q, self.r)?,
            None => WebSpec::from_pr(self.p, self.r)?,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Edge set of the web W_p^r (or its antiweb).
    Web {
        #[command(flatten)]
        web: WebArgs,
        #[arg(long)]
        antiweb: bool,
        /// Check the antiweb cut-size theorem instead.
        #[arg(long, conflicts_with = "antiweb")]
        alon: bool,
    },
    /// Clique-web inequality in ±1 form (or cut form).
    Cliqueweb {
        #[command(flatten)]
        web: WebArgs,
        #[arg(long)]
        cut: bool,
    },
    /// Bouquet vector configuration.
    Bouquet {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Cone half-angle in radians.
        #[arg(
            long,
            allow_negative_numbers = true,
            required_unless_present = "theta_pi",
            conflicts_with = "theta_pi"
        )]
        theta: Option<f64>,
        /// Cone half-angle in multiples of pi.
        #[arg(long)]
        theta_pi: Option<f64>,
    },
    /// Normalised quantum value of an inequality on a vector configuration.
    Qvalue {
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        vectors: String,
        /// Use `+x·y` (one party, transported) instead of the singlet `-x·y`.
        #[arg(long)]
        transported: bool,
    },
    /// Exact classical bound by enumeration.
    ClassicalBound {
        #[arg(long)]
        ineq: String,
    },
    /// Membership of a point in a Bell, cut or correlation polytope.
    Member {
        /// bellN, bellNxM (or bellNM for single digits), cutN, corN.
        #[arg(long)]
        polytope: String,
        #[arg(long)]
        point: String,
    },
    /// Validity and facet status of an inequality on a polytope.
    FacetCheck {
        #[arg(long)]
        polytope: String,
        #[arg(
            long,
            required_unless_present = "coefficients",
            conflicts_with = "coefficients"
        )]
        ineq: Option<String>,
        /// File with `{"coefficients": [...], "rhs": r}` in polytope coordinates.
        #[arg(long)]
        coefficients: Option<String>,
    },
    /// Operator realisation of a vector configuration and its verification.
    Tsirelson {
        #[arg(long)]
        vectors: String,
        /// Include the observables and state as [re, im] arrays.
        #[arg(long)]
        operators: bool,
    },
    /// Werner-state threshold and noisy value curve. Bipartite inequalities
    /// take singlet-convention vectors; the right block is negated so that
    /// every pair uses transported correlations.
    Werner {
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        vectors: String,
        /// Evaluate at this visibility only.
        #[arg(long)]
        eta: Option<f64>,
        /// Grid size of the curve on (0, 1].
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Noise quantity N: total |b| weight minus the maximum cut.
    Maxcut {
        #[arg(long)]
        ineq: String,
    },
    /// Bouquet violation as a function of the cone angle.
    ScanTheta {
        /// b12 or b2k1.
        #[arg(long)]
        family: String,
        #[arg(long, required_if_eq("family", "b2k1"))]
        k: Option<usize>,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Coordinate ascent over unit vectors for a coefficient family.
    Gram {
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Recompute every reproduced claim as a pass/fail table.
    ReproducePaper,
}

fn num(x: f64) -> Value {
    json!(x)
}

fn run(cli: Cli) -> Result<(Output, bool), CliError> {
    let g = &cli.global;
    let out = match cli.command {
        Command::Web { web, antiweb, alon } => {
            let spec = web.spec()?;
            if alon {
                Output::new(&verify_alon_theorem(&spec)?)
            } else if antiweb {
                Output::new(&antiweb_edges(&spec))
            } else {
                let edges = web_edges(&spec);
                let rows = edges
                    .iter()
                    .map(|(i, j)| vec![json!(i), json!(j)])
                    .collect();
                Output::new(&edges).with_table(&["i", "j"], rows)
            }
        }
        Command::Cliqueweb { web, cut } => {
            let ineq = clique_web_inequality(&web.spec()?);
            if cut {
                let c = ineq.to_cut_form()?;
                let coefficients: Vec<Value> = c
                    .coefficients
                    .iter()
                    .map(|(&(i, j), &v)| json!({"i": i, "j": j, "value": v}))
                    .collect();
                let rows = c
                    .coefficients
                    .iter()
                    .map(|(&(i, j), &v)| vec![json!(i), json!(j), num(v)])
                    .collect();
                Output::new(&json!({"n": c.n, "coefficients": coefficients, "rhs": c.rhs}))
                    .with_table(&["i", "j", "value"], rows)
            } else {
                inequality_output(&ineq)
            }
        }
        Command::Bouquet {
            p,
            q,
            theta,
            theta_pi,
        } => {
            let theta = theta.unwrap_or_else(|| theta_pi.unwrap_or(0.0) * PI);
            let cfg = bouquet(p, q, theta)?;
            vectors_output(&cfg)
        }
        Command::Qvalue {
            ineq,
            vectors,
            transported,
        } => {
            let report = quantum_value(
                &inputs::inequality(&ineq)?,
                &inputs::vectors(&vectors)?,
                transported,
            )?;
            Output::new(&json!({
                "quantum_value": report.quantum_value,
                "raw_value": report.raw_value,
                "classical_bound_normalized": report.classical_bound_normalized,
                "violated": report.violated,
                "transported": report.transported,
            }))
        }
        Command::ClassicalBound { ineq } => {
            let r = classical_bound_guarded(&inputs::inequality(&ineq)?, g.guard)?;
            Output::new(&r)
        }
        Command::Member { polytope, point } => {
            let spec: PolytopeSpec = polytope.parse()?;
            Output::new(&membership(&spec, &inputs::point(&point)?)?)
        }
        Command::FacetCheck {
            polytope,
            ineq,
            coefficients,
        } => {
            let spec: PolytopeSpec = polytope.parse()?;
            let (coeffs, rhs) = match (ineq, coefficients) {
                (Some(name), _) => polytope_coefficients(&spec, &inputs::inequality(&name)?)?,
                (None, Some(path)) => {
                    let f = inputs::coefficients(&path)?;
                    (f.coefficients, f.rhs)
                }
                (None, None) => {
                    return Err(CliError::Usage("need --ineq or --coefficients".into()))
                }
            };
            Output::new(&facet_check(&spec, &coeffs, rhs)?)
        }
        Command::Tsirelson { vectors, operators } => {
            let cfg = inputs::vectors(&vectors)?;
            let real = realize(&cfg)?;
            let report = verify_realization(&real, &cfg);
            let mut doc = json!({
                "n": cfg.len(),
                "dimension": real.d,
                "max_deviation": report.max_deviation(),
                "passes": report.passes(1e-10),
                "report": report,
            });
            if operators {
                doc["realization"] = serde_json::to_value(&real).expect("serialisable");
            }
            Output::new(&doc)
        }
        Command::Werner {
            ineq,
            vectors,
            eta,
            points,
        } => {
            let b = inputs::inequality(&ineq)?;
            let cfg = transported_vectors(&b, inputs::vectors(&vectors)?)?;
            let threshold = partitioned_threshold(&b, &cfg)?;
            let etas: Vec<f64> = match eta {
                Some(e) => vec![e],
                None => {
                    if points == 0 {
                        return Err(CliError::Usage("--points must be positive".into()));
                    }
                    (1..=points).map(|k| k as f64 / points as f64).collect()
                }
            };
            let curve = noisy_curve(&b, &cfg, &etas)?;
            let rows = curve.iter().map(|&(e, v)| vec![num(e), num(v)]).collect();
            let curve: Vec<Value> = curve
                .iter()
                .map(|&(e, v)| json!({"eta": e, "violation": v}))
                .collect();
            Output::new(&json!({"threshold": threshold, "curve": curve}))
                .with_table(&["eta", "violation"], rows)
        }
        Command::Maxcut { ineq } => {
            let b = inputs::inequality(&ineq)?;
            Output::new(&noise_quantity_guarded(&b, g.guard)?)
        }
        Command::ScanTheta { family, k, points } => {
            let family = match (family.as_str(), k) {
                ("b12", _) => ThetaFamily::Bouquet12,
                ("b2k1", Some(k)) => ThetaFamily::Bouquet2k1 { k },
                ("b2k1", None) => return Err(CliError::Usage("b2k1 needs --k".into())),
                (other, _) => {
                    return Err(CliError::Usage(format!(
                        "unknown family '{other}' (b12 or b2k1)"
                    )))
                }
            };
            let scan = scan_theta(family, points)?;
            let rows = scan
                .grid
                .iter()
                .map(|&(t, v)| vec![num(t), num(v)])
                .collect();
            Output::new(&scan).with_table(&["theta", "value"], rows)
        }
        Command::Gram {
            ineq,
            dim,
            restarts,
        } => {
            let a = inputs::inequality(&ineq)?;
            Output::new(&gram_ascent_guarded(&a, dim, restarts, g.seed, g.guard)?)
        }
        Command::ReproducePaper => {
            let rows = reproduce_paper();
            let all_pass = rows.iter().all(|r| r.pass);
            let table = rows
                .iter()
                .map(|r| {
                    vec![
                        json!(r.claim_id),
                        num(r.expected),
                        num(r.computed),
                        num(r.tolerance),
                        json!(if r.pass { "PASS" } else { "FAIL" }),
                        serde_json::to_value(r.kind).expect("kind"),
                        json!(r.description),
                    ]
                })
                .collect();
            let out = Output::new(&rows).with_table(
                &[
                    "claim_id",
                    "expected",
                    "computed",
                    "tolerance",
                    "result",
                    "kind",
                    "description",
                ],
                table,
            );
            return Ok((out, all_pass));
        }
    };
    Ok((out, true))
}

fn inequality_output(ineq: &PairwiseInequality) -> Output {
    let rows = ineq
        .flat_pairs()
        .map(|(i, j, v)| vec![json!(i), json!(j), num(v)])
        .collect();
    Output::new(ineq).with_table(&["i", "j", "value"], rows)
}

fn vectors_output(cfg: &UnitVectorConfig) -> Output {
    let rows = cfg
        .vectors()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            std::iter::once(json!(k))
                .chain(v.iter().map(|&c| num(c)))
                .collect()
        })
        .collect();
    let headers: Vec<String> = std::iter::once("index".to_string())
        .chain((0..cfg.dim()).map(|d| format!("x{d}")))
        .collect();
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    Output::new(cfg).with_table(&headers, rows)
}

/// Coefficient vector of `ineq` in the coordinates of `spec`.
fn polytope_coefficients(
    spec: &PolytopeSpec,
    ineq: &PairwiseInequality,
) -> Result<(Vec<f64>, f64), CliError> {
    let mismatch =
        |what: &str| CliError::Compute(Error::Dimension(format!("{what} does not fit {spec}")));
    match *spec {
        PolytopeSpec::BellComplete { n }
            if ineq.mode() == Mode::Complete && ineq.variable_count() == n =>
        {
            Ok((complete_coefficients(ineq), ineq.rhs()))
        }
        PolytopeSpec::BellBipartite { n, m }
            if ineq.mode() == Mode::Bipartite && ineq.n_left() == n && ineq.n_right() == m =>
        {
            Ok((bipartite_coefficients(ineq), ineq.rhs()))
        }
        PolytopeSpec::Cut { n } if ineq.mode() == Mode::Complete && ineq.variable_count() == n => {
            let cut = ineq.to_cut_form()?;
            Ok((cut_coefficients(&cut), cut.rhs))
        }
        _ => Err(mismatch("inequality")),
    }
}

/// Negates the right block of a bipartite configuration so singlet
/// correlations `-x·y` become transported ones `+x·(-y)`.
fn transported_vectors(
    b: &PairwiseInequality,
    cfg: UnitVectorConfig,
) -> Result<UnitVectorConfig, CliError> {
    if b.mode() == Mode::Complete {
        return Ok(cfg);
    }
    let n_left = b.n_left();
    let vecs = cfg
        .vectors()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k < n_left {
                v.clone()
            } else {
                v.iter().map(|c| -c).collect()
            }
        })
        .collect();
    Ok(UnitVectorConfig::new(cfg.dim(), vecs)?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.global.format;
    match run(cli) {
        Ok((out, ok)) => {
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout(), "{}", out.render(format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("{}", error_document("usage", &msg));
            ExitCode::from(2)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("{}", error_document("input", &msg));
            ExitCode::from(1)
        }
        Err(CliError::Compute(e)) => {
            let kind = match e {
                Error::Dimension(_) => "dimension",
                Error::Parameter(_) => "parameter",
                Error::ResourceLimit { .. } => "resource_limit",
                Error::NonConvergence { .. } => "non_convergence",
                Error::Format(_) => "format",
            };
            eprintln!("{}", error_document(kind, &e.to_string()));
            ExitCode::from(1)
        }
    }
}
