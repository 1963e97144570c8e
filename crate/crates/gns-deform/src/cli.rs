//! Command-line front end. `run` is the whole program minus process IO.

use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gns_deform_core::dynamics::{heisenberg_evolve, schrodinger_evolve, schrodinger_residual};
use gns_deform_core::formal_scalar::parse_rational;
use gns_deform_core::functionals::{classify, multiply, Functional, Positivity, Product};
use gns_deform_core::gns::{gns_spectrum_graded, weyl_decompose, wick_represent, GnsKind, GnsVector};
use gns_deform_core::star::StarKind;
use gns_deform_core::{CRational, EnvelopePoly, Frame, FrameKind, Poly, Rational};
use serde_json::{json, Value};

use crate::expr::{self, EvalError, Expr, ParseError};
use crate::json::{self, FormatError, FunctionalJson};
use crate::{float, suites};

#[derive(Parser, Debug)]
#[command(name = "gns-deform", version, about = "Exact formal GNS computations for star products")]
pub struct Cli {
    /// Add floating-point approximations next to exact numbers.
    #[arg(long, global = true)]
    pub float: bool,
    /// Default truncation order in λ.
    #[arg(long, global = true, env = "FORMAL_DEFAULT_ORDER", default_value = "6")]
    pub order: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductArg {
    Wick,
    Weyl,
    Wn,
}

impl ProductArg {
    fn star_kind(self) -> StarKind {
        match self {
            ProductArg::Wick => StarKind::Wick,
            ProductArg::Weyl => StarKind::WeylMoyal,
            ProductArg::Wn => StarKind::FormalWickWn,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Heisenberg,
    Schrodinger,
}

#[derive(Args, Debug, Clone)]
pub struct ExprArgs {
    /// Expression; read from stdin when absent or `-`.
    pub expr: Option<String>,
    /// Product used for `@`; inferred from the variables when omitted.
    #[arg(long, value_enum)]
    pub product: Option<ProductArg>,
    /// Number of degrees of freedom (default: largest index used).
    #[arg(long)]
    pub n: Option<usize>,
    /// Gaussian envelope exp(-w|q|^2).
    #[arg(long, default_value = "0")]
    pub width_q: String,
    /// Gaussian envelope exp(-w|p|^2).
    #[arg(long, default_value = "0")]
    pub width_p: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression, `@` being the star product.
    Star(ExprArgs),
    /// Classify ω(conj(f)·f).
    Positivity {
        #[command(flatten)]
        e: ExprArgs,
        /// delta@0, delta@x1,x2.., omega0, omega_p0@p1,.., trace or JSON.
        #[arg(long, default_value = "delta@0")]
        functional: String,
        /// Use the pointwise product instead of the star product.
        #[arg(long)]
        pointwise: bool,
    },
    /// Matrix of π₀(f) on the Wick GNS space up to a degree.
    GnsMatrix {
        #[command(flatten)]
        e: ExprArgs,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// GNS-spectrum of π₀(H) on the degree-D block.
    Spectrum {
        #[command(flatten)]
        e: ExprArgs,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Also substitute λ = ħ.
        #[arg(long)]
        hbar: Option<String>,
    },
    /// Heisenberg or Schrödinger evolution as a Taylor series in t.
    Evolve {
        #[command(flatten)]
        e: ExprArgs,
        #[arg(long)]
        hamiltonian: String,
        #[arg(long, default_value_t = 3)]
        t_order: u32,
        #[arg(long, value_enum, default_value = "heisenberg")]
        mode: Mode,
    },
    /// Split a Weyl observable into head and momentum tails.
    Decompose(ExprArgs),
    /// Substitute λ = ħ.
    Eval {
        #[command(flatten)]
        e: ExprArgs,
        #[arg(long)]
        hbar: String,
    },
    /// Run a randomized property suite.
    Check {
        /// One of the suite names or `all`.
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Core(#[from] gns_deform_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Eval(_) => "eval",
            CliError::Format(_) => "format",
            CliError::Core(_) => "core",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    fn position(&self) -> Option<usize> {
        match self {
            CliError::Parse(p) => Some(p.position),
            _ => None,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn rational_arg(name: &str, s: &str) -> CliResult<Rational> {
    parse_rational(s.trim()).ok_or_else(|| CliError::Usage(format!("--{name}: bad rational {s:?}")))
}

struct Context {
    frame: Frame,
    kind: StarKind,
}

fn read_text(arg: &Option<String>, stdin: &mut dyn Read) -> CliResult<String> {
    match arg.as_deref() {
        Some(s) if s != "-" => Ok(s.to_string()),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(s.trim().to_string())
        }
    }
}

/// Frame and product from the flags, falling back on the variables used.
fn context(args: &ExprArgs, exprs: &[&Expr]) -> CliResult<Context> {
    let implied = exprs.iter().find_map(|e| e.frame_kind());
    let kind = match (args.product, implied) {
        (Some(p), _) => p.star_kind(),
        (None, Some(FrameKind::Wick)) => StarKind::Wick,
        (None, _) => StarKind::WeylMoyal,
    };
    let used = exprs.iter().map(|e| e.max_index()).max().unwrap_or(0);
    let n = args.n.unwrap_or(used.max(1));
    let frame = Frame::new(kind.frame_kind(), n)?;
    Ok(Context { frame, kind })
}

fn envelope_of(args: &ExprArgs, p: Poly) -> CliResult<EnvelopePoly> {
    let wq = rational_arg("width-q", &args.width_q)?;
    let wp = rational_arg("width-p", &args.width_p)?;
    Ok(EnvelopePoly::new(p, wq, wp)?)
}

fn single(args: &ExprArgs, stdin: &mut dyn Read) -> CliResult<(Context, Poly)> {
    let e = expr::parse(&read_text(&args.expr, stdin)?)?;
    let ctx = context(args, &[&e])?;
    let p = expr::eval(&e, ctx.frame, ctx.kind)?;
    Ok((ctx, p))
}

fn poly_out(p: &Poly) -> Value {
    json!({ "poly": json::poly(p), "text": p.to_string() })
}

fn envelope_out(e: &EnvelopePoly) -> Value {
    json!({ "envelope": json::envelope(e), "text": e.poly.to_string() })
}

fn parse_point(list: &str) -> CliResult<Vec<Rational>> {
    list.split(',').map(|s| rational_arg("functional", s)).collect()
}

fn functional_arg(spec: &str, frame: Frame) -> CliResult<Functional> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let j: FunctionalJson = serde_json::from_str(spec).map_err(FormatError::from)?;
        return Ok(j.to_core(frame)?);
    }
    let (name, arg) = match spec.split_once('@') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    Ok(match (name, arg) {
        ("delta", None) | ("delta", Some("0")) => Functional::delta_origin(frame),
        ("delta", Some(pt)) => Functional::delta(frame, parse_point(pt)?.into_iter().map(CRational::real).collect())?,
        ("omega0", None) => Functional::omega0(frame),
        ("omega_p0", Some(pt)) => Functional::omega_p0(frame, parse_point(pt)?)?,
        ("trace", None) => Functional::trace(frame)?,
        _ => return Err(CliError::Usage(format!("unknown functional {spec:?}"))),
    })
}

fn positivity_json(p: &Positivity) -> (&'static str, Value) {
    match p {
        Positivity::Positive(e) => ("positive", json!(json::rational_str(e))),
        Positivity::Zero => ("zero", Value::Null),
        Positivity::Negative(e) => ("negative", json!(json::rational_str(e))),
    }
}

fn gns_vector(v: &GnsVector) -> Value {
    match v {
        GnsVector::Wick(w) => json!({ "wick": json::wick_vector(w) }),
        GnsVector::Weyl(w) => json!({ "weyl": json::wave_function(w) }),
    }
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> CliResult<(String, Value, bool)> {
    let order = rational_arg("order", &cli.order)?;
    Ok(match &cli.command {
        Command::Star(a) => {
            let (_, p) = single(a, stdin)?;
            ("star".into(), poly_out(&p), true)
        }
        Command::Positivity { e, functional, pointwise } => {
            let (ctx, p) = single(e, stdin)?;
            let f = envelope_of(e, p)?;
            let omega = functional_arg(functional, ctx.frame)?;
            let product = if *pointwise { Product::Pointwise } else { Product::Star(ctx.kind) };
            let ff = multiply(product, &f.conj(), &f, &order)?;
            let value = omega.apply(&ff)?;
            let (class, lead) = positivity_json(&classify(&value)?);
            let out = json!({
                "functional": serde_json::to_value(FunctionalJson::from_core(&omega)).expect("serializable"),
                "value": json::pi_series(&value),
                "text": value.to_string(),
                "class": class,
                "leading_exponent": lead,
            });
            ("positivity".into(), out, true)
        }
        Command::GnsMatrix { e, degree } => {
            let (_, p) = single(e, stdin)?;
            ("gns-matrix".into(), json::wick_operator(&wick_represent(&p, *degree)?), true)
        }
        Command::Spectrum { e, degree, hbar } => {
            let (_, p) = single(e, stdin)?;
            let op = wick_represent(&p, *degree)?;
            let spec = gns_spectrum_graded(&op, &order)?;
            let mut out = json!({
                "degree": degree,
                "eigenvalues": spec.iter().map(json::scalar).collect::<Vec<_>>(),
                "text": spec.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            });
            if let Some(h) = hbar {
                let h = rational_arg("hbar", h)?;
                let mut vals = Vec::new();
                for s in &spec {
                    let (v, exact) = s.evaluate_at(&h)?;
                    vals.push(json!({ "value": json::complex(&v), "exact": exact }));
                }
                out["hbar"] = json!(json::rational_str(&h));
                out["hbar_values"] = Value::Array(vals);
            }
            ("spectrum".into(), out, true)
        }
        Command::Evolve { e, hamiltonian, t_order, mode } => {
            let fe = expr::parse(&read_text(&e.expr, stdin)?)?;
            let he = expr::parse(hamiltonian)?;
            let ctx = context(e, &[&fe, &he])?;
            let f = expr::eval(&fe, ctx.frame, ctx.kind)?;
            let h = expr::eval(&he, ctx.frame, ctx.kind)?;
            match mode {
                Mode::Heisenberg => {
                    let ts = heisenberg_evolve(&f, &h, ctx.kind, *t_order)?;
                    let traj: Vec<Value> = ts
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(m, c)| json!({ "t_power": m, "poly": json::poly(c), "text": c.to_string() }))
                        .collect();
                    ("evolve".into(), json!({ "mode": "heisenberg", "trajectory": traj }), true)
                }
                Mode::Schrodinger => {
                    let gk = match ctx.kind {
                        StarKind::Wick => GnsKind::WickDelta,
                        StarKind::WeylMoyal => GnsKind::WeylOmega0,
                        StarKind::FormalWickWn => {
                            return Err(CliError::Usage("schrodinger mode needs --product wick or weyl".into()))
                        }
                    };
                    let traj = schrodinger_evolve(&f, &h, gk, *t_order)?;
                    let res = schrodinger_residual(&traj, &h)?;
                    let vs: Vec<Value> = traj
                        .vectors
                        .iter()
                        .enumerate()
                        .map(|(m, v)| json!({ "t_power": m, "vector": gns_vector(v) }))
                        .collect();
                    let out = json!({
                        "mode": "schrodinger",
                        "trajectory": vs,
                        "residual_zero": res.is_zero(),
                        "residual_checked": res.checked,
                    });
                    ("evolve".into(), out, true)
                }
            }
        }
        Command::Decompose(a) => {
            let (_, p) = single(a, stdin)?;
            let f = envelope_of(a, p)?;
            let d = weyl_decompose(&f)?;
            let back = d.reassemble()? == f;
            let out = json!({
                "head": envelope_out(&d.head),
                "tails": d.tails.iter().map(envelope_out).collect::<Vec<_>>(),
                "reassembles": back,
            });
            ("decompose".into(), out, true)
        }
        Command::Eval { e, hbar } => {
            let (_, p) = single(e, stdin)?;
            let h = rational_arg("hbar", hbar)?;
            let mut all_exact = true;
            let mut terms = Vec::new();
            for (m, c) in p.terms() {
                let (v, exact) = c.evaluate_at(&h)?;
                all_exact &= exact;
                terms.push(json!({
                    "exps": m.exps(),
                    "re": json::rational_str(&v.re),
                    "im": json::rational_str(&v.im),
                }));
            }
            let out = json!({ "hbar": json::rational_str(&h), "terms": terms, "exact": all_exact });
            ("eval".into(), out, true)
        }
        Command::Check { suite, seed, cases } => {
            let reports = suites::run_suite(suite, *seed, *cases).ok_or_else(|| {
                CliError::Usage(format!("unknown suite {suite:?}; known: {}, all", suites::SUITES.join(", ")))
            })?;
            let ok = reports.as_array().expect("array").iter().all(|r| r["failures"].as_array().is_some_and(|f| f.is_empty()));
            ("check".into(), json!({ "seed": seed, "suites": reports, "ok": ok }), ok)
        }
    })
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs the program on `args` (including `argv[0]`); returns the exit code
/// and everything destined for stdout.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (2, render(&json::error_output("usage", e.to_string().trim(), None))),
            };
        }
    };
    match dispatch(&cli, stdin) {
        Ok((command, result, ok)) => {
            let mut v = json::envelope_output(&command, result);
            if cli.float {
                float::annotate(&mut v);
            }
            (if ok { 0 } else { 1 }, render(&v))
        }
        Err(e) => (1, render(&json::error_output(e.kind(), &e.to_string(), e.position()))),
    }
}
