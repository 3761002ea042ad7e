//! `veronese`: command-line front end.
//!
//! Exit codes: 0 success, 1 verification negative, 2 usage or invalid input,
//! 3 budget exceeded.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use veronese_core::cohomology::{cohomology_orders, CyclicAction, DEFAULT_I_MAX};
use veronese_core::geometry::{
    fiber_check_with_budget, jacobian_rank, GeometryError, DEFAULT_FIBER_BUDGET,
};
use veronese_core::gluing::{completely_p_glued, default_s_cap, SemigroupGens};
use veronese_core::reproduce::run_all;
use veronese_core::sci::{
    build_certificate, default_k_max, full_ideal_point_survey, point_survey, verify_char_p,
    PointSetReport, SciError, SurveyMode, DEFAULT_ENUMERATION_BUDGET,
};
use veronese_core::toric::{quadratic_generators, rewrite, GeneratorStyle, TypeStarBinomial};
use veronese_core::veronese::{IndexTuple, Veronese, VeroneseParams, DEFAULT_Q_CAP};
use veronese_core::SCHEMA_VERSION;

const THREADS_ENV: &str = "VERONESE_THREADS";

#[derive(Parser)]
#[command(
    name = "veronese",
    version,
    about = "Exact computations on Veronese varieties"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for parallel enumeration.
    #[arg(long, env = THREADS_ENV, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    h: u32,
    /// Refuse q = p^h above this.
    #[arg(long, default_value_t = DEFAULT_Q_CAP)]
    q_cap: u64,
}

impl ParamArgs {
    fn veronese(&self) -> Result<Veronese, Failure> {
        let params =
            VeroneseParams::with_cap(self.n, self.p, self.h, self.q_cap).map_err(Failure::usage)?;
        for w in params.warnings() {
            eprintln!("warning: {w}");
        }
        Ok(Veronese::new(params))
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Style {
    Star,
    Full,
}

impl From<Style> for GeneratorStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::Star => GeneratorStyle::Star,
            Style::Full => GeneratorStyle::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum PointSet {
    Certificate,
    Full,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Mode {
    Enumerate,
    Image,
}

#[derive(Subcommand)]
enum Command {
    /// List the exponent set T with its index tuples.
    Enumerate(ParamArgs),
    /// The quadratic generators of the toric ideal.
    Generators {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = Style::Star)]
        style: Style,
    },
    /// Rewrite a type-(*) binomial through quadratics. Reads JSON
    /// `{"n","p","h","blocks":[[..],..],"sigma":[..]}` from a file or `-`.
    Rewrite { input: PathBuf },
    /// The N-binomial certificate.
    Certificate(ParamArgs),
    /// Frobenius-power verification of the certificate over F_p.
    VerifySci {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        k_max: Option<u32>,
    },
    /// Compare a zero set with V over F_r.
    Points {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        r: u64,
        #[arg(long, value_enum, default_value_t = PointSet::Certificate)]
        set: PointSet,
        #[arg(long, value_enum, default_value_t = Mode::Enumerate)]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u64,
    },
    /// Completely p-glued witness tree of the exponent semigroup.
    Gluing {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        s_cap: Option<u32>,
    },
    /// Jacobian rank of the quadratic generators at a point.
    Jacobian {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        r: u64,
        /// Parameter point u; the Jacobian is taken at its image.
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "point",
            required_unless_present = "point"
        )]
        u: Option<Vec<u64>>,
        /// Ambient point w, one coordinate per tuple.
        #[arg(long, value_delimiter = ',')]
        point: Option<Vec<u64>>,
    },
    /// Fiber of the parametrization over phi(u) against the roots-of-unity orbit.
    Fibers {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        r: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_FIBER_BUDGET)]
        budget: u64,
    },
    /// Orders of H^i(Z/q, Z/q) with generator acting by a.
    Cohomology {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: u64,
        #[arg(long, default_value_t = DEFAULT_I_MAX)]
        i_max: usize,
    },
    /// Run the full acceptance matrix.
    ReproducePaper,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<SciError> for Failure {
    fn from(e: SciError) -> Self {
        let code = match e {
            SciError::BudgetExceeded { .. } => 3,
            SciError::KMaxExceeded { .. } => 1,
            SciError::Poly(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        let code = match e {
            GeometryError::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// A report plus the exit status it implies.
struct Report {
    json: Value,
    text: String,
    negative: bool,
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.entry("schema_version").or_insert(json!(SCHEMA_VERSION));
    }
    v
}

#[derive(Deserialize)]
struct RewriteInput {
    n: usize,
    p: u64,
    h: u32,
    blocks: Vec<IndexTuple>,
    sigma: Vec<usize>,
}

#[derive(Serialize)]
struct RewriteOutput {
    schema_version: u32,
    binomial: String,
    verified: bool,
    steps: Vec<veronese_core::toric::RewriteStepJson>,
}

fn fmt_point(x: &[u64]) -> String {
    let parts: Vec<String> = x.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn survey_text(rep: &PointSetReport, what: &str) -> String {
    let opt = |x: Option<u64>| x.map_or("-".to_string(), |c| c.to_string());
    let mut s = format!(
        "F_{}: {what} zeros {}, points of V {}, image {}, image inside zero set: {}\n",
        rep.r,
        opt(rep.count_cert),
        opt(rep.count_v),
        rep.count_image,
        rep.image_in_zero_set
    );
    match &rep.witness {
        Some(w) => s += &format!("witness off V: {}\n", fmt_point(w)),
        None => s += "no witness\n",
    }
    s
}

fn run(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Enumerate(pa) => {
            let v = pa.veronese()?;
            let names = v.variable_names();
            let listing = v.listing();
            let mut text = format!("|T| = {}, N = {}\n", v.len(), v.codimension());
            for (e, name) in listing.iter().zip(&names) {
                let a: Vec<String> = e.exponent.0.iter().map(u32::to_string).collect();
                text += &format!("{name}  ({})\n", a.join(","));
            }
            Ok(Report {
                json: json!({
                    "params": v.params(),
                    "size": v.len(),
                    "codimension": v.codimension(),
                    "entries": listing.iter().zip(&names).map(|(e, name)| json!({
                        "name": name, "tuple": e.tuple, "exponent": e.exponent,
                    })).collect::<Vec<_>>(),
                }),
                text,
                negative: false,
            })
        }
        Command::Generators { params, style } => {
            let v = params.veronese()?;
            let names = v.variable_names();
            let gens: Vec<String> = quadratic_generators(&v, style.into())
                .iter()
                .map(|b| b.format(&names))
                .collect();
            Ok(Report {
                text: gens.join("\n") + "\n",
                json: json!({ "params": v.params(), "generators": gens }),
                negative: false,
            })
        }
        Command::Rewrite { input } => {
            let mut raw = String::new();
            if input.as_os_str() == "-" {
                std::io::stdin()
                    .read_to_string(&mut raw)
                    .map_err(Failure::usage)?;
            } else {
                raw = std::fs::read_to_string(&input)
                    .map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
            }
            let spec: RewriteInput = serde_json::from_str(&raw).map_err(Failure::usage)?;
            let v = ParamArgs {
                n: spec.n,
                p: spec.p,
                h: spec.h,
                q_cap: DEFAULT_Q_CAP,
            }
            .veronese()?;
            let f = TypeStarBinomial {
                blocks: spec.blocks,
                sigma: spec.sigma,
            };
            let target = f.to_int_poly(&v).map_err(Failure::usage)?;
            let cert = rewrite(&v, &f).map_err(Failure::usage)?;
            let names = v.variable_names();
            let out = RewriteOutput {
                schema_version: SCHEMA_VERSION,
                binomial: target.format_with(&names),
                verified: cert.verifies(&target),
                steps: cert.to_json(&names),
            };
            let mut text = format!("{}\n", out.binomial);
            for s in &out.steps {
                let sign = if s.sign > 0 { '+' } else { '-' };
                text += &format!("  {sign} ({}) * {}\n", s.quadratic, s.cofactor);
            }
            text += &format!("expansion matches: {}\n", out.verified);
            Ok(Report {
                negative: !out.verified,
                json: serde_json::to_value(&out).unwrap(),
                text,
            })
        }
        Command::Certificate(pa) => {
            let v = pa.veronese()?;
            let c = build_certificate(&v).to_json(&v);
            Ok(Report {
                text: c.binomials.join("\n") + "\n",
                json: serde_json::to_value(&c).unwrap(),
                negative: false,
            })
        }
        Command::VerifySci { params, k_max } => {
            let v = params.veronese()?;
            let k_max = k_max.unwrap_or_else(|| default_k_max(params.h));
            let cert = verify_char_p(&v, &build_certificate(&v), k_max)?;
            let w = cert.witnesses_json(&v);
            let mut text = format!(
                "I(V) lies in the radical of the {} certificate binomials over F_{}\n",
                cert.len(),
                params.p
            );
            for x in &w {
                text += &format!("  k = {}: {}\n", x.k, x.generator);
            }
            Ok(Report {
                json: json!({ "params": v.params(), "k_max": k_max, "verified": true, "witnesses": w }),
                text,
                negative: false,
            })
        }
        Command::Points {
            params,
            r,
            set,
            mode,
            budget,
        } => {
            let v = params.veronese()?;
            let mode = match mode {
                Mode::Enumerate => SurveyMode::FullEnumeration,
                Mode::Image => SurveyMode::ImageOnly,
            };
            let (rep, what, witness_expected) = match set {
                PointSet::Certificate => (
                    point_survey(&v, &build_certificate(&v), r, mode, budget)?,
                    "certificate",
                    r != params.p,
                ),
                PointSet::Full => (full_ideal_point_survey(&v, r, budget)?, "full ideal", false),
            };
            let negative = (rep.witness.is_some() && !witness_expected) || !rep.image_in_zero_set;
            Ok(Report {
                text: survey_text(&rep, what),
                json: serde_json::to_value(&rep).unwrap(),
                negative,
            })
        }
        Command::Gluing { params, s_cap } => {
            let v = params.veronese()?;
            let s_cap = s_cap.unwrap_or_else(|| default_s_cap(params.h));
            let gens = SemigroupGens::of_veronese(&v);
            match completely_p_glued(&gens, params.p, params.h, s_cap) {
                Ok(tree) => {
                    let valid = tree.validate(params.p);
                    let mut text = format!(
                        "completely {}-glued, {} gluing steps, depth {}\n",
                        params.p,
                        tree.node_count(),
                        tree.depth()
                    );
                    for g in tree.peel_sequence() {
                        text += &format!("  peel {}\n", fmt_point(&g));
                    }
                    if let Err(e) = &valid {
                        text += &format!("revalidation failed: {e}\n");
                    }
                    Ok(Report {
                        json: json!({ "params": v.params(), "glued": true, "validated": valid.is_ok(), "tree": tree }),
                        text,
                        negative: valid.is_err(),
                    })
                }
                Err(e) => Ok(Report {
                    json: json!({ "params": v.params(), "glued": false, "reason": e.to_string() }),
                    text: format!("not shown to be completely glued: {e}\n"),
                    negative: true,
                }),
            }
        }
        Command::Jacobian {
            params,
            r,
            u,
            point,
        } => {
            let v = params.veronese()?;
            let w = match (u, point) {
                (Some(u), _) => {
                    if u.len() != v.n() {
                        return Err(Failure::usage(format!("--u needs {} coordinates", v.n())));
                    }
                    let field = veronese_core::poly::PrimeField::new(r).map_err(Failure::usage)?;
                    v.parametrize(&u, field)
                }
                (None, Some(w)) => w,
                (None, None) => unreachable!("clap requires one of --u, --point"),
            };
            let b = quadratic_generators(&v, GeneratorStyle::Full);
            let rep = jacobian_rank(&v, &b, &w, r)?;
            let text = format!(
                "w = {}\nrank {} (N = {}), J' lower triangular: {}, diagonal {}, relabeling {:?}\n",
                fmt_point(&rep.point),
                rep.rank,
                rep.codimension,
                rep.triangular_submatrix_ok,
                rep.diagonal_value,
                rep.permutation
            );
            Ok(Report {
                negative: !rep.triangular_submatrix_ok,
                json: serde_json::to_value(&rep).unwrap(),
                text,
            })
        }
        Command::Fibers {
            params,
            r,
            u,
            budget,
        } => {
            let v = params.veronese()?;
            let rep = fiber_check_with_budget(&v, r, &u, budget)?;
            let pts = |xs: &[Vec<u64>]| {
                xs.iter()
                    .map(|x| fmt_point(x))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let text = format!(
                "mu_{} = {:?}\nfiber: {}\norbit: {}\nequal: {}\n",
                rep.q,
                rep.roots_of_unity,
                pts(&rep.fiber),
                pts(&rep.orbit),
                rep.equal
            );
            Ok(Report {
                negative: !rep.equal,
                json: serde_json::to_value(&rep).unwrap(),
                text,
            })
        }
        Command::Cohomology { q, a, i_max } => {
            let act = CyclicAction::new(q, a).map_err(Failure::usage)?;
            let t = cohomology_orders(&act, i_max);
            let mut text = format!(
                "q = {q}, a = {}, Nm = {}, D = {}\n",
                t.a, t.norm, t.difference
            );
            for (i, o) in &t.orders {
                text += &format!("  |H^{i}| = {o}\n");
            }
            Ok(Report {
                negative: !(t.all_equal && t.nonvanishing),
                json: serde_json::to_value(&t).unwrap(),
                text,
            })
        }
        Command::ReproducePaper => {
            let outcomes = run_all();
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let mut text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            text += &format!(
                "{} of {} criteria passed\n",
                outcomes.len() - failed,
                outcomes.len()
            );
            Ok(Report {
                json: json!({ "criteria": outcomes, "passed": failed == 0 }),
                text,
                negative: failed > 0,
            })
        }
    }
}

fn emit(cli_format: Format, output: Option<&PathBuf>, report: &Report) -> std::io::Result<()> {
    let body = match cli_format {
        Format::Json => {
            serde_json::to_string_pretty(&with_schema(report.json.clone())).unwrap() + "\n"
        }
        Format::Text => report.text.clone(),
    };
    match output {
        Some(path) => std::fs::write(path, body),
        None => std::io::stdout().write_all(body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(report) => {
            if let Err(e) = emit(cli.format, cli.output.as_ref(), &report) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(report.negative as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
