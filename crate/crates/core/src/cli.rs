//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input,
//! 3 unsupported (non-convergent fractions, square discriminants).

use crate::cf::{eval_finite, eval_periodic, expand_quadratic, expand_rational, parse_cf, CfError, ParsedCf, Parity, ProjectiveValue};
use crate::exactnum::{decimal, parse_rational, NumError, Scalar};
use crate::forms::{lls_of_form, reduce, FormError};
use crate::geometry::{is_f_broken_line, lls, reconstruct, signature, GeometryError, LlsSequence};
use crate::io::{self, to_json, IoError, LineJson, SailJson, SceneJson};
use crate::perron::{classical_perron, identity_table, verify_identity, PerronError};
use crate::render::{render, RenderError, Scene};
use crate::sail::{angles_of_form, compare_with_oracle, markov_minimum_bruteforce, markov_minimum_sails, sail_bruteforce, sails_of_form, OracleVerdict, SailError};
use clap::{Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::io::Write;

#[derive(Parser, Debug)]
#[command(name = "perron", version, about = "Exact LLS sequences, Perron identities, sails and Markov minima")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// LLS sequence of a broken line.
    Lls {
        /// Broken-line JSON, inline or a file path.
        #[arg(long)]
        line: String,
    },
    /// Sign of det(OA_0, OA_n).
    Signature {
        /// Broken-line JSON, inline or a file path
        #[arg(long)]
        line: String,
    },
    /// Broken line with A_0 = (1, 0) realizing an LLS sequence.
    Reconstruct {
        /// Comma-separated entries, e.g. "1,-1,1".
        #[arg(long, allow_hyphen_values = true)]
        lls: String,
    },
    /// Continued fraction expansion and evaluation.
    Cf {
        #[command(subcommand)]
        op: CfCmd,
    },
    /// Reduced form, basis change and LLS sequence of a form.
    Reduce {
        /// Form JSON, inline or a file path.
        #[arg(long)]
        form: String,
    },
    /// Checks the generalized Perron identity at the vertices of an f-broken line.
    Verify {
        /// Form JSON, inline or a file path
        #[arg(long)]
        form: String,
        /// Broken-line JSON, inline or a file path
        #[arg(long)]
        line: String,
        /// Report only vertex A_K.
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Markov minimum via the classical Perron formula.
    Spectrum {
        /// Form JSON, inline or a file path
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// The four sails of a form.
    Sail {
        /// Form JSON, inline or a file path
        #[arg(long)]
        form: String,
        /// Vertices on each side of the anchor vertex.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Box radius for the brute-force oracle.
        #[arg(long, default_value_t = 50)]
        radius: u32,
        /// Compare with the brute-force hull.
        #[arg(long)]
        oracle: bool,
        /// Print the sails as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Markov minimum from sail vertices.
    Markov {
        /// Form JSON, inline or a file path
        #[arg(long)]
        form: String,
        /// Also search the lattice box of this radius and compare.
        #[arg(long)]
        radius: Option<u32>,
        /// Cap on the vertices searched for a period.
        #[arg(long, default_value_t = 4096)]
        depth: usize,
    },
    /// SVG figure of a scene.
    Render {
        /// Scene JSON, inline or a file path
        #[arg(long)]
        scene: String,
        /// Output SVG path
        #[arg(long)]
        out: String,
    },
}

#[derive(Subcommand, Debug)]
enum CfCmd {
    /// Regular expansion of a rational "p/q" or a surd {"p":..,"q":..,"r":..,"D":..}.
    Expand {
        #[arg(allow_hyphen_values = true)]
        value: String,
        #[arg(long, value_enum, default_value_t = ParityArg::Any)]
        parity: ParityArg,
    },
    /// Value of "[a0; a1 : a2]" or "[a0; (p0 : p1)]".
    Eval {
        #[arg(allow_hyphen_values = true)]
        cf: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ParityArg {
    Any,
    Even,
    Odd,
}

#[derive(Debug)]
enum Failure {
    Verification(String),
    Invalid(String),
    Unsupported(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Unsupported(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Invalid(m) | Failure::Unsupported(m) => m,
        }
    }
}

impl From<NumError> for Failure {
    fn from(e: NumError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Form(e) => e.into(),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<CfError> for Failure {
    fn from(e: CfError) -> Self {
        match e {
            CfError::NonConvergent | CfError::DegeneratePeriod => Failure::Unsupported(e.to_string()),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<FormError> for Failure {
    fn from(e: FormError) -> Self {
        match e {
            FormError::Unsupported(_) | FormError::SquareDiscriminant => Failure::Unsupported(e.to_string()),
            FormError::Cf(e) => e.into(),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<PerronError> for Failure {
    fn from(e: PerronError) -> Self {
        match e {
            PerronError::SquareDiscriminant => Failure::Unsupported(e.to_string()),
            PerronError::Cf(e) => e.into(),
            PerronError::Form(e) => e.into(),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<SailError> for Failure {
    fn from(e: SailError) -> Self {
        match e {
            SailError::SquareDiscriminant | SailError::NoPeriod => Failure::Unsupported(e.to_string()),
            SailError::IdentityMismatch { .. } => Failure::Verification(e.to_string()),
            SailError::Form(e) => e.into(),
            SailError::Perron(e) => e.into(),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<RenderError> for Failure {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::Io(e) => e.into(),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

/// Exact value, with a 12-digit decimal when it is not an integer.
fn show(x: &Scalar) -> String {
    if x.is_integer() {
        x.to_string()
    } else {
        format!("{x} ({})", decimal(x, 12))
    }
}

fn show_projective(x: &ProjectiveValue) -> String {
    match x {
        ProjectiveValue::Finite(v) => show(v),
        ProjectiveValue::Infinity => "infinity".into(),
    }
}

type Out<'a> = &'a mut dyn Write;

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn w(out: Out, text: impl AsRef<str>) -> Result<(), Failure> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| Failure::Invalid(format!("cannot write output: {e}")))
}

fn dispatch(cmd: Cmd, out: Out) -> Result<(), Failure> {
    match cmd {
        Cmd::Lls { line } => {
            let b = io::read_line(&line)?;
            w(out, lls(&b)?.to_string())
        }
        Cmd::Signature { line } => {
            let b = io::read_line(&line)?;
            w(out, signature(&b)?.to_string())
        }
        Cmd::Reconstruct { lls: text } => {
            let entries = text
                .split(',')
                .map(|t| parse_rational(t.trim()).map(|r| Scalar::from_rational(&r)))
                .collect::<Result<Vec<_>, _>>()?;
            let s = LlsSequence::new(entries)?;
            w(out, to_json(&LineJson::from_line(&reconstruct(&s))))
        }
        Cmd::Cf { op } => cf(op, out),
        Cmd::Reduce { form } => {
            let f = io::read_form(&form)?;
            let r = reduce(&f)?;
            w(out, format!("form: {f}"))?;
            w(out, format!("alpha: {}", show(&r.alpha)))?;
            w(out, format!("beta: {}", show(&r.beta)))?;
            w(out, format!("scale: {}", show(&Scalar::from_rational(&r.scale))))?;
            w(out, format!("basis: {}", r.witness))?;
            w(out, format!("lls: {}", lls_of_form(&f)?))
        }
        Cmd::Verify { form, line, vertex } => verify(&form, &line, vertex, out),
        Cmd::Spectrum { form, window } => {
            let f = io::read_form(&form)?;
            let r = classical_perron(&f, window)?;
            w(out, format!("form: {f}"))?;
            w(out, format!("discriminant: {}", show(&Scalar::from_rational(&f.discriminant()))))?;
            w(out, format!("minimum: {}", show(&r.minimum)))?;
            w(out, format!("witness: {}", r.witness))?;
            w(out, format!("term: i = {}, denominator = {}", r.term.index, show_projective(&r.term.denominator)))?;
            w(out, format!("sqrt(discriminant)/minimum: {}", show(&r.normalized)))
        }
        Cmd::Sail { form, depth, radius, oracle, json } => sail(&form, depth, radius, oracle, json, out),
        Cmd::Markov { form, radius, depth } => {
            let f = io::read_form(&form)?;
            let r = markov_minimum_sails(&f, depth)?;
            w(out, format!("form: {f}"))?;
            w(out, format!("minimum: {}", show(&r.minimum)))?;
            w(out, format!("witness: {}", r.witness))?;
            w(out, format!("identity denominator: {}", show_projective(&r.term.denominator)))?;
            w(out, format!("sqrt(discriminant)/minimum: {}", show(&r.normalized)))?;
            if let Some(radius) = radius {
                let (m, p) = markov_minimum_bruteforce(&f, radius);
                w(out, format!("box search (radius {radius}): {} at {p}", show(&m)))?;
                if m != r.minimum {
                    return Err(Failure::Verification("sail minimum disagrees with the box search".into()));
                }
            }
            Ok(())
        }
        Cmd::Render { scene, out: path } => {
            let s: SceneJson = io::parse(&scene)?;
            let svg = render(&Scene::from_json(&s)?)?;
            std::fs::write(&path, svg).map_err(|e| Failure::Invalid(format!("cannot write {path}: {e}")))?;
            w(out, format!("wrote {path}"))
        }
    }
}

fn cf(op: CfCmd, out: Out) -> Result<(), Failure> {
    match op {
        CfCmd::Expand { value, parity } => {
            let x = io::parse_scalar(&value)?;
            match x.to_rational() {
                Some(r) => {
                    let p = match parity {
                        ParityArg::Any => Parity::Any,
                        ParityArg::Even => Parity::EvenLength,
                        ParityArg::Odd => Parity::OddLength,
                    };
                    w(out, expand_rational(&r, p).to_string())
                }
                None => w(out, expand_quadratic(&x)?.to_string()),
            }
        }
        CfCmd::Eval { cf } => {
            let v = match parse_cf(&cf)? {
                ParsedCf::Finite(c) => eval_finite(&c),
                ParsedCf::Periodic(c) => eval_periodic(&c)?,
            };
            w(out, show_projective(&v))
        }
    }
}

fn verify(form: &str, line: &str, vertex: Option<usize>, out: Out) -> Result<(), Failure> {
    let f = io::read_form(form)?;
    let b = io::read_line(line)?;
    let f_broken = is_f_broken_line(&b, &f)?;
    let report = if f_broken { verify_identity(&f, &b)? } else { identity_table(&f, &b)? };
    w(out, format!("form: {f}"))?;
    w(out, format!("sqrt(discriminant): {}", show(&report.sqrt_discriminant)))?;
    w(out, format!("signature: {}  orientation: {}", report.sign, report.orientation))?;
    match vertex {
        Some(k) => {
            let c = report
                .checks
                .iter()
                .find(|c| c.index == k)
                .ok_or_else(|| Failure::Invalid(format!("A{k} is not an interior vertex")))?;
            w(out, format!("A{k} = {}", c.vertex))?;
            w(out, format!("f(A{k}) = {}", show(&c.lhs)))?;
            w(out, format!("denominator = {}", show_projective(&c.denominator)))?;
            w(out, format!("identity = {}", show(&c.rhs)))?;
            if !c.passed() {
                return Err(Failure::Verification(format!("identity fails at A{k}")));
            }
        }
        None => write!(out, "{report}").map_err(|e| Failure::Invalid(e.to_string()))?,
    }
    if !f_broken {
        let [v0, vn] = &report.endpoint_values;
        w(out, format!("endpoints: f(A0) = {}, f(A{}) = {}", show(v0), b.vertices().len() - 1, show(vn)))?;
        let failing: Vec<String> = report.failures().map(|c| format!("A{}", c.index)).collect();
        return Err(Failure::Verification(format!(
            "not an f-broken line; identity fails at: {}",
            if failing.is_empty() { "none".to_string() } else { failing.join(", ") }
        )));
    }
    if vertex.is_none() {
        if let Some(c) = report.failures().next() {
            return Err(Failure::Verification(format!("identity fails at A{}", c.index)));
        }
        w(out, format!("all {} interior vertices pass", report.checks.len()))?;
    }
    Ok(())
}

fn sail(form: &str, depth: usize, radius: u32, oracle: bool, json: bool, out: Out) -> Result<(), Failure> {
    let f = io::read_form(form)?;
    let sails = sails_of_form(&f, depth)?;
    if json {
        let all: Vec<SailJson> = sails.iter().map(SailJson::from_sail).collect();
        w(out, to_json(&all))?;
    } else {
        for (a, s) in angles_of_form(&f).iter().zip(&sails) {
            w(out, a.to_string())?;
            let vs: Vec<String> = s.vertices.iter().map(|p| p.to_string()).collect();
            w(out, format!("  vertices: {}", vs.join(" ")))?;
            if s.vertices.len() >= 2 {
                let b = crate::geometry::BrokenLine::new(s.vertices.clone())?;
                w(out, format!("  lls: {}", lls(&b)?))?;
            }
            if let Some(m) = &s.period {
                w(out, format!("  period: {m}"))?;
            }
        }
    }
    if oracle {
        let mut mismatch = None;
        for (k, (a, s)) in angles_of_form(&f).iter().zip(&sails).enumerate() {
            let brute = sail_bruteforce(a, radius)?;
            match compare_with_oracle(s, &brute, radius) {
                OracleVerdict::Agree { compared } => w(out, format!("oracle {k}: agree on {compared} vertices"))?,
                OracleVerdict::Mismatch { detail } => {
                    w(out, format!("oracle {k}: MISMATCH {detail}"))?;
                    mismatch.get_or_insert(k);
                }
            }
        }
        if let Some(k) = mismatch {
            return Err(Failure::Verification(format!("sail {k} disagrees with the brute-force hull")));
        }
    }
    Ok(())
}
