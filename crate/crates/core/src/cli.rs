//! Command-line front end: JSON jobs in, JSON (or pretty text) out.
//!
//! A job looks like
//!
//! ```json
//! {"field": {"p": 5, "s": 1, "n": 3}, "module": [[0, 1], 0, 1, [0, 1]]}
//! ```
//!
//! K elements are arrays of F_q coordinates (each an integer when `s = 1`,
//! an array over F_p otherwise); a bare integer is read as a scalar.
//! Polynomials in `T` are ascending coefficient arrays or strings such as
//! `"2*T^3 - T + 1"`.

use std::io::Read;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::analytic::{AnalyticDrinfeldModule, LazyAdditiveSeries};
use crate::drinfeld::{basic_j_invariant_parameters, DrinfeldModule, JInvariantParameter};
use crate::error::Error;
use crate::ff::{FieldElement, FieldTower, Level};
use crate::hom::{DrinfeldMorphism, HomSpace};
use crate::motive::{frobenius_charpoly, CharPoly, FrobeniusAlgorithm};
use crate::ore::OrePolynomial;
use crate::poly::{DensePolynomial, RationalFunction};

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Drinfeld modules over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Job document: inline JSON or a path; read from stdin when absent
    #[arg(long, global = true)]
    pub job: Option<String>,
    /// Human-readable output
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Modulus of F_q over F_p, as a JSON array (ascending)
    #[arg(long = "modulus-q", global = true)]
    pub modulus_q: Option<String>,
    /// Modulus of K over F_q, as a JSON array of F_q elements (ascending)
    #[arg(long = "modulus-K", global = true)]
    pub modulus_k: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank, height and characteristic
    Info,
    /// phi_a for a polynomial `a`
    Eval,
    /// Codomain of the morphism defined by `ore`
    Hom,
    /// Basis of Hom(module, other) in degree `degree`
    HomBasis,
    /// Some isogeny module -> other
    AnIsogeny,
    /// Whether module and other are isogenous
    IsIsogenous,
    /// Whether module and other are isomorphic (`absolutely` for over an algebraic closure)
    IsIsomorphic,
    /// j-invariant for `param`, `k`, or the rank-2 j
    Jinv,
    /// Basic j-invariant parameters
    JinvParams(JinvParamsArgs),
    /// Norm of a morphism (`frobenius`, `scalar` or `ore`)
    Norm,
    /// Characteristic polynomial of an endomorphism
    Charpoly,
    /// Characteristic polynomial of the Frobenius endomorphism (`algorithm`)
    FrobeniusCharpoly,
    /// Coefficients of the exponential over F_q(T)
    Exp(SeriesArgs),
    /// Coefficients of the logarithm over F_q(T)
    Log(SeriesArgs),
    /// Timings of the Frobenius characteristic polynomial
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct JinvParamsArgs {
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub count_only: bool,
    /// Restrict to the nonzero slots of the job's module
    #[arg(long)]
    pub nonzero: bool,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SeriesArgs {
    /// Lowest plain exponent
    #[arg(long)]
    pub lo: Option<u64>,
    /// Exponent bound (exclusive)
    #[arg(long)]
    pub hi: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchAlgorithm {
    Motive,
    Gekeler,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// Grid points as `n:r` pairs separated by commas
    #[arg(long, default_value = "3:2,5:2,10:3")]
    pub grid: String,
    #[arg(long, default_value_t = 5)]
    pub q: u64,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, num_args = 1.., default_values_t = [BenchAlgorithm::Motive, BenchAlgorithm::Gekeler])]
    pub algorithm: Vec<BenchAlgorithm>,
}

/// Failure of a CLI run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed job or flags.
    Input { code: String, message: String },
    /// A well-formed job hit a mathematical obstruction.
    Math(Error),
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError::Input { code: "MalformedInput".into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Math(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input { code, message } => json!({"code": code, "message": message}),
            CliError::Math(e) => json!({"code": e.code(), "message": e.to_string()}),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input { code, message } => write!(f, "{code}: {message}"),
            CliError::Math(e) => write!(f, "{}: {e}", e.code()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input { code: e.code().into(), message: e.to_string() }
        } else {
            CliError::Math(e)
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Output of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub json: Value,
    pub pretty: String,
    /// Text output in both modes (CSV from `bench`).
    pub plain: bool,
}

impl Output {
    fn new(json: Value, pretty: impl Into<String>) -> Self {
        Output { json, pretty: pretty.into(), plain: false }
    }

    pub fn render(&self, pretty: bool) -> String {
        if pretty || self.plain {
            self.pretty.clone()
        } else {
            self.json.to_string()
        }
    }
}

/// Parses `args` (including the program name), runs, prints, and returns
/// the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::input(e.to_string().trim().to_string());
            println!("{}", err.to_json());
            return err.exit_code();
        }
    };
    let pretty = cli.global.pretty;
    match run(&cli, || {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    }) {
        Ok(out) => {
            println!("{}", out.render(pretty));
            0
        }
        Err(err) => {
            println!("{}", err.to_json());
            err.exit_code()
        }
    }
}

/// Runs a parsed command; `stdin` is consulted only when a job is needed
/// and `--job` is absent.
pub fn run<F>(cli: &Cli, stdin: F) -> CliResult<Output>
where
    F: FnOnce() -> std::io::Result<String>,
{
    let g = &cli.global;
    let load = || -> CliResult<Job> {
        let text = match &g.job {
            Some(j) if j.trim_start().starts_with('{') => j.clone(),
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read job file {path}: {e}")))?,
            None => stdin().map_err(|e| CliError::input(format!("cannot read stdin: {e}")))?,
        };
        let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::input(format!("invalid JSON: {e}")))?;
        Job::new(doc, g)
    };
    match &cli.command {
        Command::Info => info(&load()?),
        Command::Eval => eval(&load()?),
        Command::Hom => hom(&load()?),
        Command::HomBasis => hom_basis(&load()?),
        Command::AnIsogeny => an_isogeny(&load()?),
        Command::IsIsogenous => {
            let job = load()?;
            let (phi, psi) = (job.module()?, job.other()?);
            boolean(crate::motive::is_isogenous(&phi, &psi)?)
        }
        Command::IsIsomorphic => {
            let job = load()?;
            let (phi, psi) = (job.module()?, job.other()?);
            let absolutely = job.flag("absolutely")?;
            boolean(phi.is_isomorphic(&psi, absolutely)?)
        }
        Command::Jinv => jinv(&load()?),
        Command::JinvParams(a) => jinv_params(a, || load()),
        Command::Norm => norm(&load()?),
        Command::Charpoly => {
            let job = load()?;
            let f = job.morphism()?;
            Ok(charpoly_output(&f.charpoly()?))
        }
        Command::FrobeniusCharpoly => {
            let job = load()?;
            let algorithm = match job.doc.get("algorithm").and_then(Value::as_str) {
                None | Some("motive") => FrobeniusAlgorithm::Motive,
                Some("gekeler") => FrobeniusAlgorithm::Gekeler,
                Some(other) => return Err(CliError::input(format!("unknown algorithm {other}"))),
            };
            Ok(charpoly_output(&frobenius_charpoly(&job.module()?, algorithm)?))
        }
        Command::Exp(a) => series(&load()?, a, true),
        Command::Log(a) => series(&load()?, a, false),
        Command::Bench(a) => bench(a),
    }
}

struct Job {
    doc: Value,
    tower: FieldTower,
}

impl Job {
    fn new(doc: Value, g: &GlobalOpts) -> CliResult<Self> {
        let field = doc.get("field").ok_or_else(|| CliError::input("missing `field`"))?;
        let get = |k: &str, default: Option<u64>| -> CliResult<u64> {
            match field.get(k) {
                Some(v) => v.as_u64().ok_or_else(|| CliError::input(format!("field.{k} must be a nonnegative integer"))),
                None => default.ok_or_else(|| CliError::input(format!("missing field.{k}"))),
            }
        };
        let p = get("p", None)?;
        let s = get("s", Some(1))? as usize;
        let n = get("n", Some(1))? as usize;
        let flag_json = |f: &Option<String>, name: &str| -> CliResult<Option<Value>> {
            f.as_ref()
                .map(|t| serde_json::from_str(t).map_err(|e| CliError::input(format!("{name}: {e}"))))
                .transpose()
        };
        let mq = flag_json(&g.modulus_q, "--modulus-q")?.or_else(|| field.get("modulus_q").cloned());
        let mk = flag_json(&g.modulus_k, "--modulus-K")?.or_else(|| field.get("modulus_K").cloned());
        let mq = mq.map(|v| int_array(&v, p)).transpose()?;
        let mk = mk
            .map(|v| {
                v.as_array()
                    .ok_or_else(|| CliError::input("modulus_K must be an array"))?
                    .iter()
                    .map(|c| match c {
                        Value::Array(_) => int_array(c, p),
                        _ => Ok(vec![int(c, p)?]),
                    })
                    .collect::<CliResult<Vec<_>>>()
            })
            .transpose()?;
        let tower = FieldTower::with_moduli(p, s, n, mq, mk)?;
        Ok(Job { doc, tower })
    }

    fn field(&self, key: &str) -> CliResult<&Value> {
        self.doc.get(key).ok_or_else(|| CliError::input(format!("missing `{key}`")))
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        match self.doc.get(key) {
            None => Ok(false),
            Some(v) => v.as_bool().ok_or_else(|| CliError::input(format!("`{key}` must be a boolean"))),
        }
    }

    fn drinfeld(&self, key: &str) -> CliResult<DrinfeldModule> {
        let coeffs = decode_k_list(&self.tower, self.field(key)?)?;
        Ok(DrinfeldModule::new(&self.tower, coeffs)?)
    }

    fn module(&self) -> CliResult<DrinfeldModule> {
        self.drinfeld("module")
    }

    fn other(&self) -> CliResult<DrinfeldModule> {
        self.drinfeld("other")
    }

    fn ore(&self) -> CliResult<OrePolynomial> {
        Ok(OrePolynomial::new(self.tower.clone(), decode_k_list(&self.tower, self.field("ore")?)?))
    }

    /// The morphism named by `frobenius`, `scalar` or `ore` (with optional
    /// `other` as codomain).
    fn morphism(&self) -> CliResult<DrinfeldMorphism> {
        let phi = self.module()?;
        if self.flag("frobenius")? {
            return Ok(DrinfeldMorphism::frobenius(&phi));
        }
        if let Some(a) = self.doc.get("scalar") {
            return Ok(DrinfeldMorphism::from_scalar(&phi, &decode_poly(&self.tower, a)?)?);
        }
        let u = self.ore()?;
        if self.doc.get("other").is_some() {
            return Ok(DrinfeldMorphism::new(&phi, &self.other()?, u)?);
        }
        Ok(DrinfeldMorphism::from_ore(&phi, u)?)
    }
}

fn int(v: &Value, p: u64) -> CliResult<u64> {
    v.as_i64()
        .map(|c| c.rem_euclid(p as i64) as u64)
        .ok_or_else(|| CliError::input(format!("expected an integer, found {v}")))
}

fn int_array(v: &Value, p: u64) -> CliResult<Vec<u64>> {
    v.as_array()
        .ok_or_else(|| CliError::input(format!("expected an array, found {v}")))?
        .iter()
        .map(|c| int(c, p))
        .collect()
}

/// An F_q element: an integer or an array over F_p.
pub fn decode_fq(tower: &FieldTower, v: &Value) -> CliResult<FieldElement> {
    match v {
        Value::Array(_) => Ok(tower.element(Level::Fq, &int_array(v, tower.p())?)?),
        _ => Ok(tower.element(Level::Fq, &[int(v, tower.p())?])?),
    }
}

/// A K element: an integer or an array of F_q elements.
pub fn decode_k(tower: &FieldTower, v: &Value) -> CliResult<FieldElement> {
    match v {
        Value::Array(items) => {
            let coords = items.iter().map(|c| decode_fq(tower, c)).collect::<CliResult<Vec<_>>>()?;
            Ok(tower.k_from_fq(&coords)?)
        }
        _ => Ok(tower.element(Level::K, &[int(v, tower.p())?])?),
    }
}

fn decode_k_list(tower: &FieldTower, v: &Value) -> CliResult<Vec<FieldElement>> {
    v.as_array()
        .ok_or_else(|| CliError::input(format!("expected an array of K elements, found {v}")))?
        .iter()
        .map(|c| decode_k(tower, c))
        .collect()
}

/// A polynomial over F_q: ascending array of F_q elements, or a string.
pub fn decode_poly(tower: &FieldTower, v: &Value) -> CliResult<DensePolynomial> {
    match v {
        Value::String(s) => parse_poly(tower, s),
        Value::Array(items) => {
            let c = items.iter().map(|c| decode_fq(tower, c)).collect::<CliResult<Vec<_>>>()?;
            Ok(DensePolynomial::new(tower.clone(), Level::Fq, c))
        }
        Value::Number(_) => Ok(DensePolynomial::constant(decode_fq(tower, v)?)),
        _ => Err(CliError::input(format!("expected a polynomial, found {v}"))),
    }
}

/// Parses sums of terms `c`, `c*T`, `c*T^e`, `T^e` with integer `c`.
pub fn parse_poly(tower: &FieldTower, s: &str) -> CliResult<DensePolynomial> {
    let bad = || CliError::input(format!("cannot parse polynomial {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad());
    }
    let mut coeffs: Vec<i64> = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1i64, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        rest = tail;
        let (c, e) = match term.split_once('T') {
            None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some((c, e)) => {
                let c = match c.strip_suffix('*').unwrap_or(c) {
                    "" => 1,
                    c => c.parse::<i64>().map_err(|_| bad())?,
                };
                let e = match e {
                    "" => 1,
                    e => e.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?,
                };
                (c, e)
            }
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] += sign * c;
    }
    Ok(DensePolynomial::from_ints(tower, Level::Fq, &coeffs))
}

fn decode_rational(tower: &FieldTower, v: &Value) -> CliResult<RationalFunction> {
    if let Some(num) = v.get("num") {
        let den = v.get("den").ok_or_else(|| CliError::input("rational function without `den`"))?;
        return Ok(RationalFunction::new(decode_poly(tower, num)?, decode_poly(tower, den)?)?);
    }
    Ok(RationalFunction::from_poly(decode_poly(tower, v)?))
}

/// F_q element: an integer when `s = 1`, otherwise its F_p coordinates.
pub fn encode_fq(x: &FieldElement) -> Value {
    let c = x.coeffs();
    if x.tower().s() == 1 {
        json!(c[0])
    } else {
        json!(c)
    }
}

/// K element: its `n` coordinates over F_q.
pub fn encode_k(x: &FieldElement) -> Value {
    Value::Array(x.fq_coords().iter().map(encode_fq).collect())
}

pub fn encode_poly(f: &DensePolynomial) -> Value {
    Value::Array(f.coeffs().iter().map(encode_fq).collect())
}

pub fn encode_ore(f: &OrePolynomial) -> Value {
    Value::Array(f.coeffs().iter().map(encode_k).collect())
}

pub fn encode_charpoly(cp: &CharPoly) -> Value {
    Value::Array(cp.coefficients().iter().map(encode_poly).collect())
}

pub fn encode_rational(x: &RationalFunction) -> Value {
    json!({"num": encode_poly(x.num()), "den": encode_poly(x.den())})
}

fn boolean(b: bool) -> CliResult<Output> {
    Ok(Output::new(json!(b), if b { "True" } else { "False" }))
}

fn info(job: &Job) -> CliResult<Output> {
    let phi = job.module()?;
    let chr = phi.characteristic();
    let json = json!({
        "module": encode_ore(phi.gen()),
        "rank": phi.rank(),
        "height": phi.height(),
        "characteristic": encode_poly(&chr),
    });
    let pretty = format!("{phi}\nrank: {}\nheight: {}\ncharacteristic: {chr}", phi.rank(), phi.height());
    Ok(Output::new(json, pretty))
}

fn eval(job: &Job) -> CliResult<Output> {
    let phi = job.module()?;
    let a = decode_poly(&job.tower, job.field("a")?)?;
    let v = phi.evaluate(&a)?;
    Ok(Output::new(encode_ore(&v), v.to_string()))
}

fn hom(job: &Job) -> CliResult<Output> {
    let f = job.morphism()?;
    let json = json!({
        "codomain": encode_ore(f.codomain().gen()),
        "ore": encode_ore(f.ore_polynomial()),
        "is_isomorphism": f.is_isomorphism(),
    });
    Ok(Output::new(json, f.to_string()))
}

fn hom_basis(job: &Job) -> CliResult<Output> {
    let space = HomSpace::new(&job.module()?, &job.other()?)?;
    let d = job.field("degree")?.as_u64().ok_or_else(|| CliError::input("`degree` must be a nonnegative integer"))?;
    let basis = space.basis(d as usize);
    let json = Value::Array(basis.iter().map(|f| encode_ore(f.ore_polynomial())).collect());
    let pretty = basis.iter().map(|f| f.ore_polynomial().to_string()).collect::<Vec<_>>().join("\n");
    Ok(Output::new(json, pretty))
}

fn an_isogeny(job: &Job) -> CliResult<Output> {
    let space = HomSpace::new(&job.module()?, &job.other()?)?;
    let cap = match std::env::var("DRINFELD_ISOGENY_CAP") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::input(format!("DRINFELD_ISOGENY_CAP must be an integer, found {v:?}")))?,
        Err(_) => space.default_cap(),
    };
    match space.an_isogeny_with_cap(cap)? {
        Some(f) => Ok(Output::new(encode_ore(f.ore_polynomial()), f.to_string())),
        None => Ok(Output::new(Value::Null, "None")),
    }
}

fn jinv(job: &Job) -> CliResult<Output> {
    let phi = job.module()?;
    let j = if let Some(p) = job.doc.get("param") {
        let ints = |k: &str| -> CliResult<Vec<u64>> {
            p.get(k)
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::input(format!("param.{k} must be an array")))?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| CliError::input("parameters are nonnegative integers")))
                .collect()
        };
        let d = p.get("d").and_then(Value::as_u64).ok_or_else(|| CliError::input("param.d must be an integer"))?;
        let param = JInvariantParameter::new(ints("ks")?.into_iter().map(|k| k as usize).collect(), ints("ds")?, d);
        phi.j_invariant(&param)?
    } else if let Some(k) = job.doc.get("k") {
        phi.j_k(k.as_u64().ok_or_else(|| CliError::input("`k` must be an integer"))? as usize)?
    } else {
        phi.j()?
    };
    Ok(Output::new(encode_k(&j), j.to_string()))
}

fn encode_param(p: &JInvariantParameter) -> Value {
    let mut tail = p.ds.clone();
    tail.push(p.d);
    json!([p.ks, tail])
}

fn jinv_params<F>(a: &JinvParamsArgs, load: F) -> CliResult<Output>
where
    F: FnOnce() -> CliResult<Job>,
{
    let params = match (a.rank, a.q) {
        (Some(r), Some(q)) if !a.nonzero => basic_j_invariant_parameters(r, q, None)?,
        (None, None) => load()?.module()?.basic_j_invariant_parameters(a.nonzero)?,
        _ if a.nonzero => return Err(CliError::input("--nonzero takes its slots from a job module")),
        _ => return Err(CliError::input("--rank and --q go together")),
    };
    if a.count_only {
        return Ok(Output::new(json!(params.len()), params.len().to_string()));
    }
    let json = Value::Array(params.iter().map(encode_param).collect());
    let pretty = params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n");
    Ok(Output::new(json, pretty))
}

fn norm(job: &Job) -> CliResult<Output> {
    let f = job.morphism()?;
    let as_ideal = match job.doc.get("as_ideal") {
        None => true,
        Some(v) => v.as_bool().ok_or_else(|| CliError::input("`as_ideal` must be a boolean"))?,
    };
    let nm = f.norm(as_ideal)?;
    let pretty = if as_ideal { format!("({nm})") } else { nm.to_string() };
    Ok(Output::new(encode_poly(&nm), pretty))
}

fn charpoly_output(cp: &CharPoly) -> Output {
    Output::new(encode_charpoly(cp), cp.to_string())
}

fn series(job: &Job, a: &SeriesArgs, exponential: bool) -> CliResult<Output> {
    let coeffs = job
        .field("module")?
        .as_array()
        .ok_or_else(|| CliError::input("`module` must be an array"))?
        .iter()
        .map(|c| decode_rational(&job.tower, c))
        .collect::<CliResult<Vec<_>>>()?;
    let phi = AnalyticDrinfeldModule::new(&job.tower, coeffs)?;
    let s: LazyAdditiveSeries = if exponential { phi.exponential() } else { phi.logarithm() };
    let q = job.tower.q();
    let lo = a.lo.or_else(|| job.doc.get("lo").and_then(Value::as_u64)).unwrap_or(0);
    let hi = a.hi.or_else(|| job.doc.get("hi").and_then(Value::as_u64)).unwrap_or(q * q + 1);
    if lo > hi {
        return Err(CliError::input("empty exponent range"));
    }
    let slice = s.slice(lo, hi);
    let json = json!({"lo": lo, "hi": hi, "coefficients": slice.iter().map(encode_rational).collect::<Vec<_>>()});
    let pretty = (lo..hi)
        .zip(&slice)
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| format!("z^{e}: {c}"))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::new(json, pretty))
}

/// One benchmark measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub r: usize,
    pub algorithm: BenchAlgorithm,
    pub median_ms: f64,
}

/// `(n, r)` pairs from `"n:r,n:r,..."`.
pub fn parse_grid(s: &str) -> CliResult<Vec<(usize, usize)>> {
    s.split(',')
        .map(|pt| {
            let (n, r) = pt
                .trim()
                .split_once([':', 'x'])
                .ok_or_else(|| CliError::input(format!("grid point {pt:?} is not n:r")))?;
            let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| CliError::input(format!("bad grid point {pt:?}")));
            let (n, r) = (parse(n)?, parse(r)?);
            if n == 0 || r == 0 {
                return Err(CliError::input("grid entries must be positive"));
            }
            Ok((n, r))
        })
        .collect()
}

/// Deterministic module for a grid point: `g_0` is the generator of `K`,
/// the other coefficients are drawn from a seeded generator.
pub fn bench_module(tower: &FieldTower, r: usize, seed: u64) -> DrinfeldModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((tower.n() as u64) << 32) ^ r as u64);
    let mut coeffs = vec![tower.gen_k()];
    coeffs.extend((1..=r).map(|_| tower.random_nonzero(Level::K, &mut rng)));
    DrinfeldModule::new(tower, coeffs).expect("nonzero leading coefficient")
}

/// Median timings over `trials` runs for every grid point and algorithm.
pub fn run_bench(
    grid: &[(usize, usize)],
    q: u64,
    trials: usize,
    seed: u64,
    algorithms: &[BenchAlgorithm],
) -> CliResult<Vec<BenchRow>> {
    let (p, s) = prime_power(q).ok_or_else(|| CliError::input(format!("{q} is not a prime power")))?;
    let trials = trials.max(1);
    let mut rows = Vec::new();
    for &(n, r) in grid {
        let tower = FieldTower::new(p, s, n)?;
        let phi = bench_module(&tower, r, seed);
        for &alg in algorithms {
            let algorithm = match alg {
                BenchAlgorithm::Motive => FrobeniusAlgorithm::Motive,
                BenchAlgorithm::Gekeler => FrobeniusAlgorithm::Gekeler,
            };
            let mut times: Vec<f64> = (0..trials)
                .map(|_| {
                    let start = Instant::now();
                    let _ = frobenius_charpoly(&phi, algorithm);
                    start.elapsed().as_secs_f64() * 1e3
                })
                .collect();
            times.sort_by(f64::total_cmp);
            rows.push(BenchRow { n, r, algorithm: alg, median_ms: times[times.len() / 2] });
        }
    }
    Ok(rows)
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let f = num_prime::nt_funcs::factorize64(q);
    if f.len() != 1 {
        return None;
    }
    let (&p, &s) = f.iter().next()?;
    Some((p, s))
}

fn bench(a: &BenchArgs) -> CliResult<Output> {
    let grid = parse_grid(&a.grid)?;
    let rows = run_bench(&grid, a.q, a.trials, a.seed, &a.algorithm)?;
    let mut csv = String::from("n,r,algorithm,median_ms");
    for row in &rows {
        let name = match row.algorithm {
            BenchAlgorithm::Motive => "motive",
            BenchAlgorithm::Gekeler => "gekeler",
        };
        csv.push_str(&format!("\n{},{},{},{:.3}", row.n, row.r, name, row.median_ms));
    }
    let json = Value::Array(
        rows.iter()
            .map(|r| json!({"n": r.n, "r": r.r, "algorithm": format!("{:?}", r.algorithm).to_lowercase(), "median_ms": r.median_ms}))
            .collect(),
    );
    Ok(Output { json, pretty: csv, plain: true })
}
