//! Command-line front end: eigenvalues, kernels, transforms, scattering
//! multipliers, time probes and the self-check suites.

mod output;
mod params;

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halfline::kernels::{boundary_resolvent, projection_interval_with, resolvent, spectral_density};
use halfline::operators::{classify, count_eigenvalues, eigenvalues, EigenCount, EigenvalueRecord, Window};
use halfline::quad::QuadPolicy;
use halfline::scattering::{g_multiplier, moller_time_probe, propagation_probe, wave_multiplier, ScatteringPair};
use halfline::transforms::{default_nodes, geometric_grid, xi, DecayClass, Multiplier, SampledFunction, Transform, Variable};
use halfline::validation::{Bound, Suite};
use halfline::{Complex64, Error, ExtendedParam, OperatorSpec, Sign};
use serde_json::{json, Map, Value};

use output::{cell, OutputRecord, Table};

const QUAD_TOL_VAR: &str = "HALFLINE_QUAD_TOL";

#[derive(Parser)]
#[command(name = "halfline", version, about = "Inverse-square Schrödinger operators on the half-line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues with branch indices, classification and warnings (JSON).
    Eig(EigArgs),
    /// Resolvent, boundary or spectral-projection kernel over an (x, y) grid.
    Kernel(KernelArgs),
    /// Spectral density p(k; x, y) over an (x, y) grid.
    Density(DensityArgs),
    /// Hankel-type transform of sampled data or of a built-in profile.
    Transform(TransformArgs),
    /// Eigenvalues ordered by branch index, for plotting.
    Spiral(SpiralArgs),
    /// Scattering multipliers: G over x, or a wave operator over t.
    Scatter(ScatterArgs),
    /// Self-check suites; exits with 1 if any check fails.
    Check(CheckArgs),
    /// Time-dependent wave-operator probes (JSON).
    Probe(ProbeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Homogeneous,
    Kappa,
    Nu,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl SignArg {
    fn sign(self) -> Sign {
        match self {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SignArg::Plus => "plus",
            SignArg::Minus => "minus",
        }
    }
}

/// A grid flag; a newtype so that clap treats it as one value.
#[derive(Clone)]
struct Grid(Vec<f64>);

fn grid(text: &str) -> Result<Grid, String> {
    params::grid(text).map(Grid)
}

fn real_list(text: &str) -> Result<Grid, String> {
    params::real_list(text).map(Grid)
}

#[derive(Args)]
struct SpecArgs {
    /// Operator family.
    #[arg(long, value_enum, default_value_t = Family::Homogeneous)]
    family: Family,
    /// Order m as `re,im` or `re`.
    #[arg(long, value_parser = params::complex, allow_hyphen_values = true)]
    m: Option<Complex64>,
    /// Boundary parameter of the kappa family, `re,im` or `inf`.
    #[arg(long, value_parser = params::extended, allow_hyphen_values = true)]
    kappa: Option<ExtendedParam>,
    /// Boundary parameter of the nu family, `re,im` or `inf`; `euler` is Euler's constant.
    #[arg(long, value_parser = params::extended, allow_hyphen_values = true)]
    nu: Option<ExtendedParam>,
}

impl SpecArgs {
    fn build(&self) -> Result<OperatorSpec, Failure> {
        let refuse = |flag: &str| Failure::Usage(format!("--{flag} does not apply to this family"));
        let need = |flag: &str| Failure::Usage(format!("--{flag} is required for this family"));
        let spec = match self.family {
            Family::Homogeneous => {
                if self.kappa.is_some() {
                    return Err(refuse("kappa"));
                }
                if self.nu.is_some() {
                    return Err(refuse("nu"));
                }
                OperatorSpec::homogeneous(self.m.ok_or_else(|| need("m"))?)?
            }
            Family::Kappa => {
                if self.nu.is_some() {
                    return Err(refuse("nu"));
                }
                OperatorSpec::kappa(self.m.ok_or_else(|| need("m"))?, self.kappa.ok_or_else(|| need("kappa"))?)?
            }
            Family::Nu => {
                if self.m.is_some() {
                    return Err(refuse("m"));
                }
                if self.kappa.is_some() {
                    return Err(refuse("kappa"));
                }
                OperatorSpec::nu(self.nu.ok_or_else(|| need("nu"))?)
            }
        };
        Ok(spec)
    }

    fn record(&self, params: &mut Map<String, Value>) {
        let family = match self.family {
            Family::Homogeneous => "homogeneous",
            Family::Kappa => "kappa",
            Family::Nu => "nu",
        };
        params.insert("family".into(), json!(family));
        if let Some(m) = self.m {
            params.insert("m".into(), output::complex(m));
        }
        if let Some(k) = self.kappa {
            params.insert("kappa".into(), output::extended(k));
        }
        if let Some(nu) = self.nu {
            params.insert("nu".into(), output::extended(nu));
        }
    }
}

/// Kernels of H_{m,0}, H_{m,∞} and H_0^∞ are computed as those of the
/// homogeneous operator they equal, so the output matches it exactly.
fn reduce(spec: OperatorSpec) -> Result<OperatorSpec, Failure> {
    match spec.as_homogeneous() {
        Some(m) => Ok(OperatorSpec::homogeneous(m)?),
        None => Ok(spec),
    }
}

#[derive(Args)]
struct WindowArgs {
    /// Largest number of eigenvalues listed [default: 10000].
    #[arg(long)]
    max: Option<usize>,
    /// Inclusive bounds `lo,hi` on |z| [default: 1e-12,1e12].
    #[arg(long, value_parser = params::real_pair)]
    modulus: Option<(f64, f64)>,
}

impl WindowArgs {
    fn window(&self) -> Window {
        let default = Window::default();
        Window {
            max_count: self.max.or(default.max_count),
            modulus: self.modulus.or(default.modulus),
        }
    }

    fn record(&self, params: &mut Map<String, Value>) {
        let w = self.window();
        params.insert("max".into(), json!(w.max_count));
        params.insert("modulus".into(), json!(w.modulus.map(|(lo, hi)| [lo, hi])));
    }
}

#[derive(Args)]
struct GridArgs {
    /// x values, `lo:hi:n` or a comma-separated list.
    #[arg(long, value_parser = grid, default_value = "0.5:3:6", allow_hyphen_values = true)]
    x: Grid,
    /// y values, `lo:hi:n` or a comma-separated list.
    #[arg(long, value_parser = grid, default_value = "0.5:3:6", allow_hyphen_values = true)]
    y: Grid,
}

#[derive(Args)]
struct EigArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    window: WindowArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelKind {
    /// (H + k²)^{-1}(x, y), Re k > 0.
    Resolvent,
    /// Boundary value (H − k² ∓ i0)^{-1}(x, y), k > 0.
    Boundary,
    /// Spectral projection 1_{[a,b]}(H)(x, y).
    Projection,
}

#[derive(Args)]
struct KernelArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = KernelKind::Resolvent)]
    kind: KernelKind,
    /// Spectral parameter: `re,im` with Re k > 0, or k > 0 for boundary kernels.
    #[arg(long, value_parser = params::complex, allow_hyphen_values = true)]
    k: Option<Complex64>,
    /// Side of the continuous spectrum for boundary kernels.
    #[arg(long, value_enum)]
    side: Option<SignArg>,
    /// Energy interval `a,b` for projections.
    #[arg(long, value_parser = params::real_pair)]
    interval: Option<(f64, f64)>,
    #[command(flatten)]
    grid: GridArgs,
    /// Emit a JSON record instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Momentum k > 0.
    #[arg(long)]
    k: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Emit a JSON record instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecayArg {
    Gaussian,
    Exponential,
    Compact,
}

#[derive(Args)]
struct TransformArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Sign of the generalized transform.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// Apply the transpose.
    #[arg(long)]
    transpose: bool,
    /// CSV file with columns x,re,im (`-` for stdin); without it the
    /// profile x^p e^{-x²/2} is transformed.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Behaviour of the input beyond its last sample.
    #[arg(long, value_enum, default_value_t = DecayArg::Gaussian)]
    decay: DecayArg,
    /// Power p of the built-in profile.
    #[arg(long, default_value_t = 1.5, allow_hyphen_values = true)]
    power: f64,
    /// Output nodes [default: 400 geometric nodes on 1e-3..1e3].
    #[arg(long, value_parser = grid)]
    x: Option<Grid>,
    /// Emit a JSON record instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SpiralArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    window: WindowArgs,
    /// Emit a JSON record instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScatterKind {
    /// G^s(x) = F^{st}F^s of one operator.
    G,
    /// Wave operator W^s_{m,m'}(t) between two homogeneous operators.
    Wave,
}

#[derive(Args)]
struct ScatterArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[arg(long, value_enum, default_value_t = ScatterKind::G)]
    kind: ScatterKind,
    /// Second order m' of a wave operator.
    #[arg(long, value_parser = params::complex, allow_hyphen_values = true)]
    m_prime: Option<Complex64>,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// x values for G.
    #[arg(long, value_parser = grid, default_value = "0.1:10:100")]
    x: Grid,
    /// t values for wave operators.
    #[arg(long, value_parser = grid, default_value = "-10:10:81", allow_hyphen_values = true)]
    t: Grid,
    /// Emit a JSON record instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Suites to run, comma-separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    only: Vec<String>,
    /// Run every suite, including the slow ones.
    #[arg(long)]
    all: bool,
    /// Replaces every error threshold.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeKind {
    /// ⟨g, e^{itH_m}e^{-itH_m'}f⟩ for Gaussian profiles f, g.
    Moller,
    /// ⟨f1, e^{ite^{2Q}}ψ(-P)e^{-ite^{2Q}}f2⟩ with ψ(t) = Ξ_m(-t)Ξ_m'(t).
    Propagation,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long, value_enum, default_value_t = ProbeKind::Moller)]
    kind: ProbeKind,
    /// Order m.
    #[arg(long, value_parser = params::complex, allow_hyphen_values = true, default_value = "-0.5")]
    m: Complex64,
    /// Order m'.
    #[arg(long, value_parser = params::complex, allow_hyphen_values = true, default_value = "0.5")]
    m_prime: Complex64,
    /// Direction of the Møller limit.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// Times for the Møller probe.
    #[arg(long, value_parser = real_list, default_value = "10,50,200", allow_hyphen_values = true)]
    times: Grid,
    /// Time for the propagation probe.
    #[arg(long, default_value_t = 1e3, allow_hyphen_values = true)]
    time: f64,
    /// Gaussian bump f1 on the line: `center,width`.
    #[arg(long, value_parser = params::real_pair, default_value = "-2,0.7", allow_hyphen_values = true)]
    f1: (f64, f64),
    /// Gaussian bump f2 on the line: `center,width`.
    #[arg(long, value_parser = params::real_pair, default_value = "-2.5,1", allow_hyphen_values = true)]
    f2: (f64, f64),
    /// Window on the line holding both bumps: `lo,hi`.
    #[arg(long, value_parser = params::real_pair, default_value = "-7.5,1.8", allow_hyphen_values = true)]
    window: (f64, f64),
}

enum Failure {
    /// Invalid flags or parameters the library rejects: exit 2.
    Usage(String),
    /// Exceptional parameters: exit 3.
    Refused(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Exceptional(_) => Failure::Refused(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// What a command produces.
enum Report {
    Record(OutputRecord),
    Csv(Table),
}

struct Outcome {
    report: Report,
    code: u8,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, code: 0 }
    }
}

fn table_report(command: &'static str, params: Map<String, Value>, table: Table, json: bool) -> Report {
    if json {
        Report::Record(OutputRecord {
            command,
            params,
            results: table.to_value(),
        })
    } else {
        Report::Csv(table)
    }
}

fn quad_tol() -> Result<Option<f64>, Failure> {
    match std::env::var(QUAD_TOL_VAR) {
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(Some(t)),
            _ => Err(Failure::Usage(format!("{QUAD_TOL_VAR} must be a positive number, got `{text}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn warnings_for(spec: &OperatorSpec, exceptional: bool, records: &[EigenvalueRecord]) -> Vec<String> {
    let mut out = Vec::new();
    if exceptional {
        out.push(format!(
            "exceptional parameters {spec:?}: transforms and boundary values are refused"
        ));
    }
    for r in records.iter().filter(|r| r.near_boundary) {
        out.push(format!("eigenvalue j = {} sits within 1e-8 of the strip edge |Im w| = pi", r.j));
    }
    out
}

fn eig(args: &EigArgs) -> Result<Outcome, Failure> {
    let spec = args.spec.build()?;
    let class = classify(&spec)?;
    let records = eigenvalues(&spec, &args.window.window())?;
    let total = match spec {
        OperatorSpec::Kappa(m, kappa) if spec.as_homogeneous().is_none() => match count_eigenvalues(m, kappa) {
            Ok(EigenCount::Finite(n)) => json!(n),
            Ok(EigenCount::Infinite) => json!("infinite"),
            Err(_) => Value::Null,
        },
        OperatorSpec::Nu(_) => json!(eigenvalues(&spec, &Window::unbounded())?.len()),
        _ => json!(0),
    };
    let warnings = warnings_for(&spec, class.exceptional, &records);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let list: Vec<Value> = records
        .iter()
        .map(|r| {
            json!({
                "j": r.j,
                "w": output::complex(r.w),
                "z": output::complex(r.z),
                "near_boundary": r.near_boundary,
            })
        })
        .collect();
    let mut params = Map::new();
    args.spec.record(&mut params);
    args.window.record(&mut params);
    Ok(Outcome::ok(Report::Record(OutputRecord {
        command: "eig",
        params,
        results: json!({
            "classification": {
                "homogeneous": class.homogeneous,
                "self_adjoint": class.self_adjoint,
                "exceptional": class.exceptional,
            },
            "essential_spectrum": "[0, inf)",
            "count": records.len(),
            "total": total,
            "eigenvalues": list,
            "warnings": warnings,
        }),
    })))
}

fn grid_table(grid: &GridArgs, f: impl Fn(f64, f64) -> halfline::Result<Complex64>) -> Result<Table, Failure> {
    let mut table = Table::new(&["x", "y", "re", "im"]);
    for &x in &grid.x.0 {
        for &y in &grid.y.0 {
            let v = f(x, y)?;
            table.push(vec![cell(x), cell(y), cell(v.re), cell(v.im)]);
        }
    }
    Ok(table)
}

fn record_grid(grid: &GridArgs, params: &mut Map<String, Value>) {
    params.insert("x".into(), json!(grid.x.0));
    params.insert("y".into(), json!(grid.y.0));
}

fn kernel(args: &KernelArgs) -> Result<Outcome, Failure> {
    let spec = reduce(args.spec.build()?)?;
    let mut params = Map::new();
    args.spec.record(&mut params);
    record_grid(&args.grid, &mut params);
    let need = |flag: &str| Failure::Usage(format!("--{flag} is required for this kernel"));
    let table = match args.kind {
        KernelKind::Resolvent => {
            let k = args.k.ok_or_else(|| need("k"))?;
            params.insert("kind".into(), json!("resolvent"));
            params.insert("k".into(), output::complex(k));
            grid_table(&args.grid, |x, y| Ok(resolvent(&spec, k, x, y)?.value))?
        }
        KernelKind::Boundary => {
            let k = args.k.ok_or_else(|| need("k"))?;
            let side = args.side.ok_or_else(|| need("side"))?;
            if k.im != 0.0 {
                return Err(Failure::Usage("boundary kernels need a real k".into()));
            }
            params.insert("kind".into(), json!("boundary"));
            params.insert("k".into(), output::complex(k));
            params.insert("side".into(), json!(side.name()));
            grid_table(&args.grid, |x, y| Ok(boundary_resolvent(&spec, k.re, side.sign(), x, y)?.value))?
        }
        KernelKind::Projection => {
            let (a, b) = args.interval.ok_or_else(|| need("interval"))?;
            // the library default, with the relative target overridable
            let rel = quad_tol()?.unwrap_or(1e-11);
            let policy = QuadPolicy::exponential(1.0).with_tol(rel * 1e-2, rel);
            params.insert("kind".into(), json!("projection"));
            params.insert("interval".into(), json!([a, b]));
            params.insert("quad_tol".into(), json!(rel));
            grid_table(&args.grid, |x, y| projection_interval_with(&spec, a, b, x, y, &policy))?
        }
    };
    Ok(Outcome::ok(table_report("kernel", params, table, args.json)))
}

fn density(args: &DensityArgs) -> Result<Outcome, Failure> {
    let spec = reduce(args.spec.build()?)?;
    let table = grid_table(&args.grid, |x, y| spectral_density(&spec, args.k, x, y))?;
    let mut params = Map::new();
    args.spec.record(&mut params);
    record_grid(&args.grid, &mut params);
    params.insert("k".into(), json!(args.k));
    Ok(Outcome::ok(table_report("density", params, table, args.json)))
}

fn read_samples(path: &PathBuf, decay: DecayClass) -> Result<SampledFunction, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Failure::Usage(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
        return Err(Failure::Usage("input columns must be x,re,im".into()));
    }
    let (mut nodes, mut values) = (Vec::new(), Vec::new());
    for row in reader.records() {
        let row = row.map_err(|e| Failure::Usage(e.to_string()))?;
        let num = |j: usize| {
            row[j]
                .parse::<f64>()
                .map_err(|_| Failure::Usage(format!("`{}` is not a number", &row[j])))
        };
        nodes.push(num(0)?);
        values.push(Complex64::new(num(1)?, num(2)?));
    }
    Ok(SampledFunction::new(nodes, values, decay)?)
}

fn transform(args: &TransformArgs) -> Result<Outcome, Failure> {
    let spec = args.spec.build()?;
    let sign = args.sign.sign();
    let op = match spec {
        OperatorSpec::Homogeneous(m) => Transform::Hankel(m),
        OperatorSpec::Kappa(m, kappa) => Transform::Kappa {
            m,
            kappa,
            sign,
            transpose: args.transpose,
        },
        OperatorSpec::Nu(nu) => Transform::Nu {
            nu,
            sign,
            transpose: args.transpose,
        },
    };
    let decay = match args.decay {
        DecayArg::Gaussian => DecayClass::GaussianLike,
        DecayArg::Exponential => DecayClass::Exponential,
        DecayArg::Compact => DecayClass::Compact,
    };
    let mut params = Map::new();
    args.spec.record(&mut params);
    params.insert("sign".into(), json!(args.sign.name()));
    params.insert("transpose".into(), json!(args.transpose));
    params.insert("decay".into(), json!(format!("{decay:?}")));
    let f = match &args.input {
        Some(path) => {
            params.insert("input".into(), json!(path.display().to_string()));
            read_samples(path, decay)?
        }
        None => {
            params.insert("power".into(), json!(args.power));
            let p = args.power;
            SampledFunction::from_fn(
                geometric_grid(1e-5, 20.0, 1500),
                |x| Complex64::new(x.powf(p) * (-x * x / 2.0).exp(), 0.0),
                decay,
            )?
        }
    };
    let nodes = args.x.as_ref().map_or_else(default_nodes, |g| g.0.clone());
    params.insert("x".into(), json!(nodes));
    let g = match quad_tol()? {
        Some(tol) => {
            params.insert("quad_tol".into(), json!(tol));
            op.apply_with_tol(&f, &nodes, tol)?
        }
        None => op.apply(&f, &nodes)?,
    };
    let mut table = Table::new(&["x", "re", "im"]);
    for (x, v) in g.nodes.iter().zip(&g.values) {
        table.push(vec![cell(*x), cell(v.re), cell(v.im)]);
    }
    Ok(Outcome::ok(table_report("transform", params, table, args.json)))
}

fn spiral(args: &SpiralArgs) -> Result<Outcome, Failure> {
    let spec = args.spec.build()?;
    let mut records = eigenvalues(&spec, &args.window.window())?;
    records.sort_by_key(|r| r.j);
    let mut table = Table::new(&["j", "w_re", "w_im", "z_re", "z_im"]);
    for r in &records {
        table.push(vec![json!(r.j), cell(r.w.re), cell(r.w.im), cell(r.z.re), cell(r.z.im)]);
    }
    let mut params = Map::new();
    args.spec.record(&mut params);
    args.window.record(&mut params);
    Ok(Outcome::ok(table_report("spiral", params, table, args.json)))
}

fn sample(multiplier: &Multiplier, points: &[f64], column: &'static str) -> Table {
    let header: &'static [&'static str] = if column == "x" { &["x", "re", "im"] } else { &["t", "re", "im"] };
    let mut table = Table::new(header);
    for &p in points {
        let v = multiplier.eval(p);
        table.push(vec![cell(p), cell(v.re), cell(v.im)]);
    }
    table
}

fn scatter(args: &ScatterArgs) -> Result<Outcome, Failure> {
    let mut params = Map::new();
    args.spec.record(&mut params);
    params.insert("sign".into(), json!(args.sign.name()));
    let table = match args.kind {
        ScatterKind::G => {
            if args.m_prime.is_some() {
                return Err(Failure::Usage("--m-prime applies to wave operators only".into()));
            }
            let spec = args.spec.build()?;
            params.insert("kind".into(), json!("g"));
            params.insert("x".into(), json!(args.x.0));
            sample(&g_multiplier(&spec, args.sign.sign())?, &args.x.0, "x")
        }
        ScatterKind::Wave => {
            let OperatorSpec::Homogeneous(m) = args.spec.build()? else {
                return Err(Failure::Usage("wave operators take --family homogeneous".into()));
            };
            let m_prime = args
                .m_prime
                .ok_or_else(|| Failure::Usage("--m-prime is required for wave operators".into()))?;
            params.insert("kind".into(), json!("wave"));
            params.insert("m_prime".into(), output::complex(m_prime));
            params.insert("t".into(), json!(args.t.0));
            let pair = ScatteringPair::homogeneous(m, m_prime, args.sign.sign())?;
            sample(&wave_multiplier(&pair)?, &args.t.0, "t")
        }
    };
    Ok(Outcome::ok(table_report("scatter", params, table, args.json)))
}

fn check(args: &CheckArgs) -> Result<Outcome, Failure> {
    if let Some(tol) = args.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
        }
    }
    let suites: Vec<Suite> = if args.all {
        Suite::ALL.to_vec()
    } else if args.only.is_empty() {
        Suite::DEFAULT.to_vec()
    } else {
        args.only
            .iter()
            .map(|name| {
                Suite::from_name(name.trim()).ok_or_else(|| {
                    let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                    Failure::Usage(format!("unknown suite `{name}`; known: {}", known.join(", ")))
                })
            })
            .collect::<Result<_, _>>()?
    };
    let mut checks = Vec::new();
    let mut failed = 0usize;
    for suite in &suites {
        for c in suite.run(args.tol) {
            eprintln!(
                "{} {:<16} {:<60} {:.3e} {} {:.3e}",
                if c.passed { "pass" } else { "FAIL" },
                c.suite.name(),
                c.name,
                c.value,
                if c.bound == Bound::AtMost { "<=" } else { ">=" },
                c.threshold,
            );
            failed += usize::from(!c.passed);
            checks.push(json!({
                "suite": c.suite.name(),
                "name": c.name,
                "value": c.value,
                "bound": if c.bound == Bound::AtMost { "at_most" } else { "at_least" },
                "threshold": c.threshold,
                "passed": c.passed,
                "note": c.note,
            }));
        }
    }
    let mut params = Map::new();
    params.insert("suites".into(), json!(suites.iter().map(|s| s.name()).collect::<Vec<_>>()));
    params.insert("tol".into(), json!(args.tol));
    let total = checks.len();
    Ok(Outcome {
        report: Report::Record(OutputRecord {
            command: "check",
            params,
            results: json!({ "checks": checks, "total": total, "failed": failed, "passed": failed == 0 }),
        }),
        code: if failed == 0 { 0 } else { 1 },
    })
}

fn probe(args: &ProbeArgs) -> Result<Outcome, Failure> {
    let mut params = Map::new();
    params.insert("m".into(), output::complex(args.m));
    params.insert("m_prime".into(), output::complex(args.m_prime));
    let results = match args.kind {
        ProbeKind::Moller => {
            params.insert("kind".into(), json!("moller"));
            params.insert("sign".into(), json!(args.sign.name()));
            params.insert("times".into(), json!(args.times.0));
            let pair = ScatteringPair::homogeneous(args.m, args.m_prime, args.sign.sign())?;
            // x^{n+1/2}e^{−x²/2} is a fixed point of F_n
            let profile = |n: Complex64| {
                SampledFunction::from_fn(
                    geometric_grid(1e-5, 20.0, 1500),
                    move |x| Complex64::new(x, 0.0).powc(n + 0.5) * (-x * x / 2.0).exp(),
                    DecayClass::GaussianLike,
                )
            };
            let f = profile(args.m_prime)?;
            let g = profile(args.m.conj())?;
            let p = moller_time_probe(&pair, &f, &g, &args.times.0)?;
            json!({
                "f": "x^(m'+1/2) exp(-x^2/2)",
                "g": "x^(conj(m)+1/2) exp(-x^2/2)",
                "times": p.times,
                "values": p.values.iter().map(|v| output::complex(*v)).collect::<Vec<_>>(),
                "limit": output::complex(p.limit),
                "errors": p.errors(),
            })
        }
        ProbeKind::Propagation => {
            if args.m.im != 0.0 || args.m_prime.im != 0.0 {
                return Err(Failure::Usage("the propagation probe needs real orders".into()));
            }
            params.insert("kind".into(), json!("propagation"));
            params.insert("time".into(), json!(args.time));
            params.insert("f1".into(), json!([args.f1.0, args.f1.1]));
            params.insert("f2".into(), json!([args.f2.0, args.f2.1]));
            params.insert("window".into(), json!([args.window.0, args.window.1]));
            let (m, mp) = (args.m, args.m_prime);
            let psi = Multiplier::new("xi_ratio", Variable::Dilation, move |t| {
                let t = Complex64::new(t, 0.0);
                match (xi(m, -t), xi(mp, t)) {
                    (Ok(a), Ok(b)) => a * b,
                    _ => Complex64::new(f64::NAN, 0.0),
                }
            });
            let half = Complex64::new(0.0, std::f64::consts::FRAC_PI_2) * (m - mp);
            let psi = psi.with_limits(half.exp(), (-half).exp());
            let bump = |(center, width): (f64, f64)| {
                move |s: f64| Complex64::new((-((s - center) / width).powi(2)).exp(), 0.0)
            };
            let p = propagation_probe(&psi, bump(args.f1), bump(args.f2), args.window, args.time)?;
            json!({
                "t": p.t,
                "value": output::complex(p.value),
                "limit": output::complex(p.limit),
                "error": p.error(),
            })
        }
    };
    Ok(Outcome::ok(Report::Record(OutputRecord {
        command: "probe",
        params,
        results,
    })))
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Eig(a) => eig(a),
        Command::Kernel(a) => kernel(a),
        Command::Density(a) => density(a),
        Command::Transform(a) => transform(a),
        Command::Spiral(a) => spiral(a),
        Command::Scatter(a) => scatter(a),
        Command::Check(a) => check(a),
        Command::Probe(a) => probe(a),
    }
}

fn emit(report: &Report) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match report {
        Report::Record(r) => r.write(&mut out)?,
        Report::Csv(t) => t.write_csv(&mut out)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let failure = match run(&cli.command) {
        Ok(outcome) => match emit(&outcome.report) {
            Ok(()) => return ExitCode::from(outcome.code),
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => return ExitCode::from(outcome.code),
            Err(e) => Failure::Io(e),
        },
        Err(f) => f,
    };
    match failure {
        Failure::Usage(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Failure::Refused(msg) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
        Failure::Io(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
