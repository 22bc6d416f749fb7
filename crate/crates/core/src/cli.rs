//! Command-line front end.
//!
//! Exit status: 0 when every checked bound holds, 1 when one is violated,
//! 2 for usage errors and unreadable or malformed inputs, 3 when a numerical
//! routine fails.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::constants::{ConstantMode, ConstantTable};
use crate::corpus::{lemma_fuzz, LemmaFuzzConfig};
use crate::discretize::{GridSpec, KineticKind, PotentialSpec};
use crate::eigensolve::FilterPolicy;
use crate::error::Error;
use crate::inequalities::{exclusion_region, InequalityRequest, Which, Window};
use crate::io::{manifest_path, ManifestBuilder};
use crate::optimizer::{gamma_sweep, maximize_ratio, FamilySpec, OptimizerConfig};
use crate::oracles::{delta_eigenvalue, dirichlet_laplacian_spectrum, roots_to_csv, solve_square_well, WellSpec};
use crate::pipeline::Pipeline;

#[derive(Debug, Parser)]
#[command(
    name = "ltlab",
    version,
    about = "Spectra and eigenvalue inequalities for complex potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full and filtered spectrum of one operator, as CSV.
    Spectrum(SpectrumArgs),
    /// Evaluates one inequality and prints the report.
    Check(CheckArgs),
    /// Rasterizes the eigenvalue exclusion region as a PGM image.
    Region(RegionArgs),
    /// Searches a potential family for the largest ratio.
    Saturate(SaturateArgs),
    /// Runs the search for several values of gamma.
    Sweep(SweepArgs),
    /// Evaluates a closed-form or semi-analytic reference spectrum.
    Oracle(OracleArgs),
    /// Checks the matrix-level Lemma on seeded random operators.
    LemmaFuzz(LemmaFuzzArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KineticArg {
    Laplacian,
    Relativistic,
}

impl From<KineticArg> for KineticKind {
    fn from(k: KineticArg) -> Self {
        match k {
            KineticArg::Laplacian => KineticKind::Laplacian,
            KineticArg::Relativistic => KineticKind::Relativistic,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    /// Distance to [0, inf) below which eigenvalues are rejected (automatic by default).
    #[arg(long)]
    pub tau: Option<f64>,
    /// Largest eigenvector mass in the outer shell of the box.
    #[arg(long, default_value_t = 0.01)]
    pub boundary_fraction_max: f64,
    /// Skip the eigenvector localization test.
    #[arg(long)]
    pub no_boundary_check: bool,
    /// Largest |lambda| kept, as a fraction of the kinetic matrix norm.
    #[arg(long, default_value_t = 0.25)]
    pub resolution_fraction_max: f64,
    #[arg(long)]
    pub no_resolution_check: bool,
    /// Re-solve on an enlarged box and drop eigenvalues that move.
    #[arg(long)]
    pub stability: bool,
    #[arg(long, default_value_t = 1e-3)]
    pub stability_rel_tol: f64,
}

impl FilterArgs {
    fn policy(&self) -> FilterPolicy {
        FilterPolicy {
            tau: self.tau,
            boundary_fraction_max: (!self.no_boundary_check).then_some(self.boundary_fraction_max),
            stability_check: self.stability,
            stability_rel_tol: self.stability_rel_tol,
            resolution_fraction_max: (!self.no_resolution_check).then_some(self.resolution_fraction_max),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    /// Grid JSON file.
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long, value_enum, default_value_t = KineticArg::Laplacian)]
    pub kinetic: KineticArg,
    #[command(flatten)]
    pub filter: FilterArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RequestArgs {
    /// thm1_i, thm1_ii, cor_i, cor_ii, lemma, single_9, single_10, single_11 or davies2.
    #[arg(long)]
    pub ineq: String,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Use the refined integrand where available.
    #[arg(long)]
    pub refined: bool,
    /// classical, sharp_known, scaled, scaled:<factor> or unit.
    #[arg(long, default_value = "sharp_known")]
    pub mode: String,
    /// Relative slack of the verdict (default 0.05; 1e-9 for the Lemma).
    #[arg(long)]
    pub slack: Option<f64>,
    /// Allow eigenvalue-sum checks below gamma = 1; such reports carry no verdict.
    #[arg(long)]
    pub conjectural: bool,
    /// JSON file overriding built-in constants.
    #[arg(long)]
    pub constants: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Potential JSON file.
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long, default_value = "spectrum.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[arg(long)]
    pub potential: PathBuf,
    #[command(flatten)]
    pub request: RequestArgs,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value = "report.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[arg(long)]
    pub potential: PathBuf,
    #[arg(long)]
    pub gamma: f64,
    /// re_min,re_max,im_min,im_max; defaults to the kept spectrum's bounding box inflated by 20%.
    #[arg(long)]
    pub window: Option<String>,
    /// NXxNY or a single N for a square raster.
    #[arg(long, default_value = "400x400")]
    pub resolution: String,
    #[arg(long, default_value = "sharp_known")]
    pub mode: String,
    /// Also use the one-dimensional Davies bound.
    #[arg(long)]
    pub davies: bool,
    #[arg(long)]
    pub constants: Option<PathBuf>,
    /// PGM output; the sidecar goes to the same path with a .json extension.
    #[arg(long, default_value = "region.pgm")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Potential family JSON file.
    #[arg(long)]
    pub family: PathBuf,
    #[arg(long)]
    pub grid: PathBuf,
    #[arg(long, value_enum, default_value_t = KineticArg::Laplacian)]
    pub kinetic: KineticArg,
    /// Turn off the box-enlargement test that is on by default during searches.
    #[arg(long)]
    pub no_stability: bool,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_evals: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub init_scale: f64,
}

impl SearchArgs {
    fn config(&self, grid: GridSpec, table: ConstantTable) -> OptimizerConfig {
        let policy = if self.no_stability {
            FilterPolicy::default()
        } else {
            FilterPolicy::with_stability()
        };
        let mut cfg = OptimizerConfig::new(Pipeline::new(grid, self.kinetic.into(), policy), self.seed);
        cfg.restarts = self.restarts;
        cfg.max_evals = self.max_evals;
        cfg.init_scale = self.init_scale;
        cfg.constants = table;
        cfg
    }
}

#[derive(Debug, Clone, Args)]
pub struct SaturateArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub request: RequestArgs,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value = "saturate.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub request: RequestArgs,
    /// Comma-separated gamma values.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub gammas: Vec<f64>,
    #[arg(long, default_value = "sweep.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// Finite square well of depth V0 on [-a, a].
    SquareWell,
    /// Point interaction of strength c.
    Delta,
    /// Closed-form spectrum of the free Dirichlet lattice Laplacian.
    Laplacian,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub kind: OracleKind,
    /// Well depth V0, e.g. `3+2i` or `3,2`.
    #[arg(long)]
    pub depth: Option<String>,
    /// Well half-width a.
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long, default_value_t = crate::oracles::DEFAULT_MAX_COUNT)]
    pub max_count: usize,
    /// Delta strength c.
    #[arg(long)]
    pub strength: Option<String>,
    /// Grid JSON file for the lattice Laplacian.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long, default_value = "oracle.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LemmaFuzzArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 60)]
    pub points: usize,
    #[arg(long, default_value_t = 6.0)]
    pub half_length: f64,
    /// The relativistic kinetic term runs on a periodic grid.
    #[arg(long, value_enum, default_value_t = KineticArg::Laplacian)]
    pub kinetic: KineticArg,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,1,-1,3,-3",
        allow_hyphen_values = true
    )]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2")]
    pub gammas: Vec<f64>,
    #[arg(long, default_value = "lemma_fuzz.json")]
    pub out: PathBuf,
}

/// A failed command, with the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. } | Error::Continuation { .. } | Error::Contract(_) => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

/// Whether every bound checked by a command held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    fn from_holds(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Verdict::Holds => 0,
            Verdict::Violated => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses a complex number given as `re`, `re,im` or `a+bi`.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let bad = || CliError::usage(format!("cannot parse complex number `{s}`"));
    if let Some((re, im)) = s.split_once(',') {
        let re = re.trim().parse().map_err(|_| bad())?;
        let im = im.trim().parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    s.trim().parse::<Complex64>().map_err(|_| bad())
}

fn parse_window(s: &str) -> CliResult<Window> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::usage(format!("window must be re_min,re_max,im_min,im_max, got `{s}`")))?;
    match v[..] {
        [a, b, c, d] => Ok(Window::new(a, b, c, d)?),
        _ => Err(CliError::usage(format!("window needs four numbers, got `{s}`"))),
    }
}

fn parse_resolution(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::usage(format!("resolution must be NXxNY or N, got `{s}`"));
    let parts: Vec<&str> = s.split(['x', 'X', ',']).collect();
    match parts[..] {
        [n] => {
            let n = n.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
        [a, b] => Ok((
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], path: &Path) -> CliResult<T> {
    serde_json::from_slice(bytes).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn read_input(manifest: &mut ManifestBuilder, path: &Path) -> CliResult<Vec<u8>> {
    manifest
        .read_input(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_grid(manifest: &mut ManifestBuilder, path: &Path) -> CliResult<GridSpec> {
    let grid: GridSpec = parse_json(&read_input(manifest, path)?, path)?;
    grid.validate()?;
    Ok(grid)
}

fn load_potential(manifest: &mut ManifestBuilder, path: &Path) -> CliResult<PotentialSpec> {
    let bytes = read_input(manifest, path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::usage(format!("{} is not UTF-8", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    PotentialSpec::from_json_str(&text, base).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_constants(manifest: &mut ManifestBuilder, path: Option<&Path>) -> CliResult<ConstantTable> {
    match path {
        None => Ok(ConstantTable::default()),
        Some(p) => {
            read_input(manifest, p)?;
            ConstantTable::from_json_file(p).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))
        }
    }
}

fn build_request(args: &RequestArgs, gamma: f64, kinetic: KineticKind) -> CliResult<InequalityRequest> {
    let which: Which = args.ineq.parse()?;
    let mode: ConstantMode = args.mode.parse()?;
    let mut req = InequalityRequest::new(which, gamma)
        .mode(mode)
        .refined(args.refined)
        .kinetic(kinetic)
        .conjectural(args.conjectural);
    req.kappa = args.kappa;
    req.alpha = args.alpha;
    if let Some(s) = args.slack {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(CliError::usage(format!("slack must be a nonnegative number, got {s}")));
        }
        req = req.slack(s);
    }
    Ok(req)
}

fn pretty(value: &impl serde::Serialize) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text.into_bytes()
}

fn cmd_spectrum(a: &SpectrumArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let grid = load_grid(m, &a.operator.grid)?;
    let spec = load_potential(m, &a.potential)?;
    let pipeline = Pipeline::new(grid, a.operator.kinetic.into(), a.operator.filter.policy());
    let out = pipeline.run(&spec)?;
    m.write_output(&a.out, out.filtered.to_csv().as_bytes())?;
    Ok(Verdict::Holds)
}

fn cmd_check(a: &CheckArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let kinetic: KineticKind = a.operator.kinetic.into();
    let request = build_request(&a.request, a.gamma, kinetic)?;
    let table = load_constants(m, a.request.constants.as_deref())?;
    let grid = load_grid(m, &a.operator.grid)?;
    request.validate(grid.dim)?;
    let spec = load_potential(m, &a.potential)?;
    let out = Pipeline::new(grid, kinetic, a.operator.filter.policy()).run(&spec)?;
    let report = out.check(&request, &table)?;
    let bytes = pretty(&report.to_json());
    print!("{}", String::from_utf8_lossy(&bytes));
    m.write_output(&a.out, &bytes)?;
    Ok(Verdict::from_holds(request.conjectural || report.satisfied))
}

fn cmd_region(a: &RegionArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let mode: ConstantMode = a.mode.parse()?;
    let resolution = parse_resolution(&a.resolution)?;
    let given_window = a.window.as_deref().map(parse_window).transpose()?;
    let table = load_constants(m, a.constants.as_deref())?;
    let grid = load_grid(m, &a.operator.grid)?;
    let spec = load_potential(m, &a.potential)?;
    let pipeline = Pipeline::new(grid, a.operator.kinetic.into(), a.operator.filter.policy());
    let (v, window) = match given_window {
        Some(w) => (pipeline.operator(&spec, &grid)?.0, w),
        None => {
            let out = pipeline.run(&spec)?;
            let w = if out.filtered.kept.is_empty() {
                Window::new(-1.0, 1.0, -1.0, 1.0)?
            } else {
                Window::bounding(&out.filtered.kept, 0.2)?
            };
            (out.potential, w)
        }
    };
    let raster = exclusion_region(&v, a.gamma, mode, window, resolution, a.davies, &table)?;
    m.write_output(&a.out, &raster.to_pgm())?;
    m.write_output(a.out.with_extension("json"), &pretty(&raster.sidecar_json()))?;
    Ok(Verdict::Holds)
}

fn cmd_saturate(a: &SaturateArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let kinetic: KineticKind = a.search.kinetic.into();
    let request = build_request(&a.request, a.gamma, kinetic)?;
    let table = load_constants(m, a.request.constants.as_deref())?;
    let family: FamilySpec = FamilySpec::from_json_str(
        std::str::from_utf8(&read_input(m, &a.search.family)?)
            .map_err(|_| CliError::usage("family file is not UTF-8"))?,
    )
    .map_err(|e| CliError::usage(format!("{}: {e}", a.search.family.display())))?;
    let grid = load_grid(m, &a.search.grid)?;
    m.seed(a.search.seed);
    let config = a.search.config(grid, table);
    let result = maximize_ratio(&family, &request, &config)?;
    let mut text = result.to_json_pretty();
    text.push('\n');
    m.write_output(&a.out, text.as_bytes())?;
    if let Some(v) = &result.violation {
        let dump = a.out.with_extension("violation.json");
        m.write_output(&dump, &pretty(v))?;
        eprintln!(
            "ratio {} exceeds the bound; offending potential written to {}",
            v.ratio,
            dump.display()
        );
        return Ok(Verdict::Violated);
    }
    Ok(Verdict::Holds)
}

fn cmd_sweep(a: &SweepArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let kinetic: KineticKind = a.search.kinetic.into();
    // γ only fills the template; each row sets its own
    let template = build_request(&a.request, 1.0, kinetic)?;
    let table = load_constants(m, a.request.constants.as_deref())?;
    let family: FamilySpec = FamilySpec::from_json_str(
        std::str::from_utf8(&read_input(m, &a.search.family)?)
            .map_err(|_| CliError::usage("family file is not UTF-8"))?,
    )
    .map_err(|e| CliError::usage(format!("{}: {e}", a.search.family.display())))?;
    let grid = load_grid(m, &a.search.grid)?;
    m.seed(a.search.seed);
    let config = a.search.config(grid, table);
    let rows = gamma_sweep(&family, &a.gammas, &template, &config);
    m.write_output(&a.out, &pretty(&rows))?;
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("gamma = {}: {e}", r.gamma);
        }
    }
    Ok(Verdict::from_holds(rows.iter().all(|r| r.within_bound != Some(false))))
}

fn cmd_oracle(a: &OracleArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let text = match a.kind {
        OracleKind::SquareWell => {
            let depth = a
                .depth
                .as_deref()
                .ok_or_else(|| CliError::usage("square-well needs --depth"))?;
            let half_width = a
                .half_width
                .ok_or_else(|| CliError::usage("square-well needs --half-width"))?;
            let well = WellSpec::new(parse_complex(depth)?, half_width)?;
            let solution = solve_square_well(&well, a.max_count)?;
            for d in &solution.dropped {
                eprintln!("dropped root with Re kappa <= 0: {d:?}");
            }
            roots_to_csv(&solution.roots)
        }
        OracleKind::Delta => {
            let c = a
                .strength
                .as_deref()
                .ok_or_else(|| CliError::usage("delta needs --strength"))?;
            let z = delta_eigenvalue(parse_complex(c)?)?;
            // adding zero turns a negative zero into a plain one
            format!("re_lambda,im_lambda\n{},{}\n", z.re + 0.0, z.im + 0.0)
        }
        OracleKind::Laplacian => {
            let path = a
                .grid
                .as_deref()
                .ok_or_else(|| CliError::usage("laplacian needs --grid"))?;
            let grid = load_grid(m, path)?;
            let mut s = String::from("lambda\n");
            for v in dirichlet_laplacian_spectrum(&grid)? {
                s.push_str(&format!("{v}\n"));
            }
            s
        }
    };
    m.write_output(&a.out, text.as_bytes())?;
    Ok(Verdict::Holds)
}

fn cmd_lemma_fuzz(a: &LemmaFuzzArgs, m: &mut ManifestBuilder) -> CliResult<Verdict> {
    let config = LemmaFuzzConfig {
        count: a.count,
        points: a.points,
        half_length: a.half_length,
        kinetic: a.kinetic.into(),
        alphas: a.alphas.clone(),
        gammas: a.gammas.clone(),
        seed: a.seed,
    };
    m.seed(a.seed);
    let summary = crate::optimizer::thread_pool()?.install(|| lemma_fuzz(&config))?;
    m.write_output(&a.out, &pretty(&summary))?;
    println!(
        "{} cases, worst ratio {}, {} violations",
        summary.cases,
        summary.worst_ratio(),
        summary.violations.len()
    );
    Ok(Verdict::from_holds(summary.passed()))
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Check(_) => "check",
            Command::Region(_) => "region",
            Command::Saturate(_) => "saturate",
            Command::Sweep(_) => "sweep",
            Command::Oracle(_) => "oracle",
            Command::LemmaFuzz(_) => "lemma-fuzz",
        }
    }

    fn out(&self) -> &Path {
        match self {
            Command::Spectrum(a) => &a.out,
            Command::Check(a) => &a.out,
            Command::Region(a) => &a.out,
            Command::Saturate(a) => &a.out,
            Command::Sweep(a) => &a.out,
            Command::Oracle(a) => &a.out,
            Command::LemmaFuzz(a) => &a.out,
        }
    }

    /// Runs the command and writes its manifest next to the primary output.
    pub fn execute(&self, args: Vec<String>) -> CliResult<Verdict> {
        let mut m = ManifestBuilder::new(self.name(), args);
        let verdict = match self {
            Command::Spectrum(a) => cmd_spectrum(a, &mut m),
            Command::Check(a) => cmd_check(a, &mut m),
            Command::Region(a) => cmd_region(a, &mut m),
            Command::Saturate(a) => cmd_saturate(a, &mut m),
            Command::Sweep(a) => cmd_sweep(a, &mut m),
            Command::Oracle(a) => cmd_oracle(a, &mut m),
            Command::LemmaFuzz(a) => cmd_lemma_fuzz(a, &mut m),
        }?;
        m.finish(manifest_path(self.out()))?;
        Ok(verdict)
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let recorded = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match cli.command.execute(recorded) {
        Ok(v) => v.code(),
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
