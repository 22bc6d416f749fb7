//! Derivative-free search for potentials that come close to equality in an
//! inequality.

mod family;
mod nelder_mead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use family::{FamilyKind, FamilySpec};
pub use nelder_mead::{minimize, NmOptions, NmTrace};

use crate::constants::{check_admissible, ConstantTable};
use crate::discretize::PotentialSpec;
use crate::error::{Error, Result};
use crate::inequalities::{InequalityRequest, Which};
use crate::pipeline::Pipeline;

/// Weight of the squared normalized bound overshoot subtracted from the ratio.
pub const PENALTY_WEIGHT: f64 = 10.0;
/// Objective value reported when the pipeline fails.
pub const FAILED_OBJECTIVE: f64 = -1.0;
/// At most this many diagnostics are kept per restart.
const MAX_DIAGNOSTICS: usize = 10;

/// Search settings.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_evals: usize,
    pub seed: u64,
    /// Initial simplex edge as a fraction of each search interval.
    pub init_scale: f64,
    pub ftol: f64,
    /// Simplex-size tolerance, as a fraction of each search interval.
    pub xtol: f64,
    pub pipeline: Pipeline,
    pub constants: ConstantTable,
}

impl OptimizerConfig {
    pub fn new(pipeline: Pipeline, seed: u64) -> Self {
        OptimizerConfig {
            restarts: 5,
            max_evals: 200,
            seed,
            init_scale: 0.1,
            ftol: 1e-10,
            xtol: 1e-8,
            pipeline,
            constants: ConstantTable::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals == 0 {
            return Err(Error::Request("restarts and max_evals must be at least 1".into()));
        }
        if !(self.init_scale > 0.0 && self.ftol >= 0.0 && self.xtol >= 0.0) {
            return Err(Error::Request(
                "init_scale must be positive and tolerances nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Objective value with the reason for a failed evaluation, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub value: f64,
    pub diagnostic: Option<String>,
}

/// LHS/RHS ratio of `request` for the family member with natural parameters
/// `theta`. Failures give [`FAILED_OBJECTIVE`] and a diagnostic.
pub fn objective_ratio(
    theta: &[f64],
    family: &FamilySpec,
    request: &InequalityRequest,
    pipeline: &Pipeline,
    table: &ConstantTable,
) -> Objective {
    let eval = || -> Result<f64> {
        let spec = family.potential(theta)?;
        let report = pipeline.run(&spec)?.check(request, table)?;
        if report.ratio.is_finite() {
            Ok(report.ratio)
        } else {
            Err(Error::Domain("right-hand side vanished".into()))
        }
    };
    match eval() {
        Ok(value) => Objective {
            value,
            diagnostic: None,
        },
        Err(e) => Objective {
            value: FAILED_OBJECTIVE,
            diagnostic: Some(e.to_string()),
        },
    }
}

/// One restart of the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartResult {
    pub index: usize,
    pub start: Vec<f64>,
    pub best_params: Vec<f64>,
    pub best_ratio: f64,
    pub evals: usize,
    /// Objective value of every evaluation.
    pub history: Vec<f64>,
    /// Failed evaluations as `(eval index, message)`.
    pub diagnostics: Vec<(usize, String)>,
}

impl RestartResult {
    /// Running maximum of the history.
    pub fn best_so_far(&self) -> Vec<f64> {
        self.history
            .iter()
            .scan(f64::NEG_INFINITY, |m, &v| {
                *m = m.max(v);
                Some(*m)
            })
            .collect()
    }
}

/// A potential that pushed a guaranteed bound past its slack.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub ratio: f64,
    pub params: Vec<f64>,
    pub potential: PotentialSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub best_ratio: f64,
    pub best_params: Vec<f64>,
    pub best_restart: usize,
    pub eval_count: usize,
    pub gamma: f64,
    pub which: Which,
    pub conjectural: bool,
    pub seed: u64,
    pub family: FamilySpec,
    pub restarts: Vec<RestartResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Violation>,
}

impl OptResult {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("result is serializable")
    }
}

/// Thread pool honouring `LTLAB_THREADS`.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("LTLAB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Request(format!("LTLAB_THREADS must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::Request(format!("cannot start thread pool: {e}")))
}

fn clamp_with_penalty(u: &[f64], bounds: &[[f64; 2]]) -> (Vec<f64>, f64) {
    let mut penalty = 0.0;
    let clamped = u
        .iter()
        .zip(bounds)
        .map(|(&x, &[lo, hi])| {
            let width = if hi > lo { hi - lo } else { 1.0 };
            let over = if x < lo {
                lo - x
            } else if x > hi {
                x - hi
            } else {
                0.0
            };
            penalty += (over / width).powi(2);
            x.clamp(lo, hi)
        })
        .collect();
    (clamped, PENALTY_WEIGHT * penalty)
}

fn run_restart(
    index: usize,
    family: &FamilySpec,
    request: &InequalityRequest,
    config: &OptimizerConfig,
) -> RestartResult {
    let bounds = family.search_bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let start: Vec<f64> = bounds
        .iter()
        .map(|&[lo, hi]| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect();
    let steps: Vec<f64> = bounds
        .iter()
        .zip(&start)
        .map(|(&[lo, hi], &x)| {
            let step = config.init_scale * (hi - lo);
            // step towards the interior
            if x + step > hi {
                -step
            } else {
                step
            }
        })
        .collect();
    let widths: Vec<f64> = bounds
        .iter()
        .map(|&[lo, hi]| if hi > lo { hi - lo } else { 1.0 })
        .collect();
    let min_width = widths.iter().copied().fold(f64::INFINITY, f64::min);
    let opts = NmOptions {
        max_evals: config.max_evals,
        ftol: config.ftol,
        xtol: config.xtol * min_width,
        steps,
    };
    let mut diagnostics = Vec::new();
    let mut count = 0usize;
    let objective = |u: &[f64]| -> f64 {
        let (clamped, penalty) = clamp_with_penalty(u, &bounds);
        let obj = objective_ratio(
            &family.to_natural(&clamped),
            family,
            request,
            &config.pipeline,
            &config.constants,
        );
        if let Some(d) = obj.diagnostic {
            if diagnostics.len() < MAX_DIAGNOSTICS {
                diagnostics.push((count, d));
            }
        }
        count += 1;
        -(obj.value - penalty)
    };
    let trace = minimize(objective, &start, &opts);
    let (best, _) = clamp_with_penalty(&trace.best_x, &bounds);
    RestartResult {
        index,
        start: family.to_natural(&start),
        best_params: family.to_natural(&best),
        best_ratio: -trace.best_f,
        evals: trace.history.len(),
        history: trace.history.iter().map(|v| -v).collect(),
        diagnostics,
    }
}

/// Multi-start Nelder–Mead maximization of the LHS/RHS ratio. Restarts run
/// concurrently; restart `i` draws its start from stream `i` of a generator
/// seeded with `config.seed`, so the result does not depend on scheduling.
pub fn maximize_ratio(family: &FamilySpec, request: &InequalityRequest, config: &OptimizerConfig) -> Result<OptResult> {
    family.validate()?;
    config.validate()?;
    let dim = config.pipeline.grid.dim;
    if family.dim != dim {
        return Err(Error::Request(format!(
            "family is {}-dimensional, grid is {dim}-dimensional",
            family.dim
        )));
    }
    request.validate(dim)?;
    let constant = request.constant(dim, &config.constants)?;
    let pool = thread_pool()?;
    let restarts: Vec<RestartResult> = pool.install(|| {
        (0..config.restarts)
            .into_par_iter()
            .map(|i| run_restart(i, family, request, config))
            .collect()
    });
    let mut best = &restarts[0];
    for r in &restarts[1..] {
        if r.best_ratio > best.best_ratio {
            best = r;
        }
    }
    let tolerance = 1.0 + request.slack;
    let violation = if !request.conjectural && constant.guaranteed && best.best_ratio > tolerance {
        let potential = family.potential(&best.best_params)?;
        log::error!(
            "{} ratio {} exceeds 1 + slack with a guaranteed constant; potential: {}",
            request.which,
            best.best_ratio,
            serde_json::to_string(&potential).unwrap_or_default()
        );
        Some(Violation {
            ratio: best.best_ratio,
            params: best.best_params.clone(),
            potential,
        })
    } else {
        None
    };
    Ok(OptResult {
        best_ratio: best.best_ratio,
        best_params: best.best_params.clone(),
        best_restart: best.index,
        eval_count: restarts.iter().map(|r| r.evals).sum(),
        gamma: request.gamma,
        which: request.which,
        conjectural: request.conjectural,
        seed: config.seed,
        family: family.clone(),
        violation,
        restarts,
    })
}

/// One row of a γ sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    /// γ lies below the range the theorems cover; the ratio is exploratory.
    pub conjectural: bool,
    pub best_ratio: Option<f64>,
    pub best_params: Option<Vec<f64>>,
    /// `best_ratio ≤ 1 + slack`; absent for conjectural rows and errors.
    pub within_bound: Option<bool>,
    pub error: Option<String>,
}

/// Runs [`maximize_ratio`] for each γ. Inadmissible entries are reported and skipped.
pub fn gamma_sweep(
    family: &FamilySpec,
    gammas: &[f64],
    template: &InequalityRequest,
    config: &OptimizerConfig,
) -> Vec<SweepRow> {
    let dim = config.pipeline.grid.dim;
    gammas
        .iter()
        .map(|&gamma| {
            let conjectural = gamma < 1.0 && template.which.is_sum();
            let request = InequalityRequest {
                gamma,
                conjectural,
                ..*template
            };
            let run = check_admissible(gamma, dim).and_then(|_| maximize_ratio(family, &request, config));
            match run {
                Ok(r) => SweepRow {
                    gamma,
                    conjectural,
                    best_ratio: Some(r.best_ratio),
                    best_params: Some(r.best_params),
                    within_bound: (!conjectural).then_some(r.best_ratio <= 1.0 + request.slack),
                    error: None,
                },
                Err(e) => SweepRow {
                    gamma,
                    conjectural,
                    best_ratio: None,
                    best_params: None,
                    within_bound: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
