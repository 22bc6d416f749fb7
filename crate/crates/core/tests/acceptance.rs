//! End-to-end acceptance run. Prints one line per criterion and exits with a
//! failure status if any criterion not listed in `KNOWN_FAILING` fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use ltlab::constants::{classical_constant, riesz_lift_constant, ConstantMode, ConstantTable};
use ltlab::corpus::{corpus, lemma_fuzz, CorpusConfig, LemmaFuzzConfig};
use ltlab::discretize::{
    build_operator, potential_integral, sample_potential, GridSpec, IntegralPart, KineticKind, PotentialSpec,
    PotentialTerm, SampledPotential,
};
use ltlab::eigensolve::{eigenvalues_dense, hermitian_eigenvalues, max_pairing_distance, solve_operator, FilterPolicy};
use ltlab::inequalities::{exclusion_region, InequalityRequest, Which, Window};
use ltlab::optimizer::{gamma_sweep, maximize_ratio, FamilyKind, FamilySpec, OptimizerConfig};
use ltlab::oracles::{dirichlet_laplacian_spectrum, square_well_eigenvalues, WellSpec};
use ltlab::pipeline::Pipeline;

/// Criteria that fail for reasons recorded with the project notes; they are
/// still run and reported.
const KNOWN_FAILING: &[u32] = &[2];

const CORPUS_SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn corpus_grid() -> GridSpec {
    GridSpec::dirichlet(1, 24.0, 800).unwrap()
}

fn corpus_potentials() -> Vec<PotentialSpec> {
    corpus(&CorpusConfig::for_box(1, 24.0), CORPUS_SEED, 50)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = lemma_fuzz(&LemmaFuzzConfig::standard(CORPUS_SEED)).unwrap();
    let elapsed = start.elapsed();
    outcome(
        s.passed() && s.worst_ratio() <= 1.0 + 1e-9 && elapsed < Duration::from_secs(60),
        format!(
            "{} cases, worst ratio {:.12}, {} violations, {:.1} s",
            s.cases,
            s.worst_ratio(),
            s.violations.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Narrow box of total weight 4 on `[-0.01, 0.01]`, pointwise sampled.
fn narrow_well() -> (SampledPotential, Vec<Complex64>) {
    let grid = GridSpec::dirichlet(1, 40.0, 8000).unwrap().with_max_dimension(8000);
    let spec = PotentialSpec::new(1, vec![PotentialTerm::delta_like(c(4.0, 0.0), 0.0, 0.01)]);
    let out = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability())
        .run(&spec)
        .unwrap();
    (out.potential, out.filtered.kept)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (v, kept) = narrow_well();
    if kept.len() != 1 {
        return outcome(false, format!("expected one kept eigenvalue, got {kept:?}"));
    }
    let lambda = kept[0];
    let l1 = potential_integral(&v, 1.0, IntegralPart::Abs);
    let ratio = lambda.norm() / (0.25 * l1 * l1);
    let near = (lambda + 4.0).norm() < 0.04;
    let bounded = (0.95..=1.0 + 1e-6).contains(&ratio);
    let exact_box = square_well_eigenvalues(&WellSpec::new(c(200.0, 0.0), 0.01).unwrap(), 1).unwrap()[0].lambda;
    outcome(
        near && bounded && start.elapsed() < Duration::from_secs(300),
        format!(
            "lambda = {:.6}, |lambda+4| = {:.4} (limit 0.04; exact box value {:.6}), Davies ratio {:.6}, {:.1} s",
            lambda.re,
            (lambda + 4.0).norm(),
            exact_box.re,
            ratio,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let (v, kept) = narrow_well();
    let filtered = ltlab::eigensolve::FilteredSpectrum {
        kept,
        ..ltlab::eigensolve::FilteredSpectrum::empty(FilterPolicy::default())
    };
    let req = InequalityRequest::new(Which::Single9, 0.5).mode(ConstantMode::SharpKnown);
    let r = ltlab::inequalities::worst_single(&req, &filtered, &v, &ConstantTable::default()).unwrap();
    outcome(
        (0.95..=1.0 + 1e-6).contains(&r.ratio),
        format!("Single_9 ratio {:.6} (constant {})", r.ratio, r.constant.value),
    )
}

fn criterion_4() -> Outcome {
    let depth = c(3.0, 2.0);
    let roots = square_well_eigenvalues(&WellSpec::new(depth, 1.0).unwrap(), 8).unwrap();
    let spec = PotentialSpec::new(
        1,
        vec![PotentialTerm::boxed(-depth, &[0.0], &[1.0]).with_cell_average()],
    );
    let grid = GridSpec::dirichlet(1, 30.0, 4000).unwrap();
    let out = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability())
        .run(&spec)
        .unwrap();
    let kept = &out.filtered.kept;
    let mut worst = 0.0f64;
    for r in &roots {
        let nearest = kept.iter().map(|z| (z - r.lambda).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest / r.lambda.norm());
    }
    outcome(
        kept.len() == roots.len() && worst < 1e-3,
        format!(
            "{} oracle roots, {} kept, worst relative error {:.2e}",
            roots.len(),
            kept.len(),
            worst
        ),
    )
}

fn sum_requests() -> Vec<InequalityRequest> {
    let mut out = Vec::new();
    for (gamma, mode) in [
        (1.0, ConstantMode::scaled_default()),
        (1.5, ConstantMode::SharpKnown),
        (2.0, ConstantMode::SharpKnown),
    ] {
        let base = |w| InequalityRequest::new(w, gamma).mode(mode);
        out.push(base(Which::Thm1I));
        for kappa in [0.5, 2.0] {
            for refined in [false, true] {
                out.push(base(Which::Thm1Ii).kappa(kappa).refined(refined));
            }
        }
        for refined in [false, true] {
            out.push(base(Which::CorI).refined(refined));
        }
        out.push(base(Which::CorIi).kappa(1.0));
    }
    out
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let pipeline = Pipeline::new(corpus_grid(), KineticKind::Laplacian, FilterPolicy::with_stability());
    let table = ConstantTable::default();
    let requests = sum_requests();
    let mut worst = (0.0f64, String::new());
    let mut checks = 0;
    for (i, spec) in corpus_potentials().iter().enumerate() {
        let out = pipeline.run(spec).unwrap();
        for req in &requests {
            let r = out.check(req, &table).unwrap();
            checks += 1;
            if r.ratio > worst.0 {
                worst = (
                    r.ratio,
                    format!("potential {i}, {} gamma {} kappa {:?}", req.which, req.gamma, req.kappa),
                );
            }
        }
    }
    outcome(
        worst.0 <= 1.05,
        format!(
            "{checks} checks, worst ratio {:.4} ({}), {:.1} s",
            worst.0,
            worst.1,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_6() -> Outcome {
    let grid = corpus_grid();
    let coarse = GridSpec::dirichlet(1, 24.0, 200).unwrap();
    let mut worst_conj = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut worst_herm = 0.0f64;
    let mut worst_dense = 0.0f64;
    for spec in corpus_potentials() {
        let v = sample_potential(&spec, &grid).unwrap();
        let m = build_operator(&grid, &v, KineticKind::Laplacian).unwrap();
        let s = solve_operator(&m, false).unwrap().spectrum;
        let scale = s.max_abs();
        let sc = solve_operator(&m.conj(), false).unwrap().spectrum;
        worst_conj = worst_conj.max(max_pairing_distance(&s.conj().values, &sc.values) / scale);
        let sum: Complex64 = s.values.iter().sum();
        worst_trace = worst_trace.max((sum - m.trace()).norm() / m.trace().norm());

        let real: Vec<Complex64> = v.values.iter().map(|z| c(z.re, 0.0)).collect();
        let vr = SampledPotential::new(grid, real).unwrap();
        let mr = build_operator(&grid, &vr, KineticKind::Laplacian).unwrap();
        let sr = solve_operator(&mr, false).unwrap().spectrum;
        let mut re: Vec<f64> = sr.values.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        let h = hermitian_eigenvalues(&mr.hermitian_combination(0.0)).unwrap();
        let rscale = sr.max_abs();
        let im_max = sr.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let diff = re.iter().zip(&h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_herm = worst_herm.max(im_max.max(diff) / rscale);

        // the dense solver on a coarser copy of the same operator
        let vc = sample_potential(&spec, &coarse).unwrap();
        let mc = build_operator(&coarse, &vc, KineticKind::Laplacian).unwrap();
        let dense = eigenvalues_dense(&mc.to_dense()).unwrap();
        let tri = solve_operator(&mc, false).unwrap().spectrum;
        let dense_conj = eigenvalues_dense(&mc.conj().to_dense()).unwrap();
        let dscale = dense.max_abs();
        worst_dense = worst_dense
            .max(max_pairing_distance(&dense.values, &tri.values) / dscale)
            .max(max_pairing_distance(&dense.conj().values, &dense_conj.values) / dscale);
    }
    let free = build_operator(&grid, &SampledPotential::zeros(grid), KineticKind::Laplacian).unwrap();
    let mut free_vals: Vec<f64> = solve_operator(&free, false)
        .unwrap()
        .spectrum
        .values
        .iter()
        .map(|z| z.re)
        .collect();
    free_vals.sort_by(f64::total_cmp);
    let exact = dirichlet_laplacian_spectrum(&grid).unwrap();
    let free_err = free_vals
        .iter()
        .zip(&exact)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max);
    outcome(
        worst_conj <= 1e-9 && worst_trace <= 1e-9 && worst_herm <= 1e-9 && worst_dense <= 1e-9 && free_err < 1e-10,
        format!(
            "conjugation {worst_conj:.1e}, trace {worst_trace:.1e}, real-V paths {worst_herm:.1e}, dense vs tridiagonal {worst_dense:.1e}, free Laplacian {free_err:.1e}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let pipeline = Pipeline::new(corpus_grid(), KineticKind::Laplacian, FilterPolicy::with_stability());
    let table = ConstantTable::default();
    let mut checked = 0;
    let mut misplaced = Vec::new();
    for (i, spec) in corpus_potentials().iter().enumerate() {
        let out = pipeline.run(spec).unwrap();
        if out.filtered.kept.is_empty() {
            continue;
        }
        let window = Window::bounding(&out.filtered.kept, 0.2).unwrap();
        let raster = exclusion_region(
            &out.potential,
            1.0,
            ConstantMode::scaled_default(),
            window,
            (400, 400),
            true,
            &table,
        )
        .unwrap();
        for &z in &out.filtered.kept {
            checked += 1;
            if raster.excluded_at(z) != Some(false) {
                misplaced.push((i, z));
            }
        }
    }
    outcome(
        misplaced.is_empty() && checked > 0,
        format!(
            "{checked} kept eigenvalues checked, {} on excluded pixels {:?}",
            misplaced.len(),
            misplaced
        ),
    )
}

/// `∫_0^1 f` by tanh-sinh quadrature; `f` receives `(x, 1 - x)` computed without cancellation.
fn tanh_sinh(f: impl Fn(f64, f64) -> f64) -> f64 {
    // |t| <= 6 reaches x ~ 1e-275, enough for integrands as singular as x^-0.9
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    for k in -384i32..=384 {
        let t = k as f64 * h;
        let u = std::f64::consts::PI * t.sinh();
        let x = 1.0 / (1.0 + u.exp());
        let y = 1.0 / (1.0 + (-u).exp());
        let w = std::f64::consts::PI * t.cosh() * x * y;
        if x > 0.0 && y > 0.0 {
            sum += w * f(x, y);
        }
    }
    sum * h
}

fn criterion_8() -> Outcome {
    let exact = classical_constant(1.5, 1).unwrap() == 0.1875;
    let mut lift_err = 0.0f64;
    for gamma in [1.1, 1.5, 2.0, 3.0, 5.0] {
        // at s = -1 the identity reads C_γ = ∫_0^1 t^{γ-2} (1 - t) dt
        let quad = tanh_sinh(|t, one_minus_t| t.powf(gamma - 2.0) * one_minus_t);
        let c = riesz_lift_constant(gamma).unwrap();
        lift_err = lift_err.max(((quad - c) / c).abs());
    }
    let table = ConstantTable::default();
    let mut limit_err = 0.0f64;
    for gamma in [1.0, 1.5, 2.0] {
        let cone = table.cone_constant(gamma, 1, 1e7, ConstantMode::Unit).unwrap().value;
        let (cor, _) = table.corollary_constants(gamma, 1, 1.0, ConstantMode::Unit).unwrap();
        limit_err = limit_err.max(((cone - cor.value) / cor.value).abs());
    }
    outcome(
        exact && lift_err < 1e-8 && limit_err < 1e-5,
        format!(
            "classical(3/2, 1) exact: {exact}, lifting constant vs quadrature {lift_err:.1e}, cone limit {limit_err:.1e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let grid = GridSpec::dirichlet(1, 8.0, 399).unwrap();
    let pipeline = Pipeline::new(grid, KineticKind::Laplacian, FilterPolicy::with_stability());
    let config = OptimizerConfig::new(pipeline, 42);
    let family = FamilySpec::delta_like(c(4.0, 0.0));
    let req = InequalityRequest::new(Which::Davies2, 1.0);
    let first = maximize_ratio(&family, &req, &config).unwrap();
    let second = maximize_ratio(&family, &req, &config).unwrap();
    let identical = first.to_json_pretty() == second.to_json_pretty();

    let sweep_family = FamilySpec::new(FamilyKind::GaussianSum { terms: 1 }, 1);
    let template = InequalityRequest::new(Which::Thm1I, 1.0).mode(ConstantMode::scaled_default());
    let sweep_config = OptimizerConfig {
        restarts: 3,
        max_evals: 80,
        ..OptimizerConfig::new(pipeline, 42)
    };
    let rows = gamma_sweep(&sweep_family, &[0.6, 1.0, 1.5, 2.0], &template, &sweep_config);
    let covered_ok = rows
        .iter()
        .filter(|r| r.gamma >= 1.0)
        .all(|r| r.within_bound == Some(true));
    let low = &rows[0];
    let flagged = low.conjectural && low.within_bound.is_none() && low.best_ratio.is_some_and(f64::is_finite);
    let sweep_ratios: Vec<String> = rows
        .iter()
        .map(|r| format!("{}: {:.4}", r.gamma, r.best_ratio.unwrap_or(f64::NAN)))
        .collect();
    outcome(
        first.best_ratio >= 0.9 && identical && covered_ok && flagged,
        format!(
            "best Davies ratio {:.4} at width {:.4}, rerun identical: {identical}, sweep [{}], gamma 0.6 conjectural: {flagged}",
            first.best_ratio,
            first.best_params[0],
            sweep_ratios.join(", ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let s = lemma_fuzz(&LemmaFuzzConfig::relativistic(CORPUS_SEED, 50)).unwrap();
    let grid = GridSpec::periodic(1, 24.0, 400).unwrap();
    let pipeline = Pipeline::new(grid, KineticKind::Relativistic, FilterPolicy::with_stability());
    let table = ConstantTable::default();
    let mut worst = [0.0f64; 3];
    for spec in corpus_potentials() {
        let out = pipeline.run(&spec).unwrap();
        for (slot, gamma) in [1.0, 1.5, 2.0].into_iter().enumerate() {
            let req = InequalityRequest::new(Which::Thm1I, gamma)
                .mode(ConstantMode::Classical)
                .kinetic(KineticKind::Relativistic);
            let r = out.check(&req, &table).unwrap();
            worst[slot] = worst[slot].max(r.ratio);
        }
    }
    outcome(
        s.passed() && s.worst_ratio() <= 1.0 + 1e-9,
        format!(
            "lemma: {} cases, worst ratio {:.12}; Thm1_i with exponent gamma+1 (reported only), worst ratios gamma 1: {:.4}, 1.5: {:.4}, 2: {:.4}",
            s.cases,
            s.worst_ratio(),
            worst[0],
            worst[1],
            worst[2]
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "matrix lemma fuzz", criterion_1),
        (2, "Davies saturation", criterion_2),
        (3, "one-bound-state saturation", criterion_3),
        (4, "square-well cross-validation", criterion_4),
        (5, "eigenvalue-sum corpus", criterion_5),
        (6, "spectral invariants", criterion_6),
        (7, "exclusion-region consistency", criterion_7),
        (8, "constant identities", criterion_8),
        (9, "optimizer", criterion_9),
        (10, "relativistic variant", criterion_10),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let known = KNOWN_FAILING.contains(&id);
        let status = match (result.pass, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as known failing)",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!(
            "criterion {id:>2} {name}: {status} [{:.1} s] {}",
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
