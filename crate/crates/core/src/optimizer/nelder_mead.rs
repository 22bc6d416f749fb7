//! Nelder–Mead simplex search (reflection 1, expansion 2, contraction ½, shrink ½).

/// Stopping rules.
#[derive(Debug, Clone, PartialEq)]
pub struct NmOptions {
    pub max_evals: usize,
    /// Stop when `f_worst - f_best ≤ ftol · (1 + |f_best|)`.
    pub ftol: f64,
    /// Stop when every vertex is within `xtol` (max norm) of the best one.
    pub xtol: f64,
    /// Initial edge lengths, one per coordinate.
    pub steps: Vec<f64>,
}

/// Outcome of one minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct NmTrace {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// Objective value of every evaluation, in order.
    pub history: Vec<f64>,
}

struct Counter<F> {
    f: F,
    history: Vec<f64>,
    best: (f64, Vec<f64>),
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.history.push(v);
        if v < self.best.0 {
            self.best = (v, x.to_vec());
        }
        v
    }
}

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimizes `f` from `x0`; never evaluates more than `max_evals` times.
pub fn minimize(f: impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &NmOptions) -> NmTrace {
    assert_eq!(opts.steps.len(), x0.len(), "one initial step per coordinate");
    let n = x0.len();
    let mut c = Counter {
        f,
        history: Vec::new(),
        best: (f64::INFINITY, x0.to_vec()),
    };
    let budget = opts.max_evals.max(1);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if c.history.len() >= budget {
            break;
        }
        let mut x = x0.to_vec();
        if i > 0 {
            x[i - 1] += opts.steps[i - 1];
        }
        let fx = c.eval(&x);
        simplex.push((x, fx));
    }

    while simplex.len() == n + 1 && c.history.len() < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (f_best, f_worst) = (simplex[0].1, simplex[n].1);
        let size = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if size <= opts.xtol || f_worst - f_best <= opts.ftol * (1.0 + f_best.abs()) {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let xr = lerp(&centroid, &worst, -1.0);
        let fr = c.eval(&xr);
        if fr < f_best {
            if c.history.len() >= budget {
                simplex[n] = (xr, fr);
                break;
            }
            let xe = lerp(&centroid, &worst, -2.0);
            let fe = c.eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        if c.history.len() >= budget {
            break;
        }
        let (xc, fc, accept) = if fr < f_worst {
            let xc = lerp(&centroid, &xr, 0.5);
            let fc = c.eval(&xc);
            (xc, fc, fc <= fr)
        } else {
            let xc = lerp(&centroid, &worst, 0.5);
            let fc = c.eval(&xc);
            (xc, fc, fc < f_worst)
        };
        if accept {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            if c.history.len() >= budget {
                break;
            }
            let x = lerp(&best, &vertex.0, 0.5);
            let fx = c.eval(&x);
            *vertex = (x, fx);
        }
    }
    NmTrace {
        best_x: c.best.1,
        best_f: c.best.0,
        history: c.history,
    }
}
