//! Derivative-free maximization: Nelder-Mead with shrinking restarts and a
//! coordinate polish.

#[derive(Debug, Clone)]
pub struct Maximum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Simplex stopping rule met before the evaluation budget ran out.
    pub converged: bool,
}

pub struct Settings {
    pub initial_step: f64,
    /// Stop when the simplex values spread less than this.
    pub ftol: f64,
    /// ... and its diameter is below this.
    pub xtol: f64,
    pub max_evals: usize,
    pub restarts: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { initial_step: 0.25, ftol: 1e-15, xtol: 1e-9, max_evals: 20_000, restarts: 6 }
    }
}

struct Counter<'a, F> {
    f: &'a F,
    evals: usize,
}

impl<F: Fn(&[f64]) -> f64> Counter<'_, F> {
    /// Non-finite values count as minus infinity.
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            v
        } else {
            f64::NEG_INFINITY
        }
    }
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &mut Counter<'_, F>,
    x0: &[f64],
    step: f64,
    s: &Settings,
    budget: usize,
) -> (Vec<f64>, f64, bool) {
    let dim = x0.len();
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += step;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f.call(p)).collect();
    let start = f.evals;
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        pts = idx.iter().map(|&i| pts[i].clone()).collect();
        vals = idx.iter().map(|&i| vals[i]).collect();

        let spread = vals[0] - vals[dim];
        let diam = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() <= s.ftol * vals[0].abs().max(1.0) && diam <= s.xtol {
            return (pts[0].clone(), vals[0], true);
        }
        if f.evals - start >= budget {
            return (pts[0].clone(), vals[0], false);
        }

        let mut cen = vec![0.0; dim];
        for p in &pts[..dim] {
            for (c, v) in cen.iter_mut().zip(p) {
                *c += v / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> { cen.iter().zip(&pts[dim]).map(|(c, w)| c + t * (c - w)).collect() };
        let xr = along(alpha);
        let fr = f.call(&xr);
        if fr > vals[0] {
            let xe = along(gamma);
            let fe = f.call(&xe);
            if fe > fr {
                pts[dim] = xe;
                vals[dim] = fe;
            } else {
                pts[dim] = xr;
                vals[dim] = fr;
            }
            continue;
        }
        if fr > vals[dim - 1] {
            pts[dim] = xr;
            vals[dim] = fr;
            continue;
        }
        let (xc, fc) = if fr > vals[dim] {
            let xc = along(rho);
            let fc = f.call(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = f.call(&xc);
            (xc, fc)
        };
        if fc > vals[dim].max(fr) {
            pts[dim] = xc;
            vals[dim] = fc;
            continue;
        }
        let best = pts[0].clone();
        for i in 1..=dim {
            for (p, b) in pts[i].iter_mut().zip(&best) {
                *p = b + sigma * (*p - b);
            }
            vals[i] = f.call(&pts[i]);
        }
    }
}

/// Greedy coordinate search over step sizes `1e-2 .. 1e-10`.
fn polish<F: Fn(&[f64]) -> f64>(f: &mut Counter<'_, F>, x: &mut [f64], fx: &mut f64) {
    for _ in 0..50 {
        let mut improved = false;
        for i in 0..x.len() {
            let mut h = 1e-2;
            while h >= 1e-10 {
                for sgn in [1.0, -1.0] {
                    let old = x[i];
                    x[i] = old + sgn * h;
                    let v = f.call(x);
                    if v > *fx {
                        *fx = v;
                        improved = true;
                    } else {
                        x[i] = old;
                    }
                }
                h *= 0.1;
            }
        }
        if !improved {
            break;
        }
    }
}

/// Maximizes `f` from `x0`. After each simplex run the search restarts from
/// the best point with half the previous step until a restart brings no gain.
pub fn maximize<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], s: &Settings) -> Maximum {
    let mut cnt = Counter { f, evals: 0 };
    if x0.is_empty() {
        let value = cnt.call(x0);
        return Maximum { x: Vec::new(), value, evaluations: 1, converged: true };
    }
    let mut step = s.initial_step;
    let (mut x, mut fx, mut converged) = nelder_mead(&mut cnt, x0, step, s, s.max_evals);
    for _ in 0..s.restarts {
        if cnt.evals >= s.max_evals {
            break;
        }
        step *= 0.5;
        let budget = s.max_evals - cnt.evals;
        let (x2, f2, c2) = nelder_mead(&mut cnt, &x, step, s, budget);
        let gain = f2 - fx;
        if f2 > fx {
            x = x2;
            fx = f2;
            converged = c2;
        }
        if gain <= s.ftol * fx.abs().max(1.0) {
            break;
        }
    }
    polish(&mut cnt, &mut x, &mut fx);
    Maximum { x, value: fx, evaluations: cnt.evals, converged }
}

/// Largest gain from `+-h` probes along each coordinate (0 at a local maximum).
pub fn ascent_gain<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], fx: f64, h: f64) -> f64 {
    let mut best = 0.0f64;
    let mut p = x.to_vec();
    for i in 0..x.len() {
        for sgn in [1.0, -1.0] {
            p[i] = x[i] + sgn * h;
            best = best.max(f(&p) - fx);
        }
        p[i] = x[i];
    }
    best
}
