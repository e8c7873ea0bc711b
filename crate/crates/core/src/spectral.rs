//! Trigonometric tools for periodic samples on a uniform grid over `[0, 2pi)`.

use rustfft::FftPlanner;

use crate::linalg::C64;

fn fft(values: &[C64], inverse: bool) -> Vec<C64> {
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(&mut buf);
    buf
}

/// Signed frequency of FFT bin `k` for length `m`; the Nyquist bin maps to `None`.
fn freq(k: usize, m: usize) -> Option<f64> {
    if m % 2 == 0 && k == m / 2 {
        None
    } else if k <= m / 2 {
        Some(k as f64)
    } else {
        Some(k as f64 - m as f64)
    }
}

/// Derivative with respect to the angle of the trigonometric interpolant.
pub fn derivative(values: &[C64]) -> Vec<C64> {
    let m = values.len();
    if m == 0 {
        return Vec::new();
    }
    let mut hat = fft(values, false);
    for (k, h) in hat.iter_mut().enumerate() {
        *h = match freq(k, m) {
            Some(f) => *h * C64::new(0.0, f) / m as f64,
            None => C64::from(0.0),
        };
    }
    fft(&hat, true)
}

/// Trigonometric interpolant sampled on a grid `factor` times finer.
pub fn upsample(values: &[C64], factor: usize) -> Vec<C64> {
    let m = values.len();
    let big = m * factor;
    let hat = fft(values, false);
    let mut out = vec![C64::from(0.0); big];
    for (k, h) in hat.iter().enumerate() {
        match freq(k, m) {
            Some(f) => {
                let idx = if f >= 0.0 { f as usize } else { (big as f64 + f) as usize };
                out[idx] = *h / m as f64;
            }
            None => {
                // split the Nyquist mode symmetrically
                out[m / 2] += *h / (2.0 * m as f64);
                out[big - m / 2] += *h / (2.0 * m as f64);
            }
        }
    }
    fft(&out, true)
}

/// Trigonometric interpolant of real periodic samples, with its antiderivative.
#[derive(Debug, Clone)]
pub struct TrigSeries {
    mean: f64,
    /// `(k, c_k)` for `k = 1 .. m/2 - 1`; the negative frequencies are conjugates.
    modes: Vec<(f64, C64)>,
}

impl TrigSeries {
    pub fn from_samples(values: &[f64]) -> Self {
        let m = values.len();
        let hat = fft(&values.iter().map(|&v| C64::from(v)).collect::<Vec<_>>(), false);
        let modes = (1..m.div_ceil(2)).filter(|&k| 2 * k != m).map(|k| (k as f64, hat[k] / m as f64)).collect();
        TrigSeries { mean: hat[0].re / m as f64, modes }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let e = C64::from_polar(1.0, theta);
        let mut p = C64::from(1.0);
        let mut s = 0.0;
        for (_, c) in &self.modes {
            p *= e;
            s += 2.0 * (c * p).re;
        }
        self.mean + s
    }

    /// `int_0^theta` of the interpolant.
    pub fn integral(&self, theta: f64) -> f64 {
        let e = C64::from_polar(1.0, theta);
        let mut p = C64::from(1.0);
        let mut s = 0.0;
        for (k, c) in &self.modes {
            p *= e;
            s += 2.0 * (c * (p - 1.0) / C64::new(0.0, *k)).re;
        }
        self.mean * theta + s
    }
}

/// Uniform angles `2 pi k / m`.
pub fn angles(m: usize) -> Vec<f64> {
    (0..m).map(|k| std::f64::consts::TAU * k as f64 / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_trig_polynomial() {
        let m = 64;
        let f = |t: f64| C64::new((3.0 * t).cos(), 0.0) + C64::from_polar(0.5, -2.0 * t);
        let df = |t: f64| C64::new(-3.0 * (3.0 * t).sin(), 0.0) + C64::from_polar(0.5, -2.0 * t) * C64::new(0.0, -2.0);
        let th = angles(m);
        let vals: Vec<C64> = th.iter().map(|&t| f(t)).collect();
        for (d, &t) in derivative(&vals).iter().zip(&th) {
            assert!((d - df(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn upsample_reproduces_band_limited_signal() {
        let m = 32;
        let f = |t: f64| C64::from_polar(1.0, 5.0 * t) + C64::new(t.sin(), 2.0 * (7.0 * t).cos());
        let vals: Vec<C64> = angles(m).iter().map(|&t| f(t)).collect();
        let up = upsample(&vals, 4);
        for (u, &t) in up.iter().zip(&angles(4 * m)) {
            assert!((u - f(t)).norm() < 1e-12);
        }
    }

    #[test]
    fn trig_series_integrates_exactly() {
        let m = 32;
        let f = |t: f64| 1.5 + (3.0 * t).cos() - 0.25 * (5.0 * t).sin();
        let antider = |t: f64| 1.5 * t + (3.0 * t).sin() / 3.0 + 0.25 * ((5.0 * t).cos() - 1.0) / 5.0;
        let vals: Vec<f64> = angles(m).iter().map(|&t| f(t)).collect();
        let ts = TrigSeries::from_samples(&vals);
        assert!((ts.mean() - 1.5).abs() < 1e-15);
        for t in [0.1, 1.3, 4.0, 6.2] {
            assert!((ts.eval(t) - f(t)).abs() < 1e-13);
            assert!((ts.integral(t) - antider(t)).abs() < 1e-13);
        }
    }
}
