//! Adaptive Dormand–Prince 5(4) integration with dense output.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("solution exceeded the blowup guard at t = {t:.6} (|y| = {norm:.3e})")]
    BlowupDetected { t: f64, norm: f64 },
    #[error("step count exceeded {0} before reaching the end of the interval")]
    TooManySteps(usize),
    #[error("step size underflow at t = {0:.6}")]
    StepUnderflow(f64),
}

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Abort when any |y_i| exceeds this bound.
    pub blowup: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-12, atol: 1e-14, h_init: 1e-3, h_max: 0.5, max_steps: 2_000_000, blowup: f64::INFINITY }
    }
}

/// Accepted steps of one trajectory, with derivatives for Hermite interpolation.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub ts: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub dys: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn end(&self) -> (f64, &[f64]) {
        (*self.ts.last().unwrap(), self.ys.last().unwrap())
    }

    /// Cubic Hermite interpolation on the accepted mesh.
    pub fn at(&self, t: f64) -> Vec<f64> {
        let n = self.ts.len();
        assert!(n >= 1);
        if n == 1 {
            return self.ys[0].clone();
        }
        let forward = self.ts[n - 1] >= self.ts[0];
        let mut i = 0;
        while i + 2 < n {
            let next = self.ts[i + 1];
            let passed = if forward { next >= t } else { next <= t };
            if passed {
                break;
            }
            i += 1;
        }
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let h = t1 - t0;
        let s = ((t - t0) / h).clamp(0.0, 1.0);
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        (0..self.ys[0].len())
            .map(|k| {
                h00 * self.ys[i][k]
                    + h10 * h * self.dys[i][k]
                    + h01 * self.ys[i + 1][k]
                    + h11 * h * self.dys[i + 1][k]
            })
            .collect()
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate dy/dt = f(t, y) from t0 to t1 (either direction).
pub fn integrate(
    f: &dyn Fn(f64, &[f64], &mut [f64]),
    t0: f64,
    t1: f64,
    y0: &[f64],
    opts: &OdeOptions,
) -> Result<Trajectory, OdeError> {
    let dim = y0.len();
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut dy = vec![0.0; dim];
    f(t, &y, &mut dy);
    let mut traj = Trajectory { ts: vec![t], ys: vec![y.clone()], dys: vec![dy.clone()] };
    if t0 == t1 {
        return Ok(traj);
    }
    let mut h = dir * opts.h_init.min(opts.h_max).min((t1 - t0).abs());
    let mut k = vec![vec![0.0; dim]; 7];
    k[0] = dy.clone();
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(OdeError::TooManySteps(opts.max_steps));
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s - 1][j];
                if a != 0.0 {
                    for i in 0..dim {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            let (_, tail) = k.split_at_mut(s);
            f(t + h * C[s - 1], &ys, &mut tail[0]);
        }
        let mut y5 = y.clone();
        let mut y4 = y.clone();
        let mut err: f64 = 0.0;
        for i in 0..dim {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += h * d5;
            y4[i] += h * d4;
            let sc = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            let e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        let err = (err / dim as f64).sqrt();
        if err <= 1.0 {
            t += h;
            y = y5;
            f(t, &y, &mut dy);
            k[0] = dy.clone();
            traj.ts.push(t);
            traj.ys.push(y.clone());
            traj.dys.push(dy.clone());
            let norm = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if norm > opts.blowup {
                return Err(OdeError::BlowupDetected { t, norm });
            }
        }
        let fac = (0.9 * (1.0 / err.max(1e-30)).powf(0.2)).clamp(0.2, 5.0);
        h *= fac;
        if h.abs() > opts.h_max {
            h = dir * opts.h_max;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(OdeError::StepUnderflow(t));
        }
    }
    Ok(traj)
}
