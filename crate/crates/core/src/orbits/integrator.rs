//! Dormand-Prince 5(4) with an embedded error estimate and step-size control.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rtol: 1e-8, atol: 1e-10 }
    }
}

impl Tolerance {
    pub fn new(rtol: f64, atol: f64) -> Result<Self> {
        if !(rtol > 0.0 && atol > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerances must be positive (rtol = {rtol}, atol = {atol})")));
        }
        Ok(Tolerance { rtol, atol })
    }

    pub fn tightened(self, factor: f64) -> Self {
        Tolerance { rtol: self.rtol / factor, atol: self.atol / factor }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub const MAX_STEPS: usize = 2_000_000;

/// Integrates `u' = f(t, u)` from `t0`, stopping exactly at each of the
/// increasing `outputs` and returning the state there. When `record` is set,
/// every accepted step is also returned as `(t, u)`.
pub fn solve<F>(
    mut f: F,
    t0: f64,
    u0: &[f64],
    outputs: &[f64],
    tol: Tolerance,
    record: bool,
) -> Result<(Vec<Vec<f64>>, Vec<(f64, Vec<f64>)>)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let dim = u0.len();
    let mut u = u0.to_vec();
    let mut t = t0;
    let mut out = Vec::with_capacity(outputs.len());
    let mut steps = Vec::new();
    if record {
        steps.push((t, u.clone()));
    }
    let Some(&t_end) = outputs.last() else {
        return Ok((out, steps));
    };
    if outputs.windows(2).any(|w| w[1] < w[0]) || outputs[0] < t0 {
        return Err(Error::InvalidParameter("output times must be increasing and not before t0".into()));
    }

    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut k5 = vec![0.0; dim];
    let mut k6 = vec![0.0; dim];
    let mut k7 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    let mut unew = vec![0.0; dim];

    f(t, &u, &mut k1);
    let mut h = initial_step(&mut f, t, &u, &k1, tol, t_end - t0);
    let mut next = 0;
    while next < outputs.len() && outputs[next] <= t {
        out.push(u.clone());
        next += 1;
    }

    let mut count = 0;
    while next < outputs.len() {
        count += 1;
        if count > MAX_STEPS {
            return Err(Error::TooManySteps { max_steps: MAX_STEPS, t_end });
        }
        let target = outputs[next];
        let h_free = h;
        let mut hit = false;
        if t + h >= target || (target - t - h) < 1e-12 * target.abs().max(1.0) {
            h = target - t;
            hit = true;
        }
        if h.abs() < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        for i in 0..dim {
            tmp[i] = u[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = u[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = u[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &tmp, &mut k4);
        for i in 0..dim {
            tmp[i] = u[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &tmp, &mut k5);
        for i in 0..dim {
            tmp[i] = u[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &tmp, &mut k6);
        for i in 0..dim {
            unew[i] = u[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + h, &unew, &mut k7);

        let mut err = 0.0;
        for i in 0..dim {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.atol + tol.rtol * u[i].abs().max(unew[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / dim as f64).sqrt();
        if !err.is_finite() {
            h *= 0.2;
            continue;
        }

        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t = if hit { target } else { t + h };
            std::mem::swap(&mut u, &mut unew);
            std::mem::swap(&mut k1, &mut k7);
            if record {
                steps.push((t, u.clone()));
            }
            while next < outputs.len() && outputs[next] <= t {
                out.push(u.clone());
                next += 1;
            }
            h = if hit { h_free.max(h * fac) } else { h * fac };
        } else {
            h *= fac.min(1.0);
        }
    }
    Ok((out, steps))
}

/// Starting step from the local derivative scales.
fn initial_step<F>(f: &mut F, t: f64, u: &[f64], k1: &[f64], tol: Tolerance, span: f64) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let dim = u.len() as f64;
    let sc = |i: usize| tol.atol + tol.rtol * u[i].abs();
    let d0 = (u.iter().enumerate().map(|(i, v)| (v / sc(i)).powi(2)).sum::<f64>() / dim).sqrt();
    let d1 = (k1.iter().enumerate().map(|(i, v)| (v / sc(i)).powi(2)).sum::<f64>() / dim).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span.abs().max(1e-12));
    let u1: Vec<f64> = u.iter().zip(k1).map(|(a, b)| a + h0 * b).collect();
    let mut k2 = vec![0.0; u.len()];
    f(t + h0, &u1, &mut k2);
    let d2 = (k2
        .iter()
        .zip(k1)
        .enumerate()
        .map(|(i, (a, b))| ((a - b) / sc(i)).powi(2))
        .sum::<f64>()
        / dim)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span.abs().max(1e-12))
}
