//! Rational transfer functions with real coefficients, pole analysis and
//! time-domain step simulation via a controllable-canonical realization.

use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{poly_roots, Complex};
use crate::math;

use super::pid::PidGains;

/// Proper rational transfer function; coefficients are stored in
/// descending degree.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransferFunction {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TfError {
    #[error("denominator must have a nonzero leading coefficient")]
    ZeroDenominator,
    #[error("numerator degree {num} exceeds denominator degree {den}")]
    Improper { num: usize, den: usize },
    #[error("denominator has degree 0; there are no poles")]
    DegreeZero,
    #[error("closed loop cancels to a zero denominator")]
    DegenerateClosedLoop,
}

impl TransferFunction {
    /// Builds a transfer function, trimming exactly-zero leading
    /// coefficients and rejecting improper or empty fractions.
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self, TfError> {
        let num = trim_leading(num);
        let den = trim_leading(den);
        if den.is_empty() {
            return Err(TfError::ZeroDenominator);
        }
        if !num.is_empty() && num.len() > den.len() {
            return Err(TfError::Improper {
                num: num.len() - 1,
                den: den.len() - 1,
            });
        }
        let num = if num.is_empty() { vec![0.0] } else { num };
        Ok(Self { num, den })
    }

    /// Evaluates the transfer function at a complex frequency.
    pub fn eval(&self, s: Complex) -> Complex {
        crate::complex::poly_eval(&self.num, s) / crate::complex::poly_eval(&self.den, s)
    }

    /// DC gain G(0); formal for unstable plants.
    pub fn dc_gain(&self) -> f64 {
        self.num.last().copied().unwrap_or(0.0) / self.den.last().copied().unwrap()
    }
}

fn trim_leading(mut coeffs: Vec<f64>) -> Vec<f64> {
    match coeffs.iter().position(|&c| c != 0.0) {
        Some(0) => coeffs,
        Some(i) => coeffs.split_off(i),
        None => Vec::new(),
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().rev().enumerate() {
        out[n - 1 - i] += ai;
    }
    for (i, &bi) in b.iter().rev().enumerate() {
        out[n - 1 - i] += bi;
    }
    out
}

/// The identified second-order steering plant of the vehicle:
/// r(s)/delta(s) = (1.9103 s + 5.799) / (0.3037 s^2 + 0.7488 s - 1).
pub fn nomoto_paper() -> TransferFunction {
    TransferFunction {
        num: vec![1.9103, 5.799],
        den: vec![0.3037, 0.7488, -1.0],
    }
}

/// All poles (denominator roots). Degree-0 denominators are rejected.
pub fn poles(tf: &TransferFunction) -> Result<Vec<Complex>, TfError> {
    let den = trim_leading(tf.den.clone());
    if den.len() <= 1 {
        return Err(TfError::DegreeZero);
    }
    Ok(poly_roots(&den))
}

/// Strict Hurwitz check: every pole in the open left half plane.
/// Degree-0 denominators have no poles and count as stable.
pub fn is_stable(tf: &TransferFunction) -> bool {
    match poles(tf) {
        Ok(p) => p.iter().all(|z| z.re < 0.0),
        Err(_) => true,
    }
}

/// PID controller as a rational function:
/// C(s) = kp + ki/s + kd s/(tf_d s + 1), assembled exactly in
/// coefficients. With tf_d = 0 the derivative branch is unfiltered.
pub fn pid_controller_tf(g: &PidGains) -> TransferFunction {
    let tf_d = g.tf_derivative;
    // [kp*s*(tf_d s + 1) + ki*(tf_d s + 1) + kd*s^2] / [s*(tf_d s + 1)]
    let mut num = vec![g.kp * tf_d + g.kd, g.kp + g.ki * tf_d, g.ki];
    let mut den = vec![tf_d, 1.0, 0.0];
    // With ki = 0 both sides carry a literal factor of s; cancel it so a
    // pure P(D) controller does not grow a spurious origin pole/zero pair.
    while num.len() > 1
        && den.len() > 1
        && num.last() == Some(&0.0)
        && den.last() == Some(&0.0)
    {
        num.pop();
        den.pop();
    }
    let num = trim_leading(num);
    TransferFunction {
        num: if num.is_empty() { vec![0.0] } else { num },
        den: trim_leading(den),
    }
}

/// Series interconnection a(s) * b(s).
pub fn series(a: &TransferFunction, b: &TransferFunction) -> TransferFunction {
    TransferFunction {
        num: poly_mul(&a.num, &b.num),
        den: poly_mul(&a.den, &b.den),
    }
}

/// Unity-feedback closure of C(s)G(s): T = CG / (1 + CG). A loop whose
/// denominator cancels to the zero polynomial is rejected.
pub fn closed_loop(
    plant: &TransferFunction,
    gains: &PidGains,
) -> Result<TransferFunction, TfError> {
    let open = series(&pid_controller_tf(gains), plant);
    let den = trim_leading(poly_add(&open.den, &open.num));
    if den.is_empty() {
        return Err(TfError::DegenerateClosedLoop);
    }
    TransferFunction::new(open.num, den)
}

/// Poles of 1 + k L(s) = 0 for each sampled gain, ascending positive
/// gains. Returns (k, poles) pairs ready to be dumped to CSV.
pub fn root_locus(open_loop: &TransferFunction, gains: &[f64]) -> Vec<(f64, Vec<Complex>)> {
    debug_assert!(gains.windows(2).all(|w| w[0] <= w[1]));
    gains
        .iter()
        .map(|&k| {
            let scaled: Vec<f64> = open_loop.num.iter().map(|c| c * k).collect();
            let char_poly = trim_leading(poly_add(&open_loop.den, &scaled));
            (k, poly_roots(&char_poly))
        })
        .collect()
}

/// Summary metrics of a step response. Times are seconds; overshoot is a
/// percentage of the final value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSummary {
    /// 10% to 90% rise time.
    pub rise_time: Option<f64>,
    pub overshoot_pct: f64,
    pub settling_time_2pct: Option<f64>,
    /// Set when the plant has a pole outside the open left half plane or
    /// the simulated output diverged.
    pub unstable: bool,
}

/// Sampled unit-step response plus summary metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResponse {
    pub samples: Vec<(f64, f64)>,
    pub summary: StepSummary,
}

/// Simulates the unit-step response on a controllable-canonical
/// state-space realization integrated with fixed-step RK4. Unstable
/// plants are still simulated; the divergence stays visible in the
/// samples and is flagged in the summary.
pub fn step_response(tf: &TransferFunction, horizon: f64, dt: f64) -> StepResponse {
    assert!(dt > 0.0 && horizon > dt, "need horizon > dt > 0");

    let den = trim_leading(tf.den.clone());
    let lead = den[0];
    let a: Vec<f64> = den.iter().skip(1).map(|c| c / lead).collect();
    let n = a.len();
    // Pad the numerator to length n+1 and normalize by the leading
    // denominator coefficient.
    let mut b = vec![0.0; (n + 1).saturating_sub(tf.num.len())];
    b.extend(tf.num.iter().map(|c| c / lead));

    // y = C x + D u with D = b0, C_i = b_{n-i} - a_{n-i-1} * b0.
    let d_feed = b[0];
    let c_row: Vec<f64> = (0..n).map(|i| b[n - i] - a[n - 1 - i] * d_feed).collect();

    let deriv = |x: &[f64], out: &mut [f64]| {
        for i in 0..n.saturating_sub(1) {
            out[i] = x[i + 1];
        }
        if n > 0 {
            let mut acc = 1.0; // unit step input
            for i in 0..n {
                acc -= a[n - 1 - i] * x[i];
            }
            out[n - 1] = acc;
        }
    };

    let output = |x: &[f64]| -> f64 {
        let mut y = d_feed;
        for (ci, xi) in c_row.iter().zip(x) {
            y += ci * xi;
        }
        y
    };

    let steps = math::round(horizon / dt) as usize;
    let mut x = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut samples = Vec::with_capacity(steps + 1);
    let mut diverged = false;

    samples.push((0.0, output(&x)));
    for step in 0..steps {
        deriv(&x, &mut k1);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k1[i];
        }
        deriv(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * dt * k2[i];
        }
        deriv(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + dt * k3[i];
        }
        deriv(&tmp, &mut k4);
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = (step + 1) as f64 * dt;
        let y = output(&x);
        if !y.is_finite() {
            diverged = true;
            break;
        }
        samples.push((t, y));
    }

    let unstable = !is_stable(tf) || diverged;
    let summary = summarize(&samples, tf.dc_gain(), unstable);
    StepResponse { samples, summary }
}

fn summarize(samples: &[(f64, f64)], final_value: f64, unstable: bool) -> StepSummary {
    if unstable || samples.is_empty() || final_value == 0.0 {
        return StepSummary {
            rise_time: None,
            overshoot_pct: f64::NAN,
            settling_time_2pct: None,
            unstable,
        };
    }
    let mut t_10 = None;
    let mut t_90 = None;
    let mut peak = f64::NEG_INFINITY;
    let mut settle = Some(0.0);
    for &(t, y) in samples {
        let frac = y / final_value;
        if t_10.is_none() && frac >= 0.1 {
            t_10 = Some(t);
        }
        if t_90.is_none() && frac >= 0.9 {
            t_90 = Some(t);
        }
        peak = peak.max(frac);
        if math::fabs(frac - 1.0) > 0.02 {
            settle = None;
        } else if settle.is_none() {
            settle = Some(t);
        }
    }
    StepSummary {
        rise_time: match (t_10, t_90) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        },
        overshoot_pct: ((peak - 1.0) * 100.0).max(0.0),
        settling_time_2pct: settle,
        unstable,
    }
}
