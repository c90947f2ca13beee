//! Minimal complex arithmetic and polynomial root finding for the
//! transfer-function and free-decay analyses.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn norm(self) -> f64 {
        math::hypot(self.re, self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            return Self::real(0.0);
        }
        let re = math::sqrt((r + self.re) / 2.0);
        let im = math::sqrt((r - self.re) / 2.0);
        Self::new(re, if self.im < 0.0 { -im } else { im })
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, o: Complex) -> Complex {
        // Smith's algorithm avoids overflow for badly scaled denominators.
        if math::fabs(o.re) >= math::fabs(o.im) {
            let r = o.im / o.re;
            let d = o.re + o.im * r;
            Complex::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = o.re / o.im;
            let d = o.re * r + o.im;
            Complex::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

/// Evaluates a polynomial with real coefficients (descending degree) at `z`.
pub fn poly_eval(coeffs: &[f64], z: Complex) -> Complex {
    let mut acc = Complex::real(0.0);
    for &c in coeffs {
        acc = acc * z + Complex::real(c);
    }
    acc
}

/// All complex roots of a real polynomial given by descending-degree
/// coefficients. Degrees 0 and below yield no roots; degrees 1 and 2 use
/// closed forms, higher degrees use Durand-Kerner iteration with
/// deterministic starting points.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex> {
    // Strip exactly-zero leading coefficients.
    let first = coeffs.iter().position(|&c| c != 0.0);
    let coeffs = match first {
        Some(i) => &coeffs[i..],
        None => return Vec::new(),
    };
    let degree = coeffs.len() - 1;
    match degree {
        0 => Vec::new(),
        1 => vec![Complex::real(-coeffs[1] / coeffs[0])],
        2 => quadratic_roots(coeffs[0], coeffs[1], coeffs[2]),
        _ => durand_kerner(coeffs),
    }
}

/// Roots of a*s^2 + b*s + c = 0 by the quadratic formula, complex pair
/// when the discriminant is negative.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<Complex> {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let sq = math::sqrt(disc);
        // Pair the subtraction with the same-signed term to avoid cancellation.
        let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
        let r1 = q / a;
        let r2 = if q != 0.0 { c / q } else { -b / (2.0 * a) - r1 };
        vec![Complex::real(r1), Complex::real(r2)]
    } else {
        let re = -b / (2.0 * a);
        let im = math::sqrt(-disc) / (2.0 * a);
        vec![Complex::new(re, im), Complex::new(re, -im)]
    }
}

fn durand_kerner(coeffs: &[f64]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();

    // Cauchy bound on root magnitude gives the start radius.
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, &c| m.max(math::fabs(c)));
    let seed = Complex::new(0.4, 0.9);
    let mut roots: Vec<Complex> = Vec::with_capacity(n);
    let mut w = Complex::real(radius);
    for _ in 0..n {
        w = w * seed;
        roots.push(w);
    }

    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let numer = poly_eval(&monic, roots[i]);
            let mut denom = Complex::real(1.0);
            for j in 0..n {
                if j != i {
                    denom = denom * (roots[i] - roots[j]);
                }
            }
            if denom.norm() == 0.0 {
                // Collided estimates: nudge deterministically.
                roots[i] = roots[i] + Complex::new(1e-8, 1e-8);
                continue;
            }
            let step = numer / denom;
            roots[i] = roots[i] - step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * (1.0 + radius) {
            break;
        }
    }

    // Snap near-real roots onto the axis so conjugate pairs print cleanly.
    for r in &mut roots {
        if math::fabs(r.im) < 1e-9 * (1.0 + math::fabs(r.re)) {
            r.im = 0.0;
        }
    }
    roots
}
