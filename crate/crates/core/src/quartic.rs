//! Monic real quartics: characteristic polynomials of 4×4 matrices and
//! their complex roots.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `t⁴ + c3 t³ + c2 t² + c1 t + c0`, stored as `[1, c3, c2, c1, c0]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticPoly {
    coeffs: [f64; 5],
}

impl QuarticPoly {
    pub fn monic(c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        QuarticPoly {
            coeffs: [1.0, c3, c2, c1, c0],
        }
    }

    /// Expands `∏ (t − r_k)`. The result has real coefficients only when the
    /// roots are closed under conjugation; imaginary parts are dropped.
    pub fn from_roots(roots: &[Complex64; 4]) -> Self {
        let mut c = [Complex64::new(1.0, 0.0), Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default()];
        for (deg, r) in roots.iter().enumerate() {
            for k in (1..=deg + 1).rev() {
                c[k] -= r * c[k - 1];
            }
        }
        QuarticPoly::monic(c[1].re, c[2].re, c[3].re, c[4].re)
    }

    /// `[1, c3, c2, c1, c0]`
    pub fn coefficients(&self) -> [f64; 5] {
        self.coeffs
    }

    pub fn is_biquadratic(&self) -> bool {
        self.coeffs[1] == 0.0 && self.coeffs[3] == 0.0
    }

    /// Discriminant of `s² + c2 s + c0` when the quartic is biquadratic.
    pub fn reduced_discriminant(&self) -> Option<f64> {
        self.is_biquadratic()
            .then(|| self.coeffs[2] * self.coeffs[2] - 4.0 * self.coeffs[4])
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::default(), |acc, &c| acc * t + c)
    }

    fn eval_with_derivative(&self, t: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::default();
        let mut dp = Complex64::default();
        for &c in &self.coeffs {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    pub fn max_abs_coefficient_diff(&self, other: &QuarticPoly) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Characteristic polynomial `det(tI − A)` by the Faddeev-LeVerrier recursion.
/// Exact for matrices with small integer entries.
pub fn char_poly(a: &Matrix4<f64>) -> QuarticPoly {
    let n = 4;
    let mut coeffs = [0.0; 5];
    coeffs[0] = 1.0;
    let mut m = Matrix4::zeros();
    for k in 1..=n {
        m = a * m + Matrix4::identity() * coeffs[k - 1];
        coeffs[k] = -(a * m).trace() / k as f64;
    }
    QuarticPoly { coeffs }
}

/// All four complex roots.
///
/// Biquadratics go through `s = t²`; everything else through Aberth-Ehrlich
/// iteration followed by Newton polishing.
/// Non-real roots come out in conjugate pairs whose imaginary parts are
/// negatives of each other bit for bit.
pub fn quartic_roots(q: &QuarticPoly) -> [Complex64; 4] {
    if q.is_biquadratic() {
        biquadratic_roots(q.coeffs[2], q.coeffs[4])
    } else {
        general_roots(q)
    }
}

fn biquadratic_roots(b: f64, c: f64) -> [Complex64; 4] {
    let mut disc = b * b - 4.0 * c;
    // Below rounding level of its two terms the sign of the discriminant is noise.
    if disc.abs() <= 16.0 * f64::EPSILON * (b * b).max(4.0 * c.abs()) {
        disc = 0.0;
    }
    if disc >= 0.0 {
        let sq = disc.sqrt();
        // Cancellation-free pair of real roots of s² + bs + c.
        let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
        let (s1, s2) = if q == 0.0 { (0.0, 0.0) } else { (q, c / q) };
        let mut out = [Complex64::default(); 4];
        for (k, s) in [s1, s2].into_iter().enumerate() {
            if s >= 0.0 {
                out[2 * k] = Complex64::new(s.sqrt(), 0.0);
                out[2 * k + 1] = Complex64::new(-s.sqrt(), 0.0);
            } else {
                let r = Complex64::new(0.0, (-s).sqrt());
                out[2 * k] = r;
                out[2 * k + 1] = r.conj();
            }
        }
        out
    } else {
        let s = Complex64::new(-0.5 * b, 0.5 * (-disc).sqrt());
        let r = s.sqrt();
        [r, r.conj(), -r, -r.conj()]
    }
}

/// Aberth-Ehrlich simultaneous iteration followed by conjugate pairing.
fn general_roots(q: &QuarticPoly) -> [Complex64; 4] {
    let [_, c3, c2, c1, c0] = q.coeffs;
    // Cauchy bound on root moduli.
    let radius = 1.0 + [c3, c2, c1, c0].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: [Complex64; 4] =
        std::array::from_fn(|k| Complex64::from_polar(0.5 * radius, 0.4 + k as f64 * std::f64::consts::FRAC_PI_2));
    for _ in 0..500 {
        let mut biggest = 0.0f64;
        for k in 0..4 {
            let (p, dp) = q.eval_with_derivative(z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..4).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                biggest = biggest.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if biggest < 1e-16 {
            break;
        }
    }
    pair_conjugates(q, z)
}

/// Snaps near-real roots to the real axis and rebuilds the rest as exact
/// conjugate pairs. Real coefficients force an even number of non-real roots.
fn pair_conjugates(q: &QuarticPoly, mut z: [Complex64; 4]) -> [Complex64; 4] {
    z.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let near_real = z.iter().filter(|r| r.im.abs() <= 1e-7 * (1.0 + r.norm())).count();
    let n_real = if near_real % 2 == 1 { near_real + 1 } else { near_real };
    let mut out = Vec::with_capacity(4);
    for r in &z[..n_real] {
        out.push(Complex64::new(polish_real(q, r.re), 0.0));
    }
    let mut rest: Vec<Complex64> = z[n_real..].to_vec();
    rest.sort_by(|a, b| b.im.total_cmp(&a.im));
    for r in &rest[..rest.len() / 2] {
        let p = polish(q, Complex64::new(r.re, r.im.abs()));
        out.push(p);
        out.push(p.conj());
    }
    [out[0], out[1], out[2], out[3]]
}

fn polish_real(q: &QuarticPoly, t: f64) -> f64 {
    polish(q, Complex64::new(t, 0.0)).re
}

/// A few Newton iterations, keeping an iterate only when it lowers |q(t)|.
fn polish(q: &QuarticPoly, mut t: Complex64) -> Complex64 {
    let mut best = q.eval(t).norm();
    for _ in 0..8 {
        let (p, dp) = q.eval_with_derivative(t);
        if dp.norm() == 0.0 || best == 0.0 {
            break;
        }
        let next = t - p / dp;
        let val = q.eval(next).norm();
        if !(val < best) {
            break;
        }
        t = next;
        best = val;
    }
    t
}
