//! Phase space, vector field and Hamilton-Poisson structure of the
//! five-component Maxwell-Bloch system
//!
//! ```text
//! x1' = y1,  y1' = x1 z,  x2' = y2,  y2' = x2 z,  z' = -(x1 y1 + x2 y2)
//! ```
//!
//! All vectors and matrices use the component order `(x1, y1, x2, y2, z)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the five-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State5 {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub z: f64,
}

impl State5 {
    pub const ORIGIN: State5 = State5::new(0.0, 0.0, 0.0, 0.0, 0.0);

    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64, z: f64) -> Self {
        State5 { x1, y1, x2, y2, z }
    }

    pub const fn from_array(a: [f64; 5]) -> Self {
        State5::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub const fn to_array(self) -> [f64; 5] {
        [self.x1, self.y1, self.x2, self.y2, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    pub(crate) fn check_finite(&self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.to_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn distance(&self, other: &State5) -> f64 {
        (*self - *other).norm()
    }

    pub fn distance_inf(&self, other: &State5) -> f64 {
        (*self - *other).norm_inf()
    }
}

impl std::ops::Sub for State5 {
    type Output = State5;

    fn sub(self, rhs: State5) -> State5 {
        let (a, b) = (self.to_array(), rhs.to_array());
        State5::from_array(std::array::from_fn(|i| a[i] - b[i]))
    }
}

impl std::ops::Add for State5 {
    type Output = State5;

    fn add(self, rhs: State5) -> State5 {
        let (a, b) = (self.to_array(), rhs.to_array());
        State5::from_array(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl std::ops::Mul<State5> for f64 {
    type Output = State5;

    fn mul(self, rhs: State5) -> State5 {
        State5::from_array(rhs.to_array().map(|v| self * v))
    }
}

/// Field `X`, polarizability `Y` and occupation difference `Z` of the
/// rotating-wave form of the equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexState {
    pub x: Complex64,
    pub y: Complex64,
    pub z: f64,
}

impl ComplexState {
    pub fn new(x: Complex64, y: Complex64, z: f64) -> Self {
        ComplexState { x, y, z }
    }

    pub fn to_real(&self) -> State5 {
        State5::new(self.x.re, self.y.re, self.x.im, self.y.im, self.z)
    }

    pub fn from_real(p: &State5) -> Self {
        ComplexState {
            x: Complex64::new(p.x1, p.x2),
            y: Complex64::new(p.y1, p.y2),
            z: p.z,
        }
    }
}

pub fn to_real(q: &ComplexState) -> State5 {
    q.to_real()
}

pub fn to_complex(p: &State5) -> ComplexState {
    ComplexState::from_real(p)
}

/// The complex-form right-hand side `X' = Y`, `Y' = XZ`, `Z' = -(XY* + X*Y)/2`.
pub fn complex_vector_field(q: &ComplexState) -> ComplexState {
    let dz = -0.5 * (q.x * q.y.conj() + q.x.conj() * q.y).re;
    ComplexState::new(q.y, q.x * q.z, dz)
}

/// Values of the Hamiltonian `H`, the bi-Hamiltonian invariant `I` and the
/// Casimir `C` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservedTriple {
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl ConservedTriple {
    pub fn max_abs_diff(&self, other: &ConservedTriple) -> f64 {
        (self.h - other.h)
            .abs()
            .max((self.i - other.i).abs())
            .max((self.c - other.c).abs())
    }
}

/// Right-hand side on raw arrays, no finiteness check. Hot path for the integrators.
#[inline]
pub fn field(p: &[f64; 5]) -> [f64; 5] {
    let [x1, y1, x2, y2, z] = *p;
    [y1, x1 * z, y2, x2 * z, -(x1 * y1 + x2 * y2)]
}

pub fn vector_field(p: &State5) -> Result<State5> {
    p.check_finite("vector_field")?;
    Ok(State5::from_array(field(&p.to_array())))
}

pub fn hamiltonian(p: &State5) -> f64 {
    0.5 * (p.y1 * p.y1 + p.y2 * p.y2 + p.z * p.z)
}

pub fn invariant_i(p: &State5) -> f64 {
    p.x2 * p.y1 - p.x1 * p.y2
}

pub fn casimir(p: &State5) -> f64 {
    0.5 * (p.x1 * p.x1 + p.x2 * p.x2) + p.z
}

pub fn conserved(p: &State5) -> ConservedTriple {
    ConservedTriple {
        h: hamiltonian(p),
        i: invariant_i(p),
        c: casimir(p),
    }
}

pub fn grad_h(p: &State5) -> [f64; 5] {
    [0.0, p.y1, 0.0, p.y2, p.z]
}

pub fn grad_i(p: &State5) -> [f64; 5] {
    [-p.y2, p.x2, p.y1, -p.x1, 0.0]
}

pub fn grad_c(p: &State5) -> [f64; 5] {
    [p.x1, 0.0, p.x2, 0.0, 1.0]
}

/// The Poisson tensor `J(p)`. Only `x1` and `x2` enter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonMatrix {
    entries: [[f64; 5]; 5],
}

impl PoissonMatrix {
    pub fn at(p: &State5) -> Self {
        let mut entries = [[0.0; 5]; 5];
        // Upper triangle, mirrored with a sign flip.
        let upper = [(0, 1, 1.0), (1, 4, p.x1), (2, 3, 1.0), (3, 4, p.x2)];
        for (i, j, v) in upper {
            entries[i][j] = v;
            entries[j][i] = -v;
        }
        PoissonMatrix { entries }
    }

    pub fn entries(&self) -> &[[f64; 5]; 5] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn apply(&self, v: &[f64; 5]) -> [f64; 5] {
        std::array::from_fn(|i| dot(&self.entries[i], v))
    }

    /// `uᵀ J v`
    /// `uᵀ J v`, summed over pairs `i < j` so that `u = v` gives exactly 0.
    pub fn bilinear(&self, u: &[f64; 5], v: &[f64; 5]) -> f64 {
        let mut s = 0.0;
        for i in 0..5 {
            for j in (i + 1)..5 {
                s += self.entries[i][j] * (u[i] * v[j] - u[j] * v[i]);
            }
        }
        s
    }
}

pub fn poisson_tensor(p: &State5) -> Result<PoissonMatrix> {
    p.check_finite("poisson_tensor")?;
    Ok(PoissonMatrix::at(p))
}

/// `{F, G}(p) = ∇F(p)ᵀ J(p) ∇G(p)` for gradient fields supplied as closures.
pub fn poisson_bracket<F, G>(grad_f: F, grad_g: G, p: &State5) -> Result<f64>
where
    F: Fn(&State5) -> [f64; 5],
    G: Fn(&State5) -> [f64; 5],
{
    p.check_finite("poisson_bracket")?;
    let df = grad_f(p);
    let dg = grad_g(p);
    if !df.iter().chain(dg.iter()).all(|v| v.is_finite()) {
        return Err(Error::NonFinite("poisson_bracket gradient"));
    }
    Ok(PoissonMatrix::at(p).bilinear(&df, &dg))
}

pub(crate) fn dot(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `F(p) = ½ pᵀ A p + bᵀ p` with symmetric `A`.
///
/// `H`, `I` and `C` are all of this form, which makes second derivatives of
/// brackets available in closed form for the Jacobi identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub hessian: [[f64; 5]; 5],
    pub linear: [f64; 5],
}

impl QuadraticForm {
    /// Symmetrizes `a` on construction.
    pub fn new(a: [[f64; 5]; 5], linear: [f64; 5]) -> Self {
        let hessian = std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (a[i][j] + a[j][i])));
        QuadraticForm { hessian, linear }
    }

    pub fn hamiltonian() -> Self {
        let mut a = [[0.0; 5]; 5];
        a[1][1] = 1.0;
        a[3][3] = 1.0;
        a[4][4] = 1.0;
        QuadraticForm::new(a, [0.0; 5])
    }

    pub fn invariant_i() -> Self {
        let mut a = [[0.0; 5]; 5];
        a[1][2] = 1.0;
        a[2][1] = 1.0;
        a[0][3] = -1.0;
        a[3][0] = -1.0;
        QuadraticForm::new(a, [0.0; 5])
    }

    pub fn casimir() -> Self {
        let mut a = [[0.0; 5]; 5];
        a[0][0] = 1.0;
        a[2][2] = 1.0;
        QuadraticForm::new(a, [0.0, 0.0, 0.0, 0.0, 1.0])
    }

    pub fn value(&self, p: &State5) -> f64 {
        let v = p.to_array();
        let av: [f64; 5] = std::array::from_fn(|i| dot(&self.hessian[i], &v));
        0.5 * dot(&v, &av) + dot(&self.linear, &v)
    }

    pub fn gradient(&self, p: &State5) -> [f64; 5] {
        let v = p.to_array();
        std::array::from_fn(|i| dot(&self.hessian[i], &v) + self.linear[i])
    }
}

/// Gradient of the cubic function `{G, K}` at `p`.
///
/// `∇{G,K} = A_G J ∇K − A_K J ∇G + (∇Gᵀ ∂_m J ∇K)_m`, where only `∂J/∂x1` and
/// `∂J/∂x2` are nonzero.
pub fn bracket_gradient(g: &QuadraticForm, k: &QuadraticForm, p: &State5) -> [f64; 5] {
    let j = PoissonMatrix::at(p);
    let dg = g.gradient(p);
    let dk = k.gradient(p);
    let j_dk = j.apply(&dk);
    let j_dg = j.apply(&dg);
    let mut out: [f64; 5] =
        std::array::from_fn(|m| dot(&g.hessian[m], &j_dk) - dot(&k.hessian[m], &j_dg));
    // dJ/dx1 has +1 at (1,4), -1 at (4,1); dJ/dx2 has +1 at (3,4), -1 at (4,3).
    out[0] += dg[1] * dk[4] - dg[4] * dk[1];
    out[2] += dg[3] * dk[4] - dg[4] * dk[3];
    out
}

/// Cyclic sum `{F,{G,K}} + {G,{K,F}} + {K,{F,G}}` together with the sum of
/// the absolute values of its three terms (the natural rounding scale).
pub fn jacobi_cyclic_sum(
    f: &QuadraticForm,
    g: &QuadraticForm,
    k: &QuadraticForm,
    p: &State5,
) -> (f64, f64) {
    let j = PoissonMatrix::at(p);
    let term = |a: &QuadraticForm, b: &QuadraticForm, c: &QuadraticForm| {
        j.bilinear(&a.gradient(p), &bracket_gradient(b, c, p))
    };
    let terms = [term(f, g, k), term(g, k, f), term(k, f, g)];
    (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
}
