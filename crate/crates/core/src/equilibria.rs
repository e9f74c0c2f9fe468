//! Equilibrium families, their split on a symplectic leaf `O_c = C⁻¹(c)`, and
//! classification of the isolated equilibria `(0,0,0,0,c)` by the
//! eigenvalue pattern of a pencil `D X_H + α D X_I` of leaf linearizations.
//!
//! The leaf is charted by the Casimir graph `z = c − ½(x1² + x2²)` with
//! coordinates `(x1, y1, x2, y2)`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quartic::{char_poly, quartic_roots, QuarticPoly};
use crate::system::{casimir, dot, grad_c, grad_i, hamiltonian, invariant_i, vector_field, State5};

/// Tolerance for "this point lies on the leaf / is the leaf equilibrium".
const LEAF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum EquilibriumFamily {
    /// `(0, 0, 0, 0, M)`, `M ≠ 0`
    E1 { m: f64 },
    /// `(M, 0, N, 0, 0)`, `M² + N² ≠ 0`
    E2 { m: f64, n: f64 },
    /// The origin.
    E3,
}

impl EquilibriumFamily {
    pub fn e1(m: f64) -> Result<Self> {
        if !m.is_finite() || m == 0.0 {
            return Err(Error::domain("E1 requires a finite nonzero M"));
        }
        Ok(EquilibriumFamily::E1 { m })
    }

    pub fn e2(m: f64, n: f64) -> Result<Self> {
        if !(m.is_finite() && n.is_finite()) || m * m + n * n == 0.0 {
            return Err(Error::domain("E2 requires finite M, N with M² + N² ≠ 0"));
        }
        Ok(EquilibriumFamily::E2 { m, n })
    }

    pub fn embed(&self) -> State5 {
        match *self {
            EquilibriumFamily::E1 { m } => State5::new(0.0, 0.0, 0.0, 0.0, m),
            EquilibriumFamily::E2 { m, n } => State5::new(m, 0.0, n, 0.0, 0.0),
            EquilibriumFamily::E3 => State5::ORIGIN,
        }
    }

    /// Identifies the family of an exact equilibrium point, if any.
    pub fn of_point(p: &State5) -> Option<Self> {
        if p.y1 != 0.0 || p.y2 != 0.0 {
            return None;
        }
        match (p.x1 == 0.0 && p.x2 == 0.0, p.z == 0.0) {
            (true, true) => Some(EquilibriumFamily::E3),
            (true, false) => Some(EquilibriumFamily::E1 { m: p.z }),
            (false, true) => Some(EquilibriumFamily::E2 { m: p.x1, n: p.x2 }),
            (false, false) => None,
        }
    }

    /// Value of the Casimir, i.e. the leaf the member sits on.
    pub fn leaf(&self) -> f64 {
        casimir(&self.embed())
    }
}

/// True iff `‖X(p)‖∞ ≤ tol`. Non-finite points are never equilibria.
pub fn is_equilibrium(p: &State5, tol: f64) -> bool {
    vector_field(p).map(|v| v.norm_inf() <= tol).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeafEquilibriumType {
    /// Both `d(H|O_c)` and `d(I|O_c)` vanish.
    K0,
    /// `d(I|O_c) ≠ 0`.
    K1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSplit {
    pub kind: LeafEquilibriumType,
    /// Norm of the component of `∇I` tangent to the leaf.
    pub tangent_di_norm: f64,
    /// `dI(e)·v` for the tangent vector `v = (−N, N, M, −M, 0)`; `E2` only.
    pub witness: Option<f64>,
}

/// Splits an equilibrium on the leaf `O_c` into `K0` or `K1` by projecting
/// `∇I` onto the tangent space `∇C⊥`.
pub fn k_split(e: &EquilibriumFamily, c: f64) -> Result<KSplit> {
    let p = e.embed();
    if (casimir(&p) - c).abs() > LEAF_TOL * (1.0 + c.abs()) {
        return Err(Error::domain(format!(
            "equilibrium has Casimir {} but the leaf is c = {c}",
            casimir(&p)
        )));
    }
    let di = grad_i(&p);
    let dc = grad_c(&p);
    let along = dot(&di, &dc) / dot(&dc, &dc);
    let tangent: [f64; 5] = std::array::from_fn(|k| di[k] - along * dc[k]);
    let tangent_di_norm = dot(&tangent, &tangent).sqrt();

    let witness = match *e {
        EquilibriumFamily::E2 { m, n } => {
            let v = [-n, n, m, -m, 0.0];
            debug_assert_eq!(dot(&dc, &v), 0.0);
            Some(dot(&di, &v))
        }
        _ => None,
    };
    let kind = if tangent_di_norm > LEAF_TOL {
        LeafEquilibriumType::K1
    } else {
        LeafEquilibriumType::K0
    };
    Ok(KSplit {
        kind,
        tangent_di_norm,
        witness,
    })
}

/// Hamiltonian field restricted to the leaf, in chart coordinates `u = (x1, y1, x2, y2)`.
pub fn chart_field_h(c: f64, u: &[f64; 4]) -> [f64; 4] {
    let [x1, y1, x2, y2] = *u;
    let z = c - 0.5 * (x1 * x1 + x2 * x2);
    [y1, x1 * z, y2, x2 * z]
}

/// Field of `I` restricted to the leaf. `J∇I = (x2, y2, −x1, −y1, 0)` does not
/// depend on `z`, so the chart form is linear.
pub fn chart_field_i(u: &[f64; 4]) -> [f64; 4] {
    let [x1, y1, x2, y2] = *u;
    [x2, y2, -x1, -y1]
}

pub fn chart_jacobian_h(c: f64, u: &[f64; 4]) -> Matrix4<f64> {
    let [x1, _, x2, _] = *u;
    let z = c - 0.5 * (x1 * x1 + x2 * x2);
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0,            1.0, 0.0,            0.0,
        z - x1 * x1,    0.0, -x1 * x2,       0.0,
        0.0,            0.0, 0.0,            1.0,
        -x1 * x2,       0.0, z - x2 * x2,    0.0,
    );
    m
}

pub fn chart_jacobian_i() -> Matrix4<f64> {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0,  0.0, 1.0, 0.0,
        0.0,  0.0, 0.0, 1.0,
        -1.0, 0.0, 0.0, 0.0,
        0.0, -1.0, 0.0, 0.0,
    );
    m
}

/// Linearizations of the leaf-restricted `H` and `I` flows at `(0,0,0,0,c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafLinearization {
    pub c: f64,
    pub matrix_h: Matrix4<f64>,
    pub matrix_i: Matrix4<f64>,
}

impl LeafLinearization {
    pub fn pencil(&self, alpha: f64) -> Matrix4<f64> {
        self.matrix_h + self.matrix_i * alpha
    }

    pub fn commutator(&self) -> Matrix4<f64> {
        self.matrix_h * self.matrix_i - self.matrix_i * self.matrix_h
    }
}

fn check_leaf_equilibrium(e: &State5, c: f64) -> Result<()> {
    e.check_finite("leaf equilibrium")?;
    let tol = LEAF_TOL * (1.0 + c.abs());
    let off = e.x1.abs().max(e.y1.abs()).max(e.x2.abs()).max(e.y2.abs());
    if off > tol || (e.z - c).abs() > tol {
        return Err(Error::domain(format!(
            "{e:?} is not the E1/E3 equilibrium (0,0,0,0,{c}) of the leaf"
        )));
    }
    Ok(())
}

pub fn leaf_linearization(e: &State5, c: f64) -> Result<LeafLinearization> {
    check_leaf_equilibrium(e, c)?;
    let origin = [0.0; 4];
    Ok(LeafLinearization {
        c,
        matrix_h: chart_jacobian_h(c, &origin),
        matrix_i: chart_jacobian_i(),
    })
}

/// Characteristic polynomial of `matrix_H + α matrix_I` at `(0,0,0,0,c)`,
/// computed from the matrices.
pub fn pencil_char_poly(c: f64, alpha: f64) -> QuarticPoly {
    let lin = LeafLinearization {
        c,
        matrix_h: chart_jacobian_h(c, &[0.0; 4]),
        matrix_i: chart_jacobian_i(),
    };
    char_poly(&lin.pencil(alpha))
}

/// `t⁴ + (2α² − 2c) t² + (α² + c)²`
pub fn pencil_char_poly_closed_form(c: f64, alpha: f64) -> QuarticPoly {
    let a2 = alpha * alpha;
    QuarticPoly::monic(0.0, 2.0 * a2 - 2.0 * c, 0.0, (a2 + c) * (a2 + c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CartanType {
    CenterCenter,
    CenterSaddle,
    SaddleSaddle,
    FocusFocus,
    Degenerate,
}

impl CartanType {
    pub fn as_str(&self) -> &'static str {
        match self {
            CartanType::CenterCenter => "center-center",
            CartanType::CenterSaddle => "center-saddle",
            CartanType::SaddleSaddle => "saddle-saddle",
            CartanType::FocusFocus => "focus-focus",
            CartanType::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    NotDetermined,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
            Stability::NotDetermined => "not-determined",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub kind: CartanType,
    /// Pencil parameter whose eigenvalues were distinct.
    pub alpha: Option<f64>,
    pub roots: [Complex64; 4],
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    /// Discriminant of the quadratic in `s = t²`.
    pub discriminant: Option<f64>,
    pub stable: Stability,
}

/// Pencil parameters tried in order, smallest magnitude first, positive before negative.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    values: Vec<f64>,
}

impl AlphaGrid {
    /// `±2^k` for `k = −6..=3`.
    pub fn standard() -> Self {
        Self::with_density(1)
    }

    /// `±2^(k/density)` over the same range of magnitudes; `density = 2`
    /// doubles the number of grid points per octave.
    pub fn with_density(density: u32) -> Self {
        let density = density.max(1) as i32;
        let mut values = Vec::new();
        for k in (-6 * density)..=(3 * density) {
            let a = 2f64.powf(k as f64 / density as f64);
            values.push(a);
            values.push(-a);
        }
        AlphaGrid { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Pairwise root distances all exceed `1e−9 (1 + max|root|)`.
pub fn roots_distinct(roots: &[Complex64; 4]) -> bool {
    let scale = roots.iter().fold(0.0f64, |m, r| m.max(r.norm()));
    let tol = 1e-9 * (1.0 + scale);
    (0..4).all(|i| ((i + 1)..4).all(|j| (roots[i] - roots[j]).norm() > tol))
}

fn is_imaginary(r: &Complex64) -> bool {
    r.re.abs() < 1e-9 * (1.0 + r.norm())
}

fn is_real(r: &Complex64) -> bool {
    r.im.abs() < 1e-9 * (1.0 + r.norm())
}

/// Reads the Cartan type and block parameters `(A, B)` off four distinct roots.
pub fn classify_roots(roots: &[Complex64; 4]) -> Option<(CartanType, f64, f64)> {
    let imag: Vec<f64> = roots.iter().filter(|r| is_imaginary(r)).map(|r| r.im.abs()).collect();
    let real: Vec<f64> = roots.iter().filter(|r| is_real(r)).map(|r| r.re.abs()).collect();
    let big_small = |v: &[f64]| {
        let (a, b) = (v.iter().cloned().fold(f64::MIN, f64::max), v.iter().cloned().fold(f64::MAX, f64::min));
        (a, b)
    };
    match (imag.len(), real.len()) {
        (4, 0) => {
            let (a, b) = big_small(&imag);
            Some((CartanType::CenterCenter, a, b))
        }
        (2, 2) => Some((CartanType::CenterSaddle, real[0], imag[0])),
        (0, 4) => {
            let (a, b) = big_small(&real);
            Some((CartanType::SaddleSaddle, a, b))
        }
        (0, 0) => Some((CartanType::FocusFocus, roots[0].re.abs(), roots[0].im.abs())),
        _ => None,
    }
}

fn stability_of(kind: CartanType) -> Stability {
    match kind {
        CartanType::CenterCenter => Stability::Stable,
        CartanType::Degenerate => Stability::NotDetermined,
        _ => Stability::Unstable,
    }
}

/// Classifies `e = (0,0,0,0,c)` on the leaf `O_c` with the standard α grid.
pub fn cartan_classify(e: &State5, c: f64) -> Result<ClassificationResult> {
    cartan_classify_with(e, c, &AlphaGrid::standard())
}

pub fn cartan_classify_with(e: &State5, c: f64, grid: &AlphaGrid) -> Result<ClassificationResult> {
    let lin = leaf_linearization(e, c)?;
    for &alpha in grid.values() {
        let poly = char_poly(&lin.pencil(alpha));
        let roots = quartic_roots(&poly);
        if !roots_distinct(&roots) {
            continue;
        }
        let Some((kind, a, b)) = classify_roots(&roots) else {
            continue;
        };
        return Ok(ClassificationResult {
            kind,
            alpha: Some(alpha),
            roots,
            a: Some(a),
            b: Some(b),
            discriminant: poly.reduced_discriminant(),
            stable: stability_of(kind),
        });
    }
    // Every pencil at c = 0 is (t² + α²)², so no α can separate the roots.
    if c == 0.0 {
        return Ok(ClassificationResult {
            kind: CartanType::Degenerate,
            alpha: None,
            roots: quartic_roots(&char_poly(&lin.matrix_h)),
            a: None,
            b: None,
            discriminant: None,
            stable: Stability::NotDetermined,
        });
    }
    Err(Error::Inconclusive { c })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateLevel {
    pub epsilon: f64,
    /// Grid points with `max(|H|, |I|, |C|) ≤ ε`.
    pub admitted: usize,
    pub max_norm: f64,
    /// `10 ε^(1/4)`
    pub bound: f64,
    /// Every admitted point obeys `y1², y2², z² ≤ 2ε` and `x1² + x2² ≤ 2ε + 2√(2ε)`.
    pub chain_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub unique_solution: bool,
    /// Admitted point of largest norm at the loosest level, if any besides the origin.
    pub worst_offender: Option<State5>,
    pub levels: Vec<CertificateLevel>,
}

pub const CERTIFICATE_EPSILONS: [f64; 3] = [1e-2, 1e-4, 1e-6];

/// Grid check that the level set `H = I = C = 0` shrinks onto the origin.
///
/// Scans `grid_n⁵` points of `[−w, w]⁵`. For each `ε` the largest admitted norm
/// must stay below `10 ε^(1/4)` and must not grow as `ε` shrinks.
pub fn origin_stability_certificate(box_half_width: f64, grid_n: usize) -> Result<StabilityCertificate> {
    if !(box_half_width.is_finite() && box_half_width > 0.0) {
        return Err(Error::domain("box half-width must be positive"));
    }
    if grid_n < 3 {
        return Err(Error::domain("grid_n must be at least 3"));
    }
    let w = box_half_width;
    let axis: Vec<f64> = (0..grid_n)
        .map(|i| {
            // Center index lands exactly on 0 for odd grid_n.
            let v = -w + 2.0 * w * i as f64 / (grid_n - 1) as f64;
            if 2 * i + 1 == grid_n { 0.0 } else { v }
        })
        .collect();

    let mut levels: Vec<CertificateLevel> = CERTIFICATE_EPSILONS
        .iter()
        .map(|&eps| CertificateLevel {
            epsilon: eps,
            admitted: 0,
            max_norm: 0.0,
            bound: 10.0 * eps.powf(0.25),
            chain_holds: true,
        })
        .collect();
    let mut worst: Option<(f64, State5)> = None;

    for &x1 in &axis {
        for &y1 in &axis {
            for &x2 in &axis {
                for &y2 in &axis {
                    for &z in &axis {
                        let p = State5::new(x1, y1, x2, y2, z);
                        let m = hamiltonian(&p).abs().max(invariant_i(&p).abs()).max(casimir(&p).abs());
                        for (k, level) in levels.iter_mut().enumerate() {
                            let eps = level.epsilon;
                            if m > eps {
                                continue;
                            }
                            level.admitted += 1;
                            let norm = p.norm();
                            level.max_norm = level.max_norm.max(norm);
                            let slack = 1e-12;
                            let ok = y1 * y1 <= 2.0 * eps + slack
                                && y2 * y2 <= 2.0 * eps + slack
                                && z * z <= 2.0 * eps + slack
                                && x1 * x1 + x2 * x2 <= 2.0 * eps + 2.0 * (2.0 * eps).sqrt() + slack;
                            level.chain_holds &= ok;
                            if k == 0 && norm > 0.0 && worst.is_none_or(|(n, _)| norm > n) {
                                worst = Some((norm, p));
                            }
                        }
                    }
                }
            }
        }
    }

    let monotone = levels.windows(2).all(|w| w[1].max_norm <= w[0].max_norm);
    let unique_solution =
        monotone && levels.iter().all(|l| l.chain_holds && l.max_norm < l.bound);
    Ok(StabilityCertificate {
        unique_solution,
        worst_offender: worst.map(|(_, p)| p),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_equilibrium_examples() {
        assert!(is_equilibrium(&State5::new(0.0, 0.0, 0.0, 0.0, 7.0), 1e-12));
        assert!(is_equilibrium(&State5::new(3.0, 0.0, -4.0, 0.0, 0.0), 1e-12));
        assert!(!is_equilibrium(&State5::new(1.0, 1.0, 0.0, 0.0, 1.0), 1e-12));
        assert!(!is_equilibrium(&State5::new(f64::NAN, 0.0, 0.0, 0.0, 0.0), 1.0));
    }

    #[test]
    fn family_constructors_validate() {
        assert!(EquilibriumFamily::e1(0.0).is_err());
        assert!(EquilibriumFamily::e2(0.0, 0.0).is_err());
        assert!(EquilibriumFamily::e2(f64::NAN, 1.0).is_err());
        for e in [
            EquilibriumFamily::e1(-2.0).unwrap(),
            EquilibriumFamily::e2(3.0, -4.0).unwrap(),
            EquilibriumFamily::E3,
        ] {
            assert_eq!(vector_field(&e.embed()).unwrap(), State5::ORIGIN);
            assert_eq!(EquilibriumFamily::of_point(&e.embed()), Some(e));
        }
        assert_eq!(EquilibriumFamily::of_point(&State5::new(1.0, 0.0, 0.0, 0.0, 1.0)), None);
    }

    #[test]
    fn k_split_examples() {
        for c in [-3.0, 0.5, 2.0] {
            let s = k_split(&EquilibriumFamily::e1(c).unwrap(), c).unwrap();
            assert_eq!(s.kind, LeafEquilibriumType::K0);
            assert_eq!(s.witness, None);
        }
        let s = k_split(&EquilibriumFamily::E3, 0.0).unwrap();
        assert_eq!(s.kind, LeafEquilibriumType::K0);

        let s = k_split(&EquilibriumFamily::e2(1.0, 2.0).unwrap(), 2.5).unwrap();
        assert_eq!(s.kind, LeafEquilibriumType::K1);
        assert_eq!(s.witness, Some(5.0));
    }

    #[test]
    fn k_split_rejects_wrong_leaf() {
        assert!(k_split(&EquilibriumFamily::e1(1.0).unwrap(), 2.0).is_err());
        assert!(k_split(&EquilibriumFamily::e2(1.0, 2.0).unwrap(), 2.0).is_err());
    }

    #[test]
    fn linearization_matrices() {
        let lin = leaf_linearization(&State5::new(0.0, 0.0, 0.0, 0.0, 1.0), 1.0).unwrap();
        #[rustfmt::skip]
        let h = Matrix4::new(
            0.0, 1.0, 0.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        );
        assert_eq!(lin.matrix_h, h);
        assert_eq!(lin.matrix_i, chart_jacobian_i());
        assert_eq!(lin.commutator(), Matrix4::zeros());
    }

    #[test]
    fn linearization_rejects_non_k0_points() {
        assert!(leaf_linearization(&State5::new(1.0, 0.0, 0.0, 0.0, 0.0), 0.5).is_err());
        assert!(leaf_linearization(&State5::new(0.0, 0.0, 0.0, 0.0, 1.0), 2.0).is_err());
        assert!(cartan_classify(&State5::new(1.0, 0.0, 2.0, 0.0, 0.0), 2.5).is_err());
    }

    #[test]
    fn chart_jacobian_matches_finite_differences() {
        let c = 0.7;
        let u = [0.3, -0.2, 0.5, 0.9];
        let jac = chart_jacobian_h(c, &u);
        let h = 1e-6;
        for col in 0..4 {
            let (mut a, mut b) = (u, u);
            a[col] += h;
            b[col] -= h;
            let (fa, fb) = (chart_field_h(c, &a), chart_field_h(c, &b));
            for row in 0..4 {
                let fd = (fa[row] - fb[row]) / (2.0 * h);
                assert!((fd - jac[(row, col)]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn chart_fields_are_restrictions_of_full_fields() {
        let c = 1.3;
        let u = [0.4, -0.7, 1.1, 0.2];
        let p = State5::new(u[0], u[1], u[2], u[3], c - 0.5 * (u[0] * u[0] + u[2] * u[2]));
        let full = vector_field(&p).unwrap();
        assert_eq!(chart_field_h(c, &u), [full.x1, full.y1, full.x2, full.y2]);
        let j = crate::system::PoissonMatrix::at(&p);
        let xi = j.apply(&grad_i(&p));
        assert_eq!(chart_field_i(&u), [xi[0], xi[1], xi[2], xi[3]]);
        assert_eq!(xi[4], 0.0);
    }

    #[test]
    fn pencil_examples() {
        assert_eq!(pencil_char_poly(1.0, 1.0).coefficients(), [1.0, 0.0, 0.0, 0.0, 4.0]);
        assert_eq!(pencil_char_poly(-1.0, 0.0).coefficients(), [1.0, 0.0, 2.0, 0.0, 1.0]);
        let beta: f64 = 0.75;
        let q = pencil_char_poly(0.0, beta).coefficients();
        assert_eq!(q, [1.0, 0.0, 2.0 * beta * beta, 0.0, beta.powi(4)]);
    }

    #[test]
    fn classification_examples() {
        let r = cartan_classify(&State5::new(0.0, 0.0, 0.0, 0.0, 1.0), 1.0).unwrap();
        assert_eq!(r.kind, CartanType::FocusFocus);
        assert_eq!(r.stable, Stability::Unstable);
        assert!(r.discriminant.unwrap() < 0.0);

        let r = cartan_classify(&State5::new(0.0, 0.0, 0.0, 0.0, -1.0), -1.0).unwrap();
        assert_eq!(r.kind, CartanType::CenterCenter);
        assert_eq!(r.stable, Stability::Stable);

        let r = cartan_classify(&State5::ORIGIN, 0.0).unwrap();
        assert_eq!(r.kind, CartanType::Degenerate);
        assert_eq!(r.stable, Stability::NotDetermined);
        assert_eq!((r.alpha, r.a, r.b), (None, None, None));
    }

    #[test]
    fn focus_focus_block_parameters() {
        // c = 1: s = 1 − α² ± 2iα, so t = ±(1 ± iα).
        let r = cartan_classify(&State5::new(0.0, 0.0, 0.0, 0.0, 1.0), 1.0).unwrap();
        let alpha = r.alpha.unwrap();
        assert!((r.a.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.b.unwrap() - alpha.abs()).abs() < 1e-12);
    }

    #[test]
    fn root_pattern_table() {
        let c = Complex64::new;
        let cases = [
            ([c(0.0, 1.0), c(0.0, -1.0), c(0.0, 2.0), c(0.0, -2.0)], CartanType::CenterCenter, 2.0, 1.0),
            ([c(3.0, 0.0), c(-3.0, 0.0), c(0.0, 2.0), c(0.0, -2.0)], CartanType::CenterSaddle, 3.0, 2.0),
            ([c(3.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)], CartanType::SaddleSaddle, 3.0, 1.0),
            ([c(1.0, 2.0), c(1.0, -2.0), c(-1.0, 2.0), c(-1.0, -2.0)], CartanType::FocusFocus, 1.0, 2.0),
        ];
        for (roots, kind, a, b) in cases {
            assert_eq!(classify_roots(&roots), Some((kind, a, b)));
        }
    }

    #[test]
    fn certificate_small_grid() {
        let cert = origin_stability_certificate(2.0, 5).unwrap();
        assert!(cert.unique_solution);
        assert!(cert.levels.iter().all(|l| l.admitted >= 1));
        assert!(origin_stability_certificate(0.0, 5).is_err());
        assert!(origin_stability_certificate(1.0, 2).is_err());
    }

    #[test]
    fn excluded_point_example() {
        let p = State5::new(1.0, 0.0, 0.0, 0.0, -0.5);
        assert_eq!(hamiltonian(&p), 0.125);
        assert_eq!(casimir(&p), 0.0);
        assert!(hamiltonian(&p) > 1e-2);
    }
}
