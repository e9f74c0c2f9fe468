//! Seeded self-verification: runs every structural and numerical property
//! of the library and reports one row per suite.
//!
//! Each suite draws from its own RNG stream derived from the seed and the
//! suite name, so results do not depend on execution order.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equilibria::{
    cartan_classify, cartan_classify_with, classify_roots, leaf_linearization, pencil_char_poly,
    pencil_char_poly_closed_form, roots_distinct, AlphaGrid, CartanType,
};
use crate::integrate::{drift_report, integrate, integrate_reversed, IntegratorConfig};
use crate::invariant_sets::{
    invariance_probe, m1_conserved, m1_defect, m1_embed, m2_defect, m2_embed, rank_f, M1Point, M2Point,
};
use crate::quartic::{quartic_roots, QuarticPoly};
use crate::solutions::{
    chart_pushforward, homoclinic, homoclinic_derivative, m1_solution, periodic_derivative,
    periodic_solution, polar_to_state, puncture_times, reduced_polar_field, state_to_polar, Branch,
    HomoclinicParams, PeriodicParams, PolarState,
};
use crate::system::{
    conserved, dot, grad_c, grad_h, grad_i, jacobi_cyclic_sum, poisson_bracket, vector_field,
    PoissonMatrix, QuadraticForm, State5,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    /// Quick runs cap sample counts at 100 and integration horizons at 10.
    fn samples(self, full: usize) -> usize {
        match self {
            Level::Quick => full.min(100),
            Level::Full => full,
        }
    }

    fn horizon(self, full: f64) -> f64 {
        match self {
            Level::Quick => full.min(10.0),
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    /// Largest observed residual divided by its tolerance; passing needs ≤ 1.
    pub worst_ratio: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub level: Level,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

/// Accumulates the worst residual/tolerance ratio of a suite.
struct Tally {
    samples: usize,
    worst: f64,
    ok: bool,
}

impl Tally {
    fn new() -> Self {
        Tally {
            samples: 0,
            worst: 0.0,
            ok: true,
        }
    }

    fn check(&mut self, residual: f64, tol: f64) {
        self.samples += 1;
        let ratio = residual / tol;
        if !(ratio <= 1.0) {
            self.ok = false;
        }
        if ratio.is_nan() {
            self.worst = f64::INFINITY;
        } else {
            self.worst = self.worst.max(ratio);
        }
    }

    fn require(&mut self, cond: bool) {
        self.check(if cond { 0.0 } else { f64::INFINITY }, 1.0);
    }

    fn finish(self, name: &str, detail: impl Into<String>) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            passed: self.ok && self.samples > 0,
            samples: self.samples,
            worst_ratio: self.worst,
            detail: detail.into(),
        }
    }
}

fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a of the suite name keeps streams independent of suite order.
    let h = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub(crate) fn random_box(rng: &mut impl Rng, w: f64) -> State5 {
    State5::from_array(std::array::from_fn(|_| rng.gen_range(-w..=w)))
}

pub(crate) fn random_ball(rng: &mut impl Rng, r: f64) -> State5 {
    loop {
        let p = random_box(rng, r);
        if p.norm() <= r {
            return p;
        }
    }
}

fn random_quadratic(rng: &mut impl Rng) -> QuadraticForm {
    let a: [[f64; 5]; 5] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)));
    let b: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
    QuadraticForm::new(a, b)
}

type Suite = fn(&mut ChaCha8Rng, Level) -> SuiteResult;

fn suites() -> Vec<(&'static str, Suite)> {
    vec![
        ("equilibria.commutator", equilibria_commutator),
        ("equilibria.discriminant_sign", equilibria_discriminant_sign),
        ("equilibria.grid_refinement", equilibria_grid_refinement),
        ("equilibria.pencil_polynomial", equilibria_pencil_polynomial),
        ("equilibria.quartic_roots", equilibria_quartic_roots),
        ("equilibria.sign_of_c_classification", equilibria_sign_of_c_classification),
        ("integrate.conservation_drift", integrate_drift),
        ("integrate.rk4_order", integrate_rk4_order),
        ("integrate.time_reversal", integrate_time_reversal),
        ("invariant_sets.f1_f2_conservation", invariant_f1_f2),
        ("invariant_sets.i_equals_f1_f2", invariant_i_product),
        ("invariant_sets.invariance_probe", invariant_probe),
        ("invariant_sets.rank_dichotomy", invariant_rank_dichotomy),
        ("solutions.biasymptotics", solutions_biasymptotics),
        ("solutions.homoclinic_levels", solutions_homoclinic_levels),
        ("solutions.homoclinic_residual", solutions_homoclinic_residual),
        ("solutions.periodic_relations", solutions_periodic_relations),
        ("solutions.polar_pushforward", solutions_pushforward),
        ("solutions.theta_conserved", solutions_theta_conserved),
        ("system.antisymmetry", system_antisymmetry),
        ("system.casimir_kernel", system_casimir_kernel),
        ("system.hamilton_poisson_form", system_hamilton_poisson),
        ("system.invariant_directions", system_invariant_directions),
        ("system.jacobi_identity", system_jacobi),
    ]
}

pub fn suite_names() -> Vec<&'static str> {
    suites().into_iter().map(|(n, _)| n).collect()
}

/// Runs every suite. Suites run on scoped threads; the report is sorted by name.
pub fn run(seed: u64, level: Level) -> VerifyReport {
    let mut results: Vec<SuiteResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites()
            .into_iter()
            .map(|(name, suite)| {
                scope.spawn(move || {
                    let mut rng = stream(seed, name);
                    let mut r = suite(&mut rng, level);
                    r.name = name.to_string();
                    r
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite panicked")).collect()
    });
    results.sort_by(|a, b| a.name.cmp(&b.name));
    VerifyReport {
        seed,
        level,
        passed: results.iter().all(|r| r.passed),
        suites: results,
    }
}

fn system_casimir_kernel(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(100) {
        let p = random_box(rng, 2.0);
        let k = PoissonMatrix::at(&p).apply(&grad_c(&p));
        let n = p.norm();
        for v in k {
            t.check(v.abs(), 1e-14 * (1.0 + n * n));
        }
    }
    t.finish("", "J(p)∇C(p) = 0")
}

fn system_hamilton_poisson(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(100) {
        let p = random_box(rng, 2.0);
        let jh = PoissonMatrix::at(&p).apply(&grad_h(&p));
        let x = crate::system::field(&p.to_array());
        let n = p.norm();
        for i in 0..5 {
            t.check((jh[i] - x[i]).abs(), 1e-14 * (1.0 + n * n * n));
        }
    }
    t.finish("", "X(p) = J(p)∇H(p)")
}

fn system_antisymmetry(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(100) {
        let p = random_box(rng, 2.0);
        let j = PoissonMatrix::at(&p);
        for a in 0..5 {
            for b in 0..5 {
                t.require(j.get(a, b) == -j.get(b, a));
            }
        }
        let f = random_quadratic(rng);
        t.require(poisson_bracket(|q| f.gradient(q), |q| f.gradient(q), &p) == Ok(0.0));
        let hi = poisson_bracket(grad_h, grad_i, &p).unwrap();
        let n = p.norm();
        t.check(hi.abs(), 1e-14 * (1.0 + n * n * n));
    }
    t.finish("", "J = −Jᵀ, {F,F} = 0, {H,I} = 0")
}

fn system_jacobi(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let named = [QuadraticForm::hamiltonian(), QuadraticForm::invariant_i(), QuadraticForm::casimir()];
    for _ in 0..level.samples(100) {
        let p = random_box(rng, 2.0);
        let triples = [
            (named[0], named[1], named[2]),
            (named[0], named[1], random_quadratic(rng)),
            (random_quadratic(rng), random_quadratic(rng), random_quadratic(rng)),
        ];
        for (f, g, k) in triples {
            let (sum, scale) = jacobi_cyclic_sum(&f, &g, &k, &p);
            t.check(sum.abs(), 1e-12 * (1.0 + scale));
        }
    }
    t.finish("", "cyclic sum of nested brackets vanishes")
}

fn system_invariant_directions(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(100) {
        let p = random_box(rng, 2.0);
        let x = vector_field(&p).unwrap().to_array();
        let n = p.norm();
        t.check(dot(&grad_i(&p), &x).abs(), 1e-13 * (1.0 + n * n * n));
        t.check(dot(&grad_c(&p), &x).abs(), 1e-13 * (1.0 + n * n * n));
    }
    t.finish("", "∇I·X = ∇C·X = 0")
}

fn integrate_drift(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let runs = match level {
        Level::Quick => 3,
        Level::Full => 20,
    };
    let t_end = level.horizon(100.0);
    for _ in 0..runs {
        let p0 = random_ball(rng, 2.0);
        match integrate(&p0, &IntegratorConfig::rk4(1e-3, t_end).with_stride(100)) {
            Ok(traj) => {
                let d = drift_report(&traj).unwrap();
                t.check(d.max(), 1e-7);
            }
            Err(_) => t.require(false),
        }
    }
    t.finish("", format!("RK4 dt=1e-3 to t={t_end}: |ΔH|, |ΔI|, |ΔC| < 1e-7"))
}

/// Ratio of endpoint errors at t = 1 for RK4 with dt and dt/2.
pub fn rk4_order_factor(p0: &State5, dt: f64) -> f64 {
    let reference = integrate(p0, &IntegratorConfig::rk45(1e-14, 1.0)).unwrap();
    let (_, exact) = reference.last().unwrap();
    let err = |h: f64| {
        let traj = integrate(p0, &IntegratorConfig::rk4(h, 1.0)).unwrap();
        traj.last().unwrap().1.distance(&exact)
    };
    err(dt) / err(dt / 2.0)
}

fn integrate_rk4_order(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    let factor = rk4_order_factor(&State5::new(1.0, 1.0, 0.0, 0.0, 1.0), 0.05);
    t.require((12.0..=20.0).contains(&factor));
    t.finish("", format!("error ratio under step halving = {factor:.3}"))
}

fn integrate_time_reversal(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let runs = match level {
        Level::Quick => 2,
        Level::Full => 5,
    };
    for _ in 0..runs {
        let p0 = random_ball(rng, 1.0);
        let cfg = IntegratorConfig::rk45(1e-12, 10.0);
        let fwd = integrate(&p0, &cfg).unwrap();
        let back = integrate_reversed(&fwd.last().unwrap().1, &cfg).unwrap();
        t.check(back.last().unwrap().1.distance(&p0), 1e-8);
    }
    t.finish("", "forward to T=10 then backward recovers p0")
}

fn equilibria_pencil_polynomial(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for c in [-4.0, -1.0, -0.25, 0.25, 1.0, 4.0] {
        for alpha in [0.1, 0.5, 1.0, 2.0] {
            let got = pencil_char_poly(c, alpha).coefficients();
            let want = pencil_char_poly_closed_form(c, alpha).coefficients();
            for k in 0..5 {
                t.check((got[k] - want[k]).abs(), 1e-12 * want[k].abs().max(1.0));
            }
        }
    }
    t.finish("", "char poly of matrix_H + α matrix_I matches t⁴ + (2α²−2c)t² + (α²+c)²")
}

fn random_conjugate_closed_roots(rng: &mut impl Rng) -> [num_complex::Complex64; 4] {
    use num_complex::Complex64 as C;
    loop {
        let real = |rng: &mut dyn rand::RngCore| C::new(rng.gen_range(-2.0..=2.0), 0.0);
        let roots = match rng.gen_range(0..3) {
            0 => [real(rng), real(rng), real(rng), real(rng)],
            1 => {
                let z = C::new(rng.gen_range(-2.0..=2.0), rng.gen_range(0.05..=2.0));
                [real(rng), real(rng), z, z.conj()]
            }
            _ => {
                let z = C::new(rng.gen_range(-2.0..=2.0), rng.gen_range(0.05..=2.0));
                let w = C::new(rng.gen_range(-2.0..=2.0), rng.gen_range(0.05..=2.0));
                [z, z.conj(), w, w.conj()]
            }
        };
        let separated = (0..4).all(|i| ((i + 1)..4).all(|j| (roots[i] - roots[j]).norm() >= 0.1));
        if separated {
            return roots;
        }
    }
}

/// Smallest max-distance over all pairings of two root lists.
pub fn optimal_matching_error(a: &[num_complex::Complex64; 4], b: &[num_complex::Complex64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    let mut perm = [0usize, 1, 2, 3];
    permute(&mut perm, 0, &mut |p| {
        let e = (0..4).map(|i| (a[i] - b[p[i]]).norm()).fold(0.0, f64::max);
        best = best.min(e);
    });
    best
}

fn permute(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn equilibria_quartic_roots(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(1000) {
        let want = random_conjugate_closed_roots(rng);
        let got = quartic_roots(&QuarticPoly::from_roots(&want));
        t.check(optimal_matching_error(&want, &got), 1e-8);
    }
    t.finish("", "roots of quartics built from known separated roots")
}

const C_GRID: [f64; 6] = [-4.0, -1.0, -0.25, 0.25, 1.0, 4.0];

fn equilibrium(c: f64) -> State5 {
    State5::new(0.0, 0.0, 0.0, 0.0, c)
}

fn equilibria_commutator(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for c in C_GRID.into_iter().chain([0.0]) {
        let lin = leaf_linearization(&equilibrium(c), c).unwrap();
        t.check(lin.commutator().abs().max(), 1e-13);
    }
    t.finish("", "[matrix_H, matrix_I] = 0 on K0")
}

fn equilibria_grid_refinement(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for c in C_GRID.into_iter().chain([0.0]) {
        let coarse = cartan_classify(&equilibrium(c), c).unwrap();
        let fine = cartan_classify_with(&equilibrium(c), c, &AlphaGrid::with_density(2)).unwrap();
        t.require(coarse.kind == fine.kind);
    }
    t.finish("", "classification unchanged on a doubled α grid")
}

fn equilibria_discriminant_sign(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for c in C_GRID {
        if c > 0.0 {
            let r = cartan_classify(&equilibrium(c), c).unwrap();
            t.require(r.discriminant.is_some_and(|d| d < 0.0));
        } else {
            let limit = 0.5 * (-c).sqrt();
            let lin = leaf_linearization(&equilibrium(c), c).unwrap();
            let mut found = false;
            for &alpha in AlphaGrid::standard().values() {
                if alpha.abs() >= limit {
                    continue;
                }
                let roots = quartic_roots(&crate::quartic::char_poly(&lin.pencil(alpha)));
                let ok = roots_distinct(&roots)
                    && classify_roots(&roots).is_some_and(|(k, _, _)| k == CartanType::CenterCenter);
                t.require(ok);
                found |= ok;
            }
            t.require(found);
        }
    }
    t.finish("", "Δ < 0 for c > 0; distinct imaginary roots for c < 0, |α| < √(−c)/2")
}

fn equilibria_sign_of_c_classification(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for c in C_GRID {
        let r = cartan_classify(&equilibrium(c), c).unwrap();
        let want = if c > 0.0 { CartanType::FocusFocus } else { CartanType::CenterCenter };
        t.require(r.kind == want);
        let alpha = r.alpha.unwrap();
        let closed = -16.0 * c * alpha * alpha;
        t.check((r.discriminant.unwrap() - closed).abs(), 1e-12 * closed.abs());
    }
    let r = cartan_classify(&State5::ORIGIN, 0.0).unwrap();
    t.require(r.kind == CartanType::Degenerate);
    t.finish("", "focus-focus for c > 0, center-center for c < 0, degenerate at 0")
}

fn homoclinic_params() -> Vec<HomoclinicParams> {
    let mut out = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        for theta0 in [0.0, PI / 3.0, FRAC_PI_2] {
            for sign in [Branch::Plus, Branch::Minus] {
                out.push(HomoclinicParams::new(c, theta0, sign).unwrap());
            }
        }
    }
    out
}

fn solutions_homoclinic_residual(_: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let n = level.samples(1000);
    for p in homoclinic_params() {
        for k in 0..n {
            let time = -10.0 + 20.0 * k as f64 / (n - 1) as f64;
            let r = homoclinic_derivative(&p, time) - vector_field(&homoclinic(&p, time)).unwrap();
            t.check(r.norm_inf(), 1e-12 * (1.0 + p.c * p.c));
        }
    }
    t.finish("", "d/dt homoclinic = X(homoclinic) on t ∈ [−10, 10]")
}

fn solutions_homoclinic_levels(_: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let n = level.samples(1000);
    for p in homoclinic_params() {
        for k in 0..n {
            let time = -10.0 + 20.0 * k as f64 / (n - 1) as f64;
            let q = conserved(&homoclinic(&p, time));
            let tol = 1e-12 * (1.0 + p.c * p.c);
            t.check((q.h - 0.5 * p.c * p.c).abs(), tol);
            t.check(q.i.abs(), tol);
            t.check((q.c - p.c).abs(), tol);
        }
    }
    t.finish("", "(H, I, C) = (c²/2, 0, c) along every homoclinic")
}

fn solutions_biasymptotics(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for p in homoclinic_params() {
        let sc = p.c.sqrt();
        for big_t in [1.0, 2.0, 5.0, 10.0, 20.0] {
            // The y and z components decay like c·sech, hence the √(1 + c) factor.
            let bound = 5.0 * sc * (1.0 + p.c).sqrt() * (-sc * big_t).exp();
            for s in [-1.0, 1.0] {
                t.check(homoclinic(&p, s * big_t).distance(&p.equilibrium()), bound);
            }
        }
    }
    t.finish("", "‖homoclinic(±T) − e_c‖ ≤ 5√(c(1+c)) e^(−√c T)")
}

fn solutions_theta_conserved(_: &mut ChaCha8Rng, _: Level) -> SuiteResult {
    let mut t = Tally::new();
    for p in homoclinic_params() {
        // θ = θ0 on the + branch, θ0 + π on the − branch.
        let expected = match p.sign {
            Branch::Plus => p.theta0,
            Branch::Minus => p.theta0 + PI,
        };
        for k in 0..41 {
            let time = -10.0 + 0.5 * k as f64;
            let q = state_to_polar(&homoclinic(&p, time), p.c).unwrap();
            let d = (q.theta - expected).rem_euclid(TAU);
            t.check(d.min(TAU - d), 1e-12);
        }
    }
    t.finish("", "polar angle of homoclinics stays at θ0 (mod π per branch)")
}

fn solutions_pushforward(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(100) {
        let q = PolarState::new(
            rng.gen_range(1e-6..=2.0),
            rng.gen_range(0.0..TAU),
            rng.gen_range(-2.0..=2.0),
            rng.gen_range(-2.0..=2.0),
            rng.gen_range(-2.0..=2.0),
        );
        let pushed = chart_pushforward(&q, &reduced_polar_field(&q).unwrap());
        let full = vector_field(&polar_to_state(&q).unwrap()).unwrap();
        t.check(pushed.distance_inf(&full), 1e-13 * (1.0 + full.norm_inf()));
    }
    t.finish("", "reduced polar field pushes forward to X")
}

fn random_periodic(rng: &mut impl Rng) -> PeriodicParams {
    let mag = |rng: &mut dyn rand::RngCore| {
        let v: f64 = rng.gen_range(0.1..=2.0);
        if rng.gen_bool(0.5) { v } else { -v }
    };
    let y1 = mag(rng);
    let x2 = mag(rng);
    PeriodicParams::new(rng.gen_range(-2.0..=2.0), y1, x2).unwrap()
}

fn solutions_periodic_relations(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..20 {
        let p = random_periodic(rng);
        let w = p.omega();
        let n = level.samples(1000);
        for k in 0..n {
            let time = p.period() * k as f64 / n as f64;
            let s = periodic_solution(&p, time);
            let scale = 1e-13 * (1.0 + w.abs()) * (1.0 + p.f1());
            t.check((s.y1 - w * s.x2).abs(), scale);
            t.check((s.y2 + w * s.x1).abs(), scale);
            t.require(s.z == -w * w);
            let r = periodic_derivative(&p, time) - vector_field(&s).unwrap();
            t.check(r.norm_inf(), 1e-12 * (1.0 + w * w) * (1.0 + p.f1()));
        }
    }
    t.finish("", "y1 = ωx2, y2 = −ωx1, z = −ω², ODE residual")
}

fn invariant_rank_dichotomy(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let n = level.samples(1000);
    let mut generic = 0;
    while generic < n {
        let p = random_box(rng, 2.0);
        if m1_defect(&p).min(m2_defect(&p)) < 1e-3 || p.x2.abs() < 1e-3 || p.x1.abs() < 1e-3 {
            continue;
        }
        generic += 1;
        t.require(rank_f(&p).rank == 3);
    }
    for _ in 0..n {
        let x2 = loop {
            let v: f64 = rng.gen_range(-2.0..=2.0);
            if v.abs() > 0.05 {
                break v;
            }
        };
        let q = M1Point::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0), x2).unwrap();
        t.require(rank_f(&m1_embed(&q)).rank == 2);
        let x1 = loop {
            let v: f64 = rng.gen_range(-2.0..=2.0);
            if v.abs() > 0.05 {
                break v;
            }
        };
        let q = M2Point::new(x1, rng.gen_range(-2.0..=2.0)).unwrap();
        t.require(rank_f(&m2_embed(&q)).rank == 2);
    }
    t.finish("", "rank ∇F = 3 generically, 2 on M1 and M2")
}

fn invariant_f1_f2(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..20 {
        let p = random_periodic(rng);
        let (f1_0, f2_0) = (p.f1(), p.omega());
        let n = level.samples(1000);
        for k in 0..n {
            let time = 2.0 * p.period() * k as f64 / n as f64;
            let (x1, y1, x2) = m1_solution(&p, time);
            t.check((x1 * x1 + x2 * x2 - f1_0).abs(), 1e-12 * (1.0 + f1_0));
            if x2.abs() > 0.1 {
                let (_, f2) = m1_conserved(&M1Point::new(x1, y1, x2).unwrap()).unwrap();
                t.check((f2 - f2_0).abs(), 1e-11 * (1.0 + f2_0.abs()));
            }
        }
    }
    t.finish("", "f1 = x1² + x2² and f2 = y1/x2 constant along the M1 solution")
}

fn invariant_i_product(rng: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    for _ in 0..level.samples(1000) {
        let x2 = loop {
            let v: f64 = rng.gen_range(-2.0..=2.0);
            if v.abs() > 0.05 {
                break v;
            }
        };
        let q = M1Point::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0), x2).unwrap();
        let (f1, f2) = m1_conserved(&q).unwrap();
        let i = conserved(&m1_embed(&q)).i;
        t.check((i - f1 * f2).abs(), 1e-13 * (1.0 + (f1 * f2).abs()));
    }
    t.finish("", "I = f1·f2 on M1")
}

fn invariant_probe(_: &mut ChaCha8Rng, level: Level) -> SuiteResult {
    let mut t = Tally::new();
    let t_end = level.horizon(20.0);
    let q0 = M1Point::new(0.0, 1.0, 1.0).unwrap();
    let predicted = puncture_times(&PeriodicParams::new(0.0, 1.0, 1.0).unwrap())
        .times_in(0.0, t_end)
        .len();
    let mut detail = String::new();
    match invariance_probe(&q0, t_end, &IntegratorConfig::rk45(1e-10, t_end)) {
        Ok(r) => {
            t.check(r.max_distance_to_union, 1e-6);
            t.require(r.puncture_count == predicted);
            t.require(r.puncture_count >= 1);
            detail = format!(
                "max defect {:.3e}, {} punctures (predicted {predicted})",
                r.max_distance_to_union, r.puncture_count
            );
        }
        Err(_) => t.require(false),
    }
    t.finish("", detail)
}
