use std::f64::consts::{PI, TAU};

use maxwell_bloch::cli::csv;
use maxwell_bloch::equilibria::{cartan_classify, CartanType, Stability};
use maxwell_bloch::integrate::{drift_report, integrate, IntegratorConfig};
use maxwell_bloch::invariant_sets::{m1_conserved, m1_defect, m1_embed, m2_defect, m2_embed, rank_f, M1Point, M2Point};
use maxwell_bloch::quartic::{quartic_roots, QuarticPoly};
use maxwell_bloch::solutions::{
    periodic_solution, polar_to_state, puncture_times, state_to_polar, PeriodicParams, PolarState,
};
use maxwell_bloch::system::{
    conserved, grad_c, grad_h, jacobi_cyclic_sum, poisson_bracket, vector_field, PoissonMatrix, QuadraticForm,
    State5,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -2.0f64..=2.0
}

fn state() -> impl Strategy<Value = State5> {
    [coord(), coord(), coord(), coord(), coord()].prop_map(State5::from_array)
}

fn quadratic() -> impl Strategy<Value = QuadraticForm> {
    (
        prop::array::uniform5(prop::array::uniform5(-1.0f64..=1.0)),
        prop::array::uniform5(-1.0f64..=1.0),
    )
        .prop_map(|(a, b)| QuadraticForm::new(a, b))
}

fn away_from_zero() -> impl Strategy<Value = f64> {
    (0.1f64..=2.0, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v })
}

/// Real quartic root sets: four reals, two reals and a pair, or two pairs.
fn conjugate_closed_roots() -> impl Strategy<Value = [Complex64; 4]> {
    let re = || -2.0f64..=2.0;
    let im = || 0.05f64..=2.0;
    prop_oneof![
        [re(), re(), re(), re()].prop_map(|r| r.map(|x| Complex64::new(x, 0.0))),
        (re(), re(), re(), im()).prop_map(|(a, b, x, y)| {
            let z = Complex64::new(x, y);
            [Complex64::new(a, 0.0), Complex64::new(b, 0.0), z, z.conj()]
        }),
        (re(), im(), re(), im()).prop_map(|(a, b, x, y)| {
            let (z, w) = (Complex64::new(a, b), Complex64::new(x, y));
            [z, z.conj(), w, w.conj()]
        }),
    ]
    .prop_filter("roots separated", |r| {
        (0..4).all(|i| ((i + 1)..4).all(|j| (r[i] - r[j]).norm() >= 0.1))
    })
}

fn best_matching(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let p = [i, j, k, l];
                    if (0..4).all(|x| ((x + 1)..4).all(|y| p[x] != p[y])) {
                        let e = (0..4).map(|x| (a[x] - b[p[x]]).norm()).fold(0.0, f64::max);
                        best = best.min(e);
                    }
                }
            }
        }
    }
    best
}

proptest! {
    #[test]
    fn quartic_roots_recovered(want in conjugate_closed_roots()) {
        let got = quartic_roots(&QuarticPoly::from_roots(&want));
        prop_assert!(best_matching(&want, &got) < 1e-8, "want {want:?} got {got:?}");
        for z in got.iter().filter(|z| z.im != 0.0) {
            prop_assert!(got.iter().any(|w| w.re == z.re && w.im == -z.im));
        }
    }

    #[test]
    fn bracket_of_function_with_itself_is_exactly_zero(f in quadratic(), p in state()) {
        prop_assert_eq!(poisson_bracket(|q| f.gradient(q), |q| f.gradient(q), &p).unwrap(), 0.0);
    }

    #[test]
    fn poisson_tensor_structure(p in state()) {
        let j = PoissonMatrix::at(&p);
        let n = p.norm();
        for a in 0..5 {
            for b in 0..5 {
                prop_assert_eq!(j.get(a, b), -j.get(b, a));
            }
        }
        for v in j.apply(&grad_c(&p)) {
            prop_assert!(v.abs() < 1e-14 * (1.0 + n * n));
        }
        let jh = j.apply(&grad_h(&p));
        let x = vector_field(&p).unwrap().to_array();
        for k in 0..5 {
            prop_assert!((jh[k] - x[k]).abs() < 1e-14 * (1.0 + n * n * n));
        }
    }

    #[test]
    fn jacobi_identity(f in quadratic(), g in quadratic(), k in quadratic(), p in state()) {
        let (sum, scale) = jacobi_cyclic_sum(&f, &g, &k, &p);
        prop_assert!(sum.abs() < 1e-12 * (1.0 + scale), "sum {sum:e}, scale {scale:e}");
    }

    #[test]
    fn classification_follows_sign_of_c(c in prop_oneof![-4.0f64..=-0.01, 0.01f64..=4.0]) {
        let r = cartan_classify(&State5::new(0.0, 0.0, 0.0, 0.0, c), c).unwrap();
        if c > 0.0 {
            prop_assert_eq!(r.kind, CartanType::FocusFocus);
            prop_assert_eq!(r.stable, Stability::Unstable);
        } else {
            prop_assert_eq!(r.kind, CartanType::CenterCenter);
            prop_assert_eq!(r.stable, Stability::Stable);
        }
        let alpha = r.alpha.unwrap();
        let want = -16.0 * c * alpha * alpha;
        prop_assert!((r.discriminant.unwrap() - want).abs() <= 1e-12 * want.abs());
    }

    #[test]
    fn m1_embedding_lands_on_m1(x1 in coord(), y1 in coord(), x2 in away_from_zero()) {
        let q = M1Point::new(x1, y1, x2).unwrap();
        let p = m1_embed(&q);
        prop_assert!(m1_defect(&p) < 1e-14);
        prop_assert_eq!(rank_f(&p).rank, 2);
        let (f1, f2) = m1_conserved(&q).unwrap();
        prop_assert!((conserved(&p).i - f1 * f2).abs() < 1e-13 * (1.0 + (f1 * f2).abs()));
    }

    #[test]
    fn m2_embedding_lands_on_m2(x1 in away_from_zero(), y2 in coord()) {
        let p = m2_embed(&M2Point::new(x1, y2).unwrap());
        prop_assert!(m2_defect(&p) < 1e-14);
        prop_assert_eq!(rank_f(&p).rank, 2);
    }

    #[test]
    fn polar_chart_round_trip(r1 in 1e-3f64..=2.0, theta in 0.0f64..TAU, y1 in coord(), y2 in coord(), c in coord()) {
        let q = PolarState::new(r1, theta, y1, y2, c);
        let back = state_to_polar(&polar_to_state(&q).unwrap(), c).unwrap();
        prop_assert!((back.r1 - r1).abs() < 1e-14 * (1.0 + r1));
        let d = (back.theta - theta).rem_euclid(TAU);
        prop_assert!(d.min(TAU - d) < 1e-12);
        prop_assert_eq!((back.y1, back.y2), (y1, y2));
    }

    #[test]
    fn punctures_are_zeros_of_x2(x1 in coord(), y1 in away_from_zero(), x2 in away_from_zero()) {
        let p = PeriodicParams::new(x1, y1, x2).unwrap();
        let period = TAU * (x2 / y1).abs();
        let times = puncture_times(&p).times_in(0.0, 2.0 * period);
        // x2(t) = R sin(ϑ − ωt) vanishes twice per period.
        prop_assert!((3..=4).contains(&times.len()), "{times:?}");
        for w in times.windows(2) {
            prop_assert!((w[1] - w[0] - PI * (x2 / y1).abs()).abs() < 1e-9 * (1.0 + period));
        }
        let r = (x1 * x1 + x2 * x2).sqrt();
        for t in times {
            prop_assert!(periodic_solution(&p, t).x2.abs() < 1e-12 * (1.0 + r) * (1.0 + t.abs()));
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact(p in prop::array::uniform5(any::<f64>().prop_filter("finite", |v| v.is_finite())), t in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let p = State5::from_array(p);
        let mut buf = Vec::new();
        csv::write_header(&mut buf).unwrap();
        csv::write_row(&mut buf, t, &p).unwrap();
        let rows = csv::parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(rows[0].t.to_bits(), t.to_bits());
        for (a, b) in rows[0].state.to_array().iter().zip(p.to_array()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn short_rk45_runs_conserve(p in state()) {
        let traj = integrate(&p, &IntegratorConfig::rk45(1e-11, 2.0)).unwrap();
        let n = p.norm();
        prop_assert!(drift_report(&traj).unwrap().max() < 1e-8 * (1.0 + n * n * n));
        prop_assert!(traj.states.iter().all(|q| q.is_finite()));
    }
}
