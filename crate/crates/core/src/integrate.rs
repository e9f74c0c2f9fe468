//! Fixed-step RK4 and adaptive Dormand-Prince 5(4) integration with
//! conserved-quantity drift reporting.
//!
//! The steppers are generic over the dimension so that reduced systems
//! (the polar chart, the flow on `M1`) can be integrated with the same code.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::{self, conserved, ConservedTriple, State5};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_DT_MIN: f64 = 1e-12;

const SAFETY: f64 = 0.9;
const GROWTH_MIN: f64 = 0.2;
const GROWTH_MAX: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4Fixed { dt: f64 },
    Rk45Adaptive {
        abs_tol: f64,
        rel_tol: f64,
        dt_initial: f64,
        dt_min: f64,
        dt_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub t_end: f64,
    /// Record every k-th accepted step. The initial and final states are always recorded.
    pub sample_stride: usize,
}

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_end: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk4Fixed { dt },
            t_end,
            sample_stride: 1,
        }
    }

    /// Adaptive pair with `abs_tol = rel_tol = tol` and the default step bounds.
    pub fn rk45(tol: f64, t_end: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk45Adaptive {
                abs_tol: tol,
                rel_tol: tol,
                dt_initial: 1e-3,
                dt_min: DEFAULT_DT_MIN,
                dt_max: 1.0,
            },
            t_end,
            sample_stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    pub fn with_t_end(mut self, t_end: f64) -> Self {
        self.t_end = t_end;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad("t_end must be a positive finite number");
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be positive");
        }
        match self.method {
            Method::Rk4Fixed { dt } => {
                if !(dt.is_finite() && dt > 0.0) {
                    return bad("dt must be positive");
                }
            }
            Method::Rk45Adaptive {
                abs_tol,
                rel_tol,
                dt_initial,
                dt_min,
                dt_max,
            } => {
                if !(abs_tol > 0.0 && rel_tol > 0.0 && abs_tol.is_finite() && rel_tol.is_finite()) {
                    return bad("abs_tol and rel_tol must be positive");
                }
                if !(dt_min > 0.0 && dt_min <= dt_initial && dt_initial <= dt_max && dt_max.is_finite()) {
                    return bad("step bounds must satisfy 0 < dt_min <= dt_initial <= dt_max");
                }
            }
        }
        Ok(())
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig::rk45(DEFAULT_TOL, 10.0)
    }
}

/// Time-stamped samples, each with its conserved values.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State5>,
    pub conserved: Vec<ConservedTriple>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a trajectory from samples, computing the conserved values.
    /// Times must be strictly increasing.
    pub fn from_samples(times: Vec<f64>, states: Vec<State5>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::domain("times and states differ in length"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("times must be strictly increasing"));
        }
        let conserved = states.iter().map(conserved).collect();
        Ok(Trajectory {
            times,
            states,
            conserved,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, State5)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    fn push(&mut self, t: f64, p: State5) {
        self.times.push(t);
        self.states.push(p);
        self.conserved.push(conserved(&p));
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &State5, &ConservedTriple)> {
        self.times
            .iter()
            .zip(&self.states)
            .zip(&self.conserved)
            .map(|((t, p), c)| (*t, p, c))
    }
}

/// An integration that stopped early. `partial` holds every sample recorded
/// before the failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct IntegrationFailure<T> {
    pub error: Error,
    pub partial: T,
}

/// Raw output of the generic integrators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Samples<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, k: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * k[i])
}

fn all_finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// One classical RK4 step for an arbitrary autonomous field.
pub fn rk4_step_with<const N: usize, F>(f: &F, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let k1 = f(y);
    let k2 = f(&axpy(y, 0.5 * h, &k1));
    let k3 = f(&axpy(y, 0.5 * h, &k2));
    let k4 = f(&axpy(y, h, &k3));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// One RK4 step of the Maxwell-Bloch field.
pub fn rk4_step(p: &State5, h: f64) -> Result<State5> {
    p.check_finite("rk4_step")?;
    if h == 0.0 || !h.is_finite() {
        return Err(Error::domain("step size must be nonzero and finite"));
    }
    let next = rk4_step_with(&system::field, &p.to_array(), h);
    if all_finite(&next) {
        Ok(State5::from_array(next))
    } else {
        Err(Error::Overflow { t: h })
    }
}

// Dormand-Prince 5(4) tableau. The field is autonomous so the stage times are unused.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth-order weights minus the embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

struct DopriStep<const N: usize> {
    y: [f64; N],
    err: [f64; N],
    /// Derivative at the new point (first stage of the next step).
    k7: [f64; N],
}

fn dopri_step<const N: usize, F>(f: &F, y: &[f64; N], k1: &[f64; N], h: f64) -> DopriStep<N>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let stage = |coef: &[(f64, &[f64; N])]| -> [f64; N] {
        std::array::from_fn(|i| y[i] + h * coef.iter().map(|(a, k)| a * k[i]).sum::<f64>())
    };
    let k2 = f(&stage(&[(A21, k1)]));
    let k3 = f(&stage(&[(A31, k1), (A32, &k2)]));
    let k4 = f(&stage(&[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(&stage(&[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(&stage(&[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y_new = stage(&[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(&y_new);
    let err = std::array::from_fn(|i| {
        h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    });
    DopriStep { y: y_new, err, k7 }
}

/// Integrates `y' = f(y)` from `t = 0` to `cfg.t_end`.
///
/// The last step is shortened so the final sample lands exactly on `t_end`.
pub fn integrate_field<const N: usize, F>(
    f: &F,
    y0: [f64; N],
    cfg: &IntegratorConfig,
) -> std::result::Result<Samples<N>, IntegrationFailure<Samples<N>>>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let mut out = Samples::default();
    if let Err(error) = cfg.validate() {
        return Err(IntegrationFailure { error, partial: out });
    }
    if !all_finite(&y0) {
        return Err(IntegrationFailure {
            error: Error::NonFinite("initial state"),
            partial: out,
        });
    }
    out.times.push(0.0);
    out.states.push(y0);

    let t_end = cfg.t_end;
    // Remaining intervals shorter than this count as having arrived.
    let arrive = 4.0 * f64::EPSILON * t_end.max(1.0);
    let mut t = 0.0;
    let mut y = y0;
    let mut accepted = 0usize;
    let record = |t: f64, y: [f64; N], last: bool, accepted: usize, out: &mut Samples<N>| {
        if last || accepted.is_multiple_of(cfg.sample_stride) {
            out.times.push(t);
            out.states.push(y);
        }
    };

    match cfg.method {
        Method::Rk4Fixed { dt } => {
            while t_end - t > arrive {
                let h = dt.min(t_end - t);
                let next = rk4_step_with(f, &y, h);
                let t_next = if t_end - (t + h) <= arrive { t_end } else { t + h };
                if !all_finite(&next) {
                    return Err(IntegrationFailure {
                        error: Error::Overflow { t: t_next },
                        partial: out,
                    });
                }
                t = t_next;
                y = next;
                accepted += 1;
                record(t, y, t == t_end, accepted, &mut out);
            }
        }
        Method::Rk45Adaptive {
            abs_tol,
            rel_tol,
            dt_initial,
            dt_min,
            dt_max,
        } => {
            let mut h = dt_initial;
            let mut k1 = f(&y);
            while t_end - t > arrive {
                let remaining = t_end - t;
                let final_step = h >= remaining;
                let h_try = if final_step { remaining } else { h };
                let step = dopri_step(f, &y, &k1, h_try);
                let err_norm = (0..N)
                    .map(|i| {
                        let scale = abs_tol + rel_tol * y[i].abs().max(step.y[i].abs());
                        (step.err[i] / scale).abs()
                    })
                    .fold(0.0, f64::max);

                if !err_norm.is_finite() || !all_finite(&step.y) {
                    // Shrink hard; a non-finite stage usually means the step overshot.
                    h = h_try * GROWTH_MIN;
                    if h < dt_min {
                        return Err(IntegrationFailure {
                            error: Error::Overflow { t: t + h_try },
                            partial: out,
                        });
                    }
                    continue;
                }

                if err_norm <= 1.0 {
                    t = if final_step { t_end } else { t + h_try };
                    y = step.y;
                    k1 = step.k7;
                    accepted += 1;
                    record(t, y, t == t_end, accepted, &mut out);
                    let factor = if err_norm == 0.0 {
                        GROWTH_MAX
                    } else {
                        (SAFETY * err_norm.powf(-0.2)).clamp(GROWTH_MIN, GROWTH_MAX)
                    };
                    // A shortened final step says nothing about the natural step size.
                    if !final_step {
                        h = (h_try * factor).min(dt_max);
                    }
                } else {
                    let factor = (SAFETY * err_norm.powf(-0.2)).clamp(GROWTH_MIN, 1.0);
                    h = h_try * factor;
                    if h < dt_min {
                        return Err(IntegrationFailure {
                            error: Error::Stalled { t, dt: h },
                            partial: out,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn to_trajectory(s: Samples<5>) -> Trajectory {
    let mut traj = Trajectory::new();
    for (t, y) in s.times.into_iter().zip(s.states) {
        traj.push(t, State5::from_array(y));
    }
    traj
}

/// Integrates the Maxwell-Bloch system from `p0` over `[0, cfg.t_end]`.
pub fn integrate(
    p0: &State5,
    cfg: &IntegratorConfig,
) -> std::result::Result<Trajectory, IntegrationFailure<Trajectory>> {
    integrate_field(&system::field, p0.to_array(), cfg)
        .map(to_trajectory)
        .map_err(|e| IntegrationFailure {
            error: e.error,
            partial: to_trajectory(e.partial),
        })
}

/// Integrates the time-reversed system `p' = -X(p)`. Sample `k` is the state
/// at time `-times[k]` of the original flow.
pub fn integrate_reversed(
    p0: &State5,
    cfg: &IntegratorConfig,
) -> std::result::Result<Trajectory, IntegrationFailure<Trajectory>> {
    let reversed = |y: &[f64; 5]| system::field(y).map(|v| -v);
    integrate_field(&reversed, p0.to_array(), cfg)
        .map(to_trajectory)
        .map_err(|e| IntegrationFailure {
            error: e.error,
            partial: to_trajectory(e.partial),
        })
}

/// Largest deviations of `H`, `I`, `C` from their values at the first sample.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DriftReport {
    #[serde(rename = "max_abs_dH")]
    pub max_abs_dh: f64,
    #[serde(rename = "max_abs_dI")]
    pub max_abs_di: f64,
    #[serde(rename = "max_abs_dC")]
    pub max_abs_dc: f64,
}

impl DriftReport {
    pub fn max(&self) -> f64 {
        self.max_abs_dh.max(self.max_abs_di).max(self.max_abs_dc)
    }
}

pub fn drift_report(traj: &Trajectory) -> Result<DriftReport> {
    let first = traj
        .conserved
        .first()
        .ok_or_else(|| Error::domain("drift of an empty trajectory"))?;
    Ok(traj.conserved.iter().fold(DriftReport::default(), |r, q| DriftReport {
        max_abs_dh: r.max_abs_dh.max((q.h - first.h).abs()),
        max_abs_di: r.max_abs_di.max((q.i - first.i).abs()),
        max_abs_dc: r.max_abs_dc.max((q.c - first.c).abs()),
    }))
}
