//! Closed-form special solutions.
//!
//! * the polar chart around `(0,0,0,0,c)` and the reduced system on the leaf,
//! * the homoclinic family `r1(t) = 2√c sech(√c t)` at focus-focus points,
//! * the periodic family living in `M1 ∪ M2`, with its puncture schedule.
//!
//! Every solution comes with an analytic time derivative so that ODE
//! residuals measure rounding only.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::system::State5;

/// Coordinates `(r1, θ, y1, y2)` on the leaf `O_c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarState {
    pub r1: f64,
    pub theta: f64,
    pub y1: f64,
    pub y2: f64,
    pub c: f64,
}

impl PolarState {
    pub fn new(r1: f64, theta: f64, y1: f64, y2: f64, c: f64) -> Self {
        PolarState { r1, theta, y1, y2, c }
    }
}

/// `x1 = r1 cos θ`, `x2 = r1 sin θ`, `z = c − ½ r1²`.
pub fn polar_to_state(q: &PolarState) -> Result<State5> {
    if !(q.r1.is_finite() && q.theta.is_finite() && q.y1.is_finite() && q.y2.is_finite() && q.c.is_finite()) {
        return Err(Error::NonFinite("polar_to_state"));
    }
    if q.r1 <= 0.0 {
        return Err(Error::domain("polar chart needs r1 > 0"));
    }
    let (s, c) = q.theta.sin_cos();
    Ok(State5::new(q.r1 * c, q.y1, q.r1 * s, q.y2, q.c - 0.5 * q.r1 * q.r1))
}

/// Angle reduced to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if t >= TAU { 0.0 } else { t }
}

pub fn state_to_polar(p: &State5, c: f64) -> Result<PolarState> {
    p.check_finite("state_to_polar")?;
    let r2 = p.x1 * p.x1 + p.x2 * p.x2;
    if r2 == 0.0 {
        return Err(Error::Singularity("x1 = x2 = 0 is outside the polar chart".into()));
    }
    let leaf = 0.5 * r2 + p.z;
    if (leaf - c).abs() > 1e-10 * (1.0 + c.abs()) {
        return Err(Error::domain(format!("point has Casimir {leaf}, not on the leaf c = {c}")));
    }
    Ok(PolarState::new(r2.sqrt(), normalize_angle(p.x2.atan2(p.x1)), p.y1, p.y2, c))
}

/// Time derivatives `(ṙ1, θ̇, ẏ1, ẏ2)` of the reduced system on the leaf.
pub fn reduced_polar_field(q: &PolarState) -> Result<[f64; 4]> {
    if q.r1 == 0.0 {
        return Err(Error::Singularity("reduced polar field is singular at r1 = 0".into()));
    }
    let (s, c) = q.theta.sin_cos();
    let force = q.r1 * (q.c - 0.5 * q.r1 * q.r1);
    Ok([
        q.y1 * c + q.y2 * s,
        (q.y2 * c - q.y1 * s) / q.r1,
        force * c,
        force * s,
    ])
}

/// Push-forward of a chart velocity `(ṙ1, θ̇, ẏ1, ẏ2)` through `Φ_c`.
pub fn chart_pushforward(q: &PolarState, v: &[f64; 4]) -> State5 {
    let (s, c) = q.theta.sin_cos();
    let [dr, dth, dy1, dy2] = *v;
    State5::new(
        c * dr - q.r1 * s * dth,
        dy1,
        s * dr + q.r1 * c * dth,
        dy2,
        -q.r1 * dr,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "+1" | "1" => Ok(Branch::Plus),
            "-" | "-1" => Ok(Branch::Minus),
            _ => Err(Error::domain(format!("sign must be '+' or '-', got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicParams {
    pub c: f64,
    pub theta0: f64,
    pub sign: Branch,
}

impl HomoclinicParams {
    pub fn new(c: f64, theta0: f64, sign: Branch) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain("homoclinic orbits need a leaf with c > 0"));
        }
        if !theta0.is_finite() {
            return Err(Error::NonFinite("theta0"));
        }
        Ok(HomoclinicParams { c, theta0, sign })
    }

    /// The focus-focus equilibrium the orbit is asymptotic to.
    pub fn equilibrium(&self) -> State5 {
        State5::new(0.0, 0.0, 0.0, 0.0, self.c)
    }
}

fn sech(x: f64) -> f64 {
    // cosh overflows to +inf for |x| > ~710, giving the correct limit 0.
    1.0 / x.cosh()
}

pub fn homoclinic(params: &HomoclinicParams, t: f64) -> State5 {
    let sc = params.c.sqrt();
    let s = sech(sc * t);
    let th = (sc * t).tanh();
    let (sin0, cos0) = params.theta0.sin_cos();
    let pm = params.sign.sign();
    let amp = pm * 2.0 * sc * s;
    let vel = -pm * 2.0 * params.c * s * th;
    State5::new(
        amp * cos0,
        vel * cos0,
        amp * sin0,
        vel * sin0,
        params.c * (1.0 - 2.0 * s * s),
    )
}

/// `d/dt homoclinic(params, t)`, from `sech' = −sech tanh` and `tanh' = sech²`.
pub fn homoclinic_derivative(params: &HomoclinicParams, t: f64) -> State5 {
    let c = params.c;
    let sc = c.sqrt();
    let s = sech(sc * t);
    let th = (sc * t).tanh();
    let (sin0, cos0) = params.theta0.sin_cos();
    let pm = params.sign.sign();
    let dx = -pm * 2.0 * c * s * th;
    let dy = -pm * 2.0 * c * sc * s * (s * s - th * th);
    State5::new(dx * cos0, dy * cos0, dx * sin0, dy * sin0, 4.0 * c * sc * s * s * th)
}

/// `r1`, `ṙ1`, `r̈1` of the radial profile `r1(t) = 2√c sech(√c t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub r1: f64,
    pub r1_dot: f64,
    pub r1_ddot: f64,
}

/// Solution of `r̈1 = r1 (c − ½ r1²)` decaying at both ends.
pub fn second_order_profile(c: f64, t: f64) -> Result<RadialProfile> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain("radial profile needs c > 0"));
    }
    let sc = c.sqrt();
    let s = sech(sc * t);
    let th = (sc * t).tanh();
    Ok(RadialProfile {
        r1: 2.0 * sc * s,
        r1_dot: -2.0 * c * s * th,
        r1_ddot: 2.0 * c * sc * s * (th * th - s * s),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicParams {
    pub x1_0: f64,
    pub y1_0: f64,
    pub x2_0: f64,
}

impl PeriodicParams {
    pub fn new(x1_0: f64, y1_0: f64, x2_0: f64) -> Result<Self> {
        if !(x1_0.is_finite() && y1_0.is_finite() && x2_0.is_finite()) {
            return Err(Error::NonFinite("periodic parameters"));
        }
        if x2_0 == 0.0 || y1_0 == 0.0 {
            return Err(Error::domain("periodic family needs x2⁰ ≠ 0 and y1⁰ ≠ 0"));
        }
        Ok(PeriodicParams { x1_0, y1_0, x2_0 })
    }

    /// Angular frequency `ω = y1⁰ / x2⁰`.
    pub fn omega(&self) -> f64 {
        self.y1_0 / self.x2_0
    }

    /// `2π |x2⁰ / y1⁰|`
    pub fn period(&self) -> f64 {
        TAU / self.omega().abs()
    }

    /// `f1 = (x1⁰)² + (x2⁰)²`
    pub fn f1(&self) -> f64 {
        self.x1_0 * self.x1_0 + self.x2_0 * self.x2_0
    }

    pub fn initial_state(&self) -> State5 {
        periodic_solution(self, 0.0)
    }
}

pub fn periodic_solution(params: &PeriodicParams, t: f64) -> State5 {
    let w = params.omega();
    let (s, c) = (w * t).sin_cos();
    let (a, b) = (params.x1_0, params.x2_0);
    State5::new(
        b * s + a * c,
        -w * (a * s - b * c),
        -a * s + b * c,
        -w * (b * s + a * c),
        -w * w,
    )
}

pub fn periodic_derivative(params: &PeriodicParams, t: f64) -> State5 {
    let w = params.omega();
    let (s, c) = (w * t).sin_cos();
    let (a, b) = (params.x1_0, params.x2_0);
    State5::new(
        w * (b * c - a * s),
        -w * w * (a * c + b * s),
        -w * (a * c + b * s),
        -w * w * (b * c - a * s),
        0.0,
    )
}

/// `(x1, y1, x2)` on `M1`; the same formulas as the first three components of
/// [`periodic_solution`].
pub fn m1_solution(params: &PeriodicParams, t: f64) -> (f64, f64, f64) {
    let p = periodic_solution(params, t);
    (p.x1, p.y1, p.x2)
}

/// Instants `t_k = (x2⁰/y1⁰)(ϑ + kπ)` where the periodic orbit leaves `M1`
/// through `M2` (`x2 = y1 = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PunctureSchedule {
    /// `ϑ ∈ [0, 2π)` with `(cos ϑ, sin ϑ) = (x1⁰, x2⁰) / √f1`.
    pub vartheta: f64,
    /// `x2⁰ / y1⁰`
    pub scale: f64,
}

impl PunctureSchedule {
    pub fn t_k(&self, k: i64) -> f64 {
        self.scale * (self.vartheta + k as f64 * std::f64::consts::PI)
    }

    /// Puncture times in the half-open window `(t0, t1]`, ascending.
    pub fn times_in(&self, t0: f64, t1: f64) -> Vec<f64> {
        let step = self.scale.abs() * std::f64::consts::PI;
        let base = self.t_k(0);
        let k_lo = ((t0 - base) / step).floor() as i64;
        let k_hi = ((t1 - base) / step).ceil() as i64;
        (k_lo..=k_hi)
            .map(|k| base + k as f64 * step)
            .filter(|&t| t > t0 && t <= t1)
            .collect()
    }
}

pub fn puncture_times(params: &PeriodicParams) -> PunctureSchedule {
    PunctureSchedule {
        vartheta: normalize_angle(params.x2_0.atan2(params.x1_0)),
        scale: params.x2_0 / params.y1_0,
    }
}
