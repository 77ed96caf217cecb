//! Numerical integration of `ẋ = x·x` and checks of qualitative claims about
//! its trajectories: equilibria, ray solutions, planarity and invariant sets.

use std::io::{self, Write};

use thiserror::Error;

use crate::algebra::is_idempotent_element;
use crate::linalg::{sup_norm, vec_to_f64, Vector3};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{multiply, StructureTensor};

/// States with `‖x‖∞` above this value stop the integration.
pub const BLOW_UP_THRESHOLD: f64 = 1e9;

/// Derivative magnitudes below this are treated as an equilibrium by the
/// curve statistics.
const STATIONARY_SPEED: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("initial state or parameters are not finite")]
    NonFinite,
    #[error("step {dt} and end time {t_end} must both be positive")]
    InvalidStep { dt: f64, t_end: f64 },
    #[error("horizon fraction {0} must lie strictly between 0 and 1")]
    InvalidHorizon(f64),
    #[error("ray scale must be nonzero")]
    ZeroScale,
    #[error("element is not an idempotent")]
    NotIdempotent,
    #[error("sample count must be positive")]
    NoSamples,
}

/// How a trajectory ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// The next state would have exceeded [`BLOW_UP_THRESHOLD`] or become
    /// non-finite; the record stops at the last admissible state.
    BlowUpApproached,
}

/// A fixed-step trajectory. `times[i]` and `states[i]` pair up, and
/// `diagnostics[i]` is the RK4 stage spread `dt·‖k₁ − k₄‖∞` of the step
/// ending at index `i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    pub step: f64,
    pub diagnostics: Vec<f64>,
    pub termination: Termination,
}

impl TrajectoryRecord {
    pub fn final_state(&self) -> [f64; 3] {
        *self.states.last().expect("trajectory holds the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial time")
    }

    pub fn blew_up(&self) -> bool {
        self.termination == Termination::BlowUpApproached
    }

    /// Writes one `time,x1,x2,x3` line per state after a header line.
    pub fn write_delimited<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,x1,x2,x3")?;
        for (t, x) in self.times.iter().zip(&self.states) {
            writeln!(out, "{t},{},{},{}", x[0], x[1], x[2])?;
        }
        Ok(())
    }
}

fn field(t: &StructureTensor<f64>, x: &[f64; 3]) -> [f64; 3] {
    multiply(t, x, x)
}

fn axpy(x: &[f64; 3], c: f64, k: &[f64; 3]) -> [f64; 3] {
    [x[0] + c * k[0], x[1] + c * k[1], x[2] + c * k[2]]
}

fn rk4_step(t: &StructureTensor<f64>, x: &[f64; 3], h: f64) -> ([f64; 3], f64) {
    let k1 = field(t, x);
    let k2 = field(t, &axpy(x, h / 2.0, &k1));
    let k3 = field(t, &axpy(x, h / 2.0, &k2));
    let k4 = field(t, &axpy(x, h, &k3));
    let next = std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    let spread = h * sup_norm(&std::array::from_fn(|i| k1[i] - k4[i]));
    (next, spread)
}

/// Classical RK4 from `x0` over `[0, t_end]`. The step is `dt` throughout,
/// except that the last step is shortened to land on `t_end` exactly.
pub fn integrate<S: Scalar>(
    t: &StructureTensor<S>,
    x0: [f64; 3],
    t_end: f64,
    dt: f64,
) -> Result<TrajectoryRecord, DynamicsError> {
    if !(x0.iter().all(|v| v.is_finite()) && t_end.is_finite() && dt.is_finite()) {
        return Err(DynamicsError::NonFinite);
    }
    if dt <= 0.0 || t_end <= 0.0 {
        return Err(DynamicsError::InvalidStep { dt, t_end });
    }
    let tf = t.to_f64();
    let full_steps = (t_end / dt).floor() as usize;
    let remainder = t_end - full_steps as f64 * dt;
    let mut steps: Vec<f64> = vec![dt; full_steps];
    if remainder > dt * 1e-9 {
        steps.push(remainder);
    }

    let mut rec = TrajectoryRecord {
        times: Vec::with_capacity(steps.len() + 1),
        states: Vec::with_capacity(steps.len() + 1),
        step: dt,
        diagnostics: Vec::with_capacity(steps.len()),
        termination: Termination::Completed,
    };
    rec.times.push(0.0);
    rec.states.push(x0);
    let mut x = x0;
    for (i, h) in steps.iter().enumerate() {
        let (next, spread) = rk4_step(&tf, &x, *h);
        if !next.iter().all(|v| v.is_finite()) || sup_norm(&next) > BLOW_UP_THRESHOLD {
            rec.termination = Termination::BlowUpApproached;
            break;
        }
        x = next;
        let time = if i + 1 == steps.len() { t_end } else { (i + 1) as f64 * dt };
        rec.times.push(time);
        rec.states.push(x);
        rec.diagnostics.push(spread);
    }
    Ok(rec)
}

/// `‖u·u‖∞`, which vanishes exactly at the equilibria of `ẋ = x·x`.
pub fn check_equilibrium<S: Scalar>(t: &StructureTensor<S>, u: &Vector3<S>) -> f64 {
    sup_norm(&vec_to_f64(&multiply(t, u, u)))
}

/// Integrates from `c0·u` for an idempotent `u` and returns the largest
/// relative deviation from the closed form `x(t) = c0/(1 − c0·t)·u`.
///
/// The horizon is `horizon_fraction/|c0|`: for `c0 > 0` that is the given
/// fraction of the blow-up time, for `c0 < 0` the solution decays instead.
pub fn check_ray_solution(
    t: &StructureTensor<Rational>,
    u: &Vector3<Rational>,
    c0: f64,
    horizon_fraction: f64,
    dt: f64,
) -> Result<f64, DynamicsError> {
    if !is_idempotent_element(t, u) {
        return Err(DynamicsError::NotIdempotent);
    }
    if !c0.is_finite() {
        return Err(DynamicsError::NonFinite);
    }
    if c0 == 0.0 {
        return Err(DynamicsError::ZeroScale);
    }
    if !(horizon_fraction > 0.0 && horizon_fraction < 1.0) {
        return Err(DynamicsError::InvalidHorizon(horizon_fraction));
    }
    let uf = vec_to_f64(u);
    let x0 = uf.map(|v| c0 * v);
    let rec = integrate(t, x0, horizon_fraction / c0.abs(), dt)?;
    let mut worst = 0.0_f64;
    for (time, x) in rec.times.iter().zip(&rec.states) {
        let c = c0 / (1.0 - c0 * time);
        let exact = uf.map(|v| c * v);
        let err = sup_norm(&std::array::from_fn(|i| x[i] - exact[i])) / sup_norm(&exact);
        worst = worst.max(err);
    }
    Ok(worst)
}

/// A set claimed to be invariant under the flow.
#[derive(Clone, Debug, PartialEq)]
pub enum InvariantSetSpec {
    /// All of space.
    Whole,
    /// The plane `normal·x = 0`.
    Plane { normal: [f64; 3] },
    /// The line through the origin spanned by `direction`.
    Line { direction: [f64; 3] },
    /// The span of the given vectors.
    Subspace { basis: Vec<[f64; 3]> },
    /// The quadric cone `xᵀ·form·x = 0` for a symmetric `form`.
    Cone { form: [[f64; 3]; 3] },
}

impl InvariantSetSpec {
    /// The cone `2x¹x² + c·(x³)² = 0`.
    pub fn cone_12_33(c: f64) -> Self {
        InvariantSetSpec::Cone { form: [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, c]] }
    }

    /// Scale-free defect of `x`: zero on the set, otherwise the distance to
    /// the set (or the normalized form value for a cone) divided by
    /// `max(1, ‖x‖)`.
    pub fn defect(&self, x: &[f64; 3]) -> f64 {
        let scale = norm2(x).max(1.0);
        match self {
            InvariantSetSpec::Whole => 0.0,
            InvariantSetSpec::Plane { normal } => dot(normal, x).abs() / norm2(normal) / scale,
            InvariantSetSpec::Line { direction } => residual_from_span(&[*direction], x) / scale,
            InvariantSetSpec::Subspace { basis } => residual_from_span(basis, x) / scale,
            InvariantSetSpec::Cone { form } => {
                let q = quadratic_form(form, x);
                let fnorm = form.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
                q.abs() / fnorm / scale.powi(2)
            }
        }
    }

    pub fn contains(&self, x: &[f64; 3], tol: f64) -> bool {
        self.defect(x) <= tol
    }

    /// Deterministic points of the set inside the unit box.
    pub fn seeds(&self, count: usize) -> Vec<[f64; 3]> {
        let raw = box_points(count.max(1) * 4);
        match self {
            InvariantSetSpec::Whole => raw.into_iter().take(count).collect(),
            InvariantSetSpec::Plane { normal } => {
                let n2 = dot(normal, normal);
                raw.iter()
                    .map(|p| {
                        let c = dot(normal, p) / n2;
                        std::array::from_fn(|i| p[i] - c * normal[i])
                    })
                    .filter(|p: &[f64; 3]| norm2(p) > 1e-6)
                    .take(count)
                    .collect()
            }
            InvariantSetSpec::Line { direction } => span_points(&[*direction], &raw, count),
            InvariantSetSpec::Subspace { basis } => span_points(basis, &raw, count),
            InvariantSetSpec::Cone { form } => cone_points(form, &raw, count),
        }
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm2(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn quadratic_form(form: &[[f64; 3]; 3], x: &[f64; 3]) -> f64 {
    (0..3).map(|i| (0..3).map(|j| form[i][j] * x[i] * x[j]).sum::<f64>()).sum()
}

fn orthonormalize(basis: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::new();
    for v in basis {
        let mut w = *v;
        for q in &out {
            let c = dot(q, &w);
            w = std::array::from_fn(|i| w[i] - c * q[i]);
        }
        let n = norm2(&w);
        if n > 1e-12 {
            out.push(w.map(|x| x / n));
        }
    }
    out
}

fn residual_from_span(basis: &[[f64; 3]], x: &[f64; 3]) -> f64 {
    let mut r = *x;
    for q in orthonormalize(basis) {
        let c = dot(&q, &r);
        r = std::array::from_fn(|i| r[i] - c * q[i]);
    }
    norm2(&r)
}

/// Low-discrepancy points in `[-1, 1]³` from the additive recurrence with
/// the plastic-number constants.
fn box_points(count: usize) -> Vec<[f64; 3]> {
    const ALPHA: [f64; 3] = [0.819_172_513_396_164_4, 0.671_043_606_703_789_2, 0.549_700_477_901_970_3];
    (1..=count)
        .map(|k| std::array::from_fn(|i| 2.0 * (0.5 + ALPHA[i] * k as f64).fract() - 1.0))
        .collect()
}

fn span_points(basis: &[[f64; 3]], raw: &[[f64; 3]], count: usize) -> Vec<[f64; 3]> {
    let q = orthonormalize(basis);
    if q.is_empty() {
        return Vec::new();
    }
    raw.iter()
        .map(|p| {
            let mut out = [0.0; 3];
            for (k, v) in q.iter().enumerate() {
                let c = p[k];
                out = axpy(&out, c, v);
            }
            out
        })
        .filter(|p| norm2(p) > 1e-6)
        .take(count)
        .collect()
}

/// Points on the cone from intersecting lines `p + s·w` with it, `w` fixed.
fn cone_points(form: &[[f64; 3]; 3], raw: &[[f64; 3]], count: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for w in [[0.3, -0.7, 1.0], [1.0, 0.2, -0.4], [-0.5, 1.0, 0.6]] {
        for p in raw {
            let (a, b, c) = (
                quadratic_form(form, &w),
                2.0 * (0..3).map(|i| (0..3).map(|j| form[i][j] * p[i] * w[j]).sum::<f64>()).sum::<f64>(),
                quadratic_form(form, p),
            );
            let s = if a.abs() < 1e-12 {
                if b.abs() < 1e-12 {
                    continue;
                }
                -c / b
            } else {
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 {
                    continue;
                }
                (-b + disc.sqrt()) / (2.0 * a)
            };
            let x = axpy(p, s, &w);
            let n = norm2(&x);
            if n > 1e-6 && n < 3.0 {
                out.push(x);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    out
}

/// Integrates from `samples` seeds on `s` over `[0, t_end]` and returns the
/// largest [`InvariantSetSpec::defect`] seen along any trajectory.
pub fn check_invariant_set<S: Scalar>(
    t: &StructureTensor<S>,
    s: &InvariantSetSpec,
    samples: usize,
    t_end: f64,
    dt: f64,
) -> Result<f64, DynamicsError> {
    if samples == 0 {
        return Err(DynamicsError::NoSamples);
    }
    let tf = t.to_f64();
    let seeds = s.seeds(samples);
    let results: Vec<Result<f64, DynamicsError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|seed| {
                let tf = &tf;
                scope.spawn(move || {
                    let rec = integrate(tf, *seed, t_end, dt)?;
                    Ok(rec.states.iter().map(|x| s.defect(x)).fold(0.0_f64, f64::max))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("integration thread panicked")).collect()
    });
    results.into_iter().try_fold(0.0_f64, |m, r| Ok(m.max(r?)))
}

/// `(ẋ, ẍ, x⃛)` at `x` for the flow `ẋ = x·x`.
pub fn flow_derivatives(t: &StructureTensor<f64>, x: &[f64; 3]) -> [[f64; 3]; 3] {
    let d1 = multiply(t, x, x);
    let d2 = multiply(t, x, &d1).map(|v| 2.0 * v);
    let a = multiply(t, &d1, &d1);
    let b = multiply(t, x, &d2);
    let d3 = std::array::from_fn(|i| 2.0 * a[i] + 2.0 * b[i]);
    [d1, d2, d3]
}

/// Largest `|det[ẋ, ẍ, x⃛]| / ‖ẋ‖³` along the trajectory from `x0`; zero
/// for planar curves. Points where `ẋ` vanishes are skipped.
pub fn planarity_statistic<S: Scalar>(
    t: &StructureTensor<S>,
    x0: [f64; 3],
    t_end: f64,
    dt: f64,
) -> Result<f64, DynamicsError> {
    let tf = t.to_f64();
    let rec = integrate(&tf, x0, t_end, dt)?;
    let mut worst = 0.0_f64;
    for x in &rec.states {
        let [d1, d2, d3] = flow_derivatives(&tf, x);
        let speed = norm2(&d1);
        if speed < STATIONARY_SPEED {
            continue;
        }
        worst = worst.max(dot(&cross(&d1, &d2), &d3).abs() / speed.powi(3));
    }
    Ok(worst)
}

/// Largest `‖ẋ × ẍ‖ / (‖ẋ‖·‖ẍ‖)` along the trajectory from `x0`; zero for
/// trajectories on straight lines.
pub fn collinearity_statistic<S: Scalar>(
    t: &StructureTensor<S>,
    x0: [f64; 3],
    t_end: f64,
    dt: f64,
) -> Result<f64, DynamicsError> {
    let tf = t.to_f64();
    let rec = integrate(&tf, x0, t_end, dt)?;
    let mut worst = 0.0_f64;
    for x in &rec.states {
        let [d1, d2, _] = flow_derivatives(&tf, x);
        let (n1, n2) = (norm2(&d1), norm2(&d2));
        if n1 < STATIONARY_SPEED || n2 < STATIONARY_SPEED {
            continue;
        }
        worst = worst.max(norm2(&cross(&d1, &d2)) / (n1 * n2));
    }
    Ok(worst)
}
