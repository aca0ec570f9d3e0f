//! Self-consistent equations of motion driven by the renormalized
//! momentum balance: the 4D third-order system (integrated directly or
//! with reduction of order) and its 6D higher-derivative analogue.
//!
//! 4D: m a = (2/3)e²(ȧ − (a·a)u) + F_ext. The direct method solves ȧ
//! and integrates the third-order system (z, u, a); its runaway
//! solutions grow like exp(τ/τ₀) with τ₀ = (2/3)e²/m and are reported,
//! not suppressed. The reduced method substitutes a ≈ F/m into the
//! self-force term, a = F/m + (2/3)(e²/m)(Ḟ/m − (F·F/m²)u), and
//! integrates a second-order system free of runaways.
//!
//! 6D: the highest derivative is solved linearly from
//! ṗ + radiated rate = F_ext. With e ≠ 0 the a⃛ coefficient (4/5)c is
//! nonzero and the system is fifth order in z; with e = 0 and μ ≠ 0 the
//! μ terms lead, ä = 3(a·ȧ)u + (3/2)(a·a)a + (m a − F)/μ, and the
//! system is fourth order; with both zero it is Newtonian, m a = F.
//! The branch is picked by exact parameter tests, and supplied initial
//! derivatives that a lower-order branch determines itself must agree
//! with the determined values.
//!
//! All relativistic branches renormalize u and project the derivative
//! chain after every accepted step; the pre-projection drift is
//! recorded in the trajectory statistics. Steps use the Dormand–Prince
//! 5(4) pair at fixed step size, with the embedded error estimate kept
//! as a diagnostic. Backward (final-condition) integration is out of
//! scope.

use crate::balance::{momentum_rate_6d_split, ParticleParams};
use crate::fluxlab::radiative_momentum_rate;
use crate::minkowski::{Bivector, Dim, LorentzVector};
use crate::worldline::KinematicState;
use crate::{Error, Result};

/// |a| beyond which a trajectory is truncated and flagged as runaway.
pub const RUNAWAY_ACCEL_BOUND: f64 = 1e6;

/// Largest constraint violation `constraint_project` will repair. States
/// are only guaranteed repairable below 1e-3; the extra slack lets
/// boundary cases (u scaled by 1.001 has |u·u + 1| ≈ 2e-3) repair
/// rather than reject.
pub const PROJECTION_LIMIT: f64 = 1e-2;

/// External force as a pure function of the kinematic state.
#[derive(Debug, Clone)]
pub enum ForceLaw {
    Zero,
    /// Constant covariant force vector.
    Constant(LorentzVector),
    /// Lorentz-force-like linear coupling q G^{μ}{}_{ν} u^ν with a
    /// constant field bivector G; automatically orthogonal to u.
    LinearField { field: Bivector, charge: f64 },
}

impl ForceLaw {
    pub fn value(&self, st: &KinematicState) -> LorentzVector {
        match self {
            ForceLaw::Zero => LorentzVector::zero(st.dim()),
            ForceLaw::Constant(f) => *f,
            ForceLaw::LinearField { field, charge } => field.contract_vector(&st.u) * *charge,
        }
    }

    /// Total τ-derivative along the worldline (chain rule through u̇ = a;
    /// the state must carry the a this requires).
    pub fn tau_derivative(&self, st: &KinematicState) -> LorentzVector {
        match self {
            ForceLaw::Zero | ForceLaw::Constant(_) => LorentzVector::zero(st.dim()),
            ForceLaw::LinearField { field, charge } => field.contract_vector(&st.a) * *charge,
        }
    }

    /// Parse a force specification `kind:key=value,...`:
    /// `zero`; `const:f0=…,f1=…` (components default to 0);
    /// `linear:q=…,b01=…,b12=…` (field bivector entries, row < column).
    pub fn parse(dim: Dim, spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, rest) = match spec.split_once(':') {
            Some((k, r)) => (k.trim(), r.trim()),
            None => (spec, ""),
        };
        let mut params = Vec::new();
        if !rest.is_empty() {
            for item in rest.split(',') {
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad numeric value in `{item}`")))?;
                params.push((key.trim().to_string(), value));
            }
        }
        let axis = |digits: &str, key: &str| -> Result<usize> {
            let i: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad component index in `{key}`")))?;
            if i >= dim.count() {
                return Err(Error::Parse(format!("component {i} out of range in `{key}`")));
            }
            Ok(i)
        };
        match kind {
            "zero" => Ok(ForceLaw::Zero),
            "const" => {
                let mut f = LorentzVector::zero(dim);
                for (key, value) in &params {
                    let digits = key.strip_prefix('f').ok_or_else(|| {
                        Error::Parse(format!("constant force keys look like f<i>, got `{key}`"))
                    })?;
                    f.set(axis(digits, key)?, *value);
                }
                Ok(ForceLaw::Constant(f))
            }
            "linear" => {
                let mut field = Bivector::zero(dim);
                let mut charge = 1.0;
                for (key, value) in &params {
                    if key == "q" {
                        charge = *value;
                    } else if let Some(digits) = key.strip_prefix('b') {
                        if digits.len() != 2 {
                            return Err(Error::Parse(format!(
                                "field keys look like b<i><j>, got `{key}`"
                            )));
                        }
                        let i = axis(&digits[..1], key)?;
                        let j = axis(&digits[1..], key)?;
                        if i >= j {
                            return Err(Error::Parse(format!(
                                "field key `{key}` needs row < column"
                            )));
                        }
                        field.set(i, j, *value);
                    } else {
                        return Err(Error::Parse(format!("unknown linear-force key `{key}`")));
                    }
                }
                Ok(ForceLaw::LinearField { field, charge })
            }
            other => Err(Error::Parse(format!("unknown force kind `{other}`"))),
        }
    }

    /// Specification string that `parse` maps back to this force.
    pub fn spec_string(&self) -> String {
        match self {
            ForceLaw::Zero => "zero".to_string(),
            ForceLaw::Constant(f) => {
                let parts: Vec<String> = (0..f.dim().count())
                    .filter(|&i| f.get(i) != 0.0)
                    .map(|i| format!("f{i}={}", f.get(i)))
                    .collect();
                format!("const:{}", parts.join(","))
            }
            ForceLaw::LinearField { field, charge } => {
                let mut parts = vec![format!("q={charge}")];
                for (i, j) in Bivector::pairs(field.dim()) {
                    if field.get(i, j) != 0.0 {
                        parts.push(format!("b{i}{j}={}", field.get(i, j)));
                    }
                }
                format!("linear:{}", parts.join(","))
            }
        }
    }
}

/// Integration method for the 4D third-order equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method4D {
    /// Integrate the third-order system, solving ȧ from the balance.
    Direct,
    /// Reduction of order: a derived from the force, second-order system.
    Reduced,
}

/// Initial data for the 4D system.
#[derive(Debug, Clone, Copy)]
pub struct MotionState4D {
    pub z: LorentzVector,
    pub u: LorentzVector,
    pub a: LorentzVector,
}

/// Initial data for the 6D fifth-order system.
#[derive(Debug, Clone, Copy)]
pub struct MotionState6D {
    pub z: LorentzVector,
    pub u: LorentzVector,
    pub a: LorentzVector,
    pub a1: LorentzVector,
    pub a2: LorentzVector,
}

/// Integrated trajectory: samples, method metadata, step statistics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub dim: Dim,
    /// Which branch produced the samples ("direct-4d", "reduced-4d",
    /// "full-6d", "rigid-6d", "newtonian-6d").
    pub method: &'static str,
    /// States at step boundaries, τ strictly increasing; derivative
    /// slots a branch does not evolve hold derived values where the
    /// equations determine them and zero otherwise.
    pub samples: Vec<KinematicState>,
    /// Truncated because |a| exceeded `RUNAWAY_ACCEL_BOUND` or a step
    /// left the timelike domain (u no longer normalizable).
    pub runaway: bool,
    /// Accepted steps.
    pub steps: usize,
    /// Worst embedded 5(4) error estimate over all steps.
    pub max_embedded_error: f64,
    /// Worst pre-projection constraint drift over all steps.
    pub max_chain_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &KinematicState {
        self.samples.last().expect("trajectory always holds the initial sample")
    }
}

// Dormand–Prince 5(4) tableau.
const DP_A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_B: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One fixed step of the 5(4) pair: fifth-order update plus the
/// embedded error estimate (max norm of the 5th−4th difference).
fn dp54_step<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, t: f64, y: &[f64], h: f64) -> (Vec<f64>, f64) {
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
    k.push(f(t, y));
    for i in 0..6 {
        let mut yi = y.to_vec();
        for (j, kj) in k.iter().enumerate() {
            let aij = DP_A[i][j];
            if aij != 0.0 {
                for (ys, ks) in yi.iter_mut().zip(kj) {
                    *ys += h * aij * ks;
                }
            }
        }
        k.push(f(t + DP_C[i + 1] * h, &yi));
    }
    let mut y_new = y.to_vec();
    let mut err = 0.0_f64;
    for idx in 0..n {
        let mut db = 0.0;
        let mut de = 0.0;
        for (i, ki) in k.iter().enumerate() {
            db += DP_B[i] * ki[idx];
            de += DP_E[i] * ki[idx];
        }
        y_new[idx] += h * db;
        err = err.max((h * de).abs());
    }
    (y_new, err)
}

fn pack(vectors: &[&LorentzVector]) -> Vec<f64> {
    let d = vectors[0].dim().count();
    let mut y = Vec::with_capacity(vectors.len() * d);
    for v in vectors {
        for i in 0..d {
            y.push(v.get(i));
        }
    }
    y
}

fn unpack(dim: Dim, y: &[f64]) -> Vec<LorentzVector> {
    let d = dim.count();
    y.chunks_exact(d).map(|c| LorentzVector::from_slice(dim, c)).collect()
}

/// Constraint violation of the orthogonality chain up to the given
/// derivative order (1 = a, 2 = ȧ, 3 = ä).
fn chain_violation(st: &KinematicState, order: usize) -> f64 {
    let mut worst = (st.u.dot(&st.u) + 1.0).abs();
    if order >= 1 {
        worst = worst.max(st.u.dot(&st.a).abs());
    }
    if order >= 2 {
        worst = worst.max((st.u.dot(&st.a1) + st.a.dot(&st.a)).abs());
    }
    if order >= 3 {
        worst = worst.max((st.u.dot(&st.a2) + 3.0 * st.a.dot(&st.a1)).abs());
    }
    worst
}

/// Unconditional sequential repair up to `order`; returns the
/// pre-repair violation, or `None` when u is not timelike (no
/// normalization exists).
fn repair_chain(st: &mut KinematicState, order: usize) -> Option<f64> {
    let before = chain_violation(st, order);
    let uu = st.u.dot(&st.u);
    if uu >= 0.0 {
        return None;
    }
    st.u = st.u * (1.0 / (-uu).sqrt());
    if order >= 1 {
        st.a = st.a + st.u * st.u.dot(&st.a);
    }
    if order >= 2 {
        st.a1 = st.a1 + st.u * (st.u.dot(&st.a1) + st.a.dot(&st.a));
    }
    if order >= 3 {
        st.a2 = st.a2 + st.u * (st.u.dot(&st.a2) + 3.0 * st.a.dot(&st.a1));
    }
    Some(before)
}

/// Repair bounded by `PROJECTION_LIMIT`: rejects states too far from
/// the constraint manifold instead of silently moving them.
fn project_chain(st: &mut KinematicState, order: usize) -> Result<f64> {
    let before = chain_violation(st, order);
    if !(before < PROJECTION_LIMIT) {
        return Err(Error::ProjectionFailure { violation: before, limit: PROJECTION_LIMIT });
    }
    repair_chain(st, order)
        .ok_or(Error::ProjectionFailure { violation: before, limit: PROJECTION_LIMIT })
}

/// Project a state onto the constraint manifold: normalize u, then
/// restore u·a = 0, u·ȧ = −a·a, and u·ä = −3 a·ȧ by sequential
/// corrections along u. The identity on compliant states; errors if the
/// violation exceeds `PROJECTION_LIMIT`.
pub fn constraint_project(st: &KinematicState) -> Result<KinematicState> {
    let mut out = *st;
    project_chain(&mut out, 3)?;
    Ok(out)
}

fn check_span(span: (f64, f64), step: f64) -> Result<usize> {
    let (t0, t1) = span;
    if !t0.is_finite() || !t1.is_finite() {
        return Err(Error::Domain(format!("span bounds must be finite, got ({t0}, {t1})")));
    }
    if t1 < t0 {
        return Err(Error::Domain("backward integration is not supported".into()));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Domain(format!("step size must be positive and finite, got {step}")));
    }
    let len = t1 - t0;
    if len == 0.0 {
        return Ok(0);
    }
    if step <= len * 1e-14 {
        return Err(Error::Domain(format!(
            "step size underflow: {step:.3e} over a span of length {len:.3e}"
        )));
    }
    Ok((len / step).ceil() as usize)
}

fn blank_state(dim: Dim, tau: f64) -> KinematicState {
    let z = LorentzVector::zero(dim);
    KinematicState { tau, z, u: z, a: z, a1: z, a2: z, a3: z }
}

/// Shared fixed-step driver: integrate the packed system, project after
/// each step, watch for runaway acceleration, and collect samples.
///
/// `order` is the highest derivative held in the state vector (0 → u
/// only); `finish` derives the remaining quantities for each stored
/// sample.
fn drive<F, G>(
    dim: Dim,
    method: &'static str,
    y0: Vec<f64>,
    span: (f64, f64),
    step: f64,
    n_steps: usize,
    order: usize,
    rhs: F,
    finish: G,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
    G: Fn(&mut KinematicState),
{
    let unpack_state = |t: f64, y: &[f64]| -> KinematicState {
        let vs = unpack(dim, y);
        let mut st = blank_state(dim, t);
        st.z = vs[0];
        st.u = vs[1];
        if order >= 1 {
            st.a = vs[2];
        }
        if order >= 2 {
            st.a1 = vs[3];
        }
        if order >= 3 {
            st.a2 = vs[4];
        }
        st
    };
    let mut traj = Trajectory {
        dim,
        method,
        samples: Vec::with_capacity(n_steps + 1),
        runaway: false,
        steps: 0,
        max_embedded_error: 0.0,
        max_chain_drift: 0.0,
    };
    let mut first = unpack_state(span.0, &y0);
    finish(&mut first);
    traj.samples.push(first);
    let mut t = span.0;
    let mut y = y0;
    for i in 0..n_steps {
        let t_next = if i + 1 == n_steps { span.1 } else { span.0 + (i as f64 + 1.0) * step };
        let h = t_next - t;
        let (y_new, err) = dp54_step(&rhs, t, &y, h);
        t = t_next;
        y = y_new;
        traj.max_embedded_error = traj.max_embedded_error.max(err);
        let mut st = unpack_state(t, &y);
        if method != "newtonian-6d" {
            // unconditional repair: forces that are not orthogonal to u
            // legitimately push the state off shell, and the recorded
            // drift is the report of that discrepancy
            let Some(drift) = repair_chain(&mut st, order) else {
                // u no longer timelike: the step destroyed the state
                traj.runaway = true;
                break;
            };
            traj.max_chain_drift = traj.max_chain_drift.max(drift);
            // write the projected values back so drift cannot accumulate
            let d = dim.count();
            for idx in 0..d {
                y[d + idx] = st.u.get(idx);
                if order >= 1 {
                    y[2 * d + idx] = st.a.get(idx);
                }
                if order >= 2 {
                    y[3 * d + idx] = st.a1.get(idx);
                }
                if order >= 3 {
                    y[4 * d + idx] = st.a2.get(idx);
                }
            }
        }
        finish(&mut st);
        traj.steps += 1;
        if st.a.euclid_norm() > RUNAWAY_ACCEL_BOUND {
            traj.runaway = true;
            break;
        }
        traj.samples.push(st);
    }
    Ok(traj)
}

/// Acceleration of the reduced-order 4D equation:
/// a = F/m + (2/3)(e²/m)(Ḟ/m − (F·F/m²)u), with Ḟ evaluated on the
/// zeroth-order substitution a → F/m.
fn reduced_accel(st0: &KinematicState, prm: &ParticleParams, f_ext: &ForceLaw) -> LorentzVector {
    let f = f_ext.value(st0);
    let mut st = *st0;
    st.a = f * (1.0 / prm.m);
    let fdot = f_ext.tau_derivative(&st);
    st.a
        + (fdot * (1.0 / prm.m) - st0.u * (f.dot(&f) / (prm.m * prm.m)))
            * (2.0 / 3.0 * prm.e * prm.e / prm.m)
}

/// Integrate the 4D radiation-reaction equation
/// m a = (2/3)e²(ȧ − (a·a)u) + F_ext over `span` at fixed `step`.
///
/// `Direct` integrates (z, u, a) with ȧ = (m a − F)/((2/3)e²) + (a·a)u
/// and can run away; `Reduced` integrates (z, u) with the derived
/// acceleration (the supplied initial a is then ignored). The reduced
/// acceleration is stored unprojected in the samples, so with forces
/// that are not orthogonal to u the recorded u·a reflects exactly the
/// balance discrepancy of the input force.
pub fn evolve_4d(
    init: &MotionState4D,
    prm: &ParticleParams,
    f_ext: &ForceLaw,
    span: (f64, f64),
    step: f64,
    method: Method4D,
) -> Result<Trajectory> {
    let dim = Dim::Four;
    assert_eq!(init.z.dim(), dim, "evolve_4d needs 4D initial data");
    let n_steps = check_span(span, step)?;
    let m = prm.m;
    match method {
        Method4D::Direct => {
            if prm.e == 0.0 {
                return Err(Error::DegenerateSystem(
                    "the direct third-order equation has leading coefficient (2/3)e²; \
                     with e = 0 use the reduced method"
                        .into(),
                ));
            }
            let tau0 = 2.0 / 3.0 * prm.e * prm.e / m;
            let mut st0 = blank_state(dim, span.0);
            st0.z = init.z;
            st0.u = init.u;
            st0.a = init.a;
            project_chain(&mut st0, 1)?;
            let y0 = pack(&[&st0.z, &st0.u, &st0.a]);
            let solve_a_dot = {
                let f_ext = f_ext.clone();
                move |st: &KinematicState| -> LorentzVector {
                    let f = f_ext.value(st);
                    (st.a * m - f) * (1.0 / (tau0 * m)) + st.u * st.a.dot(&st.a)
                }
            };
            let solve_fin = solve_a_dot.clone();
            let rhs = move |t: f64, y: &[f64]| {
                let vs = unpack(dim, y);
                let mut st = blank_state(dim, t);
                st.z = vs[0];
                st.u = vs[1];
                st.a = vs[2];
                let a_dot = solve_a_dot(&st);
                pack(&[&st.u, &st.a, &a_dot])
            };
            let finish = move |st: &mut KinematicState| {
                let base = *st;
                st.a1 = solve_fin(&base);
            };
            drive(dim, "direct-4d", y0, span, step, n_steps, 1, rhs, finish)
        }
        Method4D::Reduced => {
            let mut st0 = blank_state(dim, span.0);
            st0.z = init.z;
            st0.u = init.u;
            project_chain(&mut st0, 0)?;
            let y0 = pack(&[&st0.z, &st0.u]);
            let prm = *prm;
            let f_rhs = f_ext.clone();
            let rhs = move |t: f64, y: &[f64]| {
                let vs = unpack(dim, y);
                let mut st = blank_state(dim, t);
                st.z = vs[0];
                st.u = vs[1];
                let a = reduced_accel(&st, &prm, &f_rhs);
                pack(&[&st.u, &a])
            };
            let f_fin = f_ext.clone();
            let finish = move |st: &mut KinematicState| {
                let base = *st;
                st.a = reduced_accel(&base, &prm, &f_fin);
            };
            drive(dim, "reduced-4d", y0, span, step, n_steps, 0, rhs, finish)
        }
    }
}

/// ä determined by the fourth-order branch (e = 0, μ ≠ 0):
/// ä = 3(a·ȧ)u + (3/2)(a·a)a + (m a − F)/μ.
fn rigid_a2(st: &KinematicState, prm: &ParticleParams, force: &LorentzVector) -> LorentzVector {
    st.u * (3.0 * st.a.dot(&st.a1))
        + st.a * (1.5 * st.a.dot(&st.a))
        + (st.a * prm.m - *force) * (1.0 / prm.mu)
}

/// Integrate the 6D balance-driven equation of motion, solving the
/// highest derivative from ṗ + radiated rate = F_ext.
///
/// Branches picked by exact parameter tests: e ≠ 0 → fifth-order system
/// (a⃛ solved, stored in the samples); e = 0, μ ≠ 0 → fourth-order
/// (ä solved); e = μ = 0 → Newtonian m a = F with no constraint
/// projection, matching a plain second-order integrator. Initial
/// derivatives that a lower-order branch determines must agree with the
/// determined values, otherwise the system is degenerate.
pub fn evolve_6d(
    init: &MotionState6D,
    prm: &ParticleParams,
    f_ext: &ForceLaw,
    span: (f64, f64),
    step: f64,
) -> Result<Trajectory> {
    let dim = Dim::Six;
    assert_eq!(init.z.dim(), dim, "evolve_6d needs 6D initial data");
    let n_steps = check_span(span, step)?;
    let mut st0 = blank_state(dim, span.0);
    st0.z = init.z;
    st0.u = init.u;
    st0.a = init.a;
    st0.a1 = init.a1;
    st0.a2 = init.a2;
    let prm = *prm;
    if prm.e != 0.0 {
        project_chain(&mut st0, 3)?;
        let y0 = pack(&[&st0.z, &st0.u, &st0.a, &st0.a1, &st0.a2]);
        let f_rhs = f_ext.clone();
        let solve_a3 = move |st: &KinematicState| -> LorentzVector {
            let f = f_rhs.value(st);
            let rate = radiative_momentum_rate(st, prm.e);
            let (rest, coeff) = momentum_rate_6d_split(st, &prm);
            (f - rate - rest) * (1.0 / coeff)
        };
        let solve_fin = solve_a3.clone();
        let rhs = move |t: f64, y: &[f64]| {
            let vs = unpack(dim, y);
            let mut st = blank_state(dim, t);
            st.z = vs[0];
            st.u = vs[1];
            st.a = vs[2];
            st.a1 = vs[3];
            st.a2 = vs[4];
            let a3 = solve_a3(&st);
            pack(&[&st.u, &st.a, &st.a1, &st.a2, &a3])
        };
        let finish = move |st: &mut KinematicState| {
            st.a3 = solve_fin(st);
        };
        drive(dim, "full-6d", y0, span, step, n_steps, 3, rhs, finish)
    } else if prm.mu != 0.0 {
        project_chain(&mut st0, 2)?;
        let implied = rigid_a2(&st0, &prm, &f_ext.value(&st0));
        let scale = implied.max_abs().max(st0.a2.max_abs()).max(1.0);
        if (st0.a2 - implied).max_abs() > 1e-6 * scale {
            return Err(Error::DegenerateSystem(format!(
                "with e = 0 the system is fourth order and determines ä itself; \
                 the supplied ä differs from the determined value by {:.3e}",
                (st0.a2 - implied).max_abs()
            )));
        }
        let y0 = pack(&[&st0.z, &st0.u, &st0.a, &st0.a1]);
        let f_rhs = f_ext.clone();
        let rhs = move |t: f64, y: &[f64]| {
            let vs = unpack(dim, y);
            let mut st = blank_state(dim, t);
            st.z = vs[0];
            st.u = vs[1];
            st.a = vs[2];
            st.a1 = vs[3];
            let a2 = rigid_a2(&st, &prm, &f_rhs.value(&st));
            pack(&[&st.u, &st.a, &st.a1, &a2])
        };
        let f_fin = f_ext.clone();
        let finish = move |st: &mut KinematicState| {
            let base = *st;
            st.a2 = rigid_a2(&base, &prm, &f_fin.value(&base));
        };
        drive(dim, "rigid-6d", y0, span, step, n_steps, 2, rhs, finish)
    } else {
        let f0 = f_ext.value(&st0) * (1.0 / prm.m);
        let scale = f0.max_abs().max(st0.a.max_abs()).max(1.0);
        if (st0.a - f0).max_abs() > 1e-6 * scale {
            return Err(Error::DegenerateSystem(format!(
                "with e = μ = 0 the motion is Newtonian and determines a = F/m; \
                 the supplied a differs by {:.3e}",
                (st0.a - f0).max_abs()
            )));
        }
        let y0 = pack(&[&st0.z, &st0.u]);
        let f_rhs = f_ext.clone();
        let rhs = move |t: f64, y: &[f64]| {
            let vs = unpack(dim, y);
            let mut st = blank_state(dim, t);
            st.z = vs[0];
            st.u = vs[1];
            let a = f_rhs.value(&st) * (1.0 / prm.m);
            pack(&[&st.u, &a])
        };
        let f_fin = f_ext.clone();
        let finish = move |st: &mut KinematicState| {
            let base = *st;
            st.a = f_fin.value(&base) * (1.0 / prm.m);
        };
        drive(dim, "newtonian-6d", y0, span, step, n_steps, 0, rhs, finish)
    }
}
