//! Analytic worldline catalog and retarded-frame kinematics.
//!
//! Worldlines are parametrized by proper time τ and provide closed-form
//! derivatives up to a⃛ (fifth τ-derivative of the position): the 6D
//! balance residuals and equation of motion need derivatives to that
//! order, and finite differences alone would lose too much precision.
//!
//! The retarded-time solver finds the unique intersection of the past
//! light cone of a field point with the worldline. For a timelike
//! worldline the light-cone function g(τ) = (y⁰ − z⁰(τ)) − |y⃗ − z⃗(τ)|
//! is strictly decreasing (g′ = −u⁰ + ê·u⃗ < 0), so bracketing by
//! geometric expansion is safe; bisection brings the bracket down and a
//! Newton polish on the squared interval delivers the final residual.

use crate::error::{Error, Result};
use crate::minkowski::{Dim, LorentzVector};

/// Highest proper-time derivative order the catalog supports
/// (0 = z, 1 = u, 2 = a, 3 = ȧ, 4 = ä, 5 = a⃛).
pub const MAX_ORDER: usize = 5;

/// A worldline point with derivatives: position z, velocity u,
/// acceleration a, and the first/second/third derivatives of the
/// acceleration (a1 = ȧ, a2 = ä, a3 = a⃛).
#[derive(Debug, Clone, Copy)]
pub struct KinematicState {
    pub tau: f64,
    pub z: LorentzVector,
    pub u: LorentzVector,
    pub a: LorentzVector,
    pub a1: LorentzVector,
    pub a2: LorentzVector,
    pub a3: LorentzVector,
}

impl KinematicState {
    pub fn dim(&self) -> Dim {
        self.z.dim()
    }

    /// Worst violation of the orthogonality chain
    /// u·u = −1, u·a = 0, u·ȧ = −a·a, u·ä = −3 a·ȧ.
    pub fn chain_residual(&self) -> f64 {
        let r1 = (self.u.dot(&self.u) + 1.0).abs();
        let r2 = self.u.dot(&self.a).abs();
        let r3 = (self.u.dot(&self.a1) + self.a.dot(&self.a)).abs();
        let r4 = (self.u.dot(&self.a2) + 3.0 * self.a.dot(&self.a1)).abs();
        r1.max(r2).max(r3).max(r4)
    }
}

/// Retarded frame of a field point y: the retarded state, the retarded
/// distance r = −(y−z)·u, the null direction k = (y−z)/r with k·u = −1,
/// and the acceleration projection a_k = a·k.
#[derive(Debug, Clone, Copy)]
pub struct RetardedFrame {
    pub state: KinematicState,
    pub r: f64,
    pub k: LorentzVector,
    pub a_k: f64,
}

impl RetardedFrame {
    pub fn tau_ret(&self) -> f64 {
        self.state.tau
    }
}

/// Catalog members. Circular motion lives in the (x¹, x²) plane; extra
/// spatial axes in 6D stay zero.
#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// Charge at rest at the spatial origin: z = (τ, 0, …, 0).
    Rest,
    /// Uniform proper acceleration g along x¹:
    /// z = (sinh(gτ)/g, cosh(gτ)/g, 0, …), so a·a = g² for all τ.
    Hyperbolic { g: f64 },
    /// Circular motion with lab angular velocity ω and orbit radius
    /// radius; speed v = ω·radius must stay below 1.
    Circular { omega: f64, radius: f64 },
    /// Raw polynomial path z^μ(τ) = Σ_k c_k^μ τ^k for oracle tests of the
    /// differentiation and retardation logic. The path is not normalized
    /// to proper time unless the coefficients make it so.
    Polynomial { coeffs: Vec<LorentzVector> },
}

/// A member of the analytic worldline catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct Worldline {
    dim: Dim,
    kind: Kind,
}

impl Worldline {
    /// Charge at rest at the spatial origin.
    pub fn rest(dim: Dim) -> Self {
        Self { dim, kind: Kind::Rest }
    }

    /// Uniformly accelerated (hyperbolic) worldline with proper
    /// acceleration g > 0 along x¹.
    pub fn hyperbolic(dim: Dim, g: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Domain(format!("hyperbolic worldline needs g > 0, got {g}")));
        }
        Ok(Self { dim, kind: Kind::Hyperbolic { g } })
    }

    /// Circular worldline with lab angular velocity omega and radius;
    /// requires |omega·radius| < 1.
    pub fn circular(dim: Dim, omega: f64, radius: f64) -> Result<Self> {
        let v = (omega * radius).abs();
        if !(v < 1.0) || !v.is_finite() {
            return Err(Error::Domain(format!(
                "circular worldline needs |omega*R| < 1, got {v}"
            )));
        }
        Ok(Self { dim, kind: Kind::Circular { omega, radius } })
    }

    /// Raw polynomial test path from position coefficients c_k (τ^k term).
    pub fn polynomial(dim: Dim, coeffs: Vec<LorentzVector>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("polynomial worldline needs at least one coefficient".into()));
        }
        for c in &coeffs {
            if c.dim() != dim {
                return Err(Error::Domain("polynomial coefficient dimension mismatch".into()));
            }
        }
        Ok(Self { dim, kind: Kind::Polynomial { coeffs } })
    }

    /// Parse a worldline specification string `kind:key=value,...`:
    /// `rest`, `hyperbolic:g=0.5`, `circular:omega=1.0,R=0.3`, or
    /// `polynomial-test:c1_0=1.0,c2_1=0.05,...` with keys `c<order>_<axis>`.
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
        let lookup = |name: &str| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| k == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("worldline `{kind}` needs parameter `{name}`")))
        };
        match kind {
            "rest" => Ok(Self::rest(dim)),
            "hyperbolic" => Self::hyperbolic(dim, lookup("g")?),
            "circular" => Self::circular(dim, lookup("omega")?, lookup("R")?),
            "polynomial-test" => {
                let mut coeffs: Vec<LorentzVector> = Vec::new();
                for (key, value) in &params {
                    let body = key
                        .strip_prefix('c')
                        .ok_or_else(|| Error::Parse(format!("bad polynomial key `{key}`")))?;
                    let (ord, axis) = body
                        .split_once('_')
                        .ok_or_else(|| Error::Parse(format!("bad polynomial key `{key}` (want c<order>_<axis>)")))?;
                    let ord: usize = ord
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad polynomial order in `{key}`")))?;
                    let axis: usize = axis
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad polynomial axis in `{key}`")))?;
                    if axis >= dim.count() {
                        return Err(Error::Parse(format!("polynomial axis {axis} out of range for D={dim}")));
                    }
                    if ord >= coeffs.len() {
                        coeffs.resize(ord + 1, LorentzVector::zero(dim));
                    }
                    coeffs[ord].set(axis, *value);
                }
                Self::polynomial(dim, coeffs)
            }
            other => Err(Error::Parse(format!("unknown worldline kind `{other}`"))),
        }
    }

    /// Canonical specification string that [`Worldline::parse`] round-trips.
    pub fn spec_string(&self) -> String {
        match &self.kind {
            Kind::Rest => "rest".to_string(),
            Kind::Hyperbolic { g } => format!("hyperbolic:g={g}"),
            Kind::Circular { omega, radius } => format!("circular:omega={omega},R={radius}"),
            Kind::Polynomial { coeffs } => {
                let mut parts = Vec::new();
                for (ord, c) in coeffs.iter().enumerate() {
                    for axis in 0..self.dim.count() {
                        if c.get(axis) != 0.0 {
                            parts.push(format!("c{ord}_{axis}={}", c.get(axis)));
                        }
                    }
                }
                format!("polynomial-test:{}", parts.join(","))
            }
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Kinematic state with closed-form derivatives up to the requested
    /// order (all orders are cheap, so every field is always populated;
    /// `order` only gates the supported-range contract, order ≤ 5).
    pub fn state(&self, tau: f64, order: usize) -> Result<KinematicState> {
        if order > MAX_ORDER {
            return Err(Error::Domain(format!(
                "derivative order {order} beyond supported maximum {MAX_ORDER}"
            )));
        }
        Ok(self.state_full(tau))
    }

    /// Kinematic state with all derivatives populated.
    pub fn state_full(&self, tau: f64) -> KinematicState {
        let dim = self.dim;
        let zero = LorentzVector::zero(dim);
        match &self.kind {
            Kind::Rest => {
                let mut z = zero;
                z.set(0, tau);
                KinematicState { tau, z, u: LorentzVector::basis(dim, 0), a: zero, a1: zero, a2: zero, a3: zero }
            }
            Kind::Hyperbolic { g } => {
                let (sh, ch) = ((g * tau).sinh(), (g * tau).cosh());
                let mk = |t: f64, x: f64| {
                    let mut v = zero;
                    v.set(0, t);
                    v.set(1, x);
                    v
                };
                let u = mk(ch, sh);
                let a = mk(g * sh, g * ch);
                KinematicState {
                    tau,
                    z: mk(sh / g, ch / g),
                    u,
                    a,
                    a1: u * (g * g),
                    a2: a * (g * g),
                    a3: u * (g * g * g * g),
                }
            }
            Kind::Circular { omega, radius } => {
                let v = omega * radius;
                let gamma = 1.0 / (1.0 - v * v).sqrt();
                let cap = omega * gamma; // proper-time angular frequency
                let phi = cap * tau;
                let (s, c) = phi.sin_cos();
                let mk = |t: f64, x: f64, y: f64| {
                    let mut out = zero;
                    out.set(0, t);
                    out.set(1, x);
                    out.set(2, y);
                    out
                };
                let a = mk(0.0, -v * gamma * cap * c, -v * gamma * cap * s);
                let a1 = mk(0.0, v * gamma * cap * cap * s, -v * gamma * cap * cap * c);
                KinematicState {
                    tau,
                    z: mk(gamma * tau, radius * c, radius * s),
                    u: mk(gamma, -v * gamma * s, v * gamma * c),
                    a,
                    a1,
                    a2: a * (-cap * cap),
                    a3: a1 * (-cap * cap),
                }
            }
            Kind::Polynomial { coeffs } => {
                // derivative d: Σ_{k≥d} k(k−1)…(k−d+1) c_k τ^{k−d}, by Horner
                let deriv = |d: usize| {
                    let mut out = zero;
                    for k in (d..coeffs.len()).rev() {
                        let mut fall = 1.0;
                        for j in 0..d {
                            fall *= (k - j) as f64;
                        }
                        out = out * tau + coeffs[k] * fall;
                    }
                    out
                };
                KinematicState {
                    tau,
                    z: deriv(0),
                    u: deriv(1),
                    a: deriv(2),
                    a1: deriv(3),
                    a2: deriv(4),
                    a3: deriv(5),
                }
            }
        }
    }

    /// Retarded proper time for the field point y: the unique τ with
    /// (y − z(τ)) null and y⁰ > z⁰(τ).
    pub fn retarded_time(&self, y: &LorentzVector) -> Result<f64> {
        assert_eq!(self.dim, y.dim(), "dimension mismatch in retarded_time");
        let cone = |tau: f64| -> f64 {
            let st = self.state_full(tau);
            let dt = y.get(0) - st.z.get(0);
            let mut dist2 = 0.0;
            for i in 1..self.dim.count() {
                let d = y.get(i) - st.z.get(i);
                dist2 += d * d;
            }
            dt - dist2.sqrt()
        };

        // initial guess: light travel time from the spatial position at τ = y⁰
        let st0 = self.state_full(y.get(0));
        let mut dist0 = 0.0;
        for i in 1..self.dim.count() {
            let d = y.get(i) - st0.z.get(i);
            dist0 += d * d;
        }
        let guess = y.get(0) - dist0.sqrt();

        // geometric bracket expansion; g is strictly decreasing in τ
        let scale = 1.0_f64.max(y.max_abs());
        let g0 = cone(guess);
        let (mut lo, mut hi) = (guess, guess);
        if g0 > 0.0 {
            let mut step = 0.1 * scale;
            let mut expanded = false;
            for _ in 0..64 {
                hi = lo + step;
                if cone(hi) <= 0.0 {
                    expanded = true;
                    break;
                }
                step *= 2.0;
            }
            if !expanded {
                return Err(Error::SearchFailure { lo, hi });
            }
        } else if g0 < 0.0 {
            let mut step = 0.1 * scale;
            let mut expanded = false;
            for _ in 0..64 {
                lo = hi - step;
                if cone(lo) >= 0.0 {
                    expanded = true;
                    break;
                }
                step *= 2.0;
            }
            if !expanded {
                return Err(Error::SearchFailure { lo, hi });
            }
        } else {
            return Ok(guess);
        }

        // bisection until the bracket is tight, then Newton polish on the
        // squared interval Q(τ) = (y−z)·(y−z) with Q′ = 2r > 0
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break; // bracket at floating-point resolution
            }
            if cone(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut tau = 0.5 * (lo + hi);
        for _ in 0..4 {
            let st = self.state_full(tau);
            let dy = *y - st.z;
            let q = dy.dot(&dy);
            let r = -dy.dot(&st.u);
            if r.abs() < f64::EPSILON * scale {
                break;
            }
            tau -= q / (2.0 * r);
        }

        // residual acceptance on the light-cone equation
        let st = self.state_full(tau);
        let dy = *y - st.z;
        let q = dy.dot(&dy).abs();
        let sep2 = dy.components().iter().map(|x| x * x).sum::<f64>().max(f64::EPSILON);
        if q > 1e-12 * sep2.max(scale * scale) {
            return Err(Error::Precision { requested: 1e-12 * sep2.max(scale * scale), achieved: q });
        }
        Ok(tau)
    }

    /// Full retarded frame of the field point y.
    pub fn retarded_frame(&self, y: &LorentzVector) -> Result<RetardedFrame> {
        let tau = self.retarded_time(y)?;
        let state = self.state_full(tau);
        let dy = *y - state.z;
        let r = -dy.dot(&state.u);
        let cutoff = 1e-9 * 1.0_f64.max(y.max_abs());
        if !(r > cutoff) {
            return Err(Error::DegeneratePoint { r, cutoff });
        }
        let k = dy * (1.0 / r);
        let a_k = state.a.dot(&k);
        Ok(RetardedFrame { state, r, k, a_k })
    }
}
