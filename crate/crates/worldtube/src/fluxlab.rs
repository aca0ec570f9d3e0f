//! World-tube flux integration of energy-momentum and angular momentum,
//! angular-moment identities on retarded spheres, and power-law fits of
//! the bound-momentum coefficients.
//!
//! The world tube of radius r around a worldline z(τ) is the surface
//! swept by the retarded spheres S(z(u), r): points y = z(u) + r k with
//! k = Λ(u)⁻¹(1, n̂) for unit directions n̂ in the instantaneous rest
//! frame. Its outward surface element is
//!
//!   dσ_μ = [−u_μ + (1 + r a_k) k_μ] r^{D−2} dΩ du,
//!
//! and the cone u = const through the tube has dσ_μ = k_μ r^{D−2} dΩ dr.
//! Fluxes of the radiative/bound stress parts through tube windows obey
//! closed forms that this module exposes as comparators:
//!
//! * the bound momentum flux through u ∈ [u1, u2] is a pure difference
//!   of the bracket (6D) c[(3/2)u/r³ + (12/5)a/r² + 2(a·a)u/r], c = e²/4π²,
//!   and (4D) e²u/(2r);
//! * the radiative momentum flux is r-independent and integrates the
//!   closed-form rate (6D) c[(4/5)(ȧ·ȧ) + 2(a·a)²]u − (6/35)c(a·a)ȧ
//!   + (6/7)c(a·ȧ)a, (4D) (2/3)e²(a·a)u;
//! * the radiative angular flux integrates z ∧ (that rate), while the
//!   bound angular flux is the window difference of
//!   z ∧ bracket + (12/5)c(u∧a)/r plus the accumulated spin-exchange
//!   rate c[(4/5)a∧ȧ + (64/35)(a·a)u∧a] (4D: z ∧ e²u/(2r) plus
//!   accumulated (2/3)e²(u∧a)). The spin-exchange terms travel through
//!   the bound stress: the radiative angular density carries no extra
//!   piece beyond z ∧ rate.
//!
//! Angular integration uses the exact-degree product rules from `quad`,
//! so the only numerical error is the adaptive u (or r) integration,
//! whose estimate is propagated to the result.

use crate::error::{Error, Result};
use crate::fields::{coupling_c, field_at_frame, radiative_stress_closed, stress_from_field};
use crate::minkowski::{Bivector, Dim, LorentzTransform, LorentzVector, SymTensor2};
use crate::quad::{integrate_adaptive, pairwise_sum, SphereQuadrature};
use crate::worldline::{KinematicState, RetardedFrame, Worldline};
use nalgebra::DMatrix;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Absolute tolerance target of the adaptive window integration.
pub const WINDOW_ABS_TOL: f64 = 1e-10;
/// Relative tolerance target of the adaptive window integration.
pub const WINDOW_REL_TOL: f64 = 1e-9;
/// Angular rule degree that integrates every tube integrand exactly
/// (stress densities have degree ≤ 8 in the sphere direction; the
/// angular-momentum factor y = z + r k adds one more).
pub const DEFAULT_DEGREE: usize = 10;

/// Which part of the stress tensor to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StressPart {
    Total,
    Bound,
    Radiative,
}

impl fmt::Display for StressPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StressPart::Total => "total",
            StressPart::Bound => "bnd",
            StressPart::Radiative => "rad",
        })
    }
}

impl FromStr for StressPart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(StressPart::Total),
            "bnd" | "bound" => Ok(StressPart::Bound),
            "rad" | "radiative" => Ok(StressPart::Radiative),
            other => Err(Error::Parse(format!(
                "unknown stress part {other:?} (expected total, bnd, or rad)"
            ))),
        }
    }
}

/// Flux of a stress part through a tube (or cone) window.
#[derive(Debug, Clone)]
pub struct FluxWindowResult {
    /// Momentum flux (filled by the momentum ops, zero otherwise).
    pub p: LorentzVector,
    /// Angular-momentum flux (filled by the angular ops, zero otherwise).
    pub m: Bivector,
    pub u1: f64,
    pub u2: f64,
    pub r: f64,
    /// Accumulated integration error estimate (max-norm).
    pub est_error: f64,
}

/// Least-squares decomposition of the bound momentum into powers of r.
#[derive(Debug, Clone)]
pub struct PowerFit {
    /// Vector coefficient per power of r (−3, −2, −1 in 6D; −1 in 4D).
    pub coefficients: BTreeMap<i32, LorentzVector>,
    /// Relative root-mean-square fit residual.
    pub residual: f64,
}

/// Moments ∫ dΩ n^{α₁}…n^{α_k} of the retarded-sphere direction, dense
/// row-major tensors in lab-frame components.
#[derive(Debug, Clone)]
pub struct AngularMoments {
    dim: Dim,
    order: usize,
    moments: Vec<Vec<f64>>,
}

impl AngularMoments {
    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Dense row-major moment tensor of rank k (d^k entries).
    pub fn tensor(&self, k: usize) -> &[f64] {
        &self.moments[k]
    }

    /// Single entry by multi-index.
    pub fn entry(&self, indices: &[usize]) -> f64 {
        let d = self.dim.count();
        let mut flat = 0usize;
        for &i in indices {
            flat = flat * d + i;
        }
        self.moments[indices.len()][flat]
    }
}

/// Moments of the unit direction n = k − u over the retarded sphere,
/// computed in the frame where u is the time axis and boosted back to
/// lab components. Odd orders vanish; order 2 equals
/// (Ω/(D−1)) (η^{αβ} + u^α u^β) and order 4 equals
/// (Ω/((D−1)(D+1))) times the three-term symmetrized projector.
pub fn angular_moments(
    quad: &SphereQuadrature,
    u: &LorentzVector,
    order: usize,
) -> Result<AngularMoments> {
    if order > 4 {
        return Err(Error::Domain(format!("angular moment order {order} exceeds 4")));
    }
    if quad.degree() < order {
        return Err(Error::Precision { requested: order as f64, achieved: quad.degree() as f64 });
    }
    let dim = quad.dim();
    if dim != u.dim() {
        return Err(Error::Domain("quadrature and velocity dimensions differ".into()));
    }
    let boost = LorentzTransform::boost_to_mclf(u)?;
    let d = dim.count();
    let nodes = quad.nodes();
    // lab components of each node direction
    let mut dirs: Vec<LorentzVector> = Vec::with_capacity(nodes.len());
    let mut n_rest = LorentzVector::zero(dim);
    for nd in nodes {
        n_rest.set(0, 0.0);
        for i in 0..(d - 1) {
            n_rest.set(i + 1, nd.n[i]);
        }
        dirs.push(boost.apply_inverse(&n_rest));
    }
    let mut moments = Vec::with_capacity(order + 1);
    let mut vals = vec![0.0; nodes.len()];
    for k in 0..=order {
        let len = d.pow(k as u32);
        let mut tensor = vec![0.0; len];
        // the tensor is totally symmetric, so sum over the nodes once
        // per sorted multi-index and mirror onto the permutations
        let mut sorted_vals = vec![f64::NAN; len];
        for flat in 0..len {
            // decode the multi-index from the flat row-major position
            let mut idx = [0usize; 4];
            let mut rem = flat;
            for pos in (0..k).rev() {
                idx[pos] = rem % d;
                rem /= d;
            }
            idx[..k].sort_unstable();
            let mut key = 0usize;
            for &i in &idx[..k] {
                key = key * d + i;
            }
            if sorted_vals[key].is_nan() {
                for (v, (nd, dir)) in vals.iter_mut().zip(nodes.iter().zip(&dirs)) {
                    let mut prod = nd.weight;
                    for &i in &idx[..k] {
                        prod *= dir.get(i);
                    }
                    *v = prod;
                }
                sorted_vals[key] = pairwise_sum(&vals);
            }
            tensor[flat] = sorted_vals[key];
        }
        moments.push(tensor);
    }
    Ok(AngularMoments { dim, order, moments })
}

/// Closed-form order-2 moment (Ω/(D−1)) (η^{αβ} + u^α u^β), row-major.
pub fn moment2_closed(u: &LorentzVector) -> Vec<f64> {
    let dim = u.dim();
    let d = dim.count();
    let coeff = dim.sphere_area() / (d as f64 - 1.0);
    let mut out = vec![0.0; d * d];
    for al in 0..d {
        for be in 0..d {
            let eta = if al == be { crate::minkowski::metric_sign(al) } else { 0.0 };
            out[al * d + be] = coeff * (eta + u.get(al) * u.get(be));
        }
    }
    out
}

/// Closed-form order-4 moment (Ω/((D−1)(D+1))) (h h + h h + h h) with
/// h^{αβ} = η^{αβ} + u^α u^β, row-major.
pub fn moment4_closed(u: &LorentzVector) -> Vec<f64> {
    let dim = u.dim();
    let d = dim.count();
    let coeff = dim.sphere_area() / ((d as f64 - 1.0) * (d as f64 + 1.0));
    let h = |al: usize, be: usize| {
        let eta = if al == be { crate::minkowski::metric_sign(al) } else { 0.0 };
        eta + u.get(al) * u.get(be)
    };
    let mut out = vec![0.0; d * d * d * d];
    for al in 0..d {
        for be in 0..d {
            for ga in 0..d {
                for ka in 0..d {
                    out[((al * d + be) * d + ga) * d + ka] = coeff
                        * (h(al, be) * h(ga, ka) + h(al, ga) * h(be, ka) + h(al, ka) * h(be, ga));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum NormalKind {
    Tube,
    Cone,
}

fn node_stress(part: StressPart, fr: &RetardedFrame, e: f64) -> SymTensor2 {
    match part {
        StressPart::Total => stress_from_field(&field_at_frame(fr, e)),
        StressPart::Radiative => radiative_stress_closed(fr, e),
        StressPart::Bound => {
            stress_from_field(&field_at_frame(fr, e)) - radiative_stress_closed(fr, e)
        }
    }
}

/// Angular integral of the selected stress part against the surface
/// normal at one slice: the flux density per unit u (tube) or per unit
/// r (cone). Returns the momentum density and, when requested, the
/// angular-momentum density.
fn slice_density(
    w: &Worldline,
    tau: f64,
    r: f64,
    part: StressPart,
    e: f64,
    quad: &SphereQuadrature,
    normal: NormalKind,
    want_m: bool,
) -> (LorentzVector, Bivector) {
    let dim = w.dim();
    let d = dim.count();
    let st = w.state_full(tau);
    let boost = LorentzTransform::boost_to_mclf(&st.u)
        .expect("catalog worldline velocity is unit timelike");
    let rpow = match dim {
        Dim::Four => r * r,
        Dim::Six => r * r * r * r,
    };
    let nodes = quad.nodes();
    let bl = dim.bivector_len();
    let mut cols_p: Vec<Vec<f64>> = vec![Vec::with_capacity(nodes.len()); d];
    let mut cols_m: Vec<Vec<f64>> =
        if want_m { vec![Vec::with_capacity(nodes.len()); bl] } else { Vec::new() };
    let mut k_rest = LorentzVector::zero(dim);
    k_rest.set(0, 1.0);
    for nd in nodes {
        for i in 0..(d - 1) {
            k_rest.set(i + 1, nd.n[i]);
        }
        let k = boost.apply_inverse(&k_rest);
        let a_k = st.a.dot(&k);
        let fr = RetardedFrame { state: st, r, k, a_k };
        let t = node_stress(part, &fr, e);
        let normal_vec = match normal {
            NormalKind::Tube => -st.u + k * (1.0 + r * a_k),
            NormalKind::Cone => k,
        };
        let s = t.contract_covector(&normal_vec) * (nd.weight * rpow);
        for (c, col) in cols_p.iter_mut().enumerate() {
            col.push(s.get(c));
        }
        if want_m {
            let y = st.z + k * r;
            let mflux = y.wedge(&s);
            for (col, (i, j)) in cols_m.iter_mut().zip(Bivector::pairs(dim)) {
                col.push(mflux.get(i, j));
            }
        }
    }
    let mut p = LorentzVector::zero(dim);
    for (c, col) in cols_p.iter().enumerate() {
        p.set(c, pairwise_sum(col));
    }
    let mut m = Bivector::zero(dim);
    for (col, (i, j)) in cols_m.iter().zip(Bivector::pairs(dim)) {
        m.set(i, j, pairwise_sum(col));
    }
    (p, m)
}

fn check_window(u1: f64, u2: f64, r: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("tube radius must be positive, got {r}")));
    }
    if u2 < u1 {
        return Err(Error::Domain(format!("window [{u1}, {u2}] is inverted")));
    }
    Ok(())
}

/// Momentum flux of the selected stress part through the tube segment
/// {S(z(u), r): u ∈ [u1, u2]}.
pub fn tube_flux_window(
    w: &Worldline,
    u1: f64,
    u2: f64,
    r: f64,
    part: StressPart,
    e: f64,
    degree: usize,
) -> Result<FluxWindowResult> {
    check_window(u1, u2, r)?;
    let dim = w.dim();
    let quad = SphereQuadrature::new(dim, degree);
    let out = integrate_adaptive(
        |tau| {
            let (p, _) = slice_density(w, tau, r, part, e, &quad, NormalKind::Tube, false);
            p.components().to_vec()
        },
        u1,
        u2,
        WINDOW_ABS_TOL,
        WINDOW_REL_TOL,
    )?;
    Ok(FluxWindowResult {
        p: LorentzVector::from_slice(dim, &out.value),
        m: Bivector::zero(dim),
        u1,
        u2,
        r,
        est_error: out.est_error,
    })
}

/// Angular-momentum flux ∫ dσ_α (y^μ T^{αν} − y^ν T^{αμ}) of the
/// selected stress part through the tube segment.
pub fn tube_angular_flux_window(
    w: &Worldline,
    u1: f64,
    u2: f64,
    r: f64,
    part: StressPart,
    e: f64,
    degree: usize,
) -> Result<FluxWindowResult> {
    check_window(u1, u2, r)?;
    let dim = w.dim();
    let quad = SphereQuadrature::new(dim, degree);
    let out = integrate_adaptive(
        |tau| {
            let (_, m) = slice_density(w, tau, r, part, e, &quad, NormalKind::Tube, true);
            Bivector::pairs(dim).map(|(i, j)| m.get(i, j)).collect()
        },
        u1,
        u2,
        WINDOW_ABS_TOL,
        WINDOW_REL_TOL,
    )?;
    let mut m = Bivector::zero(dim);
    for (v, (i, j)) in out.value.iter().zip(Bivector::pairs(dim)) {
        m.set(i, j, *v);
    }
    Ok(FluxWindowResult {
        p: LorentzVector::zero(dim),
        m,
        u1,
        u2,
        r,
        est_error: out.est_error,
    })
}

/// Momentum flux of the selected stress part through the cone piece
/// {z(τ) + r k: r ∈ [r1, r2]} at fixed retarded time τ, oriented toward
/// increasing r. For the bound part this equals bracket(r2) − bracket(r1);
/// for the radiative part it vanishes identically (T_rad ∝ k⊗k is null).
pub fn cone_flux(
    w: &Worldline,
    tau: f64,
    r1: f64,
    r2: f64,
    part: StressPart,
    e: f64,
    degree: usize,
) -> Result<FluxWindowResult> {
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::Domain(format!("cone radii must be positive, got [{r1}, {r2}]")));
    }
    if r2 < r1 {
        return Err(Error::Domain(format!("cone range [{r1}, {r2}] is inverted")));
    }
    let dim = w.dim();
    let quad = SphereQuadrature::new(dim, degree);
    let out = integrate_adaptive(
        |r| {
            let (p, _) = slice_density(w, tau, r, part, e, &quad, NormalKind::Cone, false);
            p.components().to_vec()
        },
        r1,
        r2,
        WINDOW_ABS_TOL,
        WINDOW_REL_TOL,
    )?;
    Ok(FluxWindowResult {
        p: LorentzVector::from_slice(dim, &out.value),
        m: Bivector::zero(dim),
        u1: tau,
        u2: tau,
        r: r2,
        est_error: out.est_error,
    })
}

/// Closed-form bound-momentum bracket whose window difference equals
/// the bound tube flux: 6D c[(3/2)u/r³ + (12/5)a/r² + 2(a·a)u/r];
/// 4D e²u/(2r).
pub fn bound_momentum_bracket(st: &KinematicState, r: f64, e: f64) -> LorentzVector {
    match st.dim() {
        Dim::Four => st.u * (0.5 * e * e / r),
        Dim::Six => {
            let c = coupling_c(e);
            let aa = st.a.dot(&st.a);
            (st.u * (1.5 / (r * r * r)) + st.a * (2.4 / (r * r)) + st.u * (2.0 * aa / r)) * c
        }
    }
}

/// Closed-form radiative momentum rate (per unit retarded time):
/// 6D c[(4/5)(ȧ·ȧ) + 2(a·a)²]u − (6/35)c(a·a)ȧ + (6/7)c(a·ȧ)a;
/// 4D (2/3)e²(a·a)u.
pub fn radiative_momentum_rate(st: &KinematicState, e: f64) -> LorentzVector {
    match st.dim() {
        Dim::Four => st.u * (2.0 / 3.0 * e * e * st.a.dot(&st.a)),
        Dim::Six => {
            let c = coupling_c(e);
            let aa = st.a.dot(&st.a);
            let a1a1 = st.a1.dot(&st.a1);
            let aa1 = st.a.dot(&st.a1);
            (st.u * (0.8 * a1a1 + 2.0 * aa * aa) - st.a1 * (6.0 / 35.0 * aa)
                + st.a * (6.0 / 7.0 * aa1))
                * c
        }
    }
}

/// Closed-form content whose window difference gives the bound angular
/// flux up to the accumulated spin-exchange rate:
/// 6D z ∧ bracket + (12/5)c(u∧a)/r; 4D z ∧ e²u/(2r).
pub fn bound_angular_content(st: &KinematicState, r: f64, e: f64) -> Bivector {
    let base = st.z.wedge(&bound_momentum_bracket(st, r, e));
    match st.dim() {
        Dim::Four => base,
        Dim::Six => base + st.u.wedge(&st.a) * (2.4 * coupling_c(e) / r),
    }
}

/// Rate of angular momentum exchanged through the bound stress beyond
/// the content difference: 6D c[(4/5)a∧ȧ + (64/35)(a·a)u∧a];
/// 4D (2/3)e²(u∧a).
pub fn spin_accumulation_rate(st: &KinematicState, e: f64) -> Bivector {
    match st.dim() {
        Dim::Four => st.u.wedge(&st.a) * (2.0 / 3.0 * e * e),
        Dim::Six => {
            let c = coupling_c(e);
            let aa = st.a.dot(&st.a);
            (st.a.wedge(&st.a1) * 0.8 + st.u.wedge(&st.a) * (64.0 / 35.0 * aa)) * c
        }
    }
}

/// Closed-form radiative angular-momentum rate z ∧ radiative rate.
pub fn radiative_angular_rate(st: &KinematicState, e: f64) -> Bivector {
    st.z.wedge(&radiative_momentum_rate(st, e))
}

/// Least-squares fit of the instantaneous bound momentum content to
/// Σ c_s r^s over the listed radii (powers −3, −2, −1 in 6D; −1 in 4D).
///
/// The content at radius r is measured from cone fluxes alone:
/// minus the bound cone flux from r to the largest listed radius equals
/// bracket(r) − bracket(r_max), and the constant offset −bracket(r_max)
/// is absorbed by an auxiliary constant column that is not reported.
pub fn bound_coefficient_fit(
    w: &Worldline,
    tau: f64,
    r_list: &[f64],
    e: f64,
    degree: usize,
) -> Result<PowerFit> {
    let dim = w.dim();
    let mut radii: Vec<f64> = r_list.to_vec();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    if radii.len() < 4 {
        return Err(Error::Domain(format!(
            "need at least 4 distinct radii, got {}",
            radii.len()
        )));
    }
    if !(radii[0] > 0.0) {
        return Err(Error::Domain("radii must be positive".into()));
    }
    let r_max = *radii.last().unwrap();
    if r_max / radii[0] < 9.9 {
        return Err(Error::Domain(format!(
            "radii must span a decade, got ratio {:.3}",
            r_max / radii[0]
        )));
    }
    let powers: &[i32] = match dim {
        Dim::Four => &[-1],
        Dim::Six => &[-3, -2, -1],
    };
    let d = dim.count();
    let nrows = radii.len();
    let ncols = powers.len() + 1; // trailing constant column
    let mut est_error = 0.0_f64;
    let mut b = DMatrix::<f64>::zeros(nrows, d);
    for (row, &r) in radii.iter().enumerate() {
        if r < r_max {
            let flux = cone_flux(w, tau, r, r_max, StressPart::Bound, e, degree)?;
            est_error = est_error.max(flux.est_error);
            for c in 0..d {
                b[(row, c)] = -flux.p.get(c);
            }
        }
    }
    let a = DMatrix::<f64>::from_fn(nrows, ncols, |row, col| {
        if col < powers.len() {
            (radii[row] / r_max).powi(powers[col])
        } else {
            1.0
        }
    });
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, s| m.max(*s));
    let smin = svd.singular_values.iter().fold(f64::INFINITY, |m, s| m.min(*s));
    if !(smin > 0.0) || smax / smin > 1e12 {
        return Err(Error::Conditioning(format!(
            "power-fit design matrix condition {:.3e}",
            smax / smin
        )));
    }
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|msg| Error::Conditioning(msg.to_string()))?;
    let fitted = &a * &x;
    let scale = b.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let residual = ((&fitted - &b).norm() / ((nrows * d) as f64).sqrt()) / scale;
    let mut coefficients = BTreeMap::new();
    for (col, &s) in powers.iter().enumerate() {
        let mut v = LorentzVector::zero(dim);
        for c in 0..d {
            v.set(c, x[(col, c)] / r_max.powi(s));
        }
        coefficients.insert(s, v);
    }
    Ok(PowerFit { coefficients, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson integration, independent of the quad module.
    fn simpson_vec<F: Fn(f64) -> Vec<f64>>(f: F, a: f64, b: f64, panels: usize) -> Vec<f64> {
        assert!(panels % 2 == 0);
        let h = (b - a) / panels as f64;
        let mut acc = f(a);
        let end = f(b);
        for (x, y) in acc.iter_mut().zip(end) {
            *x += y;
        }
        for i in 1..panels {
            let wgt = if i % 2 == 1 { 4.0 } else { 2.0 };
            for (x, y) in acc.iter_mut().zip(f(a + i as f64 * h)) {
                *x += wgt * y;
            }
        }
        acc.iter().map(|x| x * h / 3.0).collect()
    }

    fn simpson_rate(w: &Worldline, e: f64, a: f64, b: f64, rate: fn(&KinematicState, f64) -> LorentzVector) -> LorentzVector {
        let out = simpson_vec(
            |tau| rate(&w.state_full(tau), e).components().to_vec(),
            a,
            b,
            400,
        );
        LorentzVector::from_slice(w.dim(), &out)
    }

    fn simpson_birate(w: &Worldline, e: f64, a: f64, b: f64, rate: fn(&KinematicState, f64) -> Bivector) -> Bivector {
        let dim = w.dim();
        let out = simpson_vec(
            |tau| {
                let m = rate(&w.state_full(tau), e);
                Bivector::pairs(dim).map(|(i, j)| m.get(i, j)).collect()
            },
            a,
            b,
            400,
        );
        let mut m = Bivector::zero(dim);
        for (v, (i, j)) in out.iter().zip(Bivector::pairs(dim)) {
            m.set(i, j, *v);
        }
        m
    }

    #[test]
    fn rest_charge_windows_vanish() {
        let e = 1.0;
        for dim in [Dim::Four, Dim::Six] {
            let w = Worldline::rest(dim);
            for part in [StressPart::Radiative, StressPart::Bound] {
                let f = tube_flux_window(&w, 0.0, 0.7, 0.3, part, e, 8).unwrap();
                assert!(f.p.max_abs() < 1e-12, "{dim:?} {part} p = {:?}", f.p);
            }
            // at the spatial origin the angular flux vanishes too
            let m = tube_angular_flux_window(&w, 0.0, 0.5, 0.3, StressPart::Total, e, 8).unwrap();
            assert!(m.m.max_abs() < 1e-12, "{dim:?} M = {:?}", m.m);
        }
    }

    #[test]
    fn hyperbolic_bound_flux_is_bracket_difference() {
        let e = 1.0;
        let w = Worldline::hyperbolic(Dim::Six, 0.2).unwrap();
        let (u1, u2, r) = (0.0, 0.4, 0.1);
        let f = tube_flux_window(&w, u1, u2, r, StressPart::Bound, e, DEFAULT_DEGREE).unwrap();
        let want = bound_momentum_bracket(&w.state_full(u2), r, e)
            - bound_momentum_bracket(&w.state_full(u1), r, e);
        let scale = want.max_abs();
        assert!(
            (f.p - want).max_abs() < 1e-6 * scale,
            "bound flux {:?} vs bracket {:?}",
            f.p,
            want
        );
    }

    #[test]
    fn radiative_flux_r_independent_and_matches_rate() {
        let e = 1.1;
        let w = Worldline::circular(Dim::Six, 0.4, 0.5).unwrap();
        let (u1, u2) = (0.0, 0.3);
        let fa = tube_flux_window(&w, u1, u2, 0.15, StressPart::Radiative, e, DEFAULT_DEGREE).unwrap();
        let fb = tube_flux_window(&w, u1, u2, 0.3, StressPart::Radiative, e, DEFAULT_DEGREE).unwrap();
        let scale = fa.p.max_abs();
        assert!((fa.p - fb.p).max_abs() < 1e-8 * scale, "rad flux depends on r");
        let want = simpson_rate(&w, e, u1, u2, radiative_momentum_rate);
        assert!((fa.p - want).max_abs() < 1e-8 * scale, "rad flux vs rate integral");
    }

    #[test]
    fn four_d_fluxes_match_larmor_and_bracket() {
        let e = 0.9;
        let w = Worldline::circular(Dim::Four, 0.5, 0.5).unwrap();
        let (u1, u2, r) = (0.0, 0.4, 0.2);
        let rad = tube_flux_window(&w, u1, u2, r, StressPart::Radiative, e, DEFAULT_DEGREE).unwrap();
        let want = simpson_rate(&w, e, u1, u2, radiative_momentum_rate);
        assert!((rad.p - want).max_abs() < 1e-8 * want.max_abs(), "Larmor mismatch");
        let bnd = tube_flux_window(&w, u1, u2, r, StressPart::Bound, e, DEFAULT_DEGREE).unwrap();
        let want_b = bound_momentum_bracket(&w.state_full(u2), r, e)
            - bound_momentum_bracket(&w.state_full(u1), r, e);
        assert!(
            (bnd.p - want_b).max_abs() < 1e-7 * want_b.max_abs().max(1.0),
            "4D bound flux {:?} vs bracket {:?}",
            bnd.p,
            want_b
        );
    }

    #[test]
    fn angular_fluxes_split_into_content_and_spin_rate() {
        let e = 1.0;
        // 6D hyperbolic: bound = content difference + accumulated spin rate
        let w = Worldline::hyperbolic(Dim::Six, 0.3).unwrap();
        let (u1, u2, r) = (0.0, 0.4, 0.2);
        let bnd = tube_angular_flux_window(&w, u1, u2, r, StressPart::Bound, e, DEFAULT_DEGREE).unwrap();
        let content = bound_angular_content(&w.state_full(u2), r, e)
            - bound_angular_content(&w.state_full(u1), r, e);
        let spin = simpson_birate(&w, e, u1, u2, spin_accumulation_rate);
        let want = content + spin;
        let scale = want.max_abs().max(spin.max_abs());
        assert!(
            (bnd.m - want).max_abs() < 1e-6 * scale,
            "6D bound angular flux {:?} vs content+spin {:?}",
            bnd.m,
            want
        );
        // radiative = integral of z ∧ rate, nothing else
        let rad = tube_angular_flux_window(&w, u1, u2, r, StressPart::Radiative, e, DEFAULT_DEGREE).unwrap();
        let want_r = simpson_birate(&w, e, u1, u2, radiative_angular_rate);
        assert!(
            (rad.m - want_r).max_abs() < 1e-6 * scale.max(want_r.max_abs()),
            "6D radiative angular flux {:?} vs z∧rate {:?}",
            rad.m,
            want_r
        );
    }

    #[test]
    fn four_d_angular_fluxes_follow_same_split() {
        let e = 1.2;
        let w = Worldline::circular(Dim::Four, 0.5, 0.4).unwrap();
        let (u1, u2, r) = (0.1, 0.5, 0.15);
        let bnd = tube_angular_flux_window(&w, u1, u2, r, StressPart::Bound, e, DEFAULT_DEGREE).unwrap();
        let content = bound_angular_content(&w.state_full(u2), r, e)
            - bound_angular_content(&w.state_full(u1), r, e);
        let spin = simpson_birate(&w, e, u1, u2, spin_accumulation_rate);
        let want = content + spin;
        let scale = want.max_abs().max(1.0);
        assert!(
            (bnd.m - want).max_abs() < 1e-6 * scale,
            "4D bound angular flux {:?} vs content+spin {:?}",
            bnd.m,
            want
        );
        let rad = tube_angular_flux_window(&w, u1, u2, r, StressPart::Radiative, e, DEFAULT_DEGREE).unwrap();
        let want_r = simpson_birate(&w, e, u1, u2, radiative_angular_rate);
        assert!((rad.m - want_r).max_abs() < 1e-6 * scale, "4D radiative angular flux");
    }

    #[test]
    fn windows_are_additive_and_parts_sum() {
        let e = 1.0;
        let w = Worldline::circular(Dim::Six, 0.3, 0.4).unwrap();
        let r = 0.25;
        for part in [StressPart::Radiative, StressPart::Bound, StressPart::Total] {
            let whole = tube_flux_window(&w, 0.0, 0.3, r, part, e, 8).unwrap();
            let left = tube_flux_window(&w, 0.0, 0.17, r, part, e, 8).unwrap();
            let right = tube_flux_window(&w, 0.17, 0.3, r, part, e, 8).unwrap();
            let scale = whole.p.max_abs().max(1e-30);
            assert!(
                (whole.p - (left.p + right.p)).max_abs() < 1e-10 * scale.max(1.0),
                "window additivity for {part}"
            );
        }
        let total = tube_flux_window(&w, 0.0, 0.3, r, StressPart::Total, e, 8).unwrap();
        let rad = tube_flux_window(&w, 0.0, 0.3, r, StressPart::Radiative, e, 8).unwrap();
        let bnd = tube_flux_window(&w, 0.0, 0.3, r, StressPart::Bound, e, 8).unwrap();
        assert!(
            (total.p - (rad.p + bnd.p)).max_abs() < 1e-10 * total.p.max_abs().max(1.0),
            "total ≠ rad + bnd"
        );
    }

    #[test]
    fn world_tube_box_is_closed() {
        // conservation: flux through the tube at r2 minus the tube at r1
        // equals the cone flux at u2 minus the cone at u1
        let e = 1.0;
        let w = Worldline::circular(Dim::Six, 0.35, 0.5).unwrap();
        let (u1, u2, r1, r2) = (0.1, 0.25, 0.2, 0.4);
        let part = StressPart::Total;
        let t1 = tube_flux_window(&w, u1, u2, r1, part, e, DEFAULT_DEGREE).unwrap();
        let t2 = tube_flux_window(&w, u1, u2, r2, part, e, DEFAULT_DEGREE).unwrap();
        let c1 = cone_flux(&w, u1, r1, r2, part, e, DEFAULT_DEGREE).unwrap();
        let c2 = cone_flux(&w, u2, r1, r2, part, e, DEFAULT_DEGREE).unwrap();
        let lhs = t2.p - t1.p;
        let rhs = c2.p - c1.p;
        let scale = t1.p.max_abs().max(c1.p.max_abs()).max(1.0);
        assert!(
            (lhs - rhs).max_abs() < 1e-8 * scale,
            "box not closed: tube diff {:?} vs cone diff {:?}",
            lhs,
            rhs
        );
        // the radiative part alone has exactly zero cone flux
        let crad = cone_flux(&w, u1, r1, r2, StressPart::Radiative, e, 8).unwrap();
        assert!(crad.p.max_abs() < 1e-12, "radiative cone flux should vanish");
    }

    #[test]
    fn moments_match_closed_forms_in_lab_frame() {
        for dim in [Dim::Four, Dim::Six] {
            let quad = SphereQuadrature::new(dim, 8);
            let mut u = LorentzVector::zero(dim);
            // a boosted velocity to exercise the lab transformation
            let v = [0.3, -0.2, 0.1, 0.15, -0.1];
            let d = dim.count();
            let mut v2 = 0.0_f64;
            for i in 0..(d - 1) {
                v2 += v[i] * v[i];
            }
            let gamma = 1.0 / (1.0 - v2).sqrt();
            u.set(0, gamma);
            for i in 0..(d - 1) {
                u.set(i + 1, gamma * v[i]);
            }
            let mom = angular_moments(&quad, &u, 4).unwrap();
            let omega = dim.sphere_area();
            assert!((mom.tensor(0)[0] - omega).abs() < 1e-12 * omega);
            for &x in mom.tensor(1) {
                assert!(x.abs() < 1e-12, "odd moment 1 nonzero");
            }
            for &x in mom.tensor(3) {
                assert!(x.abs() < 1e-11, "odd moment 3 nonzero: {x}");
            }
            let m2 = moment2_closed(&u);
            for (got, want) in mom.tensor(2).iter().zip(&m2) {
                assert!((got - want).abs() < 1e-12 * omega, "order 2: {got} vs {want}");
            }
            let m4 = moment4_closed(&u);
            for (got, want) in mom.tensor(4).iter().zip(&m4) {
                assert!((got - want).abs() < 1e-11 * omega, "order 4: {got} vs {want}");
            }
            // permutation symmetry of the order-4 tensor
            for al in 0..d {
                for be in 0..d {
                    for ga in 0..d {
                        for ka in 0..d {
                            let base = mom.entry(&[al, be, ga, ka]);
                            for perm in [[be, al, ga, ka], [al, ga, be, ka], [ka, be, ga, al]] {
                                assert!((mom.entry(&perm) - base).abs() < 1e-12 * omega);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn moments_reject_insufficient_degree() {
        let quad = SphereQuadrature::new(Dim::Six, 2);
        let mut u = LorentzVector::zero(Dim::Six);
        u.set(0, 1.0);
        assert!(matches!(
            angular_moments(&quad, &u, 4),
            Err(Error::Precision { .. })
        ));
        assert!(matches!(angular_moments(&quad, &u, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn bound_fit_recovers_bracket_coefficients() {
        let e = 1.0;
        let radii = [0.05, 0.1, 0.2, 0.35, 0.5];
        // 6D rest: only the r⁻³ term with coefficient (3/2)c u
        let w = Worldline::rest(Dim::Six);
        let fit = bound_coefficient_fit(&w, 0.0, &radii, e, 8).unwrap();
        let c = coupling_c(e);
        let c3 = &fit.coefficients[&-3];
        assert!((c3.get(0) - 1.5 * c).abs() < 1e-6 * c, "c_-3 time component {}", c3.get(0));
        assert!(fit.coefficients[&-2].max_abs() < 1e-6 * c);
        assert!(fit.coefficients[&-1].max_abs() < 1e-6 * c);
        assert!(fit.residual < 1e-6);
        // 6D hyperbolic: the r⁻² coefficient is (12/5)c a
        let w = Worldline::hyperbolic(Dim::Six, 0.2).unwrap();
        let tau = 0.3;
        let fit = bound_coefficient_fit(&w, tau, &radii, e, 8).unwrap();
        let a = w.state_full(tau).a;
        let want = a * (2.4 * c);
        assert!(
            (fit.coefficients[&-2] - want).max_abs() < 1e-5 * want.max_abs(),
            "c_-2 {:?} vs (12/5)c a {:?}",
            fit.coefficients[&-2],
            want
        );
        // 4D rest: single power −1 with coefficient e²u/2
        let w = Worldline::rest(Dim::Four);
        let fit = bound_coefficient_fit(&w, 0.0, &radii, e, 8).unwrap();
        let c1 = &fit.coefficients[&-1];
        assert!((c1.get(0) - 0.5 * e * e).abs() < 1e-6, "4D c_-1 {}", c1.get(0));
        // malformed radius lists are rejected
        assert!(bound_coefficient_fit(&w, 0.0, &[0.1, 0.2, 0.3], e, 8).is_err());
        assert!(bound_coefficient_fit(&w, 0.0, &[0.1, 0.15, 0.2, 0.3], e, 8).is_err());
    }
}
