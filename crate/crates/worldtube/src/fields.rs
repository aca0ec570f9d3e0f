//! Retarded potentials and field strengths of a point charge in 4 and 6
//! spacetime dimensions, the inverse-distance decomposition of the field,
//! and the energy–momentum tensor with its radiative/bound split.
//!
//! All tensors are stored with upper (contravariant) indices. With the
//! retarded frame quantities r, k (null, k·u = −1) and a_k = a·k, the
//! fields are
//!
//!   4D:  F = e [ (u∧k)/r² + (Q∧k)/r ],            Q  = a + a_k u,
//!   6D:  F = (e/2π) [ V∧k + (u∧a)/r³ ],           V  = 3u/r⁴ + (3a + 6 a_k u)/r³ + V₂/r²,
//!        V₂ = ȧ + (ȧ·k) u + 3 a_k a + 3 a_k² u    (V₂·k = 0),
//!
//! and the corresponding potentials are A = e u/r and
//! A = (e/2π) [ a/r² + u (1 + r a_k)/r³ ]. Grouping terms by their power
//! of r gives the field parts (4D: r⁻², r⁻¹; 6D: r⁻⁴, r⁻³, r⁻²) whose
//! quadratic combinations organize the stress tensor
//!
//!   T^{μν} = (1/Ω_{D−2}) [ F^{μλ} F^ν{}_λ − ¼ η^{μν} F·F ]
//!
//! into inverse-power parts. The far-field part (r⁻¹ in 4D, r⁻² in 6D)
//! alone produces the radiative stress, an exactly null rank-one tensor
//! ∝ k⊗k; everything else is bound to the charge and keyed here by its
//! power of r (−8…−5 in 6D, −4 and −3 in 4D).

use crate::error::{Error, Result};
use crate::minkowski::{metric_sign, Bivector, Dim, LorentzVector, SymTensor2};
use crate::worldline::{KinematicState, RetardedFrame, Worldline};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Coefficient of the 6D retarded Green function: the 6D field carries a
/// prefactor e·FIELD_COEFF_6D where the 4D field carries a bare e.
pub const FIELD_COEFF_6D: f64 = 1.0 / (2.0 * PI);

/// Quadratic 6D coupling c = (e/2π)² that multiplies every 6D flux and
/// momentum expression.
pub fn coupling_c(e: f64) -> f64 {
    let s = e * FIELD_COEFF_6D;
    s * s
}

/// Companion 6D coupling ν = (4/5) c = e²/(5π²).
pub fn coupling_nu(e: f64) -> f64 {
    0.8 * coupling_c(e)
}

/// Field strength together with the retarded frame it was evaluated in.
#[derive(Debug, Clone)]
pub struct FieldTensor {
    pub f: Bivector,
    pub frame: RetardedFrame,
}

/// Stress tensor split into the null radiative piece and the bound
/// pieces keyed by their power of the retarded distance.
#[derive(Debug, Clone)]
pub struct StressSplit {
    pub t_rad: SymTensor2,
    pub t_bnd_parts: BTreeMap<i32, SymTensor2>,
}

impl StressSplit {
    pub fn dim(&self) -> Dim {
        self.t_rad.dim()
    }

    /// Sum of all bound parts.
    pub fn bound_total(&self) -> SymTensor2 {
        let mut acc = SymTensor2::zero(self.dim());
        for part in self.t_bnd_parts.values() {
            acc = acc + *part;
        }
        acc
    }

    /// Radiative plus bound: the full stress tensor.
    pub fn total(&self) -> SymTensor2 {
        self.t_rad + self.bound_total()
    }
}

fn q_vector_4d(st: &KinematicState, a_k: f64) -> LorentzVector {
    st.a + st.u * a_k
}

fn v2_vector_6d(fr: &RetardedFrame) -> LorentzVector {
    let st = &fr.state;
    let a1_k = st.a1.dot(&fr.k);
    st.a1 + st.u * a1_k + st.a * (3.0 * fr.a_k) + st.u * (3.0 * fr.a_k * fr.a_k)
}

/// Retarded potential at a known frame.
pub fn potential_at_frame(fr: &RetardedFrame, e: f64) -> LorentzVector {
    let st = &fr.state;
    let r = fr.r;
    match st.dim() {
        Dim::Four => st.u * (e / r),
        Dim::Six => {
            (st.a * (1.0 / (r * r)) + st.u * ((1.0 + r * fr.a_k) / (r * r * r)))
                * (e * FIELD_COEFF_6D)
        }
    }
}

/// Field strength at a known frame (assembled from the compact V-form).
pub fn field_at_frame(fr: &RetardedFrame, e: f64) -> Bivector {
    let st = &fr.state;
    let r = fr.r;
    match st.dim() {
        Dim::Four => {
            let v = st.u * (1.0 / (r * r)) + q_vector_4d(st, fr.a_k) * (1.0 / r);
            v.wedge(&fr.k) * e
        }
        Dim::Six => {
            let r3 = r * r * r;
            let v = st.u * (3.0 / (r3 * r))
                + (st.a * 3.0 + st.u * (6.0 * fr.a_k)) * (1.0 / r3)
                + v2_vector_6d(fr) * (1.0 / (r * r));
            (v.wedge(&fr.k) + st.u.wedge(&st.a) * (1.0 / r3)) * (e * FIELD_COEFF_6D)
        }
    }
}

/// Field parts keyed by their power of r (4D: −2, −1; 6D: −4, −3, −2),
/// built term by term rather than from the V-form.
pub fn field_parts(fr: &RetardedFrame, e: f64) -> Vec<(i32, Bivector)> {
    let st = &fr.state;
    let r = fr.r;
    match st.dim() {
        Dim::Four => {
            let f2 = st.u.wedge(&fr.k) * (e / (r * r));
            let f1 = q_vector_4d(st, fr.a_k).wedge(&fr.k) * (e / r);
            vec![(-2, f2), (-1, f1)]
        }
        Dim::Six => {
            let ce = e * FIELD_COEFF_6D;
            let r2 = r * r;
            let r3 = r2 * r;
            let f4 = st.u.wedge(&fr.k) * (3.0 * ce / (r3 * r));
            let f3 = (st.u.wedge(&st.a)
                + (st.a * 3.0 + st.u * (6.0 * fr.a_k)).wedge(&fr.k))
                * (ce / r3);
            let f2 = v2_vector_6d(fr).wedge(&fr.k) * (ce / r2);
            vec![(-4, f4), (-3, f3), (-2, f2)]
        }
    }
}

/// Retarded potential at a lab point, solving for the retarded frame.
pub fn lw_potential(w: &Worldline, y: &LorentzVector, e: f64) -> Result<(LorentzVector, RetardedFrame)> {
    let fr = w.retarded_frame(y)?;
    Ok((potential_at_frame(&fr, e), fr))
}

/// Field strength at a lab point, solving for the retarded frame.
pub fn lw_field(w: &Worldline, y: &LorentzVector, e: f64) -> Result<FieldTensor> {
    let fr = w.retarded_frame(y)?;
    Ok(FieldTensor { f: field_at_frame(&fr, e), frame: fr })
}

/// Symmetric stress bilinear of two field strengths:
/// B^{μν} = (1/Ω) [ ½ (Fa^{μλ} Fb^ν{}_λ + Fb^{μλ} Fa^ν{}_λ) − ¼ η^{μν} Fa·Fb ].
/// The physical stress of a field F is B(F, F).
pub fn stress_bilinear(fa: &Bivector, fb: &Bivector) -> SymTensor2 {
    assert_eq!(fa.dim(), fb.dim(), "dimension mismatch in stress bilinear");
    let dim = fa.dim();
    let d = dim.count();
    let omega = dim.sphere_area();
    let dot = fa.scalar_contraction(fb);
    let mut out = SymTensor2::zero(dim);
    for mu in 0..d {
        for nu in mu..d {
            let mut s = 0.0;
            for lam in 0..d {
                s += metric_sign(lam)
                    * 0.5
                    * (fa.get(mu, lam) * fb.get(nu, lam) + fb.get(mu, lam) * fa.get(nu, lam));
            }
            if mu == nu {
                s -= 0.25 * metric_sign(mu) * dot;
            }
            out.set(mu, nu, s / omega);
        }
    }
    out
}

/// Stress tensor of a single field strength.
pub fn stress_from_field(f: &Bivector) -> SymTensor2 {
    stress_bilinear(f, f)
}

/// Radiative stress in closed form: a null rank-one tensor
/// (coeff/Ω) k⊗k with coeff = e² (a·a − a_k²)/r² in 4D and
/// c V₂·V₂ / r⁴ in 6D.
pub fn radiative_stress_closed(fr: &RetardedFrame, e: f64) -> SymTensor2 {
    let st = &fr.state;
    let omega = st.dim().sphere_area();
    let coeff = match st.dim() {
        Dim::Four => {
            let aa = st.a.dot(&st.a);
            e * e * (aa - fr.a_k * fr.a_k) / (fr.r * fr.r * omega)
        }
        Dim::Six => {
            let v2 = v2_vector_6d(fr);
            let r2 = fr.r * fr.r;
            coupling_c(e) * v2.dot(&v2) / (r2 * r2 * omega)
        }
    };
    SymTensor2::sym_outer(&fr.k, &fr.k) * coeff
}

/// Stress split at a known frame. Bound parts come from the cross
/// bilinears of the field parts, grouped by total power of r; the
/// radiative part is the pure square of the far-field part.
pub fn stress_split_at_frame(fr: &RetardedFrame, e: f64) -> StressSplit {
    let parts = field_parts(fr, e);
    // the radiative stress is the pure square of the slowest-decaying
    // (far-field) part: r⁻¹ in 4D, r⁻² in 6D
    let far_key = match fr.state.dim() {
        Dim::Four => -1,
        Dim::Six => -2,
    };
    let mut bnd: BTreeMap<i32, SymTensor2> = BTreeMap::new();
    let mut rad = SymTensor2::zero(fr.state.dim());
    for (i, (ki, fi)) in parts.iter().enumerate() {
        for (kj, fj) in parts.iter().skip(i) {
            let key = ki + kj;
            let mut term = stress_bilinear(fi, fj);
            if ki != kj {
                term = term * 2.0;
            }
            if *ki == far_key && *kj == far_key {
                rad = rad + term;
            } else {
                bnd.entry(key)
                    .and_modify(|t| *t += term)
                    .or_insert(term);
            }
        }
    }
    StressSplit { t_rad: rad, t_bnd_parts: bnd }
}

/// Stress split at a lab point, solving for the retarded frame.
pub fn stress_split(w: &Worldline, y: &LorentzVector, e: f64) -> Result<(StressSplit, RetardedFrame)> {
    let fr = w.retarded_frame(y)?;
    Ok((stress_split_at_frame(&fr, e), fr))
}

/// Finite-difference residual of a local conservation law at a point.
#[derive(Debug, Clone)]
pub struct FdResidual {
    /// R^ν = ∂_μ X^{μν} approximated by central differences.
    pub residual: LorentzVector,
    /// Euclidean norm of the residual.
    pub norm: f64,
    /// Step actually used.
    pub h: f64,
    /// Set when the step is too coarse (h ≳ r, the stencil probes field
    /// variation rather than the derivative) or so small that roundoff
    /// dominates.
    pub h_warning: bool,
}

fn fd_divergence<G>(dim: Dim, y: &LorentzVector, h: f64, mut tensor_row: G) -> Result<LorentzVector>
where
    G: FnMut(&LorentzVector, usize) -> Result<Vec<f64>>,
{
    // tensor_row(y, mu) returns the row X^{μν}, ν = 0..d−1, at point y
    let d = dim.count();
    let mut res = LorentzVector::zero(dim);
    for mu in 0..d {
        let mut yp = *y;
        yp.set(mu, y.get(mu) + h);
        let mut ym = *y;
        ym.set(mu, y.get(mu) - h);
        let rp = tensor_row(&yp, mu)?;
        let rm = tensor_row(&ym, mu)?;
        for nu in 0..d {
            res.set(nu, res.get(nu) + (rp[nu] - rm[nu]) / (2.0 * h));
        }
    }
    Ok(res)
}

fn h_flags(fr: &RetardedFrame, y: &LorentzVector, h: f64) -> Result<bool> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let scale = y.max_abs().max(1.0);
    Ok(h > 0.05 * fr.r || h < 1e-9 * scale)
}

/// Central-difference residual of the source-free field equation
/// ∂_μ F^{μν} = 0 at a point off the worldline. Exact fields satisfy
/// this to O(h²).
pub fn maxwell_residual(w: &Worldline, y: &LorentzVector, e: f64, h: f64) -> Result<FdResidual> {
    let fr = w.retarded_frame(y)?;
    let h_warning = h_flags(&fr, y, h)?;
    let d = w.dim().count();
    let residual = fd_divergence(w.dim(), y, h, |p, mu| {
        let f = lw_field(w, p, e)?;
        Ok((0..d).map(|nu| f.f.get(mu, nu)).collect())
    })?;
    Ok(FdResidual { norm: residual.euclid_norm(), residual, h, h_warning })
}

/// Central-difference residual of stress conservation ∂_μ T^{μν} = 0 at
/// a point off the worldline.
pub fn stress_divergence_residual(
    w: &Worldline,
    y: &LorentzVector,
    e: f64,
    h: f64,
) -> Result<FdResidual> {
    let fr = w.retarded_frame(y)?;
    let h_warning = h_flags(&fr, y, h)?;
    let d = w.dim().count();
    let residual = fd_divergence(w.dim(), y, h, |p, mu| {
        let f = lw_field(w, p, e)?;
        let t = stress_from_field(&f.f);
        Ok((0..d).map(|nu| t.get(mu, nu)).collect())
    })?;
    Ok(FdResidual { norm: residual.euclid_norm(), residual, h, h_warning })
}
