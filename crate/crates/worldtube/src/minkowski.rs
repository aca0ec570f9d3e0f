//! Flat-spacetime tensor algebra in the mostly-plus signature.
//!
//! The metric is `η = diag(−1, +1, …, +1)` with index 0 the time axis and
//! units `c = 1`. Only the two spacetime dimensions used by the laboratory
//! (D = 4 and D = 6) are supported; vectors, bivectors and symmetric rank-2
//! tensors are stored in fixed-size arrays sized for D = 6 with the unused
//! tail kept at exactly zero, so no allocation happens in the quadrature
//! hot loops.
//!
//! Mixing dimensions is a contract violation and panics; recoverable
//! failures (non-timelike boost input, bad sphere dimension) return
//! [`Error`](crate::Error).

use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

/// Spacetime dimension, restricted to the two cases the laboratory studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    /// D = 4: ordinary electrodynamics.
    Four,
    /// D = 6: the higher-dimensional theory.
    Six,
}

impl Dim {
    /// Number of spacetime components.
    #[inline]
    pub const fn count(self) -> usize {
        match self {
            Dim::Four => 4,
            Dim::Six => 6,
        }
    }

    /// Dimension of the retarded sphere S^{D−2} the world tube is built from.
    #[inline]
    pub const fn sphere_dim(self) -> usize {
        self.count() - 2
    }

    /// Area of the unit retarded sphere, Ω_{D−2}.
    #[inline]
    pub fn sphere_area(self) -> f64 {
        sphere_area(self.count()).expect("supported dimension")
    }

    /// Number of independent bivector components, D(D−1)/2.
    #[inline]
    pub const fn bivector_len(self) -> usize {
        self.count() * (self.count() - 1) / 2
    }

    /// Number of independent symmetric-tensor components, D(D+1)/2.
    #[inline]
    pub const fn sym_len(self) -> usize {
        self.count() * (self.count() + 1) / 2
    }
}

impl std::fmt::Display for Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.count())
    }
}

impl std::str::FromStr for Dim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "4" => Ok(Dim::Four),
            "6" => Ok(Dim::Six),
            other => Err(Error::Parse(format!("unsupported dimension `{other}` (expected 4 or 6)"))),
        }
    }
}

/// Sign of the metric on axis `i`: −1 on the time axis, +1 on space axes.
#[inline]
pub const fn metric_sign(i: usize) -> f64 {
    if i == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Area of the unit sphere S^{D−2} bounding a ball in the spatial section
/// of D-dimensional spacetime: Ω_{D−2} = 2π^{(D−1)/2} / Γ((D−1)/2).
///
/// Computed by the recursion Ω_d = 2π Ω_{d−2}/(d−1) from Ω_0 = 2 and
/// Ω_1 = 2π, which avoids a Gamma-function dependency and is exact for the
/// integer orders used here (Ω_2 = 4π, Ω_4 = 8π²/3).
pub fn sphere_area(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Domain(format!("sphere_area requires D >= 2, got {dim}")));
    }
    let d = dim - 2;
    let (mut even, mut odd) = (2.0, 2.0 * PI); // Ω_0, Ω_1
    let mut k = 2usize;
    while k <= d {
        let next = 2.0 * PI / (k as f64 - 1.0)
            * if k % 2 == 0 { even } else { odd };
        if k % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
        k += 1;
    }
    Ok(if d % 2 == 0 { even } else { odd })
}

// ---------------------------------------------------------------------------
// LorentzVector
// ---------------------------------------------------------------------------

/// A D-component vector in Minkowski space (index 0 = time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzVector {
    dim: Dim,
    c: [f64; 6],
}

impl LorentzVector {
    /// The zero vector.
    pub fn zero(dim: Dim) -> Self {
        Self { dim, c: [0.0; 6] }
    }

    /// Build from a component slice; length must equal the dimension.
    pub fn from_slice(dim: Dim, comps: &[f64]) -> Self {
        assert_eq!(comps.len(), dim.count(), "component count must match dimension");
        let mut c = [0.0; 6];
        c[..comps.len()].copy_from_slice(comps);
        Self { dim, c }
    }

    /// Basis vector e_mu.
    pub fn basis(dim: Dim, mu: usize) -> Self {
        assert!(mu < dim.count(), "component index {mu} out of range for D={dim}");
        let mut v = Self::zero(dim);
        v.c[mu] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Component accessor (contravariant component v^mu).
    #[inline]
    pub fn get(&self, mu: usize) -> f64 {
        assert!(mu < self.dim.count(), "component index {mu} out of range for D={}", self.dim);
        self.c[mu]
    }

    /// Mutate one component.
    #[inline]
    pub fn set(&mut self, mu: usize, value: f64) {
        assert!(mu < self.dim.count(), "component index {mu} out of range for D={}", self.dim);
        self.c[mu] = value;
    }

    /// Components as a slice of length D.
    #[inline]
    pub fn components(&self) -> &[f64] {
        &self.c[..self.dim.count()]
    }

    /// Minkowski scalar product: −x⁰y⁰ + Σ xⁱyⁱ.
    #[inline]
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in dot");
        let mut s = -self.c[0] * other.c[0];
        for i in 1..self.dim.count() {
            s += self.c[i] * other.c[i];
        }
        s
    }

    /// Minkowski square, dot(self, self).
    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm of the component array (used for tolerances, not physics).
    pub fn euclid_norm(&self) -> f64 {
        self.components().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Euclidean norm of the spatial part only.
    pub fn spatial_norm(&self) -> f64 {
        self.components()[1..].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Wedge product: (x∧y)^{μν} = x^μ y^ν − x^ν y^μ.
    pub fn wedge(&self, other: &Self) -> Bivector {
        assert_eq!(self.dim, other.dim, "dimension mismatch in wedge");
        let mut b = Bivector::zero(self.dim);
        let n = self.dim.count();
        for i in 0..n {
            for j in (i + 1)..n {
                b.set(i, j, self.c[i] * other.c[j] - self.c[j] * other.c[i]);
            }
        }
        b
    }

    /// True when every component differs by at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .components()
                .iter()
                .zip(other.components())
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl Index<usize> for LorentzVector {
    type Output = f64;
    #[inline]
    fn index(&self, mu: usize) -> &f64 {
        assert!(mu < self.dim.count(), "component index {mu} out of range for D={}", self.dim);
        &self.c[mu]
    }
}

impl Add for LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        let mut out = self;
        for i in 0..self.dim.count() {
            out.c[i] += rhs.c[i];
        }
        out
    }
}

impl Sub for LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        let mut out = self;
        for i in 0..self.dim.count() {
            out.c[i] -= rhs.c[i];
        }
        out
    }
}

impl AddAssign for LorentzVector {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add-assign");
        for i in 0..self.dim.count() {
            self.c[i] += rhs.c[i];
        }
    }
}

impl SubAssign for LorentzVector {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub-assign");
        for i in 0..self.dim.count() {
            self.c[i] -= rhs.c[i];
        }
    }
}

impl Neg for LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> Self {
        let mut out = self;
        for i in 0..self.dim.count() {
            out.c[i] = -out.c[i];
        }
        out
    }
}

impl Mul<f64> for LorentzVector {
    type Output = LorentzVector;
    fn mul(self, s: f64) -> Self {
        let mut out = self;
        for i in 0..self.dim.count() {
            out.c[i] *= s;
        }
        out
    }
}

impl Mul<LorentzVector> for f64 {
    type Output = LorentzVector;
    fn mul(self, v: LorentzVector) -> LorentzVector {
        v * self
    }
}

// ---------------------------------------------------------------------------
// Bivector
// ---------------------------------------------------------------------------

/// Antisymmetric rank-2 tensor B^{μν} = −B^{νμ}.
///
/// Stored canonically as the packed strict upper triangle (μ < ν), so the
/// antisymmetry B\[i\]\[j\] = −B\[j\]\[i\] is exact by construction and no
/// sign drift is possible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bivector {
    dim: Dim,
    c: [f64; 15],
}

impl Bivector {
    /// The zero bivector.
    pub fn zero(dim: Dim) -> Self {
        Self { dim, c: [0.0; 15] }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Packed index of the ordered pair (i, j) with i < j.
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.dim.count());
        let d = self.dim.count();
        i * d - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Ordered component pairs (i, j), i < j, in packed-storage order.
    pub fn pairs(dim: Dim) -> impl Iterator<Item = (usize, usize)> {
        let d = dim.count();
        (0..d).flat_map(move |i| ((i + 1)..d).map(move |j| (i, j)))
    }

    /// Signed component B^{μν} for any index order (contract violation when
    /// out of range or μ = ν is requested off-diagonal semantics: B^{μμ} = 0).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let d = self.dim.count();
        assert!(i < d && j < d, "bivector index ({i},{j}) out of range for D={}", self.dim);
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.c[self.idx(i, j)],
            Greater => -self.c[self.idx(j, i)],
            Equal => 0.0,
        }
    }

    /// Set B^{ij} (i ≠ j); the (j, i) component follows by antisymmetry.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let d = self.dim.count();
        assert!(i < d && j < d && i != j, "bivector index ({i},{j}) invalid for D={}", self.dim);
        if i < j {
            let k = self.idx(i, j);
            self.c[k] = value;
        } else {
            let k = self.idx(j, i);
            self.c[k] = -value;
        }
    }

    /// Add `value` into B^{ij}.
    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, value: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + value);
    }

    /// Full double contraction B^{μν} G_{μν} (both indices lowered on G).
    pub fn scalar_contraction(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in contraction");
        let mut s = 0.0;
        for (i, j) in Self::pairs(self.dim) {
            // lowering both indices multiplies by η_i η_j; the two index
            // orders (i,j) and (j,i) contribute equally.
            s += 2.0 * metric_sign(i) * metric_sign(j) * self.get(i, j) * other.get(i, j);
        }
        s
    }

    /// Contraction with a vector: (B·v)^μ = B^{μν} v_ν = Σ_ν B^{μν} η_ν v^ν.
    pub fn contract_vector(&self, v: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim, v.dim(), "dimension mismatch in contraction");
        let d = self.dim.count();
        let mut out = LorentzVector::zero(self.dim);
        for mu in 0..d {
            let mut s = 0.0;
            for nu in 0..d {
                s += self.get(mu, nu) * metric_sign(nu) * v.get(nu);
            }
            out.set(mu, s);
        }
        out
    }

    /// Euclidean (Frobenius) norm over the full antisymmetric matrix.
    pub fn norm(&self) -> f64 {
        let n = self.dim.bivector_len();
        (2.0 * self.c[..n].iter().map(|x| x * x).sum::<f64>()).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim.bivector_len();
        self.c[..n].iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// True when every component differs by at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.dim.bivector_len();
        self.dim == other.dim
            && self.c[..n]
                .iter()
                .zip(&other.c[..n])
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl Add for Bivector {
    type Output = Bivector;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        let mut out = self;
        for k in 0..self.dim.bivector_len() {
            out.c[k] += rhs.c[k];
        }
        out
    }
}

impl Sub for Bivector {
    type Output = Bivector;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        let mut out = self;
        for k in 0..self.dim.bivector_len() {
            out.c[k] -= rhs.c[k];
        }
        out
    }
}

impl AddAssign for Bivector {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add-assign");
        for k in 0..self.dim.bivector_len() {
            self.c[k] += rhs.c[k];
        }
    }
}

impl Neg for Bivector {
    type Output = Bivector;
    fn neg(self) -> Self {
        let mut out = self;
        for k in 0..self.dim.bivector_len() {
            out.c[k] = -out.c[k];
        }
        out
    }
}

impl Mul<f64> for Bivector {
    type Output = Bivector;
    fn mul(self, s: f64) -> Self {
        let mut out = self;
        for k in 0..self.dim.bivector_len() {
            out.c[k] *= s;
        }
        out
    }
}

impl Mul<Bivector> for f64 {
    type Output = Bivector;
    fn mul(self, b: Bivector) -> Bivector {
        b * self
    }
}

// ---------------------------------------------------------------------------
// Symmetric rank-2 tensor
// ---------------------------------------------------------------------------

/// Symmetric rank-2 tensor T^{μν} = T^{νμ}, stored as the packed upper
/// triangle including the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor2 {
    dim: Dim,
    c: [f64; 21],
}

impl SymTensor2 {
    /// The zero tensor.
    pub fn zero(dim: Dim) -> Self {
        Self { dim, c: [0.0; 21] }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.dim.count());
        let d = self.dim.count();
        // rows above i hold Σ_{k<i}(d−k) = i·d − i(i−1)/2 entries
        i * d - (i * i - i) / 2 + (j - i)
    }

    /// Component T^{μν} for any index order.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let d = self.dim.count();
        assert!(i < d && j < d, "tensor index ({i},{j}) out of range for D={}", self.dim);
        if i <= j {
            self.c[self.idx(i, j)]
        } else {
            self.c[self.idx(j, i)]
        }
    }

    /// Set T^{ij} = T^{ji}.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let d = self.dim.count();
        assert!(i < d && j < d, "tensor index ({i},{j}) out of range for D={}", self.dim);
        let k = if i <= j { self.idx(i, j) } else { self.idx(j, i) };
        self.c[k] = value;
    }

    /// Add `value` into T^{ij}.
    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, value: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + value);
    }

    /// Mixed trace T^μ_μ = η_{μν} T^{μν}.
    /// Symmetrized outer product ½(v^μ w^ν + w^μ v^ν).
    pub fn sym_outer(v: &LorentzVector, w: &LorentzVector) -> Self {
        assert_eq!(v.dim(), w.dim(), "dimension mismatch in outer product");
        let d = v.dim().count();
        let mut out = Self::zero(v.dim());
        for i in 0..d {
            for j in i..d {
                out.set(i, j, 0.5 * (v.get(i) * w.get(j) + w.get(i) * v.get(j)));
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        let mut s = 0.0;
        for mu in 0..self.dim.count() {
            s += metric_sign(mu) * self.get(mu, mu);
        }
        s
    }

    /// Contraction with a covector given in contravariant components:
    /// v^ν = w_μ T^{μν} = Σ_μ η_μ w^μ T^{μν}.
    pub fn contract_covector(&self, w: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim, w.dim(), "dimension mismatch in contraction");
        let d = self.dim.count();
        let mut out = LorentzVector::zero(self.dim);
        for nu in 0..d {
            let mut s = 0.0;
            for mu in 0..d {
                s += metric_sign(mu) * w.get(mu) * self.get(mu, nu);
            }
            out.set(nu, s);
        }
        out
    }

    /// Euclidean (Frobenius) norm over the full symmetric matrix.
    pub fn norm(&self) -> f64 {
        let d = self.dim.count();
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                let t = self.get(i, j);
                s += t * t;
            }
        }
        s.sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        let n = self.dim.sym_len();
        self.c[..n].iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Add for SymTensor2 {
    type Output = SymTensor2;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        let mut out = self;
        for k in 0..self.dim.sym_len() {
            out.c[k] += rhs.c[k];
        }
        out
    }
}

impl Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        let mut out = self;
        for k in 0..self.dim.sym_len() {
            out.c[k] -= rhs.c[k];
        }
        out
    }
}

impl AddAssign for SymTensor2 {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add-assign");
        for k in 0..self.dim.sym_len() {
            self.c[k] += rhs.c[k];
        }
    }
}

impl Mul<f64> for SymTensor2 {
    type Output = SymTensor2;
    fn mul(self, s: f64) -> Self {
        let mut out = self;
        for k in 0..self.dim.sym_len() {
            out.c[k] *= s;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Lorentz transform
// ---------------------------------------------------------------------------

/// A Lorentz transformation with its inverse cached.
#[derive(Debug, Clone, Copy)]
pub struct LorentzTransform {
    dim: Dim,
    m: [[f64; 6]; 6],
    inv: [[f64; 6]; 6],
}

impl LorentzTransform {
    /// The identity transform.
    pub fn identity(dim: Dim) -> Self {
        let mut m = [[0.0; 6]; 6];
        for i in 0..dim.count() {
            m[i][i] = 1.0;
        }
        Self { dim, m, inv: m }
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Pure boost taking the unit timelike vector `u` to (1, 0, …, 0): the
    /// momentarily comoving Lorentz frame (MCLF) of a particle with
    /// velocity `u`.
    ///
    /// With γ = u⁰ the matrix is
    ///   Λ⁰₀ = γ, Λ⁰ⱼ = Λʲ₀ = −uʲ, Λⁱⱼ = δⁱⱼ + uⁱuʲ/(1+γ),
    /// symmetric in the spatial block; the inverse is the same boost with
    /// the spatial velocity reversed.
    pub fn boost_to_mclf(u: &LorentzVector) -> Result<Self> {
        let dim = u.dim();
        let uu = u.dot(u);
        if (uu + 1.0).abs() > 1e-9 || u.get(0) <= 0.0 {
            return Err(Error::Domain(format!(
                "boost_to_mclf needs a future-pointing unit timelike vector (u·u = {uu:.3e}, u0 = {:.3e})",
                u.get(0)
            )));
        }
        let d = dim.count();
        let gamma = u.get(0);
        let mut m = [[0.0; 6]; 6];
        let mut inv = [[0.0; 6]; 6];
        m[0][0] = gamma;
        inv[0][0] = gamma;
        for i in 1..d {
            m[0][i] = -u.get(i);
            m[i][0] = -u.get(i);
            inv[0][i] = u.get(i);
            inv[i][0] = u.get(i);
        }
        for i in 1..d {
            for j in 1..d {
                let kron = if i == j { 1.0 } else { 0.0 };
                let spatial = kron + u.get(i) * u.get(j) / (1.0 + gamma);
                m[i][j] = spatial;
                inv[i][j] = spatial;
            }
        }
        Ok(Self { dim, m, inv })
    }

    /// Apply the transform: v'^μ = Λ^μ_ν v^ν.
    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim, v.dim(), "dimension mismatch in transform");
        let d = self.dim.count();
        let mut out = LorentzVector::zero(self.dim);
        for mu in 0..d {
            let mut s = 0.0;
            for nu in 0..d {
                s += self.m[mu][nu] * v.get(nu);
            }
            out.set(mu, s);
        }
        out
    }

    /// Apply the cached inverse transform.
    pub fn apply_inverse(&self, v: &LorentzVector) -> LorentzVector {
        assert_eq!(self.dim, v.dim(), "dimension mismatch in transform");
        let d = self.dim.count();
        let mut out = LorentzVector::zero(self.dim);
        for mu in 0..d {
            let mut s = 0.0;
            for nu in 0..d {
                s += self.inv[mu][nu] * v.get(nu);
            }
            out.set(mu, s);
        }
        out
    }

    /// Largest absolute entry of ΛᵀηΛ − η; zero for an exact Lorentz matrix.
    pub fn orthogonality_residual(&self) -> f64 {
        let d = self.dim.count();
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut s = 0.0;
                for mu in 0..d {
                    s += self.m[mu][a] * metric_sign(mu) * self.m[mu][b];
                }
                let eta = if a == b { metric_sign(a) } else { 0.0 };
                worst = worst.max((s - eta).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn metric_signature_is_mostly_plus() {
        for dim in [Dim::Four, Dim::Six] {
            let e0 = LorentzVector::basis(dim, 0);
            let e1 = LorentzVector::basis(dim, 1);
            assert_eq!(e0.dot(&e0), -1.0);
            assert_eq!(e1.dot(&e1), 1.0);
            assert_eq!(e0.dot(&e1), 0.0);
        }
    }

    #[test]
    fn sphere_areas_match_closed_forms() {
        assert!((sphere_area(2).unwrap() - 2.0).abs() < TOL);
        assert!((sphere_area(3).unwrap() - 2.0 * PI).abs() < TOL);
        assert!((sphere_area(4).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area(5).unwrap() - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_area(6).unwrap() - 8.0 * PI * PI / 3.0).abs() < 1e-12);
        assert!(sphere_area(1).is_err());
    }

    #[test]
    fn wedge_is_antisymmetric_and_bilinear() {
        let x = LorentzVector::from_slice(Dim::Six, &[1.0, 2.0, -0.5, 3.0, 0.25, -1.5]);
        let y = LorentzVector::from_slice(Dim::Six, &[0.3, -1.0, 2.0, 0.0, 1.0, 0.5]);
        let b = x.wedge(&y);
        let c = y.wedge(&x);
        for (i, j) in Bivector::pairs(Dim::Six) {
            assert_eq!(b.get(i, j), -b.get(j, i), "storage antisymmetry must be exact");
            assert_eq!(b.get(i, j), -c.get(i, j), "wedge(x,y) = -wedge(y,x) exactly");
        }
        assert_eq!(x.wedge(&x).norm(), 0.0);
        // bilinearity against a brute-force matrix build
        let z = LorentzVector::from_slice(Dim::Six, &[1.0, 0.0, 1.0, -2.0, 0.5, 0.0]);
        let lhs = x.wedge(&(y + z * 2.0));
        for (i, j) in Bivector::pairs(Dim::Six) {
            let want = x.get(i) * (y.get(j) + 2.0 * z.get(j)) - x.get(j) * (y.get(i) + 2.0 * z.get(i));
            assert!((lhs.get(i, j) - want).abs() < TOL);
        }
    }

    #[test]
    fn double_contraction_of_velocity_acceleration_wedge() {
        // For u·u = −1, u·a = 0: (u∧a)·(u∧a) = 2[(u·u)(a·a) − (u·a)²] = −2(a·a).
        // Oracle: brute-force full-matrix contraction with explicit metric signs.
        let u = LorentzVector::from_slice(Dim::Six, &[1.25, 0.75, 0.0, 0.0, 0.0, 0.0]);
        assert!((u.dot(&u) + 1.0).abs() < TOL);
        let a = LorentzVector::from_slice(Dim::Six, &[0.3, 0.5, 0.2, -0.1, 0.0, 0.4]);
        let a = a + u * a.dot(&u); // project to u·a = 0
        assert!(a.dot(&u).abs() < TOL);
        let s = u.wedge(&a);
        let mut brute = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                brute += s.get(i, j) * metric_sign(i) * metric_sign(j) * s.get(i, j);
            }
        }
        assert!((s.scalar_contraction(&s) - brute).abs() < 1e-12);
        assert!((brute + 2.0 * a.dot(&a)).abs() < 1e-12);
    }

    #[test]
    fn bivector_vector_contraction_matches_brute_force() {
        let x = LorentzVector::from_slice(Dim::Four, &[1.0, -2.0, 0.5, 3.0]);
        let y = LorentzVector::from_slice(Dim::Four, &[0.2, 1.0, -1.0, 0.7]);
        let v = LorentzVector::from_slice(Dim::Four, &[2.0, 0.3, -0.4, 1.1]);
        let b = x.wedge(&y);
        let got = b.contract_vector(&v);
        for mu in 0..4 {
            let mut want = 0.0;
            for nu in 0..4 {
                want += b.get(mu, nu) * metric_sign(nu) * v.get(nu);
            }
            assert!((got.get(mu) - want).abs() < TOL);
        }
        // (x∧y)·v = x (y·v) − y (x·v)
        let closed = x * y.dot(&v) - y * x.dot(&v);
        assert!(got.approx_eq(&closed, 1e-12));
    }

    #[test]
    fn sym_tensor_storage_and_trace() {
        let mut t = SymTensor2::zero(Dim::Six);
        let mut v = 1.0;
        for i in 0..6 {
            for j in i..6 {
                t.set(i, j, v);
                v += 1.0;
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(t.get(i, j), t.get(j, i), "symmetry exact by storage");
            }
        }
        let want: f64 = -t.get(0, 0) + (1..6).map(|i| t.get(i, i)).sum::<f64>();
        assert_eq!(t.trace(), want);
    }

    #[test]
    fn boost_maps_velocity_to_rest_and_is_orthogonal() {
        for dim in [Dim::Four, Dim::Six] {
            let mut comps = vec![0.0; dim.count()];
            comps[1] = 0.6;
            comps[2] = -0.3;
            if dim == Dim::Six {
                comps[4] = 0.45;
            }
            let v2: f64 = comps[1..].iter().map(|x| x * x).sum();
            let gamma = 1.0 / (1.0 - v2).sqrt();
            comps[0] = gamma;
            for c in comps[1..].iter_mut() {
                *c *= gamma;
            }
            let u = LorentzVector::from_slice(dim, &comps);
            assert!((u.dot(&u) + 1.0).abs() < 1e-12);

            let lam = LorentzTransform::boost_to_mclf(&u).unwrap();
            let rest = lam.apply(&u);
            assert!((rest.get(0) - 1.0).abs() < 1e-12);
            for i in 1..dim.count() {
                assert!(rest.get(i).abs() < 1e-12);
            }
            assert!(lam.orthogonality_residual() < 1e-12);
            // inverse round trip
            let back = lam.apply_inverse(&rest);
            assert!(back.approx_eq(&u, 1e-12));
            // pure boost: spatial block symmetric
            let e1 = LorentzVector::basis(dim, 1);
            let e2 = LorentzVector::basis(dim, 2);
            assert!((lam.apply(&e1).get(2) - lam.apply(&e2).get(1)).abs() < 1e-14);
        }
    }

    #[test]
    fn boost_rejects_non_timelike_input() {
        let v = LorentzVector::from_slice(Dim::Four, &[1.0, 1.0, 0.0, 0.0]);
        assert!(LorentzTransform::boost_to_mclf(&v).is_err());
        let s = LorentzVector::from_slice(Dim::Four, &[0.5, 1.2, 0.0, 0.0]);
        assert!(LorentzTransform::boost_to_mclf(&s).is_err());
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn dot_with_mixed_dimensions_is_a_contract_violation() {
        let x = LorentzVector::zero(Dim::Four);
        let y = LorentzVector::zero(Dim::Six);
        let _ = x.dot(&y);
    }

    #[test]
    fn wedge_basis_example() {
        let e0 = LorentzVector::basis(Dim::Four, 0);
        let e1 = LorentzVector::basis(Dim::Four, 1);
        let b = e0.wedge(&e1);
        assert_eq!(b.get(0, 1), 1.0);
        assert_eq!(b.get(1, 0), -1.0);
        for (i, j) in Bivector::pairs(Dim::Four) {
            if (i, j) != (0, 1) {
                assert_eq!(b.get(i, j), 0.0);
            }
        }
    }
}
