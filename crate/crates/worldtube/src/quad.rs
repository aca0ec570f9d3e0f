//! Quadrature engines: Gauss–Jacobi nodes on [−1, 1], product quadrature
//! on the unit spheres S² and S⁴, and an adaptive vector-valued line
//! integrator.
//!
//! The sphere rules come from the iterated-angle factorization of the
//! measure: on S⁴,
//!   dΩ₄ = dφ · dt₁ · (1−t₂²)^{1/2} dt₂ · (1−t₃²) dt₃,  tᵢ = cos ϑᵢ,
//! so a trapezoid rule in the periodic angle φ combined with Gauss rules
//! for the weights (1−t²)^γ, γ ∈ {0, 1/2, 1}, integrates every polynomial
//! in the direction components exactly up to the declared degree. All
//! Gauss nodes are produced by one Golub–Welsch routine (symmetric
//! tridiagonal eigenproblem) from the Gegenbauer recurrence
//!   b_k = k(k+2γ) / ((2k+2γ+1)(2k+2γ−1)),
//! so there are no hard-coded abscissa tables anywhere.
//!
//! Reductions over quadrature nodes use fixed-order pairwise summation,
//! making every result bitwise deterministic regardless of how the node
//! evaluations are scheduled.

use crate::error::{Error, Result};
use crate::minkowski::Dim;
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Weight exponent γ in (1−t²)^γ on [−1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiWeight {
    /// γ = 0: Gauss–Legendre.
    Legendre,
    /// γ = 1/2.
    Half,
    /// γ = 1.
    One,
}

impl JacobiWeight {
    /// Zeroth moment μ₀ = ∫_{−1}^{1} (1−t²)^γ dt.
    fn mu0(self) -> f64 {
        match self {
            JacobiWeight::Legendre => 2.0,
            JacobiWeight::Half => PI / 2.0,
            JacobiWeight::One => 4.0 / 3.0,
        }
    }

    /// γ as a float.
    fn gamma(self) -> f64 {
        match self {
            JacobiWeight::Legendre => 0.0,
            JacobiWeight::Half => 0.5,
            JacobiWeight::One => 1.0,
        }
    }
}

/// Gauss nodes and weights for ∫_{−1}^{1} f(t) (1−t²)^γ dt with n points
/// (exact for polynomials f of degree ≤ 2n−1), by Golub–Welsch.
pub fn gauss_jacobi(n: usize, weight: JacobiWeight) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_jacobi needs at least one node");
    let g = weight.gamma();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let b = kf * (kf + 2.0 * g) / ((2.0 * kf + 2.0 * g + 1.0) * (2.0 * kf + 2.0 * g - 1.0));
        let sb = b.sqrt();
        jac[(k - 1, k)] = sb;
        jac[(k, k - 1)] = sb;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], weight.mu0() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // the rule is symmetric about 0; average mirror pairs to remove
    // eigensolver noise so nodes/weights are exactly symmetric
    let m = n;
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m {
        let j = m - 1 - i;
        nodes[i] = 0.5 * (pairs[i].0 - pairs[j].0);
        weights[i] = 0.5 * (pairs[i].1 + pairs[j].1);
    }
    (nodes, weights)
}

/// One direction node of a sphere rule: unit spatial direction `n` in the
/// instantaneous rest frame (first `D−1` entries used) and its weight.
#[derive(Debug, Clone, Copy)]
pub struct SphereNode {
    pub n: [f64; 5],
    pub weight: f64,
}

/// Product quadrature on the retarded sphere S^{D−2}.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    dim: Dim,
    degree: usize,
    nodes: Vec<SphereNode>,
}

impl SphereQuadrature {
    /// Rule integrating all polynomials in the direction components up to
    /// `degree` exactly.
    pub fn new(dim: Dim, degree: usize) -> Self {
        let degree = degree.max(1);
        let n_phi = (degree + 1).max(4);
        let n_t = degree / 2 + 1; // 2·n_t − 1 ≥ degree
        let w_phi = 2.0 * PI / n_phi as f64;
        let phis: Vec<f64> = (0..n_phi)
            .map(|j| 2.0 * PI * (j as f64 + 0.5) / n_phi as f64)
            .collect();
        let mut nodes = Vec::new();
        match dim {
            Dim::Four => {
                let (t1, w1) = gauss_jacobi(n_t, JacobiWeight::Legendre);
                for (i1, &a) in t1.iter().enumerate() {
                    let s1 = (1.0 - a * a).max(0.0).sqrt();
                    for &phi in &phis {
                        let (sp, cp) = phi.sin_cos();
                        nodes.push(SphereNode {
                            n: [s1 * cp, s1 * sp, a, 0.0, 0.0],
                            weight: w1[i1] * w_phi,
                        });
                    }
                }
            }
            Dim::Six => {
                let (t1, w1) = gauss_jacobi(n_t, JacobiWeight::Legendre);
                let (t2, w2) = gauss_jacobi(n_t, JacobiWeight::Half);
                let (t3, w3) = gauss_jacobi(n_t, JacobiWeight::One);
                for (i3, &c3) in t3.iter().enumerate() {
                    let s3 = (1.0 - c3 * c3).max(0.0).sqrt();
                    for (i2, &c2) in t2.iter().enumerate() {
                        let s2 = (1.0 - c2 * c2).max(0.0).sqrt();
                        for (i1, &c1) in t1.iter().enumerate() {
                            let s1 = (1.0 - c1 * c1).max(0.0).sqrt();
                            let w = w1[i1] * w2[i2] * w3[i3] * w_phi;
                            for &phi in &phis {
                                let (sp, cp) = phi.sin_cos();
                                nodes.push(SphereNode {
                                    n: [
                                        s1 * s2 * s3 * cp,
                                        s1 * s2 * s3 * sp,
                                        c1 * s2 * s3,
                                        c2 * s3,
                                        c3,
                                    ],
                                    weight: w,
                                });
                            }
                        }
                    }
                }
            }
        }
        Self { dim, degree, nodes }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Maximum polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[SphereNode] {
        &self.nodes
    }

    /// Weighted sum over nodes with deterministic pairwise reduction.
    pub fn integrate<F: FnMut(&SphereNode) -> f64>(&self, mut f: F) -> f64 {
        let vals: Vec<f64> = self.nodes.iter().map(|nd| nd.weight * f(nd)).collect();
        pairwise_sum(&vals)
    }
}

/// Fixed-order pairwise (cascade) summation: deterministic for a given
/// input order and markedly more accurate than sequential accumulation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        let mut s = 0.0;
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Result of adaptive line integration.
#[derive(Debug, Clone)]
pub struct QuadratureOutcome {
    /// Componentwise integral value.
    pub value: Vec<f64>,
    /// Accumulated error estimate (max-norm across components).
    pub est_error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

fn gauss15() -> &'static (Vec<f64>, Vec<f64>) {
    static CELL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CELL.get_or_init(|| gauss_jacobi(15, JacobiWeight::Legendre))
}

fn gauss15_panel<F: FnMut(f64) -> Vec<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
    dim: usize,
    evals: &mut usize,
) -> Vec<f64> {
    let (nodes, weights) = gauss15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = vec![0.0; dim];
    for (x, w) in nodes.iter().zip(weights) {
        let v = f(mid + half * x);
        *evals += 1;
        debug_assert_eq!(v.len(), dim);
        for (ak, vk) in acc.iter_mut().zip(&v) {
            *ak += w * half * vk;
        }
    }
    acc
}

/// Adaptive vector-valued quadrature of `f` over [a, b].
///
/// Each subinterval is integrated with a 15-point Gauss panel; the error
/// estimate is the max-norm difference between the panel and the sum of
/// its two half panels, and intervals are split (left first, so
/// evaluation order is deterministic) until the local share of the
/// tolerance budget is met. Tolerance: max(abs_tol, rel_tol·‖I‖) spread
/// proportionally to interval length.
pub fn integrate_adaptive<F: FnMut(f64) -> Vec<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureOutcome> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("adaptive quadrature needs a finite interval".into()));
    }
    if a > b {
        return Err(Error::Domain(format!("inverted interval [{a}, {b}]")));
    }
    let mut evals = 1usize;
    let dim = f(0.5 * (a + b)).len();
    if a == b {
        return Ok(QuadratureOutcome { value: vec![0.0; dim], est_error: 0.0, evaluations: evals });
    }
    let rough = gauss15_panel(&mut f, a, b, dim, &mut evals);
    let rough_mag = rough.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tol_global = abs_tol.max(rel_tol * rough_mag);

    const MAX_DEPTH: usize = 48;
    const MAX_EVALS: usize = 400_000;
    struct Item {
        a: f64,
        b: f64,
        whole: Vec<f64>,
        depth: usize,
    }
    let mut stack = vec![Item { a, b, whole: rough, depth: 0 }];
    let mut total = vec![0.0; dim];
    let mut est_error = 0.0_f64;
    let mut exhausted = false;

    while let Some(item) = stack.pop() {
        let mid = 0.5 * (item.a + item.b);
        let left = gauss15_panel(&mut f, item.a, mid, dim, &mut evals);
        let right = gauss15_panel(&mut f, mid, item.b, dim, &mut evals);
        let mut err = 0.0_f64;
        for k in 0..dim {
            err = err.max((item.whole[k] - left[k] - right[k]).abs());
        }
        let local_budget = tol_global * ((item.b - item.a) / (b - a));
        let out_of_work = item.depth >= MAX_DEPTH || evals >= MAX_EVALS;
        if err <= local_budget || out_of_work {
            if out_of_work && err > local_budget {
                exhausted = true;
            }
            for k in 0..dim {
                total[k] += left[k] + right[k];
            }
            est_error += err;
        } else {
            // push right first so the left half is processed next (LIFO)
            stack.push(Item { a: mid, b: item.b, whole: right, depth: item.depth + 1 });
            stack.push(Item { a: item.a, b: mid, whole: left, depth: item.depth + 1 });
        }
    }

    if exhausted && est_error > 4.0 * tol_global {
        return Err(Error::Precision { requested: tol_global, achieved: est_error });
    }
    Ok(QuadratureOutcome { value: total, est_error, evaluations: evals })
}
