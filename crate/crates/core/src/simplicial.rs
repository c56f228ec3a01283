//! Smooth simplices of invertible matrices, their faces, degeneracies and
//! shuffle products, and the simplex logarithm
//! `L(σ) = ∫_Δ (∂_1 σ · σ^{-1}) ∧ … ∧ (∂_n σ · σ^{-1})`.
//!
//! Simplices are built from closed-form generators so values and partial
//! derivatives are exact; only the simplex integral is numerical
//! (Gauss–Legendre on a collapsed cube).

use nalgebra::DMatrix;

use crate::algebra::{Algebra, AlgebraElement, MatrixOverA};
use crate::chains::LieChain;
use crate::error::{Error, Result};
use crate::fredholm::expm;
use crate::perm::enumerate_shuffles;
use crate::{C64, OpMatrix};

/// Smooth map `Δ^n → GL_k(ℂ)` with `σ(vertex 0) = 1`, in closed form.
#[derive(Debug, Clone)]
pub enum SmoothSimplex {
    /// Constant simplex at the identity, any dimension.
    Identity { dim: usize, size: usize },
    /// One-simplex `t ↦ exp(-t g)`.
    ExponentialPath { generator: OpMatrix },
    /// Pointwise matrix product of two simplices of the same shape.
    Product(Box<SmoothSimplex>, Box<SmoothSimplex>),
    /// Pointwise Kronecker product of two simplices of the same dimension.
    Tensor(Box<SmoothSimplex>, Box<SmoothSimplex>),
    /// Degeneracy `s_j`: collapses `t_j + t_{j+1}` (or drops `t_1` for
    /// `j = 0`), raising the dimension by one.
    Degeneracy { inner: Box<SmoothSimplex>, index: usize },
    /// Face `d_i`: inserts a zero coordinate, except `d_0` which rotates
    /// the barycentric coordinate in and renormalizes at vertex 1.
    Face { inner: Box<SmoothSimplex>, index: usize },
}

fn kron(a: &OpMatrix, b: &OpMatrix) -> OpMatrix {
    a.kronecker(b)
}

impl SmoothSimplex {
    pub fn exponential_path(generator: OpMatrix) -> Self {
        SmoothSimplex::ExponentialPath { generator }
    }

    pub fn product(a: SmoothSimplex, b: SmoothSimplex) -> Result<Self> {
        if a.dim() != b.dim() || a.size() != b.size() {
            return Err(Error::SizeMismatch("simplex product shapes".into()));
        }
        Ok(SmoothSimplex::Product(Box::new(a), Box::new(b)))
    }

    pub fn tensor(a: SmoothSimplex, b: SmoothSimplex) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::SizeMismatch("simplex tensor dimensions".into()));
        }
        Ok(SmoothSimplex::Tensor(Box::new(a), Box::new(b)))
    }

    pub fn degeneracy(self, index: usize) -> Result<Self> {
        if index > self.dim() {
            return Err(Error::Validation(format!(
                "degeneracy index {index} out of range for dimension {}",
                self.dim()
            )));
        }
        Ok(SmoothSimplex::Degeneracy {
            inner: Box::new(self),
            index,
        })
    }

    pub fn face(self, index: usize) -> Result<Self> {
        if self.dim() == 0 || index > self.dim() {
            return Err(Error::Validation(format!(
                "face index {index} out of range for dimension {}",
                self.dim()
            )));
        }
        Ok(SmoothSimplex::Face {
            inner: Box::new(self),
            index,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            SmoothSimplex::Identity { dim, .. } => *dim,
            SmoothSimplex::ExponentialPath { .. } => 1,
            SmoothSimplex::Product(a, _) => a.dim(),
            SmoothSimplex::Tensor(a, _) => a.dim(),
            SmoothSimplex::Degeneracy { inner, .. } => inner.dim() + 1,
            SmoothSimplex::Face { inner, .. } => inner.dim() - 1,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            SmoothSimplex::Identity { size, .. } => *size,
            SmoothSimplex::ExponentialPath { generator } => generator.nrows(),
            SmoothSimplex::Product(a, _) => a.size(),
            SmoothSimplex::Tensor(a, b) => a.size() * b.size(),
            SmoothSimplex::Degeneracy { inner, .. } => inner.size(),
            SmoothSimplex::Face { inner, .. } => inner.size(),
        }
    }

    /// Value together with all partial derivatives `∂/∂t_j`, `j = 1..n`.
    fn eval(&self, t: &[f64]) -> Result<(OpMatrix, Vec<OpMatrix>)> {
        match self {
            SmoothSimplex::Identity { dim, size } => {
                let id = DMatrix::identity(*size, *size);
                let zero = DMatrix::zeros(*size, *size);
                Ok((id, vec![zero; *dim]))
            }
            SmoothSimplex::ExponentialPath { generator } => {
                let v = expm(&(generator * C64::new(-t[0], 0.0)));
                let d = -(generator * &v);
                Ok((v, vec![d]))
            }
            SmoothSimplex::Product(a, b) => {
                let (va, da) = a.eval(t)?;
                let (vb, db) = b.eval(t)?;
                let v = &va * &vb;
                let d = da
                    .iter()
                    .zip(&db)
                    .map(|(x, y)| x * &vb + &va * y)
                    .collect();
                Ok((v, d))
            }
            SmoothSimplex::Tensor(a, b) => {
                let (va, da) = a.eval(t)?;
                let (vb, db) = b.eval(t)?;
                let v = kron(&va, &vb);
                let d = da
                    .iter()
                    .zip(&db)
                    .map(|(x, y)| kron(x, &vb) + kron(&va, y))
                    .collect();
                Ok((v, d))
            }
            SmoothSimplex::Degeneracy { inner, index } => {
                let n1 = self.dim();
                let j = *index;
                let mut u = Vec::with_capacity(n1 - 1);
                if j == 0 {
                    u.extend_from_slice(&t[1..]);
                } else {
                    u.extend_from_slice(&t[..j - 1]);
                    u.push(t[j - 1] + t[j]);
                    u.extend_from_slice(&t[j + 1..]);
                }
                let (v, di) = inner.eval(&u)?;
                let mut d = Vec::with_capacity(n1);
                for k in 1..=n1 {
                    if j == 0 {
                        d.push(if k == 1 {
                            DMatrix::zeros(v.nrows(), v.ncols())
                        } else {
                            di[k - 2].clone()
                        });
                    } else if k < j {
                        d.push(di[k - 1].clone());
                    } else if k == j || k == j + 1 {
                        d.push(di[j - 1].clone());
                    } else {
                        d.push(di[k - 2].clone());
                    }
                }
                Ok((v, d))
            }
            SmoothSimplex::Face { inner, index } => {
                let n1 = self.dim();
                let i = *index;
                if i == 0 {
                    let head = 1.0 - t.iter().sum::<f64>();
                    let mut u = Vec::with_capacity(n1 + 1);
                    u.push(head);
                    u.extend_from_slice(t);
                    let (v, di) = inner.eval(&u)?;
                    let mut vertex1 = vec![0.0; n1 + 1];
                    vertex1[0] = 1.0;
                    let (v1, _) = inner.eval(&vertex1)?;
                    let twist = v1.clone().try_inverse().ok_or(Error::SingularNode {
                        node: vertex1.clone(),
                    })?;
                    let value = &v * &twist;
                    let d = (0..n1)
                        .map(|k| (&di[k + 1] - &di[0]) * &twist)
                        .collect();
                    Ok((value, d))
                } else {
                    let mut u = Vec::with_capacity(n1 + 1);
                    u.extend_from_slice(&t[..i - 1]);
                    u.push(0.0);
                    u.extend_from_slice(&t[i - 1..]);
                    let (v, di) = inner.eval(&u)?;
                    let d = (1..=n1)
                        .map(|k| if k < i { di[k - 1].clone() } else { di[k].clone() })
                        .collect();
                    Ok((v, d))
                }
            }
        }
    }

    pub fn value(&self, t: &[f64]) -> Result<OpMatrix> {
        if t.len() != self.dim() {
            return Err(Error::SizeMismatch("coordinate count".into()));
        }
        self.eval(t).map(|(v, _)| v)
    }

    /// Logarithmic derivative `Γ_j(σ)(t) = ∂_j σ(t) · σ(t)^{-1}`.
    pub fn gamma(&self, j: usize, t: &[f64]) -> Result<OpMatrix> {
        if j == 0 || j > self.dim() || t.len() != self.dim() {
            return Err(Error::SizeMismatch("logarithmic derivative index".into()));
        }
        let (v, d) = self.eval(t)?;
        let inv = v.try_inverse().ok_or(Error::SingularNode { node: t.to_vec() })?;
        Ok(&d[j - 1] * inv)
    }
}

// ---------------------------------------------------------------------------
// Quadrature over the simplex.
// ---------------------------------------------------------------------------

/// Gauss–Legendre nodes/weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `order`-point rule, exact on polynomials of degree `2·order - 1`.
    pub fn gauss_legendre(order: usize) -> Self {
        let n = order;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for k in 0..n {
            // Newton iteration from the Chebyshev estimate
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // map [-1, 1] -> [0, 1]
            nodes.push(0.5 * (1.0 - x));
            weights.push(0.5 * w);
        }
        Self { nodes, weights }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Visit quadrature nodes of the standard `n`-simplex via the collapsed
/// cube; calls `f(t, weight)` for each node.
fn simplex_quadrature<F: FnMut(&[f64], f64) -> Result<()>>(
    dim: usize,
    rule: &QuadratureRule,
    f: &mut F,
) -> Result<()> {
    let k = rule.nodes.len();
    let mut idx = vec![0usize; dim];
    loop {
        let mut t = vec![0.0; dim];
        let mut jac = 1.0;
        let mut rem = 1.0;
        for (a, &i) in idx.iter().enumerate() {
            t[a] = rule.nodes[i] * rem;
            jac *= rem * rule.weights[i];
            rem -= t[a];
        }
        f(&t, jac)?;
        let mut pos = 0;
        loop {
            if pos >= dim {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Numerically integrate a matrix-valued function over the simplex.
pub fn integrate_over_simplex<F: FnMut(&[f64]) -> Result<OpMatrix>>(
    dim: usize,
    size: usize,
    rule: &QuadratureRule,
    mut f: F,
) -> Result<OpMatrix> {
    let mut acc: OpMatrix = DMatrix::zeros(size, size);
    simplex_quadrature(dim, rule, &mut |t, w| {
        acc += f(t)? * C64::new(w, 0.0);
        Ok(())
    })?;
    Ok(acc)
}

/// Wrap a numeric matrix as a matrix over the one-slot pointwise algebra.
pub fn numeric_matrix(m: &OpMatrix) -> MatrixOverA {
    let alg = Algebra::Pointwise { slots: 1 };
    let entries = m
        .transpose()
        .iter()
        .cloned()
        .map(|c| AlgebraElement::pointwise(vec![c]))
        .collect::<Vec<_>>();
    // transpose + column iteration = row-major order
    MatrixOverA::from_entries(alg, m.nrows(), entries).expect("square numeric matrix")
}

/// The simplex logarithm as a wedge chain: one quadrature node contributes
/// the word `w · Γ_1(t) ∧ … ∧ Γ_n(t)`. Entries are numeric matrices
/// wrapped over the one-slot pointwise algebra.
pub fn logarithm_chain(sigma: &SmoothSimplex, rule: &QuadratureRule) -> Result<LieChain> {
    let n = sigma.dim();
    if n == 0 {
        return Err(Error::Validation("the logarithm needs dimension at least 1".into()));
    }
    let size = sigma.size();
    let mut out = LieChain::zero(&Algebra::Pointwise { slots: 1 }, n, size);
    simplex_quadrature(n, rule, &mut |t, w| {
        let (v, d) = sigma.eval(t)?;
        let inv = v
            .clone()
            .try_inverse()
            .ok_or(Error::SingularNode { node: t.to_vec() })?;
        let letters: Vec<MatrixOverA> = (0..n).map(|j| numeric_matrix(&(&d[j] * &inv))).collect();
        out.push_term(C64::new(w, 0.0), letters)?;
        Ok(())
    })?;
    Ok(out)
}

/// For a one-simplex the logarithm is a single matrix.
pub fn logarithm_matrix(sigma: &SmoothSimplex, rule: &QuadratureRule) -> Result<OpMatrix> {
    if sigma.dim() != 1 {
        return Err(Error::Validation("matrix logarithm needs a one-simplex".into()));
    }
    let size = sigma.size();
    integrate_over_simplex(1, size, rule, |t| {
        let (v, d) = sigma.eval(t)?;
        let inv = v
            .clone()
            .try_inverse()
            .ok_or(Error::SingularNode { node: t.to_vec() })?;
        Ok(&d[0] * inv)
    })
}

/// One signed term of a simplex shuffle product.
#[derive(Debug, Clone)]
pub struct SimplexTerm {
    pub sign: i32,
    pub simplex: SmoothSimplex,
}

/// Exterior shuffle product of simplices:
/// `σ × τ = Σ sgn(μ,ν) (s_{ν} σ) ⊗ (s_{μ} τ)` over `(n, m)`-shuffles, with
/// the degeneracies of each factor indexed by the other factor's block.
pub fn simplex_shuffle(sigma: &SmoothSimplex, tau: &SmoothSimplex) -> Result<Vec<SimplexTerm>> {
    let n = sigma.dim();
    let m = tau.dim();
    let shuffles = enumerate_shuffles(n, m);
    let mut out = Vec::with_capacity(shuffles.members.len());
    for sh in shuffles.members {
        // block positions double as 0-based degeneracy indices
        let mut left = sigma.clone();
        for &pos in &sh.second_block {
            left = left.degeneracy(pos)?;
        }
        let mut right = tau.clone();
        for &pos in &sh.first_block {
            right = right.degeneracy(pos)?;
        }
        out.push(SimplexTerm {
            sign: sh.sign,
            simplex: SmoothSimplex::tensor(left, right)?,
        });
    }
    Ok(out)
}
