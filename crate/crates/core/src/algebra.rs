//! Concrete commutative coefficient algebras, matrices over them, and the
//! interior tensor embedding used by the product constructions.
//!
//! Three desk-scale algebras are supported: pointwise complex slots,
//! finitely supported Laurent polynomials, and polynomials in a fixed
//! normal generator. Every variant is commutative and unital.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::{C64, OpMatrix};

/// Handle describing which commutative algebra an element belongs to.
#[derive(Debug, Clone)]
pub enum Algebra {
    /// `C^k` with componentwise operations.
    Pointwise { slots: usize },
    /// Laurent polynomials `C[z, z^{-1}]` with finite support.
    Laurent,
    /// Polynomials in one fixed normal generator; elements of the same
    /// algebra share the generator handle.
    OperatorGenerated { generator: Arc<OpMatrix> },
}

impl Algebra {
    pub fn same(&self, other: &Algebra) -> bool {
        match (self, other) {
            (Algebra::Pointwise { slots: a }, Algebra::Pointwise { slots: b }) => a == b,
            (Algebra::Laurent, Algebra::Laurent) => true,
            (Algebra::OperatorGenerated { generator: a }, Algebra::OperatorGenerated { generator: b }) => {
                Arc::ptr_eq(a, b)
            }
            _ => false,
        }
    }

    pub fn operator_generated(generator: OpMatrix) -> Self {
        Algebra::OperatorGenerated {
            generator: Arc::new(generator),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Pointwise(Vec<C64>),
    Laurent(BTreeMap<i64, C64>),
    Poly(Vec<C64>),
}

/// Element of one of the supported commutative algebras.
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    algebra: Algebra,
    payload: Payload,
}

impl AlgebraElement {
    pub fn pointwise(values: Vec<C64>) -> Self {
        Self {
            algebra: Algebra::Pointwise { slots: values.len() },
            payload: Payload::Pointwise(values),
        }
    }

    pub fn laurent<I: IntoIterator<Item = (i64, C64)>>(coeffs: I) -> Self {
        let mut map = BTreeMap::new();
        for (d, c) in coeffs {
            if c != C64::new(0.0, 0.0) {
                *map.entry(d).or_insert(C64::new(0.0, 0.0)) += c;
            }
        }
        map.retain(|_, c| *c != C64::new(0.0, 0.0));
        Self {
            algebra: Algebra::Laurent,
            payload: Payload::Laurent(map),
        }
    }

    /// `z^d`
    pub fn laurent_monomial(d: i64) -> Self {
        Self::laurent([(d, C64::new(1.0, 0.0))])
    }

    pub fn poly(algebra: &Algebra, coeffs: Vec<C64>) -> Result<Self> {
        match algebra {
            Algebra::OperatorGenerated { .. } => Ok(Self {
                algebra: algebra.clone(),
                payload: Payload::Poly(coeffs),
            }),
            _ => Err(Error::AlgebraMismatch(
                "polynomial payload requires an operator-generated algebra".into(),
            )),
        }
    }

    pub fn unit(algebra: &Algebra) -> Self {
        Self::scalar(algebra, C64::new(1.0, 0.0))
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::scalar(algebra, C64::new(0.0, 0.0))
    }

    /// `c · 1` in the given algebra.
    pub fn scalar(algebra: &Algebra, c: C64) -> Self {
        let payload = match algebra {
            Algebra::Pointwise { slots } => Payload::Pointwise(vec![c; *slots]),
            Algebra::Laurent => {
                let mut m = BTreeMap::new();
                if c != C64::new(0.0, 0.0) {
                    m.insert(0, c);
                }
                Payload::Laurent(m)
            }
            Algebra::OperatorGenerated { .. } => Payload::Poly(vec![c]),
        };
        Self {
            algebra: algebra.clone(),
            payload,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.algebra.same(&other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(
                "operands belong to different algebras".into(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Pointwise(a), Payload::Pointwise(b)) => {
                Payload::Pointwise(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Payload::Laurent(a), Payload::Laurent(b)) => {
                let mut m = a.clone();
                for (d, c) in b {
                    *m.entry(*d).or_insert(C64::new(0.0, 0.0)) += c;
                }
                Payload::Laurent(m)
            }
            (Payload::Poly(a), Payload::Poly(b)) => {
                let n = a.len().max(b.len());
                let mut v = vec![C64::new(0.0, 0.0); n];
                for (i, c) in a.iter().enumerate() {
                    v[i] += c;
                }
                for (i, c) in b.iter().enumerate() {
                    v[i] += c;
                }
                Payload::Poly(v)
            }
            _ => unreachable!("check_same guarantees matching payloads"),
        };
        Ok(Self {
            algebra: self.algebra.clone(),
            payload,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        let payload = match &self.payload {
            Payload::Pointwise(v) => Payload::Pointwise(v.iter().map(|x| x * c).collect()),
            Payload::Laurent(m) => Payload::Laurent(m.iter().map(|(d, x)| (*d, x * c)).collect()),
            Payload::Poly(v) => Payload::Poly(v.iter().map(|x| x * c).collect()),
        };
        Self {
            algebra: self.algebra.clone(),
            payload,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Commutative product in the shared algebra.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Pointwise(a), Payload::Pointwise(b)) => {
                Payload::Pointwise(a.iter().zip(b).map(|(x, y)| x * y).collect())
            }
            (Payload::Laurent(a), Payload::Laurent(b)) => {
                let mut m: BTreeMap<i64, C64> = BTreeMap::new();
                for (da, ca) in a {
                    for (db, cb) in b {
                        *m.entry(da + db).or_insert(C64::new(0.0, 0.0)) += ca * cb;
                    }
                }
                Payload::Laurent(m)
            }
            (Payload::Poly(a), Payload::Poly(b)) => {
                if a.is_empty() || b.is_empty() {
                    Payload::Poly(vec![])
                } else {
                    let mut v = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
                    for (i, ca) in a.iter().enumerate() {
                        for (j, cb) in b.iter().enumerate() {
                            v[i + j] += ca * cb;
                        }
                    }
                    Payload::Poly(v)
                }
            }
            _ => unreachable!(),
        };
        Ok(Self {
            algebra: self.algebra.clone(),
            payload,
        })
    }

    /// Largest absolute Laurent degree in the support; 0 for the other
    /// variants. Used for band-window guards.
    pub fn band_degree(&self) -> i64 {
        match &self.payload {
            Payload::Laurent(m) => m.keys().map(|d| d.abs()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.payload {
            Payload::Pointwise(v) => v.iter().map(|c| c.norm()).fold(0.0, f64::max),
            Payload::Laurent(m) => m.values().map(|c| c.norm()).fold(0.0, f64::max),
            Payload::Poly(v) => v.iter().map(|c| c.norm()).fold(0.0, f64::max),
        }
    }
}

/// Coefficients of the unique polynomial of degree `< len` interpolating
/// the given `(node, value)` pairs; nodes must be pairwise distinct.
pub fn lagrange_poly(points: &[(C64, C64)]) -> Result<Vec<C64>> {
    let n = points.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![C64::new(0.0, 0.0); n];
        basis[0] = C64::new(1.0, 0.0);
        let mut deg = 0;
        let mut denom = C64::new(1.0, 0.0);
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = xi - xj;
            if diff.norm() < 1e-14 {
                return Err(Error::Validation("interpolation nodes collide".into()));
            }
            denom *= diff;
            for k in (0..=deg).rev() {
                let c = basis[k];
                basis[k + 1] += c;
                basis[k] = -xj * c;
            }
            deg += 1;
        }
        let w = yi / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += w * b;
        }
    }
    Ok(coeffs)
}

/// Square matrix with entries from one shared commutative algebra.
#[derive(Debug, Clone)]
pub struct MatrixOverA {
    algebra: Algebra,
    size: usize,
    entries: Vec<AlgebraElement>,
}

impl MatrixOverA {
    pub fn from_entries(algebra: Algebra, size: usize, entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::SizeMismatch(format!(
                "expected {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        if !entries.iter().all(|e| e.algebra.same(&algebra)) {
            return Err(Error::AlgebraMismatch(
                "matrix entries from different algebras".into(),
            ));
        }
        Ok(Self {
            algebra,
            size,
            entries,
        })
    }

    /// 1x1 matrix wrapping a single algebra element.
    pub fn scalar(e: AlgebraElement) -> Self {
        Self {
            algebra: e.algebra.clone(),
            size: 1,
            entries: vec![e],
        }
    }

    pub fn identity(algebra: &Algebra, size: usize) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(if i == j {
                    AlgebraElement::unit(algebra)
                } else {
                    AlgebraElement::zero(algebra)
                });
            }
        }
        Self {
            algebra: algebra.clone(),
            size,
            entries,
        }
    }

    pub fn zero(algebra: &Algebra, size: usize) -> Self {
        Self {
            algebra: algebra.clone(),
            size,
            entries: vec![AlgebraElement::zero(algebra); size * size],
        }
    }

    /// Elementary matrix with `e` at `(i, j)`.
    pub fn elementary(algebra: &Algebra, size: usize, i: usize, j: usize, e: AlgebraElement) -> Self {
        let mut m = Self::zero(algebra, size);
        m.entries[i * size + j] = e;
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::SizeMismatch("matrix addition".into()));
        }
        let entries: Result<Vec<_>> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(Self {
            algebra: self.algebra.clone(),
            size: self.size,
            entries: entries?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            algebra: self.algebra.clone(),
            size: self.size,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::SizeMismatch("matrix product".into()));
        }
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = AlgebraElement::zero(&self.algebra);
                for l in 0..n {
                    acc = acc.add(&self.entry(i, l).mul(other.entry(l, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self {
            algebra: self.algebra.clone(),
            size: n,
            entries,
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Matrix trace `TR`: sum of diagonal entries, landing in the algebra.
    pub fn trace(&self) -> AlgebraElement {
        let mut acc = AlgebraElement::zero(&self.algebra);
        for i in 0..self.size {
            acc = acc.add(self.entry(i, i)).expect("same algebra");
        }
        acc
    }

    pub fn band_degree(&self) -> i64 {
        self.entries.iter().map(|e| e.band_degree()).max().unwrap_or(0)
    }
}

/// Operation-level alias for the diagonal sum.
pub fn matrix_trace_tr(a: &MatrixOverA) -> AlgebraElement {
    a.trace()
}

/// Fixed index bijection `{0..p-1} x {0..q-1} -> {0..pq-1}` behind the
/// interior tensor embedding of matrix algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorEmbedding {
    pub p: usize,
    pub q: usize,
}

impl TensorEmbedding {
    pub fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    pub fn index(&self, i: usize, k: usize) -> usize {
        i * self.q + k
    }
}

/// Interior Kronecker embedding: `(a ⊗_φ b)` has entry `a_{ij} · b_{kl}` at
/// position `(φ(i,k), φ(j,l))`. Both factors must live over the same
/// commutative algebra; the tensor legs are contracted by multiplication.
pub fn kron_embed(phi: &TensorEmbedding, a: &MatrixOverA, b: &MatrixOverA) -> Result<MatrixOverA> {
    if a.size() != phi.p || b.size() != phi.q {
        return Err(Error::SizeMismatch(format!(
            "embedding expects sizes ({}, {}), got ({}, {})",
            phi.p,
            phi.q,
            a.size(),
            b.size()
        )));
    }
    if !a.algebra().same(b.algebra()) {
        return Err(Error::AlgebraMismatch(
            "interior embedding requires a shared algebra".into(),
        ));
    }
    let n = phi.p * phi.q;
    let mut entries = vec![AlgebraElement::zero(a.algebra()); n * n];
    for i in 0..phi.p {
        for j in 0..phi.p {
            for k in 0..phi.q {
                for l in 0..phi.q {
                    entries[phi.index(i, k) * n + phi.index(j, l)] =
                        a.entry(i, j).mul(b.entry(k, l))?;
                }
            }
        }
    }
    MatrixOverA::from_entries(a.algebra().clone(), n, entries)
}

/// Embed `a` as `a ⊗ 1_q`.
pub fn kron_left(phi: &TensorEmbedding, a: &MatrixOverA) -> Result<MatrixOverA> {
    kron_embed(phi, a, &MatrixOverA::identity(a.algebra(), phi.q))
}

/// Embed `b` as `1_p ⊗ b`.
pub fn kron_right(phi: &TensorEmbedding, b: &MatrixOverA) -> Result<MatrixOverA> {
    kron_embed(phi, &MatrixOverA::identity(b.algebra(), phi.p), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pointwise_product_componentwise() {
        let x = AlgebraElement::pointwise(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let y = AlgebraElement::pointwise(vec![c(3.0, 0.0), c(4.0, 0.0)]);
        let p = x.mul(&y).unwrap();
        match p.payload() {
            Payload::Pointwise(v) => assert_eq!(v, &vec![c(3.0, 0.0), c(8.0, 0.0)]),
            _ => panic!(),
        }
    }

    #[test]
    fn laurent_degree_cancellation() {
        let z = AlgebraElement::laurent_monomial(1);
        let zi = AlgebraElement::laurent_monomial(-1);
        let one = z.mul(&zi).unwrap();
        match one.payload() {
            Payload::Laurent(m) => {
                assert_eq!(m.len(), 1);
                assert_eq!(m[&0], c(1.0, 0.0));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn mixed_algebras_rejected() {
        let x = AlgebraElement::pointwise(vec![c(1.0, 0.0)]);
        let z = AlgebraElement::laurent_monomial(1);
        assert!(x.mul(&z).is_err());
    }

    #[test]
    fn trace_of_identity_and_diagonal() {
        let alg = Algebra::Pointwise { slots: 1 };
        let id = MatrixOverA::identity(&alg, 2);
        match id.trace().payload() {
            Payload::Pointwise(v) => assert_eq!(v[0], c(2.0, 0.0)),
            _ => panic!(),
        }
        let z = AlgebraElement::laurent_monomial(1);
        let zi = AlgebraElement::laurent_monomial(-1);
        let d = MatrixOverA::from_entries(
            Algebra::Laurent,
            2,
            vec![
                z.clone(),
                AlgebraElement::zero(&Algebra::Laurent),
                AlgebraElement::zero(&Algebra::Laurent),
                zi.clone(),
            ],
        )
        .unwrap();
        let t = d.trace();
        let expect = z.add(&zi).unwrap();
        match (t.payload(), expect.payload()) {
            (Payload::Laurent(a), Payload::Laurent(b)) => assert_eq!(a, b),
            _ => panic!(),
        }
    }

    #[test]
    fn interpolation_reproduces_polynomial_values() {
        // interpolate x^2 + (1+i) on three nodes
        let f = |x: C64| x * x + c(1.0, 1.0);
        let nodes = [c(0.0, 0.0), c(1.0, -0.5), c(-2.0, 0.3)];
        let pts: Vec<(C64, C64)> = nodes.iter().map(|&x| (x, f(x))).collect();
        let coeffs = lagrange_poly(&pts).unwrap();
        for &x in &nodes {
            let mut acc = c(0.0, 0.0);
            for cf in coeffs.iter().rev() {
                acc = acc * x + cf;
            }
            assert!((acc - f(x)).norm() < 1e-12);
        }
        assert!((coeffs[2] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((coeffs[1]).norm() < 1e-12);
    }

    #[test]
    fn kron_identity_and_multiplicativity() {
        let alg = Algebra::Pointwise { slots: 2 };
        let phi = TensorEmbedding::new(2, 2);
        let id2 = MatrixOverA::identity(&alg, 2);
        let id4 = kron_embed(&phi, &id2, &id2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = id4.entry(i, j);
                let expect = if i == j { 1.0 } else { 0.0 };
                match e.payload() {
                    Payload::Pointwise(v) => {
                        assert!(v.iter().all(|x| (x - c(expect, 0.0)).norm() < 1e-14))
                    }
                    _ => panic!(),
                }
            }
        }
    }
}
