//! Chain-level machinery: Hochschild/cyclic operators on tensor words,
//! shuffle and star products, wedge words with their boundary and
//! antisymmetrization, the elementary-matrix embedding, and the generalized
//! trace. Equality of chains is decided numerically through seeded
//! multilinear probes.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraElement, MatrixOverA, Payload};
use crate::error::{Error, Result};
use crate::perm::{enumerate_shuffles, lex_permutations, sign_of_slice};
use crate::C64;

/// Single tensor word `coeff · a_0 ⊗ … ⊗ a_n` with matrix slots over a
/// shared commutative algebra.
#[derive(Debug, Clone)]
pub struct ChainTerm {
    pub coeff: C64,
    pub slots: Vec<MatrixOverA>,
}

/// Formal linear combination of tensor words of a fixed degree `n`
/// (`n + 1` slots each). No canonicalization is performed; equality is a
/// numerical question answered by [`chains_equal`].
#[derive(Debug, Clone)]
pub struct HochschildChain {
    algebra: Algebra,
    degree: usize,
    slot_size: usize,
    terms: Vec<ChainTerm>,
}

impl HochschildChain {
    pub fn zero(algebra: &Algebra, degree: usize, slot_size: usize) -> Self {
        Self {
            algebra: algebra.clone(),
            degree,
            slot_size,
            terms: vec![],
        }
    }

    pub fn word(coeff: C64, slots: Vec<MatrixOverA>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::Validation("tensor word needs at least one slot".into()));
        }
        let algebra = slots[0].algebra().clone();
        let slot_size = slots[0].size();
        if !slots.iter().all(|s| s.algebra().same(&algebra) && s.size() == slot_size) {
            return Err(Error::AlgebraMismatch(
                "tensor word slots must share algebra and matrix size".into(),
            ));
        }
        Ok(Self {
            algebra,
            degree: slots.len() - 1,
            slot_size,
            terms: vec![ChainTerm { coeff, slots }],
        })
    }

    /// Word with scalar (1x1) slots built from bare algebra elements.
    pub fn scalar_word(coeff: C64, letters: Vec<AlgebraElement>) -> Result<Self> {
        Self::word(coeff, letters.into_iter().map(MatrixOverA::scalar).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn slot_size(&self) -> usize {
        self.slot_size
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> &[ChainTerm] {
        &self.terms
    }

    pub fn push_term(&mut self, coeff: C64, slots: Vec<MatrixOverA>) -> Result<()> {
        if slots.len() != self.degree + 1 {
            return Err(Error::SizeMismatch("term degree mismatch".into()));
        }
        if !slots
            .iter()
            .all(|s| s.algebra().same(&self.algebra) && s.size() == self.slot_size)
        {
            return Err(Error::AlgebraMismatch("term slot mismatch".into()));
        }
        if coeff != C64::new(0.0, 0.0) {
            self.terms.push(ChainTerm { coeff, slots });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.slot_size != other.slot_size {
            return Err(Error::SizeMismatch("chain addition across degrees".into()));
        }
        if !self.algebra.same(&other.algebra) {
            return Err(Error::AlgebraMismatch("chain addition".into()));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// Hochschild boundary `b`: alternating sum of face maps, the last face
/// wrapping the final slot around to the front.
pub fn hochschild_b(x: &HochschildChain) -> Result<HochschildChain> {
    let n = x.degree();
    if n == 0 {
        return Ok(HochschildChain::zero(x.algebra(), 0, x.slot_size()));
    }
    let mut out = HochschildChain::zero(x.algebra(), n - 1, x.slot_size());
    for term in x.terms() {
        for i in 0..n {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let mut slots = Vec::with_capacity(n);
            for j in 0..i {
                slots.push(term.slots[j].clone());
            }
            slots.push(term.slots[i].mul(&term.slots[i + 1])?);
            for j in (i + 2)..=n {
                slots.push(term.slots[j].clone());
            }
            out.push_term(term.coeff * C64::new(sign, 0.0), slots)?;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut slots = Vec::with_capacity(n);
        slots.push(term.slots[n].mul(&term.slots[0])?);
        for j in 1..n {
            slots.push(term.slots[j].clone());
        }
        out.push_term(term.coeff * C64::new(sign, 0.0), slots)?;
    }
    Ok(out)
}

/// Bar differential `b'`: same alternating sum without the wrap-around face.
pub fn bar_b_prime(x: &HochschildChain) -> Result<HochschildChain> {
    let n = x.degree();
    if n == 0 {
        return Ok(HochschildChain::zero(x.algebra(), 0, x.slot_size()));
    }
    let mut out = HochschildChain::zero(x.algebra(), n - 1, x.slot_size());
    for term in x.terms() {
        for i in 0..n {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let mut slots = Vec::with_capacity(n);
            for j in 0..i {
                slots.push(term.slots[j].clone());
            }
            slots.push(term.slots[i].mul(&term.slots[i + 1])?);
            for j in (i + 2)..=n {
                slots.push(term.slots[j].clone());
            }
            out.push_term(term.coeff * C64::new(sign, 0.0), slots)?;
        }
    }
    Ok(out)
}

/// Signed cyclic rotation `t(a_0 ⊗ … ⊗ a_n) = (-1)^n a_n ⊗ a_0 ⊗ … ⊗ a_{n-1}`.
pub fn cyclic_t(x: &HochschildChain) -> HochschildChain {
    let n = x.degree();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = HochschildChain::zero(x.algebra(), n, x.slot_size());
    for term in x.terms() {
        let mut slots = Vec::with_capacity(n + 1);
        slots.push(term.slots[n].clone());
        slots.extend(term.slots[..n].iter().cloned());
        out.push_term(term.coeff * C64::new(sign, 0.0), slots)
            .expect("degree preserved");
    }
    out
}

/// Cyclic norm `N = 1 + t + … + t^n`.
pub fn cyclic_norm(x: &HochschildChain) -> HochschildChain {
    let n = x.degree();
    let mut acc = x.clone();
    let mut rotated = x.clone();
    for _ in 0..n {
        rotated = cyclic_t(&rotated);
        acc = acc.add(&rotated).expect("degree preserved");
    }
    acc
}

/// Extra degeneracy `s(a_0 ⊗ … ⊗ a_n) = 1 ⊗ a_0 ⊗ … ⊗ a_n`.
pub fn extra_degeneracy(x: &HochschildChain) -> HochschildChain {
    let n = x.degree();
    let unit = MatrixOverA::identity(x.algebra(), x.slot_size());
    let mut out = HochschildChain::zero(x.algebra(), n + 1, x.slot_size());
    for term in x.terms() {
        let mut slots = Vec::with_capacity(n + 2);
        slots.push(unit.clone());
        slots.extend(term.slots.iter().cloned());
        out.push_term(term.coeff, slots).expect("degree raised");
    }
    out
}

/// Averaged projection onto the cyclic quotient:
/// `(1/(n+1)) (1 + t + … + t^n)`.
pub fn cyclic_projection(x: &HochschildChain) -> HochschildChain {
    let n = x.degree();
    cyclic_norm(x).scale(C64::new(1.0 / (n as f64 + 1.0), 0.0))
}

/// Exterior shuffle product of tensor words. For words of degrees `n` and
/// `m`, each `(n, m)`-shuffle contributes a word whose 0-slot is the
/// product of the two 0-slots and whose remaining slots interleave the two
/// tails, with the sign of the interleaving.
pub fn shuffle_product(x: &HochschildChain, y: &HochschildChain) -> Result<HochschildChain> {
    if !x.algebra().same(y.algebra()) {
        return Err(Error::AlgebraMismatch("shuffle product".into()));
    }
    if x.slot_size() != y.slot_size() {
        return Err(Error::SizeMismatch("shuffle product slot sizes".into()));
    }
    let n = x.degree();
    let m = y.degree();
    let shuffles = enumerate_shuffles(n, m);
    let mut out = HochschildChain::zero(x.algebra(), n + m, x.slot_size());
    for tx in x.terms() {
        for ty in y.terms() {
            let head = tx.slots[0].mul(&ty.slots[0])?;
            for sh in &shuffles.members {
                let mut slots = vec![head.clone(); n + m + 1];
                for (i, &pos) in sh.first_block.iter().enumerate() {
                    slots[pos + 1] = tx.slots[i + 1].clone();
                }
                for (j, &pos) in sh.second_block.iter().enumerate() {
                    slots[pos + 1] = ty.slots[j + 1].clone();
                }
                out.push_term(tx.coeff * ty.coeff * C64::new(sh.sign as f64, 0.0), slots)?;
            }
        }
    }
    Ok(out)
}

/// Degree-raising star product `x * y = x × s N y`.
pub fn star_product(x: &HochschildChain, y: &HochschildChain) -> Result<HochschildChain> {
    shuffle_product(x, &extra_degeneracy(&cyclic_norm(y)))
}

/// Wedge word `coeff · x_1 ∧ … ∧ x_n`; letter order is significant and
/// carried as written.
#[derive(Debug, Clone)]
pub struct LieTerm {
    pub coeff: C64,
    pub letters: Vec<MatrixOverA>,
}

/// Formal combination of wedge words of a fixed length.
#[derive(Debug, Clone)]
pub struct LieChain {
    algebra: Algebra,
    length: usize,
    letter_size: usize,
    terms: Vec<LieTerm>,
}

impl LieChain {
    pub fn zero(algebra: &Algebra, length: usize, letter_size: usize) -> Self {
        Self {
            algebra: algebra.clone(),
            length,
            letter_size,
            terms: vec![],
        }
    }

    pub fn word(coeff: C64, letters: Vec<MatrixOverA>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Validation("wedge word needs at least one letter".into()));
        }
        let algebra = letters[0].algebra().clone();
        let letter_size = letters[0].size();
        if !letters
            .iter()
            .all(|l| l.algebra().same(&algebra) && l.size() == letter_size)
        {
            return Err(Error::AlgebraMismatch(
                "wedge word letters must share algebra and matrix size".into(),
            ));
        }
        Ok(Self {
            algebra,
            length: letters.len(),
            letter_size,
            terms: vec![LieTerm { coeff, letters }],
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn letter_size(&self) -> usize {
        self.letter_size
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> &[LieTerm] {
        &self.terms
    }

    pub fn push_term(&mut self, coeff: C64, letters: Vec<MatrixOverA>) -> Result<()> {
        if letters.len() != self.length {
            return Err(Error::SizeMismatch("wedge word length mismatch".into()));
        }
        if coeff != C64::new(0.0, 0.0) {
            self.terms.push(LieTerm { coeff, letters });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.length != other.length || self.letter_size != other.letter_size {
            return Err(Error::SizeMismatch("wedge chain addition".into()));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out
    }
}

/// Lie-algebra boundary on wedge words:
/// `δ(x_1 ∧ … ∧ x_n) = Σ_{i<j} (-1)^{i+j} [x_i, x_j] ∧ … x̂_i … x̂_j …`
/// with 1-based positions.
pub fn lie_boundary(x: &LieChain) -> Result<LieChain> {
    let n = x.length();
    if n < 2 {
        return Ok(LieChain::zero(x.algebra(), n.saturating_sub(1), x.letter_size()));
    }
    let mut out = LieChain::zero(x.algebra(), n - 1, x.letter_size());
    for term in x.terms() {
        for i in 0..n {
            for j in (i + 1)..n {
                // positions are 1-based in the sign convention
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let mut letters = Vec::with_capacity(n - 1);
                letters.push(term.letters[i].commutator(&term.letters[j])?);
                for (k, l) in term.letters.iter().enumerate() {
                    if k != i && k != j {
                        letters.push(l.clone());
                    }
                }
                out.push_term(term.coeff * C64::new(sign, 0.0), letters)?;
            }
        }
    }
    Ok(out)
}

/// Antisymmetrization of a wedge word into a tensor word: the first letter
/// stays in slot 0 and the remaining letters are distributed over all
/// orderings with their signs.
pub fn antisymmetrize(x: &LieChain) -> Result<HochschildChain> {
    let n = x.length();
    if n == 0 {
        return Err(Error::Validation("cannot antisymmetrize an empty word".into()));
    }
    let perms = lex_permutations(n - 1);
    let mut out = HochschildChain::zero(x.algebra(), n - 1, x.letter_size());
    for term in x.terms() {
        for p in &perms {
            let sign = sign_of_slice(p) as f64;
            let mut slots = Vec::with_capacity(n);
            slots.push(term.letters[0].clone());
            for &k in p {
                slots.push(term.letters[k + 1].clone());
            }
            out.push_term(term.coeff * C64::new(sign, 0.0), slots)?;
        }
    }
    Ok(out)
}

/// Full antisymmetrization over every letter position, with signs. Two
/// wedge chains agree in the antisymmetric quotient exactly when their
/// images under this map agree as tensor chains.
pub fn antisymmetrize_full(x: &LieChain) -> Result<HochschildChain> {
    let n = x.length();
    if n == 0 {
        return Err(Error::Validation("cannot antisymmetrize an empty word".into()));
    }
    let perms = lex_permutations(n);
    let mut out = HochschildChain::zero(x.algebra(), n - 1, x.letter_size());
    for term in x.terms() {
        for p in &perms {
            let sign = sign_of_slice(p) as f64;
            let slots = p.iter().map(|&k| term.letters[k].clone()).collect();
            out.push_term(term.coeff * C64::new(sign, 0.0), slots)?;
        }
    }
    Ok(out)
}

/// Concatenation of wedge words (exterior product).
pub fn wedge(x: &LieChain, y: &LieChain) -> Result<LieChain> {
    if !x.algebra().same(y.algebra()) || x.letter_size() != y.letter_size() {
        return Err(Error::AlgebraMismatch("wedge concatenation".into()));
    }
    let mut out = LieChain::zero(x.algebra(), x.length() + y.length(), x.letter_size());
    for tx in x.terms() {
        for ty in y.terms() {
            let mut letters = tx.letters.clone();
            letters.extend(ty.letters.iter().cloned());
            out.push_term(tx.coeff * ty.coeff, letters)?;
        }
    }
    Ok(out)
}

/// Elementary wedge word for a tensor word `a_0 ⊗ … ⊗ a_n`:
/// `E_{12}(a_0) ∧ E_{23}(a_1) ∧ … ∧ E_{n+1,1}(a_n)` inside `(n+1) x (n+1)`
/// matrices.
pub fn elementary_word(letters: &[AlgebraElement]) -> Result<LieChain> {
    if letters.is_empty() {
        return Err(Error::Validation("empty elementary word".into()));
    }
    let n1 = letters.len();
    let algebra = letters[0].algebra().clone();
    let mats: Vec<MatrixOverA> = letters
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let row = k % n1;
            let col = (k + 1) % n1;
            MatrixOverA::elementary(&algebra, n1, row, col, a.clone())
        })
        .collect();
    LieChain::word(C64::new(1.0, 0.0), mats)
}

/// Generalized trace on tensor words with matrix slots: sum over index
/// cycles `(i_0, …, i_n)` of the scalar word
/// `(M_0)_{i_0 i_1} ⊗ (M_1)_{i_1 i_2} ⊗ … ⊗ (M_n)_{i_n i_0}`.
pub fn generalized_trace(x: &HochschildChain) -> Result<HochschildChain> {
    let n = x.degree();
    let k = x.slot_size();
    let mut out = HochschildChain::zero(x.algebra(), n, 1);
    for term in x.terms() {
        let mut idx = vec![0usize; n + 1];
        loop {
            let mut slots = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let row = idx[j];
                let col = idx[(j + 1) % (n + 1)];
                slots.push(MatrixOverA::scalar(term.slots[j].entry(row, col).clone()));
            }
            out.push_term(term.coeff, slots)?;
            // odometer over {0..k-1}^{n+1}
            let mut pos = 0;
            loop {
                if pos > n {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos > n {
                break;
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Numerical equality of chains via seeded multilinear probes.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum ElementProbe {
    Pointwise(Vec<C64>),
    Eval(C64),
}

impl ElementProbe {
    fn sample(algebra: &Algebra, rng: &mut ChaCha8Rng) -> Self {
        let rand_c = |rng: &mut ChaCha8Rng| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        match algebra {
            Algebra::Pointwise { slots } => {
                ElementProbe::Pointwise((0..*slots).map(|_| rand_c(rng)).collect())
            }
            // evaluation at a random unit-circle point is a linear
            // functional separating finitely supported coefficients
            Algebra::Laurent | Algebra::OperatorGenerated { .. } => {
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                ElementProbe::Eval(C64::new(theta.cos(), theta.sin()))
            }
        }
    }

    fn apply(&self, e: &AlgebraElement) -> C64 {
        match (self, e.payload()) {
            (ElementProbe::Pointwise(w), Payload::Pointwise(v)) => {
                w.iter().zip(v).map(|(a, b)| a * b).sum()
            }
            (ElementProbe::Eval(z), Payload::Laurent(m)) => {
                m.iter().map(|(d, c)| c * z.powi(*d as i32)).sum()
            }
            (ElementProbe::Eval(z), Payload::Poly(v)) => {
                let mut acc = C64::new(0.0, 0.0);
                for c in v.iter().rev() {
                    acc = acc * z + c;
                }
                acc
            }
            _ => panic!("probe/payload mismatch"),
        }
    }
}

#[derive(Debug, Clone)]
struct SlotProbe {
    weights: Vec<C64>,
    element: ElementProbe,
}

impl SlotProbe {
    fn sample(algebra: &Algebra, slot_size: usize, rng: &mut ChaCha8Rng) -> Self {
        let weights = (0..slot_size * slot_size)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Self {
            weights,
            element: ElementProbe::sample(algebra, rng),
        }
    }

    fn apply(&self, m: &MatrixOverA) -> C64 {
        m.entries()
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| w * self.element.apply(e))
            .sum()
    }
}

/// Evaluate a chain against one random multilinear functional.
fn probe_once(x: &HochschildChain, rng: &mut ChaCha8Rng) -> (C64, f64) {
    let probes: Vec<SlotProbe> = (0..=x.degree())
        .map(|_| SlotProbe::sample(x.algebra(), x.slot_size(), rng))
        .collect();
    let mut total = C64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for term in x.terms() {
        let mut v = term.coeff;
        for (slot, probe) in term.slots.iter().zip(&probes) {
            v *= probe.apply(slot);
        }
        total += v;
        scale = scale.max(v.norm());
    }
    (total, scale)
}

/// Largest residual of `x` over `rounds` seeded probes, together with the
/// largest single-term magnitude observed (the natural comparison scale).
pub fn probe_residual(x: &HochschildChain, seed: u64, rounds: usize) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for _ in 0..rounds {
        let (v, s) = probe_once(x, &mut rng);
        worst = worst.max(v.norm());
        scale = scale.max(s);
    }
    (worst, scale)
}

/// Decide `x == y` as chains, comparing the probe residual of the
/// difference against `tol` relative to the largest term magnitude.
pub fn chains_equal(x: &HochschildChain, y: &HochschildChain, seed: u64, tol: f64) -> Result<bool> {
    if x.degree() != y.degree() || x.slot_size() != y.slot_size() {
        let (rx, sx) = probe_residual(x, seed, 6);
        let (ry, sy) = probe_residual(y, seed, 6);
        return Ok(rx <= tol * sx.max(1.0) && ry <= tol * sy.max(1.0));
    }
    let diff = x.sub(y)?;
    let (r, s) = probe_residual(&diff, seed, 6);
    Ok(r <= tol * s.max(1.0))
}

/// Decide `x == y` in the cyclic quotient: compare the averaged cyclic
/// projections of both sides.
pub fn chains_equal_cyclic(
    x: &HochschildChain,
    y: &HochschildChain,
    seed: u64,
    tol: f64,
) -> Result<bool> {
    chains_equal(&cyclic_projection(x), &cyclic_projection(y), seed, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn pw(vals: &[f64]) -> AlgebraElement {
        AlgebraElement::pointwise(vals.iter().map(|&v| C64::new(v, v * 0.3 - 0.1)).collect())
    }

    fn random_scalar_word(deg: usize, seed: u64) -> HochschildChain {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters: Vec<AlgebraElement> = (0..=deg)
            .map(|_| {
                AlgebraElement::pointwise(
                    (0..3)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect(),
                )
            })
            .collect();
        HochschildChain::scalar_word(c(1.0), letters).unwrap()
    }

    #[test]
    fn b_squared_vanishes() {
        for deg in 2..=4 {
            let x = random_scalar_word(deg, 11 + deg as u64);
            let bb = hochschild_b(&hochschild_b(&x).unwrap()).unwrap();
            let (r, s) = probe_residual(&bb, 7, 6);
            assert!(r <= 1e-12 * s.max(1.0), "b² ≠ 0 in degree {deg}: {r}");
        }
    }

    #[test]
    fn one_minus_t_kills_norm() {
        for deg in 1..=4 {
            let x = random_scalar_word(deg, 23 + deg as u64);
            let n = cyclic_norm(&x);
            let d = n.sub(&cyclic_t(&n)).unwrap();
            let (r, s) = probe_residual(&d, 5, 6);
            assert!(r <= 1e-12 * s.max(1.0), "(1 - t)N ≠ 0 in degree {deg}");
        }
    }

    #[test]
    fn extra_degeneracy_contracts_bar_complex() {
        // b's + sb' = id on tensor words
        for deg in 1..=3 {
            let x = random_scalar_word(deg, 31 + deg as u64);
            let lhs = bar_b_prime(&extra_degeneracy(&x))
                .unwrap()
                .add(&extra_degeneracy(&bar_b_prime(&x).unwrap()))
                .unwrap();
            assert!(chains_equal(&lhs, &x, 3, 1e-12).unwrap(), "degree {deg}");
        }
    }

    #[test]
    fn shuffle_product_is_graded_commutative() {
        let x = random_scalar_word(1, 41);
        let y = random_scalar_word(2, 42);
        let xy = shuffle_product(&x, &y).unwrap();
        let yx = shuffle_product(&y, &x).unwrap();
        // degrees 1 and 2: sign (-1)^{1·2} = +1
        assert!(chains_equal(&xy, &yx, 9, 1e-12).unwrap());

        let u = random_scalar_word(1, 43);
        let uy = shuffle_product(&u, &x).unwrap();
        let yu = shuffle_product(&x, &u).unwrap().scale(c(-1.0));
        assert!(chains_equal(&uy, &yu, 9, 1e-12).unwrap());
    }

    #[test]
    fn shuffle_product_is_a_chain_map() {
        let x = random_scalar_word(1, 51);
        let y = random_scalar_word(2, 52);
        let lhs = hochschild_b(&shuffle_product(&x, &y).unwrap()).unwrap();
        let rhs = shuffle_product(&hochschild_b(&x).unwrap(), &y)
            .unwrap()
            .add(&shuffle_product(&x, &hochschild_b(&y).unwrap()).unwrap().scale(c(-1.0)))
            .unwrap();
        assert!(chains_equal(&lhs, &rhs, 13, 1e-12).unwrap());
    }

    #[test]
    fn lie_boundary_squares_to_zero() {
        let alg = Algebra::Pointwise { slots: 2 };
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let letters: Vec<MatrixOverA> = (0..4)
            .map(|_| {
                let entries = (0..4)
                    .map(|_| {
                        AlgebraElement::pointwise(
                            (0..2)
                                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                                .collect(),
                        )
                    })
                    .collect();
                MatrixOverA::from_entries(alg.clone(), 2, entries).unwrap()
            })
            .collect();
        let x = LieChain::word(c(1.0), letters).unwrap();
        let dd = lie_boundary(&lie_boundary(&x).unwrap()).unwrap();
        let dd_tensor = antisymmetrize_full(&dd).unwrap();
        let (r, s) = probe_residual(&dd_tensor, 17, 6);
        assert!(r <= 1e-12 * s.max(1.0), "δ² ≠ 0: {r}");
    }

    #[test]
    fn generalized_trace_of_elementary_word_recovers_letters() {
        // TR ∘ ε on E(a_0, a_1) lands on a_0 ⊗ a_1 plus wrap-around terms;
        // in length 2 the single index cycle gives exactly a_0 ⊗ a_1.
        let a0 = pw(&[1.0, 2.0, -0.5]);
        let a1 = pw(&[0.3, -1.2, 0.8]);
        let e = elementary_word(&[a0.clone(), a1.clone()]).unwrap();
        let traced = generalized_trace(&antisymmetrize(&e).unwrap()).unwrap();
        let direct = HochschildChain::scalar_word(c(1.0), vec![a0, a1]).unwrap();
        assert!(chains_equal(&traced, &direct, 19, 1e-12).unwrap());
    }
}
