//! The odd multiplicative character on higher Loday symbols, computed two
//! independent ways: through the relative-chain expansion paired with the
//! odd index cocycle, and through the closed-form sum of commutator traces
//! over paired-increasing permutations. Values live modulo the lattice
//! `(2πi)^p ℤ`.

use crate::algebra::MatrixOverA;
use crate::chains::HochschildChain;
use crate::error::{Error, Result};
use crate::fredholm::{expm, index_constant, op_norm, tau_cocycle, FredholmModule};
use crate::perm::{enumerate_se, lex_permutations, sign_of_slice, GroundSet};
use crate::C64;

/// Higher Loday symbol `⟨a_0, …, a_{2p-1}⟩`: an even-length word of matrix
/// letters over one commutative algebra.
#[derive(Debug, Clone)]
pub struct LodaySymbol {
    letters: Vec<MatrixOverA>,
}

impl LodaySymbol {
    pub fn new(letters: Vec<MatrixOverA>) -> Result<Self> {
        if letters.len() < 2 || letters.len() % 2 != 0 {
            return Err(Error::Validation(format!(
                "a symbol needs an even number of letters (at least 2), got {}",
                letters.len()
            )));
        }
        let alg = letters[0].algebra().clone();
        let size = letters[0].size();
        if !letters.iter().all(|l| l.algebra().same(&alg) && l.size() == size) {
            return Err(Error::AlgebraMismatch(
                "symbol letters must share algebra and matrix size".into(),
            ));
        }
        Ok(Self { letters })
    }

    /// Half the word length.
    pub fn p(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn letters(&self) -> &[MatrixOverA] {
        &self.letters
    }

    /// Per-letter matrix traces, the scalar word the pairings consume.
    pub fn traced_letters(&self) -> Vec<crate::algebra::AlgebraElement> {
        self.letters.iter().map(|l| l.trace()).collect()
    }
}

/// Relative-chain expansion of a symbol: the first traced letter stays in
/// slot 0 and the remaining `2p - 1` are antisymmetrized behind it,
/// producing an odd-degree cycle in the relative complex.
pub fn chern_chain(symbol: &LodaySymbol) -> Result<HochschildChain> {
    let traced = symbol.traced_letters();
    let tail = traced.len() - 1;
    let mut out = HochschildChain::zero(traced[0].algebra(), tail, 1);
    for perm in &lex_permutations(tail) {
        let sign = sign_of_slice(perm) as f64;
        let mut slots = vec![traced[0].clone()];
        for &k in perm {
            slots.push(traced[k + 1].clone());
        }
        out.push_term(
            C64::new(sign, 0.0),
            slots.into_iter().map(MatrixOverA::scalar).collect(),
        )?;
    }
    Ok(out)
}

/// First evaluation path: pair the relative-chain expansion with the odd
/// index cocycle of the module.
pub fn character_via_chern(module: &FredholmModule, symbol: &LodaySymbol) -> Result<C64> {
    tau_cocycle(module, &chern_chain(symbol)?)
}

/// Second evaluation path, closed form: with `A_i` the compression
/// `P π(tr a_i) P`,
/// `(-1)^p c_p Σ_s sgn(s) Tr([A_0, A_{s(1)}] [A_{s(2)}, A_{s(3)}] … )`
/// summed over permutations of `{1, …, 2p-1}` whose later pairs are
/// increasing. Returns the value and the largest single-summand magnitude
/// (the natural scale for residual comparisons).
pub fn commutator_form_with_scale(
    module: &FredholmModule,
    symbol: &LodaySymbol,
) -> Result<(C64, f64)> {
    let p = symbol.p();
    let traced = symbol.traced_letters();
    let guard: i64 = traced.iter().map(|e| e.band_degree()).sum();
    let proj = module.projection_op(1);
    let compressed: Vec<crate::OpMatrix> = traced
        .iter()
        .map(|e| module.represent(e).map(|m| &proj * m * &proj))
        .collect::<Result<_>>()?;
    let se = enumerate_se(2 * p - 1, GroundSet::OneBased);
    let parity = if p % 2 == 0 { 1.0 } else { -1.0 };
    let cst = parity * index_constant(p);
    let mut acc = C64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for s in se.members {
        let first = &compressed[0] * &compressed[s.image(1)]
            - &compressed[s.image(1)] * &compressed[0];
        let mut prod = first;
        for pair in 1..p {
            let a = &compressed[s.image(2 * pair)];
            let b = &compressed[s.image(2 * pair + 1)];
            prod = &prod * (a * b - b * a);
        }
        let tr = module.windowed_trace(&prod, 1, guard)?;
        let term = C64::new(s.sign() as f64 * cst, 0.0) * tr;
        acc += term;
        scale = scale.max(term.norm());
    }
    Ok((acc, scale))
}

pub fn character_via_commutators(module: &FredholmModule, symbol: &LodaySymbol) -> Result<C64> {
    commutator_form_with_scale(module, symbol).map(|(v, _)| v)
}

/// Full antisymmetrization `Σ_{μ} sgn(μ) x_{μ(0)} ⊗ … ⊗ x_{μ(n-1)}` of a
/// letter word, as a chain of degree `n - 1`.
pub fn full_antisymmetrization(letters: &[MatrixOverA]) -> Result<HochschildChain> {
    if letters.is_empty() {
        return Err(Error::Validation("empty word".into()));
    }
    let n = letters.len();
    let mut out = HochschildChain::zero(letters[0].algebra(), n - 1, letters[0].size());
    for perm in &lex_permutations(n) {
        let sign = sign_of_slice(perm) as f64;
        let slots = perm.iter().map(|&k| letters[k].clone()).collect();
        out.push_term(C64::new(sign, 0.0), slots)?;
    }
    Ok(out)
}

/// The same sum regrouped over paired-increasing permutations of an
/// even-length word: `Σ_s sgn(s) X_{s(0)s(1)} ⊗ X_{s(2)s(3)} ⊗ …` with
/// `X_{ab} = x_a ⊗ x_b - x_b ⊗ x_a`.
pub fn paired_antisymmetrization(letters: &[MatrixOverA]) -> Result<HochschildChain> {
    let n = letters.len();
    if n == 0 || n % 2 != 0 {
        return Err(Error::Validation("paired form needs an even-length word".into()));
    }
    let p = n / 2;
    let se = enumerate_se(n, GroundSet::ZeroBased);
    let mut out = HochschildChain::zero(letters[0].algebra(), n - 1, letters[0].size());
    for s in se.members {
        // expand the product of p antisymmetric pair blocks
        for mask in 0..(1u32 << p) {
            let mut sign = s.sign() as f64;
            let mut slots = Vec::with_capacity(n);
            for pair in 0..p {
                let a = s.image(2 * pair);
                let b = s.image(2 * pair + 1);
                if mask & (1 << pair) == 0 {
                    slots.push(letters[a].clone());
                    slots.push(letters[b].clone());
                } else {
                    sign = -sign;
                    slots.push(letters[b].clone());
                    slots.push(letters[a].clone());
                }
            }
            out.push_term(C64::new(sign, 0.0), slots)?;
        }
    }
    Ok(out)
}

/// Symbolic cross-check of the pairing regrouping: expand both sums over
/// abstract letter indices and compare the signed term multisets exactly.
pub fn antisymmetrization_multisets_agree(p: usize) -> bool {
    use std::collections::BTreeMap;
    let n = 2 * p;
    let mut full: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for perm in lex_permutations(n) {
        let sign = sign_of_slice(&perm) as i64;
        *full.entry(perm).or_insert(0) += sign;
    }
    let mut paired: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for s in enumerate_se(n, GroundSet::ZeroBased).members {
        for mask in 0..(1u32 << p) {
            let mut sign = s.sign() as i64;
            let mut word = Vec::with_capacity(n);
            for pair in 0..p {
                let a = s.image(2 * pair);
                let b = s.image(2 * pair + 1);
                if mask & (1 << pair) == 0 {
                    word.push(a);
                    word.push(b);
                } else {
                    sign = -sign;
                    word.push(b);
                    word.push(a);
                }
            }
            *paired.entry(word).or_insert(0) += sign;
        }
    }
    full.retain(|_, v| *v != 0);
    paired.retain(|_, v| *v != 0);
    full == paired
}

/// A complex value reduced against the rank-one lattice `(2πi)^p ℤ`.
#[derive(Debug, Clone, Copy)]
pub struct LatticeValue {
    /// Lattice generator `(2πi)^p`.
    pub direction: C64,
    /// Floor quotient along the generator.
    pub quotient: i64,
    /// `value - quotient · direction`; its coordinate lies in `[0, 1)`.
    pub representative: C64,
    /// Coordinate of the representative along the generator, in `[0, 1)`.
    pub coordinate: f64,
    /// Distance from the value to the nearest lattice point.
    pub nearest_distance: f64,
    /// Signed multiple at the nearest lattice point.
    pub nearest_multiple: i64,
}

/// Reduce `z` modulo `(2πi)^p ℤ`.
pub fn lattice_reduce(z: C64, p: usize) -> LatticeValue {
    let direction = C64::new(0.0, 1.0).powi(p as i32)
        * C64::new((2.0 * std::f64::consts::PI).powi(p as i32), 0.0);
    let norm_sq = direction.norm_sqr();
    let t = (z * direction.conj()).re / norm_sq;
    let quotient = t.floor() as i64;
    let representative = z - direction * C64::new(quotient as f64, 0.0);
    let nearest_multiple = t.round() as i64;
    let nearest = z - direction * C64::new(nearest_multiple as f64, 0.0);
    LatticeValue {
        direction,
        quotient,
        representative,
        coordinate: t - quotient as f64,
        nearest_distance: nearest.norm(),
        nearest_multiple,
    }
}

/// Full character evaluation: both paths, their disagreement, and the
/// lattice reduction of the closed-form value.
#[derive(Debug, Clone)]
pub struct CharacterValue {
    pub p: usize,
    pub via_chern: C64,
    pub via_commutators: C64,
    pub path_residual: f64,
    pub term_scale: f64,
    pub lattice: LatticeValue,
}

pub fn multiplicative_character(
    module: &FredholmModule,
    symbol: &LodaySymbol,
) -> Result<CharacterValue> {
    let p = symbol.p();
    let via_chern = character_via_chern(module, symbol)?;
    let (via_commutators, term_scale) = commutator_form_with_scale(module, symbol)?;
    Ok(CharacterValue {
        p,
        via_chern,
        via_commutators,
        path_residual: (via_chern - via_commutators).norm(),
        term_scale,
        lattice: lattice_reduce(via_commutators, p),
    })
}

/// Compare the characters of two symbols whose letters have the same
/// exponentials (two branch choices of the same logarithms). Returns the
/// integer lattice multiple separating the two values and the residual
/// distance from that lattice point.
pub fn branch_difference(
    module: &FredholmModule,
    a: &LodaySymbol,
    b: &LodaySymbol,
) -> Result<(i64, f64)> {
    if a.p() != b.p() {
        return Err(Error::Precondition("symbols of different length".into()));
    }
    for (la, lb) in a.letters().iter().zip(b.letters()) {
        let ea = expm(&module.represent_matrix(la)?);
        let eb = expm(&module.represent_matrix(lb)?);
        let scale = op_norm(&ea).max(op_norm(&eb)).max(1.0);
        if op_norm(&(ea - eb)) > 1e-10 * scale {
            return Err(Error::Precondition(
                "letters do not exponentiate to the same element".into(),
            ));
        }
    }
    let va = character_via_commutators(module, a)?;
    let vb = character_via_commutators(module, b)?;
    let reduced = lattice_reduce(va - vb, a.p());
    Ok((reduced.nearest_multiple, reduced.nearest_distance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use crate::chains::chains_equal;

    fn scalar_letters(elems: Vec<AlgebraElement>) -> Vec<MatrixOverA> {
        elems.into_iter().map(MatrixOverA::scalar).collect()
    }

    #[test]
    fn degree_one_symbol_counts_winding() {
        let module = FredholmModule::toeplitz(8).unwrap();
        let sym = LodaySymbol::new(scalar_letters(vec![
            AlgebraElement::laurent_monomial(1),
            AlgebraElement::laurent_monomial(-1),
        ]))
        .unwrap();
        let v = character_via_commutators(&module, &sym).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12, "winding: {v}");
        let w = character_via_chern(&module, &sym).unwrap();
        assert!((v - w).norm() < 1e-12, "paths disagree: {v} vs {w}");
    }

    #[test]
    fn winding_scales_with_degree() {
        let module = FredholmModule::toeplitz(10).unwrap();
        let sym = LodaySymbol::new(scalar_letters(vec![
            AlgebraElement::laurent_monomial(3),
            AlgebraElement::laurent_monomial(-3),
        ]))
        .unwrap();
        let v = character_via_commutators(&module, &sym).unwrap();
        // -Tr [T_{z^3}, T_{z^{-3}}] picks up one unit per crossing mode
        assert!((v - C64::new(3.0, 0.0)).norm() < 1e-11, "got {v}");
    }

    #[test]
    fn paired_regrouping_matches_full_antisymmetrization() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for n in [2usize, 4] {
            let letters: Vec<MatrixOverA> = (0..n)
                .map(|_| {
                    MatrixOverA::scalar(AlgebraElement::pointwise(
                        (0..3)
                            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                            .collect(),
                    ))
                })
                .collect();
            let full = full_antisymmetrization(&letters).unwrap();
            let paired = paired_antisymmetrization(&letters).unwrap();
            assert!(chains_equal(&full, &paired, 5, 1e-12).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn lattice_reduction_coordinate_in_unit_interval() {
        let v = lattice_reduce(C64::new(1.0, 9.0), 1);
        assert_eq!(v.quotient, 1);
        assert!((0.0..1.0).contains(&v.coordinate));
        let back = v.representative + v.direction * C64::new(v.quotient as f64, 0.0);
        assert!((back - C64::new(1.0, 9.0)).norm() < 1e-12);

        // p = 2: lattice along the negative real axis, direction -(2π)^2
        let w = lattice_reduce(C64::new(-4.0 * std::f64::consts::PI.powi(2) + 1.0, 0.0), 2);
        assert!((0.0..1.0).contains(&w.coordinate));
        let back2 = w.representative + w.direction * C64::new(w.quotient as f64, 0.0);
        assert!((back2.re - (-4.0 * std::f64::consts::PI.powi(2) + 1.0)).abs() < 1e-10);
    }

    #[test]
    fn lattice_points_reduce_to_zero() {
        for p in 1..=3usize {
            let d = C64::new(0.0, 1.0).powi(p as i32)
                * C64::new((2.0 * std::f64::consts::PI).powi(p as i32), 0.0);
            let v = lattice_reduce(d * C64::new(-3.0, 0.0), p);
            assert_eq!(v.quotient, -3);
            assert!(v.representative.norm() < 1e-9);
            assert!(v.nearest_distance < 1e-9);
        }
    }
}
