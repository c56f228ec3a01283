//! Enumeration and signing of permutations, block shuffles, and the
//! pair-increasing permutation sets that index the commutator-trace sum.
//!
//! All enumeration is lexicographic so that downstream trace sums are
//! bit-reproducible.

use crate::error::{Error, Result};

/// Ground-set convention carried by a [`Permutation`].
///
/// `ZeroBased` permutations act on `{0..n-1}`; `OneBased` permutations act on
/// `{1..n}` with index 0 pinned outside the permuted range. The two are kept
/// distinct so the even-set commutator expansion and the odd-set trace sum
/// can never be mixed up silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundSet {
    ZeroBased,
    OneBased,
}

/// A permutation together with its ground-set convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
    ground: GroundSet,
}

impl Permutation {
    /// Build a permutation from its image list. `images[i]` is the image of
    /// the `i`-th smallest ground-set element.
    pub fn new(images: Vec<usize>, ground: GroundSet) -> Result<Self> {
        let n = images.len();
        let base = match ground {
            GroundSet::ZeroBased => 0,
            GroundSet::OneBased => 1,
        };
        let mut seen = vec![false; n];
        for &im in &images {
            if im < base || im >= base + n {
                return Err(Error::Validation(format!(
                    "image {im} outside ground set of size {n}"
                )));
            }
            if seen[im - base] {
                return Err(Error::Validation(format!("repeated image {im}")));
            }
            seen[im - base] = true;
        }
        Ok(Self { images, ground })
    }

    pub fn identity(n: usize, ground: GroundSet) -> Self {
        let base = if ground == GroundSet::OneBased { 1 } else { 0 };
        Self {
            images: (base..base + n).collect(),
            ground,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// Image of ground-set element `i` (in the declared convention).
    pub fn image(&self, i: usize) -> usize {
        let base = if self.ground == GroundSet::OneBased { 1 } else { 0 };
        self.images[i - base]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Parity `(-1)^{inversions}`.
    pub fn sign(&self) -> i32 {
        sign_of_slice(&self.images)
    }
}

/// Sign of a sequence of distinct comparable values by inversion count.
pub fn sign_of_slice(v: &[usize]) -> i32 {
    let mut s = 1i32;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                s = -s;
            }
        }
    }
    s
}

/// Operation-level entry point: parity of a permutation.
pub fn sign(p: &Permutation) -> i32 {
    p.sign()
}

/// One `(n,m)`-shuffle: the increasing position lists of the two blocks
/// inside `{0..n+m-1}` and the sign of the interleaving permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shuffle {
    pub first_block: Vec<usize>,
    pub second_block: Vec<usize>,
    pub sign: i32,
}

/// All `(n,m)`-shuffles in lexicographic order of the first block.
#[derive(Debug, Clone)]
pub struct ShuffleSet {
    pub n: usize,
    pub m: usize,
    pub members: Vec<Shuffle>,
}

/// Enumerate all `binomial(n+m, n)` shuffles of two blocks of sizes `n`, `m`.
pub fn enumerate_shuffles(n: usize, m: usize) -> ShuffleSet {
    let total = n + m;
    let mut members = Vec::new();
    let mut first = Vec::with_capacity(n);
    fn rec(start: usize, left: usize, total: usize, first: &mut Vec<usize>, out: &mut Vec<Shuffle>) {
        if left == 0 {
            let second: Vec<usize> = (0..total).filter(|p| !first.contains(p)).collect();
            let concat: Vec<usize> = first.iter().chain(second.iter()).copied().collect();
            out.push(Shuffle {
                first_block: first.clone(),
                second_block: second,
                sign: sign_of_slice(&concat),
            });
            return;
        }
        for p in start..=total - left {
            first.push(p);
            rec(p + 1, left - 1, total, first, out);
            first.pop();
        }
    }
    rec(0, n, total, &mut first, &mut members);
    ShuffleSet { n, m, members }
}

/// The pair-increasing permutation subsets.
#[derive(Debug, Clone)]
pub struct SEPermutationSet {
    pub n: usize,
    pub ground: GroundSet,
    pub members: Vec<Permutation>,
}

/// All permutations of `{0..n-1}` in lexicographic order.
pub fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Enumerate the pair-increasing subset of permutations of degree `n`.
///
/// Under `ZeroBased` the permutation acts on `{0..n-1}` and every pair
/// `(s(0),s(1)), (s(2),s(3)), ...` must be increasing. Under `OneBased` it
/// acts on `{1..n}` with index 0 pinned outside; the constrained pairs are
/// `(s(2),s(3)), (s(4),s(5)), ...` while `s(1)` is free.
pub fn enumerate_se(n: usize, ground: GroundSet) -> SEPermutationSet {
    let base = if ground == GroundSet::OneBased { 1 } else { 0 };
    let mut members = Vec::new();
    for raw in lex_permutations(n) {
        let images: Vec<usize> = raw.iter().map(|&v| v + base).collect();
        // images[k] = s(k + base): positions run over the ground set itself.
        let ok = match ground {
            GroundSet::ZeroBased => (0..n / 2).all(|i| images[2 * i] < images[2 * i + 1]),
            GroundSet::OneBased => {
                // positions 1..n; constrained pairs start at position 2.
                (1..=(n.saturating_sub(1)) / 2).all(|i| images[2 * i - 1] < images[2 * i])
            }
        };
        if ok {
            members.push(Permutation { images, ground });
        }
    }
    SEPermutationSet { n, ground, members }
}

/// The cyclic-rotation surjection from the even set of degree `2p` onto the
/// odd set of degree `2p-1`.
///
/// Each even member is a list of `p` increasing pairs; rotating the pairs so
/// that the pair containing 0 comes first and dropping the pinned 0 yields a
/// one-based odd member. Returns, for each even member (by index), the index
/// of its image in the odd set.
pub fn se_cyclic_classes(p: usize) -> (SEPermutationSet, SEPermutationSet, Vec<usize>) {
    let even = enumerate_se(2 * p, GroundSet::ZeroBased);
    let odd = enumerate_se(2 * p - 1, GroundSet::OneBased);
    let mut map = Vec::with_capacity(even.members.len());
    for s in &even.members {
        let v = s.images();
        let pairs: Vec<(usize, usize)> = (0..p).map(|i| (v[2 * i], v[2 * i + 1])).collect();
        let pivot = pairs
            .iter()
            .position(|&(a, _)| a == 0)
            .expect("0 is always the left slot of its pair");
        let mut flat = Vec::with_capacity(2 * p);
        for k in 0..p {
            let (a, b) = pairs[(pivot + k) % p];
            flat.push(a);
            flat.push(b);
        }
        debug_assert_eq!(flat[0], 0);
        let odd_images: Vec<usize> = flat[1..].to_vec();
        let target = odd
            .members
            .iter()
            .position(|o| o.images() == odd_images.as_slice())
            .expect("rotated member lands in the odd set");
        map.push(target);
    }
    (even, odd, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut r = 1usize;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn sign_examples() {
        let id = Permutation::identity(3, GroundSet::ZeroBased);
        assert_eq!(sign(&id), 1);
        let tr = Permutation::new(vec![1, 0, 2], GroundSet::ZeroBased).unwrap();
        assert_eq!(sign(&tr), -1);
        // 3-cycle (0 1 2): derived by direct inversion count (2 inversions).
        let cyc = Permutation::new(vec![1, 2, 0], GroundSet::ZeroBased).unwrap();
        assert_eq!(sign(&cyc), 1);
    }

    #[test]
    fn malformed_images_rejected() {
        assert!(Permutation::new(vec![0, 0, 1], GroundSet::ZeroBased).is_err());
        assert!(Permutation::new(vec![0, 3], GroundSet::ZeroBased).is_err());
        assert!(Permutation::new(vec![0, 1], GroundSet::OneBased).is_err());
    }

    #[test]
    fn shuffle_counts_and_signs() {
        let s = enumerate_shuffles(1, 1);
        assert_eq!(s.members.len(), 2);
        let signs: Vec<i32> = s.members.iter().map(|sh| sh.sign).collect();
        assert_eq!(signs, vec![1, -1]);
        assert_eq!(enumerate_shuffles(2, 1).members.len(), 3);
        let e = enumerate_shuffles(0, 4);
        assert_eq!(e.members.len(), 1);
        assert_eq!(e.members[0].sign, 1);
        for n in 0..=8usize {
            for m in 0..=(8 - n) {
                assert_eq!(enumerate_shuffles(n, m).members.len(), binom(n + m, n));
            }
        }
    }

    #[test]
    fn shuffles_reproduce_monotone_interleavings_once() {
        // Brute force: every interleaving of two strictly increasing block
        // sequences appears exactly once across the shuffle set.
        for (n, m) in [(2usize, 2usize), (3, 2), (3, 3)] {
            let a: Vec<i64> = (0..n as i64).collect();
            let b: Vec<i64> = (100..100 + m as i64).collect();
            let mut seen = std::collections::BTreeSet::new();
            for sh in enumerate_shuffles(n, m).members {
                let mut word = vec![0i64; n + m];
                for (i, &p) in sh.first_block.iter().enumerate() {
                    word[p] = a[i];
                }
                for (j, &p) in sh.second_block.iter().enumerate() {
                    word[p] = b[j];
                }
                assert!(seen.insert(word), "duplicate interleaving");
            }
            assert_eq!(seen.len(), binom(n + m, n));
        }
    }

    #[test]
    fn se_counts() {
        // odd convention, p=1: just the identity of {1}
        let s1 = enumerate_se(1, GroundSet::OneBased);
        assert_eq!(s1.members.len(), 1);
        assert_eq!(enumerate_se(3, GroundSet::OneBased).members.len(), 3);
        assert_eq!(enumerate_se(4, GroundSet::ZeroBased).members.len(), 6);
        let fact = |n: usize| (1..=n).product::<usize>();
        for p in 1..=4usize {
            assert_eq!(
                enumerate_se(2 * p - 1, GroundSet::OneBased).members.len() * (1 << (p - 1)),
                fact(2 * p - 1)
            );
        }
        for p in 1..=3usize {
            assert_eq!(
                enumerate_se(2 * p, GroundSet::ZeroBased).members.len(),
                fact(2 * p) / (1 << p)
            );
        }
    }

    #[test]
    fn cyclic_classes_partition_with_fiber_size_p() {
        for p in 1..=3usize {
            let (even, odd, map) = se_cyclic_classes(p);
            assert_eq!(map.len(), even.members.len());
            let mut fiber = vec![0usize; odd.members.len()];
            for &t in &map {
                fiber[t] += 1;
            }
            assert!(fiber.iter().all(|&c| c == p), "p={p}: fibers {fiber:?}");
        }
    }

    #[test]
    fn cyclic_class_rotation_preserves_sign() {
        for p in 1..=3usize {
            let (even, odd, map) = se_cyclic_classes(p);
            for (i, s) in even.members.iter().enumerate() {
                // rotating blocks of size 2 is an even permutation, and the
                // pinned 0 in front contributes no inversions
                assert_eq!(s.sign(), odd.members[map[i]].sign(), "p={p} member {i}");
            }
        }
    }
}
