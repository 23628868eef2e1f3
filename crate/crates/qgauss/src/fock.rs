//! The q-deformed full Fock space over a Gram-presented base space.
//!
//! A [`TensorState`] is a finite rational combination of elementary tensors
//! of formal basis elements; the empty tensor is the vacuum. The module
//! provides the q-symmetrized inner product
//!
//! ```text
//! <f_1 (x) ... (x) f_n , g_1 (x) ... (x) g_n>_q
//!     = sum over permutations s of q^inv(s) * prod_j <f_j, g_s(j)>
//! ```
//!
//! twice over — [`fock_inner_naive`] sums over permutations literally and is
//! the reference oracle, [`fock_inner`] peels the leftmost factor and
//! memoizes on the set of unmatched right-hand factors — together with the
//! annihilation, creation, and field operators the moment layer is built
//! from. At `q = 0` the inner product is the free (full Fock) one, at
//! `q = 1` the symmetric one, at `q = -1` the antisymmetric one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hilbert::{GramSpace, Vector};
use crate::qcore::{pow_scalar, render_scalar, QParam, Scalar};

/// Longest word [`fock_inner_naive`] will accept: the permutation sum has
/// `n!` terms, and `8! = 40320` is the most a test sweep should pay for.
pub const NAIVE_DEGREE_GUARD: usize = 8;

/// Counts inversions of an arbitrary integer sequence: pairs `i < j` with
/// `seq[i] > seq[j]`.
fn inversion_count(seq: &[usize]) -> u32 {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// A permutation of `{1, ..., n}`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Validates that `images` is a rearrangement of `1..=n`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::InvalidPermutation { n });
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// The image list (1-based).
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Number of inverted pairs, the exponent of `q` this permutation
    /// carries in the q-inner product.
    pub fn inversions(&self) -> u32 {
        inversion_count(&self.images)
    }
}

/// Inversion count of a permutation; the q-exponent in the permutation sum.
pub fn inversions(p: &Permutation) -> u32 {
    p.inversions()
}

/// An element of the algebraic Fock space: a finite linear combination of
/// basis words `e_{i_1} (x) ... (x) e_{i_n}` (ranks may be mixed), with the
/// empty word standing for the vacuum.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorState {
    space: Arc<GramSpace>,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl TensorState {
    /// The vacuum state: the empty word with coefficient 1.
    pub fn vacuum(space: &Arc<GramSpace>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Scalar::one());
        TensorState {
            space: Arc::clone(space),
            terms,
        }
    }

    /// The zero state.
    pub fn zero(space: &Arc<GramSpace>) -> Self {
        TensorState {
            space: Arc::clone(space),
            terms: BTreeMap::new(),
        }
    }

    /// A single basis word with coefficient 1.
    pub fn basis_word(space: &Arc<GramSpace>, word: Vec<usize>) -> Result<Self> {
        for &i in &word {
            if i >= space.dim() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: space.dim(),
                });
            }
        }
        let mut state = TensorState::zero(space);
        state.accumulate(word, Scalar::one());
        Ok(state)
    }

    /// The elementary tensor `factors[0] (x) ... (x) factors[n-1]`, expanded
    /// multilinearly into basis words. An empty factor list is the vacuum.
    pub fn from_vectors(space: &Arc<GramSpace>, factors: &[Vector]) -> Result<Self> {
        let mut state = TensorState::vacuum(space);
        // Append factors right to left so each step is a creation-style
        // prepend of the current factor.
        for f in factors.iter().rev() {
            if !GramSpace::same_space(space, f.space()) {
                return Err(Error::SpaceMismatch);
            }
            state = prepend(f, &state);
        }
        Ok(state)
    }

    /// The space whose basis the words index.
    pub fn space(&self) -> &Arc<GramSpace> {
        &self.space
    }

    /// The coefficient of one basis word (zero if absent).
    pub fn coefficient(&self, word: &[usize]) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The coefficient of the empty word. Because distinct ranks are
    /// orthogonal and the vacuum has norm 1, this equals
    /// `<vacuum, self>` — the moment layer reads expectations off it.
    pub fn vacuum_coefficient(&self) -> Scalar {
        self.coefficient(&[])
    }

    /// True when no term survives.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word present, if any.
    pub fn max_rank(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Iterates over `(word, coefficient)` pairs in word order.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), c))
    }

    /// Sum of two states over the same space.
    pub fn add(&self, other: &TensorState) -> Result<TensorState> {
        if !GramSpace::same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let mut out = self.clone();
        for (word, c) in &other.terms {
            out.accumulate(word.clone(), c.clone());
        }
        Ok(out)
    }

    /// The state scaled by a rational factor.
    pub fn scale(&self, factor: &Scalar) -> TensorState {
        if factor.is_zero() {
            return TensorState::zero(&self.space);
        }
        TensorState {
            space: Arc::clone(&self.space),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * factor))
                .collect(),
        }
    }

    /// Adds `coeff` to the coefficient of `word`, dropping the entry when it
    /// cancels to zero.
    fn accumulate(&mut self, word: Vec<usize>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl fmt::Display for TensorState {
    /// Renders like `Ω + 1/2*(e1⊗e2) - e3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (word, c) in &self.terms {
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let magnitude = c.abs();
            let body = if word.is_empty() {
                "Ω".to_string()
            } else {
                let joined = word.iter().map(|i| format!("e{}", i + 1)).join("⊗");
                if word.len() > 1 {
                    format!("({joined})")
                } else {
                    joined
                }
            };
            if magnitude.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{}*{}", render_scalar(&magnitude), body)?;
            }
        }
        Ok(())
    }
}

/// Prepends the expansion of `f` to every word of `state` (the creation
/// operator without the space checks, shared by `create` and
/// `from_vectors`).
fn prepend(f: &Vector, state: &TensorState) -> TensorState {
    let mut out = TensorState::zero(&state.space);
    for (i, ci) in f.coords().iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        for (word, c) in &state.terms {
            let mut new_word = Vec::with_capacity(word.len() + 1);
            new_word.push(i);
            new_word.extend_from_slice(word);
            out.accumulate(new_word, c * ci);
        }
    }
    out
}

/// The creation operator `a*_f`: prepend `f`. Sends the vacuum to `f`.
pub fn create(f: &Vector, state: &TensorState) -> Result<TensorState> {
    if !GramSpace::same_space(f.space(), &state.space) {
        return Err(Error::SpaceMismatch);
    }
    Ok(prepend(f, state))
}

/// The annihilation operator `a_f`:
///
/// ```text
/// a_f (f_1 (x) ... (x) f_n)
///     = sum_j q^(j-1) <f, f_j> * (f_1 (x) ... omit j ... (x) f_n)
/// ```
///
/// and `a_f` kills the vacuum. Linear in `f` (the base field is rational, so
/// no conjugation is involved).
pub fn annihilate(f: &Vector, state: &TensorState, q: &QParam) -> Result<TensorState> {
    if !GramSpace::same_space(f.space(), &state.space) {
        return Err(Error::SpaceMismatch);
    }
    let dual = f.dual_coords(); // dual[k] = <f, e_k>
    let max_rank = state.max_rank().unwrap_or(0);
    let q_powers: Vec<Scalar> = (0..max_rank.max(1) as u32)
        .map(|j| pow_scalar(q.value(), j))
        .collect();
    let mut out = TensorState::zero(&state.space);
    for (word, c) in &state.terms {
        for (j, &letter) in word.iter().enumerate() {
            let pairing = &dual[letter];
            if pairing.is_zero() {
                continue;
            }
            let mut rest = Vec::with_capacity(word.len() - 1);
            rest.extend_from_slice(&word[..j]);
            rest.extend_from_slice(&word[j + 1..]);
            out.accumulate(rest, c * pairing * &q_powers[j]);
        }
    }
    Ok(out)
}

/// The field operator `X_f = a_f + a*_f` applied to a state.
pub fn field_apply(f: &Vector, state: &TensorState, q: &QParam) -> Result<TensorState> {
    let lowered = annihilate(f, state, q)?;
    let raised = create(f, state)?;
    lowered.add(&raised)
}

/// The q-inner product by brute force: a literal sum over permutations.
///
/// Only words up to length [`NAIVE_DEGREE_GUARD`] are accepted; this is the
/// oracle the recursive implementation is swept against, not a production
/// path.
pub fn fock_inner_naive(left: &TensorState, right: &TensorState, q: &QParam) -> Result<Scalar> {
    if !GramSpace::same_space(&left.space, &right.space) {
        return Err(Error::SpaceMismatch);
    }
    let space = &left.space;
    let mut total = Scalar::zero();
    for (lw, lc) in &left.terms {
        for (rw, rc) in &right.terms {
            if lw.len() != rw.len() {
                continue;
            }
            let n = lw.len();
            if n > NAIVE_DEGREE_GUARD {
                return Err(Error::DegreeGuard {
                    max: NAIVE_DEGREE_GUARD,
                    got: n,
                });
            }
            let coeff = lc * rc;
            if coeff.is_zero() {
                continue;
            }
            let max_inv = n * n.saturating_sub(1) / 2;
            let q_powers: Vec<Scalar> = (0..=max_inv as u32)
                .map(|k| pow_scalar(q.value(), k))
                .collect();
            let mut pair_total = Scalar::zero();
            for perm in (0..n).permutations(n) {
                let mut product = q_powers[inversion_count(&perm) as usize].clone();
                for (j, &pj) in perm.iter().enumerate() {
                    if product.is_zero() {
                        break;
                    }
                    product *= space.gram_entry(lw[j], rw[pj]);
                }
                pair_total += product;
            }
            total += coeff * pair_total;
        }
    }
    Ok(total)
}

/// The q-inner product of two basis words of equal length, by peeling the
/// first left factor:
///
/// ```text
/// <f_1 (x) u, g> = sum over unmatched positions p of g:
///                  q^rank(p) * <f_1, g_p> * <u, g without p>
/// ```
///
/// where `rank(p)` counts unmatched positions before `p`. Memoized on
/// (left offset, bitmask of unmatched right positions); the left offset is
/// redundant given the mask but keeps the key self-describing.
fn word_inner(
    space: &GramSpace,
    lw: &[usize],
    rw: &[usize],
    q_powers: &[Scalar],
    memo: &mut HashMap<(usize, u64), Scalar>,
) -> Scalar {
    fn go(
        space: &GramSpace,
        lw: &[usize],
        rw: &[usize],
        offset: usize,
        mask: u64,
        q_powers: &[Scalar],
        memo: &mut HashMap<(usize, u64), Scalar>,
    ) -> Scalar {
        if offset == lw.len() {
            return Scalar::one();
        }
        if let Some(hit) = memo.get(&(offset, mask)) {
            return hit.clone();
        }
        let mut acc = Scalar::zero();
        let mut rank = 0usize;
        for (p, &letter) in rw.iter().enumerate() {
            if mask & (1 << p) == 0 {
                continue;
            }
            let pairing = space.gram_entry(lw[offset], letter);
            if !pairing.is_zero() {
                let sub = go(space, lw, rw, offset + 1, mask & !(1 << p), q_powers, memo);
                acc += &q_powers[rank] * pairing * sub;
            }
            rank += 1;
        }
        memo.insert((offset, mask), acc.clone());
        acc
    }
    let full = (1u64 << rw.len()) - 1;
    go(space, lw, rw, 0, full, q_powers, memo)
}

/// The q-inner product of two states, memoized per word pair.
///
/// Agrees with [`fock_inner_naive`] wherever both are defined, but scales to
/// the word lengths the closed-form sweeps need (up to 64 factors).
pub fn fock_inner(left: &TensorState, right: &TensorState, q: &QParam) -> Result<Scalar> {
    if !GramSpace::same_space(&left.space, &right.space) {
        return Err(Error::SpaceMismatch);
    }
    let space = &left.space;
    let mut total = Scalar::zero();
    for (lw, lc) in &left.terms {
        for (rw, rc) in &right.terms {
            if lw.len() != rw.len() {
                continue;
            }
            let n = lw.len();
            if n > 64 {
                return Err(Error::DegreeGuard { max: 64, got: n });
            }
            let coeff = lc * rc;
            if coeff.is_zero() {
                continue;
            }
            let q_powers: Vec<Scalar> = (0..n.max(1) as u32)
                .map(|k| pow_scalar(q.value(), k))
                .collect();
            let mut memo = HashMap::new();
            total += coeff * word_inner(space, lw, rw, &q_powers, &mut memo);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::inner;
    use crate::qcore::{int, q_factorial, rat};

    fn qp(num: i64, den: i64) -> QParam {
        QParam::new(rat(num, den)).unwrap()
    }

    /// Standardized 3-dim space with off-diagonal inner products
    /// `<e1,e2> = 1/2`, `<e1,e3> = 1/4`, `<e2,e3> = 1/2`.
    fn triplet_space() -> Arc<GramSpace> {
        GramSpace::new(vec![
            vec![int(1), rat(1, 2), rat(1, 4)],
            vec![rat(1, 2), int(1), rat(1, 2)],
            vec![rat(1, 4), rat(1, 2), int(1)],
        ])
        .unwrap()
    }

    #[test]
    fn permutation_inversions() {
        assert_eq!(Permutation::new(vec![1, 2, 3]).unwrap().inversions(), 0);
        assert_eq!(Permutation::new(vec![2, 1]).unwrap().inversions(), 1);
        assert_eq!(Permutation::new(vec![3, 1, 2]).unwrap().inversions(), 2);
        assert_eq!(Permutation::new(vec![4, 3, 2, 1]).unwrap().inversions(), 6);
        assert_eq!(inversions(&Permutation::new(vec![]).unwrap()), 0);
    }

    #[test]
    fn permutation_rejects_non_bijections() {
        assert!(matches!(
            Permutation::new(vec![1, 1]),
            Err(Error::InvalidPermutation { n: 2 })
        ));
        assert!(matches!(
            Permutation::new(vec![0, 1]),
            Err(Error::InvalidPermutation { n: 2 })
        ));
        assert!(matches!(
            Permutation::new(vec![3, 1]),
            Err(Error::InvalidPermutation { n: 2 })
        ));
    }

    #[test]
    fn vacuum_has_unit_norm_and_distinct_ranks_are_orthogonal() {
        let s = triplet_space();
        let q = qp(1, 2);
        let vac = TensorState::vacuum(&s);
        assert_eq!(fock_inner(&vac, &vac, &q).unwrap(), int(1));
        let one_tensor = TensorState::basis_word(&s, vec![0]).unwrap();
        assert_eq!(fock_inner(&vac, &one_tensor, &q).unwrap(), int(0));
        let two_tensor = TensorState::basis_word(&s, vec![0, 1]).unwrap();
        assert_eq!(fock_inner(&one_tensor, &two_tensor, &q).unwrap(), int(0));
    }

    #[test]
    fn rank_one_inner_product_is_the_gram_entry() {
        let s = triplet_space();
        let q = qp(1, 2);
        let e1 = TensorState::basis_word(&s, vec![0]).unwrap();
        let e2 = TensorState::basis_word(&s, vec![1]).unwrap();
        assert_eq!(fock_inner(&e1, &e2, &q).unwrap(), rat(1, 2));
        assert_eq!(fock_inner_naive(&e1, &e2, &q).unwrap(), rat(1, 2));
    }

    #[test]
    fn pair_tensor_norm_picks_up_the_q_weight() {
        // <f (x) f, f (x) f> = 1 + q for a unit vector f.
        let s = triplet_space();
        for q in [qp(-1, 2), qp(0, 1), qp(1, 2), qp(-1, 1)] {
            let ff = TensorState::basis_word(&s, vec![0, 0]).unwrap();
            let expected = &int(1) + q.value();
            assert_eq!(fock_inner(&ff, &ff, &q).unwrap(), expected);
        }
    }

    #[test]
    fn power_tensor_norms_are_q_factorials() {
        let s = triplet_space();
        for q in [qp(-1, 2), qp(0, 1), qp(1, 2)] {
            for n in 0..=5u32 {
                let word = vec![0usize; n as usize];
                let state = TensorState::basis_word(&s, word).unwrap();
                assert_eq!(
                    fock_inner(&state, &state, &q).unwrap(),
                    q_factorial(n, &q),
                    "n = {n}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn recursive_inner_matches_permutation_sum() {
        let s = triplet_space();
        let words: Vec<Vec<usize>> = vec![
            vec![],
            vec![0],
            vec![2],
            vec![0, 1],
            vec![1, 0],
            vec![2, 2],
            vec![0, 1, 2],
            vec![2, 1, 0],
            vec![1, 1, 2],
            vec![0, 1, 2, 0],
            vec![2, 0, 1, 1],
        ];
        for q in [qp(-1, 2), qp(2, 5), qp(-1, 1)] {
            for lw in &words {
                for rw in &words {
                    let left = TensorState::basis_word(&s, lw.clone()).unwrap();
                    let right = TensorState::basis_word(&s, rw.clone()).unwrap();
                    assert_eq!(
                        fock_inner(&left, &right, &q).unwrap(),
                        fock_inner_naive(&left, &right, &q).unwrap(),
                        "lw = {lw:?}, rw = {rw:?}, q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn recursive_inner_matches_permutation_sum_on_mixed_states() {
        let s = triplet_space();
        let q = qp(1, 2);
        let a = TensorState::basis_word(&s, vec![0, 1])
            .unwrap()
            .add(
                &TensorState::basis_word(&s, vec![2])
                    .unwrap()
                    .scale(&rat(-1, 3)),
            )
            .unwrap()
            .add(&TensorState::vacuum(&s).scale(&int(2)))
            .unwrap();
        let b = TensorState::basis_word(&s, vec![1, 1])
            .unwrap()
            .add(
                &TensorState::basis_word(&s, vec![0])
                    .unwrap()
                    .scale(&rat(5, 7)),
            )
            .unwrap();
        assert_eq!(
            fock_inner(&a, &b, &q).unwrap(),
            fock_inner_naive(&a, &b, &q).unwrap()
        );
    }

    #[test]
    fn naive_inner_refuses_long_words() {
        let s = triplet_space();
        let q = qp(1, 2);
        let long = TensorState::basis_word(&s, vec![0; 9]).unwrap();
        assert!(matches!(
            fock_inner_naive(&long, &long, &q),
            Err(Error::DegreeGuard { max: 8, got: 9 })
        ));
        // The memoized version handles the same word fine.
        assert!(fock_inner(&long, &long, &q).is_ok());
    }

    #[test]
    fn annihilation_kills_the_vacuum_and_creation_raises_it() {
        let s = triplet_space();
        let q = qp(1, 2);
        let f = s.basis_vector(0).unwrap();
        let vac = TensorState::vacuum(&s);
        assert!(annihilate(&f, &vac, &q).unwrap().is_zero());
        let raised = create(&f, &vac).unwrap();
        assert_eq!(raised, TensorState::basis_word(&s, vec![0]).unwrap());
    }

    #[test]
    fn annihilation_weights_positions_by_q_powers() {
        // a_f (e2 (x) e1 (x) e3) = <f,e2> e1(x)e3 + q <f,e1> e2(x)e3
        //                          + q^2 <f,e3> e2(x)e1   with f = e1.
        let s = triplet_space();
        let q = qp(1, 2);
        let f = s.basis_vector(0).unwrap();
        let state = TensorState::basis_word(&s, vec![1, 0, 2]).unwrap();
        let lowered = annihilate(&f, &state, &q).unwrap();
        assert_eq!(lowered.coefficient(&[0, 2]), rat(1, 2));
        assert_eq!(lowered.coefficient(&[1, 2]), rat(1, 2)); // q * <e1,e1>
        assert_eq!(lowered.coefficient(&[1, 0]), rat(1, 16)); // q^2 * <e1,e3>
    }

    #[test]
    fn annihilation_is_additive_in_its_vector() {
        let s = triplet_space();
        let q = qp(-1, 2);
        let f = s.basis_vector(0).unwrap();
        let g = s.basis_vector(2).unwrap();
        let sum = &f + &g;
        let state = TensorState::basis_word(&s, vec![1, 2, 0]).unwrap();
        let split = annihilate(&f, &state, &q)
            .unwrap()
            .add(&annihilate(&g, &state, &q).unwrap())
            .unwrap();
        assert_eq!(annihilate(&sum, &state, &q).unwrap(), split);
    }

    #[test]
    fn creation_and_annihilation_are_adjoint() {
        let s = triplet_space();
        let states: Vec<TensorState> = vec![
            TensorState::vacuum(&s),
            TensorState::basis_word(&s, vec![1]).unwrap(),
            TensorState::basis_word(&s, vec![2, 0]).unwrap(),
            TensorState::basis_word(&s, vec![0, 1, 2])
                .unwrap()
                .add(
                    &TensorState::basis_word(&s, vec![1])
                        .unwrap()
                        .scale(&rat(1, 3)),
                )
                .unwrap(),
        ];
        let f = {
            let e1 = s.basis_vector(0).unwrap();
            let e3 = s.basis_vector(2).unwrap();
            &e1 - &(&e3 * &rat(1, 2))
        };
        for q in [qp(-1, 2), qp(0, 1), qp(3, 5)] {
            for left in &states {
                for right in &states {
                    let created = create(&f, left).unwrap();
                    let lowered = annihilate(&f, right, &q).unwrap();
                    assert_eq!(
                        fock_inner(&created, right, &q).unwrap(),
                        fock_inner(left, &lowered, &q).unwrap(),
                        "q = {q}"
                    );
                }
            }
        }
    }

    #[test]
    fn q_commutation_relation_holds() {
        // a_f a*_g - q a*_g a_f = <f,g> * identity, checked on states of
        // every rank up to 3.
        let s = triplet_space();
        let f = s.basis_vector(0).unwrap();
        let g = {
            let e2 = s.basis_vector(1).unwrap();
            let e3 = s.basis_vector(2).unwrap();
            &e2 + &(&e3 * &rat(1, 3))
        };
        let pairing = inner(&f, &g).unwrap();
        let states = vec![
            TensorState::vacuum(&s),
            TensorState::basis_word(&s, vec![2]).unwrap(),
            TensorState::basis_word(&s, vec![1, 0]).unwrap(),
            TensorState::basis_word(&s, vec![2, 1, 0]).unwrap(),
        ];
        for q in [qp(-1, 1), qp(-1, 2), qp(0, 1), qp(1, 2)] {
            for state in &states {
                let forward = annihilate(&f, &create(&g, state).unwrap(), &q).unwrap();
                let backward = create(&g, &annihilate(&f, state, &q).unwrap())
                    .unwrap()
                    .scale(&-q.value().clone());
                let commutator = forward.add(&backward).unwrap();
                assert_eq!(commutator, state.scale(&pairing), "q = {q}");
            }
        }
    }

    #[test]
    fn field_operator_on_vacuum_is_the_vector() {
        let s = triplet_space();
        let q = qp(1, 2);
        let f = {
            let e1 = s.basis_vector(0).unwrap();
            let e2 = s.basis_vector(1).unwrap();
            &e1 + &(&e2 * &int(2))
        };
        let state = field_apply(&f, &TensorState::vacuum(&s), &q).unwrap();
        assert_eq!(state.coefficient(&[0]), int(1));
        assert_eq!(state.coefficient(&[1]), int(2));
        assert_eq!(state.vacuum_coefficient(), int(0));
    }

    #[test]
    fn from_vectors_expands_multilinearly() {
        let s = triplet_space();
        let e1 = s.basis_vector(0).unwrap();
        let e2 = s.basis_vector(1).unwrap();
        let sum = &e1 + &e2;
        let state = TensorState::from_vectors(&s, &[sum, e1.clone()]).unwrap();
        assert_eq!(state.coefficient(&[0, 0]), int(1));
        assert_eq!(state.coefficient(&[1, 0]), int(1));
        assert_eq!(state.coefficient(&[0, 1]), int(0));
        // And the q-norm matches the multilinear expansion of the
        // permutation formula.
        let q = qp(1, 2);
        assert_eq!(
            fock_inner(&state, &state, &q).unwrap(),
            fock_inner_naive(&state, &state, &q).unwrap()
        );
    }

    #[test]
    fn display_renders_words_readably() {
        let s = triplet_space();
        let state = TensorState::vacuum(&s)
            .add(
                &TensorState::basis_word(&s, vec![0, 1])
                    .unwrap()
                    .scale(&rat(-1, 2)),
            )
            .unwrap();
        assert_eq!(state.to_string(), "Ω - 1/2*(e1⊗e2)");
        assert_eq!(TensorState::zero(&s).to_string(), "0");
    }
}
