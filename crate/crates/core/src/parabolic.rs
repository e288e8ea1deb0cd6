//! Parabolic-subgroup combinatorics: minimal coset representatives, double
//! cosets, the set W' and its top element, the three-way partition of the
//! simple roots attached to (w, J0), and Poincare polynomials of strata.
//!
//! Subsets of the simple roots are bitmasks (`Subset`), bit i = generator i
//! (0-based).

use alloc::vec::Vec;

use crate::coxeter::WeylGroup;
use crate::poly::IntPoly;

/// Subset of simple-root indices as a bitmask over the rank.
pub type Subset = u32;

pub fn subset_full(rank: usize) -> Subset {
    ((1u64 << rank) - 1) as Subset
}

pub fn subset_contains(j: Subset, i: usize) -> bool {
    j >> i & 1 == 1
}

pub fn subset_members(j: Subset, rank: usize) -> Vec<usize> {
    (0..rank).filter(|&i| subset_contains(j, i)).collect()
}

pub fn subset_size(j: Subset) -> usize {
    j.count_ones() as usize
}

/// All subsets of S, smallest mask first.
pub fn all_subsets(rank: usize) -> Vec<Subset> {
    (0..1u64 << rank).map(|m| m as Subset).collect()
}

/// All proper subsets J strictly contained in S.
pub fn proper_subsets(rank: usize) -> Vec<Subset> {
    let full = subset_full(rank);
    all_subsets(rank)
        .into_iter()
        .filter(|&j| j != full)
        .collect()
}

/// Does the root (by index) lie in the sub-root-system R_J?
pub fn root_in_sub(w: &WeylGroup, root: usize, j: Subset) -> bool {
    w.rs.roots[root]
        .support()
        .iter()
        .all(|&i| subset_contains(j, i))
}

/// Minimal representative of the coset w W_J: the unique element u with
/// u(alpha_j) > 0 for all j in J.
pub fn min_left_rep(w: &WeylGroup, e: u32, j: Subset) -> u32 {
    let mut e = e;
    'outer: loop {
        for i in 0..w.rank() {
            if subset_contains(j, i) && !w.rs.is_positive(w.act_root(e, i)) {
                e = w.right_mul_s(e, i);
                continue 'outer;
            }
        }
        return e;
    }
}

/// Minimal representative of the coset W_J w: the unique element u with
/// u^{-1}(alpha_j) > 0 for all j in J.
pub fn min_right_rep(w: &WeylGroup, e: u32, j: Subset) -> u32 {
    w.inv(min_left_rep(w, w.inv(e), j))
}

/// Minimal representative of the double coset W_{J0} w W_J; satisfies both
/// one-sided conditions (u^{-1}(J0) > 0 and u(J) > 0).
pub fn min_double_rep(w: &WeylGroup, e: u32, j0: Subset, j: Subset) -> u32 {
    let mut e = e;
    loop {
        let next = min_left_rep(w, min_right_rep(w, e, j0), j);
        if next == e {
            return e;
        }
        e = next;
    }
}

/// Elements of the standard parabolic subgroup W_J, sorted by element id.
pub fn parabolic_elements(w: &WeylGroup, j: Subset) -> Vec<u32> {
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(w.identity());
    let mut stack = alloc::vec![w.identity()];
    while let Some(g) = stack.pop() {
        for i in 0..w.rank() {
            if subset_contains(j, i) {
                let h = w.right_mul_s(g, i);
                if seen.insert(h) {
                    stack.push(h);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// The double coset W_{J0} e W_J as a sorted id list.
pub fn double_coset(w: &WeylGroup, e: u32, j0: Subset, j: Subset) -> Vec<u32> {
    let mut seen = alloc::collections::BTreeSet::new();
    seen.insert(e);
    let mut stack = alloc::vec![e];
    while let Some(g) = stack.pop() {
        for i in 0..w.rank() {
            if subset_contains(j, i) {
                let h = w.right_mul_s(g, i);
                if seen.insert(h) {
                    stack.push(h);
                }
            }
            if subset_contains(j0, i) {
                let h = w.left_mul_s(i, g);
                if seen.insert(h) {
                    stack.push(h);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// All minimal left-coset representatives W^J = {u : u(J) > 0}, sorted by
/// element id (= by (length, canonical word)).
pub fn min_left_reps(w: &WeylGroup, j: Subset) -> Vec<u32> {
    (0..w.order() as u32)
        .filter(|&u| {
            (0..w.rank()).all(|i| !subset_contains(j, i) || w.rs.is_positive(w.act_root(u, i)))
        })
        .collect()
}

/// W' = {w : w^{-1}(J0) consists of positive roots}, sorted by element id.
/// These are the minimal representatives of the right cosets W_{J0} w.
pub fn w_prime_set(w: &WeylGroup, j0: Subset) -> Vec<u32> {
    (0..w.order() as u32)
        .filter(|&u| {
            let ui = w.inv(u);
            (0..w.rank()).all(|i| !subset_contains(j0, i) || w.rs.is_positive(w.act_root(ui, i)))
        })
        .collect()
}

/// The unique maximal element of W': the minimal representative of
/// W_{J0} w0. It is characterised by w0'(R+) meeting R+ exactly in R_{J0}.
pub fn w0_prime(w: &WeylGroup, j0: Subset) -> u32 {
    let rep = min_right_rep(w, w.longest(), j0);
    #[cfg(debug_assertions)]
    {
        for p in 0..w.rs.n_positive {
            let img = w.act_root(rep, p);
            let kept_positive = w.rs.is_positive(img);
            let in_j0 = kept_positive && root_in_sub(w, img, j0);
            assert_eq!(kept_positive, in_j0, "w0' image of positive root {p}");
        }
    }
    rep
}

/// Partition of the simple roots by where w sends them, relative to J0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplePartition {
    /// s with w(alpha_s) in R_{J0} (either sign).
    pub s0: Subset,
    /// s with w(alpha_s) in R+ \ R_{J0}.
    pub splus: Subset,
    /// s with w(alpha_s) in -R+ \ R_{J0}.
    pub sminus: Subset,
}

pub fn simple_partition(w: &WeylGroup, e: u32, j0: Subset) -> SimplePartition {
    let mut p = SimplePartition {
        s0: 0,
        splus: 0,
        sminus: 0,
    };
    for s in 0..w.rank() {
        let img = w.act_root(e, s);
        let bit = 1 << s;
        if root_in_sub(w, img, j0) {
            p.s0 |= bit;
        } else if w.rs.is_positive(img) {
            p.splus |= bit;
        } else {
            p.sminus |= bit;
        }
    }
    p
}

/// The combinatorial index of one stratum: the minimal-left-coset
/// representatives u inside the double coset W_{J0} w W_J, provided w is the
/// minimal representative of that double coset (empty otherwise, by
/// convention).
#[derive(Clone, Debug)]
pub struct StratumIndex {
    pub j0: Subset,
    pub j: Subset,
    pub w: u32,
    /// Sorted by element id; empty iff the stratum is empty.
    pub reps: Vec<u32>,
    /// Sum of q^{l(u)} over reps.
    pub poly: IntPoly,
}

pub fn stratum_index(wg: &WeylGroup, j0: Subset, j: Subset, w: u32) -> StratumIndex {
    if min_double_rep(wg, w, j0, j) != w {
        return StratumIndex {
            j0,
            j,
            w,
            reps: Vec::new(),
            poly: IntPoly::zero(),
        };
    }
    let reps: Vec<u32> = double_coset(wg, w, j0, j)
        .into_iter()
        .filter(|&u| min_left_rep(wg, u, j) == u)
        .collect();
    let mut poly = IntPoly::zero();
    for &u in &reps {
        poly.add_monomial(wg.len(u));
    }
    StratumIndex {
        j0,
        j,
        w,
        reps,
        poly,
    }
}

/// Poincare polynomial of the parabolic quotient: sum of q^{l(u)} over W^J.
pub fn poincare_polynomial(w: &WeylGroup, j: Subset) -> IntPoly {
    let mut poly = IntPoly::zero();
    for u in min_left_reps(w, j) {
        poly.add_monomial(w.len(u));
    }
    poly
}

/// Verdict of the stratum-invariance check for one triple (J0, J, w):
/// (a) if J meets S^-(w, J0) the stratum must be empty;
/// (b) replacing J by J~ = J \ S^+(w, J0) leaves the stratum index
///     unchanged, witnessed by a length-preserving bijection of
///     representatives (u maps to the minimal element of u W_J).
#[derive(Clone, Debug)]
pub struct StratumInvariance {
    pub j0: Subset,
    pub j: Subset,
    pub w: u32,
    pub j_tilde: Subset,
    pub partition: SimplePartition,
    /// None when the hypothesis of (a) does not apply.
    pub emptiness_ok: Option<bool>,
    pub poly_j: IntPoly,
    pub poly_j_tilde: IntPoly,
    pub bijection_ok: bool,
    pub pass: bool,
}

pub fn check_stratum_invariance(
    wg: &WeylGroup,
    j0: Subset,
    j: Subset,
    w: u32,
) -> StratumInvariance {
    let partition = simple_partition(wg, w, j0);
    let idx_j = stratum_index(wg, j0, j, w);
    let emptiness_ok = if j & partition.sminus != 0 {
        Some(idx_j.reps.is_empty())
    } else {
        None
    };
    let j_tilde = j & !partition.splus;
    let idx_jt = stratum_index(wg, j0, j_tilde, w);

    // The map u -> min(u W_J) from the J~-stratum representatives to the
    // J-stratum representatives: well-defined, length-preserving, bijective.
    let mut images: Vec<u32> = idx_jt
        .reps
        .iter()
        .map(|&u| min_left_rep(wg, u, j))
        .collect();
    let lengths_ok = idx_jt
        .reps
        .iter()
        .zip(&images)
        .all(|(&u, &v)| wg.len(u) == wg.len(v));
    images.sort_unstable();
    images.dedup();
    let bijection_ok = lengths_ok && images == idx_j.reps;

    let poly_ok = idx_j.poly == idx_jt.poly;
    let pass = emptiness_ok.unwrap_or(true) && poly_ok && bijection_ok;
    StratumInvariance {
        j0,
        j,
        w,
        j_tilde,
        partition,
        emptiness_ok,
        poly_j: idx_j.poly,
        poly_j_tilde: idx_jt.poly,
        bijection_ok,
        pass,
    }
}

/// Both clauses of the partition criterion, quantified over W'(J0):
/// S^- is empty iff w = e, and S^+ is empty iff w = w0'(J0).
#[derive(Clone, Debug)]
pub struct PartitionCriterion {
    pub j0: Subset,
    pub failures: Vec<u32>,
    pub pass: bool,
}

pub fn check_partition_criterion(wg: &WeylGroup, j0: Subset) -> PartitionCriterion {
    let top = w0_prime(wg, j0);
    let mut failures = Vec::new();
    for w in w_prime_set(wg, j0) {
        let p = simple_partition(wg, w, j0);
        let minus_iff = (p.sminus == 0) == (w == wg.identity());
        let plus_iff = (p.splus == 0) == (w == top);
        if !(minus_iff && plus_iff) {
            failures.push(w);
        }
    }
    PartitionCriterion {
        j0,
        pass: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{build_root_system, generate_weyl, CartanSpec};
    use crate::poly::IntPoly;

    fn group(name: &str) -> WeylGroup {
        generate_weyl(build_root_system(&CartanSpec::named(name).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn min_rep_examples() {
        let w = group("A2");
        let s1 = w.simple(0);
        let s2 = w.simple(1);
        let s1s2 = w.mul(s1, s2);
        // Minimal element of s1s2 W_{s2} = {s1s2, s1}.
        assert_eq!(min_left_rep(&w, s1s2, 0b10), s1);
        // Identity is minimal in any coset containing it.
        for j in all_subsets(2) {
            assert_eq!(min_left_rep(&w, w.identity(), j), w.identity());
            assert_eq!(min_right_rep(&w, w.identity(), j), w.identity());
            assert_eq!(min_double_rep(&w, w.identity(), j, j), w.identity());
        }
        // Double coset of w0 with J = S is everything.
        assert_eq!(min_double_rep(&w, w.longest(), 0, 0b11), w.identity());
    }

    #[test]
    fn min_reps_are_unique_minimum() {
        let w = group("B2");
        for j in all_subsets(2) {
            let wj = parabolic_elements(&w, j);
            for e in 0..w.order() as u32 {
                let rep = min_left_rep(&w, e, j);
                // rep is in the coset and is the strict length minimum.
                let coset: Vec<u32> = wj.iter().map(|&v| w.mul(e, v)).collect();
                assert!(coset.contains(&rep));
                for &c in &coset {
                    if c != rep {
                        assert!(w.len(c) > w.len(rep));
                        assert!(w.bruhat_leq(rep, c));
                    }
                }
            }
        }
    }

    #[test]
    fn w_prime_examples() {
        let w = group("A2");
        let all: Vec<u32> = (0..6).collect();
        assert_eq!(w_prime_set(&w, 0), all);
        assert_eq!(w_prime_set(&w, 0b11), alloc::vec![w.identity()]);
        let wp = w_prime_set(&w, 0b01);
        let s2 = w.simple(1);
        let s2s1 = w.mul(s2, w.simple(0));
        assert_eq!(wp, alloc::vec![w.identity(), s2, s2s1]);
        // |W'| = |W| / |W_{J0}|
        for name in ["A3", "B2", "B3"] {
            let w = group(name);
            for j0 in all_subsets(w.rank()) {
                let wp = w_prime_set(&w, j0);
                assert_eq!(wp.len() * parabolic_elements(&w, j0).len(), w.order());
            }
        }
    }

    #[test]
    fn w0_prime_examples() {
        let w = group("A2");
        assert_eq!(w0_prime(&w, 0), w.longest());
        assert_eq!(w0_prime(&w, 0b11), w.identity());
        let s2s1 = w.mul(w.simple(1), w.simple(0));
        assert_eq!(w0_prime(&w, 0b01), s2s1);
        // Maximal element of W': every member is Bruhat-below it.
        for name in ["A3", "B3"] {
            let w = group(name);
            for j0 in all_subsets(w.rank()) {
                let top = w0_prime(&w, j0);
                for u in w_prime_set(&w, j0) {
                    assert!(w.bruhat_leq(u, top));
                }
            }
        }
    }

    #[test]
    fn partition_examples() {
        let w = group("A2");
        // (e, J0): everything in J0 stays put, the rest stays positive.
        for j0 in all_subsets(2) {
            let p = simple_partition(&w, w.identity(), j0);
            assert_eq!(p.s0, j0);
            assert_eq!(p.splus, subset_full(2) & !j0);
            assert_eq!(p.sminus, 0);
        }
        // (w0, 0): everything negated.
        let p = simple_partition(&w, w.longest(), 0);
        assert_eq!(p.sminus, subset_full(2));
        // (s1, 0): alpha1 negated, alpha2 sent to alpha1 + alpha2.
        let p = simple_partition(&w, w.simple(0), 0);
        assert_eq!(
            p,
            SimplePartition {
                s0: 0,
                splus: 0b10,
                sminus: 0b01
            }
        );
        // Disjoint and exhaustive, rank <= 3.
        for name in ["A3", "B3", "C3", "G2"] {
            let w = group(name);
            for j0 in all_subsets(w.rank()) {
                for e in 0..w.order() as u32 {
                    let p = simple_partition(&w, e, j0);
                    assert_eq!(p.s0 & p.splus, 0);
                    assert_eq!(p.s0 & p.sminus, 0);
                    assert_eq!(p.splus & p.sminus, 0);
                    assert_eq!(p.s0 | p.splus | p.sminus, subset_full(w.rank()));
                }
            }
        }
    }

    #[test]
    fn partition_criterion_small_types() {
        for name in ["A2", "B2"] {
            let w = group(name);
            for j0 in all_subsets(w.rank()) {
                assert!(check_partition_criterion(&w, j0).pass, "{name} j0={j0:b}");
            }
        }
    }

    #[test]
    fn stratum_examples() {
        let w = group("A2");
        let s1 = w.simple(0);
        let s2 = w.simple(1);
        // J0 = {s1}, J = {}, w = s2: representatives s2 and s1 s2.
        let idx = stratum_index(&w, 0b01, 0, s2);
        assert_eq!(idx.reps, alloc::vec![s2, w.mul(s1, s2)]);
        assert_eq!(idx.poly, IntPoly::from_i64(&[0, 1, 1]));
        // J0 = {}, J = {s1}, w = s1: s1 is not minimal in s1 W_{s1}.
        let idx = stratum_index(&w, 0, 0b01, s1);
        assert!(idx.reps.is_empty());
        // J0 contained in J, w = e: single representative e (the double
        // coset is W_J and only e is minimal in e W_J).
        let idx = stratum_index(&w, 0b01, 0b11, w.identity());
        assert_eq!(idx.reps, alloc::vec![w.identity()]);
        assert_eq!(idx.poly, IntPoly::one());
    }

    #[test]
    fn poincare_examples() {
        let a1 = group("A1");
        assert_eq!(poincare_polynomial(&a1, 0), IntPoly::from_i64(&[1, 1]));
        let a2 = group("A2");
        assert_eq!(
            poincare_polynomial(&a2, 0),
            IntPoly::from_i64(&[1, 2, 2, 1])
        );
        assert_eq!(poincare_polynomial(&a2, 0b11), IntPoly::one());
        // q = 1 gives the index of the parabolic.
        for name in ["A3", "B3"] {
            let w = group(name);
            for j in all_subsets(w.rank()) {
                let p = poincare_polynomial(&w, j);
                let count = p.eval_int(1);
                let expected = w.order() / parabolic_elements(&w, j).len();
                assert_eq!(count, expected.into());
            }
        }
    }

    #[test]
    fn strata_partition_the_quotient() {
        // Summing stratum polynomials over double-coset minimal w recovers
        // the Poincare polynomial of W^J.
        for name in ["A2", "B2"] {
            let w = group(name);
            for j0 in all_subsets(w.rank()) {
                for j in all_subsets(w.rank()) {
                    let mut total = IntPoly::zero();
                    for e in 0..w.order() as u32 {
                        if min_double_rep(&w, e, j0, j) == e {
                            total = total.add(&stratum_index(&w, j0, j, e).poly);
                        }
                    }
                    assert_eq!(total, poincare_polynomial(&w, j));
                }
            }
        }
    }

    #[test]
    fn stratum_invariance_a2_hand_checked() {
        let w = group("A2");
        let s1 = w.simple(0);
        // (J0, J, w) = ({}, {s2}, s1): J~ = {}, both polynomials q.
        let v = check_stratum_invariance(&w, 0, 0b10, s1);
        assert!(v.pass);
        assert_eq!(v.j_tilde, 0);
        assert_eq!(v.poly_j, IntPoly::from_i64(&[0, 1]));
        // (J0, J, w) = ({}, {s1}, s1): empty by clause (a).
        let v = check_stratum_invariance(&w, 0, 0b01, s1);
        assert!(v.pass);
        assert_eq!(v.emptiness_ok, Some(true));
        assert!(v.poly_j.is_zero());
    }

    #[test]
    fn stratum_invariance_exhaustive_small() {
        for name in ["A2", "B2"] {
            let w = group(name);
            for j0 in all_subsets(w.rank()) {
                for j in all_subsets(w.rank()) {
                    for e in 0..w.order() as u32 {
                        let v = check_stratum_invariance(&w, j0, j, e);
                        assert!(v.pass, "{name} j0={j0:b} j={j:b} w={}", w.word_string(e));
                    }
                }
            }
        }
    }
}
