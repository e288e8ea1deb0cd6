//! Root systems and Weyl groups from Cartan matrices, all in exact
//! arithmetic.
//!
//! Conventions, fixed once and used everywhere:
//!
//! - Cartan matrix entry `a[i][j] = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`,
//!   so the simple reflection acts by `s_i(alpha_j) = alpha_j - a[i][j] alpha_i`.
//! - Roots are integer vectors in the simple-root basis. The root list starts
//!   with the positive roots sorted by (height, then coefficient vector with
//!   larger vectors first within a height); the first `rank` entries are the
//!   simple roots in order. Negative roots follow in the same order, so root
//!   `i` and root `i + n_positive (mod 2 n_positive)` are negatives of each
//!   other.
//! - Group elements are permutations of the root list. Element ids are BFS
//!   discovery order, which equals sorting by (length, canonical reduced
//!   word); the canonical word of an element is the lexicographically
//!   smallest among its minimal-length words.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::OnceCell;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat_i, Mat, Rat};

/// Cap on the total number of roots during closure; exceeding it means the
/// input is not of finite type.
pub const ROOT_CAP: usize = 10_000;

/// Default cap on the group order during generation.
pub const DEFAULT_ORDER_CAP: usize = 1_000_000;

/// A Cartan matrix, either one of the built-in named types or explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanSpec {
    pub matrix: Vec<Vec<i64>>,
    pub name: Option<String>,
}

impl CartanSpec {
    /// Named types: A1..A6, B2..B4, C3..C4, D4, G2, F4 (case-insensitive).
    pub fn named(name: &str) -> Result<CartanSpec> {
        let canon = name.to_uppercase();
        let err = || Error::UnknownType(name.to_string());
        if canon.len() != 2 {
            return Err(err());
        }
        let family = canon.as_bytes()[0] as char;
        let n: usize = canon[1..].parse().map_err(|_| err())?;
        let matrix = match (family, n) {
            ('A', 1..=6) => chain_matrix(n, &[]),
            ('B', 2..=4) => chain_matrix(n, &[(n - 1, n - 2, -2)]),
            ('C', 3..=4) => chain_matrix(n, &[(n - 2, n - 1, -2)]),
            ('D', 4) => {
                // Central node 1 joined to 0, 2, 3.
                let mut m = vec![vec![0i64; 4]; 4];
                for i in 0..4 {
                    m[i][i] = 2;
                }
                for &(i, j) in &[(0usize, 1usize), (1, 2), (1, 3)] {
                    m[i][j] = -1;
                    m[j][i] = -1;
                }
                m
            }
            ('G', 2) => vec![vec![2, -1], vec![-3, 2]],
            ('F', 4) => {
                let mut m = chain_matrix(4, &[]);
                m[2][1] = -2;
                m
            }
            _ => return Err(err()),
        };
        Ok(CartanSpec {
            matrix,
            name: Some(canon),
        })
    }

    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> CartanSpec {
        CartanSpec { matrix, name: None }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }
}

/// Tridiagonal simply-laced chain with -1 off-diagonal, then overrides.
fn chain_matrix(n: usize, overrides: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = 2;
        if i + 1 < n {
            m[i][i + 1] = -1;
            m[i + 1][i] = -1;
        }
    }
    for &(i, j, v) in overrides {
        m[i][j] = v;
    }
    m
}

/// A root as an integer vector in the simple-root basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Root {
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c > 0)
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub cartan: Vec<Vec<i64>>,
    pub rank: usize,
    /// Symmetrized Cartan matrix: positive definite, invariant under the
    /// Weyl group, normalized so the first node of each Dynkin component has
    /// squared length 2.
    pub gram: Mat,
    /// All roots, positives first (see module docs for the order).
    pub roots: Vec<Root>,
    pub n_positive: usize,
    index: BTreeMap<Vec<i64>, usize>,
    /// Permutation of `roots` induced by each simple reflection.
    simple_perm: Vec<Vec<u32>>,
}

impl RootSystem {
    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.n_positive
    }

    pub fn neg_index(&self, idx: usize) -> usize {
        (idx + self.n_positive) % (2 * self.n_positive)
    }

    pub fn simple_root_index(&self, i: usize) -> usize {
        debug_assert_eq!(self.roots[i].coeffs[i], 1);
        i
    }

    /// Symmetric bilinear form on coefficient vectors of rationals.
    pub fn form(&self, a: &[Rat], b: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if !b[j].is_zero() {
                    acc += &a[i] * &self.gram[(i, j)] * &b[j];
                }
            }
        }
        acc
    }

    fn form_roots(&self, a: usize, b: usize) -> Rat {
        let av: Vec<Rat> = self.roots[a].coeffs.iter().map(|&c| rat_i(c)).collect();
        let bv: Vec<Rat> = self.roots[b].coeffs.iter().map(|&c| rat_i(c)).collect();
        self.form(&av, &bv)
    }

    /// `<beta, alpha^vee>` for roots by index; always an integer.
    pub fn pairing(&self, beta: usize, alpha: usize) -> i64 {
        let two = rat_i(2);
        let v = two * self.form_roots(beta, alpha) / self.form_roots(alpha, alpha);
        debug_assert!(v.denom().is_one());
        let n = v.numer();
        i64::try_from(n.clone()).expect("pairing fits in i64")
    }

    /// Permutation of the root list induced by the reflection in the given
    /// (positive) root.
    pub fn reflection_perm(&self, alpha: usize) -> Vec<u32> {
        let m = self.roots.len();
        let mut perm = vec![0u32; m];
        for r in 0..m {
            let n = self.pairing(r, alpha);
            let mut coeffs = self.roots[r].coeffs.clone();
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c -= n * self.roots[alpha].coeffs[k];
            }
            perm[r] = self.root_index(&coeffs).expect("reflection permutes roots") as u32;
        }
        perm
    }
}

/// Validate the Cartan matrix and compute the symmetrizing diagonal, one
/// positive rational per node, normalized to 1 on the first node of each
/// Dynkin component.
fn symmetrizer(matrix: &[Vec<i64>]) -> Result<Vec<Rat>> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::MalformedCartan("empty matrix".into()));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedCartan("not square".into()));
        }
        if row[i] != 2 {
            return Err(Error::MalformedCartan(format!(
                "diagonal entry a[{i}][{i}] != 2"
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if i != j {
                if v > 0 {
                    return Err(Error::MalformedCartan(format!(
                        "positive off-diagonal entry a[{i}][{j}]"
                    )));
                }
                if (v == 0) != (matrix[j][i] == 0) {
                    return Err(Error::MalformedCartan(format!(
                        "zero pattern not symmetric at ({i},{j})"
                    )));
                }
            }
        }
    }
    let mut d: Vec<Option<Rat>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Rat::one());
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || matrix[i][j] == 0 {
                    continue;
                }
                let dj = &di * rat_i(matrix[i][j]) / rat_i(matrix[j][i]);
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                    Some(old) => {
                        if *old != dj {
                            return Err(Error::MalformedCartan(
                                "not symmetrizable by a positive diagonal".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    let d: Vec<Rat> = d.into_iter().map(Option::unwrap).collect();
    if d.iter().any(|x| !x.is_positive()) {
        return Err(Error::MalformedCartan("symmetrizer not positive".into()));
    }
    Ok(d)
}

/// Closure of the simple roots under the simple reflections.
pub fn build_root_system(spec: &CartanSpec) -> Result<RootSystem> {
    let n = spec.rank();
    let a = &spec.matrix;
    let d = symmetrizer(a)?;
    let gram = Mat::from_fn(n, n, |i, j| &d[i] * rat_i(a[i][j]));
    for i in 0..n {
        for j in 0..n {
            if gram[(i, j)] != gram[(j, i)] {
                return Err(Error::MalformedCartan("symmetrization failed".into()));
            }
        }
    }

    // s_i on a coefficient vector changes only coordinate i:
    // c_i -> c_i - sum_j a[i][j] c_j.
    let reflect = |c: &[i64], i: usize| -> Vec<i64> {
        let mut out = c.to_vec();
        let pairing: i64 = (0..n).map(|j| a[i][j] * c[j]).sum();
        out[i] -= pairing;
        out
    };

    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut queue: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut c = vec![0i64; n];
        c[i] = 1;
        seen.insert(c.clone(), ());
        queue.push(c);
    }
    let mut head = 0;
    while head < queue.len() {
        let c = queue[head].clone();
        head += 1;
        for i in 0..n {
            let img = reflect(&c, i);
            if !seen.contains_key(&img) {
                if seen.len() + 1 > ROOT_CAP {
                    return Err(Error::NotFiniteType { cap: ROOT_CAP });
                }
                seen.insert(img.clone(), ());
                queue.push(img);
            }
        }
    }

    let mut positives: Vec<Root> = Vec::new();
    for (c, ()) in &seen {
        let root = Root { coeffs: c.clone() };
        let all_nonneg = c.iter().all(|&x| x >= 0);
        let all_nonpos = c.iter().all(|&x| x <= 0);
        assert!(
            all_nonneg || all_nonpos,
            "root with mixed signs: closure is inconsistent"
        );
        if all_nonneg {
            positives.push(root);
        }
    }
    // Height, then larger coefficient vectors first, so the simple roots come
    // out in index order at height 1.
    positives.sort_by(|x, y| {
        x.height()
            .cmp(&y.height())
            .then_with(|| y.coeffs.cmp(&x.coeffs))
    });
    for (i, r) in positives.iter().take(n).enumerate() {
        assert_eq!(
            r.coeffs,
            {
                let mut c = vec![0i64; n];
                c[i] = 1;
                c
            },
            "simple roots must head the positive root list"
        );
    }
    let n_positive = positives.len();
    assert_eq!(seen.len(), 2 * n_positive, "roots must come in +/- pairs");

    let mut roots = positives;
    for i in 0..n_positive {
        let neg = Root {
            coeffs: roots[i].coeffs.iter().map(|&c| -c).collect(),
        };
        roots.push(neg);
    }
    let index: BTreeMap<Vec<i64>, usize> = roots
        .iter()
        .enumerate()
        .map(|(i, r)| (r.coeffs.clone(), i))
        .collect();

    let simple_perm: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            roots
                .iter()
                .map(|r| {
                    let img = reflect(&r.coeffs, i);
                    index[&img] as u32
                })
                .collect()
        })
        .collect();

    let rs = RootSystem {
        cartan: a.clone(),
        rank: n,
        gram,
        roots,
        n_positive,
        index,
        simple_perm,
    };
    assert!(
        rs.gram.is_positive_definite(),
        "finite closure with indefinite symmetrization"
    );
    // Simple roots are exactly the positive roots that are not sums of two
    // positive roots.
    #[cfg(debug_assertions)]
    for i in 0..rs.n_positive {
        let decomposable = (0..rs.n_positive).any(|p| {
            let diff: Vec<i64> = rs.roots[i]
                .coeffs
                .iter()
                .zip(&rs.roots[p].coeffs)
                .map(|(a, b)| a - b)
                .collect();
            rs.root_index(&diff).is_some_and(|d| rs.is_positive(d))
        });
        assert_eq!(decomposable, i >= rs.rank);
    }
    Ok(rs)
}

#[derive(Clone, Debug)]
pub struct WeylElement {
    /// Image of each root: `perm[r]` is the index of `w(root_r)`.
    pub perm: Vec<u32>,
    /// Canonical reduced word, 0-based generator indices; lexicographically
    /// smallest among minimal-length words.
    pub word: Vec<u8>,
    pub inverse: u32,
}

/// Bit matrix of the Bruhat order.
struct BitMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> BitMatrix {
        let wpr = n.div_ceil(64);
        BitMatrix {
            words_per_row: wpr,
            bits: vec![0; n * wpr],
        }
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }
}

pub struct WeylGroup {
    pub rs: RootSystem,
    pub elements: Vec<WeylElement>,
    index: BTreeMap<Vec<u32>, u32>,
    right_mul: Vec<Vec<u32>>,
    left_mul: Vec<Vec<u32>>,
    bruhat: OnceCell<BitMatrix>,
    classes: OnceCell<Vec<Vec<u32>>>,
}

pub fn generate_weyl(rs: RootSystem) -> Result<WeylGroup> {
    generate_weyl_capped(rs, DEFAULT_ORDER_CAP)
}

/// Breadth-first generation. Elements are discovered in (length, canonical
/// word) order; the word recorded at first discovery is the lexicographically
/// smallest reduced word.
pub fn generate_weyl_capped(rs: RootSystem, max_order: usize) -> Result<WeylGroup> {
    let nroots = rs.roots.len();
    let rank = rs.rank;
    let identity: Vec<u32> = (0..nroots as u32).collect();
    let mut elements = vec![WeylElement {
        perm: identity.clone(),
        word: Vec::new(),
        inverse: 0,
    }];
    let mut index: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    index.insert(identity, 0);
    let mut right_mul: Vec<Vec<u32>> = vec![vec![0; rank]];

    let mut head = 0usize;
    while head < elements.len() {
        for i in 0..rank {
            let perm = compose(&elements[head].perm, &rs.simple_perm[i]);
            let id = match index.get(&perm) {
                Some(&id) => id,
                None => {
                    if elements.len() + 1 > max_order {
                        return Err(Error::OrderCap { cap: max_order });
                    }
                    let mut word = elements[head].word.clone();
                    word.push(i as u8);
                    let id = elements.len() as u32;
                    index.insert(perm.clone(), id);
                    elements.push(WeylElement {
                        perm,
                        word,
                        inverse: 0,
                    });
                    right_mul.push(vec![0; rank]);
                    id
                }
            };
            right_mul[head][i] = id;
        }
        head += 1;
    }

    // Inverses, inverse permutation lookup.
    for id in 0..elements.len() {
        let mut inv = vec![0u32; nroots];
        for (r, &img) in elements[id].perm.iter().enumerate() {
            inv[img as usize] = r as u32;
        }
        elements[id].inverse = index[&inv];
    }

    // Left multiplication table.
    let left_mul: Vec<Vec<u32>> = (0..rank)
        .map(|i| {
            (0..elements.len())
                .map(|id| {
                    let perm = compose(&rs.simple_perm[i], &elements[id].perm);
                    index[&perm]
                })
                .collect()
        })
        .collect();

    let w = WeylGroup {
        rs,
        elements,
        index,
        right_mul,
        left_mul,
        bruhat: OnceCell::new(),
        classes: OnceCell::new(),
    };
    // Word length equals the number of positive roots sent negative.
    for id in 0..w.order() {
        debug_assert_eq!(w.len(id as u32), w.elements[id].word.len());
    }
    Ok(w)
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    b.iter().map(|&r| a[r as usize]).collect()
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// Element id of the simple reflection `s_i`.
    pub fn simple(&self, i: usize) -> u32 {
        self.index[&self.rs.simple_perm[i]]
    }

    pub fn element(&self, id: u32) -> &WeylElement {
        &self.elements[id as usize]
    }

    /// Coxeter length: the number of positive roots sent to negative roots.
    pub fn len(&self, id: u32) -> usize {
        let m = self.rs.n_positive;
        self.elements[id as usize].perm[..m]
            .iter()
            .filter(|&&img| img as usize >= m)
            .count()
    }

    pub fn sign(&self, id: u32) -> i64 {
        if self.len(id).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let perm = compose(
            &self.elements[a as usize].perm,
            &self.elements[b as usize].perm,
        );
        self.index[&perm]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.elements[a as usize].inverse
    }

    pub fn right_mul_s(&self, a: u32, i: usize) -> u32 {
        self.right_mul[a as usize][i]
    }

    pub fn left_mul_s(&self, i: usize, a: u32) -> u32 {
        self.left_mul[i][a as usize]
    }

    pub fn id_from_perm(&self, perm: &[u32]) -> Option<u32> {
        self.index.get(perm).copied()
    }

    /// Evaluate a word in the generators.
    pub fn element_from_word(&self, word: &[u8]) -> u32 {
        word.iter()
            .fold(self.identity(), |acc, &i| self.right_mul_s(acc, i as usize))
    }

    /// Image of a root index under an element.
    pub fn act_root(&self, w: u32, root: usize) -> usize {
        self.elements[w as usize].perm[root] as usize
    }

    /// The longest element.
    pub fn longest(&self) -> u32 {
        (self.order() - 1) as u32
    }

    /// Ids of all reflections (conjugates of simple reflections), one per
    /// positive root, in positive-root order.
    pub fn reflections(&self) -> Vec<u32> {
        (0..self.rs.n_positive)
            .map(|p| {
                let perm = self.rs.reflection_perm(p);
                self.index[&perm]
            })
            .collect()
    }

    fn bruhat_matrix(&self) -> &BitMatrix {
        self.bruhat.get_or_init(|| {
            // Subword recursion: if w = s w' with l(w') = l(w) - 1 then
            // u <= w iff u <= w' or (su < u and su <= w').
            let n = self.order();
            let mut m = BitMatrix::new(n);
            m.set(0, 0);
            for w in 1..n {
                let s = self.elements[w].word[0] as usize;
                let wp = self.left_mul[s][w] as usize;
                debug_assert_eq!(self.len(wp as u32) + 1, self.len(w as u32));
                for u in 0..n {
                    if self.len(u as u32) > self.len(w as u32) {
                        continue;
                    }
                    let su = self.left_mul[s][u] as usize;
                    let le =
                        m.get(wp, u) || (self.len(su as u32) < self.len(u as u32) && m.get(wp, su));
                    if le {
                        m.set(w, u);
                    }
                }
            }
            m
        })
    }

    /// Bruhat order: true iff some subword of the canonical reduced word of
    /// `w` is a reduced word for `u`.
    pub fn bruhat_leq(&self, u: u32, w: u32) -> bool {
        self.bruhat_matrix().get(w as usize, u as usize)
    }

    pub fn bruhat_lt(&self, u: u32, w: u32) -> bool {
        u != w && self.bruhat_leq(u, w)
    }

    /// Conjugacy classes as sorted id lists, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> &[Vec<u32>] {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut seen = vec![false; n];
            let mut classes = Vec::new();
            for start in 0..n as u32 {
                if seen[start as usize] {
                    continue;
                }
                let mut class = vec![start];
                seen[start as usize] = true;
                let mut head = 0;
                while head < class.len() {
                    let g = class[head];
                    head += 1;
                    for i in 0..self.rank() {
                        let c = self.left_mul_s(i, self.right_mul_s(g, i));
                        if !seen[c as usize] {
                            seen[c as usize] = true;
                            class.push(c);
                        }
                    }
                }
                class.sort_unstable();
                classes.push(class);
            }
            classes
        })
    }

    /// Apply `w` to a rational vector in simple-root coordinates.
    pub fn act_root_coords(&self, w: u32, coords: &[Rat]) -> Vec<Rat> {
        let n = self.rank();
        let mut out = vec![Rat::zero(); n];
        for (j, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let img = &self.rs.roots[self.act_root(w, j)];
            for k in 0..n {
                if img.coeffs[k] != 0 {
                    out[k] += c * rat_i(img.coeffs[k]);
                }
            }
        }
        out
    }

    /// Apply `w` to a weight in fundamental-weight coordinates.
    pub fn act_on_weight(&self, w: u32, fund: &[Rat]) -> Vec<Rat> {
        assert_eq!(fund.len(), self.rank());
        let a = Mat::from_fn(self.rank(), self.rank(), |i, j| rat_i(self.rs.cartan[i][j]));
        let root_coords = a.inverse().expect("Cartan matrix invertible").mul_vec(fund);
        a.mul_vec(&self.act_root_coords(w, &root_coords))
    }

    /// Human-readable form of an element's canonical word, e.g. "s1 s2 s1".
    pub fn word_string(&self, id: u32) -> String {
        let word = &self.elements[id as usize].word;
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter()
                .map(|&i| format!("s{}", i + 1))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// Compact label: generator digits (1-based), "e" for the identity.
    pub fn word_label(&self, id: u32) -> String {
        let word = &self.elements[id as usize].word;
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter().map(|&i| (i + 1).to_string()).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> WeylGroup {
        generate_weyl(build_root_system(&CartanSpec::named(name).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn root_counts() {
        for (name, total, pos) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("A3", 12, 6),
            ("B2", 8, 4),
            ("B3", 18, 9),
            ("C3", 18, 9),
            ("D4", 24, 12),
            ("G2", 12, 6),
            ("F4", 48, 24),
        ] {
            let rs = build_root_system(&CartanSpec::named(name).unwrap()).unwrap();
            assert_eq!(rs.roots.len(), total, "{name}");
            assert_eq!(rs.n_positive, pos, "{name}");
        }
    }

    #[test]
    fn weyl_orders() {
        for (name, order) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 24),
            ("A4", 120),
            ("B2", 8),
            ("B3", 48),
            ("B4", 384),
            ("C3", 48),
            ("C4", 384),
            ("D4", 192),
            ("G2", 12),
            ("F4", 1152),
        ] {
            assert_eq!(group(name).order(), order, "{name}");
        }
    }

    #[test]
    fn not_finite_type() {
        let spec = CartanSpec::from_matrix(vec![vec![2, -2], vec![-2, 2]]);
        let err = build_root_system(&spec).unwrap_err();
        assert_eq!(err, Error::NotFiniteType { cap: ROOT_CAP });
    }

    #[test]
    fn malformed_matrices() {
        for m in [
            vec![vec![1]],
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![2, -1], vec![0, 2]],
            vec![vec![2, -1, 0], vec![-1, 2]],
        ] {
            assert!(matches!(
                build_root_system(&CartanSpec::from_matrix(m)),
                Err(Error::MalformedCartan(_))
            ));
        }
    }

    #[test]
    fn canonical_words_and_lengths() {
        let w = group("A2");
        // Ids are sorted by (length, word); generators come first.
        assert_eq!(w.element(0).word, Vec::<u8>::new());
        assert_eq!(w.element(w.simple(0)).word, vec![0]);
        assert_eq!(w.element(w.simple(1)).word, vec![1]);
        // Longest element of A2: canonical word is the lexicographically
        // smallest of s1 s2 s1 and s2 s1 s2.
        assert_eq!(w.element(w.longest()).word, vec![0, 1, 0]);
        assert_eq!(w.len(w.longest()), 3);
        for id in 0..w.order() as u32 {
            assert_eq!(w.len(id), w.element(id).word.len());
            assert_eq!(w.len(id), w.len(w.inv(id)));
            assert_eq!(w.mul(id, w.inv(id)), w.identity());
        }
    }

    #[test]
    fn sign_is_a_homomorphism() {
        let w = group("B2");
        for a in 0..w.order() as u32 {
            for b in 0..w.order() as u32 {
                assert_eq!(w.sign(w.mul(a, b)), w.sign(a) * w.sign(b));
            }
        }
    }

    #[test]
    fn longest_element_involution() {
        for name in ["A2", "A3", "B2", "B3", "G2", "D4"] {
            let w = group(name);
            let w0 = w.longest();
            assert_eq!(w.mul(w0, w0), w.identity());
            assert_eq!(w.len(w0), w.rs.n_positive);
            // w0 sends every positive root to a negative root.
            for p in 0..w.rs.n_positive {
                assert!(!w.rs.is_positive(w.act_root(w0, p)));
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let w = group("A2");
        let s1 = w.simple(0);
        let s2 = w.simple(1);
        let s1s2 = w.mul(s1, s2);
        assert!(w.bruhat_leq(w.identity(), s1));
        assert!(w.bruhat_leq(s1, s1s2));
        assert!(w.bruhat_leq(s2, s1s2));
        assert!(!w.bruhat_leq(s1, s2));
        assert!(!w.bruhat_leq(s2, s1));
        assert!(!w.bruhat_leq(s1s2, s1));
        for id in 0..w.order() as u32 {
            assert!(w.bruhat_leq(id, w.longest()));
            assert!(w.bruhat_leq(w.identity(), id));
        }
    }

    #[test]
    fn gram_is_invariant() {
        let w = group("G2");
        let n = w.rs.roots.len();
        for g in 0..w.order() as u32 {
            for a in 0..n.min(4) {
                for b in 0..n.min(4) {
                    let lhs = w.rs.form_roots(a, b);
                    let rhs = w.rs.form_roots(w.act_root(g, a), w.act_root(g, b));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn act_on_weight_rho() {
        let w = group("A2");
        let rho = vec![rat_i(1), rat_i(1)];
        let img = w.act_on_weight(w.longest(), &rho);
        assert_eq!(img, vec![rat_i(-1), rat_i(-1)]);
        let s1_img = w.act_on_weight(w.simple(0), &rho);
        // s1(rho) = rho - alpha_1; alpha_1 = 2 w_1 - w_2 in weight coords.
        assert_eq!(s1_img, vec![rat_i(-1), rat_i(2)]);
    }

    #[test]
    fn reflections_count() {
        let w = group("B3");
        let refs = w.reflections();
        assert_eq!(refs.len(), 9);
        for &t in &refs {
            assert_eq!(w.mul(t, t), w.identity());
            assert_eq!(w.sign(t), -1);
        }
    }

    #[test]
    fn conjugacy_class_count() {
        // S3 has 3 classes; S4 has 5; W(B2) has 5.
        assert_eq!(group("A2").conjugacy_classes().len(), 3);
        assert_eq!(group("A3").conjugacy_classes().len(), 5);
        assert_eq!(group("B2").conjugacy_classes().len(), 5);
    }
}
