//! Seeded random corpora: set diagrams over small posets for the glued-
//! category checks, and sheaf complexes over small posets for the
//! recollement round trips. All instances are valid by construction and are
//! revalidated by the core constructors.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use weylglue_core::chainalg::{ChainComplex, ChainMap, RatCol};
use weylglue_core::glue::PosetSheaf;
use weylglue_core::hocolim::{FinitePoset, SetDiagram};
use weylglue_core::linalg::{rat_i, Mat};

pub const DEFAULT_SEED: u64 = 2024;

/// Random poset on `n` nodes: each index pair i < j is related with
/// probability 1/2, then transitively closed.
fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> FinitePoset {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                rel.push((i, j));
            }
        }
    }
    FinitePoset::new(labels, &rel).expect("index-increasing relations are acyclic")
}

fn node_height(p: &FinitePoset, x: usize) -> usize {
    (0..p.len())
        .filter(|&y| p.lt(y, x))
        .map(|y| node_height(p, y) + 1)
        .max()
        .unwrap_or(0)
}

/// Partition of `0..ground` as sorted blocks.
fn random_partition(rng: &mut ChaCha8Rng, ground: usize) -> Vec<Vec<usize>> {
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in 0..ground {
        blocks.entry(rng.gen_range(0..ground)).or_default().push(e);
    }
    blocks.into_values().collect()
}

/// Coarsen a partition by merging random block pairs.
fn coarsen(rng: &mut ChaCha8Rng, mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    while blocks.len() > 1 && rng.gen_bool(0.5) {
        let i = rng.gen_range(0..blocks.len());
        let mut j = rng.gen_range(0..blocks.len() - 1);
        if j >= i {
            j += 1;
        }
        let absorbed = blocks.swap_remove(j.max(i));
        blocks[j.min(i)].extend(absorbed);
        blocks[j.min(i)].sort_unstable();
    }
    blocks.sort();
    blocks
}

fn block_label(b: &[usize]) -> String {
    let digits: Vec<String> = b.iter().map(|e| e.to_string()).collect();
    format!("b{}", digits.join(""))
}

/// A random set diagram: node sets come from a tower of partitions of a
/// small ground set coarsening with poset height (maps send a block to the
/// block containing it — functorial by construction), a random down-closed
/// collection of nodes is emptied out, and a few non-partition elements are
/// padded in by duplicating the images of existing ones.
pub fn random_diagram(rng: &mut ChaCha8Rng) -> SetDiagram {
    let n_nodes = rng.gen_range(1..=4);
    let poset = random_poset(rng, n_nodes);
    let n = poset.len();
    let heights: Vec<usize> = (0..n).map(|x| node_height(&poset, x)).collect();
    let max_h = heights.iter().copied().max().unwrap_or(0);

    let ground = rng.gen_range(1..=5);
    let mut tower = vec![random_partition(rng, ground)];
    for h in 0..max_h {
        let next = coarsen(rng, tower[h].clone());
        tower.push(next);
    }

    // Down-closed set of emptied nodes.
    let mut empty = vec![false; n];
    if rng.gen_bool(0.3) {
        for x in 0..n {
            if rng.gen_bool(0.3) {
                for y in 0..n {
                    if poset.leq(y, x) {
                        empty[y] = true;
                    }
                }
            }
        }
    }

    let mut sets: Vec<Vec<String>> = Vec::with_capacity(n);
    // images[x] = for each element of S_x, its ground representative; fresh
    // padded elements store the representative of their template.
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(n);
    for x in 0..n {
        if empty[x] {
            sets.push(Vec::new());
            reps.push(Vec::new());
        } else {
            let blocks = &tower[heights[x]];
            sets.push(blocks.iter().map(|b| block_label(b)).collect());
            reps.push(blocks.iter().map(|b| b[0]).collect());
        }
    }

    // Padding: duplicate the upward images of an existing element under a
    // fresh label. Images, tracked by ground representative, stay functorial.
    let mut fresh = 0usize;
    for _ in 0..rng.gen_range(0..=3) {
        let x = rng.gen_range(0..n);
        if empty[x] || sets[x].is_empty() || sets[x].len() >= 5 {
            continue;
        }
        let template = rng.gen_range(0..reps[x].len());
        let r = reps[x][template];
        sets[x].push(format!("p{fresh}"));
        reps[x].push(r);
        fresh += 1;
    }

    let mut maps = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        let images: Vec<usize> = reps[x]
            .iter()
            .map(|&r| {
                let target = &tower[heights[y]];
                let block = target
                    .iter()
                    .position(|b| b.contains(&r))
                    .expect("ground element lies in some block");
                debug_assert!(!empty[y] || empty[x]);
                block
            })
            .collect();
        maps.insert((x, y), images);
    }
    SetDiagram::new(poset, sets, maps).expect("constructed diagram is functorial")
}

pub fn diagram_corpus(seed: u64, count: usize) -> Vec<SetDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_diagram(&mut rng)).collect()
}

// ---------------------------------------------------------------------------
// Random sheaves
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum SummandKind {
    /// One-dimensional in a single degree.
    Cell,
    /// Two-dimensional, spanning degrees q and q+1 with identity boundary.
    Disc,
}

struct Summand {
    base: usize,
    q: i64,
    kind: SummandKind,
}

impl Summand {
    fn dims(&self, degree: i64) -> usize {
        match self.kind {
            SummandKind::Cell => usize::from(degree == self.q),
            SummandKind::Disc => usize::from(degree == self.q || degree == self.q + 1),
        }
    }
}

/// Random invertible square matrix: a product of elementary operations, so
/// the determinant is ±1 and the inverse is exact.
fn random_invertible(rng: &mut ChaCha8Rng, k: usize) -> Mat {
    let mut m = Mat::identity(k);
    if k <= 1 {
        return m;
    }
    for _ in 0..2 * k {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c = rat_i(*[-2i64, -1, 1, 2].choose(rng).unwrap());
        for col in 0..k {
            let add = &m[(i, col)] * &c;
            m[(j, col)] += add;
        }
    }
    m
}

fn mat_to_cols(m: &Mat) -> Vec<RatCol> {
    (0..m.cols)
        .map(|j| {
            (0..m.rows)
                .filter(|&i| !m[(i, j)].is_zero())
                .map(|i| (i as u32, m[(i, j)].clone()))
                .collect()
        })
        .collect()
}

/// A random sheaf of complexes on the poset: a direct sum of cell and disc
/// summands supported on principal up-sets, conjugated at every node by a
/// random exact basis change. Total dimension stays within `max_total`.
pub fn random_sheaf_on(rng: &mut ChaCha8Rng, poset: &FinitePoset, max_total: usize) -> PosetSheaf {
    let n = poset.len();
    let upset_size = |x: usize| (0..n).filter(|&y| poset.leq(x, y)).count();

    let mut summands: Vec<Summand> = Vec::new();
    let mut total = 0usize;
    for _ in 0..12 {
        let base = rng.gen_range(0..n);
        let q = rng.gen_range(-1..=2);
        let kind = if rng.gen_bool(0.4) {
            SummandKind::Disc
        } else {
            SummandKind::Cell
        };
        let per_node = match kind {
            SummandKind::Cell => 1,
            SummandKind::Disc => 2,
        };
        let cost = upset_size(base) * per_node;
        if total + cost <= max_total && cost > 0 {
            summands.push(Summand { base, q, kind });
            total += cost;
        }
    }

    let lo = summands.iter().map(|s| s.q).min().unwrap_or(0);
    let hi = summands
        .iter()
        .map(|s| match s.kind {
            SummandKind::Cell => s.q,
            SummandKind::Disc => s.q + 1,
        })
        .max()
        .unwrap_or(0);

    // Present summands and block offsets per node and degree.
    let present = |y: usize| -> Vec<usize> {
        summands
            .iter()
            .enumerate()
            .filter(|(_, s)| poset.leq(s.base, y))
            .map(|(i, _)| i)
            .collect()
    };
    let dim_at = |y: usize, degree: i64| -> usize {
        present(y).iter().map(|&i| summands[i].dims(degree)).sum()
    };
    // Basis position of summand `s`'s generator in degree `degree` at node y.
    let offset_of = |y: usize, degree: i64, s: usize| -> usize {
        present(y)
            .iter()
            .take_while(|&&i| i < s)
            .map(|&i| summands[i].dims(degree))
            .sum()
    };

    // Basis changes, one invertible matrix per node and degree.
    let mut t: Vec<BTreeMap<i64, (Mat, Mat)>> = Vec::with_capacity(n);
    for y in 0..n {
        let mut per_degree = BTreeMap::new();
        for degree in lo..=hi {
            let k = dim_at(y, degree);
            let m = random_invertible(rng, k);
            let inv = m.inverse().expect("elementary product is invertible");
            per_degree.insert(degree, (m, inv));
        }
        t.push(per_degree);
    }

    let mut complexes = Vec::with_capacity(n);
    for y in 0..n {
        let mut labels = Vec::new();
        let mut cols = Vec::new();
        for degree in lo..=hi {
            let k = dim_at(y, degree);
            labels.push((0..k).map(|i| format!("g{degree}.{i}")).collect());
            // Block differential: disc upper generator maps to its lower one.
            let rows = if degree == lo {
                0
            } else {
                dim_at(y, degree - 1)
            };
            let mut dmat = Mat::zero(rows, k);
            if degree > lo {
                for &s in &present(y) {
                    if let SummandKind::Disc = summands[s].kind {
                        if summands[s].q + 1 == degree {
                            let r = offset_of(y, degree - 1, s);
                            let c = offset_of(y, degree, s);
                            dmat[(r, c)] = rat_i(1);
                        }
                    }
                }
                // Conjugate: T_{deg-1} d T_deg^{-1}.
                dmat = t[y][&(degree - 1)].0.mul(&dmat).mul(&t[y][&degree].1);
            }
            cols.push(mat_to_cols(&dmat));
        }
        complexes.push(
            ChainComplex::new(lo, labels, cols).expect("summand differential squares to zero"),
        );
    }

    let mut maps = BTreeMap::new();
    for (x, y) in poset.strict_pairs() {
        let mut cols: BTreeMap<i64, Vec<RatCol>> = BTreeMap::new();
        for degree in lo..=hi {
            let kx = dim_at(x, degree);
            let ky = dim_at(y, degree);
            let mut rho = Mat::zero(ky, kx);
            for &s in &present(x) {
                // Summands present at x stay present at y (up-set support).
                for part in 0..summands[s].dims(degree) {
                    let r = offset_of(y, degree, s) + part;
                    let c = offset_of(x, degree, s) + part;
                    rho[(r, c)] = rat_i(1);
                }
            }
            let conj = t[y][&degree].0.mul(&rho).mul(&t[x][&degree].1);
            cols.insert(degree, mat_to_cols(&conj));
        }
        maps.insert(
            (x, y),
            ChainMap::new(complexes[x].clone(), complexes[y].clone(), cols)
                .expect("block restriction is a chain map"),
        );
    }
    PosetSheaf::new(poset.clone(), complexes, maps).expect("corpus sheaf is functorial")
}

/// Random up-closed node set (possibly empty or everything).
pub fn random_up_closed(rng: &mut ChaCha8Rng, poset: &FinitePoset) -> Vec<usize> {
    let n = poset.len();
    let mut open = vec![false; n];
    for x in 0..n {
        if rng.gen_bool(0.4) {
            for y in 0..n {
                if poset.leq(x, y) {
                    open[y] = true;
                }
            }
        }
    }
    (0..n).filter(|&x| open[x]).collect()
}

/// Recollement corpus: sheaves with a chosen open subset over the two-point
/// chain, the three-chain, and random four-node posets, in rotation.
pub fn sheaf_corpus(seed: u64, count: usize) -> Vec<(PosetSheaf, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sierpinski = FinitePoset::new(vec!["z".into(), "u".into()], &[(0, 1)]).unwrap();
    let chain3 =
        FinitePoset::new(vec!["0".into(), "1".into(), "2".into()], &[(0, 1), (1, 2)]).unwrap();
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let poset = match i % 3 {
            0 => sierpinski.clone(),
            1 => chain3.clone(),
            _ => random_poset(&mut rng, 4),
        };
        let sheaf = random_sheaf_on(&mut rng, &poset, 8);
        let open = random_up_closed(&mut rng, &sheaf.poset);
        out.push((sheaf, open));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_deterministic_and_valid() {
        let a = diagram_corpus(7, 10);
        let b = diagram_corpus(7, 10);
        assert_eq!(a.len(), 10);
        for (da, db) in a.iter().zip(&b) {
            assert_eq!(da.sets, db.sets);
            assert_eq!(da.poset.labels, db.poset.labels);
            for s in &da.sets {
                assert!(s.len() <= 5);
            }
        }
        let s1 = sheaf_corpus(7, 6);
        let s2 = sheaf_corpus(7, 6);
        assert_eq!(s1.len(), 6);
        for ((f1, o1), (f2, o2)) in s1.iter().zip(&s2) {
            assert_eq!(o1, o2);
            assert!(f1.total_dim() <= 8);
            assert_eq!(f1.total_dim(), f2.total_dim());
            for (c1, c2) in f1.complexes.iter().zip(&f2.complexes) {
                assert_eq!(c1, c2);
            }
        }
    }

    #[test]
    fn sheaf_corpus_has_nontrivial_instances() {
        let corpus = sheaf_corpus(DEFAULT_SEED, 30);
        assert!(corpus.iter().any(|(f, _)| f.total_dim() >= 4));
        assert!(corpus.iter().any(|(_, open)| !open.is_empty()));
        assert!(corpus
            .iter()
            .any(|(f, open)| !open.is_empty() && open.len() < f.poset.len()));
        // Some instance has a nonzero differential (a disc summand).
        assert!(corpus.iter().any(|(f, _)| f.complexes.iter().any(|cx| cx
            .degrees()
            .any(|n| cx.boundary_cols(n).iter().any(|c| !c.is_empty())))));
    }
}
