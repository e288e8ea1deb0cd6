//! Chain complexes of finite-dimensional rational vector spaces with labeled
//! bases, plus the homological toolkit used everywhere else: Betti numbers,
//! deterministic homology representatives, mapping cones and fibers, group
//! actions by chain maps, and character arithmetic.
//!
//! Degrees are homological (the differential lowers degree by one) and may be
//! negative; cochain-style complexes are stored with negated degrees.
//! Boundaries are kept as sparse rational columns so that large complexes
//! (tens of thousands of basis elements, entries of modest size) stay cheap;
//! dense linear algebra is only used for explicit homology bases on small
//! complexes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::coxeter::WeylGroup;
use crate::error::{Error, Result};
use crate::linalg::{rat_i, Mat, Rat, RowSpan, SparseIntMat};

/// Sparse column: sorted (row, value) pairs, values nonzero.
pub type RatCol = Vec<(u32, Rat)>;

/// Build a sparse column from (row, value) pairs in any order.
pub fn col_from_pairs(pairs: impl IntoIterator<Item = (u32, Rat)>) -> RatCol {
    let mut acc: BTreeMap<u32, Rat> = BTreeMap::new();
    for (r, v) in pairs {
        let e = acc.entry(r).or_insert_with(Rat::zero);
        *e += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// a + c*b.
pub fn col_axpy(a: &RatCol, c: &Rat, b: &RatCol) -> RatCol {
    col_from_pairs(a.iter().cloned().chain(b.iter().map(|(r, v)| (*r, c * v))))
}

/// Apply a sparse matrix (list of columns) to a sparse column.
pub fn col_apply(mat: &[RatCol], col: &RatCol) -> RatCol {
    col_from_pairs(
        col.iter()
            .flat_map(|(r, c)| mat[*r as usize].iter().map(move |(rr, vv)| (*rr, c * vv))),
    )
}

pub fn col_to_dense(col: &RatCol, dim: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    for (r, c) in col {
        v[*r as usize] = c.clone();
    }
    v
}

pub fn col_from_dense(v: &[Rat]) -> RatCol {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(r, c)| (r as u32, c.clone()))
        .collect()
}

/// A bounded chain complex with labeled bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    /// Basis labels per degree, starting at `lo`.
    bases: Vec<Vec<String>>,
    /// `d[k]` maps degree `lo + k` to degree `lo + k - 1`; one sparse column
    /// per basis element. Columns of `d[0]` are empty (the target is zero).
    d: Vec<Vec<RatCol>>,
}

impl ChainComplex {
    /// Validates shapes and the relation d(d(x)) = 0.
    pub fn new(lo: i64, bases: Vec<Vec<String>>, d: Vec<Vec<RatCol>>) -> Result<ChainComplex> {
        if bases.len() != d.len() {
            return Err(Error::Invalid("boundary count != basis count".into()));
        }
        for (k, cols) in d.iter().enumerate() {
            if cols.len() != bases[k].len() {
                return Err(Error::Invalid(format!(
                    "degree {}: {} columns for {} basis elements",
                    lo + k as i64,
                    cols.len(),
                    bases[k].len()
                )));
            }
            let target = if k == 0 { 0 } else { bases[k - 1].len() };
            for col in cols {
                for (r, v) in col {
                    if *r as usize >= target {
                        return Err(Error::Invalid(format!(
                            "degree {}: row {} out of range {}",
                            lo + k as i64,
                            r,
                            target
                        )));
                    }
                    if v.is_zero() {
                        return Err(Error::Invalid("stored zero entry".into()));
                    }
                }
                debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            }
        }
        let cx = ChainComplex { lo, bases, d };
        for k in 1..cx.d.len() {
            for col in &cx.d[k] {
                let dd = col_apply(&cx.d[k - 1], col);
                if !dd.is_empty() {
                    return Err(Error::Invalid(format!(
                        "d∘d != 0 from degree {}",
                        cx.lo + k as i64
                    )));
                }
            }
        }
        Ok(cx)
    }

    /// The zero complex.
    pub fn zero() -> ChainComplex {
        ChainComplex {
            lo: 0,
            bases: Vec::new(),
            d: Vec::new(),
        }
    }

    /// One basis vector in a single degree.
    pub fn concentrated(label: &str, degree: i64) -> ChainComplex {
        ChainComplex {
            lo: degree,
            bases: vec![vec![String::from(label)]],
            d: vec![vec![Vec::new()]],
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.bases.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.lo..=self.hi()
    }

    fn idx(&self, n: i64) -> Option<usize> {
        if n < self.lo {
            return None;
        }
        let k = (n - self.lo) as usize;
        if k < self.bases.len() {
            Some(k)
        } else {
            None
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.idx(n).map_or(0, |k| self.bases[k].len())
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn labels(&self, n: i64) -> &[String] {
        self.idx(n).map_or(&[], |k| &self.bases[k])
    }

    /// Sparse columns of the boundary out of degree n.
    pub fn boundary_cols(&self, n: i64) -> &[RatCol] {
        self.idx(n).map_or(&[], |k| &self.d[k])
    }

    pub fn boundary_dense(&self, n: i64) -> Mat {
        let rows = self.dim(n - 1);
        let cols = self.dim(n);
        let mut m = Mat::zero(rows, cols);
        for (j, col) in self.boundary_cols(n).iter().enumerate() {
            for (r, v) in col {
                m[(*r as usize, j)] = v.clone();
            }
        }
        m
    }

    /// Integer sparse form of the boundary, denominators cleared per column
    /// (rank-preserving).
    pub fn boundary_sparse_int(&self, n: i64) -> SparseIntMat {
        let mut s = SparseIntMat::zero(self.dim(n - 1), self.dim(n));
        for (j, col) in self.boundary_cols(n).iter().enumerate() {
            let mut denom = crate::linalg::Int::one();
            for (_, v) in col {
                denom = num_integer::Integer::lcm(&denom, v.denom());
            }
            for (r, v) in col {
                let scaled = v * Rat::from_integer(denom.clone());
                debug_assert!(scaled.denom().is_one());
                s.cols[j].push((*r, scaled.numer().clone()));
            }
        }
        s
    }

    /// Betti numbers for every degree in range, as (degree, rank) pairs.
    pub fn betti(&self) -> Vec<(i64, usize)> {
        let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
        for n in self.degrees() {
            ranks.insert(n, self.boundary_sparse_int(n).rank());
        }
        self.degrees()
            .map(|n| {
                let b = self.dim(n)
                    - ranks.get(&n).copied().unwrap_or(0)
                    - self
                        .idx(n + 1)
                        .map_or(0, |_| ranks.get(&(n + 1)).copied().unwrap_or(0));
                (n, b)
            })
            .collect()
    }

    /// Betti numbers with zero degrees dropped.
    pub fn betti_nonzero(&self) -> Vec<(i64, usize)> {
        self.betti().into_iter().filter(|&(_, b)| b != 0).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti_nonzero().is_empty()
    }

    /// Homology of a point: one class in degree 0 and nothing else.
    pub fn has_point_homology(&self) -> bool {
        self.betti_nonzero() == vec![(0, 1)]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|n| {
                let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
                sign * self.dim(n) as i64
            })
            .sum()
    }

    /// Deterministic homology representatives in degree n (dense; intended
    /// for small complexes). Each vector is a cycle, and together they span a
    /// complement of the boundaries inside the cycles.
    pub fn homology_reps(&self, n: i64) -> Vec<Vec<Rat>> {
        let cycles = self.boundary_dense(n).kernel_basis();
        let mut span = RowSpan::new();
        for col in self.boundary_cols(n + 1) {
            span.insert(&col_to_dense(col, self.dim(n)));
        }
        let mut reps = Vec::new();
        for z in cycles {
            if span.insert(&z) {
                reps.push(z);
            }
        }
        reps
    }

    /// Direct sum, labels prefixed to stay unique.
    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        if self.total_dim() == 0 {
            return other.clone();
        }
        if other.total_dim() == 0 {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut bases = Vec::new();
        let mut d = Vec::new();
        for n in lo..=hi {
            let mut labels: Vec<String> = self.labels(n).iter().map(|l| format!("L.{l}")).collect();
            labels.extend(other.labels(n).iter().map(|l| format!("R.{l}")));
            let off = self.dim(n - 1) as u32;
            let mut cols: Vec<RatCol> = self.boundary_cols(n).to_vec();
            cols.extend(other.boundary_cols(n).iter().map(|col| {
                col.iter()
                    .map(|(r, v)| (r + off, v.clone()))
                    .collect::<RatCol>()
            }));
            bases.push(labels);
            d.push(cols);
        }
        ChainComplex::new(lo, bases, d).expect("direct sum of valid complexes is valid")
    }
}

/// A chain map between two complexes, stored as sparse columns per degree.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub from: ChainComplex,
    pub to: ChainComplex,
    /// cols[n][j] = image of the j-th basis vector of from in degree n.
    cols: BTreeMap<i64, Vec<RatCol>>,
}

impl ChainMap {
    /// Validates that f commutes with the differentials. Missing degrees are
    /// zero maps (only allowed where `from` is zero-dimensional).
    pub fn new(
        from: ChainComplex,
        to: ChainComplex,
        mut cols: BTreeMap<i64, Vec<RatCol>>,
    ) -> Result<ChainMap> {
        for n in from.lo()..=from.hi() {
            let entry = cols
                .entry(n)
                .or_insert_with(|| vec![Vec::new(); from.dim(n)]);
            if entry.len() != from.dim(n) {
                return Err(Error::Invalid(format!("degree {n}: wrong column count")));
            }
            for col in entry.iter() {
                for (r, _) in col {
                    if *r as usize >= to.dim(n) {
                        return Err(Error::Invalid(format!("degree {n}: row out of range")));
                    }
                }
            }
        }
        let f = ChainMap { from, to, cols };
        for n in f.from.lo()..=f.from.hi() {
            for j in 0..f.from.dim(n) {
                let via_to = col_apply(f.to.boundary_cols(n), &f.cols[&n][j]);
                let down = &f.from.boundary_cols(n)[j];
                let via_from = f.apply_col(n - 1, down);
                if via_to != via_from {
                    return Err(Error::Invalid(format!(
                        "not a chain map at degree {n}, basis {j}"
                    )));
                }
            }
        }
        Ok(f)
    }

    pub fn identity(cx: &ChainComplex) -> ChainMap {
        let cols = cx
            .degrees()
            .map(|n| {
                (
                    n,
                    (0..cx.dim(n))
                        .map(|j| vec![(j as u32, Rat::one())])
                        .collect(),
                )
            })
            .collect();
        ChainMap {
            from: cx.clone(),
            to: cx.clone(),
            cols,
        }
    }

    pub fn zero_map(from: &ChainComplex, to: &ChainComplex) -> ChainMap {
        let cols = from
            .degrees()
            .map(|n| (n, vec![Vec::new(); from.dim(n)]))
            .collect();
        ChainMap {
            from: from.clone(),
            to: to.clone(),
            cols,
        }
    }

    pub fn col(&self, n: i64, j: usize) -> &RatCol {
        &self.cols[&n][j]
    }

    pub fn degree_cols(&self, n: i64) -> &[RatCol] {
        self.cols.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Apply f in degree n to a sparse vector.
    pub fn apply_col(&self, n: i64, v: &RatCol) -> RatCol {
        match self.cols.get(&n) {
            Some(mat) => col_apply(mat, v),
            None => Vec::new(),
        }
    }

    /// Mapping cone: degree n is from_(n-1) + to_n, with
    /// d(x, y) = (-d x, f(x) + d y).
    pub fn cone(&self) -> ChainComplex {
        let lo = self.to.lo().min(self.from.lo() + 1);
        let hi = self.to.hi().max(self.from.hi() + 1);
        let mut bases = Vec::new();
        let mut d = Vec::new();
        for n in lo..=hi {
            let mut labels: Vec<String> = self
                .from
                .labels(n - 1)
                .iter()
                .map(|l| format!("x.{l}"))
                .collect();
            labels.extend(self.to.labels(n).iter().map(|l| format!("y.{l}")));
            let x_off_target = self.from.dim(n - 2) as u32;
            let mut cols: Vec<RatCol> = Vec::new();
            for j in 0..self.from.dim(n - 1) {
                let minus_dx: RatCol = self.from.boundary_cols(n - 1)[j]
                    .iter()
                    .map(|(r, v)| (*r, -v.clone()))
                    .collect();
                let fx: RatCol = self.cols[&(n - 1)][j]
                    .iter()
                    .map(|(r, v)| (r + x_off_target, v.clone()))
                    .collect();
                cols.push(col_from_pairs(minus_dx.into_iter().chain(fx)));
            }
            for j in 0..self.to.dim(n) {
                let dy: RatCol = self.to.boundary_cols(n)[j]
                    .iter()
                    .map(|(r, v)| (r + x_off_target, v.clone()))
                    .collect();
                cols.push(dy);
            }
            bases.push(labels);
            d.push(cols);
        }
        ChainComplex::new(lo, bases, d).expect("cone of a chain map is a complex")
    }

    /// Fiber (shifted cone): degree n is from_n + to_(n+1), with
    /// d(x, y) = (d x, f(x) - d y). The canonical projection to `from` is a
    /// chain map and the composite into `to` is nullhomotopic by y.
    pub fn fiber(&self) -> ChainComplex {
        let lo = self.from.lo().min(self.to.lo() - 1);
        let hi = self.from.hi().max(self.to.hi() - 1);
        let mut bases = Vec::new();
        let mut d = Vec::new();
        for n in lo..=hi {
            let mut labels: Vec<String> = self
                .from
                .labels(n)
                .iter()
                .map(|l| format!("x.{l}"))
                .collect();
            labels.extend(self.to.labels(n + 1).iter().map(|l| format!("y.{l}")));
            let y_off_target = self.from.dim(n - 1) as u32;
            let mut cols: Vec<RatCol> = Vec::new();
            for j in 0..self.from.dim(n) {
                let dx: RatCol = self.from.boundary_cols(n)[j].clone();
                let fx: RatCol = self.cols[&n][j]
                    .iter()
                    .map(|(r, v)| (r + y_off_target, v.clone()))
                    .collect();
                cols.push(col_from_pairs(dx.into_iter().chain(fx)));
            }
            for j in 0..self.to.dim(n + 1) {
                let minus_dy: RatCol = self.to.boundary_cols(n + 1)[j]
                    .iter()
                    .map(|(r, v)| (r + y_off_target, -v.clone()))
                    .collect();
                cols.push(minus_dy);
            }
            bases.push(labels);
            d.push(cols);
        }
        ChainComplex::new(lo, bases, d).expect("fiber of a chain map is a complex")
    }

    /// Is f a quasi-isomorphism? Checked through the cone being acyclic.
    pub fn is_quasi_iso(&self) -> bool {
        self.cone().is_acyclic()
    }

    /// Composition self followed by next (i.e. next ∘ self), revalidated.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        if self.to != next.from {
            return Err(Error::Invalid("composition endpoint mismatch".into()));
        }
        let cols = self
            .from
            .degrees()
            .map(|n| {
                (
                    n,
                    (0..self.from.dim(n))
                        .map(|j| next.apply_col(n, self.col(n, j)))
                        .collect(),
                )
            })
            .collect();
        ChainMap::new(self.from.clone(), next.to.clone(), cols)
    }

    /// Equality of maps with the same endpoints, column by column.
    pub fn equals(&self, other: &ChainMap) -> bool {
        self.from == other.from
            && self.to == other.to
            && self
                .from
                .degrees()
                .all(|n| self.degree_cols(n) == other.degree_cols(n))
    }
}

/// A finite-group action on a complex: one chain-map matrix family per group
/// element (indexed by Weyl element id).
#[derive(Clone, Debug)]
pub struct GroupAction {
    /// mats[g][n] = sparse columns of g acting on degree n.
    pub mats: Vec<BTreeMap<i64, Vec<RatCol>>>,
}

impl GroupAction {
    /// Check every element acts by chain maps.
    pub fn validate(&self, cx: &ChainComplex) -> Result<()> {
        for (g, mat) in self.mats.iter().enumerate() {
            for n in cx.degrees() {
                let cols = mat
                    .get(&n)
                    .ok_or_else(|| Error::Invalid(format!("element {g}: missing degree {n}")))?;
                if cols.len() != cx.dim(n) {
                    return Err(Error::Invalid(format!("element {g}: bad shape at {n}")));
                }
                for (j, col) in cols.iter().enumerate() {
                    let lhs = col_apply(cx.boundary_cols(n), col);
                    let rhs = match mat.get(&(n - 1)) {
                        Some(prev) => col_apply(prev, &cx.boundary_cols(n)[j]),
                        None => Vec::new(),
                    };
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "element {g} is not a chain map at degree {n}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, g: usize, n: i64, v: &RatCol) -> RatCol {
        match self.mats[g].get(&n) {
            Some(mat) => col_apply(mat, v),
            None => Vec::new(),
        }
    }

    pub fn trace(&self, g: usize, n: i64) -> Rat {
        let mut t = Rat::zero();
        if let Some(mat) = self.mats[g].get(&n) {
            for (j, col) in mat.iter().enumerate() {
                for (r, v) in col {
                    if *r as usize == j {
                        t += v.clone();
                    }
                }
            }
        }
        t
    }
}

/// A function on group elements, constant on conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    pub values: Vec<Rat>,
}

impl ClassFunction {
    pub fn constant(order: usize, v: Rat) -> ClassFunction {
        ClassFunction {
            values: vec![v; order],
        }
    }

    pub fn trivial(w: &WeylGroup) -> ClassFunction {
        ClassFunction::constant(w.order(), Rat::one())
    }

    pub fn sign(w: &WeylGroup) -> ClassFunction {
        ClassFunction {
            values: (0..w.order() as u32).map(|g| rat_i(w.sign(g))).collect(),
        }
    }

    pub fn zero(order: usize) -> ClassFunction {
        ClassFunction::constant(order, Rat::zero())
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_class_function(&self, w: &WeylGroup) -> bool {
        w.conjugacy_classes().iter().all(|class| {
            class
                .iter()
                .all(|&g| self.values[g as usize] == self.values[class[0] as usize])
        })
    }

    /// Inner product (1/|W|) sum of chi(w) psi(w); characters here are
    /// rational-valued, so no conjugation is involved.
    pub fn multiplicity(&self, other: &ClassFunction, w: &WeylGroup) -> Rat {
        assert_eq!(self.values.len(), w.order());
        let mut acc = Rat::zero();
        for g in 0..w.order() {
            acc += &self.values[g] * &other.values[g];
        }
        acc / rat_i(w.order() as i64)
    }
}

/// Character of the action on homology, degree by degree (dense path:
/// intended for complexes of modest total dimension).
pub fn homology_characters(
    cx: &ChainComplex,
    act: &GroupAction,
    order: usize,
) -> Result<BTreeMap<i64, ClassFunction>> {
    act.validate(cx)?;
    let mut out = BTreeMap::new();
    for n in cx.degrees() {
        let reps = cx.homology_reps(n);
        if reps.is_empty() {
            out.insert(n, ClassFunction::zero(order));
            continue;
        }
        // Coordinates: solve [reps | boundary-basis] * c = g(rep_i); the
        // trace is the sum of the rep-coordinates on the diagonal.
        let dim = cx.dim(n);
        let mut span = RowSpan::new();
        let mut boundary_basis: Vec<Vec<Rat>> = Vec::new();
        for col in cx.boundary_cols(n + 1) {
            let dense = col_to_dense(col, dim);
            if span.insert(&dense) {
                boundary_basis.push(dense);
            }
        }
        let ncols = reps.len() + boundary_basis.len();
        let m = Mat::from_fn(dim, ncols, |i, j| {
            if j < reps.len() {
                reps[j][i].clone()
            } else {
                boundary_basis[j - reps.len()][i].clone()
            }
        });
        let mut values = Vec::with_capacity(order);
        for g in 0..order {
            let mut tr = Rat::zero();
            for (i, rep) in reps.iter().enumerate() {
                let img = act.apply(g, n, &col_from_dense(rep));
                let rhs = col_to_dense(&img, dim);
                let sol = m.solve(&rhs).ok_or_else(|| {
                    Error::Invalid(format!("action does not preserve cycles at degree {n}"))
                })?;
                tr += sol[i].clone();
            }
            values.push(tr);
        }
        out.insert(n, ClassFunction { values });
    }
    // Hopf trace formula: alternating sums of homology characters and of
    // chain-level traces agree elementwise.
    for g in 0..order {
        let mut lhs = Rat::zero();
        let mut rhs = Rat::zero();
        for n in cx.degrees() {
            let sgn = if n.rem_euclid(2) == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            lhs += &sgn * &out[&n].values[g];
            rhs += &sgn * act.trace(g, n);
        }
        if lhs != rhs {
            return Err(Error::Invalid(format!(
                "trace formula fails for element {g}"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{build_root_system, generate_weyl, CartanSpec};

    fn q(n: i64) -> Rat {
        rat_i(n)
    }

    fn one_col(r: u32, v: i64) -> RatCol {
        vec![(r, q(v))]
    }

    #[test]
    fn acyclic_two_term() {
        // 0 -> Q --id--> Q -> 0
        let cx = ChainComplex::new(
            0,
            vec![vec!["a".into()], vec!["b".into()]],
            vec![vec![Vec::new()], vec![one_col(0, 1)]],
        )
        .unwrap();
        assert!(cx.is_acyclic());
        assert_eq!(cx.euler_characteristic(), 0);
    }

    #[test]
    fn circle_from_parallel_edges() {
        // Two vertices, two parallel edges: homology of a circle.
        let d1 = vec![
            col_from_pairs([(0u32, q(-1)), (1u32, q(1))]),
            col_from_pairs([(0u32, q(-1)), (1u32, q(1))]),
        ];
        let cx = ChainComplex::new(
            0,
            vec![
                vec!["v0".into(), "v1".into()],
                vec!["e0".into(), "e1".into()],
            ],
            vec![vec![Vec::new(), Vec::new()], d1],
        )
        .unwrap();
        assert_eq!(cx.betti(), vec![(0, 1), (1, 1)]);
        assert!(!cx.has_point_homology());
        let reps0 = cx.homology_reps(0);
        let reps1 = cx.homology_reps(1);
        assert_eq!(reps0.len(), 1);
        assert_eq!(reps1.len(), 1);
    }

    #[test]
    fn point_complex() {
        let cx = ChainComplex::concentrated("pt", 0);
        assert!(cx.has_point_homology());
    }

    #[test]
    fn dd_zero_enforced() {
        // d1(e) = v, d2(f) = e with d(d(f)) = v != 0
        let bad = ChainComplex::new(
            0,
            vec![vec!["v".into()], vec!["e".into()], vec!["f".into()]],
            vec![vec![Vec::new()], vec![one_col(0, 1)], vec![one_col(0, 1)]],
        );
        assert!(matches!(bad, Err(Error::Invalid(_))));
    }

    #[test]
    fn cone_of_identity_and_zero() {
        let cx = ChainComplex::concentrated("a", 0);
        let id = ChainMap::identity(&cx);
        assert!(id.cone().is_acyclic());
        assert!(id.is_quasi_iso());
        // cone(0 -> C) has the homology of C plus a shifted copy.
        let z = ChainMap::zero_map(&ChainComplex::zero(), &cx);
        assert_eq!(z.cone().betti_nonzero(), vec![(0, 1)]);
        let z2 = ChainMap::zero_map(&cx, &ChainComplex::zero());
        assert_eq!(z2.cone().betti_nonzero(), vec![(1, 1)]);
    }

    #[test]
    fn cone_of_multiplication_by_two() {
        let a = ChainComplex::concentrated("a", 0);
        let b = ChainComplex::concentrated("b", 0);
        let f = ChainMap::new(a, b, [(0i64, vec![one_col(0, 2)])].into_iter().collect()).unwrap();
        assert!(f.cone().is_acyclic());
    }

    #[test]
    fn fiber_shifts_cone() {
        // fiber(0 -> C) has the homology of C shifted down by one.
        let cx = ChainComplex::concentrated("a", 0);
        let z = ChainMap::zero_map(&ChainComplex::zero(), &cx);
        assert_eq!(z.fiber().betti_nonzero(), vec![(-1, 1)]);
        // fiber(id) is acyclic.
        assert!(ChainMap::identity(&cx).fiber().is_acyclic());
    }

    #[test]
    fn direct_sum_betti() {
        let a = ChainComplex::concentrated("a", 0);
        let b = ChainComplex::concentrated("b", 2);
        let s = a.direct_sum(&b);
        assert_eq!(s.betti_nonzero(), vec![(0, 1), (2, 1)]);
    }

    #[test]
    fn euler_characteristic_matches_betti() {
        let d1 = vec![
            col_from_pairs([(0u32, q(-1)), (1u32, q(1))]),
            col_from_pairs([(1u32, q(-1)), (2u32, q(1))]),
        ];
        let cx = ChainComplex::new(
            0,
            vec![
                vec!["v0".into(), "v1".into(), "v2".into()],
                vec!["e0".into(), "e1".into()],
            ],
            vec![vec![Vec::new(); 3], d1],
        )
        .unwrap();
        let from_betti: i64 = cx
            .betti()
            .iter()
            .map(|&(n, b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        assert_eq!(from_betti, cx.euler_characteristic());
    }

    #[test]
    fn homology_invariant_under_basis_permutation() {
        // Relabel/permute degree-1 basis of the circle complex.
        let d1 = vec![
            col_from_pairs([(0u32, q(-1)), (1u32, q(1))]),
            col_from_pairs([(0u32, q(-1)), (1u32, q(1))]),
        ];
        let mut d1p = d1.clone();
        d1p.swap(0, 1);
        for d in [d1, d1p] {
            let cx = ChainComplex::new(
                0,
                vec![
                    vec!["v0".into(), "v1".into()],
                    vec!["e0".into(), "e1".into()],
                ],
                vec![vec![Vec::new(), Vec::new()], d],
            )
            .unwrap();
            assert_eq!(cx.betti_nonzero(), vec![(0, 1), (1, 1)]);
        }
    }

    fn permutation_action(
        w: &WeylGroup,
        perm: impl Fn(u32, usize) -> usize,
        dim: usize,
    ) -> GroupAction {
        let mats = (0..w.order() as u32)
            .map(|g| {
                let cols: Vec<RatCol> = (0..dim)
                    .map(|j| vec![(perm(g, j) as u32, Rat::one())])
                    .collect();
                [(0i64, cols)].into_iter().collect()
            })
            .collect();
        GroupAction { mats }
    }

    #[test]
    fn regular_representation_characters() {
        // W(A2) = S3 permuting itself by left translation: 6 points in
        // degree 0. chi_0 is the regular character.
        let w =
            generate_weyl(build_root_system(&CartanSpec::named("A2").unwrap()).unwrap()).unwrap();
        let labels: Vec<String> = (0..6).map(|i| format!("p{i}")).collect();
        let cx = ChainComplex::new(0, vec![labels], vec![vec![Vec::new(); 6]]).unwrap();
        let act = permutation_action(&w, |g, j| w.mul(g, j as u32) as usize, 6);
        let chars = homology_characters(&cx, &act, w.order()).unwrap();
        let chi0 = &chars[&0];
        assert!(chi0.is_class_function(&w));
        // Regular character: |W| at the identity, 0 elsewhere.
        assert_eq!(chi0.values[0], q(6));
        for g in 1..6 {
            assert_eq!(chi0.values[g], q(0));
        }
        // Multiplicities of trivial and sign in the regular character.
        let triv = ClassFunction::trivial(&w);
        let sign = ClassFunction::sign(&w);
        assert_eq!(chi0.multiplicity(&triv, &w), q(1));
        assert_eq!(chi0.multiplicity(&sign, &w), q(1));
        assert_eq!(triv.multiplicity(&triv, &w), q(1));
        assert_eq!(sign.multiplicity(&triv, &w), q(0));
    }

    #[test]
    fn character_of_trivial_group_is_betti() {
        let cx = ChainComplex::concentrated("pt", 0);
        let act = GroupAction {
            mats: vec![[(0i64, vec![one_col(0, 1)])].into_iter().collect()],
        };
        let chars = homology_characters(&cx, &act, 1).unwrap();
        assert_eq!(chars[&0].values, vec![q(1)]);
    }
}
