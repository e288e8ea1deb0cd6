//! JSON import/export for posets, set diagrams, and sheaf complexes.
//!
//! All rational numbers travel as strings `"p"` or `"p/q"`. Poset nodes are
//! referenced by index into the `nodes` list; pair-keyed tables use `"i,j"`
//! keys because JSON object keys must be strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use weylglue_core::chainalg::{ChainComplex, ChainMap, RatCol};
use weylglue_core::error::{Error, Result};
use weylglue_core::glue::PosetSheaf;
use weylglue_core::hocolim::{FinitePoset, SetDiagram};
use weylglue_core::linalg::Rat;

pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    s.parse::<Rat>()
        .map_err(|_| Error::Invalid(format!("malformed rational {s:?}")))
}

fn pair_key(x: usize, y: usize) -> String {
    format!("{x},{y}")
}

fn parse_pair_key(key: &str) -> Result<(usize, usize)> {
    let mut it = key.split(',');
    let bad = || Error::Invalid(format!("malformed pair key {key:?}, expected \"i,j\""));
    let x = it
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let y = it
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((x, y))
}

// ---------------------------------------------------------------------------
// Posets
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetJson {
    pub nodes: Vec<String>,
    pub leq_pairs: Vec<(usize, usize)>,
}

impl PosetJson {
    pub fn to_poset(&self) -> Result<FinitePoset> {
        for &(i, j) in &self.leq_pairs {
            if i >= self.nodes.len() || j >= self.nodes.len() {
                return Err(Error::Invalid(format!(
                    "leq pair ({i},{j}) out of range for {} nodes",
                    self.nodes.len()
                )));
            }
        }
        FinitePoset::new(self.nodes.clone(), &self.leq_pairs)
    }

    pub fn from_poset(p: &FinitePoset) -> PosetJson {
        PosetJson {
            nodes: p.labels.clone(),
            leq_pairs: p.strict_pairs(),
        }
    }
}

// ---------------------------------------------------------------------------
// Set diagrams
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub poset: PosetJson,
    /// Node index (as a string key) to its element labels.
    pub sets: BTreeMap<String, Vec<String>>,
    /// `"i,j"` to {source label: target label}, for i < j in the poset.
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl DiagramJson {
    pub fn to_diagram(&self) -> Result<SetDiagram> {
        let poset = self.poset.to_poset()?;
        let n = poset.len();
        let mut sets: Vec<Vec<String>> = vec![Vec::new(); n];
        for (key, labels) in &self.sets {
            let idx: usize = key
                .parse()
                .map_err(|_| Error::Invalid(format!("set key {key:?} is not a node index")))?;
            if idx >= n {
                return Err(Error::Invalid(format!("set key {idx} out of range")));
            }
            sets[idx] = labels.clone();
        }
        let mut maps = BTreeMap::new();
        for (key, table) in &self.maps {
            let (i, j) = parse_pair_key(key)?;
            if i >= n || j >= n {
                return Err(Error::Invalid(format!("map key {key:?} out of range")));
            }
            let mut images = Vec::with_capacity(sets[i].len());
            for label in &sets[i] {
                let target = table.get(label).ok_or_else(|| {
                    Error::Invalid(format!("map {key}: no image for element {label:?}"))
                })?;
                let pos = sets[j].iter().position(|l| l == target).ok_or_else(|| {
                    Error::Invalid(format!("map {key}: image {target:?} not in node {j}"))
                })?;
                images.push(pos);
            }
            maps.insert((i, j), images);
        }
        SetDiagram::new(poset, sets, maps)
    }

    pub fn from_diagram(dgm: &SetDiagram) -> DiagramJson {
        let mut sets = BTreeMap::new();
        for (i, labels) in dgm.sets.iter().enumerate() {
            sets.insert(i.to_string(), labels.clone());
        }
        let mut maps = BTreeMap::new();
        for (i, j) in dgm.poset.strict_pairs() {
            let mut table = BTreeMap::new();
            for (x, label) in dgm.sets[i].iter().enumerate() {
                table.insert(label.clone(), dgm.sets[j][dgm.map_elt(i, j, x)].clone());
            }
            maps.insert(pair_key(i, j), table);
        }
        DiagramJson {
            poset: PosetJson::from_poset(&dgm.poset),
            sets,
            maps,
        }
    }
}

// ---------------------------------------------------------------------------
// Chain complexes and sheaves
// ---------------------------------------------------------------------------

/// A finite complex: `labels[k]` names the basis of degree `lo + k`, and
/// `d[k]` is the dense matrix of the differential out of degree `lo + k`
/// (rows indexed by degree `lo + k - 1`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub lo: i64,
    pub labels: Vec<Vec<String>>,
    pub d: Vec<Vec<Vec<String>>>,
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<ChainComplex> {
        if self.labels.is_empty() {
            return Ok(ChainComplex::zero());
        }
        if self.d.len() != self.labels.len() {
            return Err(Error::Invalid(
                "complex: one differential matrix per degree required".into(),
            ));
        }
        let mut cols_by_degree = Vec::new();
        for (k, matrix) in self.d.iter().enumerate() {
            let rows = if k == 0 { 0 } else { self.labels[k - 1].len() };
            let ncols = self.labels[k].len();
            if matrix.len() != rows {
                return Err(Error::Invalid(format!(
                    "complex: degree {} matrix has {} rows, expected {rows}",
                    self.lo + k as i64,
                    matrix.len()
                )));
            }
            let mut cols: Vec<RatCol> = vec![Vec::new(); ncols];
            for (r, row) in matrix.iter().enumerate() {
                if row.len() != ncols {
                    return Err(Error::Invalid(format!(
                        "complex: degree {} matrix has a row of width {}, expected {ncols}",
                        self.lo + k as i64,
                        row.len()
                    )));
                }
                for (c, entry) in row.iter().enumerate() {
                    let v = rat_from_str(entry)?;
                    if !num_traits::Zero::is_zero(&v) {
                        cols[c].push((r as u32, v));
                    }
                }
            }
            cols_by_degree.push(cols);
        }
        ChainComplex::new(self.lo, self.labels.clone(), cols_by_degree)
    }

    pub fn from_complex(cx: &ChainComplex) -> ComplexJson {
        if cx.total_dim() == 0 {
            return ComplexJson {
                lo: 0,
                labels: Vec::new(),
                d: Vec::new(),
            };
        }
        let mut labels = Vec::new();
        let mut d = Vec::new();
        for n in cx.lo()..=cx.hi() {
            labels.push(cx.labels(n).to_vec());
            let rows = cx.dim(n - 1);
            let ncols = cx.dim(n);
            let mut matrix =
                vec![vec![String::from("0"); ncols]; if n == cx.lo() { 0 } else { rows }];
            if n > cx.lo() {
                for (c, col) in cx.boundary_cols(n).iter().enumerate() {
                    for (r, v) in col {
                        matrix[*r as usize][c] = rat_to_string(v);
                    }
                }
            }
            d.push(matrix);
        }
        ComplexJson {
            lo: cx.lo(),
            labels,
            d,
        }
    }
}

/// A chain map as dense matrices keyed by degree (string keys).
pub type MapJson = BTreeMap<String, Vec<Vec<String>>>;

pub fn map_to_json(f: &ChainMap) -> MapJson {
    let mut out = MapJson::new();
    for n in f.from.lo()..=f.from.hi() {
        let rows = f.to.dim(n);
        let ncols = f.from.dim(n);
        if rows == 0 || ncols == 0 {
            continue;
        }
        let mut matrix = vec![vec![String::from("0"); ncols]; rows];
        for c in 0..ncols {
            for (r, v) in f.col(n, c) {
                matrix[*r as usize][c] = rat_to_string(v);
            }
        }
        out.insert(n.to_string(), matrix);
    }
    out
}

pub fn map_from_json(from: &ChainComplex, to: &ChainComplex, m: &MapJson) -> Result<ChainMap> {
    let mut cols: BTreeMap<i64, Vec<RatCol>> = BTreeMap::new();
    for (key, matrix) in m {
        let n: i64 = key
            .parse()
            .map_err(|_| Error::Invalid(format!("map degree key {key:?} is not an integer")))?;
        let rows = to.dim(n);
        let ncols = from.dim(n);
        if matrix.len() != rows {
            return Err(Error::Invalid(format!(
                "map: degree {n} matrix has {} rows, expected {rows}",
                matrix.len()
            )));
        }
        let mut degree_cols: Vec<RatCol> = vec![Vec::new(); ncols];
        for (r, row) in matrix.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::Invalid(format!(
                    "map: degree {n} matrix has a row of width {}, expected {ncols}",
                    row.len()
                )));
            }
            for (c, entry) in row.iter().enumerate() {
                let v = rat_from_str(entry)?;
                if !num_traits::Zero::is_zero(&v) {
                    degree_cols[c].push((r as u32, v));
                }
            }
        }
        cols.insert(n, degree_cols);
    }
    ChainMap::new(from.clone(), to.clone(), cols)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SheafJson {
    pub poset: PosetJson,
    /// Node index (string key) to the complex at that node.
    pub complexes: BTreeMap<String, ComplexJson>,
    /// `"x,y"` to the restriction map F(x) -> F(y), matrices per degree.
    pub maps: BTreeMap<String, MapJson>,
}

impl SheafJson {
    pub fn to_sheaf(&self) -> Result<PosetSheaf> {
        let poset = self.poset.to_poset()?;
        let n = poset.len();
        let mut complexes = vec![ChainComplex::zero(); n];
        for (key, cj) in &self.complexes {
            let idx: usize = key
                .parse()
                .map_err(|_| Error::Invalid(format!("complex key {key:?} is not a node index")))?;
            if idx >= n {
                return Err(Error::Invalid(format!("complex key {idx} out of range")));
            }
            complexes[idx] = cj.to_complex()?;
        }
        let mut maps = BTreeMap::new();
        for (key, mj) in &self.maps {
            let (x, y) = parse_pair_key(key)?;
            if x >= n || y >= n {
                return Err(Error::Invalid(format!("map key {key:?} out of range")));
            }
            maps.insert((x, y), map_from_json(&complexes[x], &complexes[y], mj)?);
        }
        // Missing maps with zero source or target default to the zero map.
        for (x, y) in poset.strict_pairs() {
            if !maps.contains_key(&(x, y))
                && (complexes[x].total_dim() == 0 || complexes[y].total_dim() == 0)
            {
                maps.insert((x, y), ChainMap::zero_map(&complexes[x], &complexes[y]));
            }
        }
        PosetSheaf::new(poset, complexes, maps)
    }

    pub fn from_sheaf(f: &PosetSheaf) -> SheafJson {
        let mut complexes = BTreeMap::new();
        for (i, cx) in f.complexes.iter().enumerate() {
            complexes.insert(i.to_string(), ComplexJson::from_complex(cx));
        }
        let mut maps = BTreeMap::new();
        for ((x, y), m) in &f.maps {
            maps.insert(pair_key(*x, *y), map_to_json(m));
        }
        SheafJson {
            poset: PosetJson::from_poset(&f.poset),
            complexes,
            maps,
        }
    }
}
