//! The orbit polytope of a generic point under the Weyl group, in exact
//! arithmetic: orbit enumeration, brute-force convex hull (ranks 1-3, rank 4
//! behind a flag), the graded face lattice, the face <-> coset matching, and
//! the homology of the boundary complex. This module is deliberately
//! independent of the hocolim machinery so the two can serve as oracles for
//! each other.
//!
//! Points live in simple-root coordinates. Hull predicates use cleared
//! denominators (integer arithmetic) for speed; orientations are computed
//! with rationals.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chainalg::{ChainComplex, RatCol};
use crate::coxeter::WeylGroup;
use crate::error::{Error, Result};
use crate::linalg::{rat_i, Int, Mat, Rat};
use crate::parabolic::{parabolic_elements, subset_size, Subset};

/// rho in simple-root coordinates: the solution of (Cartan matrix) c = 1.
pub fn rho_root_coords(w: &WeylGroup) -> Vec<Rat> {
    let n = w.rank();
    let a = Mat::from_fn(n, n, |i, j| rat_i(w.rs.cartan[i][j]));
    let ones = vec![Rat::one(); n];
    a.inverse()
        .expect("Cartan matrix invertible")
        .mul_vec(&ones)
}

/// Convert fundamental-weight coordinates to simple-root coordinates.
pub fn fund_to_root_coords(w: &WeylGroup, fund: &[Rat]) -> Vec<Rat> {
    let n = w.rank();
    let a = Mat::from_fn(n, n, |i, j| rat_i(w.rs.cartan[i][j]));
    a.inverse().expect("Cartan matrix invertible").mul_vec(fund)
}

/// The W-orbit of a generic point gamma (simple-root coordinates). Returns
/// the points sorted lexicographically together with, per point, the group
/// element carrying gamma there.
pub fn orbit_points(w: &WeylGroup, gamma: &[Rat]) -> Result<(Vec<Vec<Rat>>, Vec<u32>)> {
    if gamma.len() != w.rank() {
        return Err(Error::Invalid("point has wrong dimension".into()));
    }
    // Genericity: gamma not orthogonal to any root.
    for p in 0..w.rs.n_positive {
        let alpha: Vec<Rat> = w.rs.roots[p].coeffs.iter().map(|&c| rat_i(c)).collect();
        if w.rs.form(gamma, &alpha).is_zero() {
            return Err(Error::NonGenericPoint(format!(
                "point is fixed by the reflection in the positive root {:?}",
                w.rs.roots[p].coeffs
            )));
        }
    }
    let mut seen: BTreeMap<Vec<Rat>, u32> = BTreeMap::new();
    for g in 0..w.order() as u32 {
        let img = w.act_root_coords(g, gamma);
        if seen.insert(img, g).is_some() {
            return Err(Error::NonGenericPoint(
                "orbit is not free (duplicate image)".into(),
            ));
        }
    }
    let mut points = Vec::with_capacity(seen.len());
    let mut elements = Vec::with_capacity(seen.len());
    for (pt, g) in seen {
        points.push(pt);
        elements.push(g);
    }
    Ok((points, elements))
}

/// The polytope with its graded face lattice. `faces[d]` lists the d-faces
/// as sorted vertex-index sets; `faces[rank]` is the single top face.
#[derive(Clone, Debug)]
pub struct OrbitPolytope {
    pub rank: usize,
    pub points: Vec<Vec<Rat>>,
    /// elements[i] carries the base point to points[i].
    pub elements: Vec<u32>,
    pub faces: Vec<Vec<Vec<usize>>>,
}

/// Integer versions of the points (denominators cleared globally), used for
/// exact hull predicates without rational normalization overhead.
fn integer_points(points: &[Vec<Rat>]) -> Vec<Vec<Int>> {
    let mut denom = Int::one();
    for p in points {
        for c in p {
            denom = denom.lcm(c.denom());
        }
    }
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|c| {
                    let v = c * Rat::from_integer(denom.clone());
                    debug_assert!(v.denom().is_one());
                    v.numer().clone()
                })
                .collect()
        })
        .collect()
}

fn sub(a: &[Int], b: &[Int]) -> Vec<Int> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn cross3(a: &[Int], b: &[Int]) -> Vec<Int> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Collect a supporting facet: given a candidate outer normal (nonzero) and a base
/// point index, return the vertex set on the supporting hyperplane if every
/// point lies weakly on one side, else None.
fn supporting_face(pts: &[Vec<Int>], base: usize, normal: &[Int]) -> Option<Vec<usize>> {
    let mut on_plane = Vec::new();
    let mut pos = false;
    let mut neg = false;
    for (l, p) in pts.iter().enumerate() {
        let s = dot(normal, &sub(p, &pts[base]));
        if s.is_zero() {
            on_plane.push(l);
        } else if s.is_positive() {
            pos = true;
        } else {
            neg = true;
        }
        if pos && neg {
            return None;
        }
    }
    Some(on_plane)
}

/// Affine dimension of a set of points (rational coordinates).
fn affine_dim(points: &[Vec<Rat>], face: &[usize]) -> usize {
    if face.len() <= 1 {
        return 0;
    }
    let base = &points[face[0]];
    let rows: Vec<Vec<Rat>> = face[1..]
        .iter()
        .map(|&i| {
            points[i]
                .iter()
                .zip(base)
                .map(|(a, b)| a - b)
                .collect::<Vec<Rat>>()
        })
        .collect();
    let m = Mat::from_rows(rows);
    m.rank()
}

/// Exact convex hull by supporting-hyperplane enumeration. Requires the
/// point set to be full-dimensional of the ambient rank. Rank 4 is gated
/// behind `allow_rank4` (brute force over 4-element subsets).
pub fn convex_hull(
    rank: usize,
    points: Vec<Vec<Rat>>,
    elements: Vec<u32>,
    allow_rank4: bool,
) -> Result<OrbitPolytope> {
    let n = points.len();
    let all: Vec<usize> = (0..n).collect();
    if affine_dim(&points, &all) != rank {
        return Err(Error::Degenerate(format!(
            "points span affine dimension {} < rank {}",
            affine_dim(&points, &all),
            rank
        )));
    }
    let pts = integer_points(&points);

    let mut facet_set: BTreeSet<Vec<usize>> = BTreeSet::new();
    match rank {
        1 => {
            // Segment: the two extreme points (coordinates are sorted).
            facet_set.insert(vec![0]);
            facet_set.insert(vec![n - 1]);
        }
        2 => {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let d = sub(&pts[j], &pts[i]);
                    // Rotate by 90 degrees in coordinates for a line normal.
                    let normal = vec![-d[1].clone(), d[0].clone()];
                    if let Some(face) = supporting_face(&pts, i, &normal) {
                        facet_set.insert(face);
                    }
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let dj = sub(&pts[j], &pts[i]);
                    for k in (j + 1)..n {
                        let dk = sub(&pts[k], &pts[i]);
                        let normal = cross3(&dj, &dk);
                        if normal.iter().all(Int::is_zero) {
                            continue;
                        }
                        if facet_set.iter().any(|f| {
                            f.binary_search(&i).is_ok()
                                && f.binary_search(&j).is_ok()
                                && f.binary_search(&k).is_ok()
                        }) {
                            continue;
                        }
                        if let Some(face) = supporting_face(&pts, i, &normal) {
                            facet_set.insert(face);
                        }
                    }
                }
            }
        }
        4 if allow_rank4 => {
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in (j + 1)..n {
                        for l in (k + 1)..n {
                            if facet_set
                                .iter()
                                .any(|f| [i, j, k, l].iter().all(|v| f.binary_search(v).is_ok()))
                            {
                                continue;
                            }
                            // Normal = generalized cross product of three
                            // difference vectors (cofactor expansion).
                            let a = sub(&pts[j], &pts[i]);
                            let b = sub(&pts[k], &pts[i]);
                            let c = sub(&pts[l], &pts[i]);
                            let normal = cross4(&a, &b, &c);
                            if normal.iter().all(Int::is_zero) {
                                continue;
                            }
                            if let Some(face) = supporting_face(&pts, i, &normal) {
                                facet_set.insert(face);
                            }
                        }
                    }
                }
            }
        }
        4 => {
            return Err(Error::SizeCap(
                "rank-4 hulls are gated behind an explicit flag".into(),
            ))
        }
        _ => {
            return Err(Error::SizeCap(format!("hull not supported at rank {rank}")));
        }
    }

    // Close the facet set under pairwise intersection to get all proper
    // faces, then grade by affine dimension.
    let mut all_faces: BTreeSet<Vec<usize>> = facet_set.clone();
    let mut frontier: Vec<Vec<usize>> = facet_set.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &all_faces {
                let inter: Vec<usize> = f
                    .iter()
                    .copied()
                    .filter(|v| g.binary_search(v).is_ok())
                    .collect();
                if !inter.is_empty() && &inter != f && &inter != g && !all_faces.contains(&inter) {
                    next.push(inter);
                }
            }
        }
        for f in &next {
            all_faces.insert(f.clone());
        }
        frontier = next;
    }

    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); rank + 1];
    for f in all_faces {
        let d = affine_dim(&points, &f);
        if d >= rank {
            return Err(Error::Degenerate(
                "facet closure produced a full-dimensional proper face".into(),
            ));
        }
        faces[d].push(f);
    }
    faces[rank].push(all);
    for level in faces.iter_mut() {
        level.sort();
    }

    // Every orbit point of a generic orbit is a vertex.
    if faces[0].len() != n {
        return Err(Error::Degenerate(format!(
            "expected {} vertices, found {}",
            n,
            faces[0].len()
        )));
    }
    // Each ridge lies in exactly two facets (closed boundary).
    if rank >= 2 {
        for ridge in &faces[rank - 2] {
            let count = faces[rank - 1]
                .iter()
                .filter(|f| ridge.iter().all(|v| f.binary_search(v).is_ok()))
                .count();
            if count != 2 {
                return Err(Error::Degenerate(format!(
                    "ridge {ridge:?} lies in {count} facets"
                )));
            }
        }
    }
    Ok(OrbitPolytope {
        rank,
        points,
        elements,
        faces,
    })
}

/// Generalized cross product in dimension 4: the vector orthogonal to three
/// given vectors, by cofactor expansion along the first row.
fn cross4(a: &[Int], b: &[Int], c: &[Int]) -> Vec<Int> {
    let det3 = |m: [[&Int; 3]; 3]| -> Int {
        m[0][0] * &(m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * &(m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * &(m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let idx = |skip: usize| -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut k = 0;
        for i in 0..4 {
            if i != skip {
                out[k] = i;
                k += 1;
            }
        }
        out
    };
    (0..4)
        .map(|skip| {
            let [i, j, k] = idx(skip);
            let m = [
                [&a[i], &a[j], &a[k]],
                [&b[i], &b[j], &b[k]],
                [&c[i], &c[j], &c[k]],
            ];
            let d = det3(m);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Build the W-orbit polytope of gamma (defaults to rho when None).
pub fn orbit_polytope(
    w: &WeylGroup,
    gamma_fund: Option<&[Rat]>,
    allow_rank4: bool,
) -> Result<OrbitPolytope> {
    let gamma = match gamma_fund {
        Some(f) => fund_to_root_coords(w, f),
        None => rho_root_coords(w),
    };
    let (points, elements) = orbit_points(w, &gamma)?;
    convex_hull(w.rank(), points, elements, allow_rank4)
}

/// Face counts vs coset counts, and the face <-> coset matching: each j-face
/// should be { u gamma : u in u0 W_J } for a unique standard parabolic with
/// |J| = j.
#[derive(Clone, Debug)]
pub struct FaceIndexVerdict {
    /// (dimension, hull count, coset count) per dimension 0..=rank.
    pub counts: Vec<(usize, usize, usize)>,
    pub counts_ok: bool,
    pub coset_match_ok: bool,
    pub pass: bool,
}

pub fn face_index_check(w: &WeylGroup, poly: &OrbitPolytope) -> FaceIndexVerdict {
    let rank = poly.rank;
    let mut counts = Vec::new();
    let mut counts_ok = true;
    for j in 0..=rank {
        let coset_count: usize = (0..1u32 << rank)
            .filter(|&m| subset_size(m) == j)
            .map(|m| w.order() / parabolic_elements(w, m).len())
            .sum();
        let hull_count = poly.faces[j].len();
        counts.push((j, hull_count, coset_count));
        if hull_count != coset_count {
            counts_ok = false;
        }
    }

    // Subgroup table for matching, J -> sorted element list.
    let subgroups: BTreeMap<Subset, Vec<u32>> = (0..1u32 << rank)
        .map(|m| (m, parabolic_elements(w, m)))
        .collect();

    let mut coset_match_ok = true;
    for (j, level) in poly.faces.iter().enumerate() {
        for face in level {
            let us: Vec<u32> = face.iter().map(|&v| poly.elements[v]).collect();
            let u0 = *us.iter().min().unwrap();
            let mut translated: Vec<u32> = us.iter().map(|&u| w.mul(w.inv(u0), u)).collect();
            translated.sort_unstable();
            // J = the simple generators contained in the translate.
            let jset: Subset = (0..rank)
                .filter(|&i| translated.binary_search(&w.simple(i)).is_ok())
                .fold(0, |acc, i| acc | (1 << i));
            if subset_size(jset) != j || subgroups[&jset] != translated {
                coset_match_ok = false;
            }
        }
    }
    let pass = counts_ok && coset_match_ok;
    FaceIndexVerdict {
        counts,
        counts_ok,
        coset_match_ok,
        pass,
    }
}

fn barycenter(points: &[Vec<Rat>], face: &[usize]) -> Vec<Rat> {
    let n = points[0].len();
    let mut b = vec![Rat::zero(); n];
    for &v in face {
        for (i, c) in points[v].iter().enumerate() {
            b[i] += c;
        }
    }
    let k = rat_i(face.len() as i64);
    for c in &mut b {
        *c /= k.clone();
    }
    b
}

/// Deterministic orientation frame for a face: differences from the first
/// vertex to a greedily chosen affinely independent subset.
fn frame(points: &[Vec<Rat>], face: &[usize], dim: usize) -> Vec<Vec<Rat>> {
    let base = &points[face[0]];
    let mut vecs: Vec<Vec<Rat>> = Vec::new();
    let mut rows = crate::linalg::RowSpan::new();
    for &v in &face[1..] {
        if vecs.len() == dim {
            break;
        }
        let d: Vec<Rat> = points[v].iter().zip(base).map(|(a, b)| a - b).collect();
        if rows.insert(&d) {
            vecs.push(d);
        }
    }
    assert_eq!(vecs.len(), dim, "face has too few independent vertices");
    vecs
}

/// Incidence sign [F : G]: the orientation of (outward vector, frame of G)
/// relative to the frame of F, where the outward vector points from the
/// barycenter of F to the barycenter of G.
fn incidence_sign(points: &[Vec<Rat>], f: &[usize], g: &[usize], dim_f: usize) -> i64 {
    let frame_f = frame(points, f, dim_f);
    let frame_g = frame(points, g, dim_f - 1);
    let out: Vec<Rat> = barycenter(points, g)
        .iter()
        .zip(&barycenter(points, f))
        .map(|(a, b)| a - b)
        .collect();
    // Solve frame_f * X = [out, frame_g] in the direction space of F.
    let ambient = points[0].len();
    let bmat = Mat::from_fn(ambient, dim_f, |i, j| frame_f[j][i].clone());
    let mut cols: Vec<Vec<Rat>> = vec![out];
    cols.extend(frame_g);
    let mut x = Mat::zero(dim_f, dim_f);
    for (j, c) in cols.iter().enumerate() {
        let sol = bmat
            .solve(c)
            .expect("facet direction lies in face direction space");
        for i in 0..dim_f {
            x[(i, j)] = sol[i].clone();
        }
    }
    let det = x.det();
    assert!(!det.is_zero(), "degenerate incidence frame");
    if det.is_positive() {
        1
    } else {
        -1
    }
}

/// Chain complex of the boundary of the polytope: all proper faces with
/// incidence-sign boundary maps. Validated by the d(d(x)) = 0 check inside
/// the complex constructor.
pub fn boundary_complex(poly: &OrbitPolytope) -> Result<ChainComplex> {
    let rank = poly.rank;
    let top = rank - 1;
    let mut bases: Vec<Vec<String>> = Vec::new();
    let mut d: Vec<Vec<RatCol>> = Vec::new();
    for n in 0..=top {
        let level = &poly.faces[n];
        let labels = level
            .iter()
            .map(|f| {
                let verts: Vec<String> = f.iter().map(|v| format!("{v}")).collect();
                format!("f{}.{}", n, verts.join("_"))
            })
            .collect();
        let mut cols = Vec::with_capacity(level.len());
        for f in level {
            let mut entries: Vec<(u32, Rat)> = Vec::new();
            if n > 0 {
                for (gi, g) in poly.faces[n - 1].iter().enumerate() {
                    if g.iter().all(|v| f.binary_search(v).is_ok()) {
                        let sign = incidence_sign(&poly.points, f, g, n);
                        entries.push((gi as u32, rat_i(sign)));
                    }
                }
            }
            cols.push(entries.into_iter().collect());
        }
        bases.push(labels);
        d.push(cols);
    }
    ChainComplex::new(0, bases, d)
}
