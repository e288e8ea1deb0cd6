//! Command-line front end: argument parsing, subcommand dispatch, JSON and
//! text rendering, and the exit-code contract.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use weylglue_core::chainalg::ChainComplex;
use weylglue_core::coxeter::{build_root_system, generate_weyl_capped, CartanSpec, WeylGroup};
use weylglue_core::error::{Error, Result};
use weylglue_core::glue::{
    adjunction_check, ff_verdict, recollement_round_trip, string_left_adjoint, unit_object,
};
use weylglue_core::hocolim::{
    base_case_cofinality, cofinality_check, glued_homology_report, hocolim_complex,
    stratified_complex, stratified_diagram, weyl_glued_diagram, StratMode,
};
use weylglue_core::parabolic::{
    all_subsets, check_partition_criterion, check_stratum_invariance, proper_subsets,
    subset_members, w0_prime, w_prime_set, Subset,
};
use weylglue_core::poly::IntPoly;
use weylglue_core::polytope::{boundary_complex, face_index_check, orbit_polytope};

use crate::corpus;
use crate::json::{DiagramJson, PosetJson, SheafJson};
use crate::report::Report;

pub const DEFAULT_MAX_ORDER: usize = 2000;

const EXIT_HELP: &str = "Exit codes:
  0  all checks pass
  1  a verification check failed (the report carries a counterexample)
  2  usage error (unknown flags or missing arguments)
  3  bad input (unknown type label, malformed JSON, invalid poset/diagram/sheaf)
  4  resource cap exceeded (WEYLGLUE_MAX_ORDER, instance size caps)

Environment:
  WEYLGLUE_MAX_ORDER  cap on the Weyl group order (default 2000)

Generator indices in --j0/--j/--w and in all output words are 1-based.";

#[derive(Parser, Debug)]
#[command(
    name = "weylglue",
    about = "Exact verification of Weyl-group gluing combinatorics and homology",
    after_help = EXIT_HELP,
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Root system summary: rank, positive roots, group order, longest word.
    Rootsys {
        /// Named type (A1..A6, B2..B4, C3..C4, D4, F4, G2).
        type_name: String,
        #[arg(long)]
        json: bool,
    },
    /// Schubert stratum index invariance checks.
    Schubert {
        type_name: String,
        /// Reference parabolic subset, comma-separated 1-based indices
        /// ("" or "none" for the empty set).
        #[arg(long)]
        j0: Option<String>,
        /// Stratum parabolic subset.
        #[arg(long)]
        j: Option<String>,
        /// Relative position as a word in the generators, e.g. 121
        /// (omit to sweep all of W').
        #[arg(long)]
        w: Option<String>,
        /// Sweep all (J0, J, w) triples (--j0/--j/--w become filters).
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Homology of the glued coset diagram with its character decomposition.
    GluedHomology {
        type_name: String,
        #[arg(long)]
        json: bool,
    },
    /// Stratified induction: per-stratum homology along Bruhat order.
    StratInduction {
        type_name: String,
        /// Reference parabolic subset, comma-separated 1-based indices.
        #[arg(long)]
        j0: String,
        #[arg(long)]
        json: bool,
    },
    /// Orbit polytope of a generic point: face counts and boundary homology.
    Permutohedron {
        type_name: String,
        /// Verify face counts against parabolic coset counts.
        #[arg(long)]
        check_faces: bool,
        /// Compute boundary-complex homology and compare to the sphere.
        #[arg(long)]
        homology: bool,
        /// Opt in to rank-4 hulls (brute force; may run for hours).
        #[arg(long)]
        allow_rank4: bool,
        #[arg(long)]
        json: bool,
    },
    /// Glued-category checks on explicit diagrams and sheaves.
    Glue {
        #[command(subcommand)]
        cmd: GlueCommand,
    },
    /// The full verification suite for the listed types.
    VerifyAll {
        /// Named types, e.g. A2 B2 G2.
        #[arg(required = true)]
        types: Vec<String>,
        /// Seed for the randomized corpora.
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GlueCommand {
    /// Full-faithfulness verdict for the constant-object functor.
    Ff {
        /// Set-diagram JSON file.
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Two-strata recollement round trip over a poset.
    Recollement {
        /// Poset JSON file ({nodes, leq_pairs}).
        #[arg(long)]
        poset: PathBuf,
        /// Open (up-closed) node indices, comma-separated, "" for empty.
        #[arg(long)]
        open: String,
        /// Seed for the generated sheaf (ignored with --sheaf).
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
        /// Explicit sheaf JSON file instead of a seeded random sheaf.
        #[arg(long)]
        sheaf: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
    /// Text mode reports wall time on stderr; JSON output stays byte-stable.
    pub show_timing: bool,
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::OrderCap { .. } | Error::SizeCap(_) => 4,
        _ => 3,
    }
}

pub fn execute(cli: Cli) -> Outcome {
    let res = match cli.cmd {
        Command::Rootsys { type_name, json } => cmd_rootsys(&type_name).map(|v| (v, json)),
        Command::Schubert {
            type_name,
            j0,
            j,
            w,
            all,
            json,
        } => cmd_schubert(&type_name, j0.as_deref(), j.as_deref(), w.as_deref(), all)
            .map(|v| (v, json)),
        Command::GluedHomology { type_name, json } => {
            cmd_glued_homology(&type_name).map(|v| (v, json))
        }
        Command::StratInduction {
            type_name,
            j0,
            json,
        } => cmd_strat_induction(&type_name, &j0).map(|v| (v, json)),
        Command::Permutohedron {
            type_name,
            check_faces,
            homology,
            allow_rank4,
            json,
        } => cmd_permutohedron(&type_name, check_faces, homology, allow_rank4).map(|v| (v, json)),
        Command::Glue { cmd } => match cmd {
            GlueCommand::Ff { diagram, json } => cmd_glue_ff(&diagram).map(|v| (v, json)),
            GlueCommand::Recollement {
                poset,
                open,
                seed,
                sheaf,
                json,
            } => cmd_glue_recollement(&poset, &open, seed, sheaf.as_deref()).map(|v| (v, json)),
        },
        Command::VerifyAll { types, seed, json } => cmd_verify_all(&types, seed).map(|v| (v, json)),
    };
    match res {
        Ok(((value, report), json)) => Outcome {
            exit: if report.pass { 0 } else { 1 },
            stdout: if json {
                let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
                s.push('\n');
                s
            } else {
                report.render_text()
            },
            stderr: String::new(),
            show_timing: !json,
        },
        Err(e) => Outcome {
            exit: exit_for(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            show_timing: false,
        },
    }
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

pub fn max_order() -> usize {
    std::env::var("WEYLGLUE_MAX_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

pub fn load_group(name: &str) -> Result<WeylGroup> {
    let spec = CartanSpec::named(name)?;
    let rs = build_root_system(&spec)?;
    generate_weyl_capped(rs, max_order())
}

/// Parse "1,3" (1-based) into a subset bitmask; "" and "none" mean empty.
fn parse_subset(s: &str, rank: usize) -> Result<Subset> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("none") || t == "-" {
        return Ok(0);
    }
    let mut out: Subset = 0;
    for part in t.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad generator index {part:?}")))?;
        if i == 0 || i > rank {
            return Err(Error::Invalid(format!(
                "generator index {i} out of range 1..={rank}"
            )));
        }
        out |= 1 << (i - 1);
    }
    Ok(out)
}

fn subset_json(j: Subset, rank: usize) -> Value {
    Value::Array(
        subset_members(j, rank)
            .into_iter()
            .map(|i| Value::from(i + 1))
            .collect(),
    )
}

fn parse_word(s: &str, rank: usize) -> Result<Vec<u8>> {
    let t = s.trim();
    if t == "e" || t.is_empty() {
        return Ok(Vec::new());
    }
    t.chars()
        .map(|c| {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Invalid(format!("bad word character {c:?}")))?;
            if d == 0 || d as usize > rank {
                return Err(Error::Invalid(format!(
                    "generator {d} out of range 1..={rank}"
                )));
            }
            Ok((d - 1) as u8)
        })
        .collect()
}

fn parse_node_list(s: &str, n: usize) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("none") || t == "-" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad node index {part:?}")))?;
        if i >= n {
            return Err(Error::Invalid(format!(
                "node index {i} out of range 0..{n}"
            )));
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn betti_json(b: &[(i64, usize)]) -> Value {
    Value::Array(b.iter().map(|&(d, k)| json!([d, k])).collect())
}

fn poly_json(p: &IntPoly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| Value::from(c.to_u64().expect("coefficient fits")))
            .collect(),
    )
}

fn read_json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Invalid(format!("malformed JSON in {}: {e}", path.display())))
}

fn sphere_betti(rank: usize) -> Vec<(i64, usize)> {
    if rank == 1 {
        vec![(0, 2)]
    } else {
        vec![(0, 1), (rank as i64 - 1, 1)]
    }
}

// ---------------------------------------------------------------------------
// rootsys
// ---------------------------------------------------------------------------

fn cmd_rootsys(name: &str) -> Result<(Value, Report)> {
    let w = load_group(name)?;
    let longest: Vec<u64> = w
        .element(w.longest())
        .word
        .iter()
        .map(|&i| (i + 1) as u64)
        .collect();
    let value = json!({
        "type": name.to_uppercase(),
        "rank": w.rank(),
        "num_positive_roots": w.rs.n_positive,
        "weyl_order": w.order(),
        "longest_word": longest,
    });
    let mut report = Report::new(format!("rootsys {name}"));
    report.push(
        "root-system",
        format!(
            "rank {}, {} positive roots, |W| = {}, longest word {}",
            w.rank(),
            w.rs.n_positive,
            w.order(),
            w.word_string(w.longest())
        ),
        true,
        value.clone(),
    );
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// schubert
// ---------------------------------------------------------------------------

fn stratum_check_json(w: &WeylGroup, inv: &weylglue_core::parabolic::StratumInvariance) -> Value {
    json!({
        "j0": subset_json(inv.j0, w.rank()),
        "j": subset_json(inv.j, w.rank()),
        "w_word": w.word_label(inv.w),
        "empty_rule": match inv.emptiness_ok {
            Some(ok) => json!({"applies": true, "ok": ok}),
            None => json!({"applies": false}),
        },
        "j_tilde": subset_json(inv.j_tilde, w.rank()),
        "poly_j": poly_json(&inv.poly_j),
        "poly_j_tilde": poly_json(&inv.poly_j_tilde),
        "bijection_ok": inv.bijection_ok,
        "pass": inv.pass,
    })
}

fn cmd_schubert(
    name: &str,
    j0_arg: Option<&str>,
    j_arg: Option<&str>,
    w_arg: Option<&str>,
    all: bool,
) -> Result<(Value, Report)> {
    let wg = load_group(name)?;
    let rank = wg.rank();
    let j0_filter = j0_arg.map(|s| parse_subset(s, rank)).transpose()?;
    let j_filter = j_arg.map(|s| parse_subset(s, rank)).transpose()?;
    let w_filter = w_arg
        .map(|s| parse_word(s, rank).map(|word| wg.element_from_word(&word)))
        .transpose()?;
    // --j0 and --j are required unless --all sweeps them; --w is always
    // optional and defaults to sweeping all of W'.
    if !all && (j0_filter.is_none() || j_filter.is_none()) {
        return Err(Error::Invalid(
            "pass --j0 and --j, or --all to sweep them".into(),
        ));
    }

    let j0s: Vec<Subset> = match j0_filter {
        Some(j0) => vec![j0],
        None => all_subsets(rank),
    };
    let js: Vec<Subset> = match j_filter {
        Some(j) => vec![j],
        None => all_subsets(rank),
    };

    let mut checks = Vec::new();
    let mut pass = true;
    let mut first_failure: Option<Value> = None;
    for &j0 in &j0s {
        let ws: Vec<u32> = match w_filter {
            Some(e) => vec![e],
            None => w_prime_set(&wg, j0),
        };
        for &j in &js {
            for &e in &ws {
                let inv = check_stratum_invariance(&wg, j0, j, e);
                let record = stratum_check_json(&wg, &inv);
                if !inv.pass {
                    pass = false;
                    first_failure.get_or_insert_with(|| record.clone());
                }
                checks.push(record);
            }
        }
    }
    let value = json!({
        "type": name.to_uppercase(),
        "num_checks": checks.len(),
        "checks": checks,
        "pass": pass,
    });
    let mut report = Report::new(format!("schubert {name}"));
    report.push(
        "stratum-invariance",
        format!(
            "{} (J0, J, w) stratum indices: emptiness rule and J-reduction \
             polynomial identity with a length-preserving bijection",
            value["num_checks"]
        ),
        pass,
        if pass {
            json!({"num_checks": value["num_checks"]})
        } else {
            json!({"counterexample": first_failure})
        },
    );
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// glued-homology
// ---------------------------------------------------------------------------

fn cmd_glued_homology(name: &str) -> Result<(Value, Report)> {
    let w = load_group(name)?;
    let rep = glued_homology_report(&w);
    let value = json!({
        "type": name.to_uppercase(),
        "rank": rep.rank,
        "betti": betti_json(&rep.betti.iter().copied().filter(|&(_, b)| b != 0).collect::<Vec<_>>()),
        "betti_ok": rep.betti_ok,
        "h0_is_trivial_character": rep.h0_ok,
        "top_is_sign_character": rep.htop_ok,
        "euler_trace_ok": rep.trace_ok,
        "pass": rep.pass,
    });
    let mut report = Report::new(format!("glued-homology {name}"));
    report.push(
        "sphere-homology",
        format!(
            "glued coset diagram of {} has the homology of a {}-sphere with \
             trivial character in degree 0 and sign character on top",
            name,
            rep.rank.max(1) - 1
        ),
        rep.pass,
        value.clone(),
    );
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// strat-induction
// ---------------------------------------------------------------------------

fn strat_betti(
    w: &WeylGroup,
    wgd: &weylglue_core::hocolim::WeylGluedDiagram,
    j0: Subset,
    e: u32,
    mode: StratMode,
) -> Result<Vec<(i64, usize)>> {
    Ok(stratified_complex(w, wgd, j0, e, mode)?.betti_nonzero())
}

fn cmd_strat_induction(name: &str, j0_arg: &str) -> Result<(Value, Report)> {
    let w = load_group(name)?;
    let rank = w.rank();
    let j0 = parse_subset(j0_arg, rank)?;
    let wgd = weyl_glued_diagram(&w);
    let top = w0_prime(&w, j0);

    let mut verdicts = Vec::new();
    let mut pass = true;
    let mut first_failure: Option<Value> = None;
    for e in w_prime_set(&w, j0) {
        let leq = strat_betti(&w, &wgd, j0, e, StratMode::Leq)?;
        let lt = strat_betti(&w, &wgd, j0, e, StratMode::Lt)?;
        let quot = strat_betti(&w, &wgd, j0, e, StratMode::Quotient)?;
        // Induction requirements: the base stratum is a point; intermediate
        // quotients are points; the top element carries the final answer and
        // has no requirement of its own.
        let ok = if e == w.identity() {
            leq == vec![(0, 1)]
        } else if e != top {
            quot == vec![(0, 1)]
        } else {
            true
        };
        let record = json!({
            "w_word": w.word_label(e),
            "stratum": {
                "leq": betti_json(&leq),
                "lt": betti_json(&lt),
                "quotient": betti_json(&quot),
            },
            "verdict": if ok { "pass" } else { "fail" },
        });
        if !ok {
            pass = false;
            first_failure.get_or_insert_with(|| record.clone());
        }
        verdicts.push(record);
    }

    let base = stratified_diagram(&w, &wgd, j0, w.identity(), false);
    let (sub_nodes, r) = base_case_cofinality(&wgd, j0);
    let cof = cofinality_check(&base, &sub_nodes, &r);
    pass &= cof.pass;
    let cof_json = json!({
        "adjunction_ok": cof.adjunction_ok,
        "counit_ok": cof.counit_ok,
        "homology_ok": cof.homology_ok,
        "pass": cof.pass,
    });
    if !cof.pass {
        first_failure.get_or_insert_with(|| cof_json.clone());
    }

    let value = json!({
        "type": name.to_uppercase(),
        "j0": subset_json(j0, rank),
        "verdicts": verdicts,
        "base_case_cofinality": cof_json,
        "pass": pass,
    });
    let mut report = Report::new(format!("strat-induction {name} --j0 {j0_arg}"));
    report.push(
        "stratified-induction",
        "base stratum is a point, every intermediate Bruhat quotient is a \
         point, and the base-case subdiagram inclusion is homology-cofinal",
        pass,
        if pass {
            json!({"num_strata": value["verdicts"].as_array().map(Vec::len).unwrap_or(0)})
        } else {
            json!({"counterexample": first_failure})
        },
    );
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// permutohedron
// ---------------------------------------------------------------------------

fn cmd_permutohedron(
    name: &str,
    check_faces: bool,
    homology: bool,
    allow_rank4: bool,
) -> Result<(Value, Report)> {
    let w = load_group(name)?;
    let poly = orbit_polytope(&w, None, allow_rank4)?;
    let face_counts: Vec<usize> = poly.faces.iter().map(Vec::len).collect();
    let mut value = json!({
        "type": name.to_uppercase(),
        "rank": poly.rank,
        "num_vertices": poly.points.len(),
        "face_counts_by_dim": face_counts,
    });
    let mut report = Report::new(format!("permutohedron {name}"));
    report.push(
        "orbit-polytope",
        format!(
            "hull of the orbit of a generic point: {} vertices, face counts {}",
            poly.points.len(),
            value["face_counts_by_dim"]
        ),
        true,
        value.clone(),
    );

    if check_faces {
        let verdict = face_index_check(&w, &poly);
        let counts: Vec<Value> = verdict
            .counts
            .iter()
            .map(|&(dim, hull, coset)| json!({"dim": dim, "hull": hull, "cosets": coset}))
            .collect();
        value["face_check"] = json!({
            "counts": counts,
            "counts_ok": verdict.counts_ok,
            "coset_match_ok": verdict.coset_match_ok,
            "pass": verdict.pass,
        });
        report.push(
            "face-indexing",
            "j-dimensional hull faces are counted and indexed by cosets w W_J with |J| = j",
            verdict.pass,
            value["face_check"].clone(),
        );
    }
    if homology {
        let boundary = boundary_complex(&poly)?;
        let betti = boundary.betti_nonzero();
        let expected = sphere_betti(poly.rank);
        let ok = betti == expected;
        value["boundary_homology"] = json!({
            "betti": betti_json(&betti),
            "expected": betti_json(&expected),
            "pass": ok,
        });
        report.push(
            "boundary-homology",
            "the boundary complex of the hull has sphere homology",
            ok,
            value["boundary_homology"].clone(),
        );
    }
    value["pass"] = Value::from(report.pass);
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// glue ff / glue recollement
// ---------------------------------------------------------------------------

fn ff_json(v: &weylglue_core::glue::FfVerdict) -> Value {
    json!({
        "hocolim_point": v.hocolim_point,
        "counit_qiso": v.counit_qiso,
        "agree": v.agree,
        "fully_faithful": v.fully_faithful,
        "betti": betti_json(&v.betti),
    })
}

fn cmd_glue_ff(path: &Path) -> Result<(Value, Report)> {
    let dj: DiagramJson = read_json_file(path)?;
    let dgm = dj.to_diagram()?;
    let verdict = ff_verdict(&dgm);
    let mut value = ff_json(&verdict);
    value["diagram"] = Value::from(path.display().to_string());
    let mut report = Report::new(format!("glue ff --diagram {}", path.display()));
    report.push(
        "criteria-agreement",
        "the homotopy-colimit point check and the counit quasi-isomorphism \
         check give the same full-faithfulness verdict",
        verdict.agree,
        value.clone(),
    );
    Ok((value, report))
}

fn cmd_glue_recollement(
    poset_path: &Path,
    open_arg: &str,
    seed: u64,
    sheaf_path: Option<&Path>,
) -> Result<(Value, Report)> {
    let pj: PosetJson = read_json_file(poset_path)?;
    let poset = pj.to_poset()?;
    let open = parse_node_list(open_arg, poset.len())?;
    let sheaf = match sheaf_path {
        Some(p) => {
            let sj: SheafJson = read_json_file(p)?;
            let f = sj.to_sheaf()?;
            if f.poset.labels != poset.labels || f.poset.strict_pairs() != poset.strict_pairs() {
                return Err(Error::Invalid(
                    "sheaf file poset does not match --poset".into(),
                ));
            }
            f
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            corpus::random_sheaf_on(&mut rng, &poset, 8)
        }
    };
    let run = recollement_round_trip(&sheaf, &open)?;
    let value = json!({
        "poset": poset_path.display().to_string(),
        "open": run.u_nodes,
        "closed": run.z_nodes,
        "seed": sheaf_path.is_none().then_some(seed),
        "sheaf_total_dim": sheaf.total_dim(),
        "eta_acyclic": run.eta_acyclic,
        "theta_acyclic": run.theta_acyclic,
        "unit_open_acyclic": run.unit_open_acyclic,
        "unit_closed_acyclic": run.unit_closed_acyclic,
        "pass": run.pass,
    });
    let mut report = Report::new(format!(
        "glue recollement --poset {} --open {open_arg}",
        poset_path.display()
    ));
    report.push(
        "recollement-round-trip",
        "restricting to the open/closed strata and regluing returns the sheaf \
         up to node-wise quasi-isomorphism",
        run.pass,
        value.clone(),
    );
    Ok((value, report))
}

// ---------------------------------------------------------------------------
// verify-all
// ---------------------------------------------------------------------------

struct CorpusOutcome {
    adjunction_ok: bool,
    colim_ok: bool,
    ff_agree_ok: bool,
    num_diagrams: usize,
    failure: Option<Value>,
}

fn run_diagram_corpus(seed: u64, count: usize) -> CorpusOutcome {
    let k = ChainComplex::concentrated("k", 0);
    let mut out = CorpusOutcome {
        adjunction_ok: true,
        colim_ok: true,
        ff_agree_ok: true,
        num_diagrams: count,
        failure: None,
    };
    for (i, dgm) in corpus::diagram_corpus(seed, count).into_iter().enumerate() {
        let x = unit_object(&dgm, &k);
        let adj = adjunction_check(&x, &k).expect("corpus diagrams are within the size cap");
        let sla = string_left_adjoint(&x).betti_nonzero();
        let hoc = hocolim_complex(&dgm).cx.betti_nonzero();
        let v = ff_verdict(&dgm);
        if !(adj.pass && sla == hoc && v.agree) {
            out.adjunction_ok &= adj.pass;
            out.colim_ok &= sla == hoc;
            out.ff_agree_ok &= v.agree;
            out.failure.get_or_insert_with(|| {
                json!({
                    "diagram_index": i,
                    "diagram": serde_json::to_value(DiagramJson::from_diagram(&dgm)).unwrap(),
                    "adjunction_pass": adj.pass,
                    "string_colim_betti": betti_json(&sla),
                    "hocolim_betti": betti_json(&hoc),
                    "ff_agree": v.agree,
                })
            });
        }
    }
    out
}

fn run_sheaf_corpus(seed: u64, count: usize) -> (bool, usize, Option<Value>) {
    let mut pass = true;
    let mut failure = None;
    let corpus = corpus::sheaf_corpus(seed, count);
    let n = corpus.len();
    for (i, (sheaf, open)) in corpus.into_iter().enumerate() {
        let run = recollement_round_trip(&sheaf, &open)
            .expect("corpus open sets are up-closed by construction");
        if !run.pass {
            pass = false;
            if failure.is_none() {
                failure = Some(json!({
                    "instance": i,
                    "open": open,
                    "sheaf": serde_json::to_value(SheafJson::from_sheaf(&sheaf)).unwrap(),
                    "eta_acyclic": run.eta_acyclic,
                    "theta_acyclic": run.theta_acyclic,
                    "unit_open_acyclic": run.unit_open_acyclic,
                    "unit_closed_acyclic": run.unit_closed_acyclic,
                }));
            }
        }
    }
    (pass, n, failure)
}

fn cmd_verify_all(types: &[String], seed: u64) -> Result<(Value, Report)> {
    // Validate all type names up front so bad input fails fast.
    let groups: Vec<WeylGroup> = types.iter().map(|t| load_group(t)).collect::<Result<_>>()?;
    let mut report = Report::new(format!("verify-all {}", types.join(" ")));

    for (t, w) in types.iter().zip(&groups) {
        let name = t.to_uppercase();
        let rank = w.rank();

        // Sphere homology with characters.
        let rep = glued_homology_report(w);
        report.push(
            format!("{name}:sphere-homology"),
            "glued coset homology is trivial in degree 0 plus sign on top",
            rep.pass,
            json!({
                "betti": betti_json(&rep.betti.iter().copied().filter(|&(_, b)| b != 0).collect::<Vec<_>>()),
                "h0_is_trivial_character": rep.h0_ok,
                "top_is_sign_character": rep.htop_ok,
                "euler_trace_ok": rep.trace_ok,
            }),
        );

        // Geometric oracle at low rank.
        if rank <= 3 {
            let poly = orbit_polytope(w, None, false)?;
            let faces = face_index_check(w, &poly);
            let boundary = boundary_complex(&poly)?;
            let betti = boundary.betti_nonzero();
            let geom_ok = faces.pass && betti == sphere_betti(rank);
            report.push(
                format!("{name}:polytope-oracle"),
                "orbit-polytope faces are indexed by parabolic cosets and its \
                 boundary has the same sphere homology",
                geom_ok,
                json!({
                    "face_counts": faces.counts.iter().map(|&(d, h, c)| json!([d, h, c])).collect::<Vec<_>>(),
                    "boundary_betti": betti_json(&betti),
                }),
            );

            // Exhaustive stratum invariance sweep.
            let mut stratum_pass = true;
            let mut num = 0usize;
            let mut witness = None;
            for j0 in all_subsets(rank) {
                for j in all_subsets(rank) {
                    for e in w_prime_set(w, j0) {
                        let inv = check_stratum_invariance(w, j0, j, e);
                        num += 1;
                        if !inv.pass {
                            stratum_pass = false;
                            witness.get_or_insert_with(|| stratum_check_json(w, &inv));
                        }
                    }
                }
            }
            report.push(
                format!("{name}:stratum-invariance"),
                "all (J0, J, w) stratum indices satisfy the emptiness rule and \
                 the J-reduction identity",
                stratum_pass,
                witness.unwrap_or_else(|| json!({"num_checks": num})),
            );

            // Partition criterion.
            let mut part_pass = true;
            let mut part_witness = None;
            for j0 in all_subsets(rank) {
                let pc = check_partition_criterion(w, j0);
                if !pc.pass {
                    part_pass = false;
                    part_witness.get_or_insert_with(|| {
                        json!({
                            "j0": subset_json(j0, rank),
                            "failures": pc.failures.iter().map(|&e| w.word_label(e)).collect::<Vec<_>>(),
                        })
                    });
                }
            }
            report.push(
                format!("{name}:partition-criterion"),
                "S^- is empty iff w = e and S^+ is empty iff w is the maximal \
                 element of W'",
                part_pass,
                part_witness.unwrap_or(Value::Null),
            );

            // Stratified induction for every proper J0.
            let wgd = weyl_glued_diagram(w);
            let mut ind_pass = true;
            let mut ind_witness = None;
            for j0 in proper_subsets(rank) {
                let top = w0_prime(w, j0);
                for e in w_prime_set(w, j0) {
                    let ok = if e == w.identity() {
                        strat_betti(w, &wgd, j0, e, StratMode::Leq)? == vec![(0, 1)]
                    } else if e != top {
                        strat_betti(w, &wgd, j0, e, StratMode::Quotient)? == vec![(0, 1)]
                    } else {
                        true
                    };
                    if !ok {
                        ind_pass = false;
                        ind_witness.get_or_insert_with(
                            || json!({"j0": subset_json(j0, rank), "w_word": w.word_label(e)}),
                        );
                    }
                }
                let base = stratified_diagram(w, &wgd, j0, w.identity(), false);
                let (sub_nodes, r) = base_case_cofinality(&wgd, j0);
                let cof = cofinality_check(&base, &sub_nodes, &r);
                if !cof.pass {
                    ind_pass = false;
                    ind_witness.get_or_insert_with(
                        || json!({"j0": subset_json(j0, rank), "base_case": "cofinality failed"}),
                    );
                }
            }
            report.push(
                format!("{name}:stratified-induction"),
                "strata glue inductively: point base, point quotients, \
                 homology-cofinal base case",
                ind_pass,
                ind_witness.unwrap_or(Value::Null),
            );

            // Full-faithfulness verdict on the Weyl diagram. A sphere is
            // never a homology point, so the verdict must be negative with
            // the sphere Betti numbers as the defect.
            let v = ff_verdict(&wgd.dgm);
            let ff_ok = v.agree && !v.fully_faithful && v.betti == sphere_betti(rank);
            report.push(
                format!("{name}:ff-verdict"),
                "the two full-faithfulness sub-checks agree and certify the \
                 glued diagram not fully faithful, with the sphere as defect",
                ff_ok,
                ff_json(&v),
            );
        }
    }

    // Corpus checks, independent of the listed types.
    let dc = run_diagram_corpus(seed, 50);
    report.push(
        "corpus:left-adjoint",
        "on 50 random diagrams the string left adjoint satisfies the mapping \
         adjunction and realizes homotopy-colimit homology",
        dc.adjunction_ok && dc.colim_ok,
        dc.failure
            .clone()
            .unwrap_or_else(|| json!({"num_diagrams": dc.num_diagrams})),
    );
    report.push(
        "corpus:ff-agreement",
        "on the same corpus the two full-faithfulness sub-checks agree",
        dc.ff_agree_ok,
        dc.failure.unwrap_or(Value::Null),
    );
    let (sheaf_pass, sheaf_n, sheaf_failure) = run_sheaf_corpus(seed, 30);
    report.push(
        "corpus:recollement",
        "30 random sheaves round-trip through the open/closed decomposition \
         up to node-wise quasi-isomorphism",
        sheaf_pass,
        sheaf_failure.unwrap_or_else(|| json!({"num_instances": sheaf_n})),
    );

    let value = serde_json::to_value(&report).expect("report serializes");
    Ok((value, report))
}
