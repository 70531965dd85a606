//! Named checks over the library: published counts and tables, closed forms
//! against brute force, and structural properties over the test corpus.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{self, DEFAULT_SEED};
use crate::error::{domain, Result};
use crate::exactlp::Rational;
use crate::family::SimplexFamily;
use crate::formulas::{self, TwoSumStats};
use crate::master::{self, Labeling};
use crate::repfn::{self, LatticePoint, DEFAULT_REPFN_BUDGET};
use crate::skeleton::{self, vertex_type, FPolynomial, RhombusType, SkeletonGraph, DEFAULT_MAX_PARTITION_R};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        format!(
            "{status} [{:>2}] {} ({} ms): {}",
            self.id, self.name, self.elapsed_ms, self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Build the skeleton of `P(4)` (1015 vertices).
    pub include_p4_skeleton: bool,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            include_p4_skeleton: true,
            seed: DEFAULT_SEED,
        }
    }
}

pub const SUITES: &[&str] = &["paper", "quick"];

fn timed(id: u32, name: &str, check: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    let start = Instant::now();
    let (status, detail) = match check() {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(e) => (Status::Fail, format!("error: {e}")),
    };
    CheckOutcome {
        id,
        name: name.to_string(),
        status,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn skipped(id: u32, name: &str, why: &str) -> CheckOutcome {
    CheckOutcome {
        id,
        name: name.to_string(),
        status: Status::Skip,
        detail: why.to_string(),
        elapsed_ms: 0,
    }
}

/// The 41 vertices of `P(3)` under the paper3 labeling, each with its
/// degree, column by column in three blocks.
pub fn p3_table() -> Vec<(LatticePoint, usize)> {
    const BLOCK_1: [[u32; 10]; 8] = [
        [3, 1, 1, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 2, 2, 1, 0, 1, 2, 0, 0],
        [0, 2, 0, 1, 2, 0, 0, 0, 2, 1],
        [0, 0, 0, 0, 0, 2, 2, 1, 1, 2],
        [0; 10],
        [0; 10],
        [0; 10],
        [6; 10],
    ];
    const BLOCK_2: [[u32; 21]; 8] = [
        [2, 1, 1, 0, 0, 0, 0, 2, 1, 1, 0, 0, 0, 0, 2, 1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, 2],
        [0, 0, 0, 1, 0, 1, 2, 0, 1, 0, 1, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0],
        [0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1, 1, 2, 0, 1, 0, 0, 1, 1, 0],
        [1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1],
        [6, 6, 6, 6, 8, 6, 8, 6, 6, 6, 8, 6, 6, 8, 6, 6, 6, 6, 6, 8, 8],
    ];
    const BLOCK_3: [[u32; 10]; 8] = [
        [1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 1, 0, 0, 0, 0],
        [1, 1, 1, 0, 0, 0, 1, 1, 1, 1],
        [1, 1, 1, 1, 1, 1, 0, 0, 0, 1],
        [0, 0, 0, 1, 1, 1, 1, 1, 1, 1],
        [7, 8, 8, 7, 8, 8, 7, 8, 8, 9],
    ];
    fn columns<const N: usize>(rows: &[[u32; N]; 8]) -> Vec<(LatticePoint, usize)> {
        (0..N)
            .map(|c| {
                let coords = (0..7).map(|r| rows[r][c]).collect();
                (LatticePoint::new(coords), rows[7][c] as usize)
            })
            .collect()
    }
    let mut out = columns(&BLOCK_1);
    out.extend(columns(&BLOCK_2));
    out.extend(columns(&BLOCK_3));
    out
}

fn master_vertex_count(k: usize) -> Result<usize> {
    let m = master::build_master(k, Labeling::Canonical)?;
    Ok(repfn::vertices(m.family(), DEFAULT_REPFN_BUDGET)?.len())
}

pub fn check_master_counts() -> Result<(bool, String)> {
    let counts = [master_vertex_count(3)?, master_vertex_count(4)?, master_vertex_count(5)?];
    Ok((counts == [41, 1015, 59072], format!("P(3), P(4), P(5) vertices = {counts:?}")))
}

pub fn check_p3_table() -> Result<(bool, String)> {
    let m = master::build_master(3, Labeling::Paper3)?;
    let g = skeleton::build_skeleton(m.family())?;
    let degrees = g.degrees();
    let built: BTreeMap<&LatticePoint, usize> = g.vertices().iter().zip(degrees).collect();
    let table = p3_table();
    let golden: BTreeMap<&LatticePoint, usize> = table.iter().map(|(v, d)| (v, *d)).collect();
    let hist = skeleton::degree_histogram(&g);
    let ok = built == golden
        && hist == BTreeMap::from([(6, 25), (7, 3), (8, 12), (9, 1)])
        && g.edges().len() == 138;
    Ok((
        ok,
        format!(
            "{} vertices, histogram {hist:?}, {} edges, table match {}",
            g.vertices().len(),
            g.edges().len(),
            built == golden
        ),
    ))
}

pub fn check_p4_degrees() -> Result<(bool, String)> {
    let m = master::build_master(4, Labeling::Canonical)?;
    let g = skeleton::build_skeleton(m.family())?;
    let support: BTreeSet<usize> = skeleton::degree_histogram(&g).into_keys().collect();
    let expected: BTreeSet<usize> = (14..=28).filter(|d| ![16, 23, 26, 27].contains(d)).collect();
    Ok((support == expected, format!("degree set {support:?}")))
}

pub fn check_worked_example() -> Result<(bool, String)> {
    let f = SimplexFamily::new(4, vec![vec![1, 2, 3], vec![1, 2, 4]])?;
    let by_faces = skeleton::f_vector(&f, DEFAULT_MAX_PARTITION_R)?;
    let red = f.reduce(&[1, 2])?;
    let foot = match &red.foot {
        Some(ff) => skeleton::f_vector(ff, DEFAULT_MAX_PARTITION_R)?,
        None => FPolynomial::zero(),
    };
    let by_reduction = formulas::f_decompose(
        &FPolynomial::simplex(red.class.len()),
        &skeleton::f_vector(&red.reduced, DEFAULT_MAX_PARTITION_R)?,
        &foot,
    )?;
    let seg = FPolynomial::simplex(2);
    let by_hand = formulas::f_decompose(&seg, &seg.mul(&seg), &FPolynomial::simplex(1))?;
    let want = FPolynomial::new(vec![7, 11, 6, 1]);
    Ok((
        by_faces == want && by_reduction == want && by_hand == want,
        format!("faces {by_faces}; reduction {by_reduction}; decomposition {by_hand}"),
    ))
}

/// Adjacent rhombus types; `AC` and `BD` are the diagonals.
fn rhombus_edge_allowed(a: RhombusType, b: RhombusType) -> bool {
    use RhombusType::*;
    !matches!((a, b), (A, C) | (C, A) | (B, D) | (D, B))
}

fn two_sum_violations(first: &[usize], second: &[usize], r: usize) -> Result<Vec<String>> {
    let f = SimplexFamily::new(r, vec![first.to_vec(), second.to_vec()])?;
    let g = skeleton::build_skeleton(&f)?;
    let stats = TwoSumStats::from_sets(first, second);
    let mut bad = Vec::new();
    let v = formulas::two_sum_vertex_count(stats);
    let e = formulas::two_sum_edge_count(stats);
    if v != g.vertices().len() as u64 || e != g.edges().len() as u64 {
        bad.push(format!(
            "{f}: formula V={v} E={e}, skeleton V={} E={}",
            g.vertices().len(),
            g.edges().len()
        ));
    }
    let types = g
        .vertices()
        .iter()
        .map(|u| vertex_type(first, second, u))
        .collect::<Result<Vec<_>>>()?;
    for (i, d) in g.degrees().into_iter().enumerate() {
        let want = skeleton::two_sum_degree(first, second, types[i]);
        if d != want {
            bad.push(format!("{f}: vertex {} degree {d}, formula {want}", g.vertices()[i]));
        }
    }
    if stats.x > 0 && stats.y > 0 && stats.z > 0 {
        for edge in g.edges() {
            if !rhombus_edge_allowed(types[edge.a], types[edge.b]) {
                bad.push(format!("{f}: diagonal edge {:?}{:?}", types[edge.a], types[edge.b]));
            }
        }
    }
    Ok(bad)
}

pub fn check_two_sums(max_r: usize) -> Result<(bool, String)> {
    let pairs = corpus::two_set_pairs(max_r);
    let bad: Vec<String> = pairs
        .par_iter()
        .map(|(a, b)| two_sum_violations(a, b, max_r))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((
        bad.is_empty(),
        format!("{} pairs on [{max_r}], {} mismatches {:?}", pairs.len(), bad.len(), bad.first()),
    ))
}

/// Vectors of `r` nonnegative integers summing to `k`.
pub fn compositions(r: usize, k: u32) -> Vec<Vec<u32>> {
    if r == 1 {
        return vec![vec![k]];
    }
    (0..=k)
        .flat_map(|first| {
            compositions(r - 1, k - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn integer_points_agree(f: &SimplexFamily) -> Result<bool> {
    let images: BTreeSet<LatticePoint> = repfn::integer_points(f, DEFAULT_REPFN_BUDGET)?.into_iter().collect();
    let mut passing = BTreeSet::new();
    for x in compositions(f.ground_size(), f.len() as u32) {
        if f.contains_lattice_point(&x)? {
            passing.insert(LatticePoint::new(x));
        }
    }
    Ok(images == passing)
}

pub fn check_integer_points(max_r: usize, max_k: usize) -> Result<(bool, String)> {
    let mut families = 0usize;
    let mut bad = Vec::new();
    for r in 1..=max_r {
        for k in 1..=max_k {
            let fams = corpus::exhaustive_families(r, k);
            families += fams.len();
            let agree = fams
                .par_iter()
                .map(integer_points_agree)
                .collect::<Result<Vec<_>>>()?;
            bad.extend(fams.iter().zip(agree).filter(|(_, ok)| !ok).map(|(f, _)| f.to_string()));
        }
    }
    Ok((bad.is_empty(), format!("{families} families, {} mismatches {:?}", bad.len(), bad.first())))
}

fn digraph_problems(g: &SkeletonGraph) -> Result<Option<String>> {
    let degrees = g.degrees();
    for v in 0..g.vertices().len() {
        let d = skeleton::vertex_digraph(g, v)?;
        if !(d.is_acyclic() && d.underlying_is_simple() && d.underlying_is_triangle_free())
            || d.arc_count() != degrees[v]
        {
            return Ok(Some(format!("vertex {}", g.vertices()[v])));
        }
    }
    Ok(None)
}

pub fn check_degree_theory(seed: u64) -> Result<(bool, String)> {
    let fams = corpus::skeleton_corpus(seed);
    let problems: Vec<String> = fams
        .par_iter()
        .map(|f| -> Result<Option<String>> {
            let g = skeleton::build_skeleton(f)?;
            if g.max_degree() as u64 > formulas::d_max(f.ground_size() as u64) {
                return Ok(Some(format!("{f}: degree above bound")));
            }
            Ok(digraph_problems(&g)?.map(|p| format!("{f}: digraph at {p}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut lower = Vec::new();
    for r in 2..=7usize {
        for k in 1..=r / 2 {
            let f = formulas::lower_bound_family(k, r)?;
            let g = skeleton::build_skeleton(&f)?;
            let mut apex = vec![0u32; r];
            apex[..k].iter_mut().for_each(|c| *c = 1);
            let Some(v) = g.index_of(&apex) else {
                lower.push(format!("k={k} r={r}: apex missing"));
                continue;
            };
            let degrees = g.degrees();
            let want = formulas::d_k_max(k as u64, r as u64)? as usize;
            let others_ok = degrees.iter().enumerate().all(|(i, &d)| i == v || d == r - 1);
            if degrees[v] != want || !others_ok {
                lower.push(format!("k={k} r={r}: apex degree {}", degrees[v]));
            }
        }
    }
    Ok((
        problems.is_empty() && lower.is_empty(),
        format!(
            "{} corpus skeletons, {} problems; lower-bound families r <= 7: {} problems {:?}",
            fams.len(),
            problems.len(),
            lower.len(),
            problems.first().or(lower.first())
        ),
    ))
}

pub fn check_mantel(max_n: usize) -> Result<(bool, String)> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 2..=max_n {
        for k in 1..=n / 2 {
            let rep = formulas::verify_mantel_brute(n, k)?;
            ok &= rep.holds();
            rows.push(format!("e_{k}({n})={}", rep.max_edges));
        }
    }
    Ok((ok, rows.join(" ")))
}

fn master_reduction_problem(
    f: &SimplexFamily,
    m: &master::MasterFamily,
    master_vertices: &HashSet<LatticePoint>,
    master_skeleton: &SkeletonGraph,
) -> Result<Option<String>> {
    let census = repfn::multiplicity_map(f, DEFAULT_REPFN_BUDGET)?;
    for (u, mult) in census.iter() {
        if master::is_vertex_via_master(f, u, m, master_vertices)? != (mult == 1) {
            return Ok(Some(format!("{f}: point {u} multiplicity {mult}")));
        }
    }
    let g = skeleton::build_skeleton(f)?;
    if !master::edge_types_via_master(f, &g, m, master_skeleton)? {
        return Ok(Some(format!("{f}: edge outside master skeleton")));
    }
    Ok(None)
}

/// Random families with three sets on at most six elements, half of them
/// with repeated signatures.
pub fn master_corpus(seed: u64) -> Vec<SimplexFamily> {
    let mut fams = corpus::random_families(seed, 60, 3..=6, 3..=3);
    fams.extend(corpus::duplicated_signature_families(seed ^ 2, 60, 3..=6, 3..=3));
    fams
}

pub fn check_master_reduction(seed: u64) -> Result<(bool, String)> {
    let m = master::build_master(3, Labeling::Canonical)?;
    let ms = skeleton::build_skeleton(m.family())?;
    let mv: HashSet<LatticePoint> = ms.vertices().iter().cloned().collect();
    let fams = master_corpus(seed);
    let problems: Vec<String> = fams
        .par_iter()
        .map(|f| master_reduction_problem(f, &m, &mv, &ms))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((
        problems.is_empty(),
        format!("{} families, {} problems {:?}", fams.len(), problems.len(), problems.first()),
    ))
}

pub fn check_average_degree(max_r: u64) -> Result<(bool, String)> {
    let mut cases = 0u64;
    let mut bad = Vec::new();
    for r in 2..=max_r {
        let low = Rational::from_integer((r - 1).into());
        let high = Rational::new((10 * (r - 1)).into(), 9.into());
        for x in 0..r {
            for y in 0..r - x {
                let s = TwoSumStats::new(x, y, r - x - y);
                let avg = formulas::average_degree(s)?;
                let boundary = x == 0 || y == 0 || s.z == 1;
                cases += 1;
                if avg < low || avg >= high || (avg == low) != boundary {
                    bad.push(format!("r={r} x={x} y={y}: {avg}"));
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} (x,y,z) cases, {} violations {:?}", bad.len(), bad.first())))
}

pub const CRITERIA: [&str; 10] = [
    "master vertex counts",
    "P(3) table",
    "P(4) degree set",
    "worked f-polynomial",
    "two-sum closed forms",
    "integer points",
    "degree theory",
    "Mantel variant",
    "master reduction",
    "average degree",
];

pub fn run_criterion(id: u32, opts: &SuiteOptions) -> CheckOutcome {
    let name = CRITERIA[(id - 1) as usize];
    match id {
        1 => timed(id, name, check_master_counts),
        2 => timed(id, name, check_p3_table),
        3 if !opts.include_p4_skeleton => skipped(id, name, "P(4) skeleton not requested"),
        3 => timed(id, name, check_p4_degrees),
        4 => timed(id, name, check_worked_example),
        5 => timed(id, name, || check_two_sums(6)),
        6 => timed(id, name, || check_integer_points(6, 3)),
        7 => timed(id, name, || check_degree_theory(opts.seed)),
        8 => timed(id, name, || check_mantel(7)),
        9 => timed(id, name, || check_master_reduction(opts.seed)),
        _ => timed(id, name, || check_average_degree(40)),
    }
}

/// `paper` runs criteria 1 to 10; `quick` skips the two master-polytope
/// builds beyond `P(3)` (criteria 1 and 3).
pub fn run_suite(suite: &str, opts: &SuiteOptions) -> Result<Vec<CheckOutcome>> {
    let ids: Vec<u32> = match suite {
        "paper" => (1..=10).collect(),
        "quick" => vec![2, 4, 5, 6, 7, 8, 9, 10],
        _ => return Err(domain!("unknown suite {suite:?}; expected one of {SUITES:?}")),
    };
    Ok(ids.into_iter().map(|id| run_criterion(id, opts)).collect())
}
