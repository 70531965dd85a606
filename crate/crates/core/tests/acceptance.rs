use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use minksum::corpus::{self, DEFAULT_SEED};
use minksum::exactlp::Rational;
use minksum::formulas::{self, TwoSumStats};
use minksum::master::{self, Labeling};
use minksum::repfn::{self, DEFAULT_REPFN_BUDGET};
use minksum::skeleton::{self, vertex_type, FPolynomial, RhombusType, DEFAULT_MAX_PARTITION_R};
use minksum::{LatticePoint, SimplexFamily};

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Published vertex table of `P(3)`: seven coordinate rows and a degree row
/// per block, with `N = {123},{12},{23},{13},{1},{2},{3}`.
const P3_ROWS: [&str; 8] = [
    "3 1 1 0 0 1 0 0 0 0 | 2 1 1 0 0 0 0 2 1 1 0 0 0 0 2 1 1 0 0 0 0 | 1 0 0 1 0 0 1 0 0 0",
    "0 0 2 2 1 0 1 2 0 0 | 0 0 1 1 1 0 0 0 0 1 1 1 0 0 0 0 0 1 1 0 2 | 0 0 0 0 1 0 0 1 0 0",
    "0 2 0 1 2 0 0 0 2 1 | 0 0 0 1 0 1 2 0 1 0 1 0 1 0 0 0 1 1 0 1 0 | 0 1 0 0 0 0 0 0 1 0",
    "0 0 0 0 0 2 2 1 1 2 | 0 1 0 0 1 1 0 0 0 0 0 1 1 2 0 1 0 0 1 1 0 | 0 0 1 0 0 1 0 0 0 0",
    "0 0 0 0 0 0 0 0 0 0 | 1 1 1 1 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 | 1 1 1 0 0 0 1 1 1 1",
    "0 0 0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 1 1 1 1 1 1 1 0 0 0 0 0 0 0 | 1 1 1 1 1 1 0 0 0 1",
    "0 0 0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1 1 1 1 1 1 1 | 0 0 0 1 1 1 1 1 1 1",
    "6 6 6 6 6 6 6 6 6 6 | 6 6 6 6 8 6 8 6 6 6 8 6 6 8 6 6 6 6 6 8 8 | 7 8 8 7 8 8 7 8 8 9",
];

fn p3_golden() -> BTreeMap<LatticePoint, usize> {
    let rows: Vec<Vec<u32>> = P3_ROWS
        .iter()
        .map(|r| r.split_whitespace().filter(|t| *t != "|").map(|t| t.parse().unwrap()).collect())
        .collect();
    assert!(rows.iter().all(|r| r.len() == 41));
    (0..41)
        .map(|c| (LatticePoint::new((0..7).map(|r| rows[r][c]).collect()), rows[7][c] as usize))
        .collect()
}

fn criterion_1() -> Check {
    let counts: Vec<usize> = [3, 4, 5]
        .iter()
        .map(|&k| {
            let m = master::build_master(k, Labeling::Canonical).unwrap();
            repfn::vertices(m.family(), DEFAULT_REPFN_BUDGET).unwrap().len()
        })
        .collect();
    ensure(counts == [41, 1015, 59072], format!("vertex counts {counts:?}"))
}

fn criterion_2() -> Check {
    let m = master::build_master(3, Labeling::Paper3).unwrap();
    let g = skeleton::build_skeleton(m.family()).unwrap();
    let built: BTreeMap<LatticePoint, usize> = g.vertices().iter().cloned().zip(g.degrees()).collect();
    let golden = p3_golden();
    let hist = skeleton::degree_histogram(&g);
    let degree_sum: usize = g.degrees().iter().sum();
    ensure(
        built == golden
            && hist == BTreeMap::from([(6, 25), (7, 3), (8, 12), (9, 1)])
            && g.edges().len() == 138
            && degree_sum == 2 * 138,
        format!("table match {}, histogram {hist:?}, {} edges", built == golden, g.edges().len()),
    )
}

fn criterion_3() -> Check {
    let m = master::build_master(4, Labeling::Canonical).unwrap();
    let g = skeleton::build_skeleton(m.family()).unwrap();
    let support: BTreeSet<usize> = skeleton::degree_histogram(&g).into_keys().collect();
    let expected: BTreeSet<usize> = (14..=28).filter(|d| ![16, 23, 26, 27].contains(d)).collect();
    ensure(support == expected, format!("degree set {support:?}"))
}

fn criterion_4() -> Check {
    let f = SimplexFamily::new(4, vec![vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
    let faces = skeleton::f_vector(&f, DEFAULT_MAX_PARTITION_R).unwrap();
    let seg = FPolynomial::simplex(2);
    let decomposed = formulas::f_decompose(&seg, &seg.mul(&seg), &FPolynomial::simplex(1)).unwrap();
    let two_sum = formulas::two_sum_f_polynomial(&[1, 2, 3], &[1, 2, 4]).unwrap();
    let want = [7, 11, 6, 1];
    ensure(
        faces.coefficients() == want && decomposed.coefficients() == want && two_sum.coefficients() == want,
        format!("faces {faces}; decomposition {decomposed}; two-sum {two_sum}"),
    )
}

fn criterion_5() -> Check {
    use RhombusType::*;
    let r = 6;
    let pairs = corpus::two_set_pairs(r);
    let mut bad = Vec::new();
    for (a, b) in &pairs {
        let f = SimplexFamily::new(r, vec![a.clone(), b.clone()]).unwrap();
        let g = skeleton::build_skeleton(&f).unwrap();
        let s = TwoSumStats::from_sets(a, b);
        if g.vertices().len() as u64 != formulas::two_sum_vertex_count(s)
            || g.edges().len() as u64 != formulas::two_sum_edge_count(s)
        {
            bad.push(format!("{f}: counts"));
        }
        let types: Vec<RhombusType> = g.vertices().iter().map(|u| vertex_type(a, b, u).unwrap()).collect();
        for (i, d) in g.degrees().into_iter().enumerate() {
            if d != skeleton::two_sum_degree(a, b, types[i]) {
                bad.push(format!("{f}: degree at {}", g.vertices()[i]));
            }
        }
        if s.x > 0 && s.y > 0 && s.z > 0 {
            for e in g.edges() {
                if matches!((types[e.a], types[e.b]), (A, C) | (C, A) | (B, D) | (D, B)) {
                    bad.push(format!("{f}: diagonal edge"));
                }
            }
        }
    }
    ensure(bad.is_empty(), format!("{} pairs on [{r}], {} mismatches {:?}", pairs.len(), bad.len(), bad.first()))
}

/// All vectors of `r` nonnegative integers summing to `k`.
fn lattice_points(r: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    fn fill(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            fill(i + 1, left - v, cur, out);
        }
    }
    fill(0, k, &mut cur, &mut out);
    out
}

fn criterion_6() -> Check {
    let mut families = 0;
    let mut bad = Vec::new();
    for r in 1..=6 {
        for k in 1..=3 {
            let candidates = lattice_points(r, k as u32);
            for f in corpus::exhaustive_families(r, k) {
                families += 1;
                let images: BTreeSet<Vec<u32>> = repfn::integer_points(&f, DEFAULT_REPFN_BUDGET)
                    .unwrap()
                    .into_iter()
                    .map(LatticePoint::into_inner)
                    .collect();
                let passing: BTreeSet<Vec<u32>> = candidates
                    .iter()
                    .filter(|x| f.contains_lattice_point(x).unwrap())
                    .cloned()
                    .collect();
                if images != passing {
                    bad.push(f.to_string());
                }
            }
        }
    }
    ensure(bad.is_empty(), format!("{families} families, {} mismatches {:?}", bad.len(), bad.first()))
}

fn criterion_7() -> Check {
    let mut bad = Vec::new();
    let fams = corpus::skeleton_corpus(DEFAULT_SEED);
    for f in &fams {
        let g = skeleton::build_skeleton(f).unwrap();
        let r = f.ground_size();
        if g.max_degree() > r * r / 4 {
            bad.push(format!("{f}: max degree {}", g.max_degree()));
        }
        let degrees = g.degrees();
        for v in 0..g.vertices().len() {
            let d = skeleton::vertex_digraph(&g, v).unwrap();
            if !d.is_acyclic() || !d.underlying_is_simple() || !d.underlying_is_triangle_free() || d.arc_count() != degrees[v] {
                bad.push(format!("{f}: digraph at {}", g.vertices()[v]));
            }
        }
    }
    let mut lower = 0;
    for r in 2..=7 {
        for k in 1..=r / 2 {
            lower += 1;
            let f = formulas::lower_bound_family(k, r).unwrap();
            let g = skeleton::build_skeleton(&f).unwrap();
            let apex: Vec<u32> = (0..r).map(|i| u32::from(i < k)).collect();
            let v = g.index_of(&apex).unwrap();
            let degrees = g.degrees();
            if degrees[v] != k * (r - k) || degrees.iter().enumerate().any(|(i, &d)| i != v && d != r - 1) {
                bad.push(format!("lower bound k={k} r={r}: apex degree {}", degrees[v]));
            }
        }
    }
    ensure(
        bad.is_empty(),
        format!("{} corpus skeletons, {lower} lower-bound families, {} problems {:?}", fams.len(), bad.len(), bad.first()),
    )
}

fn criterion_8() -> Check {
    let mut bad = Vec::new();
    let mut cases = 0;
    for n in 2..=7 {
        for k in 1..=n / 2 {
            cases += 1;
            let rep = formulas::verify_mantel_brute(n, k).unwrap();
            let expected = (k * (n - k)) as u64;
            if rep.max_edges != expected || rep.maximizers != rep.complete_bipartite_maximizers || rep.maximizers == 0 {
                bad.push(format!("n={n} k={k}: {rep:?}"));
            }
        }
    }
    ensure(bad.is_empty(), format!("{cases} (n, k) cases up to n = 7, {} failures {:?}", bad.len(), bad.first()))
}

fn criterion_9() -> Check {
    let m = master::build_master(3, Labeling::Canonical).unwrap();
    let ms = skeleton::build_skeleton(m.family()).unwrap();
    let mv: HashSet<LatticePoint> = ms.vertices().iter().cloned().collect();
    let mut fams = corpus::random_families(DEFAULT_SEED, 60, 3..=6, 3..=3);
    fams.extend(corpus::duplicated_signature_families(DEFAULT_SEED ^ 2, 60, 3..=6, 3..=3));
    let mut bad = Vec::new();
    for f in &fams {
        let census = repfn::multiplicity_map(f, DEFAULT_REPFN_BUDGET).unwrap();
        for (u, mult) in census.iter() {
            if master::is_vertex_via_master(f, u, &m, &mv).unwrap() != (mult == 1) {
                bad.push(format!("{f}: point {u}"));
            }
        }
        let g = skeleton::build_skeleton(f).unwrap();
        if !master::edge_types_via_master(f, &g, &m, &ms).unwrap() {
            bad.push(format!("{f}: edge types"));
        }
    }
    ensure(bad.is_empty(), format!("{} families, {} problems {:?}", fams.len(), bad.len(), bad.first()))
}

fn criterion_10() -> Check {
    let mut bad = Vec::new();
    let mut cases = 0;
    for r in 2u64..=40 {
        let low = Rational::from_integer((r - 1).into());
        let high = Rational::new((10 * (r - 1)).into(), 9.into());
        for x in 0..r {
            for y in 0..r - x {
                let z = r - x - y;
                cases += 1;
                let v = x * y + z * (x + y + 1);
                let avg = formulas::average_degree(TwoSumStats::new(x, y, z)).unwrap();
                let by_degrees = Rational::new(
                    ((x * y * (x + y + 2 * z - 2)) + (v - x * y) * (r - 1)).into(),
                    v.into(),
                );
                let boundary = x == 0 || y == 0 || z == 1;
                if avg != by_degrees || avg < low || avg >= high || (avg == low) != boundary {
                    bad.push(format!("r={r} x={x} y={y}: {avg}"));
                }
            }
        }
    }
    ensure(bad.is_empty(), format!("{cases} (x, y, z) cases, {} violations {:?}", bad.len(), bad.first()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("master vertex counts P(3), P(4), P(5)", criterion_1),
        ("P(3) vertex table and degrees", criterion_2),
        ("P(4) degree set", criterion_3),
        ("worked example f-polynomial", criterion_4),
        ("two-sum closed forms, r <= 6", criterion_5),
        ("integer points equal rep-function images", criterion_6),
        ("degree bounds and vertex digraphs", criterion_7),
        ("triangle-free extremal graphs, n <= 7", criterion_8),
        ("master-polytope vertex and edge tests", criterion_9),
        ("average degree bounds, r <= 40", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match &outcome {
            Ok(d) => println!("PASS criterion {} ({name}) [{ms} ms]: {d}", i + 1),
            Err(d) => {
                println!("FAIL criterion {} ({name}) [{ms} ms]: {d}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
