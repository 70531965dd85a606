//! The 1-skeleton of `P_F`, vertex digraphs, rhombus typing for sums of two
//! simplices, and f-vectors by ordered-partition face enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactlp;
use crate::family::{ordered_partitions, SimplexFamily, MAX_SUBSET_TABLE_R};
use crate::repfn::{self, LatticePoint, DEFAULT_REPFN_BUDGET};

/// Default vertex budget for LP-certified skeletons.
pub const DEFAULT_MAX_VERTICES: usize = 1500;
/// Default ground-size limit for ordered-partition enumeration.
pub const DEFAULT_MAX_PARTITION_R: usize = 8;

/// An edge `{a, b}` (vertex indices, `a < b`) with
/// `vertices[b] - vertices[a] = alpha * (e_plus - e_minus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SkeletonEdge {
    pub a: usize,
    pub b: usize,
    pub plus: usize,
    pub minus: usize,
    pub alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonGraph {
    vertices: Vec<LatticePoint>,
    edges: Vec<SkeletonEdge>,
}

/// Knobs for [`build_skeleton_with`].
#[derive(Debug, Clone)]
pub struct SkeletonOptions {
    pub max_vertices: usize,
    pub repfn_budget: u128,
    /// Only test pairs differing by a multiple of `e_i - e_j`.
    pub parallel_candidates_only: bool,
    /// Restrict each adjacency LP to the vertices of the smallest face
    /// containing the pair's midpoint (exact; needs `r <= 20`).
    pub face_filter: bool,
}

impl Default for SkeletonOptions {
    fn default() -> Self {
        SkeletonOptions {
            max_vertices: DEFAULT_MAX_VERTICES,
            repfn_budget: DEFAULT_REPFN_BUDGET,
            parallel_candidates_only: true,
            face_filter: true,
        }
    }
}

/// `Some((plus, minus, alpha))` when `b - a = alpha (e_plus - e_minus)`.
pub fn edge_direction(a: &[u32], b: &[u32]) -> Option<(usize, usize, u32)> {
    let mut plus = None;
    let mut minus = None;
    for (l, (&x, &y)) in a.iter().zip(b).enumerate() {
        if x == y {
            continue;
        }
        let slot = if y > x { &mut plus } else { &mut minus };
        if slot.is_some() {
            return None;
        }
        *slot = Some((l + 1, x.abs_diff(y)));
    }
    match (plus, minus) {
        (Some((p, s)), Some((m, t))) if s == t => Some((p, m, s)),
        _ => None,
    }
}

impl SkeletonGraph {
    /// Assembles a graph from vertices and undirected index pairs.
    pub fn from_pairs(vertices: Vec<LatticePoint>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (x, y) in pairs {
            let (a, b) = (x.min(y), x.max(y));
            let (plus, minus, alpha) = edge_direction(&vertices[a], &vertices[b]).ok_or_else(|| {
                Error::Internal(format!(
                    "edge {} -- {} is not parallel to any e_i - e_j",
                    vertices[a], vertices[b]
                ))
            })?;
            edges.push(SkeletonEdge { a, b, plus, minus, alpha });
        }
        edges.sort();
        edges.dedup();
        Ok(SkeletonGraph { vertices, edges })
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[SkeletonEdge] {
        &self.edges
    }

    pub fn index_of(&self, point: &[u32]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.coords().cmp(point)).ok()
    }

    pub fn edge_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.a, e.b)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| match (e.a == v, e.b == v) {
                (true, _) => Some(e.b),
                (_, true) => Some(e.a),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Graphviz rendering. Vertices are labeled with coordinates and degree,
    /// edges with their direction `e{i}-e{j} x{alpha}`.
    pub fn to_dot(&self) -> String {
        let deg = self.degrees();
        let mut out = String::from("graph skeleton {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "  v{i} [label=\"{v} deg {}\"];", deg[i]).unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  v{} -- v{} [label=\"e{}-e{} x{}\"];",
                e.a, e.b, e.plus, e.minus, e.alpha
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Locates the smallest face of `P_F` containing a point, through the tight
/// subset inequalities `x(D) = z(D)`. Tight sets are closed under union and
/// intersection, so a point `w` of `P_F` lies on that face iff `w(T_i) = z(T_i)`
/// for the minimal tight set `T_i` around each element `i`.
struct FaceLocator {
    coverage: Vec<u32>,
}

impl FaceLocator {
    fn new(family: &SimplexFamily) -> Result<Self> {
        Ok(FaceLocator {
            coverage: family.coverage_table()?,
        })
    }

    /// Minimal tight sets of the midpoint of `u` and `v`.
    fn tight_closures(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let r = u.len();
        let full = ((1u64 << r) - 1) as u32;
        let doubled: Vec<u32> = u.iter().zip(v).map(|(a, b)| a + b).collect();
        let mut sums = vec![0u32; self.coverage.len()];
        let mut closure = vec![full; r];
        for d in 1..self.coverage.len() {
            sums[d] = sums[d & (d - 1)] + doubled[d.trailing_zeros() as usize];
            if sums[d] == 2 * self.coverage[d] {
                let mut bits = d as u32;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    closure[i] &= d as u32;
                    bits &= bits - 1;
                }
            }
        }
        closure.sort_unstable();
        closure.dedup();
        closure
    }

    fn on_face(&self, closures: &[u32], w: &[u32]) -> bool {
        closures.iter().all(|&t| {
            let mut bits = t;
            let mut sum = 0;
            while bits != 0 {
                sum += w[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            sum == self.coverage[t as usize]
        })
    }
}

/// The 1-skeleton with default options.
pub fn build_skeleton(family: &SimplexFamily) -> Result<SkeletonGraph> {
    build_skeleton_with(family, &SkeletonOptions::default())
}

/// Vertices from the rep-function census; every candidate pair certified by
/// the exact adjacency LP.
pub fn build_skeleton_with(family: &SimplexFamily, opts: &SkeletonOptions) -> Result<SkeletonGraph> {
    let vertices = repfn::vertices(family, opts.repfn_budget)?;
    if vertices.len() > opts.max_vertices {
        return Err(Error::Capability(format!(
            "{} vertices exceed the skeleton budget of {}",
            vertices.len(),
            opts.max_vertices
        )));
    }
    let locator = if opts.face_filter && family.ground_size() <= MAX_SUBSET_TABLE_R {
        Some(FaceLocator::new(family)?)
    } else {
        None
    };
    let n = vertices.len();
    let candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !opts.parallel_candidates_only || edge_direction(&vertices[a], &vertices[b]).is_some())
        .collect();
    let certified: Vec<Option<(usize, usize)>> = candidates
        .into_par_iter()
        .map(|(a, b)| {
            let (u, v) = (&vertices[a], &vertices[b]);
            let adjacent = match &locator {
                Some(loc) => {
                    let closures = loc.tight_closures(u, v);
                    let face: Vec<LatticePoint> = vertices
                        .iter()
                        .filter(|w| loc.on_face(&closures, w))
                        .cloned()
                        .collect();
                    exactlp::is_edge(u, v, &face)?
                }
                None => exactlp::is_edge(u, v, &vertices)?,
            };
            Ok(adjacent.then_some((a, b)))
        })
        .collect::<Result<_>>()?;
    SkeletonGraph::from_pairs(vertices, certified.into_iter().flatten())
}

fn canonical_key(family: &SimplexFamily) -> Vec<Vec<usize>> {
    let mut key = family.sets().to_vec();
    key.sort();
    key
}

fn check_partition_r(family: &SimplexFamily, max_r: usize) -> Result<()> {
    if family.ground_size() > max_r {
        return Err(Error::Capability(format!(
            "ordered-partition enumeration limited to r <= {max_r}, got r = {}",
            family.ground_size()
        )));
    }
    Ok(())
}

/// The 1-skeleton from the faces `P_{F^C}` of dimension one, one ordered
/// partition at a time. Independent of the LP route.
pub fn skeleton_via_partitions(family: &SimplexFamily, max_r: usize) -> Result<SkeletonGraph> {
    check_partition_r(family, max_r)?;
    let vertices = repfn::vertices(family, DEFAULT_REPFN_BUDGET)?;
    let index: HashMap<&LatticePoint, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut seen: HashMap<Vec<Vec<usize>>, ()> = HashMap::new();
    let mut pairs = BTreeSet::new();
    for partition in ordered_partitions(family.ground_size()) {
        let face = family.face_family(&partition)?;
        let key = canonical_key(&face);
        if seen.insert(key, ()).is_some() || face.dimension() != 1 {
            continue;
        }
        let ends = repfn::vertices(&face, DEFAULT_REPFN_BUDGET)?;
        if ends.len() != 2 {
            return Err(Error::Internal(format!("one-dimensional face with {} vertices", ends.len())));
        }
        let a = index[&ends[0]];
        let b = index[&ends[1]];
        pairs.insert((a.min(b), a.max(b)));
    }
    SkeletonGraph::from_pairs(vertices, pairs)
}

/// `degree -> number of vertices with that degree`.
pub fn degree_histogram(graph: &SkeletonGraph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for d in graph.degrees() {
        *hist.entry(d).or_default() += 1;
    }
    hist
}

/// Directed graph on `[r]` with an arc `(i, j)` whenever `u + α(e_i - e_j)`
/// is a neighbor of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDigraph {
    pub ground_size: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl VertexDigraph {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn heads(&self) -> BTreeSet<usize> {
        self.arcs.iter().map(|&(_, j)| j).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let r = self.ground_size;
        let mut indegree = vec![0usize; r + 1];
        for &(_, j) in &self.arcs {
            indegree[j] += 1;
        }
        let mut ready: Vec<usize> = (1..=r).filter(|&i| indegree[i] == 0).collect();
        let mut removed = 0;
        while let Some(i) = ready.pop() {
            removed += 1;
            for &(_, j) in self.arcs.range((i, 0)..(i + 1, 0)) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        removed == r
    }

    /// No pair of opposite arcs.
    pub fn underlying_is_simple(&self) -> bool {
        self.arcs.iter().all(|&(i, j)| i != j && !self.arcs.contains(&(j, i)))
    }

    pub fn underlying_is_triangle_free(&self) -> bool {
        let r = self.ground_size;
        let mut adj = vec![vec![false; r + 1]; r + 1];
        for &(i, j) in &self.arcs {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        for a in 1..=r {
            for b in a + 1..=r {
                if !adj[a][b] {
                    continue;
                }
                if (b + 1..=r).any(|c| adj[a][c] && adj[b][c]) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn vertex_digraph(graph: &SkeletonGraph, vertex: usize) -> Result<VertexDigraph> {
    if vertex >= graph.vertices.len() {
        return Err(domain!("vertex index {vertex} out of range"));
    }
    let ground_size = graph.vertices[vertex].len();
    let mut arcs = BTreeSet::new();
    for e in &graph.edges {
        if e.a == vertex {
            arcs.insert((e.plus, e.minus));
        } else if e.b == vertex {
            arcs.insert((e.minus, e.plus));
        }
    }
    Ok(VertexDigraph { ground_size, arcs })
}

/// Position of a vertex `e_i + e_j` of `Δ_F + Δ_{F'}` relative to the parts
/// `F∖F'`, `F∩F'`, `F'∖F`, named after the rhombus `A=(1,1,0)`, `B=(0,2,0)`,
/// `C=(0,1,1)`, `D=(1,0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RhombusType {
    A,
    B,
    C,
    D,
}

/// Type of the vertex `u` of `Δ_F + Δ_{F'}`; works for any pair of sets.
pub fn vertex_type(first: &[usize], second: &[usize], u: &[u32]) -> Result<RhombusType> {
    let in_set = |s: &[usize], i: usize| s.contains(&i);
    let mut reps = Vec::new();
    for &i in first {
        for &j in second {
            if i == 0 || j == 0 || i > u.len() || j > u.len() {
                return Err(domain!("sets exceed the ground size {}", u.len()));
            }
            let matches = (0..u.len()).all(|l| {
                let want = u32::from(l + 1 == i) + u32::from(l + 1 == j);
                u[l] == want
            });
            if matches {
                reps.push((i, j));
            }
        }
    }
    let [(i, j)] = reps[..] else {
        return Err(domain!("{u:?} is not a vertex of the sum ({} representations)", reps.len()));
    };
    let i_shared = in_set(second, i);
    let j_shared = in_set(first, j);
    Ok(match (i_shared, j_shared) {
        (false, true) => RhombusType::A,
        (true, true) => RhombusType::B,
        (true, false) => RhombusType::C,
        (false, false) => RhombusType::D,
    })
}

/// [`vertex_type`] restricted to pairs where `F∖F'`, `F∩F'` and `F'∖F`
/// are all nonempty.
pub fn classify_rhombus(first: &[usize], second: &[usize], u: &[u32]) -> Result<RhombusType> {
    let (x, y, z) = part_sizes(first, second);
    if x == 0 || y == 0 || z == 0 {
        return Err(domain!("rhombus typing needs F∖F', F∩F' and F'∖F nonempty"));
    }
    vertex_type(first, second, u)
}

/// `(|F∖F'|, |F'∖F|, |F∩F'|)`.
pub fn part_sizes(first: &[usize], second: &[usize]) -> (usize, usize, usize) {
    let z = first.iter().filter(|i| second.contains(i)).count();
    (first.len() - z, second.len() - z, z)
}

/// Degree of a vertex of `Δ_F + Δ_{F'}` by type: `|F∪F'| - 1` for A, B, C
/// and `|F| + |F'| - 2` for D.
pub fn two_sum_degree(first: &[usize], second: &[usize], t: RhombusType) -> usize {
    let (x, y, z) = part_sizes(first, second);
    match t {
        RhombusType::A | RhombusType::B | RhombusType::C => x + y + z - 1,
        RhombusType::D => first.len() + second.len() - 2,
    }
}

/// `f_P(q) = Σ f_i q^i`, `f_i` the number of `i`-dimensional faces. The
/// polytope counts as its own top face.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FPolynomial(Vec<u64>);

impl FPolynomial {
    /// Strips trailing zero coefficients.
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FPolynomial(coeffs)
    }

    /// The f-polynomial of the empty polytope.
    pub fn zero() -> Self {
        FPolynomial(Vec::new())
    }

    /// `(a - 1)`-simplex: `f_i = C(a, i + 1)`.
    pub fn simplex(vertices: usize) -> Self {
        let mut coeffs = Vec::with_capacity(vertices);
        let mut binom: u64 = 1;
        for i in 0..vertices as u64 {
            binom = binom * (vertices as u64 - i) / (i + 1);
            coeffs.push(binom);
        }
        FPolynomial::new(coeffs)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Product rule for Cartesian products of polytopes.
    pub fn mul(&self, other: &FPolynomial) -> FPolynomial {
        if self.is_zero() || other.is_zero() {
            return FPolynomial::zero();
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        FPolynomial::new(out)
    }

    /// `Σ (-1)^i f_i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

impl fmt::Display for FPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{c}q")?,
                (_, 1) => write!(f, "q^{i}")?,
                _ => write!(f, "{c}q^{i}")?,
            }
        }
        Ok(())
    }
}

/// Face counts of `P_F`. Every ordered partition `C` of `[r]` gives the face
/// `P_{F^C}`; faces are identified by the vertices of `P_F` they contain.
pub fn f_vector(family: &SimplexFamily, max_r: usize) -> Result<FPolynomial> {
    check_partition_r(family, max_r)?;
    let vertices = repfn::vertices(family, DEFAULT_REPFN_BUDGET)?;
    let words = vertices.len().div_ceil(64);
    let mut by_family: HashMap<Vec<Vec<usize>>, ()> = HashMap::new();
    let mut faces: HashMap<Vec<u64>, usize> = HashMap::new();
    for partition in ordered_partitions(family.ground_size()) {
        let face = family.face_family(&partition)?;
        if by_family.insert(canonical_key(&face), ()).is_some() {
            continue;
        }
        let weight = partition.block_index();
        let score = |v: &LatticePoint| -> u64 {
            v.iter().enumerate().map(|(l, &c)| u64::from(c) * weight[l + 1] as u64).sum()
        };
        let best = vertices.iter().map(score).max().unwrap_or(0);
        let mut key = vec![0u64; words];
        for (i, v) in vertices.iter().enumerate() {
            if score(v) == best {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        let dim = face.dimension();
        if let Some(&prev) = faces.get(&key) {
            if prev != dim {
                return Err(Error::Internal(format!("face seen with dimensions {prev} and {dim}")));
            }
        } else {
            faces.insert(key, dim);
        }
    }
    let top = family.dimension();
    let mut coeffs = vec![0u64; top + 1];
    for dim in faces.into_values() {
        coeffs[dim] += 1;
    }
    Ok(FPolynomial::new(coeffs))
}
