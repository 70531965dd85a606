//! Master polytopes `P(k)`: the sum over `H(k)`, whose ground coordinates
//! carry every nonempty subset of `[k]` exactly once as their signature.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::family::SimplexFamily;
use crate::repfn::LatticePoint;
use crate::skeleton::SkeletonGraph;

pub const MAX_MASTER_K: usize = 5;

/// Point of `P(k)` obtained by the signature projection.
pub type ProjectedPoint = LatticePoint;

/// Order in which nonempty subsets of `[k]` are assigned to coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Labeling {
    /// Descending cardinality, then lexicographic.
    Canonical,
    /// `{1,2,3},{1,2},{2,3},{1,3},{1},{2},{3}`; only for `k = 3`.
    Paper3,
}

impl FromStr for Labeling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Labeling::Canonical),
            "paper3" => Ok(Labeling::Paper3),
            _ => Err(domain!("unknown labeling {s:?} (expected canonical or paper3)")),
        }
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Labeling::Canonical => "canonical",
            Labeling::Paper3 => "paper3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterFamily {
    k: usize,
    labeling: Labeling,
    /// `signatures[i - 1] = N(i)`.
    signatures: Vec<Vec<usize>>,
    family: SimplexFamily,
}

fn canonical_subsets(k: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (1u32..1 << k)
        .map(|m| (1..=k).filter(|&j| m >> (j - 1) & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    subsets
}

/// `H(k)` with `F_j = {i : j ∈ N(i)}`.
pub fn build_master(k: usize, labeling: Labeling) -> Result<MasterFamily> {
    if !(1..=MAX_MASTER_K).contains(&k) {
        return Err(domain!("master polytopes supported for 1 <= k <= {MAX_MASTER_K}, got {k}"));
    }
    let signatures = match labeling {
        Labeling::Canonical => canonical_subsets(k),
        Labeling::Paper3 if k == 3 => vec![
            vec![1, 2, 3],
            vec![1, 2],
            vec![2, 3],
            vec![1, 3],
            vec![1],
            vec![2],
            vec![3],
        ],
        Labeling::Paper3 => return Err(domain!("the paper3 labeling exists only for k = 3")),
    };
    let sets = (1..=k)
        .map(|j| {
            signatures
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(&j))
                .map(|(i, _)| i + 1)
                .collect()
        })
        .collect();
    let family = SimplexFamily::new(signatures.len(), sets)?;
    Ok(MasterFamily {
        k,
        labeling,
        signatures,
        family,
    })
}

impl MasterFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn family(&self) -> &SimplexFamily {
        &self.family
    }

    pub fn signatures(&self) -> &[Vec<usize>] {
        &self.signatures
    }

    /// 1-based coordinate whose signature is `sig`.
    pub fn coordinate_of(&self, sig: &[usize]) -> Option<usize> {
        self.signatures.iter().position(|s| s == sig).map(|i| i + 1)
    }

    fn coordinate_table(&self) -> HashMap<&[usize], usize> {
        self.signatures
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect()
    }
}

/// `v_i = Σ u_j` over the coordinates `j` of `F` whose signature is `N(i)`.
pub fn h_projection(family: &SimplexFamily, u: &[u32], master: &MasterFamily) -> Result<ProjectedPoint> {
    if family.len() != master.k {
        return Err(domain!(
            "family has {} sets but the master polytope is for k = {}",
            family.len(),
            master.k
        ));
    }
    if u.len() != family.ground_size() {
        return Err(domain!("point of length {} for ground size {}", u.len(), family.ground_size()));
    }
    let table = master.coordinate_table();
    let mut v = vec![0u32; master.signatures.len()];
    for (l, sig) in family.signatures().iter().enumerate() {
        if u[l] == 0 {
            continue;
        }
        let idx = table
            .get(sig.members())
            .ok_or_else(|| domain!("coordinate {} is positive but lies in no set", l + 1))?;
        v[*idx] += u[l];
    }
    Ok(LatticePoint::new(v))
}

/// Vertex test through the master polytope: no two distinct positive
/// coordinates share a signature, and the projection is a vertex of `P(k)`.
pub fn is_vertex_via_master(
    family: &SimplexFamily,
    u: &[u32],
    master: &MasterFamily,
    master_vertices: &HashSet<LatticePoint>,
) -> Result<bool> {
    let sigs = family.signatures();
    let mut seen = HashSet::new();
    for (l, sig) in sigs.iter().enumerate() {
        if u.get(l).copied().unwrap_or(0) > 0 && !seen.insert(sig.members()) {
            return Ok(false);
        }
    }
    let v = h_projection(family, u, master)?;
    Ok(master_vertices.contains(&v))
}

/// Every edge of `P_F` joins two vertices with equal projection, or two
/// vertices projecting onto an edge of `P(k)`.
pub fn edge_types_via_master(
    family: &SimplexFamily,
    skeleton: &SkeletonGraph,
    master: &MasterFamily,
    master_skeleton: &SkeletonGraph,
) -> Result<bool> {
    let master_edges = master_skeleton.edge_pairs();
    let projected = skeleton
        .vertices()
        .iter()
        .map(|v| h_projection(family, v, master))
        .collect::<Result<Vec<_>>>()?;
    for e in skeleton.edges() {
        let (pa, pb) = (&projected[e.a], &projected[e.b]);
        if pa == pb {
            continue;
        }
        let (Some(ia), Some(ib)) = (master_skeleton.index_of(pa), master_skeleton.index_of(pb)) else {
            return Ok(false);
        };
        if !master_edges.contains(&(ia.min(ib), ia.max(ib))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Column groups for displaying the vertices of `P(k)`: by how many
/// singleton-signature coordinates are positive (none, one, two or more).
/// Columns inside a group are in descending lexicographic order.
pub fn column_groups(master: &MasterFamily, vertices: &[LatticePoint]) -> Vec<Vec<usize>> {
    let singletons: Vec<usize> = master
        .signatures
        .iter()
        .enumerate()
        .filter(|(_, s)| s.len() == 1)
        .map(|(i, _)| i)
        .collect();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, v) in vertices.iter().enumerate() {
        let positive = singletons.iter().filter(|&&i| v[i] > 0).count();
        groups.entry(positive.min(2)).or_default().push(idx);
    }
    groups
        .into_values()
        .map(|mut g| {
            g.sort_by(|&a, &b| vertices[b].cmp(&vertices[a]));
            g
        })
        .collect()
}
