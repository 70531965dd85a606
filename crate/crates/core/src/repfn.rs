//! Rep-functions: choices `f(j) ∈ F_j`, their lattice points
//! `u(f) = e_{f(1)} + ... + e_{f(k)}`, and vertex detection by uniqueness of
//! the representing function.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::family::SimplexFamily;

/// Default cap on the number of rep-functions a single enumeration may visit.
pub const DEFAULT_REPFN_BUDGET: u128 = 100_000_000;

/// A point of `Z^r_{>=0}`; ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(Vec<u32>);

impl LatticePoint {
    pub fn new(coords: Vec<u32>) -> Self {
        LatticePoint(coords)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }
}

impl Deref for LatticePoint {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl Borrow<[u32]> for LatticePoint {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, c) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A choice of one element from every set: `choices[j] ∈ F_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepFunction {
    choices: Vec<usize>,
}

impl RepFunction {
    pub fn new(family: &SimplexFamily, choices: Vec<usize>) -> Result<Self> {
        if choices.len() != family.len() {
            return Err(domain!(
                "rep-function has {} choices for {} sets",
                choices.len(),
                family.len()
            ));
        }
        for (j, (c, set)) in choices.iter().zip(family.sets()).enumerate() {
            if set.binary_search(c).is_err() {
                return Err(domain!("choice {c} is not in set {} = {set:?}", j + 1));
            }
        }
        Ok(RepFunction { choices })
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    /// `u(f)` in `Z^r`.
    pub fn point(&self, ground_size: usize) -> LatticePoint {
        let mut coords = vec![0u32; ground_size];
        for &c in &self.choices {
            coords[c - 1] += 1;
        }
        LatticePoint(coords)
    }
}

/// `Π_j |F_j|`, saturating.
pub fn rep_function_count(family: &SimplexFamily) -> u128 {
    family
        .sets()
        .iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
}

fn check_budget(family: &SimplexFamily, budget: u128) -> Result<u128> {
    let total = rep_function_count(family);
    if total > budget {
        return Err(Error::Capability(format!(
            "{total} rep-functions exceed the enumeration budget of {budget}"
        )));
    }
    Ok(total)
}

/// Lexicographic stream of rep-functions, resumable at any index.
#[derive(Debug, Clone)]
pub struct RepFnIter<'a> {
    family: &'a SimplexFamily,
    positions: Vec<usize>,
    remaining: u128,
}

impl<'a> RepFnIter<'a> {
    /// Starts at the `index`-th rep-function in lexicographic order.
    pub fn starting_at(family: &'a SimplexFamily, index: u128) -> Self {
        let total = rep_function_count(family);
        let mut positions = vec![0; family.len()];
        let mut rest = index.min(total);
        for (p, set) in positions.iter_mut().zip(family.sets()).rev() {
            let radix = set.len() as u128;
            *p = (rest % radix) as usize;
            rest /= radix;
        }
        RepFnIter {
            family,
            positions,
            remaining: total - index.min(total),
        }
    }

    fn advance(&mut self) {
        for (p, set) in self.positions.iter_mut().zip(self.family.sets()).rev() {
            *p += 1;
            if *p < set.len() {
                return;
            }
            *p = 0;
        }
    }
}

impl Iterator for RepFnIter<'_> {
    type Item = RepFunction;

    fn next(&mut self) -> Option<RepFunction> {
        if self.remaining == 0 {
            return None;
        }
        let choices = self
            .positions
            .iter()
            .zip(self.family.sets())
            .map(|(&p, s)| s[p])
            .collect();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(RepFunction { choices })
    }
}

/// Every rep-function of `family`, lexicographically.
pub fn enumerate_repfns(family: &SimplexFamily, budget: u128) -> Result<RepFnIter<'_>> {
    check_budget(family, budget)?;
    Ok(RepFnIter::starting_at(family, 0))
}

/// Census of `u(f)` over all rep-functions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiplicityMap {
    entries: BTreeMap<LatticePoint, u64>,
}

impl MultiplicityMap {
    pub fn get(&self, point: &[u32]) -> u64 {
        self.entries.get(point).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of rep-functions counted.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, u64)> {
        self.entries.iter().map(|(p, &c)| (p, c))
    }

    /// Points with a unique rep-function, sorted.
    pub fn vertices(&self) -> Vec<LatticePoint> {
        self.iter().filter(|(_, c)| *c == 1).map(|(p, _)| p.clone()).collect()
    }

    /// All images `u(f)`, sorted.
    pub fn points(&self) -> Vec<LatticePoint> {
        self.entries.keys().cloned().collect()
    }

    /// Pointwise sum of two censuses.
    pub fn merge(mut self, other: MultiplicityMap) -> MultiplicityMap {
        for (p, c) in other.entries {
            *self.entries.entry(p).or_default() += c;
        }
        self
    }
}

fn census_range(family: &SimplexFamily, start: u128, end: u128) -> HashMap<LatticePoint, u64> {
    let sets = family.sets();
    let mut it = RepFnIter::starting_at(family, start);
    let mut counts = vec![0u32; family.ground_size()];
    for (&p, s) in it.positions.iter().zip(sets) {
        counts[s[p] - 1] += 1;
    }
    let mut map: HashMap<LatticePoint, u64> = HashMap::new();
    let mut index = start;
    loop {
        match map.get_mut(&counts[..]) {
            Some(c) => *c += 1,
            None => {
                map.insert(LatticePoint(counts.clone()), 1);
            }
        }
        index += 1;
        if index >= end {
            break;
        }
        // Odometer step with incremental coordinate updates.
        for (p, set) in it.positions.iter_mut().zip(sets).rev() {
            counts[set[*p] - 1] -= 1;
            *p += 1;
            if *p < set.len() {
                counts[set[*p] - 1] += 1;
                break;
            }
            *p = 0;
            counts[set[0] - 1] += 1;
        }
    }
    map
}

/// Exact census of the images `u(f)`. Disjoint index ranges are scanned in
/// parallel and merged by pointwise addition.
pub fn multiplicity_map(family: &SimplexFamily, budget: u128) -> Result<MultiplicityMap> {
    let total = check_budget(family, budget)?;
    let chunks = (rayon::current_num_threads() as u128 * 4).min(total).max(1);
    let step = total.div_ceil(chunks);
    let merged = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * step;
            let end = ((c + 1) * step).min(total);
            if start >= end {
                HashMap::new()
            } else {
                census_range(family, start, end)
            }
        })
        .reduce(HashMap::new, |mut a, b| {
            if a.len() < b.len() {
                return merge_maps(b, a);
            }
            for (p, c) in b {
                *a.entry(p).or_default() += c;
            }
            a
        });
    Ok(MultiplicityMap {
        entries: merged.into_iter().collect(),
    })
}

fn merge_maps(mut a: HashMap<LatticePoint, u64>, b: HashMap<LatticePoint, u64>) -> HashMap<LatticePoint, u64> {
    for (p, c) in b {
        *a.entry(p).or_default() += c;
    }
    a
}

/// Vertices of `P_F`: the points with exactly one rep-function.
pub fn vertices(family: &SimplexFamily, budget: u128) -> Result<Vec<LatticePoint>> {
    Ok(multiplicity_map(family, budget)?.vertices())
}

/// Integer points of `P_F`, i.e. all distinct images `u(f)`.
pub fn integer_points(family: &SimplexFamily, budget: u128) -> Result<Vec<LatticePoint>> {
    Ok(multiplicity_map(family, budget)?.points())
}

/// Componentwise `(min{f,g}, max{f,g})`. Fails when a coordinate of either
/// result leaves its set.
pub fn meet_join(
    family: &SimplexFamily,
    f: &RepFunction,
    g: &RepFunction,
) -> Result<(RepFunction, RepFunction)> {
    if f.choices.len() != family.len() || g.choices.len() != family.len() {
        return Err(domain!("rep-functions do not match the family"));
    }
    let lo: Vec<usize> = f.choices.iter().zip(&g.choices).map(|(a, b)| *a.min(b)).collect();
    let hi: Vec<usize> = f.choices.iter().zip(&g.choices).map(|(a, b)| *a.max(b)).collect();
    let structure = |e: Error| Error::Structure(format!("meet/join leaves the family: {e}"));
    Ok((
        RepFunction::new(family, lo).map_err(structure)?,
        RepFunction::new(family, hi).map_err(structure)?,
    ))
}

/// Given `u(g) = u(f) + t(e_{i1} - e_{i2})`, returns `f_1, ..., f_{t-1}` with
/// `u(f_l) = u(f) + l(e_{i1} - e_{i2})`.
///
/// Each step finds an alternating path from `v_{i2}` to `v_{i1}` in the
/// bipartite set/element graph, leaving `w_j` through `f` and entering the
/// next element through `g`, and switches `f` to `g` along it.
pub fn alternating_interpolate(
    family: &SimplexFamily,
    f: &RepFunction,
    g: &RepFunction,
    i1: usize,
    i2: usize,
    t: u32,
) -> Result<Vec<RepFunction>> {
    let r = family.ground_size();
    for h in [f, g] {
        RepFunction::new(family, h.choices.clone())?;
    }
    if i1 == 0 || i1 > r || i2 == 0 || i2 > r || i1 == i2 {
        return Err(domain!("i1 = {i1} and i2 = {i2} must be distinct elements of [1..={r}]"));
    }
    if t == 0 {
        return Err(domain!("t must be positive"));
    }
    let (uf, ug) = (f.point(r), g.point(r));
    let expected_ok = (0..r).all(|l| {
        let shift = if l + 1 == i1 {
            i64::from(t)
        } else if l + 1 == i2 {
            -i64::from(t)
        } else {
            0
        };
        i64::from(ug[l]) == i64::from(uf[l]) + shift
    });
    if !expected_ok {
        return Err(domain!("u(g) != u(f) + {t}(e_{i1} - e_{i2})"));
    }

    let k = family.len();
    let mut current = f.choices.clone();
    let mut out = Vec::with_capacity(t as usize - 1);
    for _ in 1..t {
        // BFS over elements; from element a, step through a set j with
        // current(j) = a != g(j) to element g(j).
        let mut via: Vec<Option<usize>> = vec![None; r + 1];
        let mut seen = vec![false; r + 1];
        seen[i2] = true;
        let mut queue = VecDeque::from([i2]);
        while let Some(a) = queue.pop_front() {
            if a == i1 {
                break;
            }
            for j in 0..k {
                if current[j] == a && g.choices[j] != a {
                    let b = g.choices[j];
                    if !seen[b] {
                        seen[b] = true;
                        via[b] = Some(j);
                        queue.push_back(b);
                    }
                }
            }
        }
        if !seen[i1] {
            return Err(Error::Internal(format!(
                "no alternating path from {i2} to {i1} in the matching graph"
            )));
        }
        let mut node = i1;
        while node != i2 {
            let j = via[node].expect("path is recorded back to the source");
            node = current[j];
            current[j] = g.choices[j];
        }
        out.push(RepFunction {
            choices: current.clone(),
        });
    }
    Ok(out)
}

/// The vertex maximizing a functional whose weights increase along `order`:
/// coordinate `i` counts the sets whose latest element under `order` is `i`.
pub fn greedy_vertex(family: &SimplexFamily, order: &[usize]) -> Result<LatticePoint> {
    let r = family.ground_size();
    let mut rank = vec![usize::MAX; r + 1];
    if order.len() != r {
        return Err(domain!("order has {} entries for ground size {r}", order.len()));
    }
    for (pos, &i) in order.iter().enumerate() {
        if i == 0 || i > r || rank[i] != usize::MAX {
            return Err(domain!("order {order:?} is not a permutation of [1..={r}]"));
        }
        rank[i] = pos;
    }
    let mut coords = vec![0u32; r];
    for set in family.sets() {
        let top = *set.iter().max_by_key(|&&i| rank[i]).unwrap();
        coords[top - 1] += 1;
    }
    Ok(LatticePoint(coords))
}
