//! Families of simplices, neighborhood signatures and the ordered-partition
//! face calculus.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactlp::Rational;

/// Largest ground size for which subset-indexed tables (`2^r` entries) are built.
pub const MAX_SUBSET_TABLE_R: usize = 20;

/// An ordered multiset `(F_1, ..., F_k)` of nonempty subsets of `[r]`.
///
/// Sets are stored sorted. Duplicated sets are allowed; only rep-function
/// indexing depends on the order of the sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct SimplexFamily {
    ground_size: usize,
    sets: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    r: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<FamilyJson> for SimplexFamily {
    type Error = Error;

    fn try_from(raw: FamilyJson) -> Result<Self> {
        for set in &raw.sets {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!(
                    "set {set:?} is not strictly increasing"
                )));
            }
        }
        SimplexFamily::new(raw.r, raw.sets)
    }
}

impl From<SimplexFamily> for FamilyJson {
    fn from(f: SimplexFamily) -> Self {
        FamilyJson {
            r: f.ground_size,
            sets: f.sets,
        }
    }
}

/// `N_F(i)`: the (1-based) indices of the sets containing a ground element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NeighborhoodSignature(pub Vec<usize>);

impl NeighborhoodSignature {
    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

/// Connected components of the simplicial complex generated by a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Components of the support, each sorted, ordered by smallest element.
    pub parts: Vec<Vec<usize>>,
    /// `n = |∪F|`.
    pub support_size: usize,
}

impl Components {
    pub fn count(&self) -> usize {
        self.parts.len()
    }
}

/// Result of collapsing a class of equal-signature elements to its maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// The collapsed class `A`.
    pub class: Vec<usize>,
    /// `m = max(A)`.
    pub pivot: usize,
    /// `F'`: every occurrence of `A` replaced by `{m}`. Same ground size.
    pub reduced: SimplexFamily,
    /// `F''`: the face of `P_{F'}` on which `x_m = 0`, i.e. `m` dropped from
    /// every set. `None` when some set becomes empty (the face is empty).
    pub foot: Option<SimplexFamily>,
}

impl SimplexFamily {
    /// Builds a family on ground set `[r]`. Sets are sorted; an element may
    /// not repeat within a set.
    pub fn new(ground_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        if ground_size == 0 {
            return Err(domain!("ground size must be positive"));
        }
        if sets.is_empty() {
            return Err(domain!("a family needs at least one set"));
        }
        let mut canonical = Vec::with_capacity(sets.len());
        for mut set in sets {
            if set.is_empty() {
                return Err(domain!("sets must be nonempty"));
            }
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(domain!("set {set:?} repeats an element"));
            }
            if set[0] == 0 || *set.last().unwrap() > ground_size {
                return Err(domain!("set {set:?} is not a subset of [1..={ground_size}]"));
            }
            canonical.push(set);
        }
        Ok(SimplexFamily {
            ground_size,
            sets: canonical,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    /// `r`.
    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// `k`, the number of sets.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Bitmask of each set (bit `i - 1` for element `i`). Requires `r <= 64`.
    pub(crate) fn set_masks(&self) -> Vec<u64> {
        assert!(self.ground_size <= 64, "bitmasks need r <= 64");
        self.sets
            .iter()
            .map(|s| s.iter().fold(0u64, |m, &i| m | 1 << (i - 1)))
            .collect()
    }

    /// `N_F(i)`.
    pub fn neighborhood(&self, i: usize) -> Result<NeighborhoodSignature> {
        if i == 0 || i > self.ground_size {
            return Err(domain!("ground element {i} outside [1..={}]", self.ground_size));
        }
        Ok(self.signature_unchecked(i))
    }

    fn signature_unchecked(&self, i: usize) -> NeighborhoodSignature {
        NeighborhoodSignature(
            self.sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.binary_search(&i).is_ok())
                .map(|(j, _)| j + 1)
                .collect(),
        )
    }

    /// Signatures of all ground elements, indexed by `i - 1`.
    pub fn signatures(&self) -> Vec<NeighborhoodSignature> {
        (1..=self.ground_size)
            .map(|i| self.signature_unchecked(i))
            .collect()
    }

    /// `∪F`, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ground_size + 1];
        for &i in self.sets.iter().flatten() {
            seen[i] = true;
        }
        (1..=self.ground_size).filter(|&i| seen[i]).collect()
    }

    pub fn components(&self) -> Components {
        let mut uf = UnionFind::<usize>::new(self.ground_size + 1);
        for set in &self.sets {
            for w in set.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let support = self.support();
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &i in &support {
            parts.entry(uf.find(i)).or_default().push(i);
        }
        let mut parts: Vec<Vec<usize>> = parts.into_values().collect();
        parts.sort();
        Components {
            parts,
            support_size: support.len(),
        }
    }

    /// `dim P_F = n - c`.
    pub fn dimension(&self) -> usize {
        let c = self.components();
        c.support_size - c.count()
    }

    /// Maximal classes of support elements sharing one signature, ordered by
    /// smallest element.
    pub fn signature_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: BTreeMap<NeighborhoodSignature, Vec<usize>> = BTreeMap::new();
        for i in 1..=self.ground_size {
            let sig = self.signature_unchecked(i);
            if !sig.is_empty() {
                classes.entry(sig).or_default().push(i);
            }
        }
        let mut classes: Vec<Vec<usize>> = classes.into_values().collect();
        classes.sort();
        classes
    }

    /// Collapses a class `A` of elements with a common signature to `max(A)`.
    pub fn reduce(&self, class: &[usize]) -> Result<Reduction> {
        if class.is_empty() {
            return Err(Error::Precondition("class must be nonempty".into()));
        }
        let mut class = class.to_vec();
        class.sort_unstable();
        class.dedup();
        let signature = self.neighborhood(class[0])?;
        for &i in &class[1..] {
            if self.neighborhood(i)? != signature {
                return Err(Error::Precondition(format!(
                    "elements {} and {i} have different signatures",
                    class[0]
                )));
            }
        }
        let pivot = *class.last().unwrap();
        let sets: Vec<Vec<usize>> = self
            .sets
            .iter()
            .map(|s| {
                s.iter()
                    .copied()
                    .filter(|i| *i == pivot || class.binary_search(i).is_err())
                    .collect()
            })
            .collect();
        let reduced = SimplexFamily::new(self.ground_size, sets)?;
        let foot_sets: Vec<Vec<usize>> = reduced
            .sets
            .iter()
            .map(|s| s.iter().copied().filter(|&i| i != pivot).collect())
            .collect();
        let foot = if foot_sets.iter().any(Vec::is_empty) {
            None
        } else {
            Some(SimplexFamily::new(self.ground_size, foot_sets)?)
        };
        Ok(Reduction {
            class,
            pivot,
            reduced,
            foot,
        })
    }

    /// `F^C`: each set intersected with the last block of `C` it meets. The
    /// face of `P_F` maximizing a functional ordered by `C` is `P_{F^C}`.
    pub fn face_family(&self, partition: &OrderedPartition) -> Result<SimplexFamily> {
        if partition.ground_size != self.ground_size {
            return Err(domain!(
                "partition of [{}] applied to a family on [{}]",
                partition.ground_size,
                self.ground_size
            ));
        }
        let block_of = partition.block_index();
        let sets = self
            .sets
            .iter()
            .map(|s| {
                let top = s.iter().map(|&i| block_of[i]).max().unwrap();
                s.iter().copied().filter(|&i| block_of[i] == top).collect()
            })
            .collect();
        Ok(SimplexFamily {
            ground_size: self.ground_size,
            sets,
        })
    }

    /// `z(D) = |{F : F ∩ D ≠ ∅}|` for every `D ⊆ [r]`, indexed by bitmask.
    pub(crate) fn coverage_table(&self) -> Result<Vec<u32>> {
        let r = self.ground_size;
        if r > MAX_SUBSET_TABLE_R {
            return Err(Error::Capability(format!(
                "subset enumeration needs r <= {MAX_SUBSET_TABLE_R}, got {r}; \
                 use LP hull membership (exactlp::in_hull) instead"
            )));
        }
        let masks = self.set_masks();
        Ok((0u64..1 << r)
            .map(|d| masks.iter().filter(|&&m| m & d != 0).count() as u32)
            .collect())
    }

    /// Membership of an integer vector in `P_F` through the subset
    /// inequalities `Σ_{i∈D} x_i <= z(D)`, `x >= 0`, `Σ x_i = k`.
    pub fn contains_lattice_point(&self, x: &[u32]) -> Result<bool> {
        let table = self.coverage_table()?;
        self.check_len(x.len())?;
        Ok(lattice_point_in(&table, self.len(), x))
    }

    /// Membership of a rational vector in `P_F` (see
    /// [`contains_lattice_point`](Self::contains_lattice_point)).
    pub fn contains_point(&self, x: &[Rational]) -> Result<bool> {
        let table = self.coverage_table()?;
        self.check_len(x.len())?;
        if x.iter().any(|v| v.is_negative()) {
            return Ok(false);
        }
        // Clear denominators: x_i = n_i / L.
        let lcm = x
            .iter()
            .fold(BigInt::from(1), |acc, v| num_integer::lcm(acc, v.denom().clone()));
        let scaled: Vec<BigInt> = x
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        let total: BigInt = scaled.iter().sum();
        if total != &lcm * BigInt::from(self.len()) {
            return Ok(false);
        }
        let mut sums = vec![BigInt::zero(); table.len()];
        for d in 1..table.len() {
            let low = d.trailing_zeros() as usize;
            sums[d] = &sums[d & (d - 1)] + &scaled[low];
            if sums[d] > &lcm * BigInt::from(table[d]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.ground_size {
            return Err(domain!(
                "point has {len} coordinates, ground size is {}",
                self.ground_size
            ));
        }
        Ok(())
    }
}

pub(crate) fn lattice_point_in(table: &[u32], k: usize, x: &[u32]) -> bool {
    if x.iter().map(|&v| v as usize).sum::<usize>() != k {
        return false;
    }
    let mut sums = vec![0u32; table.len()];
    for d in 1..table.len() {
        let low = d.trailing_zeros() as usize;
        sums[d] = sums[d & (d - 1)] + x[low];
        if sums[d] > table[d] {
            return false;
        }
    }
    true
}

impl fmt::Display for SimplexFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, set) in self.sets.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (n, i) in set.iter().enumerate() {
                if n > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{i}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, ") on [{}]", self.ground_size)
    }
}

/// An ordered partition `(C_1, ..., C_s)` of `[r]`. Elements of later blocks
/// carry larger functional weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    ground_size: usize,
    blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn new(ground_size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ground_size + 1];
        let mut canonical = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(domain!("partition blocks must be nonempty"));
            }
            block.sort_unstable();
            for &i in &block {
                if i == 0 || i > ground_size || seen[i] {
                    return Err(domain!("block {block:?} is not disjoint within [1..={ground_size}]"));
                }
                seen[i] = true;
            }
            canonical.push(block);
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(domain!("blocks do not cover [1..={ground_size}]"));
        }
        Ok(OrderedPartition {
            ground_size,
            blocks: canonical,
        })
    }

    /// The single-block partition `([r])`.
    pub fn whole(ground_size: usize) -> Self {
        OrderedPartition {
            ground_size,
            blocks: vec![(1..=ground_size).collect()],
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// Block position (1-based) of each element, indexed by element.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.ground_size + 1];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                idx[i] = b + 1;
            }
        }
        idx
    }
}

/// Every ordered partition of `[r]` (the Fubini number of them).
pub fn ordered_partitions(ground_size: usize) -> Vec<OrderedPartition> {
    fn extend(remaining: u32, blocks: &mut Vec<u32>, r: usize, out: &mut Vec<OrderedPartition>) {
        if remaining == 0 {
            let blocks = blocks
                .iter()
                .map(|&m| (1..=r).filter(|i| m >> (i - 1) & 1 == 1).collect())
                .collect();
            out.push(OrderedPartition {
                ground_size: r,
                blocks,
            });
            return;
        }
        let mut sub = remaining;
        while sub != 0 {
            blocks.push(sub);
            extend(remaining & !sub, blocks, r, out);
            blocks.pop();
            sub = (sub - 1) & remaining;
        }
    }
    assert!(ground_size < 32, "ordered partitions need r < 32");
    let mut out = Vec::new();
    extend((1u32 << ground_size) - 1, &mut Vec::new(), ground_size, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(r: usize, sets: &[&[usize]]) -> SimplexFamily {
        SimplexFamily::new(r, sets.iter().map(|s| s.to_vec()).collect()).unwrap()
    }

    fn h3() -> SimplexFamily {
        fam(7, &[&[1, 2, 4, 5], &[1, 2, 3, 6], &[1, 3, 4, 7]])
    }

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn neighborhoods() {
        let h = h3();
        assert_eq!(h.neighborhood(1).unwrap().0, vec![1, 2, 3]);
        assert_eq!(h.neighborhood(5).unwrap().0, vec![1]);
        assert_eq!(fam(1, &[&[1]]).neighborhood(1).unwrap().0, vec![1]);
        assert!(matches!(h.neighborhood(0), Err(Error::Domain(_))));
        assert!(matches!(h.neighborhood(8), Err(Error::Domain(_))));
    }

    #[test]
    fn components_and_dimension() {
        let chained = fam(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(chained.components().parts, vec![vec![1, 2, 3]]);
        let split = fam(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(split.components().count(), 2);
        assert_eq!(split.dimension(), 2);
        let ex = fam(4, &[&[1, 2, 3], &[1, 2, 4]]);
        assert_eq!(ex.components().count(), 1);
        assert_eq!(ex.components().support_size, 4);
        assert_eq!(ex.dimension(), 3);
        assert_eq!(h3().dimension(), 6);
        assert_eq!(fam(1, &[&[1]]).dimension(), 0);
        // Unused ground elements are outside the support.
        assert_eq!(fam(5, &[&[2, 3]]).dimension(), 1);
    }

    #[test]
    fn reduction_of_worked_example() {
        let ex = fam(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let red = ex.reduce(&[1, 2]).unwrap();
        assert_eq!(red.pivot, 2);
        assert_eq!(red.reduced, fam(4, &[&[2, 3], &[2, 4]]));
        assert_eq!(red.foot, Some(fam(4, &[&[3], &[4]])));

        let same = ex.reduce(&[3]).unwrap();
        assert_eq!(same.reduced, ex);

        assert!(matches!(ex.reduce(&[1, 3]), Err(Error::Precondition(_))));
        assert!(matches!(ex.reduce(&[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn reduction_with_empty_foot() {
        let f = fam(3, &[&[1, 2], &[1, 2, 3]]);
        let red = f.reduce(&[1, 2]).unwrap();
        assert_eq!(red.reduced, fam(3, &[&[2], &[2, 3]]));
        assert_eq!(red.foot, None);
    }

    #[test]
    fn signature_classes() {
        assert_eq!(
            fam(4, &[&[1, 2, 3], &[1, 2, 4]]).signature_classes(),
            vec![vec![1, 2], vec![3], vec![4]]
        );
        assert_eq!(h3().signature_classes().len(), 7);
        assert_eq!(fam(2, &[&[1, 2], &[1, 2]]).signature_classes(), vec![vec![1, 2]]);
    }

    #[test]
    fn face_families() {
        let f = fam(3, &[&[1, 2], &[2, 3]]);
        assert_eq!(f.face_family(&OrderedPartition::whole(3)).unwrap(), f);
        let c = OrderedPartition::new(3, vec![vec![2], vec![1, 3]]).unwrap();
        assert_eq!(f.face_family(&c).unwrap(), fam(3, &[&[1], &[3]]));
        let ex = fam(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let c = OrderedPartition::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(ex.face_family(&c).unwrap(), fam(4, &[&[3], &[4]]));
    }

    #[test]
    fn ordered_partition_validation() {
        assert!(OrderedPartition::new(3, vec![vec![1], vec![1, 2, 3]]).is_err());
        assert!(OrderedPartition::new(3, vec![vec![1], vec![2]]).is_err());
        assert!(OrderedPartition::new(3, vec![vec![], vec![1, 2, 3]]).is_err());
    }

    #[test]
    fn ordered_partition_counts_are_fubini_numbers() {
        let fubini = [1, 1, 3, 13, 75, 541, 4683];
        for r in 1..=6 {
            assert_eq!(ordered_partitions(r).len(), fubini[r], "r = {r}");
        }
    }

    #[test]
    fn point_membership() {
        let f = fam(3, &[&[1, 2], &[2, 3]]);
        assert!(f.contains_point(&[q(1), q(1), q(0)]).unwrap());
        assert!(!f.contains_point(&[q(2), q(0), q(0)]).unwrap());
        let half = Rational::new(1.into(), 2.into());
        assert!(f
            .contains_point(&[half.clone(), q(1), half.clone()])
            .unwrap());
        assert!(!f.contains_point(&[q(-1), q(2), q(1)]).unwrap());
        assert!(f.contains_lattice_point(&[0, 1, 1]).unwrap());
        assert!(!f.contains_lattice_point(&[0, 0, 2]).unwrap());
        assert!(!f.contains_lattice_point(&[0, 1, 0]).unwrap());
        assert!(matches!(f.contains_lattice_point(&[1, 1]), Err(Error::Domain(_))));
        let big = SimplexFamily::new(21, vec![vec![1]]).unwrap();
        assert!(matches!(
            big.contains_lattice_point(&[0; 21]),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = SimplexFamily::from_json(r#"{"r": 4, "sets": [[1,2,3],[1,2,4]]}"#).unwrap();
        assert_eq!(f, fam(4, &[&[1, 2, 3], &[1, 2, 4]]));
        assert_eq!(SimplexFamily::from_json(&f.to_json()).unwrap(), f);
        let dup = SimplexFamily::from_json(r#"{"r": 2, "sets": [[1,2],[1,2]]}"#).unwrap();
        assert_eq!(dup.len(), 2);
        for bad in [
            r#"{"r": 3, "sets": [[0]]}"#,
            r#"{"r": 3, "sets": [[2,1]]}"#,
            r#"{"r": 3, "sets": [[1,1]]}"#,
            r#"{"r": 3, "sets": [[4]]}"#,
            r#"{"r": 3, "sets": [[]]}"#,
            r#"{"r": 3, "sets": []}"#,
            r#"{"r": 3}"#,
        ] {
            assert!(SimplexFamily::from_json(bad).is_err(), "{bad}");
        }
    }
}
