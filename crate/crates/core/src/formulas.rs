//! Closed-form counts for sums of two simplices, the f-polynomial
//! decomposition along an equal-signature class, degree maxima, and the
//! triangle-free extremal count with a brute-force checker.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactlp::Rational;
use crate::family::SimplexFamily;
use crate::skeleton::{part_sizes, FPolynomial};

/// Largest `n` for the brute-force graph enumeration (`2^21` graphs).
pub const MAX_MANTEL_N: usize = 7;

/// Part sizes of two sets: `x = |F∖F'|`, `y = |F'∖F|`, `z = |F∩F'|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoSumStats {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl TwoSumStats {
    pub fn new(x: u64, y: u64, z: u64) -> Self {
        TwoSumStats { x, y, z }
    }

    pub fn from_sets(first: &[usize], second: &[usize]) -> Self {
        let (x, y, z) = part_sizes(first, second);
        TwoSumStats::new(x as u64, y as u64, z as u64)
    }

    /// `|F ∪ F'|`.
    pub fn union(&self) -> u64 {
        self.x + self.y + self.z
    }
}

/// `|F||F'| - |F∩F'|(|F∩F'| - 1)`.
pub fn two_sum_vertex_count(s: TwoSumStats) -> u64 {
    (s.x + s.z) * (s.y + s.z) - s.z * s.z.saturating_sub(1)
}

/// Half the degree sum: `|F∖F'||F'∖F|` vertices of degree `|F| + |F'| - 2`,
/// the rest of degree `|F∪F'| - 1`.
pub fn two_sum_edge_count(s: TwoSumStats) -> u64 {
    let sizes = s.x + s.y + 2 * s.z;
    let high = s.x * s.y * sizes.saturating_sub(2);
    let low = s.z * s.union().saturating_sub(1) * (s.x + s.y + 1);
    (high + low) / 2
}

/// `2E / V` for a sum of two simplices with `F∩F' ≠ ∅`.
pub fn average_degree(s: TwoSumStats) -> Result<Rational> {
    if s.z == 0 {
        return Err(domain!("disjoint sets give a sum of dimension below |F ∪ F'| - 1"));
    }
    Ok(Rational::new(
        BigInt::from(2 * two_sum_edge_count(s)),
        BigInt::from(two_sum_vertex_count(s)),
    ))
}

/// `f_A f' - f_A f'' + f''`.
pub fn f_decompose(f_a: &FPolynomial, f_prime: &FPolynomial, f_double: &FPolynomial) -> Result<FPolynomial> {
    let plus = f_a.mul(f_prime);
    let minus = f_a.mul(f_double);
    let len = plus
        .coefficients()
        .len()
        .max(minus.coefficients().len())
        .max(f_double.coefficients().len());
    let coeffs = (0..len)
        .map(|i| {
            let c = i128::from(plus.coefficient(i)) - i128::from(minus.coefficient(i))
                + i128::from(f_double.coefficient(i));
            u64::try_from(c).map_err(|_| domain!("decomposition yields coefficient {c} at q^{i}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FPolynomial::new(coeffs))
}

/// f-polynomial of `Δ_F + Δ_{F'}` by decomposing along `A = F∩F'`.
pub fn two_sum_f_polynomial(first: &[usize], second: &[usize]) -> Result<FPolynomial> {
    if first.is_empty() || second.is_empty() {
        return Err(domain!("both sets must be nonempty"));
    }
    let s = TwoSumStats::from_sets(first, second);
    let simplex = |a: u64| FPolynomial::simplex(a as usize);
    if s.z <= 1 {
        return Ok(simplex(s.x + s.z).mul(&simplex(s.y + s.z)));
    }
    let f_prime = simplex(s.x + 1).mul(&simplex(s.y + 1));
    let f_double = if s.x > 0 && s.y > 0 {
        simplex(s.x).mul(&simplex(s.y))
    } else {
        FPolynomial::zero()
    };
    f_decompose(&simplex(s.z), &f_prime, &f_double)
}

/// `⌊r²/4⌋`.
pub fn d_max(r: u64) -> u64 {
    r * r / 4
}

/// `k(r - k)` for `1 <= k <= ⌊r/2⌋`.
pub fn d_k_max(k: u64, r: u64) -> Result<u64> {
    if k == 0 || 2 * k > r {
        return Err(domain!("need 1 <= k <= r/2, got k = {k}, r = {r}"));
    }
    Ok(k * (r - k))
}

/// `F_i = {i, k+1, ..., r}` for `i = 1..k`.
pub fn lower_bound_family(k: usize, r: usize) -> Result<SimplexFamily> {
    if k == 0 || k >= r {
        return Err(domain!("need 1 <= k <= r - 1, got k = {k}, r = {r}"));
    }
    let sets = (1..=k)
        .map(|i| std::iter::once(i).chain(k + 1..=r).collect())
        .collect();
    SimplexFamily::new(r, sets)
}

/// `k(n - k)`, the largest edge count of a triangle-free graph on `n`
/// vertices with a vertex cover of size at most `k`.
pub fn mantel_extremal(n: u64, k: u64) -> Result<u64> {
    if k == 0 || 2 * k > n {
        return Err(domain!("need 1 <= k <= n/2, got k = {k}, n = {n}"));
    }
    Ok(k * (n - k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MantelReport {
    pub n: usize,
    pub k: usize,
    /// Graphs on `[n]` examined.
    pub graphs: u64,
    /// Triangle-free graphs with a vertex cover of size at most `k`.
    pub admissible: u64,
    pub max_edges: u64,
    pub maximizers: u64,
    /// Maximizers isomorphic to `K_{k, n-k}`.
    pub complete_bipartite_maximizers: u64,
    pub expected: u64,
}

impl MantelReport {
    pub fn holds(&self) -> bool {
        self.max_edges == self.expected && self.maximizers == self.complete_bipartite_maximizers && self.maximizers > 0
    }
}

struct Graph {
    adj: Vec<u32>,
    edges: u32,
}

fn decode(n: usize, pairs: &[(usize, usize)], bits: u64) -> Graph {
    let mut adj = vec![0u32; n];
    for (e, &(a, b)) in pairs.iter().enumerate() {
        if bits >> e & 1 == 1 {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    Graph {
        adj,
        edges: bits.count_ones(),
    }
}

fn triangle_free(g: &Graph) -> bool {
    g.adj.iter().enumerate().all(|(a, &na)| {
        let mut rest = na & !((2u32 << a) - 1);
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            if na & g.adj[b] != 0 {
                return false;
            }
            rest &= rest - 1;
        }
        true
    })
}

fn is_cover(g: &Graph, set: u32) -> bool {
    g.adj.iter().enumerate().all(|(v, &nv)| set >> v & 1 == 1 || nv & !set == 0)
}

fn has_cover_of_size(g: &Graph, n: usize, k: usize) -> bool {
    (0u32..1 << n).any(|s| s.count_ones() as usize <= k && is_cover(g, s))
}

/// `K_{|S|, n-|S|}` with `S` one side, for some `S` of size `k`.
fn is_complete_bipartite(g: &Graph, n: usize, k: usize) -> bool {
    let full = (1u32 << n) - 1;
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).any(|s| {
        (0..n).all(|v| {
            let want = if s >> v & 1 == 1 { full & !s } else { s };
            g.adj[v] == want
        })
    })
}

/// Enumerates every graph on `n` labeled vertices and tallies the
/// triangle-free ones admitting a vertex cover of size at most `k`.
pub fn verify_mantel_brute(n: usize, k: usize) -> Result<MantelReport> {
    let expected = mantel_extremal(n as u64, k as u64)?;
    if n > MAX_MANTEL_N {
        return Err(Error::Capability(format!(
            "graph enumeration limited to n <= {MAX_MANTEL_N}, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let graphs = 1u64 << pairs.len();
    let chunk = 1u64 << pairs.len().min(12);
    let per_chunk: Vec<(u64, u64, u64, u64)> = (0..graphs / chunk)
        .into_par_iter()
        .map(|c| {
            let (mut admissible, mut best, mut count, mut bip) = (0u64, 0u64, 0u64, 0u64);
            for bits in c * chunk..(c + 1) * chunk {
                let g = decode(n, &pairs, bits);
                if !triangle_free(&g) || !has_cover_of_size(&g, n, k) {
                    continue;
                }
                admissible += 1;
                let e = u64::from(g.edges);
                if e > best {
                    (best, count, bip) = (e, 0, 0);
                }
                if e == best {
                    count += 1;
                    bip += u64::from(is_complete_bipartite(&g, n, k));
                }
            }
            (admissible, best, count, bip)
        })
        .collect();
    let max_edges = per_chunk.iter().map(|c| c.1).max().unwrap_or(0);
    let at_max = per_chunk.iter().filter(|c| c.1 == max_edges);
    Ok(MantelReport {
        n,
        k,
        graphs,
        admissible: per_chunk.iter().map(|c| c.0).sum(),
        max_edges,
        maximizers: at_max.clone().map(|c| c.2).sum(),
        complete_bipartite_maximizers: at_max.map(|c| c.3).sum(),
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlp::rational;

    #[test]
    fn vertex_counts() {
        assert_eq!(two_sum_vertex_count(TwoSumStats::from_sets(&[1, 2, 3], &[1, 2, 4])), 7);
        assert_eq!(two_sum_vertex_count(TwoSumStats::from_sets(&[1, 2], &[2, 3])), 4);
        assert_eq!(two_sum_vertex_count(TwoSumStats::new(3, 4, 0)), 12);
    }

    #[test]
    fn edge_counts() {
        assert_eq!(two_sum_edge_count(TwoSumStats::from_sets(&[1, 2, 3], &[1, 2, 4])), 11);
        assert_eq!(two_sum_edge_count(TwoSumStats::from_sets(&[1, 2], &[2, 3])), 4);
        assert_eq!(two_sum_edge_count(TwoSumStats::new(0, 0, 1)), 0);
        assert_eq!(two_sum_edge_count(TwoSumStats::new(2, 2, 0)), 4);
    }

    #[test]
    fn average_degrees() {
        assert_eq!(average_degree(TwoSumStats::new(0, 3, 2)).unwrap(), rational(4));
        assert_eq!(average_degree(TwoSumStats::new(2, 3, 1)).unwrap(), rational(5));
        let inner = average_degree(TwoSumStats::new(1, 1, 2)).unwrap();
        assert_eq!(inner, Rational::new(22.into(), 7.into()));
        assert!(inner > rational(3) && inner < Rational::new(30.into(), 9.into()));
        assert!(average_degree(TwoSumStats::new(2, 2, 0)).is_err());
    }

    #[test]
    fn decomposition() {
        let two_plus_q = FPolynomial::simplex(2);
        let square = two_plus_q.mul(&two_plus_q);
        let one = FPolynomial::simplex(1);
        let f = f_decompose(&two_plus_q, &square, &one).unwrap();
        assert_eq!(f.coefficients(), &[7, 11, 6, 1]);
        let g = f_decompose(&two_plus_q, &square, &FPolynomial::zero()).unwrap();
        assert_eq!(g, two_plus_q.mul(&square));
        assert!(f_decompose(&FPolynomial::zero(), &one, &square).is_ok());
        assert!(f_decompose(&square, &one, &two_plus_q).is_err());
    }

    #[test]
    fn two_sum_polynomials() {
        assert_eq!(
            two_sum_f_polynomial(&[1, 2, 3], &[1, 2, 4]).unwrap().coefficients(),
            &[7, 11, 6, 1]
        );
        assert_eq!(
            two_sum_f_polynomial(&[1, 2], &[3, 4]).unwrap().coefficients(),
            &[4, 4, 1]
        );
        assert_eq!(
            two_sum_f_polynomial(&[1, 2, 3], &[3, 4]).unwrap(),
            FPolynomial::simplex(3).mul(&FPolynomial::simplex(2))
        );
        assert!(two_sum_f_polynomial(&[], &[1]).is_err());
    }

    #[test]
    fn degree_maxima() {
        assert_eq!(d_max(7), 12);
        assert_eq!(d_k_max(2, 5).unwrap(), 6);
        for r in 2..20 {
            assert_eq!(d_max(r), d_k_max(r / 2, r).unwrap());
        }
        assert!(d_k_max(0, 5).is_err());
        assert!(d_k_max(3, 5).is_err());
    }

    #[test]
    fn lower_bound_families() {
        let f = lower_bound_family(2, 5).unwrap();
        assert_eq!(f.sets(), &[vec![1, 3, 4, 5], vec![2, 3, 4, 5]]);
        assert_eq!(lower_bound_family(1, 4).unwrap().sets(), &[vec![1, 2, 3, 4]]);
        assert!(lower_bound_family(3, 3).is_err());
        assert!(lower_bound_family(0, 3).is_err());
    }

    #[test]
    fn small_mantel_cases() {
        let r = verify_mantel_brute(4, 2).unwrap();
        assert_eq!((r.max_edges, r.maximizers), (4, 3));
        assert!(r.holds());
        let star = verify_mantel_brute(5, 1).unwrap();
        assert_eq!((star.max_edges, star.maximizers), (4, 5));
        assert!(star.holds());
        assert_eq!(mantel_extremal(6, 3).unwrap(), 9);
        assert!(matches!(verify_mantel_brute(8, 2), Err(Error::Capability(_))));
        assert!(verify_mantel_brute(5, 3).is_err());
    }
}
