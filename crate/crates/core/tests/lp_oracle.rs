use minksum::exactlp::{self, rational, Feasibility, LinearSystem, LpOutcome, Rational};
use minksum::{repfn, SimplexFamily};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Solves `M z = b` by Gauss-Jordan elimination; `None` when inconsistent or
/// when the columns of `M` are dependent.
fn solve_independent(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect())
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        let p = (pivot_row..rows).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(pivot_row, p);
        let inv = aug[pivot_row][c].recip();
        for v in aug[pivot_row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                for j in 0..=cols {
                    let d = &f * &aug[pivot_row][j];
                    aug[r][j] -= d;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| aug[c][cols].clone()).collect())
}

/// `b` lies in the cone of the columns of `A` iff it is a nonnegative
/// combination of some linearly independent set of columns.
fn feasible_by_bases(a: &[Vec<Rational>], b: &[Rational], n: usize) -> bool {
    (0u32..1 << n).any(|s| {
        let cols: Vec<usize> = (0..n).filter(|j| s >> j & 1 == 1).collect();
        let m: Vec<Vec<Rational>> = a.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        if cols.is_empty() {
            return b.iter().all(Zero::is_zero);
        }
        solve_independent(&m, b).is_some_and(|z| z.iter().all(|v| !v.is_negative()))
    })
}

fn system() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), m),
            prop::collection::vec(-3i64..=3, m),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn feasibility_matches_basis_enumeration((a, b) in system()) {
        let sys = LinearSystem::from_integers(&a, &b).unwrap();
        let n = sys.num_vars();
        let oracle = feasible_by_bases(sys.matrix(), sys.rhs(), n);
        match exactlp::feasible(&sys) {
            Feasibility::Feasible(x) => {
                prop_assert!(oracle);
                prop_assert!(x.iter().all(|v| !v.is_negative()));
                for (row, bi) in sys.matrix().iter().zip(sys.rhs()) {
                    let lhs: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(&lhs, bi);
                }
            }
            Feasibility::Infeasible(y) => {
                prop_assert!(!oracle);
                for j in 0..n {
                    let s: Rational = (0..sys.num_rows()).map(|i| &y[i] * &sys.matrix()[i][j]).sum();
                    prop_assert!(!s.is_positive());
                }
                let yb: Rational = y.iter().zip(sys.rhs()).map(|(p, q)| p * q).sum();
                prop_assert!(yb.is_positive());
            }
        }
    }

    #[test]
    fn optimum_is_attained_at_a_basic_solution((a, b) in system(), c in prop::collection::vec(-3i64..=3, 4)) {
        let sys = LinearSystem::from_integers(&a, &b).unwrap();
        let n = sys.num_vars();
        let objective: Vec<Rational> = c[..n].iter().map(|&v| rational(v)).collect();
        let mut best: Option<Rational> = None;
        for s in 0u32..1 << n {
            let cols: Vec<usize> = (0..n).filter(|j| s >> j & 1 == 1).collect();
            let m: Vec<Vec<Rational>> = sys.matrix().iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
            let z = if cols.is_empty() {
                sys.rhs().iter().all(Zero::is_zero).then(Vec::new)
            } else {
                solve_independent(&m, sys.rhs())
            };
            if let Some(z) = z.filter(|z| z.iter().all(|v| !v.is_negative())) {
                let val: Rational = cols.iter().zip(&z).map(|(&j, v)| &objective[j] * v).sum();
                if best.as_ref().is_none_or(|b| &val > b) {
                    best = Some(val);
                }
            }
        }
        match exactlp::maximize(&sys, &objective).unwrap() {
            LpOutcome::Optimal { value, .. } => prop_assert_eq!(Some(value), best),
            LpOutcome::Infeasible(_) => prop_assert!(best.is_none()),
            LpOutcome::Unbounded => prop_assert!(best.is_some()),
        }
    }

    #[test]
    fn hull_membership_matches_subset_inequalities(
        sets in prop::collection::vec(1u32..16, 1..=3),
        weights in prop::collection::vec(0i64..=5, 4),
    ) {
        let family = SimplexFamily::new(
            4,
            sets.iter().map(|m| (1..=4).filter(|i| m >> (i - 1) & 1 == 1).collect()).collect(),
        ).unwrap();
        let total: i64 = weights.iter().sum();
        prop_assume!(total > 0);
        let k = family.len() as i64;
        let x: Vec<Rational> = weights
            .iter()
            .map(|&w| Rational::new((w * k).into(), total.into()))
            .collect();
        let verts: Vec<Vec<Rational>> = repfn::vertices(&family, 1_000)
            .unwrap()
            .iter()
            .map(|v| v.iter().map(|&c| rational(c as i64)).collect())
            .collect();
        prop_assert_eq!(exactlp::in_hull(&x, &verts).unwrap(), family.contains_point(&x).unwrap());
    }
}
