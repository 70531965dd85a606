//! Exact rational simplex method.
//!
//! Dense tableau over arbitrary-precision rationals with Bland's rule. Used
//! for convex-hull membership and for certifying polytope edges.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::repfn::LatticePoint;

/// Exact fraction with arbitrary-precision numerator and denominator,
/// always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `A x = b, x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    num_vars: usize,
}

impl LinearSystem {
    pub fn new(num_vars: usize, a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(domain!("{} rows but {} right-hand sides", a.len(), b.len()));
        }
        if let Some(row) = a.iter().find(|row| row.len() != num_vars) {
            return Err(domain!("row of length {} in a system with {num_vars} variables", row.len()));
        }
        Ok(LinearSystem { a, b, num_vars })
    }

    pub fn from_integers(a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        let num_vars = a.first().map_or(0, Vec::len);
        Self::new(
            num_vars,
            a.iter().map(|row| row.iter().map(|&v| rational(v)).collect()).collect(),
            b.iter().map(|&v| rational(v)).collect(),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// `x >= 0` with `A x = b`.
    Feasible(Vec<Rational>),
    /// Farkas certificate `y` with `yᵀA <= 0` and `yᵀb > 0`.
    Infeasible(Vec<Rational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible(Vec<Rational>),
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current (minimization) objective.
    cost: Vec<Rational>,
    value: Rational,
}

impl Tableau {
    fn pivot(&mut self, p: usize, q: usize) {
        let inv = self.rows[p][q].recip();
        if !inv.is_one() {
            for v in self.rows[p].iter_mut().filter(|v| !v.is_zero()) {
                *v *= &inv;
            }
            self.rhs[p] *= &inv;
        }
        let (pivot_row, pivot_rhs) = (self.rows[p].clone(), self.rhs[p].clone());
        for i in 0..self.rows.len() {
            if i == p || self.rows[i][q].is_zero() {
                continue;
            }
            let factor = self.rows[i][q].clone();
            eliminate(&mut self.rows[i], &pivot_row, &factor);
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.cost[q].is_zero() {
            let factor = self.cost[q].clone();
            eliminate(&mut self.cost, &pivot_row, &factor);
            self.value += &factor * &pivot_rhs;
        }
        self.basis[p] = q;
    }

    /// Minimizes with Bland's rule over columns `< allowed`. Returns false if
    /// unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(q) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][q].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][q];
                let better = match &best {
                    None => true,
                    Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q),
                None => return false,
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < n {
                x[j] = self.rhs[i].clone();
            }
        }
        x
    }
}

fn eliminate(row: &mut [Rational], pivot_row: &[Rational], factor: &Rational) {
    for (v, p) in row.iter_mut().zip(pivot_row) {
        if !p.is_zero() {
            *v -= factor * p;
        }
    }
}

/// Phase one. On success the tableau holds a feasible basis that may still
/// contain artificial columns at level zero.
fn phase_one(sys: &LinearSystem) -> std::result::Result<Tableau, Vec<Rational>> {
    let (m, n) = (sys.num_rows(), sys.num_vars);
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, b)) in sys.a.iter().zip(&sys.b).enumerate() {
        let flip = b.is_negative();
        signs.push(if flip { -1 } else { 1 });
        let mut t: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        t.extend((0..m).map(|a| if a == i { Rational::one() } else { Rational::zero() }));
        rows.push(t);
        rhs.push(b.abs());
    }
    let mut cost = vec![Rational::zero(); n + m];
    for row in &rows {
        for (c, v) in cost[..n].iter_mut().zip(row) {
            *c -= v;
        }
    }
    let value = rhs.iter().sum();
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        cost,
        value,
    };
    let bounded = t.run(n + m);
    debug_assert!(bounded, "phase one is bounded below by zero");
    if t.value.is_positive() {
        let certificate = (0..m)
            .map(|i| (Rational::one() - &t.cost[n + i]) * rational(signs[i]))
            .collect();
        return Err(certificate);
    }
    Ok(t)
}

/// Decides `∃ x >= 0 : A x = b`.
pub fn feasible(sys: &LinearSystem) -> Feasibility {
    match phase_one(sys) {
        Ok(t) => Feasibility::Feasible(t.solution(sys.num_vars)),
        Err(y) => Feasibility::Infeasible(y),
    }
}

/// Maximizes `cᵀx` subject to `A x = b, x >= 0`.
pub fn maximize(sys: &LinearSystem, objective: &[Rational]) -> Result<LpOutcome> {
    let n = sys.num_vars;
    if objective.len() != n {
        return Err(domain!("objective has {} entries for {n} variables", objective.len()));
    }
    let mut t = match phase_one(sys) {
        Ok(t) => t,
        Err(y) => return Ok(LpOutcome::Infeasible(y)),
    };
    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    let width = t.rows.first().map_or(n, Vec::len);
    // Minimize -cᵀx.
    let mut cost: Vec<Rational> = objective.iter().map(|c| -c.clone()).collect();
    cost.resize(width, Rational::zero());
    let mut value = Rational::zero();
    for (row, (&b, rhs)) in t.rows.iter().zip(t.basis.iter().zip(&t.rhs)) {
        let cb = -objective[b].clone();
        if cb.is_zero() {
            continue;
        }
        eliminate(&mut cost, row, &cb);
        value += &cb * rhs;
    }
    t.cost = cost;
    t.value = value;
    if !t.run(n) {
        return Ok(LpOutcome::Unbounded);
    }
    Ok(LpOutcome::Optimal {
        value: -t.value.clone(),
        solution: t.solution(n),
    })
}

/// Is `x` a convex combination of `points`?
pub fn in_hull(x: &[Rational], points: &[Vec<Rational>]) -> Result<bool> {
    if points.is_empty() {
        return Err(domain!("hull of an empty point set"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != x.len()) {
        return Err(domain!("point of dimension {} against target of dimension {}", p.len(), x.len()));
    }
    let mut a: Vec<Vec<Rational>> = (0..x.len())
        .map(|l| points.iter().map(|p| p[l].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); points.len()]);
    let mut b = x.to_vec();
    b.push(Rational::one());
    Ok(feasible(&LinearSystem::new(points.len(), a, b)?).is_feasible())
}

/// Maximum total weight off `{u, v}` over convex representations of the
/// midpoint `(u + v) / 2` by `points`. Zero exactly when `[u, v]` is an edge
/// of `conv(points)`.
pub fn off_pair_mass(u: &LatticePoint, v: &LatticePoint, points: &[LatticePoint]) -> Result<Rational> {
    let pu = points.iter().position(|w| w == u);
    let pv = points.iter().position(|w| w == v);
    let (Some(pu), Some(pv)) = (pu, pv) else {
        return Err(domain!("edge endpoints must belong to the vertex list"));
    };
    if pu == pv {
        return Err(domain!("edge endpoints must differ"));
    }
    let dim = u.len();
    if points.iter().any(|w| w.len() != dim) {
        return Err(domain!("vertex list mixes dimensions"));
    }
    let n = points.len();
    let mut a: Vec<Vec<Rational>> = (0..dim)
        .map(|l| points.iter().map(|w| rational(2 * i64::from(w[l]))).collect())
        .collect();
    a.push(vec![Rational::one(); n]);
    let mut b: Vec<Rational> = (0..dim).map(|l| rational(i64::from(u[l]) + i64::from(v[l]))).collect();
    b.push(Rational::one());
    let objective: Vec<Rational> = (0..n)
        .map(|j| if j == pu || j == pv { Rational::zero() } else { Rational::one() })
        .collect();
    match maximize(&LinearSystem::new(n, a, b)?, &objective)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        other => Err(Error::Internal(format!("adjacency LP not optimal: {other:?}"))),
    }
}

/// Is the segment `[u, v]` a 1-face of `conv(points)`?
pub fn is_edge(u: &LatticePoint, v: &LatticePoint, points: &[LatticePoint]) -> Result<bool> {
    Ok(off_pair_mass(u, v, points)?.is_zero())
}
