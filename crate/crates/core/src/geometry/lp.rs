//! Exact rational simplex for small dense programs.
//!
//! Solves `A x = b, x >= 0` with a two-phase tableau method and Bland's
//! anti-cycling rule, then minimises a list of objectives lexicographically.
//! After each objective is optimised, every non-basic column with a strictly
//! positive reduced cost is frozen at zero, which restricts later objectives
//! to the optimal face of the earlier ones.

use num::{Signed, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    /// A lexicographically optimal vertex of the feasible region.
    Optimal(Vec<Rational>),
}

impl LpOutcome {
    pub fn solution(self) -> Option<Vec<Rational>> {
        match self {
            LpOutcome::Optimal(x) => Some(x),
            _ => None,
        }
    }
}

/// Any feasible point of `A x = b, x >= 0` (a basic one), or `None`.
pub fn find_feasible(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    lexicographic_minimum(a, b, &[]).solution()
}

/// Lexicographic minimum of `objectives[0]·x, objectives[1]·x, ...` over
/// `A x = b, x >= 0`. Deterministic for fixed input.
pub fn lexicographic_minimum(
    a: &[Vec<Rational>],
    b: &[Rational],
    objectives: &[Vec<Rational>],
) -> LpOutcome {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|row| row.len() == n), "ragged constraint matrix");
    assert!(objectives.iter().all(|c| c.len() == n), "objective width mismatch");

    let mut t = Tableau::phase_one(a, b, n);
    let mut phase_one_cost = vec![Rational::zero(); n];
    phase_one_cost.extend(std::iter::repeat_n(Rational::from_integer(1.into()), a.len()));
    t.optimize(&phase_one_cost)
        .expect("phase one is bounded below by zero");
    let residual: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&j, _)| j >= n)
        .map(|(_, v)| v.clone())
        .sum();
    if residual.is_positive() {
        return LpOutcome::Infeasible;
    }
    t.evict_artificials(n);
    for allowed in t.allowed.iter_mut().skip(n) {
        *allowed = false;
    }

    for objective in objectives {
        let mut cost = objective.clone();
        cost.resize(t.width(), Rational::zero());
        if t.optimize(&cost).is_err() {
            return LpOutcome::Unbounded;
        }
        let reduced = t.reduced_costs(&cost);
        for (j, d) in reduced.into_iter().enumerate() {
            if let Some(d) = d {
                if d.is_positive() {
                    t.allowed[j] = false;
                }
            }
        }
    }

    let mut x = vec![Rational::zero(); n];
    for (&j, v) in t.basis.iter().zip(&t.rhs) {
        if j < n {
            x[j] = v.clone();
        }
    }
    LpOutcome::Optimal(x)
}

#[derive(Debug)]
struct Unbounded;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    allowed: Vec<bool>,
}

impl Tableau {
    /// Original columns followed by one artificial per row, artificials basic.
    fn phase_one(a: &[Vec<Rational>], b: &[Rational], n: usize) -> Self {
        let m = a.len();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, (row, bi)) in a.iter().zip(b).enumerate() {
            let negate = bi.is_negative();
            let mut full: Vec<Rational> = row
                .iter()
                .map(|v| if negate { -v } else { v.clone() })
                .collect();
            full.extend((0..m).map(|k| Rational::from_integer(i64::from(k == i).into())));
            rows.push(full);
            rhs.push(bi.abs());
        }
        Tableau {
            rows,
            rhs,
            basis: (n..n + m).collect(),
            allowed: vec![true; n + m],
        }
    }

    fn width(&self) -> usize {
        self.allowed.len()
    }

    /// Reduced cost of every allowed non-basic column (`None` otherwise).
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Option<Rational>> {
        let mut is_basic = vec![false; self.width()];
        for &j in &self.basis {
            is_basic[j] = true;
        }
        (0..self.width())
            .map(|j| {
                if is_basic[j] || !self.allowed[j] {
                    return None;
                }
                let mut d = cost[j].clone();
                for (row, &bj) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() && !cost[bj].is_zero() {
                        d -= &cost[bj] * &row[j];
                    }
                }
                Some(d)
            })
            .collect()
    }

    /// Primal simplex with Bland's rule.
    fn optimize(&mut self, cost: &[Rational]) -> Result<(), Unbounded> {
        loop {
            let reduced = self.reduced_costs(cost);
            let Some(entering) = reduced
                .iter()
                .position(|d| d.as_ref().is_some_and(|d| d.is_negative()))
            else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[entering].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[entering];
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let (row, _) = leaving.ok_or(Unbounded)?;
            self.pivot(row, entering);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Pivot zero-level artificials out of the basis; drop redundant rows.
    fn evict_artificials(&mut self, n: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < n {
                i += 1;
                continue;
            }
            match (0..n).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
