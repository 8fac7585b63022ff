//! Row-stochastic and connectivity matrices.

use std::fmt;

use num::{One, Signed, Zero};

use crate::graph::{ProcessId, ReducedGraph};
use crate::rational::format_rational;
use crate::{Error, Rational, Result};

/// A square matrix with entries in `[0, 1]` and rows summing to exactly 1.
#[derive(Clone, PartialEq, Eq)]
pub struct RowStochasticMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RowStochasticMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::usage("stochastic matrices need at least one row"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|a| a.is_negative() || *a > Rational::one()) {
                return Err(Error::usage(format!("row {} has an entry outside [0, 1]", i + 1)));
            }
            if row.iter().sum::<Rational>() != Rational::one() {
                return Err(Error::usage(format!("row {} does not sum to 1", i + 1)));
            }
        }
        Ok(RowStochasticMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        RowStochasticMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `self * rhs`.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        let n = self.size();
        if rhs.size() != n {
            return Err(Error::usage(format!(
                "cannot multiply {n}x{n} by {0}x{0}",
                rhs.size()
            )));
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.rows[i][k] * &rhs.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        Ok(RowStochasticMatrix { rows })
    }

    /// `delta(A) = max_j max_{i1,i2} |A_{i1 j} - A_{i2 j}|`.
    pub fn delta(&self) -> Rational {
        let n = self.size();
        (0..n)
            .map(|j| {
                let column = self.rows.iter().map(|r| &r[j]);
                column.clone().max().unwrap() - column.min().unwrap()
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `lambda(A) = 1 - min_{i1,i2} sum_j min(A_{i1 j}, A_{i2 j})`.
    pub fn lambda(&self) -> Rational {
        let n = self.size();
        let mut overlap_min = Rational::one();
        for a in 0..n {
            for b in a + 1..n {
                let overlap: Rational = self.rows[a]
                    .iter()
                    .zip(&self.rows[b])
                    .map(|(x, y)| x.min(y).clone())
                    .sum();
                overlap_min = overlap_min.min(overlap);
            }
        }
        Rational::one() - overlap_min
    }
}

impl fmt::Debug for RowStochasticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

pub fn delta(m: &RowStochasticMatrix) -> Rational {
    m.delta()
}

pub fn lambda(m: &RowStochasticMatrix) -> Rational {
    m.lambda()
}

/// `A[b] A[b-1] ... A[a]` for `ms = [A[a], ..., A[b]]`.
pub fn backward_product(ms: &[RowStochasticMatrix]) -> Result<RowStochasticMatrix> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::usage("backward product of an empty list"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, next| next.multiply(&acc))
}

/// Binary matrix over the surviving processes of a reduced graph:
/// `H[i][j]` is set iff `i == j` or edge `(j, i)` survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityMatrix {
    /// Process id of each row/column, ascending.
    ids: Vec<ProcessId>,
    entries: Vec<Vec<bool>>,
}

impl ConnectivityMatrix {
    /// Rows indexed by processes `1..=n`; the diagonal must be set.
    pub fn from_rows(entries: Vec<Vec<bool>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::usage("connectivity matrix must be square"));
        }
        if (0..n).any(|i| !entries[i][i]) {
            return Err(Error::usage("connectivity matrix needs a non-zero diagonal"));
        }
        Ok(ConnectivityMatrix {
            ids: (1..=n).collect(),
            entries,
        })
    }

    pub fn size(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[ProcessId] {
        &self.ids
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.entries[i][j]
    }

    fn boolean_product(&self, rhs: &[Vec<bool>]) -> Vec<Vec<bool>> {
        let n = self.size();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|k| self.entries[i][k] && rhs[k][j]))
                    .collect()
            })
            .collect()
    }
}

pub fn connectivity_matrix(h: &ReducedGraph) -> ConnectivityMatrix {
    let ids: Vec<ProcessId> = h.vertices().iter().collect();
    let entries = ids
        .iter()
        .map(|&i| ids.iter().map(|&j| i == j || h.has_edge(j, i)).collect())
        .collect();
    ConnectivityMatrix { ids, entries }
}

/// Index (0-based, into [`ConnectivityMatrix::ids`]) of the first column of
/// `H^k` whose entries are all non-zero, over the boolean semiring.
pub fn nonzero_column_power(h: &ConnectivityMatrix, k: usize) -> Option<usize> {
    assert!(k >= 1, "power must be at least 1");
    let mut power = h.entries.clone();
    for _ in 1..k {
        power = h.boolean_product(&power);
    }
    (0..h.size()).find(|&j| power.iter().all(|row| row[j]))
}
