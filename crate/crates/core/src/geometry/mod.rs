//! Exact rational geometry: convex-hull membership, common points of several
//! hulls, Tverberg partitions and convex-combination weights.
//!
//! Every point collection is a multiset: duplicated points occupy distinct
//! slots, and slot order is what the deterministic tie-breaks refer to.

pub mod lp;
mod partitions;
mod point;
mod tverberg;

use num::{One, Signed, Zero};

pub use partitions::SetPartitions;
pub use point::Point;
pub use tverberg::{tverberg_point, tverberg_point_fast, TverbergResult};

pub(crate) use point::check_dims;

use crate::{Error, Rational, Result};

/// Weights `alpha_i` expressing a point as a convex combination of a multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexWeights {
    pub weights: Vec<Rational>,
}

impl ConvexWeights {
    /// Checks `alpha_i in [0,1]`, `sum alpha_i = 1` and `sum alpha_i p_i = target`.
    pub fn represents(&self, target: &Point, points: &[Point]) -> bool {
        self.weights.len() == points.len()
            && self
                .weights
                .iter()
                .all(|w| !w.is_negative() && *w <= Rational::one())
            && self.weights.iter().sum::<Rational>() == Rational::one()
            && Point::combination(points, &self.weights) == *target
    }
}

fn dimension_of(points: &[Point]) -> Result<usize> {
    let first = points
        .first()
        .ok_or_else(|| Error::usage("point multiset must be non-empty"))?;
    check_dims(points, first.dim())?;
    Ok(first.dim())
}

/// Rows `sum_i alpha_i p_i[k] = q[k]` for every `k`, then `sum_i alpha_i = 1`.
fn membership_system(q: &Point, points: &[Point]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut a = Vec::with_capacity(q.dim() + 1);
    let mut b = Vec::with_capacity(q.dim() + 1);
    for k in 0..q.dim() {
        a.push(points.iter().map(|p| p.coord(k).clone()).collect());
        b.push(q.coord(k).clone());
    }
    a.push(vec![Rational::one(); points.len()]);
    b.push(Rational::one());
    (a, b)
}

/// Whether `q` lies in the convex hull of `points` (exact).
pub fn hull_membership(q: &Point, points: &[Point]) -> Result<bool> {
    let d = dimension_of(points)?;
    check_dims(std::slice::from_ref(q), d)?;
    if points.contains(q) {
        return Ok(true);
    }
    let (a, b) = membership_system(q, points);
    Ok(lp::find_feasible(&a, &b).is_some())
}

/// The lexicographically smallest convex weight vector for `q` over `points`.
pub fn convex_weights(q: &Point, points: &[Point]) -> Result<ConvexWeights> {
    let d = dimension_of(points)?;
    check_dims(std::slice::from_ref(q), d)?;
    let (a, b) = membership_system(q, points);
    let m = points.len();
    let objectives: Vec<Vec<Rational>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| Rational::from_integer(i64::from(i == j).into()))
                .collect()
        })
        .collect();
    match lp::lexicographic_minimum(&a, &b, &objectives) {
        lp::LpOutcome::Optimal(weights) => Ok(ConvexWeights { weights }),
        _ => Err(Error::Domain(format!("{q} is not in the convex hull"))),
    }
}

/// A point common to the hulls of all `parts`, or `None` if they do not meet.
///
/// The returned point is the lexicographically smallest point of the
/// intersection (coordinates minimised in order).
pub fn hulls_common_point(parts: &[Vec<Point>]) -> Result<Option<Point>> {
    if parts.is_empty() {
        return Err(Error::usage("need at least one part"));
    }
    let mut d = None;
    for part in parts {
        let pd = dimension_of(part)?;
        if *d.get_or_insert(pd) != pd {
            return Err(Error::usage("parts have different dimensions"));
        }
    }
    let d = d.expect("at least one part");

    // Variables: one weight per slot, parts concatenated.
    let offsets: Vec<usize> = parts
        .iter()
        .scan(0, |acc, p| {
            let start = *acc;
            *acc += p.len();
            Some(start)
        })
        .collect();
    let width: usize = parts.iter().map(Vec::len).sum();
    let zero_row = || vec![Rational::zero(); width];

    let mut a = Vec::new();
    let mut b = Vec::new();
    for (part, &off) in parts.iter().zip(&offsets) {
        let mut row = zero_row();
        for slot in row.iter_mut().skip(off).take(part.len()) {
            *slot = Rational::one();
        }
        a.push(row);
        b.push(Rational::one());
    }
    // sum_{part l} alpha p[k] - sum_{part 0} alpha p[k] = 0
    for (l, part) in parts.iter().enumerate().skip(1) {
        for k in 0..d {
            let mut row = zero_row();
            for (i, p) in parts[0].iter().enumerate() {
                row[i] = -p.coord(k).clone();
            }
            for (i, p) in part.iter().enumerate() {
                row[offsets[l] + i] += p.coord(k);
            }
            a.push(row);
            b.push(Rational::zero());
        }
    }
    let objectives: Vec<Vec<Rational>> = (0..d)
        .map(|k| {
            let mut row = zero_row();
            for (i, p) in parts[0].iter().enumerate() {
                row[i] = p.coord(k).clone();
            }
            row
        })
        .collect();

    Ok(match lp::lexicographic_minimum(&a, &b, &objectives) {
        lp::LpOutcome::Optimal(x) => Some(Point::combination(&parts[0], &x[..parts[0].len()])),
        _ => None,
    })
}
