//! Tverberg partitions and points.

use num::{Signed, Zero};

use super::{check_dims, hulls_common_point, Point, SetPartitions};
use crate::{Error, Rational, Result};

/// A Tverberg partition of a multiset together with a point common to the
/// hulls of all its parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TverbergResult {
    pub point: Point,
    /// The `f+1` parts, as points.
    pub partition: Vec<Vec<Point>>,
    /// The same parts as slot indices into the input multiset.
    pub slots: Vec<Vec<usize>>,
}

fn check_input(points: &[Point], f: usize) -> Result<usize> {
    let d = points
        .first()
        .ok_or_else(|| Error::usage("Tverberg search needs at least one point"))?
        .dim();
    check_dims(points, d)?;
    let needed = (d + 1) * f + 1;
    if points.len() < needed {
        return Err(Error::usage(format!(
            "{} points in dimension {d} cannot be split into {} parts with a common point; \
             need at least (d+1)f+1 = {needed}",
            points.len(),
            f + 1
        )));
    }
    Ok(d)
}

/// First partition of `points` into `f+1` non-empty parts (restricted growth
/// order over slots) whose hulls intersect, with the lexicographically
/// smallest common point.
pub fn tverberg_point(points: &[Point], f: usize) -> Result<TverbergResult> {
    check_input(points, f)?;
    for labels in SetPartitions::new(points.len(), f + 1) {
        let mut slots = vec![Vec::new(); f + 1];
        for (slot, &label) in labels.iter().enumerate() {
            slots[label].push(slot);
        }
        let partition: Vec<Vec<Point>> = slots
            .iter()
            .map(|part| part.iter().map(|&i| points[i].clone()).collect())
            .collect();
        if let Some(point) = hulls_common_point(&partition)? {
            return Ok(TverbergResult {
                point,
                partition,
                slots,
            });
        }
    }
    // Tverberg's theorem rules this out whenever check_input passed.
    Err(Error::Domain(
        "no Tverberg partition found; input violates the theorem's hypothesis".into(),
    ))
}

/// The point [`tverberg_point`] would return, computed through closed forms
/// where they provably coincide with the search:
///
/// * `f = 0`: the single point;
/// * `d = 1` with `2f+1` points: the median (every valid partition's hulls
///   meet exactly there);
/// * `f = 1` with `d+2` points whose affine dependence is unique and has no
///   zero coefficient: the Radon point (the only Tverberg partition, and its
///   hulls meet in one point).
///
/// Anything else falls back to the full search.
pub fn tverberg_point_fast(points: &[Point], f: usize) -> Result<Point> {
    let d = check_input(points, f)?;
    let exact_size = points.len() == (d + 1) * f + 1;
    if exact_size && f == 0 {
        return Ok(points[0].clone());
    }
    if exact_size && d == 1 {
        let mut values: Vec<&Rational> = points.iter().map(|p| p.coord(0)).collect();
        values.sort();
        return Point::new(vec![values[f].clone()]);
    }
    if exact_size && f == 1 {
        if let Some(p) = radon_point(points) {
            return Ok(p);
        }
    }
    tverberg_point(points, f).map(|r| r.point)
}

/// Radon point of `d+2` points in general position, `None` if degenerate.
fn radon_point(points: &[Point]) -> Option<Point> {
    let d = points[0].dim();
    let m = points.len();
    debug_assert_eq!(m, d + 2);
    // Homogeneous system: sum lambda_i p_i = 0, sum lambda_i = 0.
    let mut rows: Vec<Vec<Rational>> = (0..d)
        .map(|k| points.iter().map(|p| p.coord(k).clone()).collect())
        .collect();
    rows.push(vec![Rational::from_integer(1.into()); m]);

    let mut pivot_cols = Vec::with_capacity(d + 1);
    let mut r = 0;
    for col in 0..m {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let p = rows[r][col].clone();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if pivot_cols.len() != d + 1 {
        return None;
    }
    let free = (0..m).find(|c| !pivot_cols.contains(c))?;
    let mut lambda = vec![Rational::zero(); m];
    lambda[free] = Rational::from_integer(1.into());
    for (row, &col) in rows.iter().zip(&pivot_cols) {
        lambda[col] = -row[free].clone();
    }
    if lambda.iter().any(Zero::is_zero) {
        return None;
    }
    let positive: Vec<usize> = (0..m).filter(|&i| lambda[i].is_positive()).collect();
    let total: Rational = positive.iter().map(|&i| lambda[i].clone()).sum();
    let weights: Vec<Rational> = positive.iter().map(|&i| &lambda[i] / &total).collect();
    let chosen: Vec<Point> = positive.iter().map(|&i| points[i].clone()).collect();
    Some(Point::combination(&chosen, &weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull_membership;
    use proptest::prelude::*;

    fn pts(v: &[&[i64]]) -> Vec<Point> {
        v.iter().map(|c| Point::from_integers(c)).collect()
    }

    #[test]
    fn single_point_for_no_faults() {
        let y = pts(&[&[3, -1]]);
        let r = tverberg_point(&y, 0).unwrap();
        assert_eq!(r.point, y[0]);
        assert_eq!(r.partition, vec![y.clone()]);
    }

    #[test]
    fn median_in_one_dimension() {
        let y = pts(&[&[0], &[1], &[2]]);
        let r = tverberg_point(&y, 1).unwrap();
        assert_eq!(r.point, Point::from_integers(&[1]));
        assert_eq!(r.partition, vec![pts(&[&[0], &[2]]), pts(&[&[1]])]);
        assert_eq!(r.slots, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn interior_point_in_the_plane() {
        let y = pts(&[&[0, 0], &[4, 0], &[0, 4], &[1, 1]]);
        let r = tverberg_point(&y, 1).unwrap();
        assert_eq!(r.point, Point::from_integers(&[1, 1]));
        assert_eq!(r.partition, vec![pts(&[&[0, 0], &[4, 0], &[0, 4]]), pts(&[&[1, 1]])]);
    }

    #[test]
    fn crossing_diagonals() {
        let y = pts(&[&[0, 0], &[2, 2], &[2, 0], &[0, 2]]);
        let r = tverberg_point(&y, 1).unwrap();
        assert_eq!(r.point, Point::from_integers(&[1, 1]));
        assert_eq!(r.slots, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(tverberg_point_fast(&y, 1).unwrap(), r.point);
    }

    #[test]
    fn too_few_points_is_a_usage_error() {
        let y = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(tverberg_point(&y, 1), Err(Error::Usage(_))));
        assert!(matches!(tverberg_point_fast(&y, 1), Err(Error::Usage(_))));
    }

    fn arb_multiset(d: usize, len: usize) -> impl Strategy<Value = Vec<Point>> {
        proptest::collection::vec(
            proptest::collection::vec(-3i64..=3, d).prop_map(|c| Point::from_integers(&c)),
            len,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn fast_path_matches_search((f, y) in prop_oneof![
            arb_multiset(1, 3).prop_map(|y| (1usize, y)),
            arb_multiset(1, 5).prop_map(|y| (2usize, y)),
            arb_multiset(2, 4).prop_map(|y| (1usize, y)),
            arb_multiset(3, 5).prop_map(|y| (1usize, y)),
            arb_multiset(2, 1).prop_map(|y| (0usize, y)),
        ]) {
            let full = tverberg_point(&y, f).unwrap();
            prop_assert_eq!(tverberg_point_fast(&y, f).unwrap(), full.point.clone());
            for part in &full.partition {
                prop_assert!(hull_membership(&full.point, part).unwrap());
            }
        }
    }
}
