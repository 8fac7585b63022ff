use std::fmt;
use std::str::FromStr;

use num::{One, Zero};

use crate::rational::{format_rational, parse_rational, Rational};
use crate::{Error, Result};

/// A point of `Q^d` (also a process state or input).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::usage("points need at least one coordinate"));
        }
        Ok(Point(coords))
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
            .expect("non-empty coordinate list")
    }

    /// The origin `e_0`.
    pub fn origin(d: usize) -> Self {
        Point(vec![Rational::zero(); d])
    }

    /// `e_i` scaled: coordinate `i` (1-based) equals `value`, others 0.
    pub fn axis(d: usize, i: usize, value: Rational) -> Self {
        assert!((1..=d).contains(&i), "axis index {i} outside 1..={d}");
        let mut coords = vec![Rational::zero(); d];
        coords[i - 1] = value;
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn coord(&self, k: usize) -> &Rational {
        &self.0[k]
    }

    /// Barycentre of a non-empty collection of equal-dimension points.
    pub fn mean<'a>(points: impl IntoIterator<Item = &'a Point>) -> Point {
        let mut iter = points.into_iter();
        let first = iter.next().expect("mean of an empty point set");
        let mut sum = first.0.clone();
        let mut count = Rational::one();
        for p in iter {
            for (s, c) in sum.iter_mut().zip(&p.0) {
                *s += c;
            }
            count += Rational::one();
        }
        Point(sum.into_iter().map(|s| s / &count).collect())
    }

    /// `sum_i weights[i] * points[i]`.
    pub fn combination(points: &[Point], weights: &[Rational]) -> Point {
        let d = points[0].dim();
        let mut out = vec![Rational::zero(); d];
        for (p, w) in points.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(&p.0) {
                *o += w * c;
            }
        }
        Point(out)
    }

    /// Largest bit length among numerators and denominators; a size measure.
    pub fn bit_size(&self) -> u64 {
        self.0
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn check_dims(points: &[Point], d: usize) -> Result<()> {
    match points.iter().find(|p| p.dim() != d) {
        Some(p) => Err(Error::usage(format!(
            "dimension mismatch: expected {d}, got {} for {p}",
            p.dim()
        ))),
        None => Ok(()),
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(c))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Point {
    type Err = Error;

    /// `(a/b, c, -d.e)`; a bare scalar `x` is accepted as a 1-d point.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = match s.strip_prefix('(') {
            Some(rest) => rest
                .strip_suffix(')')
                .ok_or_else(|| Error::usage(format!("unbalanced point literal `{s}`")))?,
            None => s,
        };
        let coords = inner
            .split(',')
            .map(|tok| {
                parse_rational(tok)
                    .ok_or_else(|| Error::usage(format!("bad coordinate `{}` in `{s}`", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Point::new(coords)
    }
}
