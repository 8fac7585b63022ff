use std::fmt;

use super::ProcessId;

/// A set of process ids in `1..=64`, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: ProcessId) -> Self {
        VertexSet(bit(v))
    }

    pub fn from_ids(ids: impl IntoIterator<Item = ProcessId>) -> Self {
        ids.into_iter().collect()
    }

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: ProcessId) -> bool {
        (1..=64).contains(&v) && self.0 & bit(v) != 0
    }

    pub fn insert(&mut self, v: ProcessId) {
        self.0 |= bit(v);
    }

    pub fn remove(&mut self, v: ProcessId) {
        self.0 &= !bit(v);
    }

    pub fn without(self, v: ProcessId) -> Self {
        VertexSet(self.0 & !bit(v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest id in the set.
    pub fn first(self) -> Option<ProcessId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Ids in ascending order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

fn bit(v: ProcessId) -> u64 {
    debug_assert!((1..=64).contains(&v), "process id {v} out of range");
    1u64 << (v - 1)
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = ProcessId;

    fn next(&mut self) -> Option<ProcessId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

impl IntoIterator for VertexSet {
    type Item = ProcessId;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<ProcessId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = ProcessId>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for VertexSet {
    type Err = String;

    /// Parses `{1,2,5}` (whitespace tolerated).
    fn from_str(s: &str) -> Result<Self, String> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| format!("expected {{...}}, got `{s}`"))?;
        let mut set = VertexSet::EMPTY;
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: usize = tok.parse().map_err(|_| format!("bad process id `{tok}`"))?;
            if !(1..=64).contains(&v) {
                return Err(format!("process id {v} out of range"));
            }
            set.insert(v);
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_ids([1, 3, 5]);
        let b = VertexSet::from_ids([3, 4]);
        assert_eq!(a.union(b), VertexSet::from_ids([1, 3, 4, 5]));
        assert_eq!(a.intersection(b), VertexSet::singleton(3));
        assert_eq!(a.difference(b), VertexSet::from_ids([1, 5]));
        assert_eq!(a.first(), Some(1));
        assert_eq!(VertexSet::EMPTY.first(), None);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(VertexSet::full(64).len(), 64);
        assert!(VertexSet::full(64).contains(64));
    }

    #[test]
    fn text_round_trip() {
        let a = VertexSet::from_ids([2, 7]);
        assert_eq!(a.to_string(), "{2,7}");
        assert_eq!("{2, 7}".parse::<VertexSet>().unwrap(), a);
        assert_eq!("{}".parse::<VertexSet>().unwrap(), VertexSet::EMPTY);
        assert!("2,7".parse::<VertexSet>().is_err());
    }
}
