/// Set partitions of `m` slots into exactly `k` non-empty blocks, as restricted
/// growth strings in lexicographic order: `labels[i]` is the block of slot `i`,
/// and blocks are numbered by their smallest slot.
#[derive(Clone, Debug)]
pub struct SetPartitions {
    m: usize,
    k: usize,
    current: Option<Vec<usize>>,
    started: bool,
}

impl SetPartitions {
    pub fn new(m: usize, k: usize) -> Self {
        let current = if k == 0 || k > m {
            None
        } else {
            // [0, .., 0, 1, 2, .., k-1]
            let mut labels = vec![0; m];
            for b in 1..k {
                labels[m - k + b] = b;
            }
            Some(labels)
        };
        SetPartitions {
            m,
            k,
            current,
            started: false,
        }
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return self.current.clone();
        }
        let labels = self.current.as_mut()?;
        // prefix maxima
        let mut prefix_max = vec![0; self.m];
        let mut running = 0;
        for (i, &l) in labels.iter().enumerate() {
            running = running.max(l);
            prefix_max[i] = running;
        }
        for i in (1..self.m).rev() {
            let bound = prefix_max[i - 1] + 1;
            if labels[i] + 1 > bound || labels[i] + 1 >= self.k {
                continue;
            }
            let new_max = prefix_max[i - 1].max(labels[i] + 1);
            let remaining = self.m - 1 - i;
            let needed = self.k - 1 - new_max;
            if needed > remaining {
                continue;
            }
            labels[i] += 1;
            for slot in labels.iter_mut().skip(i + 1) {
                *slot = 0;
            }
            for b in 0..needed {
                labels[self.m - needed + b] = new_max + 1 + b;
            }
            return Some(labels.clone());
        }
        self.current = None;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stirling2(m: usize, k: usize) -> usize {
        if m == 0 && k == 0 {
            return 1;
        }
        if m == 0 || k == 0 {
            return 0;
        }
        k * stirling2(m - 1, k) + stirling2(m - 1, k - 1)
    }

    #[test]
    fn counts_match_stirling_numbers() {
        for m in 1..=7 {
            for k in 1..=m {
                assert_eq!(SetPartitions::new(m, k).count(), stirling2(m, k), "m={m} k={k}");
            }
        }
        assert_eq!(SetPartitions::new(2, 3).count(), 0);
    }

    #[test]
    fn lexicographic_restricted_growth_order() {
        let all: Vec<_> = SetPartitions::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![0, 0, 1, 1],
                vec![0, 1, 0, 0],
                vec![0, 1, 0, 1],
                vec![0, 1, 1, 0],
                vec![0, 1, 1, 1],
            ]
        );
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(SetPartitions::new(3, 3).collect::<Vec<_>>(), vec![vec![0, 1, 2]]);
    }
}
