//! Helpers shared by the integration tests.

#![allow(dead_code)]

use byzvec::graph::Digraph;
use itertools::Itertools;
use rayon::prelude::*;

/// Directed pairs `(i, j)`, `i != j`, in the bit order used for codes.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// One representative per isomorphism class of digraphs on `n` vertices:
/// the labelled graphs whose edge code is minimal over all relabellings.
pub fn nonisomorphic_digraphs(n: usize) -> Vec<Digraph> {
    assert!((2..=6).contains(&n));
    let pairs = pairs(n);
    let bits = pairs.len();
    let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
    let chunks = bits.div_ceil(8);
    // tables[p][c][byte]: image of the bits of chunk `c` under permutation `p`
    let tables: Vec<Vec<[u64; 256]>> = (0..n)
        .permutations(n)
        .skip(1)
        .map(|perm| {
            (0..chunks)
                .map(|c| {
                    let mut table = [0u64; 256];
                    for (byte, slot) in table.iter_mut().enumerate() {
                        for b in 0..8 {
                            let bit = c * 8 + b;
                            if bit < bits && byte >> b & 1 == 1 {
                                let (i, j) = pairs[bit];
                                *slot |= 1 << index(perm[i], perm[j]);
                            }
                        }
                    }
                    table
                })
                .collect()
        })
        .collect();
    let codes: Vec<u64> = (0..1u64 << bits)
        .into_par_iter()
        .filter(|&code| {
            tables.iter().all(|t| {
                let image = t
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (c, table)| acc | table[(code >> (8 * c) & 0xff) as usize]);
                image >= code
            })
        })
        .collect();
    codes
        .into_iter()
        .map(|code| {
            let edges = (0..bits)
                .filter(|b| code >> b & 1 == 1)
                .map(|b| (pairs[b].0 + 1, pairs[b].1 + 1));
            Digraph::from_edges(n, edges).unwrap()
        })
        .collect()
}

/// Two disjoint copies of `K_k`.
pub fn two_cliques(k: usize) -> Digraph {
    let mut g = Digraph::new(2 * k).unwrap();
    for a in 1..=k {
        for b in 1..=k {
            if a != b {
                g.add_edge(a, b).unwrap();
                g.add_edge(a + k, b + k).unwrap();
            }
        }
    }
    g
}
