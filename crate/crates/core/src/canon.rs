//! Canonical forms of quivers up to relabelling.
//!
//! The key of a quiver is the lexicographically smallest encoding of its
//! exchange matrix over all vertex orders that respect an
//! isomorphism-invariant colouring. Colours come from iterated refinement
//! of `(in-degree, out-degree)` signatures. The search places vertices one
//! position at a time, prunes any prefix that is already worse than the best
//! complete encoding, and skips candidates that are twins of an already
//! explored candidate (swapping twins is an automorphism).

use std::collections::BTreeMap;

use crate::quiver::Quiver;

/// A total-order-comparable key; equal keys iff isomorphic quivers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    key: Vec<i32>,
}

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// The encoding: for each position `k`, the entries `b[p0][pk], ...,
    /// b[p(k-1)][pk]` of the relabelled exchange matrix.
    pub fn key(&self) -> &[i32] {
        &self.key
    }

    /// Rebuilds the canonically labelled quiver.
    pub fn to_quiver(&self) -> Quiver {
        let n = self.n;
        let mut rows = vec![vec![0; n]; n];
        let mut idx = 0;
        for k in 0..n {
            for i in 0..k {
                rows[i][k] = self.key[idx];
                rows[k][i] = -self.key[idx];
                idx += 1;
            }
        }
        Quiver::from_exchange_matrix(&rows).expect("canonical key encodes a valid quiver")
    }
}

/// Isomorphism-invariant vertex colours, as dense ranks.
fn refined_colours(q: &Quiver) -> Vec<usize> {
    let n = q.vertex_count();
    let mut colour: Vec<usize> = {
        let sigs: Vec<(u32, u32)> = (0..n).map(|v| (q.in_degree(v), q.out_degree(v))).collect();
        rank(&sigs)
    };
    loop {
        let sigs: Vec<(usize, Vec<(usize, i32)>)> = (0..n)
            .map(|v| {
                let mut around: Vec<(usize, i32)> = (0..n)
                    .filter(|&u| q.exchange(v, u) != 0)
                    .map(|u| (colour[u], q.exchange(v, u)))
                    .collect();
                around.sort_unstable();
                (colour[v], around)
            })
            .collect();
        let next = rank(&sigs);
        let before = colour.iter().max().map_or(0, |m| m + 1);
        let after = next.iter().max().map_or(0, |m| m + 1);
        colour = next;
        if after == before {
            return colour;
        }
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let distinct: BTreeMap<T, usize> = {
        let mut m: BTreeMap<T, usize> = sigs.iter().cloned().map(|s| (s, 0)).collect();
        for (i, v) in m.values_mut().enumerate() {
            *v = i;
        }
        m
    };
    sigs.iter().map(|s| distinct[s]).collect()
}

struct Search<'a> {
    q: &'a Quiver,
    slots: Vec<usize>,
    colour: Vec<usize>,
    placed: Vec<usize>,
    used: Vec<bool>,
    current: Vec<i32>,
    best: Option<Vec<i32>>,
}

impl Search<'_> {
    fn twins(&self, u: usize, v: usize) -> bool {
        let n = self.q.vertex_count();
        self.q.exchange(u, v) == 0
            && (0..n)
                .filter(|&w| w != u && w != v)
                .all(|w| self.q.exchange(u, w) == self.q.exchange(v, w))
    }

    fn run(&mut self) {
        let k = self.placed.len();
        if k == self.slots.len() {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        let n = self.q.vertex_count();
        let mut tried: Vec<usize> = Vec::new();
        for v in 0..n {
            if self.used[v] || self.slots[k] != self.colour[v] {
                continue;
            }
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let mark = self.current.len();
            for i in 0..k {
                self.current.push(self.q.exchange(self.placed[i], v));
            }
            let worse = self.best.as_ref().is_some_and(|b| self.current[..] > b[..self.current.len()]);
            if !worse {
                self.used[v] = true;
                self.placed.push(v);
                self.run();
                self.placed.pop();
                self.used[v] = false;
            }
            self.current.truncate(mark);
        }
    }
}

/// Computes the canonical form of `q`.
pub fn canonical_form(q: &Quiver) -> CanonicalForm {
    let n = q.vertex_count();
    let colour = refined_colours(q);
    let mut slots = colour.clone();
    slots.sort_unstable();
    let mut search = Search {
        q,
        slots,
        colour,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        current: Vec::with_capacity(n * n / 2),
        best: None,
    };
    search.run();
    CanonicalForm {
        n,
        key: search.best.unwrap_or_default(),
    }
}

pub fn is_isomorphic(a: &Quiver, b: &Quiver) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.total_arrows() == b.total_arrows()
        && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, arrows: &[(usize, usize)]) -> Quiver {
        Quiver::new(n, arrows).unwrap()
    }

    #[test]
    fn relabelled_paths_agree() {
        let a = q(3, &[(0, 1), (1, 2)]);
        let b = q(3, &[(2, 1), (1, 0)]);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert!(is_isomorphic(&a, &b));
    }

    #[test]
    fn distinguishes_small_quivers() {
        let sink_mid = q(3, &[(0, 1), (2, 1)]);
        let source_mid = q(3, &[(1, 0), (1, 2)]);
        assert_ne!(canonical_form(&sink_mid), canonical_form(&source_mid));
        assert!(!is_isomorphic(&sink_mid, &source_mid));
        let path = q(3, &[(0, 1), (1, 2)]);
        let tri = q(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_ne!(canonical_form(&path), canonical_form(&tri));
        assert!(!is_isomorphic(&tri, &path));
    }

    #[test]
    fn round_trips_through_canonical_quiver() {
        let a = q(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 3)]);
        let c = canonical_form(&a);
        assert!(is_isomorphic(&a, &c.to_quiver()));
        assert_eq!(canonical_form(&c.to_quiver()), c);
    }

    #[test]
    fn highly_symmetric_quivers_are_fast() {
        // empty and star quivers rely on twin pruning
        let e = Quiver::empty(12);
        assert_eq!(canonical_form(&e).key().len(), 66);
        let star: Vec<(usize, usize)> = (1..12).map(|v| (0, v)).collect();
        let s = q(12, &star);
        let relabelled = s.permuted(&[11, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert!(is_isomorphic(&s, &relabelled));
    }
}
