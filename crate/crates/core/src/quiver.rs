//! Quivers as skew-symmetric integer exchange matrices, together with
//! Fomin–Zelevinsky mutation and the structural queries the rest of the
//! crate is built on.
//!
//! A quiver on `n` vertices is stored as the `n × n` matrix `b` with
//! `b[u][v] = #(u -> v) - #(v -> u)`. Since a valid quiver has neither
//! loops nor 2-cycles, this loses no information: at most one of the two
//! arrow counts is nonzero.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// A finite quiver without loops and without 2-cycles.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    b: Vec<i32>,
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quiver")
            .field("n", &self.n)
            .field("arrows", &self.arrows())
            .finish()
    }
}

impl Quiver {
    /// Builds a quiver from a vertex count and a list of arrows, rejecting
    /// out-of-range labels, loops and 2-cycles.
    pub fn new(vertex_count: usize, arrows: &[(usize, usize)]) -> Result<Self> {
        for &(s, t) in arrows {
            for label in [s, t] {
                if label >= vertex_count {
                    return Err(Error::BadVertexLabel {
                        label,
                        vertex_count,
                    });
                }
            }
        }
        if let Some(&(s, _)) = arrows.iter().find(|(s, t)| s == t) {
            return Err(Error::LoopArrow(s));
        }
        let mut q = Quiver::empty(vertex_count);
        for &(s, t) in arrows {
            if q.get(t, s) > 0 {
                return Err(Error::TwoCycle(s, t));
            }
            q.add_arrows(s, t, 1);
        }
        Ok(q)
    }

    /// The quiver with `n` vertices and no arrows.
    pub fn empty(n: usize) -> Self {
        Quiver {
            n,
            b: vec![0; n * n],
        }
    }

    /// The linearly oriented path `0 -> 1 -> ... -> n-1`.
    pub fn linear_a(n: usize) -> Self {
        let mut q = Quiver::empty(n);
        for v in 1..n {
            q.add_arrows(v - 1, v, 1);
        }
        q
    }

    /// Builds a quiver directly from an exchange matrix given row by row.
    ///
    /// The matrix must be skew-symmetric with zero diagonal.
    pub fn from_exchange_matrix(rows: &[Vec<i32>]) -> Result<Self> {
        let n = rows.len();
        let mut q = Quiver::empty(n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::PreconditionViolated(format!(
                    "row {u} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (v, &x) in row.iter().enumerate() {
                if u == v && x != 0 {
                    return Err(Error::LoopArrow(u));
                }
                if rows[v][u] != -x {
                    return Err(Error::PreconditionViolated(format!(
                        "exchange matrix is not skew-symmetric at ({u}, {v})"
                    )));
                }
                q.b[u * n + v] = x;
            }
        }
        Ok(q)
    }

    #[inline]
    fn get(&self, u: usize, v: usize) -> i32 {
        self.b[u * self.n + v]
    }

    fn add_arrows(&mut self, u: usize, v: usize, k: i32) {
        let n = self.n;
        self.b[u * n + v] += k;
        self.b[v * n + u] -= k;
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Signed exchange-matrix entry `#(u -> v) - #(v -> u)`.
    pub fn exchange(&self, u: usize, v: usize) -> i32 {
        self.get(u, v)
    }

    /// Number of arrows `u -> v`.
    pub fn arrow_count(&self, u: usize, v: usize) -> u32 {
        self.get(u, v).max(0) as u32
    }

    pub fn has_arrow(&self, u: usize, v: usize) -> bool {
        self.get(u, v) > 0
    }

    pub fn total_arrows(&self) -> usize {
        self.b.iter().filter(|&&x| x > 0).map(|&x| x as usize).sum()
    }

    /// All arrows with multiplicity, sorted by `(source, target)`.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                for _ in 0..self.arrow_count(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::BadVertexLabel {
                label: v,
                vertex_count: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Mutation at `v`. The mutated vertex keeps its label.
    pub fn mutate(&self, v: usize) -> Result<Quiver> {
        self.check(v)?;
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                if i == v || j == v {
                    out.b[i * n + j] = -self.get(i, j);
                } else {
                    let biv = self.get(i, v);
                    let bvj = self.get(v, j);
                    // b'_ij = b_ij + (|b_iv| b_vj + b_iv |b_vj|) / 2
                    out.b[i * n + j] =
                        self.get(i, j) + (biv.abs() * bvj + biv * bvj.abs()) / 2;
                }
            }
        }
        Ok(out)
    }

    /// Distinct neighbouring vertices of `v`, ascending.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.get(v, u) != 0).collect()
    }

    /// Number of distinct neighbours of `v`.
    pub fn valency(&self, v: usize) -> Result<usize> {
        self.check(v)?;
        Ok(self.neighbours(v).len())
    }

    /// True if every arrow at `v` ends in `v`. Isolated vertices count as
    /// both sinks and sources.
    pub fn is_sink(&self, v: usize) -> Result<bool> {
        self.check(v)?;
        Ok((0..self.n).all(|u| self.get(v, u) <= 0))
    }

    pub fn is_source(&self, v: usize) -> Result<bool> {
        self.check(v)?;
        Ok((0..self.n).all(|u| self.get(v, u) >= 0))
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        (0..self.n).map(|u| self.arrow_count(u, v)).sum()
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        (0..self.n).map(|u| self.arrow_count(v, u)).sum()
    }

    /// Oriented triangles, each reported once as its sorted vertex support.
    pub fn directed_3cycles(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let bij = self.get(i, j);
                if bij == 0 {
                    continue;
                }
                for k in j + 1..n {
                    let bjk = self.get(j, k);
                    let bki = self.get(k, i);
                    if (bij > 0 && bjk > 0 && bki > 0) || (bij < 0 && bjk < 0 && bki < 0) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Connectivity of the underlying graph. The empty quiver is connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for w in self.neighbours(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Quiver {
        assert_eq!(perm.len(), self.n);
        let mut out = Quiver::empty(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                out.b[perm[u] * self.n + perm[v]] = self.get(u, v);
            }
        }
        out
    }

    /// Induced subquiver on `keep`, relabelled `0..keep.len()` in the given
    /// order.
    pub fn induced(&self, keep: &[usize]) -> Quiver {
        let m = keep.len();
        let mut out = Quiver::empty(m);
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate() {
                out.b[i * m + j] = self.get(u, v);
            }
        }
        out
    }

    /// Appends `k` isolated vertices, labelled `n..n+k`.
    pub fn with_extra_vertices(&self, k: usize) -> Quiver {
        let m = self.n + k;
        let mut out = Quiver::empty(m);
        for u in 0..self.n {
            for v in 0..self.n {
                out.b[u * m + v] = self.get(u, v);
            }
        }
        out
    }

    /// Adds one arrow `u -> v`; fails if it would create a loop or 2-cycle.
    pub fn with_arrow(&self, u: usize, v: usize) -> Result<Quiver> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(Error::LoopArrow(u));
        }
        if self.get(v, u) > 0 {
            return Err(Error::TwoCycle(u, v));
        }
        let mut out = self.clone();
        out.add_arrows(u, v, 1);
        Ok(out)
    }

    /// Vertices reachable from `start` in the underlying graph without
    /// entering any vertex of `blocked`.
    pub(crate) fn component_avoiding(&self, start: usize, blocked: &[usize]) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbours(u) {
                if !blocked.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Breadth-first distances in the underlying graph from a set of
    /// sources; unreachable vertices get `usize::MAX`.
    pub(crate) fn distances_from(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for w in self.neighbours(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// A start quiver and the mutations applied to it, each with the quiver it
/// produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationSequence {
    start: Quiver,
    steps: Vec<(usize, Quiver)>,
}

impl MutationSequence {
    pub fn new(start: Quiver) -> Self {
        MutationSequence {
            start,
            steps: Vec::new(),
        }
    }

    /// Replays `vertices` from `start`.
    pub fn replay(start: Quiver, vertices: &[usize]) -> Result<Self> {
        let mut seq = MutationSequence::new(start);
        for &v in vertices {
            seq.push(v)?;
        }
        Ok(seq)
    }

    /// Builds a sequence from explicitly supplied steps without replaying
    /// them. Use [`crate::normalform::verify_sequence`] to check it.
    pub fn from_parts(start: Quiver, steps: Vec<(usize, Quiver)>) -> Self {
        MutationSequence { start, steps }
    }

    /// Mutates the current end quiver at `v` and records the step.
    pub fn push(&mut self, v: usize) -> Result<&Quiver> {
        let next = self.end().mutate(v)?;
        self.steps.push((v, next));
        Ok(&self.steps.last().unwrap().1)
    }

    pub fn start(&self) -> &Quiver {
        &self.start
    }

    pub fn steps(&self) -> &[(usize, Quiver)] {
        &self.steps
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.steps.iter().map(|(v, _)| *v).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The last quiver of the sequence (the start quiver when empty).
    pub fn end(&self) -> &Quiver {
        self.steps.last().map(|(_, q)| q).unwrap_or(&self.start)
    }

    /// True if every recorded quiver equals the mutation of its predecessor.
    pub fn is_consistent(&self) -> bool {
        let mut cur = &self.start;
        for (v, q) in &self.steps {
            match cur.mutate(*v) {
                Ok(next) if &next == q => cur = q,
                _ => return false,
            }
        }
        true
    }
}
