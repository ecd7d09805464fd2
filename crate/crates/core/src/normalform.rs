//! Reduction of class members to a canonical `(n, t)` quiver using only
//! mutations that keep the number of 3-cycles fixed: at sinks, sources,
//! and vertices of valency three or four.
//!
//! Three local moves do all the work on a class member:
//!
//! * *slide*: at a valency-3 vertex `v` on 3-cycle `{v, a, b}` with a free
//!   arrow to `w`, mutation yields a 3-cycle through `v` and `w`; the in- or
//!   out-neighbour of `v` on the old cycle (depending on whether the free
//!   arrow enters or leaves `v`) is left hanging off `v`.
//! * *swap*: at a valency-4 vertex the two 3-cycles exchange partners; the
//!   in-neighbour on one cycle pairs with the out-neighbour on the other.
//! * *reflection*: at a sink or source, arrows reverse.
//!
//! The normal form is a chain of `t` 3-cycles, consecutive ones sharing one
//! vertex, with a path of `n - 2t - 1` vertices hanging off the first cycle:
//!
//! ```text
//! 0 -> 1 -> ... -> m-1 -> z1,   zi -> xi -> yi -> zi,   yi = z(i+1)
//! ```
//!
//! with `m = n - 2t - 1`, `z1 = m`, `xi = zi + 1`, `yi = zi + 2`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::canon::{canonical_form, is_isomorphic, CanonicalForm};
use crate::error::{Error, Result};
use crate::quiver::{MutationSequence, Quiver};
use crate::type_a::{count_3cycles, cycles_at, is_in_qn, ClassSignature};

fn require_member(q: &Quiver) -> Result<()> {
    let report = is_in_qn(q);
    if report.member {
        Ok(())
    } else {
        Err(Error::NotInClass(Box::new(report)))
    }
}

/// Sinks, sources, and vertices of valency 3 or 4.
pub fn allowed_mutation_vertices(q: &Quiver) -> Result<BTreeSet<usize>> {
    require_member(q)?;
    Ok(allowed_unchecked(q))
}

fn allowed_unchecked(q: &Quiver) -> BTreeSet<usize> {
    (0..q.vertex_count())
        .filter(|&v| {
            let val = q.neighbours(v).len();
            val == 3 || val == 4 || q.is_sink(v).unwrap() || q.is_source(v).unwrap()
        })
        .collect()
}

/// Whether mutating at `v` keeps the number of 3-cycles.
pub fn preserves_signature(q: &Quiver, v: usize) -> Result<bool> {
    require_member(q)?;
    Ok(count_3cycles(&q.mutate(v)?) == count_3cycles(q))
}

/// Length of the shortest path in the underlying graph between two
/// distinct 3-cycles; zero exactly when they share a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleDistance(pub usize);

pub fn cycle_distance(q: &Quiver, a: &[usize; 3], b: &[usize; 3]) -> CycleDistance {
    let dist = q.distances_from(a);
    CycleDistance(b.iter().map(|&v| dist[v]).min().unwrap())
}

/// A totally ordered subset `C1, ..., Cs` of the 3-cycles of a quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedCycleSequence {
    pub cycles: Vec<[usize; 3]>,
}

/// Builds the ordered cycle sequence: `C1` is a 3-cycle attached to the
/// other 3-cycles through at most one of its vertices, `C2` is nearest to
/// `C1`, `C3` is nearest to `C2` among the rest, and every later `C(i+1)`
/// is nearest to `Ci` among cycles strictly closer to `Ci` than to every
/// earlier member. Ties go to the lexicographically smallest vertex triple.
pub fn ordered_cycle_sequence(q: &Quiver) -> OrderedCycleSequence {
    let cycles = q.directed_3cycles();
    if cycles.is_empty() {
        return OrderedCycleSequence { cycles };
    }
    let touches_other = |c: &[usize; 3], u: usize| {
        let blocked: Vec<usize> = c.iter().copied().filter(|&x| x != u).collect();
        let branch = q.component_avoiding(u, &blocked);
        cycles
            .iter()
            .any(|d| d != c && d.iter().any(|x| branch.contains(x)))
    };
    let first = *cycles
        .iter()
        .find(|c| c.iter().filter(|&&u| touches_other(c, u)).count() <= 1)
        .expect("a class member always has a leaf 3-cycle");
    let mut seq = vec![first];
    let dist = |a: &[usize; 3], b: &[usize; 3]| cycle_distance(q, a, b);
    let pick = |from: &[usize; 3], cands: Vec<[usize; 3]>| {
        cands.into_iter().min_by_key(|c| (dist(from, c), *c))
    };
    let rest = |seq: &[[usize; 3]]| -> Vec<[usize; 3]> {
        cycles.iter().filter(|c| !seq.contains(c)).copied().collect()
    };
    for _ in 0..2 {
        let last = *seq.last().unwrap();
        match pick(&last, rest(&seq)) {
            Some(c) => seq.push(c),
            None => return OrderedCycleSequence { cycles: seq },
        }
    }
    loop {
        let i = seq.len() - 1;
        let cur = seq[i];
        let cands: Vec<[usize; 3]> = rest(&seq)
            .into_iter()
            .filter(|c| seq[..i].iter().all(|e| dist(&cur, c) < dist(e, c)))
            .collect();
        match pick(&cur, cands) {
            Some(c) => seq.push(c),
            None => return OrderedCycleSequence { cycles: seq },
        }
    }
}

/// The canonical quiver of a signature (see the module documentation).
pub fn normal_form_target(sig: ClassSignature) -> Result<Quiver> {
    let ClassSignature { n, t } = sig;
    if n == 0 || 2 * t + 1 > n {
        return Err(Error::InfeasibleSignature { n, t });
    }
    let mut arrows = Vec::new();
    if t == 0 {
        arrows.extend((1..n).map(|v| (v - 1, v)));
    } else {
        let m = n - 2 * t - 1;
        arrows.extend((1..=m).map(|v| (v - 1, v)));
        for i in 0..t {
            let z = m + 2 * i;
            arrows.extend([(z, z + 1), (z + 1, z + 2), (z + 2, z)]);
        }
    }
    Quiver::new(n, &arrows)
}

/// A 3-cycle of the chain being assembled. `left` is shared with the
/// previous cycle (or is a free end), `right` with the next one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Link {
    left: usize,
    apex: usize,
    right: usize,
}

struct Reducer {
    seq: MutationSequence,
    chain: Vec<Link>,
}

impl Reducer {
    fn q(&self) -> &Quiver {
        self.seq.end()
    }

    fn mutate(&mut self, v: usize) {
        debug_assert!(allowed_unchecked(self.q()).contains(&v), "disallowed mutation at {v}");
        self.seq.push(v).expect("vertex label in range");
    }

    /// The 3-cycle through `a` and `b`, as its third vertex.
    fn third(&self, a: usize, b: usize) -> usize {
        let cycles = self.q().directed_3cycles();
        let c = cycles
            .iter()
            .find(|c| c.contains(&a) && c.contains(&b))
            .expect("vertices share a 3-cycle");
        *c.iter().find(|&&x| x != a && x != b).unwrap()
    }

    fn chain_vertices(&self) -> Vec<usize> {
        self.chain.iter().flat_map(|l| [l.left, l.apex, l.right]).collect()
    }

    fn in_chain(&self, c: &[usize; 3]) -> bool {
        self.chain.iter().any(|l| {
            let mut s = [l.left, l.apex, l.right];
            s.sort_unstable();
            &s == c
        })
    }

    /// Walks the path hanging off `anchor` through `first`.
    fn hanging_path(&self, anchor: usize, first: usize) -> Vec<usize> {
        let mut path = vec![anchor, first];
        loop {
            let n = path.len();
            let (prev, cur) = (path[n - 2], path[n - 1]);
            match self.q().neighbours(cur).into_iter().find(|&w| w != prev) {
                Some(w) => path.push(w),
                None => return path,
            }
        }
    }

    /// Orients edge `j` of a path whose vertices after the anchor are all
    /// off every 3-cycle, using reflections at path vertices beyond edge
    /// `j` only. `toward_anchor` asks for `path[j+1] -> path[j]`.
    fn set_edge(&mut self, path: &[usize], j: usize, toward_anchor: bool) {
        let (u, w) = (path[j], path[j + 1]);
        let cur = self.q().has_arrow(w, u);
        if cur == toward_anchor {
            return;
        }
        if j + 2 < path.len() {
            self.set_edge(path, j + 1, !cur);
        }
        self.mutate(w);
    }

    /// Grows the chain until it contains every 3-cycle. The nearest
    /// off-chain cycle is slid towards the chain one arrow at a time; once
    /// it touches the chain it is prepended, appended, or swapped in at an
    /// apex.
    fn gather(&mut self, seed: [usize; 3]) {
        self.chain = vec![Link {
            left: seed[0],
            apex: seed[1],
            right: seed[2],
        }];
        loop {
            let off: Vec<[usize; 3]> = self
                .q()
                .directed_3cycles()
                .into_iter()
                .filter(|c| !self.in_chain(c))
                .collect();
            if off.is_empty() {
                return;
            }
            let dist = self.q().distances_from(&self.chain_vertices());
            let (d, cyc) = off
                .iter()
                .flat_map(|c| c.iter().map(move |&v| (v, *c)))
                .min_by_key(|&(v, c)| (dist[v], c, v))
                .unwrap();
            if dist[d] > 0 {
                self.mutate(d);
                continue;
            }
            let others: Vec<usize> = cyc.iter().copied().filter(|&x| x != d).collect();
            let last = self.chain.len() - 1;
            if self.chain[0].left == d {
                self.chain.insert(
                    0,
                    Link {
                        left: others[0],
                        apex: others[1],
                        right: d,
                    },
                );
            } else if self.chain[last].right == d {
                self.chain.push(Link {
                    left: d,
                    apex: others[0],
                    right: others[1],
                });
            } else {
                let i = self.chain.iter().position(|l| l.apex == d).expect("port is an apex");
                let Link { left, right, .. } = self.chain[i];
                self.mutate(d);
                let p = self.third(d, left);
                let r = self.third(d, right);
                self.chain[i] = Link { left, apex: p, right: d };
                self.chain.insert(i + 1, Link { left: d, apex: r, right });
            }
        }
    }

    /// Moves everything hanging off the apex of link `i` to the free end of
    /// the first link, one vertex at a time.
    fn empty_apex(&mut self, i: usize) {
        loop {
            let Link { left: z, apex: x, right: y } = self.chain[i];
            let Some(w) = self.q().neighbours(x).into_iter().find(|&u| u != z && u != y) else {
                return;
            };
            let path = self.hanging_path(x, w);
            // the slide at x detaches z when the free arrow has the same
            // direction relative to x as the arrow between z and x
            let z_in = self.q().has_arrow(z, x);
            self.set_edge(&path, 0, z_in);
            self.mutate(x);
            debug_assert_eq!(self.third(x, w), y);
            self.chain[i] = Link { left: x, apex: w, right: y };
            if i > 0 {
                self.compress(i - 1, z, x);
            }
        }
    }

    /// Link `j` ends at `z`, which is joined by a single arrow to `x`, the
    /// left end of link `j + 1`. Slides link `j` onto `x`, propagating to the
    /// left while the slide detaches the left end.
    fn compress(&mut self, mut j: usize, mut z: usize, mut x: usize) {
        loop {
            let Link { left: l, apex: p, .. } = self.chain[j];
            self.mutate(z);
            let k = self.third(z, x);
            if k == l {
                self.chain[j] = Link { left: l, apex: z, right: x };
                return;
            }
            debug_assert_eq!(k, p);
            self.chain[j] = Link { left: z, apex: p, right: x };
            if j == 0 {
                return;
            }
            j -= 1;
            x = z;
            z = l;
        }
    }

    fn forward(&self, i: usize) -> bool {
        let l = self.chain[i];
        self.q().has_arrow(l.left, l.right)
    }

    fn fix_last(&mut self) {
        let s = self.chain.len() - 1;
        if self.forward(s) {
            let l = &mut self.chain[s];
            std::mem::swap(&mut l.apex, &mut l.right);
        }
    }

    /// Makes every link point backwards (`right -> left`).
    fn orient_links(&mut self, has_tail: bool) {
        self.fix_last();
        if !has_tail && self.forward(0) {
            let l = &mut self.chain[0];
            std::mem::swap(&mut l.apex, &mut l.left);
        }
        let s = self.chain.len();
        for i in (0..s.saturating_sub(1)).rev() {
            if !self.forward(i) {
                continue;
            }
            for j in i..s - 1 {
                let v = self.chain[j].right;
                let (left, right) = (self.chain[j].left, self.chain[j + 1].right);
                self.mutate(v);
                let p = self.third(v, left);
                let r = self.third(v, right);
                self.chain[j] = Link { left, apex: p, right: v };
                self.chain[j + 1] = Link { left: v, apex: r, right };
                debug_assert!(!self.forward(j));
                if j + 1 == s - 1 {
                    self.fix_last();
                }
            }
        }
    }

    fn orient_path(&mut self, path: &[usize], toward_anchor: bool) {
        for j in 0..path.len().saturating_sub(1) {
            self.set_edge(path, j, toward_anchor);
        }
    }
}

/// Reduces a class member to a quiver isomorphic to
/// [`normal_form_target`] of its signature, using only signature-preserving
/// mutations at allowed vertices.
pub fn reduce_to_normal_form(q: &Quiver) -> Result<MutationSequence> {
    require_member(q)?;
    let sig = ClassSignature::of(q);
    let target = normal_form_target(sig)?;
    let mut r = Reducer {
        seq: MutationSequence::new(q.clone()),
        chain: Vec::new(),
    };
    if is_isomorphic(q, &target) {
        return Ok(r.seq);
    }
    if sig.t == 0 {
        // a path: orient it away from one end
        let start = (0..sig.n).find(|&v| q.neighbours(v).len() <= 1).unwrap();
        if let Some(&first) = q.neighbours(start).first() {
            let path = r.hanging_path(start, first);
            r.orient_path(&path, false);
        }
        return Ok(r.seq);
    }
    let seed = ordered_cycle_sequence(q).cycles[0];
    r.gather(seed);
    let s = r.chain.len();
    for i in (0..s).rev() {
        r.empty_apex(i);
        if i == s - 1 {
            let l = &mut r.chain[i];
            std::mem::swap(&mut l.apex, &mut l.right);
            r.empty_apex(i);
        }
    }
    let z1 = r.chain[0].left;
    let tail = r
        .q()
        .neighbours(z1)
        .into_iter()
        .find(|&u| u != r.chain[0].apex && u != r.chain[0].right);
    if let Some(p1) = tail {
        let path = r.hanging_path(z1, p1);
        r.orient_path(&path, true);
    }
    r.orient_links(tail.is_some());
    Ok(r.seq)
}

/// Outcome of replaying a mutation sequence under the class rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceCheck {
    pub valid: bool,
    /// Index of the first failing step (`None` if the start quiver itself
    /// is rejected or everything passes) and the reason.
    pub failure: Option<(Option<usize>, String)>,
}

impl SequenceCheck {
    fn fail(step: Option<usize>, why: String) -> Self {
        SequenceCheck {
            valid: false,
            failure: Some((step, why)),
        }
    }
}

/// Replays `seq`, checking at every step that the vertex is allowed, the
/// recorded quiver is the mutation of its predecessor, and the result stays
/// in the class with the same number of 3-cycles.
pub fn verify_sequence(seq: &MutationSequence) -> SequenceCheck {
    let start = seq.start();
    let report = is_in_qn(start);
    if !report.member {
        return SequenceCheck::fail(None, format!("start quiver not in class: {report}"));
    }
    let t = count_3cycles(start);
    let mut cur = start.clone();
    for (k, (v, recorded)) in seq.steps().iter().enumerate() {
        if *v >= cur.vertex_count() {
            return SequenceCheck::fail(Some(k), format!("vertex {v} out of range"));
        }
        if !allowed_unchecked(&cur).contains(v) {
            return SequenceCheck::fail(
                Some(k),
                format!("vertex {v} is not a sink, source, or valency-3/4 vertex"),
            );
        }
        let next = cur.mutate(*v).unwrap();
        if &next != recorded {
            return SequenceCheck::fail(Some(k), "recorded quiver differs from mutation".into());
        }
        let report = is_in_qn(&next);
        if !report.member {
            return SequenceCheck::fail(Some(k), format!("left the class: {report}"));
        }
        let t2 = count_3cycles(&next);
        if t2 != t {
            return SequenceCheck::fail(Some(k), format!("3-cycle count changed from {t} to {t2}"));
        }
        cur = next;
    }
    SequenceCheck {
        valid: true,
        failure: None,
    }
}

/// Breadth-first search over signature-preserving mutations from `from`
/// until a quiver isomorphic to `to` appears.
pub fn restricted_reachability(from: &Quiver, to: &Quiver, max_states: usize) -> Result<MutationSequence> {
    require_member(from)?;
    require_member(to)?;
    let (s1, s2) = (ClassSignature::of(from), ClassSignature::of(to));
    if s1 != s2 {
        return Err(Error::SignatureMismatch {
            n1: s1.n,
            t1: s1.t,
            n2: s2.n,
            t2: s2.t,
        });
    }
    let goal = canonical_form(to);
    // (quiver, parent index, vertex mutated to reach it)
    let mut states: Vec<(Quiver, usize, usize)> = vec![(from.clone(), usize::MAX, usize::MAX)];
    let mut seen: HashMap<CanonicalForm, usize> = HashMap::new();
    let start_form = canonical_form(from);
    let mut found = (start_form == goal).then_some(0);
    seen.insert(start_form, 0);
    let mut queue = VecDeque::from([0]);
    while found.is_none() {
        let Some(i) = queue.pop_front() else {
            return Err(Error::NotReachable);
        };
        let cur = states[i].0.clone();
        for v in allowed_unchecked(&cur) {
            let next = cur.mutate(v)?;
            let c = canonical_form(&next);
            if seen.contains_key(&c) {
                continue;
            }
            if states.len() >= max_states {
                return Err(Error::StateBudgetExceeded { budget: max_states });
            }
            seen.insert(c.clone(), states.len());
            queue.push_back(states.len());
            states.push((next, i, v));
            if c == goal {
                found = Some(states.len() - 1);
                break;
            }
        }
    }
    let mut path = Vec::new();
    let mut i = found.unwrap();
    while states[i].1 != usize::MAX {
        path.push(states[i].2);
        i = states[i].1;
    }
    path.reverse();
    MutationSequence::replay(from.clone(), &path)
}

/// 3-cycles meeting `v`; exposed for the distance-decrement checks.
pub fn cycles_through(q: &Quiver, v: usize) -> Vec<[usize; 3]> {
    cycles_at(&q.directed_3cycles(), v)
}
