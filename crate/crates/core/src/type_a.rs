//! The mutation class of type A_n: membership, 3-cycle counting,
//! enumeration up to isomorphism, and the two enlargement constructions
//! that build every member from A_1.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// The complete derived-equivalence invariant `(n, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassSignature {
    pub n: usize,
    pub t: usize,
}

impl ClassSignature {
    pub fn of(q: &Quiver) -> Self {
        ClassSignature {
            n: q.vertex_count(),
            t: count_3cycles(q),
        }
    }

    /// Whether some quiver of type A_n has `t` 3-cycles.
    pub fn is_feasible(&self) -> bool {
        self.n >= 1 && 2 * self.t < self.n
    }
}

impl fmt::Display for ClassSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} t={}", self.n, self.t)
    }
}

/// One failed membership condition with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The underlying graph is disconnected; the witness is a vertex not
    /// reachable from vertex 0.
    Disconnected { unreachable: usize },
    /// Two or more parallel arrows between the same pair of vertices.
    MultipleArrows { source: usize, target: usize, count: u32 },
    /// A triangle in the underlying graph that is not oriented.
    CycleNotOriented { cycle: Vec<usize> },
    /// A cycle of the underlying graph whose length is not 3.
    CycleLength { cycle: Vec<usize> },
    /// A vertex with more than four neighbours.
    TooManyNeighbours { vertex: usize, neighbours: Vec<usize> },
    /// A valency-4 vertex whose arrows do not split over two 3-cycles.
    Valency4Split { vertex: usize, cycles: Vec<[usize; 3]> },
    /// A valency-3 vertex not on exactly one 3-cycle.
    Valency3Split { vertex: usize, cycles: Vec<[usize; 3]> },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::Disconnected { .. } => "disconnected",
            Violation::MultipleArrows { .. } => "multiple-arrows",
            Violation::CycleNotOriented { .. } => "cycle-not-oriented",
            Violation::CycleLength { .. } => "cycle-length",
            Violation::TooManyNeighbours { .. } => "too-many-neighbours",
            Violation::Valency4Split { .. } => "valency4-split",
            Violation::Valency3Split { .. } => "valency3-split",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected { unreachable } => {
                write!(f, "disconnected: vertex {unreachable} unreachable from 0")
            }
            Violation::MultipleArrows { source, target, count } => {
                write!(f, "multiple-arrows: {count} arrows {source} -> {target}")
            }
            Violation::CycleNotOriented { cycle } => write!(f, "cycle-not-oriented: {cycle:?}"),
            Violation::CycleLength { cycle } => {
                write!(f, "cycle-length: {} on {cycle:?}", cycle.len())
            }
            Violation::TooManyNeighbours { vertex, neighbours } => {
                write!(f, "too-many-neighbours: vertex {vertex} has {neighbours:?}")
            }
            Violation::Valency4Split { vertex, cycles } => {
                write!(f, "valency4-split: vertex {vertex} on 3-cycles {cycles:?}")
            }
            Violation::Valency3Split { vertex, cycles } => {
                write!(f, "valency3-split: vertex {vertex} on 3-cycles {cycles:?}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub member: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.member {
            return write!(f, "member");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Searches the underlying simple graph for a cycle that is not an
/// oriented triangle, stopping at the first one found.
fn bad_cycle(q: &Quiver) -> Option<Violation> {
    let n = q.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| q.neighbours(v)).collect();
    // enumerate each simple cycle from its smallest vertex
    fn dfs(
        q: &Quiver,
        adj: &[Vec<usize>],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
    ) -> Option<Violation> {
        let u = *path.last().unwrap();
        for &w in &adj[u] {
            if w == start && path.len() >= 3 {
                // each cycle is seen twice; take one direction
                if path[1] > *path.last().unwrap() {
                    continue;
                }
                if path.len() != 3 {
                    return Some(Violation::CycleLength { cycle: path.clone() });
                }
                let (a, b, c) = (path[0], path[1], path[2]);
                let cw = q.has_arrow(a, b) && q.has_arrow(b, c) && q.has_arrow(c, a);
                let ccw = q.has_arrow(b, a) && q.has_arrow(c, b) && q.has_arrow(a, c);
                if !cw && !ccw {
                    return Some(Violation::CycleNotOriented { cycle: path.clone() });
                }
                continue;
            }
            if w <= start || on_path[w] || path.len() >= q.vertex_count() {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            let found = dfs(q, adj, start, path, on_path);
            on_path[w] = false;
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut path = vec![s];
        on_path[s] = true;
        let found = dfs(q, &adj, s, &mut path, &mut on_path);
        on_path[s] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// 3-cycles through `v`.
pub(crate) fn cycles_at(cycles: &[[usize; 3]], v: usize) -> Vec<[usize; 3]> {
    cycles.iter().filter(|c| c.contains(&v)).copied().collect()
}

/// Checks the defining conditions of the mutation class of A_n, in order:
/// connectivity, cycle shape (which also excludes multiple arrows),
/// neighbour bound, and the valency-4 / valency-3 splitting conditions.
pub fn is_in_qn(q: &Quiver) -> MembershipReport {
    let n = q.vertex_count();
    let mut violations = Vec::new();

    if !q.is_connected() {
        let reach = q.component_avoiding(0, &[]);
        let unreachable = (0..n).find(|v| !reach.contains(v)).unwrap();
        violations.push(Violation::Disconnected { unreachable });
    }

    let mut multi = false;
    for u in 0..n {
        for v in 0..n {
            let c = q.arrow_count(u, v);
            if c >= 2 {
                multi = true;
                violations.push(Violation::MultipleArrows {
                    source: u,
                    target: v,
                    count: c,
                });
            }
        }
    }
    if !multi {
        if let Some(v) = bad_cycle(q) {
            violations.push(v);
        }
    }

    let cycles = q.directed_3cycles();
    for v in 0..n {
        let nb = q.neighbours(v);
        let through = cycles_at(&cycles, v);
        match nb.len() {
            0..=2 => {}
            3 => {
                if through.len() != 1 {
                    violations.push(Violation::Valency3Split {
                        vertex: v,
                        cycles: through,
                    });
                }
            }
            4 => {
                let disjoint = through.len() == 2
                    && through[0]
                        .iter()
                        .all(|x| *x == v || !through[1].contains(x));
                if !disjoint {
                    violations.push(Violation::Valency4Split {
                        vertex: v,
                        cycles: through,
                    });
                }
            }
            _ => violations.push(Violation::TooManyNeighbours {
                vertex: v,
                neighbours: nb,
            }),
        }
    }

    MembershipReport {
        member: violations.is_empty(),
        violations,
    }
}

/// Number of oriented triangles.
pub fn count_3cycles(q: &Quiver) -> usize {
    q.directed_3cycles().len()
}

/// Quivers of one mutation class, one representative per isomorphism class,
/// in discovery order.
#[derive(Clone, Debug)]
pub struct MutationClass {
    members: Vec<(CanonicalForm, Quiver)>,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn quivers(&self) -> impl Iterator<Item = &Quiver> {
        self.members.iter().map(|(_, q)| q)
    }

    pub fn forms(&self) -> impl Iterator<Item = &CanonicalForm> {
        self.members.iter().map(|(c, _)| c)
    }

    pub fn members(&self) -> &[(CanonicalForm, Quiver)] {
        &self.members
    }

    /// The canonical forms as a sorted set.
    pub fn form_set(&self) -> std::collections::BTreeSet<CanonicalForm> {
        self.forms().cloned().collect()
    }
}

/// Breadth-first closure of `seed` under mutation, deduplicated up to
/// isomorphism on insertion.
pub fn enumerate_mutation_class(seed: &Quiver, max_size: usize) -> Result<MutationClass> {
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut members = Vec::new();
    let mut queue = VecDeque::new();
    let c = canonical_form(seed);
    index.insert(c.clone(), 0);
    members.push((c, seed.clone()));
    queue.push_back(0);
    if members.len() > max_size {
        return Err(Error::ClassTooLarge { limit: max_size });
    }
    while let Some(i) = queue.pop_front() {
        let q = members[i].1.clone();
        for v in 0..q.vertex_count() {
            let m = q.mutate(v)?;
            let c = canonical_form(&m);
            if index.contains_key(&c) {
                continue;
            }
            index.insert(c.clone(), members.len());
            queue.push_back(members.len());
            members.push((c, m));
            if members.len() > max_size {
                return Err(Error::ClassTooLarge { limit: max_size });
            }
        }
    }
    Ok(MutationClass { members })
}

/// The mutation class of A_n. Class sizes grow roughly threefold per vertex,
/// so the default limit is generous for every `n <= 12`.
pub fn a_n_class(n: usize) -> Result<MutationClass> {
    enumerate_mutation_class(&Quiver::linear_a(n), 1 << 22)
}

pub const DIRECT_ENUMERATION_MAX: usize = 5;

/// All connected quivers on `n` vertices (each vertex pair carries at most
/// one arrow) that satisfy [`is_in_qn`], up to isomorphism.
pub fn enumerate_qn_directly(n: usize) -> Result<MutationClass> {
    if n > DIRECT_ENUMERATION_MAX {
        return Err(Error::TooLarge {
            n,
            max: DIRECT_ENUMERATION_MAX,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut seen: HashMap<CanonicalForm, Quiver> = HashMap::new();
    for code in 0..total {
        let mut c = code;
        let mut arrows = Vec::new();
        for &(i, j) in &pairs {
            match c % 3 {
                1 => arrows.push((i, j)),
                2 => arrows.push((j, i)),
                _ => {}
            }
            c /= 3;
        }
        let q = Quiver::new(n, &arrows)?;
        if !q.is_connected() || !is_in_qn(&q).member {
            continue;
        }
        seen.entry(canonical_form(&q)).or_insert(q);
    }
    let mut members: Vec<(CanonicalForm, Quiver)> = seen.into_iter().collect();
    members.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(MutationClass { members })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The new arrow ends at the attachment vertex.
    In,
    /// The new arrow starts at the attachment vertex.
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// `attach -> n -> n+1 -> attach`
    Clockwise,
    /// `attach -> n+1 -> n -> attach`
    Counterclockwise,
}

/// Adds vertex `n` and one arrow between it and `attach`.
pub fn enlarge_pendant(q: &Quiver, attach: usize, direction: Direction) -> Result<Quiver> {
    let n = q.vertex_count();
    if attach >= n {
        return Err(Error::BadVertexLabel {
            label: attach,
            vertex_count: n,
        });
    }
    let grown = q.with_extra_vertices(1);
    match direction {
        Direction::Out => grown.with_arrow(attach, n),
        Direction::In => grown.with_arrow(n, attach),
    }
}

/// Adds vertices `n`, `n+1` and an oriented 3-cycle through them and
/// `attach`.
///
/// `attach` must have at most one neighbour, or exactly two neighbours
/// that lie with it on one 3-cycle; otherwise the result would leave the
/// class.
pub fn enlarge_cycle(q: &Quiver, attach: usize, orientation: Orientation) -> Result<Quiver> {
    let n = q.vertex_count();
    if attach >= n {
        return Err(Error::BadVertexLabel {
            label: attach,
            vertex_count: n,
        });
    }
    let nb = q.neighbours(attach);
    let cycles = cycles_at(&q.directed_3cycles(), attach);
    let ok = nb.len() <= 1 || (nb.len() == 2 && cycles.len() == 1);
    if !ok {
        return Err(Error::PreconditionViolated(format!(
            "vertex {attach} has neighbours {nb:?} and lies on {} 3-cycles",
            cycles.len()
        )));
    }
    let (a, b) = match orientation {
        Orientation::Clockwise => (n, n + 1),
        Orientation::Counterclockwise => (n + 1, n),
    };
    q.with_extra_vertices(2)
        .with_arrow(attach, a)?
        .with_arrow(a, b)?
        .with_arrow(b, attach)
}

/// One step of an enlargement sequence starting from A_1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Enlargement {
    Pendant(usize, Direction),
    Cycle(usize, Orientation),
}

impl Enlargement {
    pub fn apply(&self, q: &Quiver) -> Result<Quiver> {
        match *self {
            Enlargement::Pendant(v, d) => enlarge_pendant(q, v, d),
            Enlargement::Cycle(v, o) => enlarge_cycle(q, v, o),
        }
    }
}

/// Applies `steps` in order starting from A_1.
pub fn build_from_a1(steps: &[Enlargement]) -> Result<Quiver> {
    steps
        .iter()
        .try_fold(Quiver::empty(1), |q, step| step.apply(&q))
}

/// Peels a class member down to A_1 by repeatedly removing a pendant vertex
/// or an ear 3-cycle, and returns the reversed enlargement steps. Replaying
/// them with [`build_from_a1`] gives a quiver isomorphic to `q`.
pub fn enlargement_decomposition(q: &Quiver) -> Result<Vec<Enlargement>> {
    let report = is_in_qn(q);
    if !report.member || q.vertex_count() == 0 {
        return Err(Error::NotInClass(Box::new(report)));
    }
    let mut cur = q.clone();
    // original label of each vertex of `cur`
    let mut orig: Vec<usize> = (0..q.vertex_count()).collect();
    // (attach, added vertices, pendant direction), in original labels
    let mut peeled: Vec<(usize, Vec<usize>, Option<Direction>)> = Vec::new();
    while cur.vertex_count() > 1 {
        let cycles = cur.directed_3cycles();
        let n = cur.vertex_count();
        let leaf = (0..n).find(|&v| cur.neighbours(v).len() == 1 && cycles_at(&cycles, v).is_empty());
        let (attach, removed, dir) = if let Some(v) = leaf {
            let w = cur.neighbours(v)[0];
            let dir = if cur.has_arrow(w, v) { Direction::Out } else { Direction::In };
            (w, vec![v], Some(dir))
        } else {
            let (c, low) = cycles
                .iter()
                .find_map(|c| {
                    let low: Vec<usize> = c.iter().copied().filter(|&v| cur.neighbours(v).len() == 2).collect();
                    (low.len() >= 2).then_some((*c, low))
                })
                .expect("every class member with n >= 2 has a pendant vertex or an ear 3-cycle");
            let (p, r) = (low[0], low[1]);
            let attach = *c.iter().find(|&&v| v != p && v != r).unwrap();
            // attach -> a -> b -> attach
            let (a, b) = if cur.has_arrow(attach, p) { (p, r) } else { (r, p) };
            (attach, vec![a, b], None)
        };
        peeled.push((orig[attach], removed.iter().map(|&v| orig[v]).collect(), dir));
        let keep: Vec<usize> = (0..n).filter(|v| !removed.contains(v)).collect();
        orig = keep.iter().map(|&v| orig[v]).collect();
        cur = cur.induced(&keep);
    }
    // labels of the rebuilt quiver follow the order of addition
    let mut order = orig;
    let mut steps = Vec::with_capacity(peeled.len());
    for (attach, added, dir) in peeled.into_iter().rev() {
        let at = order.iter().position(|&v| v == attach).unwrap();
        steps.push(match dir {
            Some(d) => Enlargement::Pendant(at, d),
            None => Enlargement::Cycle(at, Orientation::Clockwise),
        });
        order.extend(added);
    }
    Ok(steps)
}
