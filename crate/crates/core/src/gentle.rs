//! Cluster-tilted algebras of type A_n as bound quiver algebras `kQ/I`.
//!
//! The ideal is monomial, so dimensions of `e_i Λ e_j` are counts of paths
//! that contain no relation as a contiguous subpath; no ground field is
//! modelled.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::bareiss_determinant;
use crate::quiver::Quiver;
use crate::scalar::ExactInteger;
use crate::type_a::{count_3cycles, is_in_qn};

/// An arrow of a quiver. `copy` distinguishes parallel arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub copy: u32,
}

/// All arrows of `q`, sorted by `(source, target, copy)`.
pub fn arrows_of(q: &Quiver) -> Vec<Arrow> {
    let mut out = Vec::new();
    for u in 0..q.vertex_count() {
        for v in 0..q.vertex_count() {
            for copy in 0..q.arrow_count(u, v) {
                out.push(Arrow {
                    source: u,
                    target: v,
                    copy,
                });
            }
        }
    }
    out
}

/// A path: a start vertex and a sequence of composable arrows, written
/// left to right in the order they are traversed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<Arrow>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn target(&self) -> usize {
        self.arrows.last().map_or(self.source, |a| a.target)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    fn sort_key(&self) -> (usize, usize, usize, &[Arrow]) {
        (self.source, self.target(), self.len(), &self.arrows)
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Name of the `index`-th arrow: `a`, `b`, ..., `z`, `aa`, `ab`, ...
pub fn arrow_name(mut index: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).unwrap()
}

/// A quiver with a set of monomial relations (paths that are zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GentlePresentation {
    quiver: Quiver,
    relations: BTreeSet<Vec<Arrow>>,
}

impl GentlePresentation {
    /// A presentation with arbitrary monomial relations; nothing is checked
    /// beyond composability of each relation.
    pub fn new(quiver: Quiver, relations: impl IntoIterator<Item = Vec<Arrow>>) -> Result<Self> {
        let relations: BTreeSet<Vec<Arrow>> = relations.into_iter().collect();
        for r in &relations {
            let composable = r.windows(2).all(|w| w[0].target == w[1].source);
            let exists = r
                .iter()
                .all(|a| a.source < quiver.vertex_count() && a.copy < quiver.arrow_count(a.source, a.target));
            if r.is_empty() || !composable || !exists {
                return Err(Error::PreconditionViolated(format!("{r:?} is not a path of the quiver")));
            }
        }
        Ok(GentlePresentation { quiver, relations })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &BTreeSet<Vec<Arrow>> {
        &self.relations
    }

    fn is_relation(&self, path: &[Arrow]) -> bool {
        self.relations.contains(path)
    }

    /// True if `path` has no relation as a contiguous subpath ending at its
    /// last arrow.
    fn tail_is_free(&self, path: &[Arrow]) -> bool {
        let m = path.len();
        self.relations
            .iter()
            .filter(|r| r.len() <= m)
            .all(|r| &path[m - r.len()..] != r.as_slice())
    }

    /// Text form of a path, e.g. `0 -a-> 1 -b-> 2`.
    pub fn format_path(&self, p: &Path) -> String {
        let arrows = arrows_of(&self.quiver);
        let mut s = p.source.to_string();
        for a in &p.arrows {
            let idx = arrows.iter().position(|x| x == a).unwrap();
            s.push_str(&format!(" -{}-> {}", arrow_name(idx), a.target));
        }
        s
    }
}

/// The cluster-tilted algebra of a class member: relations are the
/// composable arrow pairs lying on a common oriented 3-cycle.
pub fn presentation_of(q: &Quiver) -> Result<GentlePresentation> {
    let report = is_in_qn(q);
    if !report.member {
        return Err(Error::NotInClass(Box::new(report)));
    }
    let mut relations = Vec::new();
    for [a, b, c] in q.directed_3cycles() {
        let cyc = if q.has_arrow(a, b) { [a, b, c] } else { [a, c, b] };
        for i in 0..3 {
            let (x, y, z) = (cyc[i], cyc[(i + 1) % 3], cyc[(i + 2) % 3]);
            relations.push(vec![
                Arrow { source: x, target: y, copy: 0 },
                Arrow { source: y, target: z, copy: 0 },
            ]);
        }
    }
    GentlePresentation::new(q.clone(), relations)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GentleViolation {
    /// More than two arrows start at the vertex.
    TooManyOutgoing { vertex: usize, arrows: Vec<Arrow> },
    /// More than two arrows end at the vertex.
    TooManyIncoming { vertex: usize, arrows: Vec<Arrow> },
    /// More than one arrow composes with `arrow` without being killed.
    NonzeroCompositions { arrow: Arrow, before: bool, others: Vec<Arrow> },
    /// A relation that is not a path of length 2.
    NotQuadratic { relation: Vec<Arrow> },
    /// More than one arrow composes with `arrow` into a relation.
    ZeroCompositions { arrow: Arrow, before: bool, others: Vec<Arrow> },
}

impl fmt::Display for GentleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GentleReport {
    pub gentle: bool,
    pub violations: Vec<GentleViolation>,
}

/// Checks the special-biserial conditions and the two further gentle
/// conditions literally.
pub fn check_gentle(p: &GentlePresentation) -> GentleReport {
    let q = &p.quiver;
    let arrows = arrows_of(q);
    let mut violations = Vec::new();

    for v in 0..q.vertex_count() {
        let out: Vec<Arrow> = arrows.iter().filter(|a| a.source == v).copied().collect();
        let inc: Vec<Arrow> = arrows.iter().filter(|a| a.target == v).copied().collect();
        if out.len() > 2 {
            violations.push(GentleViolation::TooManyOutgoing { vertex: v, arrows: out });
        }
        if inc.len() > 2 {
            violations.push(GentleViolation::TooManyIncoming { vertex: v, arrows: inc });
        }
    }

    for &beta in &arrows {
        // arrows traversed just before beta, and just after it
        let before: Vec<Arrow> = arrows.iter().filter(|a| a.target == beta.source).copied().collect();
        let after: Vec<Arrow> = arrows.iter().filter(|a| a.source == beta.target).copied().collect();
        let split = |side: &[Arrow], is_before: bool| -> (Vec<Arrow>, Vec<Arrow>) {
            side.iter().partition(|&&a| {
                let pair = if is_before { vec![a, beta] } else { vec![beta, a] };
                !p.is_relation(&pair)
            })
        };
        for (side, is_before) in [(&before, true), (&after, false)] {
            let (nonzero, zero) = split(side, is_before);
            if nonzero.len() > 1 {
                violations.push(GentleViolation::NonzeroCompositions {
                    arrow: beta,
                    before: is_before,
                    others: nonzero,
                });
            }
            if zero.len() > 1 {
                violations.push(GentleViolation::ZeroCompositions {
                    arrow: beta,
                    before: is_before,
                    others: zero,
                });
            }
        }
    }

    for r in &p.relations {
        if r.len() != 2 {
            violations.push(GentleViolation::NotQuadratic { relation: r.clone() });
        }
    }

    GentleReport {
        gentle: violations.is_empty(),
        violations,
    }
}

/// Every path (including trivial ones) with no relation as a subpath, in
/// `(source, target, length, arrows)` order.
///
/// Paths are cut off at `vertex_count` arrows: a longer path revisits a
/// vertex, and in a class member every cycle is a 3-cycle whose
/// compositions are relations. Exceeding the bound is reported as an error.
pub fn path_basis(p: &GentlePresentation) -> Result<Vec<Path>> {
    let q = &p.quiver;
    let n = q.vertex_count();
    let arrows = arrows_of(q);
    let mut out = Vec::new();
    let mut stack: Vec<Path> = (0..n).map(Path::trivial).collect();
    while let Some(path) = stack.pop() {
        for a in arrows.iter().filter(|a| a.source == path.target()) {
            let mut arr = path.arrows.clone();
            arr.push(*a);
            if !p.tail_is_free(&arr) {
                continue;
            }
            if arr.len() > n {
                return Err(Error::PathBoundExceeded { bound: n });
            }
            stack.push(Path {
                source: path.source,
                arrows: arr,
            });
        }
        out.push(path);
    }
    out.sort();
    Ok(out)
}

/// Square matrix of exact integers, generic over the scalar type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix<T> {
    entries: Vec<Vec<T>>,
}

impl<T: ExactInteger> CartanMatrix<T> {
    pub fn from_rows(entries: Vec<Vec<T>>) -> Self {
        assert!(entries.iter().all(|r| r.len() == entries.len()));
        CartanMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.entries
    }

    pub fn determinant(&self) -> T {
        bareiss_determinant(&self.entries)
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        CartanMatrix {
            entries: (0..n).map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect()).collect(),
        }
    }

    /// `n` on the first line, then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.dim());
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Cartan matrix with entry `(i, j)` the number of basis paths from `j` to
/// `i`, so column `j` is the dimension vector of the projective at `j`.
pub fn cartan_matrix<T: ExactInteger>(p: &GentlePresentation) -> Result<CartanMatrix<T>> {
    let n = p.quiver.vertex_count();
    let mut entries = vec![vec![T::zero(); n]; n];
    for path in path_basis(p)? {
        let cell = &mut entries[path.target()][path.source];
        *cell = cell.clone() + T::one();
    }
    Ok(CartanMatrix { entries })
}

pub fn cartan_det<T: ExactInteger>(p: &GentlePresentation) -> Result<T> {
    Ok(cartan_matrix::<T>(p)?.determinant())
}

/// Derived equivalence of two cluster-tilted algebras of the same type A_n:
/// they are equivalent exactly when their quivers have equally many
/// 3-cycles.
pub fn derived_equivalent(a: &GentlePresentation, b: &GentlePresentation) -> Result<bool> {
    let (na, nb) = (a.quiver.vertex_count(), b.quiver.vertex_count());
    if na != nb {
        return Err(Error::SizeMismatch(na, nb));
    }
    Ok(count_3cycles(&a.quiver) == count_3cycles(&b.quiver))
}
