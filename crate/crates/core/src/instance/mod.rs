//! Instances, matchings, and the baseline computations on them.
//!
//! Vertices are identified by `(side, index)`; names are carried only for I/O. Preference lists
//! define acceptability: the edge set is the set of pairs that list each other.

mod generate;
mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use generate::random_instance;
pub use parse::{parse_instance, parse_matching, write_instance, write_matching, MatchingParseError, ParseError};

/// Which side of the bipartition a vertex sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Student,
    Course,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Student => Side::Course,
            Side::Course => Side::Student,
        }
    }
}

/// A vertex of the instance, identified by side and index into that side's table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

impl VertexId {
    pub fn student(index: usize) -> Self {
        VertexId {
            side: Side::Student,
            index,
        }
    }

    pub fn course(index: usize) -> Self {
        VertexId {
            side: Side::Course,
            index,
        }
    }
}

/// A mutually acceptable pair, with the rank each endpoint gives the other (0 = most preferred).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub student: usize,
    pub course: usize,
    /// Position of `course` in the student's list.
    pub student_rank: usize,
    /// Position of `student` in the course's list.
    pub course_rank: usize,
}

/// An instance as written down, before any invariant is checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub students: Vec<String>,
    pub courses: Vec<String>,
    pub student_caps: Vec<i64>,
    pub course_caps: Vec<i64>,
    pub student_prefs: Vec<Vec<usize>>,
    pub course_prefs: Vec<Vec<usize>>,
}

/// One broken instance invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateName { side: Side, name: String },
    CapacityBelowOne { vertex: String, cap: i64 },
    DuplicatePreference { vertex: String, neighbor: String },
    UnknownNeighbor { vertex: String, index: usize },
    NonMutualEdge { vertex: String, neighbor: String },
    TableSizeMismatch { what: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { side, name } => {
                write!(f, "duplicate {side:?} name `{name}`")
            }
            Violation::CapacityBelowOne { vertex, cap } => {
                write!(f, "capacity of `{vertex}` is {cap}, must be at least 1")
            }
            Violation::DuplicatePreference { vertex, neighbor } => {
                write!(f, "duplicate preference: `{vertex}` lists `{neighbor}` more than once")
            }
            Violation::UnknownNeighbor { vertex, index } => {
                write!(f, "`{vertex}` lists neighbor index {index}, which does not exist")
            }
            Violation::NonMutualEdge { vertex, neighbor } => {
                write!(f, "non-mutual edge: `{vertex}` lists `{neighbor}` but not vice versa")
            }
            Violation::TableSizeMismatch { what } => write!(f, "table size mismatch: {what}"),
        }
    }
}

/// Returned when a [`RawInstance`] cannot become an [`Instance`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid instance: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InstanceError {
    pub violations: Vec<Violation>,
}

/// Lists every invariant violation of `raw`. Empty iff `raw` can be built.
pub fn validate(raw: &RawInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let ns = raw.students.len();
    let nc = raw.courses.len();
    if raw.student_caps.len() != ns || raw.student_prefs.len() != ns {
        out.push(Violation::TableSizeMismatch { what: "student tables" });
    }
    if raw.course_caps.len() != nc || raw.course_prefs.len() != nc {
        out.push(Violation::TableSizeMismatch { what: "course tables" });
    }
    if !out.is_empty() {
        return out;
    }
    for (side, names) in [(Side::Student, &raw.students), (Side::Course, &raw.courses)] {
        let mut seen = HashMap::new();
        for name in names {
            if seen.insert(name.as_str(), ()).is_some() {
                out.push(Violation::DuplicateName {
                    side,
                    name: name.clone(),
                });
            }
        }
    }
    let sides = [
        (
            &raw.students,
            &raw.student_caps,
            &raw.student_prefs,
            &raw.courses,
            &raw.course_prefs,
        ),
        (
            &raw.courses,
            &raw.course_caps,
            &raw.course_prefs,
            &raw.students,
            &raw.student_prefs,
        ),
    ];
    for (names, caps, prefs, other_names, other_prefs) in sides {
        let mut mark = vec![false; other_names.len()];
        for (u, list) in prefs.iter().enumerate() {
            if caps[u] < 1 {
                out.push(Violation::CapacityBelowOne {
                    vertex: names[u].clone(),
                    cap: caps[u],
                });
            }
            for &v in list {
                if v >= other_names.len() {
                    out.push(Violation::UnknownNeighbor {
                        vertex: names[u].clone(),
                        index: v,
                    });
                    continue;
                }
                if mark[v] {
                    out.push(Violation::DuplicatePreference {
                        vertex: names[u].clone(),
                        neighbor: other_names[v].clone(),
                    });
                    continue;
                }
                mark[v] = true;
                if !other_prefs[v].contains(&u) {
                    out.push(Violation::NonMutualEdge {
                        vertex: names[u].clone(),
                        neighbor: other_names[v].clone(),
                    });
                }
            }
            for &v in list {
                if v < mark.len() {
                    mark[v] = false;
                }
            }
        }
    }
    out
}

/// A validated instance. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Instance {
    students: Vec<String>,
    courses: Vec<String>,
    student_caps: Vec<u32>,
    course_caps: Vec<u32>,
    student_prefs: Vec<Vec<usize>>,
    course_prefs: Vec<Vec<usize>>,
    /// `student_cross_rank[a][i]` is the rank of `a` in the list of `student_prefs[a][i]`.
    student_cross_rank: Vec<Vec<usize>>,
    /// Sorted by `(student, course)`.
    edges: Vec<Edge>,
    student_edge_offsets: Vec<usize>,
    student_lookup: HashMap<String, usize>,
    course_lookup: HashMap<String, usize>,
}

impl Instance {
    /// Builds an instance, failing with every violation found.
    pub fn from_raw(raw: RawInstance) -> Result<Instance, InstanceError> {
        let violations = validate_fast(&raw);
        if !violations.is_empty() {
            return Err(InstanceError { violations });
        }
        let ns = raw.students.len();
        let nc = raw.courses.len();

        // Bucket the course-side entries by student, then resolve cross ranks through a scratch
        // array indexed by course. Linear in the number of list entries.
        let mut by_student: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ns];
        for (b, list) in raw.course_prefs.iter().enumerate() {
            for (r, &a) in list.iter().enumerate() {
                by_student[a].push((b, r));
            }
        }
        let mut course_rank_of = vec![usize::MAX; nc];
        let mut student_cross_rank = Vec::with_capacity(ns);
        let mut edges = Vec::new();
        let mut student_edge_offsets = Vec::with_capacity(ns + 1);
        for a in 0..ns {
            for &(b, r) in &by_student[a] {
                course_rank_of[b] = r;
            }
            let cross: Vec<usize> = raw.student_prefs[a].iter().map(|&b| course_rank_of[b]).collect();
            student_edge_offsets.push(edges.len());
            let mut mine: Vec<Edge> = raw.student_prefs[a]
                .iter()
                .zip(&cross)
                .enumerate()
                .map(|(i, (&b, &r))| Edge {
                    student: a,
                    course: b,
                    student_rank: i,
                    course_rank: r,
                })
                .collect();
            mine.sort_unstable_by_key(|e| e.course);
            edges.extend(mine);
            student_cross_rank.push(cross);
            for &(b, _) in &by_student[a] {
                course_rank_of[b] = usize::MAX;
            }
        }
        student_edge_offsets.push(edges.len());

        let student_lookup = raw.students.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let course_lookup = raw.courses.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        Ok(Instance {
            students: raw.students,
            courses: raw.courses,
            student_caps: raw.student_caps.iter().map(|&c| c as u32).collect(),
            course_caps: raw.course_caps.iter().map(|&c| c as u32).collect(),
            student_prefs: raw.student_prefs,
            course_prefs: raw.course_prefs,
            student_cross_rank,
            edges,
            student_edge_offsets,
            student_lookup,
            course_lookup,
        })
    }

    /// The raw tables this instance was built from.
    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            students: self.students.clone(),
            courses: self.courses.clone(),
            student_caps: self.student_caps.iter().map(|&c| c as i64).collect(),
            course_caps: self.course_caps.iter().map(|&c| c as i64).collect(),
            student_prefs: self.student_prefs.clone(),
            course_prefs: self.course_prefs.clone(),
        }
    }

    pub fn num_students(&self) -> usize {
        self.students.len()
    }

    pub fn num_courses(&self) -> usize {
        self.courses.len()
    }

    pub fn num_vertices(&self, side: Side) -> usize {
        match side {
            Side::Student => self.students.len(),
            Side::Course => self.courses.len(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn students(&self) -> &[String] {
        &self.students
    }

    pub fn courses(&self) -> &[String] {
        &self.courses
    }

    pub fn name(&self, v: VertexId) -> &str {
        match v.side {
            Side::Student => &self.students[v.index],
            Side::Course => &self.courses[v.index],
        }
    }

    pub fn lookup(&self, side: Side, name: &str) -> Option<usize> {
        match side {
            Side::Student => self.student_lookup.get(name).copied(),
            Side::Course => self.course_lookup.get(name).copied(),
        }
    }

    pub fn cap(&self, v: VertexId) -> usize {
        match v.side {
            Side::Student => self.student_caps[v.index] as usize,
            Side::Course => self.course_caps[v.index] as usize,
        }
    }

    pub fn total_cap(&self, side: Side) -> usize {
        match side {
            Side::Student => self.student_caps.iter().map(|&c| c as usize).sum(),
            Side::Course => self.course_caps.iter().map(|&c| c as usize).sum(),
        }
    }

    /// Preference list of `v`, most preferred first; entries index the opposite side.
    pub fn prefs(&self, v: VertexId) -> &[usize] {
        match v.side {
            Side::Student => &self.student_prefs[v.index],
            Side::Course => &self.course_prefs[v.index],
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.prefs(v).len()
    }

    /// For student `a`, the rank of `a` in each listed course's own list, aligned with `prefs`.
    pub(crate) fn student_cross_ranks(&self, a: usize) -> &[usize] {
        &self.student_cross_rank[a]
    }

    /// All edges, sorted by `(student, course)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Index of edge `(student, course)` in [`Instance::edges`].
    pub fn edge_index(&self, student: usize, course: usize) -> Option<usize> {
        if student >= self.students.len() {
            return None;
        }
        let lo = self.student_edge_offsets[student];
        let hi = self.student_edge_offsets[student + 1];
        self.edges[lo..hi]
            .binary_search_by_key(&course, |e| e.course)
            .ok()
            .map(|i| lo + i)
    }

    pub fn edge(&self, student: usize, course: usize) -> Option<&Edge> {
        self.edge_index(student, course).map(|i| &self.edges[i])
    }

    /// Rank `u` gives neighbor `v` (0 = best), or `None` if `v` is not acceptable to `u`.
    pub fn rank(&self, u: VertexId, v: usize) -> Option<usize> {
        match u.side {
            Side::Student => self.edge(u.index, v).map(|e| e.student_rank),
            Side::Course => self.edge(v, u.index).map(|e| e.course_rank),
        }
    }

    /// Short human summary, e.g. `2 students, 2 courses, 3 edges`.
    pub fn digest(&self) -> String {
        format!(
            "{} students, {} courses, {} edges",
            self.num_students(),
            self.num_courses(),
            self.num_edges()
        )
    }
}

/// Same verdict as [`validate`] in linear time; falls back to it to describe failures.
fn validate_fast(raw: &RawInstance) -> Vec<Violation> {
    let ns = raw.students.len();
    let nc = raw.courses.len();
    let shapes_ok = raw.student_caps.len() == ns
        && raw.student_prefs.len() == ns
        && raw.course_caps.len() == nc
        && raw.course_prefs.len() == nc;
    if !shapes_ok
        || raw.student_caps.iter().chain(&raw.course_caps).any(|&c| c < 1)
        || raw.student_prefs.iter().flatten().any(|&b| b >= nc)
        || raw.course_prefs.iter().flatten().any(|&a| a >= ns)
        || !names_unique(&raw.students)
        || !names_unique(&raw.courses)
    {
        return validate(raw);
    }
    let mut by_student: Vec<Vec<usize>> = vec![Vec::new(); ns];
    for (b, list) in raw.course_prefs.iter().enumerate() {
        for &a in list {
            by_student[a].push(b);
        }
    }
    // listed[b] == a marks that student a lists course b; hits[b] == a that b lists a back.
    let mut listed = vec![usize::MAX; nc];
    let mut hits = vec![usize::MAX; nc];
    for a in 0..ns {
        for &b in &raw.student_prefs[a] {
            if listed[b] == a {
                return validate(raw);
            }
            listed[b] = a;
        }
        for &b in &by_student[a] {
            if listed[b] != a || hits[b] == a {
                return validate(raw);
            }
            hits[b] = a;
        }
        if by_student[a].len() != raw.student_prefs[a].len() {
            return validate(raw);
        }
    }
    Vec::new()
}

fn names_unique(names: &[String]) -> bool {
    let mut sorted: Vec<&String> = names.iter().collect();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Errors raised when a set of pairs is not a matching of an instance.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matching refers to vertex index {index} outside the {side:?} table")]
    IndexOutOfRange { side: Side, index: usize },
    #[error("pair ({student}, {course}) is not a mutually acceptable edge")]
    NotAnEdge { student: String, course: String },
    #[error("pair ({student}, {course}) appears twice")]
    DuplicatePair { student: String, course: String },
    #[error("`{vertex}` has {count} partners but capacity {cap}")]
    CapacityExceeded { vertex: String, count: usize, cap: usize },
    #[error("matching was built for a different instance")]
    WrongInstance,
}

/// A capacity-respecting set of student-course pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matching {
    /// Sorted by `(student, course)`.
    pairs: Vec<(usize, usize)>,
    /// Partners of each student, in the student's preference order.
    student_partners: Vec<Vec<usize>>,
    /// Partners of each course, in the course's preference order.
    course_partners: Vec<Vec<usize>>,
}

impl Matching {
    /// Validates `pairs` against `inst`: each must be an edge, no repeats, capacities respected.
    pub fn new(inst: &Instance, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Matching, MatchingError> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        let mut student_partners = vec![Vec::new(); inst.num_students()];
        let mut course_partners = vec![Vec::new(); inst.num_courses()];
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                return Err(MatchingError::DuplicatePair {
                    student: inst.students[w[0].0].clone(),
                    course: inst.courses[w[0].1].clone(),
                });
            }
        }
        for &(a, b) in &pairs {
            if a >= inst.num_students() {
                return Err(MatchingError::IndexOutOfRange {
                    side: Side::Student,
                    index: a,
                });
            }
            if b >= inst.num_courses() {
                return Err(MatchingError::IndexOutOfRange {
                    side: Side::Course,
                    index: b,
                });
            }
            let edge = inst.edge(a, b).ok_or_else(|| MatchingError::NotAnEdge {
                student: inst.students[a].clone(),
                course: inst.courses[b].clone(),
            })?;
            student_partners[a].push((edge.student_rank, b));
            course_partners[b].push((edge.course_rank, a));
        }
        let sort_side = |lists: Vec<Vec<(usize, usize)>>, side: Side| -> Result<Vec<Vec<usize>>, MatchingError> {
            lists
                .into_iter()
                .enumerate()
                .map(|(u, mut list)| {
                    let v = VertexId { side, index: u };
                    if list.len() > inst.cap(v) {
                        return Err(MatchingError::CapacityExceeded {
                            vertex: inst.name(v).to_string(),
                            count: list.len(),
                            cap: inst.cap(v),
                        });
                    }
                    list.sort_unstable();
                    Ok(list.into_iter().map(|(_, x)| x).collect())
                })
                .collect()
        };
        let student_partners = sort_side(student_partners, Side::Student)?;
        let course_partners = sort_side(course_partners, Side::Course)?;
        Ok(Matching {
            pairs,
            student_partners,
            course_partners,
        })
    }

    pub fn empty(inst: &Instance) -> Matching {
        Matching {
            pairs: Vec::new(),
            student_partners: vec![Vec::new(); inst.num_students()],
            course_partners: vec![Vec::new(); inst.num_courses()],
        }
    }

    /// Pairs sorted by `(student, course)`.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, student: usize, course: usize) -> bool {
        self.pairs.binary_search(&(student, course)).is_ok()
    }

    /// Partners of `v`, ordered by `v`'s preference.
    pub fn partners(&self, v: VertexId) -> &[usize] {
        match v.side {
            Side::Student => &self.student_partners[v.index],
            Side::Course => &self.course_partners[v.index],
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.partners(v).len()
    }

    /// Matched degree of every vertex: students first, then courses.
    pub fn degree_profile(&self) -> Vec<usize> {
        self.student_partners
            .iter()
            .chain(&self.course_partners)
            .map(Vec::len)
            .collect()
    }

    /// Checks that this matching is (still) valid for `inst`.
    pub fn check(&self, inst: &Instance) -> Result<(), MatchingError> {
        if self.student_partners.len() != inst.num_students() || self.course_partners.len() != inst.num_courses() {
            return Err(MatchingError::WrongInstance);
        }
        let rebuilt = Matching::new(inst, self.pairs.iter().copied())?;
        if rebuilt != *self {
            return Err(MatchingError::WrongInstance);
        }
        Ok(())
    }
}

/// A pair outside the matching that both endpoints would rather add.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BlockingPair {
    pub student: usize,
    pub course: usize,
}

/// Worst-partner rank of `v` if `v` is full, `None` if `v` has spare capacity.
fn worst_rank_if_full(inst: &Instance, m: &Matching, v: VertexId) -> Option<usize> {
    let partners = m.partners(v);
    if partners.len() < inst.cap(v) {
        None
    } else {
        partners
            .last()
            .map(|&w| inst.rank(v, w).expect("partner is a neighbor"))
    }
}

/// Returns whether `m` has no blocking pair, together with every blocking pair.
pub fn is_pairwise_stable(inst: &Instance, m: &Matching) -> Result<(bool, Vec<BlockingPair>), MatchingError> {
    m.check(inst)?;
    let student_worst: Vec<Option<usize>> = (0..inst.num_students())
        .map(|a| worst_rank_if_full(inst, m, VertexId::student(a)))
        .collect();
    let course_worst: Vec<Option<usize>> = (0..inst.num_courses())
        .map(|b| worst_rank_if_full(inst, m, VertexId::course(b)))
        .collect();
    let blocking: Vec<BlockingPair> = inst
        .edges()
        .iter()
        .filter(|e| !m.contains(e.student, e.course))
        .filter(|e| student_worst[e.student].is_none_or(|w| e.student_rank < w))
        .filter(|e| course_worst[e.course].is_none_or(|w| e.course_rank < w))
        .map(|e| BlockingPair {
            student: e.student,
            course: e.course,
        })
        .collect();
    Ok((blocking.is_empty(), blocking))
}

/// Maximum size of any matching.
///
/// Each vertex keeps its capacity and each pair may be used once, so this is a simple
/// b-matching; it is solved exactly by augmenting paths on the network
/// source -> student (cap) -> course (1 per edge) -> sink (cap).
pub fn max_matching_size(inst: &Instance) -> usize {
    simple_b_matching_size(inst)
}

fn simple_b_matching_size(inst: &Instance) -> usize {
    let ns = inst.num_students();
    let nc = inst.num_courses();
    let mut used = vec![false; inst.num_edges()];
    let mut s_load = vec![0usize; ns];
    let mut c_load = vec![0usize; nc];
    // course -> incident edge ids
    let mut course_edges: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (i, e) in inst.edges().iter().enumerate() {
        course_edges[e.course].push(i);
    }
    let mut size = 0;
    loop {
        // BFS over students; a student is reachable from the source if it has spare capacity,
        // or via a used edge from a reachable course.
        let mut parent_edge = vec![usize::MAX; ns];
        let mut seen_student = vec![false; ns];
        let mut seen_course = vec![false; nc];
        let mut course_parent = vec![usize::MAX; nc];
        let mut queue = std::collections::VecDeque::new();
        for a in 0..ns {
            if s_load[a] < inst.student_caps[a] as usize {
                seen_student[a] = true;
                queue.push_back(a);
            }
        }
        let mut end = None;
        while let Some(a) = queue.pop_front() {
            let lo = inst.student_edge_offsets[a];
            let hi = inst.student_edge_offsets[a + 1];
            for ei in lo..hi {
                if used[ei] {
                    continue;
                }
                let b = inst.edges[ei].course;
                if seen_course[b] {
                    continue;
                }
                seen_course[b] = true;
                course_parent[b] = ei;
                if c_load[b] < inst.course_caps[b] as usize {
                    end = Some(b);
                    break;
                }
                for &ej in &course_edges[b] {
                    if used[ej] {
                        let a2 = inst.edges[ej].student;
                        if !seen_student[a2] {
                            seen_student[a2] = true;
                            parent_edge[a2] = ej;
                            queue.push_back(a2);
                        }
                    }
                }
            }
            if end.is_some() {
                break;
            }
        }
        let Some(mut b) = end else { break };
        c_load[b] += 1;
        loop {
            let ei = course_parent[b];
            used[ei] = true;
            let a = inst.edges[ei].student;
            let back = parent_edge[a];
            if back == usize::MAX {
                s_load[a] += 1;
                break;
            }
            used[back] = false;
            b = inst.edges[back].course;
        }
        size += 1;
    }
    size
}
