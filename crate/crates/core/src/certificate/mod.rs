//! Popularity certificates on the clone graph.
//!
//! For a matching `N`, every vertex `u` is split into `cap(u)` clones. Each pair of `N` keeps a
//! single clone edge, between the lowest-indexed clones still free on both sides when the pairs are
//! taken in `(student, course)` order; every other pair of the instance joins all clones of its two
//! endpoints. Each clone `u_i` also gets a private last-resort neighbor `l(u_i)`. An edge
//! `(a_i, b_j)` weighs `vote_a(b, N*(a_i)) + vote_b(a, N*(b_j))`, where `N*(u_i)` is the clone's
//! partner under `N` or `l(u_i)`; the edge to `l(u_i)` weighs `-1` if `u_i` is matched in `N` and
//! `0` otherwise.
//!
//! Any matching `T` of the instance induces a complete clone matching of weight `-Delta(N, T)`
//! ([`realize_matching`]), so a max-weight complete matching of weight `<= 0` proves `N` popular.
//! [`verify_popular`] computes that optimum exactly, together with an LP dual solution that anyone
//! can re-check with [`check_dual`].

mod assignment;
mod dual;

use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

pub use dual::{
    build_dual_witness, check_claim1, check_dual, untight_edges, Claim1Report, Constraint, DualCheck, DualWitness, Part,
};

use crate::instance::{Instance, Matching, MatchingError, Side, VertexId};
use crate::votes::{self, Candidate};

const NIL: usize = usize::MAX;

/// Index of a real clone: student clones first, then course clones.
pub type CloneId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CloneKind {
    Real,
    /// The private last-resort neighbor of a real clone.
    LastResort,
}

/// A vertex of the clone graph: clone `copy` (0-based) of `original`, or its last resort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CloneVertex {
    pub original: VertexId,
    pub copy: usize,
    pub kind: CloneKind,
}

/// An edge between a student clone and a course clone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CloneEdge {
    pub student: CloneId,
    pub course: CloneId,
    pub weight: i32,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error(transparent)]
    InvalidMatching(#[from] MatchingError),
    #[error("witness has {found} clone values but the clone graph has {expected} clones")]
    CloneMismatch { expected: usize, found: usize },
    #[error("clone matching is not complete and consistent: {0}")]
    BadCloneMatching(String),
    #[error(transparent)]
    Level(#[from] crate::solvers::SolverError),
}

/// The clone graph `G'_N` of a matching `N`.
#[derive(Clone, Debug)]
pub struct CloneGraph<'a> {
    inst: &'a Instance,
    base: Matching,
    /// `offsets[s][v]..offsets[s][v + 1]` are the clones of vertex `v` on side `s`.
    student_offsets: Vec<usize>,
    course_offsets: Vec<usize>,
    origin: Vec<VertexId>,
    /// Partner of each real clone under `N'`, or `NIL`.
    partner: Vec<usize>,
    /// Sorted by `(student, course)`.
    edges: Vec<CloneEdge>,
    /// Edge indices incident to each real clone.
    incident: Vec<Vec<usize>>,
}

/// Partner of a real clone in a complete clone matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mate {
    Clone(CloneId),
    LastResort,
}

/// A complete matching of the clone graph: every real clone is matched to a real clone or to its
/// last resort. Last resorts left over are matched among themselves at weight 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CloneMatching {
    mates: Vec<Mate>,
}

fn prefix_offsets(inst: &Instance, side: Side, start: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(inst.num_vertices(side) + 1);
    let mut acc = start;
    out.push(acc);
    for v in 0..inst.num_vertices(side) {
        acc += inst.cap(VertexId { side, index: v });
        out.push(acc);
    }
    out
}

fn vote_rank(inst: &Instance, u: VertexId, v: usize, rank_w: usize) -> i32 {
    let rv = inst.rank(u, v).expect("clone edges are instance edges");
    match rv.cmp(&rank_w) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => -1,
    }
}

/// Builds `G'_N`. Fails if `n` is not a matching of `inst`.
pub fn build_clone_graph<'a>(inst: &'a Instance, n: &Matching) -> Result<CloneGraph<'a>, CertificateError> {
    n.check(inst)?;
    let student_offsets = prefix_offsets(inst, Side::Student, 0);
    let n_student_clones = *student_offsets.last().unwrap();
    let course_offsets = prefix_offsets(inst, Side::Course, n_student_clones);
    let n_real = *course_offsets.last().unwrap();

    let mut origin = Vec::with_capacity(n_real);
    for a in 0..inst.num_students() {
        origin.extend(std::iter::repeat_n(
            VertexId::student(a),
            inst.cap(VertexId::student(a)),
        ));
    }
    for b in 0..inst.num_courses() {
        origin.extend(std::iter::repeat_n(VertexId::course(b), inst.cap(VertexId::course(b))));
    }

    // N' assignment: pairs in (student, course) order take the next free clone on each side
    let mut next_student: Vec<usize> = student_offsets[..inst.num_students()].to_vec();
    let mut next_course: Vec<usize> = course_offsets[..inst.num_courses()].to_vec();
    let mut partner = vec![NIL; n_real];
    let mut n_prime = Vec::with_capacity(n.len());
    for &(a, b) in n.pairs() {
        let (ca, cb) = (next_student[a], next_course[b]);
        next_student[a] += 1;
        next_course[b] += 1;
        partner[ca] = cb;
        partner[cb] = ca;
        n_prime.push((ca, cb));
    }

    // rank of N*(u_i) in u's list; the last resort ranks after every neighbor
    let star_rank: Vec<usize> = (0..n_real)
        .map(|c| match partner[c] {
            NIL => usize::MAX,
            p => inst.rank(origin[c], origin[p].index).expect("N is a matching"),
        })
        .collect();

    let mut edges = Vec::new();
    let mut kept = 0;
    for e in inst.edges() {
        if n.contains(e.student, e.course) {
            let (ca, cb) = n_prime[kept];
            kept += 1;
            edges.push(CloneEdge {
                student: ca,
                course: cb,
                weight: 0,
            });
            continue;
        }
        let (sa, sb) = (VertexId::student(e.student), VertexId::course(e.course));
        for ca in student_offsets[e.student]..student_offsets[e.student + 1] {
            let wa = vote_rank(inst, sa, e.course, star_rank[ca]);
            for cb in course_offsets[e.course]..course_offsets[e.course + 1] {
                let wb = vote_rank(inst, sb, e.student, star_rank[cb]);
                edges.push(CloneEdge {
                    student: ca,
                    course: cb,
                    weight: wa + wb,
                });
            }
        }
    }
    debug_assert_eq!(kept, n.len());
    edges.sort_unstable_by_key(|e| (e.student, e.course));
    let mut incident = vec![Vec::new(); n_real];
    for (i, e) in edges.iter().enumerate() {
        incident[e.student].push(i);
        incident[e.course].push(i);
    }

    Ok(CloneGraph {
        inst,
        base: n.clone(),
        student_offsets,
        course_offsets,
        origin,
        partner,
        edges,
        incident,
    })
}

impl<'a> CloneGraph<'a> {
    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// The matching `N` that the graph was built for.
    pub fn base(&self) -> &Matching {
        &self.base
    }

    /// Number of real clones; last resorts are numbered after them.
    pub fn num_real(&self) -> usize {
        self.origin.len()
    }

    pub fn num_student_clones(&self) -> usize {
        self.course_offsets[0]
    }

    pub fn num_course_clones(&self) -> usize {
        self.num_real() - self.num_student_clones()
    }

    /// Clones of an instance vertex.
    pub fn clones_of(&self, v: VertexId) -> Range<CloneId> {
        let offsets = match v.side {
            Side::Student => &self.student_offsets,
            Side::Course => &self.course_offsets,
        };
        offsets[v.index]..offsets[v.index + 1]
    }

    /// Describes vertex `id`: real clones are `0..num_real()`, last resorts follow in the same order.
    pub fn vertex(&self, id: usize) -> CloneVertex {
        let (real, kind) = if id < self.num_real() {
            (id, CloneKind::Real)
        } else {
            (id - self.num_real(), CloneKind::LastResort)
        };
        let original = self.origin[real];
        CloneVertex {
            original,
            copy: real - self.clones_of(original).start,
            kind,
        }
    }

    /// The original vertex of real clone `c`.
    pub fn origin(&self, c: CloneId) -> VertexId {
        self.origin[c]
    }

    /// Graph id of `l(c)`.
    pub fn last_resort(&self, c: CloneId) -> usize {
        c + self.num_real()
    }

    /// Human-readable label such as `b_2` or `l(b_2)`.
    pub fn label(&self, id: usize) -> String {
        let v = self.vertex(id);
        let base = format!("{}_{}", self.inst.name(v.original), v.copy + 1);
        match v.kind {
            CloneKind::Real => base,
            CloneKind::LastResort => format!("l({base})"),
        }
    }

    /// Partner of `c` under `N'`.
    pub fn n_prime_partner(&self, c: CloneId) -> Option<CloneId> {
        (self.partner[c] != NIL).then_some(self.partner[c])
    }

    /// Edges among real clones, sorted by `(student, course)`.
    pub fn edges(&self) -> &[CloneEdge] {
        &self.edges
    }

    /// Edges incident to real clone `c`.
    pub fn incident(&self, c: CloneId) -> impl Iterator<Item = &CloneEdge> + '_ {
        self.incident[c].iter().map(move |&i| &self.edges[i])
    }

    pub fn edge(&self, student: CloneId, course: CloneId) -> Option<&CloneEdge> {
        self.edges
            .binary_search_by(|e| (e.student, e.course).cmp(&(student, course)))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Weight of the edge `(c, l(c))`.
    pub fn last_resort_weight(&self, c: CloneId) -> i32 {
        if self.partner[c] == NIL {
            0
        } else {
            -1
        }
    }

    /// `N*`: `N'` completed by sending every unmatched clone to its last resort.
    pub fn n_star(&self) -> CloneMatching {
        CloneMatching {
            mates: self
                .partner
                .iter()
                .map(|&p| if p == NIL { Mate::LastResort } else { Mate::Clone(p) })
                .collect(),
        }
    }

    /// Length of a shortest `N'`-augmenting path among real clones, or `None` if `N'` is maximum.
    pub fn shortest_augmenting_path(&self) -> Option<usize> {
        let ns = self.num_student_clones();
        let adj: Vec<Vec<usize>> = (0..ns)
            .map(|c| self.incident(c).map(|e| e.course - ns).collect())
            .collect();
        let mate_left: Vec<usize> = (0..ns)
            .map(|c| {
                if self.partner[c] == NIL {
                    NIL
                } else {
                    self.partner[c] - ns
                }
            })
            .collect();
        crate::bipartite::shortest_augmenting_path(&adj, self.num_course_clones(), &mate_left)
    }
}

impl CloneMatching {
    /// Validates a complete matching given by the mate of every real clone.
    pub fn new(cg: &CloneGraph<'_>, mates: Vec<Mate>) -> Result<CloneMatching, CertificateError> {
        if mates.len() != cg.num_real() {
            return Err(CertificateError::CloneMismatch {
                expected: cg.num_real(),
                found: mates.len(),
            });
        }
        for (c, m) in mates.iter().enumerate() {
            if let Mate::Clone(d) = *m {
                if d >= mates.len() || mates[d] != Mate::Clone(c) {
                    return Err(CertificateError::BadCloneMatching(format!(
                        "{} is not matched back",
                        cg.label(c)
                    )));
                }
                let (s, t) = if c < d { (c, d) } else { (d, c) };
                if cg.edge(s, t).is_none() {
                    return Err(CertificateError::BadCloneMatching(format!(
                        "({}, {}) is not an edge",
                        cg.label(s),
                        cg.label(t)
                    )));
                }
            }
        }
        Ok(CloneMatching { mates })
    }

    pub fn mate(&self, c: CloneId) -> Mate {
        self.mates[c]
    }

    pub fn mates(&self) -> &[Mate] {
        &self.mates
    }

    /// Pairs of real clones, student clone first, in increasing order.
    pub fn real_pairs(&self) -> impl Iterator<Item = (CloneId, CloneId)> + '_ {
        self.mates.iter().enumerate().filter_map(|(c, m)| match *m {
            Mate::Clone(d) if c < d => Some((c, d)),
            _ => None,
        })
    }

    pub fn weight(&self, cg: &CloneGraph<'_>) -> i64 {
        let mut w = 0i64;
        for (c, m) in self.mates.iter().enumerate() {
            match *m {
                Mate::LastResort => w += cg.last_resort_weight(c) as i64,
                Mate::Clone(d) if c < d => w += cg.edge(c, d).expect("validated").weight as i64,
                Mate::Clone(_) => {}
            }
        }
        w
    }

    /// The distinct instance pairs used by this matching.
    pub fn project_distinct(&self, cg: &CloneGraph<'_>) -> Matching {
        let mut pairs: Vec<(usize, usize)> = self
            .real_pairs()
            .map(|(s, t)| (cg.origin(s).index, cg.origin(t).index))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Matching::new(cg.inst, pairs).expect("distinct clones respect capacities")
    }

    /// The instance pairs used by this matching, or `None` if some pair is used by two clone edges.
    pub fn project(&self, cg: &CloneGraph<'_>) -> Option<Matching> {
        let mut pairs: Vec<(usize, usize)> = self
            .real_pairs()
            .map(|(s, t)| (cg.origin(s).index, cg.origin(t).index))
            .collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Matching::new(cg.inst, pairs).ok()
    }
}

/// The complete clone matching `T*` induced by a matching `T`, with weight `-Delta(N, T)`.
///
/// Pairs of `N ∩ T` keep their `N'` clone edge. For a pair `(a, b)` of `T \ N`, the clone of `a`
/// used is the one matched in `N'` to the element that `b` is compared against in `a`'s adversarial
/// pairing, or an `N'`-unmatched clone of `a` when that element is `Null`; likewise for `b`.
/// Clones left over go to their last resorts.
pub fn realize_matching(cg: &CloneGraph<'_>, t: &Matching) -> Result<CloneMatching, CertificateError> {
    let inst = cg.inst;
    t.check(inst)?;
    let n = &cg.base;
    let mut mates = vec![Mate::LastResort; cg.num_real()];

    // clone of u assigned to each partner x in T(u) \ N(u)
    let assign = |u: VertexId| -> Vec<(usize, CloneId)> {
        let cmp = votes::compare_sets(inst, u, n.partners(u), t.partners(u)).expect("both are matchings");
        let clones = cg.clones_of(u);
        let mut free = clones.clone().filter(|&c| cg.partner[c] == NIL);
        let mut out = Vec::new();
        let mut inverse = vec![0usize; cmp.k()];
        for (i0, &i1) in cmp.pairing.iter().enumerate() {
            inverse[i1] = i0;
        }
        for (i1, x) in cmp.s1.iter().enumerate() {
            let Candidate::Neighbor(x) = *x else { continue };
            let clone = match cmp.s0[inverse[i1]] {
                Candidate::Neighbor(y) => clones
                    .clone()
                    .find(|&c| cg.partner[c] != NIL && cg.origin[cg.partner[c]].index == y),
                Candidate::Null => free.next(),
            };
            out.push((x, clone.expect("T respects capacities")));
        }
        out
    };
    let student_assign: Vec<Vec<(usize, CloneId)>> =
        (0..inst.num_students()).map(|a| assign(VertexId::student(a))).collect();
    let course_assign: Vec<Vec<(usize, CloneId)>> =
        (0..inst.num_courses()).map(|b| assign(VertexId::course(b))).collect();
    let find = |list: &[(usize, CloneId)], x: usize| list.iter().find(|p| p.0 == x).map(|p| p.1).unwrap();

    for &(a, b) in t.pairs() {
        let (ca, cb) = if n.contains(a, b) {
            let ca = cg
                .clones_of(VertexId::student(a))
                .find(|&c| cg.partner[c] != NIL && cg.origin[cg.partner[c]].index == b)
                .expect("pair of N has an N' edge");
            (ca, cg.partner[ca])
        } else {
            (find(&student_assign[a], b), find(&course_assign[b], a))
        };
        mates[ca] = Mate::Clone(cb);
        mates[cb] = Mate::Clone(ca);
    }
    CloneMatching::new(cg, mates)
}

/// Optimum of the max-weight complete matching problem, with an optimal LP dual.
#[derive(Clone, Debug)]
pub struct MaxWeightSolution {
    pub value: i64,
    pub matching: CloneMatching,
    /// Dual values per real clone: feasible for [`check_dual`] with objective `value`.
    pub alpha: Vec<i64>,
}

/// Exact max-weight complete matching of `G'_N` as an assignment problem.
///
/// Rows are the student clones followed by `l(b_j)` for each course clone; columns are the course
/// clones followed by `l(a_i)` for each student clone. Last resorts pair among themselves at 0.
pub fn max_weight_complete_matching(cg: &CloneGraph<'_>) -> MaxWeightSolution {
    use assignment::FORBIDDEN;
    let na = cg.num_student_clones();
    let nb = cg.num_course_clones();
    let n = na + nb;
    let mut cost = vec![FORBIDDEN; n * n];
    for e in &cg.edges {
        cost[e.student * n + (e.course - na)] = -(e.weight as i64);
    }
    for i in 0..na {
        cost[i * n + nb + i] = -(cg.last_resort_weight(i) as i64);
    }
    for j in 0..nb {
        cost[(na + j) * n + j] = -(cg.last_resort_weight(na + j) as i64);
        for c in nb..n {
            cost[(na + j) * n + c] = 0;
        }
    }
    let sol = assignment::min_cost_assignment(n, |r, c| cost[r * n + c]);

    let mut mates = vec![Mate::LastResort; cg.num_real()];
    for (i, &c) in sol.row_to_col.iter().enumerate().take(na) {
        if c < nb {
            mates[i] = Mate::Clone(na + c);
            mates[na + c] = Mate::Clone(i);
        }
    }
    // maximization duals: p = -u, q = -v; a clone's value absorbs its last-resort partner's
    let p = |r: usize| -sol.row_potential[r];
    let q = |c: usize| -sol.col_potential[c];
    let mut alpha = vec![0i64; cg.num_real()];
    for (i, slot) in alpha.iter_mut().enumerate().take(na) {
        *slot = p(i) + q(nb + i);
    }
    for j in 0..nb {
        alpha[na + j] = q(j) + p(na + j);
    }
    MaxWeightSolution {
        value: -sol.cost,
        matching: CloneMatching::new(cg, mates).expect("assignment uses only clone edges"),
        alpha,
    }
}

/// Edge count above which [`improve_witness`] only evaluates its starting point.
const LOCAL_SEARCH_EDGES: usize = 2_000;

/// Descends on `Delta(n, t)` from `t` by single-pair additions, removals and swaps, and returns
/// the first matching found with `Delta(n, t) < 0`.
fn improve_witness(inst: &Instance, n: &Matching, mut t: Matching) -> Option<(Matching, i64)> {
    let mut best = votes::big_delta_unchecked(inst, n, &t);
    if best < 0 {
        return Some((t, best));
    }
    if inst.num_edges() > LOCAL_SEARCH_EDGES {
        return None;
    }
    loop {
        let current: Vec<(usize, usize)> = t.pairs().to_vec();
        let mut candidates: Vec<Vec<(usize, usize)>> = Vec::new();
        for i in 0..current.len() {
            let mut c = current.clone();
            c.remove(i);
            candidates.push(c);
        }
        for e in inst.edges() {
            if t.contains(e.student, e.course) {
                continue;
            }
            let mut c = current.clone();
            c.push((e.student, e.course));
            candidates.push(c);
            for i in 0..current.len() {
                if current[i].0 == e.student || current[i].1 == e.course {
                    let mut c = current.clone();
                    c[i] = (e.student, e.course);
                    candidates.push(c);
                }
            }
        }
        let step = candidates
            .into_iter()
            .filter_map(|c| Matching::new(inst, c).ok())
            .map(|m| (votes::big_delta_unchecked(inst, n, &m), m))
            .min_by_key(|(d, _)| *d)?;
        if step.0 >= best {
            return None;
        }
        (best, t) = step;
        if best < 0 {
            return Some((t, best));
        }
    }
}

/// Outcome of [`verify_popular`].
#[derive(Clone, Debug)]
pub enum Verdict {
    /// The optimum is `<= 0`; `dual` certifies it.
    Popular { optimum: i64, dual: DualWitness },
    /// `witness` beats `N`: `Delta(N, witness) = delta < 0`.
    NotPopular {
        optimum: i64,
        witness: Matching,
        delta: i64,
    },
    /// The optimum is positive but no matching beating `N` was found from the optimal clone
    /// matching. `N` may still be popular: the clone-graph bound is not tight when capacities exceed 1.
    Inconclusive { optimum: i64, clone_witness: CloneMatching },
}

/// Decides popularity of `n` through the clone graph.
///
/// A non-positive optimum proves popularity. Otherwise the distinct pairs of the optimal clone
/// matching seed a local search on `Delta`; [`Verdict::NotPopular`] is returned only with a matching
/// that is checked to win the vote outright.
pub fn verify_popular(inst: &Instance, n: &Matching) -> Result<Verdict, CertificateError> {
    let cg = build_clone_graph(inst, n)?;
    let sol = max_weight_complete_matching(&cg);
    if sol.value <= 0 {
        return Ok(Verdict::Popular {
            optimum: sol.value,
            dual: DualWitness {
                alpha: sol.alpha,
                partition: None,
            },
        });
    }
    let start = sol.matching.project_distinct(&cg);
    if let Some((witness, delta)) = improve_witness(inst, n, start) {
        return Ok(Verdict::NotPopular {
            optimum: sol.value,
            witness,
            delta,
        });
    }
    Ok(Verdict::Inconclusive {
        optimum: sol.value,
        clone_witness: sol.matching,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::instance::parse_instance;
    use crate::solvers::max_size_popular;

    pub(crate) fn appendix() -> Instance {
        parse_instance(
            "students: p q r s\ncourses: h h' h''\ncap: h 2\n\
             pref: p h h''\npref: q h h'\npref: r h\npref: s h\n\
             pref: h p q r s\npref: h' q\npref: h'' p\n",
        )
        .unwrap()
    }

    fn intro() -> Instance {
        parse_instance("students: a a'\ncourses: b b'\npref: a b b'\npref: a' b\npref: b a a'\npref: b' a\n").unwrap()
    }

    #[test]
    fn appendix_clone_graph() {
        let inst = appendix();
        let n = Matching::new(&inst, [(0, 0), (1, 1), (2, 0)]).unwrap();
        let cg = build_clone_graph(&inst, &n).unwrap();
        assert_eq!(cg.num_real(), 4 + 4);
        let label = |c| cg.label(c);
        let mut np: Vec<(String, String)> = (0..cg.num_student_clones())
            .filter_map(|c| cg.n_prime_partner(c).map(|d| (label(c), label(d))))
            .collect();
        np.sort();
        let expect = [("p_1", "h_1"), ("q_1", "h'_1"), ("r_1", "h_2")];
        assert_eq!(np, expect.map(|(a, b)| (a.to_string(), b.to_string())));
        let positive: Vec<_> = cg.edges().iter().filter(|e| e.weight > 0).collect();
        assert_eq!(positive.len(), 1);
        assert_eq!(
            (label(positive[0].student), label(positive[0].course)),
            ("q_1".into(), "h_2".into())
        );
        assert_eq!(positive[0].weight, 2);
        assert!(cg.edges().iter().all(|e| [-2, 0, 2].contains(&e.weight)));
    }

    #[test]
    fn appendix_is_popular() {
        let inst = appendix();
        let n = Matching::new(&inst, [(0, 0), (1, 1), (2, 0)]).unwrap();
        match verify_popular(&inst, &n).unwrap() {
            Verdict::Popular { optimum, dual } => {
                assert_eq!(optimum, 0);
                let cg = build_clone_graph(&inst, &n).unwrap();
                let check = check_dual(&cg, &dual).unwrap();
                assert!(check.feasible && check.objective == 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn intro_verdicts() {
        let inst = intro();
        let stable = Matching::new(&inst, [(0, 0)]).unwrap();
        match verify_popular(&inst, &stable).unwrap() {
            Verdict::Popular { optimum, .. } => assert_eq!(optimum, 0),
            other => panic!("the stable matching is popular, got {other:?}"),
        }
        let empty = Matching::empty(&inst);
        match verify_popular(&inst, &empty).unwrap() {
            Verdict::NotPopular { delta, witness, .. } => {
                assert!(delta < 0);
                assert!(!witness.is_empty());
            }
            other => panic!("empty matching is not popular, got {other:?}"),
        }
    }

    #[test]
    fn realization_weight_matches_delta() {
        let inst = appendix();
        let n = Matching::new(&inst, [(0, 0), (1, 1), (2, 0)]).unwrap();
        let cg = build_clone_graph(&inst, &n).unwrap();
        for pairs in [
            vec![],
            vec![(1, 0), (3, 0)],
            vec![(0, 2), (1, 0), (2, 0)],
            vec![(0, 0), (1, 0)],
        ] {
            let t = Matching::new(&inst, pairs).unwrap();
            let tstar = realize_matching(&cg, &t).unwrap();
            assert_eq!(tstar.weight(&cg), -votes::big_delta(&inst, &n, &t).unwrap());
            assert_eq!(tstar.project(&cg).unwrap(), t);
        }
        assert_eq!(realize_matching(&cg, &n).unwrap(), cg.n_star());
        assert_eq!(cg.n_star().weight(&cg), 0);
    }

    #[test]
    fn positive_optimum_on_popular_matching() {
        let inst = parse_instance(
            "students: s1 s2\ncourses: c1 c2\ncap: s1 2\npref: s1 c2 c1\npref: s2 c2 c1\n\
             pref: c1 s2 s1\npref: c2 s2 s1\n",
        )
        .unwrap();
        let n = Matching::new(&inst, [(0, 1), (1, 0)]).unwrap();
        let oracle = crate::oracle::is_popular_bruteforce(&inst, &n, &Default::default()).unwrap();
        assert!(oracle.holds);
        match verify_popular(&inst, &n).unwrap() {
            Verdict::Inconclusive { optimum, .. } => assert_eq!(optimum, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn maxpop_output_is_certified() {
        let inst = intro();
        let lm = max_size_popular(&inst);
        assert!(matches!(
            verify_popular(&inst, lm.projection()).unwrap(),
            Verdict::Popular { .. }
        ));
        let cg = build_clone_graph(&inst, lm.projection()).unwrap();
        assert!(cg.shortest_augmenting_path().is_none());
    }
}
