//! Proposal algorithms: many-to-many deferred acceptance and the 2-level Gale-Shapley procedure.
//!
//! Both run on one engine. Every student has one proposing copy per level; a course ranks all
//! level-1 copies above all level-0 copies and keeps its original order within a level, so the rank
//! of `a^0` in the course's doubled list is `rank(a^1) + deg(b)`. A course stores its partners as
//! flags over that doubled list and tracks `MaxRank`, the position of its worst partner once full.
//! A copy proposes only if its rank beats `MaxRank`, which removes pruned edges without touching
//! any adjacency list. Each copy scans its list once and every `MaxRank` pointer only moves left,
//! so a run is linear in the size of the instance.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::instance::{Instance, Matching, MatchingError, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    Zero,
    One,
}

impl Level {
    pub fn as_u8(self) -> u8 {
        match self {
            Level::Zero => 0,
            Level::One => 1,
        }
    }
}

/// An edge of the output matching, tagged with the level of the student copy holding it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LeveledEdge {
    pub student: usize,
    pub course: usize,
    pub level: Level,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("pair ({student}, {course}) is held at both levels")]
    BothLevels { student: usize, course: usize },
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

/// Output of [`max_size_popular`]: level-tagged edges and their projection onto `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMatching {
    edges: Vec<LeveledEdge>,
    projection: Matching,
    residual: Vec<usize>,
}

impl LevelMatching {
    /// Checks the level invariants: each pair at most once across levels, projection a matching.
    pub fn from_edges(
        inst: &Instance,
        edges: impl IntoIterator<Item = LeveledEdge>,
    ) -> Result<LevelMatching, SolverError> {
        let mut edges: Vec<LeveledEdge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();
        for w in edges.windows(2) {
            if (w[0].student, w[0].course) == (w[1].student, w[1].course) {
                return Err(SolverError::BothLevels {
                    student: w[0].student,
                    course: w[0].course,
                });
            }
        }
        let projection = Matching::new(inst, edges.iter().map(|e| (e.student, e.course)))?;
        let residual = (0..inst.num_students())
            .map(|a| inst.cap(VertexId::student(a)) - projection.degree(VertexId::student(a)))
            .collect();
        Ok(LevelMatching {
            edges,
            projection,
            residual,
        })
    }

    /// Edges sorted by `(student, course)`.
    pub fn edges(&self) -> &[LeveledEdge] {
        &self.edges
    }

    /// The matching obtained by dropping level tags.
    pub fn projection(&self) -> &Matching {
        &self.projection
    }

    pub fn into_projection(self) -> Matching {
        self.projection
    }

    /// `cap(a) - |M0(a)|` for each student.
    pub fn residual(&self) -> &[usize] {
        &self.residual
    }

    /// Level at which pair `(student, course)` is held, if it is.
    pub fn level_of(&self, student: usize, course: usize) -> Option<Level> {
        self.edges
            .binary_search_by(|e| (e.student, e.course).cmp(&(student, course)))
            .ok()
            .map(|i| self.edges[i].level)
    }
}

/// Drops level tags, re-checking the matching invariants.
pub fn project(inst: &Instance, lm: &LevelMatching) -> Result<Matching, SolverError> {
    for w in lm.edges.windows(2) {
        if (w[0].student, w[0].course) == (w[1].student, w[1].course) {
            return Err(SolverError::BothLevels {
                student: w[0].student,
                course: w[0].course,
            });
        }
    }
    Ok(Matching::new(inst, lm.edges.iter().map(|e| (e.student, e.course)))?)
}

/// Work counters of one proposal run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProposalStats {
    /// List cells scanned by proposing copies, pruned or not.
    pub scans: usize,
    /// Proposals actually made.
    pub proposals: usize,
    pub rejections: usize,
    pub replacements: usize,
    /// Total leftward moves of all `MaxRank` pointers.
    pub pointer_moves: usize,
}

struct ProposalState<'a> {
    inst: &'a Instance,
    levels: usize,
    queue: VecDeque<usize>,
    in_queue: Vec<bool>,
    /// Next list position of each student copy (`copy = student * levels + level`).
    cursor: Vec<usize>,
    residual: Vec<usize>,
    /// Start of each course's block in `flags`; a block has `levels * deg(b)` cells.
    block: Vec<usize>,
    flags: Vec<bool>,
    held: Vec<usize>,
    /// No flag to the right of `pointer[b]` is set; when `b` is full it marks the worst partner.
    pointer: Vec<usize>,
    stats: ProposalStats,
}

impl<'a> ProposalState<'a> {
    fn new(inst: &'a Instance, levels: usize) -> Self {
        let ns = inst.num_students();
        let nc = inst.num_courses();
        let mut block = Vec::with_capacity(nc + 1);
        let mut total = 0;
        let mut pointer = Vec::with_capacity(nc);
        for b in 0..nc {
            block.push(total);
            let len = levels * inst.degree(VertexId::course(b));
            pointer.push(len.saturating_sub(1));
            total += len;
        }
        block.push(total);
        // level-0 copies first, in input order
        let queue: VecDeque<usize> = (0..ns).map(|a| a * levels).collect();
        let mut in_queue = vec![false; ns * levels];
        for &c in &queue {
            in_queue[c] = true;
        }
        ProposalState {
            inst,
            levels,
            queue,
            in_queue,
            cursor: vec![0; ns * levels],
            residual: (0..ns).map(|a| inst.cap(VertexId::student(a))).collect(),
            block,
            flags: vec![false; total],
            held: vec![0; nc],
            pointer,
            stats: ProposalStats::default(),
        }
    }

    fn deg(&self, b: usize) -> usize {
        (self.block[b + 1] - self.block[b]) / self.levels
    }

    /// Position of copy `(level, rank)` in course `b`'s doubled list.
    fn position(&self, b: usize, level: usize, rank: usize) -> usize {
        if self.levels == 2 && level == 0 {
            rank + self.deg(b)
        } else {
            rank
        }
    }

    fn max_rank(&self, b: usize) -> usize {
        if self.held[b] == self.inst.cap(VertexId::course(b)) {
            self.pointer[b]
        } else {
            usize::MAX
        }
    }

    fn flag(&mut self, b: usize, pos: usize) -> &mut bool {
        &mut self.flags[self.block[b] + pos]
    }

    fn settle_pointer(&mut self, b: usize) {
        let base = self.block[b];
        while !self.flags[base + self.pointer[b]] {
            self.pointer[b] -= 1;
            self.stats.pointer_moves += 1;
        }
    }

    fn enqueue(&mut self, copy: usize) {
        if !self.in_queue[copy] {
            self.in_queue[copy] = true;
            self.queue.push_back(copy);
        }
    }

    /// Copy whose cell is `pos` in course `b`'s list.
    fn occupant(&self, b: usize, pos: usize) -> usize {
        let deg = self.deg(b);
        let (level, rank) = if self.levels == 2 && pos < deg {
            (1, pos)
        } else {
            (0, pos % deg)
        };
        let student = self.inst.prefs(VertexId::course(b))[rank];
        student * self.levels + level
    }

    fn run(&mut self) {
        let inst = self.inst;
        while let Some(copy) = self.queue.pop_front() {
            self.in_queue[copy] = false;
            let a = copy / self.levels;
            let level = copy % self.levels;
            let list = inst.prefs(VertexId::student(a));
            let cross = inst.student_cross_ranks(a);
            while self.residual[a] > 0 && self.cursor[copy] < list.len() {
                let i = self.cursor[copy];
                self.cursor[copy] += 1;
                self.stats.scans += 1;
                let b = list[i];
                let rank = cross[i];
                let pos = self.position(b, level, rank);
                if pos >= self.max_rank(b) {
                    continue;
                }
                self.stats.proposals += 1;
                *self.flag(b, pos) = true;
                let cap = inst.cap(VertexId::course(b));
                let lower = rank + self.deg(b);
                if self.levels == 2 && level == 1 && self.flags[self.block[b] + lower] {
                    // (a^0, b) is replaced by (a^1, b); residual(a) is unchanged
                    *self.flag(b, lower) = false;
                    self.stats.replacements += 1;
                    if self.held[b] == cap {
                        self.settle_pointer(b);
                    }
                    continue;
                }
                self.residual[a] -= 1;
                self.held[b] += 1;
                if self.held[b] > cap {
                    let worst = self.pointer[b];
                    *self.flag(b, worst) = false;
                    self.held[b] -= 1;
                    self.stats.rejections += 1;
                    let loser = self.occupant(b, worst);
                    self.residual[loser / self.levels] += 1;
                    self.enqueue(loser);
                }
                if self.held[b] == cap {
                    self.settle_pointer(b);
                }
            }
            if self.levels == 2 && level == 0 && self.residual[a] > 0 {
                self.enqueue(copy + 1);
            }
        }
    }

    fn edges(&self) -> Vec<LeveledEdge> {
        let mut out = Vec::new();
        for b in 0..self.inst.num_courses() {
            for pos in 0..self.block[b + 1] - self.block[b] {
                if self.flags[self.block[b] + pos] {
                    let copy = self.occupant(b, pos);
                    let level = if copy % self.levels == 1 {
                        Level::One
                    } else {
                        Level::Zero
                    };
                    out.push(LeveledEdge {
                        student: copy / self.levels,
                        course: b,
                        level,
                    });
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Student-proposing deferred acceptance. The result has no blocking pair.
///
/// Students start in input order on a FIFO queue and propose down their lists; a course over
/// capacity rejects its worst partner, who rejoins the queue at the tail.
pub fn stable_matching(inst: &Instance) -> Matching {
    let mut state = ProposalState::new(inst, 1);
    state.run();
    let pairs = state.edges().into_iter().map(|e| (e.student, e.course));
    Matching::new(inst, pairs).expect("deferred acceptance respects capacities")
}

/// The 2-level Gale-Shapley procedure. Its projection is a max-size popular matching.
pub fn max_size_popular(inst: &Instance) -> LevelMatching {
    max_size_popular_with_stats(inst).0
}

/// [`max_size_popular`] together with its work counters.
pub fn max_size_popular_with_stats(inst: &Instance) -> (LevelMatching, ProposalStats) {
    let mut state = ProposalState::new(inst, 2);
    state.run();
    let residual = state.residual.clone();
    let lm = LevelMatching::from_edges(inst, state.edges()).expect("2-level run keeps the level invariants");
    debug_assert_eq!(lm.residual, residual);
    (lm, state.stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{is_pairwise_stable, parse_instance};

    fn intro() -> Instance {
        parse_instance("students: a a'\ncourses: b b'\npref: a b b'\npref: a' b\npref: b a a'\npref: b' a\n").unwrap()
    }

    fn rural() -> Instance {
        parse_instance(
            "students: r r'\ncourses: h h'\ncap: h' 2\npref: r h h'\npref: r' h h'\npref: h r r'\npref: h' r r'\n",
        )
        .unwrap()
    }

    #[test]
    fn intro_stable() {
        let inst = intro();
        assert_eq!(stable_matching(&inst).pairs(), [(0, 0)]);
    }

    #[test]
    fn intro_two_level() {
        let inst = intro();
        let lm = max_size_popular(&inst);
        assert_eq!(lm.projection().pairs(), [(0, 1), (1, 0)]);
        assert_eq!(lm.level_of(1, 0), Some(Level::One));
        assert_eq!(lm.level_of(0, 1), Some(Level::Zero));
        assert_eq!(lm.residual(), [0, 0]);
        assert_eq!(project(&inst, &lm).unwrap(), *lm.projection());
    }

    #[test]
    fn rural_example() {
        let inst = rural();
        assert_eq!(stable_matching(&inst).pairs(), [(0, 0), (1, 1)]);
        let lm = max_size_popular(&inst);
        assert_eq!(lm.projection().pairs(), [(0, 0), (1, 1)]);
        assert!(lm.edges().iter().all(|e| e.level == Level::Zero));
    }

    #[test]
    fn empty_instance() {
        let inst = parse_instance("").unwrap();
        assert!(stable_matching(&inst).is_empty());
        assert!(max_size_popular(&inst).edges().is_empty());
    }

    #[test]
    fn replacement_keeps_residual() {
        // a^0 holds b and c, x^0 bumps it from b, a^1 takes b back, x^1 bumps a^1, and a^1
        // finally proposes to c, where a^0 still sits, replacing that edge.
        let inst = parse_instance(
            "students: a x\ncourses: b c\ncap: a 2\n\
             pref: a b c\npref: x b\npref: b x a\npref: c a\n",
        )
        .unwrap();
        let (lm, stats) = max_size_popular_with_stats(&inst);
        assert_eq!(stable_matching(&inst).pairs(), [(0, 1), (1, 0)]);
        assert_eq!(lm.projection().pairs(), [(0, 1), (1, 0)]);
        assert_eq!(lm.level_of(0, 1), Some(Level::One));
        assert_eq!(stats.replacements, 1);
        assert_eq!(lm.residual(), [1, 0]);
    }

    #[test]
    fn from_edges_rejects_both_levels() {
        let inst = intro();
        let both = [
            LeveledEdge {
                student: 0,
                course: 0,
                level: Level::Zero,
            },
            LeveledEdge {
                student: 0,
                course: 0,
                level: Level::One,
            },
        ];
        assert_eq!(
            LevelMatching::from_edges(&inst, both),
            Err(SolverError::BothLevels { student: 0, course: 0 })
        );
        let single = [LeveledEdge {
            student: 0,
            course: 0,
            level: Level::One,
        }];
        assert_eq!(
            project(&inst, &LevelMatching::from_edges(&inst, single).unwrap())
                .unwrap()
                .pairs(),
            [(0, 0)]
        );
        assert!(project(&inst, &LevelMatching::from_edges(&inst, []).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn random_stable_outputs_have_no_blocking_pairs() {
        for seed in 0..200 {
            let inst = crate::instance::random_instance(6, 5, 3, 0.6, seed);
            let s = stable_matching(&inst);
            assert!(is_pairwise_stable(&inst, &s).unwrap().0, "seed {seed}");
            let lm = max_size_popular(&inst);
            assert!(s.len() <= lm.projection().len(), "seed {seed}");
        }
    }
}
