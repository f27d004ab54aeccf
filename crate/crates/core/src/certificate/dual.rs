//! Dual witnesses for the max-weight complete matching LP.
//!
//! The LP asks for values `alpha` on real clones with `alpha(a_i) + alpha(b_j) >= wt(a_i, b_j)` on
//! every clone edge and `alpha(u_i) >= wt(u_i, l(u_i))`; its objective is the sum of all values.
//! A feasible solution with objective `<= 0` bounds every complete matching by `0`.

use serde::Serialize;

use super::{build_clone_graph, CertificateError, CloneGraph, CloneId, CloneMatching, Mate, NIL};
use crate::instance::Instance;
use crate::solvers::{Level, LevelMatching};

/// Block of the partition induced by the levels of the 2-level output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Part {
    A0,
    A1,
    B0,
    B1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualWitness {
    /// One value per real clone.
    pub alpha: Vec<i64>,
    /// Block of each real clone, when the witness comes from a level partition.
    pub partition: Option<Vec<Part>>,
}

/// A dual constraint, with `slack = lhs - weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Constraint {
    Edge {
        student: CloneId,
        course: CloneId,
        weight: i32,
        slack: i64,
    },
    LastResort {
        clone: CloneId,
        weight: i32,
        slack: i64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    pub feasible: bool,
    pub objective: i64,
    /// Number of constraints evaluated.
    pub checked: usize,
    pub violated: Vec<Constraint>,
}

impl DualCheck {
    /// Feasible with objective `<= 0`: the base matching is popular.
    pub fn certifies_popular(&self) -> bool {
        self.feasible && self.objective <= 0
    }
}

fn constraints<'g>(cg: &'g CloneGraph<'_>, alpha: &'g [i64]) -> impl Iterator<Item = Constraint> + 'g {
    let edges = cg.edges().iter().map(move |e| Constraint::Edge {
        student: e.student,
        course: e.course,
        weight: e.weight,
        slack: alpha[e.student] + alpha[e.course] - e.weight as i64,
    });
    let last = (0..cg.num_real()).map(move |c| {
        let weight = cg.last_resort_weight(c);
        Constraint::LastResort {
            clone: c,
            weight,
            slack: alpha[c] - weight as i64,
        }
    });
    edges.chain(last)
}

fn slack(c: &Constraint) -> i64 {
    match *c {
        Constraint::Edge { slack, .. } | Constraint::LastResort { slack, .. } => slack,
    }
}

/// Evaluates every dual constraint of `G'_N` under `w`.
pub fn check_dual(cg: &CloneGraph<'_>, w: &DualWitness) -> Result<DualCheck, CertificateError> {
    let expected = cg.num_real();
    if w.alpha.len() != expected {
        return Err(CertificateError::CloneMismatch {
            expected,
            found: w.alpha.len(),
        });
    }
    if let Some(p) = &w.partition {
        if p.len() != expected {
            return Err(CertificateError::CloneMismatch {
                expected,
                found: p.len(),
            });
        }
    }
    let mut checked = 0;
    let mut violated = Vec::new();
    for c in constraints(cg, &w.alpha) {
        checked += 1;
        if slack(&c) < 0 {
            violated.push(c);
        }
    }
    Ok(DualCheck {
        feasible: violated.is_empty(),
        objective: w.alpha.iter().sum(),
        checked,
        violated,
    })
}

/// Constraints used by `cm` that are not tight under `w`. Empty iff `cm` and `w` satisfy
/// complementary slackness on the real clones.
pub fn untight_edges(cg: &CloneGraph<'_>, w: &DualWitness, cm: &CloneMatching) -> Vec<Constraint> {
    constraints(cg, &w.alpha)
        .filter(|c| match *c {
            Constraint::Edge { student, course, .. } => cm.mate(student) == Mate::Clone(course),
            Constraint::LastResort { clone, .. } => cm.mate(clone) == Mate::LastResort,
        })
        .filter(|c| slack(c) != 0)
        .collect()
}

fn partition(cg: &CloneGraph<'_>, lm: &LevelMatching) -> Vec<Part> {
    let ns = cg.num_student_clones();
    (0..cg.num_real())
        .map(|c| {
            let p = cg.partner[c];
            let student = c < ns;
            let level = (p != NIL).then(|| {
                let (s, t) = if student { (c, p) } else { (p, c) };
                lm.level_of(cg.origin(s).index, cg.origin(t).index)
                    .expect("N' edges come from the level matching")
            });
            match (student, level) {
                (true, Some(Level::Zero)) => Part::A0,
                (true, _) => Part::A1,
                (false, Some(Level::One)) => Part::B1,
                (false, _) => Part::B0,
            }
        })
        .collect()
}

/// The witness read off the levels of a 2-level output: `+1` on `A0` and `B1`, `-1` on `A1` and
/// `B0`, and `0` on clones unmatched in `N'`.
///
/// Clone indices follow the deterministic `N'` assignment of [`build_clone_graph`].
pub fn build_dual_witness(inst: &Instance, lm: &LevelMatching) -> Result<DualWitness, CertificateError> {
    let cg = build_clone_graph(inst, lm.projection())?;
    let parts = partition(&cg, lm);
    let alpha = parts
        .iter()
        .enumerate()
        .map(|(c, part)| match (cg.partner[c] == NIL, part) {
            (true, _) => 0,
            (false, Part::A0 | Part::B1) => 1,
            (false, Part::A1 | Part::B0) => -1,
        })
        .collect();
    Ok(DualWitness {
        alpha,
        partition: Some(parts),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim1Report {
    pub holds: bool,
    /// Clone edges in `A1 x B0` with weight other than `-2`, or in `A0 x B0` / `A1 x B1` with
    /// positive weight.
    pub violations: Vec<super::CloneEdge>,
}

/// Checks the edge-weight pattern on the level partition of a 2-level output.
pub fn check_claim1(inst: &Instance, lm: &LevelMatching) -> Result<Claim1Report, CertificateError> {
    let cg = build_clone_graph(inst, lm.projection())?;
    let parts = partition(&cg, lm);
    let violations: Vec<_> = cg
        .edges()
        .iter()
        .filter(|e| match (parts[e.student], parts[e.course]) {
            (Part::A1, Part::B0) => e.weight != -2,
            (Part::A0, Part::B0) | (Part::A1, Part::B1) => e.weight > 0,
            _ => false,
        })
        .copied()
        .collect();
    Ok(Claim1Report {
        holds: violations.is_empty(),
        violations,
    })
}
