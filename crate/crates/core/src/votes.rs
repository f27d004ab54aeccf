//! Votes between matchings.
//!
//! A vertex compares two partner sets by discarding the shared partners, padding the shorter
//! remainder with [`Candidate::Null`], and summing per-pair votes under the pairing that is worst
//! for the first set. [`big_delta`] sums this over all vertices.

use itertools::Itertools;
use thiserror::Error;

use crate::instance::{Instance, Matching, MatchingError, VertexId};

/// A neighbor of the voting vertex, or the "unmatched" option every vertex ranks last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Candidate {
    Neighbor(usize),
    Null,
}

/// A single vote in `{-1, 0, +1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VoteValue(i8);

impl VoteValue {
    pub const FOR: VoteValue = VoteValue(1);
    pub const TIE: VoteValue = VoteValue(0);
    pub const AGAINST: VoteValue = VoteValue(-1);

    pub fn value(self) -> i32 {
        self.0 as i32
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum VoteError {
    #[error("`{neighbor}` is not an acceptable neighbor of `{vertex}`")]
    NotAcceptable { vertex: String, neighbor: usize },
    #[error("set of size {size} exceeds the capacity {cap} of `{vertex}`")]
    OverCapacity { vertex: String, size: usize, cap: usize },
    #[error("neighbor index {neighbor} is repeated in a set compared by `{vertex}`")]
    Repeated { vertex: String, neighbor: usize },
    #[error("brute-force comparison refuses padded size {k} (limit {limit})")]
    TooLarge { k: usize, limit: usize },
    #[error(transparent)]
    InvalidMatching(#[from] MatchingError),
}

/// Rank of a candidate for `u`; `Null` sorts after every neighbor.
fn candidate_rank(inst: &Instance, u: VertexId, c: Candidate) -> Result<usize, VoteError> {
    match c {
        Candidate::Null => Ok(usize::MAX),
        Candidate::Neighbor(v) => inst.rank(u, v).ok_or_else(|| VoteError::NotAcceptable {
            vertex: inst.name(u).to_string(),
            neighbor: v,
        }),
    }
}

/// `+1` if `u` prefers `v` to `w`, `-1` if it prefers `w`, `0` if they are equal.
pub fn vote(inst: &Instance, u: VertexId, v: Candidate, w: Candidate) -> Result<VoteValue, VoteError> {
    let rv = candidate_rank(inst, u, v)?;
    let rw = candidate_rank(inst, u, w)?;
    Ok(vote_by_rank(rv, rw))
}

fn vote_by_rank(rv: usize, rw: usize) -> VoteValue {
    match rv.cmp(&rw) {
        std::cmp::Ordering::Less => VoteValue::FOR,
        std::cmp::Ordering::Equal => VoteValue::TIE,
        std::cmp::Ordering::Greater => VoteValue::AGAINST,
    }
}

/// The padded difference sets of one comparison and the pairing that minimizes the vote sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetComparison {
    /// `S0 \ S1`, padded with `Null`, in `u`'s preference order.
    pub s0: Vec<Candidate>,
    /// `S1 \ S0`, padded with `Null`, in `u`'s preference order.
    pub s1: Vec<Candidate>,
    /// `s0[i]` is compared against `s1[pairing[i]]`.
    pub pairing: Vec<usize>,
    pub score: i32,
}

impl SetComparison {
    pub fn k(&self) -> usize {
        self.s0.len()
    }
}

fn check_set(inst: &Instance, u: VertexId, set: &[usize]) -> Result<(), VoteError> {
    if set.len() > inst.cap(u) {
        return Err(VoteError::OverCapacity {
            vertex: inst.name(u).to_string(),
            size: set.len(),
            cap: inst.cap(u),
        });
    }
    for (i, &v) in set.iter().enumerate() {
        inst.rank(u, v).ok_or_else(|| VoteError::NotAcceptable {
            vertex: inst.name(u).to_string(),
            neighbor: v,
        })?;
        if set[..i].contains(&v) {
            return Err(VoteError::Repeated {
                vertex: inst.name(u).to_string(),
                neighbor: v,
            });
        }
    }
    Ok(())
}

/// Computes the adversarial comparison of `s0` against `s1` for vertex `u`.
///
/// Minimizing the vote sum means maximizing the number of pairs in which the `s1` element beats
/// the `s0` element. Sweeping `s1` from best to worst and giving each element the best unpaired
/// `s0` element it strictly beats achieves that maximum; leftovers are paired in order. No
/// leftover pair is `Null` against `Null` because only one side is padded.
pub fn compare_sets(inst: &Instance, u: VertexId, s0: &[usize], s1: &[usize]) -> Result<SetComparison, VoteError> {
    check_set(inst, u, s0)?;
    check_set(inst, u, s1)?;
    let rank = |v: usize| inst.rank(u, v).expect("checked above");
    let mut only0: Vec<(usize, usize)> = s0.iter().filter(|v| !s1.contains(v)).map(|&v| (rank(v), v)).collect();
    let mut only1: Vec<(usize, usize)> = s1.iter().filter(|v| !s0.contains(v)).map(|&v| (rank(v), v)).collect();
    only0.sort_unstable();
    only1.sort_unstable();
    let k = only0.len().max(only1.len());
    let pad = |list: Vec<(usize, usize)>| -> Vec<(usize, Candidate)> {
        let mut out: Vec<(usize, Candidate)> = list.into_iter().map(|(r, v)| (r, Candidate::Neighbor(v))).collect();
        out.resize(k, (usize::MAX, Candidate::Null));
        out
    };
    let only0 = pad(only0);
    let only1 = pad(only1);

    let mut pairing = vec![usize::MAX; k];
    let mut taken1 = vec![false; k];
    let mut j = 0;
    for (i1, &(r1, _)) in only1.iter().enumerate() {
        while j < k && only0[j].0 <= r1 {
            j += 1;
        }
        if j == k {
            break;
        }
        pairing[j] = i1;
        taken1[i1] = true;
        j += 1;
    }
    let mut free1 = (0..k).filter(|&i| !taken1[i]);
    for slot in pairing.iter_mut().filter(|p| **p == usize::MAX) {
        *slot = free1.next().expect("pairing is a bijection");
    }
    let score = (0..k)
        .map(|i| vote_by_rank(only0[i].0, only1[pairing[i]].0).value())
        .sum();
    Ok(SetComparison {
        s0: only0.into_iter().map(|(_, c)| c).collect(),
        s1: only1.into_iter().map(|(_, c)| c).collect(),
        pairing,
        score,
    })
}

/// `u`'s vote for partner set `s0` versus `s1` under the adversarial pairing.
pub fn delta_u(inst: &Instance, u: VertexId, s0: &[usize], s1: &[usize]) -> Result<i32, VoteError> {
    compare_sets(inst, u, s0, s1).map(|c| c.score)
}

/// Largest padded size [`delta_u_bruteforce`] accepts.
pub const BRUTEFORCE_LIMIT: usize = 8;

/// Same quantity as [`delta_u`], by trying every bijection. Refuses padded sizes above 8.
pub fn delta_u_bruteforce(inst: &Instance, u: VertexId, s0: &[usize], s1: &[usize]) -> Result<i32, VoteError> {
    check_set(inst, u, s0)?;
    check_set(inst, u, s1)?;
    let mut left: Vec<Candidate> = s0
        .iter()
        .filter(|v| !s1.contains(v))
        .map(|&v| Candidate::Neighbor(v))
        .collect();
    let mut right: Vec<Candidate> = s1
        .iter()
        .filter(|v| !s0.contains(v))
        .map(|&v| Candidate::Neighbor(v))
        .collect();
    let k = left.len().max(right.len());
    if k > BRUTEFORCE_LIMIT {
        return Err(VoteError::TooLarge {
            k,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    left.resize(k, Candidate::Null);
    right.resize(k, Candidate::Null);
    let mut best = i32::MAX;
    for perm in (0..k).permutations(k) {
        let mut sum = 0;
        for (i, &p) in perm.iter().enumerate() {
            sum += vote(inst, u, left[i], right[p])?.value();
        }
        best = best.min(sum);
    }
    Ok(if k == 0 { 0 } else { best })
}

/// Sum over all vertices of their vote for `m0` versus `m1`.
pub fn big_delta(inst: &Instance, m0: &Matching, m1: &Matching) -> Result<i64, VoteError> {
    m0.check(inst)?;
    m1.check(inst)?;
    Ok(big_delta_unchecked(inst, m0, m1))
}

pub(crate) fn big_delta_unchecked(inst: &Instance, m0: &Matching, m1: &Matching) -> i64 {
    let students = (0..inst.num_students()).map(VertexId::student);
    let courses = (0..inst.num_courses()).map(VertexId::course);
    students
        .chain(courses)
        .map(|u| delta_u(inst, u, m0.partners(u), m1.partners(u)).expect("matchings were checked") as i64)
        .sum()
}

/// `big_delta(m0, m1) >= 0`.
pub fn is_at_least_as_popular(inst: &Instance, m0: &Matching, m1: &Matching) -> Result<bool, VoteError> {
    Ok(big_delta(inst, m0, m1)? >= 0)
}

/// `big_delta(m1, m0) > 0`: `m0` fails weak popularity against `m1`.
pub fn is_weakly_dominated(inst: &Instance, m0: &Matching, m1: &Matching) -> Result<bool, VoteError> {
    Ok(big_delta(inst, m1, m0)? > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    /// One course ranking six students v1..v6, capacity 3.
    fn six() -> Instance {
        parse_instance(
            "students: v1 v2 v3 v4 v5 v6\ncourses: u\ncap: u 3\n\
             pref: u v1 v2 v3 v4 v5 v6\n\
             pref: v1 u\npref: v2 u\npref: v3 u\npref: v4 u\npref: v5 u\npref: v6 u\n",
        )
        .unwrap()
    }

    const U: VertexId = VertexId {
        side: crate::Side::Course,
        index: 0,
    };

    #[test]
    fn single_votes() {
        let inst = six();
        let n = Candidate::Neighbor;
        assert_eq!(vote(&inst, U, n(0), n(1)).unwrap(), VoteValue::FOR);
        assert_eq!(vote(&inst, U, n(3), n(1)).unwrap(), VoteValue::AGAINST);
        assert_eq!(vote(&inst, U, n(2), Candidate::Null).unwrap(), VoteValue::FOR);
        assert_eq!(
            vote(&inst, U, Candidate::Null, Candidate::Null).unwrap(),
            VoteValue::TIE
        );
        assert!(vote(&inst, VertexId::student(0), n(4), Candidate::Null).is_err());
    }

    #[test]
    fn worked_example() {
        let inst = six();
        assert_eq!(delta_u(&inst, U, &[0, 2, 4], &[1, 3, 5]).unwrap(), -1);
        assert_eq!(delta_u(&inst, U, &[1, 3, 5], &[0, 2, 4]).unwrap(), -3);
        assert_eq!(delta_u_bruteforce(&inst, U, &[0, 2, 4], &[1, 3, 5]).unwrap(), -1);
        assert_eq!(delta_u_bruteforce(&inst, U, &[1, 3, 5], &[0, 2, 4]).unwrap(), -3);
        // the minimizing pairing: v1-v6, v3-v2, v5-v4
        let c = compare_sets(&inst, U, &[0, 2, 4], &[1, 3, 5]).unwrap();
        let pairs: Vec<_> = (0..3).map(|i| (c.s0[i], c.s1[c.pairing[i]])).collect();
        let n = Candidate::Neighbor;
        assert!(pairs.contains(&(n(0), n(5))) && pairs.contains(&(n(2), n(1))) && pairs.contains(&(n(4), n(3))));
    }

    #[test]
    fn identical_and_padded_sets() {
        let inst = six();
        assert_eq!(delta_u(&inst, U, &[0, 3], &[3, 0]).unwrap(), 0);
        assert_eq!(delta_u_bruteforce(&inst, U, &[2], &[2]).unwrap(), 0);
        assert_eq!(delta_u(&inst, U, &[0], &[]).unwrap(), 1);
        assert_eq!(delta_u(&inst, U, &[], &[5]).unwrap(), -1);
    }

    #[test]
    fn set_errors() {
        let inst = six();
        assert!(matches!(
            delta_u(&inst, U, &[0, 1, 2, 3], &[]),
            Err(VoteError::OverCapacity { .. })
        ));
        assert!(matches!(
            delta_u(&inst, U, &[0, 0], &[]),
            Err(VoteError::Repeated { .. })
        ));
        assert!(matches!(
            delta_u(&inst, VertexId::student(0), &[0], &[1]),
            Err(VoteError::NotAcceptable { neighbor: 1, .. })
        ));
    }

    #[test]
    fn bruteforce_refuses_large_k() {
        let list: Vec<String> = (0..9).map(|i| format!("x{i}")).collect();
        let mut text = format!(
            "students: {}\ncourses: u\ncap: u 9\npref: u {}\n",
            list.join(" "),
            list.join(" ")
        );
        for s in &list {
            text.push_str(&format!("pref: {s} u\n"));
        }
        let inst = parse_instance(&text).unwrap();
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(
            delta_u_bruteforce(&inst, U, &all, &[]),
            Err(VoteError::TooLarge {
                k: 9,
                limit: BRUTEFORCE_LIMIT
            })
        );
        assert_eq!(delta_u(&inst, U, &all, &[]).unwrap(), 9);
    }

    #[test]
    fn matching_level_comparisons() {
        let inst =
            parse_instance("students: a a'\ncourses: b b'\npref: a b b'\npref: a' b\npref: b a a'\npref: b' a\n")
                .unwrap();
        let stable = Matching::new(&inst, [(0, 0)]).unwrap();
        let big = Matching::new(&inst, [(0, 1), (1, 0)]).unwrap();
        // a: b vs b' = +1, a': null vs b = -1, b: a vs a' = +1, b': null vs a = -1
        assert_eq!(big_delta(&inst, &stable, &big).unwrap(), 0);
        assert_eq!(big_delta(&inst, &big, &stable).unwrap(), 0);
        assert!(is_at_least_as_popular(&inst, &stable, &big).unwrap());
        assert!(!is_weakly_dominated(&inst, &stable, &big).unwrap());
        assert_eq!(big_delta(&inst, &big, &big).unwrap(), 0);
        assert!(!is_weakly_dominated(&inst, &big, &big).unwrap());
    }
}
