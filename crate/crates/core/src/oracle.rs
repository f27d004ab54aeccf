//! Exhaustive ground truth for small instances.
//!
//! Matchings are enumerated as edge bitmasks in ascending order. For each vertex, the partner
//! sets that occur are numbered and their pairwise `delta_u` values tabulated with the
//! permutation-based [`votes::delta_u_bruteforce`], so `Delta` between two matchings costs one
//! table lookup per vertex.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::instance::{Instance, Matching, Side, VertexId};
use crate::votes;

/// Limits on exhaustive enumeration. Exceeding either aborts with [`OracleError`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationBudget {
    pub max_edges: usize,
    pub max_matchings: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_edges: 16,
            max_matchings: 2_000_000,
        }
    }
}

/// Edge masks are `u64`, so budgets above this many edges are clamped.
pub const MAX_SUPPORTED_EDGES: usize = 63;

/// Largest number of distinct partner sets of one vertex for which `delta_u` is tabulated.
const TABLE_LIMIT: usize = 1024;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {edges} edges, over the enumeration budget of {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("instance has more than {limit} matchings")]
    TooManyMatchings { limit: usize },
    #[error("matching does not belong to this instance")]
    ForeignMatching,
    #[error("no popular matching was found, which contradicts the existence of a stable matching")]
    NoPopularMatching,
}

/// Answer of a brute-force popularity test, with the smallest-bitmask counterexample on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub holds: bool,
    pub counterexample: Option<Matching>,
}

/// Sizes of popular and weakly popular matchings over all matchings of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub num_matchings: usize,
    pub max_matching: usize,
    pub max_popular: usize,
    pub min_popular: usize,
    pub max_weakly_popular: usize,
    pub min_weakly_popular: usize,
    /// Every popular matching of size `max_popular`, in enumeration order.
    pub all_max_popular: Vec<Matching>,
}

struct VertexTable {
    /// Distinct partner sets seen, as rank bitmasks, sorted.
    subsets: Vec<u32>,
    /// `delta_u(subsets[i], subsets[j])` at `i * len + j`, when small enough to tabulate.
    table: Option<Vec<i8>>,
}

/// All matchings of an instance together with per-vertex partner-set ids.
pub struct MatchingSpace<'a> {
    inst: &'a Instance,
    masks: Vec<u64>,
    /// Subset id of vertex `u` in matching `i` at `i * num_vertices + u`.
    ids: Vec<u32>,
    vertices: Vec<VertexId>,
    tables: Vec<VertexTable>,
}

fn local_mask(edges_by_rank: &[usize], mask: u64) -> u32 {
    edges_by_rank
        .iter()
        .enumerate()
        .fold(0u32, |acc, (r, &e)| if mask >> e & 1 == 1 { acc | 1 << r } else { acc })
}

/// Rank-bitmask form of the adversarial comparison, used only above the brute-force size limit.
fn delta_by_ranks(s0: u32, s1: u32) -> i32 {
    let only0 = s0 & !s1;
    let only1 = s1 & !s0;
    let k = only0.count_ones().max(only1.count_ones()) as i32;
    let list0: Vec<u32> = (0..32).filter(|r| only0 >> r & 1 == 1).collect();
    let mut nulls = k - list0.len() as i32;
    let mut j = 0;
    let mut beats = 0;
    for r1 in (0..32).filter(|r| only1 >> r & 1 == 1) {
        while j < list0.len() && list0[j] <= r1 {
            j += 1;
        }
        if j < list0.len() {
            j += 1;
        } else if nulls > 0 {
            nulls -= 1;
        } else {
            break;
        }
        beats += 1;
    }
    k - 2 * beats
}

fn delta_subsets(inst: &Instance, u: VertexId, s0: u32, s1: u32) -> i32 {
    let k = (s0 & !s1).count_ones().max((s1 & !s0).count_ones()) as usize;
    if k > votes::BRUTEFORCE_LIMIT {
        return delta_by_ranks(s0, s1);
    }
    let prefs = inst.prefs(u);
    let set = |s: u32| -> Vec<usize> {
        (0..prefs.len())
            .filter(|&r| s >> r & 1 == 1)
            .map(|r| prefs[r])
            .collect()
    };
    votes::delta_u_bruteforce(inst, u, &set(s0), &set(s1)).expect("partner sets of matchings are valid")
}

fn enumerate_masks(inst: &Instance, budget: &EnumerationBudget) -> Result<Vec<u64>, OracleError> {
    let m = inst.num_edges();
    let limit = budget.max_edges.min(MAX_SUPPORTED_EDGES);
    if m > limit {
        return Err(OracleError::TooManyEdges { edges: m, limit });
    }
    let edges = inst.edges();
    let mut left: Vec<usize> = (0..inst.num_students())
        .map(|a| inst.cap(VertexId::student(a)))
        .collect();
    let mut right: Vec<usize> = (0..inst.num_courses()).map(|b| inst.cap(VertexId::course(b))).collect();
    let mut out = Vec::new();

    // deciding the highest edge first, "absent" before "present", yields ascending masks
    fn go(
        e: usize,
        mask: u64,
        edges: &[crate::instance::Edge],
        left: &mut [usize],
        right: &mut [usize],
        out: &mut Vec<u64>,
        limit: usize,
    ) -> Result<(), OracleError> {
        if e == 0 {
            if out.len() == limit {
                return Err(OracleError::TooManyMatchings { limit });
            }
            out.push(mask);
            return Ok(());
        }
        let i = e - 1;
        go(i, mask, edges, left, right, out, limit)?;
        let (a, b) = (edges[i].student, edges[i].course);
        if left[a] > 0 && right[b] > 0 {
            left[a] -= 1;
            right[b] -= 1;
            let r = go(i, mask | 1 << i, edges, left, right, out, limit);
            left[a] += 1;
            right[b] += 1;
            r?;
        }
        Ok(())
    }
    go(m, 0, edges, &mut left, &mut right, &mut out, budget.max_matchings)?;
    Ok(out)
}

fn mask_to_matching(inst: &Instance, mask: u64) -> Matching {
    let edges = inst.edges();
    Matching::new(
        inst,
        (0..edges.len())
            .filter(|e| mask >> e & 1 == 1)
            .map(|e| (edges[e].student, edges[e].course)),
    )
    .expect("enumerated masks respect capacities")
}

/// Every matching of `inst` exactly once, in ascending edge-bitmask order.
pub fn enumerate_matchings(inst: &Instance, budget: &EnumerationBudget) -> Result<Vec<Matching>, OracleError> {
    Ok(enumerate_masks(inst, budget)?
        .into_iter()
        .map(|m| mask_to_matching(inst, m))
        .collect())
}

impl<'a> MatchingSpace<'a> {
    /// Enumerates all matchings and tabulates per-vertex votes.
    pub fn new(inst: &'a Instance, budget: &EnumerationBudget) -> Result<MatchingSpace<'a>, OracleError> {
        let masks = enumerate_masks(inst, budget)?;
        let vertices: Vec<VertexId> = (0..inst.num_students())
            .map(VertexId::student)
            .chain((0..inst.num_courses()).map(VertexId::course))
            .collect();
        let nv = vertices.len();
        let mut ids = vec![0u32; masks.len() * nv];
        let mut tables = Vec::with_capacity(nv);
        for (ui, &u) in vertices.iter().enumerate() {
            let edges_by_rank: Vec<usize> = inst
                .prefs(u)
                .iter()
                .map(|&v| match u.side {
                    Side::Student => inst.edge_index(u.index, v),
                    Side::Course => inst.edge_index(v, u.index),
                })
                .map(|e| e.expect("preference lists are edges"))
                .collect();
            let locals: Vec<u32> = masks.iter().map(|&m| local_mask(&edges_by_rank, m)).collect();
            let mut subsets = locals.clone();
            subsets.sort_unstable();
            subsets.dedup();
            for (i, l) in locals.iter().enumerate() {
                ids[i * nv + ui] = subsets.binary_search(l).unwrap() as u32;
            }
            let s = subsets.len();
            let table = (s <= TABLE_LIMIT).then(|| {
                let mut t = vec![0i8; s * s];
                for i in 0..s {
                    for j in 0..s {
                        t[i * s + j] = delta_subsets(inst, u, subsets[i], subsets[j]) as i8;
                    }
                }
                t
            });
            tables.push(VertexTable { subsets, table });
        }
        Ok(MatchingSpace {
            inst,
            masks,
            ids,
            vertices,
            tables,
        })
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn matching(&self, i: usize) -> Matching {
        mask_to_matching(self.inst, self.masks[i])
    }

    pub fn size(&self, i: usize) -> usize {
        self.masks[i].count_ones() as usize
    }

    /// Position of `m` in the enumeration.
    pub fn index_of(&self, m: &Matching) -> Result<usize, OracleError> {
        m.check(self.inst).map_err(|_| OracleError::ForeignMatching)?;
        let mut mask = 0u64;
        for &(a, b) in m.pairs() {
            mask |= 1 << self.inst.edge_index(a, b).ok_or(OracleError::ForeignMatching)?;
        }
        self.masks
            .binary_search(&mask)
            .map_err(|_| OracleError::ForeignMatching)
    }

    /// `Delta(M_i, M_j)`.
    pub fn delta(&self, i: usize, j: usize) -> i64 {
        let nv = self.vertices.len();
        let (ri, rj) = (&self.ids[i * nv..(i + 1) * nv], &self.ids[j * nv..(j + 1) * nv]);
        let mut sum = 0i64;
        for (u, t) in self.tables.iter().enumerate() {
            let (x, y) = (ri[u] as usize, rj[u] as usize);
            sum += match &t.table {
                Some(tab) => tab[x * t.subsets.len() + y] as i64,
                None => delta_subsets(self.inst, self.vertices[u], t.subsets[x], t.subsets[y]) as i64,
            };
        }
        sum
    }

    /// Popular: `Delta(M_i, T) >= 0` for every `T`.
    pub fn is_popular(&self, i: usize) -> OracleVerdict {
        let bad = (0..self.len()).into_par_iter().find_first(|&j| self.delta(i, j) < 0);
        self.verdict(bad)
    }

    /// Weakly popular: `Delta(T, M_i) <= 0` for every `T`.
    pub fn is_weakly_popular(&self, i: usize) -> OracleVerdict {
        let bad = (0..self.len()).into_par_iter().find_first(|&j| self.delta(j, i) > 0);
        self.verdict(bad)
    }

    fn verdict(&self, bad: Option<usize>) -> OracleVerdict {
        OracleVerdict {
            holds: bad.is_none(),
            counterexample: bad.map(|j| self.matching(j)),
        }
    }

    /// Popular and weakly popular flags of every matching, from one pass over ordered pairs.
    pub fn classify(&self) -> (Vec<bool>, Vec<bool>) {
        let k = self.len();
        let weak: Vec<AtomicBool> = (0..k).map(|_| AtomicBool::new(true)).collect();
        let popular: Vec<bool> = (0..k)
            .into_par_iter()
            .map(|i| {
                let mut pop = true;
                for (j, w) in weak.iter().enumerate() {
                    let d = self.delta(i, j);
                    pop &= d >= 0;
                    if d > 0 {
                        w.store(false, Ordering::Relaxed);
                    }
                }
                pop
            })
            .collect();
        (popular, weak.into_iter().map(AtomicBool::into_inner).collect())
    }
}

/// Whether `n` is popular, by comparison against every matching.
pub fn is_popular_bruteforce(
    inst: &Instance,
    n: &Matching,
    budget: &EnumerationBudget,
) -> Result<OracleVerdict, OracleError> {
    let space = MatchingSpace::new(inst, budget)?;
    let i = space.index_of(n)?;
    Ok(space.is_popular(i))
}

/// Whether `n` is weakly popular, by comparison against every matching.
pub fn is_weakly_popular_bruteforce(
    inst: &Instance,
    n: &Matching,
    budget: &EnumerationBudget,
) -> Result<OracleVerdict, OracleError> {
    let space = MatchingSpace::new(inst, budget)?;
    let i = space.index_of(n)?;
    Ok(space.is_weakly_popular(i))
}

/// Sizes of popular and weakly popular matchings.
pub fn popular_size_spectrum(inst: &Instance, budget: &EnumerationBudget) -> Result<Spectrum, OracleError> {
    let space = MatchingSpace::new(inst, budget)?;
    spectrum_of(&space)
}

/// [`popular_size_spectrum`] over an existing enumeration.
pub fn spectrum_of(space: &MatchingSpace<'_>) -> Result<Spectrum, OracleError> {
    let (popular, weak) = space.classify();
    let sizes = |flags: &[bool]| -> Option<(usize, usize)> {
        let it = (0..space.len()).filter(|&i| flags[i]).map(|i| space.size(i));
        it.clone().min().zip(it.max())
    };
    let (min_popular, max_popular) = sizes(&popular).ok_or(OracleError::NoPopularMatching)?;
    let (min_weakly_popular, max_weakly_popular) = sizes(&weak).ok_or(OracleError::NoPopularMatching)?;
    let all_max_popular = (0..space.len())
        .filter(|&i| popular[i] && space.size(i) == max_popular)
        .map(|i| space.matching(i))
        .collect();
    Ok(Spectrum {
        num_matchings: space.len(),
        max_matching: (0..space.len()).map(|i| space.size(i)).max().unwrap_or(0),
        max_popular,
        min_popular,
        max_weakly_popular,
        min_weakly_popular,
        all_max_popular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

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
    fn intro_enumeration() {
        let inst = intro();
        let all = enumerate_matchings(&inst, &EnumerationBudget::default()).unwrap();
        assert_eq!(all.len(), 5);
        assert!(all[0].is_empty());
        assert_eq!(all.iter().filter(|m| m.len() == 2).count(), 1);
    }

    #[test]
    fn empty_instance() {
        let inst = parse_instance("").unwrap();
        let all = enumerate_matchings(&inst, &EnumerationBudget::default()).unwrap();
        assert_eq!(all.len(), 1);
        let s = popular_size_spectrum(&inst, &EnumerationBudget::default()).unwrap();
        assert_eq!(
            (s.max_popular, s.min_popular, s.max_weakly_popular, s.min_weakly_popular),
            (0, 0, 0, 0)
        );
        assert_eq!(s.all_max_popular, vec![Matching::empty(&inst)]);
    }

    #[test]
    fn intro_popularity() {
        let inst = intro();
        let b = EnumerationBudget::default();
        let stable = Matching::new(&inst, [(0, 0)]).unwrap();
        assert_eq!(
            is_popular_bruteforce(&inst, &stable, &b).unwrap(),
            OracleVerdict {
                holds: true,
                counterexample: None
            }
        );
        assert!(is_weakly_popular_bruteforce(&inst, &stable, &b).unwrap().holds);
        let ab2 = Matching::new(&inst, [(0, 1)]).unwrap();
        let v = is_popular_bruteforce(&inst, &ab2, &b).unwrap();
        assert!(!v.holds);
        assert!(votes::big_delta(&inst, &ab2, &v.counterexample.unwrap()).unwrap() < 0);
        let s = popular_size_spectrum(&inst, &b).unwrap();
        assert_eq!((s.max_popular, s.min_weakly_popular, s.max_weakly_popular), (2, 1, 2));
        assert_eq!(s.all_max_popular, vec![Matching::new(&inst, [(0, 1), (1, 0)]).unwrap()]);
    }

    #[test]
    fn rural_two_max_popular() {
        let inst = rural();
        let s = popular_size_spectrum(&inst, &EnumerationBudget::default()).unwrap();
        assert_eq!(s.max_popular, 2);
        let m = Matching::new(&inst, [(0, 0), (1, 1)]).unwrap();
        let m2 = Matching::new(&inst, [(0, 1), (1, 0)]).unwrap();
        let mut got = s.all_max_popular.clone();
        got.sort_by(|x, y| x.pairs().cmp(y.pairs()));
        assert_eq!(got, vec![m.clone(), m2.clone()]);
        assert_eq!(votes::big_delta(&inst, &m, &m2).unwrap(), 0);
        assert_eq!(votes::big_delta(&inst, &m2, &m).unwrap(), 0);
    }

    #[test]
    fn budgets_are_enforced() {
        let inst = rural();
        let tight = EnumerationBudget {
            max_edges: 3,
            max_matchings: 100,
        };
        assert_eq!(
            enumerate_matchings(&inst, &tight),
            Err(OracleError::TooManyEdges { edges: 4, limit: 3 })
        );
        let few = EnumerationBudget {
            max_edges: 16,
            max_matchings: 3,
        };
        assert_eq!(
            enumerate_matchings(&inst, &few),
            Err(OracleError::TooManyMatchings { limit: 3 })
        );
    }

    #[test]
    fn rank_greedy_agrees_with_permutations() {
        let inst = parse_instance(
            "students: s\ncourses: c1 c2 c3 c4 c5 c6\ncap: s 6\npref: s c1 c2 c3 c4 c5 c6\n\
             pref: c1 s\npref: c2 s\npref: c3 s\npref: c4 s\npref: c5 s\npref: c6 s\n",
        )
        .unwrap();
        let u = VertexId::student(0);
        for s0 in 0u32..64 {
            for s1 in 0u32..64 {
                let prefs = inst.prefs(u);
                let set = |s: u32| -> Vec<usize> { (0..6).filter(|&r| s >> r & 1 == 1).map(|r| prefs[r]).collect() };
                let brute = votes::delta_u_bruteforce(&inst, u, &set(s0), &set(s1)).unwrap();
                assert_eq!(delta_by_ranks(s0, s1), brute, "{s0:b} vs {s1:b}");
            }
        }
    }
}
