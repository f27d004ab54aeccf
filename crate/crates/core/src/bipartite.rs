//! One-to-one bipartite matching helpers over adjacency lists.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Length (in edges) of the shortest augmenting path for `mate_left`, or `None` if it is maximum.
pub(crate) fn shortest_augmenting_path(adj: &[Vec<usize>], n_right: usize, mate_left: &[usize]) -> Option<usize> {
    let mut mate_r = vec![NIL; n_right];
    for (l, &r) in mate_left.iter().enumerate() {
        if r != NIL {
            mate_r[r] = l;
        }
    }
    let mut dist = vec![NIL; adj.len()];
    let mut queue = VecDeque::new();
    for (l, &r) in mate_left.iter().enumerate() {
        if r == NIL {
            dist[l] = 0;
            queue.push_back(l);
        }
    }
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if mate_left[l] == r {
                continue;
            }
            match mate_r[r] {
                NIL => return Some(2 * dist[l] + 1),
                m if dist[m] == NIL => {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
                _ => {}
            }
        }
    }
    None
}
