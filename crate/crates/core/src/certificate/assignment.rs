//! Dense min-cost perfect assignment by shortest augmenting paths with potentials.

/// Cost assigned to pairs that must not be used.
pub(crate) const FORBIDDEN: i64 = 1 << 40;

pub(crate) struct Assignment {
    /// `row_to_col[r]` is the column assigned to row `r`.
    pub row_to_col: Vec<usize>,
    pub cost: i64,
    /// Row and column potentials with `row[r] + col[c] <= cost(r, c)`, tight on the assignment.
    pub row_potential: Vec<i64>,
    pub col_potential: Vec<i64>,
}

/// Solves the `n x n` assignment problem for `cost(r, c)`.
pub(crate) fn min_cost_assignment(n: usize, cost: impl Fn(usize, usize) -> i64) -> Assignment {
    // 1-based arrays; index 0 is the virtual root row/column
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![i64::MAX; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        row_to_col[owner[j] - 1] = j - 1;
    }
    let cost_total = row_to_col.iter().enumerate().map(|(r, &c)| cost(r, c)).sum();
    Assignment {
        row_to_col,
        cost: cost_total,
        row_potential: u[1..].to_vec(),
        col_potential: v[1..].to_vec(),
    }
}
