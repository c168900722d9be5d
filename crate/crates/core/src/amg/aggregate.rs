use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::sparse::SparseMatrix;

/// Partition of fine nodes into disjoint, non-empty aggregates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregation {
    assignment: Vec<usize>,
    n_aggregates: usize,
}

impl Aggregation {
    pub fn new(assignment: Vec<usize>) -> Self {
        let n_aggregates = assignment.iter().max().map_or(0, |m| m + 1);
        Self {
            assignment,
            n_aggregates,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn n_aggregates(&self) -> usize {
        self.n_aggregates
    }

    pub fn n_nodes(&self) -> usize {
        self.assignment.len()
    }

    /// Members of each aggregate, in increasing node order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_aggregates];
        for (i, &a) in self.assignment.iter().enumerate() {
            out[a].push(i);
        }
        out
    }
}

/// Two-pass greedy aggregation visiting nodes in a seeded random order.
pub fn aggregate(strength: &SparseMatrix, seed: u64) -> Aggregation {
    let mut order: Vec<usize> = (0..strength.n_rows()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    aggregate_in_order(strength, &order)
}

/// Two-pass greedy aggregation with an explicit visiting order.
///
/// Pass 1 turns every node whose strong neighbourhood is entirely unassigned
/// into a new aggregate together with that neighbourhood. Pass 2 attaches each
/// leftover node to the neighbouring pass-1 aggregate it has the most strong
/// connections to, ties going to the lowest aggregate id.
pub fn aggregate_in_order(strength: &SparseMatrix, order: &[usize]) -> Aggregation {
    const UNASSIGNED: usize = usize::MAX;
    let n = strength.n_rows();
    let mut assignment = vec![UNASSIGNED; n];
    let mut n_aggregates = 0;

    for &i in order {
        if assignment[i] != UNASSIGNED {
            continue;
        }
        let (nbrs, _) = strength.row(i);
        if nbrs.iter().all(|&j| assignment[j] == UNASSIGNED) {
            assignment[i] = n_aggregates;
            for &j in nbrs {
                assignment[j] = n_aggregates;
            }
            n_aggregates += 1;
        }
    }

    let seeded = assignment.clone();
    let mut tally: Vec<(usize, usize)> = Vec::new();
    for &i in order {
        if seeded[i] != UNASSIGNED {
            continue;
        }
        tally.clear();
        for &j in strength.row(i).0 {
            let agg = seeded[j];
            if j == i || agg == UNASSIGNED {
                continue;
            }
            match tally.iter_mut().find(|(a, _)| *a == agg) {
                Some(entry) => entry.1 += 1,
                None => tally.push((agg, 1)),
            }
        }
        let best = tally
            .iter()
            .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
            .map(|&(a, _)| a);
        assignment[i] = match best {
            Some(a) => a,
            None => {
                n_aggregates += 1;
                n_aggregates - 1
            }
        };
    }
    Aggregation {
        assignment,
        n_aggregates,
    }
}
