use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use super::derived_rng;
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Node-induced submatrix together with the original index of each row.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub matrix: SparseMatrix,
    pub nodes: Vec<usize>,
}

fn undirected_neighbours(a: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = a.n_rows();
    let mut adj = vec![Vec::new(); n];
    for (i, j, _) in a.iter() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for nb in &mut adj {
        nb.sort_unstable();
        nb.dedup();
    }
    adj
}

fn looks_like_laplacian(a: &SparseMatrix) -> bool {
    a.is_symmetric(0.0)
        && (0..a.n_rows()).all(|i| {
            let (mut sum, mut diag) = (0f64, 0f64);
            for (j, v) in a.iter_row(i) {
                sum += v as f64;
                if i == j {
                    diag = v as f64;
                }
            }
            sum.abs() <= 1e-6 * diag.abs().max(1.0)
        })
}

/// Randomised breadth-first sample of exactly `k` nodes.
///
/// Edges are followed in both directions, neighbours are shuffled before they
/// are queued and an exhausted component is left for a random unvisited node.
/// When `repair_laplacian` is set and `a` is a graph Laplacian, the diagonal of
/// the induced submatrix is recomputed on rows that lost a neighbour so they
/// again sum to zero.
pub fn extract_subgraph(
    a: &SparseMatrix,
    k: usize,
    seed: u64,
    repair_laplacian: bool,
) -> Result<Subgraph> {
    let n = a.n_rows();
    if !a.is_square() {
        return Err(Error::dim("extract_subgraph", "matrix must be square"));
    }
    if k == 0 || k > n {
        return Err(Error::Usage(format!(
            "subgraph size must lie in 1..={n}, got {k}"
        )));
    }
    let adj = undirected_neighbours(a);
    let mut rng = derived_rng(seed, 0xb75);
    let mut visited = vec![false; n];
    let mut nodes = Vec::with_capacity(k);
    let mut unvisited: Vec<usize> = (0..n).collect();
    let mut queue = VecDeque::new();
    while nodes.len() < k {
        let root = loop {
            let pick = rng.random_range(0..unvisited.len());
            let cand = unvisited.swap_remove(pick);
            if !visited[cand] {
                break cand;
            }
        };
        visited[root] = true;
        nodes.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&v| !visited[v]).collect();
            nb.shuffle(&mut rng);
            for v in nb {
                if nodes.len() == k {
                    break 'bfs;
                }
                visited[v] = true;
                nodes.push(v);
                queue.push_back(v);
            }
        }
        queue.clear();
    }
    let matrix = induced(a, &nodes, repair_laplacian && looks_like_laplacian(a))?;
    Ok(Subgraph { matrix, nodes })
}

fn induced(a: &SparseMatrix, nodes: &[usize], repair: bool) -> Result<SparseMatrix> {
    let mut local = vec![usize::MAX; a.n_rows()];
    for (t, &v) in nodes.iter().enumerate() {
        local[v] = t;
    }
    let mut triplets = Vec::new();
    for (r, &i) in nodes.iter().enumerate() {
        let mut off_sum = 0f64;
        let mut has_off = false;
        let mut dropped = false;
        let mut diag = None;
        for (j, v) in a.iter_row(i) {
            let c = local[j];
            if c == usize::MAX {
                dropped = true;
                continue;
            }
            if c == r {
                diag = Some(v as f64);
            } else {
                off_sum += v as f64;
                has_off = true;
                triplets.push((r, c, v as f64));
            }
        }
        // an isolated node keeps its original diagonal so relaxation stays defined
        let d = match diag {
            Some(_) if repair && has_off && dropped => Some(-off_sum),
            other => other,
        };
        if let Some(d) = d {
            triplets.push((r, r, d));
        }
    }
    SparseMatrix::from_triplets(nodes.len(), nodes.len(), &triplets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{gen_geometric, graph_laplacian, poisson_2d};

    fn path(n: usize) -> SparseMatrix {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        graph_laplacian(n, &edges)
    }

    #[test]
    fn full_extraction_is_a_permutation() {
        let a = gen_geometric(2, 50, 1).unwrap().a;
        let sub = extract_subgraph(&a, a.n_rows(), 3, true).unwrap();
        let mut sorted = sub.nodes.clone();
        sorted.sort();
        assert_eq!(sorted, (0..a.n_rows()).collect::<Vec<_>>());
        for (r, &i) in sub.nodes.iter().enumerate() {
            for (c, &j) in sub.nodes.iter().enumerate() {
                assert_eq!(sub.matrix.get(r, c), a.get(i, j));
            }
        }
    }

    #[test]
    fn rows_keeping_all_neighbours_are_not_repaired() {
        let mut t: Vec<_> = path(5).iter().map(|(i, j, v)| (i, j, v as f64)).collect();
        for e in t.iter_mut().filter(|e| e.0 == e.1) {
            e.2 *= 1.0 + 2e-7;
        }
        let a = SparseMatrix::from_triplets(5, 5, &t).unwrap();
        assert!(looks_like_laplacian(&a));
        let sub = extract_subgraph(&a, 5, 1, true).unwrap();
        for (r, &i) in sub.nodes.iter().enumerate() {
            assert_eq!(sub.matrix.get(r, r), a.get(i, i));
        }
    }

    #[test]
    fn single_node() {
        let sub = extract_subgraph(&poisson_2d(4), 1, 0, true).unwrap();
        assert_eq!(sub.matrix.n_rows(), 1);
        assert_eq!(sub.matrix.get(0, 0), 4.0);
    }

    #[test]
    fn path_from_an_end_takes_consecutive_nodes() {
        let a = path(8);
        for seed in 0..200 {
            let sub = extract_subgraph(&a, 3, seed, true).unwrap();
            if sub.nodes[0] == 0 {
                assert_eq!(sub.nodes, vec![0, 1, 2]);
                assert_eq!(sub.matrix, path(3));
                return;
            }
        }
        panic!("no seed picked the end of the path as root");
    }

    #[test]
    fn exact_size_and_repaired_rows() {
        let a = gen_geometric(2, 300, 2).unwrap().a;
        for k in [10, 77, 200] {
            let sub = extract_subgraph(&a, k, k as u64, true).unwrap();
            assert_eq!(sub.matrix.n_rows(), k);
            let sums = sub.matrix.row_sums();
            for (i, s) in sums.iter().enumerate() {
                assert!(*s == 0.0 || sub.matrix.row(i).0.len() == 1);
            }
            assert!(sub.matrix.is_symmetric(0.0));
        }
    }

    #[test]
    fn disjoint_components_are_covered() {
        let a = graph_laplacian(6, &[(0, 1), (2, 3), (4, 5)]);
        let sub = extract_subgraph(&a, 6, 1, true).unwrap();
        assert_eq!(sub.matrix.n_rows(), 6);
        assert_eq!(sub.matrix.nnz(), a.nnz());
    }

    #[test]
    fn repair_is_skipped_for_non_laplacians() {
        let a = poisson_2d(6);
        let sub = extract_subgraph(&a, 20, 4, true).unwrap();
        assert!(sub.matrix.diag().iter().all(|&d| d == 4.0));
        let unrepaired =
            extract_subgraph(&gen_geometric(2, 40, 0).unwrap().a, 20, 4, false).unwrap();
        let repaired = extract_subgraph(&gen_geometric(2, 40, 0).unwrap().a, 20, 4, true).unwrap();
        assert_eq!(unrepaired.nodes, repaired.nodes);
        assert!(repaired.matrix.pattern_subset_of(&unrepaired.matrix));
    }

    #[test]
    fn oversized_request_is_a_usage_error() {
        assert!(matches!(
            extract_subgraph(&path(3), 4, 0, true),
            Err(Error::Usage(_))
        ));
    }
}
