use rand::Rng;
use rayon::prelude::*;

use super::{derived_rng, graph_laplacian, GeneratedProblem};
use crate::error::{Error, Result};

/// Neighbour count of the 3D mesh surrogate.
pub const KNN_NEIGHBOURS: usize = 8;

const MAX_ATTEMPTS: u64 = 3;

fn sample_points(dim: usize, n_points: usize, seed: u64, attempt: u64) -> Vec<Vec<f64>> {
    let mut rng = derived_rng(seed, 0x6e0 + attempt);
    let mut pts: Vec<Vec<f64>> = (0..n_points)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    for c in 0..1usize << dim {
        pts.push((0..dim).map(|d| ((c >> d) & 1) as f64).collect());
    }
    pts
}

fn delaunay_edges(pts: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let points: Vec<delaunator::Point> = pts
        .iter()
        .map(|p| delaunator::Point { x: p[0], y: p[1] })
        .collect();
    let tri = delaunator::triangulate(&points);
    tri.triangles
        .chunks_exact(3)
        .flat_map(|t| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])])
        .collect()
}

/// Symmetric k-nearest-neighbour edges; ties broken by index.
pub fn knn_graph(pts: &[Vec<f64>], k: usize) -> Vec<(usize, usize)> {
    let n = pts.len();
    let k = k.min(n.saturating_sub(1));
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut d: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let dist = pts[i]
                        .iter()
                        .zip(&pts[j])
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>();
                    (dist, j)
                })
                .collect();
            if k < d.len() {
                d.select_nth_unstable_by(k, |a, b| a.partial_cmp(b).unwrap());
                d.truncate(k);
            }
            d.into_iter().map(move |(_, j)| (i, j))
        })
        .collect()
}

/// Random geometric mesh Laplacian on `n_points` uniform points plus the
/// corners of the unit square (Delaunay) or cube (k nearest neighbours).
pub fn gen_geometric(dim: usize, n_points: usize, seed: u64) -> Result<GeneratedProblem> {
    if dim != 2 && dim != 3 {
        return Err(Error::Usage(format!(
            "geometric graphs support dim 2 or 3, got {dim}"
        )));
    }
    if n_points < dim + 2 {
        return Err(Error::Usage(format!(
            "need at least {} points, got {n_points}",
            dim + 2
        )));
    }
    let family = if dim == 2 {
        "geometric2d"
    } else {
        "geometric3d"
    };
    for attempt in 0..MAX_ATTEMPTS {
        let pts = sample_points(dim, n_points, seed, attempt);
        let edges = if dim == 2 {
            delaunay_edges(&pts)
        } else {
            knn_graph(&pts, KNN_NEIGHBOURS)
        };
        if edges.is_empty() {
            continue;
        }
        let mut p = GeneratedProblem::new(graph_laplacian(pts.len(), &edges), family, seed);
        p.meta.push("n_points", n_points).push("dim", dim);
        return Ok(p);
    }
    Err(Error::Setup(format!(
        "degenerate point set after {MAX_ATTEMPTS} attempts"
    )))
}
