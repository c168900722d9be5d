use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::{derived_rng, gen_geometric, graph_laplacian, GeneratedProblem};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

fn edges_of(adj: &[BTreeSet<usize>]) -> Vec<(usize, usize)> {
    adj.iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
        .collect()
}

/// Small-world graph: ring lattice with `k` neighbours, each lattice edge
/// rewired to a uniform random endpoint with probability `p`.
pub fn gen_watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<GeneratedProblem> {
    if !k.is_multiple_of(2) || k >= n {
        return Err(Error::Usage(format!(
            "watts-strogatz needs even k < n, got k={k}, n={n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Usage(format!(
            "rewiring probability must lie in [0, 1], got {p}"
        )));
    }
    let mut rng = derived_rng(seed, 0x3a7);
    let mut adj = vec![BTreeSet::new(); n];
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    let mut rewired = 0usize;
    for j in 1..=k / 2 {
        for u in 0..n {
            if rng.random::<f64>() >= p {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let v = (u + j) % n;
            if !adj[u].contains(&v) {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
            rewired += 1;
        }
    }
    let mut prob =
        GeneratedProblem::new(graph_laplacian(n, &edges_of(&adj)), "watts_strogatz", seed);
    prob.meta.push("k", k).push("p", p).push("rewired", rewired);
    Ok(prob)
}

/// Preferential-attachment graph grown from a star on `m + 1` nodes.
fn barabasi_albert(n: usize, m: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (1..=m).map(|v| (0, v)).collect();
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * m * n);
    for &(u, v) in &edges {
        repeated.push(u);
        repeated.push(v);
    }
    for source in m + 1..n {
        let mut targets = BTreeSet::new();
        while targets.len() < m {
            targets.insert(*repeated.choose(rng).expect("non-empty"));
        }
        for &t in &targets {
            edges.push((source, t));
            repeated.push(t);
            repeated.push(source);
        }
    }
    edges
}

/// Stacks `layers` copies of `layer` and links copies of each node in
/// adjacent layers with unit-weight edges.
pub fn supra_laplacian(layer: &SparseMatrix, layers: usize) -> SparseMatrix {
    let n = layer.n_rows();
    let mut t = Vec::with_capacity(layers * (layer.nnz() + 3 * n));
    for l in 0..layers {
        let off = l * n;
        for (i, j, v) in layer.iter() {
            t.push((off + i, off + j, v as f64));
        }
        for i in 0..n {
            let links = (l > 0) as usize + (l + 1 < layers) as usize;
            if links > 0 {
                t.push((off + i, off + i, links as f64));
            }
            if l > 0 {
                t.push((off + i, off + i - n, -1.0));
            }
            if l + 1 < layers {
                t.push((off + i, off + i + n, -1.0));
            }
        }
    }
    SparseMatrix::from_triplets(n * layers, n * layers, &t).expect("indices are in range")
}

/// Temporal scale-free graph: a preferential-attachment Laplacian repeated over
/// `layers` time steps and coupled between consecutive steps.
pub fn gen_temporal_ba(n: usize, m: usize, layers: usize, seed: u64) -> Result<GeneratedProblem> {
    if m == 0 || m >= n || layers == 0 {
        return Err(Error::Usage(format!(
            "temporal graph needs 1 <= m < n and layers >= 1, got n={n}, m={m}, layers={layers}"
        )));
    }
    let mut rng = derived_rng(seed, 0xba);
    let layer = graph_laplacian(n, &barabasi_albert(n, m, &mut rng));
    let mut prob = GeneratedProblem::new(supra_laplacian(&layer, layers), "temporal_ba", seed);
    prob.meta
        .push("nodes_per_layer", n)
        .push("m", m)
        .push("layers", layers);
    Ok(prob)
}

/// Random geometric base graph with `hubs` extra nodes, each linked to 65% of
/// one shared target set holding half of the base nodes.
pub fn gen_social_hub(n: usize, hubs: usize, seed: u64) -> Result<GeneratedProblem> {
    if n < 10 {
        return Err(Error::Usage(format!(
            "social hub graph needs n >= 10, got {n}"
        )));
    }
    let base = gen_geometric(2, n, seed)?;
    let n_base = base.a.n_rows();
    let mut edges: Vec<(usize, usize)> = base
        .a
        .iter()
        .filter(|&(i, j, _)| i < j)
        .map(|(i, j, _)| (i, j))
        .collect();
    let mut rng = derived_rng(seed, 0x4b);
    let mut nodes: Vec<usize> = (0..n_base).collect();
    nodes.shuffle(&mut rng);
    let target = &nodes[..n_base / 2];
    let per_hub = (0.65 * target.len() as f64).round() as usize;
    for h in 0..hubs {
        let hub = n_base + h;
        for &t in target.choose_multiple(&mut rng, per_hub) {
            edges.push((hub, t));
        }
    }
    let mut prob =
        GeneratedProblem::new(graph_laplacian(n_base + hubs, &edges), "social_hub", seed);
    prob.meta
        .push("n_points", n)
        .push("hubs", hubs)
        .push("hub_degree", per_hub);
    Ok(prob)
}
