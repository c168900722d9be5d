//! Seeded generators for the benchmark families, operator normalisation and
//! BFS subgraph extraction.
//!
//! Every generator is a pure function of its arguments: the same seed yields a
//! bit-identical matrix.

mod family;
mod geometric;
mod graphs;
mod pde;
mod subgraph;

pub use family::{Family, FamilyConfig, FamilyParams, ProblemSpec};
pub use geometric::{gen_geometric, knn_graph, KNN_NEIGHBOURS};
pub use graphs::{gen_social_hub, gen_temporal_ba, gen_watts_strogatz, supra_laplacian};
pub use pde::{
    advection_diffusion_operator, diffusion_operator, gen_adv_diffusion, gen_aniso_diffusion,
    poisson_2d, Boundary, Grid,
};
pub use subgraph::{extract_subgraph, Subgraph};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::manifest::Manifest;
use crate::sparse::SparseMatrix;

/// A generated operator together with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct GeneratedProblem {
    pub a: SparseMatrix,
    pub meta: Manifest,
}

impl GeneratedProblem {
    pub(crate) fn new(a: SparseMatrix, family: &str, seed: u64) -> Self {
        let mut meta = Manifest::new();
        meta.push("family", family)
            .push("seed", seed)
            .push("n", a.n_rows())
            .push("nnz", a.nnz());
        Self { a, meta }
    }

    /// Replaces the operator and refreshes the size entries of the metadata.
    pub(crate) fn with_operator(mut self, a: SparseMatrix) -> Self {
        let mut meta = Manifest::new();
        for (k, v) in self.meta.entries() {
            match k.as_str() {
                "n" => meta.push(k, a.n_rows()),
                "nnz" => meta.push(k, a.nnz()),
                _ => meta.push(k, v),
            };
        }
        self.meta = meta;
        self.a = a;
        self
    }
}

/// Unweighted graph Laplacian `D − W` of an undirected edge list.
///
/// Duplicate edges and self loops are ignored.
pub fn graph_laplacian(n: usize, edges: &[(usize, usize)]) -> SparseMatrix {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    offsets.push(0);
    for (i, nb) in adj.iter_mut().enumerate() {
        nb.sort_unstable();
        nb.dedup();
        let pos = nb.partition_point(|&j| j < i);
        for (t, &j) in nb.iter().enumerate() {
            if t == pos {
                cols.push(i);
                vals.push(nb.len() as f32);
            }
            cols.push(j);
            vals.push(-1.0);
        }
        if pos == nb.len() {
            cols.push(i);
            vals.push(nb.len() as f32);
        }
        offsets.push(cols.len());
    }
    SparseMatrix::new(n, n, offsets, cols, vals).expect("assembled rows are sorted")
}

/// Scales `a` by `1 / max_i |a_ii|`.
pub fn normalize_operator(a: &SparseMatrix) -> Result<SparseMatrix> {
    let scale = a.diag().iter().fold(0f64, |m, d| m.max(d.abs()));
    if scale == 0.0 {
        return Err(Error::Usage(
            "cannot normalize an operator with an all-zero diagonal".into(),
        ));
    }
    Ok(a.scaled(1.0 / scale))
}

/// Builds the problem described by `spec`.
pub fn generate(spec: &ProblemSpec) -> Result<GeneratedProblem> {
    spec.validate()?;
    let p = &spec.params;
    let mut problem = match spec.family {
        Family::Poisson2D => {
            GeneratedProblem::new(poisson_2d(spec.size), spec.family.name(), spec.seed)
        }
        Family::Geometric2D => gen_geometric(2, spec.size, spec.seed)?,
        Family::Geometric3D => gen_geometric(3, spec.size, spec.seed)?,
        Family::WattsStrogatz => gen_watts_strogatz(spec.size, p.ws_k, p.ws_p, spec.seed)?,
        Family::TemporalBa => gen_temporal_ba(spec.size, p.ba_m, p.layers, spec.seed)?,
        Family::SocialHub => gen_social_hub(spec.size, p.hubs, spec.seed)?,
        Family::AnisoDiffusion2D => gen_aniso_diffusion(2, spec.size, spec.seed)?,
        Family::AnisoDiffusion3D => gen_aniso_diffusion(3, spec.size, spec.seed)?,
        Family::AdvDiffusion2D => gen_adv_diffusion(2, spec.size, spec.seed)?,
        Family::AdvDiffusion3D => gen_adv_diffusion(3, spec.size, spec.seed)?,
    };
    if let Some(k) = spec.subgraph {
        let sub = extract_subgraph(&problem.a, k, spec.seed ^ 0x5ab9_4a70, true)?;
        problem = problem.with_operator(sub.matrix);
        problem.meta.push("subgraph", k);
    }
    if spec.normalize {
        let a = normalize_operator(&problem.a)?;
        problem = problem.with_operator(a);
    }
    problem.meta.push("normalized", spec.normalize);
    Ok(problem)
}

/// Independent stream derived from a seed and a purpose tag.
pub(crate) fn derived_rng(seed: u64, tag: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng
}
