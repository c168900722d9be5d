use std::ops::Range;

use ndarray::{concatenate, s, Array2, Axis};

use super::composite::{Block, CompositeGraph};
use super::weights::{relu, GnnWeights, RggcnParams};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Node and edge latents left behind by one level pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentState {
    pub node_latent: Array2<f32>,
    pub edge_latent: Array2<f32>,
    /// First coarse node row of `node_latent`.
    pub coarse_offset: usize,
    /// Rows of `edge_latent` holding the coarse-operator edges.
    pub coarse_edges: Range<usize>,
}

impl LatentState {
    pub fn coarse_nodes(&self) -> ndarray::ArrayView2<'_, f32> {
        self.node_latent.slice(s![self.coarse_offset.., ..])
    }
}

/// Additive corrections on the stored entries of `P`, `R` and `A_coarse`.
#[derive(Debug, Clone, PartialEq)]
pub struct Corrections {
    pub dp: SparseMatrix,
    pub dr: SparseMatrix,
    pub da_coarse: SparseMatrix,
}

fn sigmoid(x: f32) -> f32 {
    1.0 / (1.0 + (-x).exp())
}

fn check_finite(a: &Array2<f32>, stage: &str) -> Result<()> {
    if a.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Inference {
            stage: stage.to_string(),
        })
    }
}

/// One gated residual graph convolution over directed edges `src → dst`.
///
/// Returns the updated `(node, edge)` latents.
pub fn rggcn_layer(
    h: &Array2<f32>,
    e: &Array2<f32>,
    src: &[usize],
    dst: &[usize],
    params: &RggcnParams,
) -> (Array2<f32>, Array2<f32>) {
    let from_src = params.u2.forward(h).select(Axis(0), src);
    let from_dst = params.u3.forward(h).select(Axis(0), dst);
    let e_hat = params.u1.forward(e) + from_src + from_dst;
    let w2h = params.w2.forward(h);
    let mut agg = params.w1.forward(h);
    for (k, (&i, &j)) in src.iter().zip(dst).enumerate() {
        let gate = e_hat.row(k);
        let msg = w2h.row(i);
        let mut out = agg.row_mut(j);
        for t in 0..out.len() {
            out[t] += sigmoid(gate[t]) * msg[t];
        }
    }
    let h_new = h + &agg.mapv(relu);
    let e_new = e + &e_hat.mapv(relu);
    (h_new, e_new)
}

/// Full network pass on one level pair.
///
/// With `prev`, fine-node latents are mixed with the previous pair's coarse-node
/// latents and every edge latent with its aligned previous coarse-operator edge
/// latent (zeros where no such edge exists).
pub fn gnn_forward_pair(
    g: &CompositeGraph,
    w: &GnnWeights,
    prev: Option<&LatentState>,
) -> Result<(Corrections, LatentState)> {
    let mut h = w.node_encoder.forward(&g.node_features());
    check_finite(&h, "node_encoder")?;
    let mut e = w.edge_encoder.forward(&g.edge_features());
    check_finite(&e, "edge_encoder")?;

    if let Some(prev) = prev {
        let prev_coarse = prev.coarse_nodes();
        if prev_coarse.nrows() != g.n_fine {
            return Err(Error::Contract(format!(
                "previous pair has {} coarse nodes but this pair has {} fine nodes",
                prev_coarse.nrows(),
                g.n_fine
            )));
        }
        let fine_edges = g.block_range(Block::AFine);
        if prev.coarse_edges.len() != fine_edges.len() {
            return Err(Error::Contract(format!(
                "previous coarse operator has {} entries but this fine operator has {}",
                prev.coarse_edges.len(),
                fine_edges.len()
            )));
        }
        let fine = h.slice(s![..g.n_fine, ..]);
        let mixed = w
            .mix_node
            .forward(&concatenate![Axis(1), fine, prev_coarse]);
        h.slice_mut(s![..g.n_fine, ..]).assign(&mixed);

        let mut partner = Array2::<f32>::zeros(e.raw_dim());
        partner
            .slice_mut(s![fine_edges.clone(), ..])
            .assign(&prev.edge_latent.slice(s![prev.coarse_edges.clone(), ..]));
        e = w.mix_edge.forward(&concatenate![Axis(1), e, partner]);
        check_finite(&h, "mix_node")?;
        check_finite(&e, "mix_edge")?;
    }

    for (k, params) in w.processor.iter().enumerate() {
        let (h_new, e_new) = rggcn_layer(&h, &e, &g.src, &g.dst, params);
        h = h_new;
        e = e_new;
        check_finite(&h, &format!("processor.{k}"))?;
        check_finite(&e, &format!("processor.{k}"))?;
    }

    let out = w.decoder.forward(&e);
    check_finite(&out, "decoder")?;
    let scalars = out.column(0);
    let take = |b: Block| -> Result<SparseMatrix> {
        let values: Vec<f32> = g.block_range(b).map(|k| scalars[k]).collect();
        g.block(b).with_values(values)
    };
    let corrections = Corrections {
        dp: take(Block::P)?,
        dr: take(Block::R)?,
        da_coarse: take(Block::ACoarse)?,
    };
    let state = LatentState {
        node_latent: h,
        edge_latent: e,
        coarse_offset: g.n_fine,
        coarse_edges: g.block_range(Block::ACoarse),
    };
    Ok((corrections, state))
}
