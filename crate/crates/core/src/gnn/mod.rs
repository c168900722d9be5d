//! Learned corrections for aggregation hierarchies.
//!
//! Each fine/coarse level pair is turned into a composite graph, encoded,
//! optionally mixed with the latents of the previous pair, processed by gated
//! residual graph convolutions and decoded into one scalar per edge. Scalars on
//! `P`, `R` and coarse-operator edges are added to those operators in place, so
//! every sparsity pattern is kept.

mod augment;
mod composite;
mod model;
mod weights;

pub use augment::{augment_hierarchy, augment_with_trace, AugmentOptions, PairTrace};
pub use composite::{build_composite, Block, CompositeGraph};
pub use model::{gnn_forward_pair, rggcn_layer, Corrections, LatentState};
pub use weights::{
    load_weights, save_weights, GnnWeights, Linear, Mlp, RggcnParams, Tensor, EDGE_FEATURES,
    HIDDEN, NODE_FEATURES, PROCESSOR_LAYERS, WEIGHT_FORMAT_VERSION,
};
