use std::ops::Range;

use ndarray::Array2;

use super::weights::{EDGE_FEATURES, NODE_FEATURES};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Which block of `[A_fine P; R A_coarse]` an edge comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    AFine,
    P,
    R,
    ACoarse,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::AFine, Block::P, Block::R, Block::ACoarse];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Union graph of one fine/coarse level pair.
///
/// Nodes `0..n_fine` are fine, `n_fine..n_fine + n_coarse` coarse. Each stored
/// entry `(i, j)` of a block becomes a directed edge from block row `i` to block
/// column `j`, blocks concatenated in [`Block::ALL`] order and entries in CSR
/// order within a block.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeGraph {
    pub n_fine: usize,
    pub n_coarse: usize,
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    pub values: Vec<f32>,
    block_ranges: [Range<usize>; 4],
    blocks: [SparseMatrix; 4],
}

impl CompositeGraph {
    pub fn n_nodes(&self) -> usize {
        self.n_fine + self.n_coarse
    }

    pub fn n_edges(&self) -> usize {
        self.src.len()
    }

    /// Edge index range of one block.
    pub fn block_range(&self, b: Block) -> Range<usize> {
        self.block_ranges[b.index()].clone()
    }

    /// The operator an edge block was built from.
    pub fn block(&self, b: Block) -> &SparseMatrix {
        &self.blocks[b.index()]
    }

    pub fn block_of(&self, edge: usize) -> Block {
        Block::ALL
            .into_iter()
            .find(|b| self.block_ranges[b.index()].contains(&edge))
            .expect("edge index in range")
    }

    /// One-hot fine/coarse indicator per node.
    pub fn node_features(&self) -> Array2<f32> {
        let mut f = Array2::zeros((self.n_nodes(), NODE_FEATURES));
        for i in 0..self.n_nodes() {
            f[[i, (i >= self.n_fine) as usize]] = 1.0;
        }
        f
    }

    /// Entry value followed by a one-hot block indicator per edge.
    pub fn edge_features(&self) -> Array2<f32> {
        let mut f = Array2::zeros((self.n_edges(), EDGE_FEATURES));
        for b in Block::ALL {
            for k in self.block_range(b) {
                f[[k, 0]] = self.values[k];
                f[[k, 1 + b.index()]] = 1.0;
            }
        }
        f
    }
}

/// Builds the composite graph of `[a_fine p; r a_coarse]`.
pub fn build_composite(
    a_fine: &SparseMatrix,
    p: &SparseMatrix,
    r: &SparseMatrix,
    a_coarse: &SparseMatrix,
) -> Result<CompositeGraph> {
    let nf = a_fine.n_rows();
    let nc = a_coarse.n_rows();
    if !a_fine.is_square()
        || !a_coarse.is_square()
        || p.n_rows() != nf
        || p.n_cols() != nc
        || r.n_rows() != nc
        || r.n_cols() != nf
    {
        return Err(Error::dim(
            "build_composite",
            format!(
                "A_fine {}x{}, P {}x{}, R {}x{}, A_coarse {}x{}",
                a_fine.n_rows(),
                a_fine.n_cols(),
                p.n_rows(),
                p.n_cols(),
                r.n_rows(),
                r.n_cols(),
                a_coarse.n_rows(),
                a_coarse.n_cols()
            ),
        ));
    }
    let total = a_fine.nnz() + p.nnz() + r.nnz() + a_coarse.nnz();
    let mut src = Vec::with_capacity(total);
    let mut dst = Vec::with_capacity(total);
    let mut values = Vec::with_capacity(total);
    let blocks = [(a_fine, 0, 0), (p, 0, nf), (r, nf, 0), (a_coarse, nf, nf)];
    let mut ranges: [Range<usize>; 4] = Default::default();
    for (b, (m, row_off, col_off)) in blocks.into_iter().enumerate() {
        let start = src.len();
        for (i, j, v) in m.iter() {
            src.push(i + row_off);
            dst.push(j + col_off);
            values.push(v);
        }
        ranges[b] = start..src.len();
    }
    Ok(CompositeGraph {
        n_fine: nf,
        n_coarse: nc,
        src,
        dst,
        values,
        block_ranges: ranges,
        blocks: [a_fine.clone(), p.clone(), r.clone(), a_coarse.clone()],
    })
}
