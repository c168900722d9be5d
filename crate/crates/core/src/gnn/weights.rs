use std::path::Path;

use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::manifest::Manifest;

pub const WEIGHT_FORMAT_VERSION: u32 = 1;
/// Latent width of the standard network.
pub const HIDDEN: usize = 64;
pub const NODE_FEATURES: usize = 2;
pub const EDGE_FEATURES: usize = 5;
pub const PROCESSOR_LAYERS: usize = 3;

/// Affine map stored in `(out, in)` layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub weight: Array2<f32>,
    pub bias: Option<Array1<f32>>,
}

impl Linear {
    pub fn zeros(input: usize, output: usize, bias: bool) -> Self {
        Self {
            weight: Array2::zeros((output, input)),
            bias: bias.then(|| Array1::zeros(output)),
        }
    }

    pub fn input_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.weight.nrows()
    }

    pub fn forward(&self, x: &Array2<f32>) -> Array2<f32> {
        let mut y = x.dot(&self.weight.t());
        if let Some(b) = &self.bias {
            y += b;
        }
        y
    }
}

/// Linear layers with ReLU between them and none after the last.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub layers: Vec<Linear>,
}

impl Mlp {
    pub fn zeros(dims: &[usize]) -> Self {
        Self {
            layers: dims
                .windows(2)
                .map(|w| Linear::zeros(w[0], w[1], true))
                .collect(),
        }
    }

    pub fn forward(&self, x: &Array2<f32>) -> Array2<f32> {
        let mut h = x.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            h = layer.forward(&h);
            if i + 1 < self.layers.len() {
                h.mapv_inplace(relu);
            }
        }
        h
    }
}

pub(crate) fn relu(x: f32) -> f32 {
    x.max(0.0)
}

/// Parameters of one gated residual graph convolution.
#[derive(Debug, Clone, PartialEq)]
pub struct RggcnParams {
    pub u1: Linear,
    pub u2: Linear,
    pub u3: Linear,
    pub w1: Linear,
    pub w2: Linear,
}

impl RggcnParams {
    pub fn zeros(hidden: usize) -> Self {
        let l = || Linear::zeros(hidden, hidden, true);
        Self {
            u1: l(),
            u2: l(),
            u3: l(),
            w1: l(),
            w2: l(),
        }
    }

    fn named(&self) -> [(&'static str, &Linear); 5] {
        [
            ("U1", &self.u1),
            ("U2", &self.u2),
            ("U3", &self.u3),
            ("W1", &self.w1),
            ("W2", &self.w2),
        ]
    }

    fn named_mut(&mut self) -> [(&'static str, &mut Linear); 5] {
        [
            ("U1", &mut self.u1),
            ("U2", &mut self.u2),
            ("U3", &mut self.u3),
            ("W1", &mut self.w1),
            ("W2", &mut self.w2),
        ]
    }
}

/// Every learned tensor of the correction network.
#[derive(Debug, Clone, PartialEq)]
pub struct GnnWeights {
    pub hidden: usize,
    pub node_encoder: Mlp,
    pub edge_encoder: Mlp,
    pub processor: Vec<RggcnParams>,
    pub mix_node: Linear,
    pub mix_edge: Linear,
    pub decoder: Mlp,
}

impl GnnWeights {
    /// All-zero network of latent width `hidden`.
    pub fn zeros(hidden: usize) -> Self {
        Self {
            hidden,
            node_encoder: Mlp::zeros(&[NODE_FEATURES, hidden, hidden, hidden]),
            edge_encoder: Mlp::zeros(&[EDGE_FEATURES, hidden, hidden, hidden]),
            processor: (0..PROCESSOR_LAYERS)
                .map(|_| RggcnParams::zeros(hidden))
                .collect(),
            mix_node: Linear::zeros(2 * hidden, hidden, false),
            mix_edge: Linear::zeros(2 * hidden, hidden, false),
            decoder: Mlp::zeros(&[hidden, hidden, hidden, 1]),
        }
    }

    /// Every entry drawn from `N(0, scale²)`.
    pub fn random(hidden: usize, scale: f32, seed: u64) -> Self {
        let mut w = Self::zeros(hidden);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0f32, scale).expect("scale must be finite and non-negative");
        for (_, t) in w.tensors_mut() {
            t.iter_mut().for_each(|v| *v = normal.sample(&mut rng));
        }
        w
    }

    /// Zeroes the last decoder layer so every predicted correction is exactly zero.
    pub fn with_zero_decoder(mut self) -> Self {
        let last = self.decoder.layers.last_mut().expect("decoder has layers");
        last.weight.fill(0.0);
        if let Some(b) = &mut last.bias {
            b.fill(0.0);
        }
        self
    }

    pub fn n_params(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    /// `(name, shape)` of every tensor of a network with latent width `hidden`, in file order.
    pub fn expected_shapes(hidden: usize) -> Vec<(String, Vec<usize>)> {
        Self::zeros(hidden)
            .tensors()
            .into_iter()
            .map(|(name, t)| (name, t.shape().to_vec()))
            .collect()
    }

    /// Named views of all tensors in canonical order.
    pub fn tensors(&self) -> Vec<(String, Tensor)> {
        let mut out = Vec::new();
        let push_linear = |prefix: String, l: &Linear, out: &mut Vec<(String, Tensor)>| {
            out.push((format!("{prefix}.weight"), Tensor::Matrix(l.weight.clone())));
            if let Some(b) = &l.bias {
                out.push((format!("{prefix}.bias"), Tensor::Vector(b.clone())));
            }
        };
        for (i, l) in self.node_encoder.layers.iter().enumerate() {
            push_linear(format!("node_encoder.{i}"), l, &mut out);
        }
        for (i, l) in self.edge_encoder.layers.iter().enumerate() {
            push_linear(format!("edge_encoder.{i}"), l, &mut out);
        }
        for (k, p) in self.processor.iter().enumerate() {
            for (name, l) in p.named() {
                push_linear(format!("processor.{k}.{name}"), l, &mut out);
            }
        }
        push_linear("mix_node".into(), &self.mix_node, &mut out);
        push_linear("mix_edge".into(), &self.mix_edge, &mut out);
        for (i, l) in self.decoder.layers.iter().enumerate() {
            push_linear(format!("decoder.{i}"), l, &mut out);
        }
        out
    }

    fn tensors_mut(&mut self) -> Vec<(String, &mut [f32])> {
        let mut out: Vec<(String, &mut [f32])> = Vec::new();
        fn push<'a>(prefix: String, l: &'a mut Linear, out: &mut Vec<(String, &'a mut [f32])>) {
            out.push((
                format!("{prefix}.weight"),
                l.weight.as_slice_mut().expect("weights are contiguous"),
            ));
            if let Some(b) = &mut l.bias {
                out.push((
                    format!("{prefix}.bias"),
                    b.as_slice_mut().expect("biases are contiguous"),
                ));
            }
        }
        for (i, l) in self.node_encoder.layers.iter_mut().enumerate() {
            push(format!("node_encoder.{i}"), l, &mut out);
        }
        for (i, l) in self.edge_encoder.layers.iter_mut().enumerate() {
            push(format!("edge_encoder.{i}"), l, &mut out);
        }
        for (k, p) in self.processor.iter_mut().enumerate() {
            for (name, l) in p.named_mut() {
                push(format!("processor.{k}.{name}"), l, &mut out);
            }
        }
        push("mix_node".into(), &mut self.mix_node, &mut out);
        push("mix_edge".into(), &mut self.mix_edge, &mut out);
        for (i, l) in self.decoder.layers.iter_mut().enumerate() {
            push(format!("decoder.{i}"), l, &mut out);
        }
        out
    }
}

/// Owned copy of one tensor, used for serialisation and inspection.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    Matrix(Array2<f32>),
    Vector(Array1<f32>),
}

impl Tensor {
    pub fn shape(&self) -> &[usize] {
        match self {
            Tensor::Matrix(m) => m.shape(),
            Tensor::Vector(v) => v.shape(),
        }
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_vec(&self) -> Vec<f32> {
        match self {
            Tensor::Matrix(m) => m.iter().copied().collect(),
            Tensor::Vector(v) => v.to_vec(),
        }
    }
}

fn shape_string(shape: &[usize]) -> String {
    shape
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

fn parse_shape(s: &str) -> Option<Vec<usize>> {
    s.split('x').map(|d| d.parse().ok()).collect()
}

/// Writes `manifest.txt` and one little-endian `f32` blob per tensor into `dir`.
pub fn save_weights(w: &GnnWeights, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut m = Manifest::new();
    m.push("format_version", WEIGHT_FORMAT_VERSION)
        .push("activation", "relu")
        .push("hidden", w.hidden);
    for (name, t) in w.tensors() {
        m.push("tensor", format!("{name}:{}", shape_string(t.shape())));
        let bytes: Vec<u8> = t.to_vec().iter().flat_map(|v| v.to_le_bytes()).collect();
        let path = dir.join(&name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    m.write(&dir.join("manifest.txt"))
}

/// Reads a weight directory, checking the version and every tensor shape.
pub fn load_weights(dir: &Path) -> Result<GnnWeights> {
    let m = Manifest::read(&dir.join("manifest.txt"))?;
    let version: u32 = m.parse("format_version")?;
    if version != WEIGHT_FORMAT_VERSION {
        return Err(Error::WeightVersion {
            found: version,
            expected: WEIGHT_FORMAT_VERSION,
        });
    }
    let activation = m.require("activation")?;
    if activation != "relu" {
        return Err(Error::format(
            "weights",
            format!("unsupported activation `{activation}`"),
        ));
    }
    let hidden: usize = m.parse("hidden")?;
    let listed: Vec<(String, Vec<usize>)> = m
        .get_all("tensor")
        .map(|entry| {
            let (name, shape) = entry
                .split_once(':')
                .ok_or_else(|| Error::format("weights", format!("bad tensor entry `{entry}`")))?;
            let shape = parse_shape(shape)
                .ok_or_else(|| Error::format("weights", format!("bad shape in `{entry}`")))?;
            Ok((name.to_string(), shape))
        })
        .collect::<Result<_>>()?;

    let mut w = GnnWeights::zeros(hidden);
    let expected = GnnWeights::expected_shapes(hidden);
    for (name, shape) in &expected {
        let found = listed
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::format("weights", format!("missing tensor `{name}`")))?;
        if &found.1 != shape {
            return Err(Error::WeightShape {
                name: name.clone(),
                expected: shape.clone(),
                found: found.1.clone(),
            });
        }
    }
    if let Some((extra, _)) = listed
        .iter()
        .find(|(n, _)| !expected.iter().any(|(e, _)| e == n))
    {
        return Err(Error::format(
            "weights",
            format!("unexpected tensor `{extra}`"),
        ));
    }
    for (name, slot) in w.tensors_mut() {
        let path = dir.join(&name);
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let want = slot.len() * 4;
        if bytes.len() < want {
            return Err(Error::WeightTruncated {
                name,
                expected: want,
                found: bytes.len(),
            });
        }
        if bytes.len() > want {
            return Err(Error::format(
                "weights",
                format!("tensor file `{name}` has trailing bytes"),
            ));
        }
        for (v, chunk) in slot.iter_mut().zip(bytes.chunks_exact(4)) {
            *v = f32::from_le_bytes(chunk.try_into().unwrap());
        }
    }
    Ok(w)
}
