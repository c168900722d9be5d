use std::fmt;
use std::str::FromStr;

use crate::amg::{CoarseSolver, Variant};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Poisson2D,
    Geometric2D,
    Geometric3D,
    WattsStrogatz,
    TemporalBa,
    SocialHub,
    AnisoDiffusion2D,
    AnisoDiffusion3D,
    AdvDiffusion2D,
    AdvDiffusion3D,
}

/// Hierarchy depth and smoothing sweeps used for training and for evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyConfig {
    pub depth_train: usize,
    pub depth_eval: usize,
    pub sweeps_train: usize,
    pub sweeps_eval: usize,
}

const fn cfg(
    depth_train: usize,
    depth_eval: usize,
    sweeps_train: usize,
    sweeps_eval: usize,
) -> FamilyConfig {
    FamilyConfig {
        depth_train,
        depth_eval,
        sweeps_train,
        sweeps_eval,
    }
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Poisson2D,
        Family::Geometric2D,
        Family::Geometric3D,
        Family::WattsStrogatz,
        Family::TemporalBa,
        Family::SocialHub,
        Family::AnisoDiffusion2D,
        Family::AnisoDiffusion3D,
        Family::AdvDiffusion2D,
        Family::AdvDiffusion3D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Poisson2D => "poisson2d",
            Family::Geometric2D => "geometric2d",
            Family::Geometric3D => "geometric3d",
            Family::WattsStrogatz => "watts_strogatz",
            Family::TemporalBa => "temporal_ba",
            Family::SocialHub => "social_hub",
            Family::AnisoDiffusion2D => "aniso2d",
            Family::AnisoDiffusion3D => "aniso3d",
            Family::AdvDiffusion2D => "advdiff2d",
            Family::AdvDiffusion3D => "advdiff3d",
        }
    }

    pub fn config(self) -> FamilyConfig {
        match self {
            Family::WattsStrogatz => cfg(5, 6, 2, 1),
            Family::SocialHub => cfg(4, 4, 2, 2),
            Family::AdvDiffusion2D | Family::AdvDiffusion3D => cfg(4, 5, 2, 2),
            _ => cfg(4, 5, 2, 1),
        }
    }

    /// Graph families produce unweighted Laplacians.
    pub fn is_graph_laplacian(self) -> bool {
        matches!(
            self,
            Family::Geometric2D
                | Family::Geometric3D
                | Family::WattsStrogatz
                | Family::TemporalBa
                | Family::SocialHub
        )
    }

    /// Discretised PDE families other than the plain Poisson test operator.
    pub fn is_pde(self) -> bool {
        matches!(
            self,
            Family::AnisoDiffusion2D
                | Family::AnisoDiffusion3D
                | Family::AdvDiffusion2D
                | Family::AdvDiffusion3D
        )
    }

    pub fn is_symmetric(self) -> bool {
        !matches!(self, Family::AdvDiffusion2D | Family::AdvDiffusion3D)
    }

    /// Whether the size argument counts grid cells per axis.
    pub fn is_grid(self) -> bool {
        self == Family::Poisson2D || self.is_pde()
    }

    pub fn default_normalize(self) -> bool {
        self.is_pde()
    }

    /// Coarsest-level solver for `variant` on this family.
    pub fn coarse_solver(self, variant: Variant) -> CoarseSolver {
        match (self, variant) {
            (Family::SocialHub, Variant::RapNet) => CoarseSolver::Jacobi(100),
            _ => variant.default_coarse_solver(),
        }
    }

    /// Size argument giving roughly `n` unknowns.
    pub fn size_for_unknowns(self, n: usize) -> usize {
        match self {
            Family::Poisson2D | Family::AnisoDiffusion2D | Family::AdvDiffusion2D => {
                (n as f64).sqrt().round() as usize
            }
            Family::AnisoDiffusion3D | Family::AdvDiffusion3D => (n as f64).cbrt().round() as usize,
            Family::Geometric2D | Family::SocialHub => n.saturating_sub(4).max(4),
            Family::Geometric3D => n.saturating_sub(8).max(5),
            Family::WattsStrogatz | Family::TemporalBa => n,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        let key = match key.as_str() {
            "ws" => "watts_strogatz".to_string(),
            "ba" => "temporal_ba".to_string(),
            _ => key,
        };
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Usage(format!("unknown family `{s}`")))
    }
}

/// Per-family shape parameters that are not the main size argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    /// Ring-lattice neighbours of a small-world graph.
    pub ws_k: usize,
    /// Rewiring probability of a small-world graph.
    pub ws_p: f64,
    /// Attachment count of the preferential-attachment graph.
    pub ba_m: usize,
    /// Time layers of the supra-Laplacian.
    pub layers: usize,
    /// Hub nodes added to the social graph.
    pub hubs: usize,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self {
            ws_k: 6,
            ws_p: 0.01,
            ba_m: 2,
            layers: 50,
            hubs: 5,
        }
    }
}

/// Full description of one generated problem.
///
/// `size` is the grid resolution per axis for grid families, the number of
/// random points for geometric and social-hub graphs, the node count for
/// small-world graphs and the nodes per layer for the temporal graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub normalize: bool,
    pub params: FamilyParams,
    /// Keep only a BFS subgraph of this many nodes.
    pub subgraph: Option<usize>,
}

impl ProblemSpec {
    pub fn new(family: Family, size: usize, seed: u64) -> Self {
        Self {
            family,
            size,
            seed,
            normalize: family.default_normalize(),
            params: FamilyParams::default(),
            subgraph: None,
        }
    }

    /// Problem of roughly `n` unknowns, subsampling families whose natural
    /// generator is much larger.
    pub fn with_unknowns(family: Family, n: usize, seed: u64) -> Self {
        let mut spec = Self::new(family, family.size_for_unknowns(n), seed);
        if family == Family::TemporalBa {
            spec.size = n.div_ceil(spec.params.layers).max(spec.params.ba_m + 2);
            spec.subgraph = Some(n.min(spec.size * spec.params.layers));
        }
        spec
    }

    /// A few hundred unknowns; quick to build in tests and examples.
    pub fn small(family: Family, seed: u64) -> Self {
        let mut spec = Self::with_unknowns(family, 400, seed);
        if family.is_grid() {
            spec.size = spec.size.max(8);
        }
        spec
    }

    pub fn validate(&self) -> Result<()> {
        let min = match self.family {
            Family::Poisson2D => 2,
            Family::Geometric2D => 4,
            Family::Geometric3D => 5,
            Family::SocialHub => 10,
            Family::WattsStrogatz => self.params.ws_k + 1,
            Family::TemporalBa => self.params.ba_m + 1,
            _ => 8,
        };
        if self.size < min {
            return Err(Error::Usage(format!(
                "{} needs size >= {min}, got {}",
                self.family, self.size
            )));
        }
        Ok(())
    }

    /// Space-separated `key=value` parameter list used in dataset manifests.
    pub fn params_string(&self) -> String {
        let p = &self.params;
        let mut s = format!("size={} normalize={}", self.size, self.normalize);
        match self.family {
            Family::WattsStrogatz => s += &format!(" k={} p={}", p.ws_k, p.ws_p),
            Family::TemporalBa => s += &format!(" m={} layers={}", p.ba_m, p.layers),
            Family::SocialHub => s += &format!(" hubs={}", p.hubs),
            _ => {}
        }
        if let Some(k) = self.subgraph {
            s += &format!(" subgraph={k}");
        }
        s
    }

    /// Inverse of [`ProblemSpec::params_string`].
    pub fn from_params(family: Family, params: &str, seed: u64) -> Result<Self> {
        let mut spec = Self::new(family, 0, seed);
        for item in params.split_whitespace() {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::format("problem spec", format!("bad parameter `{item}`")))?;
            let bad = || Error::format("problem spec", format!("bad value in `{item}`"));
            match k {
                "size" => spec.size = v.parse().map_err(|_| bad())?,
                "normalize" => spec.normalize = v.parse().map_err(|_| bad())?,
                "k" => spec.params.ws_k = v.parse().map_err(|_| bad())?,
                "p" => spec.params.ws_p = v.parse().map_err(|_| bad())?,
                "m" => spec.params.ba_m = v.parse().map_err(|_| bad())?,
                "layers" => spec.params.layers = v.parse().map_err(|_| bad())?,
                "hubs" => spec.params.hubs = v.parse().map_err(|_| bad())?,
                "subgraph" => spec.subgraph = Some(v.parse().map_err(|_| bad())?),
                _ => {
                    return Err(Error::format(
                        "problem spec",
                        format!("unknown parameter `{k}`"),
                    ))
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}
