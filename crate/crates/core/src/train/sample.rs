use std::path::Path;

use super::{gen_residual_batch, BatchConfig, ResidualBatch};
use crate::amg::{
    build_hierarchy, load_hierarchy, save_hierarchy, Hierarchy, SetupConfig, Variant,
};
use crate::error::{Error, Result};
use crate::gnn::{build_composite, Block, CompositeGraph};
use crate::manifest::Manifest;
use crate::problems::{Family, GeneratedProblem};

pub const SAMPLE_FORMAT_VERSION: u32 = 1;

/// Everything the trainer needs for one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSample {
    pub family: Family,
    /// Generator metadata of the operator.
    pub problem: Manifest,
    /// Requested number of levels; the hierarchy may stop earlier on tiny operators.
    pub depth_target: usize,
    pub sweeps: usize,
    pub batch_seed: u64,
    pub hierarchy: Hierarchy,
    /// One composite graph per fine/coarse level pair.
    pub pairs: Vec<CompositeGraph>,
    pub batch: ResidualBatch,
}

fn composite_pairs(h: &Hierarchy) -> Result<Vec<CompositeGraph>> {
    h.levels
        .iter()
        .enumerate()
        .map(|(l, level)| build_composite(&level.a, &level.p, &level.r, h.operator(l + 1)))
        .collect()
}

/// Builds the AGG hierarchy at the family's training depth and draws a batch on it.
pub fn build_training_sample(
    problem: &GeneratedProblem,
    family: Family,
    n_b: usize,
    seed: u64,
) -> Result<TrainingSample> {
    build_training_sample_with_depth(problem, family, n_b, family.config().depth_train, seed)
}

/// [`build_training_sample`] with an explicit level count.
pub fn build_training_sample_with_depth(
    problem: &GeneratedProblem,
    family: Family,
    n_b: usize,
    depth: usize,
    seed: u64,
) -> Result<TrainingSample> {
    let setup = SetupConfig {
        min_coarse_size: 1,
        ..SetupConfig::default()
    }
    .with_max_levels(depth);
    let hierarchy = build_hierarchy(&problem.a, Variant::Agg, &setup, seed)?;
    let sweeps = family.config().sweeps_train;
    let batch = gen_residual_batch(&hierarchy, &BatchConfig::new(n_b, sweeps), seed)?;
    Ok(TrainingSample {
        family,
        problem: problem.meta.clone(),
        depth_target: depth,
        sweeps,
        batch_seed: seed,
        pairs: composite_pairs(&hierarchy)?,
        hierarchy,
        batch,
    })
}

fn push_u64(buf: &mut Vec<u8>, v: usize) {
    buf.extend_from_slice(&(v as u64).to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::format(self.what, "file is truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<usize> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")) as usize)
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let bytes = self.take(
            n.checked_mul(4)
                .ok_or_else(|| Error::format(self.what, "length overflow"))?,
        )?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect())
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(Error::format(self.what, "trailing bytes"))
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// `u64 rows, u64 cols`, then `rows × cols` f32 row-major.
fn write_vectors(path: &Path, rows: &[Vec<f32>], n: usize) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + 4 * n * rows.len());
    push_u64(&mut buf, rows.len());
    push_u64(&mut buf, n);
    for row in rows {
        buf.extend(row.iter().flat_map(|v| v.to_le_bytes()));
    }
    write_file(path, &buf)
}

fn read_vectors(path: &Path) -> Result<Vec<Vec<f32>>> {
    let bytes = read_file(path)?;
    let mut r = Reader {
        bytes: &bytes,
        pos: 0,
        what: "vector batch",
    };
    let (rows, n) = (r.u64()?, r.u64()?);
    let out = (0..rows).map(|_| r.f32s(n)).collect::<Result<_>>()?;
    r.finish()?;
    Ok(out)
}

/// `u64 n_fine, n_coarse, n_edges`, four u64 block edge counts, u64 src, u64 dst, f32 values.
fn write_pair(path: &Path, g: &CompositeGraph) -> Result<()> {
    let e = g.n_edges();
    let mut buf = Vec::with_capacity(56 + 20 * e);
    for v in [g.n_fine, g.n_coarse, e] {
        push_u64(&mut buf, v);
    }
    for b in Block::ALL {
        push_u64(&mut buf, g.block_range(b).len());
    }
    for &v in g.src.iter().chain(&g.dst) {
        push_u64(&mut buf, v);
    }
    buf.extend(g.values.iter().flat_map(|v| v.to_le_bytes()));
    write_file(path, &buf)
}

fn check_pair(path: &Path, g: &CompositeGraph) -> Result<()> {
    let bytes = read_file(path)?;
    let mut r = Reader {
        bytes: &bytes,
        pos: 0,
        what: "composite graph",
    };
    let mismatch = |what: &str| {
        Error::format(
            "composite graph",
            format!("{} disagrees with the hierarchy ({what})", path.display()),
        )
    };
    if [r.u64()?, r.u64()?, r.u64()?] != [g.n_fine, g.n_coarse, g.n_edges()] {
        return Err(mismatch("sizes"));
    }
    for b in Block::ALL {
        if r.u64()? != g.block_range(b).len() {
            return Err(mismatch("block sizes"));
        }
    }
    for (k, &s) in g.src.iter().enumerate() {
        if r.u64()? != s {
            return Err(mismatch(&format!("source of edge {k}")));
        }
    }
    for (k, &d) in g.dst.iter().enumerate() {
        if r.u64()? != d {
            return Err(mismatch(&format!("target of edge {k}")));
        }
    }
    let values = r.f32s(g.n_edges())?;
    if values
        .iter()
        .map(|v| v.to_bits())
        .ne(g.values.iter().map(|v| v.to_bits()))
    {
        return Err(mismatch("values"));
    }
    r.finish()
}

/// Writes a sample directory: `manifest.txt`, `hierarchy/`, `pair_<l>.bin`,
/// `errors.bin` and `residuals.bin`.
pub fn export_training_sample(s: &TrainingSample, dir: &Path) -> Result<()> {
    let n = s.hierarchy.finest().n_rows();
    if s.batch
        .errors
        .iter()
        .chain(&s.batch.residuals)
        .any(|v| v.len() != n)
        || s.batch.errors.len() != s.batch.residuals.len()
        || s.batch.cycles.len() != s.batch.errors.len()
        || s.pairs.len() + 1 != s.hierarchy.depth()
    {
        return Err(Error::dim(
            "export_training_sample",
            "batch or pairs do not match the hierarchy",
        ));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    save_hierarchy(&s.hierarchy, &dir.join("hierarchy"))?;
    for (l, g) in s.pairs.iter().enumerate() {
        write_pair(&dir.join(format!("pair_{l}.bin")), g)?;
    }
    write_vectors(&dir.join("errors.bin"), &s.batch.errors, n)?;
    write_vectors(&dir.join("residuals.bin"), &s.batch.residuals, n)?;
    let mut m = Manifest::new();
    m.push("format_version", SAMPLE_FORMAT_VERSION)
        .push("kind", "training_sample")
        .push("family", s.family)
        .push("depth", s.hierarchy.depth())
        .push("depth_target", s.depth_target)
        .push("sweeps", s.sweeps)
        .push("n", n)
        .push("n_b", s.batch.len())
        .push("batch_seed", s.batch_seed)
        .push("resampled", s.batch.resampled)
        .push(
            "cycles",
            s.batch
                .cycles
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
    for (k, v) in s.problem.entries() {
        m.push(&format!("problem.{k}"), v);
    }
    m.write(&dir.join("manifest.txt"))
}

pub fn import_training_sample(dir: &Path) -> Result<TrainingSample> {
    let m = Manifest::read(&dir.join("manifest.txt"))?;
    let version = m.require("format_version")?;
    if version != SAMPLE_FORMAT_VERSION.to_string() {
        return Err(Error::FormatVersion {
            what: "training sample",
            found: version.to_string(),
        });
    }
    if m.require("kind")? != "training_sample" {
        return Err(Error::format(
            "training sample",
            "manifest kind is not training_sample",
        ));
    }
    let family: Family = m.parse("family")?;
    let hierarchy = load_hierarchy(&dir.join("hierarchy"))?;
    if m.parse::<usize>("depth")? != hierarchy.depth() {
        return Err(Error::format(
            "training sample",
            "depth disagrees with the hierarchy",
        ));
    }
    let pairs = composite_pairs(&hierarchy)?;
    for (l, g) in pairs.iter().enumerate() {
        check_pair(&dir.join(format!("pair_{l}.bin")), g)?;
    }
    let errors = read_vectors(&dir.join("errors.bin"))?;
    let residuals = read_vectors(&dir.join("residuals.bin"))?;
    let cycles = m
        .require("cycles")?
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::format("training sample", format!("bad cycle count `{s}`")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let n: usize = m.parse("n")?;
    let n_b: usize = m.parse("n_b")?;
    if errors.len() != n_b
        || residuals.len() != n_b
        || cycles.len() != n_b
        || errors.iter().chain(&residuals).any(|v| v.len() != n)
        || n != hierarchy.finest().n_rows()
    {
        return Err(Error::format(
            "training sample",
            "batch sizes disagree with the manifest",
        ));
    }
    let mut problem = Manifest::new();
    for (k, v) in m.entries() {
        if let Some(key) = k.strip_prefix("problem.") {
            problem.push(key, v);
        }
    }
    Ok(TrainingSample {
        family,
        problem,
        depth_target: m.parse("depth_target")?,
        sweeps: m.parse("sweeps")?,
        batch_seed: m.parse("batch_seed")?,
        hierarchy,
        pairs,
        batch: ResidualBatch {
            residuals,
            errors,
            cycles,
            resampled: m.parse("resampled")?,
        },
    })
}
