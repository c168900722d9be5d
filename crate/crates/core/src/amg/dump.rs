use std::path::Path;

use super::{CoarseSolver, Hierarchy, Level, SetupConfig, Variant};
use crate::error::{Error, Result};
use crate::manifest::Manifest;
use crate::sparse::{read_binary, write_binary};

const FORMAT_VERSION: u32 = 1;

/// Writes `A_0.bin … A_L.bin`, `P_l.bin`, `R_l.bin` and `manifest.txt` into `dir`.
pub fn save_hierarchy(h: &Hierarchy, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (l, a) in h.operators().enumerate() {
        write_binary(a, &dir.join(format!("A_{l}.bin")))?;
    }
    for (l, level) in h.levels.iter().enumerate() {
        write_binary(&level.p, &dir.join(format!("P_{l}.bin")))?;
        write_binary(&level.r, &dir.join(format!("R_{l}.bin")))?;
    }
    let mut m = Manifest::new();
    m.push("format_version", FORMAT_VERSION)
        .push("variant", h.variant)
        .push("depth", h.depth())
        .push("seed", h.seed)
        .push("coarse_solver", h.coarse_solver)
        .push("eps_soc", h.config.eps_soc)
        .push("eps_mat", h.config.eps_mat)
        .push("omega_smooth", h.config.omega_smooth)
        .push("max_levels", h.config.max_levels)
        .push("min_coarse_size", h.config.min_coarse_size)
        .push(
            "sizes",
            h.sizes()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
    m.write(&dir.join("manifest.txt"))
}

pub fn load_hierarchy(dir: &Path) -> Result<Hierarchy> {
    let m = Manifest::read(&dir.join("manifest.txt"))?;
    let version = m.require("format_version")?;
    if version != FORMAT_VERSION.to_string() {
        return Err(Error::FormatVersion {
            what: "hierarchy",
            found: version.to_string(),
        });
    }
    let depth: usize = m.parse("depth")?;
    if depth == 0 {
        return Err(Error::format("hierarchy", "depth must be at least 1"));
    }
    let mut levels = Vec::with_capacity(depth - 1);
    for l in 0..depth - 1 {
        levels.push(Level {
            a: read_binary(&dir.join(format!("A_{l}.bin")))?,
            p: read_binary(&dir.join(format!("P_{l}.bin")))?,
            r: read_binary(&dir.join(format!("R_{l}.bin")))?,
        });
    }
    let coarsest = read_binary(&dir.join(format!("A_{}.bin", depth - 1)))?;
    for (l, level) in levels.iter().enumerate() {
        let next = levels.get(l + 1).map_or(&coarsest, |n| &n.a);
        if level.p.n_rows() != level.a.n_rows()
            || level.p.n_cols() != next.n_rows()
            || level.r.n_rows() != next.n_rows()
            || level.r.n_cols() != level.a.n_rows()
        {
            return Err(Error::format(
                "hierarchy",
                format!("inconsistent shapes at level {l}"),
            ));
        }
    }
    let variant: Variant = m
        .require("variant")?
        .parse()
        .map_err(|_| Error::format("hierarchy", "unknown variant"))?;
    let coarse_solver: CoarseSolver = m
        .require("coarse_solver")?
        .parse()
        .map_err(|_| Error::format("hierarchy", "unknown coarse solver"))?;
    Ok(Hierarchy {
        levels,
        coarsest,
        coarse_solver,
        variant,
        seed: m.parse("seed")?,
        config: SetupConfig {
            eps_soc: m.parse("eps_soc")?,
            eps_mat: m.parse("eps_mat")?,
            omega_smooth: m.parse("omega_smooth")?,
            max_levels: m.parse("max_levels")?,
            min_coarse_size: m.parse("min_coarse_size")?,
        },
    })
}
