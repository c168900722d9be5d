use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::problems::{Family, ProblemSpec};

/// File name of the manifest `gen` writes next to the instances.
pub const DATASET_FILE: &str = "dataset.txt";

/// One line of a dataset manifest: `family params seed path`, with the
/// parameters comma-separated and the path relative to the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    pub spec: ProblemSpec,
    pub path: PathBuf,
}

impl DatasetEntry {
    pub fn id(&self) -> String {
        self.path.file_stem().map_or_else(
            || format!("{}_{}", self.spec.family, self.spec.seed),
            |s| s.to_string_lossy().into_owned(),
        )
    }
}

pub fn write_dataset(path: &Path, entries: &[DatasetEntry]) -> Result<()> {
    let base = path.parent().unwrap_or(Path::new(""));
    let mut text = String::from("# family params seed path\n");
    for e in entries {
        let rel = e.path.strip_prefix(base).unwrap_or(&e.path);
        text += &format!(
            "{} {} {} {}\n",
            e.spec.family,
            e.spec.params_string().replace(' ', ","),
            e.spec.seed,
            rel.display()
        );
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_dataset(path: &Path) -> Result<Vec<DatasetEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [family, params, seed, file] = fields[..] else {
            return Err(Error::format(
                "dataset",
                format!("line {} needs 4 fields", k + 1),
            ));
        };
        let family: Family = family.parse().map_err(|_| {
            Error::format(
                "dataset",
                format!("unknown family `{family}` on line {}", k + 1),
            )
        })?;
        let seed: u64 = seed.parse().map_err(|_| {
            Error::format("dataset", format!("bad seed `{seed}` on line {}", k + 1))
        })?;
        let spec = ProblemSpec::from_params(family, &params.replace(',', " "), seed)?;
        out.push(DatasetEntry {
            spec,
            path: base.join(file),
        });
    }
    if out.is_empty() {
        return Err(Error::format(
            "dataset",
            format!("{} lists no instances", path.display()),
        ));
    }
    Ok(out)
}
