use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::SparseMatrix;
use crate::error::{Error, Result};

const MM_HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// Writes a 1-based coordinate Matrix Market file.
pub fn write_matrix_market(a: &SparseMatrix, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{MM_HEADER}")?;
        writeln!(w, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz())?;
        for (i, j, v) in a.iter() {
            // `{:?}` on f32 prints the shortest round-tripping decimal.
            writeln!(w, "{} {} {:?}", i + 1, j + 1, v)?;
        }
        w.flush()
    };
    body().map_err(|e| Error::io(path, e))
}

/// Reads a coordinate real general Matrix Market file (`symmetric` is expanded).
pub fn read_matrix_market(path: &Path) -> Result<SparseMatrix> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::format("matrix market", "empty file"))?
        .map_err(|e| Error::io(path, e))?;
    let lower = header.to_ascii_lowercase();
    if !lower.starts_with("%%matrixmarket matrix coordinate") || !lower.contains("real") {
        return Err(Error::format(
            "matrix market",
            format!("unsupported header `{header}`"),
        ));
    }
    let symmetric = lower.contains("symmetric");
    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    for line in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(Error::format("matrix market", "size line needs 3 fields"));
                }
                let parse = |s: &str| {
                    s.parse::<usize>().map_err(|_| {
                        Error::format("matrix market", format!("bad size field `{s}`"))
                    })
                };
                let dims = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                triplets.reserve(dims.2);
                size = Some(dims);
            }
            Some((rows, cols, _)) => {
                if fields.len() < 3 {
                    return Err(Error::format(
                        "matrix market",
                        format!("bad entry line `{line}`"),
                    ));
                }
                let bad = || Error::format("matrix market", format!("bad entry line `{line}`"));
                let i: usize = fields[0].parse().map_err(|_| bad())?;
                let j: usize = fields[1].parse().map_err(|_| bad())?;
                let v: f32 = fields[2].parse().map_err(|_| bad())?;
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(bad());
                }
                triplets.push((i - 1, j - 1, v as f64));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v as f64));
                }
            }
        }
    }
    let (rows, cols, nnz) =
        size.ok_or_else(|| Error::format("matrix market", "missing size line"))?;
    let expected = if symmetric { None } else { Some(nnz) };
    if let Some(n) = expected {
        if n != triplets.len() {
            return Err(Error::format(
                "matrix market",
                format!("header announces {n} entries, found {}", triplets.len()),
            ));
        }
    }
    SparseMatrix::from_triplets(rows, cols, &triplets)
}

/// Binary dump: u64 n_rows, n_cols, nnz; u64 row_offsets; u64 col_indices; f32 values. Little-endian.
pub fn write_binary(a: &SparseMatrix, path: &Path) -> Result<()> {
    let mut buf = Vec::with_capacity(24 + 8 * (a.n_rows() + 1 + a.nnz()) + 4 * a.nnz());
    for v in [a.n_rows(), a.n_cols(), a.nnz()] {
        buf.extend_from_slice(&(v as u64).to_le_bytes());
    }
    for &v in a.row_offsets().iter().chain(a.col_indices()) {
        buf.extend_from_slice(&(v as u64).to_le_bytes());
    }
    for &v in a.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn read_binary(path: &Path) -> Result<SparseMatrix> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let short = || Error::format("binary matrix", format!("{} is truncated", path.display()));
    let u64_at = |k: usize| -> Result<usize> {
        let s = bytes.get(8 * k..8 * k + 8).ok_or_else(short)?;
        Ok(u64::from_le_bytes(s.try_into().expect("8-byte slice")) as usize)
    };
    let (n_rows, n_cols, nnz) = (u64_at(0)?, u64_at(1)?, u64_at(2)?);
    let n_words = 3 + n_rows + 1 + nnz;
    if bytes.len() != 8 * n_words + 4 * nnz {
        return Err(short());
    }
    let row_offsets = (3..3 + n_rows + 1)
        .map(u64_at)
        .collect::<Result<Vec<_>>>()?;
    let col_indices = (3 + n_rows + 1..n_words)
        .map(u64_at)
        .collect::<Result<Vec<_>>>()?;
    let values = bytes[8 * n_words..]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().expect("4-byte chunk")))
        .collect();
    SparseMatrix::new(n_rows, n_cols, row_offsets, col_indices, values)
}
