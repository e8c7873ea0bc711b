//! File formats: matrix JSON, zero lists, atomic writes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CrxError, Result};
use crate::hyp_geometry::DiskPoint;
use crate::linalg::{CMat, CVec, C64};

/// `{"n": k, "re": [[...]], "im": [[...]]}`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(a: &CMat) -> Self {
        let n = a.nrows();
        MatrixJson {
            n,
            re: (0..n).map(|i| (0..a.ncols()).map(|j| a[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..a.ncols()).map(|j| a[(i, j)].im).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let n = self.n;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if n == 0 || !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(CrxError::Input(format!("matrix JSON must hold two {n}x{n} arrays")));
        }
        if self.re.iter().chain(&self.im).flatten().any(|v| !v.is_finite()) {
            return Err(CrxError::Input("matrix entries must be finite".into()));
        }
        Ok(CMat::from_fn(n, n, |i, j| C64::new(self.re[i][j], self.im[i][j])))
    }
}

pub fn read_matrix(path: &Path) -> Result<CMat> {
    let text = std::fs::read_to_string(path)?;
    let mj: MatrixJson = serde_json::from_str(&text)?;
    mj.to_matrix()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ZeroEntry {
    Object { re: f64, im: f64 },
    Pair([f64; 2]),
}

/// A JSON list of zeros, each either `{"re": .., "im": ..}` or `[re, im]`.
pub fn parse_zeros(text: &str) -> Result<Vec<DiskPoint>> {
    let entries: Vec<ZeroEntry> = serde_json::from_str(text)?;
    entries
        .into_iter()
        .map(|e| match e {
            ZeroEntry::Object { re, im } => DiskPoint::from_parts(re, im),
            ZeroEntry::Pair([re, im]) => DiskPoint::from_parts(re, im),
        })
        .collect()
}

pub fn read_zeros(path: &Path) -> Result<Vec<DiskPoint>> {
    parse_zeros(&std::fs::read_to_string(path)?)
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_matrix(path: &Path, a: &CMat) -> Result<()> {
    write_json(path, &MatrixJson::from_matrix(a))
}

pub fn ser_matrix<S: Serializer>(a: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatrixJson::from_matrix(a).serialize(s)
}

#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

pub fn ser_vector<S: Serializer>(v: &CVec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| Cx { re: z.re, im: z.im }))
}

pub fn ser_complex_list<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| Cx { re: z.re, im: z.im }))
}
