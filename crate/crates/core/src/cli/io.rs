//! Matrix files and the canonical JSON writer.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use super::CliError;
use crate::numkernel::{c64, Matrix, Subspace, Tolerances};
use crate::projections::AffineOperatorFamily;

/// A matrix entry: `[re, im]`, or a plain real number.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    data: Vec<Entry>,
}

/// Row-major `{rows, cols, data: [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&Matrix> for MatrixFile {
    fn from(m: &Matrix) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixFile { rows, cols, data }
    }
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c64(re, im)
        })
    }
}

/// Parses a matrix document, promoting plain numbers to `[x, 0]`.
pub fn parse_matrix(text: &str) -> Result<Matrix, String> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| format!("malformed matrix document: {e}"))?;
    if doc.data.len() != doc.rows * doc.cols {
        return Err(format!(
            "matrix document declares {}x{} but holds {} entries",
            doc.rows,
            doc.cols,
            doc.data.len()
        ));
    }
    let data: Vec<[f64; 2]> = doc
        .data
        .iter()
        .map(|e| match *e {
            Entry::Real(x) => [x, 0.0],
            Entry::Complex(z) => z,
        })
        .collect();
    if data.iter().flatten().any(|x| !x.is_finite()) {
        return Err("matrix document holds non-finite numbers".into());
    }
    Ok(MatrixFile {
        rows: doc.rows,
        cols: doc.cols,
        data,
    }
    .to_matrix())
}

pub fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// The column span of the matrix in `path`, orthonormalized.
pub fn read_subspace(path: &Path, tol: &Tolerances) -> Result<Subspace, CliError> {
    let m = read_matrix(path)?;
    Ok(Subspace::new(&m, tol)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyFile {
    pub base: MatrixFile,
    pub range_basis: MatrixFile,
    pub domain_basis: MatrixFile,
}

impl From<&AffineOperatorFamily> for FamilyFile {
    fn from(f: &AffineOperatorFamily) -> Self {
        FamilyFile {
            base: (&f.base).into(),
            range_basis: f.range_space.basis().into(),
            domain_basis: f.domain_space.basis().into(),
        }
    }
}

/// Compact JSON with every float written as `{:.16e}`, i.e. 17 significant
/// digits, which round-trips any `f64` exactly.
struct Canonical;

impl Formatter for Canonical {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Canonical);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON output is UTF-8")
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::real_matrix;

    #[test]
    fn plain_numbers_are_promoted() {
        let m = parse_matrix(r#"{"rows": 1, "cols": 2, "data": [1.5, [2, -1]]}"#).unwrap();
        assert_eq!(m[(0, 0)], c64(1.5, 0.0));
        assert_eq!(m[(0, 1)], c64(2.0, -1.0));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(parse_matrix(r#"{"rows": 2, "cols": 2, "data": [1, 2, 3]}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 1, "cols": 1, "data": [[1, 2, 3]]}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 1, "cols": 1}"#).is_err());
        assert!(parse_matrix(r#"{"rows": 1, "cols": 1, "data": [1e999]}"#).is_err());
        assert!(parse_matrix("not json").is_err());
    }

    #[test]
    fn canonical_round_trip_is_byte_exact() {
        let m = real_matrix(2, 2, &[0.1, -1.0 / 3.0, 1e-300, 6.02e23]);
        let first = to_canonical_string(&MatrixFile::from(&m));
        let again = to_canonical_string(&MatrixFile::from(&parse_matrix(&first).unwrap()));
        assert_eq!(first, again);
        assert_eq!(parse_matrix(&first).unwrap(), m);
        assert!(first.contains("1.0000000000000001e-1"));
    }

    #[test]
    fn non_finite_floats_become_null() {
        assert_eq!(to_canonical_string(&f64::INFINITY), "null\n");
    }
}
