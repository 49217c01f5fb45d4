//! Matrix Market coordinate files and plain-text vectors.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::SparseMatrixCsr;
use crate::error::{Error, Result};

pub const MM_HEADER: &str = "%%MatrixMarket matrix coordinate real general";

/// Reads a `coordinate real` Matrix Market stream (1-based indices).
/// `general` and `symmetric` layouts are accepted.
pub fn read_matrix_market<R: Read>(reader: R) -> Result<SparseMatrixCsr> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))??;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() < 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(Error::Parse(format!("unsupported header: {header}")));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(Error::Parse(format!("unsupported field type: {}", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(Error::Parse(format!("unsupported symmetry: {other}"))),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut trip = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if f.len() != 3 {
                    return Err(Error::Parse(format!("bad size line: {t}")));
                }
                size = Some((parse(f[0])?, parse(f[1])?, parse(f[2])?));
            }
            Some((m, n, _)) => {
                if f.len() != 3 {
                    return Err(Error::Parse(format!("bad entry line: {t}")));
                }
                let i: usize = parse(f[0])?;
                let j: usize = parse(f[1])?;
                let v: f64 = parse(f[2])?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(Error::Parse(format!("entry ({i}, {j}) outside {m}×{n}")));
                }
                trip.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    trip.push((j - 1, i - 1, v));
                }
            }
        }
    }
    let (m, n, nnz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
    let stored = if symmetric { trip.iter().filter(|e| e.0 >= e.1).count() } else { trip.len() };
    if stored != nnz {
        return Err(Error::Parse(format!("expected {nnz} entries, found {stored}")));
    }
    SparseMatrixCsr::from_triplets(m, n, &trip)
}

pub fn write_matrix_market<W: Write>(mut writer: W, a: &SparseMatrixCsr) -> Result<()> {
    let (m, n) = a.shape();
    writeln!(writer, "{MM_HEADER}")?;
    writeln!(writer, "{m} {n} {}", a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(writer, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

/// One value per line; blank lines and `%`/`#` comments are skipped.
/// `inf` and `-inf` are accepted for unbounded entries.
pub fn read_vector<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for line in BufReader::new(reader).lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') || t.starts_with('#') {
            continue;
        }
        out.push(parse(t)?);
    }
    Ok(out)
}

pub fn write_vector<W: Write>(mut writer: W, v: &[f64]) -> Result<()> {
    for x in v {
        writeln!(writer, "{x:e}")?;
    }
    Ok(())
}

pub fn read_matrix_market_file(path: impl AsRef<Path>) -> Result<SparseMatrixCsr> {
    read_matrix_market(File::open(path)?)
}

pub fn write_matrix_market_file(path: impl AsRef<Path>, a: &SparseMatrixCsr) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market(&mut w, a)?;
    w.flush()?;
    Ok(())
}

pub fn read_vector_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    read_vector(File::open(path)?)
}

pub fn write_vector_file(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_vector(&mut w, v)?;
    w.flush()?;
    Ok(())
}

fn parse<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("cannot parse {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_matrix() {
        let a = SparseMatrixCsr::from_triplets(3, 2, &[(0, 1, 1.5), (2, 0, -0.1), (1, 1, 1e-300)]).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, &a).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(MM_HEADER));
        assert!(text.contains("\n1 2 "));
        assert_eq!(read_matrix_market(&buf[..]).unwrap(), a);
    }

    #[test]
    fn symmetric_input_is_mirrored() {
        let src = "%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 2.0\n2 1 -1\n";
        let a = read_matrix_market(src.as_bytes()).unwrap();
        assert_eq!(a.get(0, 1), -1.0);
        assert_eq!(a.get(1, 0), -1.0);
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_matrix_market("%%MatrixMarket matrix array real general\n".as_bytes()).is_err());
        let bad = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n";
        assert!(read_matrix_market(bad.as_bytes()).is_err());
        let short = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n";
        assert!(read_matrix_market(short.as_bytes()).is_err());
    }

    #[test]
    fn vectors_with_infinities() {
        let v = read_vector("1.5\n\n-inf\n# note\ninf\n2e-3\n".as_bytes()).unwrap();
        assert_eq!(v, vec![1.5, f64::NEG_INFINITY, f64::INFINITY, 2e-3]);
        let mut buf = Vec::new();
        write_vector(&mut buf, &v).unwrap();
        assert_eq!(read_vector(&buf[..]).unwrap(), v);
    }
}
