//! Matrix Market coordinate files and raw triplet lists.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

fn parse_header(path: &Path, line: &str) -> Result<Field> {
    let lower = line.to_ascii_lowercase();
    let tokens: Vec<&str> = lower.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(Error::Parse {
            path: path.into(),
            line: 1,
            msg: format!("expected a %%MatrixMarket banner, found {line:?}"),
        });
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!("{} {}", tokens[1], tokens[2])));
    }
    let field = match tokens[3] {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        other => return Err(Error::UnsupportedFormat(format!("field type {other}"))),
    };
    if tokens[4] != "general" {
        return Err(Error::UnsupportedFormat(format!("symmetry {}", tokens[4])));
    }
    Ok(field)
}

/// Reads a `matrix coordinate {real,integer,pattern} general` file.
/// Indices on disk are 1-based; pattern entries become 1.0.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_market(path, &text)
}

pub(crate) fn parse_matrix_market(path: &Path, text: &str) -> Result<SparseMatrix> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: path.into(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, banner) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
    let field = parse_header(path, banner)?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triples = Vec::new();
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((nrows, ncols, nnz)) = size else {
            if tokens.len() != 3 {
                return Err(perr(lineno, format!("expected 'rows cols entries', found {line:?}")));
            }
            let parse = |t: &str| t.parse::<usize>().map_err(|e| perr(lineno, format!("bad size field {t:?}: {e}")));
            let dims = (parse(tokens[0])?, parse(tokens[1])?, parse(tokens[2])?);
            triples.reserve(dims.2);
            size = Some(dims);
            continue;
        };
        let want = if field == Field::Pattern { 2 } else { 3 };
        if tokens.len() < want {
            return Err(perr(lineno, format!("expected {want} fields, found {}", tokens.len())));
        }
        let index = |t: &str, bound: usize| -> Result<usize> {
            let v = t.parse::<usize>().map_err(|e| perr(lineno, format!("bad index {t:?}: {e}")))?;
            if v == 0 || v > bound {
                return Err(perr(lineno, format!("index {v} outside 1..={bound}")));
            }
            Ok(v - 1)
        };
        let r = index(tokens[0], nrows)?;
        let c = index(tokens[1], ncols)?;
        let v = match field {
            Field::Pattern => 1.0,
            Field::Integer => tokens[2]
                .parse::<i64>()
                .map_err(|e| perr(lineno, format!("bad integer {:?}: {e}", tokens[2])))? as f64,
            Field::Real => tokens[2]
                .parse::<f64>()
                .map_err(|e| perr(lineno, format!("bad value {:?}: {e}", tokens[2])))?,
        };
        if triples.len() == nnz {
            return Err(perr(lineno, format!("more than the declared {nnz} entries")));
        }
        triples.push((r, c, v));
    }
    let (nrows, ncols, nnz) = size.ok_or_else(|| perr(text.lines().count().max(1), "missing size line".into()))?;
    if triples.len() != nnz {
        return Err(perr(
            text.lines().count(),
            format!("declared {nnz} entries but found {}", triples.len()),
        ));
    }
    SparseMatrix::from_coo(&triples, nrows, ncols)
}

/// Writes `a` as `matrix coordinate real general` with 1-based indices.
pub fn write_matrix_market(path: impl AsRef<Path>, a: &SparseMatrix) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let write = |w: &mut BufWriter<fs::File>| -> std::io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
        for (i, j, v) in a.triples() {
            writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
        }
        w.flush()
    };
    write(&mut w).map_err(|e| Error::io(path, e))
}

/// Reads a raw list of 1-based `row col [value] ...` records separated by
/// whitespace, commas or `::` (MovieLens style). Extra trailing fields are
/// ignored, a missing value means 1.0, and the shape is the largest index
/// seen. Lines starting with `%` or `#` are comments.
pub fn read_triplets(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim_start().to_ascii_lowercase().starts_with("%%matrixmarket") {
        return parse_matrix_market(path, &text);
    }
    let mut triples = Vec::new();
    let (mut nrows, mut ncols) = (0, 0);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
            continue;
        }
        let normalized = line.replace("::", " ").replace([',', ';', '\t'], " ");
        let tokens: Vec<&str> = normalized.split_whitespace().collect();
        let perr = |msg: String| Error::Parse {
            path: path.into(),
            line: i + 1,
            msg,
        };
        if tokens.len() < 2 {
            return Err(perr(format!("expected at least 'row col', found {line:?}")));
        }
        let index = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(v) if v > 0 => Ok(v - 1),
                _ => Err(perr(format!("bad 1-based index {t:?}"))),
            }
        };
        let (r, c) = (index(tokens[0])?, index(tokens[1])?);
        let v = match tokens.get(2) {
            Some(t) => t.parse::<f64>().map_err(|e| perr(format!("bad value {t:?}: {e}")))?,
            None => 1.0,
        };
        nrows = nrows.max(r + 1);
        ncols = ncols.max(c + 1);
        triples.push((r, c, v));
    }
    SparseMatrix::from_coo(&triples, nrows, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SparseMatrix> {
        parse_matrix_market(Path::new("test.mtx"), text)
    }

    #[test]
    fn identity_file() {
        let a = parse("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 1.0\n2 2 1\n").unwrap();
        assert_eq!(a.shape(), (2, 2));
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.values(), &[1.0, 1.0]);
    }

    #[test]
    fn header_only_is_empty() {
        let a = parse("%%MatrixMarket matrix coordinate real general\n3 4 0\n").unwrap();
        assert_eq!(a.shape(), (3, 4));
        assert_eq!(a.nnz(), 0);
    }

    #[test]
    fn pattern_and_integer_fields() {
        let p = parse("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 1\n").unwrap();
        assert_eq!(p.triples().collect::<Vec<_>>(), vec![(1, 0, 1.0)]);
        let i = parse("%%MatrixMarket matrix coordinate integer general\n1 2 1\n1 2 7\n").unwrap();
        assert_eq!(i.values(), &[7.0]);
    }

    #[test]
    fn unsupported_headers() {
        for h in [
            "%%MatrixMarket matrix coordinate complex general",
            "%%MatrixMarket matrix coordinate real symmetric",
            "%%MatrixMarket matrix array real general",
        ] {
            let err = parse(&format!("{h}\n1 1 0\n")).unwrap_err();
            assert!(matches!(err, Error::UnsupportedFormat(_)), "{h}: {err}");
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse("not a banner\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.mtx");
        let a = SparseMatrix::from_coo(&[(0, 1, 0.1), (2, 0, -3.5e-7)], 3, 2).unwrap();
        write_matrix_market(&path, &a).unwrap();
        assert_eq!(read_matrix_market(&path).unwrap(), a);
    }

    #[test]
    fn raw_movielens_style() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ratings.dat");
        fs::write(&path, "1::3::5::978300760\n2::1::3::978302109\n# note\n2::3::4::1\n").unwrap();
        let a = read_triplets(&path).unwrap();
        assert_eq!(a.shape(), (2, 3));
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.to_dense()[(0, 2)], 5.0);
    }
}
