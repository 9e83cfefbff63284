//! Matrix Market coordinate files.
//!
//! Only the sparsity pattern survives parsing: diagonal entries, stored values
//! and explicit zeros are discarded, and `general` matrices are symmetrized by
//! union of `a_ij` and `a_ji`.
//!
//! See: https://math.nist.gov/MatrixMarket/formats.html#MMformat

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, ParseError, Result};
use crate::instance::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Pattern,
    Real,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    Symmetric,
    General,
}

fn parse_banner(line: &str, lineno: usize) -> Result<(Field, Symmetry), ParseError> {
    let bad = |reason: &str| ParseError::Banner {
        line: lineno,
        reason: reason.to_string(),
    };
    let mut words = line.split_whitespace();
    if words.next() != Some("%%MatrixMarket") {
        return Err(bad("expected `%%MatrixMarket`"));
    }
    match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("matrix") => {}
        _ => return Err(bad("object must be `matrix`")),
    }
    match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("coordinate") => {}
        Some("array") => return Err(bad("dense `array` format is not supported")),
        _ => return Err(bad("format must be `coordinate`")),
    }
    let field = match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("pattern") => Field::Pattern,
        Some("real") => Field::Real,
        Some("integer") => Field::Integer,
        Some(other) => return Err(bad(&format!("unsupported field `{other}`"))),
        None => return Err(bad("missing field")),
    };
    let symmetry = match words.next().map(str::to_ascii_lowercase).as_deref() {
        Some("symmetric") => Symmetry::Symmetric,
        Some("general") => Symmetry::General,
        Some(other) => return Err(bad(&format!("unsupported symmetry `{other}`"))),
        None => return Err(bad("missing symmetry")),
    };
    if words.next().is_some() {
        return Err(bad("trailing words after symmetry"));
    }
    Ok((field, symmetry))
}

fn parse_index(tok: Option<&str>, lineno: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::Entry {
        line: lineno,
        reason: format!("missing {what} index"),
    })?;
    tok.parse().map_err(|_| ParseError::Entry {
        line: lineno,
        reason: format!("cannot parse {what} index `{tok}`"),
    })
}

/// Parses a Matrix Market coordinate file into an [`Instance`] called `name`.
pub fn read_matrix_market<R: BufRead>(reader: R, name: &str) -> Result<Instance> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (field, symmetry) = match lines.next() {
        Some((lineno, line)) => parse_banner(&line.map_err(|e| Error::io(name, e))?, lineno)?,
        None => {
            return Err(ParseError::Banner {
                line: 1,
                reason: "empty input".into(),
            }
            .into())
        }
    };

    let mut size = None;
    let mut last_line = 1;
    let mut pairs = Vec::new();
    let mut found = 0usize;

    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(name, e))?;
        last_line = lineno;
        let s = line.trim();
        if s.is_empty() || s.starts_with('%') {
            continue;
        }
        let mut toks = s.split_whitespace();
        let Some((n, nnz)) = size else {
            let mut dims = [0usize; 3];
            for d in dims.iter_mut() {
                let tok = toks.next().ok_or_else(|| ParseError::SizeLine {
                    line: lineno,
                    reason: "expected `rows cols entries`".into(),
                })?;
                *d = tok.parse().map_err(|_| ParseError::SizeLine {
                    line: lineno,
                    reason: format!("cannot parse `{tok}`"),
                })?;
            }
            if toks.next().is_some() {
                return Err(ParseError::SizeLine {
                    line: lineno,
                    reason: "expected exactly three integers".into(),
                }
                .into());
            }
            let [rows, cols, nnz] = dims;
            if rows != cols {
                return Err(ParseError::NotSquare {
                    line: lineno,
                    rows,
                    cols,
                }
                .into());
            }
            size = Some((rows, nnz));
            pairs.reserve(nnz);
            continue;
        };

        if found == nnz {
            return Err(ParseError::ExtraEntries {
                line: lineno,
                expected: nnz,
            }
            .into());
        }
        let row = parse_index(toks.next(), lineno, "row")?;
        let col = parse_index(toks.next(), lineno, "column")?;
        if row == 0 || col == 0 || row > n || col > n {
            return Err(ParseError::OutOfRange {
                line: lineno,
                row,
                col,
                n,
            }
            .into());
        }
        let nonzero = match field {
            Field::Pattern => true,
            Field::Real | Field::Integer => {
                let tok = toks.next().ok_or_else(|| ParseError::Entry {
                    line: lineno,
                    reason: "missing value".into(),
                })?;
                let value: f64 = tok.parse().map_err(|_| ParseError::Entry {
                    line: lineno,
                    reason: format!("cannot parse value `{tok}`"),
                })?;
                value != 0.0
            }
        };
        found += 1;
        if nonzero && row != col {
            pairs.push(((row - 1).min(col - 1), (row - 1).max(col - 1)));
        }
    }

    let Some((n, nnz)) = size else {
        return Err(ParseError::SizeLine {
            line: last_line + 1,
            reason: "missing size line".into(),
        }
        .into());
    };
    if found < nnz {
        return Err(ParseError::MissingEntries {
            line: last_line + 1,
            expected: nnz,
            found,
        }
        .into());
    }

    let mut inst = Instance::from_normalized(name.to_string(), n, pairs);
    inst.set_nnz_reported(nnz);
    if symmetry == Symmetry::General {
        inst.push_warning(format!(
            "{name}: `general` matrix symmetrized by union of a_ij and a_ji"
        ));
    }
    Ok(inst)
}

pub fn parse_matrix_market(text: &str, name: &str) -> Result<Instance> {
    read_matrix_market(text.as_bytes(), name)
}

/// Reads a `.mtx` file; the instance is named after the file stem.
pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_matrix_market(BufReader::new(file), &name)
}

/// Emits a `pattern symmetric` file with one lower-triangle entry per edge.
pub fn write_matrix_market(inst: &Instance) -> String {
    let mut out = String::with_capacity(16 + inst.edge_count() * 10);
    out.push_str("%%MatrixMarket matrix coordinate pattern symmetric\n");
    if !inst.name().is_empty() {
        let _ = writeln!(out, "% {}", inst.name());
    }
    let _ = writeln!(out, "{} {} {}", inst.n(), inst.n(), inst.edge_count());
    for &(u, v) in inst.edges() {
        let _ = writeln!(out, "{} {}", v + 1, u + 1);
    }
    out
}
