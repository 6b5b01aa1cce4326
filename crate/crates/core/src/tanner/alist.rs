use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// Serializes `h` in alist format.
pub fn write_alist<W: Write>(h: &Gf2Matrix, mut out: W) -> Result<()> {
    let (m, n) = (h.rows(), h.cols());
    let cols: Vec<Vec<usize>> = (0..n).map(|c| h.col_support(c)).collect();
    let rows: Vec<Vec<usize>> = (0..m).map(|r| h.row_support(r)).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = String::new();
    let join = |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(s, "{n} {m}").unwrap();
    writeln!(s, "{max_col} {max_row}").unwrap();
    writeln!(s, "{}", join(&mut cols.iter().map(Vec::len))).unwrap();
    writeln!(s, "{}", join(&mut rows.iter().map(Vec::len))).unwrap();
    for (lists, width) in [(&cols, max_col), (&rows, max_row)] {
        for l in lists.iter() {
            let mut entries: Vec<usize> = l.iter().map(|&x| x + 1).collect();
            entries.resize(width, 0);
            writeln!(s, "{}", join(&mut entries.into_iter())).unwrap();
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

pub fn write_alist_file(h: &Gf2Matrix, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_alist(h, std::io::BufWriter::new(f))
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::MalformedAlist(format!("line {lineno}: bad integer {t:?}"))))
        .collect()
}

/// Parses one padded adjacency line: exactly `width` entries, `degree`
/// leading 1-based indices below `limit + 1`, zeros after.
fn adjacency(line: &[usize], width: usize, degree: usize, limit: usize, lineno: usize) -> Result<Vec<usize>> {
    if line.len() != width {
        return Err(Error::MalformedAlist(format!("line {lineno}: expected {width} entries, found {}", line.len())));
    }
    let (head, pad) = line.split_at(degree);
    if pad.iter().any(|&x| x != 0) {
        return Err(Error::MalformedAlist(format!("line {lineno}: inconsistent zero padding")));
    }
    let mut out = Vec::with_capacity(degree);
    for &x in head {
        if x == 0 || x > limit {
            return Err(Error::MalformedAlist(format!("line {lineno}: index {x} out of range 1..={limit}")));
        }
        if out.contains(&(x - 1)) {
            return Err(Error::MalformedAlist(format!("line {lineno}: repeated index {x}")));
        }
        out.push(x - 1);
    }
    Ok(out)
}

/// Parses an alist document; column and row lists must agree.
pub fn read_alist<R: Read>(input: R) -> Result<Gf2Matrix> {
    let mut lines = Vec::new();
    for (k, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        lines.push((k + 1, numbers(&line, k + 1)?));
    }
    let mut it = lines.into_iter();
    let mut next = |what: &str| it.next().ok_or_else(|| Error::MalformedAlist(format!("missing {what}")));
    let (l, dims) = next("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(Error::MalformedAlist(format!("line {l}: expected \"n m\"")));
    };
    let (l, maxes) = next("maximum degrees")?;
    let [max_col, max_row] = maxes[..] else {
        return Err(Error::MalformedAlist(format!("line {l}: expected two maximum degrees")));
    };
    let (l, col_deg) = next("column degrees")?;
    if col_deg.len() != n {
        return Err(Error::MalformedAlist(format!("line {l}: expected {n} column degrees")));
    }
    let (l, row_deg) = next("row degrees")?;
    if row_deg.len() != m {
        return Err(Error::MalformedAlist(format!("line {l}: expected {m} row degrees")));
    }
    if let Some(d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(Error::MalformedAlist(format!("column degree {d} exceeds maximum {max_col}")));
    }
    if let Some(d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(Error::MalformedAlist(format!("row degree {d} exceeds maximum {max_row}")));
    }
    let mut h = Gf2Matrix::zeros(m, n)?;
    for (c, &deg) in col_deg.iter().enumerate() {
        let (l, line) = next("column list")?;
        for r in adjacency(&line, max_col, deg, m, l)? {
            h.set(r, c, true);
        }
    }
    for (r, &deg) in row_deg.iter().enumerate() {
        let (l, line) = next("row list")?;
        let mut cols = adjacency(&line, max_row, deg, n, l)?;
        cols.sort_unstable();
        if cols != h.row_support(r) {
            return Err(Error::MalformedAlist(format!("line {l}: row list disagrees with column lists")));
        }
    }
    if let Some((l, _)) = it.next() {
        return Err(Error::MalformedAlist(format!("line {l}: trailing data")));
    }
    Ok(h)
}

pub fn read_alist_file(path: impl AsRef<Path>) -> Result<Gf2Matrix> {
    read_alist(std::fs::File::open(path)?)
}
