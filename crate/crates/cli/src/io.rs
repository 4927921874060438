use std::io::Write;
use std::path::{Path, PathBuf};

use periodic_tikhonov::{FourierCoefficients, HarmonicIndex, TrapezoidalGrid};

use crate::error::{CliError, CliResult};

/// Largest accepted distance of an input `x` from its trapezoidal node.
pub const NODE_TOLERANCE: f64 = 1e-9;

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f(x: f64) -> String {
    format!("{x:?}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// A CSV body with `#`-prefixed metadata lines above the header.
pub struct Table {
    meta: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(meta: &[String], header: &[&str]) -> Self {
        Self {
            meta: meta.to_vec(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, path: &Path) -> CliResult<PathBuf> {
        let mut out = Vec::new();
        for m in &self.meta {
            writeln!(out, "# {m}").expect("writing to memory");
        }
        {
            let mut w = csv::Writer::from_writer(&mut out);
            let csv_err = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
            w.write_record(&self.header).map_err(csv_err)?;
            for r in &self.rows {
                w.write_record(r).map_err(csv_err)?;
            }
            w.flush().map_err(|e| CliError::io(path, e))?;
        }
        write_atomic(path, &out)?;
        Ok(path.to_path_buf())
    }
}

fn reader(path: &Path) -> CliResult<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::io(path, io),
            other => CliError::input(path, None, format!("{other:?}")),
        })
}

fn check_header(path: &Path, rdr: &mut csv::Reader<std::fs::File>, expected: &[&str]) -> CliResult<()> {
    let headers = rdr
        .headers()
        .map_err(|e| CliError::input(path, e.position().map(|p| p.line()), e.to_string()))?
        .clone();
    let got: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if got.len() < expected.len() || got.iter().zip(expected).any(|(g, e)| g != e) {
        return Err(CliError::input(
            path,
            Some(1),
            format!("expected header '{}', found '{}'", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

fn parse_field(path: &Path, line: u64, rec: &csv::StringRecord, i: usize, name: &str) -> CliResult<f64> {
    let raw = rec
        .get(i)
        .ok_or_else(|| CliError::input(path, Some(line), format!("missing column '{name}'")))?;
    let v: f64 = raw
        .parse()
        .map_err(|_| CliError::input(path, Some(line), format!("'{raw}' in column '{name}' is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::input(path, Some(line), format!("non-finite {name} value '{raw}'")));
    }
    Ok(v)
}

/// Reads `x,y` samples and checks that `x` is the trapezoidal grid `-pi + 2 pi (j-1)/N`.
pub fn read_samples(path: &Path) -> CliResult<(TrapezoidalGrid, Vec<f64>)> {
    let mut rdr = reader(path)?;
    check_header(path, &mut rdr, &["x", "y"])?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::input(path, e.position().map(|p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        xs.push(parse_field(path, line, &rec, 0, "x")?);
        ys.push(parse_field(path, line, &rec, 1, "y")?);
    }
    let n = xs.len();
    if n < 3 || n % 2 == 0 {
        return Err(CliError::input(path, None, format!("need an odd number (>= 3) of samples, got {n}")));
    }
    let grid = periodic_tikhonov::make_grid(n)?;
    for (j, (x, node)) in xs.iter().zip(grid.nodes()).enumerate() {
        if (x - node).abs() > NODE_TOLERANCE {
            return Err(CliError::input(
                path,
                Some(j as u64 + 2),
                format!(
                    "x = {x} is not node {} of the trapezoidal grid (expected {node}); samples must sit at \
                     x_j = -pi + 2 pi (j-1)/N, j = 1..N, in increasing order",
                    j + 1
                ),
            ));
        }
    }
    Ok((grid, ys))
}

/// Reads a coefficients table written by `approximate` (columns `ell,k,alpha,...`).
pub fn read_coefficients(path: &Path) -> CliResult<FourierCoefficients> {
    let mut rdr = reader(path)?;
    check_header(path, &mut rdr, &["ell", "k", "alpha"])?;
    let mut entries = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::input(path, e.position().map(|p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let ell: usize = rec
            .get(0)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| CliError::input(path, Some(line), "bad ell"))?;
        let k: u8 = rec
            .get(1)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| CliError::input(path, Some(line), "bad k"))?;
        let idx = HarmonicIndex::new(ell, k).map_err(|e| CliError::input(path, Some(line), e.to_string()))?;
        entries.push((idx.position(), parse_field(path, line, &rec, 2, "alpha")?));
    }
    let d = entries.len();
    if d % 2 == 0 {
        return Err(CliError::input(path, None, format!("{d} coefficients is not 2L+1")));
    }
    let mut values = vec![f64::NAN; d];
    for (pos, v) in entries {
        if pos >= d || !values[pos].is_nan() {
            return Err(CliError::input(path, None, "coefficient indices are not 0..2L+1 exactly once"));
        }
        values[pos] = v;
    }
    Ok(FourierCoefficients::from_values((d - 1) / 2, d, values)?)
}
