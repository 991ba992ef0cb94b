//! Field snapshots, comparisons, key-value configuration and atomic writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::state::{ConservedState, Field, GasModel, Grid, PrimitiveState};

pub const FORMAT_TAG: &str = "euler-bench v1";
pub const BINARY_MAGIC: &[u8; 16] = b"EULERBENCH-FLD1\0";

/// A self-describing field snapshot in primitive variables, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub case: String,
    pub t: f64,
    pub grid: Grid,
    pub gamma: f64,
    /// `(rho, u, v, p)` per interior cell.
    pub values: Vec<[f64; 4]>,
}

fn primitive_or_vacuum(w: &ConservedState, gas: &GasModel) -> [f64; 4] {
    if w.rho > 0.0 {
        let u = w.mx / w.rho;
        let v = w.my / w.rho;
        [w.rho, u, v, w.pressure(gas)]
    } else {
        [w.rho, 0.0, 0.0, (gas.gamma - 1.0) * w.e]
    }
}

impl Snapshot {
    pub fn from_field(case: &str, t: f64, field: &Field, gas: &GasModel) -> Self {
        Snapshot {
            case: case.to_string(),
            t,
            grid: field.grid,
            gamma: gas.gamma,
            values: field.interior().map(|(_, _, w)| primitive_or_vacuum(&w, gas)).collect(),
        }
    }

    pub fn to_field(&self) -> Field {
        let gas = GasModel::new(self.gamma);
        let nx = self.grid.nx;
        Field::from_fn(self.grid, |i, j| {
            let [rho, u, v, p] = self.values[j * nx + i];
            PrimitiveState::new(rho, u, v, p).to_conserved_unchecked(&gas)
        })
    }

    pub fn header(&self) -> String {
        let g = &self.grid;
        format!(
            "# {FORMAT_TAG}; case={}; t={}; nx={}; ny={}; dx={}; dy={}; gamma={}",
            self.case, self.t, g.nx, g.ny, g.dx, g.dy, self.gamma
        )
    }

    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut s = String::with_capacity(64 * self.values.len() + 128);
        s.push_str(&self.header());
        s.push_str("\nx,y,rho,u,v,p\n");
        for j in 0..g.ny {
            for i in 0..g.nx {
                let [r, u, v, p] = self.values[j * g.nx + i];
                let (x, y) = (g.x_center(i as isize), g.y_center(j as isize));
                s.push_str(&format!("{x},{y},{r},{u},{v},{p}\n"));
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
        let meta = parse_header(first)?;
        let (nx, ny): (usize, usize) = (meta.get_parsed("nx", 1)?, meta.get_parsed("ny", 1)?);
        let (dx, dy): (f64, f64) = (meta.get_parsed("dx", 1)?, meta.get_parsed("dy", 1)?);
        let t: f64 = meta.get_parsed("t", 1)?;
        let gamma: f64 = meta.get_parsed("gamma", 1)?;
        let case = meta.get("case", 1)?.to_string();
        match lines.next() {
            Some((_, l)) if l.trim() == "x,y,rho,u,v,p" => {}
            Some((n, _)) => return Err(perr(n + 1, "expected column line `x,y,rho,u,v,p`")),
            None => return Err(perr(2, "missing column line")),
        }
        let mut values = Vec::with_capacity(nx * ny);
        let mut origin = None;
        for (n, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 6 {
                return Err(perr(n + 1, &format!("expected 6 columns, found {}", cols.len())));
            }
            let mut v = [0.0; 6];
            for (k, c) in cols.iter().enumerate() {
                v[k] = c
                    .trim()
                    .parse()
                    .map_err(|_| perr(n + 1, &format!("invalid number `{}` in column {}", c.trim(), k + 1)))?;
            }
            if origin.is_none() {
                origin = Some((v[0], v[1]));
            }
            values.push([v[2], v[3], v[4], v[5]]);
        }
        if values.len() != nx * ny {
            return Err(perr(
                text.lines().count(),
                &format!("expected {} data rows, found {}", nx * ny, values.len()),
            ));
        }
        let (xc, yc) = origin.unwrap_or((0.5 * dx, 0.5 * dy));
        let grid = if ny == 1 && dy == 1.0 {
            let x0 = xc - 0.5 * dx;
            Grid::new_1d(nx, (x0, x0 + nx as f64 * dx))
        } else {
            let (x0, y0) = (xc - 0.5 * dx, yc - 0.5 * dy);
            Grid::new_2d(nx, ny, (x0, x0 + nx as f64 * dx), (y0, y0 + ny as f64 * dy))
        };
        // The header spacings are authoritative.
        let grid = Grid { dx, dy, ..grid };
        Ok(Snapshot {
            case,
            t,
            grid,
            gamma,
            values,
        })
    }

    pub fn to_binary(&self) -> Vec<u8> {
        let g = &self.grid;
        let mut b = Vec::with_capacity(16 + 96 + self.case.len() + 32 * self.values.len());
        b.extend_from_slice(BINARY_MAGIC);
        b.extend_from_slice(&(self.case.len() as u64).to_le_bytes());
        b.extend_from_slice(self.case.as_bytes());
        b.extend_from_slice(&(g.nx as u64).to_le_bytes());
        b.extend_from_slice(&(g.ny as u64).to_le_bytes());
        for v in [self.t, g.dx, g.dy, g.x0, g.y0, self.gamma] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        for q in &self.values {
            for v in q {
                b.extend_from_slice(&v.to_le_bytes());
            }
        }
        b
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { b: bytes, pos: 0 };
        if r.take(16)? != BINARY_MAGIC {
            return Err(perr(0, "bad magic header"));
        }
        let n = r.u64()? as usize;
        let case = String::from_utf8(r.take(n)?.to_vec()).map_err(|_| perr(0, "case id is not UTF-8"))?;
        let (nx, ny) = (r.u64()? as usize, r.u64()? as usize);
        let [t, dx, dy, x0, y0, gamma] = [r.f64()?, r.f64()?, r.f64()?, r.f64()?, r.f64()?, r.f64()?];
        let mut values = Vec::with_capacity(nx * ny);
        for _ in 0..nx * ny {
            values.push([r.f64()?, r.f64()?, r.f64()?, r.f64()?]);
        }
        if r.pos != bytes.len() {
            return Err(perr(0, "trailing bytes after field data"));
        }
        Ok(Snapshot {
            case,
            t,
            grid: Grid { nx, ny, dx, dy, x0, y0 },
            gamma,
            values,
        })
    }

    /// Reads either format, chosen by the leading bytes.
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        if bytes.starts_with(BINARY_MAGIC) {
            Snapshot::from_binary(&bytes)
        } else {
            let text = String::from_utf8(bytes).map_err(|_| perr(0, "file is neither UTF-8 text nor binary snapshot"))?;
            Snapshot::from_csv(&text)
        }
    }
}

struct Reader<'a> {
    b: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.b.len() {
            return Err(perr(0, &format!("truncated binary snapshot at byte {}", self.pos)));
        }
        let s = &self.b[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn perr(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

struct HeaderMeta(Vec<(String, String)>);

impl HeaderMeta {
    fn get(&self, key: &str, line: usize) -> Result<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| perr(line, &format!("header is missing `{key}`")))
    }
    fn get_parsed<T: std::str::FromStr>(&self, key: &str, line: usize) -> Result<T> {
        let v = self.get(key, line)?;
        v.parse()
            .map_err(|_| perr(line, &format!("invalid value `{v}` for `{key}`")))
    }
}

fn parse_header(line: &str) -> Result<HeaderMeta> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| perr(1, "header must start with `#`"))?;
    let mut parts = body.split(';').map(str::trim);
    if parts.next() != Some(FORMAT_TAG) {
        return Err(perr(1, &format!("expected format tag `{FORMAT_TAG}`")));
    }
    let mut kv = Vec::new();
    for p in parts.filter(|p| !p.is_empty()) {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| perr(1, &format!("header entry `{p}` is not key=value")))?;
        kv.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(HeaderMeta(kv))
}

/// Per-component difference norms between two snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    /// Mean absolute difference of `(rho, u, v, p)`.
    pub l1: [f64; 4],
    pub linf: [f64; 4],
}

pub fn compare(a: &Snapshot, b: &Snapshot) -> Result<Norms> {
    let (ga, gb) = (&a.grid, &b.grid);
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    if ga.nx != gb.nx || ga.ny != gb.ny || !close(ga.dx, gb.dx) || !close(ga.dy, gb.dy) {
        return Err(Error::GridMismatch(format!(
            "{}x{} (dx {}, dy {}) vs {}x{} (dx {}, dy {})",
            ga.nx, ga.ny, ga.dx, ga.dy, gb.nx, gb.ny, gb.dx, gb.dy
        )));
    }
    let mut l1 = [0.0; 4];
    let mut linf = [0.0f64; 4];
    for (p, q) in a.values.iter().zip(&b.values) {
        for k in 0..4 {
            let d = (p[k] - q[k]).abs();
            l1[k] += d;
            linf[k] = linf[k].max(d);
        }
    }
    let n = a.values.len().max(1) as f64;
    Ok(Norms {
        l1: l1.map(|v| v / n),
        linf,
    })
}

/// Parses a flat `key = value` file. Blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| perr(n + 1, &format!("expected `key = value`, found `{line}`")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(perr(n + 1, "empty key"));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `bytes` to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp: PathBuf = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Appends rows `t,<values...>` to `diag_<kind>.csv` in `dir`, writing the
/// header on first use.
pub fn append_diagnostic(dir: &Path, kind: &str, columns: &[&str], rows: &[Vec<f64>]) -> Result<PathBuf> {
    let path = dir.join(format!("diag_{kind}.csv"));
    let fresh = !path.exists();
    let mut f = fs::OpenOptions::new().create(true).append(true).open(&path)?;
    let mut s = String::new();
    if fresh {
        s.push_str(&columns.join(","));
        s.push('\n');
    }
    for r in rows {
        s.push_str(&r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    f.write_all(s.as_bytes())?;
    Ok(path)
}

/// File-name-safe form of a case id.
pub fn slug(case: &str) -> String {
    case.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}
