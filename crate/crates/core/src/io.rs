//! File formats: coefficient, node and grid JSON; sample, point, basis and
//! evaluation CSV. Floats are written in shortest round-trip form.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::checkerboard::{build_checkerboard, CheckerboardSet, GridInstance, GridPoint};
use crate::error::{Error, Result};
use crate::nodemap::NodeSequence;
use crate::orthopoly::RecurrenceCoeffs;

/// A grid together with one of its checkerboard sets.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFile {
    pub n: usize,
    pub sigma: usize,
    pub xcoeffs: RecurrenceCoeffs,
    pub ycoeffs: RecurrenceCoeffs,
    pub xnodes: Vec<f64>,
    pub ynodes: Vec<f64>,
    pub tau: u8,
    pub points: Vec<GridPoint>,
}

impl GridFile {
    pub fn new(grid: &GridInstance, tau: u8) -> Result<Self> {
        let set = build_checkerboard(grid, tau)?;
        Ok(GridFile {
            n: grid.n(),
            sigma: grid.sigma(),
            xcoeffs: grid.xcoeffs().clone(),
            ycoeffs: grid.ycoeffs().clone(),
            xnodes: grid.xnodes().as_slice().to_vec(),
            ynodes: grid.ynodes().as_slice().to_vec(),
            tau,
            points: set.points().to_vec(),
        })
    }

    /// Validates the grid and the point list. Each point must sit on the
    /// grid node named by its indices; repeated points are allowed.
    pub fn into_parts(self) -> Result<(GridInstance, CheckerboardSet)> {
        let grid = GridInstance::new(
            NodeSequence::new(self.xnodes)?,
            NodeSequence::new(self.ynodes)?,
            self.xcoeffs,
            self.ycoeffs,
        )?;
        if grid.n() != self.n || grid.sigma() != self.sigma {
            return Err(Error::InvalidGrid(format!(
                "header says n = {}, sigma = {} but the nodes give n = {}, sigma = {}",
                self.n,
                self.sigma,
                grid.n(),
                grid.sigma()
            )));
        }
        let xs = grid.xnodes().as_slice();
        let ys = grid.ynodes().as_slice();
        let scale = xs.iter().chain(ys).fold(1.0_f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let mut points = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let ok = p.r < xs.len()
                && p.u < ys.len()
                && (xs[p.r] - p.x).abs() <= tol
                && (ys[p.u] - p.y).abs() <= tol;
            if !ok {
                return Err(Error::InvalidGrid(format!(
                    "point ({}, {}) at ({}, {}) is not that grid node",
                    p.r, p.u, p.x, p.y
                )));
            }
            points.push(GridPoint {
                x: xs[p.r],
                y: ys[p.u],
                ..*p
            });
        }
        let set = CheckerboardSet::from_points(self.tau, points)?;
        Ok((grid, set))
    }
}

/// Reads a JSON file, or stdin for `-`.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// Writes pretty JSON plus a trailing newline to `out`, or stdout if `None`.
pub fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct SampleRow {
    r: usize,
    u: usize,
    value: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct PointRow {
    x: f64,
    y: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
struct EvalRow {
    x: f64,
    y: f64,
    p: f64,
}

/// One line of a basis dump: anchor indices, evaluation point, value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BasisRow {
    pub s: usize,
    pub v: usize,
    pub point_x: f64,
    pub point_y: f64,
    #[serde(rename = "L_value")]
    pub l_value: f64,
}

/// Reads `r,u,value` rows. Repeated keys are rejected.
pub fn read_samples(path: &Path) -> Result<HashMap<(usize, usize), f64>> {
    let mut out = HashMap::new();
    for row in read_csv::<SampleRow>(path)? {
        if out.insert((row.r, row.u), row.value).is_some() {
            return Err(Error::SampleMismatch(format!("repeated sample for ({}, {})", row.r, row.u)));
        }
    }
    Ok(out)
}

pub fn write_samples(samples: &[(usize, usize, f64)], out: Option<&Path>) -> Result<()> {
    write_csv(samples.iter().map(|&(r, u, value)| SampleRow { r, u, value }), out)
}

/// Reads `x,y` rows.
pub fn read_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(read_csv::<PointRow>(path)?.into_iter().map(|p| (p.x, p.y)).collect())
}

pub fn write_points(points: &[(f64, f64)], out: Option<&Path>) -> Result<()> {
    write_csv(points.iter().map(|&(x, y)| PointRow { x, y }), out)
}

/// Writes `x,y,p` rows.
pub fn write_evaluations(rows: &[(f64, f64, f64)], out: Option<&Path>) -> Result<()> {
    write_csv(rows.iter().map(|&(x, y, p)| EvalRow { x, y, p }), out)
}

pub fn write_basis(rows: &[BasisRow], out: Option<&Path>) -> Result<()> {
    write_csv(rows.iter().copied(), out)
}

pub fn read_basis(path: &Path) -> Result<Vec<BasisRow>> {
    read_csv(path)
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let text = read_text(path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
}

fn write_csv<T: Serialize>(rows: impl Iterator<Item = T>, out: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    write_text(&String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?, out)
}
