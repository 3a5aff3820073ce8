//! CSV and JSON forms of grid functions and paths.
//!
//! * grid function: header row `s,value`, one row per grid point;
//! * path: header row `t,s,value`, frames in time order;
//! * metadata: a JSON object `{"b": .., "L": .., "h_s": .., "p": ..}`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Exponent, Grid, GridFunction, TimePath};
use crate::error::{Error, Result};

/// Grid metadata carried next to every exported function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub b: f64,
    #[serde(rename = "L")]
    pub left: f64,
    pub h_s: f64,
    pub p: f64,
}

impl GridHeader {
    pub fn new(grid: &Grid, p: Exponent) -> Self {
        Self { b: grid.b(), left: grid.left(), h_s: grid.step(), p: p.value() }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.b, self.left, self.h_s)
    }

    pub fn exponent(&self) -> Result<Exponent> {
        Exponent::new(self.p)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct PointRow {
    s: f64,
    value: f64,
}

#[derive(Serialize)]
struct FrameRow {
    t: f64,
    s: f64,
    value: f64,
}

pub fn write_function<W: Write>(x: &GridFunction, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for (s, &value) in x.grid().points().zip(x.values()) {
        w.serialize(PointRow { s, value })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `s,value` rows that must sit exactly on the grid described by
/// `header`, in order.
pub fn read_function<R: Read>(input: R, header: &GridHeader) -> Result<GridFunction> {
    let grid = header.grid()?;
    let p = header.exponent()?;
    let mut values = Vec::with_capacity(grid.len());
    for (i, row) in csv::Reader::from_reader(input).deserialize::<PointRow>().enumerate() {
        let row = row?;
        if i >= grid.len() || grid.index_of(row.s)? != i {
            return Err(Error::ShapeMismatch(format!("row {i} at s = {} is off the grid", row.s)));
        }
        values.push(row.value);
    }
    GridFunction::new(grid, p, values)
}

/// Reads `s,value` rows at arbitrary increasing positions (a kernel file, for
/// instance) and interpolates them linearly onto `grid`; points outside the
/// sampled range get zero.
pub fn read_samples<R: Read>(input: R) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for row in csv::Reader::from_reader(input).deserialize::<PointRow>() {
        let row = row?;
        if !(row.s.is_finite() && row.value.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(&(prev, _)) = rows.last() {
            if row.s <= prev {
                return Err(Error::ShapeMismatch("sample positions must increase".into()));
            }
        }
        rows.push((row.s, row.value));
    }
    Ok(rows)
}

pub fn interpolate_samples(samples: &[(f64, f64)], s: f64) -> f64 {
    let (first, last) = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => return 0.0,
    };
    if s < first || s > last {
        return 0.0;
    }
    let k = samples.partition_point(|&(x, _)| x <= s);
    if k == 0 {
        return samples[0].1;
    }
    if k == samples.len() {
        return samples[k - 1].1;
    }
    let (x0, y0) = samples[k - 1];
    let (x1, y1) = samples[k];
    y0 + (y1 - y0) * (s - x0) / (x1 - x0)
}

pub fn write_path<W: Write>(f: &TimePath, out: W) -> Result<()> {
    write_frames(f, 1, out)
}

/// Writes every `stride`-th frame (and always the last one).
pub fn write_frames<W: Write>(f: &TimePath, stride: usize, out: W) -> Result<()> {
    let stride = stride.max(1);
    let mut w = csv::Writer::from_writer(out);
    for (l, frame) in f.frames().iter().enumerate() {
        if l % stride != 0 && l != f.steps() {
            continue;
        }
        let t = f.time(l);
        for (s, &value) in frame.grid().points().zip(frame.values()) {
            w.serialize(FrameRow { t, s, value })?;
        }
    }
    w.flush()?;
    Ok(())
}
