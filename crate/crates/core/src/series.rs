//! Gridded output channels and their CSV form.
//!
//! CSV dialect: `#`-prefixed metadata lines (`# key = value`), one header
//! row, comma-separated values, `\n` line endings. Floats are written with
//! Rust's shortest round-trip representation.

use std::io::{self, Write};

use crate::error::{Error, Result};

/// Values accepted as metadata. Floats use the shortest representation that
/// parses back to the same value.
pub trait MetaValue {
    fn render(&self) -> String;
}

impl MetaValue for f64 {
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl MetaValue for &str {
    fn render(&self) -> String {
        (*self).to_owned()
    }
}

impl MetaValue for String {
    fn render(&self) -> String {
        self.clone()
    }
}

macro_rules! display_meta {
    ($($t:ty),*) => {
        $(impl MetaValue for $t {
            fn render(&self) -> String {
                self.to_string()
            }
        })*
    };
}

display_meta!(bool, usize, u64, i64);

/// A strictly increasing grid with any number of equally long named channels.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    axis: String,
    grid: Vec<f64>,
    channels: Vec<(String, Vec<f64>)>,
    metadata: Vec<(String, String)>,
}

impl TimeSeries {
    pub fn new(axis: impl Into<String>, grid: Vec<f64>) -> Result<Self> {
        validate_grid(&grid)?;
        Ok(Self {
            axis: axis.into(),
            grid,
            channels: Vec::new(),
            metadata: Vec::new(),
        })
    }

    pub fn axis(&self) -> &str {
        &self.axis
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn push_channel(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.grid.len() {
            return Err(Error::Grid(format!(
                "channel {name} has {} values for {} grid points",
                values.len(),
                self.grid.len()
            )));
        }
        if self.channel(&name).is_some() {
            return Err(Error::Grid(format!("duplicate channel {name}")));
        }
        self.channels.push((name, values));
        Ok(())
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.channels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|(n, _)| n.as_str())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl MetaValue) {
        let key = key.into();
        let value = value.render();
        match self.metadata.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key, value)),
        }
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k} = {v}")?;
        }
        write!(out, "{}", self.axis)?;
        for (name, _) in &self.channels {
            write!(out, ",{name}")?;
        }
        out.write_all(b"\n")?;
        for (i, x) in self.grid.iter().enumerate() {
            write!(out, "{x:?}")?;
            for (_, values) in &self.channels {
                write!(out, ",{:?}", values[i])?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid("empty grid".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Grid("non-finite grid point".into()));
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::Grid(format!(
            "grid not strictly increasing at index {}",
            i + 1
        )));
    }
    Ok(())
}

/// `points` equally spaced values from `start` to `end` inclusive.
pub fn uniform_grid(start: f64, end: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(end > start) {
        return Err(Error::Grid(format!(
            "need end > start and at least 2 points (got [{start}, {end}], {points})"
        )));
    }
    let step = (end - start) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                end
            } else {
                start + i as f64 * step
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut ts = TimeSeries::new("tau", vec![0.0, 0.5]).unwrap();
        ts.push_channel("P2", vec![0.0, 0.25]).unwrap();
        ts.set_meta("a", 0.2393);
        let s = ts.to_csv_string();
        assert_eq!(s, "# a = 0.2393\ntau,P2\n0.0,0.0\n0.5,0.25\n");
    }

    #[test]
    fn rejects_bad_grids_and_channels() {
        assert!(TimeSeries::new("tau", vec![]).is_err());
        assert!(TimeSeries::new("tau", vec![0.0, 0.0]).is_err());
        assert!(TimeSeries::new("tau", vec![1.0, f64::NAN]).is_err());
        let mut ts = TimeSeries::new("tau", vec![0.0, 1.0]).unwrap();
        assert!(ts.push_channel("x", vec![1.0]).is_err());
        ts.push_channel("x", vec![1.0, 2.0]).unwrap();
        assert!(ts.push_channel("x", vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(0.0, 125.0, 1251).unwrap();
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 125.0);
        assert!(validate_grid(&g).is_ok());
        assert!(uniform_grid(1.0, 1.0, 3).is_err());
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
    }
}
