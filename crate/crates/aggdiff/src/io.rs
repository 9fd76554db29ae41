//! Profile CSVs, JSON with fixed float formatting, and atomic file writes.
//!
//! Profiles are stored one row per cell, `r,rho` for radial densities and
//! `x,rho` for line densities, with the cell centre in the first column.
//! The grid is recovered from the first and last centres.

use std::io::Write;
use std::path::Path;

use aggdiff_core::{LineDensity, LineGrid, RadialDensity, RadialGrid};
use anyhow::{bail, Context};
use serde::Serialize;

/// `x` with `digits` significant digits in scientific notation. This is
/// lossless for `digits = 17`.
pub fn fmt_float(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", digits.saturating_sub(1), x)
    } else {
        x.to_string()
    }
}

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// CSV text with a header row; every float goes through [`fmt_float`].
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>, digits: usize) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_float(*v, digits)))?;
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn radial_csv(rho: &RadialDensity, digits: usize) -> anyhow::Result<Vec<u8>> {
    let g = rho.grid();
    csv_table(
        &["r", "rho"],
        (0..g.len()).map(|i| vec![g.center(i), rho.values()[i]]),
        digits,
    )
}

pub fn line_csv(rho: &LineDensity, digits: usize) -> anyhow::Result<Vec<u8>> {
    let g = rho.grid();
    csv_table(
        &["x", "rho"],
        (0..g.len()).map(|i| vec![g.center(i), rho.values()[i]]),
        digits,
    )
}

/// A density file as read from disk.
#[derive(Debug, Clone)]
pub enum DensityFile {
    Radial(RadialDensity),
    Line(LineDensity),
}

fn read_columns(text: &str) -> anyhow::Result<(String, Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.clone();
    if header.len() != 2 || header.get(1) != Some("rho") {
        bail!("density CSV must have the columns r,rho or x,rho");
    }
    let kind = header[0].to_string();
    let (mut pos, mut val) = (Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> anyhow::Result<f64> {
            rec[i]
                .trim()
                .parse::<f64>()
                .with_context(|| format!("row {}: bad number {:?}", line + 2, &rec[i]))
        };
        pos.push(parse(0)?);
        val.push(parse(1)?);
    }
    if pos.len() < 2 {
        bail!("density CSV needs at least two rows");
    }
    Ok((kind, pos, val))
}

fn check_uniform(pos: &[f64], spacing: f64) -> anyhow::Result<()> {
    for (i, w) in pos.windows(2).enumerate() {
        if ((w[1] - w[0]) - spacing).abs() > 1e-9 * spacing {
            bail!("cell centres are not uniformly spaced at row {}", i + 3);
        }
    }
    Ok(())
}

/// Parses a profile CSV. Radial files need the ambient dimension.
pub fn parse_density(text: &str, dim: usize) -> anyhow::Result<DensityFile> {
    let (kind, pos, val) = read_columns(text)?;
    let n = pos.len();
    match kind.as_str() {
        "r" => {
            let r_max = pos[0] + pos[n - 1];
            check_uniform(&pos, r_max / n as f64)?;
            if (pos[0] - 0.5 * r_max / n as f64).abs() > 1e-9 * r_max {
                bail!("radial cells must start at r = 0");
            }
            Ok(DensityFile::Radial(RadialDensity::new(
                RadialGrid::new(r_max, n)?,
                dim,
                val,
            )?))
        }
        "x" => {
            let half = 0.5 * (pos[n - 1] - pos[0]) * n as f64 / (n - 1) as f64;
            check_uniform(&pos, 2.0 * half / n as f64)?;
            if (pos[0] + pos[n - 1]).abs() > 1e-9 * half {
                bail!("line cells must be symmetric about x = 0");
            }
            Ok(DensityFile::Line(LineDensity::new(LineGrid::new(half, n)?, val)?))
        }
        other => bail!("unknown position column {other:?}; expected r or x"),
    }
}

pub fn read_density(path: &Path, dim: usize) -> anyhow::Result<DensityFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_density(&text, dim).with_context(|| format!("parsing {}", path.display()))
}

/// serde_json formatter writing every float with a fixed number of
/// significant digits.
struct FixedFloats {
    digits: usize,
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! forward {
    ($($name:ident),*) => {$(
        fn $name<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
            self.inner.$name(w)
        }
    )*};
}

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        w.write_all(fmt_float(value, self.digits).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    forward!(
        begin_array,
        end_array,
        end_array_value,
        begin_object,
        end_object,
        begin_object_value,
        end_object_value
    );
}

/// Pretty JSON with floats at `digits` significant digits; NaN and
/// infinities become `null`.
pub fn to_json<T: Serialize>(value: &T, digits: usize) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    let formatter = FixedFloats {
        digits,
        inner: serde_json::ser::PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}
