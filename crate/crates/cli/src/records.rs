//! Row types of every CSV table the tool writes, with a writer and a reader
//! that reproduce each other exactly.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context, Result};
use csv::StringRecord;
use merodyn_core::fixed_points::Stability;

/// Fixed-width scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub trait Record: Sized {
    const HEADERS: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
    fn parse(fields: &StringRecord) -> Result<Self>;
}

fn field(r: &StringRecord, i: usize) -> Result<&str> {
    r.get(i).ok_or_else(|| anyhow!("missing column {i}"))
}

fn num<T: std::str::FromStr>(r: &StringRecord, i: usize) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    let s = field(r, i)?;
    s.parse().with_context(|| format!("column {i}: '{s}'"))
}

fn opt_num<T: std::str::FromStr>(r: &StringRecord, i: usize) -> Result<Option<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    if field(r, i)?.is_empty() {
        Ok(None)
    } else {
        num(r, i).map(Some)
    }
}

fn opt_str<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRow {
    pub location: f64,
    pub stability: Stability,
    pub multiplier: f64,
}

impl Record for FixedPointRow {
    const HEADERS: &'static [&'static str] = &["location", "stability", "multiplier"];

    fn fields(&self) -> Vec<String> {
        vec![
            sci(self.location),
            self.stability.as_str().into(),
            sci(self.multiplier),
        ]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            location: num(r, 0)?,
            stability: field(r, 1)?.parse().map_err(|e| anyhow!("{e}"))?,
            multiplier: num(r, 2)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleRow {
    pub cycle: usize,
    pub period: usize,
    pub position: usize,
    pub point: f64,
    pub multiplier: f64,
    pub stability: Stability,
}

impl Record for CycleRow {
    const HEADERS: &'static [&'static str] = &[
        "cycle",
        "period",
        "position",
        "point",
        "multiplier",
        "stability",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.cycle.to_string(),
            self.period.to_string(),
            self.position.to_string(),
            sci(self.point),
            sci(self.multiplier),
            self.stability.as_str().into(),
        ]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            cycle: num(r, 0)?,
            period: num(r, 1)?,
            position: num(r, 2)?,
            point: num(r, 3)?,
            multiplier: num(r, 4)?,
            stability: field(r, 5)?.parse().map_err(|e| anyhow!("{e}"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyRow {
    pub lambda: f64,
    pub seed: f64,
    pub outcome: String,
    /// Set for `to-cycle` outcomes.
    pub period: Option<usize>,
}

impl Record for ClassifyRow {
    const HEADERS: &'static [&'static str] = &["lambda", "seed", "outcome", "period"];

    fn fields(&self) -> Vec<String> {
        vec![
            sci(self.lambda),
            sci(self.seed),
            self.outcome.clone(),
            opt_str(self.period),
        ]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            lambda: num(r, 0)?,
            seed: num(r, 1)?,
            outcome: field(r, 2)?.to_string(),
            period: opt_num(r, 3)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovRow {
    pub lambda: f64,
    pub seed: f64,
    pub terms_used: usize,
    pub skipped_terms: usize,
    pub burn_in: usize,
    /// Empty when the orbit escaped or otherwise failed.
    pub value: Option<f64>,
    pub status: String,
}

impl Record for LyapunovRow {
    const HEADERS: &'static [&'static str] = &[
        "lambda",
        "seed",
        "terms_used",
        "skipped_terms",
        "burn_in",
        "value",
        "status",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            sci(self.lambda),
            sci(self.seed),
            self.terms_used.to_string(),
            self.skipped_terms.to_string(),
            self.burn_in.to_string(),
            self.value.map(sci).unwrap_or_default(),
            self.status.clone(),
        ]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            lambda: num(r, 0)?,
            seed: num(r, 1)?,
            terms_used: num(r, 2)?,
            skipped_terms: num(r, 3)?,
            burn_in: num(r, 4)?,
            value: opt_num(r, 5)?,
            status: field(r, 6)?.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CobwebRow {
    pub lambda: f64,
    pub seed: f64,
    pub vertex: usize,
    pub x: f64,
    pub y: f64,
}

impl Record for CobwebRow {
    const HEADERS: &'static [&'static str] = &["lambda", "seed", "vertex", "x", "y"];

    fn fields(&self) -> Vec<String> {
        vec![
            sci(self.lambda),
            sci(self.seed),
            self.vertex.to_string(),
            sci(self.x),
            sci(self.y),
        ]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            lambda: num(r, 0)?,
            seed: num(r, 1)?,
            vertex: num(r, 2)?,
            x: num(r, 3)?,
            y: num(r, 4)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationRow {
    pub lambda: f64,
    pub sample: usize,
    pub x: f64,
}

impl Record for BifurcationRow {
    const HEADERS: &'static [&'static str] = &["lambda", "sample", "x"];

    fn fields(&self) -> Vec<String> {
        vec![sci(self.lambda), self.sample.to_string(), sci(self.x)]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            lambda: num(r, 0)?,
            sample: num(r, 1)?,
            x: num(r, 2)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PixelRow {
    pub row: usize,
    pub col: usize,
    pub state: String,
    pub iterations: usize,
}

impl Record for PixelRow {
    const HEADERS: &'static [&'static str] = &["row", "col", "state", "iterations"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.row.to_string(),
            self.col.to_string(),
            self.state.clone(),
            self.iterations.to_string(),
        ]
    }

    fn parse(r: &StringRecord) -> Result<Self> {
        Ok(Self {
            row: num(r, 0)?,
            col: num(r, 1)?,
            state: field(r, 2)?.to_string(),
            iterations: num(r, 3)?,
        })
    }
}

/// `#` comment lines, then a CSV table with a column header.
pub fn write_csv<R: Record, W: Write>(out: W, comments: &[String], rows: &[R]) -> Result<()> {
    let mut out = out;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(R::HEADERS)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a table written by [`write_csv`], skipping comment lines.
pub fn read_csv<R: Record, I: Read>(input: I) -> Result<Vec<R>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(R::HEADERS.iter().copied()) {
        bail!(
            "unexpected columns {:?}, expected {:?}",
            headers,
            R::HEADERS
        );
    }
    rdr.records()
        .enumerate()
        .map(|(i, r)| R::parse(&r?).with_context(|| format!("row {}", i + 1)))
        .collect()
}

/// Whitespace-aligned table for reading in a terminal.
pub fn write_text<R: Record, W: Write>(mut out: W, comments: &[String], rows: &[R]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.fields()).collect();
    let widths: Vec<usize> = (0..R::HEADERS.len())
        .map(|i| {
            cells
                .iter()
                .map(|c| c[i].len())
                .chain([R::HEADERS[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |vals: Vec<&str>| -> String {
        vals.iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(R::HEADERS.to_vec()))?;
    for c in &cells {
        writeln!(out, "{}", line(c.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -0.314923, 2.43034e-300, f64::MAX, 0.0] {
            assert_eq!(sci(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(sci(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn comments_are_skipped_and_optionals_survive() {
        let rows = vec![
            LyapunovRow {
                lambda: 25.0,
                seed: 0.6180339887498949,
                terms_used: 1999,
                skipped_terms: 1,
                burn_in: 0,
                value: Some(0.123),
                status: "ok".into(),
            },
            LyapunovRow {
                lambda: 0.9,
                seed: -0.95,
                terms_used: 0,
                skipped_terms: 0,
                burn_in: 0,
                value: None,
                status: "orbit escaped past 1e8 at step 2".into(),
            },
        ];
        let mut buf = Vec::new();
        write_csv(&mut buf, &["merodyn lyapunov k=2000".into()], &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# merodyn lyapunov k=2000\nlambda,seed,"));
        assert!(!text.contains('\r'));
        assert_eq!(read_csv::<LyapunovRow, _>(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn wrong_table_is_rejected() {
        let mut buf = Vec::new();
        write_csv::<BifurcationRow, _>(&mut buf, &[], &[]).unwrap();
        assert!(read_csv::<CobwebRow, _>(&buf[..]).is_err());
    }
}
