//! Finite point sets and their CSV form.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::hgroup::HPoint;

#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    pub n: usize,
    pub points: Vec<HPoint>,
    pub generator: String,
    pub seed: u64,
}

impl PointSet {
    pub fn new(n: usize, points: Vec<HPoint>, generator: impl Into<String>, seed: u64) -> Self {
        assert!(n >= 1, "dimension n must be positive");
        assert!(points.iter().all(|p| p.n() == n), "point dimension mismatch");
        Self {
            n,
            points,
            generator: generator.into(),
            seed,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new(), "empty", 0)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Header comments, then one `x1,y1,…,xn,yn,t` row per point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# n={}", self.n)?;
        writeln!(w, "# generator={}", self.generator)?;
        writeln!(w, "# seed={}", self.seed)?;
        let header: Vec<String> = (1..=self.n)
            .flat_map(|j| [format!("x{j}"), format!("y{j}")])
            .chain(std::iter::once("t".to_string()))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for p in &self.points {
            let row: Vec<String> =
                p.z.iter()
                    .chain(std::iter::once(&p.t))
                    .map(|v| format!("{v:e}"))
                    .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Reads the CSV form. Without an `n=` comment the dimension is taken
    /// from the column count.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut generator = String::from("file");
        let mut seed = 0u64;
        let mut points = Vec::new();
        let mut header_seen = false;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for part in comment.split(',') {
                    let Some((key, value)) = part.split_once('=') else {
                        continue;
                    };
                    let value = value.trim();
                    match key.trim() {
                        "n" => n = Some(value.parse().map_err(|_| parse_err(lineno, "bad n"))?),
                        "generator" => generator = value.to_string(),
                        "seed" => seed = value.parse().map_err(|_| parse_err(lineno, "bad seed"))?,
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen && line.starts_with('x') {
                header_seen = true;
                let cols = line.split(',').count();
                check_columns(&mut n, cols, lineno)?;
                continue;
            }
            let values: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(lineno, "non-numeric field"))?;
            check_columns(&mut n, values.len(), lineno)?;
            if values.iter().any(|v| !v.is_finite()) {
                return Err(parse_err(lineno, "non-finite coordinate"));
            }
            let t = values[values.len() - 1];
            points.push(HPoint::new(values[..values.len() - 1].to_vec(), t));
        }
        let n = n.ok_or_else(|| Error::Parse("point set file has no dimension".into()))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        Ok(Self {
            n,
            points,
            generator,
            seed,
        })
    }
}

fn parse_err(lineno: usize, msg: &str) -> Error {
    Error::Parse(format!("line {}: {msg}", lineno + 1))
}

fn check_columns(n: &mut Option<usize>, cols: usize, lineno: usize) -> Result<()> {
    if cols < 3 || cols % 2 == 0 {
        return Err(parse_err(lineno, "expected 2n+1 columns"));
    }
    let m = (cols - 1) / 2;
    match *n {
        Some(k) if k != m => Err(parse_err(lineno, "column count does not match n")),
        _ => {
            *n = Some(m);
            Ok(())
        }
    }
}
