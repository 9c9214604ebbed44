//! CSV ingestion and seeded synthetic scenarios.
//!
//! Scenarios draw from xoshiro256** seeded through SplitMix64 (the reference
//! seeding of that generator), with normals from Marsaglia's polar method and
//! `libm` for the logarithm, so a seed yields the same stream on every
//! platform.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::depth::DataCloud;
use crate::error::DepthError;
use crate::linalg::Matrix;

/// Parses comma-separated numeric rows into an `n x d` matrix.
///
/// A first row that does not parse as numbers is treated as a header. With
/// `log`, the natural logarithm is applied to every entry.
pub fn read_points<R: Read>(source: R, log: bool) -> Result<Matrix, DepthError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, record) in reader.records().enumerate() {
        let row_no = idx + 1;
        let record = record.map_err(|e| DepthError::Parse {
            row: row_no,
            message: e.to_string(),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if idx == 0 => continue,
            Err(_) => {
                let bad = record.iter().find(|f| f.parse::<f64>().is_err()).unwrap_or("");
                return Err(DepthError::Parse {
                    row: row_no,
                    message: format!("non-numeric cell {bad:?}"),
                });
            }
        };
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(DepthError::Parse {
                    row: row_no,
                    message: format!("expected {w} columns, found {}", values.len()),
                })
            }
            _ => {}
        }
        let values = if log {
            values
                .into_iter()
                .map(|v| {
                    if v > 0.0 {
                        Ok(v.ln())
                    } else {
                        Err(DepthError::Parse {
                            row: row_no,
                            message: format!("cannot take the logarithm of {v}"),
                        })
                    }
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            values
        };
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(DepthError::Parse {
                row: row_no,
                message: format!("non-finite value {v}"),
            });
        }
        rows.push(values);
    }
    let d = width.unwrap_or(0);
    Matrix::new(rows.len(), d, rows.concat())
}

/// Reads a data cloud; needs at least `d + 1` rows.
pub fn load_csv<R: Read>(source: R, log: bool) -> Result<DataCloud, DepthError> {
    let points = read_points(source, log)?;
    let (n, d) = (points.rows(), points.cols());
    if d == 0 || n < d + 1 {
        return Err(DepthError::Parse {
            row: n,
            message: format!("need at least {} data rows for {d} columns, found {n}", d + 1),
        });
    }
    DataCloud::new(points)
}

/// Writes points as CSV rows using the shortest round-trip float format.
pub fn write_points<W: Write>(mut out: W, points: &Matrix) -> std::io::Result<()> {
    for i in 0..points.rows() {
        let line: Vec<String> = points.row(i).iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Uniform on `[-1, 1]^2`.
    S1,
    /// Standard bivariate normal.
    S2,
    /// `(Y^2 + Z, Z^2 + Y)` with `Y, Z` independent standard normal.
    S3,
}

impl FromStr for Scenario {
    type Err = DepthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s1" => Ok(Scenario::S1),
            "s2" => Ok(Scenario::S2),
            "s3" => Ok(Scenario::S3),
            other => Err(DepthError::Parse {
                row: 0,
                message: format!("unknown scenario {other:?} (expected s1, s2 or s3)"),
            }),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::S1 => "s1",
            Scenario::S2 => "s2",
            Scenario::S3 => "s3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub kind: Scenario,
    pub n: usize,
    pub seed: u64,
}

/// Seeded stream of uniform and normal variates.
pub struct SampleStream {
    rng: Xoshiro256StarStar,
    spare: Option<f64>,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-1, 1)`.
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.unit() - 1.0
    }

    /// Standard normal by the polar method; the second variate is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = self.symmetric();
            let v = self.symmetric();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * libm::log(s) / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

/// Raw scenario sample as an `n x 2` matrix.
pub fn generate_points(spec: ScenarioSpec) -> Matrix {
    let mut stream = SampleStream::new(spec.seed);
    let mut data = Vec::with_capacity(2 * spec.n);
    for _ in 0..spec.n {
        let (a, b) = match spec.kind {
            Scenario::S1 => (stream.symmetric(), stream.symmetric()),
            Scenario::S2 => (stream.normal(), stream.normal()),
            Scenario::S3 => {
                let y = stream.normal();
                let z = stream.normal();
                (y * y + z, z * z + y)
            }
        };
        data.push(a);
        data.push(b);
    }
    Matrix::new(spec.n, 2, data).expect("generated values are finite")
}

pub fn generate(spec: ScenarioSpec) -> Result<DataCloud, DepthError> {
    if spec.n < 3 {
        return Err(DepthError::TooFewPoints {
            found: spec.n,
            needed: 3,
        });
    }
    DataCloud::new(generate_points(spec))
}
