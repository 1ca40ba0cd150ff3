//! Data behind the channel diagram: a fidelity/region grid over `(tau, y)`,
//! the region boundaries, the optimal and TMSS families, and the three
//! reference points.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use cvtele_core::{
    avg_fidelity, classical_benchmark, induced_pi_channel, min_noise_for_entanglement,
    optimal_fidelity, tmss, tmss_optimal_gain, Gain, InputEnsemble,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map};

use crate::error::{CliError, Result};
use crate::ledger::RunRecord;

pub const CSV_HEADER: [&str; 4] = ["tau", "y", "fidelity", "region"];
/// Bumped whenever the grid columns or region tags change.
pub const GRID_SCHEMA_VERSION: u32 = 1;

/// Largest entanglement parameter sampled along the family curves.
const FAMILY_R_MAX: f64 = 3.0;
const FAMILY_POINTS: usize = 61;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramGridSpec {
    pub r: f64,
    pub lambda: f64,
    pub tau_range: [f64; 2],
    pub y_range: [f64; 2],
    pub resolution: usize,
    pub tol: f64,
}

impl DiagramGridSpec {
    /// The snapshot `r = lambda = 0.5` on `[0, 3]²`.
    pub fn snapshot(resolution: usize) -> Self {
        Self {
            r: 0.5,
            lambda: 0.5,
            tau_range: [0.0, 3.0],
            y_range: [0.0, 3.0],
            resolution,
            tol: cvtele_core::DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<InputEnsemble> {
        for (name, [lo, hi]) in [("tau", self.tau_range), ("y", self.y_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Args(format!("{name} range needs finite lo < hi, got [{lo}, {hi}]")));
            }
        }
        if self.tau_range[0] < 0.0 {
            return Err(CliError::Args("tau must be >= 0".into()));
        }
        if self.resolution < 2 {
            return Err(CliError::Args(format!("resolution must be >= 2, got {}", self.resolution)));
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(CliError::Args(format!("r must be finite and >= 0, got {}", self.r)));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(CliError::Args(format!("tol must be finite and >= 0, got {}", self.tol)));
        }
        Ok(InputEnsemble::new(self.lambda)?)
    }

    fn axis(&self, range: [f64; 2], i: usize) -> f64 {
        let t = i as f64 / (self.resolution - 1) as f64;
        range[0] + (range[1] - range[0]) * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "unphysical")]
    Unphysical,
    #[serde(rename = "inaccessible")]
    Inaccessible,
    #[serde(rename = "EB")]
    EntanglementBreaking,
    #[serde(rename = "accessible")]
    Accessible,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Unphysical => "unphysical",
            Region::Inaccessible => "inaccessible",
            Region::EntanglementBreaking => "EB",
            Region::Accessible => "accessible",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "unphysical" => Region::Unphysical,
            "inaccessible" => Region::Inaccessible,
            "EB" => Region::EntanglementBreaking,
            "accessible" => Region::Accessible,
            _ => return Err(format!("unknown region tag {s:?}")),
        })
    }
}

/// Region of `(tau, y)` for entanglement `E_N = 2r`. Precedence: unphysical,
/// then entanglement breaking, then inaccessible.
pub fn region(tau: f64, y: f64, r: f64, tol: f64) -> Region {
    if y < (1.0 - tau).abs() - tol {
        Region::Unphysical
    } else if y >= 1.0 + tau - tol {
        Region::EntanglementBreaking
    } else if y < min_noise_for_entanglement(tau, r) - tol {
        Region::Inaccessible
    } else {
        Region::Accessible
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub tau: f64,
    pub y: f64,
    /// Absent for unphysical points.
    pub fidelity: Option<f64>,
    pub region: Region,
}

/// Rows in `tau`-major order; rows are computed in parallel, assembled in
/// index order.
pub fn compute_grid(spec: &DiagramGridSpec) -> Result<Vec<GridRow>> {
    let ens = spec.validate()?;
    let n = spec.resolution;
    let rows: Vec<Vec<GridRow>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let tau = spec.axis(spec.tau_range, i);
            (0..n)
                .map(|j| {
                    let y = spec.axis(spec.y_range, j);
                    let region = region(tau, y, spec.r, spec.tol);
                    let fidelity = match region {
                        Region::Unphysical => None,
                        _ => avg_fidelity(tau, y, ens).ok(),
                    };
                    GridRow { tau, y, fidelity, region }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_grid<W: Write>(out: W, rows: &[GridRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let f = row.fidelity.map(|f| f.to_string()).unwrap_or_default();
        w.write_record([row.tau.to_string(), row.y.to_string(), f, row.region.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a grid written by [`write_grid`].
pub fn read_grid<R: Read>(input: R) -> Result<Vec<GridRow>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Grid {
            row: 0,
            reason: format!("expected header {}, got {:?}", CSV_HEADER.join(","), header),
        });
    }
    let mut rows = vec![];
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let bad = |reason: String| CliError::Grid { row: i + 1, reason };
        let num = |k: usize| -> Result<f64> {
            let s = &rec[k];
            s.parse::<f64>()
                .map_err(|e| bad(format!("{}: {s:?}: {e}", CSV_HEADER[k])))
        };
        let tau = num(0)?;
        let y = num(1)?;
        let fidelity = if rec[2].is_empty() { None } else { Some(num(2)?) };
        let region = rec[3].parse::<Region>().map_err(bad)?;
        rows.push(GridRow { tau, y, fidelity, region });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub tau: f64,
    pub y: f64,
    pub fidelity: f64,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub r: f64,
    pub tau: f64,
    pub y: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boundaries {
    /// `y = |1 - tau|`.
    pub complete_positivity: Vec<[f64; 2]>,
    /// `y = 1 + tau`.
    pub entanglement_breaking: Vec<[f64; 2]>,
    /// `y = e^{-2r}(1 + tau)`.
    pub accessible: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialPoints {
    /// Optimal channel at entanglement `2r`.
    pub triangle: SpecialPoint,
    /// TMSS at the optimal gain.
    pub circle: SpecialPoint,
    /// Measure-and-prepare benchmark.
    pub diamond: SpecialPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Families {
    pub optimal: Vec<FamilyPoint>,
    pub tmss: Vec<FamilyPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramSummary {
    pub r: f64,
    pub lambda: f64,
    pub tau_range: [f64; 2],
    pub y_range: [f64; 2],
    pub resolution: usize,
    pub grid: String,
    pub grid_schema_version: u32,
    pub boundaries: Boundaries,
    pub special_points: SpecialPoints,
    pub families: Families,
}

fn optimal_point(r: f64, ens: InputEnsemble) -> Result<FamilyPoint> {
    let opt = optimal_fidelity(r, ens)?;
    Ok(FamilyPoint {
        r,
        tau: opt.tau_opt,
        y: opt.y_opt,
        fidelity: opt.fidelity,
    })
}

fn tmss_point(r: f64, ens: InputEnsemble) -> Result<FamilyPoint> {
    let g = Gain::new(tmss_optimal_gain(r, ens))?;
    let ch = induced_pi_channel(&tmss(r)?, g);
    Ok(FamilyPoint {
        r,
        tau: ch.tau(),
        y: ch.y(),
        fidelity: avg_fidelity(ch.tau(), ch.y(), ens)?,
    })
}

pub fn summarize(spec: &DiagramGridSpec, grid: &str) -> Result<DiagramSummary> {
    let ens = spec.validate()?;
    let n = spec.resolution;
    let taus: Vec<f64> = (0..n).map(|i| spec.axis(spec.tau_range, i)).collect();
    let curve = |f: &dyn Fn(f64) -> f64| taus.iter().map(|&t| [t, f(t)]).collect::<Vec<_>>();
    let boundaries = Boundaries {
        complete_positivity: curve(&|t| (1.0 - t).abs()),
        entanglement_breaking: curve(&|t| 1.0 + t),
        accessible: curve(&|t| min_noise_for_entanglement(t, spec.r)),
    };

    let tag = |p: FamilyPoint| SpecialPoint {
        tau: p.tau,
        y: p.y,
        fidelity: p.fidelity,
        region: region(p.tau, p.y, spec.r, spec.tol),
    };
    let classical = classical_benchmark(ens);
    let special_points = SpecialPoints {
        triangle: tag(optimal_point(spec.r, ens)?),
        circle: tag(tmss_point(spec.r, ens)?),
        diamond: tag(FamilyPoint {
            r: 0.0,
            tau: classical.tau_opt,
            y: classical.y_opt,
            fidelity: classical.fidelity,
        }),
    };

    let rs: Vec<f64> = (0..FAMILY_POINTS)
        .map(|k| FAMILY_R_MAX * k as f64 / (FAMILY_POINTS - 1) as f64)
        .collect();
    let families = Families {
        optimal: rs.iter().map(|&r| optimal_point(r, ens)).collect::<Result<_>>()?,
        tmss: rs.iter().map(|&r| tmss_point(r, ens)).collect::<Result<_>>()?,
    };

    Ok(DiagramSummary {
        r: spec.r,
        lambda: spec.lambda,
        tau_range: spec.tau_range,
        y_range: spec.y_range,
        resolution: spec.resolution,
        grid: grid.to_owned(),
        grid_schema_version: GRID_SCHEMA_VERSION,
        boundaries,
        special_points,
        families,
    })
}

/// `grid.csv` → `grid.json`.
pub fn companion_path(out: &Path) -> Result<PathBuf> {
    if out.extension().is_some_and(|e| e == "json") {
        return Err(CliError::Args(format!(
            "grid output {} would collide with its JSON companion",
            out.display()
        )));
    }
    Ok(out.with_extension("json"))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        })
}

pub fn cmd_diagram(spec: &DiagramGridSpec, out: &Path) -> Result<RunRecord> {
    let json_path = companion_path(out)?;
    let rows = compute_grid(spec)?;
    let grid_name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let summary = summarize(spec, &grid_name)?;

    let mut w = create(out)?;
    write_grid(&mut w, &rows)?;
    w.flush()?;
    let mut w = create(&json_path)?;
    serde_json::to_writer_pretty(&mut w, &summary)?;
    w.write_all(b"\n")?;
    w.flush()?;

    let mut params = Map::new();
    for (k, v) in [
        ("r", json!(spec.r)),
        ("lambda", json!(spec.lambda)),
        ("tau_range", json!(spec.tau_range)),
        ("y_range", json!(spec.y_range)),
        ("resolution", json!(spec.resolution)),
        ("tol", json!(spec.tol)),
    ] {
        params.insert(k.to_owned(), v);
    }
    Ok(RunRecord::new(
        "diagram",
        params,
        vec![out.display().to_string(), json_path.display().to_string()],
    ))
}
