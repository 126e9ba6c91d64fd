//! Long-format plot tables `x,series,value,errbar` built from a written bundle.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use siftlab_core::expsum::explicit_constant;

use crate::error::{CliError, Result};
use crate::report::{LevelRow, INEQUALITIES_JSONL, LEVELSETS_CSV};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    ConstantVsN,
    ConstantVsEll,
    LevelSets,
    EllSweep,
}

impl Selector {
    pub const ALL: [&'static str; 4] = ["constant-vs-N", "constant-vs-ell", "levelsets", "ell-sweep"];
}

impl FromStr for Selector {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant-vs-N" => Ok(Selector::ConstantVsN),
            "constant-vs-ell" => Ok(Selector::ConstantVsEll),
            "levelsets" => Ok(Selector::LevelSets),
            "ell-sweep" => Ok(Selector::EllSweep),
            other => Err(CliError::UnknownSelector(format!("'{other}' (expected one of {})", Selector::ALL.join(", ")))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotPoint {
    pub x: f64,
    pub series: String,
    pub value: f64,
    pub errbar: f64,
}

/// The fields of an inequality row that plots need.
#[derive(Clone, Debug, Deserialize)]
struct RowRecord {
    run: String,
    theorem: String,
    n: u64,
    z: f64,
    ell: Option<f64>,
    kappa: f64,
    kernel: f64,
    constant: f64,
    lhs_error: f64,
}

impl RowRecord {
    fn errbar(&self) -> f64 {
        if self.kernel == 0.0 {
            0.0
        } else {
            self.lhs_error / self.kernel
        }
    }
}

fn read_rows(dir: &Path) -> Result<Vec<RowRecord>> {
    let path = dir.join(INEQUALITIES_JSONL);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}

fn read_levels(dir: &Path) -> Result<Vec<LevelRow>> {
    let path = dir.join(LEVELSETS_CSV);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    Ok(csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<std::result::Result<_, _>>()?)
}

/// `ℓ` values approaching 2 from above, for the blow-up overlay.
fn near_two() -> Vec<f64> {
    (1..=10).map(|k| 2.0 + 0.5f64.powi(k)).collect()
}

/// Build the table for `selector` from the bundle in `dir`.
pub fn plot_points(dir: &Path, selector: Selector) -> Result<Vec<PlotPoint>> {
    let mut points = match selector {
        Selector::ConstantVsN => read_rows(dir)?
            .into_iter()
            .map(|r| {
                let mut series = format!("{}/{}", r.run, r.theorem);
                if let Some(ell) = r.ell {
                    series.push_str(&format!("/ell={ell}"));
                }
                if r.theorem == "two-squares" {
                    series.push_str(&format!("/z={}", r.z));
                }
                PlotPoint { x: r.n as f64, series, value: r.constant, errbar: r.errbar() }
            })
            .collect(),
        Selector::ConstantVsEll => rows_by_ell(read_rows(dir)?),
        Selector::LevelSets => read_levels(dir)?
            .into_iter()
            .map(|l| PlotPoint {
                x: l.n as f64,
                series: format!("{}/xi={:e}", l.run, l.xi),
                value: l.count as f64,
                errbar: 0.0,
            })
            .collect(),
        Selector::EllSweep => {
            let rows = read_rows(dir)?;
            let mut kappas: Vec<f64> = rows.iter().map(|r| r.kappa).filter(|&k| k > 0.0).collect();
            kappas.sort_by(f64::total_cmp);
            kappas.dedup();
            let mut ells: Vec<f64> = rows.iter().filter_map(|r| r.ell).filter(|&l| l > 2.0).chain(near_two()).collect();
            ells.sort_by(f64::total_cmp);
            ells.dedup();
            let mut pts = rows_by_ell(rows);
            for &kappa in &kappas {
                for &ell in &ells {
                    if let Ok(c) = explicit_constant(ell, kappa, 1.0) {
                        pts.push(PlotPoint { x: ell, series: format!("explicit-constant/kappa={kappa}"), value: c.value, errbar: 0.0 });
                        if let Some(b) = c.blowup_factor {
                            pts.push(PlotPoint { x: ell, series: format!("blowup/kappa={kappa}"), value: b, errbar: 0.0 });
                        }
                    }
                }
            }
            pts
        }
    };
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then_with(|| a.series.cmp(&b.series)));
    Ok(points)
}

fn rows_by_ell(rows: Vec<RowRecord>) -> Vec<PlotPoint> {
    rows.into_iter()
        .filter_map(|r| {
            let ell = r.ell?;
            Some(PlotPoint { x: ell, series: format!("{}/{}/N={}", r.run, r.theorem, r.n), value: r.constant, errbar: r.errbar() })
        })
        .collect()
}

/// `x,series,value,errbar` CSV for `selector`.
pub fn emit_plot_data(dir: &Path, selector: &str) -> Result<String> {
    let selector: Selector = selector.parse()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in plot_points(dir, selector)? {
        w.serialize(p)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io("csv buffer", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_selector() {
        assert!(matches!("histogram".parse::<Selector>(), Err(CliError::UnknownSelector(_))));
        for s in Selector::ALL {
            assert!(s.parse::<Selector>().is_ok());
        }
    }
}
