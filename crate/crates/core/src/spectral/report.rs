use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMeta {
    pub spec: String,
    pub theta_max: f64,
    pub seed: u64,
    pub corpus_size: usize,
    pub convert_uint8: bool,
}

/// Descending singular values per plane, with an optional signed difference
/// against a baseline report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub meta: SpectrumMeta,
    pub values: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diff_vs_baseline: Option<Vec<Vec<f64>>>,
}

impl SpectrumReport {
    pub fn new(meta: SpectrumMeta, values: Vec<Vec<f64>>) -> Self {
        Self {
            meta,
            values,
            diff_vs_baseline: None,
        }
    }

    /// CSV with header `index,value[,diff]`, or `plane,index,value[,diff]`
    /// when there is more than one plane.
    pub fn to_csv(&self) -> String {
        let multi = self.values.len() > 1;
        let has_diff = self.diff_vs_baseline.is_some();
        let mut out = String::new();
        if multi {
            out.push_str("plane,");
        }
        out.push_str("index,value");
        if has_diff {
            out.push_str(",diff");
        }
        out.push('\n');
        for (p, values) in self.values.iter().enumerate() {
            for (i, v) in values.iter().enumerate() {
                if multi {
                    let _ = write!(out, "{p},");
                }
                let _ = write!(out, "{i},{v:e}");
                if let Some(diff) = &self.diff_vs_baseline {
                    let _ = write!(out, ",{:e}", diff[p][i]);
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Attach `augmented − baseline` per plane and index.
///
/// A baseline with a single plane is compared against every augmented plane,
/// which covers unprojected quantum outputs.
pub fn spectrum_diff(augmented: &SpectrumReport, baseline: &SpectrumReport) -> Result<SpectrumReport> {
    let base_for = |p: usize| -> Result<&Vec<f64>> {
        match baseline.values.len() {
            1 => Ok(&baseline.values[0]),
            n if n == augmented.values.len() => Ok(&baseline.values[p]),
            n => Err(invalid(format!(
                "baseline has {n} planes, augmented has {}",
                augmented.values.len()
            ))),
        }
    };
    let diff = augmented
        .values
        .iter()
        .enumerate()
        .map(|(p, values)| {
            let base = base_for(p)?;
            if base.len() != values.len() {
                return Err(invalid(format!(
                    "spectrum lengths differ: {} vs {}",
                    values.len(),
                    base.len()
                )));
            }
            Ok(values.iter().zip(base).map(|(a, b)| a - b).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Ok(SpectrumReport {
        diff_vs_baseline: Some(diff),
        ..augmented.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> SpectrumMeta {
        SpectrumMeta {
            spec: "x".into(),
            theta_max: 0.01,
            seed: 0,
            corpus_size: 1,
            convert_uint8: false,
        }
    }

    #[test]
    fn identical_reports_diff_to_zero() {
        let r = SpectrumReport::new(meta(), vec![vec![3.0, 2.0, 1.0]]);
        let d = spectrum_diff(&r, &r).unwrap();
        assert_eq!(d.diff_vs_baseline.unwrap(), vec![vec![0.0; 3]]);
    }

    #[test]
    fn length_mismatch() {
        let a = SpectrumReport::new(meta(), vec![vec![3.0, 2.0]]);
        let b = SpectrumReport::new(meta(), vec![vec![3.0, 2.0, 1.0]]);
        assert!(spectrum_diff(&a, &b).is_err());
    }

    #[test]
    fn csv_layout() {
        let r = SpectrumReport::new(meta(), vec![vec![2.0, 1.0]]);
        let d = spectrum_diff(&r, &SpectrumReport::new(meta(), vec![vec![1.5, 1.0]])).unwrap();
        let csv = d.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "index,value,diff");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,2e0,5e-1"));
        let two = SpectrumReport::new(meta(), vec![vec![2.0], vec![1.0]]);
        assert!(two.to_csv().starts_with("plane,index,value\n0,0,"));
    }

    #[test]
    fn json_round_trip() {
        let r = SpectrumReport::new(meta(), vec![vec![2.0, 1.0]]);
        let back: SpectrumReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
