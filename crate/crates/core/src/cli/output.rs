use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Trajectory;

/// Render a trajectory as CSV: `time,zeta,<audit...>` with 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("time,zeta");
    for a in traj.audits() {
        out.push(',');
        out.push_str(&a.name);
    }
    out.push('\n');
    for k in 0..traj.len() {
        let _ = write!(out, "{:.16e},{:.16e}", traj.times()[k], traj.zeta()[k]);
        for a in traj.audits() {
            let _ = write!(out, ",{:.16e}", a.values[k]);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    fs::write(path, trajectory_csv(traj))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// A parsed CSV: header names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::param("empty csv"))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            let row = line
                .split(',')
                .map(|c| {
                    c.parse::<f64>()
                        .map_err(|_| Error::param(format!("row {}: '{c}' is not a number", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(Error::param(format!("row {} has {} cells", i + 1, row.len())));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CsvTable { header, rows })
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    parse_csv(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_exact() {
        let traj = Trajectory::new(vec![0.0, 0.1, 0.2], vec![1.0, 1.0 / 3.0, -0.7])
            .unwrap()
            .with_audit("norm_drift", vec![0.0, 1e-17, -2.5e-16])
            .unwrap();
        let csv = trajectory_csv(&traj);
        assert!(csv.starts_with("time,zeta,norm_drift\n"));
        let t = parse_csv(&csv).unwrap();
        assert_eq!(t.column("time").unwrap(), traj.times());
        assert_eq!(t.column("zeta").unwrap(), traj.zeta());
        assert_eq!(t.column("norm_drift").unwrap(), traj.audits()[0].values);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(parse_csv("a,b\n1,2\n3\n").is_err());
        assert!(parse_csv("a\nx\n").is_err());
    }
}
