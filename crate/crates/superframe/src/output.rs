//! Files written by the runner: `report.json`, `timings.json`, and one CSV
//! per field.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{Map, Value};
use superframe_core::WaveField;

use crate::runs::RunResult;

/// Pretty JSON with a trailing newline.
pub fn report_json(result: &RunResult) -> String {
    let mut text = serde_json::to_string_pretty(result).expect("run results serialize");
    text.push('\n');
    text
}

/// `x,y,re,im` rows, `y` in the outer loop.
pub fn field_csv(field: &WaveField) -> String {
    let grid = field.grid();
    let [nx, ny] = grid.n();
    let mut out = String::with_capacity(nx * ny * 96 + 12);
    out.push_str("x,y,re,im\n");
    for j in 0..ny {
        let y = grid.coord(1, j);
        for i in 0..nx {
            let v = field.at(i, j);
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", grid.coord(0, i), y, v.re, v.im).unwrap();
        }
    }
    out
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Writes everything `result` carries into `dir`, creating it if needed, and
/// returns the paths written.
pub fn emit_outputs(result: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = vec![write(dir.join("report.json"), &report_json(result))?];

    let timings: Map<String, Value> = result
        .timings
        .iter()
        .map(|(k, v)| (k.clone(), Value::from(*v)))
        .collect();
    let mut text = serde_json::to_string_pretty(&timings)?;
    text.push('\n');
    written.push(write(dir.join("timings.json"), &text)?);

    for (name, field) in &result.fields {
        written.push(write(dir.join(format!("{name}.csv")), &field_csv(field))?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use superframe_core::{Complex64, GridSpec};

    #[test]
    fn csv_rows_run_x_fastest() {
        // dx = 1 and dy = 2, so the two axes are distinguishable.
        let grid = GridSpec::new([4, 4], [2.0, 4.0]).unwrap();
        let field = WaveField::from_fn(grid, Complex64::new);
        let csv = field_csv(&field);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 16);
        assert_eq!(lines[0], "x,y,re,im");
        assert_eq!(
            lines[1],
            "-2.0000000000000000e0,-4.0000000000000000e0,-2.0000000000000000e0,-4.0000000000000000e0"
        );
        assert!(lines[2].starts_with("-1.0000000000000000e0,-4.0"));
        assert!(lines[5].starts_with("-2.0000000000000000e0,-2.0"));
    }

    #[test]
    fn emitted_files_are_named_after_fields() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = RunResult::new("invariance", "abc".into());
        r.timings.push(("evolve".into(), 0.5));
        r.fields
            .push(("evolved".into(), WaveField::zeros(GridSpec::square(4, 1.0).unwrap())));
        let paths = emit_outputs(&r, &dir.path().join("nested")).unwrap();
        let names: Vec<_> = paths.iter().map(|p| p.file_name().unwrap().to_str().unwrap()).collect();
        assert_eq!(names, ["report.json", "timings.json", "evolved.csv"]);
        let report = fs::read_to_string(&paths[0]).unwrap();
        assert!(report.ends_with("}\n"));
        assert!(!report.contains("timings"));
    }
}
