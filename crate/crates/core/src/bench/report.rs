//! Report emission: CSV + JSON mirror, optional gnuplot long formats.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::{BenchError, BenchReport};

/// Renders `x` with 6 significant digits (the CSV contract).
fn sig6(x: f64) -> String {
    format!("{x:.5e}")
}

/// Writes `report.csv` and `report.json` under `out_dir`; returns their
/// paths. CSV columns: function, method, n, mean, std_dev, time_ms, slope.
pub fn emit_report(report: &BenchReport, out_dir: &Path) -> Result<(PathBuf, PathBuf), BenchError> {
    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join("report.csv");
    let json_path = out_dir.join("report.json");

    let mut csv = std::fs::File::create(&csv_path)?;
    writeln!(csv, "function,method,n,mean,std_dev,time_ms,slope")?;
    for cell in &report.cells {
        let slope = report
            .slope(cell.method)
            .map(sig6)
            .unwrap_or_default();
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            cell.function,
            cell.method,
            cell.n,
            sig6(cell.mean),
            sig6(cell.std_dev),
            sig6(cell.mean_time_ms),
            slope
        )?;
    }

    std::fs::write(&json_path, serde_json::to_string_pretty(report).expect("serializable"))?;
    Ok((csv_path, json_path))
}

/// Long-format data files for plotting: `bands.dat` holds mean ± σ per
/// (method, n); `efficiency.dat` holds variance against mean CPU time.
pub fn emit_gnuplot(report: &BenchReport, out_dir: &Path) -> Result<(), BenchError> {
    std::fs::create_dir_all(out_dir)?;

    let mut bands = std::fs::File::create(out_dir.join("bands.dat"))?;
    writeln!(bands, "# function method n mean lo hi")?;
    for c in &report.cells {
        writeln!(
            bands,
            "{} {} {} {} {} {}",
            c.function,
            c.method,
            c.n,
            sig6(c.mean),
            sig6(c.mean - c.std_dev),
            sig6(c.mean + c.std_dev)
        )?;
    }

    let mut eff = std::fs::File::create(out_dir.join("efficiency.dat"))?;
    writeln!(eff, "# function method n variance time_ms")?;
    for c in &report.cells {
        writeln!(
            eff,
            "{} {} {} {} {}",
            c.function,
            c.method,
            c.n,
            sig6(c.std_dev * c.std_dev),
            sig6(c.mean_time_ms)
        )?;
    }
    Ok(())
}
