//! gnuplot script for the power / efficiency / Fano panels of a sweep CSV.

use std::path::Path;

use crate::error::{OttoError, Result};

use super::export::{read_csv, COLUMNS};

/// 1-based gnuplot column of `name`.
fn col(name: &str) -> usize {
    COLUMNS
        .iter()
        .position(|c| *c == name)
        .expect("known column")
        + 1
}

/// Builds the script text for a CSV at `csv_path`.
pub fn plot_script(csv_path: &Path) -> String {
    let data = csv_path.display().to_string().replace('\'', "''");
    let t = col("tau_cycle_ms");
    format!(
        r#"# Generated by otto. Run with: gnuplot <this file>
set datafile separator ','
set terminal pngcairo size 800,1200
set output '{data}.png'
set multiplot layout 3,1
set xlabel 'cycle time (s)'
set grid

set ylabel 'efficiency'
set yrange [0:1]
plot '{data}' every ::1 using (${t}/1000):{eta} with linespoints title 'eta', \
     '' every ::1 using (${t}/1000):{eta_int} with linespoints title 'eta_int'
set autoscale y

set ylabel 'P / k_B (nK/ms)'
plot '{data}' every ::1 using (${t}/1000):{power} with linespoints title 'power'

set ylabel 'Fano factor F_P'
set logscale y
plot '{data}' every ::1 using (${t}/1000):{fano} with linespoints title 'F_P', \
     1 with lines dashtype 2 title 'F_P = 1'
unset logscale y

unset multiplot
"#,
        eta = col("eta"),
        eta_int = col("eta_int"),
        power = col("power"),
        fano = col("fano"),
    )
}

/// Writes the plotting script for the sweep CSV at `result_path` to
/// `out_path`. The script is never executed here.
pub fn emit_plot_script(result_path: &Path, out_path: &Path) -> Result<()> {
    if !result_path.is_file() {
        return Err(OttoError::io(
            result_path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "result file not found"),
        ));
    }
    read_csv(result_path)?;
    std::fs::write(out_path, plot_script(result_path)).map_err(|e| OttoError::io(out_path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn script_references_column_indices() {
        let s = plot_script(Path::new("sweep.csv"));
        assert!(s.contains("using ($1/1000):8"));
        assert!(s.contains("using ($1/1000):9"));
        assert!(s.contains("using ($1/1000):10"));
        assert!(s.contains("using ($1/1000):12"));
        assert!(s.contains("layout 3,1"));
    }

    #[test]
    fn missing_result_file_is_an_error() {
        let dir = std::env::temp_dir().join("otto-plot-missing");
        let r = emit_plot_script(&dir.join("nope.csv"), &dir.join("out.gp"));
        assert!(matches!(r, Err(OttoError::Io { .. })));
    }
}
