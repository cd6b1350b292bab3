use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use entroflux_core::{Sample, TrajectoryRecord};

pub const HEADER: &str = "t,entropy,flux,flux_rate,alpha,sigma,sigma_bound,gap";

/// Writes one row per sample, every value with 17 significant digits.
pub fn write_csv_to<W: Write>(record: &TrajectoryRecord, mut out: W) -> io::Result<()> {
    out.write_all(HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for s in record.samples() {
        let row = row_values(s);
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            // adding zero folds -0.0 into 0.0
            write!(out, "{:.16e}", v + 0.0)?;
        }
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn write_csv(record: &TrajectoryRecord, path: impl AsRef<Path>) -> io::Result<()> {
    let file = File::create(path)?;
    write_csv_to(record, BufWriter::new(file))
}

fn row_values(s: &Sample) -> [f64; 8] {
    [
        s.t,
        s.entropy,
        s.flux,
        s.flux_rate,
        s.alpha,
        s.sigma,
        s.sigma_bound,
        s.gap,
    ]
}
