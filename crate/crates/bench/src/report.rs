use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::BenchError;

/// One CSV line. `wall_time_s` is the only column that varies between
/// identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub swept_name: String,
    pub swept_value: f64,
    pub metric: String,
    pub value: f64,
    pub stderr: f64,
    pub trials: usize,
    pub seed: u64,
    pub wall_time_s: f64,
}

pub fn write_rows<W: Write>(writer: W, rows: &[ResultRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record([
            "swept_name",
            "swept_value",
            "metric",
            "value",
            "stderr",
            "trials",
            "seed",
            "wall_time_s",
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<(), BenchError> {
    let file = std::fs::File::create(path)?;
    write_rows(std::io::BufWriter::new(file), rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>, BenchError> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<Result<Vec<ResultRow>, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_round_trip() {
        let rows = vec![ResultRow {
            swept_name: "theta0".into(),
            swept_value: 0.1,
            metric: "mutual_information".into(),
            value: 0.123_456_789_012_345_67,
            stderr: 1e-3,
            trials: 10,
            seed: 7,
            wall_time_s: 0.5,
        }];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("swept_name,swept_value,metric,value,stderr,trials,seed,wall_time_s\n"));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_csv(&path, &rows).unwrap();
        assert_eq!(read_csv(&path).unwrap(), rows);
    }
}
