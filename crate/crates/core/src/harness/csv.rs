//! CSV emission for sweep reports: fixed header, UTF-8, LF line endings,
//! `.` decimal separator, reals at 17 significant digits, empty cells for
//! excluded or inapplicable fields.

use std::path::Path;

use super::ReportRow;
use crate::error::Result;

pub const CSV_HEADER: &str = "kind,k,r,n,m,exact,estimate_log,rel_err,bound,ratio,pass";

fn real(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

pub fn csv_to_string(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            row.kind.name(),
            row.k,
            row.r,
            row.n,
            row.m,
            row.exact,
            row.estimate_log,
            real(row.rel_err),
            real(row.bound),
            real(row.ratio),
            row.pass,
        ));
    }
    out
}

pub fn write_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, csv_to_string(rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SweepKind;

    fn sample_row() -> ReportRow {
        ReportRow {
            kind: SweepKind::CrankAccuracy,
            k: 1,
            r: 0,
            n: 10_000,
            m: 251,
            exact: "12345678901234567890".into(),
            estimate_log: "+1*exp(2.5000000000000000e2)".into(),
            rel_err: Some(0.001953125),
            bound: Some(0.5),
            ratio: Some(0.00390625),
            pass: true,
        }
    }

    #[test]
    fn header_and_layout_are_frozen() {
        let text = csv_to_string(&[sample_row()]);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "kind,k,r,n,m,exact,estimate_log,rel_err,bound,ratio,pass"
        );
        assert_eq!(
            lines.next().unwrap(),
            "crank_accuracy,1,0,10000,251,12345678901234567890,\
             +1*exp(2.5000000000000000e2),1.9531250000000000e-3,\
             5.0000000000000000e-1,3.9062500000000000e-3,true"
        );
        assert!(lines.next().is_none());
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn empty_fields_stay_empty() {
        let mut row = sample_row();
        row.rel_err = None;
        row.bound = None;
        row.ratio = None;
        let text = csv_to_string(&[row]);
        let line = text.lines().nth(1).unwrap();
        assert!(line.ends_with(",,,,true"), "line: {line}");
    }

    #[test]
    fn roundtrip_to_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("report.csv");
        let rows = vec![sample_row()];
        write_csv(&rows, &path).unwrap();
        let read_back = std::fs::read_to_string(&path).unwrap();
        assert_eq!(read_back, csv_to_string(&rows));
    }
}
