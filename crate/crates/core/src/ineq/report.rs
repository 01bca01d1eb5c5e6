use std::io::{self, Write};

use serde::Serialize;

use super::CheckReport;
use crate::numfmt::fmt_g17;

pub const REPORT_CSV_HEADER: &str = "case,p,n,d,sign,lhs,rhs,orientation,slack,rel_slack,tolerance,verdict,seed";

/// Flat record for CSV and JSON output. Non-finite numbers (inapplicable
/// rows) become empty CSV fields and JSON nulls.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub case: String,
    pub p: f64,
    pub n: usize,
    pub d: usize,
    pub sign: Option<&'static str>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub orientation: &'static str,
    pub slack: Option<f64>,
    pub rel_slack: Option<f64>,
    pub tolerance: f64,
    pub verdict: &'static str,
    pub seed: Option<u64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ReportRow {
    pub fn new(report: &CheckReport, seed: Option<u64>) -> Self {
        Self {
            case: report.label(),
            p: report.p,
            n: report.n,
            d: report.d,
            sign: report.case.sign().map(|s| s.as_str()),
            lhs: finite(report.lhs),
            rhs: finite(report.rhs),
            orientation: report.orientation.as_str(),
            slack: finite(report.slack),
            rel_slack: finite(report.rel_slack),
            tolerance: report.tolerance,
            verdict: report.verdict.as_str(),
            seed,
        }
    }

    pub fn to_csv(&self) -> String {
        let num = |x: Option<f64>| x.map(fmt_g17).unwrap_or_default();
        [
            self.case.clone(),
            fmt_g17(self.p),
            self.n.to_string(),
            self.d.to_string(),
            self.sign.unwrap_or("").to_string(),
            num(self.lhs),
            num(self.rhs),
            self.orientation.to_string(),
            num(self.slack),
            num(self.rel_slack),
            fmt_g17(self.tolerance),
            self.verdict.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
        .join(",")
    }
}

pub fn write_reports_csv<W: Write>(mut out: W, rows: &[ReportRow]) -> io::Result<()> {
    writeln!(out, "{REPORT_CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::{CaseId, InequalityCase, Orientation, Sign, Tolerance};

    #[test]
    fn csv_row_layout() {
        let case = InequalityCase::new(CaseId::Cor1, Some(Sign::Minus)).unwrap();
        let r = CheckReport::evaluate(case, None, 4.0, 3, 2, 72.0, 432.0, Orientation::LhsLeqRhs, Tolerance::default());
        let row = ReportRow::new(&r, Some(9));
        assert_eq!(
            row.to_csv(),
            "Cor1,4,3,2,minus,72,432,LhsLeqRhs,360,0.83333333333333337,1e-08,Holds,9"
        );
        assert_eq!(REPORT_CSV_HEADER.split(',').count(), row.to_csv().split(',').count());
    }

    #[test]
    fn inapplicable_rows_have_empty_numbers() {
        let case = InequalityCase::new(CaseId::Triangle, None).unwrap();
        let r = CheckReport::inapplicable(case, None, 0.5, 2, 2, Tolerance::default());
        assert_eq!(ReportRow::new(&r, None).to_csv(), "Triangle,0.5,2,2,,,,LhsLeqRhs,,,1e-08,Inapplicable,");
    }
}
