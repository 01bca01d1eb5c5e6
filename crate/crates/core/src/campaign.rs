//! Batch verification: many seeded instances × cases × exponents × signs.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{instance_for, stream_seed, GenConfig};
use crate::ineq::{run_case, CaseId, CheckReport, InequalityCase, ReportRow, Sign, Tolerance, Verdict};
use crate::schatten::PExponent;

/// Stream offset for per-case instance seeds (the generator uses 0..=2).
const CASE_STREAM_BASE: u64 = 16;

pub const DEFAULT_P_GRID: [f64; 8] = [0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 10.0];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub cases: Vec<CaseId>,
    pub p_grid: Vec<PExponent>,
    pub ns: Vec<usize>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerance,
    /// Restrict `±` cases to one sign; both when `None`.
    pub sign: Option<Sign>,
}

impl VerifyConfig {
    pub fn new(cases: Vec<CaseId>, p_grid: &[f64], trials: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            cases,
            p_grid: p_grid.iter().map(|&p| PExponent::new(p)).collect::<Result<_>>()?,
            ns: vec![2, 3, 5],
            dims: vec![2, 4, 8],
            trials,
            seed,
            tol: Tolerance::default(),
            sign: None,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.cases.is_empty() || self.p_grid.is_empty() || self.ns.is_empty() || self.dims.is_empty() {
            return Err(Error::Parameter("cases, p grid, n list and dimension list must be non-empty".into()));
        }
        if self.ns.contains(&0) || self.dims.contains(&0) {
            return Err(Error::Parameter("n and d must be positive".into()));
        }
        if !(self.tol.rel >= 0.0 && self.tol.abs >= 0.0) {
            return Err(Error::Parameter("tolerances must be nonnegative".into()));
        }
        Ok(())
    }

    /// Admissible `(n, d)` combinations for `case`, in grid order.
    pub fn shapes_for(&self, case: CaseId) -> Vec<(usize, usize)> {
        self.ns
            .iter()
            .flat_map(|&n| self.dims.iter().map(move |&d| (n, d)))
            .filter(|&(n, d)| case.supports_shape(n, d))
            .collect()
    }

    /// Exponents evaluated for `case`: the grid, or just 2 for the fixed
    /// p = 2 identities.
    pub fn exponents_for(&self, case: CaseId) -> Vec<PExponent> {
        if case.is_fixed_p2() {
            vec![PExponent::new(2.0).expect("2 is a valid exponent")]
        } else {
            self.p_grid.clone()
        }
    }

    fn signs_for(&self, case: CaseId) -> Vec<Option<Sign>> {
        match (case.has_sign(), self.sign) {
            (true, Some(s)) => vec![Some(s)],
            _ => case.signs().to_vec(),
        }
    }
}

/// Seed of the instance used for `trial` of `case`.
pub fn trial_seed(base: u64, case: CaseId, trial: usize) -> u64 {
    stream_seed(base, CASE_STREAM_BASE + case as u64, trial as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRecord {
    pub report: CheckReport,
    pub trial: usize,
    pub seed: u64,
}

impl VerifyRecord {
    pub fn row(&self) -> ReportRow {
        ReportRow::new(&self.report, Some(self.seed))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictCounts {
    pub holds: usize,
    pub equality_holds: usize,
    pub violated: usize,
    pub inapplicable: usize,
}

impl VerdictCounts {
    pub fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::EqualityHolds => self.equality_holds += 1,
            Verdict::Violated => self.violated += 1,
            Verdict::Inapplicable => self.inapplicable += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.holds + self.equality_holds + self.violated + self.inapplicable
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOutput {
    pub records: Vec<VerifyRecord>,
    /// Requested cases with no admissible `(n, d)` combination.
    pub skipped: Vec<CaseId>,
}

impl VerifyOutput {
    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for r in &self.records {
            c.add(r.report.verdict);
        }
        c
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        self.records.iter().map(VerifyRecord::row).collect()
    }
}

fn trial_records(cfg: &VerifyConfig, case: CaseId, shapes: &[(usize, usize)], trial: usize) -> Result<Vec<VerifyRecord>> {
    let (n, d) = shapes[trial % shapes.len()];
    let seed = trial_seed(cfg.seed, case, trial);
    let instance = instance_for(case, &GenConfig::new(seed, n, d)?)?;
    let mut out = Vec::new();
    for p in cfg.exponents_for(case) {
        for sign in cfg.signs_for(case) {
            let ic = InequalityCase::new(case, sign)?;
            for report in run_case(ic, &instance, p, cfg.tol)? {
                out.push(VerifyRecord { report, trial, seed });
            }
        }
    }
    Ok(out)
}

fn record_order(a: &VerifyRecord, b: &VerifyRecord) -> Ordering {
    let (x, y) = (&a.report, &b.report);
    x.case
        .id()
        .cmp(&y.case.id())
        .then(x.p.total_cmp(&y.p))
        .then(x.case.sign().cmp(&y.case.sign()))
        .then(a.trial.cmp(&b.trial))
        .then(x.link.cmp(&y.link))
}

/// Runs every requested case on `trials` seeded instances. Trials run in
/// parallel; the output order is fixed by (case, p, sign, trial).
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyOutput> {
    cfg.validate()?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for &case in &cfg.cases {
        let shapes = cfg.shapes_for(case);
        if shapes.is_empty() {
            skipped.push(case);
            continue;
        }
        let batches: Vec<Vec<VerifyRecord>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| trial_records(cfg, case, &shapes, t))
            .collect::<Result<_>>()?;
        records.extend(batches.into_iter().flatten());
    }
    records.sort_by(record_order);
    Ok(VerifyOutput { records, skipped })
}

/// Per-grid-point digest of a verification batch.
#[derive(Clone, Debug, Serialize)]
pub struct VerifySummaryRow {
    pub case: CaseId,
    pub p: f64,
    pub sign: Option<Sign>,
    pub trials: usize,
    pub counts: VerdictCounts,
    pub min_rel_slack: Option<f64>,
    pub max_rel_slack: Option<f64>,
}

pub fn summarize(case: CaseId, p: PExponent, sign: Option<Sign>, trials: usize, records: &[VerifyRecord]) -> VerifySummaryRow {
    let mut counts = VerdictCounts::default();
    let mut min = None::<f64>;
    let mut max = None::<f64>;
    for r in records {
        counts.add(r.report.verdict);
        if r.report.rel_slack.is_finite() {
            min = Some(min.map_or(r.report.rel_slack, |m| m.min(r.report.rel_slack)));
            max = Some(max.map_or(r.report.rel_slack, |m| m.max(r.report.rel_slack)));
        }
    }
    VerifySummaryRow { case, p: p.value(), sign, trials, counts, min_rel_slack: min, max_rel_slack: max }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorch_runs_only_at_p2_and_skips_small_n() {
        let mut cfg = VerifyConfig::new(vec![CaseId::LorchIdentity], &[0.5, 3.0], 12, 7).unwrap();
        let out = run_verify(&cfg).unwrap();
        assert_eq!(out.records.len(), 12);
        assert!(out.records.iter().all(|r| r.report.p == 2.0 && r.report.n >= 3));
        assert!(out.records.iter().all(|r| r.report.verdict == Verdict::EqualityHolds));
        cfg.ns = vec![2];
        let out = run_verify(&cfg).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.skipped, vec![CaseId::LorchIdentity]);
    }

    #[test]
    fn ordering_and_cardinality() {
        let cfg = VerifyConfig::new(vec![CaseId::Cor2, CaseId::Triangle], &[1.0, 0.5], 3, 1).unwrap();
        let out = run_verify(&cfg).unwrap();
        // Cor2: 2 p × 2 signs × 3 trials; Triangle: 2 p × 3 trials
        assert_eq!(out.records.len(), 12 + 6);
        let first = &out.records[0].report;
        assert_eq!((first.case.id(), first.p), (CaseId::Triangle, 0.5));
        assert_eq!(first.verdict, Verdict::Inapplicable);
        let again = run_verify(&cfg).unwrap();
        let a: Vec<_> = out.rows().iter().map(|r| r.to_csv()).collect();
        let b: Vec<_> = again.rows().iter().map(|r| r.to_csv()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn single_sign_restriction() {
        let mut cfg = VerifyConfig::new(vec![CaseId::Th1], &[3.0], 4, 2).unwrap();
        cfg.sign = Some(Sign::Plus);
        let out = run_verify(&cfg).unwrap();
        assert_eq!(out.records.len(), 4);
        assert!(out.records.iter().all(|r| r.report.case.sign() == Some(Sign::Plus)));
    }

    #[test]
    fn rejects_empty_grid() {
        let cfg = VerifyConfig::new(vec![CaseId::Th1], &[], 4, 2).unwrap();
        assert!(matches!(run_verify(&cfg), Err(Error::Parameter(_))));
    }
}
