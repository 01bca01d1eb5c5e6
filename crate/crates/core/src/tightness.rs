//! Hill climbing for instances that push an inequality toward equality.
//!
//! The objective is the tightness ratio `weak side / strong side` of the
//! oriented report, which lies in `[0, 1]` whenever the inequality holds.
//! Instances are kept on the constraint set by searching over free
//! parameters and rebuilding the instance after every perturbation:
//!
//! * sum-zero tuples: arbitrary members, mean-centered;
//! * positive tuples: factors `G_i` with `A_i = G_i* G_i`;
//! * orthogonal ranges: a basis re-orthonormalized into column blocks;
//! * cross-orthogonal pairs: the `(I − P)` construction from [`gen`].
//!
//! Every visited instance is also checked, so the search doubles as a
//! fuzzer: a violated inequality aborts with [`Error::Violation`].

use std::io::{self, Write};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::campaign::{run_verify, summarize, VerdictCounts, VerifyConfig};
use crate::error::{Error, Result};
use crate::gen::{
    assemble_cross_pair, assemble_orthogonal_ranges, cross_rank, mean_center, mix_seed, random_rect,
    random_scalars, rng_from_seed, stream_seed, EntryDistribution, GenConfig, AUX, MEMBERS, PARTNERS,
};
use crate::ineq::{
    run_case, CaseId, CheckReport, Constraint, InequalityCase, Instance, InstanceKind, OperatorTuple,
    Orientation, Sign, Tolerance, Verdict,
};
use crate::linalg::ComplexMatrix;
use crate::numfmt::fmt_g17;
use crate::schatten::PExponent;

/// Below this exponent the objective is rough near rank drops.
pub const ILL_CONDITIONED_BELOW: f64 = 0.5;

const PERTURB_STREAM: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub case: CaseId,
    pub p: PExponent,
    pub n: usize,
    pub d: usize,
    pub sign: Sign,
    pub restarts: usize,
    pub steps: usize,
    pub initial_step: f64,
    pub step_decay: f64,
    pub seed: u64,
    /// Entry scale of the random starting points.
    pub scale: f64,
    pub tol: Tolerance,
}

impl SearchConfig {
    /// Default budget: 16 restarts × 400 steps at n = 3, d = 4.
    pub fn new(case: CaseId, p: PExponent, sign: Sign, seed: u64) -> Self {
        Self {
            case,
            p,
            n: 3,
            d: 4,
            sign,
            restarts: 16,
            steps: 400,
            initial_step: 0.5,
            step_decay: 0.95,
            seed,
            scale: 1.0,
            tol: Tolerance::default(),
        }
    }

    pub fn inequality(&self) -> InequalityCase {
        InequalityCase::with_optional_sign(self.case, self.sign)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.steps == 0 {
            return Err(Error::Parameter("restarts and steps must be at least 1".into()));
        }
        if !(self.initial_step.is_finite() && self.initial_step > 0.0) {
            return Err(Error::Parameter(format!("initial step must be positive, got {}", self.initial_step)));
        }
        if !(self.step_decay > 0.0 && self.step_decay < 1.0) {
            return Err(Error::Parameter(format!("step decay must lie in (0, 1), got {}", self.step_decay)));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Parameter(format!("scale must be positive, got {}", self.scale)));
        }
        if self.n == 0 || self.d == 0 || !self.case.supports_shape(self.n, self.d) {
            return Err(Error::Parameter(format!("{} does not support n={} d={}", self.case, self.n, self.d)));
        }
        if matches!(self.case.instance_kind(), InstanceKind::Tuple(Constraint::SumZero)) && self.n < 2 {
            return Err(Error::Parameter("sum-zero tuples need n ≥ 2".into()));
        }
        check_ratio_domain(self.case, self.p)
    }

    pub fn ill_conditioned(&self) -> bool {
        self.p.value() < ILL_CONDITIONED_BELOW
    }
}

fn check_ratio_domain(case: CaseId, p: PExponent) -> Result<()> {
    if case.is_fixed_p2() {
        return Err(Error::Domain(format!("{case} is an identity; its tightness ratio is always 1")));
    }
    if case.is_two_regime() && p.is_two() {
        return Err(Error::Domain(format!("{case} is an equality at p = 2; the ratio degenerates to 1")));
    }
    if !case.applies_at(p.value()) {
        return Err(Error::Domain(format!("{case} makes no claim at p = {p}")));
    }
    Ok(())
}

/// Ratio of the reports, and the reports themselves.
fn evaluate(case: InequalityCase, instance: &Instance, p: PExponent, tol: Tolerance) -> Result<(f64, Vec<CheckReport>)> {
    check_ratio_domain(case.id(), p)?;
    let reports = run_case(case, instance, p, tol)?;
    let mut best = 0.0_f64;
    for r in &reports {
        if r.verdict == Verdict::Inapplicable || r.orientation != Orientation::LhsLeqRhs {
            return Err(Error::Domain(format!("{} has no tightness ratio at p = {p}", r.label())));
        }
        best = best.max(r.ratio());
    }
    Ok((best, reports))
}

/// `weak side / strong side` of the oriented inequality; the larger of the
/// two links for chain cases. 0 when both sides vanish.
pub fn ratio(case: InequalityCase, instance: &Instance, p: PExponent) -> Result<f64> {
    evaluate(case, instance, p, Tolerance::default()).map(|(r, _)| r)
}

/// Free parameters from which an admissible instance is rebuilt.
#[derive(Clone, Debug)]
enum Params {
    Free(Vec<ComplexMatrix>),
    Centered(Vec<ComplexMatrix>),
    Factors(Vec<ComplexMatrix>),
    Ranges { basis: ComplexMatrix, factors: Vec<ComplexMatrix> },
    Cross { a: Vec<ComplexMatrix>, b: Vec<ComplexMatrix>, x: ComplexMatrix, y: ComplexMatrix, shift: ComplexMatrix },
    Matrices(ComplexMatrix, ComplexMatrix),
    Scalars(Vec<f64>),
}

impl Params {
    fn random(case: CaseId, cfg: &GenConfig) -> Self {
        let (n, d) = (cfg.n, cfg.d);
        let rect = |rows, cols, stream, k: usize| {
            random_rect(rows, cols, cfg.distribution, cfg.scale, stream_seed(cfg.seed, stream, k as u64))
        };
        let list = |count: usize, stream| (0..count).map(|k| rect(d, d, stream, k)).collect::<Vec<_>>();
        match case.instance_kind() {
            InstanceKind::Tuple(Constraint::Free) => Params::Free(list(n, MEMBERS)),
            InstanceKind::Tuple(Constraint::SumZero) => Params::Centered(list(n, MEMBERS)),
            InstanceKind::Tuple(Constraint::PositiveEach) => Params::Factors(list(n, MEMBERS)),
            InstanceKind::Tuple(Constraint::OrthogonalRanges) => Params::Ranges {
                basis: rect(d, d, AUX, 0),
                factors: (0..n).map(|k| rect(d, d / n, MEMBERS, k)).collect(),
            },
            InstanceKind::CrossOrthogonalPair => {
                let r = cross_rank(d);
                Params::Cross {
                    a: list(n - 1, MEMBERS),
                    b: list(n - 1, PARTNERS),
                    x: rect(d, r, AUX, 0),
                    y: rect(d, r, AUX, 1),
                    shift: rect(d, d, AUX, 2),
                }
            }
            InstanceKind::MatrixPair => Params::Matrices(rect(d, d, MEMBERS, 0), rect(d, d, MEMBERS, 1)),
            InstanceKind::Scalars => Params::Scalars(random_scalars(cfg)),
        }
    }

    fn perturbed(&self, step: f64, rng: &mut ChaCha8Rng) -> Self {
        let dist = EntryDistribution::ComplexGaussian;
        let mut jiggle = |m: &ComplexMatrix| {
            ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) + dist.sample(&mut *rng) * step)
        };
        let mut all = |v: &[ComplexMatrix]| v.iter().map(&mut jiggle).collect::<Vec<_>>();
        match self {
            Params::Free(v) => Params::Free(all(v)),
            Params::Centered(v) => Params::Centered(all(v)),
            Params::Factors(v) => Params::Factors(all(v)),
            Params::Ranges { basis, factors } => {
                let factors = all(factors);
                Params::Ranges { basis: jiggle(basis), factors }
            }
            Params::Cross { a, b, x, y, shift } => {
                let (a, b) = (all(a), all(b));
                Params::Cross { a, b, x: jiggle(x), y: jiggle(y), shift: jiggle(shift) }
            }
            Params::Matrices(a, b) => {
                let a = jiggle(a);
                Params::Matrices(a, jiggle(b))
            }
            Params::Scalars(v) => Params::Scalars(
                v.iter().map(|x| (x + step * rng.sample::<f64, _>(rand_distr::StandardNormal)).abs()).collect(),
            ),
        }
    }

    fn realize(&self) -> Result<Instance> {
        Ok(match self {
            Params::Free(v) => Instance::Tuple(OperatorTuple::free(v.clone())?),
            Params::Centered(v) => Instance::Tuple(OperatorTuple::new(mean_center(v)?, Constraint::SumZero)?),
            Params::Factors(v) => {
                Instance::Tuple(OperatorTuple::new(v.iter().map(ComplexMatrix::gram).collect(), Constraint::PositiveEach)?)
            }
            Params::Ranges { basis, factors } => Instance::Tuple(assemble_orthogonal_ranges(basis, factors)?),
            Params::Cross { a, b, x, y, shift } => {
                let (a, b) = assemble_cross_pair(a, b, x, y, shift)?;
                crate::ineq::validate_cross_orthogonal(&a, &b, crate::ineq::CONSTRAINT_TOL)?;
                Instance::Pair(a, b)
            }
            Params::Matrices(a, b) => Instance::Matrices(a.clone(), b.clone()),
            Params::Scalars(v) => Instance::Scalars(v.clone()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub restart: usize,
    pub step: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_ratio: f64,
    pub best_restart: usize,
    pub best_step: usize,
    pub best_instance: Instance,
    /// Successive improvements of the running maximum across restarts.
    pub trace: Vec<TracePoint>,
    pub ill_conditioned: bool,
    /// Instances evaluated (and checked) in total.
    pub evaluations: usize,
    /// Perturbations whose rebuilt instance failed validation.
    pub rejected: usize,
}

struct RestartOutcome {
    best_ratio: f64,
    best_step: usize,
    best_instance: Instance,
    improvements: Vec<(usize, f64)>,
    evaluations: usize,
    rejected: usize,
}

fn guarded(cfg: &SearchConfig, instance: &Instance) -> Result<f64> {
    let (r, reports) = evaluate(cfg.inequality(), instance, cfg.p, cfg.tol)?;
    if let Some(bad) = reports.iter().find(|r| r.is_violated() || r.ratio() > 1.0 + cfg.tol.rel) {
        return Err(Error::Violation(Box::new(bad.clone())));
    }
    Ok(r)
}

fn run_restart(cfg: &SearchConfig, restart: usize) -> Result<RestartOutcome> {
    let restart_seed = mix_seed(cfg.seed, restart as u64);
    let gen = GenConfig { seed: restart_seed, n: cfg.n, d: cfg.d, distribution: EntryDistribution::ComplexGaussian, scale: cfg.scale };
    let mut rng = rng_from_seed(stream_seed(restart_seed, PERTURB_STREAM, 0));

    let mut params = Params::random(cfg.case, &gen);
    let mut instance = params.realize()?;
    let mut current = guarded(cfg, &instance)?;
    let mut out = RestartOutcome {
        best_ratio: current,
        best_step: 0,
        best_instance: instance.clone(),
        improvements: vec![(0, current)],
        evaluations: 1,
        rejected: 0,
    };
    let mut step = cfg.initial_step * cfg.scale;
    for k in 1..=cfg.steps {
        let candidate = params.perturbed(step, &mut rng);
        let Ok(cand_instance) = candidate.realize() else {
            out.rejected += 1;
            step *= cfg.step_decay;
            continue;
        };
        let r = guarded(cfg, &cand_instance)?;
        out.evaluations += 1;
        if r > current {
            current = r;
            params = candidate;
            instance = cand_instance;
            out.improvements.push((k, r));
        } else {
            step *= cfg.step_decay;
        }
    }
    out.best_ratio = current;
    out.best_step = out.improvements.last().map_or(0, |&(k, _)| k);
    out.best_instance = instance;
    Ok(out)
}

/// Random-restart hill climbing on the tightness ratio. Restarts run in
/// parallel with derived seeds; the merge keeps the largest ratio, ties
/// going to the lowest restart index.
pub fn optimize_ratio(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let outcomes: Vec<RestartOutcome> =
        (0..cfg.restarts).into_par_iter().map(|r| run_restart(cfg, r)).collect::<Result<_>>()?;

    let mut trace = Vec::new();
    let mut running = f64::NEG_INFINITY;
    let mut best_idx = 0;
    for (idx, o) in outcomes.iter().enumerate() {
        for &(step, ratio) in &o.improvements {
            if ratio > running {
                running = ratio;
                trace.push(TracePoint { restart: idx, step, ratio });
            }
        }
        if o.best_ratio > outcomes[best_idx].best_ratio {
            best_idx = idx;
        }
    }
    let best = &outcomes[best_idx];
    Ok(SearchResult {
        config: *cfg,
        best_ratio: best.best_ratio,
        best_restart: best_idx,
        best_step: best.best_step,
        best_instance: best.best_instance.clone(),
        trace,
        ill_conditioned: cfg.ill_conditioned(),
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
        rejected: outcomes.iter().map(|o| o.rejected).sum(),
    })
}

pub const SEARCH_CSV_HEADER: &str = "case,p,n,d,sign,restart,step,ratio,seed,best";

fn sign_field(cfg: &SearchConfig) -> &'static str {
    if cfg.case.has_sign() {
        cfg.sign.as_str()
    } else {
        ""
    }
}

impl SearchResult {
    /// One row per trace point, then the best point flagged `best=1`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let c = &self.config;
        let prefix = format!("{},{},{},{},{}", c.case, fmt_g17(c.p.value()), c.n, c.d, sign_field(c));
        writeln!(out, "{SEARCH_CSV_HEADER}")?;
        for t in &self.trace {
            writeln!(out, "{prefix},{},{},{},{},0", t.restart, t.step, fmt_g17(t.ratio), c.seed)?;
        }
        writeln!(
            out,
            "{prefix},{},{},{},{},1",
            self.best_restart,
            self.best_step,
            fmt_g17(self.best_ratio),
            c.seed
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweepMode {
    Search,
    Verify { trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweepStatus {
    Searched,
    IllConditioned,
    /// The case is an equality at this exponent; nothing to search.
    Equality,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepStatus::Searched => "searched",
            SweepStatus::IllConditioned => "ill-conditioned",
            SweepStatus::Equality => "equality",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSweepRow {
    pub p: f64,
    pub status: SweepStatus,
    pub best_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySweepRow {
    pub p: f64,
    pub trials: usize,
    pub counts: VerdictCounts,
    pub min_rel_slack: Option<f64>,
    pub max_rel_slack: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub enum SweepRows {
    Search(Vec<SearchSweepRow>),
    Verify(Vec<VerifySweepRow>),
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub base: SearchConfig,
    pub rows: SweepRows,
}

/// Runs the search (or a verification batch) at every grid exponent.
pub fn sweep(case: CaseId, grid: &[PExponent], base: &SearchConfig, mode: SweepMode) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::Parameter("sweep needs a non-empty p grid".into()));
    }
    if let Some(p) = grid.iter().find(|p| !case.applies_at(p.value())) {
        return Err(Error::Parameter(format!("{case} makes no claim at p = {p}")));
    }
    let base = SearchConfig { case, ..*base };
    let rows = match mode {
        SweepMode::Search => SweepRows::Search(
            grid.iter()
                .map(|&p| {
                    let cfg = SearchConfig { p, ..base };
                    if case.is_fixed_p2() || (case.is_two_regime() && p.is_two()) {
                        return Ok(SearchSweepRow { p: p.value(), status: SweepStatus::Equality, best_ratio: None });
                    }
                    let res = optimize_ratio(&cfg)?;
                    let status = if res.ill_conditioned { SweepStatus::IllConditioned } else { SweepStatus::Searched };
                    Ok(SearchSweepRow { p: p.value(), status, best_ratio: Some(res.best_ratio) })
                })
                .collect::<Result<_>>()?,
        ),
        SweepMode::Verify { trials } => {
            let mut rows = Vec::with_capacity(grid.len());
            for &p in grid {
                let mut vc = VerifyConfig::new(vec![case], &[p.value()], trials, base.seed)?;
                vc.ns = vec![base.n];
                vc.dims = vec![base.d];
                vc.tol = base.tol;
                vc.sign = Some(base.sign);
                let out = run_verify(&vc)?;
                if out.records.is_empty() {
                    return Err(Error::Parameter(format!("{case} does not support n={} d={}", base.n, base.d)));
                }
                let s = summarize(case, p, base.inequality().sign(), trials, &out.records);
                rows.push(VerifySweepRow {
                    p: p.value(),
                    trials,
                    counts: s.counts,
                    min_rel_slack: s.min_rel_slack,
                    max_rel_slack: s.max_rel_slack,
                });
            }
            SweepRows::Verify(rows)
        }
    };
    Ok(SweepResult { base, rows })
}

pub const SWEEP_SEARCH_CSV_HEADER: &str = "case,p,n,d,sign,restarts,steps,best_ratio,status,seed";
pub const SWEEP_VERIFY_CSV_HEADER: &str =
    "case,p,n,d,sign,trials,holds,equality_holds,violated,inapplicable,min_rel_slack,max_rel_slack,seed";

impl SweepResult {
    pub fn len(&self) -> usize {
        match &self.rows {
            SweepRows::Search(r) => r.len(),
            SweepRows::Verify(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn violations(&self) -> usize {
        match &self.rows {
            SweepRows::Search(_) => 0,
            SweepRows::Verify(rows) => rows.iter().map(|r| r.counts.violated).sum(),
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let b = &self.base;
        let opt = |x: Option<f64>| x.map(fmt_g17).unwrap_or_default();
        let prefix = |p: f64| format!("{},{},{},{},{}", b.case, fmt_g17(p), b.n, b.d, sign_field(b));
        match &self.rows {
            SweepRows::Search(rows) => {
                writeln!(out, "{SWEEP_SEARCH_CSV_HEADER}")?;
                for r in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        prefix(r.p),
                        b.restarts,
                        b.steps,
                        opt(r.best_ratio),
                        r.status.as_str(),
                        b.seed
                    )?;
                }
            }
            SweepRows::Verify(rows) => {
                writeln!(out, "{SWEEP_VERIFY_CSV_HEADER}")?;
                for r in rows {
                    let c = r.counts;
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{}",
                        prefix(r.p),
                        r.trials,
                        c.holds,
                        c.equality_holds,
                        c.violated,
                        c.inapplicable,
                        opt(r.min_rel_slack),
                        opt(r.max_rel_slack),
                        b.seed
                    )?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineq::validate_constraint;

    fn p(x: f64) -> PExponent {
        PExponent::new(x).unwrap()
    }

    fn small(case: CaseId, q: f64, sign: Sign) -> SearchConfig {
        SearchConfig { restarts: 3, steps: 40, ..SearchConfig::new(case, p(q), sign, 5) }
    }

    fn diag_tuple() -> Instance {
        Instance::Tuple(
            OperatorTuple::new(
                vec![
                    ComplexMatrix::from_real_diag(&[1.0, 0.0]),
                    ComplexMatrix::from_real_diag(&[0.0, 1.0]),
                    ComplexMatrix::from_real_diag(&[-1.0, -1.0]),
                ],
                Constraint::SumZero,
            )
            .unwrap(),
        )
    }

    #[test]
    fn ratio_examples() {
        let cor1 = InequalityCase::new(CaseId::Cor1, Some(Sign::Minus)).unwrap();
        let r = ratio(cor1, &diag_tuple(), p(4.0)).unwrap();
        assert!((r - 1.0 / 6.0).abs() < 1e-15);
        assert!(matches!(ratio(cor1, &diag_tuple(), p(2.0)), Err(Error::Domain(_))));
        let zero = Instance::Tuple(OperatorTuple::new(vec![ComplexMatrix::zeros(2, 2); 3], Constraint::SumZero).unwrap());
        assert_eq!(ratio(cor1, &zero, p(3.0)).unwrap(), 0.0);
        let lorch = InequalityCase::new(CaseId::LorchIdentity, None).unwrap();
        assert!(ratio(lorch, &diag_tuple(), p(2.0)).is_err());
    }

    #[test]
    fn search_is_deterministic_and_monotone() {
        let cfg = small(CaseId::Cor2, 4.0, Sign::Plus);
        let a = optimize_ratio(&cfg).unwrap();
        let b = optimize_ratio(&cfg).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_ratio, b.best_ratio);
        assert!(a.trace.windows(2).all(|w| w[0].ratio <= w[1].ratio));
        assert!(a.best_ratio <= 1.0 + 1e-8 && a.best_ratio > 0.0);
        assert_eq!(a.trace.last().unwrap().ratio, a.best_ratio);
    }

    #[test]
    fn every_constraint_family_searches() {
        let cases = [
            (CaseId::Triangle, 1.5),
            (CaseId::ReverseTrianglePositive, 0.5),
            (CaseId::LemmaA, 0.5),
            (CaseId::LemmaB, 3.0),
            (CaseId::ScalarPower, 3.0),
            (CaseId::Th1, 1.0),
            (CaseId::Th2, 3.0),
            (CaseId::OrthTh1, 1.0),
            (CaseId::OrthTh2, 4.0),
        ];
        for (case, q) in cases {
            let res = optimize_ratio(&small(case, q, Sign::Minus)).unwrap();
            assert!(res.best_ratio <= 1.0 + 1e-8, "{case}");
            assert_eq!(res.rejected, 0, "{case}");
            if let Instance::Tuple(t) = &res.best_instance {
                validate_constraint(t.matrices(), t.constraint(), 1e-10).unwrap();
            }
        }
    }

    #[test]
    fn config_rejections() {
        assert!(matches!(optimize_ratio(&small(CaseId::Cor1, 2.0, Sign::Plus)), Err(Error::Domain(_))));
        assert!(optimize_ratio(&small(CaseId::Triangle, 0.5, Sign::Plus)).is_err());
        let bad = SearchConfig { step_decay: 1.0, ..small(CaseId::Cor1, 1.0, Sign::Plus) };
        assert!(matches!(optimize_ratio(&bad), Err(Error::Parameter(_))));
        let bad = SearchConfig { n: 5, d: 2, ..small(CaseId::OrthTh1, 1.0, Sign::Plus) };
        assert!(matches!(optimize_ratio(&bad), Err(Error::Parameter(_))));
    }

    #[test]
    fn sweep_cardinality_and_modes() {
        let base = small(CaseId::Cor2, 1.0, Sign::Minus);
        let res = sweep(CaseId::Cor2, &[p(1.0), p(2.0), p(4.0)], &base, SweepMode::Search).unwrap();
        assert_eq!(res.len(), 3);
        let mut csv = Vec::new();
        res.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().nth(2).unwrap().contains("equality"));

        let res = sweep(CaseId::Cor1, &[p(2.0)], &base, SweepMode::Verify { trials: 5 }).unwrap();
        match &res.rows {
            SweepRows::Verify(rows) => assert_eq!(rows[0].counts.equality_holds, 5),
            _ => unreachable!(),
        }
        assert!(matches!(sweep(CaseId::Cor2, &[], &base, SweepMode::Search), Err(Error::Parameter(_))));
    }
}
