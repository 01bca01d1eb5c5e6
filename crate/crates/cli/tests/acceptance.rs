//! Acceptance gate: one pass/fail line per criterion.
//!
//! Lines are written straight to the process stdout so they show up in
//! `cargo test` output without `--nocapture`.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use schatten_lab::campaign::{run_verify, VerifyConfig, DEFAULT_P_GRID};
use schatten_lab::gen::{positive_tuple, random_matrix, random_psd, stream_seed, sum_zero_tuple, GenConfig};
use schatten_lab::ineq::{check_lemma, check_lorch_identity, CaseId, Constraint, OperatorTuple, Sign, Tolerance, Verdict};
use schatten_lab::schatten::schatten_norm;
use schatten_lab::tightness::{optimize_ratio, SearchConfig};
use schatten_lab::{ComplexMatrix, PExponent};

const BIN: &str = env!("CARGO_BIN_EXE_schatten-lab");

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn p(x: f64) -> PExponent {
    PExponent::new(x).unwrap()
}

fn within(elapsed: Duration, budget_secs: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(budget_secs) {
        return Err(format!("took {elapsed:.2?}, budget {budget_secs} s"));
    }
    Ok(())
}

fn lorch_identity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for n in [3, 5] {
        for d in [2, 8] {
            for trial in 0..50u64 {
                let seed = stream_seed(1, (n * 10 + d) as u64, trial);
                let t = sum_zero_tuple(&GenConfig::new(seed, n, d).unwrap()).unwrap();
                let r = check_lorch_identity(&t, Tolerance::default()).unwrap();
                worst = worst.max((r.lhs - r.rhs).abs() / r.lhs.max(1.0));
                count += 1;
            }
        }
    }
    within(start.elapsed(), 5)?;
    if worst > 1e-9 {
        return Err(format!("worst relative gap {worst:e} over {count} tuples"));
    }
    Ok(format!("{count} tuples, worst gap {worst:.2e}"))
}

fn soundness_sweep() -> Outcome {
    let start = Instant::now();
    let cfg = VerifyConfig::new(CaseId::ALL.to_vec(), &DEFAULT_P_GRID, 100, 2024).unwrap();
    let out = run_verify(&cfg).unwrap();
    within(start.elapsed(), 60)?;
    let c = out.counts();
    if !out.skipped.is_empty() {
        return Err(format!("cases skipped: {:?}", out.skipped));
    }
    if c.violated > 0 {
        let first = out.records.iter().find(|r| r.report.is_violated()).unwrap();
        return Err(format!("{} violated, first: {}", c.violated, first.report.summary()));
    }
    Ok(format!("{} reports, 0 violated, {:.1?}", c.total(), start.elapsed()))
}

fn p2_collapse() -> Outcome {
    let cases = vec![CaseId::Th1, CaseId::Cor1, CaseId::Th2, CaseId::Cor2, CaseId::OrthTh1, CaseId::OrthTh2];
    let cfg = VerifyConfig::new(cases.clone(), &[2.0], 100, 99).unwrap();
    let out = run_verify(&cfg).unwrap();
    for case in cases {
        for sign in Sign::BOTH {
            let n = out
                .records
                .iter()
                .filter(|r| r.report.case.id() == case && r.report.case.sign() == Some(sign))
                .count();
            if n != 100 {
                return Err(format!("{case} {sign}: {n} reports, expected 100"));
            }
        }
    }
    if let Some(bad) = out
        .records
        .iter()
        .find(|r| r.report.verdict != Verdict::EqualityHolds || r.report.rel_slack.abs() > 1e-8)
    {
        return Err(bad.report.summary());
    }
    let worst = out.records.iter().map(|r| r.report.rel_slack.abs()).fold(0.0, f64::max);
    Ok(format!("{} reports EqualityHolds, worst |rel_slack| {worst:.2e}", out.records.len()))
}

/// Complex number with exact rational parts.
#[derive(Clone)]
struct Cq {
    re: BigRational,
    im: BigRational,
}

impl Cq {
    fn from_f64(re: f64, im: f64) -> Self {
        Cq { re: BigRational::from_float(re).unwrap(), im: BigRational::from_float(im).unwrap() }
    }

    fn zero() -> Self {
        Cq { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn conj(&self) -> Self {
        Cq { re: self.re.clone(), im: -self.im.clone() }
    }

    fn mul(&self, o: &Self) -> Self {
        Cq { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn add(&self, o: &Self) -> Self {
        Cq { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Self) -> Self {
        Cq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

/// Coefficients `(c1, c2, c3)` of `det(xI − G) = x³ − c1x² + c2x − c3` for
/// `G = A*A`, computed exactly.
fn gram_charpoly(a: &ComplexMatrix) -> [BigRational; 3] {
    let n = 3;
    let q: Vec<Vec<Cq>> =
        (0..n).map(|i| (0..n).map(|j| Cq::from_f64(a.get(i, j).re, a.get(i, j).im)).collect()).collect();
    let g: Vec<Vec<Cq>> = (0..n)
        .map(|i| {
            (0..n).map(|j| (0..n).fold(Cq::zero(), |acc, k| acc.add(&q[k][i].conj().mul(&q[k][j])))).collect()
        })
        .collect();
    let c1 = &g[0][0].re + &g[1][1].re + &g[2][2].re;
    let mut c2 = BigRational::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            c2 += g[i][i].mul(&g[j][j]).sub(&g[i][j].mul(&g[j][i])).re;
        }
    }
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| g[r1][c1].mul(&g[r2][c2]).sub(&g[r1][c2].mul(&g[r2][c1]));
    let det = g[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&g[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&g[0][2].mul(&minor(1, 2, 0, 1)));
    assert!(det.im.is_zero(), "determinant of a Hermitian matrix is real");
    [c1, c2, det.re]
}

/// Number of roots strictly above `x` of a cubic with only real roots:
/// sign changes in the Taylor coefficients at `x` (Descartes' rule is exact
/// when every root is real).
fn roots_above(c: &[BigRational; 3], x: &BigRational) -> usize {
    let three = BigRational::from_integer(3.into());
    let two = BigRational::from_integer(2.into());
    let px = x * x * x - &c[0] * x * x + &c[1] * x - &c[2];
    let dpx = &three * x * x - &two * &c[0] * x + &c[1];
    let half_ddpx = &three * x - &c[0];
    let coeffs = [BigRational::one(), half_ddpx, dpx, px];
    let signs: Vec<bool> = coeffs.iter().filter(|v| !v.is_zero()).map(|v| v.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Eigenvalues of `A*A` (nonincreasing) by exact bisection.
fn oracle_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let c = gram_charpoly(a);
    let two = BigRational::from_integer(2.into());
    let positive = roots_above(&c, &BigRational::zero());
    (1..=3)
        .map(|k| {
            if k > positive {
                return 0.0;
            }
            let mut lo = -BigRational::one();
            let mut hi = &c[0] + BigRational::one();
            for _ in 0..140 {
                let mid = (&lo + &hi) / &two;
                if roots_above(&c, &mid) >= k {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi.to_f64().unwrap().max(0.0)
        })
        .collect()
}

fn oracle_norm(a: &ComplexMatrix, q: f64) -> f64 {
    let s: f64 = oracle_eigenvalues(a).iter().map(|l| l.sqrt().powf(q)).sum();
    s.powf(1.0 / q)
}

fn norm_oracle() -> Outcome {
    let mut worst = 0.0_f64;
    for k in 0..50u64 {
        let a = random_matrix(&GenConfig::new(stream_seed(404, 0, k), 1, 3).unwrap());
        for q in [0.5, 1.0, 2.0, 3.0] {
            let got = schatten_norm(&a, p(q));
            let want = oracle_norm(&a, q);
            let err = (got - want).abs() / want;
            worst = worst.max(err);
            if err > 1e-10 {
                return Err(format!("matrix {k}, p={q}: {got} vs oracle {want} (rel {err:e})"));
            }
        }
    }
    Ok(format!("200 norms, worst relative error {worst:.2e}"))
}

fn hand_table() -> Outcome {
    let out = Command::new(BIN).arg("selftest").output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    if out.status.code() != Some(0) {
        return Err(format!("selftest exit {:?}:\n{stdout}", out.status.code()));
    }
    let required = [
        "lorch.diagonal-tuple",
        "cor1.diagonal-tuple-p4",
        "cor2.diagonal-tuple-p1",
        "orth-th1.projections-minus",
        "orth-th1.projections-plus",
        "norm.diag34-p1",
        "norm.diag34-p2",
        "norm.diag34-p-half",
        "psd-sqrt.2112",
    ];
    for id in required {
        if !stdout.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["ok", id]) {
            return Err(format!("example {id} missing or failing"));
        }
    }
    let mutated = Command::new(BIN).args(["selftest", "--perturb", "1e-9"]).output().unwrap();
    if mutated.status.code() != Some(1) {
        return Err("perturbed table still passes".into());
    }
    Ok(format!("{} examples pass, mutation detected", stdout.lines().filter(|l| l.starts_with("ok")).count()))
}

fn lemma_equality() -> Outcome {
    let gap = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
    let mut worst = 0.0_f64;
    for (k, n) in [2usize, 3, 5].into_iter().enumerate() {
        let a = random_psd(&GenConfig::new(stream_seed(6, 0, k as u64), 1, 4).unwrap());
        let t = OperatorTuple::new(vec![a; n], Constraint::PositiveEach).unwrap();
        for q in DEFAULT_P_GRID {
            let [left, right] = check_lemma(&t, p(q), Tolerance::default()).unwrap();
            // the n^{p-1} link: left for part (a), right for part (b)
            let link = if q <= 1.0 { &left } else { &right };
            let g = gap(link.lhs, link.rhs);
            worst = worst.max(g);
            if g > 1e-10 {
                return Err(format!("identical operators: {}", link.summary()));
            }
        }
    }
    for trial in 0..20u64 {
        let t = positive_tuple(&GenConfig::new(stream_seed(6, 1, trial), 4, 4).unwrap()).unwrap();
        for r in check_lemma(&t, p(1.0), Tolerance::default()).unwrap() {
            let g = gap(r.lhs, r.rhs);
            worst = worst.max(g);
            if g > 1e-10 {
                return Err(format!("p = 1: {}", r.summary()));
            }
        }
    }
    Ok(format!("worst relative gap {worst:.2e}"))
}

fn tightness_contract() -> Outcome {
    let mut lines = Vec::new();
    for case in [CaseId::Cor1, CaseId::Cor2] {
        for q in [1.0, 4.0] {
            for sign in Sign::BOTH {
                let cfg = SearchConfig::new(case, p(q), sign, 17);
                let (a, b) = (optimize_ratio(&cfg).unwrap(), optimize_ratio(&cfg).unwrap());
                let (mut x, mut y) = (Vec::new(), Vec::new());
                a.write_csv(&mut x).unwrap();
                b.write_csv(&mut y).unwrap();
                if x != y {
                    return Err(format!("{case} p={q} {sign}: reruns differ"));
                }
                if a.best_ratio > 1.0 + 1e-8 {
                    return Err(format!("{case} p={q} {sign}: ratio {}", a.best_ratio));
                }
                if a.trace.windows(2).any(|w| w[1].ratio < w[0].ratio) {
                    return Err(format!("{case} p={q} {sign}: trace decreases"));
                }
                lines.push(format!("{case}/{q}/{sign}={:.4}", a.best_ratio));
            }
        }
    }
    Ok(lines.join(" "))
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let path = dir.join(name);
    let out = Command::new(BIN).args(args).arg("--out").arg(&path).output().unwrap();
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let verify = ["verify", "--case", "all", "--trials", "100", "--seed", "5"];
    let tighten = ["tighten", "--case", "Cor1", "--p", "4", "--sign", "minus", "--seed", "1"];
    for (label, args) in [("verify", &verify[..]), ("tighten", &tighten[..])] {
        let a = run_to(dir.path(), &format!("{label}-1.csv"), args)?;
        let b = run_to(dir.path(), &format!("{label}-2.csv"), args)?;
        if a != b {
            return Err(format!("{label} outputs differ"));
        }
        let json_a = run_to(dir.path(), &format!("{label}-1.json"), &[args, &["--format", "json"]].concat())?;
        let json_b = run_to(dir.path(), &format!("{label}-2.json"), &[args, &["--format", "json"]].concat())?;
        if json_a != json_b {
            return Err(format!("{label} JSON outputs differ"));
        }
    }
    Ok("verify and tighten byte-identical (CSV and JSON)".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("C1 Lorch identity", lorch_identity),
        ("C2 soundness sweep", soundness_sweep),
        ("C3 p=2 collapse", p2_collapse),
        ("C4 norm oracle", norm_oracle),
        ("C5 hand-computed table", hand_table),
        ("C6 lemma equality cases", lemma_equality),
        ("C7 tightness contract", tightness_contract),
        ("C8 determinism", determinism),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (name, run) in criteria {
        let line = match run() {
            Ok(detail) => format!("PASS  {name}: {detail}\n"),
            Err(detail) => {
                failed.push(name);
                format!("FAIL  {name}: {detail}\n")
            }
        };
        stdout.write_all(line.as_bytes()).unwrap();
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn oracle_reproduces_hand_values() {
    let a = ComplexMatrix::from_real_diag(&[3.0, -4.0, 1.0]);
    assert_eq!(oracle_eigenvalues(&a), vec![16.0, 9.0, 1.0]);
    assert!((oracle_norm(&a, 1.0) - 8.0).abs() < 1e-15);
    let ones = ComplexMatrix::from_real(3, 3, &[1.0; 9]).unwrap();
    assert_eq!(oracle_eigenvalues(&ones), vec![9.0, 0.0, 0.0]);
}
