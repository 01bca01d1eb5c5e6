use super::{
    validate_cross_orthogonal, CaseId, ChainLink, CheckReport, Constraint, InequalityCase, Instance,
    OperatorTuple, Orientation, Sign, Tolerance, CONSTRAINT_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix};
use crate::schatten::{lp_power_sum, schatten_norm, schatten_power, PExponent};

fn case(id: CaseId, sign: Option<Sign>) -> InequalityCase {
    InequalityCase::new(id, sign).expect("sign matches case")
}

fn require(t: &OperatorTuple, constraint: Constraint, id: CaseId) -> Result<()> {
    if t.constraint() != constraint {
        return Err(Error::Precondition(format!(
            "{id} requires a {constraint} tuple, got {}",
            t.constraint()
        )));
    }
    Ok(())
}

/// Orients a two-regime statement: `small ≤ big` for `p < 2`, reversed for
/// `p > 2`, equality at `p = 2`.
fn two_regime(p: PExponent, small: f64, big: f64) -> (f64, f64, Orientation) {
    if p.is_two() {
        (small, big, Orientation::Equality)
    } else if p.is_le_two() {
        (small, big, Orientation::LhsLeqRhs)
    } else {
        (big, small, Orientation::LhsLeqRhs)
    }
}

/// `Σ_{i,j} f(A_i ± B_j)` over all ordered pairs, including `i = j`.
fn pair_sum(a: &[ComplexMatrix], b: &[ComplexMatrix], sign: Sign, f: impl Fn(&ComplexMatrix) -> f64) -> f64 {
    a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).map(|(x, y)| f(&sign.apply(x, y))).sum()
}

fn norm_sq(m: &ComplexMatrix, p: PExponent) -> f64 {
    let v = schatten_norm(m, p);
    v * v
}

/// `‖M‖₂² = Σ|m_ij|²`, summed directly.
fn hs_sq(m: &ComplexMatrix) -> f64 {
    m.entries().iter().map(|z| z.norm_sqr()).sum()
}

/// `‖ΣA_i‖_p ≤ Σ‖A_i‖_p` for `p ≥ 1`.
pub fn check_triangle(t: &OperatorTuple, p: PExponent, tol: Tolerance) -> CheckReport {
    let c = case(CaseId::Triangle, None);
    if !p.is_ge_one() {
        return CheckReport::inapplicable(c, None, p.value(), t.n(), t.dim(), tol);
    }
    let lhs = schatten_norm(&t.sum(), p);
    let rhs = t.matrices().iter().map(|m| schatten_norm(m, p)).sum();
    CheckReport::evaluate(c, None, p.value(), t.n(), t.dim(), lhs, rhs, Orientation::LhsLeqRhs, tol)
}

/// `Σ‖A_i‖_p ≤ ‖ΣA_i‖_p` for positive `A_i` and `0 < p ≤ 1`.
pub fn check_reverse_triangle_positive(t: &OperatorTuple, p: PExponent, tol: Tolerance) -> Result<CheckReport> {
    require(t, Constraint::PositiveEach, CaseId::ReverseTrianglePositive)?;
    let c = case(CaseId::ReverseTrianglePositive, None);
    if !p.is_le_one() {
        return Ok(CheckReport::inapplicable(c, None, p.value(), t.n(), t.dim(), tol));
    }
    let lhs = t.matrices().iter().map(|m| schatten_norm(m, p)).sum();
    let rhs = schatten_norm(&t.sum(), p);
    Ok(CheckReport::evaluate(c, None, p.value(), t.n(), t.dim(), lhs, rhs, Orientation::LhsLeqRhs, tol))
}

/// The chain `x ≤ y ≤ z` as two reports.
#[allow(clippy::too_many_arguments)]
fn chain(c: InequalityCase, p: f64, n: usize, d: usize, x: f64, y: f64, z: f64, tol: Tolerance) -> [CheckReport; 2] {
    [
        CheckReport::evaluate(c, Some(ChainLink::Left), p, n, d, x, y, Orientation::LhsLeqRhs, tol),
        CheckReport::evaluate(c, Some(ChainLink::Right), p, n, d, y, z, Orientation::LhsLeqRhs, tol),
    ]
}

/// With `s = Σ‖A_i‖_p^p`, `y = ‖ΣA_i‖_p^p`, `w = n^{p−1} s`, the lemma for
/// positive tuples reads `w ≤ y ≤ s` (`0 < p ≤ 1`, part a) and `s ≤ y ≤ w`
/// (`p ≥ 1`, part b).
fn lemma_reports(t: &OperatorTuple, p: PExponent, id: CaseId, tol: Tolerance) -> [CheckReport; 2] {
    let c = case(id, None);
    let (n, d) = (t.n(), t.dim());
    if !id.applies_at(p.value()) {
        return [
            CheckReport::inapplicable(c, Some(ChainLink::Left), p.value(), n, d, tol),
            CheckReport::inapplicable(c, Some(ChainLink::Right), p.value(), n, d, tol),
        ];
    }
    let s: f64 = t.matrices().iter().map(|m| schatten_power(m, p)).sum();
    let y = schatten_power(&t.sum(), p);
    let w = (n as f64).powf(p.value() - 1.0) * s;
    match id {
        CaseId::LemmaA => chain(c, p.value(), n, d, w, y, s, tol),
        _ => chain(c, p.value(), n, d, s, y, w, tol),
    }
}

/// Both links of the lemma for positive tuples; part (a) for `p ≤ 1`,
/// part (b) otherwise.
pub fn check_lemma(t: &OperatorTuple, p: PExponent, tol: Tolerance) -> Result<[CheckReport; 2]> {
    let id = if p.is_le_one() { CaseId::LemmaA } else { CaseId::LemmaB };
    require(t, Constraint::PositiveEach, id)?;
    Ok(lemma_reports(t, p, id, tol))
}

/// Scalar form of the lemma: `n^{p−1}Σa^p ≤ (Σa)^p ≤ Σa^p` for `p ≤ 1`,
/// and `Σa^p ≤ (Σa)^p ≤ n^{p−1}Σa^p` for `p ≥ 1`.
pub fn check_scalar_power(a: &[f64], p: PExponent, tol: Tolerance) -> Result<[CheckReport; 2]> {
    if a.is_empty() {
        return Err(Error::Parameter("scalar check needs at least one value".into()));
    }
    if let Some(x) = a.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::Precondition(format!("scalar check needs nonnegative values, got {x}")));
    }
    let c = case(CaseId::ScalarPower, None);
    let n = a.len();
    let s = lp_power_sum(a, p);
    let y = lp_power_sum(&[a.iter().sum::<f64>()], p);
    let w = (n as f64).powf(p.value() - 1.0) * s;
    Ok(if p.is_le_one() {
        chain(c, p.value(), n, 0, w, y, s, tol)
    } else {
        chain(c, p.value(), n, 0, s, y, w, tol)
    })
}

/// `‖A+B‖₂² + ‖A−B‖₂² = 2(‖A‖₂² + ‖B‖₂²)`.
pub fn check_parallelogram(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<CheckReport> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    let lhs = hs_sq(&(a + b)) + hs_sq(&(a - b));
    let rhs = 2.0 * (hs_sq(a) + hs_sq(b));
    Ok(CheckReport::evaluate(
        case(CaseId::Parallelogram, None),
        None,
        2.0,
        2,
        a.rows(),
        lhs,
        rhs,
        Orientation::Equality,
        tol,
    ))
}

/// `Σ_{i,j}‖A_i − A_j‖₂² = 2n Σ‖A_i‖₂²` for sum-zero tuples, `n ≥ 3`.
pub fn check_lorch_identity(t: &OperatorTuple, tol: Tolerance) -> Result<CheckReport> {
    require(t, Constraint::SumZero, CaseId::LorchIdentity)?;
    let n = t.n();
    if n < 3 {
        return Err(Error::Precondition(format!("LorchIdentity needs n ≥ 3, got {n}")));
    }
    let m = t.matrices();
    let lhs = pair_sum(m, m, Sign::Minus, hs_sq);
    let rhs = 2.0 * n as f64 * m.iter().map(hs_sq).sum::<f64>();
    Ok(CheckReport::evaluate(
        case(CaseId::LorchIdentity, None),
        None,
        2.0,
        n,
        t.dim(),
        lhs,
        rhs,
        Orientation::Equality,
        tol,
    ))
}

/// `2^{p/2−1} n^{p−1} (Σ‖A_i‖_p^p + Σ‖B_i‖_p^p)` against `Σ_{i,j}‖A_i ± B_j‖_p^p`,
/// given `Σ_{i,j} A_i* B_j = 0`.
pub fn check_th1(a: &OperatorTuple, b: &OperatorTuple, p: PExponent, s: Sign, tol: Tolerance) -> Result<CheckReport> {
    validate_cross_orthogonal(a, b, CONSTRAINT_TOL)?;
    let n = a.n();
    let pv = p.value();
    let norms: f64 = a.matrices().iter().chain(b.matrices()).map(|m| schatten_power(m, p)).sum();
    let bound = 2f64.powf(pv / 2.0 - 1.0) * (n as f64).powf(pv - 1.0) * norms;
    let sum = pair_sum(a.matrices(), b.matrices(), s, |m| schatten_power(m, p));
    let (lhs, rhs, orientation) = two_regime(p, bound, sum);
    Ok(CheckReport::evaluate(case(CaseId::Th1, Some(s)), None, pv, n, a.dim(), lhs, rhs, orientation, tol))
}

/// Th1 with `B = A` for a sum-zero tuple: constant `2^{p/2} n^{p−1}`.
pub fn check_cor1(t: &OperatorTuple, p: PExponent, s: Sign, tol: Tolerance) -> Result<CheckReport> {
    require(t, Constraint::SumZero, CaseId::Cor1)?;
    let mut report = check_th1(t, t, p, s, tol)?;
    report.case = case(CaseId::Cor1, Some(s));
    Ok(report)
}

/// `(2n ± 2)^{p/2} n^{p/2−1} Σ‖A_i‖_p^p` against `Σ_{i,j}‖A_i ± A_j‖_p^p` for
/// tuples with mutually orthogonal ranges.
pub fn check_orth_th1(t: &OperatorTuple, p: PExponent, s: Sign, tol: Tolerance) -> Result<CheckReport> {
    require(t, Constraint::OrthogonalRanges, CaseId::OrthTh1)?;
    let n = t.n();
    let (nf, pv) = (n as f64, p.value());
    let constant = (2.0 * nf + 2.0 * s.unit()).powf(pv / 2.0) * nf.powf(pv / 2.0 - 1.0);
    let bound = constant * t.matrices().iter().map(|m| schatten_power(m, p)).sum::<f64>();
    let sum = pair_sum(t.matrices(), t.matrices(), s, |m| schatten_power(m, p));
    let (lhs, rhs, orientation) = two_regime(p, bound, sum);
    Ok(CheckReport::evaluate(case(CaseId::OrthTh1, Some(s)), None, pv, n, t.dim(), lhs, rhs, orientation, tol))
}

/// `Σ_{i,j}‖A_i ± B_j‖_p²` against `n^{2/p} Σ_i ‖(|A_i|² + |B_i|²)^{1/2}‖_p²`,
/// given `Σ_{i,j} A_i* B_j = 0`.
pub fn check_th2(a: &OperatorTuple, b: &OperatorTuple, p: PExponent, s: Sign, tol: Tolerance) -> Result<CheckReport> {
    validate_cross_orthogonal(a, b, CONSTRAINT_TOL)?;
    let n = a.n();
    let pv = p.value();
    let sum = pair_sum(a.matrices(), b.matrices(), s, |m| norm_sq(m, p));
    let mut roots = 0.0;
    for (x, y) in a.matrices().iter().zip(b.matrices()) {
        roots += norm_sq(&psd_sqrt(&(&x.gram() + &y.gram()))?, p);
    }
    let bound = (n as f64).powf(2.0 / pv) * roots;
    let (lhs, rhs, orientation) = two_regime(p, sum, bound);
    Ok(CheckReport::evaluate(case(CaseId::Th2, Some(s)), None, pv, n, a.dim(), lhs, rhs, orientation, tol))
}

/// `Σ_{i,j}‖A_i ± A_j‖_p²` against `2n^{2/p} Σ‖A_i‖_p²` for sum-zero tuples.
pub fn check_cor2(t: &OperatorTuple, p: PExponent, s: Sign, tol: Tolerance) -> Result<CheckReport> {
    require(t, Constraint::SumZero, CaseId::Cor2)?;
    let n = t.n();
    let pv = p.value();
    let sum = pair_sum(t.matrices(), t.matrices(), s, |m| norm_sq(m, p));
    let bound = 2.0 * (n as f64).powf(2.0 / pv) * t.matrices().iter().map(|m| norm_sq(m, p)).sum::<f64>();
    let (lhs, rhs, orientation) = two_regime(p, sum, bound);
    Ok(CheckReport::evaluate(case(CaseId::Cor2, Some(s)), None, pv, n, t.dim(), lhs, rhs, orientation, tol))
}

/// `Σ_{i,j}‖A_i ± A_j‖_p²` against `2n^{2/p−1}(n ± 1) Σ‖A_i‖_p²` for tuples
/// with mutually orthogonal ranges.
pub fn check_orth_th2(t: &OperatorTuple, p: PExponent, s: Sign, tol: Tolerance) -> Result<CheckReport> {
    require(t, Constraint::OrthogonalRanges, CaseId::OrthTh2)?;
    let n = t.n();
    let (nf, pv) = (n as f64, p.value());
    let sum = pair_sum(t.matrices(), t.matrices(), s, |m| norm_sq(m, p));
    let constant = 2.0 * nf.powf(2.0 / pv - 1.0) * (nf + s.unit());
    let bound = constant * t.matrices().iter().map(|m| norm_sq(m, p)).sum::<f64>();
    let (lhs, rhs, orientation) = two_regime(p, sum, bound);
    Ok(CheckReport::evaluate(case(CaseId::OrthTh2, Some(s)), None, pv, n, t.dim(), lhs, rhs, orientation, tol))
}

/// Relative Frobenius defect of `Σ_{i,j}|A_i ± B_j|² = n(Σ|A_i|² + Σ|B_i|²)`,
/// the identity both main proofs pass through.
pub fn proof_chain_defect(a: &OperatorTuple, b: &OperatorTuple, s: Sign) -> Result<f64> {
    validate_cross_orthogonal(a, b, CONSTRAINT_TOL)?;
    let mut lhs = ComplexMatrix::zeros(a.shape().1, a.shape().1);
    for x in a.matrices() {
        for y in b.matrices() {
            lhs = &lhs + &s.apply(x, y).gram();
        }
    }
    let grams: Vec<ComplexMatrix> = a.matrices().iter().chain(b.matrices()).map(ComplexMatrix::gram).collect();
    let rhs = ComplexMatrix::sum_of(&grams)?.scale_real(a.n() as f64);
    Ok((&lhs - &rhs).frobenius_norm() / rhs.frobenius_norm().max(f64::MIN_POSITIVE))
}

fn mismatch(id: CaseId, instance: &Instance) -> Error {
    let got = match instance {
        Instance::Tuple(_) => "a tuple",
        Instance::Pair(..) => "a pair of tuples",
        Instance::Matrices(..) => "a pair of matrices",
        Instance::Scalars(_) => "scalars",
    };
    Error::Precondition(format!("{id} cannot run on {got}"))
}

/// Dispatches `case` on `instance`. Chain cases (the lemma and the scalar
/// inequality) yield two reports, everything else one.
pub fn run_case(case: InequalityCase, instance: &Instance, p: PExponent, tol: Tolerance) -> Result<Vec<CheckReport>> {
    let id = case.id();
    let sign = || case.sign().expect("signed case");
    if id.is_fixed_p2() && !p.is_two() {
        return Ok(vec![CheckReport::inapplicable(case, None, p.value(), instance.n(), instance.dim(), tol)]);
    }
    let one = |r: CheckReport| vec![r];
    match (id, instance) {
        (CaseId::Triangle, Instance::Tuple(t)) => Ok(one(check_triangle(t, p, tol))),
        (CaseId::ReverseTrianglePositive, Instance::Tuple(t)) => check_reverse_triangle_positive(t, p, tol).map(one),
        (CaseId::LemmaA | CaseId::LemmaB, Instance::Tuple(t)) => {
            require(t, Constraint::PositiveEach, id)?;
            Ok(lemma_reports(t, p, id, tol).to_vec())
        }
        (CaseId::ScalarPower, Instance::Scalars(a)) => check_scalar_power(a, p, tol).map(|r| r.to_vec()),
        (CaseId::Parallelogram, Instance::Matrices(a, b)) => check_parallelogram(a, b, tol).map(one),
        (CaseId::LorchIdentity, Instance::Tuple(t)) => check_lorch_identity(t, tol).map(one),
        (CaseId::Th1, Instance::Pair(a, b)) => check_th1(a, b, p, sign(), tol).map(one),
        (CaseId::Cor1, Instance::Tuple(t)) => check_cor1(t, p, sign(), tol).map(one),
        (CaseId::OrthTh1, Instance::Tuple(t)) => check_orth_th1(t, p, sign(), tol).map(one),
        (CaseId::Th2, Instance::Pair(a, b)) => check_th2(a, b, p, sign(), tol).map(one),
        (CaseId::Cor2, Instance::Tuple(t)) => check_cor2(t, p, sign(), tol).map(one),
        (CaseId::OrthTh2, Instance::Tuple(t)) => check_orth_th2(t, p, sign(), tol).map(one),
        _ => Err(mismatch(id, instance)),
    }
}
