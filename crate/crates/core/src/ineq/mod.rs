//! Executable versions of the Schatten-norm inequalities.
//!
//! Each check evaluates both sides of one inequality on a concrete instance
//! and returns an oriented [`CheckReport`]: the report's `lhs ≤ rhs` (or
//! `lhs = rhs`) is the claim being tested, whatever the side order in the
//! original statement.

mod checks;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub use checks::{
    check_cor1, check_cor2, check_lemma, check_lorch_identity, check_orth_th1, check_orth_th2,
    check_parallelogram, check_reverse_triangle_positive, check_scalar_power, check_th1, check_th2,
    check_triangle, proof_chain_defect, run_case,
};
pub use report::{write_reports_csv, ReportRow, REPORT_CSV_HEADER};

/// Tolerance for hypothesis validation, relative to the natural scale of
/// the tuple (sums or products of Frobenius norms).
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Hypothesis attached to an [`OperatorTuple`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    Free,
    SumZero,
    OrthogonalRanges,
    PositiveEach,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::Free => "Free",
            Constraint::SumZero => "SumZero",
            Constraint::OrthogonalRanges => "OrthogonalRanges",
            Constraint::PositiveEach => "PositiveEach",
        };
        f.write_str(s)
    }
}

/// Ordered list of same-shape matrices satisfying a declared constraint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorTuple {
    matrices: Vec<ComplexMatrix>,
    constraint: Constraint,
}

impl OperatorTuple {
    /// Validates the constraint at [`CONSTRAINT_TOL`].
    pub fn new(matrices: Vec<ComplexMatrix>, constraint: Constraint) -> Result<Self> {
        Self::with_tolerance(matrices, constraint, CONSTRAINT_TOL)
    }

    pub fn with_tolerance(matrices: Vec<ComplexMatrix>, constraint: Constraint, tol: f64) -> Result<Self> {
        validate_constraint(&matrices, constraint, tol)?;
        Ok(Self { matrices, constraint })
    }

    pub fn free(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(matrices, Constraint::Free)
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<ComplexMatrix> {
        self.matrices
    }

    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.matrices[0].shape()
    }

    /// Row dimension of the members.
    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    pub fn sum(&self) -> ComplexMatrix {
        ComplexMatrix::sum_of(&self.matrices).expect("tuple shapes are uniform")
    }

    /// Multiplies every member by a real `c ≠ 0`; every constraint is
    /// invariant under this (positivity needs `c > 0`).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.matrices.iter().map(|m| m.scale_real(c)).collect(), self.constraint)
    }
}

/// Checks `matrices` against `constraint` at relative tolerance `tol`.
pub fn validate_constraint(matrices: &[ComplexMatrix], constraint: Constraint, tol: f64) -> Result<()> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::Parameter("an operator tuple needs at least one matrix".into()))?;
    if let Some(k) = matrices.iter().position(|m| m.shape() != first.shape()) {
        return Err(Error::Shape(format!(
            "tuple member {k} is {}x{}, expected {}x{}",
            matrices[k].rows(),
            matrices[k].cols(),
            first.rows(),
            first.cols()
        )));
    }
    match constraint {
        Constraint::Free => Ok(()),
        Constraint::SumZero => {
            let residual = ComplexMatrix::sum_of(matrices)?.frobenius_norm();
            let scale: f64 = matrices.iter().map(ComplexMatrix::frobenius_norm).sum();
            if residual > tol * scale {
                return Err(Error::Precondition(format!(
                    "SumZero: ‖ΣA_i‖_F = {residual:e} exceeds {tol:e} × {scale:e}"
                )));
            }
            Ok(())
        }
        Constraint::OrthogonalRanges => {
            for (i, a) in matrices.iter().enumerate() {
                for (j, b) in matrices.iter().enumerate().skip(i + 1) {
                    let defect = a.adjoint().matmul(b)?.frobenius_norm();
                    let scale = a.frobenius_norm() * b.frobenius_norm();
                    if defect > tol * scale {
                        return Err(Error::Precondition(format!(
                            "OrthogonalRanges: ‖A_{i}* A_{j}‖_F = {defect:e} exceeds {tol:e} × {scale:e}"
                        )));
                    }
                }
            }
            Ok(())
        }
        Constraint::PositiveEach => {
            for (k, m) in matrices.iter().enumerate() {
                let spectrum = crate::linalg::hermitian_eigenvalues(m)
                    .map_err(|e| Error::Precondition(format!("PositiveEach: member {k}: {e}")))?;
                crate::linalg::clamp_psd(spectrum.values())
                    .map_err(|e| Error::Precondition(format!("PositiveEach: member {k}: {e}")))?;
            }
            Ok(())
        }
    }
}

/// `‖(ΣA_i)* (ΣB_j)‖_F`, which vanishes iff `Σ_{i,j} A_i* B_j = 0`.
pub fn cross_orthogonality_defect(a: &OperatorTuple, b: &OperatorTuple) -> Result<f64> {
    Ok(a.sum().adjoint().matmul(&b.sum())?.frobenius_norm())
}

/// Validates the hypothesis shared by the two-tuple theorems.
pub fn validate_cross_orthogonal(a: &OperatorTuple, b: &OperatorTuple, tol: f64) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::Precondition(format!("tuples have different lengths {} and {}", a.n(), b.n())));
    }
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!("tuple shapes {:?} and {:?} differ", a.shape(), b.shape())));
    }
    let defect = cross_orthogonality_defect(a, b)?;
    let scale = a.matrices.iter().map(ComplexMatrix::frobenius_norm).sum::<f64>()
        * b.matrices.iter().map(ComplexMatrix::frobenius_norm).sum::<f64>();
    if defect > tol * scale {
        return Err(Error::Precondition(format!(
            "CrossOrthogonal: ‖(ΣA_i)*(ΣB_j)‖_F = {defect:e} exceeds {tol:e} × {scale:e}"
        )));
    }
    Ok(())
}

/// The `±` in `‖A_i ± B_j‖`, applied uniformly to every pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn apply(self, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }

    /// `+1.0` or `-1.0`.
    pub fn unit(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(Error::Parameter(format!("unknown sign {s:?} (expected plus or minus)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    Triangle,
    ReverseTrianglePositive,
    LemmaA,
    LemmaB,
    ScalarPower,
    Parallelogram,
    LorchIdentity,
    Th1,
    Cor1,
    OrthTh1,
    Th2,
    Cor2,
    OrthTh2,
}

/// What kind of instance a case consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Tuple(Constraint),
    /// Two tuples with `Σ_{i,j} A_i* B_j = 0`.
    CrossOrthogonalPair,
    MatrixPair,
    Scalars,
}

impl CaseId {
    pub const ALL: [CaseId; 13] = [
        CaseId::Triangle,
        CaseId::ReverseTrianglePositive,
        CaseId::LemmaA,
        CaseId::LemmaB,
        CaseId::ScalarPower,
        CaseId::Parallelogram,
        CaseId::LorchIdentity,
        CaseId::Th1,
        CaseId::Cor1,
        CaseId::OrthTh1,
        CaseId::Th2,
        CaseId::Cor2,
        CaseId::OrthTh2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Triangle => "Triangle",
            CaseId::ReverseTrianglePositive => "ReverseTrianglePositive",
            CaseId::LemmaA => "LemmaA",
            CaseId::LemmaB => "LemmaB",
            CaseId::ScalarPower => "ScalarPower",
            CaseId::Parallelogram => "Parallelogram",
            CaseId::LorchIdentity => "LorchIdentity",
            CaseId::Th1 => "Th1",
            CaseId::Cor1 => "Cor1",
            CaseId::OrthTh1 => "OrthTh1",
            CaseId::Th2 => "Th2",
            CaseId::Cor2 => "Cor2",
            CaseId::OrthTh2 => "OrthTh2",
        }
    }

    /// Whether the statement carries a `±`.
    pub fn has_sign(self) -> bool {
        matches!(
            self,
            CaseId::Th1 | CaseId::Cor1 | CaseId::OrthTh1 | CaseId::Th2 | CaseId::Cor2 | CaseId::OrthTh2
        )
    }

    /// Identities evaluated at p = 2 only.
    pub fn is_fixed_p2(self) -> bool {
        matches!(self, CaseId::Parallelogram | CaseId::LorchIdentity)
    }

    /// Cases stated for both `p ≤ 2` and `p ≥ 2`, collapsing to an equality at
    /// `p = 2`.
    pub fn is_two_regime(self) -> bool {
        self.has_sign()
    }

    /// Whether the case makes a claim at this exponent.
    pub fn applies_at(self, p: f64) -> bool {
        match self {
            CaseId::Triangle | CaseId::LemmaB => p >= 1.0,
            CaseId::ReverseTrianglePositive | CaseId::LemmaA => p <= 1.0,
            CaseId::Parallelogram | CaseId::LorchIdentity => p == 2.0,
            _ => true,
        }
    }

    pub fn instance_kind(self) -> InstanceKind {
        match self {
            CaseId::Triangle => InstanceKind::Tuple(Constraint::Free),
            CaseId::ReverseTrianglePositive | CaseId::LemmaA | CaseId::LemmaB => {
                InstanceKind::Tuple(Constraint::PositiveEach)
            }
            CaseId::ScalarPower => InstanceKind::Scalars,
            CaseId::Parallelogram => InstanceKind::MatrixPair,
            CaseId::LorchIdentity | CaseId::Cor1 | CaseId::Cor2 => InstanceKind::Tuple(Constraint::SumZero),
            CaseId::Th1 | CaseId::Th2 => InstanceKind::CrossOrthogonalPair,
            CaseId::OrthTh1 | CaseId::OrthTh2 => InstanceKind::Tuple(Constraint::OrthogonalRanges),
        }
    }

    /// Structural requirements on `(n, d)` beyond the constraint itself.
    pub fn supports_shape(self, n: usize, d: usize) -> bool {
        match self {
            CaseId::LorchIdentity => n >= 3,
            CaseId::OrthTh1 | CaseId::OrthTh2 => d >= n,
            CaseId::Th1 | CaseId::Th2 => d >= 2,
            CaseId::Cor1 | CaseId::Cor2 => n >= 2,
            _ => true,
        }
    }

    /// The sign choices to exercise: both for `±` statements, none otherwise.
    pub fn signs(self) -> &'static [Option<Sign>] {
        if self.has_sign() {
            &[Some(Sign::Plus), Some(Sign::Minus)]
        } else {
            &[None]
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown case {s:?}")))
    }
}

/// A case together with its sign, present exactly for `±` statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InequalityCase {
    id: CaseId,
    sign: Option<Sign>,
}

impl InequalityCase {
    pub fn new(id: CaseId, sign: Option<Sign>) -> Result<Self> {
        match (id.has_sign(), sign) {
            (true, None) => Err(Error::Parameter(format!("{id} needs a sign (plus or minus)"))),
            (false, Some(_)) => Err(Error::Parameter(format!("{id} takes no sign"))),
            _ => Ok(Self { id, sign }),
        }
    }

    /// Like [`InequalityCase::new`], dropping the sign for cases without `±`.
    pub fn with_optional_sign(id: CaseId, sign: Sign) -> Self {
        Self { id, sign: id.has_sign().then_some(sign) }
    }

    pub fn id(self) -> CaseId {
        self.id
    }

    pub fn sign(self) -> Option<Sign> {
        self.sign
    }
}

/// Which link of a two-sided chain `x ≤ y ≤ z` a report covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChainLink {
    /// `x ≤ y`
    Left,
    /// `y ≤ z`
    Right,
}

impl ChainLink {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainLink::Left => "left",
            ChainLink::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    LhsLeqRhs,
    Equality,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::LhsLeqRhs => "LhsLeqRhs",
            Orientation::Equality => "Equality",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    EqualityHolds,
    Violated,
    Inapplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::EqualityHolds => "EqualityHolds",
            Verdict::Violated => "Violated",
            Verdict::Inapplicable => "Inapplicable",
        }
    }
}

/// Relative verdict tolerance with an absolute floor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self { rel, ..Self::default() }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-8, abs: 1e-12 }
    }
}

/// Outcome of one inequality instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub case: InequalityCase,
    pub link: Option<ChainLink>,
    pub p: f64,
    pub n: usize,
    pub d: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub orientation: Orientation,
    /// `rhs − lhs`
    pub slack: f64,
    /// `slack / max(|lhs|, |rhs|)`, or 0 when both sides sit under the
    /// absolute floor.
    pub rel_slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl CheckReport {
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        case: InequalityCase,
        link: Option<ChainLink>,
        p: f64,
        n: usize,
        d: usize,
        lhs: f64,
        rhs: f64,
        orientation: Orientation,
        tol: Tolerance,
    ) -> Self {
        let slack = rhs - lhs;
        let magnitude = lhs.abs().max(rhs.abs());
        let scale = magnitude.max(1.0);
        let threshold = (tol.rel * scale).max(tol.abs);
        let rel_slack = if magnitude > tol.abs { slack / magnitude } else { 0.0 };
        let verdict = match orientation {
            _ if !slack.is_finite() => Verdict::Violated,
            Orientation::LhsLeqRhs if slack < -threshold => Verdict::Violated,
            Orientation::LhsLeqRhs => Verdict::Holds,
            Orientation::Equality if slack.abs() <= threshold => Verdict::EqualityHolds,
            Orientation::Equality => Verdict::Violated,
        };
        Self { case, link, p, n, d, lhs, rhs, orientation, slack, rel_slack, tolerance: tol.rel, verdict }
    }

    pub fn inapplicable(case: InequalityCase, link: Option<ChainLink>, p: f64, n: usize, d: usize, tol: Tolerance) -> Self {
        Self {
            case,
            link,
            p,
            n,
            d,
            lhs: f64::NAN,
            rhs: f64::NAN,
            orientation: Orientation::LhsLeqRhs,
            slack: f64::NAN,
            rel_slack: f64::NAN,
            tolerance: tol.rel,
            verdict: Verdict::Inapplicable,
        }
    }

    /// `Triangle`, or `LemmaA/left` for chain links.
    pub fn label(&self) -> String {
        match self.link {
            Some(link) => format!("{}/{}", self.case.id(), link.as_str()),
            None => self.case.id().to_string(),
        }
    }

    /// One-line description, e.g. `Cor1 (minus) p=4 n=3 d=2: lhs 72 vs rhs 432 (Holds)`.
    pub fn summary(&self) -> String {
        let sign = self.case.sign().map(|s| format!(" ({s})")).unwrap_or_default();
        format!(
            "{}{sign} p={} n={} d={}: lhs {} vs rhs {} ({})",
            self.label(),
            crate::numfmt::fmt_g17(self.p),
            self.n,
            self.d,
            crate::numfmt::fmt_g17(self.lhs),
            crate::numfmt::fmt_g17(self.rhs),
            self.verdict.as_str()
        )
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    /// `lhs / rhs` for a `LhsLeqRhs` report, 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        if self.lhs == 0.0 && self.rhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Input for [`run_case`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Instance {
    Tuple(OperatorTuple),
    Pair(OperatorTuple, OperatorTuple),
    Matrices(ComplexMatrix, ComplexMatrix),
    Scalars(Vec<f64>),
}

impl Instance {
    /// Tuple length (number of scalars for scalar instances).
    pub fn n(&self) -> usize {
        match self {
            Instance::Tuple(t) | Instance::Pair(t, _) => t.n(),
            Instance::Matrices(..) => 2,
            Instance::Scalars(a) => a.len(),
        }
    }

    /// Matrix row dimension, 0 for scalar instances.
    pub fn dim(&self) -> usize {
        match self {
            Instance::Tuple(t) | Instance::Pair(t, _) => t.dim(),
            Instance::Matrices(a, _) => a.rows(),
            Instance::Scalars(_) => 0,
        }
    }

    /// Multiplies every matrix (or scalar) by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Ok(match self {
            Instance::Tuple(t) => Instance::Tuple(t.scaled(c)?),
            Instance::Pair(a, b) => Instance::Pair(a.scaled(c)?, b.scaled(c)?),
            Instance::Matrices(a, b) => Instance::Matrices(a.scale_real(c), b.scale_real(c)),
            Instance::Scalars(v) => Instance::Scalars(v.iter().map(|x| x * c).collect()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.name().parse::<CaseId>().unwrap(), c);
        }
        assert!("Nope".parse::<CaseId>().is_err());
        assert_eq!("cor1".parse::<CaseId>().unwrap(), CaseId::Cor1);
    }

    #[test]
    fn sign_present_exactly_for_pm_cases() {
        assert!(InequalityCase::new(CaseId::Cor1, None).is_err());
        assert!(InequalityCase::new(CaseId::Triangle, Some(Sign::Plus)).is_err());
        assert!(InequalityCase::new(CaseId::Th2, Some(Sign::Minus)).is_ok());
        assert_eq!(InequalityCase::with_optional_sign(CaseId::LemmaA, Sign::Plus).sign(), None);
    }

    #[test]
    fn verdict_rules() {
        let case = InequalityCase::new(CaseId::Triangle, None).unwrap();
        let tol = Tolerance::default();
        let r = CheckReport::evaluate(case, None, 1.0, 2, 2, 1.0, 1.0 - 1e-9, Orientation::LhsLeqRhs, tol);
        assert_eq!(r.verdict, Verdict::Holds);
        let r = CheckReport::evaluate(case, None, 1.0, 2, 2, 1.0, 1.0 - 1e-7, Orientation::LhsLeqRhs, tol);
        assert_eq!(r.verdict, Verdict::Violated);
        let r = CheckReport::evaluate(case, None, 2.0, 2, 2, 5.0, 5.0 + 1e-9, Orientation::Equality, tol);
        assert_eq!(r.verdict, Verdict::EqualityHolds);
        let r = CheckReport::evaluate(case, None, 2.0, 2, 2, 5.0, 5.1, Orientation::Equality, tol);
        assert_eq!(r.verdict, Verdict::Violated);
        let r = CheckReport::evaluate(case, None, 1.0, 2, 2, 0.0, 0.0, Orientation::LhsLeqRhs, tol);
        assert_eq!((r.verdict, r.rel_slack), (Verdict::Holds, 0.0));
    }

    #[test]
    fn tuple_validation() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(OperatorTuple::new(vec![a.clone(), b.clone()], Constraint::OrthogonalRanges).is_ok());
        assert!(OperatorTuple::new(vec![a.clone(), a.clone()], Constraint::OrthogonalRanges).is_err());
        assert!(OperatorTuple::new(vec![a.clone(), -&a], Constraint::SumZero).is_ok());
        assert!(matches!(
            OperatorTuple::new(vec![a.clone(), b.clone()], Constraint::SumZero),
            Err(Error::Precondition(_))
        ));
        assert!(OperatorTuple::new(vec![a.clone(), b.clone()], Constraint::PositiveEach).is_ok());
        assert!(OperatorTuple::new(vec![-&a], Constraint::PositiveEach).is_err());
        assert!(matches!(
            OperatorTuple::new(vec![a, ComplexMatrix::zeros(3, 3)], Constraint::Free),
            Err(Error::Shape(_))
        ));
        assert!(OperatorTuple::new(vec![], Constraint::Free).is_err());
    }
}
