//! Table of hand-computed examples, run by `schatten-lab selftest`.
//!
//! Each entry recomputes a known value through the public API and compares
//! it at relative error `1e-12` (absolute for zero targets). A nonzero
//! `perturb` multiplies every expected value by `1 + perturb`, which must
//! make the table fail; the CLI exposes this as a hidden mutation switch.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::gen::{
    cross_orthogonal_pair, mean_center, orthogonal_ranges_tuple, positive_tuple, random_matrix, random_psd,
    random_unitary, sum_zero_tuple, stream_seed, GenConfig, MEMBERS,
};
use crate::ineq::{
    check_cor1, check_cor2, check_lemma, check_lorch_identity, check_orth_th1, check_orth_th2, check_parallelogram,
    check_reverse_triangle_positive, check_scalar_power, check_th1, check_th2, check_triangle, run_case,
    validate_constraint, validate_cross_orthogonal, CaseId, CheckReport, Constraint, InequalityCase, Instance,
    OperatorTuple, Orientation, Sign, Tolerance, Verdict, CONSTRAINT_TOL,
};
use crate::linalg::{
    adjoint, gram, hermitian_eigenvalues, matmul, psd_sqrt, singular_values, trace_inner, ComplexMatrix, C64,
};
use crate::numfmt::fmt_g17;
use crate::schatten::{hilbert_schmidt_norm, schatten_norm, schatten_norm_psd, PExponent};
use crate::tightness::{optimize_ratio, ratio, sweep, SearchConfig, SweepMode, SweepRows};

pub const SELFTEST_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleOutcome {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub outcomes: Vec<ExampleOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExampleOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

struct Probe {
    perturb: f64,
    failures: Vec<String>,
}

impl Probe {
    fn close(&mut self, what: &str, got: f64, want: f64) {
        let want = want * (1.0 + self.perturb);
        let err = if want == 0.0 { got.abs() } else { (got - want).abs() / want.abs() };
        if err.is_nan() || err > SELFTEST_REL_TOL {
            self.failures.push(format!("{what}: got {}, want {}", fmt_g17(got), fmt_g17(want)));
        }
    }

    fn close_all(&mut self, what: &str, got: &[f64], want: &[f64]) {
        if got.len() != want.len() {
            self.failures.push(format!("{what}: length {} vs {}", got.len(), want.len()));
            return;
        }
        for (k, (g, w)) in got.iter().zip(want).enumerate() {
            self.close(&format!("{what}[{k}]"), *g, *w);
        }
    }

    fn close_matrix(&mut self, what: &str, got: &ComplexMatrix, want: &ComplexMatrix) {
        if got.shape() != want.shape() {
            self.failures.push(format!("{what}: shape {:?} vs {:?}", got.shape(), want.shape()));
            return;
        }
        let scale = want.frobenius_norm().max(f64::MIN_POSITIVE);
        let want = want.scale_real(1.0 + self.perturb);
        let err = (got - &want).frobenius_norm();
        let err = if want.frobenius_norm() == 0.0 { err } else { err / scale };
        if err.is_nan() || err > SELFTEST_REL_TOL {
            self.failures.push(format!("{what}: relative Frobenius error {}", fmt_g17(err)));
        }
    }

    fn ensure(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn sides(&mut self, what: &str, r: &CheckReport, lhs: f64, rhs: f64) {
        self.close(&format!("{what} lhs"), r.lhs, lhs);
        self.close(&format!("{what} rhs"), r.rhs, rhs);
    }

    /// Equality up to the check tolerance (used for random inputs).
    fn equal_sides(&mut self, what: &str, r: &CheckReport) {
        let gap = (r.lhs - r.rhs).abs() / r.lhs.abs().max(r.rhs.abs()).max(1.0);
        self.ensure(&format!("{what}: sides differ by {}", fmt_g17(gap)), gap <= 1e-10);
    }
}

type Example = (&'static str, fn(&mut Probe) -> Result<()>);

const TOL: Tolerance = Tolerance { rel: 1e-8, abs: 1e-12 };

fn p(x: f64) -> PExponent {
    PExponent::new(x).expect("valid exponent")
}

fn real(rows: usize, cols: usize, e: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real(rows, cols, e).expect("shape matches")
}

fn diag(d: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real_diag(d)
}

fn shift() -> ComplexMatrix {
    real(2, 2, &[0.0, 1.0, 0.0, 0.0])
}

fn sample(seed: u64, d: usize) -> ComplexMatrix {
    random_matrix(&GenConfig::new(seed, 1, d).expect("valid config"))
}

fn diag_tuple() -> Result<OperatorTuple> {
    OperatorTuple::new(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0]), diag(&[-1.0, -1.0])], Constraint::SumZero)
}

fn projection_pair() -> Result<OperatorTuple> {
    OperatorTuple::new(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], Constraint::OrthogonalRanges)
}

fn zeros(n: usize, c: Constraint) -> Result<OperatorTuple> {
    OperatorTuple::new(vec![ComplexMatrix::zeros(2, 2); n], c)
}

fn case(id: CaseId, sign: Option<Sign>) -> InequalityCase {
    InequalityCase::new(id, sign).expect("sign matches case")
}

const LINALG: &[Example] = &[
    ("adjoint.conjugate-1x1", |t| {
        let m = ComplexMatrix::from_diag(&[C64::new(0.0, 1.0)]);
        t.close_matrix("adjoint", &adjoint(&m), &ComplexMatrix::from_diag(&[C64::new(0.0, -1.0)]));
        Ok(())
    }),
    ("adjoint.real-transpose", |t| {
        t.close_matrix("adjoint", &adjoint(&real(2, 2, &[1.0, 2.0, 3.0, 4.0])), &real(2, 2, &[1.0, 3.0, 2.0, 4.0]));
        Ok(())
    }),
    ("adjoint.involution", |t| {
        let m = sample(11, 3);
        t.close_matrix("adjoint twice", &adjoint(&adjoint(&m)), &m);
        Ok(())
    }),
    ("matmul.identity", |t| {
        let m = sample(12, 3);
        t.close_matrix("I·M", &matmul(&ComplexMatrix::identity(3), &m)?, &m);
        Ok(())
    }),
    ("matmul.nilpotent", |t| {
        t.close_matrix("N²", &matmul(&shift(), &shift())?, &ComplexMatrix::zeros(2, 2));
        Ok(())
    }),
    ("matmul.ones-squared", |t| {
        let j = real(2, 2, &[1.0; 4]);
        t.close_matrix("J²", &matmul(&j, &j)?, &real(2, 2, &[2.0; 4]));
        Ok(())
    }),
    ("gram.diagonal", |t| {
        t.close_matrix("gram", &gram(&diag(&[3.0, -4.0])), &diag(&[9.0, 16.0]));
        Ok(())
    }),
    ("gram.shift", |t| {
        t.close_matrix("gram", &gram(&shift()), &diag(&[0.0, 1.0]));
        Ok(())
    }),
    ("gram.unitary", |t| {
        t.close_matrix("U*U", &gram(&random_unitary(4, 13)?), &ComplexMatrix::identity(4));
        Ok(())
    }),
    ("eigenvalues.diagonal", |t| {
        t.close_all("λ", hermitian_eigenvalues(&diag(&[4.0, 0.0]))?.values(), &[4.0, 0.0]);
        Ok(())
    }),
    ("eigenvalues.2112", |t| {
        t.close_all("λ", hermitian_eigenvalues(&real(2, 2, &[2.0, 1.0, 1.0, 2.0]))?.values(), &[3.0, 1.0]);
        Ok(())
    }),
    ("eigenvalues.2222", |t| {
        t.close_all("λ", hermitian_eigenvalues(&real(2, 2, &[2.0; 4]))?.values(), &[4.0, 0.0]);
        Ok(())
    }),
    ("singular-values.diagonal", |t| {
        t.close_all("σ", singular_values(&diag(&[3.0, -4.0])).values(), &[4.0, 3.0]);
        Ok(())
    }),
    ("singular-values.shift", |t| {
        t.close_all("σ", singular_values(&shift()).values(), &[1.0, 0.0]);
        Ok(())
    }),
    ("singular-values.ones", |t| {
        t.close_all("σ", singular_values(&real(2, 2, &[1.0; 4])).values(), &[2.0, 0.0]);
        Ok(())
    }),
    ("psd-sqrt.diagonal", |t| {
        t.close_matrix("sqrt", &psd_sqrt(&diag(&[4.0, 9.0]))?, &diag(&[2.0, 3.0]));
        Ok(())
    }),
    ("psd-sqrt.2112", |t| {
        let (a, b) = ((3f64.sqrt() + 1.0) / 2.0, (3f64.sqrt() - 1.0) / 2.0);
        t.close_matrix("sqrt", &psd_sqrt(&real(2, 2, &[2.0, 1.0, 1.0, 2.0]))?, &real(2, 2, &[a, b, b, a]));
        Ok(())
    }),
    ("psd-sqrt.zero", |t| {
        t.close_matrix("sqrt", &psd_sqrt(&ComplexMatrix::zeros(3, 3))?, &ComplexMatrix::zeros(3, 3));
        Ok(())
    }),
    ("trace-inner.identity", |t| {
        let i = ComplexMatrix::identity(2);
        t.close("tr", trace_inner(&i, &i)?.re, 2.0);
        Ok(())
    }),
    ("trace-inner.diagonal", |t| {
        t.close("tr", trace_inner(&diag(&[1.0, 2.0]), &diag(&[3.0, 4.0]))?.re, 11.0);
        Ok(())
    }),
    ("trace-inner.hermitian-symmetry", |t| {
        let (a, b) = (sample(14, 3), sample(15, 3));
        let (x, y) = (trace_inner(&a, &b)?, trace_inner(&b, &a)?.conj());
        t.close("re", x.re, y.re);
        t.close("im", x.im, y.im);
        Ok(())
    }),
];

const SCHATTEN: &[Example] = &[
    ("norm.identity", |t| {
        t.close("‖I₃‖_0.7", schatten_norm(&ComplexMatrix::identity(3), p(0.7)), 3f64.powf(1.0 / 0.7));
        Ok(())
    }),
    ("norm.diag34-p1", |t| {
        t.close("‖·‖₁", schatten_norm(&diag(&[3.0, -4.0]), p(1.0)), 7.0);
        Ok(())
    }),
    ("norm.diag34-p2", |t| {
        t.close("‖·‖₂", schatten_norm(&diag(&[3.0, -4.0]), p(2.0)), 5.0);
        Ok(())
    }),
    ("norm.diag34-p-half", |t| {
        let want = (2.0 + 3f64.sqrt()).powi(2);
        t.close("‖·‖_½", schatten_norm(&diag(&[3.0, -4.0]), p(0.5)), want);
        Ok(())
    }),
    ("norm.identity-printed", |t| {
        let s = fmt_g17(schatten_norm(&ComplexMatrix::identity(2), p(2.0)));
        t.ensure(&format!("printed {s}"), s == "1.4142135623730951");
        Ok(())
    }),
    ("norm-psd.identity-p-half", |t| {
        t.close("‖I₂‖_½", schatten_norm_psd(&diag(&[1.0, 1.0]), p(0.5))?, 4.0);
        Ok(())
    }),
    ("norm-psd.gram-identity", |t| {
        let a = sample(16, 4);
        let x = schatten_norm(&a, p(3.0));
        t.close("‖|A|²‖_{3/2}", schatten_norm_psd(&gram(&a), p(1.5))?, x * x);
        Ok(())
    }),
    ("norm.zero", |t| {
        t.close("‖0‖", schatten_norm(&ComplexMatrix::zeros(3, 3), p(0.3)), 0.0);
        Ok(())
    }),
    ("hilbert-schmidt.entrywise", |t| {
        t.close("‖·‖₂", hilbert_schmidt_norm(&real(2, 2, &[3.0, 4.0, 0.0, 0.0])), 5.0);
        Ok(())
    }),
    ("hilbert-schmidt.identity", |t| {
        t.close("‖I₅‖₂", hilbert_schmidt_norm(&ComplexMatrix::identity(5)), 5f64.sqrt());
        Ok(())
    }),
    ("hilbert-schmidt.agrees-with-p2", |t| {
        let a = sample(17, 5);
        t.close("‖A‖₂", hilbert_schmidt_norm(&a), schatten_norm(&a, p(2.0)));
        Ok(())
    }),
];

const INEQ: &[Example] = &[
    ("triangle.zero", |t| {
        let r = check_triangle(&zeros(3, Constraint::Free)?, p(1.0), TOL);
        t.sides("triangle", &r, 0.0, 0.0);
        t.ensure("verdict Holds", r.verdict == Verdict::Holds);
        Ok(())
    }),
    ("triangle.identities-p1", |t| {
        let r = check_triangle(&OperatorTuple::free(vec![ComplexMatrix::identity(2); 2])?, p(1.0), TOL);
        t.sides("triangle", &r, 4.0, 4.0);
        Ok(())
    }),
    ("triangle.gate", |t| {
        let r = check_triangle(&zeros(2, Constraint::Free)?, p(0.5), TOL);
        t.ensure("p=0.5 inapplicable", r.verdict == Verdict::Inapplicable);
        Ok(())
    }),
    ("reverse-triangle.projections", |t| {
        let tup = OperatorTuple::new(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], Constraint::PositiveEach)?;
        let r = check_reverse_triangle_positive(&tup, p(0.5), TOL)?;
        t.sides("reverse", &r, 2.0, 4.0);
        t.ensure("verdict Holds", r.verdict == Verdict::Holds);
        Ok(())
    }),
    ("reverse-triangle.single", |t| {
        let tup = OperatorTuple::new(vec![random_psd(&GenConfig::new(18, 1, 3)?)], Constraint::PositiveEach)?;
        let r = check_reverse_triangle_positive(&tup, p(0.4), TOL)?;
        t.close("single", r.lhs, r.rhs);
        Ok(())
    }),
    ("reverse-triangle.p1", |t| {
        let r = check_reverse_triangle_positive(&positive_tuple(&GenConfig::new(19, 3, 3)?)?, p(1.0), TOL)?;
        t.equal_sides("p=1", &r);
        Ok(())
    }),
    ("lemma.identical-projections", |t| {
        let a = diag(&[1.0, 0.0]);
        let tup = OperatorTuple::new(vec![a.clone(), a], Constraint::PositiveEach)?;
        let [left, _] = check_lemma(&tup, p(0.5), TOL)?;
        t.sides("lower", &left, SQRT_2, SQRT_2);
        Ok(())
    }),
    ("lemma.identical-operators", |t| {
        let a = random_psd(&GenConfig::new(20, 1, 3)?);
        let tup = OperatorTuple::new(vec![a; 3], Constraint::PositiveEach)?;
        let [left, _] = check_lemma(&tup, p(0.6), TOL)?;
        t.equal_sides("part a, n^{p-1} link", &left);
        let [_, right] = check_lemma(&tup, p(3.0), TOL)?;
        t.equal_sides("part b, n^{p-1} link", &right);
        Ok(())
    }),
    ("lemma.p1-both-links", |t| {
        for r in check_lemma(&positive_tuple(&GenConfig::new(21, 4, 3)?)?, p(1.0), TOL)? {
            t.equal_sides(&r.label(), &r);
        }
        Ok(())
    }),
    ("scalar.ones-p-half", |t| {
        let [l, r] = check_scalar_power(&[1.0, 1.0], p(0.5), TOL)?;
        t.sides("left", &l, SQRT_2, SQRT_2);
        t.sides("right", &r, SQRT_2, 2.0);
        Ok(())
    }),
    ("scalar.single", |t| {
        for q in [0.3, 1.0, 2.5] {
            for r in check_scalar_power(&[1.7], p(q), TOL)? {
                t.close(&r.label(), r.lhs, r.rhs);
            }
        }
        Ok(())
    }),
    ("scalar.ones-p2", |t| {
        let [l, r] = check_scalar_power(&[1.0, 1.0], p(2.0), TOL)?;
        t.sides("left", &l, 2.0, 4.0);
        t.sides("right", &r, 4.0, 4.0);
        Ok(())
    }),
    ("parallelogram.identical", |t| {
        let i = ComplexMatrix::identity(2);
        t.sides("parallelogram", &check_parallelogram(&i, &i, TOL)?, 8.0, 8.0);
        Ok(())
    }),
    ("parallelogram.projections", |t| {
        t.sides("parallelogram", &check_parallelogram(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), TOL)?, 4.0, 4.0);
        Ok(())
    }),
    ("parallelogram.zero-partner", |t| {
        let a = sample(22, 3);
        let r = check_parallelogram(&a, &ComplexMatrix::zeros(3, 3), TOL)?;
        let h = hilbert_schmidt_norm(&a);
        t.close("lhs", r.lhs, 2.0 * h * h);
        t.close("rhs", r.rhs, 2.0 * h * h);
        Ok(())
    }),
    ("lorch.diagonal-tuple", |t| {
        t.sides("lorch", &check_lorch_identity(&diag_tuple()?, TOL)?, 24.0, 24.0);
        Ok(())
    }),
    ("lorch.zero", |t| {
        t.sides("lorch", &check_lorch_identity(&zeros(3, Constraint::SumZero)?, TOL)?, 0.0, 0.0);
        Ok(())
    }),
    ("lorch.random", |t| {
        let r = check_lorch_identity(&sum_zero_tuple(&GenConfig::new(23, 4, 3)?)?, TOL)?;
        t.equal_sides("lorch", &r);
        Ok(())
    }),
    ("th1.zero", |t| {
        let z = zeros(2, Constraint::Free)?;
        t.sides("th1", &check_th1(&z, &z, p(3.0), Sign::Plus, TOL)?, 0.0, 0.0);
        Ok(())
    }),
    ("th1.p2-random", |t| {
        let (a, b) = cross_orthogonal_pair(&GenConfig::new(24, 3, 4)?)?;
        for s in Sign::BOTH {
            t.equal_sides(s.as_str(), &check_th1(&a, &b, p(2.0), s, TOL)?);
        }
        Ok(())
    }),
    ("th1.diagonal-tuple-p4", |t| {
        let d = diag_tuple()?;
        t.sides("th1", &check_th1(&d, &d, p(4.0), Sign::Minus, TOL)?, 72.0, 432.0);
        Ok(())
    }),
    ("cor1.diagonal-tuple-p4", |t| {
        let r = check_cor1(&diag_tuple()?, p(4.0), Sign::Minus, TOL)?;
        t.sides("cor1", &r, 72.0, 432.0);
        t.ensure("verdict Holds", r.verdict == Verdict::Holds);
        Ok(())
    }),
    ("cor1.diagonal-tuple-p2-plus", |t| {
        t.sides("cor1", &check_cor1(&diag_tuple()?, p(2.0), Sign::Plus, TOL)?, 24.0, 24.0);
        Ok(())
    }),
    ("cor1.random-p1", |t| {
        let r = check_cor1(&sum_zero_tuple(&GenConfig::new(25, 3, 3)?)?, p(1.0), Sign::Plus, TOL)?;
        t.ensure("p=1 holds", r.verdict == Verdict::Holds);
        Ok(())
    }),
    ("orth-th1.projections-minus", |t| {
        t.sides("orth-th1", &check_orth_th1(&projection_pair()?, p(2.0), Sign::Minus, TOL)?, 4.0, 4.0);
        Ok(())
    }),
    ("orth-th1.projections-plus", |t| {
        t.sides("orth-th1", &check_orth_th1(&projection_pair()?, p(2.0), Sign::Plus, TOL)?, 12.0, 12.0);
        Ok(())
    }),
    ("orth-th1.zero", |t| {
        t.sides("orth-th1", &check_orth_th1(&zeros(2, Constraint::OrthogonalRanges)?, p(3.0), Sign::Plus, TOL)?, 0.0, 0.0);
        Ok(())
    }),
    ("th2.p2-random", |t| {
        let (a, b) = cross_orthogonal_pair(&GenConfig::new(26, 3, 4)?)?;
        for s in Sign::BOTH {
            t.equal_sides(s.as_str(), &check_th2(&a, &b, p(2.0), s, TOL)?);
        }
        Ok(())
    }),
    ("th2.diagonal-tuple-p2", |t| {
        let d = diag_tuple()?;
        t.sides("th2", &check_th2(&d, &d, p(2.0), Sign::Minus, TOL)?, 24.0, 24.0);
        Ok(())
    }),
    ("th2.zero", |t| {
        let z = zeros(2, Constraint::Free)?;
        t.sides("th2", &check_th2(&z, &z, p(0.5), Sign::Minus, TOL)?, 0.0, 0.0);
        Ok(())
    }),
    ("cor2.diagonal-tuple-p1", |t| {
        t.sides("cor2", &check_cor2(&diag_tuple()?, p(1.0), Sign::Minus, TOL)?, 44.0, 108.0);
        Ok(())
    }),
    ("cor2.diagonal-tuple-p2", |t| {
        t.sides("cor2", &check_cor2(&diag_tuple()?, p(2.0), Sign::Minus, TOL)?, 24.0, 24.0);
        Ok(())
    }),
    ("cor2.zero", |t| {
        t.sides("cor2", &check_cor2(&zeros(3, Constraint::SumZero)?, p(4.0), Sign::Plus, TOL)?, 0.0, 0.0);
        Ok(())
    }),
    ("orth-th2.projections-minus", |t| {
        t.sides("orth-th2", &check_orth_th2(&projection_pair()?, p(2.0), Sign::Minus, TOL)?, 4.0, 4.0);
        Ok(())
    }),
    ("orth-th2.projections-plus", |t| {
        t.sides("orth-th2", &check_orth_th2(&projection_pair()?, p(2.0), Sign::Plus, TOL)?, 12.0, 12.0);
        Ok(())
    }),
    ("orth-th2.zero", |t| {
        t.sides("orth-th2", &check_orth_th2(&zeros(2, Constraint::OrthogonalRanges)?, p(0.5), Sign::Minus, TOL)?, 0.0, 0.0);
        Ok(())
    }),
    ("dispatch.lorch", |t| {
        let r = run_case(case(CaseId::LorchIdentity, None), &Instance::Tuple(diag_tuple()?), p(2.0), TOL)?;
        t.ensure("EqualityHolds", r.len() == 1 && r[0].verdict == Verdict::EqualityHolds);
        Ok(())
    }),
    ("dispatch.triangle-gate", |t| {
        let r = run_case(case(CaseId::Triangle, None), &Instance::Tuple(zeros(2, Constraint::Free)?), p(0.5), TOL)?;
        t.ensure("Inapplicable", r[0].verdict == Verdict::Inapplicable);
        Ok(())
    }),
    ("dispatch.constraint-gate", |t| {
        let free = Instance::Tuple(OperatorTuple::free(diag_tuple()?.into_matrices())?);
        let res = run_case(case(CaseId::Cor1, Some(Sign::Plus)), &free, p(1.0), TOL);
        t.ensure("precondition error", matches!(res, Err(Error::Precondition(_))));
        Ok(())
    }),
];

const GEN: &[Example] = &[
    ("gen.deterministic", |t| {
        t.ensure("same seed", sample(30, 4) == sample(30, 4));
        t.ensure("different seeds", sample(30, 4) != sample(31, 4));
        Ok(())
    }),
    ("gen.scale-positive", |t| {
        let cfg = GenConfig { scale: 0.0, ..GenConfig::new(1, 1, 2)? };
        t.ensure("scale 0 rejected", matches!(cfg.validated(), Err(Error::Parameter(_))));
        Ok(())
    }),
    ("gen.psd", |t| {
        let cfg = GenConfig::new(32, 1, 4)?;
        let h = random_psd(&cfg);
        let ev = hermitian_eigenvalues(&h)?;
        t.ensure("eigenvalues ≥ −1e-12·λmax", ev.min() >= -1e-12 * ev.max());
        t.ensure("deterministic", h == random_psd(&cfg));
        t.ensure("validator", validate_constraint(&[h], Constraint::PositiveEach, CONSTRAINT_TOL).is_ok());
        Ok(())
    }),
    ("gen.sum-zero", |t| {
        let tup = sum_zero_tuple(&GenConfig::new(33, 2, 3)?)?;
        let m = tup.matrices();
        t.close_matrix("A₂", &m[1], &-&m[0]);
        let centered = mean_center(&[sample(34, 3), sample(35, 3), sample(36, 3)])?;
        t.ensure("mean-centered", validate_constraint(&centered, Constraint::SumZero, CONSTRAINT_TOL).is_ok());
        Ok(())
    }),
    ("gen.cross-orthogonal", |t| {
        let cfg = GenConfig::new(37, 3, 4)?;
        let (a, b) = cross_orthogonal_pair(&cfg)?;
        t.ensure("validator", validate_cross_orthogonal(&a, &b, CONSTRAINT_TOL).is_ok());
        t.ensure("deterministic", cross_orthogonal_pair(&cfg)? == (a, b));
        let s = sum_zero_tuple(&cfg)?;
        t.ensure("b = a sum-zero", validate_cross_orthogonal(&s, &s, CONSTRAINT_TOL).is_ok());
        Ok(())
    }),
    ("gen.orthogonal-ranges", |t| {
        let cfg = GenConfig::new(38, 2, 2)?;
        let tup = orthogonal_ranges_tuple(&cfg)?;
        t.ensure("validator", validate_constraint(tup.matrices(), Constraint::OrthogonalRanges, CONSTRAINT_TOL).is_ok());
        t.ensure("deterministic", orthogonal_ranges_tuple(&cfg)? == tup);
        t.ensure("n=3 d=2 rejected", matches!(orthogonal_ranges_tuple(&GenConfig::new(38, 3, 2)?), Err(Error::Parameter(_))));
        Ok(())
    }),
    ("gen.positive-tuple", |t| {
        let cfg = GenConfig::new(39, 3, 3)?;
        let tup = positive_tuple(&cfg)?;
        t.ensure("validator", validate_constraint(tup.matrices(), Constraint::PositiveEach, CONSTRAINT_TOL).is_ok());
        t.ensure("deterministic", positive_tuple(&cfg)? == tup);
        t.ensure("distinct members", tup.matrices()[0] != tup.matrices()[1]);
        t.ensure("distinct seeds", stream_seed(39, MEMBERS, 0) != stream_seed(39, MEMBERS, 1));
        Ok(())
    }),
];

fn small_search(case: CaseId, q: f64, sign: Sign) -> SearchConfig {
    SearchConfig { restarts: 2, steps: 30, ..SearchConfig::new(case, p(q), sign, 3) }
}

const TIGHTNESS: &[Example] = &[
    ("ratio.zero", |t| {
        let r = ratio(case(CaseId::Cor1, Some(Sign::Minus)), &Instance::Tuple(zeros(3, Constraint::SumZero)?), p(4.0))?;
        t.close("ratio", r, 0.0);
        Ok(())
    }),
    ("ratio.p2-rejected", |t| {
        let r = ratio(case(CaseId::Cor1, Some(Sign::Minus)), &Instance::Tuple(diag_tuple()?), p(2.0));
        t.ensure("domain error", matches!(r, Err(Error::Domain(_))));
        Ok(())
    }),
    ("ratio.diagonal-tuple", |t| {
        let r = ratio(case(CaseId::Cor1, Some(Sign::Minus)), &Instance::Tuple(diag_tuple()?), p(4.0))?;
        t.close("ratio", r, 1.0 / 6.0);
        Ok(())
    }),
    ("search.contract", |t| {
        let cfg = small_search(CaseId::Cor1, 4.0, Sign::Minus);
        let a = optimize_ratio(&cfg)?;
        let b = optimize_ratio(&cfg)?;
        t.ensure("deterministic", a.trace == b.trace && a.best_ratio == b.best_ratio);
        t.ensure("bounded", a.best_ratio <= 1.0 + 1e-8);
        t.ensure("trace nondecreasing", a.trace.windows(2).all(|w| w[0].ratio <= w[1].ratio));
        Ok(())
    }),
    ("sweep.cardinality", |t| {
        let base = small_search(CaseId::Cor2, 1.0, Sign::Plus);
        let res = sweep(CaseId::Cor2, &[p(1.0), p(4.0)], &base, SweepMode::Search)?;
        t.ensure("two rows", res.len() == 2);
        let again = sweep(CaseId::Cor2, &[p(1.0), p(4.0)], &base, SweepMode::Search)?;
        let (mut x, mut y) = (Vec::new(), Vec::new());
        res.write_csv(&mut x).and(again.write_csv(&mut y)).map_err(|e| Error::Parameter(e.to_string()))?;
        t.ensure("deterministic", x == y);
        Ok(())
    }),
    ("sweep.verify-p2", |t| {
        let base = small_search(CaseId::Cor1, 1.0, Sign::Plus);
        let res = sweep(CaseId::Cor1, &[p(2.0)], &base, SweepMode::Verify { trials: 4 })?;
        let ok = matches!(&res.rows, SweepRows::Verify(r) if r[0].counts.equality_holds == 4);
        t.ensure("equality reports", ok);
        Ok(())
    }),
    ("orientation.p2-is-equality", |t| {
        let r = check_cor2(&diag_tuple()?, p(2.0), Sign::Plus, TOL)?;
        t.ensure("Equality orientation", r.orientation == Orientation::Equality);
        Ok(())
    }),
];

fn table() -> impl Iterator<Item = &'static Example> {
    LINALG.iter().chain(SCHATTEN).chain(INEQ).chain(GEN).chain(TIGHTNESS)
}

/// Number of examples in the table.
pub fn example_count() -> usize {
    table().count()
}

/// Runs the example table. `perturb = 0` for a normal run.
pub fn run_selftest(perturb: f64) -> SelftestReport {
    let outcomes = table()
        .map(|(id, f)| {
            let mut probe = Probe { perturb, failures: Vec::new() };
            if let Err(e) = f(&mut probe) {
                probe.failures.push(format!("error: {e}"));
            }
            ExampleOutcome { id, passed: probe.failures.is_empty(), detail: probe.failures.join("; ") }
        })
        .collect();
    SelftestReport { outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_passes() {
        let report = run_selftest(0.0);
        let failed: Vec<_> = report.failures().map(|o| format!("{}: {}", o.id, o.detail)).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = table().map(|(id, _)| *id).collect();
        ids.sort_unstable();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn perturbation_is_detected() {
        let report = run_selftest(1e-6);
        assert!(!report.passed());
        let named = report.failures().any(|o| o.id == "cor1.diagonal-tuple-p4");
        assert!(named);
    }
}
