//! Reduction of an arbitrary tensor to its canonical family.
//!
//! The pipeline finds a semisimple derivation with one-dimensional kernel,
//! rewrites the tensor in the adapted eigenbasis, branches on `ω`, and applies
//! the per-table scalings until a canonical table is reached. Every change of
//! basis is accumulated, so the result carries an explicit isomorphism onto
//! the emitted canonical tensor. The same routing code runs over the rationals
//! and, for irrational spectra, over `f64`.

use std::fmt;
use std::sync::OnceLock;

use crate::catalog::{emit_canonical, misprinted_systems, FamilyLabel, Table};
use crate::derivation::{
    check_constraints, derivation_algebra, numeric_spectrum, search_semisimple, SearchOptions, SearchOutcome,
    SpectrumTriple,
};
use crate::linalg::{unit_vec, Matrix3, Vector3};
use crate::scalar::{Rational, Scalar};
use crate::tensor::{conjugate, multiply, AdaptedConstants, StructureTensor, PAIRS};

/// Classifier settings.
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Continue in floating point when the adapted eigendata is irrational.
    pub allow_float: bool,
    /// Equality tolerance used only on the floating-point path.
    pub tol: f64,
    pub search: SearchOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { allow_float: false, tol: 1e-9, search: SearchOptions::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
        })
    }
}

/// A successful classification.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S = Rational> {
    pub label: FamilyLabel<S>,
    pub spectrum: SpectrumTriple<S>,
    /// Columns are the canonical basis vectors written in input coordinates.
    pub basis: Matrix3<S>,
    /// Inverse of `basis`: maps input coordinates to canonical coordinates, so
    /// that `is_isomorphism(input, canonical, witness)` holds.
    pub witness: Matrix3<S>,
    /// Largest entry of `conjugate(input, basis) − canonical`; zero in exact mode.
    pub residual: f64,
}

impl<S: Scalar> Classification<S> {
    pub fn omega(&self) -> &S {
        &self.spectrum.omega
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnclassifiedReason {
    /// The candidate sweep found no semisimple derivation with one-dimensional kernel.
    NoQualifyingDerivation,
    /// Every qualifying derivation found has non-real nonzero eigenvalues.
    NonRealSpectrum,
    /// A qualifying derivation exists but the reduced table is none of the 35 families.
    OutsideCatalog,
}

impl fmt::Display for UnclassifiedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnclassifiedReason::NoQualifyingDerivation => "no semisimple derivation with one-dimensional kernel found",
            UnclassifiedReason::NonRealSpectrum => "qualifying derivations have non-real spectrum",
            UnclassifiedReason::OutsideCatalog => "reduced table lies outside the 35 families",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unclassified {
    pub reason: UnclassifiedReason,
    pub detail: String,
    /// `ω` of the derivation used, when one was found.
    pub omega: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Exact(Classification<Rational>),
    Numeric(Classification<f64>),
    NullAlgebra,
    NotClassifiable(Unclassified),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoteKind {
    /// The published canonical system of the family differs from its table.
    PublishedSystemMisprint,
    /// A published routing remark names a different family than its table yields.
    ProseRouteConflict,
    /// The canonical representative lies outside the published parameter range.
    OutsidePublishedRange,
}

/// A discrepancy between the published classification and what the tables give.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Note {
    pub kind: NoteKind,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    /// Human-readable routing steps.
    pub route: Vec<String>,
    pub notes: Vec<Note>,
}

impl ClassificationResult {
    pub fn mode(&self) -> Mode {
        match self.verdict {
            Verdict::Numeric(_) => Mode::Numeric,
            _ => Mode::Exact,
        }
    }

    pub fn exact_label(&self) -> Option<&FamilyLabel> {
        match &self.verdict {
            Verdict::Exact(c) => Some(&c.label),
            _ => None,
        }
    }

    /// The label in floating point regardless of mode.
    pub fn label_f64(&self) -> Option<FamilyLabel<f64>> {
        match &self.verdict {
            Verdict::Exact(c) => Some(c.label.to_f64()),
            Verdict::Numeric(c) => Some(c.label.clone()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("adapted eigendata is irrational; rerun in float mode")]
    NotRational,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("matrix is singular")]
pub struct SingularMatrix;

/// `s(u·₁v) = s(u)·₂s(v)` on all basis pairs, within `tol`.
pub fn is_isomorphism_within<S: Scalar>(
    t1: &StructureTensor<S>,
    t2: &StructureTensor<S>,
    s: &Matrix3<S>,
    tol: f64,
) -> Result<bool, SingularMatrix> {
    if s.det().is_negligible(tol) {
        return Err(SingularMatrix);
    }
    let cols = [s.column(0), s.column(1), s.column(2)];
    Ok(PAIRS.iter().all(|&(i, j)| {
        let lhs = s.apply(t1.product(i, j));
        let rhs = multiply(t2, &cols[i], &cols[j]);
        lhs.iter().zip(rhs.iter()).all(|(a, b)| a.approx_eq(b, tol))
    }))
}

/// Exact isomorphism check of `s` from `t1` to `t2`.
pub fn is_isomorphism(t1: &StructureTensor, t2: &StructureTensor, s: &Matrix3<Rational>) -> Result<bool, SingularMatrix> {
    is_isomorphism_within(t1, t2, s, 0.0)
}

pub fn is_automorphism(t: &StructureTensor, s: &Matrix3<Rational>) -> Result<bool, SingularMatrix> {
    is_isomorphism(t, t, s)
}

/// Scaling of an `ω = −1` tensor with `j, n ≠ 0` onto table T1: returns the
/// table parameters and the diagonal basis change.
pub fn table_t1_normalize<S: Scalar>(c: &AdaptedConstants<S>) -> (S, S, Matrix3<S>) {
    let inv_j = S::one() / c.j.clone();
    let basis = Matrix3::diagonal(S::one(), inv_j.clone() / c.n.clone(), inv_j.clone());
    (c.p.clone() * inv_j.clone(), c.t.clone() * inv_j, basis)
}

/// Position of an `ω = 1` tensor in the published case analysis of the matrix
/// `P = [[α, γ], [β, δ]]` of `L_{e3}` on the two-dimensional eigenspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case2Subcase {
    /// `det P = 0`, all entries nonzero, `α² + βγ ≠ 0`.
    I1Diagonalizable,
    /// `det P = 0`, all entries nonzero, `α² + βγ = 0`.
    I1Nilpotent,
    /// `det P = 0` with some zero entry; the number is the position in the
    /// published eight-case list.
    I2(u8),
    /// `det P ≠ 0`, complex eigenvalues.
    IIComplex,
    /// `det P ≠ 0`, real eigenvalues.
    IIReal,
}

/// Classifies `(α, β, γ, δ) = (p, q, s, t)` into the published subcases.
pub fn case2_branch<S: Scalar>(c: &AdaptedConstants<S>, tol: f64) -> Case2Subcase {
    let (al, be, ga, de) = (&c.p, &c.q, &c.s, &c.t);
    let nz = |x: &S| !x.is_negligible(tol);
    let det = al.clone() * de.clone() - be.clone() * ga.clone();
    if nz(&det) {
        let tr = al.clone() + de.clone();
        let disc = tr.clone() * tr - S::from_i64(4) * det;
        return if disc < S::zero() && nz(&disc) { Case2Subcase::IIComplex } else { Case2Subcase::IIReal };
    }
    if nz(al) && nz(be) && nz(ga) && nz(de) {
        let q = al.clone() * al.clone() + be.clone() * ga.clone();
        return if nz(&q) { Case2Subcase::I1Diagonalizable } else { Case2Subcase::I1Nilpotent };
    }
    let pattern = (nz(al), nz(be), nz(ga), nz(de));
    let case = match pattern {
        (true, false, false, false) => 1,
        (true, false, true, false) => 2,
        (false, true, false, false) => 3,
        (true, true, false, false) => 4,
        (false, false, false, false) => 5,
        (false, false, false, true) => 6,
        (false, false, true, false) => 7,
        (false, false, true, true) => 8,
        // remaining patterns with det = 0 force two opposite nonzero products
        _ => 0,
    };
    Case2Subcase::I2(case)
}

/// Family named by the published reduction list for an `I₂` case.
fn published_i2_family(case: u8) -> Option<u8> {
    match case {
        1 | 2 | 4 | 6 | 7 | 8 => Some(11),
        3 => Some(22),
        5 => Some(8),
        _ => None,
    }
}

/// The family of a T2-form table.
pub fn t2_family_lookup<S: Scalar>(alpha: S, beta: S, tol: f64) -> FamilyLabel<S> {
    match reduce(Table::T2, alpha, beta, tol) {
        Ok((label, _)) => label,
        Err(_) => unreachable!("every T2 table is in the catalog"),
    }
}

/// The family of a T3, T4, T6 or T7 table, or `None` outside the catalog.
pub fn t3_t4_t6_t7_lookup<S: Scalar>(table: Table, alpha: S, beta: S, tol: f64) -> Option<FamilyLabel<S>> {
    reduce(table, alpha, beta, tol).ok().map(|(l, _)| l)
}

#[derive(Debug)]
enum RouteError {
    NotRational,
    Outside(String),
    Numerical(String),
}

fn is_value<S: Scalar>(x: &S, n: i64, d: i64, tol: f64) -> bool {
    x.approx_eq(&S::ratio(n, d), tol)
}

/// Maps table parameters to a family label and the basis change (columns in
/// table coordinates) that carries the table onto the canonical one.
fn reduce<S: Scalar>(table: Table, alpha: S, beta: S, tol: f64) -> Result<(FamilyLabel<S>, Matrix3<S>), RouteError> {
    let zero = |x: &S| x.is_negligible(tol);
    let half = |x: &S| is_value(x, 1, 2, tol);
    let id = Matrix3::identity;
    let swap = || Matrix3::permutation([1, 0, 2]);
    let one = S::one;
    let lab = |i: u8, p: Vec<S>| FamilyLabel::new(i, p);
    let out = match table {
        Table::T1 | Table::T2 => {
            let base: u8 = if table == Table::T1 { 1 } else { 8 };
            if zero(&alpha) && zero(&beta) {
                (lab(base, vec![]), id())
            } else if zero(&alpha) && half(&beta) {
                (lab(base + 1, vec![]), id())
            } else if half(&alpha) && zero(&beta) {
                (lab(base + 1, vec![]), swap())
            } else if half(&alpha) && half(&beta) {
                (lab(base + 2, vec![]), id())
            } else if zero(&alpha) || zero(&beta) {
                // T1 keeps the parameter first, T2 keeps it second
                let (x, in_first) = if zero(&beta) { (alpha, true) } else { (beta, false) };
                let keep_first = table == Table::T1;
                (lab(base + 3, vec![x]), if in_first == keep_first { id() } else { swap() })
            } else if half(&alpha) || half(&beta) {
                let (x, in_first) = if half(&beta) { (alpha, true) } else { (beta, false) };
                let keep_first = table == Table::T1;
                (lab(base + 4, vec![x]), if in_first == keep_first { id() } else { swap() })
            } else if alpha.approx_eq(&beta, tol) {
                (lab(base + 5, vec![alpha]), id())
            } else if alpha < beta {
                (lab(base + 6, vec![alpha, beta]), id())
            } else {
                (lab(base + 6, vec![beta, alpha]), swap())
            }
        }
        Table::T3 => {
            let scale = |x: &S| Matrix3::diagonal(one() / x.clone(), one(), one() / x.clone());
            if zero(&alpha) && zero(&beta) {
                (lab(15, vec![]), Matrix3::permutation([2, 1, 0]))
            } else if zero(&beta) {
                (lab(16, vec![]), &swap() * &scale(&alpha))
            } else if zero(&alpha) {
                (lab(16, vec![]), scale(&beta))
            } else if alpha.approx_eq(&beta, tol) {
                (lab(17, vec![]), scale(&alpha))
            } else {
                let r = beta.clone() / alpha.clone();
                if r.abs_value() < one() {
                    (lab(18, vec![alpha / beta.clone()]), &swap() * &scale(&beta))
                } else {
                    (lab(18, vec![r]), scale(&alpha))
                }
            }
        }
        Table::T4 => {
            let scale = |x: &S| Matrix3::diagonal(one(), one(), one() / x.clone());
            if zero(&alpha) && zero(&beta) {
                return Err(RouteError::Numerical("T4 table with zero parameters is the null algebra".into()));
            } else if zero(&beta) {
                (lab(19, vec![]), &swap() * &scale(&alpha))
            } else if zero(&alpha) {
                (lab(19, vec![]), scale(&beta))
            } else if alpha.approx_eq(&beta, tol) {
                (lab(20, vec![]), scale(&alpha))
            } else {
                let r = beta.clone() / alpha.clone();
                if r.abs_value() < one() {
                    (lab(21, vec![alpha / beta.clone()]), &swap() * &scale(&beta))
                } else {
                    (lab(21, vec![r]), scale(&alpha))
                }
            }
        }
        Table::T6 => {
            if zero(&alpha) {
                if zero(&beta) {
                    (lab(25, vec![]), id())
                } else if half(&beta) {
                    (lab(26, vec![]), id())
                } else {
                    (lab(24, vec![beta]), id())
                }
            } else if half(&alpha) {
                if half(&beta) {
                    (lab(30, vec![]), id())
                } else if zero(&beta) {
                    return Err(RouteError::Outside(
                        "table T6 with parameters (1/2, 0) is not among the 35 families".into(),
                    ));
                } else {
                    (lab(31, vec![beta]), id())
                }
            } else if half(&beta) {
                (lab(29, vec![alpha]), id())
            } else if zero(&beta) {
                return Err(RouteError::Outside(format!(
                    "table T6 with parameters ({}, 0) is not among the 35 families",
                    alpha.to_f64()
                )));
            } else if alpha.approx_eq(&beta, tol) {
                (lab(28, vec![alpha]), id())
            } else {
                (lab(27, vec![alpha, beta]), id())
            }
        }
        Table::T7 => {
            if zero(&alpha) && zero(&beta) {
                (lab(32, vec![]), id())
            } else if zero(&alpha) {
                return Err(RouteError::Outside(
                    "table T7 with first parameter 0 and second nonzero is not among the 35 families".into(),
                ));
            } else {
                let c = Matrix3::diagonal(one(), one(), one() / alpha.clone());
                let r = beta / alpha;
                if zero(&r) {
                    (lab(35, vec![]), c)
                } else if is_value(&r, 1, 1, tol) {
                    (lab(34, vec![]), c)
                } else {
                    (lab(33, vec![r]), c)
                }
            }
        }
        Table::T5 | Table::TI12 => {
            return Err(RouteError::Numerical(format!("table {table} is not reduced by parameter lookup")));
        }
    };
    Ok(out)
}

struct Router<S: Scalar> {
    cur: StructureTensor<S>,
    acc: Matrix3<S>,
    tol: f64,
    route: Vec<String>,
    notes: Vec<Note>,
}

impl<S: Scalar> Router<S> {
    fn change(&mut self, c: Matrix3<S>) -> Result<(), RouteError> {
        self.cur = conjugate(&self.cur, &c, self.tol)
            .ok_or_else(|| RouteError::Numerical("singular change of basis".into()))?;
        self.acc = &self.acc * &c;
        Ok(())
    }

    fn nz(&self, x: &S) -> bool {
        !x.is_negligible(self.tol)
    }

    fn step(&mut self, s: impl Into<String>) {
        self.route.push(s.into());
    }

    fn note(&mut self, kind: NoteKind, message: String) {
        self.notes.push(Note { kind, message });
    }

    /// Reads the table parameters off the current tensor and reduces them.
    fn finish(&mut self, table: Table) -> Result<FamilyLabel<S>, RouteError> {
        let alpha = self.cur.coeff(0, 2, 0).clone();
        let beta = self.cur.coeff(1, 2, 1).clone();
        self.step(format!("table {table} with parameters ({}, {})", show(&alpha), show(&beta)));
        let (label, c) = reduce(table, alpha, beta, self.tol)?;
        self.change(c)?;
        Ok(label)
    }
}

fn show<S: Scalar>(x: &S) -> String {
    x.render()
}

fn embed<S: Scalar>(x: S, y: S) -> Vector3<S> {
    [x, y, S::zero()]
}

/// A nonzero kernel vector of a singular nonzero 2×2 matrix `[[m11, m12], [m21, m22]]`.
fn kernel2<S: Scalar>(m11: S, m12: S, m21: S, m22: S) -> Vector3<S> {
    let weight = |a: &S, b: &S| a.to_f64().abs() + b.to_f64().abs();
    if weight(&m11, &m12) >= weight(&m21, &m22) {
        embed(-m12, m11)
    } else {
        embed(-m22, m21)
    }
}

fn route<S: Scalar>(
    t: &StructureTensor<S>,
    spectrum: &SpectrumTriple<S>,
    tol: f64,
) -> (Result<(FamilyLabel<S>, Matrix3<S>), RouteError>, Vec<String>, Vec<Note>) {
    let mut r = Router {
        cur: StructureTensor::zero(),
        acc: Matrix3::identity(),
        tol,
        route: Vec::new(),
        notes: Vec::new(),
    };
    let res = route_inner(&mut r, t, spectrum);
    let acc = r.acc.clone();
    (res.map(|l| (l, acc)), r.route, r.notes)
}

fn route_inner<S: Scalar>(
    r: &mut Router<S>,
    t: &StructureTensor<S>,
    spectrum: &SpectrumTriple<S>,
) -> Result<FamilyLabel<S>, RouteError> {
    let tol = r.tol;
    r.cur = t.clone();
    r.change(spectrum.basis.clone())?;
    let c = AdaptedConstants::from_tensor(&r.cur);
    let omega = &spectrum.omega;
    let report = check_constraints(&c, omega, tol);
    if !report.passed {
        return Err(RouteError::Numerical(format!(
            "adapted constants violate {}",
            report.violated.join(", ")
        )));
    }
    r.step(format!("semisimple derivation with spectrum (1, {}, 0)", show(omega)));
    let one = S::one;
    if is_value(omega, -1, 1, tol) {
        match (r.nz(&c.j), r.nz(&c.n)) {
            (true, true) => {
                r.step("omega = -1, j and n nonzero");
                let (_, _, basis) = table_t1_normalize(&c);
                r.change(basis)?;
                r.finish(Table::T1)
            }
            (true, false) => {
                r.step("omega = -1, j nonzero, n = 0");
                r.change(Matrix3::diagonal(one(), one(), one() / c.j.clone()))?;
                r.finish(Table::T2)
            }
            (false, true) => {
                r.step("omega = -1, j = 0, n nonzero");
                r.change(Matrix3::diagonal(one(), one(), c.n.clone()))?;
                r.finish(Table::T3)
            }
            (false, false) => {
                r.step("omega = -1, j = n = 0");
                r.finish(Table::T4)
            }
        }
    } else if is_value(omega, 1, 1, tol) {
        route_omega_one(r, &c)
    } else if is_value(omega, 2, 1, tol) {
        let label = match (r.nz(&c.b), r.nz(&c.j)) {
            (true, true) => {
                r.step("omega = 2, b and j nonzero");
                let z = S::zero;
                r.change(Matrix3::from_columns([
                    [z(), c.b.clone(), z()],
                    [one(), z(), z()],
                    [z(), z(), one() / c.j.clone()],
                ]))?;
                r.finish(Table::T6)?
            }
            (false, true) => {
                r.step("omega = 2, b = 0, j nonzero");
                r.change(Matrix3::diagonal(one(), one(), one() / c.j.clone()))?;
                let label = r.finish(Table::T2)?;
                if label.index != 14 {
                    r.note(
                        NoteKind::ProseRouteConflict,
                        format!(
                            "the published remark for spectrum (1, 2, 0) with e1^2 = 0 names A14; the T2 table parameters give {}",
                            label.name()
                        ),
                    );
                }
                label
            }
            (true, false) => {
                r.step("omega = 2, b nonzero, j = 0");
                r.change(Matrix3::diagonal(one(), c.b.clone(), one()))?;
                r.finish(Table::T7)?
            }
            (false, false) => {
                r.step("omega = 2, b = j = 0");
                let label = r.finish(Table::T4)?;
                r.note(
                    NoteKind::ProseRouteConflict,
                    format!(
                        "the published remark for spectrum (1, 2, 0) with b = j = 0 names A22; the table is of T4 form and gives {}",
                        label.name()
                    ),
                );
                label
            }
        };
        Ok(label)
    } else if r.nz(&c.j) {
        r.step("generic omega, j nonzero");
        r.change(Matrix3::diagonal(one(), one(), one() / c.j.clone()))?;
        let label = r.finish(Table::T2)?;
        if label.index != 14 {
            r.note(
                NoteKind::ProseRouteConflict,
                format!(
                    "the published remark for generic omega names A14; the T2 table parameters give {}",
                    label.name()
                ),
            );
        }
        Ok(label)
    } else {
        r.step("generic omega, j = 0");
        r.finish(Table::T4)
    }
}

fn route_omega_one<S: Scalar>(r: &mut Router<S>, c: &AdaptedConstants<S>) -> Result<FamilyLabel<S>, RouteError> {
    let one = S::one;
    let zero = S::zero;
    let has_idempotent = r.nz(&c.j);
    if has_idempotent {
        r.step("omega = 1, j nonzero");
        r.change(Matrix3::diagonal(one(), one(), one() / c.j.clone()))?;
    } else {
        r.step("omega = 1, j = 0");
    }
    let cur = AdaptedConstants::from_tensor(&r.cur);
    let (p, q, s, t) = (cur.p.clone(), cur.q.clone(), cur.s.clone(), cur.t.clone());
    let subcase = case2_branch(&cur, r.tol);
    if has_idempotent {
        r.step(format!("subcase {subcase:?}"));
    }
    let tr = p.clone() + t.clone();
    let det = p.clone() * t.clone() - q.clone() * s.clone();
    let disc = tr.clone() * tr.clone() - S::from_i64(4) * det;
    let two = S::from_i64(2);
    let tail = if has_idempotent { Table::T2 } else { Table::T4 };
    let label = if disc < zero() && r.nz(&disc) {
        if !has_idempotent {
            return Err(RouteError::Outside(
                "omega = 1 with e3^2 = 0 and non-real eigenvalues of L_e3 is not among the 35 families".into(),
            ));
        }
        let a = tr / two.clone();
        let b = (-disc)
            .sqrt_checked()
            .ok_or(RouteError::NotRational)?
            / two;
        let f1 = unit_vec::<S>(0);
        let f2 = embed((a.clone() - p) / b.clone(), -q / b.clone());
        r.change(Matrix3::from_columns([f1, f2, unit_vec(2)]))?;
        r.step(format!("table T5 with parameters ({}, {})", show(&a), show(&b)));
        FamilyLabel::new(23, vec![a, b])
    } else if r.nz(&disc) {
        let root = disc
            .sqrt_checked()
            .ok_or(RouteError::NotRational)?;
        let l1 = (tr.clone() - root.clone()) / two.clone();
        let l2 = (tr + root) / two;
        let v1 = kernel2(p.clone() - l1.clone(), s.clone(), q.clone(), t.clone() - l1);
        let v2 = kernel2(p - l2.clone(), s, q, t - l2);
        r.change(Matrix3::from_columns([v1, v2, unit_vec(2)]))?;
        r.finish(tail)?
    } else {
        let lambda = tr / two;
        let n = Matrix3::from_rows([
            [p.clone() - lambda.clone(), s.clone(), zero()],
            [q.clone(), t - lambda.clone(), zero()],
            [zero(), zero(), zero()],
        ]);
        if n.is_negligible(r.tol) {
            r.finish(tail)?
        } else if lambda.is_negligible(r.tol) {
            let f2 = if n.apply(&unit_vec(0)).iter().any(|x| r.nz(x)) { unit_vec(0) } else { unit_vec(1) };
            let f1 = n.apply(&f2);
            r.change(Matrix3::from_columns([f1, f2, unit_vec(2)]))?;
            let index = if has_idempotent { 22 } else { 15 };
            r.step(format!("nilpotent L_e3 on the eigenspace: A{index}"));
            FamilyLabel::new(index, vec![])
        } else {
            return Err(RouteError::Outside(
                "omega = 1 with L_e3 a nontrivial Jordan block of nonzero eigenvalue is not among the 35 families"
                    .into(),
            ));
        }
    };
    if has_idempotent {
        match subcase {
            Case2Subcase::I1Diagonalizable if label.table == Table::T2 => r.note(
                NoteKind::ProseRouteConflict,
                format!(
                    "the published subcase I1 remark identifies this algebra with a T1 member of type A4; its table is of T2 form and gives {}",
                    label.name()
                ),
            ),
            Case2Subcase::I2(k) => {
                if let Some(named) = published_i2_family(k) {
                    if named != label.index {
                        r.note(
                            NoteKind::ProseRouteConflict,
                            format!(
                                "the published reduction list assigns subcase I2 case {k} to A{named}; the table gives {}",
                                label.name()
                            ),
                        );
                    }
                }
            }
            _ => {}
        }
    }
    Ok(label)
}

fn misprinted() -> &'static [u8] {
    static CELL: OnceLock<Vec<u8>> = OnceLock::new();
    CELL.get_or_init(misprinted_systems)
}

fn label_notes<S: Scalar>(label: &FamilyLabel<S>) -> Vec<Note> {
    let mut notes = Vec::new();
    if misprinted().contains(&label.index) {
        notes.push(Note {
            kind: NoteKind::PublishedSystemMisprint,
            message: format!(
                "the published canonical system for {} differs from the field of its multiplication table; the table is used",
                label.name()
            ),
        });
    }
    if label.index == 18 && label.params[0] < S::zero() {
        notes.push(Note {
            kind: NoteKind::OutsidePublishedRange,
            message: format!(
                "A18 parameter {} is a valid canonical representative but lies outside the published range beta > 1",
                show(&label.params[0])
            ),
        });
    }
    notes
}

enum Attempt<S: Scalar> {
    Done(Classification<S>, Vec<String>, Vec<Note>),
    Outside(String, Vec<String>, Vec<Note>),
    NotRational,
}

fn attempt<S: Scalar>(t: &StructureTensor<S>, spectrum: &SpectrumTriple<S>, tol: f64) -> Result<Attempt<S>, ClassifyError> {
    let (res, steps, mut notes) = route(t, spectrum, tol);
    let (label, basis) = match res {
        Ok(x) => x,
        Err(RouteError::NotRational) => return Ok(Attempt::NotRational),
        Err(RouteError::Outside(msg)) => return Ok(Attempt::Outside(msg, steps, notes)),
        Err(RouteError::Numerical(msg)) => return Err(ClassifyError::Numerical(msg)),
    };
    let canonical = emit_canonical(&label, tol).map_err(|e| ClassifyError::Numerical(e.to_string()))?;
    let transported = conjugate(t, &basis, tol).ok_or_else(|| ClassifyError::Numerical("singular witness".into()))?;
    let residual = (0..6)
        .flat_map(|p| (0..3).map(move |k| (p, k)))
        .map(|(p, k)| {
            let (i, j) = PAIRS[p];
            (transported.coeff(i, j, k).clone() - canonical.coeff(i, j, k).clone()).to_f64().abs()
        })
        .fold(0.0, f64::max);
    if !transported.approx_eq(&canonical, tol) {
        return Err(ClassifyError::Numerical(format!(
            "reduced tensor misses the canonical {} table by {residual:e}",
            label.name()
        )));
    }
    let witness = basis.inverse(tol).ok_or_else(|| ClassifyError::Numerical("singular witness".into()))?;
    notes.extend(label_notes(&label));
    Ok(Attempt::Done(
        Classification { label, spectrum: spectrum.clone(), basis, witness, residual },
        steps,
        notes,
    ))
}

/// Classifies a tensor into one of the 35 canonical families.
///
/// Returns an error when the eigendata needed is irrational and float mode is
/// off, or when the floating-point path fails its own consistency checks.
pub fn classify(t: &StructureTensor, opts: &ClassifyOptions) -> Result<ClassificationResult, ClassifyError> {
    if t.is_zero(0.0) {
        return Ok(ClassificationResult {
            verdict: Verdict::NullAlgebra,
            route: vec!["zero tensor: null algebra".into()],
            notes: vec![],
        });
    }
    let der = derivation_algebra(t);
    let mut route_prefix = vec![format!("dim Der A = {}", der.dimension())];
    let float_route = |spectrum: SpectrumTriple<f64>, mut prefix: Vec<String>| -> Result<ClassificationResult, ClassifyError> {
        prefix.push("float mode".into());
        match attempt(&t.to_f64(), &spectrum, opts.tol)? {
            Attempt::Done(c, steps, notes) => {
                prefix.extend(steps);
                Ok(ClassificationResult { verdict: Verdict::Numeric(c), route: prefix, notes })
            }
            Attempt::Outside(msg, steps, notes) => {
                prefix.extend(steps);
                Ok(outside(msg, Some(spectrum.omega), prefix, notes))
            }
            Attempt::NotRational => Err(ClassifyError::Numerical("float route reported irrational data".into())),
        }
    };
    match search_semisimple(t, &der, &opts.search) {
        SearchOutcome::Rational(spectrum) => match attempt(t, &spectrum, 0.0)? {
            Attempt::Done(c, steps, notes) => {
                route_prefix.extend(steps);
                Ok(ClassificationResult { verdict: Verdict::Exact(c), route: route_prefix, notes })
            }
            Attempt::Outside(msg, steps, notes) => {
                route_prefix.extend(steps);
                Ok(outside(msg, Some(spectrum.omega.to_f64()), route_prefix, notes))
            }
            Attempt::NotRational if opts.allow_float => float_route(spectrum.to_f64(), route_prefix),
            Attempt::NotRational => Err(ClassifyError::NotRational),
        },
        SearchOutcome::Irrational(d) if opts.allow_float => {
            let spectrum = numeric_spectrum(&d, opts.tol)
                .ok_or_else(|| ClassifyError::Numerical("float eigendata of the derivation failed".into()))?;
            float_route(spectrum, route_prefix)
        }
        SearchOutcome::Irrational(_) => Err(ClassifyError::NotRational),
        SearchOutcome::NonReal(_) => Ok(ClassificationResult {
            verdict: Verdict::NotClassifiable(Unclassified {
                reason: UnclassifiedReason::NonRealSpectrum,
                detail: "every qualifying derivation found has non-real nonzero eigenvalues".into(),
                omega: None,
            }),
            route: route_prefix,
            notes: vec![],
        }),
        SearchOutcome::NotFound => Ok(ClassificationResult {
            verdict: Verdict::NotClassifiable(Unclassified {
                reason: UnclassifiedReason::NoQualifyingDerivation,
                detail: "no semisimple derivation with one-dimensional kernel in the candidate sweep".into(),
                omega: None,
            }),
            route: route_prefix,
            notes: vec![],
        }),
    }
}

fn outside(detail: String, omega: Option<f64>, route: Vec<String>, notes: Vec<Note>) -> ClassificationResult {
    ClassificationResult {
        verdict: Verdict::NotClassifiable(Unclassified { reason: UnclassifiedReason::OutsideCatalog, detail, omega }),
        route,
        notes,
    }
}
