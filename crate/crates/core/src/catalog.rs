//! The 35 canonical families: multiplication tables, parameter ranges,
//! declared invariants and the published right-hand sides of the associated
//! quadratic systems.

use std::fmt;

use crate::linalg::{unit_vec, Vector3};
use crate::scalar::{rat, Rational, Scalar};
use crate::tensor::{QuadraticField, StructureTensor};

/// Multiplication-table shapes that canonical families are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Table {
    /// `e1e2 = e3, e3² = e3, e1e3 = αe1, e2e3 = βe2`
    T1,
    /// `e3² = e3, e1e3 = αe1, e2e3 = βe2`
    T2,
    /// `e1e2 = e3, e1e3 = αe1, e2e3 = βe2`
    T3,
    /// `e1e3 = αe1, e2e3 = βe2`
    T4,
    /// `e3² = e3, e1e3 = ae1 − be2, e2e3 = be1 + ae2`
    T5,
    /// `e2² = e1, e3² = e3, e1e3 = αe1, e2e3 = βe2`
    T6,
    /// `e1² = e2, e1e3 = αe1, e2e3 = βe2`
    T7,
    /// `e3² = e3, e2e3 = e1`
    TI12,
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Table::T1 => "T1",
            Table::T2 => "T2",
            Table::T3 => "T3",
            Table::T4 => "T4",
            Table::T5 => "T5",
            Table::T6 => "T6",
            Table::T7 => "T7",
            Table::TI12 => "TI12",
        };
        f.write_str(s)
    }
}

/// A family index with its canonical parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyLabel<S = Rational> {
    pub index: u8,
    pub table: Table,
    pub params: Vec<S>,
}

impl<S: Scalar> FamilyLabel<S> {
    /// Builds a label, filling in the table from the catalog.
    ///
    /// # Panics
    /// If `index` is not in `1..=35`.
    pub fn new(index: u8, params: Vec<S>) -> Self {
        FamilyLabel { index, table: family(index).expect("family index in 1..=35").table, params }
    }

    pub fn name(&self) -> String {
        format!("A{}", self.index)
    }

    pub fn to_f64(&self) -> FamilyLabel<f64> {
        FamilyLabel { index: self.index, table: self.table, params: self.params.iter().map(|p| p.to_f64()).collect() }
    }

    /// Same index and parameters within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.index == other.index
            && self.params.len() == other.params.len()
            && self.params.iter().zip(&other.params).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Shape of the idempotent set as listed for each family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocusType {
    Empty,
    Point,
    Line,
    TwoLines,
    Curve,
    PointAndCurve,
    Plane,
}

/// What a grid Newton search can observe about an idempotent set: the number
/// of isolated idempotents and whether points where the set is locally one- or
/// two-dimensional were met.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocusSignature {
    pub isolated: usize,
    pub curve_points: bool,
    pub surface_points: bool,
}

impl LocusType {
    pub fn signature(self) -> LocusSignature {
        let sig = |isolated, curve_points, surface_points| LocusSignature { isolated, curve_points, surface_points };
        match self {
            LocusType::Empty => sig(0, false, false),
            LocusType::Point => sig(1, false, false),
            LocusType::Line | LocusType::Curve => sig(0, true, false),
            // near the crossing point the set spans a plane
            LocusType::TwoLines => sig(0, true, true),
            LocusType::PointAndCurve => sig(1, true, false),
            LocusType::Plane => sig(0, false, true),
        }
    }
}

impl LocusSignature {
    pub fn from_local_dims(dims: impl IntoIterator<Item = usize>) -> Self {
        let mut out = LocusSignature { isolated: 0, curve_points: false, surface_points: false };
        for d in dims {
            match d {
                0 => out.isolated += 1,
                1 => out.curve_points = true,
                _ => out.surface_points = true,
            }
        }
        out
    }
}

/// Static description of one canonical family.
#[derive(Clone, Debug)]
pub struct FamilyInfo {
    pub index: u8,
    pub table: Table,
    pub param_names: &'static [&'static str],
    /// Human-readable parameter range.
    pub range: &'static str,
    pub dim_der: usize,
    pub dim_ann: usize,
    pub dim_square: usize,
    pub locus: LocusType,
    /// Representative ideals, each given by integer spanning vectors.
    pub ideals: &'static [&'static [[i64; 3]]],
    /// In-range parameter samples as `(numerator, denominator)` pairs.
    pub samples: &'static [&'static [(i64, i64)]],
}

impl FamilyInfo {
    pub fn name(&self) -> String {
        format!("A{}", self.index)
    }

    pub fn sample_labels(&self) -> Vec<FamilyLabel> {
        if self.param_names.is_empty() {
            return vec![FamilyLabel::new(self.index, vec![])];
        }
        self.samples
            .iter()
            .map(|s| FamilyLabel::new(self.index, s.iter().map(|&(n, d)| rat(n, d)).collect()))
            .collect()
    }

    pub fn ideal_bases(&self) -> Vec<Vec<Vector3<Rational>>> {
        self.ideals
            .iter()
            .map(|basis| basis.iter().map(|v| v.map(Rational::from_i64)).collect())
            .collect()
    }
}

const E1: [i64; 3] = [1, 0, 0];
const E2: [i64; 3] = [0, 1, 0];
const E3: [i64; 3] = [0, 0, 1];

const GENERIC: &[&[(i64, i64)]] = &[&[(-1, 1)], &[(1, 3)], &[(1, 1)], &[(3, 2)], &[(3, 1)]];
const ORDERED_PAIRS: &[&[(i64, i64)]] =
    &[&[(-1, 1), (2, 1)], &[(1, 3), (1, 1)], &[(1, 1), (3, 2)], &[(-2, 1), (-1, 3)], &[(1, 4), (3, 1)]];
const DISTINCT_PAIRS: &[&[(i64, i64)]] =
    &[&[(1, 1), (2, 1)], &[(2, 1), (1, 1)], &[(-1, 1), (3, 1)], &[(1, 3), (-2, 1)], &[(3, 2), (1, 4)]];
const T3_RATIOS: &[&[(i64, i64)]] = &[&[(2, 1)], &[(3, 2)], &[(5, 1)], &[(-1, 1)], &[(-3, 1)]];
const T4_RATIOS: &[&[(i64, i64)]] = &[&[(2, 1)], &[(-2, 1)], &[(3, 2)], &[(-1, 1)], &[(7, 3)]];
const ROTATIONS: &[&[(i64, i64)]] = &[&[(1, 1), (2, 1)], &[(0, 1), (1, 1)], &[(-1, 1), (1, 2)], &[(1, 2), (3, 1)], &[(2, 1), (1, 1)]];
const T7_RATIOS: &[&[(i64, i64)]] = &[&[(2, 1)], &[(1, 2)], &[(-1, 1)], &[(3, 1)], &[(-1, 3)]];
const NONE: &[&[(i64, i64)]] = &[];

macro_rules! fam {
    ($idx:expr, $table:ident, [$($p:expr),*], $range:expr, ($der:expr, $ann:expr, $sq:expr), $locus:ident, [$($ideal:expr),*], $samples:expr) => {
        FamilyInfo {
            index: $idx,
            table: Table::$table,
            param_names: &[$($p),*],
            range: $range,
            dim_der: $der,
            dim_ann: $ann,
            dim_square: $sq,
            locus: LocusType::$locus,
            ideals: &[$($ideal),*],
            samples: $samples,
        }
    };
}

static CATALOG: [FamilyInfo; 35] = [
    fam!(1, T1, [], "", (1, 0, 1), Point, [&[E3], &[E3, E1], &[E3, E2], &[E3, [1, 1, 0]]], NONE),
    fam!(2, T1, [], "", (1, 0, 2), Line, [&[E2, E3]], NONE),
    fam!(3, T1, [], "", (1, 0, 3), TwoLines, [], NONE),
    fam!(4, T1, ["alpha"], "alpha not in {0, 1/2}", (1, 0, 2), Point, [&[E1, E3]], GENERIC),
    fam!(5, T1, ["alpha"], "alpha not in {0, 1/2}", (1, 0, 3), Line, [], GENERIC),
    fam!(6, T1, ["alpha"], "alpha not in {0, 1/2}", (1, 0, 3), PointAndCurve, [], GENERIC),
    fam!(7, T1, ["alpha", "beta"], "alpha < beta, both not in {0, 1/2}", (1, 0, 3), Point, [], ORDERED_PAIRS),
    fam!(8, T2, [], "", (4, 2, 1), Point, [&[E3], &[E1], &[E2], &[[1, 1, 0]], &[E1, E2], &[E3, E1], &[E3, [1, 1, 0]]], NONE),
    fam!(9, T2, [], "", (3, 1, 2), Line, [&[E1], &[E2, E3]], NONE),
    fam!(10, T2, [], "", (6, 0, 3), Plane, [&[E1], &[E2], &[E1, E2]], NONE),
    fam!(11, T2, ["beta"], "beta not in {0, 1/2}", (2, 1, 2), Point, [&[E1], &[E2], &[E1, E2], &[E2, E3]], GENERIC),
    fam!(12, T2, ["beta"], "beta not in {0, 1/2}", (2, 0, 3), Line, [&[E1], &[E2], &[E1, E2]], GENERIC),
    fam!(13, T2, ["alpha"], "alpha not in {0, 1/2}", (4, 0, 3), Point, [&[E1], &[E2], &[E1, E2]], GENERIC),
    fam!(14, T2, ["alpha", "beta"], "alpha < beta, both not in {0, 1/2}", (2, 0, 3), Point, [&[E1], &[E2], &[E1, E2]], ORDERED_PAIRS),
    fam!(15, T3, [], "", (4, 1, 1), Empty, [&[E1], &[E1, E2], &[E1, E3], &[E1, [0, 1, 1]]], NONE),
    fam!(16, T3, [], "", (1, 0, 2), Empty, [&[E2, E3]], NONE),
    fam!(17, T3, [], "", (1, 0, 3), Curve, [], NONE),
    fam!(18, T3, ["beta"], "beta > 1 or beta <= -1", (1, 0, 3), Empty, [], T3_RATIOS),
    fam!(19, T4, [], "", (3, 1, 1), Empty, [&[E1], &[E2], &[E2, E1], &[E2, E3], &[E2, [1, 0, 1]]], NONE),
    fam!(20, T4, [], "", (4, 0, 2), Empty, [&[E1], &[E2], &[E1, E2]], NONE),
    fam!(21, T4, ["beta"], "|beta| > 1 or beta = -1", (2, 0, 2), Empty, [&[E1], &[E2], &[E1, E2]], T4_RATIOS),
    fam!(22, TI12, [], "", (2, 1, 2), Point, [&[E1], &[E1, E2], &[E1, E3]], NONE),
    fam!(23, T5, ["a", "b"], "b > 0", (2, 0, 3), Point, [&[E1, E2]], ROTATIONS),
    fam!(24, T6, ["beta"], "beta not in {0, 1/2}", (1, 1, 3), Point, [&[E1], &[E1, E2]], GENERIC),
    fam!(25, T6, [], "", (2, 1, 2), Point, [&[E1], &[E1, E2], &[E1, E3]], NONE),
    fam!(26, T6, [], "", (2, 1, 3), Curve, [&[E1], &[E1, E2]], NONE),
    fam!(27, T6, ["alpha", "beta"], "alpha != beta, both not in {0, 1/2}", (1, 0, 3), Point, [&[E1], &[E1, E2]], DISTINCT_PAIRS),
    fam!(28, T6, ["alpha"], "alpha not in {0, 1/2}", (2, 0, 3), Point, [&[E1], &[E1, E2]], GENERIC),
    fam!(29, T6, ["alpha"], "alpha not in {0, 1/2}", (2, 0, 3), Curve, [&[E1], &[E1, E2]], GENERIC),
    fam!(30, T6, [], "", (3, 0, 3), Line, [&[E1], &[E1, E2]], NONE),
    fam!(31, T6, ["beta"], "beta not in {0, 1/2}", (2, 0, 3), Line, [&[E1], &[E1, E2]], GENERIC),
    fam!(32, T7, [], "", (5, 2, 1), Empty, [&[E2], &[E3], &[[0, 1, 1]], &[E2, E3], &[E2, E1], &[E2, [1, 0, 1]]], NONE),
    fam!(33, T7, ["beta"], "beta not in {0, 1}", (1, 0, 2), Empty, [&[E2], &[E1, E2]], T7_RATIOS),
    fam!(34, T7, [], "", (2, 0, 2), Empty, [&[E2], &[E1, E2]], NONE),
    fam!(35, T7, [], "", (2, 1, 2), Empty, [&[E2], &[E1, E2]], NONE),
];

/// All 35 families in index order.
pub fn catalog() -> &'static [FamilyInfo; 35] {
    &CATALOG
}

pub fn family(index: u8) -> Option<&'static FamilyInfo> {
    CATALOG.get((index as usize).checked_sub(1)?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("unknown family A{0}; valid indices are 1 to 35")]
    UnknownFamily(u8),
    #[error("A{family} takes {expected} parameter(s), got {got}")]
    WrongCount { family: u8, expected: usize, got: usize },
    #[error("parameters of A{family} violate: {constraint}")]
    OutOfRange { family: u8, constraint: &'static str },
}

/// Checks parameter count and range for `label` (within `tol` for floats).
pub fn check_params<S: Scalar>(index: u8, params: &[S], tol: f64) -> Result<(), ParamError> {
    let info = family(index).ok_or(ParamError::UnknownFamily(index))?;
    if params.len() != info.param_names.len() {
        return Err(ParamError::WrongCount { family: index, expected: info.param_names.len(), got: params.len() });
    }
    let is = |x: &S, n: i64, d: i64| x.approx_eq(&S::ratio(n, d), tol);
    let special = |x: &S| is(x, 0, 1) || is(x, 1, 2);
    let fail = |constraint| Err(ParamError::OutOfRange { family: index, constraint });
    match index {
        4 | 5 | 6 | 13 | 28 | 29 if special(&params[0]) => fail("alpha not in {0, 1/2}"),
        11 | 12 | 24 | 31 if special(&params[0]) => fail("beta not in {0, 1/2}"),
        7 | 14 => {
            if special(&params[0]) || special(&params[1]) {
                fail("alpha, beta not in {0, 1/2}")
            } else if params[0] >= params[1] || params[0].approx_eq(&params[1], tol) {
                fail("alpha < beta")
            } else {
                Ok(())
            }
        }
        18 => {
            let b = &params[0];
            if (*b > S::one() && !is(b, 1, 1)) || *b <= S::from_i64(-1) || is(b, -1, 1) {
                Ok(())
            } else {
                fail("beta > 1 or beta <= -1")
            }
        }
        21 => {
            let b = &params[0];
            if is(b, -1, 1) || (b.abs_value() > S::one() && !is(&b.abs_value(), 1, 1)) {
                Ok(())
            } else {
                fail("|beta| > 1 or beta = -1")
            }
        }
        23 if params[1] <= S::zero() || params[1].is_negligible(tol) => fail("b > 0"),
        27 => {
            if special(&params[0]) || special(&params[1]) {
                fail("alpha, beta not in {0, 1/2}")
            } else if params[0].approx_eq(&params[1], tol) {
                fail("alpha != beta")
            } else {
                Ok(())
            }
        }
        33 if is(&params[0], 0, 1) || is(&params[0], 1, 1) => fail("beta not in {0, 1}"),
        _ => Ok(()),
    }
}

/// Table parameters `(α, β)` (or `(a, b)` for T5) of a family member.
fn table_parameters<S: Scalar>(index: u8, p: &[S]) -> (S, S) {
    let z = S::zero;
    let o = S::one;
    let h = || S::ratio(1, 2);
    match index {
        1 | 8 | 25 | 32 => (z(), z()),
        2 | 9 | 26 => (z(), h()),
        3 | 10 | 30 => (h(), h()),
        4 => (p[0].clone(), z()),
        5 => (p[0].clone(), h()),
        6 | 13 | 28 => (p[0].clone(), p[0].clone()),
        7 | 14 | 23 | 27 => (p[0].clone(), p[1].clone()),
        11 | 24 => (z(), p[0].clone()),
        12 | 31 => (h(), p[0].clone()),
        16 | 19 => (z(), o()),
        17 | 20 | 34 => (o(), o()),
        18 | 21 | 33 => (o(), p[0].clone()),
        29 => (p[0].clone(), h()),
        35 => (o(), z()),
        _ => (z(), z()),
    }
}

/// The tensor of a table at the given table parameters.
pub fn table_tensor<S: Scalar>(table: Table, alpha: S, beta: S) -> StructureTensor<S> {
    let z = S::zero;
    let e = unit_vec::<S>;
    let base = StructureTensor::zero();
    match table {
        Table::T1 => base.with(0, 1, e(2)).with(2, 2, e(2)).with(0, 2, [alpha, z(), z()]).with(1, 2, [z(), beta, z()]),
        Table::T2 => base.with(2, 2, e(2)).with(0, 2, [alpha, z(), z()]).with(1, 2, [z(), beta, z()]),
        Table::T3 => base.with(0, 1, e(2)).with(0, 2, [alpha, z(), z()]).with(1, 2, [z(), beta, z()]),
        Table::T4 => base.with(0, 2, [alpha, z(), z()]).with(1, 2, [z(), beta, z()]),
        Table::T5 => base
            .with(2, 2, e(2))
            .with(0, 2, [alpha.clone(), -beta.clone(), z()])
            .with(1, 2, [beta, alpha, z()]),
        Table::T6 => base.with(1, 1, e(0)).with(2, 2, e(2)).with(0, 2, [alpha, z(), z()]).with(1, 2, [z(), beta, z()]),
        Table::T7 => base.with(0, 0, e(1)).with(0, 2, [alpha, z(), z()]).with(1, 2, [z(), beta, z()]),
        Table::TI12 => base.with(2, 2, e(2)).with(1, 2, e(0)),
    }
}

/// The canonical tensor of a family member.
pub fn emit_canonical<S: Scalar>(label: &FamilyLabel<S>, tol: f64) -> Result<StructureTensor<S>, ParamError> {
    check_params(label.index, &label.params, tol)?;
    if label.index == 15 {
        return Ok(StructureTensor::zero().with(1, 2, unit_vec(0)));
    }
    let info = family(label.index).ok_or(ParamError::UnknownFamily(label.index))?;
    let (alpha, beta) = table_parameters(label.index, &label.params);
    Ok(table_tensor(info.table, alpha, beta))
}

/// The right-hand side of the quadratic system for a family member exactly as
/// it appears in the published list of 35 canonical systems, misprints
/// included. Coefficient layout as in [`QuadraticField`].
pub fn published_system(index: u8, params: &[Rational]) -> QuadraticField<Rational> {
    const X11: usize = 0;
    const X22: usize = 1;
    const X33: usize = 2;
    const X12: usize = 3;
    const X13: usize = 4;
    const X23: usize = 5;
    let mut f: QuadraticField<Rational> = std::array::from_fn(|_| std::array::from_fn(|_| Rational::from_i64(0)));
    let p = |i: usize| params.get(i).cloned().unwrap_or_else(|| Rational::from_i64(0));
    let two = || Rational::from_i64(2);
    let one = || Rational::from_i64(1);
    let mut put = |comp: usize, slot: usize, c: Rational| f[comp - 1][slot] = c;
    let cone = |put: &mut dyn FnMut(usize, usize, Rational)| {
        put(3, X12, two());
        put(3, X33, one());
    };
    match index {
        1 => cone(&mut put),
        2 => {
            put(2, X23, one());
            cone(&mut put);
        }
        3 => {
            put(1, X13, one());
            put(2, X23, one());
            cone(&mut put);
        }
        4 => {
            put(1, X13, two() * p(0));
            cone(&mut put);
        }
        5 => {
            put(1, X13, two() * p(0));
            put(2, X23, one());
            put(3, X13, two());
            put(3, X33, one());
        }
        6 => {
            put(1, X13, two() * p(0));
            put(2, X23, two() * p(0));
            cone(&mut put);
        }
        7 => {
            put(1, X13, two() * p(0));
            put(2, X23, two() * p(1));
            cone(&mut put);
        }
        8 => put(3, X33, one()),
        9 => {
            put(2, X23, one());
            put(3, X33, one());
        }
        10 => {
            put(1, X13, one());
            put(2, X23, one());
            put(3, X33, one());
        }
        11 => {
            put(2, X23, one());
            put(3, X33, one());
        }
        12 => {
            put(1, X13, one());
            put(2, X23, two() * p(0));
            put(3, X33, one());
        }
        13 => {
            put(1, X13, two() * p(0));
            put(2, X23, two() * p(0));
            put(3, X33, one());
        }
        14 => {
            put(1, X13, two() * p(0));
            put(2, X23, two() * p(1));
            put(3, X33, one());
        }
        15 => put(1, X23, two()),
        16 => {
            put(2, X23, two());
            put(3, X12, two());
        }
        17 => {
            put(1, X13, two());
            put(2, X23, two());
            put(3, X12, two());
        }
        18 => {
            put(1, X13, two());
            put(2, X23, two() * p(0));
            put(3, X12, two());
        }
        19 => put(2, X23, two()),
        20 => {
            put(1, X13, two());
            put(2, X23, two());
        }
        21 => {
            put(1, X13, two());
            put(2, X23, two() * p(0));
        }
        22 => {
            put(1, X23, two());
            put(3, X33, one());
        }
        23 => {
            put(1, X12, two() * p(0));
            put(1, X23, two() * p(1));
            put(2, X13, -(two() * p(1)));
            put(2, X23, two() * p(0));
            put(3, X33, one());
        }
        24 => {
            put(1, X22, one());
            put(2, X23, two() * p(0));
            put(3, X33, one());
        }
        25 => {
            put(1, X22, one());
            put(3, X33, one());
        }
        26 => {
            put(1, X22, one());
            put(2, X23, one());
            put(3, X33, one());
        }
        27 => {
            put(1, X13, two() * p(0));
            put(1, X22, one());
            put(2, X23, two() * p(1));
            put(3, X33, one());
        }
        28 => {
            put(1, X13, two() * p(0));
            put(1, X22, one());
            put(2, X23, two() * p(0));
            put(3, X33, one());
        }
        29 => {
            put(1, X13, two() * p(0));
            put(1, X22, one());
            put(2, X23, one());
            put(3, X33, one());
        }
        30 => {
            put(1, X13, one());
            put(1, X22, one());
            put(2, X23, one());
            put(3, X33, one());
        }
        31 => {
            put(1, X13, one());
            put(1, X22, one());
            put(2, X23, two() * p(0));
            put(3, X33, one());
        }
        32 => put(1, X11, one()),
        33 => {
            put(1, X13, two());
            put(2, X11, one());
            put(2, X23, two() * p(0));
        }
        34 => {
            put(1, X13, two());
            put(2, X11, one());
            put(2, X23, two());
        }
        35 => {
            put(1, X13, two());
            put(2, X11, one());
        }
        _ => {}
    }
    f
}

/// Whether the published system of `label` differs from the field of its
/// canonical tensor.
pub fn published_system_differs(label: &FamilyLabel) -> bool {
    match emit_canonical(label, 0.0) {
        Ok(t) => crate::tensor::quadratic_field(&t) != published_system(label.index, &label.params),
        Err(_) => false,
    }
}

/// Indices whose published system disagrees with the canonical table at
/// some catalog sample.
pub fn misprinted_systems() -> Vec<u8> {
    CATALOG
        .iter()
        .filter(|info| info.sample_labels().iter().any(published_system_differs))
        .map(|info| info.index)
        .collect()
}

/// The system of a family with its parameters left symbolic, one
/// `dxk/dt = …` line per component. Returns `None` for an unknown index.
pub fn symbolic_system(index: u8) -> Option<String> {
    use crate::tensor::{quadratic_field, MONOMIAL_NAMES, MONOMIAL_ORDER};
    use num_traits::{One, Zero};

    let info = family(index)?;
    let names = info.param_names;
    let field_at = |p: &[Rational]| {
        let t = if index == 15 {
            StructureTensor::zero().with(1, 2, unit_vec(0))
        } else {
            let (alpha, beta) = table_parameters(index, p);
            table_tensor(info.table, alpha, beta)
        };
        quadratic_field(&t)
    };
    let zeros = vec![Rational::zero(); names.len()];
    let base = field_at(&zeros);
    let slopes: Vec<QuadraticField> = (0..names.len())
        .map(|i| {
            let mut p = zeros.clone();
            p[i] = Rational::one();
            let f = field_at(&p);
            std::array::from_fn(|k| std::array::from_fn(|m| f[k][m].clone() - base[k][m].clone()))
        })
        .collect();

    let scaled = |c: &Rational, name: &str| -> String {
        if c.is_one() {
            name.to_string()
        } else if (-c).is_one() {
            format!("-{name}")
        } else {
            format!("{c}*{name}")
        }
    };
    let mut lines = Vec::new();
    for k in 0..3 {
        let mut terms: Vec<String> = Vec::new();
        for slot in MONOMIAL_ORDER {
            let mut parts: Vec<String> = Vec::new();
            if !base[k][slot].is_zero() {
                parts.push(base[k][slot].to_string());
            }
            for (i, f) in slopes.iter().enumerate() {
                if !f[k][slot].is_zero() {
                    parts.push(scaled(&f[k][slot], names[i]));
                }
            }
            let monomial = MONOMIAL_NAMES[slot];
            let term = match parts.len() {
                0 => continue,
                1 if parts[0] == "1" => monomial.to_string(),
                1 if parts[0] == "-1" => format!("-{monomial}"),
                1 => format!("{}*{monomial}", parts[0]),
                _ => format!("({})*{monomial}", parts.join(" + ").replace("+ -", "- ")),
            };
            terms.push(term);
        }
        let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
        lines.push(format!("dx{}/dt = {rhs}", k + 1));
    }
    Some(lines.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn catalog_is_indexed_consistently() {
        assert_eq!(catalog().len(), 35);
        for (i, info) in catalog().iter().enumerate() {
            assert_eq!(info.index as usize, i + 1);
            if info.param_names.is_empty() {
                assert!(info.samples.is_empty());
            } else {
                assert!(info.samples.len() >= 5, "A{}", info.index);
            }
        }
        assert!(family(0).is_none() && family(36).is_none());
    }

    #[test]
    fn samples_are_in_range() {
        for info in catalog() {
            for label in info.sample_labels() {
                check_params(label.index, &label.params, 0.0).unwrap_or_else(|e| panic!("{e}"));
            }
        }
    }

    #[test]
    fn range_violations_are_named() {
        let err = emit_canonical(&FamilyLabel::new(18, vec![rat(1, 2)]), 0.0).unwrap_err();
        assert_eq!(err, ParamError::OutOfRange { family: 18, constraint: "beta > 1 or beta <= -1" });
        assert!(emit_canonical(&FamilyLabel::new(23, vec![int(1), int(0)]), 0.0).is_err());
        assert!(emit_canonical(&FamilyLabel::new(7, vec![int(2), int(1)]), 0.0).is_err());
        assert!(matches!(
            emit_canonical(&FamilyLabel::new(8, vec![int(1)]), 0.0),
            Err(ParamError::WrongCount { expected: 0, got: 1, .. })
        ));
        assert!(emit_canonical(&FamilyLabel::new(21, vec![int(-1)]), 0.0).is_ok());
        assert!(emit_canonical(&FamilyLabel::new(21, vec![rat(1, 2)]), 0.0).is_err());
    }

    #[test]
    fn a8_system() {
        let t = emit_canonical(&FamilyLabel::<Rational>::new(8, vec![]), 0.0).unwrap();
        let f = crate::tensor::quadratic_field(&t);
        assert_eq!(crate::tensor::format_field(&f), "dx1/dt = 0\ndx2/dt = 0\ndx3/dt = x3^2");
    }
}
