//! Derivation algebras, semisimple derivations with one-dimensional kernel,
//! adapted eigenbases and the constraint system they impose on the structure
//! constants.
//!
//! A derivation `D` is stored as the matrix whose columns are `D(e1), D(e2), D(e3)`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{kernel3, kernel_basis, rank, Matrix3, Vector3};
use crate::poly::{is_squarefree, minimal_polynomial, rational_roots, Polynomial};
use crate::scalar::{rational_sqrt, Rational, Scalar};
use crate::tensor::{multiply, AdaptedConstants, StructureTensor, PAIRS};

/// A basis of `Der A`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationSpace {
    pub basis: Vec<Matrix3<Rational>>,
}

impl DerivationSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// The 18×9 linear system `D(e_i e_j) − D(e_i)e_j − e_i D(e_j) = 0` in the
/// unknown entries `d[r][c]` (flattened row-major).
pub fn leibniz_matrix<S: Scalar>(t: &StructureTensor<S>) -> Vec<Vec<S>> {
    let mut rows = Vec::with_capacity(18);
    for &(i, j) in PAIRS.iter() {
        for k in 0..3 {
            let mut row = vec![S::zero(); 9];
            for l in 0..3 {
                row[k * 3 + l] = row[k * 3 + l].clone() + t.coeff(i, j, l).clone();
                row[l * 3 + i] = row[l * 3 + i].clone() - t.coeff(l, j, k).clone();
                row[l * 3 + j] = row[l * 3 + j].clone() - t.coeff(i, l, k).clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Exact basis of `Der A`, deterministic for identical input.
pub fn derivation_algebra(t: &StructureTensor) -> DerivationSpace {
    let basis = kernel_basis(&leibniz_matrix(t), 9, 0.0)
        .into_iter()
        .map(|v| {
            Matrix3::from_rows([
                [v[0].clone(), v[1].clone(), v[2].clone()],
                [v[3].clone(), v[4].clone(), v[5].clone()],
                [v[6].clone(), v[7].clone(), v[8].clone()],
            ])
        })
        .collect();
    DerivationSpace { basis }
}

/// Leibniz rule on all six basis pairs, within `tol` (exact for rationals).
pub fn is_derivation_within<S: Scalar>(t: &StructureTensor<S>, d: &Matrix3<S>, tol: f64) -> bool {
    let cols = [d.column(0), d.column(1), d.column(2)];
    let e = |i: usize| crate::linalg::unit_vec::<S>(i);
    PAIRS.iter().all(|&(i, j)| {
        let lhs = d.apply(t.product(i, j));
        let rhs = crate::linalg::vec_add(&multiply(t, &cols[i], &e(j)), &multiply(t, &e(i), &cols[j]));
        crate::linalg::vec_is_negligible(&crate::linalg::vec_sub(&lhs, &rhs), tol)
    })
}

pub fn is_derivation<S: Scalar>(t: &StructureTensor<S>, d: &Matrix3<S>) -> bool {
    is_derivation_within(t, d, 0.0)
}

/// Diagonalizable over an extension field, i.e. squarefree minimal polynomial.
pub fn is_semisimple(d: &Matrix3<Rational>) -> bool {
    is_squarefree(&minimal_polynomial(d)).unwrap_or(false)
}

/// A semisimple derivation with spectrum `(1, ω, 0)` and its eigenbasis.
///
/// The columns of `basis` are eigenvectors for `1`, `ω` and `0` respectively.
/// When `ω = 1` the first two columns span the 2-dimensional eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTriple<S = Rational> {
    pub omega: S,
    pub derivation: Matrix3<S>,
    pub basis: Matrix3<S>,
}

impl SpectrumTriple<Rational> {
    pub fn to_f64(&self) -> SpectrumTriple<f64> {
        SpectrumTriple {
            omega: self.omega.to_f64(),
            derivation: self.derivation.to_f64(),
            basis: self.basis.to_f64(),
        }
    }
}

/// Builds the normalized spectrum from a semisimple `d` with nonzero
/// eigenvalues `mu_a`, `mu_b` and a simple eigenvalue `0`.
///
/// Which eigenvalue is rescaled to `1` follows the normalization rule: `ω = ½`
/// becomes `2`, `ω ∈ {−1, 1, 2}` is kept, any other `ω` is replaced by its
/// reciprocal when `|ω| < 1`.
pub fn adapted_spectrum<S: Scalar>(d: &Matrix3<S>, mu_a: S, mu_b: S, tol: f64) -> Option<SpectrumTriple<S>> {
    let (mut first, mut second) = if mu_a >= mu_b { (mu_a, mu_b) } else { (mu_b, mu_a) };
    let mut omega = second.clone() / first.clone();
    let is = |w: &S, n: i64, den: i64| w.approx_eq(&S::ratio(n, den), tol);
    let special = is(&omega, -1, 1) || is(&omega, 1, 1) || is(&omega, 2, 1);
    if is(&omega, 1, 2) || (!special && omega.abs_value() < S::one()) {
        std::mem::swap(&mut first, &mut second);
        omega = second.clone() / first.clone();
    }
    let scale = d.max_abs().max(1.0);
    let ktol = tol * scale;
    let normalized = d.scale(&(S::one() / first.clone()));
    let kernel = kernel3(d, ktol);
    if kernel.len() != 1 {
        return None;
    }
    let shifted = |mu: &S| d.clone() - Matrix3::identity().scale(mu);
    let cols: [Vector3<S>; 3] = if is(&omega, 1, 1) {
        let eig = kernel3(&shifted(&first), ktol);
        if eig.len() != 2 {
            return None;
        }
        [eig[0].clone(), eig[1].clone(), kernel[0].clone()]
    } else {
        let e1 = kernel3(&shifted(&first), ktol);
        let e2 = kernel3(&shifted(&second), ktol);
        if e1.len() != 1 || e2.len() != 1 {
            return None;
        }
        [e1[0].clone(), e2[0].clone(), kernel[0].clone()]
    };
    let basis = Matrix3::from_columns(cols);
    if basis.det().is_negligible(tol) {
        return None;
    }
    Some(SpectrumTriple { omega, derivation: normalized, basis })
}

/// Outcome of examining one derivation candidate.
#[derive(Clone, Debug, PartialEq)]
pub enum Qualified {
    /// Semisimple, one-dimensional kernel, rational spectrum.
    Rational(SpectrumTriple<Rational>),
    /// Qualifying derivation whose nonzero eigenvalues are real irrationals.
    Irrational(Matrix3<Rational>),
    /// Qualifying derivation whose nonzero eigenvalues are not real.
    NonReal(Matrix3<Rational>),
}

/// Examines a derivation `d`: when its characteristic polynomial has `0` as a
/// simple root, the semisimple part of `d` qualifies. Irrational spectra are
/// additionally replaced by their rational-part derivation when that is nonzero.
pub fn examine_candidate(t: &StructureTensor, d: &Matrix3<Rational>) -> Vec<Qualified> {
    let mut out = Vec::new();
    if !d.det().is_zero() {
        return out;
    }
    let m = d.principal_minor_sum();
    if m.is_zero() {
        return out;
    }
    let tr = d.trace();
    let two = Rational::from_i64(2);
    let disc = &tr * &tr - Rational::from_i64(4) * &m;
    if disc.is_zero() {
        // Repeated nonzero eigenvalue λ: semisimple part is λ(I − (D − λI)²/λ²).
        let lambda = &tr / &two;
        let shifted = d.clone() - Matrix3::identity().scale(&lambda);
        let proj0 = (&shifted * &shifted).scale(&(Rational::one() / (&lambda * &lambda)));
        let ds = (Matrix3::identity() - proj0).scale(&lambda);
        if is_derivation(t, &ds) {
            if let Some(s) = adapted_spectrum(&ds, lambda.clone(), lambda, 0.0) {
                out.push(Qualified::Rational(s));
            }
        }
        return out;
    }
    if let Some(root) = rational_sqrt(&disc) {
        let mu_a = (&tr + &root) / &two;
        let mu_b = (&tr - &root) / &two;
        if let Some(s) = adapted_spectrum(d, mu_a, mu_b, 0.0) {
            out.push(Qualified::Rational(s));
        }
        return out;
    }
    if !tr.is_zero() {
        // Rational part of the spectrum: acts by tr/2 on the nonzero eigenspaces.
        let half = &tr / &two;
        let f = (d.scale(&(&two * &half * &half)) - (d * d).scale(&half)).scale(&(Rational::one() / &m));
        if is_derivation(t, &f) {
            if let Some(s) = adapted_spectrum(&f, half.clone(), half, 0.0) {
                out.push(Qualified::Rational(s));
            }
        }
    }
    if disc > Rational::zero() {
        out.push(Qualified::Irrational(d.clone()));
    } else {
        out.push(Qualified::NonReal(d.clone()));
    }
    out
}

/// Candidate sweep configuration.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub random_candidates: usize,
    pub seed: u64,
    /// Number of leading candidates combined pairwise into pencils `C1 + s·C2`
    /// whose singular members are examined when nothing else qualifies.
    pub pencil_width: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { random_candidates: 64, seed: 0x5EED, pencil_width: 12 }
    }
}

/// Result of the candidate sweep, before any float fallback.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Rational(SpectrumTriple<Rational>),
    Irrational(Matrix3<Rational>),
    NonReal(Matrix3<Rational>),
    NotFound,
}

/// Deterministic candidate list: basis elements, pairwise differences and
/// sums, then seeded integer combinations.
pub fn candidate_derivations(der: &DerivationSpace, opts: &SearchOptions) -> Vec<Matrix3<Rational>> {
    let b = &der.basis;
    let mut out: Vec<Matrix3<Rational>> = b.clone();
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            out.push(b[i].clone() - b[j].clone());
            out.push(b[i].clone() + b[j].clone());
        }
    }
    if !b.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut made = 0;
        while made < opts.random_candidates {
            let coeffs: Vec<i64> = (0..b.len()).map(|_| rng.gen_range(-3..=3)).collect();
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            let mut acc = Matrix3::zero();
            for (c, m) in coeffs.iter().zip(b.iter()) {
                acc = acc + m.scale(&Rational::from_i64(*c));
            }
            out.push(acc);
            made += 1;
        }
    }
    out
}

/// Searches `Der A` for a semisimple derivation with one-dimensional kernel,
/// preferring rational spectra. The first rational success in candidate order
/// wins; otherwise the first irrational, then non-real, qualifier is reported.
pub fn search_semisimple(t: &StructureTensor, der: &DerivationSpace, opts: &SearchOptions) -> SearchOutcome {
    let cands = candidate_derivations(der, opts);
    let mut irrational = None;
    let mut nonreal = None;
    let mut consider = |d: &Matrix3<Rational>| -> Option<SpectrumTriple<Rational>> {
        for q in examine_candidate(t, d) {
            match q {
                Qualified::Rational(s) => return Some(s),
                Qualified::Irrational(m) => {
                    irrational.get_or_insert(m);
                }
                Qualified::NonReal(m) => {
                    nonreal.get_or_insert(m);
                }
            }
        }
        None
    };
    for d in &cands {
        if let Some(s) = consider(d) {
            return SearchOutcome::Rational(s);
        }
    }
    let width = cands.len().min(opts.pencil_width);
    for i in 0..width {
        for j in 0..width {
            if i == j {
                continue;
            }
            for s in pencil_singular_points(&cands[i], &cands[j]) {
                let d = cands[i].clone() + cands[j].scale(&s);
                if let Some(found) = consider(&d) {
                    return SearchOutcome::Rational(found);
                }
            }
        }
    }
    match (irrational, nonreal) {
        (Some(m), _) => SearchOutcome::Irrational(m),
        (None, Some(m)) => SearchOutcome::NonReal(m),
        (None, None) => SearchOutcome::NotFound,
    }
}

/// Rational `s` with `det(c1 + s·c2) = 0`, when the determinant is not
/// identically zero along the pencil.
fn pencil_singular_points(c1: &Matrix3<Rational>, c2: &Matrix3<Rational>) -> Vec<Rational> {
    let at = |s: i64| (c1.clone() + c2.scale(&Rational::from_i64(s))).det();
    let ys: Vec<Rational> = (0..4).map(at).collect();
    if ys.iter().all(|y| y.is_zero()) {
        return Vec::new();
    }
    // Newton forward differences on s = 0, 1, 2, 3 give the cubic exactly.
    let d1: Vec<Rational> = ys.windows(2).map(|w| &w[1] - &w[0]).collect();
    let d2: Vec<Rational> = d1.windows(2).map(|w| &w[1] - &w[0]).collect();
    let d3 = &d2[1] - &d2[0];
    let six = Rational::from_i64(6);
    let two = Rational::from_i64(2);
    // p(s) = y0 + d1 s + d2 s(s−1)/2 + d3 s(s−1)(s−2)/6
    let c3 = &d3 / &six;
    let c2 = &d2[0] / &two - &d3 / &two;
    let c1c = &d1[0] - &d2[0] / &two + &d3 / &Rational::from_i64(3);
    let c0 = ys[0].clone();
    let p = Polynomial::new(vec![c0, c1c, c2, c3]);
    if p.is_zero() {
        return Vec::new();
    }
    let mut roots = rational_roots(&p);
    roots.dedup();
    roots
}

/// Float eigendata for a qualifying derivation with real irrational spectrum.
pub fn numeric_spectrum(d: &Matrix3<Rational>, tol: f64) -> Option<SpectrumTriple<f64>> {
    let df = d.to_f64();
    let tr = df.trace();
    let m = df.principal_minor_sum();
    let disc = tr * tr - 4.0 * m;
    if disc <= 0.0 {
        return None;
    }
    let root = disc.sqrt();
    adapted_spectrum(&df, (tr + root) / 2.0, (tr - root) / 2.0, tol)
}

/// Errors of [`find_semisimple_onedim_kernel`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectrumError {
    #[error("no semisimple derivation with one-dimensional kernel was found")]
    NotFound,
    #[error("a qualifying derivation exists but its eigendata is irrational")]
    NotRational,
    #[error("the only qualifying derivations found have non-real spectrum")]
    NonReal,
}

/// A normalized spectrum, exact or float-flagged.
#[derive(Clone, Debug, PartialEq)]
pub enum Spectrum {
    Exact(SpectrumTriple<Rational>),
    Numeric(SpectrumTriple<f64>),
}

/// Finds a semisimple derivation with one-dimensional kernel, with spectrum
/// normalized to `(1, ω, 0)`. Irrational eigendata is returned in floats only
/// when `allow_float` is set.
pub fn find_semisimple_onedim_kernel(
    t: &StructureTensor,
    allow_float: bool,
    tol: f64,
) -> Result<Spectrum, SpectrumError> {
    let der = derivation_algebra(t);
    match search_semisimple(t, &der, &SearchOptions::default()) {
        SearchOutcome::Rational(s) => Ok(Spectrum::Exact(s)),
        SearchOutcome::Irrational(d) if allow_float => {
            numeric_spectrum(&d, tol).map(Spectrum::Numeric).ok_or(SpectrumError::NotRational)
        }
        SearchOutcome::Irrational(_) => Err(SpectrumError::NotRational),
        SearchOutcome::NonReal(_) => Err(SpectrumError::NonReal),
        SearchOutcome::NotFound => Err(SpectrumError::NotFound),
    }
}

/// The tensor rewritten in the adapted eigenbasis, with its named constants.
pub fn adapted_constants<S: Scalar>(
    t: &StructureTensor<S>,
    s: &SpectrumTriple<S>,
    tol: f64,
) -> Option<AdaptedConstants<S>> {
    crate::tensor::conjugate(t, &s.basis, tol).map(|x| AdaptedConstants::from_tensor(&x))
}

/// Result of evaluating the constraint system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    pub passed: bool,
    pub violated: Vec<&'static str>,
}

/// The constraints a `(1, ω, 0)` eigenbasis imposes on the structure constants:
/// `a=c=e=f=g=h=k=m=r=v=0`, `(ω−2)b=0`, `(1−2ω)d=0`, `(1+ω)n=0`, `(ω−1)q=0`,
/// `(1−ω)s=0`. Each violated equation is reported by name.
pub fn check_constraints<S: Scalar>(c: &AdaptedConstants<S>, omega: &S, tol: f64) -> ConstraintReport {
    let mut violated = Vec::new();
    let vanishing = [
        ("a=0", &c.a),
        ("c=0", &c.c),
        ("e=0", &c.e),
        ("f=0", &c.f),
        ("g=0", &c.g),
        ("h=0", &c.h),
        ("k=0", &c.k),
        ("m=0", &c.m),
        ("r=0", &c.r),
        ("v=0", &c.v),
    ];
    for (name, x) in vanishing {
        if !x.is_negligible(tol) {
            violated.push(name);
        }
    }
    let one = S::one();
    let two = S::from_i64(2);
    let weighted = [
        ("(w-2)b=0", omega.clone() - two.clone(), &c.b),
        ("(1-2w)d=0", one.clone() - two * omega.clone(), &c.d),
        ("(1+w)n=0", one.clone() + omega.clone(), &c.n),
        ("(w-1)q=0", omega.clone() - one.clone(), &c.q),
        ("(1-w)s=0", one - omega.clone(), &c.s),
    ];
    for (name, w, x) in weighted {
        if !(w * x.clone()).is_negligible(tol) {
            violated.push(name);
        }
    }
    ConstraintReport { passed: violated.is_empty(), violated }
}

/// The constraint system as a matrix over the 18 constants (ordered as in
/// [`crate::tensor::CONSTANT_NAMES`]).
pub fn constraint_matrix(omega: &Rational) -> Vec<Vec<Rational>> {
    let idx = |name: &str| crate::tensor::CONSTANT_NAMES.iter().position(|n| *n == name).unwrap();
    let one = Rational::one();
    let two = Rational::from_i64(2);
    let mut rows = Vec::new();
    for name in ["a", "c", "e", "f", "g", "h", "k", "m", "r", "v"] {
        let mut row = vec![Rational::zero(); 18];
        row[idx(name)] = one.clone();
        rows.push(row);
    }
    let weighted = [
        ("b", omega - &two),
        ("d", &one - &two * omega),
        ("n", &one + omega),
        ("q", omega - &one),
        ("s", &one - omega),
    ];
    for (name, w) in weighted {
        let mut row = vec![Rational::zero(); 18];
        row[idx(name)] = w;
        rows.push(row);
    }
    rows
}

/// Number of free constants left by the constraint system at `ω`.
pub fn constraint_solution_dimension(omega: &Rational) -> usize {
    18 - rank(&constraint_matrix(omega), 18, 0.0)
}
