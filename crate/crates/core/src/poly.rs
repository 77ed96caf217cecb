//! Univariate polynomials over the rationals, minimal polynomials of 3×3
//! matrices and rational eigen-decomposition.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{kernel3, Matrix3, Vector3};
use crate::scalar::{convergents, rational_sqrt, Rational, Scalar};

/// Coefficients in increasing degree. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                Self::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_i64(i as i64))
                .collect(),
        )
    }

    /// Polynomial long division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = &rem[shift + i] - &f * c;
            }
            quot[shift] = f;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Evaluates the polynomial at a matrix argument.
    pub fn eval_matrix(&self, m: &Matrix3<Rational>) -> Matrix3<Rational> {
        let mut acc = Matrix3::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * m;
            acc = acc + Matrix3::identity().scale(c);
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", i)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("the zero polynomial has no squarefree decomposition")]
    ZeroPolynomial,
}

/// True iff `gcd(p, p')` is constant.
pub fn is_squarefree(p: &Polynomial) -> Result<bool, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(p.gcd(&p.derivative()).degree() == Some(0))
}

/// Monic minimal polynomial, found as the first linear dependency among
/// `I, M, M², M³`.
pub fn minimal_polynomial(m: &Matrix3<Rational>) -> Polynomial {
    let mut powers = vec![Matrix3::identity()];
    for _ in 0..3 {
        let next = powers.last().unwrap() * m;
        powers.push(next);
    }
    for deg in 1..=3 {
        // Columns are the flattened powers I..M^deg; find a kernel vector whose
        // last coordinate is nonzero.
        let rows: Vec<Vec<Rational>> = (0..9)
            .map(|idx| (0..=deg).map(|p| powers[p].m[idx / 3][idx % 3].clone()).collect())
            .collect();
        let ker = crate::linalg::kernel_basis(&rows, deg + 1, 0.0);
        if let Some(v) = ker.into_iter().find(|v| !v[deg].is_zero()) {
            return Polynomial::new(v).monic();
        }
    }
    unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by 3")
}

/// Characteristic polynomial `det(tI − M)`.
pub fn characteristic_polynomial<S: Scalar>(m: &Matrix3<S>) -> [S; 4] {
    [-m.det(), m.principal_minor_sum(), -m.trace(), S::one()]
}

/// Rational roots of a nonzero polynomial of degree at most 3, with multiplicity,
/// in increasing order. Irrational or complex roots are omitted.
pub fn rational_roots(p: &Polynomial) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut rest = p.clone();
    loop {
        match rest.degree() {
            None | Some(0) => break,
            Some(1) => {
                let c = &rest.coeffs;
                roots.push(-&c[0] / &c[1]);
                break;
            }
            Some(2) => {
                let c = &rest.coeffs;
                let disc = &c[1] * &c[1] - Rational::from_i64(4) * &c[2] * &c[0];
                if let Some(s) = rational_sqrt(&disc) {
                    let two_a = Rational::from_i64(2) * &c[2];
                    roots.push((-&c[1] - &s) / &two_a);
                    roots.push((-&c[1] + &s) / &two_a);
                }
                break;
            }
            Some(_) => {
                let Some(r) = find_rational_root(&rest) else { break };
                roots.push(r.clone());
                let lin = Polynomial::new(vec![-r, Rational::one()]);
                rest = rest.div_rem(&lin).0;
            }
        }
    }
    roots.sort();
    roots
}

/// Locates one rational root of a cubic, if any, from the continued-fraction
/// convergents of its real roots.
fn find_rational_root(p: &Polynomial) -> Option<Rational> {
    if p.coeffs[0].is_zero() {
        return Some(Rational::zero());
    }
    for x in real_roots_f64(p) {
        for c in convergents(x, 1_000_000_000) {
            if p.eval(&c).is_zero() {
                return Some(c);
            }
        }
    }
    None
}

/// Real roots of a cubic in floating point, by bisection between the critical
/// points of the polynomial.
fn real_roots_f64(p: &Polynomial) -> Vec<f64> {
    let monic = p.monic();
    let bound = 1.0
        + monic.coeffs[..monic.coeffs.len() - 1]
            .iter()
            .fold(0.0_f64, |m, c| m.max(c.to_f64().abs()));
    let d = monic.derivative();
    let dc: Vec<f64> = d.coeffs.iter().map(|c| c.to_f64()).collect();
    let mut marks = vec![-bound];
    if dc.len() == 3 {
        let disc = dc[1] * dc[1] - 4.0 * dc[2] * dc[0];
        if disc >= 0.0 {
            let s = disc.sqrt();
            let mut a = (-dc[1] - s) / (2.0 * dc[2]);
            let mut b = (-dc[1] + s) / (2.0 * dc[2]);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            marks.push(a);
            marks.push(b);
        }
    }
    marks.push(bound);
    let f = |x: f64| monic.eval_f64(x);
    let mut out = Vec::new();
    for w in marks.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            out.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            // Double roots sit on the critical points themselves.
            if fhi.abs() < 1e-9 * (1.0 + bound) {
                out.push(hi);
            }
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// One eigenvalue with a basis of its eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: Rational,
    pub algebraic_multiplicity: usize,
    pub vectors: Vec<Vector3<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EigenError {
    #[error("characteristic polynomial does not split over the rationals")]
    NotRational,
}

/// Eigenvalues (ascending, with algebraic multiplicity) and eigenspace bases,
/// provided the characteristic polynomial splits over the rationals.
pub fn rational_eigen_decomposition(m: &Matrix3<Rational>) -> Result<Vec<EigenPair>, EigenError> {
    let chi = Polynomial::new(characteristic_polynomial(m).to_vec());
    let roots = rational_roots(&chi);
    if roots.len() != 3 {
        return Err(EigenError::NotRational);
    }
    let mut out: Vec<EigenPair> = Vec::new();
    for r in roots {
        if let Some(last) = out.last_mut() {
            if last.value == r {
                last.algebraic_multiplicity += 1;
                continue;
            }
        }
        let shifted = m.clone() - Matrix3::identity().scale(&r);
        out.push(EigenPair { value: r, algebraic_multiplicity: 1, vectors: kernel3(&shifted, 0.0) });
    }
    Ok(out)
}
