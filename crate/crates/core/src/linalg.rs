//! Small dense linear algebra over a [`Scalar`] field.
//!
//! Matrices act on column vectors. For a change-of-basis matrix the columns are
//! the new basis vectors written in the old coordinates. Documentation uses
//! 1-based indices (`e1, e2, e3`); code uses 0-based arrays.

use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{int, Rational, Scalar};

pub type Vector3<S> = [S; 3];

pub fn zero_vec<S: Scalar>() -> Vector3<S> {
    [S::zero(), S::zero(), S::zero()]
}

pub fn unit_vec<S: Scalar>(i: usize) -> Vector3<S> {
    let mut v = zero_vec();
    v[i] = S::one();
    v
}

pub fn vec_add<S: Scalar>(a: &Vector3<S>, b: &Vector3<S>) -> Vector3<S> {
    [
        a[0].clone() + b[0].clone(),
        a[1].clone() + b[1].clone(),
        a[2].clone() + b[2].clone(),
    ]
}

pub fn vec_sub<S: Scalar>(a: &Vector3<S>, b: &Vector3<S>) -> Vector3<S> {
    [
        a[0].clone() - b[0].clone(),
        a[1].clone() - b[1].clone(),
        a[2].clone() - b[2].clone(),
    ]
}

pub fn vec_scale<S: Scalar>(c: &S, a: &Vector3<S>) -> Vector3<S> {
    [c.clone() * a[0].clone(), c.clone() * a[1].clone(), c.clone() * a[2].clone()]
}

pub fn vec_is_negligible<S: Scalar>(a: &Vector3<S>, tol: f64) -> bool {
    a.iter().all(|x| x.is_negligible(tol))
}

pub fn vec_to_f64<S: Scalar>(a: &Vector3<S>) -> [f64; 3] {
    [a[0].to_f64(), a[1].to_f64(), a[2].to_f64()]
}

pub fn sup_norm(a: &[f64; 3]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// A 3×3 matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix3<S> {
    pub m: [[S; 3]; 3],
}

impl<S: Scalar> Matrix3<S> {
    pub fn from_rows(rows: [[S; 3]; 3]) -> Self {
        Matrix3 { m: rows }
    }

    pub fn from_columns(cols: [Vector3<S>; 3]) -> Self {
        let [c0, c1, c2] = cols;
        let [a0, a1, a2] = c0;
        let [b0, b1, b2] = c1;
        let [d0, d1, d2] = c2;
        Matrix3 { m: [[a0, b0, d0], [a1, b1, d1], [a2, b2, d2]] }
    }

    pub fn zero() -> Self {
        Matrix3 { m: [zero_vec(), zero_vec(), zero_vec()] }
    }

    pub fn identity() -> Self {
        Self::diagonal(S::one(), S::one(), S::one())
    }

    pub fn diagonal(a: S, b: S, c: S) -> Self {
        let mut out = Self::zero();
        out.m[0][0] = a;
        out.m[1][1] = b;
        out.m[2][2] = c;
        out
    }

    /// Permutation whose `i`-th column is `e_{perm[i]}`.
    pub fn permutation(perm: [usize; 3]) -> Self {
        Self::from_columns([unit_vec(perm[0]), unit_vec(perm[1]), unit_vec(perm[2])])
    }

    pub fn from_i64(rows: [[i64; 3]; 3]) -> Self {
        let f = |r: [i64; 3]| [S::from_i64(r[0]), S::from_i64(r[1]), S::from_i64(r[2])];
        Matrix3 { m: [f(rows[0]), f(rows[1]), f(rows[2])] }
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.m[r][c]
    }

    pub fn column(&self, c: usize) -> Vector3<S> {
        [self.m[0][c].clone(), self.m[1][c].clone(), self.m[2][c].clone()]
    }

    pub fn transpose(&self) -> Self {
        Self::from_columns([
            self.m[0].clone(),
            self.m[1].clone(),
            self.m[2].clone(),
        ])
    }

    pub fn apply(&self, v: &Vector3<S>) -> Vector3<S> {
        let row = |r: usize| {
            self.m[r][0].clone() * v[0].clone()
                + self.m[r][1].clone() * v[1].clone()
                + self.m[r][2].clone() * v[2].clone()
        };
        [row(0), row(1), row(2)]
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        for row in out.m.iter_mut() {
            for x in row.iter_mut() {
                *x = c.clone() * x.clone();
            }
        }
        out
    }

    pub fn trace(&self) -> S {
        self.m[0][0].clone() + self.m[1][1].clone() + self.m[2][2].clone()
    }

    /// Sum of the principal 2×2 minors (the middle characteristic coefficient).
    pub fn principal_minor_sum(&self) -> S {
        let minor = |i: usize, j: usize| {
            self.m[i][i].clone() * self.m[j][j].clone() - self.m[i][j].clone() * self.m[j][i].clone()
        };
        minor(0, 1) + minor(0, 2) + minor(1, 2)
    }

    pub fn det(&self) -> S {
        let m = &self.m;
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    /// Inverse via the adjugate; `None` when the determinant is negligible.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        let d = self.det();
        if d.is_negligible(tol) {
            return None;
        }
        let m = &self.m;
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
        };
        let adj = [
            [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
            [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
            [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
        ];
        let inv = S::one() / d;
        Some(Matrix3 { m: adj }.scale(&inv))
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.m.iter().all(|r| r.iter().all(|x| x.is_negligible(tol)))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(tol)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix3<T> {
        let row = |r: &[S; 3]| [f(&r[0]), f(&r[1]), f(&r[2])];
        Matrix3 { m: [row(&self.m[0]), row(&self.m[1]), row(&self.m[2])] }
    }

    pub fn to_f64(&self) -> Matrix3<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn rows_vec(&self) -> Vec<Vec<S>> {
        self.m.iter().map(|r| r.to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |acc, x| acc.max(x.to_f64().abs()))
    }
}

impl<S: Scalar> Add for Matrix3<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for r in 0..3 {
            for c in 0..3 {
                self.m[r][c] = self.m[r][c].clone() + rhs.m[r][c].clone();
            }
        }
        self
    }
}

impl<S: Scalar> Sub for Matrix3<S> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for r in 0..3 {
            for c in 0..3 {
                self.m[r][c] = self.m[r][c].clone() - rhs.m[r][c].clone();
            }
        }
        self
    }
}

impl<S: Scalar> Neg for Matrix3<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Mul for &Matrix3<S> {
    type Output = Matrix3<S>;
    fn mul(self, rhs: &Matrix3<S>) -> Matrix3<S> {
        let mut out = Matrix3::zero();
        for r in 0..3 {
            for c in 0..3 {
                let mut acc = S::zero();
                for k in 0..3 {
                    acc = acc + self.m[r][k].clone() * rhs.m[k][c].clone();
                }
                out.m[r][c] = acc;
            }
        }
        out
    }
}

impl<S: Scalar> Mul for Matrix3<S> {
    type Output = Matrix3<S>;
    fn mul(self, rhs: Matrix3<S>) -> Matrix3<S> {
        &self * &rhs
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Exact scalars pivot on the first nonzero entry in scan order, floats on the
/// largest magnitude, so results are reproducible for identical input.
pub fn rref<S: Scalar>(rows: &mut [Vec<S>], cols: usize, tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows.len() {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if row[c].is_negligible(tol) {
                continue;
            }
            let w = row[c].pivot_weight();
            match best {
                None => best = Some((i, w)),
                Some((_, bw)) if !S::EXACT && w > bw => best = Some((i, w)),
                _ => {}
            }
            if S::EXACT {
                break;
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_negligible(tol) {
                continue;
            }
            let f = rows[i][c].clone();
            for k in 0..cols {
                let v = rows[r][k].clone();
                rows[i][k] = rows[i][k].clone() - f.clone() * v;
            }
            rows[i][c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the nullspace of a `rows × cols` matrix.
///
/// One vector per free column `f`, carrying `1` at `f` and the negated
/// echelon entries at the pivot columns.
pub fn kernel_basis<S: Scalar>(m: &[Vec<S>], cols: usize, tol: f64) -> Vec<Vec<S>> {
    let mut work: Vec<Vec<S>> = m.to_vec();
    let pivots = rref(&mut work, cols, tol);
    let mut basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[f] = S::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[row][f].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn rank<S: Scalar>(m: &[Vec<S>], cols: usize, tol: f64) -> usize {
    let mut work: Vec<Vec<S>> = m.to_vec();
    rref(&mut work, cols, tol).len()
}

/// Kernel of a 3×3 matrix as 3-vectors.
pub fn kernel3<S: Scalar>(a: &Matrix3<S>, tol: f64) -> Vec<Vector3<S>> {
    kernel_basis(&a.rows_vec(), 3, tol)
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone()])
        .collect()
}

/// Rank of a list of 3-vectors.
pub fn span_rank<S: Scalar>(vs: &[Vector3<S>], tol: f64) -> usize {
    let rows: Vec<Vec<S>> = vs.iter().map(|v| v.to_vec()).collect();
    rank(&rows, 3, tol)
}

/// Maximal linearly independent subset, in order, of the given vectors'
/// row space, returned as a reduced echelon basis.
pub fn span_basis<S: Scalar>(vs: &[Vector3<S>], tol: f64) -> Vec<Vector3<S>> {
    let mut rows: Vec<Vec<S>> = vs.iter().map(|v| v.to_vec()).collect();
    let n = rref(&mut rows, 3, tol).len();
    rows.truncate(n);
    rows.into_iter().map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]).collect()
}

/// Solves `a x = b` for a nonsingular 3×3 `a`.
pub fn solve3<S: Scalar>(a: &Matrix3<S>, b: &Vector3<S>, tol: f64) -> Option<Vector3<S>> {
    let mut rows: Vec<Vec<S>> = (0..3)
        .map(|r| vec![a.m[r][0].clone(), a.m[r][1].clone(), a.m[r][2].clone(), b[r].clone()])
        .collect();
    let piv = rref(&mut rows, 3, tol);
    if piv.len() < 3 {
        return None;
    }
    Some([rows[0][3].clone(), rows[1][3].clone(), rows[2][3].clone()])
}

/// Deterministic invertible integer matrix with entries in `-3..=3`, drawn
/// from ChaCha8 seeded with `seed` until the determinant is nonzero. Seed 0
/// gives the identity.
pub fn seeded_invertible_matrix(seed: u64) -> Matrix3<Rational> {
    if seed == 0 {
        return Matrix3::identity();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m: Matrix3<Rational> = Matrix3::from_rows(std::array::from_fn(|_| std::array::from_fn(|_| int(rng.gen_range(-3..=3)))));
        if !num_traits::Zero::is_zero(&m.det()) {
            return m;
        }
    }
}
