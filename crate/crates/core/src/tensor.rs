//! Structure tensors of 3-dimensional commutative algebras and the quadratic
//! vector fields they define.

use crate::linalg::{unit_vec, vec_add, vec_scale, zero_vec, Matrix3, Vector3};
use crate::scalar::{Rational, Scalar};

/// Unordered basis pairs in storage order: 11, 12, 13, 22, 23, 33.
pub const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

/// Pair labels as used by the document format.
pub const PAIR_KEYS: [&str; 6] = ["11", "12", "13", "22", "23", "33"];

pub fn pair_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        (2, 2) => 5,
        _ => panic!("basis index out of range"),
    }
}

/// Structure constants `e_i e_j = Σ_k a_ij^k e_k`, stored once per unordered
/// pair so commutativity holds by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTensor<S = Rational> {
    products: [Vector3<S>; 6],
}

/// Element of the algebra in working-basis coordinates.
pub type AlgebraElement<S = Rational> = Vector3<S>;

impl<S: Scalar> StructureTensor<S> {
    pub fn zero() -> Self {
        StructureTensor { products: std::array::from_fn(|_| zero_vec()) }
    }

    pub fn from_products(products: [Vector3<S>; 6]) -> Self {
        StructureTensor { products }
    }

    /// Sets `e_i e_j` (0-based indices) to `value`.
    pub fn set(&mut self, i: usize, j: usize, value: Vector3<S>) {
        self.products[pair_index(i, j)] = value;
    }

    /// Builder form of [`StructureTensor::set`].
    pub fn with(mut self, i: usize, j: usize, value: Vector3<S>) -> Self {
        self.set(i, j, value);
        self
    }

    pub fn product(&self, i: usize, j: usize) -> &Vector3<S> {
        &self.products[pair_index(i, j)]
    }

    pub fn products(&self) -> &[Vector3<S>; 6] {
        &self.products
    }

    /// `a_ij^k` with 0-based indices.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &S {
        &self.products[pair_index(i, j)][k]
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.products.iter().all(|p| p.iter().all(|x| x.is_negligible(tol)))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.products
            .iter()
            .zip(other.products.iter())
            .all(|(a, b)| a.iter().zip(b.iter()).all(|(x, y)| x.approx_eq(y, tol)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> StructureTensor<T> {
        StructureTensor {
            products: std::array::from_fn(|p| {
                let v = &self.products[p];
                [f(&v[0]), f(&v[1]), f(&v[2])]
            }),
        }
    }

    pub fn to_f64(&self) -> StructureTensor<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.products
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0_f64, |m, x| m.max(x.to_f64().abs()))
    }
}

/// Bilinear symmetric product `(u·v)^k = Σ_{i,j} a_ij^k u^i v^j`.
pub fn multiply<S: Scalar>(t: &StructureTensor<S>, u: &Vector3<S>, v: &Vector3<S>) -> Vector3<S> {
    let mut out = zero_vec();
    for i in 0..3 {
        if u[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            if v[j].is_zero() {
                continue;
            }
            let c = u[i].clone() * v[j].clone();
            out = vec_add(&out, &vec_scale(&c, t.product(i, j)));
        }
    }
    out
}

/// The quadratic vector field `x ↦ x·x`.
pub fn vector_field<S: Scalar>(t: &StructureTensor<S>, x: &Vector3<S>) -> Vector3<S> {
    multiply(t, x, x)
}

/// Matrix of `v ↦ u·v`.
pub fn left_multiplication<S: Scalar>(t: &StructureTensor<S>, u: &Vector3<S>) -> Matrix3<S> {
    Matrix3::from_columns([
        multiply(t, u, &unit_vec(0)),
        multiply(t, u, &unit_vec(1)),
        multiply(t, u, &unit_vec(2)),
    ])
}

/// The tensor of the same algebra in the basis formed by the columns of `s`,
/// i.e. the product `u∘v = s⁻¹(s(u)·s(v))`. Returns `None` for singular `s`.
pub fn conjugate<S: Scalar>(t: &StructureTensor<S>, s: &Matrix3<S>, tol: f64) -> Option<StructureTensor<S>> {
    let inv = s.inverse(tol)?;
    let cols = [s.column(0), s.column(1), s.column(2)];
    let mut out = StructureTensor::zero();
    for &(i, j) in PAIRS.iter() {
        let prod = multiply(t, &cols[i], &cols[j]);
        out.set(i, j, inv.apply(&prod));
    }
    Some(out)
}

/// Coefficients of a quadratic vector field: for each component, the
/// coefficients of `x1², x2², x3², x1x2, x1x3, x2x3` in that order.
pub type QuadraticField<S = Rational> = [[S; 6]; 3];

/// Monomial slot for `x_i x_j` (0-based) inside a [`QuadraticField`] row.
pub fn monomial_slot(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        (1, 2) => 5,
        _ => panic!("basis index out of range"),
    }
}

/// Polynomial right-hand side of `ẋ = x·x`.
pub fn quadratic_field<S: Scalar>(t: &StructureTensor<S>) -> QuadraticField<S> {
    let mut out: QuadraticField<S> = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    let two = S::from_i64(2);
    for &(i, j) in PAIRS.iter() {
        let factor = if i == j { S::one() } else { two.clone() };
        for k in 0..3 {
            out[k][monomial_slot(i, j)] = factor.clone() * t.coeff(i, j, k).clone();
        }
    }
    out
}

/// Monomial names indexed by [`monomial_slot`].
pub const MONOMIAL_NAMES: [&str; 6] = ["x1^2", "x2^2", "x3^2", "x1*x2", "x1*x3", "x2*x3"];

/// Slots in lexicographic monomial order: x1², x1x2, x1x3, x2², x2x3, x3².
pub const MONOMIAL_ORDER: [usize; 6] = [0, 3, 4, 1, 5, 2];

/// Renders a quadratic field as three lines `dx1/dt = …`, monomials in
/// lexicographic order.
pub fn format_field(f: &QuadraticField<Rational>) -> String {
    use num_traits::{One, Signed, Zero};
    let mut lines = Vec::new();
    for (k, row) in f.iter().enumerate() {
        let mut terms = String::new();
        for slot in MONOMIAL_ORDER {
            let c = &row[slot];
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if terms.is_empty() {
                if neg {
                    terms.push('-');
                }
            } else {
                terms.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                terms.push_str(&format!("{}*", mag));
            }
            terms.push_str(MONOMIAL_NAMES[slot]);
        }
        if terms.is_empty() {
            terms.push('0');
        }
        lines.push(format!("dx{}/dt = {}", k + 1, terms));
    }
    lines.join("\n")
}

/// The 18 structure constants of a tensor under the naming used by the
/// adapted-basis case analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptedConstants<S = Rational> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub k: S,
    pub m: S,
    pub n: S,
    pub d: S,
    pub e: S,
    pub f: S,
    pub p: S,
    pub q: S,
    pub r: S,
    pub g: S,
    pub h: S,
    pub j: S,
    pub s: S,
    pub t: S,
    pub v: S,
}

/// Names of the constants in the order of [`AdaptedConstants::values`].
pub const CONSTANT_NAMES: [&str; 18] =
    ["a", "b", "c", "k", "m", "n", "d", "e", "f", "p", "q", "r", "g", "h", "j", "s", "t", "v"];

impl<S: Scalar> AdaptedConstants<S> {
    /// Reads the constants off a tensor already expressed in an adapted basis.
    pub fn from_tensor(x: &StructureTensor<S>) -> Self {
        let c = |i: usize, j: usize, k: usize| x.coeff(i, j, k).clone();
        AdaptedConstants {
            a: c(0, 0, 0),
            b: c(0, 0, 1),
            c: c(0, 0, 2),
            k: c(0, 1, 0),
            m: c(0, 1, 1),
            n: c(0, 1, 2),
            d: c(1, 1, 0),
            e: c(1, 1, 1),
            f: c(1, 1, 2),
            p: c(0, 2, 0),
            q: c(0, 2, 1),
            r: c(0, 2, 2),
            g: c(2, 2, 0),
            h: c(2, 2, 1),
            j: c(2, 2, 2),
            s: c(1, 2, 0),
            t: c(1, 2, 1),
            v: c(1, 2, 2),
        }
    }

    pub fn to_tensor(&self) -> StructureTensor<S> {
        StructureTensor::from_products([
            [self.a.clone(), self.b.clone(), self.c.clone()],
            [self.k.clone(), self.m.clone(), self.n.clone()],
            [self.p.clone(), self.q.clone(), self.r.clone()],
            [self.d.clone(), self.e.clone(), self.f.clone()],
            [self.s.clone(), self.t.clone(), self.v.clone()],
            [self.g.clone(), self.h.clone(), self.j.clone()],
        ])
    }

    pub fn values(&self) -> [S; 18] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.k.clone(),
            self.m.clone(),
            self.n.clone(),
            self.d.clone(),
            self.e.clone(),
            self.f.clone(),
            self.p.clone(),
            self.q.clone(),
            self.r.clone(),
            self.g.clone(),
            self.h.clone(),
            self.j.clone(),
            self.s.clone(),
            self.t.clone(),
            self.v.clone(),
        ]
    }

    pub fn zero() -> Self {
        Self::from_tensor(&StructureTensor::zero())
    }
}
