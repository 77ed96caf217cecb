//! Distinguished subsets and subspaces of an algebra: annihilator, square,
//! nilpotent and idempotent elements, subalgebra and ideal tests, and a
//! numerical idempotent finder.

use crate::linalg::{
    kernel_basis, span_basis, span_rank, sup_norm, unit_vec, vec_is_negligible, vec_sub, Matrix3,
    Vector3,
};
use crate::scalar::{reconstruct_rational, Rational, Scalar};
use crate::tensor::{left_multiplication, multiply, StructureTensor, PAIRS};

/// A linear subspace given by a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S = Rational> {
    basis: Vec<Vector3<S>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubspaceError {
    #[error("subspace basis vectors are linearly dependent")]
    Dependent,
}

impl<S: Scalar> Subspace<S> {
    /// Builds a subspace from linearly independent vectors.
    pub fn new(basis: Vec<Vector3<S>>) -> Result<Self, SubspaceError> {
        if span_rank(&basis, 0.0) != basis.len() {
            return Err(SubspaceError::Dependent);
        }
        Ok(Subspace { basis })
    }

    /// The span of arbitrary vectors, reduced to an echelon basis.
    pub fn span(vs: &[Vector3<S>]) -> Self {
        Subspace { basis: span_basis(vs, 0.0) }
    }

    pub fn coordinate(indices: &[usize]) -> Self {
        Subspace { basis: indices.iter().map(|&i| unit_vec(i)).collect() }
    }

    pub fn whole() -> Self {
        Self::coordinate(&[0, 1, 2])
    }

    pub fn basis(&self) -> &[Vector3<S>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &Vector3<S>) -> bool {
        let mut all = self.basis.clone();
        all.push(v.clone());
        span_rank(&all, 0.0) == self.basis.len()
    }

    /// Equality of subspaces (not of bases).
    pub fn same_as(&self, other: &Self) -> bool {
        self.dim() == other.dim() && other.basis.iter().all(|v| self.contains(v))
    }
}

/// `{u : u·v = 0 for all v}`, the kernel of `u ↦ (u·e1, u·e2, u·e3)`.
pub fn annihilator<S: Scalar>(t: &StructureTensor<S>) -> Subspace<S> {
    // Row (k, c): component c of u·e_k, linear in u with coefficient a_{ik}^c.
    let mut rows = Vec::new();
    for k in 0..3 {
        for c in 0..3 {
            rows.push((0..3).map(|i| t.coeff(i, k, c).clone()).collect::<Vec<S>>());
        }
    }
    let basis = kernel_basis(&rows, 3, 0.0)
        .into_iter()
        .map(|v| [v[0].clone(), v[1].clone(), v[2].clone()])
        .collect();
    Subspace { basis }
}

/// `A²`, the span of all basis products.
pub fn squared_subalgebra<S: Scalar>(t: &StructureTensor<S>) -> Subspace<S> {
    let prods: Vec<Vector3<S>> = PAIRS.iter().map(|&(i, j)| t.product(i, j).clone()).collect();
    Subspace::span(&prods)
}

/// `u ≠ 0` with `u·u = 0`.
pub fn is_nilpotent_element<S: Scalar>(t: &StructureTensor<S>, u: &Vector3<S>) -> bool {
    !vec_is_negligible(u, 0.0) && vec_is_negligible(&multiply(t, u, u), 0.0)
}

/// `u ≠ 0` with `u·u = u`.
pub fn is_idempotent_element<S: Scalar>(t: &StructureTensor<S>, u: &Vector3<S>) -> bool {
    !vec_is_negligible(u, 0.0) && multiply(t, u, u) == *u
}

/// All pairwise products of basis vectors of `s` stay in `s`.
pub fn is_subalgebra<S: Scalar>(t: &StructureTensor<S>, s: &Subspace<S>) -> bool {
    let b = s.basis();
    (0..b.len()).all(|i| (i..b.len()).all(|j| s.contains(&multiply(t, &b[i], &b[j]))))
}

/// `e_k·v ∈ s` for all working-basis vectors `e_k` and basis vectors `v` of `s`.
pub fn is_ideal<S: Scalar>(t: &StructureTensor<S>, s: &Subspace<S>) -> bool {
    s.basis()
        .iter()
        .all(|v| (0..3).all(|k| s.contains(&multiply(t, &unit_vec(k), v))))
}

/// Settings for [`find_idempotents_numeric`].
#[derive(Clone, Debug)]
pub struct NewtonSettings {
    /// Seeds are the integer points of `[-radius, radius]³`.
    pub grid_radius: i64,
    /// Residual bound `‖u·u − u‖∞` for accepting a root.
    pub tol: f64,
    pub max_iterations: usize,
    /// Step-size threshold that ends the iteration.
    pub convergence_tol: f64,
    pub dedup_radius: f64,
    pub max_denominator: u64,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            grid_radius: 3,
            tol: 1e-10,
            max_iterations: 50,
            convergence_tol: 1e-12,
            dedup_radius: 1e-8,
            max_denominator: 1_000_000,
        }
    }
}

/// A numerically located idempotent.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericIdempotent {
    pub point: [f64; 3],
    pub residual: f64,
    /// Rational reconstruction, present only when it verifies `u·u = u` exactly.
    pub exact: Option<Vector3<Rational>>,
    /// Estimated dimension of the idempotent set near `u`: Newton is restarted
    /// from small perturbations of `u` and the rank of the displacements of
    /// the recovered idempotents is taken.
    pub local_dim: usize,
}

/// Newton iteration on `F(u) = u·u − u` from every seed of the integer grid,
/// with analytic Jacobian `2L_u − I`. Steps use the pseudo-inverse, so
/// singular Jacobians on non-isolated loci still give convergent iterations.
pub fn find_idempotents_numeric(t: &StructureTensor, settings: &NewtonSettings) -> Vec<NumericIdempotent> {
    let tf = t.to_f64();
    let r = settings.grid_radius;
    let mut found: Vec<NumericIdempotent> = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            for z in -r..=r {
                let seed = [x as f64, y as f64, z as f64];
                let Some(u) = newton(&tf, seed, settings) else { continue };
                if sup_norm(&u) < 1e-6 {
                    continue;
                }
                let residual = sup_norm(&vec_sub(&multiply(&tf, &u, &u), &u));
                if residual >= settings.tol {
                    continue;
                }
                if found.iter().any(|f| sup_norm(&vec_sub(&f.point, &u)) < settings.dedup_radius) {
                    continue;
                }
                let exact = reconstruct(&u, settings.max_denominator).filter(|q| is_idempotent_element(t, q));
                if exact.is_some() && found.iter().any(|f| f.exact == exact) {
                    continue;
                }
                let local_dim = local_dimension(&tf, &u, settings);
                found.push(NumericIdempotent { point: u, residual, exact, local_dim });
            }
        }
    }
    found
}

fn local_dimension(t: &StructureTensor<f64>, u: &[f64; 3], settings: &NewtonSettings) -> usize {
    const DELTA: f64 = 1e-3;
    const DIRECTIONS: [[f64; 3]; 8] = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, -1.0],
        [0.0, -1.0, 1.0],
        [1.0, 1.0, 1.0],
        [-1.0, 1.0, 1.0],
    ];
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for dir in DIRECTIONS {
        let seed = [u[0] + DELTA * dir[0], u[1] + DELTA * dir[1], u[2] + DELTA * dir[2]];
        let Some(w) = newton(t, seed, settings) else { continue };
        let f = vec_sub(&multiply(t, &w, &w), &w);
        let d = vec_sub(&w, u);
        if sup_norm(&f) < settings.tol && sup_norm(&d) < 100.0 * DELTA {
            rows.push(d.iter().map(|x| x / DELTA).collect());
        }
    }
    if rows.is_empty() {
        return 0;
    }
    let m = nalgebra::DMatrix::from_fn(rows.len(), 3, |r, c| rows[r][c]);
    let sv = m.singular_values();
    let top = sv.max();
    if top < 0.05 {
        return 0;
    }
    sv.iter().filter(|&&x| x > 0.1 * top).count()
}

/// Minimum-norm solution of `J·step = f`, treating singular values below
/// `1e-10·σ_max` as zero, so the iteration also converges onto curves and
/// surfaces of idempotents.
fn pseudo_inverse_step(j: &Matrix3<f64>, f: &[f64; 3]) -> Option<[f64; 3]> {
    let m = nalgebra::Matrix3::from_fn(|r, c| *j.get(r, c));
    let svd = m.svd(true, true);
    let cutoff = svd.singular_values.max() * 1e-10;
    let pinv = svd.pseudo_inverse(cutoff.max(f64::MIN_POSITIVE)).ok()?;
    let step = pinv * nalgebra::Vector3::new(f[0], f[1], f[2]);
    Some([step[0], step[1], step[2]])
}

fn jacobian(t: &StructureTensor<f64>, u: &[f64; 3]) -> Matrix3<f64> {
    left_multiplication(t, u).scale(&2.0) - Matrix3::identity()
}

fn newton(t: &StructureTensor<f64>, seed: [f64; 3], s: &NewtonSettings) -> Option<[f64; 3]> {
    let mut u = seed;
    for _ in 0..s.max_iterations {
        let f = vec_sub(&multiply(t, &u, &u), &u);
        if sup_norm(&f) < 1e-15 {
            return Some(u);
        }
        let step = pseudo_inverse_step(&jacobian(t, &u), &f)?;
        u = vec_sub(&u, &step);
        if !u.iter().all(|x| x.is_finite()) || sup_norm(&u) > 1e8 {
            return None;
        }
        if sup_norm(&step) < s.convergence_tol {
            return Some(u);
        }
    }
    let f = vec_sub(&multiply(t, &u, &u), &u);
    (sup_norm(&f) < s.tol).then_some(u)
}

fn reconstruct(u: &[f64; 3], max_den: u64) -> Option<Vector3<Rational>> {
    Some([
        reconstruct_rational(u[0], max_den)?,
        reconstruct_rational(u[1], max_den)?,
        reconstruct_rational(u[2], max_den)?,
    ])
}

/// Rational points of a small integer grid that are nilpotent.
pub fn nilpotent_grid_points(t: &StructureTensor, radius: i64) -> Vec<Vector3<Rational>> {
    let mut out = Vec::new();
    for x in -radius..=radius {
        for y in -radius..=radius {
            for z in -radius..=radius {
                let u = [Rational::from_i64(x), Rational::from_i64(y), Rational::from_i64(z)];
                if is_nilpotent_element(t, &u) {
                    out.push(u);
                }
            }
        }
    }
    out
}
