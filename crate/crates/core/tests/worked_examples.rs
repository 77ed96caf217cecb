//! Worked examples for every public operation of the core crate, each checked
//! against a value obtained independently of the code under test.

use hqds_core::algebra::{
    annihilator, find_idempotents_numeric, is_ideal, is_idempotent_element, is_nilpotent_element, is_subalgebra,
    squared_subalgebra, NewtonSettings, Subspace,
};
use hqds_core::catalog::{emit_canonical, table_tensor, FamilyLabel, ParamError, Table};
use hqds_core::classify::{
    case2_branch, classify, is_automorphism, is_isomorphism, t2_family_lookup, t3_t4_t6_t7_lookup,
    table_t1_normalize, Case2Subcase, ClassifyOptions, NoteKind, SingularMatrix, Verdict,
};
use hqds_core::derivation::{
    adapted_constants, check_constraints, constraint_solution_dimension, derivation_algebra,
    find_semisimple_onedim_kernel, is_derivation, is_semisimple, leibniz_matrix, Spectrum,
    SpectrumTriple,
};
use hqds_core::linalg::{kernel_basis, unit_vec, Matrix3, Vector3};
use hqds_core::poly::{
    characteristic_polynomial, is_squarefree, minimal_polynomial, rational_eigen_decomposition, EigenError,
    Polynomial,
};
use hqds_core::scalar::{int, rat, Rational};
use hqds_core::tensor::{conjugate, left_multiplication, multiply, vector_field, AdaptedConstants, StructureTensor};

fn v(x: [i64; 3]) -> Vector3<Rational> {
    x.map(int)
}

fn t1(alpha: Rational, beta: Rational) -> StructureTensor {
    table_tensor(Table::T1, alpha, beta)
}

fn t2(alpha: Rational, beta: Rational) -> StructureTensor {
    table_tensor(Table::T2, alpha, beta)
}

/// The tensor with `e3² = e3`, `e1e3 = αe1 + βe2`, `e2e3 = γe1 + δe2`.
fn omega_one(alpha: Rational, beta: Rational, gamma: Rational, delta: Rational) -> StructureTensor {
    StructureTensor::zero()
        .with(2, 2, v([0, 0, 1]))
        .with(0, 2, [alpha, beta, int(0)])
        .with(1, 2, [gamma, delta, int(0)])
}

fn label_of(t: &StructureTensor) -> FamilyLabel {
    let r = classify(t, &ClassifyOptions::default()).expect("exact classification");
    r.exact_label().cloned().unwrap_or_else(|| panic!("no family: {:?}", r.verdict))
}

fn swap12() -> Matrix3<Rational> {
    Matrix3::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
}

// ---------------------------------------------------------------- numeric kernel

#[test]
fn kernel_of_full_rank_and_zero_maps() {
    let id: Vec<Vec<Rational>> = (0..3).map(|r| (0..3).map(|c| int((r == c) as i64)).collect()).collect();
    assert!(kernel_basis(&id, 3, 0.0).is_empty());
    let zero = vec![vec![int(0); 3]; 3];
    assert_eq!(kernel_basis(&zero, 3, 0.0).len(), 3);
}

#[test]
fn leibniz_system_of_null_algebra_is_trivial() {
    let m = leibniz_matrix(&StructureTensor::<Rational>::zero());
    assert_eq!(m.len(), 18);
    assert_eq!(kernel_basis(&m, 9, 0.0).len(), 9);
}

#[test]
fn minimal_polynomial_examples() {
    assert_eq!(minimal_polynomial(&Matrix3::identity()), Polynomial::from_i64(&[-1, 1]));
    let d = Matrix3::diagonal(int(1), int(-1), int(0));
    assert_eq!(minimal_polynomial(&d), Polynomial::from_i64(&[0, -1, 0, 1]));
    let jordan = Matrix3::from_i64([[0, 1, 0], [0, 0, 0], [0, 0, 0]]);
    assert_eq!(minimal_polynomial(&jordan), Polynomial::from_i64(&[0, 0, 1]));
}

#[test]
fn squarefree_examples() {
    assert_eq!(is_squarefree(&Polynomial::from_i64(&[0, -1, 0, 1])), Ok(true));
    assert_eq!(is_squarefree(&Polynomial::from_i64(&[0, 0, 1])), Ok(false));
    assert_eq!(is_squarefree(&Polynomial::from_i64(&[-2, 0, 1])), Ok(true));
    assert!(is_squarefree(&Polynomial::zero()).is_err());
}

#[test]
fn eigen_decomposition_examples() {
    let pairs = rational_eigen_decomposition(&Matrix3::diagonal(int(1), int(-1), int(0))).unwrap();
    let values: Vec<Rational> = pairs.iter().map(|p| p.value.clone()).collect();
    assert_eq!(values, vec![int(-1), int(0), int(1)]);

    // [[α, γ], [β, δ]] = [[1, 2], [-2, 1]] has eigenvalues 1 ± 2i
    let rotation = Matrix3::from_i64([[1, 2, 0], [-2, 1, 0], [0, 0, 0]]);
    assert_eq!(rational_eigen_decomposition(&rotation), Err(EigenError::NotRational));

    let pairs = rational_eigen_decomposition(&swap12()).unwrap();
    let mut spectrum: Vec<(Rational, usize)> =
        pairs.iter().map(|p| (p.value.clone(), p.algebraic_multiplicity)).collect();
    spectrum.sort();
    assert_eq!(spectrum, vec![(int(-1), 1), (int(1), 2)]);
    let plus = pairs.iter().find(|p| p.value == int(1)).unwrap();
    assert_eq!(plus.vectors.len(), 2);
}

// ---------------------------------------------------------------- algebra core

#[test]
fn products_and_fields() {
    let a1 = t1(int(0), int(0));
    assert_eq!(multiply(&t1(rat(1, 3), int(2)), &unit_vec(0), &unit_vec(1)), v([0, 0, 1]));
    assert_eq!(multiply(&a1, &v([4, -1, 2]), &v([0, 0, 0])), v([0, 0, 0]));
    let u = [int(1), rat(-1, 2), int(1)];
    assert_eq!(multiply(&a1, &u, &u), v([0, 0, 0]));

    let a8 = t2(int(0), int(0));
    assert_eq!(vector_field(&a8, &[int(0), int(0), rat(5, 2)]), [int(0), int(0), rat(25, 4)]);
    assert_eq!(vector_field(&a8, &v([0, 0, 0])), v([0, 0, 0]));
    assert_eq!(vector_field(&a1, &v([1, 1, 0])), v([0, 0, 2]));
}

#[test]
fn annihilator_examples() {
    let ann = annihilator(&t2(int(0), int(0)));
    assert!(ann.same_as(&Subspace::coordinate(&[0, 1])));
    assert_eq!(annihilator(&StructureTensor::<Rational>::zero()).dim(), 3);
    for (a, b) in [(0, 0), (1, 3), (-2, 5)] {
        assert_eq!(annihilator(&t1(int(a), int(b))).dim(), 0);
    }
}

#[test]
fn square_examples() {
    let sq = squared_subalgebra(&t1(int(0), int(0)));
    assert!(sq.same_as(&Subspace::coordinate(&[2])));
    assert_eq!(squared_subalgebra(&t1(rat(1, 2), rat(1, 2))).dim(), 3);
    assert_eq!(squared_subalgebra(&StructureTensor::<Rational>::zero()).dim(), 0);
}

#[test]
fn nilpotent_and_idempotent_elements() {
    let a1 = t1(rat(2, 3), rat(-1, 5));
    assert!(is_nilpotent_element(&a1, &unit_vec(0)));
    assert!(!is_nilpotent_element(&a1, &v([0, 0, 0])));
    let t6 = table_tensor(Table::T6, rat(1, 3), int(2));
    assert!(!is_nilpotent_element(&t6, &unit_vec(1)));

    assert!(is_idempotent_element(&a1, &unit_vec(2)));
    let quarter = t1(rat(1, 4), rat(1, 4));
    assert!(is_idempotent_element(&quarter, &v([1, -1, 2])));
    assert!(!is_idempotent_element(&quarter, &[rat(1, 2), rat(-1, 2), int(1)]));
    assert!(!is_idempotent_element(&quarter, &v([0, 0, 0])));
}

#[test]
fn idempotent_finder_examples() {
    let found = find_idempotents_numeric(&t1(int(0), int(0)), &NewtonSettings::default());
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].exact, Some(v([0, 0, 1])));
    assert!(find_idempotents_numeric(&StructureTensor::zero(), &NewtonSettings::default()).is_empty());

    let found = find_idempotents_numeric(&t1(rat(1, 4), rat(1, 4)), &NewtonSettings::default());
    for target in [v([1, -1, 2]), v([0, 0, 1])] {
        assert!(found.iter().any(|f| f.exact.as_ref() == Some(&target)), "{target:?} missing");
    }
}

#[test]
fn left_multiplication_examples() {
    let (alpha, beta) = (rat(3, 7), int(-2));
    let l = left_multiplication(&t1(alpha.clone(), beta.clone()), &unit_vec(2));
    assert_eq!(l, Matrix3::diagonal(alpha, beta, int(1)));
    assert_eq!(left_multiplication(&t1(int(1), int(1)), &v([0, 0, 0])), Matrix3::zero());

    let a10 = t2(rat(1, 2), rat(1, 2));
    let u = v([1, 1, 1]);
    assert!(is_idempotent_element(&a10, &u));
    // (λ − ½)²(λ − 1) = λ³ − 2λ² + 5/4 λ − 1/4
    let chi = characteristic_polynomial(&left_multiplication(&a10, &u));
    let monic: Vec<Rational> = chi.iter().map(|c| c / &chi[3]).collect();
    assert_eq!(monic, vec![rat(-1, 4), rat(5, 4), int(-2), int(1)]);
}

#[test]
fn subalgebra_and_ideal_membership() {
    let a9 = t2(int(0), rat(1, 2));
    assert_eq!(is_subalgebra(&a9, &Subspace::coordinate(&[1, 2])), true);
    assert_eq!(is_subalgebra(&t1(int(1), int(2)), &Subspace::coordinate(&[0, 1])), false);
    assert_eq!(is_subalgebra(&a9, &Subspace::whole()), true);

    let a22: StructureTensor = emit_canonical(&FamilyLabel::new(22, vec![]), 0.0).unwrap();
    assert!(is_ideal(&a22, &Subspace::coordinate(&[0, 2])));

    let a6 = t1(rat(1, 4), rat(1, 4));
    let planes = [[[1, 0, 0], [0, 1, 0]], [[1, 0, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1]], [[1, 1, 0], [0, 1, 1]]];
    for p in planes {
        let s = Subspace::new(vec![v(p[0]), v(p[1])]).unwrap();
        assert!(!is_ideal(&a6, &s), "{p:?}");
        assert!(is_ideal(&StructureTensor::zero(), &s));
    }
}

// ---------------------------------------------------------------- derivations

#[test]
fn derivation_algebra_dimensions() {
    assert_eq!(derivation_algebra(&StructureTensor::zero()).dimension(), 9);
    assert_eq!(derivation_algebra(&t2(int(0), int(0))).dimension(), 4);
    assert_eq!(derivation_algebra(&t2(rat(1, 2), rat(1, 2))).dimension(), 6);
}

#[test]
fn derivation_membership() {
    let d = Matrix3::diagonal(int(1), int(-1), int(0));
    assert!(is_derivation(&t1(rat(2, 5), int(3)), &d));
    assert!(!is_derivation(&t1(int(0), int(0)), &Matrix3::identity()));
    assert!(is_derivation(&t1(int(0), int(0)), &Matrix3::zero()));
}

#[test]
fn semisimplicity() {
    assert!(is_semisimple(&Matrix3::diagonal(int(1), int(-1), int(0))));
    assert!(!is_semisimple(&Matrix3::from_i64([[0, 1, 2], [0, 0, 3], [0, 0, 0]])));
    assert!(is_semisimple(&Matrix3::from_i64([[1, 2, 0], [-3, 1, 0], [0, 0, 0]])));
}

#[test]
fn semisimple_search_finds_expected_spectra() {
    let omega = |t: &StructureTensor| match find_semisimple_onedim_kernel(t, false, 1e-9).unwrap() {
        Spectrum::Exact(s) => s.omega,
        Spectrum::Numeric(s) => panic!("unexpected float spectrum {}", s.omega),
    };
    assert_eq!(omega(&t1(rat(1, 3), int(2))), int(-1));
    assert_eq!(omega(&table_tensor(Table::T7, int(1), int(1))), int(2));
}

#[test]
fn adapted_constants_of_t1() {
    let (alpha, beta) = (rat(-1, 2), int(4));
    let t = t1(alpha.clone(), beta.clone());
    let d = Matrix3::diagonal(int(1), int(-1), int(0));
    let spectrum = SpectrumTriple { omega: int(-1), derivation: d, basis: Matrix3::identity() };
    let c = adapted_constants(&t, &spectrum, 0.0).unwrap();
    let mut expected = AdaptedConstants::zero();
    expected.j = int(1);
    expected.n = int(1);
    expected.p = alpha;
    expected.t = beta;
    assert_eq!(c, expected);

    // the search may pick -D instead, which exchanges the roles of e1 and e2
    let found = match find_semisimple_onedim_kernel(&t, false, 1e-9).unwrap() {
        Spectrum::Exact(s) => s,
        Spectrum::Numeric(_) => unreachable!(),
    };
    assert!(found.basis == Matrix3::identity() || found.basis == swap12());
    let c = adapted_constants(&t, &found, 0.0).unwrap();
    assert_eq!((c.j, c.n), (int(1), int(1)));
}

#[test]
fn constraint_examples() {
    let mut c = AdaptedConstants::zero();
    assert!(check_constraints(&c, &rat(7, 3), 0.0).passed);
    c.j = int(1);
    c.n = int(2);
    c.p = rat(1, 3);
    c.t = int(-1);
    assert!(check_constraints(&c, &int(-1), 0.0).passed);

    let mut b = AdaptedConstants::zero();
    b.b = int(1);
    assert!(check_constraints(&b, &int(2), 0.0).passed);
    let report = check_constraints(&b, &int(-1), 0.0);
    assert!(!report.passed);
    assert_eq!(report.violated, vec!["(w-2)b=0"]);
}

#[test]
fn constraint_dimensions() {
    assert_eq!(constraint_solution_dimension(&int(3)), 3);
    assert_eq!(constraint_solution_dimension(&int(-1)), 4);
    assert_eq!(constraint_solution_dimension(&int(1)), 5);
    assert_eq!(constraint_solution_dimension(&int(2)), 4);
}

// ---------------------------------------------------------------- classifier

#[test]
fn canonical_tensors_classify_to_themselves() {
    assert_eq!(label_of(&t1(int(0), int(0))), FamilyLabel::new(1, vec![]));
    let a23 = emit_canonical(&FamilyLabel::new(23, vec![int(1), int(2)]), 0.0).unwrap();
    assert_eq!(label_of(&a23), FamilyLabel::new(23, vec![int(1), int(2)]));
}

#[test]
fn shear_of_a8_stays_a8() {
    let s = Matrix3::from_i64([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
    // this shear is itself an automorphism of A8
    assert_eq!(conjugate(&t2(int(0), int(0)), &s, 0.0).unwrap(), t2(int(0), int(0)));
    assert_eq!(label_of(&conjugate(&t2(int(0), int(0)), &s, 0.0).unwrap()), FamilyLabel::new(8, vec![]));
    let tilt = Matrix3::from_i64([[1, 0, 0], [0, 1, 0], [1, -2, 1]]);
    let input = conjugate(&t2(int(0), int(0)), &tilt, 0.0).unwrap();
    assert_ne!(input, t2(int(0), int(0)));
    assert_eq!(label_of(&input), FamilyLabel::new(8, vec![]));
}

#[test]
fn null_algebra_is_reported() {
    let r = classify(&StructureTensor::zero(), &ClassifyOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::NullAlgebra);
}

#[test]
fn t1_normalization() {
    let mut c = AdaptedConstants::zero();
    c.j = int(2);
    c.n = int(4);
    c.p = int(1);
    c.t = int(3);
    let (alpha, beta, basis) = table_t1_normalize(&c);
    assert_eq!((alpha.clone(), beta.clone()), (rat(1, 2), rat(3, 2)));
    // the returned basis really does carry the tensor onto T1(α, β)
    assert_eq!(conjugate(&c.to_tensor(), &basis, 0.0).unwrap(), t1(alpha, beta));

    let mut unit = AdaptedConstants::zero();
    unit.j = int(1);
    unit.n = int(1);
    unit.p = rat(-5, 7);
    unit.t = int(9);
    let (alpha, beta, basis) = table_t1_normalize(&unit);
    assert_eq!((alpha, beta, basis), (rat(-5, 7), int(9), Matrix3::identity()));

    unit.p = int(3);
    unit.t = int(1);
    let (alpha, beta, _) = table_t1_normalize(&unit);
    assert_eq!((alpha.clone(), beta.clone()), (int(3), int(1)));
    assert_eq!(label_of(&t1(alpha, beta)), FamilyLabel::new(7, vec![int(1), int(3)]));
}

#[test]
fn subcase_seven_follows_the_table() {
    let t = omega_one(int(0), int(0), int(1), int(0));
    let c = AdaptedConstants::from_tensor(&t);
    assert_eq!(case2_branch(&c, 0.0), Case2Subcase::I2(7));
    // L_e3 restricted to span{e1, e2} is nonzero and nilpotent, as in A22
    let r = classify(&t, &ClassifyOptions::default()).unwrap();
    assert_eq!(r.exact_label(), Some(&FamilyLabel::new(22, vec![])));
    assert!(r.notes.iter().any(|n| n.kind == NoteKind::ProseRouteConflict && n.message.contains("A11")));
}

#[test]
fn subcase_three_is_a22() {
    let t = omega_one(int(0), int(1), int(0), int(0));
    assert_eq!(case2_branch(&AdaptedConstants::from_tensor(&t), 0.0), Case2Subcase::I2(3));
    let r = classify(&t, &ClassifyOptions::default()).unwrap();
    assert_eq!(r.exact_label(), Some(&FamilyLabel::new(22, vec![])));
    assert!(r.notes.iter().all(|n| n.kind != NoteKind::ProseRouteConflict));
}

#[test]
fn complex_rotation_block_is_a23() {
    let t = omega_one(int(1), int(-2), int(2), int(1));
    assert_eq!(case2_branch(&AdaptedConstants::from_tensor(&t), 0.0), Case2Subcase::IIComplex);
    assert_eq!(label_of(&t), FamilyLabel::new(23, vec![int(1), int(2)]));
}

#[test]
fn t2_lookups() {
    assert_eq!(t2_family_lookup(int(0), rat(1, 2), 0.0), FamilyLabel::new(9, vec![]));
    assert_eq!(t2_family_lookup(rat(3, 4), rat(3, 4), 0.0), FamilyLabel::new(13, vec![rat(3, 4)]));
    assert_eq!(t2_family_lookup(rat(1, 2), int(0), 0.0), FamilyLabel::new(9, vec![]));
}

#[test]
fn other_table_lookups() {
    assert_eq!(t3_t4_t6_t7_lookup(Table::T3, int(0), int(5), 0.0), Some(FamilyLabel::new(16, vec![])));
    assert_eq!(t3_t4_t6_t7_lookup(Table::T6, int(0), int(0), 0.0), Some(FamilyLabel::new(25, vec![])));
    assert_eq!(t3_t4_t6_t7_lookup(Table::T7, int(2), int(1), 0.0), Some(FamilyLabel::new(33, vec![rat(1, 2)])));
    // the lookups agree with the full classifier on the same tables
    assert_eq!(label_of(&table_tensor(Table::T3, int(0), int(5))), FamilyLabel::new(16, vec![]));
    assert_eq!(label_of(&table_tensor(Table::T7, int(2), int(1))), FamilyLabel::new(33, vec![rat(1, 2)]));
}

#[test]
fn emit_rejects_out_of_range_parameters() {
    let err = emit_canonical(&FamilyLabel::new(18, vec![rat(1, 2)]), 0.0).unwrap_err();
    assert!(matches!(err, ParamError::OutOfRange { family: 18, .. }));
    let a8: StructureTensor = emit_canonical(&FamilyLabel::new(8, vec![]), 0.0).unwrap();
    assert_eq!(vector_field(&a8, &v([2, 3, 5])), v([0, 0, 25]));
    let a1: StructureTensor = emit_canonical(&FamilyLabel::new(1, vec![]), 0.0).unwrap();
    assert_eq!(vector_field(&a1, &v([2, 3, 5])), v([0, 0, 37]));
}

#[test]
fn isomorphism_examples() {
    let (alpha, beta) = (rat(1, 3), int(5));
    assert_eq!(is_isomorphism(&t1(alpha.clone(), beta.clone()), &t1(beta, alpha), &swap12()), Ok(true));
    assert_eq!(is_isomorphism(&t1(int(0), int(0)), &t2(int(0), int(0)), &Matrix3::identity()), Ok(false));
    assert_eq!(is_isomorphism(&t1(int(0), int(0)), &t1(int(0), int(0)), &Matrix3::zero()), Err(SingularMatrix));
}

#[test]
fn t5_parameters_are_rigid_under_small_changes_of_basis() {
    let a = emit_canonical(&FamilyLabel::new(23, vec![int(1), int(2)]), 0.0).unwrap();
    let b = emit_canonical(&FamilyLabel::new(23, vec![int(1), int(3)]), 0.0).unwrap();
    let entries = [-1i64, 0, 1];
    let mut tried = 0;
    for code in 0..3usize.pow(9) {
        let mut rows = [[0i64; 3]; 3];
        let mut c = code;
        for slot in rows.iter_mut().flatten() {
            *slot = entries[c % 3];
            c /= 3;
        }
        let s = Matrix3::from_i64(rows);
        match is_isomorphism(&a, &b, &s) {
            Ok(found) => {
                tried += 1;
                assert!(!found, "{rows:?} is an isomorphism");
            }
            Err(SingularMatrix) => {}
        }
    }
    assert!(tried > 1000);
    assert_ne!(label_of(&a), label_of(&b));
}

#[test]
fn automorphism_examples() {
    assert_eq!(is_automorphism(&t1(int(0), int(0)), &swap12()), Ok(true));
    assert_eq!(is_automorphism(&t2(int(0), rat(1, 2)), &swap12()), Ok(false));
    for t in [t1(int(0), int(0)), t2(int(0), rat(1, 2)), StructureTensor::zero()] {
        assert_eq!(is_automorphism(&t, &Matrix3::identity()), Ok(true));
    }
}
