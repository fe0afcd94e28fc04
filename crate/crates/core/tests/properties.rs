use hermpf::class_group::{chi_arakelov, chi_hermitian, decompose_sign, empty_pairing, recombine, two_route_check};
use hermpf::complex::{random_complex, CohomologyPairing, PerfectGComplex, RandomComplexSpec};
use hermpf::cyclo::Cyclo;
use hermpf::det_lines::{bhu_splitting, xi, Complex};
use hermpf::equivariant::{group_ring_form, is_hermitian, is_selfadjoint, pf_fixed_space, pf_group_ring, random_invariant_form};
use hermpf::field::Field;
use hermpf::forms::{make_hyp, pfaffian, pfaffian_matching, signature};
use hermpf::group::FiniteGroup;
use hermpf::matrix::Matrix;
use hermpf::rational::Rational as Q;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn alternating(n: usize, vals: &[i64]) -> Matrix<Q> {
    let mut a = Matrix::<Q>::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let x = Q::from_int(vals[k % vals.len()]);
            k += 1;
            a.set(j, i, -x.clone());
            a.set(i, j, x);
        }
    }
    a
}

fn square(n: usize, vals: &[i64]) -> Matrix<Q> {
    Matrix::from_fn(n, n, |i, j| Q::from_int(vals[(i * n + j) % vals.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfaffian_squares_to_determinant(half in 0usize..5, vals in prop::collection::vec(-5i64..6, 1..50)) {
        let a = alternating(2 * half, &vals);
        let pf = pfaffian(&a).unwrap();
        prop_assert_eq!(pf.clone() * &pf, a.det());
        prop_assert_eq!(pfaffian_matching(&a).unwrap(), pf);
    }

    #[test]
    fn pfaffian_transforms_by_determinant(half in 1usize..4, a in prop::collection::vec(-4i64..5, 1..30), p in prop::collection::vec(-3i64..4, 1..40)) {
        let n = 2 * half;
        let a = alternating(n, &a);
        let p = square(n, &p);
        prop_assert_eq!(pfaffian(&a.congruence(&p)).unwrap(), p.det() * &pfaffian(&a).unwrap());
    }

    #[test]
    fn block_sum_pfaffian_is_product(a in prop::collection::vec(-4i64..5, 1..10), b in prop::collection::vec(-4i64..5, 1..10)) {
        let a = alternating(4, &a);
        let b = alternating(2, &b);
        let s = Matrix::block_diag(&[a.clone(), b.clone()]);
        prop_assert_eq!(pfaffian(&s).unwrap(), pfaffian(&a).unwrap() * &pfaffian(&b).unwrap());
    }

    #[test]
    fn signature_is_a_congruence_invariant(d in prop::collection::vec(prop_oneof![-5i64..-1, 1i64..6], 1..5), p in prop::collection::vec(-3i64..4, 1..30)) {
        let n = d.len();
        let s = Matrix::from_fn(n, n, |i, j| if i == j { Q::from_int(d[i]) } else { Q::zero() });
        let p = square(n, &p);
        prop_assume!(!p.det().is_zero());
        prop_assert_eq!(signature(&s).unwrap(), signature(&s.congruence(&p)).unwrap());
    }

    #[test]
    fn hyperbolic_space_has_zero_signature(n in 0usize..6) {
        let s = signature(&make_hyp::<Q>(n)).unwrap();
        prop_assert_eq!((s.positive, s.negative), (n, n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn xi_does_not_depend_on_the_splitting(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FiniteGroup::catalog("trivial").unwrap();
        let (p, _) = random_complex(&g, &mut rng, RandomComplexSpec { rank_max: 3, ..Default::default() }).unwrap();
        let c: Complex<Q> = p.q_complex().unwrap();
        let wedges: Vec<Matrix<Q>> = c.degrees().map(|i| Matrix::identity(c.dim(i))).collect();
        let a = bhu_splitting(&c, None).unwrap();
        // a second splitting: shift each H lift by a boundary and rescale
        let h2: Vec<Matrix<Q>> = c
            .degrees()
            .map(|i| {
                let h = a.h(i).clone();
                let b = a.b(i);
                if h.cols() == 0 || b.cols() == 0 {
                    return h.scale(&Q::from_int(2));
                }
                let mut m = h.scale(&Q::from_int(2));
                for k in 0..h.cols() {
                    for r in 0..h.rows() {
                        let v = m.get(r, k).clone() + b.get(r, 0);
                        m.set(r, k, v);
                    }
                }
                m
            })
            .collect();
        let b = bhu_splitting(&c, Some(&h2)).unwrap();
        let xa = xi(&c, &wedges, &a).unwrap().scalar;
        let xb = xi(&c, &wedges, &b).unwrap().scalar;
        // rescaling H^i by 2 multiplies the H-wedge by 2^{dim H^i}
        let mut factor = Q::one();
        for i in c.degrees() {
            let k = a.h(i).cols() as i32;
            let f = Q::from_int(2).pow(k).unwrap();
            factor = if i.rem_euclid(2) == 0 { factor / &f } else { factor * &f };
        }
        prop_assert_eq!(xb, xa * &factor);
    }

    #[test]
    fn sign_and_metric_parts_recombine(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FiniteGroup::catalog("C4").unwrap();
        let (p, s) = random_complex(&g, &mut rng, RandomComplexSpec::default()).unwrap();
        let h = chi_hermitian(&p, &s).unwrap();
        let (m, sc) = decompose_sign(&h);
        prop_assert!(m.entries.iter().all(|e| e.arch_sign == 1));
        prop_assert_eq!(recombine(&m, &sc), h);
        prop_assert!(chi_arakelov(&p, &s).unwrap().entries.iter().all(|e| e.arch_sign == 1));
    }

    #[test]
    fn group_ring_form_is_hermitian_and_selfadjoint(seed in any::<u64>(), q in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FiniteGroup::catalog("S3").unwrap();
        let s = random_invariant_form(&g, q, &mut rng).unwrap();
        let t = group_ring_form(&g, &s, q).unwrap();
        prop_assert!(is_hermitian(&g, &t));
        for item in g.symplectic_basis().unwrap() {
            prop_assert!(is_selfadjoint(&t, &item));
            prop_assert_eq!(pf_fixed_space(&g, &s, q, &item).unwrap(), pf_group_ring(&g, &s, q, &item).unwrap());
        }
    }

    #[test]
    fn two_routes_agree_on_quaternion_complexes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FiniteGroup::catalog("Q8").unwrap();
        let (p, s) = random_complex(&g, &mut rng, RandomComplexSpec { rank_max: 1, ..Default::default() }).unwrap();
        let (v, m) = two_route_check(&p, &s, seed).unwrap();
        prop_assert!(v.iter().all(|x| x.holds()));
        prop_assert!(m.iter().all(|&b| b));
    }
}

#[test]
fn trace_form_of_golden_ratio_field() {
    // α = (1+√5)/2: Tr(α²) = 3, Tr(α·σα) = -2
    let g = FiniteGroup::catalog("C2").unwrap();
    let s = Matrix::from_ints(2, 2, &[3, -2, -2, 3]);
    let t = group_ring_form(&g, &s, 1).unwrap();
    assert_eq!(t.get(0, 0).coeffs, vec![Q::from_int(3), Q::from_int(-2)]);
}

#[test]
fn complex_in_degree_zero_with_identity_form_is_one() {
    let g = FiniteGroup::catalog("trivial").unwrap();
    let p = PerfectGComplex::concentrated(&g, 0, 1);
    let s = CohomologyPairing::from_blocks(0, vec![Matrix::identity(1)], |_, _| Matrix::identity(1));
    let h = chi_hermitian(&p, &s).unwrap();
    assert_eq!(h.entries[0].arch_sign, 1);
    assert_eq!(h.entries[0].arch_mag_sq, Cyclo::one());
}

#[test]
fn acyclic_unit_cell_with_zero_form_is_trivial_for_every_catalog_group() {
    for name in ["C2", "C3", "C4", "C6", "S3", "D4", "Q8"] {
        let g = FiniteGroup::catalog(name).unwrap();
        let p = PerfectGComplex::cell(&g, -1, hermpf::class_group::unit(&g, g.order() - 1, true));
        let s = empty_pairing(&p);
        assert!(chi_hermitian(&p, &s).unwrap().is_trivial(), "{name}");
    }
}
