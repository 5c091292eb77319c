use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wigner_codes::codes::{hamming_distance, simplex_code, Word};
use wigner_codes::faceops::{conjugate_label, face_operator, FaceLabel};
use wigner_codes::mub::{MubSet, WeylOp};
use wigner_codes::qlinalg::{hs_inner, random_density_matrix_with, random_hermitian_with};
use wigner_codes::wigner::{dwf, reconstruct, stab_polytope_min, DwfSpec};
use wigner_codes::{ComplexMatrix, ComplexVector, GaloisField};

const TOL: f64 = 1e-9;
const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn mub(q: u64) -> Arc<MubSet> {
    static CACHE: OnceLock<Vec<Arc<MubSet>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| ORDERS.iter().map(|&q| Arc::new(MubSet::with_order(q).unwrap())).collect());
    Arc::clone(&all[ORDERS.iter().position(|&o| o == q).unwrap()])
}

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(ORDERS.to_vec())
}

fn odd_order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 9])
}

fn facet(q: u64) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..q as usize, q as usize + 1)
}

fn tr_ab(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamming_distance_is_a_metric(a in facet(3).prop_map(|v| v[..4].to_vec()),
                                    b in facet(3).prop_map(|v| v[..4].to_vec()),
                                    c in facet(3).prop_map(|v| v[..4].to_vec())) {
        let f = GaloisField::with_order(3).unwrap();
        let w = |v: &[usize]| Word::from_indices(&f, v).unwrap();
        let (a, b, c) = (w(&a), w(&b), w(&c));
        let ab = hamming_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, hamming_distance(&b, &a).unwrap());
        prop_assert_eq!(ab == 0, a == b);
        prop_assert!(hamming_distance(&a, &c).unwrap() <= ab + hamming_distance(&b, &c).unwrap());
    }

    #[test]
    fn field_axioms_on_random_elements(q in order(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let f = GaloisField::with_order(q).unwrap();
        let n = f.q();
        let (a, b, c) = (f.element(i % n).unwrap(), f.element(j % n).unwrap(), f.element(k % n).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
    }

    #[test]
    fn hs_inner_is_conjugate_symmetric(q in order(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian_with(&mut rng, q as usize).scale(Complex64::new(0.3, 1.1));
        let b = random_density_matrix_with(&mut rng, q as usize);
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < TOL);
        prop_assert!(hs_inner(&a, &a).unwrap().re >= 0.0);
    }

    #[test]
    fn overlap_follows_label_distance(q in order(), r in facet(9), s in facet(9), size in 1usize..=10) {
        let m = mub(q);
        let n = q as usize + 1;
        let size = 1 + (size - 1) % n;
        let positions: Vec<usize> = (0..size).map(|i| i * n / size).collect();
        let r: Vec<usize> = r[..size].iter().map(|v| v % q as usize).collect();
        let s: Vec<usize> = s[..size].iter().map(|v| v % q as usize).collect();
        let lr = FaceLabel::from_positions(m.field(), &positions, &r).unwrap();
        let ls = FaceLabel::from_positions(m.field(), &positions, &s).unwrap();
        let d = r.iter().zip(&s).filter(|(a, b)| a != b).count() as f64;
        let a = face_operator(&m, &lr).unwrap();
        let b = face_operator(&m, &ls).unwrap();
        prop_assert!((tr_ab(a.matrix(), b.matrix()) - (q as f64 - d)).abs() < TOL);
    }

    #[test]
    fn coset_translation_preserves_distance(q in order(), r in facet(9), s in facet(9), msg in (0usize..9, 0usize..9)) {
        let f = mub(q).field().clone();
        let n = q as usize;
        let w = |v: &[usize]| Word::from_indices(&f, &v[..=n].iter().map(|x| x % n).collect::<Vec<_>>()).unwrap();
        let (r, s) = (w(&r), w(&s));
        let code = simplex_code(Arc::clone(&f));
        let c = code.encode(&[f.element(msg.0 % n).unwrap(), f.element(msg.1 % n).unwrap()]).unwrap();
        let before = hamming_distance(&r, &s).unwrap();
        let after = hamming_distance(&r.add(&f, &c).unwrap(), &s.add(&f, &c).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn wigner_function_is_normalized(q in order(), leader in facet(9), seed in any::<u64>()) {
        let m = mub(q);
        let v: Vec<usize> = leader.iter().take(q as usize + 1).map(|x| x % q as usize).collect();
        let spec = DwfSpec::new(Arc::clone(&m), FaceLabel::facet_from_indices(m.field(), &v).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density_matrix_with(&mut rng, q as usize);
        let table = dwf(&spec, &rho).unwrap();
        prop_assert!((table.sum() - 1.0).abs() < TOL);
        prop_assert!(reconstruct(&spec, &table).unwrap().max_abs_diff(&rho) < TOL);
    }

    #[test]
    fn conjugation_covariance(q in odd_order(), v in facet(9), x in 0usize..9, z in 0usize..9) {
        let m = mub(q);
        let f = m.field().clone();
        let n = q as usize;
        let v: Vec<usize> = v.iter().take(n + 1).map(|a| a % n).collect();
        let r = FaceLabel::facet_from_indices(&f, &v).unwrap();
        let (x, z) = (f.element(x % n).unwrap(), f.element(z % n).unwrap());
        let image = conjugate_label(&f, &r, x, z).unwrap();
        let lhs = WeylOp::new(&f, x, z).conjugate(face_operator(&m, &r).unwrap().matrix());
        prop_assert!(lhs.max_abs_diff(face_operator(&m, &image).unwrap().matrix()) < TOL);
    }

    #[test]
    fn matrix_json_round_trip(q in order(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian_with(&mut rng, q as usize);
        let back = ComplexMatrix::from_json(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&a) < 1e-12);
        let v = ComplexVector::new(a.data()[..q as usize].to_vec());
        let back = ComplexVector::from_json(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&v) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fast_polytope_minimum_matches_brute_force(q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>()) {
        let m = mub(q);
        let n = q as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density_matrix_with(&mut rng, n);
        let fast = stab_polytope_min(&m, &rho).unwrap();
        let mut brute = f64::INFINITY;
        for code in 0..n.pow(n as u32 + 1) {
            let mut v = vec![0; n + 1];
            let mut c = code;
            for slot in v.iter_mut() {
                *slot = c % n;
                c /= n;
            }
            let a = face_operator(&m, &FaceLabel::facet_from_indices(m.field(), &v).unwrap()).unwrap();
            brute = brute.min(tr_ab(a.matrix(), &rho));
        }
        prop_assert!((fast.min - brute).abs() < TOL);
    }
}
