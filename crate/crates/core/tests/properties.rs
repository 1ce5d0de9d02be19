mod common;

use std::sync::Arc;

use common::*;
use hopfkit::maps::projective_test;
use hopfkit::yd::YDModule;
use hopfkit::*;
use proptest::prelude::*;

fn fields() -> Vec<Field> {
    ["rational", "prime(7)", "cyclotomic(3)", "cyclotomic(9)"]
        .iter()
        .map(|s| Field::new(s.parse().unwrap()).unwrap())
        .collect()
}

/// a + b z + c z^2 with small rational coefficients (z = 1 outside
/// cyclotomic fields, so the element is still well defined).
fn element(f: &Field, c: &[(i64, i64)]) -> Scalar {
    let z = f.zeta().unwrap_or_else(|| f.one());
    let mut acc = f.zero();
    let mut pow = f.one();
    for &(num, den) in c {
        let q = f.from_int(num).try_div(&f.from_int(den)).unwrap_or_else(|_| f.from_int(num));
        acc = &acc + &(&q * &pow);
        pow = &pow * &z;
    }
    acc
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-9i64..=9, 1i64..=5), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(fi in 0usize..4, a in coeffs(), b in coeffs(), c in coeffs()) {
        let f = &fields()[fi];
        let (x, y, z) = (element(f, &a), element(f, &b), element(f, &c));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, f.zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn literal_round_trip(fi in 0usize..4, a in coeffs()) {
        let f = &fields()[fi];
        let x = element(f, &a);
        prop_assert_eq!(f.parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..6)) {
        let f = Field::rational();
        let r: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = Matrix::from_ints(&f, &r);
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), 6);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
        let (s, d) = (m.rref_sparse(), m.rref_dense());
        prop_assert_eq!(s.pivots, d.pivots);
        prop_assert_eq!(s.matrix.to_dense(), d.matrix.to_dense());
    }

    #[test]
    fn inverse(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 4)) {
        let f = Field::new("cyclotomic(3)".parse().unwrap()).unwrap();
        let r: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = Matrix::from_ints(&f, &r);
        match m.invert() {
            Ok(inv) => prop_assert_eq!(inv.mul(&m).unwrap().to_dense(), Matrix::identity(&f, 4).to_dense()),
            Err(_) => prop_assert!(m.rank() < 4),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn integral_spaces(i in 0..HOPF_BUILTINS.len()) {
        let h = hopf(HOPF_BUILTINS[i]);
        prop_assert_eq!(integrals(&h), Ok(()));
    }

    #[test]
    fn frobenius_tests_and_half_braiding(i in 0usize..64, regular in any::<bool>()) {
        let maps = generated_maps(27);
        let f = &maps[i % maps.len()];
        prop_assert_eq!(frobenius_tests_agree(f), Ok(()));
        let t = f.target();
        let x = if regular && t.dim() <= 27 { ModuleRep::regular(t) } else { ModuleRep::trivial(t) };
        prop_assert_eq!(half_braiding_props(f, &x, &ModuleRep::trivial(t)), Ok(()));
    }

    #[test]
    fn rescaled_forms(i in 0..HOPF_BUILTINS.len(), num in -7i64..=7, den in 1i64..=5) {
        prop_assume!(num != 0);
        let h = hopf(HOPF_BUILTINS[i]);
        prop_assume!(h.dim() <= 9);
        let c = h.field().from_int(num).try_div(&h.field().from_int(den)).unwrap();
        prop_assert_eq!(rescaling_invariance(&h, &c), Ok(()));
    }

    #[test]
    fn duals_and_hexagons(i in 0..HOPF_BUILTINS.len(), pick in prop::collection::vec(any::<bool>(), 3)) {
        let h = hopf(HOPF_BUILTINS[i]);
        prop_assume!(h.dim() <= 6);
        let adj = YDModule::adjoint(&h).unwrap();
        let triv = YDModule::trivial(&h);
        let m = |b: bool| if b { adj.clone() } else { triv.clone() };
        prop_assert_eq!(yd_zigzags(&adj), Ok(()));
        prop_assert_eq!(hexagon(&m(pick[0]), &m(pick[1]), &m(pick[2])), Ok(()));
        prop_assert_eq!(dagger_zigzags(&Arc::new(ComoduleAlgebra::regular(&h))), Ok(()));
    }

    #[test]
    fn free_modules(i in 0..HOPF_BUILTINS.len(), copies in 1usize..=3) {
        let h = hopf(HOPF_BUILTINS[i]);
        prop_assume!(h.dim() <= 9);
        prop_assert_eq!(free_is_projective(&h, copies), Ok(()));
    }
}

#[test]
fn trivial_module_over_taft_is_not_projective() {
    for root in [1, 2] {
        let h = builtins::taft(3, root).unwrap();
        assert!(!projective_test(&ModuleRep::trivial(&h)));
    }
    // semisimple: every module is projective
    let h = builtins::cyclic(3, &Field::rational()).unwrap();
    assert!(projective_test(&ModuleRep::trivial(&h)));
}

#[test]
fn nat_dimension_matches_hom() {
    // T^k(H, k) is all of Hom(H, k) and H acts by the transpose of right
    // multiplication.
    for d in ["cyclic(3)", "taft(2, 1)", "taft(3)"] {
        let h = hopf(d);
        let l = Arc::new(ComoduleAlgebra::trivial(&h));
        let nat = yd::nat_algebra(&HLBimodule::regular(&l), true).unwrap();
        assert_eq!(nat.algebra.dim(), h.dim());
        let f = h.field();
        let value = |v: &SparseVec, x: usize| nat.t.value(v, x).coeff(0, f);
        for a in 0..h.dim() {
            for t in 0..h.dim() {
                let et = SparseVec::unit(t, f);
                let acted = nat.algebra.module.module().act(&SparseVec::unit(a, f), &et);
                for x in 0..h.dim() {
                    let xa = h.mul_basis(x, a);
                    let expected = xa.iter().fold(f.zero(), |acc, (k, c)| &acc + &(c * &value(&et, k)));
                    assert_eq!(value(&acted, x), expected);
                }
            }
        }
    }
}

#[test]
fn pivot_is_monoidal() {
    let h = hopf("taft(2, 1)");
    let g = h.parse_element("K").unwrap();
    assert!(hopfkit::invariants::verify_pivotal(&h, &g).unwrap());
    let x = YDModule::adjoint(&h).unwrap();
    let xx = yd::yd_tensor(&x, &x).unwrap();
    let (px, _) = yd::yd_pivot(&x, &g).unwrap();
    let (pxx, _) = yd::yd_pivot(&xx, &g).unwrap();
    assert_eq!(pxx, px.tensor(&px));
}
