mod common;

use proptest::prelude::*;
use qcs_core::etale::EtaleGroupModel;
use qcs_core::fgab::{add_characters, all_characters, eval, FixedAlternating};
use qcs_core::qcsheaf::{
    automorphisms, commutator_pairing, dual, hom_set, is_isomorphic, is_morphism, norm_functor,
    sheaf_from_character, tensor, trace, twist, unit, ClassInvariant, HomSet, QCSheafModel,
    ValidModelSpace,
};
use qcs_core::Qz;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn neg(v: &[Qz]) -> Vec<Qz> {
    v.iter().map(|&x| -x).collect()
}

fn add(u: &[Qz], v: &[Qz]) -> Vec<Qz> {
    u.iter().zip(v).map(|(&x, &y)| x + y).collect()
}

fn setup(idx: usize, seed: u64) -> (EtaleGroupModel, ValidModelSpace, ChaCha8Rng) {
    let suite = common::suite();
    let e = suite[idx % suite.len()].clone();
    let space = ValidModelSpace::new(&e);
    (e, space, ChaCha8Rng::seed_from_u64(seed))
}

fn random_shift(e: &EtaleGroupModel, rng: &mut ChaCha8Rng) -> Vec<Qz> {
    (0..e.order()).map(|_| Qz::new(rng.gen_range(0..60), 60)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn samples_are_valid_and_traces_are_homomorphisms(idx in 0usize..64, seed in any::<u64>()) {
        let (e, space, mut rng) = setup(idx, seed);
        let q = space.sample(&mut rng);
        prop_assert!(q.is_valid());
        let (fixed, incl) = e.fixed_points();
        let pts: Vec<_> = fixed.elements().iter().map(|y| incl.apply(y)).collect();
        for x in &pts {
            for y in &pts {
                let s = e.points().add(x, y);
                prop_assert_eq!(q.b_at(&s), q.b_at(x) + q.b_at(y));
            }
        }
        let t = trace(&q);
        for y in fixed.elements() {
            prop_assert_eq!(t.at(&y), q.b_at(&incl.apply(&y)));
        }
    }

    #[test]
    fn isomorphism_is_an_equivalence(idx in 0usize..64, seed in any::<u64>()) {
        let (e, space, mut rng) = setup(idx, seed);
        let q = space.sample(&mut rng);
        let (d1, d2) = (random_shift(&e, &mut rng), random_shift(&e, &mut rng));
        let r = twist(&q, &d1);
        let s = twist(&r, &d2);
        let w_qq = is_isomorphic(&q, &q).unwrap();
        prop_assert!(w_qq.is_isomorphic());
        let w_qr = is_isomorphic(&q, &r).unwrap().witness().unwrap().to_vec();
        let w_rs = is_isomorphic(&r, &s).unwrap().witness().unwrap().to_vec();
        prop_assert_eq!(&twist(&q, &w_qr), &r);
        prop_assert_eq!(&twist(&r, &neg(&w_qr)), &q);
        prop_assert_eq!(&twist(&q, &add(&w_qr, &w_rs)), &s);
        prop_assert!(is_isomorphic(&r, &q).unwrap().is_isomorphic());
        prop_assert!(is_isomorphic(&q, &s).unwrap().is_isomorphic());
        // a second independent sample is isomorphic exactly when its invariant agrees
        let p = space.sample(&mut rng);
        let fa = FixedAlternating::new(e.module());
        prop_assert_eq!(
            is_isomorphic(&q, &p).unwrap().is_isomorphic(),
            ClassInvariant::of(&q, &fa) == ClassInvariant::of(&p, &fa)
        );
    }

    #[test]
    fn trace_is_a_class_function_and_a_homomorphism(idx in 0usize..64, seed in any::<u64>()) {
        let (e, space, mut rng) = setup(idx, seed);
        let q = space.sample(&mut rng);
        let r = space.sample(&mut rng);
        let shifted = twist(&q, &random_shift(&e, &mut rng));
        prop_assert_eq!(trace(&shifted).character, trace(&q).character);
        let qr = tensor(&q, &r).unwrap();
        prop_assert!(qr.is_valid());
        prop_assert_eq!(trace(&qr).character, add_characters(&trace(&q).character, &trace(&r).character));
        prop_assert_eq!(trace(&dual(&q)).character, neg(&trace(&q).character));
        prop_assert!(is_isomorphic(&tensor(&q, &dual(&q)).unwrap(), &unit(&e)).unwrap().is_isomorphic());
        let e_q = commutator_pairing(&q);
        prop_assert_eq!(commutator_pairing(&shifted), e_q);
    }

    #[test]
    fn nonzero_morphisms_are_isomorphisms(idx in 0usize..64, seed in any::<u64>()) {
        let (e, space, mut rng) = setup(idx, seed);
        let q = space.sample(&mut rng);
        let r = if rng.gen_bool(0.5) { twist(&q, &random_shift(&e, &mut rng)) } else { space.sample(&mut rng) };
        match hom_set(&q, &r).unwrap() {
            HomSet::ZeroOnly => prop_assert!(!is_isomorphic(&q, &r).unwrap().is_isomorphic()),
            HomSet::Isomorphisms { witness, torsor_size } => {
                let f: Vec<Option<Qz>> = witness.iter().map(|&d| Some(-d)).collect();
                prop_assert!(is_morphism(&q, &r, &f).unwrap());
                prop_assert_eq!(torsor_size, e.coinvariants().0.order().unwrap());
            }
        }
        // a stalk family that vanishes somewhere but not everywhere is never a morphism
        if e.order() > 1 {
            let mut f: Vec<Option<Qz>> = random_shift(&e, &mut rng).into_iter().map(Some).collect();
            let k = rng.gen_range(0..e.order());
            f[k] = None;
            prop_assert!(!is_morphism(&q, &r, &f).unwrap());
        }
        prop_assert!(is_morphism(&q, &r, &vec![None; e.order()]).unwrap());
    }

    #[test]
    fn automorphisms_are_the_coinvariant_characters(idx in 0usize..64, seed in any::<u64>()) {
        let (e, space, mut rng) = setup(idx, seed);
        let q = space.sample(&mut rng);
        let auts = automorphisms(&q);
        prop_assert_eq!(auts.len() as u64, e.coinvariants().0.order().unwrap());
        for a in &auts {
            let f: Vec<Option<Qz>> = a.scalars.iter().map(|&s| Some(s)).collect();
            prop_assert!(is_morphism(&q, &q, &f).unwrap());
        }
    }

    #[test]
    fn norm_functor_trace_gap_is_the_commutator(idx in 0usize..64, seed in any::<u64>()) {
        let (e, space, mut rng) = setup(idx, seed);
        let q = space.sample(&mut rng);
        let chi = trace(&q);
        let e_q = commutator_pairing(&q);
        let q2 = norm_functor(&q, 2).unwrap();
        prop_assert!(q2.is_valid());
        let nm = e.norm_map(2);
        let (fixed2, incl2) = q2.base().fixed_points();
        for y in fixed2.elements() {
            let x = incl2.apply(&y);
            let lhs = trace(&q2).at(&y);
            let rhs = q.b_at(&nm.apply(&x));
            let (i, j) = (e.index_of(&x), e.index_of(&e.apply_frob(&x)));
            prop_assert_eq!(lhs - rhs, e_q[i * e.order() + j]);
        }
        // with a symmetric multiplication the square commutes for every degree
        let sym = twist(&sheaf_from_character(&e, &chi.character).unwrap(), &random_shift(&e, &mut rng));
        for n in 1..=4 {
            let qn = norm_functor(&sym, n).unwrap();
            let nm = e.norm_map(n);
            let (fixed_n, incl_n) = qn.base().fixed_points();
            let t = trace(&qn);
            for y in fixed_n.elements() {
                let x = incl_n.apply(&y);
                prop_assert_eq!(t.at(&y), sym.b_at(&nm.apply(&x)));
            }
        }
    }
}

#[test]
fn section_characters_round_trip() {
    for e in common::suite() {
        let (fixed, _) = e.fixed_points();
        for chi in all_characters(&fixed).unwrap() {
            let s = sheaf_from_character(&e, &chi).unwrap();
            assert!(s.is_valid());
            let t = trace(&s);
            assert_eq!(t.character, chi);
            for y in fixed.elements() {
                assert_eq!(t.at(&y), eval(&chi, &y));
            }
        }
    }
}

#[test]
fn sheaf_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for e in common::suite() {
        let q = ValidModelSpace::new(&e).sample(&mut rng);
        let s = serde_json::to_string(&q).unwrap();
        let back: QCSheafModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
