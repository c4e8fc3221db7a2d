use qcs_core::catalog::model_classes_up_to;
use qcs_core::etale::{canonical_inclusion, weil_restriction, EtaleGroupModel};

fn order(g: &qcs_core::fgab::FgAbGroup) -> u64 {
    g.order().unwrap()
}

#[test]
fn fixed_points_and_coinvariants_agree_in_size() {
    for e in model_classes_up_to(16) {
        assert_eq!(order(&e.fixed_points().0), order(&e.coinvariants().0));
    }
}

#[test]
fn weil_restriction_preserves_rational_points() {
    for e in model_classes_up_to(8) {
        for n in 1..=3 {
            let r = weil_restriction(&e, n).unwrap();
            assert_eq!(r.order(), e.order().pow(n));
            assert_eq!(order(&r.fixed_points().0), order(&e.fixed_points().0));
        }
    }
}

#[test]
fn canonical_inclusion_is_equivariant() {
    for e in model_classes_up_to(16) {
        let top = if e.order() <= 4 { 4 } else { 2 };
        for n in 1..=top {
            let (res, iota) = canonical_inclusion(&e, n).unwrap();
            res.model.check_equivariant(&e, &iota).unwrap();
            assert!(iota.is_injective());
            let fixed = res.model.fixed_points().0;
            assert_eq!(order(&fixed), order(&e.base_change(n).unwrap().fixed_points().0));
        }
    }
}

#[test]
fn base_change_iterates_frobenius() {
    for e in model_classes_up_to(12) {
        let b: EtaleGroupModel = e.base_change(2).unwrap();
        for x in e.points().elements() {
            assert_eq!(b.apply_frob(&x), e.apply_frob(&e.apply_frob(&x)));
        }
    }
}
