mod common;

use qcs_core::catalog::model_classes_up_to;
use qcs_core::cohomology::{ses_inclusion, ses_projection, s_map, total_h2, verify_s_iso};
use qcs_core::dictionary::{classify, kernel_structure, smooth_model_report, split_rational_points, SmoothModel};
use qcs_core::etale::EtaleGroupModel;
use qcs_core::fgab::{all_characters, FgAbGroup, FixedAlternating};
use qcs_core::qcsheaf::{tensor, trace, ValidModelSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn total_h2_paths_agree() {
    for e in model_classes_up_to(12) {
        let r = total_h2(&e, 12).unwrap();
        assert!(r.consistent, "{:?}: {r:?}", e.points().factors());
        assert!(r.projection_kills_kernel);
        assert_eq!(r.projection_image, Some(r.quotient));
        assert_eq!(r.kernel, kernel_structure(e.module()).torsion_order());
    }
}

#[test]
fn ses_maps_compose_to_zero() {
    for e in common::suite() {
        let fa = FixedAlternating::new(e.module());
        for psi in all_characters(fa.group()).unwrap() {
            let c = ses_inclusion(&e, &psi).unwrap();
            assert!(c.is_cocycle(&e));
            assert!(ses_projection(&e, &c).unwrap().iter().all(|q| q.is_zero()));
        }
    }
}

#[test]
fn s_map_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for e in common::suite() {
        let space = ValidModelSpace::new(&e);
        let (q, r) = (space.sample(&mut rng), space.sample(&mut rng));
        let (sq, sr, sqr) = (s_map(&q), s_map(&r), s_map(&tensor(&q, &r).unwrap()));
        let sum: Vec<_> = sq.alpha.iter().zip(&sr.alpha).map(|(&x, &y)| x + y).collect();
        assert_eq!(sqr.alpha, sum);
        let sum: Vec<_> = sq.beta.iter().zip(&sr.beta).map(|(&x, &y)| x + y).collect();
        assert_eq!(sqr.beta, sum);
    }
}

#[test]
fn classification_counts_match_the_bijection() {
    for e in model_classes_up_to(8) {
        let c = classify(&e, 8).unwrap();
        let s = verify_s_iso(&e, 8, 3).unwrap();
        assert!(s.bijective, "{:?}", s.mismatches);
        assert_eq!(c.total, s.sheaf_classes);
        assert_eq!(c.cross_checked, Some(true));
        assert!(c.split);
        // every character of A^F is hit with exactly that trace
        for entry in &c.classes {
            assert_eq!(trace(&entry.representative).character, entry.trace);
        }
    }
}

#[test]
fn classify_beyond_the_bound_skips_only_the_cross_check() {
    let e = common::model(&[2, 2, 2], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let c = classify(&e, 4).unwrap();
    assert_eq!(c.cross_checked, None);
    assert_eq!(c.total, 8 * 8);
}

#[test]
fn smooth_reports_degenerate_correctly() {
    for g0 in [FgAbGroup::cyclic(3), FgAbGroup::new(vec![2, 4]).unwrap()] {
        let r = smooth_model_report(
            &SmoothModel {
                identity_component_points: g0.clone(),
                pi0: EtaleGroupModel::trivial(),
                rational_points: None,
            },
            12,
        )
        .unwrap();
        assert_eq!(r.qciso_order, g0.order().unwrap());
        assert!(r.kernel.is_trivial() && r.aut.is_trivial());
    }
    for pi0 in model_classes_up_to(8) {
        let c = classify(&pi0, 8).unwrap();
        let etale = SmoothModel {
            identity_component_points: FgAbGroup::trivial(),
            pi0: pi0.clone(),
            rational_points: None,
        };
        let r = smooth_model_report(&etale, 8).unwrap();
        assert_eq!(r.qciso_order, c.total);
        assert_eq!(r.sequence.component, c.total);
        let g0 = FgAbGroup::cyclic(5);
        let full = SmoothModel {
            identity_component_points: g0.clone(),
            pi0: pi0.clone(),
            rational_points: Some(split_rational_points(&g0, &pi0)),
        };
        let r = smooth_model_report(&full, 8).unwrap();
        assert_eq!(r.qciso_order, 5 * c.total);
        assert_eq!(r.aut.torsion_order(), pi0.coinvariants().0.order().unwrap());
        assert!(r.note.is_none());
    }
}
