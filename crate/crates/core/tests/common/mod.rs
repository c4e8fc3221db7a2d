#![allow(dead_code)]

use qcs_core::etale::EtaleGroupModel;
use qcs_core::fgab::FgAbGroup;
use qcs_core::IntMatrix;

pub fn model(f: &[u64], frob: &[&[i64]]) -> EtaleGroupModel {
    EtaleGroupModel::new(
        FgAbGroup::new(f.to_vec()).unwrap(),
        IntMatrix::from_rows(frob).unwrap(),
    )
    .unwrap()
}

/// Hand-picked models covering trivial, cyclic, non-cyclic and twisted cases.
pub fn suite() -> Vec<EtaleGroupModel> {
    vec![
        EtaleGroupModel::trivial(),
        model(&[2], &[&[1]]),
        model(&[4], &[&[3]]),
        model(&[5], &[&[2]]),
        model(&[6], &[&[5]]),
        model(&[2, 2], &[&[1, 0], &[0, 1]]),
        model(&[2, 2], &[&[0, 1], &[1, 0]]),
        model(&[2, 2], &[&[0, 1], &[1, 1]]),
        model(&[2, 4], &[&[1, 0], &[0, 1]]),
        model(&[2, 4], &[&[1, 0], &[2, 1]]),
        model(&[3, 3], &[&[1, 0], &[0, 1]]),
        model(&[3, 3], &[&[0, 2], &[1, 0]]),
        model(&[2, 2, 2], &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
    ]
}
