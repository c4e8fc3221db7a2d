use rand::Rng;

use super::QCSheafModel;
use crate::cohomology::complex::total_cocycle_equations;
use crate::error::{Error, Result};
use crate::etale::EtaleGroupModel;
use crate::intlat::{kernel_mod, level_classes, Qz};

/// Level at which every class of sheaves has table values: both graded pieces
/// of the classifying group are killed by `exp(A)`.
pub fn class_level(base: &EtaleGroupModel) -> u64 {
    let e = base.points().exponent().expect("finite");
    e * e
}

fn from_level_vector(base: &EtaleGroupModel, c: &[i64], level: u64) -> QCSheafModel {
    let n = base.order();
    let vals: Vec<Qz> = c.iter().map(|&k| Qz::from_level(k, level)).collect();
    QCSheafModel::from_tables(base.clone(), vals[..n * n].to_vec(), vals[n * n..].to_vec())
        .expect("sizes match")
}

/// Seeded sampler of valid sheaves: a random level-`exp(A)²` cocycle plus a
/// random coboundary at a finer level.
#[derive(Clone, Debug)]
pub struct ValidModelSpace {
    base: EtaleGroupModel,
    level: u64,
    gens: Vec<Vec<i64>>,
}

impl ValidModelSpace {
    pub fn new(base: &EtaleGroupModel) -> Self {
        let level = class_level(base);
        let gens = kernel_mod(&total_cocycle_equations(base.tables()), level);
        ValidModelSpace {
            base: base.clone(),
            level,
            gens,
        }
    }

    pub fn base(&self) -> &EtaleGroupModel {
        &self.base
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> QCSheafModel {
        let n = self.base.order();
        let l = self.level as i64;
        let mut c = vec![0i64; n * n + n];
        for g in &self.gens {
            let k = rng.gen_range(0..l.max(1));
            for (ci, gi) in c.iter_mut().zip(g) {
                *ci = (*ci + k * gi).rem_euclid(l);
            }
        }
        let q = from_level_vector(&self.base, &c, self.level);
        let fine = 2 * self.level;
        let r: Vec<Qz> = (0..n)
            .map(|_| Qz::from_level(rng.gen_range(0..fine as i64), fine))
            .collect();
        super::twist(&q, &r)
    }
}

/// One representative per isomorphism class, the unit first. Classes are
/// separated exactly over Q/Z; `limit` caps the number of classes.
pub fn enumerate_classes(base: &EtaleGroupModel, limit: usize) -> Result<Vec<QCSheafModel>> {
    let level = class_level(base);
    let eqs = total_cocycle_equations(base.tables());
    let reps = level_classes(&eqs, base.total_coboundary(), level, limit).ok_or(
        Error::BoundExceeded {
            what: "isomorphism classes",
            bound: limit as u64,
            actual: limit as u64 + 1,
        },
    )?;
    Ok(reps
        .iter()
        .map(|c| from_level_vector(base, c, level))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;
    use crate::intlat::IntMatrix;
    use crate::qcsheaf::is_isomorphic;

    fn model(f: &[u64], frob: &[&[i64]]) -> EtaleGroupModel {
        EtaleGroupModel::new(
            FgAbGroup::new(f.to_vec()).unwrap(),
            IntMatrix::from_rows(frob).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn class_counts() {
        let e = model(&[2, 2], &[&[1, 0], &[0, 1]]);
        let reps = enumerate_classes(&e, 1000).unwrap();
        assert_eq!(reps.len(), 8);
        assert!(reps.iter().all(|q| q.is_valid()));
        for i in 0..reps.len() {
            for j in 0..i {
                assert!(!is_isomorphic(&reps[i], &reps[j]).unwrap().is_isomorphic());
            }
        }
        assert_eq!(enumerate_classes(&model(&[5], &[&[2]]), 10).unwrap().len(), 1);
        assert_eq!(enumerate_classes(&model(&[4], &[&[3]]), 10).unwrap().len(), 2);
        assert!(enumerate_classes(&e, 4).is_err());
    }
}
