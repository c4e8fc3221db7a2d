//! The Weil-group total complex of a finite model, the map from sheaves to
//! its second cohomology, and brute-force class counts.

pub mod complex;

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::etale::EtaleGroupModel;
use crate::fgab::{all_characters, FgAbGroup, FixedAlternating};
use crate::intlat::{level_classes, Qz};
use crate::qcsheaf::{
    enumerate_classes, is_isomorphic, kernel_sheaf, tensor, trace, twist, QCSheafModel,
    ValidModelSpace,
};

pub const DEFAULT_BOUND: usize = 12;

/// Cap on the number of classes any enumeration may produce.
pub const CLASS_LIMIT: usize = 1 << 16;

/// `α ⊕ β` with `α` row-major on element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalCocycle {
    pub alpha: Vec<Qz>,
    pub beta: Vec<Qz>,
}

impl TotalCocycle {
    pub fn is_cocycle(&self, base: &EtaleGroupModel) -> bool {
        QCSheafModel::from_tables(base.clone(), self.alpha.clone(), self.beta.clone())
            .map(|q| q.is_valid())
            .unwrap_or(false)
    }

    fn values(&self) -> impl Iterator<Item = &Qz> {
        self.alpha.iter().chain(&self.beta)
    }
}

/// The class of a sheaf in the total complex. In table coordinates the
/// identification is definitional: `α = a`, `β = b`.
pub fn s_map(q: &QCSheafModel) -> TotalCocycle {
    TotalCocycle {
        alpha: q.a_table().to_vec(),
        beta: q.b_table().to_vec(),
    }
}

fn check_bound(g: &FgAbGroup, bound: usize) -> Result<usize> {
    let n = g.order().ok_or_else(|| Error::Infinite(g.factors().to_vec()))? as usize;
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "group order",
            bound: bound as u64,
            actual: n as u64,
        });
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Classes {
    pub count: usize,
    pub level: u64,
    /// 2-cocycles `A × A → Q/Z`, row-major; the zero class first.
    pub representatives: Vec<Vec<Qz>>,
}

/// Classes of `H²(A, Q/Z)` from level-`exp(A)` cocycles, separated exactly.
pub fn h2_finite_group_oracle(g: &FgAbGroup, bound: usize) -> Result<H2Classes> {
    check_bound(g, bound)?;
    let base = EtaleGroupModel::constant(g.clone())?;
    let level = g.exponent().expect("finite");
    let eqs = complex::group_cocycle_equations(base.tables());
    let reps = level_classes(&eqs, base.group_coboundary(), level, CLASS_LIMIT).ok_or(
        Error::BoundExceeded {
            what: "H2 classes",
            bound: CLASS_LIMIT as u64,
            actual: CLASS_LIMIT as u64 + 1,
        },
    )?;
    Ok(H2Classes {
        count: reps.len(),
        level,
        representatives: reps
            .iter()
            .map(|c| c.iter().map(|&k| Qz::from_level(k, level)).collect())
            .collect(),
    })
}

/// Second cohomology of the total complex and its short exact sequence
/// `0 → H²(A)^F → H² → Hom(A^F, Q/Z) → 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TotalH2Report {
    pub classes: u64,
    pub kernel: u64,
    pub quotient: u64,
    pub consistent: bool,
    /// Count from enumeration, when within the bound.
    pub enumerated: Option<u64>,
    /// `|(Λ²A)_F| · |A^F|`.
    pub structural: u64,
    /// Projection after inclusion vanishes on every kernel class.
    pub projection_kills_kernel: bool,
    /// Number of distinct traces among the enumerated classes.
    pub projection_image: Option<u64>,
}

/// The inclusion of Frobenius-fixed `H²(A)` classes: `ψ ↦ [α ⊕ β]` with
/// trivial trace and commutator pairing `ψ`.
pub fn ses_inclusion(base: &EtaleGroupModel, psi: &[Qz]) -> Result<TotalCocycle> {
    let fa = FixedAlternating::new(base.module());
    Ok(s_map(&kernel_sheaf(base, &fa, psi)?))
}

/// The projection `[α ⊕ β] ↦ [β]`: `β` restricted to `A^F`, a character.
pub fn ses_projection(base: &EtaleGroupModel, c: &TotalCocycle) -> Result<Vec<Qz>> {
    let q = QCSheafModel::from_tables(base.clone(), c.alpha.clone(), c.beta.clone())?;
    Ok(trace(&q).character)
}

pub fn total_h2(e: &EtaleGroupModel, bound: usize) -> Result<TotalH2Report> {
    let fa = FixedAlternating::new(e.module());
    let kernel = fa.group().order().expect("finite");
    let quotient = e.fixed_points().0.order().expect("finite");
    let structural = kernel * quotient;

    let mut projection_kills_kernel = true;
    for psi in all_characters(fa.group())? {
        let c = ses_inclusion(e, &psi)?;
        if !c.is_cocycle(e) || ses_projection(e, &c)?.iter().any(|v| !v.is_zero()) {
            projection_kills_kernel = false;
        }
    }

    let (enumerated, projection_image) = if e.order() <= bound {
        let reps = enumerate_classes(e, CLASS_LIMIT)?;
        let mut traces: Vec<Vec<Qz>> = reps.iter().map(|q| trace(q).character).collect();
        traces.sort();
        traces.dedup();
        (Some(reps.len() as u64), Some(traces.len() as u64))
    } else {
        (None, None)
    };
    let consistent = projection_kills_kernel
        && enumerated.is_none_or(|n| n == structural)
        && projection_image.is_none_or(|n| n == quotient);
    Ok(TotalH2Report {
        classes: enumerated.unwrap_or(structural),
        kernel,
        quotient,
        consistent,
        enumerated,
        structural,
        projection_kills_kernel,
        projection_image,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SIsoReport {
    pub sheaf_classes: u64,
    pub total_classes: u64,
    pub samples: u64,
    pub bijective: bool,
    pub mismatches: Vec<String>,
}

/// Buckets a seeded sample of valid sheaves by `is_isomorphic` and compares
/// the buckets with the classes of their images in the total complex.
pub fn verify_s_iso(e: &EtaleGroupModel, bound: usize, seed: u64) -> Result<SIsoReport> {
    check_bound(e.points(), bound)?;
    let reps = enumerate_classes(e, CLASS_LIMIT)?;
    let total_classes = reps.len() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = ValidModelSpace::new(e);
    let n = e.order();
    let level = 2 * crate::qcsheaf::class_level(e);

    let mut samples: Vec<QCSheafModel> = Vec::new();
    for r in &reps {
        samples.push(r.clone());
        let d: Vec<Qz> = (0..n)
            .map(|_| Qz::from_level(rand::Rng::gen_range(&mut rng, 0..level as i64), level))
            .collect();
        samples.push(twist(r, &d));
    }
    for _ in 0..reps.len().max(4) {
        samples.push(space.sample(&mut rng));
    }
    for i in 0..reps.len().min(8) {
        let j = rand::Rng::gen_range(&mut rng, 0..reps.len());
        samples.push(tensor(&reps[i], &samples[samples.len() - 1 - i])?);
        samples.push(tensor(&reps[j], &reps[i])?);
    }

    let obs = e.total_coboundary().obstruction_map(level);
    let key_of = |q: &QCSheafModel| -> Result<Vec<i64>> {
        let c: Option<Vec<i64>> = s_map(q).values().map(|v| v.at_level(level)).collect();
        let c = c.ok_or_else(|| Error::InvariantViolation("sample outside the level".into()))?;
        Ok(obs.key(&c))
    };

    let mut mismatches = Vec::new();
    let mut buckets: Vec<(QCSheafModel, Vec<i64>)> = Vec::new();
    for q in &samples {
        if !q.is_valid() {
            mismatches.push("sampled sheaf is invalid".into());
            continue;
        }
        let key = key_of(q)?;
        let mut found = None;
        for (bi, (rep, _)) in buckets.iter().enumerate() {
            if is_isomorphic(rep, q)?.is_isomorphic() {
                found = Some(bi);
                break;
            }
        }
        match found {
            Some(bi) => {
                if buckets[bi].1 != key {
                    mismatches.push(format!("bucket {bi} meets two total classes"));
                }
            }
            None => buckets.push((q.clone(), key)),
        }
    }
    let mut by_key: HashMap<&[i64], usize> = HashMap::new();
    for (bi, (_, k)) in buckets.iter().enumerate() {
        if let Some(prev) = by_key.insert(k, bi) {
            mismatches.push(format!("buckets {prev} and {bi} have the same total class"));
        }
    }
    if by_key.len() as u64 != total_classes {
        mismatches.push(format!(
            "{} total classes reached, {total_classes} exist",
            by_key.len()
        ));
    }
    Ok(SIsoReport {
        sheaf_classes: buckets.len() as u64,
        total_classes,
        samples: samples.len() as u64,
        bijective: mismatches.is_empty(),
        mismatches,
    })
}
