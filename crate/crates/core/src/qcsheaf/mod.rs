//! Quasicharacter sheaves on a finite model `(A, F)` as cocycle pairs.
//!
//! Fixing a basis vector in every stalk turns the multiplication into a table
//! `a : A × A → Q/Z` and the Frobenius structure into `b : A → Q/Z`. Valid
//! tables satisfy
//!
//! ```text
//! a(x+y, z) + a(x, y) = a(x, y+z) + a(y, z)
//! a(Fx, Fy) − a(x, y) = b(x+y) − b(x) − b(y)
//! ```

mod iso;
mod json;
mod ops;
mod space;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::etale::EtaleGroupModel;
use crate::fgab::Element;
use crate::intlat::Qz;

pub use iso::{automorphisms, hom_set, is_isomorphic, is_morphism, Automorphism, HomSet, IsoOutcome};
pub use ops::{
    commutator_pairing, dual, external_product, kernel_sheaf, norm_functor, pullback,
    sheaf_from_character, tensor, trace, twist, unit, ClassInvariant, Trace,
};
pub use space::{class_level, enumerate_classes, ValidModelSpace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCSheafModel {
    base: EtaleGroupModel,
    a: Vec<Qz>,
    b: Vec<Qz>,
}

/// A violated defining equation, with the offending points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum Violation {
    Cocycle {
        x: Element,
        y: Element,
        z: Element,
        lhs: Qz,
        rhs: Qz,
    },
    Compatibility {
        x: Element,
        y: Element,
        lhs: Qz,
        rhs: Qz,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Cocycle { x, y, z, lhs, rhs } => write!(
                f,
                "cocycle fails at x={x:?} y={y:?} z={z:?}: {lhs} != {rhs}"
            ),
            Violation::Compatibility { x, y, lhs, rhs } => write!(
                f,
                "Frobenius compatibility fails at x={x:?} y={y:?}: {lhs} != {rhs}"
            ),
        }
    }
}

/// Diagnostics stop after this many witnesses.
pub const MAX_VIOLATIONS: usize = 32;

impl QCSheafModel {
    /// Tables indexed by the canonical element order; `a` is row-major.
    pub fn from_tables(base: EtaleGroupModel, a: Vec<Qz>, b: Vec<Qz>) -> Result<Self> {
        let n = base.order();
        if a.len() != n * n || b.len() != n {
            return Err(Error::InvalidInput(format!(
                "tables have sizes {} and {}, expected {} and {n}",
                a.len(),
                b.len(),
                n * n
            )));
        }
        Ok(QCSheafModel { base, a, b })
    }

    pub fn from_fns(
        base: EtaleGroupModel,
        fa: impl Fn(&[i64], &[i64]) -> Qz,
        fb: impl Fn(&[i64]) -> Qz,
    ) -> Self {
        let els = &base.tables().elements;
        let a = els
            .iter()
            .flat_map(|x| els.iter().map(|y| fa(x, y)).collect::<Vec<_>>())
            .collect();
        let b = els.iter().map(|x| fb(x)).collect();
        QCSheafModel { base, a, b }
    }

    pub fn base(&self) -> &EtaleGroupModel {
        &self.base
    }

    pub fn a_table(&self) -> &[Qz] {
        &self.a
    }

    pub fn b_table(&self) -> &[Qz] {
        &self.b
    }

    pub fn order(&self) -> usize {
        self.b.len()
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> Qz {
        self.a[i * self.b.len() + j]
    }

    #[inline]
    pub fn b(&self, i: usize) -> Qz {
        self.b[i]
    }

    pub fn a_at(&self, x: &[i64], y: &[i64]) -> Qz {
        let g = self.base.points();
        self.a(g.index_of(x), g.index_of(y))
    }

    pub fn b_at(&self, x: &[i64]) -> Qz {
        self.b(self.base.points().index_of(x))
    }

    pub(crate) fn into_parts(self) -> (EtaleGroupModel, Vec<Qz>, Vec<Qz>) {
        (self.base, self.a, self.b)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let t = self.base.tables();
        let n = t.len();
        let el = |i: usize| t.elements[i].clone();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let xy = t.sum(x, y);
                for z in 0..n {
                    let lhs = self.a(xy, z) + self.a(x, y);
                    let rhs = self.a(x, t.sum(y, z)) + self.a(y, z);
                    if lhs != rhs {
                        out.push(Violation::Cocycle {
                            x: el(x),
                            y: el(y),
                            z: el(z),
                            lhs,
                            rhs,
                        });
                        if out.len() >= MAX_VIOLATIONS {
                            return out;
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = self.a(t.frob[x], t.frob[y]) - self.a(x, y);
                let rhs = self.b(t.sum(x, y)) - self.b(x) - self.b(y);
                if lhs != rhs {
                    out.push(Violation::Compatibility {
                        x: el(x),
                        y: el(y),
                        lhs,
                        rhs,
                    });
                    if out.len() >= MAX_VIOLATIONS {
                        return out;
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn validated(self) -> Result<Self> {
        match self.validate().first() {
            None => Ok(self),
            Some(v) => Err(Error::InvariantViolation(v.to_string())),
        }
    }
}
