use serde::Serialize;

use super::QCSheafModel;
use crate::error::{Error, Result};
use crate::fgab::{all_characters, eval, Character};
use crate::intlat::{Obstruction, Qz};

/// Outcome of an isomorphism test.
///
/// A witness `δ` satisfies `a' − a = δ(x) + δ(y) − δ(x+y)` and
/// `b' − b = δ(x) − δ(Fx)`. The corresponding isomorphism multiplies the
/// stalk at `x` by the root of unity `−δ(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum IsoOutcome {
    Isomorphic { witness: Vec<Qz> },
    NotIsomorphic { certificate_row: usize, residual: Qz },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }

    pub fn witness(&self) -> Option<&[Qz]> {
        match self {
            IsoOutcome::Isomorphic { witness } => Some(witness),
            IsoOutcome::NotIsomorphic { .. } => None,
        }
    }
}

fn difference(q: &QCSheafModel, r: &QCSheafModel) -> Result<Vec<Qz>> {
    if q.base() != r.base() {
        return Err(Error::BaseMismatch);
    }
    Ok(r.a_table()
        .iter()
        .zip(q.a_table())
        .chain(r.b_table().iter().zip(q.b_table()))
        .map(|(&x, &y)| x - y)
        .collect())
}

pub fn is_isomorphic(q: &QCSheafModel, r: &QCSheafModel) -> Result<IsoOutcome> {
    let rhs = difference(q, r)?;
    Ok(match q.base().total_coboundary().solve(&rhs) {
        Ok(witness) => IsoOutcome::Isomorphic { witness },
        Err(Obstruction { row, residual }) => IsoOutcome::NotIsomorphic {
            certificate_row: row,
            residual,
        },
    })
}

/// Whether the stalkwise scalars `f` (`None` for the zero map, `Some(s)` for
/// multiplication by `s`) define a morphism `q → r`.
pub fn is_morphism(q: &QCSheafModel, r: &QCSheafModel, f: &[Option<Qz>]) -> Result<bool> {
    if q.base() != r.base() {
        return Err(Error::BaseMismatch);
    }
    let t = q.base().tables();
    let n = t.len();
    let mul = |u: Option<Qz>, v: Option<Qz>| Some(u? + v?);
    for x in 0..n {
        for y in 0..n {
            // f(x+y)·μ(x,y) = μ'(x,y)·f(x)·f(y)
            let lhs = mul(f[t.sum(x, y)], Some(q.a(x, y)));
            let rhs = mul(mul(f[x], f[y]), Some(r.a(x, y)));
            if lhs != rhs {
                return Ok(false);
            }
        }
        // f(Fx)·φ(x) = φ'(x)·f(x)
        if mul(f[t.frob[x]], Some(q.b(x))) != mul(f[x], Some(r.b(x))) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomSet {
    ZeroOnly,
    /// The nonzero morphisms: a torsor under `Aut(q)` containing `witness`.
    Isomorphisms { witness: Vec<Qz>, torsor_size: u64 },
}

pub fn hom_set(q: &QCSheafModel, r: &QCSheafModel) -> Result<HomSet> {
    Ok(match is_isomorphic(q, r)? {
        IsoOutcome::NotIsomorphic { .. } => HomSet::ZeroOnly,
        IsoOutcome::Isomorphic { witness } => HomSet::Isomorphisms {
            witness,
            torsor_size: q.base().coinvariants().0.order().expect("finite"),
        },
    })
}

/// An automorphism: a character of `A_F` and the stalk scalars it induces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    pub character: Character,
    pub scalars: Vec<Qz>,
}

/// `Aut(q)`, indexed by the characters of the coinvariants.
pub fn automorphisms(q: &QCSheafModel) -> Vec<Automorphism> {
    let (coinv, proj) = q.base().coinvariants();
    let els = &q.base().tables().elements;
    all_characters(&coinv)
        .expect("coinvariants of a finite group")
        .into_iter()
        .map(|character| {
            let scalars = els.iter().map(|x| eval(&character, &proj.apply(x))).collect();
            Automorphism { character, scalars }
        })
        .collect()
}
