use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::group::{from_presentation, FgAbGroup, Presentation};
use super::hom::GroupHom;
use crate::error::{Error, Result};
use super::character::{eval, Character};
use crate::intlat::{IntMatrix, Qz};

/// A f.g. abelian group with an automorphism `F` (the Frobenius).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobModule {
    group: FgAbGroup,
    frob: GroupHom,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct ModuleJson {
    pub factors: Vec<u64>,
    pub frob: IntMatrix,
}

impl Serialize for FrobModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleJson {
            factors: self.group.factors().to_vec(),
            frob: self.frob.matrix().clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrobModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ModuleJson::deserialize(d)?;
        let g = FgAbGroup::new(j.factors).map_err(serde::de::Error::custom)?;
        FrobModule::new(g, j.frob).map_err(serde::de::Error::custom)
    }
}

impl FrobModule {
    pub fn new(group: FgAbGroup, frob: IntMatrix) -> Result<Self> {
        let frob = GroupHom::new(group.clone(), group.clone(), frob)?;
        Self::from_hom(frob)
    }

    pub fn from_hom(frob: GroupHom) -> Result<Self> {
        if frob.source() != frob.target() {
            return Err(Error::InvalidInput("Frobenius must be an endomorphism".into()));
        }
        if !frob.is_injective() || !frob.is_surjective() {
            return Err(Error::NotAutomorphism(format!(
                "{} on {}",
                frob.matrix(),
                frob.source()
            )));
        }
        Ok(FrobModule {
            group: frob.source().clone(),
            frob,
        })
    }

    pub fn trivial_action(group: FgAbGroup) -> Self {
        let frob = GroupHom::identity(&group);
        FrobModule { group, frob }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn frob(&self) -> &GroupHom {
        &self.frob
    }

    fn frob_minus_id(&self) -> GroupHom {
        self.frob
            .sub(&GroupHom::identity(&self.group))
            .expect("same shape")
    }

    /// `ker(F − 1)` with its inclusion.
    pub fn invariants(&self) -> (FgAbGroup, GroupHom) {
        self.frob_minus_id().kernel()
    }

    /// `coker(F − 1)` with the quotient projection.
    pub fn coinvariants(&self) -> (FgAbGroup, GroupHom) {
        self.frob_minus_id().cokernel()
    }

    /// Coinvariants as a quotient presentation of the module's coordinates.
    pub fn coinvariants_presentation(&self) -> Presentation {
        let rel = self
            .group
            .relation_matrix()
            .hstack(self.frob_minus_id().matrix());
        from_presentation(&rel)
    }

    pub fn frob_power(&self, n: u32) -> GroupHom {
        let mut acc = GroupHom::identity(&self.group);
        for _ in 0..n {
            acc = self.frob.compose(&acc).expect("endomorphism");
        }
        acc
    }

    /// `Λ²` with the induced action.
    pub fn exterior_square(&self) -> FrobModule {
        exterior_square_presentation(self).module
    }
}

/// Quotient presentation carrying an endomorphism of the ambient lattice.
/// Fails if `endo` does not preserve the relation span.
pub fn presentation_with_endomorphism(
    relations: &IntMatrix,
    endo: &IntMatrix,
) -> Result<(Presentation, IntMatrix)> {
    let p = from_presentation(relations);
    let moved = p.to_group.mul(endo);
    for j in 0..relations.cols() {
        let img = moved.mul_vec(&relations.column(j));
        let img: Vec<i64> = img
            .iter()
            .map(|b| {
                b.to_i64()
                    .ok_or_else(|| Error::InvalidInput("endomorphism image exceeds i64".into()))
            })
            .collect::<Result<_>>()?;
        if !p.group.is_zero(&img) {
            return Err(Error::IllDefinedHom(format!(
                "endomorphism does not preserve relation {j}"
            )));
        }
    }
    let induced = moved.mul(&p.from_group).reduce_rows(p.group.factors());
    Ok((p, induced))
}

/// `Λ²` of a module on the ambient basis `e_i ∧ e_j` (`i < j`), with the
/// change of coordinates into its normal form.
#[derive(Clone, Debug)]
pub struct ExteriorSquare {
    pub module: FrobModule,
    pub pairs: Vec<(usize, usize)>,
    pub presentation: Presentation,
}

pub fn exterior_square_presentation(m: &FrobModule) -> ExteriorSquare {
    let d = m.group.factors();
    let r = d.len();
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .collect();
    let rel = IntMatrix::diagonal(
        &pairs
            .iter()
            .map(|&(i, j)| BigInt::from(d[i].gcd(&d[j])))
            .collect::<Vec<_>>(),
    );
    let f = m.frob.matrix();
    let endo = IntMatrix::from_fn(pairs.len(), pairs.len(), |row, col| {
        let (k, l) = pairs[row];
        let (i, j) = pairs[col];
        f.get(k, i) * f.get(l, j) - f.get(l, i) * f.get(k, j)
    });
    let (presentation, induced) =
        presentation_with_endomorphism(&rel, &endo).expect("Λ² of an endomorphism is well defined");
    let module = FrobModule::new(presentation.group.clone(), induced)
        .expect("Λ² of an automorphism is an automorphism");
    ExteriorSquare {
        module,
        pairs,
        presentation,
    }
}

/// `(Λ²A)_F`, with coordinates on the pair basis `e_i ∧ e_j`. Its characters
/// are the Frobenius-invariant alternating pairings on `A`.
#[derive(Clone, Debug)]
pub struct FixedAlternating {
    pub ext: ExteriorSquare,
    pub coinv: Presentation,
}

impl FixedAlternating {
    pub fn new(m: &FrobModule) -> Self {
        let ext = exterior_square_presentation(m);
        let coinv = ext.module.coinvariants_presentation();
        FixedAlternating { ext, coinv }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.coinv.group
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.ext.pairs
    }

    /// `ψ(e_i ∧ e_j)` for every pair.
    pub fn pair_values(&self, psi: &[Qz]) -> Vec<Qz> {
        let np = self.ext.pairs.len();
        (0..np)
            .map(|p| {
                let mut unit = vec![0i64; np];
                unit[p] = 1;
                let y = self.ext.presentation.project(&unit);
                eval(psi, &self.coinv.project(&y))
            })
            .collect()
    }

    /// The character with the given pair values. The values must come from
    /// an invariant alternating pairing.
    pub fn character_from_pairs(&self, vals: &[Qz]) -> Character {
        (0..self.group().rank())
            .map(|k| {
                let y = self.coinv.lift(&self.group().generator(k));
                let amb = self.ext.presentation.lift(&y);
                eval(vals, &amb)
            })
            .collect()
    }
}

/// Normalized direct sum with the coordinate changes to and from the
/// concatenated ambient coordinates.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub presentation: Presentation,
    /// Ambient offset of each summand.
    pub offsets: Vec<usize>,
    pub summands: Vec<FgAbGroup>,
}

impl DirectSum {
    pub fn new(summands: &[FgAbGroup]) -> Self {
        let mut offsets = Vec::new();
        let mut factors = Vec::new();
        for g in summands {
            offsets.push(factors.len());
            factors.extend_from_slice(g.factors());
        }
        let rel = IntMatrix::diagonal(&factors.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>());
        DirectSum {
            presentation: from_presentation(&rel),
            offsets,
            summands: summands.to_vec(),
        }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.presentation.group
    }

    pub fn ambient_rank(&self) -> usize {
        self.summands.iter().map(FgAbGroup::rank).sum()
    }

    /// Element with the given components.
    pub fn embed(&self, parts: &[Vec<i64>]) -> Vec<i64> {
        let amb: Vec<i64> = parts.iter().flatten().copied().collect();
        self.presentation.project(&amb)
    }

    /// Components of an element.
    pub fn split(&self, x: &[i64]) -> Vec<Vec<i64>> {
        let amb = self.presentation.lift(x);
        self.summands
            .iter()
            .zip(&self.offsets)
            .map(|(g, &o)| g.reduced(amb[o..o + g.rank()].to_vec()))
            .collect()
    }

    /// Block map `⊕ summand_i → ⊕ summand_j` given an ambient matrix.
    pub fn induced(&self, ambient: &IntMatrix) -> Result<IntMatrix> {
        let (_, m) = presentation_with_endomorphism(
            &self.ambient_relations(),
            ambient,
        )?;
        Ok(m)
    }

    fn ambient_relations(&self) -> IntMatrix {
        let f: Vec<BigInt> = self
            .summands
            .iter()
            .flat_map(|g| g.factors().iter().map(|&d| BigInt::from(d)))
            .collect();
        IntMatrix::diagonal(&f)
    }

    pub fn injection(&self, k: usize) -> GroupHom {
        let g = &self.summands[k];
        let n = self.ambient_rank();
        let amb = IntMatrix::from_fn(n, g.rank(), |i, j| {
            BigInt::from((i == self.offsets[k] + j) as i64)
        });
        GroupHom::new(g.clone(), self.group().clone(), self.presentation.to_group.mul(&amb))
            .expect("injection is well defined")
    }

    pub fn projection(&self, k: usize) -> GroupHom {
        let g = &self.summands[k];
        let n = self.ambient_rank();
        let amb = IntMatrix::from_fn(g.rank(), n, |i, j| {
            BigInt::from((j == self.offsets[k] + i) as i64)
        });
        GroupHom::new(self.group().clone(), g.clone(), amb.mul(&self.presentation.from_group))
            .expect("projection is well defined")
    }
}

/// Shape of `Hom(Λ, E^×)`: `divisible_rank` copies of a divisible group plus
/// the cyclic groups `μ_n` for the torsion factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualStructure {
    pub divisible_rank: usize,
    pub torsion: Vec<u64>,
}

impl DualStructure {
    pub fn trivial() -> Self {
        DualStructure {
            divisible_rank: 0,
            torsion: vec![],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.divisible_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    /// Order when finite.
    pub fn order(&self) -> Option<u64> {
        (self.divisible_rank == 0).then(|| self.torsion_order())
    }
}

impl std::fmt::Display for DualStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DualStructure({}, {:?})", self.divisible_rank, self.torsion)
    }
}

pub fn dual_structure(g: &FgAbGroup) -> DualStructure {
    DualStructure {
        divisible_rank: g.free_rank(),
        torsion: g.torsion_factors(),
    }
}

pub fn dual_of_coinvariants(m: &FrobModule) -> DualStructure {
    dual_structure(&m.coinvariants().0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(f: &[u64], frob: &[&[i64]]) -> FrobModule {
        FrobModule::new(
            FgAbGroup::new(f.to_vec()).unwrap(),
            IntMatrix::from_rows(frob).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn invariants_and_coinvariants() {
        let m = module(&[5], &[&[2]]);
        assert!(m.invariants().0.is_trivial());
        assert!(m.coinvariants().0.is_trivial());

        let m = module(&[2, 4], &[&[1, 0], &[0, 1]]);
        assert_eq!(m.invariants().0, *m.group());
        assert_eq!(m.coinvariants().0, *m.group());

        let m = module(&[0, 0], &[&[0, 1], &[1, 0]]);
        assert_eq!(m.invariants().0.factors(), &[0]);
        let (_, incl) = m.invariants();
        let d = incl.apply(&[1]);
        assert_eq!(d[0].abs(), d[1].abs());
        assert_eq!(m.coinvariants().0.factors(), &[0]);
    }

    #[test]
    fn rejects_non_automorphisms() {
        let g = FgAbGroup::new(vec![4]).unwrap();
        assert!(FrobModule::new(g, IntMatrix::from_rows(&[[2]]).unwrap()).is_err());
        let z = FgAbGroup::free(1);
        assert!(FrobModule::new(z, IntMatrix::from_rows(&[[2]]).unwrap()).is_err());
    }

    #[test]
    fn exterior_squares() {
        for n in [2, 3, 7, 12] {
            let m = FrobModule::trivial_action(FgAbGroup::cyclic(n));
            assert!(m.exterior_square().group().is_trivial());
        }
        let m = FrobModule::trivial_action(FgAbGroup::new(vec![2, 2]).unwrap());
        let e = m.exterior_square();
        assert_eq!(e.group().factors(), &[2]);
        assert_eq!(e.frob(), &GroupHom::identity(e.group()));
        let m = FrobModule::trivial_action(FgAbGroup::free(2));
        assert_eq!(m.exterior_square().group().factors(), &[0]);
        // Z/2 ⊕ Z/4 ⊕ Z/8 → Z/2 ⊕ Z/2 ⊕ Z/4
        let m = FrobModule::trivial_action(FgAbGroup::new(vec![2, 4, 8]).unwrap());
        assert_eq!(m.exterior_square().group().factors(), &[2, 2, 4]);
        // swap on Z²: Λ² = Z with F = det = −1
        let m = module(&[0, 0], &[&[0, 1], &[1, 0]]);
        let e = m.exterior_square();
        assert_eq!(e.frob().matrix(), &IntMatrix::from_rows(&[[-1]]).unwrap());
    }

    #[test]
    fn fixed_alternating_round_trip() {
        let m = FrobModule::trivial_action(FgAbGroup::new(vec![2, 4, 4]).unwrap());
        let fa = FixedAlternating::new(&m);
        assert_eq!(fa.group().factors(), &[2, 2, 4]);
        for psi in crate::fgab::all_characters(fa.group()).unwrap() {
            let vals = fa.pair_values(&psi);
            assert_eq!(fa.character_from_pairs(&vals), psi);
        }
        // swap on (Z/3)²: Λ² = Z/3 with F = −1, coinvariants trivial
        let m = module(&[3, 3], &[&[0, 1], &[1, 0]]);
        assert!(FixedAlternating::new(&m).group().is_trivial());
    }

    #[test]
    fn duals() {
        assert_eq!(
            dual_structure(&FgAbGroup::cyclic(6)),
            DualStructure { divisible_rank: 0, torsion: vec![6] }
        );
        assert_eq!(
            dual_structure(&FgAbGroup::free(2)),
            DualStructure { divisible_rank: 2, torsion: vec![] }
        );
        assert!(dual_of_coinvariants(&module(&[5], &[&[2]])).is_trivial());
    }

    #[test]
    fn direct_sums() {
        let s = DirectSum::new(&[FgAbGroup::cyclic(2), FgAbGroup::cyclic(3)]);
        assert_eq!(s.group().factors(), &[6]);
        let x = s.embed(&[vec![1], vec![2]]);
        assert_eq!(s.split(&x), vec![vec![1], vec![2]]);
        let i0 = s.injection(0);
        let p0 = s.projection(0);
        assert_eq!(p0.compose(&i0).unwrap(), GroupHom::identity(&FgAbGroup::cyclic(2)));
        let p1 = s.projection(1);
        assert!(p1.compose(&i0).unwrap().is_zero());
    }
}
