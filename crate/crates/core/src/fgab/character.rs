use num_bigint::BigInt;

use super::group::FgAbGroup;
use super::hom::GroupHom;
use crate::error::{Error, Result};
use crate::intlat::{solve_qz, IntMatrix, Qz};

/// A character `G → Q/Z`, given by its values on the generators.
pub type Character = Vec<Qz>;

pub fn check_character(g: &FgAbGroup, chi: &[Qz]) -> Result<()> {
    if chi.len() != g.rank() {
        return Err(Error::InvalidInput(format!(
            "character has {} values, group has {} generators",
            chi.len(),
            g.rank()
        )));
    }
    for (i, (&q, &d)) in chi.iter().zip(g.factors()).enumerate() {
        if d != 0 && !q.scale(d as i64).is_zero() {
            return Err(Error::IllDefinedCharacter { generator: i });
        }
    }
    Ok(())
}

pub fn is_character(g: &FgAbGroup, chi: &[Qz]) -> bool {
    check_character(g, chi).is_ok()
}

pub fn eval(chi: &[Qz], x: &[i64]) -> Qz {
    chi.iter().zip(x).map(|(&q, &k)| q.scale(k)).sum()
}

pub fn trivial_character(g: &FgAbGroup) -> Character {
    vec![Qz::ZERO; g.rank()]
}

/// The character matching element `x` under `G ≅ G^*`, `e_i ↦ 1/d_i`.
pub fn character_at(g: &FgAbGroup, x: &[i64]) -> Character {
    x.iter()
        .zip(g.factors())
        .map(|(&k, &d)| Qz::from_level(k, d))
        .collect()
}

/// All characters of a finite group, in the canonical element order.
pub fn all_characters(g: &FgAbGroup) -> Result<Vec<Character>> {
    if !g.is_finite() {
        return Err(Error::Infinite(g.factors().to_vec()));
    }
    Ok(g.elements().iter().map(|x| character_at(g, x)).collect())
}

pub fn add_characters(chi: &[Qz], psi: &[Qz]) -> Character {
    chi.iter().zip(psi).map(|(&a, &b)| a + b).collect()
}

/// `chi ∘ f`.
pub fn pullback(f: &GroupHom, chi: &[Qz]) -> Character {
    let m = f.matrix();
    (0..m.cols())
        .map(|j| (0..m.rows()).map(|i| chi[i].scale_big(m.get(i, j))).sum())
        .collect()
}

/// A character of the target of `incl` restricting to `chi`.
pub fn extend_character(incl: &GroupHom, chi: &[Qz]) -> Result<Character> {
    check_character(incl.source(), chi)?;
    if !incl.is_injective() {
        return Err(Error::NotInjective);
    }
    let target = incl.target();
    // unknowns ψ_i; rows: ψ∘incl = chi, then d_i ψ_i = 0
    let mt = incl.matrix().transpose();
    let tors: Vec<usize> = (0..target.rank())
        .filter(|&i| target.factors()[i] != 0)
        .collect();
    let rel = IntMatrix::from_fn(tors.len(), target.rank(), |r, c| {
        if tors[r] == c {
            BigInt::from(target.factors()[c])
        } else {
            BigInt::from(0)
        }
    });
    let sys = mt.vstack(&rel);
    let mut rhs = chi.to_vec();
    rhs.resize(sys.rows(), Qz::ZERO);
    solve_qz(&sys, &rhs).map_err(|o| {
        Error::InvariantViolation(format!(
            "character extension obstructed at row {} (residual {})",
            o.row, o.residual
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::hom::subgroup_of_elements;

    fn q(n: i128, d: u64) -> Qz {
        Qz::new(n, d)
    }

    #[test]
    fn extension_from_2z4() {
        let a = FgAbGroup::cyclic(4);
        let (h, incl) = subgroup_of_elements(&a, &[vec![2]]);
        assert_eq!(h.factors(), &[2]);
        let ext = extend_character(&incl, &[q(1, 2)]).unwrap();
        assert!(ext[0] == q(1, 4) || ext[0] == q(3, 4));
        assert_eq!(pullback(&incl, &ext), vec![q(1, 2)]);
        // both candidates restrict correctly
        for c in [q(1, 4), q(3, 4)] {
            assert_eq!(pullback(&incl, &[c]), vec![q(1, 2)]);
        }
    }

    #[test]
    fn extension_identity_and_trivial() {
        let a = FgAbGroup::new(vec![2, 6]).unwrap();
        let id = GroupHom::identity(&a);
        let chi = vec![q(1, 2), q(5, 6)];
        assert_eq!(extend_character(&id, &chi).unwrap(), chi);
        let (_, incl) = subgroup_of_elements(&a, &[vec![1, 3]]);
        let ext = extend_character(&incl, &[Qz::ZERO]).unwrap();
        assert_eq!(pullback(&incl, &ext), vec![Qz::ZERO]);
    }

    #[test]
    fn rejects_bad_input() {
        let a = FgAbGroup::cyclic(4);
        let id = GroupHom::identity(&a);
        assert_eq!(
            extend_character(&id, &[q(1, 3)]),
            Err(Error::IllDefinedCharacter { generator: 0 })
        );
        let dbl = GroupHom::new(a.clone(), a.clone(), IntMatrix::from_rows(&[[2]]).unwrap()).unwrap();
        assert_eq!(extend_character(&dbl, &[Qz::ZERO]), Err(Error::NotInjective));
    }

    #[test]
    fn all_characters_count() {
        let a = FgAbGroup::new(vec![2, 4]).unwrap();
        let chars = all_characters(&a).unwrap();
        assert_eq!(chars.len(), 8);
        assert!(chars.iter().all(|c| is_character(&a, c)));
        assert!(all_characters(&FgAbGroup::free(1)).is_err());
    }
}
