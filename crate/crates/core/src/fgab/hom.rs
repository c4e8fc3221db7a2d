use num_bigint::BigInt;
use serde::Serialize;

use super::group::{from_presentation, Element, FgAbGroup};
use crate::error::{Error, Result};
use crate::intlat::{integer_kernel, IntMatrix};

/// Homomorphism between f.g. abelian groups in normal-form coordinates.
/// Column `i` of the matrix is the image of source generator `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
    #[serde(skip)]
    small: Vec<i64>,
}

impl GroupHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::InvalidInput(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let matrix = matrix.reduce_rows(target.factors());
        let small = matrix
            .to_i64()
            .ok_or_else(|| Error::InvalidInput("hom entries exceed i64".into()))?;
        let hom = GroupHom {
            source,
            target,
            matrix,
            small,
        };
        for (i, &d) in hom.source.factors().iter().enumerate() {
            if d == 0 {
                continue;
            }
            let col: Vec<i64> = (0..hom.target.rank())
                .map(|j| hom.entry(j, i) * d as i64)
                .collect();
            if !hom.target.is_zero(&col) {
                return Err(Error::IllDefinedHom(format!(
                    "generator {i} has order {d} but {d} times its image is nonzero in {}",
                    hom.target
                )));
            }
        }
        Ok(hom)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom::new(g.clone(), g.clone(), IntMatrix::identity(g.rank())).expect("identity")
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom::new(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.rank(), source.rank()),
        )
        .expect("zero map")
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    fn entry(&self, i: usize, j: usize) -> i64 {
        self.small[i * self.source.rank() + j]
    }

    pub fn apply(&self, x: &[i64]) -> Element {
        let m = self.source.rank();
        let out: Vec<i64> = (0..self.target.rank())
            .map(|i| {
                let s: i128 = (0..m)
                    .map(|j| self.small[i * m + j] as i128 * x[j] as i128)
                    .sum();
                let d = self.target.factors()[i];
                if d == 0 {
                    i64::try_from(s).expect("free coordinate overflow")
                } else {
                    s.rem_euclid(d as i128) as i64
                }
            })
            .collect();
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.target != self.source {
            return Err(Error::InvalidInput("composition of mismatched maps".into()));
        }
        GroupHom::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidInput("difference of mismatched maps".into()));
        }
        GroupHom::new(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix),
        )
    }

    pub fn is_zero(&self) -> bool {
        (0..self.source.rank()).all(|i| {
            let col: Vec<i64> = (0..self.target.rank()).map(|j| self.entry(j, i)).collect();
            self.target.is_zero(&col)
        })
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbGroup, GroupHom) {
        // x ∈ Z^n with M x ∈ D_target Z^m
        let lifted = self.matrix.hstack(&self.target.relation_matrix());
        let k = integer_kernel(&lifted);
        let n = self.source.rank();
        let gens = k.select_rows(&(0..n).collect::<Vec<_>>());
        subgroup(&self.source, &gens)
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> (FgAbGroup, GroupHom) {
        let rel = self.target.relation_matrix().hstack(&self.matrix);
        let p = from_presentation(&rel);
        let proj = GroupHom::new(self.target.clone(), p.group.clone(), p.to_group)
            .expect("projection onto a quotient is well defined");
        (p.group, proj)
    }

    /// Image as a subgroup of the target.
    pub fn image(&self) -> (FgAbGroup, GroupHom) {
        subgroup(&self.target, &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }
}

/// Subgroup of `g` generated by the columns of `gens`, with its inclusion.
pub fn subgroup(g: &FgAbGroup, gens: &IntMatrix) -> (FgAbGroup, GroupHom) {
    assert_eq!(gens.rows(), g.rank());
    let t = gens.cols();
    // relations among the generators: c with gens·c ∈ D_g Z^n
    let k = integer_kernel(&gens.hstack(&g.relation_matrix()));
    let rel = k.select_rows(&(0..t).collect::<Vec<_>>());
    let p = from_presentation(&rel);
    let incl = GroupHom::new(p.group.clone(), g.clone(), gens.mul(&p.from_group))
        .expect("inclusion of a generated subgroup is well defined");
    (p.group, incl)
}

/// Subgroup generated by explicit elements.
pub fn subgroup_of_elements(g: &FgAbGroup, elems: &[Element]) -> (FgAbGroup, GroupHom) {
    let gens = IntMatrix::from_fn(g.rank(), elems.len(), |i, j| BigInt::from(elems[j][i]));
    subgroup(g, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> FgAbGroup {
        FgAbGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn well_definedness() {
        // Z/2 → Z/4, 1 ↦ 2 is fine; 1 ↦ 1 is not
        assert!(GroupHom::new(g(&[2]), g(&[4]), IntMatrix::from_rows(&[[2]]).unwrap()).is_ok());
        assert!(GroupHom::new(g(&[2]), g(&[4]), IntMatrix::from_rows(&[[1]]).unwrap()).is_err());
        // Z → anything is fine
        assert!(GroupHom::new(g(&[0]), g(&[3]), IntMatrix::from_rows(&[[1]]).unwrap()).is_ok());
    }

    #[test]
    fn kernel_and_cokernel() {
        // ×2 on Z/4: kernel {0,2} ≅ Z/2, cokernel Z/2
        let f = GroupHom::new(g(&[4]), g(&[4]), IntMatrix::from_rows(&[[2]]).unwrap()).unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.factors(), &[2]);
        assert_eq!(incl.apply(&[1]), vec![2]);
        let (c, proj) = f.cokernel();
        assert_eq!(c.factors(), &[2]);
        assert!(c.is_zero(&proj.apply(&[2])));
        assert!(!f.is_injective());
        assert!(!f.is_surjective());

        // swap − id on Z²
        let s = GroupHom::new(g(&[0, 0]), g(&[0, 0]), IntMatrix::from_rows(&[[-1, 1], [1, -1]]).unwrap())
            .unwrap();
        assert_eq!(s.kernel().0.factors(), &[0]);
        assert_eq!(s.cokernel().0.factors(), &[0]);
    }

    #[test]
    fn generated_subgroups() {
        let a = g(&[2, 4]);
        let (h, incl) = subgroup_of_elements(&a, &[vec![1, 2], vec![0, 2]]);
        assert_eq!(h.order(), Some(4));
        assert!(incl.is_injective());
        let (h, _) = subgroup_of_elements(&a, &[]);
        assert!(h.is_trivial());
    }
}
