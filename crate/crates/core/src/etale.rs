//! Finite étale commutative group schemes over a finite field, modelled by
//! their geometric points `A` together with the Frobenius automorphism `F`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{DirectSum, Element, FgAbGroup, FrobModule, GroupHom};
use crate::cohomology::complex;
use crate::intlat::{IntMatrix, QzSolver};

/// Arithmetic of `A` on element indices (canonical enumeration order).
#[derive(Clone, Debug)]
pub struct Tables {
    pub elements: Vec<Element>,
    pub add: Vec<usize>,
    pub neg: Vec<usize>,
    pub frob: Vec<usize>,
}

impl Tables {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn sum(&self, i: usize, j: usize) -> usize {
        self.add[i * self.len() + j]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FrobModule", into = "FrobModule")]
pub struct EtaleGroupModel {
    module: FrobModule,
    #[serde(skip)]
    tables: OnceLock<Tables>,
    #[serde(skip)]
    total_cob: OnceLock<QzSolver>,
    #[serde(skip)]
    group_cob: OnceLock<QzSolver>,
}

impl PartialEq for EtaleGroupModel {
    fn eq(&self, other: &Self) -> bool {
        self.module == other.module
    }
}

impl Eq for EtaleGroupModel {}

impl TryFrom<FrobModule> for EtaleGroupModel {
    type Error = Error;
    fn try_from(m: FrobModule) -> Result<Self> {
        EtaleGroupModel::from_module(m)
    }
}

impl From<EtaleGroupModel> for FrobModule {
    fn from(e: EtaleGroupModel) -> Self {
        e.module
    }
}

impl EtaleGroupModel {
    pub fn new(points: FgAbGroup, frob: IntMatrix) -> Result<Self> {
        Self::from_module(FrobModule::new(points, frob)?)
    }

    pub fn from_module(module: FrobModule) -> Result<Self> {
        if !module.group().is_finite() {
            return Err(Error::Infinite(module.group().factors().to_vec()));
        }
        Ok(EtaleGroupModel {
            module,
            tables: OnceLock::new(),
            total_cob: OnceLock::new(),
            group_cob: OnceLock::new(),
        })
    }

    /// `(A, id)`.
    pub fn constant(points: FgAbGroup) -> Result<Self> {
        Self::from_module(FrobModule::trivial_action(points))
    }

    pub fn trivial() -> Self {
        Self::constant(FgAbGroup::trivial()).expect("finite")
    }

    pub fn module(&self) -> &FrobModule {
        &self.module
    }

    pub fn points(&self) -> &FgAbGroup {
        self.module.group()
    }

    pub fn frob(&self) -> &GroupHom {
        self.module.frob()
    }

    pub fn order(&self) -> usize {
        self.points().order().expect("finite") as usize
    }

    pub fn apply_frob(&self, x: &[i64]) -> Element {
        self.frob().apply(x)
    }

    pub fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| {
            let g = self.points();
            let elements = g.elements();
            let n = elements.len();
            let mut add = Vec::with_capacity(n * n);
            for x in &elements {
                for y in &elements {
                    add.push(g.index_of(&g.add(x, y)));
                }
            }
            let neg = elements.iter().map(|x| g.index_of(&g.neg(x))).collect();
            let frob = elements
                .iter()
                .map(|x| g.index_of(&self.apply_frob(x)))
                .collect();
            Tables {
                elements,
                add,
                neg,
                frob,
            }
        })
    }

    /// Solver for `d(δ) = (α, β)`; see [`crate::cohomology::complex`].
    pub fn total_coboundary(&self) -> &QzSolver {
        self.total_cob
            .get_or_init(|| QzSolver::new(&complex::total_coboundary(self.tables())))
    }

    /// Solver for `d_G δ = α`.
    pub fn group_coboundary(&self) -> &QzSolver {
        self.group_cob
            .get_or_init(|| QzSolver::new(&complex::group_coboundary(self.tables())))
    }

    pub fn index_of(&self, x: &[i64]) -> usize {
        self.points().index_of(x)
    }

    /// `A^F` with its inclusion: the rational points.
    pub fn fixed_points(&self) -> (FgAbGroup, GroupHom) {
        self.module.invariants()
    }

    /// `A_F` with the quotient map.
    pub fn coinvariants(&self) -> (FgAbGroup, GroupHom) {
        self.module.coinvariants()
    }

    /// `(A, F^n)`.
    pub fn base_change(&self, n: u32) -> Result<Self> {
        check_degree(n)?;
        Self::from_module(FrobModule::from_hom(self.module.frob_power(n))?)
    }

    /// `Nm(x) = Σ_{i<n} F^i x`.
    pub fn norm_map(&self, n: u32) -> GroupHom {
        let g = self.points();
        let mut acc = IntMatrix::zeros(g.rank(), g.rank());
        let mut p = GroupHom::identity(g);
        for _ in 0..n {
            acc = add_matrices(&acc, p.matrix());
            p = self.frob().compose(&p).expect("endomorphism");
        }
        GroupHom::new(g.clone(), g.clone(), acc).expect("sum of endomorphisms")
    }

    /// Checks `F_self ∘ f = f ∘ F_source` for `f : source → self`.
    pub fn check_equivariant(&self, source: &EtaleGroupModel, f: &GroupHom) -> Result<()> {
        if f.source() != source.points() || f.target() != self.points() {
            return Err(Error::InvalidInput(
                "homomorphism does not match the models".into(),
            ));
        }
        let lhs = self.frob().compose(f)?;
        let rhs = f.compose(source.frob())?;
        for i in 0..source.points().rank() {
            let e = source.points().generator(i);
            if lhs.apply(&e) != rhs.apply(&e) {
                return Err(Error::NotEquivariant { generator: i });
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for EtaleGroupModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, F = {})", self.points(), self.frob().matrix())
    }
}

fn check_degree(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    Ok(())
}

fn add_matrices(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    IntMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) + b.get(i, j))
}

/// A product model with its structure maps.
#[derive(Clone, Debug)]
pub struct Product {
    pub model: EtaleGroupModel,
    pub sum: DirectSum,
}

impl Product {
    pub fn injection(&self, k: usize) -> GroupHom {
        self.sum.injection(k)
    }

    pub fn projection(&self, k: usize) -> GroupHom {
        self.sum.projection(k)
    }
}

fn block_diagonal(blocks: &[&IntMatrix]) -> IntMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut m = IntMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(o + i, o + j, b.get(i, j).clone());
            }
        }
        o += b.rows();
    }
    m
}

pub fn product_with_maps(e1: &EtaleGroupModel, e2: &EtaleGroupModel) -> Product {
    let sum = DirectSum::new(&[e1.points().clone(), e2.points().clone()]);
    let amb = block_diagonal(&[e1.frob().matrix(), e2.frob().matrix()]);
    let frob = sum.induced(&amb).expect("block Frobenius is well defined");
    let model = EtaleGroupModel::new(sum.group().clone(), frob).expect("product of automorphisms");
    Product { model, sum }
}

/// Direct sum of points with blockwise Frobenius.
pub fn product(e1: &EtaleGroupModel, e2: &EtaleGroupModel) -> EtaleGroupModel {
    product_with_maps(e1, e2).model
}

/// A Weil restriction with the coordinate maps of `(A')^n`.
#[derive(Clone, Debug)]
pub struct WeilRestriction {
    pub model: EtaleGroupModel,
    pub sum: DirectSum,
    pub degree: u32,
}

impl WeilRestriction {
    /// Element with the given `n` coordinates.
    pub fn embed(&self, parts: &[Element]) -> Element {
        self.sum.embed(parts)
    }

    pub fn split(&self, x: &[i64]) -> Vec<Element> {
        self.sum.split(x)
    }
}

/// `Res_{k'/k}`: points `(A')^n`, Frobenius
/// `(x_0, …, x_{n−1}) ↦ (x_1, …, x_{n−1}, φ'(x_0))`.
pub fn weil_restriction_with_maps(e: &EtaleGroupModel, n: u32) -> Result<WeilRestriction> {
    check_degree(n)?;
    let n = n as usize;
    let r = e.points().rank();
    let copies = vec![e.points().clone(); n];
    let sum = DirectSum::new(&copies);
    let phi = e.frob().matrix();
    let mut amb = IntMatrix::zeros(n * r, n * r);
    for blk in 0..n {
        for i in 0..r {
            if blk + 1 < n {
                amb.set(blk * r + i, (blk + 1) * r + i, BigInt::from(1));
            } else {
                for j in 0..r {
                    amb.set(blk * r + i, j, phi.get(i, j).clone());
                }
            }
        }
    }
    let frob = sum.induced(&amb)?;
    let model = EtaleGroupModel::new(sum.group().clone(), frob)?;
    Ok(WeilRestriction {
        model,
        sum,
        degree: n as u32,
    })
}

pub fn weil_restriction(e: &EtaleGroupModel, n: u32) -> Result<EtaleGroupModel> {
    Ok(weil_restriction_with_maps(e, n)?.model)
}

pub fn base_change(e: &EtaleGroupModel, n: u32) -> Result<EtaleGroupModel> {
    e.base_change(n)
}

/// `ι : A → Res(A_{k'})`, `x ↦ (x, Fx, …, F^{n−1}x)`, checked equivariant.
pub fn canonical_inclusion(e: &EtaleGroupModel, n: u32) -> Result<(WeilRestriction, GroupHom)> {
    let res = weil_restriction_with_maps(&e.base_change(n)?, n)?;
    let g = e.points();
    let cols: Vec<Vec<i64>> = (0..g.rank())
        .map(|j| {
            let mut x = g.generator(j);
            let mut parts = Vec::with_capacity(n as usize);
            for _ in 0..n {
                parts.push(x.clone());
                x = e.apply_frob(&x);
            }
            res.embed(&parts)
        })
        .collect();
    let t = res.model.points();
    let m = IntMatrix::from_fn(t.rank(), g.rank(), |i, j| BigInt::from(cols[j][i]));
    let iota = GroupHom::new(g.clone(), t.clone(), m)?;
    res.model.check_equivariant(e, &iota)?;
    Ok((res, iota))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(f: &[u64], frob: &[&[i64]]) -> EtaleGroupModel {
        EtaleGroupModel::new(
            FgAbGroup::new(f.to_vec()).unwrap(),
            IntMatrix::from_rows(frob).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn fixed_point_examples() {
        assert!(model(&[5], &[&[2]]).fixed_points().0.is_trivial());
        let e = model(&[2, 4], &[&[1, 0], &[0, 1]]);
        assert_eq!(e.fixed_points().0, *e.points());
        let e = model(&[3, 3], &[&[0, 1], &[1, 0]]);
        let (h, incl) = e.fixed_points();
        assert_eq!(h.factors(), &[3]);
        let d = incl.apply(&[1]);
        assert_eq!(d[0], d[1]);
    }

    #[test]
    fn rejects_infinite_points() {
        let z = FrobModule::trivial_action(FgAbGroup::free(1));
        assert!(matches!(
            EtaleGroupModel::from_module(z),
            Err(Error::Infinite(_))
        ));
    }

    #[test]
    fn products() {
        let a = EtaleGroupModel::constant(FgAbGroup::cyclic(2)).unwrap();
        let b = EtaleGroupModel::constant(FgAbGroup::cyclic(3)).unwrap();
        let p = product(&a, &b);
        assert_eq!(p.points().factors(), &[6]);
        assert_eq!(p.frob(), &GroupHom::identity(p.points()));
        let t = EtaleGroupModel::trivial();
        let e = model(&[5], &[&[2]]);
        assert_eq!(product(&e, &t), e);
        let s = model(&[3, 3], &[&[0, 1], &[1, 0]]);
        let p = product(&s, &a);
        assert_eq!(p.fixed_points().0.order(), Some(6));
    }

    #[test]
    fn weil_restrictions() {
        let e = model(&[5], &[&[2]]);
        assert_eq!(weil_restriction(&e, 1).unwrap(), e);
        let e = EtaleGroupModel::constant(FgAbGroup::cyclic(3)).unwrap();
        let w = weil_restriction_with_maps(&e, 2).unwrap();
        assert_eq!(w.model.points().factors(), &[3, 3]);
        let x = w.embed(&[vec![1], vec![2]]);
        let fx = w.model.apply_frob(&x);
        assert_eq!(w.split(&fx), vec![vec![2], vec![1]]);
        assert_eq!(w.model.fixed_points().0.factors(), &[3]);
    }

    #[test]
    fn base_change_and_inclusion() {
        let e = model(&[5], &[&[2]]);
        let b = e.base_change(4).unwrap();
        assert_eq!(b.frob(), &GroupHom::identity(b.points()));
        let (res, iota) = canonical_inclusion(&e, 2).unwrap();
        assert_eq!(res.split(&iota.apply(&[1])), vec![vec![1], vec![2]]);
        assert!(iota.is_injective());
        let (_, iota) = canonical_inclusion(&e, 1).unwrap();
        assert_eq!(iota, GroupHom::identity(e.points()));
    }

    #[test]
    fn tables_are_consistent() {
        let e = model(&[2, 4], &[&[1, 0], &[0, 3]]);
        let t = e.tables();
        assert_eq!(t.len(), 8);
        for i in 0..8 {
            assert_eq!(t.sum(i, t.neg[i]), 0);
            assert_eq!(t.elements[t.frob[i]], e.apply_frob(&t.elements[i]));
        }
    }

    #[test]
    fn json_round_trip() {
        let e = model(&[2, 4], &[&[1, 0], &[0, 3]]);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<EtaleGroupModel>(&s).unwrap(), e);
        assert!(serde_json::from_str::<EtaleGroupModel>(r#"{"factors":[4],"frob":[[2]]}"#).is_err());
    }
}
