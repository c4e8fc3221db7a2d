use serde::Serialize;

use super::QCSheafModel;
use crate::error::{Error, Result};
use crate::etale::{product_with_maps, EtaleGroupModel};
use crate::fgab::{
    check_character, eval, extend_character, Character, FgAbGroup,
    FixedAlternating, GroupHom,
};
use crate::intlat::Qz;

pub fn unit(base: &EtaleGroupModel) -> QCSheafModel {
    let n = base.order();
    QCSheafModel::from_tables(base.clone(), vec![Qz::ZERO; n * n], vec![Qz::ZERO; n])
        .expect("sizes match")
}

fn same_base(q: &QCSheafModel, r: &QCSheafModel) -> Result<()> {
    if q.base() != r.base() {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

pub fn tensor(q: &QCSheafModel, r: &QCSheafModel) -> Result<QCSheafModel> {
    same_base(q, r)?;
    let a = q.a_table().iter().zip(r.a_table()).map(|(&x, &y)| x + y).collect();
    let b = q.b_table().iter().zip(r.b_table()).map(|(&x, &y)| x + y).collect();
    QCSheafModel::from_tables(q.base().clone(), a, b)
}

pub fn dual(q: &QCSheafModel) -> QCSheafModel {
    let a = q.a_table().iter().map(|&x| -x).collect();
    let b = q.b_table().iter().map(|&x| -x).collect();
    QCSheafModel::from_tables(q.base().clone(), a, b).expect("sizes match")
}

/// `(a, b) + d(r)`: the same sheaf in the stalk bases rescaled by `r`.
pub fn twist(q: &QCSheafModel, r: &[Qz]) -> QCSheafModel {
    let t = q.base().tables();
    let n = t.len();
    assert_eq!(r.len(), n);
    let mut a = q.a_table().to_vec();
    for x in 0..n {
        for y in 0..n {
            a[x * n + y] += r[x] + r[y] - r[t.sum(x, y)];
        }
    }
    let b = (0..n).map(|x| q.b(x) + r[x] - r[t.frob[x]]).collect();
    QCSheafModel::from_tables(q.base().clone(), a, b).expect("sizes match")
}

/// Trace of Frobenius as a character of the rational points `A^F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub fixed_points: FgAbGroup,
    #[serde(skip)]
    pub inclusion: GroupHom,
    pub character: Character,
}

impl Trace {
    /// Value at a rational point given in `A^F` coordinates.
    pub fn at(&self, x: &[i64]) -> Qz {
        eval(&self.character, x)
    }
}

pub fn trace(q: &QCSheafModel) -> Trace {
    let (fixed, inclusion) = q.base().fixed_points();
    let character = (0..fixed.rank())
        .map(|i| q.b_at(&inclusion.apply(&fixed.generator(i))))
        .collect();
    Trace {
        fixed_points: fixed,
        inclusion,
        character,
    }
}

/// The sheaf with `a = 0` and `b` a homomorphic extension of `chi`.
pub fn sheaf_from_character(base: &EtaleGroupModel, chi: &[Qz]) -> Result<QCSheafModel> {
    let (_, incl) = base.fixed_points();
    let ext = extend_character(&incl, chi)?;
    Ok(QCSheafModel::from_fns(
        base.clone(),
        |_, _| Qz::ZERO,
        |x| eval(&ext, x),
    ))
}

/// A sheaf with trivial trace whose commutator pairing is the invariant
/// alternating pairing `psi` (a character of `(Λ²A)_F`).
pub fn kernel_sheaf(
    base: &EtaleGroupModel,
    fa: &FixedAlternating,
    psi: &[Qz],
) -> Result<QCSheafModel> {
    check_character(fa.group(), psi)?;
    let vals = fa.pair_values(psi);
    let pairs = fa.pairs().to_vec();
    let t = base.tables();
    let n = t.len();
    let a: Vec<Qz> = t
        .elements
        .iter()
        .flat_map(|x| {
            t.elements
                .iter()
                .map(|y| {
                    pairs
                        .iter()
                        .zip(&vals)
                        .map(|(&(i, j), v)| v.scale(x[i] * y[j]))
                        .sum()
                })
                .collect::<Vec<Qz>>()
        })
        .collect();
    // d_G β = a − a∘(F×F)
    let rhs: Vec<Qz> = (0..n * n)
        .map(|k| {
            let (x, y) = (k / n, k % n);
            a[k] - a[t.frob[x] * n + t.frob[y]]
        })
        .collect();
    let beta = base.group_coboundary().solve(&rhs).map_err(|o| {
        Error::InvariantViolation(format!(
            "pairing is not Frobenius-invariant (row {}, residual {})",
            o.row, o.residual
        ))
    })?;
    let q = QCSheafModel::from_tables(base.clone(), a, beta)?;
    let tr = trace(&q);
    let ext = extend_character(&tr.inclusion, &tr.character)?;
    let b = t
        .elements
        .iter()
        .enumerate()
        .map(|(i, x)| q.b(i) - eval(&ext, x))
        .collect();
    let (base, a, _) = q.into_parts();
    QCSheafModel::from_tables(base, a, b)
}

/// `e(x, y) = a(x, y) − a(y, x)`, row-major.
pub fn commutator_pairing(q: &QCSheafModel) -> Vec<Qz> {
    let n = q.order();
    (0..n * n)
        .map(|k| q.a(k / n, k % n) - q.a(k % n, k / n))
        .collect()
}

/// Complete invariant of an isomorphism class: the trace and the commutator
/// pairing, the latter as a character of `(Λ²A)_F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassInvariant {
    pub trace: Character,
    pub kernel: Character,
}

impl ClassInvariant {
    pub fn of(q: &QCSheafModel, fa: &FixedAlternating) -> Self {
        let g = q.base().points();
        let vals: Vec<Qz> = fa
            .pairs()
            .iter()
            .map(|&(i, j)| {
                let (x, y) = (g.generator(i), g.generator(j));
                q.a_at(&x, &y) - q.a_at(&y, &x)
            })
            .collect();
        ClassInvariant {
            trace: trace(q).character,
            kernel: fa.character_from_pairs(&vals),
        }
    }
}

/// `f^*Q` along an equivariant `f : source → base(Q)`.
pub fn pullback(
    source: &EtaleGroupModel,
    f: &GroupHom,
    q: &QCSheafModel,
) -> Result<QCSheafModel> {
    q.base().check_equivariant(source, f)?;
    let t = source.tables();
    let img: Vec<usize> = t
        .elements
        .iter()
        .map(|x| q.base().index_of(&f.apply(x)))
        .collect();
    let n = t.len();
    let a = (0..n * n).map(|k| q.a(img[k / n], img[k % n])).collect();
    let b = img.iter().map(|&i| q.b(i)).collect();
    QCSheafModel::from_tables(source.clone(), a, b)
}

/// `Q₁ ⊠ Q₂` on the product model.
pub fn external_product(q1: &QCSheafModel, q2: &QCSheafModel) -> QCSheafModel {
    let p = product_with_maps(q1.base(), q2.base());
    let t = p.model.tables();
    let comps: Vec<(usize, usize)> = t
        .elements
        .iter()
        .map(|z| {
            let parts = p.sum.split(z);
            (q1.base().index_of(&parts[0]), q2.base().index_of(&parts[1]))
        })
        .collect();
    let n = t.len();
    let a = (0..n * n)
        .map(|k| {
            let ((x1, x2), (y1, y2)) = (comps[k / n], comps[k % n]);
            q1.a(x1, y1) + q2.a(x2, y2)
        })
        .collect();
    let b = comps.iter().map(|&(x1, x2)| q1.b(x1) + q2.b(x2)).collect();
    QCSheafModel::from_tables(p.model.clone(), a, b).expect("sizes match")
}

/// Restriction to `(A, F^n)` with Frobenius structure `φ ∘ F^*φ ∘ ⋯`:
/// `a` unchanged and `b'(x) = Σ_{i<n} b(F^i x)`.
pub fn norm_functor(q: &QCSheafModel, n: u32) -> Result<QCSheafModel> {
    let base = q.base().base_change(n)?;
    let t = q.base().tables();
    let b = (0..t.len())
        .map(|x| {
            let mut s = Qz::ZERO;
            let mut y = x;
            for _ in 0..n {
                s += q.b(y);
                y = t.frob[y];
            }
            s
        })
        .collect();
    QCSheafModel::from_tables(base, q.a_table().to_vec(), b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::{all_characters, FgAbGroup, FrobModule};
    use crate::intlat::IntMatrix;

    fn q(n: i128, d: u64) -> Qz {
        Qz::new(n, d)
    }

    fn model(f: &[u64], frob: &[&[i64]]) -> EtaleGroupModel {
        EtaleGroupModel::new(
            FgAbGroup::new(f.to_vec()).unwrap(),
            IntMatrix::from_rows(frob).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn trace_examples() {
        let e = model(&[4], &[&[1]]);
        assert_eq!(trace(&unit(&e)).character, vec![Qz::ZERO]);
        let s = QCSheafModel::from_fns(e.clone(), |_, _| Qz::ZERO, |x| q(x[0] as i128, 4));
        assert!(s.is_valid());
        let t = trace(&s);
        assert_eq!(t.character[0].order(), 4);
        for y in t.fixed_points.elements() {
            assert_eq!(t.at(&y), s.b_at(&t.inclusion.apply(&y)));
        }
    }

    #[test]
    fn section_examples() {
        let e = model(&[4], &[&[1]]);
        let s = sheaf_from_character(&e, &[q(1, 4)]).unwrap();
        assert!(s.is_valid());
        assert_eq!(trace(&s).character, vec![q(1, 4)]);
        let e = model(&[5], &[&[2]]);
        let s = sheaf_from_character(&e, &[]).unwrap();
        assert!(s.is_valid());
        assert!(trace(&s).character.is_empty());
    }

    #[test]
    fn tensor_and_dual() {
        let e = model(&[2, 2], &[&[0, 1], &[1, 0]]);
        let s = QCSheafModel::from_fns(
            e.clone(),
            |x, y| q((x[0] * y[1]) as i128, 2),
            |x| q((x[0] * x[1]) as i128, 2),
        );
        assert!(s.is_valid());
        assert_eq!(tensor(&s, &unit(&e)).unwrap(), s);
        assert_eq!(tensor(&s, &dual(&s)).unwrap(), unit(&e));
        let other = model(&[4], &[&[1]]);
        assert_eq!(tensor(&s, &unit(&other)), Err(Error::BaseMismatch));
    }

    #[test]
    fn kernel_sheaves_have_trivial_trace_and_given_pairing() {
        for (f, frob) in [
            (vec![2u64, 2], vec![vec![1i64, 0], vec![0, 1]]),
            (vec![2, 4], vec![vec![1, 0], vec![2, 1]]),
            (vec![3, 3], vec![vec![1, 1], vec![0, 1]]),
        ] {
            let rows: Vec<&[i64]> = frob.iter().map(|r| r.as_slice()).collect();
            let e = model(&f, &rows);
            let fa = FixedAlternating::new(e.module());
            for psi in all_characters(fa.group()).unwrap() {
                let s = kernel_sheaf(&e, &fa, &psi).unwrap();
                assert!(s.is_valid(), "{e} {psi:?}");
                assert!(trace(&s).character.iter().all(|c| c.is_zero()));
                assert_eq!(ClassInvariant::of(&s, &fa).kernel, psi);
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let e = model(&[2, 2], &[&[1, 0], &[0, 1]]);
        let s = QCSheafModel::from_fns(e.clone(), |x, y| q((x[0] * y[1]) as i128, 2), |_| Qz::ZERO);
        let c = commutator_pairing(&s);
        let (e1, e2) = (e.index_of(&[1, 0]), e.index_of(&[0, 1]));
        assert_eq!(c[e1 * 4 + e2], q(1, 2));
        assert_eq!(c[e2 * 4 + e1], q(1, 2));
        let sym = QCSheafModel::from_fns(e, |x, y| q((x[0] * y[0]) as i128, 2), |_| Qz::ZERO);
        assert!(commutator_pairing(&sym).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn pullback_examples() {
        let src = model(&[2], &[&[1]]);
        let dst = model(&[4], &[&[1]]);
        let f = GroupHom::new(
            src.points().clone(),
            dst.points().clone(),
            IntMatrix::from_rows(&[[2]]).unwrap(),
        )
        .unwrap();
        let s = QCSheafModel::from_fns(dst.clone(), |_, _| Qz::ZERO, |x| q(x[0] as i128, 4));
        let p = pullback(&src, &f, &s).unwrap();
        assert_eq!(p.b_at(&[1]), q(1, 2));
        assert_eq!(pullback(&dst, &GroupHom::identity(dst.points()), &s).unwrap(), s);
        // ×2 on Z/5 does not commute with F = ×2 vs F = id
        let a = model(&[5], &[&[1]]);
        let b = model(&[5], &[&[2]]);
        let g = GroupHom::identity(a.points());
        assert!(matches!(
            pullback(&a, &g, &unit(&b)),
            Err(Error::NotEquivariant { .. })
        ));
    }

    #[test]
    fn norm_examples() {
        let e = model(&[5], &[&[2]]);
        let s = sheaf_from_character(&e, &[]).unwrap();
        let r = twist(&s, &(0..5).map(|i| q(i, 7)).collect::<Vec<_>>());
        let nf = norm_functor(&r, 4).unwrap();
        assert!(nf.is_valid());
        assert!(trace(&nf).character.iter().all(|c| c.is_zero()));
        let e = model(&[4], &[&[1]]);
        let s = QCSheafModel::from_fns(e, |_, _| Qz::ZERO, |x| q(x[0] as i128, 4));
        let nf = norm_functor(&s, 3).unwrap();
        assert_eq!(nf.b_at(&[1]), q(3, 4));
        assert_eq!(norm_functor(&s, 1).unwrap(), s);
    }

    #[test]
    fn external_products() {
        let e1 = model(&[2], &[&[1]]);
        let e2 = FrobModule::new(FgAbGroup::cyclic(3), IntMatrix::from_rows(&[[2]]).unwrap()).unwrap();
        let e2 = EtaleGroupModel::from_module(e2).unwrap();
        let u = external_product(&unit(&e1), &unit(&e2));
        assert_eq!(u, unit(u.base()));
        let s1 = sheaf_from_character(&e1, &[q(1, 2)]).unwrap();
        let p = external_product(&s1, &unit(&e2));
        assert!(p.is_valid());
        assert_eq!(trace(&p).character.len(), 1);
        assert_eq!(trace(&p).character[0], q(1, 2));
    }
}
