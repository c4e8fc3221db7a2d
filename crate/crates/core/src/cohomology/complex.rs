//! Cochain matrices for a finite model `(A, F)`, on element indices.
//!
//! A 1-cochain is a table `A → Q/Z`. A total 2-cochain is a pair `(α, β)`
//! stored as `α` (row-major `n × n`) followed by `β` (`n`). Coboundaries are
//! `d(δ) = (d_G δ, δ − δ∘F)` with `d_G δ(x,y) = δ(x) + δ(y) − δ(x+y)`, and a
//! total cocycle satisfies `d_G α = 0` and `α∘(F×F) − α = β(x+y) − β(x) − β(y)`.

use num_bigint::BigInt;

use crate::etale::Tables;
use crate::intlat::IntMatrix;

fn build(rows: usize, cols: usize, fill: impl Fn(&mut dyn FnMut(usize, usize, i64))) -> IntMatrix {
    let mut e = vec![0i64; rows * cols];
    fill(&mut |r, c, v| e[r * cols + c] += v);
    IntMatrix::new(rows, cols, e.into_iter().map(BigInt::from).collect()).expect("shape")
}

/// `d_G : C¹ → C²`, `n² × n`.
pub fn group_coboundary(t: &Tables) -> IntMatrix {
    let n = t.len();
    build(n * n, n, |put| {
        for x in 0..n {
            for y in 0..n {
                let r = x * n + y;
                put(r, x, 1);
                put(r, y, 1);
                put(r, t.sum(x, y), -1);
            }
        }
    })
}

/// `d_G : C² → C³`, `n³ × n²`; row `(x,y,z)` is
/// `a(x+y,z) + a(x,y) − a(x,y+z) − a(y,z)`.
pub fn group_cocycle_equations(t: &Tables) -> IntMatrix {
    let n = t.len();
    build(n * n * n, n * n, |put| {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let r = (x * n + y) * n + z;
                    put(r, t.sum(x, y) * n + z, 1);
                    put(r, x * n + y, 1);
                    put(r, x * n + t.sum(y, z), -1);
                    put(r, y * n + z, -1);
                }
            }
        }
    })
}

/// `d : C¹ → C²_tot`, `(n² + n) × n`.
pub fn total_coboundary(t: &Tables) -> IntMatrix {
    let n = t.len();
    build(n * n + n, n, |put| {
        for x in 0..n {
            for y in 0..n {
                let r = x * n + y;
                put(r, x, 1);
                put(r, y, 1);
                put(r, t.sum(x, y), -1);
            }
        }
        for x in 0..n {
            put(n * n + x, x, 1);
            put(n * n + x, t.frob[x], -1);
        }
    })
}

/// Equations cutting out total 2-cocycles, `(n³ + n²) × (n² + n)`.
pub fn total_cocycle_equations(t: &Tables) -> IntMatrix {
    let n = t.len();
    let nn = n * n;
    build(nn * n + nn, nn + n, |put| {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let r = (x * n + y) * n + z;
                    put(r, t.sum(x, y) * n + z, 1);
                    put(r, x * n + y, 1);
                    put(r, x * n + t.sum(y, z), -1);
                    put(r, y * n + z, -1);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let r = nn * n + x * n + y;
                put(r, t.frob[x] * n + t.frob[y], 1);
                put(r, x * n + y, -1);
                put(r, nn + t.sum(x, y), -1);
                put(r, nn + x, 1);
                put(r, nn + y, 1);
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etale::EtaleGroupModel;
    use crate::fgab::FgAbGroup;

    #[test]
    fn coboundaries_are_cocycles() {
        let e = EtaleGroupModel::new(
            FgAbGroup::new(vec![2, 2]).unwrap(),
            IntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap(),
        )
        .unwrap();
        let t = e.tables();
        assert!(group_cocycle_equations(t).mul(&group_coboundary(t)).is_zero());
        assert!(total_cocycle_equations(t).mul(&total_coboundary(t)).is_zero());
        assert_eq!(total_cocycle_equations(t).rows(), 64 + 16);
    }
}
