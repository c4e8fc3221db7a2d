//! Linear systems over the divisible group Q/Z and over Z.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use super::qz::Qz;
use super::smith::{smith_partial, PartialSmith, Track};

/// Certificate that `M·δ = r` has no solution in Q/Z: after the left
/// transform, row `row` reads `0 = residual` with `residual ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub row: usize,
    pub residual: Qz,
}

/// Reusable solver for `M·δ = r` over Q/Z.
///
/// Q/Z is divisible, so after `U·M·V = S` the system `S·y = U·r` is solvable
/// iff every row with a zero diagonal entry has zero right-hand side.
#[derive(Clone, Debug)]
pub struct QzSolver {
    snf: PartialSmith,
    u_rows: Vec<SparseRow>,
    v_rows: Vec<SparseRow>,
}

/// A matrix row with its nonzero entries, kept as `i64` when they fit.
#[derive(Clone, Debug)]
enum SparseRow {
    Small(Vec<(usize, i64)>),
    Big(Vec<(usize, BigInt)>),
}

impl SparseRow {
    fn new(row: &[BigInt]) -> Self {
        let nz: Vec<(usize, &BigInt)> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        match nz
            .iter()
            .map(|&(j, c)| c.to_i64().map(|c| (j, c)))
            .collect::<Option<Vec<_>>>()
        {
            Some(small) => SparseRow::Small(small),
            None => SparseRow::Big(nz.into_iter().map(|(j, c)| (j, c.clone())).collect()),
        }
    }

    fn apply(&self, x: &[Qz]) -> Qz {
        match self {
            SparseRow::Small(r) => r.iter().map(|&(j, c)| x[j].scale(c)).sum(),
            SparseRow::Big(r) => r.iter().map(|(j, c)| x[*j].scale_big(c)).sum(),
        }
    }
}

impl QzSolver {
    pub fn new(m: &IntMatrix) -> Self {
        let track = Track {
            u: true,
            v: true,
            ..Track::default()
        };
        let snf = smith_partial(m, track);
        let rows = |t: &Option<IntMatrix>| {
            let t = t.as_ref().expect("tracked");
            (0..t.rows()).map(|i| SparseRow::new(t.row(i))).collect()
        };
        QzSolver {
            u_rows: rows(&snf.u),
            v_rows: rows(&snf.v),
            snf,
        }
    }

    pub fn rows(&self) -> usize {
        self.snf.rows
    }

    pub fn cols(&self) -> usize {
        self.snf.cols
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    fn transformed(&self, r: &[Qz]) -> Vec<Qz> {
        self.u_rows.iter().map(|row| row.apply(r)).collect()
    }

    pub fn solve(&self, r: &[Qz]) -> Result<Vec<Qz>, Obstruction> {
        assert_eq!(r.len(), self.rows(), "right-hand side length");
        let rr = self.transformed(r);
        let mut y = vec![Qz::ZERO; self.cols()];
        for (i, q) in rr.iter().enumerate() {
            let s = self.snf.diag.get(i).filter(|s| !s.is_zero());
            match s {
                Some(s) => {
                    let s = s.to_u64().expect("invariant factor exceeds u64");
                    y[i] = q.divide(s);
                }
                None if !q.is_zero() => {
                    return Err(Obstruction {
                        row: i,
                        residual: *q,
                    })
                }
                None => {}
            }
        }
        Ok(self.v_rows.iter().map(|row| row.apply(&y)).collect())
    }

    /// Rows of `U` that must annihilate a solvable right-hand side, reduced
    /// mod `level`. See [`ObstructionMap`].
    pub fn obstruction_map(&self, level: u64) -> ObstructionMap {
        let u = self.snf.u.as_ref().expect("tracked");
        let l = BigInt::from(level);
        let rank = self.rank();
        let rows = (rank..u.rows())
            .map(|i| {
                u.row(i)
                    .iter()
                    .enumerate()
                    .filter_map(|(j, c)| {
                        let c = c.mod_floor(&l).to_i64().expect("reduced");
                        (c != 0).then_some((j, c))
                    })
                    .collect()
            })
            .collect();
        ObstructionMap { level, rows }
    }
}

/// Linear map `(Z/level)^rows → (Z/level)^k` whose kernel is exactly the set
/// of level-`level` right-hand sides that are solvable over Q/Z. Equal images
/// mean equal classes in the cokernel of `M` over Q/Z.
#[derive(Clone, Debug)]
pub struct ObstructionMap {
    level: u64,
    rows: Vec<Vec<(usize, i64)>>,
}

impl ObstructionMap {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn key(&self, c: &[i64]) -> Vec<i64> {
        let n = self.level as i128;
        self.rows
            .iter()
            .map(|row| {
                let s: i128 = row.iter().map(|&(j, u)| u as i128 * c[j] as i128).sum();
                s.rem_euclid(n) as i64
            })
            .collect()
    }
}

/// Solves `M·δ = r` in (Q/Z)^cols.
pub fn solve_qz(m: &IntMatrix, r: &[Qz]) -> Result<Vec<Qz>, Obstruction> {
    QzSolver::new(m).solve(r)
}

/// Basis (as columns) of the integer kernel `{x ∈ Z^cols : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let track = Track {
        v: true,
        ..Track::default()
    };
    let p = smith_partial(m, track);
    let rank = p.rank();
    let idx: Vec<usize> = (rank..m.cols()).collect();
    p.v.expect("tracked").select_cols(&idx)
}

/// Integer solution of `M x = y`, if one exists.
pub fn solve_integer(m: &IntMatrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let track = Track {
        u: true,
        v: true,
        ..Track::default()
    };
    let p = smith_partial(m, track);
    let uy = p.u.as_ref().expect("tracked").mul_vec(y);
    let mut z = vec![BigInt::zero(); m.cols()];
    for (i, val) in uy.iter().enumerate() {
        match p.diag.get(i).filter(|d| !d.is_zero()) {
            Some(d) => {
                let (q, r) = val.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            }
            None if !val.is_zero() => return None,
            None => {}
        }
    }
    Some(p.v.expect("tracked").mul_vec(&z))
}

/// Generators of `{x ∈ (Z/level)^cols : M x ≡ 0 (mod level)}`.
pub fn kernel_mod(m: &IntMatrix, level: u64) -> Vec<Vec<i64>> {
    let track = Track {
        v: true,
        ..Track::default()
    };
    let p = smith_partial(m, track);
    let v = p.v.expect("tracked");
    let l = BigInt::from(level);
    let mut gens = Vec::new();
    for j in 0..m.cols() {
        let mult = match p.diag.get(j).filter(|d| !d.is_zero()) {
            Some(d) => {
                let g = d.gcd(&l);
                &l / g
            }
            None => BigInt::from(1),
        };
        if (&mult % &l).is_zero() {
            continue;
        }
        let g: Vec<i64> = v
            .column(j)
            .iter()
            .map(|x| (x * &mult).mod_floor(&l).to_i64().expect("reduced"))
            .collect();
        if g.iter().any(|&x| x != 0) {
            gens.push(g);
        }
    }
    gens
}

/// Classes of the level-`level` cocycles `{c : Z c ≡ 0}` modulo the image of
/// `B` over Q/Z, found by closing the zero class under the cocycle
/// generators. Returns one representative per class in discovery order, or
/// `None` if more than `limit` classes appear.
pub fn level_classes(
    cocycle_eqs: &IntMatrix,
    coboundary: &QzSolver,
    level: u64,
    limit: usize,
) -> Option<Vec<Vec<i64>>> {
    let gens = kernel_mod(cocycle_eqs, level);
    let obs = coboundary.obstruction_map(level);
    let gen_keys: Vec<Vec<i64>> = gens.iter().map(|g| obs.key(g)).collect();
    let n = cocycle_eqs.cols();
    let lv = level as i64;
    let zero_key = obs.key(&vec![0; n]);
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    seen.insert(zero_key.clone(), 0);
    let mut reps = vec![(zero_key, vec![0i64; n])];
    let mut next = 0;
    while next < reps.len() {
        let (key, rep) = reps[next].clone();
        for (g, gk) in gens.iter().zip(&gen_keys) {
            let k: Vec<i64> = key
                .iter()
                .zip(gk)
                .map(|(a, b)| (a + b).rem_euclid(lv))
                .collect();
            if seen.contains_key(&k) {
                continue;
            }
            if reps.len() >= limit {
                return None;
            }
            let c: Vec<i64> = rep
                .iter()
                .zip(g)
                .map(|(a, b)| (a + b).rem_euclid(lv))
                .collect();
            seen.insert(k.clone(), reps.len());
            reps.push((k, c));
        }
        next += 1;
    }
    Some(reps.into_iter().map(|(_, c)| c).collect())
}

/// `|det|` is 1 for square unimodular input; the inverse is `V·U` from the
/// Smith form.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    if !m.is_square() {
        return None;
    }
    let track = Track {
        u: true,
        v: true,
        ..Track::default()
    };
    let p = smith_partial(m, track);
    if p.diag.len() < m.rows() || p.diag.iter().any(|d| d.abs() != BigInt::from(1)) {
        return None;
    }
    Some(p.v.expect("tracked").mul(&p.u.expect("tracked")))
}
