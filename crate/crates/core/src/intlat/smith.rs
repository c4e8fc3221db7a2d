//! Smith normal form with unimodular transforms.
//!
//! Elimination runs on checked `i64` first and restarts on `BigInt` if any
//! intermediate overflows, so the result is always exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u · m · v = s` with `u`, `v` unimodular and `s` diagonal.
///
/// `diag` holds the `min(rows, cols)` diagonal entries of `s`: positive
/// entries first, each dividing the next, then zeros. `u_inv` and `v_inv` are
/// the exact inverses of `u` and `v`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub diag: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !num_traits::Zero::is_zero(*d)).count()
    }
}

/// Which transforms to track. Tracking costs one extra row or column
/// operation per elimination step, and `u` is `rows × rows`.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track {
        u: true,
        u_inv: true,
        v: true,
        v_inv: true,
    };
}

/// Partial decomposition; untracked transforms are `None`.
#[derive(Clone, Debug)]
pub(crate) struct PartialSmith {
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl PartialSmith {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !num_traits::Zero::is_zero(*d)).count()
    }
}

trait Scalar: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn abs_val(&self) -> Option<Self>;
    fn lt(&self, other: &Self) -> bool;
    fn is_neg(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn quot(&self, d: &Self) -> Self;
    fn divides(&self, other: &Self) -> bool;
    /// `self - q * b`
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn abs_val(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn lt(&self, other: &Self) -> bool {
        self < other
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, other: &Self) -> bool {
        other % self == 0
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(q.checked_mul(*b)?)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_val(&self) -> Option<Self> {
        Some(self.abs())
    }
    fn lt(&self, other: &Self) -> bool {
        self < other
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn quot(&self, d: &Self) -> Self {
        self / d
    }
    fn divides(&self, other: &Self) -> bool {
        Zero::is_zero(&(other % self))
    }
    fn sub_mul(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Rows<T> = Vec<Vec<T>>;

struct Engine<T> {
    a: Rows<T>,
    u: Option<Rows<T>>,
    u_inv: Option<Rows<T>>,
    v: Option<Rows<T>>,
    v_inv: Option<Rows<T>>,
    rows: usize,
    cols: usize,
}

fn ident<T: Scalar>(n: usize) -> Rows<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

fn row_sub<T: Scalar>(m: &mut Rows<T>, i: usize, j: usize, q: &T) -> Option<()> {
    // row i -= q * row j
    let (ri, rj) = if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &lo[j])
    };
    for (x, y) in ri.iter_mut().zip(rj.iter()) {
        if !y.is_zero() {
            *x = x.sub_mul(q, y)?;
        }
    }
    Some(())
}

fn col_sub<T: Scalar>(m: &mut Rows<T>, i: usize, j: usize, q: &T) -> Option<()> {
    // col i -= q * col j
    for r in m.iter_mut() {
        if !r[j].is_zero() {
            r[i] = r[i].sub_mul(q, &r[j])?;
        }
    }
    Some(())
}

fn col_swap<T>(m: &mut Rows<T>, i: usize, j: usize) {
    for r in m.iter_mut() {
        r.swap(i, j);
    }
}

impl<T: Scalar> Engine<T> {
    fn new(a: Rows<T>, rows: usize, cols: usize, track: Track) -> Self {
        Engine {
            a,
            u: track.u.then(|| ident(rows)),
            u_inv: track.u_inv.then(|| ident(rows)),
            v: track.v.then(|| ident(cols)),
            v_inv: track.v_inv.then(|| ident(cols)),
            rows,
            cols,
        }
    }

    /// row i -= q row j
    fn row_op(&mut self, i: usize, j: usize, q: &T) -> Option<()> {
        row_sub(&mut self.a, i, j, q)?;
        if let Some(u) = &mut self.u {
            row_sub(u, i, j, q)?;
        }
        if let Some(ui) = &mut self.u_inv {
            // col j += q col i
            col_sub(ui, j, i, &q.neg()?)?;
        }
        Some(())
    }

    /// col i -= q col j
    fn col_op(&mut self, i: usize, j: usize, q: &T) -> Option<()> {
        col_sub(&mut self.a, i, j, q)?;
        if let Some(v) = &mut self.v {
            col_sub(v, i, j, q)?;
        }
        if let Some(vi) = &mut self.v_inv {
            // row j += q row i
            row_sub(vi, j, i, &q.neg()?)?;
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            col_swap(ui, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        col_swap(&mut self.a, i, j);
        if let Some(v) = &mut self.v {
            col_swap(v, i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg()?;
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = x.neg()?;
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for r in ui.iter_mut() {
                r[i] = r[i].neg()?;
            }
        }
        Some(())
    }

    fn min_in_block(&self, t: usize) -> Option<Option<(usize, usize)>> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs_val()?;
                if best.as_ref().is_none_or(|(b, _, _)| ax.lt(b)) {
                    let one = ax == T::one();
                    best = Some((ax, i, j));
                    if one {
                        return Some(best.map(|(_, i, j)| (i, j)));
                    }
                }
            }
        }
        Some(best.map(|(_, i, j)| (i, j)))
    }

    fn run(mut self) -> Option<Self> {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.min_in_block(t)? else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].quot(&self.a[t][t]);
                        self.row_op(i, t, &q)?;
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].quot(&self.a[t][t]);
                        self.col_op(j, t, &q)?;
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    // a remainder is now smaller than the pivot; move the
                    // smallest one into place and eliminate again
                    let mut best: Option<(T, bool, usize)> = None;
                    for i in t + 1..self.rows {
                        let x = &self.a[i][t];
                        if !x.is_zero() {
                            let ax = x.abs_val()?;
                            if best.as_ref().is_none_or(|(b, _, _)| ax.lt(b)) {
                                best = Some((ax, true, i));
                            }
                        }
                    }
                    for j in t + 1..self.cols {
                        let x = &self.a[t][j];
                        if !x.is_zero() {
                            let ax = x.abs_val()?;
                            if best.as_ref().is_none_or(|(b, _, _)| ax.lt(b)) {
                                best = Some((ax, false, j));
                            }
                        }
                    }
                    match best {
                        Some((_, true, i)) => self.swap_rows(t, i),
                        Some((_, false, j)) => self.swap_cols(t, j),
                        None => unreachable!("dirty pass leaves a nonzero remainder"),
                    }
                    continue;
                }
                let p = self.a[t][t].clone();
                let offender = (t + 1..self.rows).find(|&i| {
                    self.a[i][t + 1..]
                        .iter()
                        .any(|x| !x.is_zero() && !p.divides(x))
                });
                match offender {
                    Some(i) => {
                        // row t += row i
                        let m1 = T::one().neg()?;
                        self.row_op(t, i, &m1)?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_neg() {
                self.negate_row(t)?;
            }
            t += 1;
        }
        Some(self)
    }

    fn finish(self) -> PartialSmith {
        let to_mat = |m: Rows<T>, r: usize, c: usize| {
            IntMatrix::new(r, c, m.into_iter().flatten().map(|x| x.to_big()).collect())
                .expect("shape")
        };
        let n = self.rows.min(self.cols);
        let diag = (0..n).map(|i| self.a[i][i].to_big()).collect();
        let (rows, cols) = (self.rows, self.cols);
        PartialSmith {
            u: self.u.map(|m| to_mat(m, rows, rows)),
            u_inv: self.u_inv.map(|m| to_mat(m, rows, rows)),
            v: self.v.map(|m| to_mat(m, cols, cols)),
            v_inv: self.v_inv.map(|m| to_mat(m, cols, cols)),
            diag,
            rows,
            cols,
        }
    }
}

pub(crate) fn smith_partial(m: &IntMatrix, track: Track) -> PartialSmith {
    let (rows, cols) = (m.rows(), m.cols());
    if let Some(rows_i64) = m.to_rows_i64() {
        if let Some(done) = Engine::new(rows_i64, rows, cols, track).run() {
            return done.finish();
        }
    }
    let big: Rows<BigInt> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    Engine::new(big, rows, cols, track)
        .run()
        .expect("BigInt elimination cannot overflow")
        .finish()
}

/// Smith normal form of `m` with all four transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let p = smith_partial(m, Track::ALL);
    let mut s = IntMatrix::zeros(m.rows(), m.cols());
    for (i, d) in p.diag.iter().enumerate() {
        s.set(i, i, d.clone());
    }
    SmithDecomposition {
        u: p.u.expect("tracked"),
        u_inv: p.u_inv.expect("tracked"),
        s,
        v: p.v.expect("tracked"),
        v_inv: p.v_inv.expect("tracked"),
        diag: p.diag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(m);
        assert_eq!(d.u.mul(m).mul(&d.v), d.s, "U·M·V = S for {m}");
        assert!(d.u.is_unimodular());
        assert!(d.v.is_unimodular());
        assert_eq!(d.u.mul(&d.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(d.v.mul(&d.v_inv), IntMatrix::identity(m.cols()));
        let r = d.rank();
        for w in d.diag[..r].windows(2) {
            assert!(Zero::is_zero(&(&w[1] % &w[0])), "divisibility chain {:?}", d.diag);
        }
        assert!(d.diag[..r].iter().all(|x| x.is_positive()));
        assert!(d.diag[r..].iter().all(Zero::is_zero));
        d
    }

    fn diag_of(m: &IntMatrix) -> Vec<i64> {
        check(m)
            .diag
            .iter()
            .map(|d| num_traits::ToPrimitive::to_i64(d).unwrap())
            .collect()
    }

    #[test]
    fn named_examples() {
        assert_eq!(diag_of(&IntMatrix::from_rows(&[[2, 0], [0, 3]]).unwrap()), [1, 6]);
        assert_eq!(diag_of(&IntMatrix::from_rows(&[[2, 4], [0, 4]]).unwrap()), [2, 4]);
        let z = smith_normal_form(&IntMatrix::zeros(2, 2));
        assert_eq!(z.u, IntMatrix::identity(2));
        assert_eq!(z.v, IntMatrix::identity(2));
        assert_eq!(z.diag, vec![BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn degenerate_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
        assert_eq!(diag_of(&IntMatrix::from_rows(&[[-2]]).unwrap()), [2]);
        assert_eq!(diag_of(&IntMatrix::from_rows(&[[4, 6, 10]]).unwrap()), [2]);
        assert_eq!(diag_of(&IntMatrix::from_rows(&[[4], [6], [9]]).unwrap()), [1]);
    }

    #[test]
    fn bigint_fallback() {
        let big = i64::MAX / 3;
        let m = IntMatrix::from_rows(&[[big, big - 1], [big - 7, big + 5]]).unwrap();
        check(&m);
    }

    proptest! {
        #[test]
        fn snf_invariants(rows in 0usize..=5, cols in 0usize..=5, seed in proptest::collection::vec(-9i64..=9, 25)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 5 + j]));
            check(&m);
        }
    }
}
