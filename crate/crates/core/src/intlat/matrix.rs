use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Dense row-major integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, Error> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone().into());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from `i64` rows; all rows must share a length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::InvalidInput("ragged matrix rows".into()));
            }
            entries.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Same as [`from_rows`](Self::from_rows) with an explicit column count,
    /// so that `n × 0` and `0 × n` shapes are expressible.
    pub fn from_rows_with_cols<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Result<Self, Error> {
        if rows.is_empty() {
            return Ok(Self::zeros(0, cols));
        }
        let m = Self::from_rows(rows)?;
        if m.cols != cols {
            return Err(Error::InvalidInput("column count mismatch".into()));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        let mut entries = self.entries.clone();
        entries.extend(rhs.entries.iter().cloned());
        IntMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Reduces row `i` modulo `moduli[i]` into `[0, m)`; rows with modulus 0
    /// are left alone.
    pub fn reduce_rows(&self, moduli: &[u64]) -> IntMatrix {
        assert_eq!(moduli.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |i, j| {
            let v = self.get(i, j);
            if moduli[i] == 0 {
                v.clone()
            } else {
                v.mod_floor(&BigInt::from(moduli[i]))
            }
        })
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|v| v.to_i64()).collect()
    }

    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        let flat = self.to_i64()?;
        Some(
            (0..self.rows)
                .map(|i| flat[i * self.cols..(i + 1) * self.cols].to_vec())
                .collect(),
        )
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// JSON entry: a plain integer when it fits in `i64`, a decimal string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<JsonInt>>,
}

/// Accepted input shapes: the full `{"rows","cols","entries"}` object, or a
/// bare array of rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Full(MatrixJson),
    Bare(Vec<Vec<JsonInt>>),
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|v| match v.to_i64() {
                        Some(x) => JsonInt::Small(x),
                        None => JsonInt::Big(v.to_string()),
                    })
                    .collect()
            })
            .collect();
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let to_big = |v: JsonInt| -> Result<BigInt, D::Error> {
            match v {
                JsonInt::Small(x) => Ok(BigInt::from(x)),
                JsonInt::Big(s) => s.parse().map_err(D::Error::custom),
            }
        };
        let (rows, cols, data) = match MatrixInput::deserialize(d)? {
            MatrixInput::Full(m) => (m.rows, m.cols, m.entries),
            MatrixInput::Bare(data) => {
                let cols = data.first().map_or(0, Vec::len);
                (data.len(), cols, data)
            }
        };
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom(format!(
                "matrix entries do not match declared shape {rows}x{cols}"
            )));
        }
        let entries = data
            .into_iter()
            .flatten()
            .map(to_big)
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::new(rows, cols, entries).map_err(D::Error::custom)
    }
}
