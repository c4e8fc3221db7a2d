use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlat::smith::{smith_partial, Track};
use crate::intlat::IntMatrix;

/// A finitely generated abelian group `⊕ Z/d_i` in invariant-factor form.
///
/// Factors form a divisibility chain, none equals 1, and `0` stands for a
/// free factor (so free factors come last). Elements are coordinate vectors,
/// coordinate `i` reduced into `[0, d_i)` when `d_i > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FgAbGroup {
    factors: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    factors: Vec<u64>,
}

impl TryFrom<GroupJson> for FgAbGroup {
    type Error = Error;
    fn try_from(j: GroupJson) -> Result<Self> {
        FgAbGroup::new(j.factors)
    }
}

impl From<FgAbGroup> for GroupJson {
    fn from(g: FgAbGroup) -> Self {
        GroupJson { factors: g.factors }
    }
}

pub type Element = Vec<i64>;

impl FgAbGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&1) {
            return Err(Error::InvalidInput(format!(
                "invariant factor 1 in {factors:?}"
            )));
        }
        for w in factors.windows(2) {
            let ok = match (w[0], w[1]) {
                (_, 0) => true,
                (0, _) => false,
                (a, b) => b % a == 0,
            };
            if !ok {
                return Err(Error::InvalidInput(format!(
                    "factors {factors:?} do not form a divisibility chain"
                )));
            }
        }
        Ok(FgAbGroup { factors })
    }

    pub fn trivial() -> Self {
        FgAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            Self::trivial()
        } else {
            FgAbGroup { factors: vec![n] }
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup {
            factors: vec![0; rank],
        }
    }

    /// Normalizes an arbitrary list `⊕ Z/n_i` (zeros free, ones allowed).
    pub fn from_cyclic_factors(ns: &[u64]) -> Self {
        super::from_presentation(&IntMatrix::diagonal(
            &ns.iter().map(|&n| BigInt::from(n)).collect::<Vec<_>>(),
        ))
        .group
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion_factors(&self) -> Vec<u64> {
        self.factors.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Cyclic (including trivial and `Z`).
    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.factors.iter().product())
    }

    pub fn torsion_order(&self) -> u64 {
        self.factors.iter().filter(|&&d| d != 0).product()
    }

    /// Exponent of a finite group (1 for the trivial group).
    pub fn exponent(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        Some(self.factors.last().copied().unwrap_or(1))
    }

    pub(crate) fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(
            &self
                .factors
                .iter()
                .map(|&d| BigInt::from(d))
                .collect::<Vec<_>>(),
        )
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, x: &mut [i64]) {
        for (v, &d) in x.iter_mut().zip(&self.factors) {
            if d != 0 {
                *v = v.rem_euclid(d as i64);
            }
        }
    }

    pub fn reduced(&self, mut x: Element) -> Element {
        self.reduce(&mut x);
        x
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        x.iter()
            .zip(&self.factors)
            .all(|(&v, &d)| if d == 0 { v == 0 } else { v.rem_euclid(d as i64) == 0 })
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        self.reduced(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self, x: &[i64]) -> Element {
        self.reduced(x.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Element {
        self.reduced(x.iter().map(|a| a * k).collect())
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    /// Order of an element of a finite group.
    pub fn element_order(&self, x: &[i64]) -> u64 {
        use num_integer::Integer;
        x.iter().zip(&self.factors).fold(1u64, |acc, (&v, &d)| {
            assert!(d != 0, "element order in a group with free part");
            let v = v.rem_euclid(d as i64) as u64;
            acc.lcm(&(d / v.gcd(&d)))
        })
    }

    /// Index of a reduced element in the canonical enumeration (last
    /// coordinate fastest). Finite groups only.
    pub fn index_of(&self, x: &[i64]) -> usize {
        let mut idx = 0usize;
        for (&v, &d) in x.iter().zip(&self.factors) {
            idx = idx * d as usize + v.rem_euclid(d as i64) as usize;
        }
        idx
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut x = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.factors[i] as usize;
            x[i] = (idx % d) as i64;
            idx /= d;
        }
        x
    }

    /// All elements in canonical order. Panics on infinite groups.
    pub fn elements(&self) -> Vec<Element> {
        let n = self.order().expect("enumerating an infinite group") as usize;
        (0..n).map(|i| self.element_at(i)).collect()
    }
}

impl std::fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&d| if d == 0 { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^n / span(relation columns)` in normal form.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FgAbGroup,
    /// `rank × n`: ambient vector ↦ normal-form coordinates.
    pub to_group: IntMatrix,
    /// `n × rank`: normal-form generators as ambient vectors.
    pub from_group: IntMatrix,
}

impl Presentation {
    pub fn project(&self, x: &[i64]) -> Element {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        let y = self.to_group.mul_vec(&v);
        let mut out: Element = y
            .iter()
            .zip(self.group.factors())
            .map(|(val, &d)| {
                if d == 0 {
                    val.to_i64().expect("free coordinate fits in i64")
                } else {
                    use num_integer::Integer;
                    val.mod_floor(&BigInt::from(d)).to_i64().expect("reduced")
                }
            })
            .collect();
        self.group.reduce(&mut out);
        out
    }

    /// Ambient lift of a normal-form element.
    pub fn lift(&self, x: &[i64]) -> Vec<i64> {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.from_group
            .mul_vec(&v)
            .iter()
            .map(|b| b.to_i64().expect("lift fits in i64"))
            .collect()
    }
}

/// Quotient of `Z^rows` by the span of the columns of `relations`.
pub fn from_presentation(relations: &IntMatrix) -> Presentation {
    let n = relations.rows();
    let track = Track {
        u: true,
        u_inv: true,
        ..Track::default()
    };
    let p = smith_partial(relations, track);
    let mut keep = Vec::new();
    let mut factors = Vec::new();
    for i in 0..n {
        let d = p.diag.get(i).cloned().unwrap_or_default();
        if d.is_one() {
            continue;
        }
        keep.push(i);
        factors.push(d.to_u64().expect("invariant factor exceeds u64"));
    }
    let u = p.u.expect("tracked");
    let u_inv = p.u_inv.expect("tracked");
    let to_group = u.select_rows(&keep).reduce_rows(&factors);
    let from_group = u_inv.select_cols(&keep);
    Presentation {
        group: FgAbGroup::new(factors).expect("Smith diagonal is a divisibility chain"),
        to_group,
        from_group,
    }
}
