//! Tori over local fields: cocharacter lattices with inertia and Frobenius,
//! their component groups, and characters of truncated unit groups.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::dictionary::kernel_structure;
use crate::error::{Error, Result};
use crate::fgab::{dual_structure, from_presentation, presentation_with_endomorphism};
use crate::fgab::{DualStructure, FgAbGroup, FrobModule};
use crate::intlat::IntMatrix;

pub const DEFAULT_INERTIA_BOUND: usize = 4096;
pub const DEFAULT_RING_BOUND: u64 = 1_000_000;

fn default_inertia_bound() -> usize {
    DEFAULT_INERTIA_BOUND
}

/// `X_*(T)` as `Z^rank` with matrices acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisLattice {
    pub rank: usize,
    #[serde(default)]
    pub inertia: Vec<IntMatrix>,
    pub frob: IntMatrix,
    #[serde(default = "default_inertia_bound")]
    pub bound: usize,
}

impl GaloisLattice {
    pub fn split(rank: usize) -> Self {
        GaloisLattice {
            rank,
            inertia: vec![],
            frob: IntMatrix::identity(rank),
            bound: DEFAULT_INERTIA_BOUND,
        }
    }

    /// Checks the invariants and returns the inertia image, identity first.
    pub fn inertia_closure(&self) -> Result<Vec<IntMatrix>> {
        let d = self.rank;
        if d == 0 {
            return Err(Error::InvalidInput("lattice rank must be positive".into()));
        }
        for (name, m) in self
            .inertia
            .iter()
            .map(|m| ("inertia generator", m))
            .chain(std::iter::once(("frobenius", &self.frob)))
        {
            if m.rows() != d || m.cols() != d {
                return Err(Error::InvalidInput(format!(
                    "{name} is {}x{}, expected {d}x{d}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.det().abs().is_one() {
                return Err(Error::NotAutomorphism(format!("{name} has determinant {}", m.det())));
            }
        }
        let key = |m: &IntMatrix| m.entries().to_vec();
        let id = IntMatrix::identity(d);
        let mut seen: HashSet<Vec<BigInt>> = HashSet::from([key(&id)]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &self.inertia {
                let p = g.mul(&m);
                if seen.insert(key(&p)) {
                    if out.len() >= self.bound {
                        return Err(Error::BoundExceeded {
                            what: "inertia closure",
                            bound: self.bound as u64,
                            actual: out.len() as u64 + 1,
                        });
                    }
                    out.push(p.clone());
                    queue.push_back(p);
                }
            }
        }
        for (i, g) in self.inertia.iter().enumerate() {
            let fg = self.frob.mul(g);
            if !out.iter().any(|h| h.mul(&self.frob) == fg) {
                return Err(Error::InvariantViolation(format!(
                    "frobenius does not normalize inertia generator {i}"
                )));
            }
        }
        Ok(out)
    }

    fn relations(&self, mats: &[IntMatrix]) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        mats.iter()
            .fold(IntMatrix::zeros(self.rank, 0), |acc, g| acc.hstack(&g.sub(&id)))
    }

    pub fn is_split(&self) -> Result<bool> {
        Ok(self.inertia_closure()?.len() == 1 && self.frob == IntMatrix::identity(self.rank))
    }
}

/// `π₀ = X_*(T)_I` with the induced Frobenius.
pub fn component_group(l: &GaloisLattice) -> Result<FrobModule> {
    let closure = l.inertia_closure()?;
    let (p, induced) = presentation_with_endomorphism(&l.relations(&closure), &l.frob)?;
    FrobModule::new(p.group, induced)
}

pub fn torus_kernel(l: &GaloisLattice) -> Result<DualStructure> {
    Ok(kernel_structure(&component_group(l)?))
}

/// Dual of the coinvariants under inertia and Frobenius together.
pub fn torus_aut(l: &GaloisLattice) -> Result<DualStructure> {
    let mut mats = l.inertia_closure()?;
    mats.push(l.frob.clone());
    Ok(dual_structure(&from_presentation(&l.relations(&mats)).group))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingKind {
    /// `Z_p`.
    #[serde(rename = "p-adic")]
    PAdic { p: u64 },
    /// `F_q[[t]]`.
    #[serde(rename = "laurent")]
    Laurent { q: u64 },
}

/// `R_n = R/m^{n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    #[serde(flatten)]
    pub kind: RingKind,
    pub level: u32,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, f)` with `q = p^f`.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_factors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut f = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        f += 1;
    }
    Some((p, f))
}

impl RingKind {
    fn validate(&self) -> Result<(u64, u32)> {
        match *self {
            RingKind::PAdic { p } => match prime_power(p) {
                Some((_, 1)) => Ok((p, 1)),
                _ => Err(Error::InvalidInput(format!("{p} is not prime"))),
            },
            RingKind::Laurent { q } => {
                prime_power(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))
            }
        }
    }

    /// Residue field size.
    pub fn residue_order(&self) -> u64 {
        match *self {
            RingKind::PAdic { p } => p,
            RingKind::Laurent { q } => q,
        }
    }
}

/// `F_p[x]/(m)` for a monic irreducible `m` of degree `f`, elements encoded
/// in base `p` with the constant coefficient lowest.
struct FiniteField {
    p: u64,
    f: usize,
    modulus: Vec<u64>,
    mul_table: Option<Vec<u32>>,
}

fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let c = a.pop().unwrap();
        if c != 0 {
            let off = a.len() - dm;
            for (k, &mk) in m[..dm].iter().enumerate() {
                a[off + k] = (a[off + k] + (p - c) * mk) % p;
            }
        }
    }
    a
}

fn monic(code: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut c = code;
    let mut v: Vec<u64> = (0..deg)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect();
    v.push(1);
    v
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    (1..=deg / 2).all(|d| {
        (0..p.pow(d as u32)).all(|code| poly_rem(m.to_vec(), &monic(code, d, p), p).iter().any(|&c| c != 0))
    })
}

impl FiniteField {
    fn new(p: u64, f: u32) -> Self {
        let f = f as usize;
        let modulus = (0..p.pow(f as u32))
            .map(|code| monic(code, f, p))
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        let mut k = FiniteField {
            p,
            f,
            modulus,
            mul_table: None,
        };
        let q = k.order();
        if q <= 512 {
            let t = (0..q * q).map(|i| k.mul_slow(i / q, i % q) as u32).collect();
            k.mul_table = Some(t);
        }
        k
    }

    fn order(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    fn digits(&self, mut a: u64) -> Vec<u64> {
        (0..self.f)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s: Vec<u64> = self
            .digits(a)
            .iter()
            .zip(self.digits(b))
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        self.encode(&s)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.f];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        self.encode(&poly_rem(prod, &self.modulus, self.p))
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.mul_table {
            Some(t) => t[(a * self.order() + b) as usize] as u64,
            None => self.mul_slow(a, b),
        }
    }
}

/// Arithmetic in `R_n` on elements encoded as integers below `|R_n|`.
enum TruncatedRing {
    Integers { modulus: u64 },
    Series { k: FiniteField, len: usize },
}

impl TruncatedRing {
    fn new(r: &RingSpec, bound: u64) -> Result<Self> {
        let (p, f) = r.kind.validate()?;
        let q = r.kind.residue_order();
        let size = (q as u128).checked_pow(r.level + 1).unwrap_or(u128::MAX);
        if size > bound as u128 {
            return Err(Error::BoundExceeded {
                what: "truncated ring size",
                bound,
                actual: size.min(u64::MAX as u128) as u64,
            });
        }
        Ok(match r.kind {
            RingKind::PAdic { .. } => TruncatedRing::Integers { modulus: size as u64 },
            RingKind::Laurent { .. } => TruncatedRing::Series {
                k: FiniteField::new(p, f),
                len: r.level as usize + 1,
            },
        })
    }

    fn size(&self) -> u64 {
        match self {
            TruncatedRing::Integers { modulus } => *modulus,
            TruncatedRing::Series { k, len } => k.order().pow(*len as u32),
        }
    }

    fn one(&self) -> u64 {
        1
    }

    fn is_unit(&self, x: u64) -> bool {
        match self {
            TruncatedRing::Integers { modulus } => num_integer::gcd(x, *modulus) == 1,
            TruncatedRing::Series { k, .. } => x % k.order() != 0,
        }
    }

    fn coeffs(k: &FiniteField, len: usize, mut x: u64) -> Vec<u64> {
        let q = k.order();
        (0..len)
            .map(|_| {
                let c = x % q;
                x /= q;
                c
            })
            .collect()
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        match self {
            TruncatedRing::Integers { modulus } => ((x as u128 * y as u128) % *modulus as u128) as u64,
            TruncatedRing::Series { k, len } => {
                let (a, b) = (Self::coeffs(k, *len, x), Self::coeffs(k, *len, y));
                let mut c = vec![0u64; *len];
                for i in 0..*len {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..*len - i {
                        c[i + j] = k.add(c[i + j], k.mul(a[i], b[j]));
                    }
                }
                c.iter().rev().fold(0, |acc, &d| acc * k.order() + d)
            }
        }
    }

    fn pow(&self, x: u64, mut e: u64) -> u64 {
        let (mut acc, mut base) = (self.one(), x);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduction `R_m → R_n` for `n ≤ m`.
    fn reduce(&self, target: &TruncatedRing, x: u64) -> u64 {
        x % target.size()
    }

    fn units(&self) -> Vec<u64> {
        (0..self.size()).filter(|&x| self.is_unit(x)).collect()
    }

    fn element_order(&self, x: u64, group_order: u64, primes: &[u64]) -> u64 {
        let mut d = group_order;
        for &l in primes {
            while d % l == 0 && self.pow(x, d / l) == self.one() {
                d /= l;
            }
        }
        d
    }
}

/// Finite abelian group structure from the multiset of element orders: the
/// number of cyclic `ℓ`-factors of order at least `ℓ^j` is
/// `log_ℓ(c_j / c_{j−1})` with `c_j = #{x : x^{ℓ^j} = 1}`.
pub fn structure_from_orders(orders: &[u64]) -> FgAbGroup {
    let n = orders.len() as u64;
    let mut cyclic = Vec::new();
    for l in prime_factors(n) {
        let mut counts = vec![1u64];
        let mut lj = 1u64;
        while *counts.last().unwrap() < l_part(n, l) {
            lj *= l;
            counts.push(orders.iter().filter(|&&o| lj % o == 0).count() as u64);
        }
        let at_least: Vec<u32> = counts
            .windows(2)
            .map(|w| ilog(w[1] / w[0], l))
            .collect();
        for (j, &k) in at_least.iter().enumerate() {
            let next = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..k - next {
                cyclic.push(l.pow(j as u32 + 1));
            }
        }
    }
    FgAbGroup::from_cyclic_factors(&cyclic)
}

fn l_part(mut n: u64, l: u64) -> u64 {
    let mut r = 1;
    while n % l == 0 {
        n /= l;
        r *= l;
    }
    r
}

fn ilog(mut x: u64, l: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        x /= l;
        k += 1;
    }
    k
}

fn unit_orders(ring: &TruncatedRing, units: &[u64]) -> Vec<u64> {
    let n = units.len() as u64;
    let primes = prime_factors(n);
    units
        .iter()
        .map(|&x| ring.element_order(x, n, &primes))
        .collect()
}

/// `R_n^×` by enumeration.
pub fn truncated_units(r: &RingSpec, bound: u64) -> Result<FgAbGroup> {
    let ring = TruncatedRing::new(r, bound)?;
    Ok(structure_from_orders(&unit_orders(&ring, &ring.units())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasicharacterCount {
    pub order: u64,
    pub structure: DualStructure,
}

/// Level-`n` quasicharacters of a split torus `G_m^d`.
pub fn quasicharacter_count(l: &GaloisLattice, r: &RingSpec, bound: u64) -> Result<QuasicharacterCount> {
    if !l.is_split()? {
        return Err(Error::NotSplit(
            "quasicharacter counting needs trivial inertia and frobenius".into(),
        ));
    }
    let u = truncated_units(r, bound)?;
    let one = u.order().expect("finite");
    let order = one.checked_pow(l.rank as u32).ok_or(Error::BoundExceeded {
        what: "quasicharacter count",
        bound: u64::MAX,
        actual: u64::MAX,
    })?;
    let factors: Vec<u64> = (0..l.rank).flat_map(|_| u.factors().iter().copied()).collect();
    Ok(QuasicharacterCount {
        order,
        structure: dual_structure(&FgAbGroup::from_cyclic_factors(&factors)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelSystemReport {
    pub ring: RingKind,
    pub n: u32,
    pub m: u32,
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub surjective: bool,
    pub kernel_order: u64,
    pub kernel: FgAbGroup,
    /// `|R_n^×|` divides `|R_m^×|` and the reduction is onto, so pulling back
    /// characters embeds level `n` into level `m`.
    pub dual_embeds: bool,
}

pub fn level_system_check(kind: RingKind, n: u32, m: u32, bound: u64) -> Result<LevelSystemReport> {
    if n > m {
        return Err(Error::InvalidInput(format!("levels must satisfy n <= m, got {n} > {m}")));
    }
    let big = TruncatedRing::new(&RingSpec { kind, level: m }, bound)?;
    let small = TruncatedRing::new(&RingSpec { kind, level: n }, bound)?;
    let (src, tgt) = (big.units(), small.units());
    let mut hit: HashSet<u64> = HashSet::with_capacity(tgt.len());
    let mut kernel = Vec::new();
    for &x in &src {
        let y = big.reduce(&small, x);
        hit.insert(y);
        if y == small.one() {
            kernel.push(x);
        }
    }
    let surjective = tgt.iter().all(|y| hit.contains(y)) && hit.len() == tgt.len();
    let korders: Vec<u64> = {
        let k = kernel.len() as u64;
        let primes = prime_factors(k);
        kernel.iter().map(|&x| big.element_order(x, k, &primes)).collect()
    };
    let source = structure_from_orders(&unit_orders(&big, &src));
    let target = structure_from_orders(&unit_orders(&small, &tgt));
    let dual_embeds = surjective && src.len() % tgt.len() == 0;
    Ok(LevelSystemReport {
        ring: kind,
        n,
        m,
        source,
        target,
        surjective,
        kernel_order: kernel.len() as u64,
        kernel: structure_from_orders(&korders),
        dual_embeds,
    })
}

/// Expected `|R_n^×| = (q − 1)·q^n`.
pub fn unit_count(kind: RingKind, level: u32) -> u64 {
    let q = kind.residue_order();
    (q - 1) * q.pow(level)
}
