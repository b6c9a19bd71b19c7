//! `SL2(Z/p^k)` with residues stored in `u32`.

use std::fmt;

use serde::{Serialize, Serializer};

use super::{generated_subgroup, TargetGroup};
use crate::error::{Error, Result};

pub const DEFAULT_MODULUS_CAP: u64 = 625;
pub const DEFAULT_ENUMERATION_CAP: u64 = 200_000;
/// Groups up to this order get their commutants by filtering the full
/// enumeration; larger ones solve the commutation equations.
pub const BRUTE_FORCE_COMMUTANT_LIMIT: u64 = 200_000;

/// A matrix `(a b; c d)` of determinant 1 modulo `p^k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2ModPk {
    entries: [u32; 4],
    p: u32,
    k: u32,
}

impl Mat2ModPk {
    /// Row-major residues in `0..p^k`.
    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

impl fmt::Debug for Mat2ModPk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "({a} {b}; {c} {d}) mod {}^{}", self.p, self.k)
    }
}

impl Serialize for Mat2ModPk {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i64) as u64)
}

/// All `u` in `0..m` with `coef * u = rhs (mod m)`.
fn solve_linear(coef: u64, rhs: u64, m: u64) -> Vec<u64> {
    let g = gcd(coef % m, m);
    if !rhs.is_multiple_of(g) {
        return Vec::new();
    }
    let m2 = m / g;
    let u0 = if m2 == 1 { 0 } else { (rhs / g) % m2 * inverse_mod(coef / g % m2, m2).expect("coprime") % m2 };
    (0..g).map(|t| u0 + t * m2).collect()
}

/// `SL2(Z/p^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2ModPk {
    p: u32,
    k: u32,
    q: u32,
    enumeration_cap: u64,
}

/// `SL2(Z/p^k)` with the default caps: `p^k <= 625`, enumeration up to
/// 200000 elements.
pub fn sl2_modpk_ops(p: u32, k: u32) -> Result<Sl2ModPk> {
    Sl2ModPk::with_caps(p, k, DEFAULT_MODULUS_CAP, DEFAULT_ENUMERATION_CAP)
}

impl Sl2ModPk {
    pub fn with_caps(p: u32, k: u32, modulus_cap: u64, enumeration_cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Precondition("k must be positive".into()));
        }
        let q = u64::from(p).checked_pow(k).unwrap_or(u64::MAX);
        if q > modulus_cap {
            return Err(Error::CapExceeded { what: "modulus p^k", value: q, cap: modulus_cap });
        }
        Ok(Sl2ModPk { p, k, q: q as u32, enumeration_cap })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn enumeration_cap(&self) -> u64 {
        self.enumeration_cap
    }

    /// `p^(3k) (1 - p^-2)`.
    pub fn group_order(&self) -> u64 {
        let p = u64::from(self.p);
        p.pow(3 * self.k - 2) * (p * p - 1)
    }

    fn make(&self, e: [u64; 4]) -> Mat2ModPk {
        let q = u64::from(self.q);
        Mat2ModPk { entries: e.map(|x| (x % q) as u32), p: self.p, k: self.k }
    }

    /// Reduces integer entries and checks the determinant.
    pub fn element(&self, entries: [i64; 4]) -> Result<Mat2ModPk> {
        let q = i64::from(self.q);
        let e = entries.map(|x| x.rem_euclid(q) as u64);
        let m = self.make(e);
        if !self.is_member(&m) {
            return Err(Error::Precondition(format!("{entries:?} has determinant != 1 mod {q}")));
        }
        Ok(m)
    }

    pub fn is_member(&self, m: &Mat2ModPk) -> bool {
        let q = u64::from(self.q);
        let [a, b, c, d] = m.entries.map(u64::from);
        m.p == self.p && m.k == self.k && m.entries.iter().all(|&x| x < self.q) && (a * d + q * q - b * c) % q == 1 % q
    }

    /// Solves `X g = g X` with `det X = 1` directly: with `X = (x y; z w)`
    /// and `u = w - x`, the equations `b z = c y`, `b u = (d - a) y` and
    /// `c u = (d - a) z` are linear; `x` then solves `x (x + u) - y z = 1`.
    pub fn structured_centralizer(&self, g: &Mat2ModPk) -> Result<Vec<Mat2ModPk>> {
        let q = u64::from(self.q);
        let [a, b, c, d] = g.entries.map(u64::from);
        let dma = (d + q - a) % q;
        let mut out = Vec::new();
        for y in 0..q {
            let u_set = solve_linear(b, dma * y % q, q);
            if u_set.is_empty() {
                continue;
            }
            for z in solve_linear(b, c * y % q, q) {
                for &u in &u_set {
                    if (c * u) % q != (dma * z) % q {
                        continue;
                    }
                    for x in 0..q {
                        if (x * ((x + u) % q) + q * q - y * z) % q == 1 % q {
                            out.push(self.make([x, y, z, x + u]));
                            if out.len() as u64 > self.enumeration_cap {
                                return Err(Error::CapExceeded {
                                    what: "commutant size",
                                    value: out.len() as u64,
                                    cap: self.enumeration_cap,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The first pair, in a fixed order of small integer matrices, that
    /// generates the whole group.
    pub fn search_generating_pair(&self) -> Result<(Mat2ModPk, Mat2ModPk)> {
        let order = self.order().expect("finite");
        if order > self.enumeration_cap {
            return Err(Error::CapExceeded { what: "group order", value: order, cap: self.enumeration_cap });
        }
        let mut candidates: Vec<[i64; 4]> = Vec::new();
        for bound in 1..=3i64 {
            let range = -bound..=bound;
            for a in range.clone() {
                for b in range.clone() {
                    for c in range.clone() {
                        for d in range.clone() {
                            let e = [a, b, c, d];
                            if a * d - b * c == 1 && e.iter().any(|x| x.abs() == bound) {
                                candidates.push(e);
                            }
                        }
                    }
                }
            }
        }
        let mats: Vec<Mat2ModPk> = candidates.into_iter().filter_map(|e| self.element(e).ok()).collect();
        for (i, x) in mats.iter().enumerate() {
            for y in &mats[i + 1..] {
                if self.commute(x, y) {
                    continue;
                }
                if generated_subgroup(self, &[*x, *y], order)?.len() as u64 == order {
                    return Ok((*x, *y));
                }
            }
        }
        Err(Error::Invariant("no generating pair among small matrices".into()))
    }
}

impl TargetGroup for Sl2ModPk {
    type Elem = Mat2ModPk;

    fn identity(&self) -> Mat2ModPk {
        self.make([1, 0, 0, 1])
    }

    fn mul(&self, x: &Mat2ModPk, y: &Mat2ModPk) -> Mat2ModPk {
        let [a, b, c, d] = x.entries.map(u64::from);
        let [e, f, g, h] = y.entries.map(u64::from);
        self.make([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn inv(&self, x: &Mat2ModPk) -> Mat2ModPk {
        let q = u64::from(self.q);
        let [a, b, c, d] = x.entries.map(u64::from);
        self.make([d, q - b, q - c, a])
    }

    fn order(&self) -> Option<u64> {
        Some(self.group_order())
    }

    /// Sorted by entries.
    fn elements(&self) -> Result<Vec<Mat2ModPk>> {
        let order = self.group_order();
        if order > self.enumeration_cap {
            return Err(Error::CapExceeded { what: "group order", value: order, cap: self.enumeration_cap });
        }
        let q = u64::from(self.q);
        let p = u64::from(self.p);
        let mut out = Vec::with_capacity(order as usize);
        for a in 0..q {
            for b in 0..q {
                if a % p != 0 {
                    let ai = inverse_mod(a, q).expect("unit");
                    for c in 0..q {
                        out.push(self.make([a, b, c, (1 + b * c) % q * ai]));
                    }
                } else if b % p != 0 {
                    let bi = inverse_mod(b, q).expect("unit");
                    for d in 0..q {
                        out.push(self.make([a, b, (a * d + q - 1) % q * bi, d]));
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn commutant(&self, list: &[Mat2ModPk]) -> Result<Vec<Mat2ModPk>> {
        let mut out = match list.first() {
            Some(g) if self.group_order() > BRUTE_FORCE_COMMUTANT_LIMIT => {
                let mut c = self.structured_centralizer(g)?;
                c.retain(|x| list.iter().all(|h| self.commute(x, h)));
                c
            }
            _ => self.elements()?.into_iter().filter(|x| list.iter().all(|g| self.commute(x, g))).collect(),
        };
        out.sort();
        Ok(out)
    }
}
