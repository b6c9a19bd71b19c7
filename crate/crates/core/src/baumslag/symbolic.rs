//! Products of fixed words and powers `g^(s n + c)` of primitive bases, as
//! they arise when a Dehn-twist family is applied to a fixed element, and
//! the onset bound a ping-pong certificate gives for them.

use serde::Serialize;

use super::{certify_general, GeneralBaumslagInstance, PingPongCertificate, Slot};
use crate::error::{Error, Result};
use crate::words::FreeWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerFactor {
    Const(FreeWord),
    /// `bases[base]^(slope * n + offset)`.
    Power {
        base: usize,
        slope: i64,
        offset: i64,
    },
}

/// `f_1 f_2 ... f_k` over a fixed list of primitive bases.
#[derive(Clone, Debug)]
pub struct PowerProduct {
    bases: Vec<FreeWord>,
    factors: Vec<PowerFactor>,
}

/// An onset `n0` with the product nontrivial for every `n >= n0`, and the
/// data that proves it.
#[derive(Clone, Debug, Serialize)]
pub struct PowerOnset {
    pub onset: u64,
    /// The ping-pong instance, absent when the product does not depend on
    /// `n`.
    pub instance: Option<GeneralBaumslagInstance>,
    /// Exponent of each z-slot as `(slope, offset)`: `slope * n + offset`.
    pub exponents: Vec<(i64, i64)>,
    pub certificate: Option<PingPongCertificate>,
}

fn power_of(w: &FreeWord, base: &FreeWord) -> Option<i64> {
    if w.is_identity() {
        return Some(0);
    }
    let (root, e) = w.primitive_root().ok()?;
    if &root == base {
        Some(e.into())
    } else if root == base.inverse() {
        Some(-i64::from(e))
    } else {
        None
    }
}

impl PowerProduct {
    /// Every base must be nontrivial and not a proper power.
    pub fn new(bases: Vec<FreeWord>) -> Result<Self> {
        let first = bases.first().ok_or_else(|| Error::Precondition("no bases".into()))?;
        for b in &bases {
            first.concat(b)?;
            let (_, e) = b.primitive_root()?;
            if e != 1 {
                return Err(Error::Precondition(format!("base {b} is a proper power")));
            }
        }
        Ok(PowerProduct { bases, factors: Vec::new() })
    }

    pub fn rank(&self) -> u32 {
        self.bases[0].rank()
    }

    pub fn bases(&self) -> &[FreeWord] {
        &self.bases
    }

    pub fn factors(&self) -> &[PowerFactor] {
        &self.factors
    }

    pub fn push_const(&mut self, w: FreeWord) -> Result<()> {
        self.bases[0].concat(&w)?;
        self.factors.push(PowerFactor::Const(w));
        Ok(())
    }

    pub fn push_power(&mut self, base: usize, slope: i64, offset: i64) -> Result<()> {
        if base >= self.bases.len() {
            return Err(Error::Precondition(format!("base index {base} out of range")));
        }
        self.factors.push(PowerFactor::Power { base, slope, offset });
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        !self.factors.iter().any(|f| matches!(f, PowerFactor::Power { .. }))
    }

    pub fn eval(&self, n: u64) -> FreeWord {
        let mut g = FreeWord::identity(self.rank());
        for f in &self.factors {
            let x = match f {
                PowerFactor::Const(w) => w.clone(),
                PowerFactor::Power { base, slope, offset } => self.bases[*base].pow(slope * n as i64 + offset),
            };
            g = &g * &x;
        }
        g
    }

    /// Merges neighbours until nothing changes: constants multiply, powers
    /// of one base add, constants that are powers of a neighbouring base are
    /// absorbed, and slope-0 powers become constants. Afterwards every
    /// constant between two powers of one base fails to commute with it.
    pub fn simplify(&mut self) {
        while self.pass() {}
    }

    fn pass(&mut self) -> bool {
        let mut out: Vec<PowerFactor> = Vec::with_capacity(self.factors.len());
        let mut changed = false;
        for f in self.factors.drain(..) {
            let f = match f {
                PowerFactor::Const(w) if w.is_identity() => {
                    changed = true;
                    continue;
                }
                PowerFactor::Power { base, slope: 0, offset } => {
                    changed = true;
                    PowerFactor::Const(self.bases[base].pow(offset))
                }
                f => f,
            };
            let merged = match (out.last_mut(), &f) {
                (Some(PowerFactor::Const(a)), PowerFactor::Const(b)) => {
                    *a = &*a * b;
                    true
                }
                (
                    Some(PowerFactor::Power { base: b1, slope: s1, offset: c1 }),
                    PowerFactor::Power { base: b2, slope: s2, offset: c2 },
                ) if b1 == b2 => {
                    *s1 += s2;
                    *c1 += c2;
                    true
                }
                (Some(PowerFactor::Power { base, offset, .. }), PowerFactor::Const(w)) => {
                    match power_of(w, &self.bases[*base]) {
                        Some(k) => {
                            *offset += k;
                            true
                        }
                        None => false,
                    }
                }
                (Some(last @ PowerFactor::Const(_)), PowerFactor::Power { base, slope, offset }) => {
                    let PowerFactor::Const(w) = &*last else { unreachable!() };
                    match power_of(w, &self.bases[*base]) {
                        Some(k) => {
                            *last = PowerFactor::Power { base: *base, slope: *slope, offset: offset + k };
                            true
                        }
                        None => false,
                    }
                }
                _ => false,
            };
            changed |= merged;
            if !merged {
                out.push(f);
            }
        }
        self.factors = out;
        changed
    }

    /// Simplifies, then certifies the remaining alternating pattern with
    /// `z_j = bases[j - 1]` in relaxed mode and converts the certified
    /// exponent bound `N` into `n >= max ceil((N - sign * offset) / |slope|)`
    /// (and at least 1). A product that is constant gets onset 1 unless it
    /// is trivial, which is an error.
    pub fn certify(&mut self) -> Result<PowerOnset> {
        self.simplify();
        if self.is_constant() {
            if self.factors.is_empty() {
                return Err(Error::Invariant("product is trivial for every n".into()));
            }
            return Ok(PowerOnset { onset: 1, instance: None, exponents: Vec::new(), certificate: None });
        }
        let mut u = Vec::new();
        let mut pattern = Vec::new();
        let mut exponents = Vec::new();
        let mut expect_u = true;
        for f in &self.factors {
            match f {
                PowerFactor::Const(x) => {
                    u.push(x.clone());
                    pattern.push(Slot::U(u.len()));
                    expect_u = false;
                }
                PowerFactor::Power { base, slope, offset } => {
                    if expect_u {
                        pattern.push(Slot::U(0));
                    }
                    let sign = slope.signum();
                    pattern.push(Slot::Z { index: base + 1, sign: sign as i8 });
                    exponents.push((slope.abs(), sign * offset));
                    expect_u = true;
                }
            }
        }
        let instance = GeneralBaumslagInstance::new(self.bases.clone(), u, pattern, true)?;
        let certificate = certify_general(&instance)?;
        let n_cert = certificate.n as i64;
        let onset = exponents
            .iter()
            .map(|&(slope, offset)| ceil_div((n_cert - offset).max(0), slope))
            .max()
            .unwrap_or(1)
            .max(1) as u64;
        Ok(PowerOnset { onset, instance: Some(instance), exponents, certificate: Some(certificate) })
    }
}

fn ceil_div(a: i64, d: i64) -> i64 {
    (a + d - 1) / d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s, 2).unwrap()
    }

    #[test]
    fn merges_and_certifies() {
        let c = FreeWord::commutator(&w("x1"), &w("x2")).unwrap();
        let mut p = PowerProduct::new(vec![c.clone()]).unwrap();
        p.push_const(w("x1")).unwrap();
        p.push_power(0, -1, 0).unwrap();
        p.push_const(c.pow(2)).unwrap();
        p.push_const(w("x2")).unwrap();
        p.push_power(0, 1, 0).unwrap();
        let before: Vec<_> = (0..4).map(|n| p.eval(n)).collect();
        let cert = p.certify().unwrap();
        assert_eq!(p.factors().len(), 4);
        assert_eq!(before, (0..4).map(|n| p.eval(n)).collect::<Vec<_>>());
        for n in cert.onset..cert.onset + 10 {
            assert!(!p.eval(n).is_identity());
        }
        assert!(PowerProduct::new(vec![w("x1").pow(2)]).is_err());
    }

    #[test]
    fn constant_products() {
        let mut p = PowerProduct::new(vec![w("x1")]).unwrap();
        p.push_power(0, 1, 0).unwrap();
        p.push_power(0, -1, 0).unwrap();
        assert!(p.certify().is_err());
        let mut q = PowerProduct::new(vec![w("x1")]).unwrap();
        q.push_const(w("x2")).unwrap();
        assert_eq!(q.certify().unwrap().onset, 1);
    }
}
