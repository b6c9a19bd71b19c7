//! `F_(n+1) -> F_n`: the identity on `F_n` and `x_(n+1) -> a^m b a^-m`.

use serde::Serialize;

use super::{Family, ScanRow};
use crate::baumslag::{PowerOnset, PowerProduct};
use crate::error::{Error, Result};
use crate::words::{FreeHom, FreeWord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankExtension {
    n: u32,
    a: FreeWord,
    b: FreeWord,
}

impl RankExtension {
    /// Requires `a` nontrivial and `b` not commuting with `a`, both in `F_n`.
    pub fn new(n: u32, a: FreeWord, b: FreeWord) -> Result<Self> {
        for w in [&a, &b] {
            if w.rank() != n {
                return Err(Error::RankMismatch { left: w.rank(), right: n });
            }
        }
        if a.is_identity() {
            return Err(Error::Precondition("a must be nontrivial".into()));
        }
        if a.commutes(&b)? {
            return Err(Error::Hypothesis(format!("a = {a} and b = {b} commute")));
        }
        Ok(RankExtension { n, a, b })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn hom(&self, m: u64) -> FreeHom {
        let am = self.a.pow(m as i64);
        let images = (1..=self.n)
            .map(|i| FreeWord::generator(self.n, i.into()).expect("in range"))
            .chain([&(&am * &self.b) * &am.inverse()])
            .collect();
        FreeHom::new(self.n, images).expect("target rank")
    }

    /// The image of `w` as fixed words and powers of the primitive root of
    /// `a`, with `m` as the variable.
    pub fn power_product(&self, w: &FreeWord) -> Result<PowerProduct> {
        if w.rank() != self.n + 1 {
            return Err(Error::RankMismatch { left: w.rank(), right: self.n + 1 });
        }
        let (root, e) = self.a.primitive_root()?;
        let e = i64::from(e);
        let mut p = PowerProduct::new(vec![root])?;
        for i in w.indices() {
            if i.unsigned_abs() == self.n + 1 {
                p.push_power(0, e, 0)?;
                p.push_const(self.b.pow(i.signum().into()))?;
                p.push_power(0, -e, 0)?;
            } else {
                p.push_const(FreeWord::generator(self.n, i.into())?)?;
            }
        }
        Ok(p)
    }

    pub fn certified_onset(&self, w: &FreeWord) -> Result<PowerOnset> {
        let mut p = self.power_product(w)?;
        for m in [0, 1, 3] {
            if p.eval(m) != self.hom(m).apply(w)? {
                return Err(Error::Invariant(format!("symbolic image of {w} disagrees at m = {m}")));
            }
        }
        let onset = p.certify()?;
        if p.eval(onset.onset) != self.hom(onset.onset).apply(w)? {
            return Err(Error::Invariant(format!("symbolic image of {w} disagrees at the onset")));
        }
        Ok(onset)
    }

    /// Certified and empirical onsets of every word in `words`.
    pub fn scan(&self, words: &[FreeWord], window: u64) -> Result<Vec<ScanRow>> {
        let mut family = Family::new(|m| self.hom(m));
        words
            .iter()
            .map(|w| {
                let cert = self.certified_onset(w)?;
                family.row(w, w.to_string(), w.len(), &cert, window)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution() {
        let x = |s: &str| FreeWord::parse(s, 2).unwrap();
        let ext = RankExtension::new(2, x("x1"), x("x2")).unwrap();
        assert_eq!(ext.hom(0).image(3), &x("x2"));
        assert_eq!(ext.hom(2).image(3), &x("x1^2*x2*x1^-2"));
        assert!(RankExtension::new(2, x("x1"), x("x1^3")).is_err());
    }
}
