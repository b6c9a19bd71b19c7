//! `SL2(Z)` with arbitrary-precision entries.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::TargetGroup;
use crate::error::{Error, Result};
use crate::words::FreeWord;

/// An integer matrix `(a b; c d)` with `ad - bc = 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2Int {
    entries: [BigInt; 4],
}

impl Mat2Int {
    pub fn new(entries: [BigInt; 4]) -> Result<Self> {
        let [a, b, c, d] = &entries;
        if a * d - b * c != BigInt::one() {
            return Err(Error::Precondition(format!("determinant of ({a} {b}; {c} {d}) is not 1")));
        }
        Ok(Mat2Int { entries })
    }

    pub fn from_i64(entries: [i64; 4]) -> Result<Self> {
        Self::new(entries.map(BigInt::from))
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = &self.entries;
        a.is_one() && b.is_zero() && c.is_zero() && d.is_one()
    }

    fn mul_raw(&self, o: &Mat2Int) -> Mat2Int {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &o.entries;
        Mat2Int { entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    fn inv_raw(&self) -> Mat2Int {
        let [a, b, c, d] = &self.entries;
        Mat2Int { entries: [d.clone(), -b, -c, a.clone()] }
    }
}

impl fmt::Debug for Mat2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.entries;
        write!(f, "({a} {b}; {c} {d})")
    }
}

/// Row-major; entries that fit in `i64` are numbers, larger ones decimal
/// strings.
impl Serialize for Mat2Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Entry {
            Small(i64),
            Big(String),
        }
        let v: Vec<Entry> = self
            .entries
            .iter()
            .map(|x| x.to_i64().map(Entry::Small).unwrap_or_else(|| Entry::Big(x.to_string())))
            .collect();
        v.serialize(s)
    }
}

/// `SL2(Z)`; infinite, so never enumerated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntSl2;

impl TargetGroup for IntSl2 {
    type Elem = Mat2Int;

    fn identity(&self) -> Mat2Int {
        Mat2Int::from_i64([1, 0, 0, 1]).expect("det 1")
    }

    fn mul(&self, a: &Mat2Int, b: &Mat2Int) -> Mat2Int {
        a.mul_raw(b)
    }

    fn inv(&self, a: &Mat2Int) -> Mat2Int {
        a.inv_raw()
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn elements(&self) -> Result<Vec<Mat2Int>> {
        Err(Error::Precondition("SL2(Z) is infinite".into()))
    }
}

/// The shortlex-first nontrivial reduced word of length at most `max_len`
/// in `x1 -> a`, `x2 -> b` that evaluates to the identity, if any.
pub fn find_relation(a: &Mat2Int, b: &Mat2Int, max_len: usize) -> Option<FreeWord> {
    let gens = [(1i64, a.clone()), (-1, a.inv_raw()), (2, b.clone()), (-2, b.inv_raw())];
    let id = IntSl2.identity();
    // Length by length so the first hit is shortest.
    let mut layer: Vec<(Vec<i64>, Mat2Int)> = vec![(Vec::new(), id)];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for (word, m) in &layer {
            for (l, g) in &gens {
                if word.last() == Some(&-l) {
                    continue;
                }
                let p = m.mul_raw(g);
                let mut w = word.clone();
                w.push(*l);
                if p.is_identity() {
                    return Some(FreeWord::reduce(2, w).expect("rank 2"));
                }
                next.push((w, p));
            }
        }
        layer = next;
    }
    None
}

/// True iff no nontrivial reduced word of length at most `max_len` in
/// `a, b` is the identity matrix.
pub fn free_pair_check(a: &Mat2Int, b: &Mat2Int, max_len: usize) -> bool {
    find_relation(a, b, max_len).is_none()
}
