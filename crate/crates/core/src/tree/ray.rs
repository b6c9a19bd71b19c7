use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{FreeWord, Letter};

/// An eventually periodic end of the Cayley tree: the reduced infinite word
/// `prefix * period * period * ...`.
///
/// Normalized so that equal ends have equal representations: the period is
/// primitive, `prefix * period` does not cancel, and the prefix is as short
/// as possible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BoundaryRay {
    prefix: FreeWord,
    period: FreeWord,
}

fn rotate_left(v: &mut [Letter]) {
    v.rotate_left(1);
}

impl BoundaryRay {
    /// Normalizes `prefix * period^∞`. The period must be nontrivial and
    /// cyclically reduced; the prefix is arbitrary.
    pub fn new(prefix: &FreeWord, period: &FreeWord) -> Result<Self> {
        if period.is_identity() {
            return Err(Error::EmptyWord);
        }
        if !period.is_cyclically_reduced() {
            return Err(Error::Precondition(format!("ray period {period} is not cyclically reduced")));
        }
        if prefix.rank() != period.rank() {
            return Err(Error::RankMismatch { left: prefix.rank(), right: period.rank() });
        }
        let rank = period.rank();
        let mut head: Vec<Letter> = prefix.letters().to_vec();
        let (root, _) = period.primitive_root()?;
        let mut per: Vec<Letter> = root.letters().to_vec();
        // Cancel the prefix tail against the periodic stream.
        while let Some(&l) = head.last() {
            if l != per[0].inverse() {
                break;
            }
            head.pop();
            rotate_left(&mut per);
        }
        // Shift the period left while the prefix ends with its last letter.
        while let Some(&l) = head.last() {
            if l != *per.last().expect("nonempty") {
                break;
            }
            head.pop();
            per.rotate_right(1);
        }
        Ok(BoundaryRay {
            prefix: FreeWord::from_letters_unchecked(rank, head),
            period: FreeWord::from_letters_unchecked(rank, per),
        })
    }

    pub fn prefix(&self) -> &FreeWord {
        &self.prefix
    }

    pub fn period(&self) -> &FreeWord {
        &self.period
    }

    pub fn rank(&self) -> u32 {
        self.period.rank()
    }

    /// The `i`-th letter of the infinite reduced word.
    pub fn letter(&self, i: usize) -> Letter {
        let p = self.prefix.letters();
        if i < p.len() {
            p[i]
        } else {
            let q = self.period.letters();
            q[(i - p.len()) % q.len()]
        }
    }

    pub fn starts_with(&self, w: &[Letter]) -> bool {
        w.iter().enumerate().all(|(i, &l)| self.letter(i) == l)
    }

    /// The first `n` letters, as a vertex of the tree.
    pub fn truncate(&self, n: usize) -> FreeWord {
        FreeWord::from_letters_unchecked(self.rank(), (0..n).map(|i| self.letter(i)))
    }
}

impl fmt::Display for BoundaryRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|({})^∞", self.prefix, self.period)
    }
}

impl Serialize for BoundaryRay {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The attracting and repelling ends `w^+`, `w^-` of a nontrivial element.
pub fn endpoints(w: &FreeWord) -> Result<(BoundaryRay, BoundaryRay)> {
    let d = w.cyclic_decompose()?;
    let plus = BoundaryRay::new(&d.conjugator, &d.core)?;
    let minus = BoundaryRay::new(&d.conjugator, &d.core.inverse())?;
    Ok((plus, minus))
}

/// `g * r`.
pub fn translate_ray(g: &FreeWord, r: &BoundaryRay) -> Result<BoundaryRay> {
    BoundaryRay::new(&g.concat(&r.prefix)?, &r.period)
}
