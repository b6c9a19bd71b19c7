//! Exact arithmetic in finite-rank free groups.
//!
//! A [`FreeWord`] is always stored freely reduced, so equality of group
//! elements is plain sequence equality. Generators are 1-based; the letter
//! `-i` is the inverse of generator `i`.

mod enumerate;
mod hom;
mod parse;
mod subgroup;

pub use enumerate::{nontrivial_words, reduced_words};
pub use hom::{apply_hom, FreeHom};
pub use parse::Alphabet;
pub use subgroup::{is_free_basis_image, SubgroupGraph};

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A signed generator index; never zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: i64, rank: u32) -> Result<Self> {
        if index == 0 || index.unsigned_abs() > u64::from(rank) {
            return Err(Error::MalformedLetter { index, rank });
        }
        Ok(Letter(index as i32))
    }

    /// Generator `i` (positive) without a rank check.
    pub(crate) const fn raw(index: i32) -> Self {
        Letter(index)
    }

    pub const fn index(self) -> i32 {
        self.0
    }

    pub const fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub const fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[must_use]
    #[inline]
    pub const fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.0)
    }
}

/// Letters are ordered `x1 < x1^-1 < x2 < x2^-1 < ...`.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.generator(), self.0 < 0).cmp(&(other.generator(), other.0 < 0))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Appends `l` to an already reduced buffer, cancelling if needed.
#[inline]
pub(crate) fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last() == Some(&l.inverse()) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

/// Number of letters that cancel when `a` is followed by `b`.
#[inline]
fn seam(a: &[Letter], b: &[Letter]) -> usize {
    let n = a.len().min(b.len());
    let (a, b) = (&a[a.len() - n..], &b[..n]);
    let mut k = 0;
    while k < n && a[n - 1 - k].0 == -b[k].0 {
        k += 1;
    }
    k
}

/// A freely reduced word in the free group of the given rank.
#[derive(PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: u32,
    letters: Vec<Letter>,
}

impl Clone for FreeWord {
    fn clone(&self) -> Self {
        FreeWord { rank: self.rank, letters: self.letters.clone() }
    }

    #[inline]
    fn clone_from(&mut self, source: &Self) {
        self.rank = source.rank;
        self.letters.clone_from(&source.letters);
    }
}

/// Conjugate form `u * core * u^-1` with a cyclically reduced core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomp {
    pub conjugator: FreeWord,
    pub core: FreeWord,
}

impl FreeWord {
    pub fn identity(rank: u32) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: u32, index: i64) -> Result<Self> {
        Ok(FreeWord { rank, letters: vec![Letter::new(index, rank)?] })
    }

    /// Reduces an arbitrary letter sequence. Reduction is confluent, so the
    /// result does not depend on the order in which cancellations happen.
    pub fn reduce<I>(rank: u32, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut letters = Vec::new();
        for i in indices {
            push_reduced(&mut letters, Letter::new(i, rank)?);
        }
        Ok(FreeWord { rank, letters })
    }

    /// Builds a word from letters already known to be valid for `rank`.
    pub(crate) fn from_letters_unchecked<I>(rank: u32, letters: I) -> Self
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut buf = Vec::new();
        for l in letters {
            push_reduced(&mut buf, l);
        }
        FreeWord { rank, letters: buf }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> + '_ {
        self.letters.iter().map(|l| l.index())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    fn check_rank(&self, other: &FreeWord) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    /// Group product `self * other`.
    pub fn concat(&self, other: &FreeWord) -> Result<FreeWord> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FreeWord) -> FreeWord {
        // Cancellation only happens at the seam.
        let (a, b) = (&self.letters, &other.letters);
        let k = seam(a, b);
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        FreeWord { rank: self.rank, letters }
    }

    #[must_use]
    pub fn inverse(&self) -> FreeWord {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Returns `u * self * u^-1`.
    pub fn conjugate(&self, u: &FreeWord) -> Result<FreeWord> {
        self.check_rank(u)?;
        Ok(u.mul_unchecked(self).mul_unchecked(&u.inverse()))
    }

    #[must_use]
    pub fn pow(&self, e: i64) -> FreeWord {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let n = e.unsigned_abs() as usize;
        if n == 0 || base.is_identity() {
            return FreeWord::identity(self.rank);
        }
        let d = base.cyclic_decompose_unchecked();
        let core = d.core.letters;
        let mut letters = Vec::with_capacity(2 * d.conjugator.len() + n * core.len());
        letters.extend_from_slice(&d.conjugator.letters);
        for _ in 0..n {
            letters.extend_from_slice(&core);
        }
        letters.extend(d.conjugator.letters.iter().rev().map(|l| l.inverse()));
        FreeWord { rank: self.rank, letters }
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &FreeWord, b: &FreeWord) -> Result<FreeWord> {
        a.check_rank(b)?;
        Ok(a.mul_unchecked(b).mul_unchecked(&a.inverse()).mul_unchecked(&b.inverse()))
    }

    pub fn commutes(&self, other: &FreeWord) -> Result<bool> {
        Ok(FreeWord::commutator(self, other)?.is_identity())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    pub fn cyclic_decompose(&self) -> Result<CyclicDecomp> {
        if self.is_identity() {
            return Err(Error::EmptyWord);
        }
        Ok(self.cyclic_decompose_unchecked())
    }

    fn cyclic_decompose_unchecked(&self) -> CyclicDecomp {
        let a = &self.letters;
        let mut k = 0;
        while 2 * k + 1 < a.len() && a[k] == a[a.len() - 1 - k].inverse() {
            k += 1;
        }
        CyclicDecomp {
            conjugator: FreeWord { rank: self.rank, letters: a[..k].to_vec() },
            core: FreeWord { rank: self.rank, letters: a[k..a.len() - k].to_vec() },
        }
    }

    /// The unique root that is not a proper power, with `self = root^exponent`.
    /// The centralizer of a nontrivial element is the cyclic group on its root.
    pub fn primitive_root(&self) -> Result<(FreeWord, u32)> {
        let CyclicDecomp { conjugator, core } = self.cyclic_decompose()?;
        let c = core.letters();
        let n = c.len();
        let period = (1..=n)
            .find(|&d| n % d == 0 && (d..n).all(|i| c[i] == c[i - d]))
            .expect("the full length is always a period");
        let mut letters = conjugator.letters.clone();
        letters.extend_from_slice(&c[..period]);
        letters.extend(conjugator.letters.iter().rev().map(|l| l.inverse()));
        Ok((FreeWord { rank: self.rank, letters }, (n / period) as u32))
    }

    pub fn is_prefix_of(&self, other: &FreeWord) -> bool {
        other.letters.starts_with(&self.letters)
    }

    /// Abelianization: exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank as usize];
        for l in &self.letters {
            v[l.generator() as usize - 1] += if l.is_positive() { 1 } else { -1 };
        }
        v
    }

    /// Reinterprets the word in a free group of larger (or equal) rank.
    pub fn embed(&self, rank: u32) -> Result<FreeWord> {
        if let Some(l) = self.letters.iter().find(|l| l.generator() > rank) {
            return Err(Error::MalformedLetter { index: l.index().into(), rank });
        }
        Ok(FreeWord { rank, letters: self.letters.clone() })
    }

    pub fn to_text_with(&self, alphabet: &Alphabet) -> String {
        alphabet.format(&self.letters)
    }

    /// Parses the text form `x1*x2^-1` (see [`Alphabet`] for the grammar).
    pub fn parse(text: &str, rank: u32) -> Result<FreeWord> {
        Alphabet::standard(rank).parse(text)
    }

    /// Parses with the rank inferred as the largest generator index used.
    pub fn parse_infer(text: &str) -> Result<FreeWord> {
        let w = Alphabet::standard(u32::MAX >> 1).parse(text)?;
        let rank = w.letters.iter().map(|l| l.generator()).max().unwrap_or(1);
        Ok(FreeWord { rank, letters: w.letters })
    }
}

/// Shortlex: shorter words first, then letterwise.
impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Alphabet::standard(self.rank).format(&self.letters))
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord[{}]({})", self.rank, self)
    }
}

impl Serialize for FreeWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl std::ops::Mul for &FreeWord {
    type Output = FreeWord;

    /// Panics on rank mismatch; use [`FreeWord::concat`] for a checked product.
    fn mul(self, rhs: &FreeWord) -> FreeWord {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        self.mul_unchecked(rhs)
    }
}

impl FreeWord {
    /// Writes `self * rhs` into `out`, reusing its allocation.
    #[inline]
    pub fn mul_into(&self, rhs: &FreeWord, out: &mut FreeWord) {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        let (a, b) = (&self.letters, &rhs.letters);
        let k = seam(a, b);
        out.rank = self.rank;
        out.letters.clear();
        out.letters.extend_from_slice(&a[..a.len() - k]);
        out.letters.extend_from_slice(&b[k..]);
    }
}

impl FreeWord {
    /// Whether `x * y == u * v`, without building either product.
    pub fn product_eq(x: &FreeWord, y: &FreeWord, u: &FreeWord, v: &FreeWord) -> bool {
        assert!(x.rank == y.rank && u.rank == v.rank && x.rank == u.rank, "rank mismatch in word product");
        let (kx, ku) = (seam(&x.letters, &y.letters), seam(&u.letters, &v.letters));
        let (p, q) = (&x.letters[..x.len() - kx], &y.letters[kx..]);
        let (r, s) = (&u.letters[..u.len() - ku], &v.letters[ku..]);
        if p.len() + q.len() != r.len() + s.len() {
            return false;
        }
        // Align the shorter head against the longer one.
        let ((p, q), (r, s)) = if p.len() <= r.len() { ((p, q), (r, s)) } else { ((r, s), (p, q)) };
        let mid = r.len() - p.len();
        p == &r[..p.len()] && q[..mid] == r[p.len()..] && q[mid..] == *s
    }
}

impl std::ops::MulAssign<&FreeWord> for FreeWord {
    /// In-place product; keeps the existing allocation where it can.
    #[inline]
    fn mul_assign(&mut self, rhs: &FreeWord) {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        let (a, b) = (&self.letters, &rhs.letters);
        let k = seam(a, b);
        let keep = a.len() - k;
        self.letters.truncate(keep);
        self.letters.extend_from_slice(&rhs.letters[k..]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: u32, v: &[i64]) -> FreeWord {
        FreeWord::reduce(rank, v.iter().copied()).unwrap()
    }

    #[test]
    fn reduce_cancels() {
        assert!(w(2, &[1, -1]).is_identity());
        assert_eq!(w(2, &[1, 2, -2, 1]).indices().collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn malformed_letters_rejected() {
        assert!(matches!(FreeWord::reduce(2, [0]), Err(Error::MalformedLetter { .. })));
        assert!(matches!(FreeWord::reduce(2, [3]), Err(Error::MalformedLetter { .. })));
        assert!(matches!(FreeWord::reduce(2, [-3]), Err(Error::MalformedLetter { .. })));
    }

    #[test]
    fn rank_mismatch() {
        let a = w(2, &[1]);
        let b = w(3, &[1]);
        assert!(matches!(a.concat(&b), Err(Error::RankMismatch { .. })));
        assert!(a.conjugate(&b).is_err());
        assert!(a.commutes(&b).is_err());
    }

    #[test]
    fn invert_and_conjugate() {
        assert!(FreeWord::identity(2).inverse().is_identity());
        assert_eq!(w(2, &[1, 2]).inverse(), w(2, &[-2, -1]));
        assert_eq!(w(2, &[1]).conjugate(&w(2, &[2])).unwrap(), w(2, &[2, 1, -2]));
        let x = w(2, &[1, 2, -1]);
        assert_eq!(x.conjugate(&FreeWord::identity(2)).unwrap(), x);
    }

    #[test]
    fn cyclic_decomposition() {
        let d = w(2, &[1, 2, -1]).cyclic_decompose().unwrap();
        assert_eq!(d.conjugator, w(2, &[1]));
        assert_eq!(d.core, w(2, &[2]));
        let d = w(2, &[1, 2]).cyclic_decompose().unwrap();
        assert!(d.conjugator.is_identity());
        assert_eq!(d.core, w(2, &[1, 2]));
        assert_eq!(FreeWord::identity(2).cyclic_decompose(), Err(Error::EmptyWord));
    }

    #[test]
    fn roots() {
        assert_eq!(w(2, &[1, 1, 1]).primitive_root().unwrap(), (w(2, &[1]), 3));
        assert_eq!(w(2, &[1, 2]).primitive_root().unwrap(), (w(2, &[1, 2]), 1));
        assert_eq!(w(2, &[2, 1, 2, 1]).primitive_root().unwrap(), (w(2, &[2, 1]), 2));
        let (r, e) = w(2, &[2, 1, 1, 1, 1, -2]).primitive_root().unwrap();
        assert_eq!((r, e), (w(2, &[2, 1, -2]), 4));
        assert_eq!(w(2, &[2, 1, 2, 1, -2]).primitive_root().unwrap().1, 1);
        assert!(FreeWord::identity(2).primitive_root().is_err());
    }

    #[test]
    fn commutation() {
        let a = w(2, &[1, 2]);
        assert!(a.commutes(&a).unwrap());
        assert!(!w(2, &[1]).commutes(&w(2, &[2])).unwrap());
        assert!(a.commutes(&a.pow(-3)).unwrap());
    }

    #[test]
    fn powers_match_repeated_products() {
        let a = w(2, &[2, 1, 1, -2]);
        let mut acc = FreeWord::identity(2);
        for e in 0..6 {
            assert_eq!(a.pow(e), acc);
            acc = &acc * &a;
        }
        assert_eq!(a.pow(-2), a.inverse().pow(2));
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w(2, &[2]), w(2, &[-1]), w(2, &[1, 1]), w(2, &[1])];
        v.sort();
        assert_eq!(v, vec![w(2, &[1]), w(2, &[-1]), w(2, &[2]), w(2, &[1, 1])]);
    }
}
