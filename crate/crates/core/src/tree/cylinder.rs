use std::fmt;

use serde::Serialize;

use super::ray::BoundaryRay;
use crate::error::{Error, Result};
use crate::words::{FreeWord, Letter};

/// The set of ends lying beyond the oriented edge `base -> base * direction`.
///
/// When the edge points away from the identity this is the prefix cylinder of
/// `base * direction`. When it points back (`direction` cancels the last
/// letter of `base`) it is the complement of the prefix cylinder of `base`;
/// such sets arise as images of ordinary cylinders, so they are first-class
/// here. For rank at least 2, distinct edges give distinct sets, so derived
/// equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Cylinder {
    base: FreeWord,
    direction: Letter,
}

/// Set-level view used by the predicates.
enum Shape<'a> {
    Prefix(Vec<Letter>),
    Complement(&'a [Letter]),
}

fn prefix_related(a: &[Letter], b: &[Letter]) -> bool {
    a.starts_with(b) || b.starts_with(a)
}

impl Cylinder {
    pub fn new(base: FreeWord, direction: i64) -> Result<Self> {
        let rank = base.rank();
        if rank < 2 {
            return Err(Error::DegenerateCylinder("rank-1 boundary has only two points".into()));
        }
        let direction = Letter::new(direction, rank)
            .map_err(|_| Error::DegenerateCylinder(format!("direction {direction} outside rank {rank}")))?;
        Ok(Cylinder { base, direction })
    }

    /// Prefix cylinder of a nonempty reduced word.
    pub fn prefix(w: &FreeWord) -> Result<Self> {
        let last = w.last().ok_or_else(|| Error::DegenerateCylinder("empty prefix".into()))?;
        let base = FreeWord::from_letters_unchecked(w.rank(), w.letters()[..w.len() - 1].iter().copied());
        Cylinder::new(base, last.index().into())
    }

    /// The prefix cylinder of depth `depth >= 1` around a boundary point.
    pub fn around(r: &BoundaryRay, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::DegenerateCylinder("depth 0 is the whole boundary".into()));
        }
        Cylinder::prefix(&r.truncate(depth))
    }

    pub fn base(&self) -> &FreeWord {
        &self.base
    }

    pub fn direction(&self) -> Letter {
        self.direction
    }

    pub fn is_forward(&self) -> bool {
        self.base.last() != Some(self.direction.inverse())
    }

    fn shape(&self) -> Shape<'_> {
        if self.is_forward() {
            let mut v = self.base.letters().to_vec();
            v.push(self.direction);
            Shape::Prefix(v)
        } else {
            Shape::Complement(self.base.letters())
        }
    }

    /// The complementary set: ends beyond the reversed edge.
    #[must_use]
    pub fn complement(&self) -> Cylinder {
        let head = FreeWord::from_letters_unchecked(
            self.base.rank(),
            self.base.letters().iter().copied().chain([self.direction]),
        );
        Cylinder { base: head, direction: self.direction.inverse() }
    }

    /// Exact image `g * self`.
    pub fn image(&self, g: &FreeWord) -> Result<Cylinder> {
        Ok(Cylinder { base: g.concat(&self.base)?, direction: self.direction })
    }

    pub fn contains(&self, r: &BoundaryRay) -> bool {
        match self.shape() {
            Shape::Prefix(w) => r.starts_with(&w),
            Shape::Complement(w) => !r.starts_with(w),
        }
    }

    pub fn is_disjoint(&self, other: &Cylinder) -> bool {
        match (self.shape(), other.shape()) {
            (Shape::Prefix(a), Shape::Prefix(b)) => !prefix_related(&a, &b),
            (Shape::Prefix(a), Shape::Complement(b)) | (Shape::Complement(b), Shape::Prefix(a)) => a.starts_with(b),
            // Two complements always share the ends starting with a letter
            // that begins neither removed prefix.
            (Shape::Complement(_), Shape::Complement(_)) => false,
        }
    }

    pub fn is_subset(&self, other: &Cylinder) -> bool {
        match (self.shape(), other.shape()) {
            (Shape::Prefix(a), Shape::Prefix(b)) => a.starts_with(&b),
            (Shape::Prefix(a), Shape::Complement(b)) => !prefix_related(&a, b),
            (Shape::Complement(_), Shape::Prefix(_)) => false,
            (Shape::Complement(a), Shape::Complement(b)) => b.starts_with(a),
        }
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = FreeWord::from_letters_unchecked(self.base.rank(), [self.direction]);
        write!(f, "Cyl({}; {})", self.base, d)
    }
}

/// `g * C`.
pub fn cylinder_image(g: &FreeWord, c: &Cylinder) -> Result<Cylinder> {
    c.image(g)
}
