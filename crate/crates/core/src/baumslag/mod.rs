//! Nontriviality of words `a0 z^k0 a1 ... an z^kn` and their multi-element
//! generalization, by direct evaluation and by ping-pong certificates on the
//! boundary of the Cayley tree.

mod certificate;
mod symbolic;

pub use certificate::{
    audit_basic_certificate, audit_certificate, certify_basic, certify_general, verify_basic_certificate,
    verify_certificate, CertMode, Check, Neighborhood, PingPongCertificate, Role,
};
pub use symbolic::{PowerFactor, PowerOnset, PowerProduct};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::FreeWord;

/// Coefficients `a0..an` and the twist element `z` of the word
/// `a0 z^k0 a1 z^k1 ... an z^kn`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BaumslagInstance {
    pub coefficients: Vec<FreeWord>,
    pub z: FreeWord,
}

impl BaumslagInstance {
    /// Builds an instance without checking the commutator hypotheses; the
    /// operations that rely on them check them.
    pub fn new(coefficients: Vec<FreeWord>, z: FreeWord) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::Precondition("need coefficients a0..an with n >= 1".into()));
        }
        for a in &coefficients {
            z.concat(a)?;
        }
        if z.is_identity() {
            return Err(Error::Precondition("twist element z must be nontrivial".into()));
        }
        Ok(BaumslagInstance { coefficients, z })
    }

    pub fn n(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn rank(&self) -> u32 {
        self.z.rank()
    }

    /// `[z, a_i] != 1` for `i = 1..n`; `a0` is unconstrained.
    pub fn check_hypotheses(&self) -> Result<()> {
        for (i, a) in self.coefficients.iter().enumerate().skip(1) {
            let c = FreeWord::commutator(&self.z, a)?;
            if c.is_identity() {
                return Err(Error::Hypothesis(format!("[z, a{i}] = [{}, {a}] = 1", self.z)));
            }
        }
        Ok(())
    }

    /// The pattern `u1 z1 u2 z1 ... z1 u(n+1)` with `u(i+1) = a_i`, which
    /// covers everything but the trailing power `z^kn`.
    pub fn to_general(&self) -> GeneralBaumslagInstance {
        let n = self.n();
        let mut pattern = Vec::with_capacity(2 * n + 1);
        for i in 0..n {
            pattern.push(Slot::U(i + 1));
            pattern.push(Slot::Z { index: 1, sign: 1 });
        }
        pattern.push(Slot::U(n + 1));
        GeneralBaumslagInstance { z: vec![self.z.clone()], u: self.coefficients.clone(), pattern, relaxed: true }
    }
}

/// The displayed product `a0 z^k0 a1 z^k1 ... an z^kn`.
pub fn eval_basic(inst: &BaumslagInstance, exponents: &[i64]) -> Result<FreeWord> {
    if exponents.len() != inst.coefficients.len() {
        return Err(Error::Precondition(format!(
            "expected {} exponents, got {}",
            inst.coefficients.len(),
            exponents.len()
        )));
    }
    let mut g = FreeWord::identity(inst.rank());
    for (a, &k) in inst.coefficients.iter().zip(exponents) {
        g = g.concat(a)?.concat(&inst.z.pow(k))?;
    }
    Ok(g)
}

/// Calls `f` on every tuple of `len` exponents with magnitudes in `lo..=hi`
/// and both signs, in lexicographic order. Stops at the first `false`.
fn all_tuples(len: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64]) -> Result<bool>) -> Result<bool> {
    let values: Vec<i64> = (lo..=hi).flat_map(|m| [-m, m]).collect::<BTreeSet<_>>().into_iter().collect();
    let mut idx = vec![0usize; len];
    let mut tuple: Vec<i64> = vec![values[0]; len];
    loop {
        if !f(&tuple)? {
            return Ok(false);
        }
        let mut p = len;
        loop {
            if p == 0 {
                return Ok(true);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < values.len() {
                tuple[p] = values[idx[p]];
                break;
            }
            idx[p] = 0;
            tuple[p] = values[0];
        }
    }
}

/// Smallest `N <= cap` such that every exponent tuple with
/// `N <= |k_i| <= N + window` gives a nontrivial word.
pub fn empirical_min_n(inst: &BaumslagInstance, window: u64, cap: u64) -> Result<Option<u64>> {
    inst.check_hypotheses()?;
    for n in 1..=cap {
        let (lo, hi) = (n as i64, (n + window) as i64);
        let ok = all_tuples(inst.coefficients.len(), lo, hi, |k| Ok(!eval_basic(inst, k)?.is_identity()))?;
        if ok {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `w_m b^-k a^l_m b^k w_(m-1) ... w_1 b^-k a^l_1 b^k w_0`, with `l` listed
/// as `l_1..l_m` and `w` as `w_0..w_m`.
pub fn eval_conjugated(a: &FreeWord, b: &FreeWord, l: &[i64], w: &[FreeWord], k: i64) -> Result<FreeWord> {
    if l.is_empty() {
        return Err(Error::Precondition("m must be positive".into()));
    }
    if w.len() != l.len() + 1 {
        return Err(Error::Precondition(format!("expected {} words w_i, got {}", l.len() + 1, w.len())));
    }
    if a.commutes(b)? {
        return Err(Error::Precondition(format!("a = {a} and b = {b} commute")));
    }
    if let Some(i) = l.iter().position(|&x| x == 0) {
        return Err(Error::Precondition(format!("exponent l_{} is zero", i + 1)));
    }
    if let Some(i) = w.iter().position(FreeWord::is_identity) {
        return Err(Error::Precondition(format!("w_{i} is trivial")));
    }
    let (bk, bmk) = (b.pow(k), b.pow(-k));
    let mut g = w[l.len()].clone();
    for i in (0..l.len()).rev() {
        g = g.concat(&bmk)?.concat(&a.pow(l[i]))?.concat(&bk)?.concat(&w[i])?;
    }
    Ok(g)
}

/// One position of a pattern. `U(0)` is the identity slot `u0`; other
/// indices are 1-based into the u-list and z-list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    U(usize),
    Z { index: usize, sign: i8 },
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slot::U(i) => write!(f, "u{i}"),
            Slot::Z { index, sign } if sign < 0 => write!(f, "z{index}^-1"),
            Slot::Z { index, .. } => write!(f, "z{index}"),
        }
    }
}

impl FromStr for Slot {
    type Err = Error;

    /// Accepts `u0`, `u3`, `z2`, `z2^-1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { pos: 0, msg: format!("bad pattern slot {s:?}") };
        let (head, sign) = match s.strip_suffix("^-1") {
            Some(h) => (h, -1),
            None => (s, 1),
        };
        let index: usize = head.get(1..).and_then(|d| d.parse().ok()).ok_or_else(bad)?;
        match head.as_bytes().first() {
            Some(b'u') if sign == 1 => Ok(Slot::U(index)),
            Some(b'z') if index > 0 => Ok(Slot::Z { index, sign }),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Slot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Data `z_1..z_l`, `u_1..u_m` and one pattern `w_1 w_2 ... w_n` read left
/// to right: odd positions are u-slots, even positions carry a power of a
/// z-element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralBaumslagInstance {
    pub z: Vec<FreeWord>,
    pub u: Vec<FreeWord>,
    pub pattern: Vec<Slot>,
    pub relaxed: bool,
}

/// A failed hypothesis, named by the commutator that vanished.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub description: String,
    pub commutator: FreeWord,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 1", self.description)
    }
}

impl GeneralBaumslagInstance {
    pub fn new(z: Vec<FreeWord>, u: Vec<FreeWord>, pattern: Vec<Slot>, relaxed: bool) -> Result<Self> {
        let first = z.first().ok_or_else(|| Error::Precondition("empty z-list".into()))?;
        for w in z.iter().chain(&u) {
            first.concat(w)?;
        }
        let inst = GeneralBaumslagInstance { z, u, pattern, relaxed };
        inst.validate_pattern()?;
        Ok(inst)
    }

    pub fn rank(&self) -> u32 {
        self.z[0].rank()
    }

    /// `u_i`, with `u_0` the identity.
    pub fn u_elem(&self, i: usize) -> FreeWord {
        if i == 0 {
            FreeWord::identity(self.rank())
        } else {
            self.u[i - 1].clone()
        }
    }

    pub fn z_elem(&self, j: usize) -> &FreeWord {
        &self.z[j - 1]
    }

    pub fn z_slot_count(&self) -> usize {
        self.pattern.iter().filter(|s| matches!(s, Slot::Z { .. })).count()
    }

    /// Alternation, index ranges and the side conditions on `u0` slots.
    pub fn validate_pattern(&self) -> Result<()> {
        let p = &self.pattern;
        if p.is_empty() {
            return Err(Error::Pattern("empty pattern".into()));
        }
        for (pos, slot) in p.iter().enumerate() {
            match *slot {
                Slot::U(i) if pos % 2 == 0 => {
                    if i > self.u.len() {
                        return Err(Error::Pattern(format!(
                            "slot {} names u{i}, only {} given",
                            pos + 1,
                            self.u.len()
                        )));
                    }
                }
                Slot::Z { index, sign } if pos % 2 == 1 => {
                    if index == 0 || index > self.z.len() {
                        return Err(Error::Pattern(format!(
                            "slot {} names z{index}, only {} given",
                            pos + 1,
                            self.z.len()
                        )));
                    }
                    if sign != 1 && sign != -1 {
                        return Err(Error::Pattern(format!("slot {} has sign {sign}", pos + 1)));
                    }
                }
                _ => return Err(Error::Pattern(format!("slot {} ({slot}) breaks the u/z alternation", pos + 1))),
            }
        }
        for pos in (0..p.len()).step_by(2) {
            if p[pos] != Slot::U(0) {
                continue;
            }
            if p.len() < 2 {
                return Err(Error::Pattern("a u0 slot needs a pattern of length at least 2".into()));
            }
            if pos > 0 && pos + 1 < p.len() && z_index(p[pos - 1]) == z_index(p[pos + 1]) {
                return Err(Error::Pattern(format!(
                    "interior u0 at slot {} between equal z{} neighbours",
                    pos + 1,
                    z_index(p[pos - 1])
                )));
            }
        }
        Ok(())
    }
}

fn z_index(s: Slot) -> usize {
    match s {
        Slot::Z { index, .. } => index,
        Slot::U(_) => 0,
    }
}

/// Interior u-slots with their neighbours, as `(u, z on the left, z on the
/// right)`. End slots are not listed.
pub(crate) fn interior_adjacencies(pattern: &[Slot]) -> Vec<(usize, usize, usize)> {
    (2..pattern.len().saturating_sub(1))
        .step_by(2)
        .filter_map(|pos| match pattern[pos] {
            Slot::U(i) => Some((i, z_index(pattern[pos - 1]), z_index(pattern[pos + 1]))),
            Slot::Z { .. } => None,
        })
        .collect()
}

/// The commutator hypotheses that fail, per the instance's mode. In full
/// mode every pair is checked; in relaxed mode only pairs adjacent in the
/// pattern: for an interior `... z_k u_i z_j ...`, `[u_i, z_j]` (i >= 1) and
/// `[u_i z_j u_i^-1, z_k]` (j != k).
pub fn check_general_hypotheses(inst: &GeneralBaumslagInstance) -> Vec<Violation> {
    let mut out = BTreeSet::new();
    for (j, z) in inst.z.iter().enumerate() {
        if z.is_identity() {
            out.insert(Violation { description: format!("z{} is trivial; z{}", j + 1, j + 1), commutator: z.clone() });
        }
    }
    let check_u_z = |i: usize, j: usize, out: &mut BTreeSet<Violation>| {
        let c = FreeWord::commutator(&inst.u_elem(i), inst.z_elem(j)).expect("ranks checked");
        if c.is_identity() {
            out.insert(Violation { description: format!("[u{i}, z{j}]"), commutator: c });
        }
    };
    let check_conj = |i: usize, j: usize, k: usize, out: &mut BTreeSet<Violation>| {
        let conj = inst.z_elem(j).conjugate(&inst.u_elem(i)).expect("ranks checked");
        let c = FreeWord::commutator(&conj, inst.z_elem(k)).expect("ranks checked");
        if c.is_identity() {
            out.insert(Violation { description: format!("[u{i} z{j} u{i}^-1, z{k}]"), commutator: c });
        }
    };
    if inst.relaxed {
        for (i, k, j) in interior_adjacencies(&inst.pattern) {
            if i >= 1 {
                check_u_z(i, j, &mut out);
            }
            if j != k {
                check_conj(i, j, k, &mut out);
            }
        }
    } else {
        let (m, l) = (inst.u.len(), inst.z.len());
        for i in 1..=m {
            for j in 1..=l {
                check_u_z(i, j, &mut out);
            }
        }
        for i in 0..=m {
            for j in 1..=l {
                for k in (1..=l).filter(|&k| k != j) {
                    check_conj(i, j, k, &mut out);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// The pattern with `t[s]` as the exponent of the `s`-th z-slot (times
/// the slot's sign), multiplied left to right.
pub fn eval_general(inst: &GeneralBaumslagInstance, t: &[i64]) -> Result<FreeWord> {
    inst.validate_pattern()?;
    let need = inst.z_slot_count();
    if t.len() != need {
        return Err(Error::Precondition(format!("expected {need} exponents, got {}", t.len())));
    }
    let mut g = FreeWord::identity(inst.rank());
    let mut exps = t.iter();
    for slot in &inst.pattern {
        let factor = match *slot {
            Slot::U(i) => inst.u_elem(i),
            Slot::Z { index, sign } => inst.z_elem(index).pow(i64::from(sign) * exps.next().expect("counted")),
        };
        g = g.concat(&factor)?;
    }
    Ok(g)
}
