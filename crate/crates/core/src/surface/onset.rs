//! Half-surface decompositions and onsets of faithfulness for `f_n`.

use serde::Serialize;

use super::{SurfacePresentation, SurfaceWord};
use crate::baumslag::{GeneralBaumslagInstance, PingPongCertificate, PowerProduct};
use crate::error::{Error, Result};
use crate::words::FreeWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Half {
    /// Letters among `a_j, a_j', b'`.
    Upper,
    /// Letters among `c_j, c_j'`.
    Lower,
}

/// `b^e0 p0 b^e1 p1 ... p(l) b^e(l+1)`, listed left to right (so
/// `exponents[0]` is the leftmost power of `b`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfSurfaceDecomposition {
    pub exponents: Vec<i64>,
    pub pieces: Vec<FreeWord>,
    pub halves: Vec<Half>,
}

impl HalfSurfaceDecomposition {
    pub fn reconstruct(&self, pres: &SurfacePresentation) -> FreeWord {
        let b = FreeWord::generator(pres.rank(), pres.b().into()).expect("in range");
        let mut w = b.pow(self.exponents[0]);
        for (p, &e) in self.pieces.iter().zip(&self.exponents[1..]) {
            w = &(&w * p) * &b.pow(e);
        }
        w
    }
}

/// Greedy split of the Dehn-reduced form: maximal `b`-runs become
/// exponents, maximal runs of one half become pieces, and a change of half
/// without an intervening `b` gets a zero exponent.
pub fn decompose(pres: &SurfacePresentation, w: &SurfaceWord) -> Result<HalfSurfaceDecomposition> {
    if w.is_trivial() {
        return Err(Error::EmptyWord);
    }
    let mut d = HalfSurfaceDecomposition { exponents: vec![0], pieces: Vec::new(), halves: Vec::new() };
    let mut open: Option<(Half, Vec<i64>)> = None;
    let flush = |d: &mut HalfSurfaceDecomposition, open: &mut Option<(Half, Vec<i64>)>| {
        if let Some((h, buf)) = open.take() {
            d.pieces.push(FreeWord::reduce(pres.rank(), buf).expect("letters in range"));
            d.halves.push(h);
            d.exponents.push(0);
        }
    };
    for l in w.canonical.letters() {
        if l.generator() == pres.b() {
            flush(&mut d, &mut open);
            *d.exponents.last_mut().expect("nonempty") += if l.is_positive() { 1 } else { -1 };
            continue;
        }
        let half = if pres.is_lower(l.generator()) { Half::Lower } else { Half::Upper };
        if matches!(&open, Some((h, _)) if *h != half) {
            flush(&mut d, &mut open);
        }
        open.get_or_insert_with(|| (half, Vec::new())).1.push(l.index().into());
    }
    flush(&mut d, &mut open);
    Ok(d)
}

/// Least `n0` such that `f_m(w) != 1` for every `m` in `[n0, n0 + window]`.
pub fn onset_empirical(pres: &SurfacePresentation, w: &FreeWord, window: u64, cap: u64) -> Result<u64> {
    if pres.dehn_is_trivial(w) {
        return Err(Error::EmptyWord);
    }
    let mut start = 0;
    for m in 0..=cap + window {
        if pres.f_n(w, m)?.is_identity() {
            start = m + 1;
            if start > cap {
                break;
            }
        } else if m - start >= window {
            return Ok(start);
        }
    }
    Err(Error::CapExceeded { what: "empirical onset", value: start, cap })
}

/// An onset `n0` with `f_n(w) != 1` for all `n >= n0`, and the data that
/// proves it.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedOnset {
    pub onset: u64,
    pub decomposition: HalfSurfaceDecomposition,
    /// The ping-pong instance on `z1 = y`, `z2 = y'`, absent when `f_n(w)`
    /// does not depend on `n`.
    pub instance: Option<GeneralBaumslagInstance>,
    /// Exponent of each z-slot as `(slope, offset)`: `slope * n + offset`.
    pub exponents: Vec<(i64, i64)>,
    pub certificate: Option<PingPongCertificate>,
}

/// Writes `f_n(w)` as an alternating product of fixed words and powers
/// `y^(±n + c)`, `y'^(±n + c)`, certifies the resulting pattern, and turns
/// the certified exponent bound into a bound on `n`.
pub fn onset_certified(pres: &SurfacePresentation, w: &SurfaceWord) -> Result<CertifiedOnset> {
    let decomposition = decompose(pres, w)?;
    let mut prod = PowerProduct::new(vec![pres.y().clone(), pres.y_prime()])?;
    let push_b = |prod: &mut PowerProduct, e: i64| -> Result<()> {
        let (first, second) = if e > 0 { ((0, 1), (1, -1)) } else { ((1, 1), (0, -1)) };
        for _ in 0..e.unsigned_abs() {
            prod.push_power(first.0, first.1, 0)?;
            prod.push_power(second.0, second.1, 0)?;
        }
        Ok(())
    };
    push_b(&mut prod, decomposition.exponents[0])?;
    for ((p, h), &e) in decomposition.pieces.iter().zip(&decomposition.halves).zip(&decomposition.exponents[1..]) {
        let u = pres.fold(p)?;
        match h {
            Half::Upper => prod.push_const(u)?,
            Half::Lower => {
                prod.push_power(0, 1, 0)?;
                prod.push_const(u)?;
                prod.push_power(0, -1, 0)?;
            }
        }
        push_b(&mut prod, e)?;
    }
    prod.simplify();

    let audit = |prod: &PowerProduct, n: u64| -> Result<()> {
        if prod.eval(n) != pres.f_n(&w.canonical, n)? {
            return Err(Error::Invariant(format!(
                "symbolic form of f_{n} disagrees for {}",
                pres.format(&w.canonical)
            )));
        }
        Ok(())
    };
    for n in [0, 1, 2, 5] {
        audit(&prod, n)?;
    }
    let cert = prod.certify().map_err(|e| match e {
        Error::Invariant(_) => Error::Invariant(format!("f_n({}) is trivial for every n", pres.format(&w.canonical))),
        e => e,
    })?;
    audit(&prod, cert.onset)?;
    Ok(CertifiedOnset {
        onset: cert.onset,
        decomposition,
        instance: cert.instance,
        exponents: cert.exponents,
        certificate: cert.certificate,
    })
}
