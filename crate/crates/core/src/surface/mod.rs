//! The closed surface group of genus `2r + 1`, its twists `sigma`, `tau`,
//! the folding map onto a free group of rank `2r + 1`, and the sequence
//! `f_n = fold ∘ (sigma ∘ tau)^n`.
//!
//! Generator order: `a1, a1', ..., ar, ar', b, b', c1, c1', ..., cr, cr'`.
//! Fold target order: `x1, x1', ..., xr, xr', y'`.
//!
//! The relator is `[a1,a1'] ... [ar,ar'] [b',b] [cr',cr] ... [c1',c1]`. The
//! lower block runs in reverse so that folding sends it to the inverse of
//! the upper block; with the lower block in increasing order the fold would
//! not be a homomorphism once `r >= 2`.

mod dehn;
mod onset;

pub use onset::{decompose, onset_certified, onset_empirical, CertifiedOnset, Half, HalfSurfaceDecomposition};

use crate::error::{Error, Result};
use crate::words::{Alphabet, FreeHom, FreeWord, Letter};

#[derive(Clone, Debug)]
pub struct SurfacePresentation {
    r: u32,
    relator: FreeWord,
    alpha: FreeWord,
    beta: FreeWord,
    y: FreeWord,
    /// Cyclic permutations of the relator and its inverse, indexed by
    /// their first letter.
    table: Vec<Vec<Vec<Letter>>>,
}

/// A word in the surface generators together with a Dehn-reduced
/// representative of the same element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SurfaceWord {
    pub letters: FreeWord,
    pub canonical: FreeWord,
}

impl SurfaceWord {
    pub fn is_trivial(&self) -> bool {
        self.canonical.is_identity()
    }
}

fn gen(rank: u32, i: u32) -> FreeWord {
    FreeWord::generator(rank, i64::from(i)).expect("generator in range")
}

pub fn make_presentation(r: u32) -> Result<SurfacePresentation> {
    if r == 0 {
        return Err(Error::Precondition("r must be at least 1".into()));
    }
    let rank = 4 * r + 2;
    let (b, bp) = (gen(rank, 2 * r + 1), gen(rank, 2 * r + 2));
    let mut upper = FreeWord::identity(rank);
    let mut lower = FreeWord::identity(rank);
    for i in 1..=r {
        let (a, ap) = (gen(rank, 2 * i - 1), gen(rank, 2 * i));
        let (c, cp) = (gen(rank, 2 * r + 2 + 2 * i - 1), gen(rank, 2 * r + 2 + 2 * i));
        upper = &upper * &FreeWord::commutator(&a, &ap)?;
        lower = &FreeWord::commutator(&cp, &c)? * &lower;
    }
    let relator = &(&upper * &FreeWord::commutator(&bp, &b)?) * &lower;
    let alpha = &upper * &bp;
    let t = 2 * r + 1;
    let mut y = FreeWord::identity(t);
    for i in 1..=r {
        y = &y * &FreeWord::commutator(&gen(t, 2 * i - 1), &gen(t, 2 * i))?;
    }
    let y = &y * &gen(t, t);
    let table = dehn::cyclic_table(&relator);
    Ok(SurfacePresentation { r, relator, alpha, beta: bp, y, table })
}

impl SurfacePresentation {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn genus(&self) -> u32 {
        2 * self.r + 1
    }

    /// Number of surface generators, `4r + 2`.
    pub fn rank(&self) -> u32 {
        4 * self.r + 2
    }

    /// Rank of the fold target, `2r + 1`.
    pub fn target_rank(&self) -> u32 {
        2 * self.r + 1
    }

    pub fn relator(&self) -> &FreeWord {
        &self.relator
    }

    pub fn alpha(&self) -> &FreeWord {
        &self.alpha
    }

    pub fn beta(&self) -> &FreeWord {
        &self.beta
    }

    /// `fold(alpha)`, in the fold target.
    pub fn y(&self) -> &FreeWord {
        &self.y
    }

    pub fn y_prime(&self) -> FreeWord {
        gen(self.target_rank(), self.target_rank())
    }

    pub fn b(&self) -> u32 {
        2 * self.r + 1
    }

    pub fn b_prime(&self) -> u32 {
        2 * self.r + 2
    }

    pub fn is_lower(&self, generator: u32) -> bool {
        generator > 2 * self.r + 2
    }

    pub fn alphabet(&self) -> Alphabet {
        let mut names = Vec::new();
        for i in 1..=self.r {
            names.extend([format!("a{i}"), format!("a{i}'")]);
        }
        names.extend(["b".to_string(), "b'".to_string()]);
        for i in 1..=self.r {
            names.extend([format!("c{i}"), format!("c{i}'")]);
        }
        Alphabet::named(names)
    }

    pub fn target_alphabet(&self) -> Alphabet {
        let mut names = Vec::new();
        for i in 1..=self.r {
            names.extend([format!("x{i}"), format!("x{i}'")]);
        }
        names.push("y'".into());
        Alphabet::named(names)
    }

    pub fn parse(&self, text: &str) -> Result<FreeWord> {
        self.alphabet().parse(text)
    }

    pub fn format(&self, w: &FreeWord) -> String {
        w.to_text_with(&self.alphabet())
    }

    pub fn format_target(&self, w: &FreeWord) -> String {
        w.to_text_with(&self.target_alphabet())
    }

    pub fn word(&self, w: &FreeWord) -> Result<SurfaceWord> {
        self.check(w)?;
        Ok(SurfaceWord { letters: w.clone(), canonical: self.dehn_reduce(w) })
    }

    fn check(&self, w: &FreeWord) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch { left: w.rank(), right: self.rank() });
        }
        Ok(())
    }

    /// Generator images: surface generator `g` goes to `image(g)`.
    fn substitution(&self, target_rank: u32, image: impl Fn(u32) -> FreeWord) -> FreeHom {
        FreeHom::new(target_rank, (1..=self.rank()).map(image).collect()).expect("images built in target rank")
    }

    fn twist_hom(&self, on_b: impl Fn(&FreeWord) -> FreeWord, on_c: impl Fn(&FreeWord) -> FreeWord) -> FreeHom {
        let rank = self.rank();
        self.substitution(rank, |g| {
            let x = gen(rank, g);
            if g == self.b() {
                on_b(&x)
            } else if self.is_lower(g) {
                on_c(&x)
            } else {
                x
            }
        })
    }

    /// `sigma^e` for `e = ±1`: `b -> alpha^e b`, `c_i -> alpha^e c_i alpha^-e`.
    fn sigma_hom(&self, e: i64) -> FreeHom {
        let a = self.alpha.pow(e);
        let ai = a.inverse();
        self.twist_hom(|b| &a * b, |c| &(&a * c) * &ai)
    }

    /// `tau^e` for `e = ±1`: `b -> b beta^-e`.
    fn tau_hom(&self, e: i64) -> FreeHom {
        let bi = self.beta.pow(-e);
        self.twist_hom(|b| b * &bi, Clone::clone)
    }

    pub fn twist_sigma(&self, w: &FreeWord) -> Result<FreeWord> {
        self.sigma_hom(1).apply(w)
    }

    pub fn twist_sigma_inverse(&self, w: &FreeWord) -> Result<FreeWord> {
        self.sigma_hom(-1).apply(w)
    }

    pub fn twist_tau(&self, w: &FreeWord) -> Result<FreeWord> {
        self.tau_hom(1).apply(w)
    }

    pub fn twist_tau_inverse(&self, w: &FreeWord) -> Result<FreeWord> {
        self.tau_hom(-1).apply(w)
    }

    /// `delta^n`, by the closed form `b -> alpha^n b beta^-n`,
    /// `c_i -> alpha^n c_i alpha^-n`, fixing the rest.
    pub fn delta_hom(&self, n: u64) -> FreeHom {
        let an = self.alpha.pow(n as i64);
        let ani = an.inverse();
        let bni = self.beta.pow(-(n as i64));
        self.twist_hom(|b| &(&an * b) * &bni, |c| &(&an * c) * &ani)
    }

    pub fn delta_pow(&self, w: &FreeWord, n: u64) -> Result<FreeWord> {
        self.delta_hom(n).apply(w)
    }

    pub fn fold_hom(&self) -> FreeHom {
        let t = self.target_rank();
        self.substitution(t, |g| {
            if g == self.b() {
                FreeWord::identity(t)
            } else if g == self.b_prime() {
                self.y_prime()
            } else if self.is_lower(g) {
                gen(t, g - (2 * self.r + 2))
            } else {
                gen(t, g)
            }
        })
    }

    pub fn fold(&self, w: &FreeWord) -> Result<FreeWord> {
        self.fold_hom().apply(w)
    }

    pub fn f_n_hom(&self, n: u64) -> FreeHom {
        self.fold_hom().compose(&self.delta_hom(n)).expect("ranks agree")
    }

    pub fn f_n(&self, w: &FreeWord, n: u64) -> Result<FreeWord> {
        self.f_n_hom(n).apply(w)
    }

    /// The representation attached to the pair `(y^n, y'^n)`:
    /// `a_i -> x_i`, `b -> y^n y'^-n`, `b' -> y'`, `c_i -> y^n x_i y^-n`.
    pub fn rho_power_symbolic(&self, w: &FreeWord, n: u64) -> Result<FreeWord> {
        let t = self.target_rank();
        let g = self.y.pow(n as i64);
        let gi = g.inverse();
        let h = self.y_prime().pow(n as i64);
        let hom = self.substitution(t, |s| {
            if s == self.b() {
                &g * &h.inverse()
            } else if s == self.b_prime() {
                self.y_prime()
            } else if self.is_lower(s) {
                &(&g * &gen(t, s - (2 * self.r + 2))) * &gi
            } else {
                gen(t, s)
            }
        });
        hom.apply(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_three_presentation() {
        let p = make_presentation(1).unwrap();
        assert_eq!(p.genus(), 3);
        assert_eq!(p.relator().len(), 12);
        assert_eq!(p.format(p.relator()), "a1*a1'*a1^-1*a1'^-1*b'*b*b'^-1*b^-1*c1'*c1*c1'^-1*c1^-1");
        assert_eq!(p.format(p.alpha()), "a1*a1'*a1^-1*a1'^-1*b'");
        assert_eq!(p.format_target(p.y()), "x1*x1'*x1^-1*x1'^-1*y'");
        assert_eq!(make_presentation(2).unwrap().relator().len(), 20);
        assert!(make_presentation(0).is_err());
    }

    #[test]
    fn table_images() {
        let p = make_presentation(1).unwrap();
        let b = p.parse("b").unwrap();
        assert_eq!(p.twist_sigma(&b).unwrap(), p.alpha() * &b);
        let c = p.parse("c1").unwrap();
        assert_eq!(p.twist_tau(&c).unwrap(), c);
        assert_eq!(p.fold(p.relator()).unwrap(), FreeWord::identity(3));
        assert_eq!(p.fold(p.alpha()).unwrap(), *p.y());
        assert!(p.fold(&b).unwrap().is_identity());
        assert_eq!(p.f_n(&b, 1).unwrap(), p.y() * &p.y_prime().inverse());
        assert_eq!(p.rho_power_symbolic(&b, 1).unwrap(), p.y() * &p.y_prime().inverse());
    }
}
