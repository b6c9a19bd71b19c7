//! Ping-pong certificates.
//!
//! Neighbourhoods `V(z_j, e)` are prefix cylinders around the ends `z_j^e`.
//! Two facts about them, checked exactly, give the key step for every
//! `t >= N`:
//!
//! * `z_j^(eN)` maps the complement of `V(z_j, -e)` into `V(z_j, e)`;
//! * `z_j^e` maps `V(z_j, e)` into itself,
//!
//! so `z_j^(et)` maps the complement of `V(z_j, -e)` into `V(z_j, e)`.
//! Reading the word right to left, a witness end `x` is pushed by the
//! rightmost z-slot into some `V(z, e)`; each interior u-slot moves that set
//! into `V(u_i, z_j, e) = u_i V(z_j, e)`, which misses both neighbourhoods of
//! the next z, so the next z-slot pushes it on. The witness is chosen off the
//! sets the end slots could move it into, so `g x != x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{check_general_hypotheses, interior_adjacencies, BaumslagInstance, GeneralBaumslagInstance, Slot};
use crate::error::{Error, Result};
use crate::tree::{endpoints, translate_ray, BoundaryRay, Cylinder};
use crate::words::FreeWord;

const DEPTH_CAP: usize = 256;
const N_CAP: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMode {
    /// No z-slot: the word is a single u-element, decided directly.
    Direct,
    /// Uniform over every pattern built from the data.
    Full,
    /// Only the adjacencies of the instance's pattern.
    Relaxed,
    /// Relaxed, plus the trailing free power of the basic form.
    Basic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Z { z: usize, sign: i8 },
    Image { u: usize, z: usize, sign: i8 },
}

fn sign_char(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Role::Z { z, sign } => write!(f, "V(z{z},{})", sign_char(sign)),
            Role::Image { u, z, sign } => write!(f, "V(u{u},z{z},{})", sign_char(sign)),
        }
    }
}

impl Serialize for Role {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Neighborhood {
    pub role: Role,
    #[serde(flatten)]
    pub cylinder: Cylinder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PingPongCertificate {
    #[serde(rename = "N")]
    pub n: u64,
    pub mode: CertMode,
    pub depth: usize,
    pub neighborhoods: Vec<Neighborhood>,
    pub witness: Option<BoundaryRay>,
    pub notes: Vec<String>,
}

impl PingPongCertificate {
    pub fn get(&self, role: Role) -> Option<&Cylinder> {
        self.neighborhoods.iter().find(|n| n.role == role).map(|n| &n.cylinder)
    }

    pub fn get_mut(&mut self, role: Role) -> Option<&mut Cylinder> {
        self.neighborhoods.iter_mut().find(|n| n.role == role).map(|n| &mut n.cylinder)
    }
}

/// One named condition of a certificate and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

/// What a certificate has to establish for a given instance.
#[derive(Default)]
struct Requirements {
    zs: BTreeSet<usize>,
    images: BTreeSet<(usize, usize)>,
    /// `(i, j, k)`: `u_i V(z_j, *)` misses `V(z_k, *)`.
    triples: BTreeSet<(usize, usize, usize)>,
    /// `(i, k)`: the witness avoids `u_i V(z_k, *)`.
    left_ends: BTreeSet<(usize, usize)>,
    /// `(i, k)`: the witness avoids `u_i^-1 V(z_k, *)`.
    right_ends: BTreeSet<(usize, usize)>,
    pairwise: bool,
    /// Basic mode: `u_a0` and `u_an` of the translated instance.
    basic: Option<(usize, usize)>,
}

impl Requirements {
    fn full(inst: &GeneralBaumslagInstance) -> Self {
        let (m, l) = (inst.u.len(), inst.z.len());
        let mut r = Requirements { pairwise: true, ..Default::default() };
        r.zs = (1..=l).collect();
        for i in 0..=m {
            for j in 1..=l {
                if i > 0 {
                    r.images.insert((i, j));
                }
                r.left_ends.insert((i, j));
                r.right_ends.insert((i, j));
                for k in 1..=l {
                    if i > 0 || j != k {
                        r.triples.insert((i, j, k));
                    }
                }
            }
        }
        r
    }

    fn relaxed(inst: &GeneralBaumslagInstance) -> Self {
        let p = &inst.pattern;
        let mut r = Requirements::default();
        for s in p {
            if let Slot::Z { index, .. } = *s {
                r.zs.insert(index);
            }
        }
        for (i, k, j) in interior_adjacencies(p) {
            r.triples.insert((i, j, k));
        }
        let z_at = |pos: usize| match p[pos] {
            Slot::Z { index, .. } => index,
            Slot::U(_) => unreachable!("validated alternation"),
        };
        let left = match p[0] {
            Slot::U(i) => i,
            Slot::Z { .. } => unreachable!("validated alternation"),
        };
        r.left_ends.insert((left, z_at(1)));
        match p[p.len() - 1] {
            Slot::U(i) => r.right_ends.insert((i, z_at(p.len() - 2))),
            Slot::Z { index, .. } => r.right_ends.insert((0, index)),
        };
        r.images = r
            .triples
            .iter()
            .map(|&(i, j, _)| (i, j))
            .chain(r.left_ends.iter().copied())
            .filter(|&(i, _)| i > 0)
            .collect();
        r
    }

    fn for_mode(mode: CertMode, inst: &GeneralBaumslagInstance) -> Self {
        match mode {
            CertMode::Full => Requirements::full(inst),
            _ => Requirements::relaxed(inst),
        }
    }

    fn with_basic(mut self, n: usize) -> Self {
        // Translated u-list: u_(i+1) = a_i.
        self.basic = Some((1, n + 1));
        self.triples.insert((n + 1, 1, 1));
        self.images.insert((n + 1, 1));
        self
    }
}

fn endpoint(z: &FreeWord, sign: i8) -> Result<BoundaryRay> {
    let (plus, minus) = endpoints(z)?;
    Ok(if sign > 0 { plus } else { minus })
}

/// An end outside every cylinder in `forbidden`, found by a depth-first
/// search over prefixes in shortlex order.
fn find_avoiding(rank: u32, forbidden: &[Cylinder]) -> Option<BoundaryRay> {
    let max_len = forbidden.iter().map(|c| c.base().len() + 2).max().unwrap_or(1);
    let letters: Vec<i64> = (1..=i64::from(rank)).flat_map(|g| [g, -g]).collect();
    let mut stack: Vec<Vec<i64>> = letters.iter().rev().map(|&l| vec![l]).collect();
    while let Some(p) = stack.pop() {
        let word = FreeWord::reduce(rank, p.iter().copied()).ok()?;
        let cyl = Cylinder::prefix(&word).ok()?;
        if forbidden.iter().any(|f| cyl.is_subset(f)) {
            continue;
        }
        if forbidden.iter().all(|f| cyl.is_disjoint(f)) {
            let last = FreeWord::reduce(rank, [*p.last().expect("nonempty")]).ok()?;
            return BoundaryRay::new(&word, &last).ok();
        }
        if p.len() >= max_len {
            continue;
        }
        let back = -*p.last().expect("nonempty");
        for &l in letters.iter().rev().filter(|&&l| l != back) {
            let mut q = p.clone();
            q.push(l);
            stack.push(q);
        }
    }
    None
}

struct Auditor<'a> {
    cert: &'a PingPongCertificate,
    inst: &'a GeneralBaumslagInstance,
    checks: Vec<Check>,
}

impl Auditor<'_> {
    fn record(&mut self, name: String, pass: bool) {
        self.checks.push(Check { name, pass });
    }

    fn v(&self, z: usize, sign: i8) -> Option<&Cylinder> {
        self.cert.get(Role::Z { z, sign })
    }

    /// `V(z_j, d)` for `i = 0`, else `V(u_i, z_j, d)`.
    fn region(&self, i: usize, j: usize, sign: i8) -> Option<&Cylinder> {
        if i == 0 {
            self.v(j, sign)
        } else {
            self.cert.get(Role::Image { u: i, z: j, sign })
        }
    }

    fn all_present(&mut self, reqs: &Requirements) -> bool {
        let mut missing = Vec::new();
        for &j in &reqs.zs {
            for s in [1, -1] {
                if self.v(j, s).is_none() {
                    missing.push(Role::Z { z: j, sign: s }.to_string());
                }
            }
        }
        for &(i, j) in &reqs.images {
            for s in [1, -1] {
                if self.region(i, j, s).is_none() {
                    missing.push(Role::Image { u: i, z: j, sign: s }.to_string());
                }
            }
        }
        let ok = missing.is_empty();
        self.record(
            format!(
                "neighbourhoods present{}",
                if ok { String::new() } else { format!(" (missing {})", missing.join(", ")) }
            ),
            ok,
        );
        ok
    }

    /// Everything except the contraction at `N`.
    fn structure(&mut self, reqs: &Requirements) {
        for &j in &reqs.zs {
            let z = self.inst.z_elem(j).clone();
            for s in [1i8, -1] {
                let v = self.v(j, s).expect("present").clone();
                let end = endpoint(&z, s).expect("nontrivial z");
                self.record(format!("{} contains z{j}{}", Role::Z { z: j, sign: s }, sign_char(s)), v.contains(&end));
                let step = v.image(&z.pow(s.into())).expect("ranks checked");
                self.record(format!("z{j}^{s} V(z{j},{}) inside itself", sign_char(s)), step.is_subset(&v));
            }
            let (p, m) = (self.v(j, 1).expect("present"), self.v(j, -1).expect("present"));
            self.record(format!("V(z{j},+) and V(z{j},-) disjoint"), p.is_disjoint(m));
        }
        if reqs.pairwise {
            let all: Vec<(Role, Cylinder)> = reqs
                .zs
                .iter()
                .flat_map(|&j| [1i8, -1].map(|s| (Role::Z { z: j, sign: s }, self.v(j, s).expect("present").clone())))
                .collect();
            for (a, (ra, ca)) in all.iter().enumerate() {
                for (rb, cb) in &all[a + 1..] {
                    self.record(format!("{ra} and {rb} disjoint"), ca.is_disjoint(cb));
                }
            }
        }
        for &(i, j) in &reqs.images {
            for s in [1i8, -1] {
                let img = self.v(j, s).expect("present").image(&self.inst.u_elem(i)).expect("ranks checked");
                let target = self.region(i, j, s).expect("present");
                self.record(
                    format!("u{i} V(z{j},{}) inside {}", sign_char(s), Role::Image { u: i, z: j, sign: s }),
                    img.is_subset(target),
                );
            }
        }
        for &(i, j, k) in &reqs.triples {
            let ok = [1i8, -1].iter().all(|&d| {
                [1i8, -1]
                    .iter()
                    .all(|&g| self.region(i, j, d).expect("present").is_disjoint(self.v(k, g).expect("present")))
            });
            self.record(format!("u{i} V(z{j},*) misses V(z{k},*)"), ok);
        }
        match &self.cert.witness {
            None => self.record("witness present".into(), false),
            Some(x) => {
                for &(i, k) in &reqs.left_ends {
                    let ok = [1i8, -1].iter().all(|&d| !self.region(i, k, d).expect("present").contains(x));
                    self.record(format!("witness avoids u{i} V(z{k},*)"), ok);
                }
                let x = x.clone();
                for &(i, k) in &reqs.right_ends {
                    let back = self.inst.u_elem(i).inverse();
                    let ok = [1i8, -1]
                        .iter()
                        .all(|&d| !self.v(k, d).expect("present").image(&back).expect("ranks checked").contains(&x));
                    self.record(format!("witness avoids u{i}^-1 V(z{k},*)"), ok);
                }
            }
        }
        if let Some((a0, _)) = reqs.basic {
            let z = self.inst.z_elem(1).clone();
            let back = self.inst.u_elem(a0).inverse();
            let pts: Vec<BoundaryRay> = [1i8, -1]
                .iter()
                .map(|&s| translate_ray(&back, &endpoint(&z, s).expect("nontrivial z")).expect("ranks checked"))
                .collect();
            for s in [1i8, -1] {
                let v = self.v(1, s).expect("present");
                self.record(
                    format!("a0^-1 z+ and a0^-1 z- not both in V(z1,{})", sign_char(s)),
                    !(v.contains(&pts[0]) && v.contains(&pts[1])),
                );
            }
        }
    }

    fn contraction_holds(&self, j: usize, sign: i8, n: u64) -> bool {
        let z = self.inst.z_elem(j);
        let from = self.v(j, -sign).expect("present").complement();
        let g = z.pow(i64::from(sign) * n as i64);
        from.image(&g).expect("ranks checked").is_subset(self.v(j, sign).expect("present"))
    }

    fn contraction(&mut self, reqs: &Requirements) {
        let n = self.cert.n;
        self.record("N positive".into(), n >= 1);
        for &j in &reqs.zs {
            for s in [1i8, -1] {
                let ok = n >= 1 && self.contraction_holds(j, s, n);
                self.record(
                    format!(
                        "z{j}^({}N) maps outside V(z{j},{}) into V(z{j},{})",
                        sign_char(s),
                        sign_char(-s),
                        sign_char(s)
                    ),
                    ok,
                );
            }
        }
    }
}

fn audit_with(cert: &PingPongCertificate, inst: &GeneralBaumslagInstance, basic_n: Option<usize>) -> Vec<Check> {
    let mut a = Auditor { cert, inst, checks: Vec::new() };
    if let Err(e) = inst.validate_pattern() {
        a.record(format!("pattern valid ({e})"), false);
        return a.checks;
    }
    if inst.z_slot_count() == 0 {
        a.record("direct mode for a pattern without z-slots".into(), cert.mode == CertMode::Direct);
        a.record("N positive".into(), cert.n >= 1);
        let g = super::eval_general(inst, &[]).map(|g| !g.is_identity()).unwrap_or(false);
        a.record("single u-slot is nontrivial".into(), g);
        return a.checks;
    }
    let mode_ok = match (cert.mode, inst.relaxed, basic_n) {
        (CertMode::Basic, _, Some(_)) => true,
        (_, _, Some(_)) => false,
        (CertMode::Full, _, None) => true,
        (CertMode::Relaxed | CertMode::Basic, true, None) => true,
        _ => false,
    };
    a.record(format!("mode {:?} fits the instance", cert.mode), mode_ok);
    if !mode_ok {
        return a.checks;
    }
    let mut reqs = Requirements::for_mode(cert.mode, inst);
    if let Some(n) = basic_n {
        reqs = reqs.with_basic(n);
    }
    if a.all_present(&reqs) {
        a.structure(&reqs);
        a.contraction(&reqs);
    }
    a.checks
}

/// Every condition of the certificate against a general instance, by name.
pub fn audit_certificate(cert: &PingPongCertificate, inst: &GeneralBaumslagInstance) -> Vec<Check> {
    audit_with(cert, inst, None)
}

/// Conditions for the basic word, including its trailing power of `z`.
pub fn audit_basic_certificate(cert: &PingPongCertificate, inst: &BaumslagInstance) -> Vec<Check> {
    audit_with(cert, &inst.to_general(), Some(inst.n()))
}

/// Exact check using cylinder algebra only.
pub fn verify_certificate(cert: &PingPongCertificate, inst: &GeneralBaumslagInstance) -> bool {
    audit_certificate(cert, inst).iter().all(|c| c.pass)
}

pub fn verify_basic_certificate(cert: &PingPongCertificate, inst: &BaumslagInstance) -> bool {
    audit_basic_certificate(cert, inst).iter().all(|c| c.pass)
}

fn neighbourhoods_at(inst: &GeneralBaumslagInstance, reqs: &Requirements, depth: usize) -> Result<Vec<Neighborhood>> {
    let mut base = BTreeMap::new();
    for &j in &reqs.zs {
        for s in [1i8, -1] {
            base.insert((j, s), Cylinder::around(&endpoint(inst.z_elem(j), s)?, depth)?);
        }
    }
    let mut out: Vec<Neighborhood> =
        base.iter().map(|(&(z, sign), c)| Neighborhood { role: Role::Z { z, sign }, cylinder: c.clone() }).collect();
    for &(u, z) in &reqs.images {
        for sign in [1i8, -1] {
            let cylinder = base[&(z, sign)].image(&inst.u_elem(u))?;
            out.push(Neighborhood { role: Role::Image { u, z, sign }, cylinder });
        }
    }
    Ok(out)
}

fn witness_for(inst: &GeneralBaumslagInstance, reqs: &Requirements, hoods: &[Neighborhood]) -> Option<BoundaryRay> {
    let find = |role: Role| hoods.iter().find(|n| n.role == role).map(|n| n.cylinder.clone());
    let mut forbidden = Vec::new();
    for &(i, k) in &reqs.left_ends {
        for sign in [1i8, -1] {
            forbidden.push(if i == 0 {
                find(Role::Z { z: k, sign })?
            } else {
                find(Role::Image { u: i, z: k, sign })?
            });
        }
    }
    for &(i, k) in &reqs.right_ends {
        for sign in [1i8, -1] {
            forbidden.push(find(Role::Z { z: k, sign })?.image(&inst.u_elem(i).inverse()).ok()?);
        }
    }
    find_avoiding(inst.rank(), &forbidden)
}

fn build(inst: &GeneralBaumslagInstance, mode: CertMode, basic_n: Option<usize>) -> Result<PingPongCertificate> {
    let mut reqs = Requirements::for_mode(mode, inst);
    if let Some(n) = basic_n {
        reqs = reqs.with_basic(n);
    }
    for depth in 1..=DEPTH_CAP {
        let neighborhoods = neighbourhoods_at(inst, &reqs, depth)?;
        let witness = witness_for(inst, &reqs, &neighborhoods);
        if witness.is_none() {
            continue;
        }
        let mut cert = PingPongCertificate { n: 0, mode, depth, neighborhoods, witness, notes: Vec::new() };
        let mut a = Auditor { cert: &cert, inst, checks: Vec::new() };
        a.structure(&reqs);
        if !a.checks.iter().all(|c| c.pass) {
            continue;
        }
        let mut n = 1;
        while n <= N_CAP && !reqs.zs.iter().all(|&j| [1i8, -1].iter().all(|&s| a.contraction_holds(j, s, n))) {
            n += 1;
        }
        if n > N_CAP {
            return Err(Error::CapExceeded { what: "certificate exponent", value: n, cap: N_CAP });
        }
        cert.n = n;
        cert.notes = notes(mode);
        let ok = match basic_n {
            Some(_) => audit_with(&cert, inst, basic_n).iter().all(|c| c.pass),
            None => verify_certificate(&cert, inst),
        };
        if !ok {
            return Err(Error::Invariant("constructed certificate failed its own audit".into()));
        }
        return Ok(cert);
    }
    Err(Error::CapExceeded { what: "cylinder depth", value: DEPTH_CAP as u64 + 1, cap: DEPTH_CAP as u64 })
}

fn notes(mode: CertMode) -> Vec<String> {
    let mut v = vec![
        "for |t| >= N each z-slot maps the complement of V(z,-e) into V(z,e): the N-th power does, and z^e keeps V(z,e) inside itself".to_string(),
        "each interior u-slot carries V(z_j,*) into V(u_i,z_j,*), which misses both neighbourhoods of the next z to its left".to_string(),
        "the witness lies off every set the end slots can move it into, so the word moves it and is nontrivial".to_string(),
    ];
    match mode {
        CertMode::Full => v.push("uniform over all patterns built from the data".into()),
        CertMode::Relaxed => v.push("valid for the instance's pattern only".into()),
        CertMode::Basic => v.push(
            "basic word a0 z^k0 ... an z^kn: with h = a0 z^k0 ... an, triviality forces h to fix z+ and z-, but h moves both into a0 V(z,e), which cannot hold both"
                .into(),
        ),
        CertMode::Direct => {}
    }
    v
}

fn direct(inst: &GeneralBaumslagInstance) -> Result<PingPongCertificate> {
    if super::eval_general(inst, &[])?.is_identity() {
        return Err(Error::Hypothesis("single u-slot pattern evaluates to the identity".into()));
    }
    Ok(PingPongCertificate {
        n: 1,
        mode: CertMode::Direct,
        depth: 0,
        neighborhoods: Vec::new(),
        witness: None,
        notes: vec!["no z-slot: the word is a fixed nontrivial element".into()],
    })
}

pub fn certify_general(inst: &GeneralBaumslagInstance) -> Result<PingPongCertificate> {
    inst.validate_pattern()?;
    let violations = check_general_hypotheses(inst);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::Hypothesis(list.join("; ")));
    }
    if inst.z_slot_count() == 0 {
        return direct(inst);
    }
    build(inst, if inst.relaxed { CertMode::Relaxed } else { CertMode::Full }, None)
}

/// Certificate for `a0 z^k0 ... an z^kn` with `|k_i| >= N` for `i < n` and
/// `k_n` arbitrary.
pub fn certify_basic(inst: &BaumslagInstance) -> Result<PingPongCertificate> {
    inst.check_hypotheses()?;
    build(&inst.to_general(), CertMode::Basic, Some(inst.n()))
}
