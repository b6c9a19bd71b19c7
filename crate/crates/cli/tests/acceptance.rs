//! Acceptance suite. Each criterion runs in turn, is checked against an
//! oracle that does not go through the library's own reduction or
//! evaluation code where that is practical, and must finish inside its time
//! limit. One line is printed per criterion; any failure exits nonzero.

use std::collections::{HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use limitgroup::baumslag::{
    certify_basic, certify_general, eval_basic, eval_general, verify_basic_certificate, verify_certificate,
    BaumslagInstance, GeneralBaumslagInstance, Slot,
};
use limitgroup::construct::{
    double_of_free, enumerate_reduced, f2xf2_elements, f2xf2_nonseparable, scan_double, twist_then_fold, RankExtension,
};
use limitgroup::surface::{make_presentation, onset_certified, onset_empirical};
use limitgroup::targets::{
    cyclic_closure, free_pair_check, h_k_family, injectivity_on_ball, sl2_modpk_ops, HomInstance, Mat2Int,
};
use limitgroup::tree::{axis_overlap, endpoints, Overlap};
use limitgroup::words::{nontrivial_words, reduced_words};
use limitgroup::FreeWord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

/// Cancels adjacent inverse pairs with a stack.
fn push_letter(stack: &mut Vec<i64>, x: i64) {
    if stack.last() == Some(&-x) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

fn letters(w: &FreeWord) -> Vec<i64> {
    w.indices().map(i64::from).collect()
}

fn naive_reduce(seq: impl IntoIterator<Item = i64>) -> Vec<i64> {
    let mut s = Vec::new();
    for x in seq {
        push_letter(&mut s, x);
    }
    s
}

/// Substitutes images letter by letter.
fn naive_apply(images: &[FreeWord], w: &FreeWord) -> Vec<i64> {
    let imgs: Vec<Vec<i64>> = images.iter().map(letters).collect();
    let mut stack = Vec::new();
    for l in w.indices() {
        let img = &imgs[l.unsigned_abs() as usize - 1];
        if l > 0 {
            img.iter().for_each(|&x| push_letter(&mut stack, x));
        } else {
            img.iter().rev().for_each(|&x| push_letter(&mut stack, -x));
        }
    }
    stack
}

/// Expands `f1^e1 f2^e2 ...` and reports whether it cancels completely.
fn naive_trivial(factors: &[(FreeWord, i64)]) -> bool {
    let mut stack = Vec::new();
    for (f, e) in factors {
        let l = letters(f);
        for _ in 0..e.unsigned_abs() {
            if *e > 0 {
                l.iter().for_each(|&x| push_letter(&mut stack, x));
            } else {
                l.iter().rev().for_each(|&x| push_letter(&mut stack, -x));
            }
        }
    }
    stack.is_empty()
}

type M4 = [u32; 4];

fn mulq(x: M4, y: M4, q: u32) -> M4 {
    let m = |a: u32, b: u32, c: u32, d: u32| {
        ((u64::from(a) * u64::from(b) + u64::from(c) * u64::from(d)) % u64::from(q)) as u32
    };
    [m(x[0], y[0], x[1], y[2]), m(x[0], y[1], x[1], y[3]), m(x[2], y[0], x[3], y[2]), m(x[2], y[1], x[3], y[3])]
}

fn invq(x: M4, q: u32) -> M4 {
    [x[3], (q - x[1]) % q, (q - x[2]) % q, x[0]]
}

fn evalq(images: &[M4], w: &FreeWord, q: u32) -> M4 {
    w.indices().fold([1, 0, 0, 1], |acc, l| {
        let g = images[l.unsigned_abs() as usize - 1];
        mulq(acc, if l > 0 { g } else { invq(g, q) }, q)
    })
}

/// Breadth-first closure of a set of matrices mod `q`.
fn bfs_closure(gens: &[M4], q: u32) -> usize {
    let mut seen: HashSet<M4> = HashSet::from([[1, 0, 0, 1]]);
    let mut queue = VecDeque::from([[1, 0, 0, 1]]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = mulq(x, *g, q);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

fn sl2_order(q: u32) -> usize {
    let mut n = 0;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if (u64::from(a) * u64::from(d) + u64::from(q - 1) * u64::from(b) * u64::from(c)) % u64::from(q)
                        == 1
                    {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

fn mul128(x: [i128; 4], y: [i128; 4]) -> [i128; 4] {
    [x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]]
}

/// No reduced word of length 1..=max_len in `a, b` is the identity.
fn naive_free_pair(a: [i128; 4], b: [i128; 4], max_len: usize) -> bool {
    let inv = |x: [i128; 4]| [x[3], -x[1], -x[2], x[0]];
    let gens = [a, inv(a), b, inv(b)];
    let mut frontier: Vec<([i128; 4], usize)> = vec![([1, 0, 0, 1], usize::MAX)];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for (m, last) in frontier {
            for (i, g) in gens.iter().enumerate() {
                if last != usize::MAX && i == last ^ 1 {
                    continue;
                }
                let p = mul128(m, *g);
                if p == [1, 0, 0, 1] {
                    return false;
                }
                next.push((p, i));
            }
        }
        frontier = next;
    }
    true
}

fn w2(s: &str) -> FreeWord {
    FreeWord::parse(s, 2).unwrap()
}

// -------------------------------------------------------------- criteria

fn word_axioms() -> Outcome {
    let words = reduced_words(2, 5);
    let id = FreeWord::identity(2);
    let mut checks = 0u64;
    for a in &words {
        ensure!(&(a * &id) == a && &(&id * a) == a, "identity fails on {a}");
        let ai = a.inverse();
        ensure!((a * &ai).is_identity() && (&ai * a).is_identity(), "inverse fails on {a}");
        ensure!(letters(&ai) == naive_reduce(letters(a).iter().rev().map(|x| -x)), "inverse letters of {a}");
    }
    // Products of pairs against the stack oracle.
    for a in &words {
        for b in &words {
            let p = a * b;
            ensure!(letters(&p) == naive_reduce(letters(a).into_iter().chain(letters(b))), "{a} * {b}");
        }
    }
    // The comparison used by the sweep agrees with the product operator.
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for _ in 0..100_000 {
        let [x, y, u, v] = [0; 4].map(|_| &words[rng.gen_range(0..words.len())]);
        ensure!(FreeWord::product_eq(x, y, u, v) == (x * y == u * v), "product_eq disagrees on {x} {y} {u} {v}");
    }
    // Triple sweep. `b` is outermost so one row of `b * c` stays in cache;
    // the two sides are compared without materializing them.
    let mut ab = FreeWord::identity(2);
    for b in &words {
        let bc: Vec<FreeWord> = words.iter().map(|c| b * c).collect();
        for a in &words {
            a.mul_into(b, &mut ab);
            for (c, bc) in words.iter().zip(&bc) {
                ensure!(FreeWord::product_eq(&ab, c, a, bc), "associativity fails on {a}, {b}, {c}");
                checks += 1;
            }
        }
    }
    Ok(format!("{} words, {checks} triples", words.len()))
}

fn axis_criterion() -> Outcome {
    let words = nontrivial_words(2, 6);
    let ends: Vec<_> = words.iter().map(|x| endpoints(x).unwrap()).collect();
    let (mut infinite, mut pairs) = (0u64, 0u64);
    for (i, a) in words.iter().enumerate() {
        let la = letters(a);
        for (j, b) in words.iter().enumerate() {
            let ov = axis_overlap(a, b).map_err(|e| e.to_string())?;
            let lb = letters(b);
            // Commutation by the stack oracle.
            let ab = naive_reduce(la.iter().chain(&lb).copied());
            let ba = naive_reduce(lb.iter().chain(&la).copied());
            let commutes = ab == ba;
            ensure!(commutes == a.commutes(b).unwrap(), "library commutation disagrees on {a}, {b}");
            ensure!(commutes == (ov == Overlap::Infinite), "{a}, {b}: commutes {commutes}, overlap {ov:?}");
            let ((ap, am), (bp, bm)) = (&ends[i], &ends[j]);
            let shared = ap == bp || ap == bm || am == bp || am == bm;
            ensure!(shared != matches!(ov, Overlap::Finite(_)), "{a}, {b}: shared endpoints {shared}, overlap {ov:?}");
            infinite += u64::from(commutes);
            pairs += 1;
        }
    }
    Ok(format!("{pairs} ordered pairs, {infinite} with infinite overlap"))
}

fn signed(rng: &mut ChaCha20Rng, n: u64) -> i64 {
    let m = rng.gen_range(n..=n + 20) as i64;
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

fn slots(s: &str) -> Vec<Slot> {
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

fn general(z: &[&str], u: &[&str], pattern: &str, relaxed: bool) -> GeneralBaumslagInstance {
    GeneralBaumslagInstance::new(
        z.iter().map(|s| w2(s)).collect(),
        u.iter().map(|s| w2(s)).collect(),
        slots(pattern),
        relaxed,
    )
    .unwrap()
}

fn baumslag_soundness() -> Outcome {
    const SAMPLES: usize = 10_000;
    let mut notes = Vec::new();
    for (seed, coeffs) in [(11u64, ["x2", "x2", "x2"]), (12, ["x1", "x1*x2", "x2*x2"])] {
        let inst = BaumslagInstance::new(coeffs.iter().map(|s| w2(s)).collect(), w2("x1")).unwrap();
        let cert = certify_basic(&inst).map_err(|e| e.to_string())?;
        ensure!(verify_basic_certificate(&cert, &inst), "basic {coeffs:?}: certificate does not verify");
        let mut bad = cert.clone();
        bad.n -= 1;
        ensure!(!verify_basic_certificate(&bad, &inst), "basic {coeffs:?}: N-1 still verifies");
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for _ in 0..SAMPLES {
            let mut k: Vec<i64> = (0..inst.n()).map(|_| signed(&mut rng, cert.n)).collect();
            k.push(rng.gen_range(-5..=5));
            let factors: Vec<(FreeWord, i64)> =
                inst.coefficients.iter().zip(&k).flat_map(|(a, &e)| [(a.clone(), 1), (inst.z.clone(), e)]).collect();
            ensure!(!naive_trivial(&factors), "basic {coeffs:?}: {k:?} is trivial");
            ensure!(!eval_basic(&inst, &k).unwrap().is_identity(), "basic {coeffs:?}: library says {k:?} is trivial");
        }
        notes.push(format!("N={}", cert.n));
    }
    let generals = [
        (21u64, general(&["x1", "x2"], &["x1*x2"], "u1 z1 u1 z2", false)),
        (22, general(&["x1", "x2"], &["x1*x2", "x2*x1^-1*x1^-1"], "u2 z1 u1 z2 u0 z1^-1 u2", false)),
        (23, general(&["x1", "x2"], &["x1"], "u1 z2 u1 z2^-1 u0 z1 u1", true)),
    ];
    for (seed, inst) in generals {
        let cert = certify_general(&inst).map_err(|e| e.to_string())?;
        ensure!(verify_certificate(&cert, &inst), "{:?}: certificate does not verify", inst.pattern);
        let mut bad = cert.clone();
        bad.n -= 1;
        ensure!(!verify_certificate(&bad, &inst), "{:?}: N-1 still verifies", inst.pattern);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for _ in 0..SAMPLES {
            let t: Vec<i64> = (0..inst.z_slot_count()).map(|_| signed(&mut rng, cert.n)).collect();
            let mut it = t.iter();
            let factors: Vec<(FreeWord, i64)> = inst
                .pattern
                .iter()
                .map(|s| match *s {
                    Slot::U(i) => (inst.u_elem(i), 1),
                    Slot::Z { index, sign } => (inst.z_elem(index).clone(), i64::from(sign) * it.next().unwrap()),
                })
                .collect();
            ensure!(!naive_trivial(&factors), "{:?}: {t:?} is trivial", inst.pattern);
            ensure!(
                !eval_general(&inst, &t).unwrap().is_identity(),
                "{:?}: library says {t:?} is trivial",
                inst.pattern
            );
        }
        notes.push(format!("N={}{}", cert.n, if inst.relaxed { " (relaxed)" } else { "" }));
    }
    Ok(format!("5 instances, {} samples each, {}", SAMPLES, notes.join(", ")))
}

fn surface_algebra() -> Outcome {
    let mut checked = 0;
    for r in 1..=2 {
        let p = make_presentation(r).unwrap();
        ensure!(naive_apply(p.fold_hom().images(), p.relator()).is_empty(), "r={r}: fold(relator) is not trivial");
        ensure!(p.fold(p.relator()).unwrap().is_identity(), "r={r}: library fold(relator) is not trivial");
        for s in 1..=p.rank() {
            let g = FreeWord::generator(p.rank(), s.into()).unwrap();
            let st = p.twist_sigma(&p.twist_tau(&g).unwrap()).unwrap();
            let ts = p.twist_tau(&p.twist_sigma(&g).unwrap()).unwrap();
            ensure!(st == ts || p.equal(&st, &ts).unwrap(), "r={r}: twists disagree on {}", p.format(&g));
            for n in 0..=8 {
                let symbolic = p.rho_power_symbolic(&g, n).unwrap();
                let f = naive_apply(p.f_n_hom(n).images(), &g);
                ensure!(letters(&symbolic) == f, "r={r}, n={n}: {} differs", p.format(&g));
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} generator/power identities"))
}

fn surface_onsets() -> Outcome {
    const WINDOW: u64 = 24;
    let p = make_presentation(1).unwrap();
    let ball = p.ball(3).unwrap();
    let mut max_onset = 0;
    for sw in &ball {
        let c = onset_certified(&p, sw).map_err(|e| format!("{}: {e}", p.format(&sw.letters)))?;
        let e = onset_empirical(&p, &sw.letters, WINDOW, c.onset + 1).map_err(|e| e.to_string())?;
        ensure!(e <= c.onset, "{}: empirical {e} > certified {}", p.format(&sw.letters), c.onset);
        for n in c.onset..=c.onset + WINDOW {
            ensure!(
                !naive_apply(p.f_n_hom(n).images(), &sw.letters).is_empty(),
                "{} dies at {n}",
                p.format(&sw.letters)
            );
        }
        max_onset = max_onset.max(c.onset);
    }
    Ok(format!("genus {}, {} elements, largest certified onset {max_onset}", p.genus(), ball.len()))
}

fn double_family() -> Outcome {
    const WINDOW: u64 = 16;
    let spec = double_of_free(2, &w2("[x1,x2]")).unwrap();
    // Total length 6 contains every form of length at most 4.
    let forms = enumerate_reduced(&spec, 3, 6).unwrap();
    let rows = scan_double(&spec, &forms, WINDOW).unwrap();
    for (f, row) in forms.iter().zip(&rows) {
        ensure!(row.passed(), "{row:?}");
        let word = f.word(&spec).unwrap();
        for m in row.certified_onset..=row.certified_onset + WINDOW {
            ensure!(!naive_apply(twist_then_fold(&spec, m).images(), &word).is_empty(), "{} dies at {m}", row.element);
        }
    }
    Ok(format!("{} forms", forms.len()))
}

fn rank_extension() -> Outcome {
    const WINDOW: u64 = 16;
    let ext = RankExtension::new(2, w2("x1"), w2("x2")).unwrap();
    let words = nontrivial_words(3, 5);
    let rows = ext.scan(&words, WINDOW).unwrap();
    for (x, row) in words.iter().zip(&rows) {
        ensure!(row.passed(), "{row:?}");
        for m in row.certified_onset..=row.certified_onset + WINDOW {
            ensure!(!naive_apply(ext.hom(m).images(), x).is_empty(), "{x} dies at {m}");
        }
    }
    Ok(format!("{} words", words.len()))
}

fn f2xf2() -> Outcome {
    let report = f2xf2_nonseparable(&w2("x1"), &w2("x2"), 2).map_err(|e| e.to_string())?;
    ensure!(report.nonseparable, "separated by {:?}", report.separating);
    // Brute force over all quadruples of words of length <= 2 whose
    // cross pairs commute.
    let words = reduced_words(2, 2);
    let commute = |a: &FreeWord, b: &FreeWord| {
        naive_reduce(letters(a).into_iter().chain(letters(b))) == naive_reduce(letters(b).into_iter().chain(letters(a)))
    };
    let elements = f2xf2_elements(&w2("x1"), &w2("x2")).unwrap();
    let mut count = 0u64;
    for a in &words {
        for b in &words {
            for c in &words {
                if !commute(a, c) || !commute(b, c) {
                    continue;
                }
                for d in &words {
                    if !commute(a, d) || !commute(b, d) {
                        continue;
                    }
                    count += 1;
                    let images = [a.clone(), b.clone(), c.clone(), d.clone()];
                    let separated = elements.iter().all(|e| !naive_apply(&images, e).is_empty());
                    ensure!(!separated, "oracle separates with {a}, {b}, {c}, {d}");
                }
            }
        }
    }
    ensure!(count == report.assignments, "oracle counts {count} quadruples, library {}", report.assignments);
    Ok(format!("{count} quadruples, none separating"))
}

fn finite_quotient() -> Outcome {
    let g = sl2_modpk_ops(5, 2).unwrap();
    let q = 25;
    let full = sl2_order(q);
    let spec = double_of_free(2, &w2("[x1,x2]")).unwrap();
    let (a, b) = g.search_generating_pair().map_err(|e| e.to_string())?;
    ensure!(bfs_closure(&[a.entries(), b.entries()], q) == full, "searched pair does not generate");
    let phi = HomInstance::through_free(&g, spec.presentation(), spec.fold(), &[a, b]).map_err(|e| e.to_string())?;
    let c = phi.apply(&g, &spec.embed_vertex(0, spec.edge()).unwrap()).unwrap();
    let ball: Vec<FreeWord> = enumerate_reduced(&spec, 2, 4)
        .unwrap()
        .into_iter()
        .filter(|f| f.syllable_count() == 2)
        .map(|f| f.word(&spec).unwrap())
        .collect();
    let relators = spec.presentation().relators;
    let closure = cyclic_closure(&g, &c).unwrap();
    let mut clean = 0;
    for k in &closure {
        let h = h_k_family(&g, &spec, &phi, k).map_err(|e| format!("{k:?}: {e}"))?;
        let images: Vec<M4> = h.images().iter().map(|m| m.entries()).collect();
        for r in &relators {
            ensure!(evalq(&images, r, q) == [1, 0, 0, 1], "{k:?}: relator {r} survives");
        }
        ensure!(bfs_closure(&images, q) == full, "{k:?}: image is a proper subgroup");
        let killed = injectivity_on_ball(&g, &h, &ball).unwrap();
        let oracle_killed = ball.iter().filter(|x| evalq(&images, x, q) == [1, 0, 0, 1]).count();
        ensure!(killed.len() == oracle_killed, "{k:?}: kill list {} vs oracle {oracle_killed}", killed.len());
        clean += usize::from(killed.is_empty());
    }
    ensure!(clean > 0, "no k leaves the ball intact");
    Ok(format!("|SL2(Z/25)| = {full}, {} twists, {} ball elements, {clean} clean", closure.len(), ball.len()))
}

fn free_pair() -> Outcome {
    let (a, b) = ([1, 2, 0, 1], [1, 0, 2, 1]);
    let lib = free_pair_check(&Mat2Int::from_i64(a).unwrap(), &Mat2Int::from_i64(b).unwrap(), 8);
    ensure!(lib, "library finds a relation");
    ensure!(naive_free_pair(a.map(i128::from), b.map(i128::from), 8), "oracle finds a relation");
    // The oracle does see relations when there are some.
    ensure!(!naive_free_pair([1, 1, 0, 1], [1, 0, 1, 1], 6), "oracle misses the braid relation");
    Ok("free up to length 8".into())
}

fn run_cli(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_limgrp"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    ensure!(status.success(), "{args:?} exited with {status}");
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let basic = write("basic.json", r#"{"rank": 2, "coefficients": ["x2", "x2", "x2"], "z": "x1"}"#);
    let relaxed = write(
        "relaxed.json",
        r#"{"rank": 2, "z": ["x1", "x2"], "u": ["x1"], "pattern": ["u1", "z2", "u1", "z2^-1", "u0", "z1", "u1"], "relaxed": true}"#,
    );
    let runs: Vec<Vec<&str>> = vec![
        vec!["--seed", "7", "baumslag", "certify", "--instance", &basic, "--samples", "500"],
        vec!["--seed", "7", "baumslag", "certify", "--instance", &relaxed, "--relaxed", "--samples", "500"],
        vec!["baumslag", "sweep", "--instance", &basic, "--cap", "4", "--window", "2"],
        vec!["surface", "onset", "--r", "1", "--radius", "1"],
        vec!["--seed", "3", "surface", "twist-audit", "--r", "1", "--n-max", "3", "--samples", "20"],
        vec!["double", "scan", "--edge", "[x1,x2]", "--rank", "2", "--kind", "amalgam", "--length", "3"],
        vec!["double", "scan", "--edge", "[x1,x2]", "--rank", "2", "--kind", "hnn", "--length", "3"],
        vec!["double", "scan", "--extend-a", "x1", "--extend-b", "x2", "--length", "2"],
        vec!["residual", "f2xf2", "--cap", "1"],
        vec!["padic", "hk", "--edge", "[x1,x2]", "--rank", "2", "--kind", "amalgam", "--length", "3"],
        vec!["padic", "surject", "--p", "5", "--k", "1"],
        vec!["padic", "freepair", "--max-len", "6"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = run_cli(args, &dir.path().join(format!("{i}a.json")))?;
        let second = run_cli(args, &dir.path().join(format!("{i}b.json")))?;
        ensure!(first == second, "{args:?}: the two reports differ");
        let v: serde_json::Value = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
        ensure!(v["schema"] == "limgrp.report.v1", "{args:?}: schema {}", v["schema"]);
        ensure!(v["versions"]["limitgroup"].is_string(), "{args:?}: no library version");
        ensure!(v["config"].is_object() && v["passed"] == true, "{args:?}: bad config echo or failed report");
        // Instance paths belong to the config echo; output paths never do.
        ensure!(!String::from_utf8_lossy(&first).contains(&format!("{i}a.json")), "{args:?}: output path leaked");
    }
    Ok(format!("{} commands, byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("word-kernel group axioms", 5, word_axioms),
        ("axis overlap criterion", 60, axis_criterion),
        ("ping-pong certificate soundness", 30, baumslag_soundness),
        ("surface twist algebra", 10, surface_algebra),
        ("surface family eventual faithfulness", 120, surface_onsets),
        ("double family eventual faithfulness", 120, double_family),
        ("rank extension eventual faithfulness", 60, rank_extension),
        ("F2 x F2 non-separability", 300, f2xf2),
        ("twisted maps into SL2(Z/25)", 300, finite_quotient),
        ("exact free pair", 60, free_pair),
        ("CLI determinism", 300, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(*limit) => Err(format!("{d}; over the time limit")),
            o => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {:>2} [{tag}] {name}: {detail} ({:.2} s / {limit} s)", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
