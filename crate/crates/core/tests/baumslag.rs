use limitgroup::baumslag::{
    certify_basic, certify_general, check_general_hypotheses, empirical_min_n, eval_basic, eval_conjugated,
    eval_general, verify_basic_certificate, verify_certificate, BaumslagInstance, GeneralBaumslagInstance, Role, Slot,
};
use limitgroup::tree::Cylinder;
use limitgroup::FreeWord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn w(v: &[i64]) -> FreeWord {
    FreeWord::reduce(2, v.iter().copied()).unwrap()
}

/// Independent oracle: expand powers letter by letter and cancel with a stack.
fn naive_trivial(factors: &[(&FreeWord, i64)]) -> bool {
    let mut stack: Vec<i64> = Vec::new();
    for (f, e) in factors {
        let letters: Vec<i64> = f.indices().map(i64::from).collect();
        let (seq, reps): (Vec<i64>, i64) =
            if *e >= 0 { (letters, *e) } else { (letters.iter().rev().map(|x| -x).collect(), -e) };
        for _ in 0..reps {
            for &x in &seq {
                if stack.last() == Some(&-x) {
                    stack.pop();
                } else {
                    stack.push(x);
                }
            }
        }
    }
    stack.is_empty()
}

fn pattern(s: &str) -> Vec<Slot> {
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

fn general(z: &[&[i64]], u: &[&[i64]], p: &str, relaxed: bool) -> GeneralBaumslagInstance {
    GeneralBaumslagInstance::new(
        z.iter().map(|v| w(v)).collect(),
        u.iter().map(|v| w(v)).collect(),
        pattern(p),
        relaxed,
    )
    .unwrap()
}

fn basic_factors(inst: &BaumslagInstance, k: &[i64]) -> Vec<(FreeWord, i64)> {
    inst.coefficients.iter().zip(k).flat_map(|(a, &e)| [(a.clone(), 1), (inst.z.clone(), e)]).collect()
}

fn general_factors(inst: &GeneralBaumslagInstance, t: &[i64]) -> Vec<(FreeWord, i64)> {
    let mut it = t.iter();
    inst.pattern
        .iter()
        .map(|s| match *s {
            Slot::U(i) => (inst.u_elem(i), 1),
            Slot::Z { index, sign } => (inst.z_elem(index).clone(), i64::from(sign) * it.next().unwrap()),
        })
        .collect()
}

fn trivial(f: &[(FreeWord, i64)]) -> bool {
    naive_trivial(&f.iter().map(|(a, e)| (a, *e)).collect::<Vec<_>>())
}

fn random_exp(rng: &mut ChaCha20Rng, n: u64) -> i64 {
    let m = rng.gen_range(n..=n + 20) as i64;
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

#[test]
fn basic_instance_sweep_matches_oracle() {
    let inst = BaumslagInstance::new(vec![w(&[2]); 3], w(&[1])).unwrap();
    let vals: Vec<i64> = (1..=10).flat_map(|m| [m, -m]).collect();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                let g = eval_basic(&inst, &[a, b, c]).unwrap();
                assert!(!g.is_identity());
                assert!(!trivial(&basic_factors(&inst, &[a, b, c])));
            }
        }
    }
}

#[test]
fn empirical_thresholds() {
    let inst = BaumslagInstance::new(vec![w(&[2]); 3], w(&[1])).unwrap();
    assert_eq!(empirical_min_n(&inst, 3, 10).unwrap(), Some(1));
    let inst = BaumslagInstance::new(vec![w(&[]), w(&[1, 2])], w(&[1])).unwrap();
    assert_eq!(empirical_min_n(&inst, 6, 10).unwrap(), Some(1));
    let bad = BaumslagInstance::new(vec![w(&[]), w(&[1, 1])], w(&[1])).unwrap();
    assert!(empirical_min_n(&bad, 3, 10).is_err());
    assert!(certify_basic(&bad).is_err());
}

#[test]
fn basic_certificate_examples() {
    let inst = BaumslagInstance::new(vec![w(&[2]); 3], w(&[1])).unwrap();
    let cert = certify_basic(&inst).unwrap();
    assert!(cert.n <= 4, "N = {}", cert.n);
    assert!(verify_basic_certificate(&cert, &inst));
    // Agrees with the general engine on the translated instance.
    assert!(verify_certificate(&cert, &inst.to_general()));
    let gen = certify_general(&inst.to_general()).unwrap();
    assert!(gen.n <= cert.n);
    // Longer translation length never needs a larger N.
    let cubed = BaumslagInstance::new(vec![w(&[2]); 3], w(&[1, 1, 1])).unwrap();
    assert!(certify_basic(&cubed).unwrap().n <= cert.n);
}

fn soundness_basic(inst: &BaumslagInstance, seed: u64) {
    let cert = certify_basic(inst).unwrap();
    assert!(verify_basic_certificate(&cert, inst));
    let mut bad = cert.clone();
    bad.n -= 1;
    assert!(!verify_basic_certificate(&bad, inst), "N-1 still verifies for {inst:?}");
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut k: Vec<i64> = (0..inst.n()).map(|_| random_exp(&mut rng, cert.n)).collect();
        k.push(rng.gen_range(-5..=5));
        assert!(!trivial(&basic_factors(inst, &k)), "{k:?}");
    }
}

#[test]
fn basic_certificates_are_sound() {
    soundness_basic(&BaumslagInstance::new(vec![w(&[2]); 3], w(&[1])).unwrap(), 1);
    // a0 commuting with z, a0 trivial, and a conjugated z.
    soundness_basic(&BaumslagInstance::new(vec![w(&[1]), w(&[1, 2]), w(&[2, 2])], w(&[1])).unwrap(), 2);
    soundness_basic(&BaumslagInstance::new(vec![w(&[]), w(&[2, -1])], w(&[2, 1, -2])).unwrap(), 3);
    soundness_basic(&BaumslagInstance::new(vec![w(&[1, 2]), w(&[-1, 2, 1]), w(&[2])], w(&[1, 2, 1])).unwrap(), 4);
}

fn soundness_general(inst: &GeneralBaumslagInstance, seed: u64, samples: usize) {
    let cert = certify_general(inst).unwrap();
    assert!(verify_certificate(&cert, inst));
    let mut bad = cert.clone();
    bad.n -= 1;
    assert!(!verify_certificate(&bad, inst));
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let t: Vec<i64> = (0..inst.z_slot_count()).map(|_| random_exp(&mut rng, cert.n)).collect();
        assert!(!trivial(&general_factors(inst, &t)), "{t:?}");
        assert!(!eval_general(inst, &t).unwrap().is_identity());
    }
}

#[test]
fn general_certificate_example() {
    let inst = general(&[&[1], &[2]], &[&[1, 2]], "u1 z1 u1 z2", false);
    soundness_general(&inst, 5, 1000);
    let cert = certify_general(&inst).unwrap();
    // Uniform certificate: other patterns over the same data are covered too.
    for p in ["u1 z2^-1 u0 z1 u1 z2 u1", "u0 z1 u1 z1 u1 z1", "u1 z1"] {
        let other = GeneralBaumslagInstance { pattern: pattern(p), ..inst.clone() };
        assert!(verify_certificate(&cert, &other), "{p}");
        soundness_general(&other, 6, 1000);
    }
}

#[test]
fn general_certificate_soundness_suite() {
    soundness_general(&general(&[&[1], &[2]], &[&[1, 2], &[2, -1, -1]], "u2 z1 u1 z2 u0 z1^-1 u2", false), 7, 10_000);
    soundness_general(&general(&[&[1, 2], &[2, 2, 1]], &[&[1]], "u0 z1 u1 z2 u1 z1 u0", false), 8, 10_000);
    // Relaxed: u1 commutes with z1 but z1 only meets u1 at the ends.
    let relaxed = general(&[&[1], &[2]], &[&[1]], "u1 z2 u1 z2^-1 u0 z1 u1", true);
    assert!(check_general_hypotheses(&relaxed).is_empty());
    let full = GeneralBaumslagInstance { relaxed: false, ..relaxed.clone() };
    assert!(!check_general_hypotheses(&full).is_empty());
    assert!(certify_general(&full).is_err());
    soundness_general(&relaxed, 9, 10_000);
}

#[test]
fn certified_n_dominates_empirical_threshold() {
    let inst = general(&[&[1], &[2]], &[&[1, 2]], "u1 z1 u1 z2", false);
    let cert = certify_general(&inst).unwrap();
    // Empirical: smallest N whose window [N, N+4] has no trivial word.
    let empirical = (1..=cert.n)
        .find(|&n| {
            let r: Vec<i64> = (n as i64..=n as i64 + 4).flat_map(|m| [m, -m]).collect();
            r.iter().all(|&t| r.iter().all(|&s| !eval_general(&inst, &[t, s]).unwrap().is_identity()))
        })
        .unwrap();
    assert!(empirical <= cert.n);
}

#[test]
fn trivial_patterns() {
    let inst = general(&[&[1]], &[&[1, 2]], "u1", false);
    let cert = certify_general(&inst).unwrap();
    assert_eq!(cert.n, 1);
    assert!(verify_certificate(&cert, &inst));
    assert_eq!(eval_general(&inst, &[]).unwrap(), w(&[1, 2]));
    let inst = general(&[&[1], &[2]], &[&[1, 2]], "u1 z1 u1 z2", false);
    assert_eq!(eval_general(&inst, &[2, 2]).unwrap(), w(&[1, 2, 1, 1, 1, 2, 2, 2]));
}

#[test]
fn tampered_certificates_fail() {
    let inst = general(&[&[1], &[2]], &[&[1, 2]], "u1 z1 u1 z2", false);
    let cert = certify_general(&inst).unwrap();
    let mut overlap = cert.clone();
    let v1 = cert.get(Role::Z { z: 1, sign: 1 }).unwrap().clone();
    *overlap.get_mut(Role::Z { z: 2, sign: 1 }).unwrap() = v1;
    assert!(!verify_certificate(&overlap, &inst));
    let mut no_witness = cert.clone();
    no_witness.witness = None;
    assert!(!verify_certificate(&no_witness, &inst));
    let mut wide = cert.clone();
    *wide.get_mut(Role::Z { z: 1, sign: -1 }).unwrap() = Cylinder::new(w(&[]), -1).unwrap().complement();
    assert!(!verify_certificate(&wide, &inst));
}

#[test]
fn conjugated_powers_survive() {
    let (a, b) = (w(&[1]), w(&[2]));
    let ws = [w(&[1]), w(&[1])];
    for k in 1..=20 {
        let g = eval_conjugated(&a, &b, &[1], &ws, k).unwrap();
        assert!(!g.is_identity());
        let bk = b.pow(k);
        assert!(!naive_trivial(&[(&ws[1], 1), (&bk, -1), (&a, 1), (&bk, 1), (&ws[0], 1)]));
    }
}
