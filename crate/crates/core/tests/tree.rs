use std::collections::HashSet;

use limitgroup::tree::{
    axis_of, axis_overlap, cylinder_image, endpoints, translate_ray, BoundaryRay, Cylinder, Overlap,
};
use limitgroup::words::{nontrivial_words, reduced_words};
use limitgroup::FreeWord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn w(v: &[i64]) -> FreeWord {
    FreeWord::reduce(2, v.iter().copied()).unwrap()
}

fn random_word(rng: &mut ChaCha20Rng, max_len: usize) -> FreeWord {
    let n = rng.gen_range(0..=max_len);
    let mut v: Vec<i64> = Vec::new();
    while v.len() < n {
        let g = rng.gen_range(1..=2i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        if v.last() != Some(&-g) {
            v.push(g);
        }
    }
    FreeWord::reduce(2, v).unwrap()
}

fn random_ray(rng: &mut ChaCha20Rng) -> BoundaryRay {
    let prefix = random_word(rng, 6);
    loop {
        let p = random_word(rng, 4);
        if !p.is_identity() && p.is_cyclically_reduced() {
            return BoundaryRay::new(&prefix, &p).unwrap();
        }
    }
}

/// Axis vertices inside the ball of the given radius, found as the vertices
/// of minimal displacement: x is on axis(a) iff |x^-1 a x| equals the
/// translation length.
fn min_set(a: &FreeWord, ball: &[FreeWord]) -> HashSet<FreeWord> {
    let ell = a.cyclic_decompose().unwrap().core.len();
    ball.iter().filter(|x| (&(&x.inverse() * a) * x).len() == ell).cloned().collect()
}

#[test]
fn overlap_matches_min_set_oracle() {
    let radius = 10;
    let ball = reduced_words(2, radius);
    let a = w(&[1]);
    let b = w(&[1]).conjugate(&w(&[1, 2])).unwrap();
    let mut pairs = vec![(a, b)];
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    while pairs.len() < 12 {
        let x = random_word(&mut rng, 4);
        let y = random_word(&mut rng, 4);
        if !x.is_identity() && !y.is_identity() && !x.commutes(&y).unwrap() {
            pairs.push((x, y));
        }
    }
    for (x, y) in pairs {
        let common: Vec<FreeWord> = min_set(&x, &ball).intersection(&min_set(&y, &ball)).cloned().collect();
        // The oracle only sees the ball; the common segment must be interior.
        assert!(common.iter().all(|v| v.len() < radius), "segment leaves the ball for {x}, {y}");
        let edges = common.len().saturating_sub(1) as u64;
        assert_eq!(axis_overlap(&x, &y).unwrap(), Overlap::Finite(edges), "{x} vs {y}");
    }
}

#[test]
fn axis_criterion_radius_four() {
    let words = nontrivial_words(2, 4);
    let ends: Vec<_> = words.iter().map(|x| endpoints(x).unwrap()).collect();
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            let ov = axis_overlap(a, b).unwrap();
            assert_eq!(a.commutes(b).unwrap(), ov == Overlap::Infinite, "{a} vs {b}");
            let (ap, am) = &ends[i];
            let (bp, bm) = &ends[j];
            let shared = ap == bp || ap == bm || am == bp || am == bm;
            assert_eq!(shared, ov == Overlap::Infinite, "endpoints {a} vs {b}");
        }
    }
}

#[test]
fn square_has_same_axis() {
    for x in nontrivial_words(2, 4) {
        let a1 = axis_of(&x).unwrap();
        let a2 = axis_of(&x.pow(2)).unwrap();
        assert_eq!(a2.translation_length(), 2 * a1.translation_length());
        let on = |ax: &limitgroup::tree::AxisDesc| -> HashSet<FreeWord> {
            (-10i64..=10).map(|p| ax.vertex(p)).filter(|v| v.len() <= 10).collect()
        };
        assert_eq!(on(&a1), on(&a2), "{x}");
    }
}

#[test]
fn endpoints_of_powers_agree() {
    for x in nontrivial_words(2, 4) {
        let (p, m) = endpoints(&x).unwrap();
        assert_ne!(p, m);
        assert_eq!(endpoints(&x.pow(3)).unwrap(), (p.clone(), m.clone()));
        assert_eq!(endpoints(&x.inverse()).unwrap(), (m, p));
    }
}

#[test]
fn translation_is_an_action() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let g = random_word(&mut rng, 8);
        let h = random_word(&mut rng, 8);
        let r = random_ray(&mut rng);
        let lhs = translate_ray(&g, &translate_ray(&h, &r).unwrap()).unwrap();
        let rhs = translate_ray(&(&g * &h), &r).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(translate_ray(&FreeWord::identity(2), &r).unwrap(), r);
    }
}

fn random_cylinder(rng: &mut ChaCha20Rng) -> Cylinder {
    let base = random_word(rng, 5);
    let d = rng.gen_range(1..=2i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Cylinder::new(base, d).unwrap()
}

/// A ray that starts near the cylinder's edge, so both outcomes are common.
fn ray_near(rng: &mut ChaCha20Rng, c: &Cylinder) -> BoundaryRay {
    let mut head: Vec<i64> = c.base().indices().map(i64::from).collect();
    if rng.gen_bool(0.5) {
        head.push(c.direction().index().into());
    } else {
        head.truncate(rng.gen_range(0..=head.len()));
    }
    let tail = random_ray(rng);
    let prefix = &FreeWord::reduce(2, head).unwrap() * tail.prefix();
    BoundaryRay::new(&prefix, tail.period()).unwrap()
}

#[test]
fn images_preserve_membership() {
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let g = random_word(&mut rng, 6);
        let c = random_cylinder(&mut rng);
        let r = ray_near(&mut rng, &c);
        let img = cylinder_image(&g, &c).unwrap();
        assert_eq!(c.contains(&r), img.contains(&translate_ray(&g, &r).unwrap()));
    }
}

#[test]
fn predicates_agree_with_sampling() {
    let mut rng = ChaCha20Rng::seed_from_u64(14);
    let mut seen = [0usize; 2];
    for _ in 0..200 {
        let a = random_cylinder(&mut rng);
        let b = if rng.gen_bool(0.3) {
            // Force nested or complementary pairs to show up.
            let g = random_word(&mut rng, 2);
            cylinder_image(&g, &a).unwrap().complement()
        } else {
            random_cylinder(&mut rng)
        };
        let (sub, disj) = (a.is_subset(&b), a.is_disjoint(&b));
        let mut witness_not_sub = false;
        let mut witness_meet = false;
        for _ in 0..1000 {
            let src = if rng.gen_bool(0.5) { &a } else { &b };
            let r = ray_near(&mut rng, src);
            let (ia, ib) = (a.contains(&r), b.contains(&r));
            witness_not_sub |= ia && !ib;
            witness_meet |= ia && ib;
        }
        assert!(!(sub && witness_not_sub), "{a} ⊆ {b} contradicted");
        assert!(!(disj && witness_meet), "{a} ∩ {b} = ∅ contradicted");
        seen[0] += usize::from(sub);
        seen[1] += usize::from(disj);
    }
    assert!(seen[0] > 0 && seen[1] > 0);
}

#[test]
fn powers_push_cylinders_toward_attracting_end() {
    // z^t * C lands in the cylinder around z^+ of depth t*|c| - m - 2|u|
    // whenever C avoids both ends of z, where m is the common prefix of C's
    // word with z^-.
    for z in [w(&[1]), w(&[1, 2]), w(&[2, 1, 1, -2]), w(&[-1, 2, 2, 1, 1])] {
        let (plus, minus) = endpoints(&z).unwrap();
        let d = z.cyclic_decompose().unwrap();
        let (ell, u) = (d.core.len() as i64, d.conjugator.len() as i64);
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let mut checked = 0;
        while checked < 100 {
            let c = random_cylinder(&mut rng);
            if !c.is_forward() || c.contains(&plus) || c.contains(&minus) {
                continue;
            }
            checked += 1;
            let word: Vec<_> = c.base().letters().iter().copied().chain([c.direction()]).collect();
            let m = (0..word.len()).take_while(|&i| minus.letter(i) == word[i]).count() as i64;
            for t in 1..=8i64 {
                let depth = t * ell - m - 2 * u;
                if depth < 1 {
                    continue;
                }
                let img = cylinder_image(&z.pow(t), &c).unwrap();
                let target = Cylinder::around(&plus, depth as usize).unwrap();
                assert!(img.is_subset(&target), "z={z} C={c} t={t}");
            }
        }
    }
}
