mod common;

use common::{random_degrees, set};
use multideg::pairing::sample_pairing_with;
use multideg::switching::{moves_of_colour, preimages, COLOURS};
use multideg::{
    apply_move, enumerate_moves, nominal_bounds, project, reverse_count, stats, DegreeSequence, Error, Multigraph,
    SwitchContext, Thresholds,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One or two hubs of degree 4..=7 and low-degree leaves, `M ≤ 16`.
fn hub_degrees(rng: &mut ChaCha8Rng) -> DegreeSequence {
    loop {
        let hubs = rng.random_range(1..=2);
        let leaves = rng.random_range(2..=7);
        let mut d: Vec<u32> = (0..hubs).map(|_| rng.random_range(4..=7)).collect();
        d.extend((0..leaves).map(|_| rng.random_range(1..=2)));
        let m: u32 = d.iter().sum();
        if m.is_multiple_of(2) && m <= 16 {
            return DegreeSequence::new(d);
        }
    }
}

/// Samples `Q ∈ G0` with an active colour, by rejection from pairings.
fn sample_active(rng: &mut ChaCha8Rng, js: &str, j: &str) -> (SwitchContext, Multigraph, u8) {
    loop {
        let k = if rng.random_bool(0.8) { hub_degrees(rng) } else { random_degrees(rng, 6, 8, 16) };
        let ctx = SwitchContext::new(k.clone(), set(j), set(js));
        let q = project(&sample_pairing_with(&k, rng).unwrap());
        if !ctx.in_g0(&q) {
            continue;
        }
        if let Some(c) = ctx.active_colour(&q).unwrap() {
            return (ctx, q, c);
        }
    }
}

fn changed_cells_are_clean(q: &Multigraph, r: &Multigraph) -> bool {
    for a in 0..q.n() {
        for b in a..q.n() {
            let (old, new) = (q.get(a, b), r.get(a, b));
            if old == new {
                continue;
            }
            if a == b && new == 1 {
                return false;
            }
            if a != b && (new == 2 || new == 3) {
                return false;
            }
        }
    }
    true
}

#[test]
fn sampled_moves_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut moves_checked = 0usize;
    let mut colours_seen = std::collections::BTreeSet::new();
    for round in 0..1000 {
        let (js, j) = if round % 2 == 0 { ("0", "0,1") } else { ("0,1", "0,1,2") };
        let (ctx, q, c) = sample_active(&mut rng, js, j);
        colours_seen.insert(c);
        let b = nominal_bounds(c, &ctx.degrees, &stats(&q)).unwrap().b.to_f64();
        for m in enumerate_moves(&ctx, &q, c).unwrap() {
            let r = apply_move(&q, &m, &ctx.thresholds).unwrap();
            assert_eq!(r.degrees(), q.degrees());
            assert!(ctx.in_g0(&r));
            assert!(changed_cells_are_clean(&q, &r));
            assert!(preimages(&ctx, &r, c).contains(&(q.clone(), m.clone())));
            let back = reverse_count(&ctx, &r, c).unwrap();
            assert!(back >= BigUint::from(1u32));
            assert!(back.to_string().parse::<f64>().unwrap() <= b * (1.0 + 1e-12));
            moves_checked += 1;
        }
    }
    assert!(moves_checked >= 500, "{moves_checked}");
    assert!(colours_seen.len() >= 2, "{colours_seen:?} {moves_checked}");
}

#[test]
fn wrong_colour_is_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (ctx, q, c) = sample_active(&mut rng, "0", "0,1");
    let other = if c == 15 { 14 } else { c + 1 };
    assert!(matches!(
        enumerate_moves(&ctx, &q, other),
        Err(Error::WrongColour { requested, active: Some(a) }) if requested == other && a == c
    ));
}

fn naive_recount(q: &Multigraph, c: u8) -> Option<usize> {
    let n = q.n();
    let heavy_loop = |v: usize| q.loop_mult(v) == 2 || q.loop_mult(v) >= 4;
    let mut count = 0;
    match c {
        1 => {
            for a in 0..n {
                for b in 0..n {
                    if a != b && heavy_loop(a) && heavy_loop(b) {
                        count += 1;
                    }
                }
            }
        }
        3 => {
            for a in 0..n {
                for b in 0..n {
                    for d in 0..n {
                        let distinct = a != b && a != d && b != d;
                        if distinct
                            && [a, b, d].iter().all(|&v| q.loop_mult(v) == 1)
                            && q.get(a, b) == 0
                            && q.get(a, d) == 0
                            && q.get(b, d) == 0
                        {
                            count += 1;
                        }
                    }
                }
            }
        }
        13 => {
            for v0 in 0..n {
                if q.loop_mult(v0) != 1 {
                    continue;
                }
                for a in 0..n {
                    for b in 0..n {
                        let distinct = a != b && a != v0 && b != v0;
                        if distinct && q.get(a, b) == 1 && q.get(v0, a) == 0 && q.get(v0, b) == 0 {
                            count += 1;
                        }
                    }
                }
            }
        }
        9 => {
            for v0 in 0..n {
                if !heavy_loop(v0) {
                    continue;
                }
                for v1 in 0..n {
                    for w1 in 0..n {
                        for v2 in 0..n {
                            for w2 in 0..n {
                                let s = [v0, v1, w1, v2, w2];
                                let distinct = (0..5).all(|i| (i + 1..5).all(|j| s[i] != s[j]));
                                if distinct
                                    && q.get(v1, w1) == 1
                                    && q.get(v2, w2) == 1
                                    && [v1, w1, v2, w2].iter().all(|&x| q.get(v0, x) == 0)
                                {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        6 => {
            for v1 in 0..n {
                for w1 in 0..n {
                    for v2 in 0..n {
                        for w2 in 0..n {
                            let s = [v1, w1, v2, w2];
                            let distinct = (0..4).all(|i| (i + 1..4).all(|j| s[i] != s[j]));
                            if distinct
                                && q.get(v1, w1) == 2
                                && q.get(v2, w2) == 2
                                && q.get(v1, w2) == 0
                                && q.get(v2, w1) == 0
                            {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        _ => return None,
    }
    Some(count)
}

fn random_multigraph(rng: &mut ChaCha8Rng) -> Multigraph {
    let n = rng.random_range(2..=8);
    let mut g = Multigraph::empty(n);
    for a in 0..n {
        let l = [0, 0, 1, 1, 2, 3, 4][rng.random_range(0..7)];
        g.set(a, a, l);
        for b in a + 1..n {
            g.set(a, b, [0, 0, 0, 1, 1, 2, 3][rng.random_range(0..7)]);
        }
    }
    g
}

#[test]
fn forward_counts_match_naive_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let q = random_multigraph(&mut rng);
        let th = Thresholds::new(&DegreeSequence::new(q.degrees()));
        for c in [1u8, 3, 6, 9, 13] {
            assert_eq!(Some(moves_of_colour(&q, c, &th).len()), naive_recount(&q, c), "colour {c}");
        }
    }
}

#[test]
fn structural_moves_invert() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..150 {
        let q = random_multigraph(&mut rng);
        let th = Thresholds::new(&DegreeSequence::new(q.degrees()));
        for c in COLOURS {
            for m in moves_of_colour(&q, c, &th) {
                let r = apply_move(&q, &m, &th).unwrap();
                assert_eq!(r.degrees(), q.degrees());
                let back = multideg::switching::structural_preimages(&r, c, &th);
                assert!(back.contains(&(q.clone(), m)));
            }
        }
    }
}
