use multideg::calculus::{
    hat_alpha_path_exhaustive, perturb_loads, random_admissible_sets, random_counting_setup, REL_TOL,
};
use multideg::{feasible, from_counting_setup, hat_alpha_path, verify_bound, Error, FlowNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn counting_setups_certify() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..300 {
        let cs = random_counting_setup(&mut rng, 5, 3, 14);
        let mut net = from_counting_setup(&cs, None).unwrap();
        assert!(feasible(&net).ok);
        let (y, z) = random_admissible_sets(&mut rng, &net);
        let cert = verify_bound(&net, &y, &z).unwrap();
        assert!(cert.holds, "{cert:?}");
        perturb_loads(&mut rng, &mut net);
        assert!(feasible(&net).ok);
        assert!(verify_bound(&net, &y, &z).unwrap().holds);
    }
}

#[test]
fn dijkstra_matches_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let n = rng.random_range(2..=7);
        let mut net = FlowNetwork::new((0..n).map(|_| rng.random_range(1.0..10.0)).collect());
        for _ in 0..rng.random_range(1..=3 * n) {
            let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
            let c = rng.random_range(1..=3);
            net.add_edge(a, b, c, rng.random_range(0.001..0.3), 1.0).unwrap();
        }
        let z = vec![n - 1];
        let y: Vec<usize> = (0..n - 1).filter(|_| rng.random_bool(0.5)).collect();
        let fast = hat_alpha_path(&net, &y, &z).unwrap();
        let slow = hat_alpha_path_exhaustive(&net, &y, &z).unwrap();
        assert!(close(fast.to_z, slow.to_z) && close(fast.to_y, slow.to_y), "{fast:?} {slow:?}");
    }
}

#[test]
fn adversarial_sets_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut rejected = 0;
    while rejected < 100 {
        let cs = random_counting_setup(&mut rng, 5, 3, 12);
        let mut net = from_counting_setup(&cs, None).unwrap();
        let (mut y, mut z) = random_admissible_sets(&mut rng, &net);
        let forced: Vec<usize> = z
            .iter()
            .copied()
            .filter(|&v| net.is_sink(v) || net.edges().iter().any(|e| e.from == v && net.hat_alpha(e) >= 1.0))
            .collect();
        if let Some(&v) = forced.first() {
            z.retain(|&x| x != v);
            if rng.random_bool(0.5) {
                y.push(v);
            }
        } else if let Some(&v) = y.first() {
            let target = z[0];
            net.add_edge(v, target, 99, 1e3, 1.0).unwrap();
        } else {
            continue;
        }
        assert!(
            matches!(verify_bound(&net, &y, &z), Err(Error::StructuralViolation(_))),
            "{y:?} {z:?}"
        );
        rejected += 1;
    }
}

#[test]
fn overlap_and_empty_z() {
    let mut net = FlowNetwork::new(vec![1.0, 1.0]);
    net.add_edge(0, 1, 1, 0.1, 1.0).unwrap();
    assert!(matches!(hat_alpha_path(&net, &[0, 1], &[1]), Err(Error::SetOverlap)));
    assert!(matches!(verify_bound(&net, &[0], &[]), Err(Error::StructuralViolation(_))));
    assert!(matches!(verify_bound(&net, &[0, 1], &[1]), Err(Error::StructuralViolation(_))));
}
