#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use multideg::pairing::all_pairings;
use multideg::{project, DegreeSequence, MultiplicitySet};
use num_bigint::BigUint;
use rand::Rng;

pub fn set(s: &str) -> MultiplicitySet {
    s.parse().unwrap()
}

/// Distinct projections of all pairings that respect `(j, jstar)`.
pub fn count_by_projection(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> u64 {
    let mut seen = BTreeSet::new();
    for p in all_pairings(k).unwrap() {
        let g = project(&p);
        if g.respects(j, jstar) {
            seen.insert(g.matrix().to_vec());
        }
    }
    seen.len() as u64
}

/// `(ℓ, d, t) ↦ |C_{ℓ,d,t}|` read off every pairing.
pub fn pairing_classes(k: &DegreeSequence) -> BTreeMap<(u32, u32, u32), u64> {
    let mut out = BTreeMap::new();
    'pairings: for p in all_pairings(k).unwrap() {
        let g = project(&p);
        let (mut l, mut d, mut t) = (0, 0, 0);
        for i in 0..g.n() {
            match g.loop_mult(i) {
                0 => {}
                1 => l += 1,
                _ => continue 'pairings,
            }
            for c in i + 1..g.n() {
                match g.get(i, c) {
                    0 | 1 => {}
                    2 => d += 1,
                    3 => t += 1,
                    _ => continue 'pairings,
                }
            }
        }
        *out.entry((l, d, t)).or_insert(0) += 1;
    }
    out
}

pub fn factorial_product(k: &DegreeSequence) -> BigUint {
    k.degrees()
        .iter()
        .map(|&d| (1..=u64::from(d)).map(BigUint::from).product::<BigUint>())
        .product()
}

/// A random degree sequence with positive entries, even total and
/// `2 ≤ M ≤ max_m`.
pub fn random_degrees<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_deg: u32, max_m: u64) -> DegreeSequence {
    loop {
        let n = rng.random_range(1..=max_n);
        let d: Vec<u32> = (0..n).map(|_| rng.random_range(1..=max_deg)).collect();
        let m: u64 = d.iter().map(|&x| u64::from(x)).sum();
        if m.is_multiple_of(2) && (2..=max_m).contains(&m) {
            return DegreeSequence::new(d);
        }
    }
}

/// Every non-increasing positive sequence with even sum `2 ≤ M ≤ max_m`.
pub fn all_sequences(max_m: u32) -> Vec<DegreeSequence> {
    fn rec(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for d in (1..=cap.min(rest)).rev() {
            cur.push(d);
            rec(rest - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_m, max_m, &mut Vec::new(), &mut out);
    out.into_iter()
        .filter(|d| {
            let m: u32 = d.iter().sum();
            m.is_multiple_of(2) && m >= 2
        })
        .map(DegreeSequence::new)
        .collect()
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// `ln G_naive` for `J = {0,1}`, `J* = {0}` in closed form:
/// `p^{M/2}(1+p)^{−C(n,2)}∏C(n−1,k_i)`.
pub fn ln_g_naive_simple(k: &DegreeSequence, p: f64) -> f64 {
    let n = k.n() as u64;
    let half_m = k.total() as f64 / 2.0;
    let pairs = (n * (n - 1) / 2) as f64;
    let coeffs: f64 = k
        .degrees()
        .iter()
        .map(|&d| {
            if u64::from(d) > n - 1 {
                f64::NEG_INFINITY
            } else {
                ln_binomial(n - 1, u64::from(d))
            }
        })
        .sum();
    half_m * p.ln() - pairs * (1.0 + p).ln() + coeffs
}
