//! The pairing (configuration) model: `M` points split into cells of sizes
//! `k_1..k_n`, perfect matchings on them, and their projection to
//! multigraphs.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, odd_double_factorial};
use crate::degree::{DegreeSequence, Multigraph};
use crate::error::{Error, Result};
use crate::exact::{count_class, ClassSignature};

/// A perfect matching on points `0..M`. Points `0..k_1` form cell 0, the
/// next `k_2` points cell 1, and so on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    degrees: Vec<u32>,
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct PairingJson {
    degrees: Vec<u32>,
    pairs: Vec<[usize; 2]>,
}

impl Pairing {
    pub fn new(degrees: Vec<u32>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let m: usize = degrees.iter().map(|&d| d as usize).sum();
        if pairs.len() * 2 != m {
            return Err(Error::InvalidInput(format!(
                "{} pairs cannot cover {m} points",
                pairs.len()
            )));
        }
        let mut seen = vec![false; m];
        for &(a, b) in &pairs {
            for p in [a, b] {
                if p >= m || seen[p] {
                    return Err(Error::InvalidInput(format!("point {} repeated or out of range", p + 1)));
                }
                seen[p] = true;
            }
        }
        Ok(Pairing { degrees, pairs })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn cell_map(&self) -> Vec<usize> {
        cell_map(&self.degrees)
    }
}

impl Serialize for Pairing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairingJson {
            degrees: self.degrees.clone(),
            pairs: self.pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pairing {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PairingJson::deserialize(d)?;
        let mut pairs = Vec::with_capacity(raw.pairs.len());
        for [a, b] in raw.pairs {
            if a == 0 || b == 0 {
                return Err(serde::de::Error::custom("point ids are 1-based"));
            }
            pairs.push((a - 1, b - 1));
        }
        Pairing::new(raw.degrees, pairs).map_err(serde::de::Error::custom)
    }
}

fn cell_map(degrees: &[u32]) -> Vec<usize> {
    degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat_n(i, d as usize))
        .collect()
}

/// `M! / ((M/2)! 2^{M/2})`.
pub fn total_pairings(m: u64) -> Result<BigUint> {
    if m % 2 == 1 {
        return Err(Error::OddTotalDegree { total: m });
    }
    Ok(odd_double_factorial(m))
}

pub fn project(p: &Pairing) -> Multigraph {
    let cells = p.cell_map();
    let mut g = Multigraph::empty(p.degrees.len());
    for &(a, b) in &p.pairs {
        let (u, v) = (cells[a], cells[b]);
        let cur = g.get(u, v);
        g.set(u, v, cur + 1);
    }
    g
}

/// `∏ k_i! / (∏_{i<j} a_ij! ∏_i 2^{a_ii} a_ii!)`, the number of pairings
/// projecting to `g`.
pub fn pairings_of(g: &Multigraph) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..g.n() {
        num *= factorial(u64::from(g.degree(i)));
        let a = g.loop_mult(i);
        den *= factorial(u64::from(a)) << a;
        for j in i + 1..g.n() {
            den *= factorial(u64::from(g.get(i, j)));
        }
    }
    num / den
}

/// `w(ℓ,d,t) = 2^{ℓ+d} 6^t |C_{ℓ,d,t}| = ∏ k_i! · count_class(k, sig)`.
pub fn w_weight(k: &DegreeSequence, sig: ClassSignature) -> Result<BigUint> {
    let prod: BigUint = k
        .degrees()
        .iter()
        .map(|&d| factorial(u64::from(d)))
        .product();
    Ok(prod * count_class(k, sig)?)
}

/// A uniform pairing, determined by `seed`.
pub fn sample_pairing(k: &DegreeSequence, seed: u64) -> Result<Pairing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_pairing_with(k, &mut rng)
}

/// Pairs the last unmatched point with a uniformly chosen other unmatched
/// point until none remain.
pub fn sample_pairing_with<R: Rng + ?Sized>(k: &DegreeSequence, rng: &mut R) -> Result<Pairing> {
    k.check_even()?;
    let m = k.total() as usize;
    let mut free: Vec<usize> = (0..m).collect();
    let mut pairs = Vec::with_capacity(m / 2);
    while let Some(a) = free.pop() {
        let idx = rng.random_range(0..free.len());
        let b = free.swap_remove(idx);
        pairs.push((a.min(b), a.max(b)));
    }
    pairs.sort_unstable();
    Ok(Pairing {
        degrees: k.degrees().to_vec(),
        pairs,
    })
}

/// Every pairing of the cells, each with pairs sorted. Exponential; for
/// small `M` only.
pub fn all_pairings(k: &DegreeSequence) -> Result<Vec<Pairing>> {
    k.check_even()?;
    let m = k.total() as usize;
    let mut out = Vec::new();
    let mut used = vec![false; m];
    let mut cur = Vec::with_capacity(m / 2);
    fn rec(used: &mut [bool], cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some(a) = used.iter().position(|u| !u) else {
            out.push(cur.clone());
            return;
        };
        used[a] = true;
        for b in a + 1..used.len() {
            if !used[b] {
                used[b] = true;
                cur.push((a, b));
                rec(used, cur, out);
                cur.pop();
                used[b] = false;
            }
        }
        used[a] = false;
    }
    rec(&mut used, &mut cur, &mut out);
    Ok(out
        .into_iter()
        .map(|pairs| Pairing {
            degrees: k.degrees().to_vec(),
            pairs,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_pairing_examples() {
        assert_eq!(total_pairings(4).unwrap(), 3u32.into());
        assert_eq!(total_pairings(12).unwrap(), 10395u32.into());
        assert_eq!(total_pairings(0).unwrap(), 1u32.into());
        assert!(matches!(total_pairings(5), Err(Error::OddTotalDegree { total: 5 })));
    }

    #[test]
    fn projection_examples() {
        let p = Pairing::new(vec![2], vec![(0, 1)]).unwrap();
        assert_eq!(project(&p).matrix(), &[vec![1]]);
        let double = Pairing::new(vec![2, 2], vec![(0, 2), (1, 3)]).unwrap();
        assert_eq!(project(&double).matrix(), &[vec![0, 2], vec![2, 0]]);
        let loops = Pairing::new(vec![2, 2], vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(project(&loops).matrix(), &[vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn pairings_of_examples() {
        let k4 = Multigraph::from_matrix(vec![
            vec![0, 1, 1, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![1, 1, 1, 0],
        ])
        .unwrap();
        assert_eq!(pairings_of(&k4), 1296u32.into());
        let all = all_pairings(&DegreeSequence::regular(3, 4)).unwrap();
        assert_eq!(all.len(), 10395);
        assert_eq!(all.iter().filter(|p| project(p) == k4).count(), 1296);

        assert_eq!(pairings_of(&Multigraph::from_matrix(vec![vec![1]]).unwrap()), 1u32.into());
        let double = Multigraph::from_matrix(vec![vec![0, 2], vec![2, 0]]).unwrap();
        assert_eq!(pairings_of(&double), 2u32.into());
    }

    #[test]
    fn w_weight_example() {
        let k = DegreeSequence::new(vec![2, 2]);
        assert_eq!(w_weight(&k, ClassSignature::new(0, 1, 0)).unwrap(), 4u32.into());
    }

    #[test]
    fn sampler_is_seeded_and_preserves_degrees() {
        let k = DegreeSequence::new(vec![3, 2, 2, 1, 4]);
        let a = sample_pairing(&k, 7).unwrap();
        assert_eq!(a, sample_pairing(&k, 7).unwrap());
        assert_eq!(project(&a).degrees(), k.degrees());
        assert!(matches!(
            sample_pairing(&DegreeSequence::new(vec![1]), 0),
            Err(Error::OddTotalDegree { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let p = Pairing::new(vec![2, 2], vec![(0, 2), (1, 3)]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"degrees":[2,2],"pairs":[[1,3],[2,4]]}"#);
        let back: Pairing = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
