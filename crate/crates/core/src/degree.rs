//! Degree sequences, multiplicity sets and multigraphs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{falling, ratio};
use crate::error::{Error, Result};

/// A set of allowed multiplicities: a finite part plus an optional
/// cofinite tail `{T, T+1, ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiplicitySet {
    finite: BTreeSet<u32>,
    cofinite_from: Option<u32>,
}

impl MultiplicitySet {
    pub fn new(finite: impl IntoIterator<Item = u32>, cofinite_from: Option<u32>) -> Self {
        let mut finite: BTreeSet<u32> = finite.into_iter().collect();
        if let Some(t) = cofinite_from {
            finite.retain(|&j| j < t);
        }
        MultiplicitySet {
            finite,
            cofinite_from,
        }
    }

    pub fn finite(values: impl IntoIterator<Item = u32>) -> Self {
        Self::new(values, None)
    }

    /// All of N.
    pub fn naturals() -> Self {
        Self::new([], Some(0))
    }

    pub fn finite_part(&self) -> &BTreeSet<u32> {
        &self.finite
    }

    pub fn cofinite_from(&self) -> Option<u32> {
        self.cofinite_from
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.cofinite_from.is_none()
    }

    pub fn contains(&self, j: u32) -> bool {
        self.finite.contains(&j) || self.cofinite_from.is_some_and(|t| j >= t)
    }

    /// Largest member, `None` when the set is cofinite or empty.
    pub fn max_finite(&self) -> Option<u32> {
        match self.cofinite_from {
            Some(_) => None,
            None => self.finite.last().copied(),
        }
    }

    pub fn min(&self) -> Option<u32> {
        match (self.finite.first(), self.cofinite_from) {
            (Some(&a), _) => Some(a),
            (None, t) => t,
        }
    }

    /// Members in increasing order, never exceeding `bound`.
    pub fn members_upto(&self, bound: u32) -> impl Iterator<Item = u32> + '_ {
        (0..=bound).filter(move |&j| self.contains(j))
    }

    /// The indicator bits `x_0..x_upto` (or `y_0..y_upto`).
    pub fn indicators(&self, upto: u32) -> Vec<u8> {
        (0..=upto).map(|j| u8::from(self.contains(j))).collect()
    }

    pub fn indicator(&self, j: u32) -> u8 {
        u8::from(self.contains(j))
    }

    pub fn union(&self, other: &MultiplicitySet) -> MultiplicitySet {
        let tail = match (self.cofinite_from, other.cofinite_from) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        MultiplicitySet::new(self.finite.iter().chain(&other.finite).copied(), tail)
    }

    pub fn intersect_upto(&self, bound: u32) -> MultiplicitySet {
        MultiplicitySet::finite(self.members_upto(bound))
    }

    /// Subtract `shift` from every member; members below `shift` are dropped.
    pub fn shifted_down(&self, shift: u32) -> MultiplicitySet {
        MultiplicitySet::new(
            self.finite.iter().filter(|&&j| j >= shift).map(|j| j - shift),
            self.cofinite_from.map(|t| t.saturating_sub(shift)),
        )
    }

    /// The two smallest members.
    fn smallest_two(&self) -> Option<(u32, u32)> {
        let first = self.min()?;
        let second = if self.contains(first + 1) {
            first + 1
        } else {
            let next_finite = self.finite.range(first + 1..).next().copied();
            match (next_finite, self.cofinite_from) {
                (Some(a), Some(t)) => a.min(t.max(first + 1)),
                (Some(a), None) => a,
                (None, Some(t)) => t.max(first + 1),
                (None, None) => return None,
            }
        };
        Some((first, second))
    }
}

impl fmt::Display for MultiplicitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite.iter().map(u32::to_string).collect();
        if let Some(t) = self.cofinite_from {
            parts.push(format!("+{t}"));
        }
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MultiplicitySet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut finite = Vec::new();
        let mut tail = None;
        let items: Vec<&str> = s.split(',').map(str::trim).filter(|t| !t.is_empty()).collect();
        for (idx, item) in items.iter().enumerate() {
            if let Some(rest) = item.strip_prefix('+') {
                if idx + 1 != items.len() {
                    return Err(Error::Parse(format!("cofinite tail must come last in {s:?}")));
                }
                tail = Some(
                    rest.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("{item:?}: {e}")))?,
                );
            } else {
                finite.push(
                    item.parse::<u32>()
                        .map_err(|e| Error::Parse(format!("{item:?}: {e}")))?,
                );
            }
        }
        Ok(MultiplicitySet::new(finite, tail))
    }
}

impl Serialize for MultiplicitySet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MultiplicitySet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A degree sequence with its cached exact moments.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    total: u64,
    /// `M_1 ..= M_6`.
    moments: Vec<BigUint>,
    kmax: u32,
    kbar: BigRational,
    mu2: BigRational,
    mu3: BigRational,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Self {
        let total: u64 = degrees.iter().map(|&k| u64::from(k)).sum();
        let moments = (1..=6)
            .map(|r| degrees.iter().map(|&k| falling(u64::from(k), r)).sum())
            .collect();
        let kmax = degrees.iter().copied().max().unwrap_or(0);
        let n = degrees.len().max(1);
        let kbar = ratio(total, n as u64);
        let central = |r: i32| -> BigRational {
            if total == 0 {
                return BigRational::zero();
            }
            let s: BigRational = degrees
                .iter()
                .map(|&k| num_traits::pow::pow(ratio(k, 1) - &kbar, r as usize))
                .sum();
            s / ratio(total, 1)
        };
        let mu2 = central(2);
        let mu3 = central(3);
        DegreeSequence {
            degrees,
            total,
            moments,
            kmax,
            kbar,
            mu2,
            mu3,
        }
    }

    pub fn regular(k: u32, n: usize) -> Self {
        Self::new(vec![k; n])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// `M`, the sum of degrees.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `M_r = sum_i [k_i]_r` for `1 <= r <= 6`.
    pub fn moment(&self, r: usize) -> &BigUint {
        assert!((1..=6).contains(&r), "moment order {r} out of range");
        &self.moments[r - 1]
    }

    pub fn moment_f64(&self, r: usize) -> f64 {
        self.moment(r).to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn kmax(&self) -> u32 {
        self.kmax
    }

    pub fn kbar(&self) -> &BigRational {
        &self.kbar
    }

    pub fn mu2(&self) -> &BigRational {
        &self.mu2
    }

    pub fn mu3(&self) -> &BigRational {
        &self.mu3
    }

    pub fn is_regular(&self) -> bool {
        self.degrees.windows(2).all(|w| w[0] == w[1])
    }

    pub fn check_even(&self) -> Result<()> {
        if self.total % 2 == 1 {
            Err(Error::OddTotalDegree { total: self.total })
        } else {
            Ok(())
        }
    }
}

impl FromStr for DegreeSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let degrees = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DegreeSequence::new(degrees))
    }
}

/// `compute_moments`: build a degree sequence with every cached moment filled.
pub fn compute_moments(degrees: &[u32]) -> DegreeSequence {
    DegreeSequence::new(degrees.to_vec())
}

/// Symmetric multiplicity matrix. `mult[i][i]` is the loop multiplicity at `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    mult: Vec<Vec<u32>>,
}

impl Multigraph {
    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            mult: vec![vec![0; n]; n],
        }
    }

    pub fn from_matrix(mult: Vec<Vec<u32>>) -> Result<Self> {
        let n = mult.len();
        for (i, row) in mult.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("row {i} has length {}", row.len())));
            }
            for j in 0..n {
                if row[j] != mult[j][i] {
                    return Err(Error::InvalidInput(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Multigraph { n, mult })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.mult
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.mult[i][j]
    }

    pub fn loop_mult(&self, i: usize) -> u32 {
        self.mult[i][i]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.mult[i][j] = value;
        self.mult[j][i] = value;
    }

    pub fn degree(&self, i: usize) -> u32 {
        let row = &self.mult[i];
        2 * row[i] + row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).sum::<u32>()
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    /// Number of edges counted with multiplicity (loops once).
    pub fn edge_total(&self) -> u64 {
        let mut s = 0u64;
        for i in 0..self.n {
            for j in i..self.n {
                s += u64::from(self.mult[i][j]);
            }
        }
        s
    }

    /// Vertices joined to `v` by a link of multiplicity at least one.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| w != v && self.mult[v][w] > 0)
    }

    /// True when every loop lies in `jstar`, every link in `j`.
    pub fn respects(&self, j: &MultiplicitySet, jstar: &MultiplicitySet) -> bool {
        self.first_violation(j, jstar).is_none()
    }

    pub fn first_violation(
        &self,
        j: &MultiplicitySet,
        jstar: &MultiplicitySet,
    ) -> Option<(usize, usize, u32)> {
        for a in 0..self.n {
            if !jstar.contains(self.mult[a][a]) {
                return Some((a, a, self.mult[a][a]));
            }
            for b in a + 1..self.n {
                if !j.contains(self.mult[a][b]) {
                    return Some((a, b, self.mult[a][b]));
                }
            }
        }
        None
    }
}

/// Result of shifting `(k, J, J*)` so that `0,1 ∈ J'` and `0 ∈ J*'`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub degrees: DegreeSequence,
    pub j: MultiplicitySet,
    pub jstar: MultiplicitySet,
    /// Subtracted from each diagonal entry.
    pub loop_shift: u32,
    /// Subtracted from each off-diagonal entry.
    pub link_shift: u32,
}

pub fn reduce_support(
    k: &DegreeSequence,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
) -> Result<Reduction> {
    let s = jstar
        .min()
        .ok_or_else(|| Error::UnsupportedSupport("J* is empty".into()))?;
    let (t, t1) = j
        .smallest_two()
        .ok_or_else(|| Error::UnsupportedSupport("J has fewer than two elements".into()))?;
    if t1 != t + 1 {
        return Err(Error::UnsupportedSupport(format!(
            "smallest two elements of J are {t} and {t1}, not consecutive"
        )));
    }
    let n = k.n() as i64;
    let shift = 2 * i64::from(s) + (n - 1).max(0) * i64::from(t);
    let mut degrees = Vec::with_capacity(k.n());
    for (vertex, &deg) in k.degrees().iter().enumerate() {
        let d = i64::from(deg) - shift;
        if d < 0 {
            return Err(Error::InfeasibleShift { vertex });
        }
        degrees.push(d as u32);
    }
    Ok(Reduction {
        degrees: DegreeSequence::new(degrees),
        j: j.shifted_down(t),
        jstar: jstar.shifted_down(s),
        loop_shift: s,
        link_shift: t,
    })
}

/// Standing assumptions of the asymptotic formulas: even `M`, `0,1 ∈ J`,
/// `0 ∈ J*`.
pub fn validate(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<()> {
    k.check_even()?;
    let mut missing = Vec::new();
    if !j.contains(0) {
        missing.push("0 ∉ J");
    }
    if !j.contains(1) {
        missing.push("1 ∉ J");
    }
    if !jstar.contains(0) {
        missing.push("0 ∉ J*");
    }
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingSupport(missing.join(", ")))
    }
}

/// `sum_i (k_i - kbar)` computed exactly; zero for every sequence.
pub fn centred_sum(k: &DegreeSequence) -> BigRational {
    k.degrees()
        .iter()
        .map(|&d| BigRational::from_integer(BigInt::from(d)) - k.kbar())
        .sum()
}
