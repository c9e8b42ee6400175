//! Partial sums of ratio-defined sequences with certified envelopes.
//!
//! Both procedures refuse inputs outside the stated hypotheses. The
//! envelopes are computed in `f64` and then widened outward by
//! [`WIDEN`] (relative) so that rounding cannot make them unsound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::falling;
use crate::error::{Error, Result};

use num_traits::ToPrimitive;

pub const WIDEN: f64 = 1e-12;

const E: f64 = std::f64::consts::E;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub sum: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl Envelope {
    pub fn contains_sum(&self) -> bool {
        self.sigma1 <= self.sum && self.sum <= self.sigma2
    }
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    (lo - WIDEN * lo.abs() - f64::MIN_POSITIVE, hi + WIDEN * hi.abs() + f64::MIN_POSITIVE)
}

fn violation(msg: String) -> Error {
    Error::PreconditionViolation(msg)
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `n_i = (1/i) A(i) (1 − (i−1) B(i)) (1 + δ_i) n_{i−1}` with vectors
/// indexed from `i = 1`; `gamma[j]` for `0 ≤ j ≤ K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spec41 {
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// `n_i = (1/i) (A(i) − (i−1) C(i)) n_{i−1}` with vectors indexed from `i = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spec42 {
    pub n: usize,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub c_hat: f64,
}

impl Spec41 {
    pub fn from_fns(
        n: usize,
        k: usize,
        c: f64,
        a: impl Fn(usize) -> f64,
        b: impl Fn(usize) -> f64,
        delta: impl Fn(usize) -> f64,
        gamma: Vec<f64>,
    ) -> Self {
        Spec41 {
            n,
            k,
            c,
            a: (1..=n).map(&a).collect(),
            b: (1..=n).map(&b).collect(),
            delta: (1..=n).map(&delta).collect(),
            gamma,
        }
    }

    /// `Σ_j γ_j [i]_j`.
    fn gamma_bound(&self, i: usize) -> f64 {
        self.gamma
            .iter()
            .enumerate()
            .map(|(j, &g)| g * falling(i as u64, j as u32).to_f64().unwrap_or(f64::INFINITY))
            .sum()
    }

    pub fn check(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(violation(format!("N = {n} < 2")));
        }
        if self.k > n {
            return Err(violation(format!("K = {} > N = {n}", self.k)));
        }
        for (name, len) in [("A", self.a.len()), ("B", self.b.len()), ("delta", self.delta.len())] {
            if len != n {
                return Err(violation(format!("{name} has {len} values, expected N = {n}")));
            }
        }
        if self.gamma.len() != self.k + 1 {
            return Err(violation(format!("gamma has {} values, expected K + 1", self.gamma.len())));
        }
        if self.gamma.iter().any(|&g| !(g >= 0.0)) {
            return Err(violation("some gamma_j < 0".into()));
        }
        if !(self.c > 2.0 * E) {
            return Err(violation(format!("c = {} is not > 2e", self.c)));
        }
        let (a1, a2) = min_max(&self.a);
        let (b1, b2) = min_max(&self.b);
        if !(a1 >= 0.0) {
            return Err(violation(format!("A_1 = {a1} < 0")));
        }
        if !(a2 * self.c < (n - self.k + 1) as f64) {
            return Err(violation(format!(
                "A_2 c = {} is not < N - K + 1 = {}",
                a2 * self.c,
                n - self.k + 1
            )));
        }
        if !(b1.abs().max(b2.abs()) * (n as f64) < 1.0) {
            return Err(violation(format!("|B N| >= 1 (B in [{b1}, {b2}])")));
        }
        let mut cumulative = 0.0;
        for i in 1..=n {
            cumulative += self.delta[i - 1].abs();
            let g = self.gamma_bound(i);
            if !(cumulative <= g) {
                return Err(violation(format!(
                    "sum of |delta_j| up to {i} is {cumulative} > {g}"
                )));
            }
            if !(g < 0.2) {
                return Err(violation(format!("sum gamma_j [{i}]_j = {g} is not < 1/5")));
            }
        }
        Ok(())
    }
}

impl Spec42 {
    pub fn from_fns(n: usize, c_hat: f64, a: impl Fn(usize) -> f64, c: impl Fn(usize) -> f64) -> Self {
        Spec42 {
            n,
            a: (1..=n).map(&a).collect(),
            c: (1..=n).map(&c).collect(),
            c_hat,
        }
    }

    pub fn check(&self) -> Result<()> {
        let n = self.n;
        if n < 2 {
            return Err(violation(format!("N = {n} < 2")));
        }
        for (name, len) in [("A", self.a.len()), ("C", self.c.len())] {
            if len != n {
                return Err(violation(format!("{name} has {len} values, expected N = {n}")));
            }
        }
        if !(self.c_hat > 0.0 && self.c_hat < 1.0 / 3.0) {
            return Err(violation(format!("c_hat = {} is not in (0, 1/3)", self.c_hat)));
        }
        for i in 1..=n {
            let (a, c) = (self.a[i - 1], self.c[i - 1]);
            if !(a >= 0.0) {
                return Err(violation(format!("A({i}) = {a} < 0")));
            }
            if !(a - (i - 1) as f64 * c >= 0.0) {
                return Err(violation(format!("A({i}) - ({i}-1) C({i}) < 0")));
            }
        }
        let (_, a2) = min_max(&self.a);
        let (c1, c2) = min_max(&self.c);
        if !(a2 / n as f64 <= self.c_hat) {
            return Err(violation(format!("A_2 / N = {} exceeds c_hat", a2 / n as f64)));
        }
        if !(c1.abs().max(c2.abs()) <= self.c_hat) {
            return Err(violation(format!("|C| up to {} exceeds c_hat", c1.abs().max(c2.abs()))));
        }
        Ok(())
    }
}

pub fn sum_with_bounds_41(spec: &Spec41) -> Result<Envelope> {
    spec.check()?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..=spec.n {
        let (a, b, d) = (spec.a[i - 1], spec.b[i - 1], spec.delta[i - 1]);
        term *= a * (1.0 - (i - 1) as f64 * b) * (1.0 + d) / i as f64;
        sum += term;
    }
    let (a1, a2) = min_max(&spec.a);
    let (b1, b2) = min_max(&spec.b);
    let gamma_sum = |x: f64| -> f64 {
        spec.gamma
            .iter()
            .enumerate()
            .map(|(j, &g)| g * (3.0 * x).powi(j as i32))
            .sum()
    };
    let tail = 0.25 * (2.0 * E / spec.c).powi(spec.n as i32);
    let s1 = (a1 - 0.5 * a1 * a1 * b2 - 4.0 * gamma_sum(a1)).exp() - tail;
    let s2 = (a2 - 0.5 * a2 * a2 * b1 + 0.5 * a2.powi(3) * b1 * b1 + 4.0 * gamma_sum(a2)).exp() + tail;
    let (sigma1, sigma2) = widen(s1, s2);
    Ok(Envelope { sum, sigma1, sigma2 })
}

pub fn sum_with_bounds_42(spec: &Spec42) -> Result<Envelope> {
    spec.check()?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..=spec.n {
        let (a, c) = (spec.a[i - 1], spec.c[i - 1]);
        term *= (a - (i - 1) as f64 * c) / i as f64;
        sum += term;
    }
    let (a1, a2) = min_max(&spec.a);
    let (c1, c2) = min_max(&spec.c);
    let tail = (2.0 * E * spec.c_hat).powi(spec.n as i32);
    let s1 = (a1 - 0.5 * a1 * c2).exp() - tail;
    let s2 = (a2 - 0.5 * a2 * c1 + 0.5 * a2 * c1 * c1).exp() + tail;
    let (sigma1, sigma2) = widen(s1, s2);
    Ok(Envelope { sum, sigma1, sigma2 })
}

/// A random specification satisfying every hypothesis of
/// [`sum_with_bounds_41`].
pub fn random_spec_41<R: Rng + ?Sized>(rng: &mut R) -> Spec41 {
    let n = rng.random_range(2..=60usize);
    let k = rng.random_range(0..=n.min(3));
    let c = 2.0 * E * rng.random_range(1.01..4.0);
    let a2 = rng.random_range(0.0..0.999) * (n - k + 1) as f64 / c;
    let a1 = rng.random_range(0.0..=a2);
    let b_cap = 0.999 / n as f64;
    let (mut b1, mut b2) = (rng.random_range(-b_cap..b_cap), rng.random_range(-b_cap..b_cap));
    if b1 > b2 {
        std::mem::swap(&mut b1, &mut b2);
    }
    let raw: Vec<f64> = (0..=k)
        .map(|_| if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.0..1.0) })
        .collect();
    let mut spec = Spec41 {
        n,
        k,
        c,
        a: (0..n).map(|_| rng.random_range(a1..=a2)).collect(),
        b: (0..n).map(|_| rng.random_range(b1..=b2)).collect(),
        delta: vec![0.0; n],
        gamma: raw.clone(),
    };
    let scale = spec.gamma_bound(n);
    let target = rng.random_range(0.0..0.199);
    spec.gamma = if scale > 0.0 {
        raw.iter().map(|g| g * target / scale).collect()
    } else {
        raw
    };
    // |δ_i| ≤ g(i) − g(i−1) keeps the running sum of |δ| below g(i).
    let mut prev = spec.gamma_bound(0);
    for i in 1..=n {
        let g = spec.gamma_bound(i);
        let room = (g - prev).max(0.0) * (1.0 - 1e-9);
        spec.delta[i - 1] = rng.random_range(-1.0..=1.0) * room;
        prev = g;
    }
    spec
}

/// A random specification satisfying every hypothesis of
/// [`sum_with_bounds_42`].
pub fn random_spec_42<R: Rng + ?Sized>(rng: &mut R) -> Spec42 {
    let n = rng.random_range(2..=60usize);
    let c_hat = rng.random_range(0.001..1.0 / 3.0);
    let a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=c_hat * n as f64)).collect();
    let c = (1..=n)
        .map(|i| {
            let x = rng.random_range(-c_hat..=c_hat);
            if i > 1 {
                x.min(a[i - 1] / (i - 1) as f64 * (1.0 - 1e-12))
            } else {
                x
            }
        })
        .collect();
    Spec42 { n, a, c, c_hat }
}
