//! The independent-entry random matrix model: entries on and above the
//! diagonal are independent, off-diagonal entries take `j ∈ J` with
//! probability `p^j / J(1)` and diagonal entries `b ∈ J*` with probability
//! `p^b / J*(1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::rational_to_f64;
use crate::asymptotic::Estimate;
use crate::degree::{validate, DegreeSequence, Multigraph, MultiplicitySet};
use crate::error::{Error, Result};

/// Relative size below which a tail term `p^j` is dropped.
pub const TAIL_EPS: f64 = 1e-30;

/// Power series truncated after `z^cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    pub fn new(mut coeffs: Vec<f64>, cap: usize) -> Self {
        coeffs.resize(cap + 1, 0.0);
        TruncatedSeries { coeffs }
    }

    pub fn one(cap: usize) -> Self {
        Self::new(vec![1.0], cap)
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        let mut out = vec![0.0; cap + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.cap());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `s(z²)`, still truncated at `cap`.
    pub fn substitute_square(&self) -> Self {
        let mut out = vec![0.0; self.coeffs.len()];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if 2 * i < out.len() {
                out[2 * i] = c;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PMode {
    SolvedExact,
    AsymptoticPdef,
    /// Supplied by the caller.
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NaiveParams {
    pub p: f64,
    pub p_mode: PMode,
    /// Largest multiplicity kept from a cofinite tail, if any.
    pub tail_cut: Option<u32>,
}

impl NaiveParams {
    pub fn fixed(p: f64) -> Self {
        NaiveParams {
            p,
            p_mode: PMode::Fixed,
            tail_cut: None,
        }
    }
}

/// The members of `set` carrying weight `p^j`, with cofinite tails cut once
/// `p^j` falls below `TAIL_EPS` times the running sum.
pub fn support(set: &MultiplicitySet, p: f64) -> (Vec<u32>, Option<u32>) {
    let mut out: Vec<u32> = set.finite_part().iter().copied().collect();
    let Some(t) = set.cofinite_from() else {
        return (out, None);
    };
    let mut partial: f64 = out.iter().map(|&j| p.powi(j as i32)).sum();
    let mut j = t;
    loop {
        let w = p.powi(j as i32);
        if !out.contains(&j) {
            out.push(j);
            partial += w;
        }
        if w < TAIL_EPS * partial || w == 0.0 || j == u32::MAX {
            break;
        }
        j += 1;
    }
    out.sort_unstable();
    out.dedup();
    (out, Some(j))
}

/// `(Σ p^j, Σ j p^j)` over the truncated support.
fn weight_sums(set: &MultiplicitySet, p: f64) -> (f64, f64, Option<u32>) {
    let (sup, cut) = support(set, p);
    let (mut s0, mut s1) = (0.0, 0.0);
    for j in sup {
        let w = p.powi(j as i32);
        s0 += w;
        s1 += f64::from(j) * w;
    }
    (s0, s1, cut)
}

/// `2·E[a_ii] + (n−1)·E[a_ij]`.
pub fn expected_row_sum(p: f64, n: usize, j: &MultiplicitySet, jstar: &MultiplicitySet) -> f64 {
    let (a0, a1, _) = weight_sums(j, p);
    let (b0, b1, _) = weight_sums(jstar, p);
    2.0 * b1 / b0 + (n as f64 - 1.0) * a1 / a0
}

fn tail_cut(p: f64, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Option<u32> {
    let a = support(j, p).1;
    let b = support(jstar, p).1;
    a.max(b)
}

fn mean(set: &MultiplicitySet) -> f64 {
    let f = set.finite_part();
    f.iter().map(|&j| f64::from(j)).sum::<f64>() / f.len() as f64
}

pub fn solve_p0(kbar: f64, n: usize, j: &MultiplicitySet, jstar: &MultiplicitySet, mode: PMode) -> Result<NaiveParams> {
    let unachievable = || Error::Unachievable { kbar };
    if !(kbar > 0.0) || j.is_empty() || jstar.is_empty() {
        return Err(unachievable());
    }
    let p = match mode {
        PMode::Fixed => return Err(Error::InvalidInput("a fixed p is not solved for".into())),
        PMode::AsymptoticPdef => {
            let nf = n as f64;
            let x2 = f64::from(j.indicator(2));
            let p = kbar / nf + (1.0 - 2.0 * x2) * kbar * kbar / (nf * nf);
            if !(p > 0.0 && p < 1.0) {
                return Err(unachievable());
            }
            p
        }
        PMode::SolvedExact => {
            // Limits of the row-sum mean as p → 0 and p → 1.
            let lo = 2.0 * f64::from(jstar.min().unwrap_or(0)) + (n as f64 - 1.0) * f64::from(j.min().unwrap_or(0));
            let hi = if j.cofinite_from().is_some() || jstar.cofinite_from().is_some() {
                f64::INFINITY
            } else {
                2.0 * mean(jstar) + (n as f64 - 1.0) * mean(j)
            };
            if kbar <= lo || kbar >= hi {
                return Err(unachievable());
            }
            let f = |p: f64| expected_row_sum(p, n, j, jstar) - kbar;
            let (mut a, mut b) = (0.0_f64, 1.0_f64);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if f(mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let p = if f(a).abs() <= f(b).abs() { a } else { b };
            if !(p > 0.0 && p < 1.0) {
                return Err(unachievable());
            }
            p
        }
    };
    Ok(NaiveParams {
        p,
        p_mode: mode,
        tail_cut: tail_cut(p, j, jstar),
    })
}

/// `Σ_{j ∈ set, j ≤ cap} p^j z^j / norm`.
fn normalised_series(set: &MultiplicitySet, p: f64, cap: usize, norm: f64) -> TruncatedSeries {
    let mut c = vec![0.0; cap + 1];
    for j in set.members_upto(cap as u32) {
        c[j as usize] = p.powi(j as i32) / norm;
    }
    TruncatedSeries::new(c, cap)
}

/// `G_p = p^{−M/2} J(1)^{−C(n,2)} ∏_i [z^{k_i}] J(z)^{n−1} J*(z²)`, evaluated
/// as `C(n,2) ln J(1) + n ln J*(1) − (M/2) ln p + Σ ln [z^{k_i}] f^{n−1} g(z²)`
/// with `f = J/J(1)` and `g = J*/J*(1)`.
pub fn g_naive(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet, params: &NaiveParams) -> Result<Estimate> {
    validate(k, j, jstar)?;
    let p = params.p;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!("p = {p} is outside (0,1)")));
    }
    let n = k.n();
    let cap = k.kmax() as usize;
    let (j1, _, _) = weight_sums(j, p);
    let (js1, _, _) = weight_sums(jstar, p);
    let f = normalised_series(j, p, cap, j1);
    let g = normalised_series(jstar, p, cap, js1).substitute_square();
    let h = f.pow(n.saturating_sub(1) as u64).mul(&g);
    let mut coeff_log = 0.0;
    for (v, &d) in k.degrees().iter().enumerate() {
        let c = h.coeff(d as usize);
        if !(c > 0.0) {
            return Err(Error::ZeroCoefficient { vertex: v + 1 });
        }
        coeff_log += c.ln();
    }
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let half_m = k.total() as f64 / 2.0;
    Ok(Estimate::new(
        None,
        0.0,
        vec![
            ("link_normaliser", pairs * j1.ln()),
            ("loop_normaliser", n as f64 * js1.ln()),
            ("p_power", -half_m * p.ln()),
            ("coefficients", coeff_log),
        ],
        crate::asymptotic::error_scale(k),
    ))
}

/// `p^{M/2} / (J(1)^{C(n,2)} J*(1)^n)`.
pub fn probability_of_matrix(a: &Multigraph, p: f64, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<f64> {
    log_probability_of_matrix(a, p, j, jstar).map(f64::exp)
}

pub fn log_probability_of_matrix(a: &Multigraph, p: f64, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<f64> {
    let n = a.n();
    let mut half_m: u64 = 0;
    for i in 0..n {
        for c in i..n {
            let v = a.get(i, c);
            let ok = if i == c { jstar.contains(v) } else { j.contains(v) };
            if !ok {
                return Err(Error::UnsupportedEntry {
                    i: i + 1,
                    j: c + 1,
                    value: v,
                });
            }
            half_m += u64::from(v);
        }
    }
    let (j1, _, _) = weight_sums(j, p);
    let (js1, _, _) = weight_sums(jstar, p);
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    Ok(half_m as f64 * p.ln() - pairs * j1.ln() - n as f64 * js1.ln())
}

fn draw<R: Rng + ?Sized>(rng: &mut R, sup: &[u32], weights: &[f64], total: f64) -> u32 {
    let mut u = rng.random::<f64>() * total;
    for (&j, &w) in sup.iter().zip(weights) {
        if u < w {
            return j;
        }
        u -= w;
    }
    *sup.last().expect("non-empty support")
}

pub fn sample_matrix(n: usize, p: f64, j: &MultiplicitySet, jstar: &MultiplicitySet, seed: u64) -> Result<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_matrix_with(n, p, j, jstar, &mut rng)
}

pub fn sample_matrix_with<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
    rng: &mut R,
) -> Result<Multigraph> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidInput(format!("p = {p} is outside (0,1)")));
    }
    if j.is_empty() || jstar.is_empty() {
        return Err(Error::InvalidInput("empty multiplicity set".into()));
    }
    let law = |set: &MultiplicitySet| {
        let (sup, _) = support(set, p);
        let w: Vec<f64> = sup.iter().map(|&x| p.powi(x as i32)).collect();
        let t = w.iter().sum::<f64>();
        (sup, w, t)
    };
    let (ls, lw, lt) = law(j);
    let (ds, dw, dt) = law(jstar);
    let mut g = Multigraph::empty(n);
    for a in 0..n {
        g.set(a, a, draw(rng, &ds, &dw, dt));
        for b in a + 1..n {
            g.set(a, b, draw(rng, &ls, &lw, lt));
        }
    }
    Ok(g)
}

/// `√2 · exp(¼(1 + 2x₂))`.
pub fn magic_factor(x2: u8) -> f64 {
    std::f64::consts::SQRT_2 * (0.25 * (1.0 + 2.0 * f64::from(x2))).exp()
}

fn mus(k: &DegreeSequence) -> (f64, f64) {
    (rational_to_f64(k.mu2()), rational_to_f64(k.mu3()))
}

fn g_naive_at_p0(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<Estimate> {
    validate(k, j, jstar)?;
    let kbar = rational_to_f64(k.kbar());
    let params = solve_p0(kbar, k.n(), j, jstar, PMode::SolvedExact)?;
    g_naive(k, j, jstar, &params)
}

fn with_terms(base: Estimate, extra: Vec<(&str, f64)>) -> Estimate {
    let mut terms: Vec<(String, f64)> = base.exponent_terms.iter().map(|t| (t.name.clone(), t.value)).collect();
    terms.extend(extra.into_iter().map(|(n, v)| (n.to_string(), v)));
    let named: Vec<(&str, f64)> = terms.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    Estimate::new(None, base.log_leading, named, base.error_scale)
}

/// `√2 · G_naive · exp(¼(1−μ₂)(1+2x₂+μ₂(1−2x₂)) + …)` with the full set of
/// `1/n`, `1/M` and `M/n²` corrections, `G_naive` taken at `p₀`.
pub fn theorem5_prediction(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<Estimate> {
    let base = g_naive_at_p0(k, j, jstar)?;
    let (m2, m3) = mus(k);
    let x2 = f64::from(j.indicator(2));
    let x3 = f64::from(j.indicator(3));
    let n = k.n() as f64;
    let m = k.total() as f64;
    let extra = vec![
        ("sqrt2", 0.5 * std::f64::consts::LN_2),
        ("quarter", 0.25 * (1.0 - m2) * (1.0 + 2.0 * x2 + m2 * (1.0 - 2.0 * x2))),
        ("over_n", (6.0 * m2 * m3 * (x3 - x2) - m2.powi(3)) / (2.0 * n)),
        (
            "over_m",
            (3.0 * m2 * m2 * (m2 * m2 - 2.0 * m3) + 2.0 * m3 * m3 * (3.0 * x3 - 3.0 * x2 + 1.0)) / (12.0 * m),
        ),
        ("m_over_n2", m2 * m2 * m * (9.0 * x3 - 9.0 * x2 - 1.0) / (2.0 * n * n)),
    ];
    Ok(with_terms(base, extra))
}

/// The simplified form `√2 · G_naive · exp(¼(1−μ₂)(1+2x₂+μ₂(1−2x₂)))`.
pub fn naive_corollary_prediction(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<Estimate> {
    let base = g_naive_at_p0(k, j, jstar)?;
    let (m2, _) = mus(k);
    let x2 = f64::from(j.indicator(2));
    let extra = vec![
        ("sqrt2", 0.5 * std::f64::consts::LN_2),
        ("quarter", 0.25 * (1.0 - m2) * (1.0 + 2.0 * x2 + m2 * (1.0 - 2.0 * x2))),
    ];
    Ok(with_terms(base, extra))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> MultiplicitySet {
        s.parse().unwrap()
    }

    #[test]
    fn row_sum_closed_forms() {
        for p in [0.1, 0.5, 0.9] {
            let a = expected_row_sum(p, 10, &set("0,1"), &set("0"));
            assert!((a - 9.0 * p / (1.0 + p)).abs() < 1e-14);
            let b = expected_row_sum(p, 10, &set("0,1"), &set("0,1"));
            assert!((b - a - 2.0 * p / (1.0 + p)).abs() < 1e-14);
        }
        assert!(expected_row_sum(1e-300, 10, &set("0,1"), &set("0")) < 1e-290);
        // Geometric: Σ_{j≥0} j p^j / Σ p^j = p/(1−p).
        let g = expected_row_sum(0.3, 2, &set("+0"), &set("0"));
        assert!((g - 0.3 / 0.7).abs() < 1e-14);
    }

    #[test]
    fn p0_examples() {
        let exact = solve_p0(3.0, 10, &set("0,1"), &set("0"), PMode::SolvedExact).unwrap();
        assert!((exact.p - 0.5).abs() < 1e-14);
        let asy = solve_p0(3.0, 10, &set("0,1"), &set("0"), PMode::AsymptoticPdef).unwrap();
        assert!((asy.p - 0.39).abs() < 1e-15);
        assert!(matches!(
            solve_p0(11.0, 10, &set("0,1"), &set("0"), PMode::SolvedExact),
            Err(Error::Unachievable { .. })
        ));
        let tail = solve_p0(3.0, 10, &set("0,1,+3"), &set("0"), PMode::SolvedExact).unwrap();
        assert!(tail.tail_cut.is_some());
    }

    #[test]
    fn g_naive_examples() {
        let half = NaiveParams::fixed(0.5);
        let k = DegreeSequence::new(vec![1, 1, 0]);
        let est = g_naive(&k, &set("0,1"), &set("0"), &half).unwrap();
        assert!((est.value() - 16.0 / 27.0).abs() < 1e-14);

        let cubic = DegreeSequence::regular(3, 10);
        let est = g_naive(&cubic, &set("0,1"), &set("0"), &half).unwrap();
        let closed = 15.0 * 0.5f64.ln() - 45.0 * 1.5f64.ln() + 10.0 * 84.0f64.ln();
        assert!((est.log_value - closed).abs() < 1e-12);
        assert!((est.value() / 6.355e6 - 1.0).abs() < 1e-3);

        let k = DegreeSequence::new(vec![3, 1]);
        assert!(matches!(
            g_naive(&k, &set("0,1"), &set("0"), &half),
            Err(Error::ZeroCoefficient { vertex: 1 })
        ));
    }

    #[test]
    fn matrix_probability_examples() {
        let p = 0.3;
        let empty = Multigraph::empty(4);
        let pr = probability_of_matrix(&empty, p, &set("0,1"), &set("0")).unwrap();
        assert!((pr - 1.3f64.powi(-6)).abs() < 1e-15);
        let mut a = Multigraph::empty(3);
        a.set(0, 1, 1);
        let mut b = Multigraph::empty(3);
        b.set(1, 2, 1);
        assert_eq!(
            probability_of_matrix(&a, p, &set("0,1"), &set("0")).unwrap(),
            probability_of_matrix(&b, p, &set("0,1"), &set("0")).unwrap()
        );
        a.set(0, 2, 2);
        assert!(matches!(
            probability_of_matrix(&a, p, &set("0,1"), &set("0")),
            Err(Error::UnsupportedEntry { i: 1, j: 3, value: 2 })
        ));
    }

    #[test]
    fn n2_probabilities_sum_to_one() {
        let (j, js) = (set("0,1,2,3"), set("0,1,2,3"));
        let mut total = 0.0;
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    let g = Multigraph::from_matrix(vec![vec![a, b], vec![b, c]]).unwrap();
                    total += probability_of_matrix(&g, 0.4, &j, &js).unwrap();
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sampler_is_seeded() {
        let a = sample_matrix(5, 0.3, &set("0,1,+3"), &set("0,1"), 9).unwrap();
        assert_eq!(a, sample_matrix(5, 0.3, &set("0,1,+3"), &set("0,1"), 9).unwrap());
        assert!(a.respects(&set("0,1,+3"), &set("0,1")));
    }

    #[test]
    fn magic_values() {
        assert!((magic_factor(0) - 1.8159).abs() < 1e-4);
        assert!((magic_factor(1) - 2.9938).abs() < 1e-4);
        let k = DegreeSequence::regular(3, 10);
        let t5 = theorem5_prediction(&k, &set("0,1"), &set("0")).unwrap();
        let gn = g_naive_at_p0(&k, &set("0,1"), &set("0")).unwrap();
        assert!((t5.log_value - gn.log_value - magic_factor(0).ln()).abs() < 1e-12);
    }
}
