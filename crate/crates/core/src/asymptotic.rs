//! Asymptotic formulas for `G(k, J, J*)`, each returned as an exact
//! leading term times `exp` of named correction terms.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{factorial, ln_rational, odd_double_factorial, ratio, rational_to_f64, to_rational};
use crate::degree::{validate, DegreeSequence, MultiplicitySet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

/// `log_value = log_leading + Σ exponent_terms`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub log_value: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub leading_term: Option<BigRational>,
    pub log_leading: f64,
    pub exponent_terms: Vec<Term>,
    #[serde(serialize_with = "ser_rational")]
    pub error_scale: BigRational,
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_rational<S: serde::Serializer>(x: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

impl Estimate {
    pub fn new(leading: Option<BigRational>, log_leading: f64, terms: Vec<(&str, f64)>, error_scale: BigRational) -> Self {
        let exponent_terms: Vec<Term> = terms
            .into_iter()
            .map(|(name, value)| Term {
                name: name.to_string(),
                value,
            })
            .collect();
        let exponent: f64 = exponent_terms.iter().map(|t| t.value).sum();
        Estimate {
            log_value: log_leading + exponent,
            leading_term: leading,
            log_leading,
            exponent_terms,
            error_scale,
        }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent_terms.iter().map(|t| t.value).sum()
    }

    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.exponent_terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn error_scale_f64(&self) -> f64 {
        rational_to_f64(&self.error_scale)
    }
}

pub(crate) fn int(x: &BigUint) -> BigRational {
    to_rational(x)
}

fn small(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `kmax³ / M`, or 0 when `M = 0`.
pub fn error_scale(k: &DegreeSequence) -> BigRational {
    if k.total() == 0 {
        return BigRational::zero();
    }
    ratio(u64::from(k.kmax()).pow(3), k.total())
}

/// The exact moment ratios used by every formula.
struct Ratios {
    m2_m: BigRational,
    m2sq_2m2: BigRational,
    m2_4_4m5: BigRational,
    m2sq_m3_2m4: BigRational,
    m3sq_2m3: BigRational,
}

impl Ratios {
    fn new(k: &DegreeSequence) -> Self {
        let m = small(k.total() as i64);
        let m2 = int(k.moment(2));
        let m3 = int(k.moment(3));
        let two = small(2);
        let four = small(4);
        Ratios {
            m2_m: &m2 / &m,
            m2sq_2m2: m2.pow(2) / (&two * m.pow(2)),
            m2_4_4m5: m2.pow(4) / (&four * m.pow(5)),
            m2sq_m3_2m4: m2.pow(2) * &m3 / (&two * m.pow(4)),
            m3sq_2m3: m3.pow(2) / (&two * m.pow(3)),
        }
    }
}

fn flags(j: &MultiplicitySet, jstar: &MultiplicitySet) -> (i64, i64, i64) {
    (
        i64::from(jstar.indicator(1)),
        i64::from(j.indicator(2)),
        i64::from(j.indicator(3)),
    )
}

fn need_positive_even(k: &DegreeSequence) -> Result<()> {
    k.check_even()?;
    if k.total() < 2 {
        return Err(Error::InvalidInput("the formulas need M >= 2".into()));
    }
    Ok(())
}

/// Above this many bits the leading term is left unreduced.
const REDUCE_BITS: u64 = 8192;

/// `(M−1)!! / ∏ k_i!`.
pub fn pairing_leading_term(k: &DegreeSequence) -> BigRational {
    let den: BigUint = k.degrees().iter().map(|&d| factorial(u64::from(d))).product();
    let num = odd_double_factorial(k.total());
    if num.bits() > REDUCE_BITS {
        BigRational::new_raw(num.into(), den.into())
    } else {
        int(&num) / int(&den)
    }
}

pub fn theorem1_estimate(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<Estimate> {
    validate(k, j, jstar)?;
    need_positive_even(k)?;
    let (y1, x2, x3) = flags(j, jstar);
    let r = Ratios::new(k);
    let half = ratio(1, 2);
    let third = ratio(1, 3);
    let terms = vec![
        ("loops", rational_to_f64(&((small(y1) - &half) * &r.m2_m))),
        ("doubles", rational_to_f64(&((small(x2) - &half) * &r.m2sq_2m2))),
        ("m2_fourth", rational_to_f64(&r.m2_4_4m5)),
        ("m2_sq_m3", -rational_to_f64(&r.m2sq_m3_2m4)),
        ("triples", rational_to_f64(&((small(x3 - x2) + third) * &r.m3sq_2m3))),
    ];
    let lead = pairing_leading_term(k);
    Ok(Estimate::new(Some(lead.clone()), ln_rational(&lead), terms, error_scale(k)))
}

/// `Q(k, n) = ¼(k−1)((−1)^{x₂}(k−1) + 2(−1)^{y₁}) + k³(6x₂ − 6x₃ + 1)/(12n)`.
pub fn corollary_q(kreg: u32, n: usize, j: &MultiplicitySet, jstar: &MultiplicitySet) -> BigRational {
    let (y1, x2, x3) = flags(j, jstar);
    let k = i64::from(kreg);
    let sign = |b: i64| if b == 1 { -1 } else { 1 };
    let first = ratio((k - 1) * (sign(x2) * (k - 1) + 2 * sign(y1)), 4);
    let second = ratio(k.pow(3) * (6 * x2 - 6 * x3 + 1), 12 * n as i64);
    first + second
}

pub fn corollary_regular_estimate(
    kreg: u32,
    n: usize,
    j: &MultiplicitySet,
    jstar: &MultiplicitySet,
) -> Result<Estimate> {
    let k = DegreeSequence::regular(kreg, n);
    validate(&k, j, jstar)?;
    need_positive_even(&k)?;
    let q = corollary_q(kreg, n, j, jstar);
    let lead = pairing_leading_term(&k);
    Ok(Estimate::new(
        Some(lead.clone()),
        ln_rational(&lead),
        vec![("minus_Q", -rational_to_f64(&q))],
        error_scale(&k),
    ))
}

/// Asymptotic number of pairings with no loops and no multiple pairs.
pub fn simple_pairing_asymptotic(k: &DegreeSequence) -> Result<Estimate> {
    need_positive_even(k)?;
    let r = Ratios::new(k);
    let half = ratio(1, 2);
    let terms = vec![
        ("loops", -rational_to_f64(&(&half * &r.m2_m))),
        ("doubles", -rational_to_f64(&(&half * &r.m2sq_2m2))),
        ("m2_sq_m3", -rational_to_f64(&r.m2sq_m3_2m4)),
        ("m2_fourth", rational_to_f64(&r.m2_4_4m5)),
        ("triples", rational_to_f64(&(ratio(1, 3) * &r.m3sq_2m3))),
    ];
    let lead = int(&odd_double_factorial(k.total()));
    Ok(Estimate::new(Some(lead.clone()), ln_rational(&lead), terms, error_scale(k)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrectionFactors {
    /// Summing over triple pairs: `M₃²/2M³`.
    pub triples: f64,
    /// Summing over simple loops: `M₂/M`.
    pub loops: f64,
    /// Summing over double pairs: `M₂²/2M² − M₃²/2M³`.
    pub doubles: f64,
    pub y1: u8,
    pub x2: u8,
    pub x3: u8,
    /// `y₁·loops + x₂·doubles + x₃·triples`.
    pub gated_sum: f64,
}

pub fn correction_factors(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<CorrectionFactors> {
    if k.total() < 2 {
        return Err(Error::InvalidInput("the formulas need M >= 2".into()));
    }
    let (y1, x2, x3) = flags(j, jstar);
    let r = Ratios::new(k);
    let doubles = &r.m2sq_2m2 - &r.m3sq_2m3;
    let gated = small(y1) * &r.m2_m + small(x2) * &doubles + small(x3) * &r.m3sq_2m3;
    Ok(CorrectionFactors {
        triples: rational_to_f64(&r.m3sq_2m3),
        loops: rational_to_f64(&r.m2_m),
        doubles: rational_to_f64(&doubles),
        y1: y1 as u8,
        x2: x2 as u8,
        x3: x3 as u8,
        gated_sum: rational_to_f64(&gated),
    })
}

/// `Σ ln k_i!`.
pub fn log_factorial_product(k: &DegreeSequence) -> f64 {
    let prod: BigUint = k.degrees().iter().map(|&d| factorial(u64::from(d))).product();
    ln_rational(&int(&prod))
}

/// `theorem1 − (simple_pairing − Σ ln k_i! + gated_sum)` in log space.
pub fn identity_residual(k: &DegreeSequence, j: &MultiplicitySet, jstar: &MultiplicitySet) -> Result<f64> {
    let t1 = theorem1_estimate(k, j, jstar)?;
    let sp = simple_pairing_asymptotic(k)?;
    let cf = correction_factors(k, j, jstar)?;
    Ok(t1.log_value - (sp.log_value - log_factorial_product(k) + cf.gated_sum))
}

pub fn ln(x: &BigRational) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else if x == &BigRational::one() {
        0.0
    } else {
        ln_rational(x)
    }
}
