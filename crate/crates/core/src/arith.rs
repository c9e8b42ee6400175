//! Exact integer helpers shared by every module: factorials, falling
//! factorials, integer roots and logarithms of big numbers.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(x: u64) -> BigUint {
    (2..=x).fold(BigUint::one(), |acc, i| acc * i)
}

/// `[a]_r = a (a-1) ... (a-r+1)`, zero once `r > a`.
pub fn falling(a: u64, r: u32) -> BigUint {
    if u64::from(r) > a {
        return BigUint::zero();
    }
    (0..u64::from(r)).fold(BigUint::one(), |acc, i| acc * (a - i))
}

/// `(m-1)!! = m! / ((m/2)! 2^{m/2})` for even `m`.
pub fn odd_double_factorial(m: u64) -> BigUint {
    debug_assert!(m.is_multiple_of(2));
    (1..m).step_by(2).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Natural log of a positive big integer without overflowing `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::INFINITY, f64::ln);
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    let (num, den) = (x.numer(), x.denom());
    assert!(
        num > &BigInt::zero() && den > &BigInt::zero(),
        "log of non-positive rational"
    );
    ln_biguint(num.magnitude()) - ln_biguint(den.magnitude())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let sign = if x.numer() < &BigInt::zero() { -1.0 } else { 1.0 };
    let mag = (ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())).exp();
    sign * mag
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn to_rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Smallest integer `>= x` for a nonnegative rational.
pub fn ceil_rational(x: &BigRational) -> BigUint {
    let c = x.ceil().to_integer();
    c.to_biguint().unwrap_or_default()
}

/// `ceil(x^(1/n))` exactly.
pub fn ceil_root(x: &BigUint, n: u32) -> BigUint {
    let r = x.nth_root(n);
    if r.pow(n) < *x {
        r + 1u32
    } else {
        r
    }
}

/// `ceil(sqrt(x))` for machine integers.
pub fn ceil_sqrt(x: u128) -> u128 {
    let r = x.sqrt();
    if r * r < x {
        r + 1
    } else {
        r
    }
}

/// `ceil(x / 2)`.
pub fn half_up(x: u64) -> u64 {
    x.div_ceil(2)
}
