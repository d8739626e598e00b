//! Numeric backends.
//!
//! Everything in the belief calculus runs on exact [`Rational`]s. The closed-form
//! solvers are generic over [`Scalar`] so the same formulas can also be evaluated
//! in `f64` for very large populations, where exact powers become impractical.
//! A computation is carried out entirely in one backend: the type parameter fixes it.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Zero
    + One
{
    const BACKEND: Backend;

    fn from_u64(n: u64) -> Self;

    /// `self` raised to a non-negative integer power; `x^0 = 1` including `0^0`.
    fn powu(&self, exp: u64) -> Self;

    fn to_f64(&self) -> f64;

    /// Finite and, for exact values, always true.
    fn is_finite(&self) -> bool;

    fn half() -> Self {
        Self::one() / Self::from_u64(2)
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_u64(n: u64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn powu(&self, exp: u64) -> Self {
        let exp = usize::try_from(exp).expect("exponent fits in usize");
        num_traits::pow(self.clone(), exp)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_finite(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn powu(&self, exp: u64) -> Self {
        if exp == 0 {
            1.0
        } else if let Ok(e) = i32::try_from(exp) {
            // powi is exact enough for moderate exponents and handles 0^e.
            if e <= 64 {
                self.powi(e)
            } else {
                self.powf(exp as f64)
            }
        } else {
            self.powf(exp as f64)
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Shorthand for building exact constants in code and tests.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn is_negative(x: &Rational) -> bool {
    x.is_negative()
}

/// `x` as a decimal rounded to `sig` significant digits, trailing zeros trimmed.
pub fn decimal_string(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        let s = format!("{:.*e}", sig - 1, x);
        // trim mantissa zeros: 1.50000e-7 -> 1.5e-7
        if let Some((mant, exp)) = s.split_once('e') {
            return format!("{}e{}", trim_zeros(mant), exp);
        }
        return s;
    }
    let decimals = (sig as i32 - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // rounding may carry into a new digit (9.999995 -> 10.00000); harmless after trimming
    trim_zeros(&s).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
