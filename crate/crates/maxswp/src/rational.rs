//! Exact rational arithmetic for welfare values.
//!
//! All solver logic compares welfare values exactly; several boundary cases
//! (for example diameter-3 trees with `(k, l) = (6, 2)`) sit precisely on
//! `phi = n/2`, so floating point is never used. Values are kept as reduced
//! `i64` fractions with all intermediate arithmetic widened to 128 bits;
//! when a result leaves the 64-bit range it is promoted to an arbitrary
//! precision fraction instead of wrapping or erroring. Values that shrink
//! back into range are demoted again, so the representation is canonical
//! and equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number, always stored reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct Rational(Repr);

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    /// Reduced fraction with `den > 0`, both components in `i64` range.
    Small(i64, i64),
    /// Reduced fraction that does not fit the small representation.
    Big(Box<BigRational>),
}

impl Rational {
    pub const ZERO: Rational = Rational(Repr::Small(0, 1));
    pub const ONE: Rational = Rational(Repr::Small(1, 1));

    /// Builds `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    /// Builds `num/den` from 128-bit parts, reducing and fixing the sign.
    pub fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "rational denominator must be nonzero");
        normalize(num, den)
    }

    pub fn from_int(value: i64) -> Self {
        Rational(Repr::Small(value, 1))
    }

    /// The unit fraction `1/den`. Panics if `den == 0`.
    pub fn recip_of(den: u64) -> Self {
        assert!(den != 0);
        Self::from_i128(1, den as i128)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.numer().is_negative(),
        }
    }

    /// True when the value has been promoted to arbitrary precision.
    pub fn is_promoted(&self) -> bool {
        matches!(self.0, Repr::Big(_))
    }

    pub fn numer_string(&self) -> String {
        match &self.0 {
            Repr::Small(n, _) => n.to_string(),
            Repr::Big(b) => b.numer().to_string(),
        }
    }

    pub fn denom_string(&self) -> String {
        match &self.0 {
            Repr::Small(_, d) => d.to_string(),
            Repr::Big(b) => b.denom().to_string(),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            // Already reduced with a positive denominator.
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    fn from_big(value: BigRational) -> Self {
        if let (Some(n), Some(d)) = (value.numer().to_i64(), value.denom().to_i64()) {
            Rational(Repr::Small(n, d))
        } else {
            Rational(Repr::Big(Box::new(value)))
        }
    }
}

/// Binary GCD; no 128-bit divisions, which dominate the solver hot path.
fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd_u64(a as u64, b as u64) as u128;
    }
    let (mut a, mut b) = (a, b);
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// GCD of i128 values that are never `i128::MIN` (they come from products of
/// i64-range factors), so the unsigned round trip is lossless.
fn gcd_i128(a: i128, b: i128) -> i128 {
    gcd_u128(a.unsigned_abs(), b.unsigned_abs()) as i128
}

/// Reduce and canonicalize a fraction whose parts fit in `i128`.
///
/// 128-bit division is a slow library call, so values in 64-bit range (the
/// overwhelmingly common case in the solvers) divide through u64 hardware.
fn normalize(num: i128, den: i128) -> Rational {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    if num == 0 {
        return Rational::ZERO;
    }
    let mag = num.unsigned_abs();
    if mag <= u64::MAX as u128 && den as u128 <= u64::MAX as u128 {
        let g = gcd_u64(mag as u64, den as u64);
        let n = (mag as u64 / g) as i128;
        let d = (den as u128 as u64 / g) as i128;
        return finish(if num < 0 { -n } else { n }, d);
    }
    let g = gcd_i128(num, den);
    finish(num / g, den / g)
}

/// Wraps an already-reduced fraction with a positive denominator.
fn finish(num: i128, den: i128) -> Rational {
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        Rational(Repr::Small(n, d))
    } else {
        Rational(Repr::Big(Box::new(BigRational::new_raw(
            BigInt::from(num),
            BigInt::from(den),
        ))))
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        // `BigRational` arithmetic keeps values reduced, but `new_raw` callers
        // may not; re-reduce defensively through `new`.
        let value = BigRational::new(value.numer().clone(), value.denom().clone());
        Rational::from_big(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_int(value)
    }
}

impl From<u32> for Rational {
    fn from(value: u32) -> Self {
        Rational::from_int(value as i64)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

/// Shared small-path sum core; `bn` is negated by the caller for subtraction.
fn sum_small(an: i64, ad: i64, bn: i64, bd: i64) -> Option<Rational> {
    if ad == bd {
        // Same denominator, the common case inside the tree DP.
        return Some(normalize(an as i128 + bn as i128, ad as i128));
    }
    // Denominators are positive i64s: the cross terms divide through u64.
    let g = gcd_u64(ad as u64, bd as u64);
    let bdg = (bd as u64 / g) as i128;
    let adg = (ad as u64 / g) as i128;
    // Each product of two i64-range factors fits in i128; only the final
    // sum can overflow, so that is the one checked step.
    let num = (an as i128 * bdg).checked_add(bn as i128 * adg)?;
    Some(normalize(num, ad as i128 * bdg))
}

fn add_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => sum_small(*an, *ad, *bn, *bd)
            .unwrap_or_else(|| Rational::from_big(a.to_big() + b.to_big())),
        _ => Rational::from_big(a.to_big() + b.to_big()),
    }
}

fn sub_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            let flipped = if *bn == i64::MIN {
                None
            } else {
                sum_small(*an, *ad, -bn, *bd)
            };
            flipped.unwrap_or_else(|| Rational::from_big(a.to_big() - b.to_big()))
        }
        _ => Rational::from_big(a.to_big() - b.to_big()),
    }
}

/// Divide out a gcd of i64-range values through u64 hardware division.
fn shrink_pair(a: i64, b: i64) -> (i128, i128) {
    let g = gcd_u64(a.unsigned_abs(), b.unsigned_abs());
    if g <= 1 {
        return (a as i128, b as i128);
    }
    let sa = (a.unsigned_abs() / g) as i128;
    let sb = (b.unsigned_abs() / g) as i128;
    (
        if a < 0 { -sa } else { sa },
        if b < 0 { -sb } else { sb },
    )
}

fn mul_impl(a: &Rational, b: &Rational) -> Rational {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            // Cross-reduce first so the products stay as small as possible.
            let (an, bd) = shrink_pair(*an, *bd);
            let (bn, ad) = shrink_pair(*bn, *ad);
            normalize(an * bn, ad * bd)
        }
        _ => Rational::from_big(a.to_big() * b.to_big()),
    }
}

fn div_impl(a: &Rational, b: &Rational) -> Rational {
    assert!(!b.is_zero(), "division by zero rational");
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            let (an, bn) = shrink_pair(*an, *bn);
            let (bd, ad) = shrink_pair(*bd, *ad);
            normalize(an * bd, ad * bn)
        }
        _ => Rational::from_big(a.to_big() / b.to_big()),
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $impl_fn(&self, &rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $impl_fn(&self, rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                $impl_fn(self, &rhs)
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                $impl_fn(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, add_impl);
impl_binop!(Sub, sub, sub_impl);
impl_binop!(Mul, mul, mul_impl);
impl_binop!(Div, div, div_impl);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = add_impl(self, rhs);
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = add_impl(self, &rhs);
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = sub_impl(self, rhs);
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = sub_impl(self, &rhs);
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => normalize(-(*n as i128), *d as i128),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                // i64 cross products always fit in i128, so this is exact.
                (*an as i128 * *bd as i128).cmp(&(*bn as i128 * *ad as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.denom() == &BigInt::from(1) {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalParts {
    num: String,
    den: String,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RationalParts {
            num: self.numer_string(),
            den: self.denom_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = RationalParts::deserialize(deserializer)?;
        let num: BigInt = parts
            .num
            .parse()
            .map_err(|_| D::Error::custom("invalid rational numerator"))?;
        let den: BigInt = parts
            .den
            .parse()
            .map_err(|_| D::Error::custom("invalid rational denominator"))?;
        if den.is_zero() {
            return Err(D::Error::custom("rational denominator is zero"));
        }
        Ok(Rational::from(BigRational::new(num, den)))
    }
}
