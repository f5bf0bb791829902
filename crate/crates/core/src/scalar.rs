//! Coefficient fields: exact rationals, doubles, extended-precision dyadics and
//! the quadratic field Q(sqrt 3).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Common interface for the coefficient fields used throughout the crate.
///
/// Mixing fields is not possible through this trait; conversions go through
/// [`Field::from_rational`] and [`Field::to_f64`], both documented as
/// round-to-nearest where the target is inexact.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic in this field is exact.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// Image of a rational; round-to-nearest for inexact fields.
    fn from_rational(r: &Rational) -> Self;

    /// Nearest double.
    fn to_f64(&self) -> f64;

    /// Size used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        qi(n)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            let m = rational_to_f64(&self.abs());
            if m == 0.0 {
                f64::MIN_POSITIVE
            } else {
                m
            }
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Round-to-nearest conversion of a rational to a double (handles huge numerators
/// and denominators without overflowing to inf/NaN prematurely).
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer();
    let d = r.denom();
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    // Scale so the quotient carries 64 significant bits, then divide as integers.
    let shift = 64 - (nb - db);
    let (num, den) = if shift >= 0 {
        (n << (shift as usize), d.clone())
    } else {
        (n.clone(), d << ((-shift) as usize))
    };
    let quo = num.div_floor(&den);
    let mant = quo.to_f64().unwrap_or(f64::NAN);
    scale_pow2(mant, -shift)
}

/// `x * 2^e` without intermediate overflow of the power.
fn scale_pow2(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Exact rational value of a finite double.
pub fn f64_to_rational(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// Best rational approximation with denominator at most `max_den` (continued fractions).
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let neg = x < 0.0;
    let exact = f64_to_rational(x.abs());
    let max_den = BigInt::from(max_den);
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut rem = exact.clone();
    loop {
        let a = rem.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = &rem - Rational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rem = frac.recip();
    }
    let best = if q1.is_zero() {
        Rational::zero()
    } else {
        Rational::new(p1, q1)
    };
    if neg {
        -best
    } else {
        best
    }
}

/// Extended-precision real: a dyadic rational rounded to `bits` significant bits
/// after every operation.
#[derive(Clone, PartialEq)]
pub struct ExtFloat {
    value: Rational,
    bits: u32,
}

/// Minimum mantissa width accepted for extended arithmetic.
pub const MIN_EXT_BITS: u32 = 100;

impl ExtFloat {
    pub fn new(value: &Rational, bits: u32) -> Self {
        let bits = bits.max(MIN_EXT_BITS);
        ExtFloat {
            value: round_to_bits(value, bits),
            bits,
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn wrap(value: Rational, bits: u32) -> Self {
        ExtFloat {
            value: round_to_bits(&value, bits),
            bits,
        }
    }
}

/// Default precision used when an `ExtFloat` is created from an integer literal.
pub const DEFAULT_EXT_BITS: u32 = 200;

/// Round a rational to the nearest dyadic with `bits` significant bits.
pub fn round_to_bits(v: &Rational, bits: u32) -> Rational {
    if v.is_zero() {
        return Rational::zero();
    }
    let n = v.numer().abs();
    let d = v.denom();
    // floor(log2 |v|) is nb - db or nb - db - 1.
    let e = n.bits() as i64 - d.bits() as i64;
    let shift = bits as i64 - e;
    let scaled = if shift >= 0 {
        Rational::new(n << (shift as usize), d.clone())
    } else {
        Rational::new(n, d << ((-shift) as usize))
    };
    let rounded = scaled.round().to_integer();
    let mag = if shift >= 0 {
        Rational::new(rounded, BigInt::one() << (shift as usize))
    } else {
        Rational::from_integer(rounded << ((-shift) as usize))
    };
    if v.numer().sign() == Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl fmt::Debug for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}[{}b]", rational_to_f64(&self.value), self.bits)
    }
}

macro_rules! ext_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for ExtFloat {
            type Output = ExtFloat;
            fn $m(self, rhs: ExtFloat) -> ExtFloat {
                let bits = self.bits.max(rhs.bits);
                ExtFloat::wrap(self.value $op rhs.value, bits)
            }
        }
    };
}
ext_binop!(Add, add, +);
ext_binop!(Sub, sub, -);
ext_binop!(Mul, mul, *);
ext_binop!(Div, div, /);

impl Neg for ExtFloat {
    type Output = ExtFloat;
    fn neg(self) -> ExtFloat {
        ExtFloat {
            value: -self.value,
            bits: self.bits,
        }
    }
}

impl Zero for ExtFloat {
    fn zero() -> Self {
        ExtFloat {
            value: Rational::zero(),
            bits: DEFAULT_EXT_BITS,
        }
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for ExtFloat {
    fn one() -> Self {
        ExtFloat {
            value: Rational::one(),
            bits: DEFAULT_EXT_BITS,
        }
    }
}

impl Field for ExtFloat {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        ExtFloat::new(&qi(n), DEFAULT_EXT_BITS)
    }

    fn from_rational(r: &Rational) -> Self {
        ExtFloat::new(r, DEFAULT_EXT_BITS)
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    fn magnitude(&self) -> f64 {
        Rational::magnitude(&self.value)
    }
}

/// Element `a + b·sqrt(3)` of the real quadratic field Q(sqrt 3).
#[derive(Clone, PartialEq, Debug)]
pub struct QSqrt3 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt3 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt3 { a, b }
    }

    pub fn sqrt3() -> Self {
        QSqrt3 {
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    pub fn rational_part(&self) -> Option<&Rational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl Add for QSqrt3 {
    type Output = QSqrt3;
    fn add(self, r: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.a + r.a, self.b + r.b)
    }
}
impl Sub for QSqrt3 {
    type Output = QSqrt3;
    fn sub(self, r: QSqrt3) -> QSqrt3 {
        QSqrt3::new(self.a - r.a, self.b - r.b)
    }
}
impl Mul for QSqrt3 {
    type Output = QSqrt3;
    fn mul(self, r: QSqrt3) -> QSqrt3 {
        let three = qi(3);
        QSqrt3::new(
            &self.a * &r.a + three * &self.b * &r.b,
            &self.a * &r.b + &self.b * &r.a,
        )
    }
}
impl Div for QSqrt3 {
    type Output = QSqrt3;
    fn div(self, r: QSqrt3) -> QSqrt3 {
        // (a + b s)/(c + d s) = (a + b s)(c - d s)/(c^2 - 3 d^2)
        let norm = &r.a * &r.a - qi(3) * &r.b * &r.b;
        let conj = QSqrt3::new(r.a.clone() / norm.clone(), -(r.b.clone() / norm));
        self * conj
    }
}
impl Neg for QSqrt3 {
    type Output = QSqrt3;
    fn neg(self) -> QSqrt3 {
        QSqrt3::new(-self.a, -self.b)
    }
}
impl Zero for QSqrt3 {
    fn zero() -> Self {
        QSqrt3::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}
impl One for QSqrt3 {
    fn one() -> Self {
        QSqrt3::new(Rational::one(), Rational::zero())
    }
}

impl Field for QSqrt3 {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        QSqrt3::new(qi(n), Rational::zero())
    }

    fn from_rational(r: &Rational) -> Self {
        QSqrt3::new(r.clone(), Rational::zero())
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + 3f64.sqrt() * rational_to_f64(&self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn to_f64_handles_huge_values() {
        let big = Rational::new(BigInt::from(3) << 2000usize, BigInt::from(1) << 2000usize);
        assert_eq!(rational_to_f64(&big), 3.0);
        assert_eq!(rational_to_f64(&q(1, 3)), 1.0 / 3.0);
        assert_eq!(rational_to_f64(&q(-7, 2)), -3.5);
    }

    #[test]
    fn rationalize_recovers_simple_fractions() {
        assert_eq!(rationalize(0.75, 1000), q(3, 4));
        assert_eq!(rationalize(-2.0 / 3.0, 1000), q(-2, 3));
        assert_eq!(rationalize(std::f64::consts::PI, 1000), q(355, 113));
    }

    #[test]
    fn ext_rounding_keeps_requested_bits() {
        let third = ExtFloat::new(&q(1, 3), 120);
        let err = (third.value().clone() - q(1, 3)).abs();
        assert!(err < Rational::new(BigInt::one(), BigInt::one() << 120usize));
        assert_eq!(ExtFloat::new(&q(1, 3), 10).bits(), MIN_EXT_BITS);
    }

    #[test]
    fn sqrt3_arithmetic() {
        let s = QSqrt3::sqrt3();
        assert_eq!(s.clone() * s.clone(), QSqrt3::from_i64(3));
        let x = QSqrt3::new(qi(2), qi(1));
        assert_eq!((x.clone() / x).rational_part(), Some(&qi(1)));
    }
}
