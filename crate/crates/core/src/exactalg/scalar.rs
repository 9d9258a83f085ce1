//! Coefficient scalars.
//!
//! Everything above this layer is generic over [`Scalar`]: the exact
//! pipeline runs over [`Rational`], the monodromy and quadrature oracles over
//! `f64`/[`Complex64`], and the high-precision factorization path over
//! [`HpComplex`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::BitTest;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Working precision of the high-precision path when none is given.
pub const DEFAULT_PRECISION_BITS: usize = 300;

/// A field element usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether `is_zero` is an exact test (as opposed to a floating-point one).
    const EXACT: bool;

    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    /// Absolute value, rounded to `f64`. Used for pivoting and residuals.
    fn magnitude(&self) -> f64;

    /// Sign and absolute-value text, used when printing polynomial terms.
    fn signed_parts(&self) -> (bool, String) {
        (false, format!("({self})"))
    }

    fn is_one_exact(&self) -> bool {
        Self::EXACT && *self == Self::one()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }

    fn signed_parts(&self) -> (bool, String) {
        (self.is_negative(), rational_to_string(&self.abs()))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn signed_parts(&self) -> (bool, String) {
        (*self < 0.0, format!("{}", self.abs()))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn signed_parts(&self) -> (bool, String) {
        if self.im == 0.0 {
            return (self.re < 0.0, fmt_real(self.re.abs()));
        }
        (false, format!("({} {} {}i)", fmt_real(self.re), if self.im < 0.0 { '-' } else { '+' }, fmt_real(self.im.abs())))
    }
}

/// Integers print plainly, everything else in scientific notation.
fn fmt_real(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x}")
    } else {
        format!("{x:.15e}")
    }
}

/// Parse `"p/q"`, `"p"` or a plain integer string into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ExactError::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Canonical string form: `"p/q"`, or `"p"` when the denominator is one.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Huge numerator or denominator: scale both by a power of two.
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb - db) - 60;
            let scaled = if shift > 0 {
                Rational::new(r.numer().clone(), r.denom() << (shift as usize))
            } else {
                Rational::new(r.numer() << ((-shift) as usize), r.denom().clone())
            };
            let v = scaled.numer().to_f64().unwrap_or(0.0) / scaled.denom().to_f64().unwrap_or(1.0);
            v * 2f64.powi(shift as i32)
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns the integer value of `r` when it is an integer.
pub fn rational_as_i64(r: &Rational) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

type Big = FBig<HalfEven, 2>;

/// Binary floating-point number with a per-value precision (in bits).
///
/// Any operation that could round uses the larger operand precision; when
/// both operands are short exact integers it uses [`DEFAULT_PRECISION_BITS`].
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct HpFloat(Big);

/// High-precision complex number.
pub type HpComplex = Complex<HpFloat>;

fn to_ibig(n: &BigInt) -> IBig {
    let (sign, bytes) = n.to_bytes_le();
    let mag = IBig::from(dashu_int::UBig::from_le_bytes(&bytes));
    if sign == num_bigint::Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl HpFloat {
    pub fn from_rational_prec(r: &Rational, bits: usize) -> Self {
        if r.denom().is_one() && bits == 0 {
            return HpFloat(Big::from(to_ibig(r.numer())).with_precision(0).value());
        }
        let bits = if bits == 0 { DEFAULT_PRECISION_BITS } else { bits };
        let n = Big::from(to_ibig(r.numer())).with_precision(bits).value();
        let d = Big::from(to_ibig(r.denom())).with_precision(bits).value();
        HpFloat(n / d)
    }

    pub fn from_f64_prec(x: f64, bits: usize) -> Self {
        let v = Big::try_from(x).unwrap_or(Big::ZERO);
        HpFloat(v.with_precision(bits).value())
    }

    pub fn precision(&self) -> usize {
        self.0.precision()
    }

    pub fn with_precision(&self, bits: usize) -> Self {
        HpFloat(self.0.clone().with_precision(bits).value())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn abs(&self) -> Self {
        if self.0 < Big::ZERO {
            HpFloat(-self.0.clone())
        } else {
            self.clone()
        }
    }

    pub fn sqrt(&self) -> Self {
        let p = self.working_precision(self);
        HpFloat(self.0.clone().with_precision(p).value().sqrt())
    }

    /// Base-10 exponent estimate, valid far outside the `f64` range.
    pub fn log10_abs(&self) -> f64 {
        if self.0 == Big::ZERO {
            return f64::NEG_INFINITY;
        }
        let repr = self.0.repr();
        let sig = repr.significand();
        let bits = sig.bit_len();
        // value = sig * 2^exp; keep the top 64 bits of the significand.
        let shift = bits.saturating_sub(64);
        let top = (sig.clone() >> shift).to_f64().value().abs();
        top.log10() + ((repr.exponent() as i64 + shift as i64) as f64) * std::f64::consts::LOG10_2
    }

    fn working_precision(&self, other: &Self) -> usize {
        // Integers converted exactly carry only as many bits as they need.
        let p = self.0.precision().max(other.0.precision());
        if p < 64 {
            DEFAULT_PRECISION_BITS
        } else {
            p
        }
    }
}

impl fmt::Display for HpFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == Big::ZERO {
            return write!(f, "0");
        }
        let digits = f.precision().unwrap_or(20);
        let lg = self.log10_abs();
        if lg.abs() < 300.0 {
            write!(f, "{:.*e}", digits.saturating_sub(1), self.to_f64())
        } else {
            let e = lg.floor();
            let mant = 10f64.powf(lg - e) * if self.0 < Big::ZERO { -1.0 } else { 1.0 };
            write!(f, "{:.*}e{}", digits.saturating_sub(1).min(15), mant, e as i64)
        }
    }
}

impl Add for HpFloat {
    type Output = HpFloat;
    fn add(self, rhs: HpFloat) -> HpFloat {
        HpFloat(self.0 + rhs.0)
    }
}

impl Sub for HpFloat {
    type Output = HpFloat;
    fn sub(self, rhs: HpFloat) -> HpFloat {
        HpFloat(self.0 - rhs.0)
    }
}

impl Mul for HpFloat {
    type Output = HpFloat;
    fn mul(self, rhs: HpFloat) -> HpFloat {
        HpFloat(self.0 * rhs.0)
    }
}

impl Div for HpFloat {
    type Output = HpFloat;
    fn div(self, rhs: HpFloat) -> HpFloat {
        let p = self.working_precision(&rhs);
        let a = self.0.with_precision(p).value();
        let b = rhs.0.with_precision(p).value();
        HpFloat(a / b)
    }
}

impl Rem for HpFloat {
    type Output = HpFloat;
    fn rem(self, rhs: HpFloat) -> HpFloat {
        let q = (self.clone() / rhs.clone()).0.trunc();
        HpFloat(self.0 - q * rhs.0)
    }
}

impl Neg for HpFloat {
    type Output = HpFloat;
    fn neg(self) -> HpFloat {
        HpFloat(-self.0)
    }
}

impl Zero for HpFloat {
    fn zero() -> Self {
        HpFloat(Big::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
}

impl One for HpFloat {
    fn one() -> Self {
        HpFloat(Big::ONE)
    }
}

impl Num for HpFloat {
    type FromStrRadixErr = ExactError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, ExactError> {
        if radix != 10 {
            return Err(ExactError::Parse(format!("radix {radix} not supported")));
        }
        let r = parse_rational(s)?;
        Ok(HpFloat::from_rational_prec(&r, DEFAULT_PRECISION_BITS))
    }
}

impl Scalar for HpFloat {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        HpFloat::from_rational_prec(r, DEFAULT_PRECISION_BITS)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Scalar for HpComplex {
    const EXACT: bool = false;

    fn from_rational(r: &Rational) -> Self {
        Complex::new(HpFloat::from_rational(r), HpFloat::zero())
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64();
        let im = self.im.to_f64();
        re.hypot(im)
    }

    fn signed_parts(&self) -> (bool, String) {
        hp_to_c64(self).signed_parts()
    }
}

pub fn hp_from_rational(r: &Rational, bits: usize) -> HpComplex {
    Complex::new(HpFloat::from_rational_prec(r, bits), HpFloat::zero())
}

pub fn hp_from_c64(z: Complex64, bits: usize) -> HpComplex {
    Complex::new(HpFloat::from_f64_prec(z.re, bits), HpFloat::from_f64_prec(z.im, bits))
}

pub fn hp_to_c64(z: &HpComplex) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

/// `|z|` in high precision.
pub fn hp_abs(z: &HpComplex) -> HpFloat {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

/// `log10 |z|`, usable for residuals far below `f64::MIN_POSITIVE`.
pub fn hp_log10_abs(z: &HpComplex) -> f64 {
    let a = z.re.log10_abs();
    let b = z.im.log10_abs();
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + 0.5 * (1.0 + 10f64.powf(2.0 * (lo - hi))).log10()
}

/// Total order helper used when printing or pivoting rationals.
pub fn cmp_abs(a: &Rational, b: &Rational) -> Ordering {
    a.abs().cmp(&b.abs())
}
