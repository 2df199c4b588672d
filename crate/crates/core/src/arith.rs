//! Exact arithmetic in the quadratic field Q(sqrt 3).
//!
//! Every coordinate, squared distance and comparison in the crate is a
//! [`Surd`] `a + b*sqrt3` with arbitrary-precision rational `a` and `b`.
//! Signs are decided by comparing `a^2` with `3 b^2`, so no floating
//! approximation ever enters a decision.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// `a + b*sqrt3` with `a`, `b` rational. `BigRational` keeps both parts
/// reduced, so derived equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    a: BigRational,
    b: BigRational,
}

/// Three-way sign of an exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of_rational(r: &BigRational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Rational from an integer numerator and denominator. Panics on a zero
/// denominator, which is a programming error at every call site.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` as an exact rational, for any sign of `e`.
pub fn pow2(e: i32) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

impl Surd {
    pub fn new(a: BigRational, b: BigRational) -> Surd {
        Surd { a, b }
    }

    pub fn zero() -> Surd {
        Surd::default()
    }

    pub fn one() -> Surd {
        Surd::from_rational(BigRational::one())
    }

    pub fn sqrt3() -> Surd {
        Surd::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_rational(a: BigRational) -> Surd {
        Surd::new(a, BigRational::zero())
    }

    pub fn from_int(n: i64) -> Surd {
        Surd::from_rational(BigRational::from_integer(n.into()))
    }

    /// `num/den + (snum/sden)*sqrt3`.
    pub fn frac(num: i64, den: i64, snum: i64, sden: i64) -> Surd {
        Surd::new(ratio(num, den), ratio(snum, sden))
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of sqrt3.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign. Mixed-sign parts compare `a^2` against `3 b^2`.
    pub fn sign(&self) -> Sign {
        let sa = Sign::of_rational(&self.a);
        let sb = Sign::of_rational(&self.b);
        match (sa, sb) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (Sign::Positive, Sign::Positive) => Sign::Positive,
            (Sign::Negative, Sign::Negative) => Sign::Negative,
            (Sign::Positive, Sign::Negative) | (Sign::Negative, Sign::Positive) => {
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * BigRational::from_integer(3.into());
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.flip(),
                    // a^2 = 3 b^2 has no rational solution besides zero
                    Ordering::Equal => unreachable!("sqrt3 is irrational"),
                }
            }
        }
    }

    /// The conjugate `a - b*sqrt3`.
    pub fn conj(&self) -> Surd {
        Surd::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a^2 - 3 b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(3.into())
    }

    pub fn recip(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Surd::new(&self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, rhs: &Surd) -> Option<Surd> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn scale(&self, r: &BigRational) -> Surd {
        Surd::new(&self.a * r, &self.b * r)
    }

    /// `self * 2^e`.
    pub fn mul_pow2(&self, e: i32) -> Surd {
        self.scale(&pow2(e))
    }

    pub fn square(&self) -> Surd {
        self * self
    }

    pub fn abs(&self) -> Surd {
        if self.sign() == Sign::Negative {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Nearest `f64`; only for rendering and float cross-checks.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Surd) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Surd) -> Ordering {
        match (self - other).sign() {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        Surd::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let three = BigRational::from_integer(3.into());
        Surd::new(&self.a * &rhs.a + &self.b * &rhs.b * three, &self.a * &rhs.b + &self.b * &rhs.a)
    }
}

impl<'a> Div<&'a Surd> for &'a Surd {
    type Output = Surd;
    /// Panics on division by zero; use [`Surd::checked_div`] when the divisor may vanish.
    fn div(self, rhs: &Surd) -> Surd {
        self.checked_div(rhs).expect("division by zero surd")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Surd> for Surd {
    fn add_assign(&mut self, rhs: &Surd) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Surd> for Surd {
    fn sub_assign(&mut self, rhs: &Surd) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.a, -self.b)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(-self.a.clone(), -self.b.clone())
    }
}

impl From<i64> for Surd {
    fn from(n: i64) -> Surd {
        Surd::from_int(n)
    }
}

impl From<BigRational> for Surd {
    fn from(r: BigRational) -> Surd {
        Surd::from_rational(r)
    }
}

/// Canonical text: `3/4`, `1/4*sqrt3`, `3/4 + 1/4*sqrt3`, `3/4 - 1/4*sqrt3`, `0`.
impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt3", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt3", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}*sqrt3", self.a, self.b)
                }
            }
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::new("surd", s, "empty rational"));
    }
    let r = BigRational::from_str(t).map_err(|e| ParseError::new("surd", s, e.to_string()))?;
    Ok(r)
}

impl FromStr for Surd {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Surd, ParseError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(head) = compact.strip_suffix("sqrt3") else {
            return Ok(Surd::from_rational(parse_rational(&compact)?));
        };
        let head = head.strip_suffix('*').ok_or_else(|| ParseError::new("surd", s, "expected `*` before sqrt3"))?;
        // split at the last sign that neither leads nor follows another sign
        let bytes = head.as_bytes();
        let is_sign = |b: u8| b == b'+' || b == b'-';
        let split = (1..bytes.len()).rev().find(|&i| is_sign(bytes[i]) && !is_sign(bytes[i - 1]));
        let (a, b) = match split {
            Some(i) => {
                let a = parse_rational(&head[..i])?;
                let coeff = &head[i..];
                let coeff = coeff.strip_prefix('+').unwrap_or(coeff);
                (a, parse_rational(coeff)?)
            }
            None => (BigRational::zero(), parse_rational(head)?),
        };
        Ok(Surd::new(a, b))
    }
}

impl serde::Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An exact point of the plane; the unit is the side of one unit gasket.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Point {
    pub x: Surd,
    pub y: Surd,
}

impl Point {
    pub fn new(x: Surd, y: Surd) -> Point {
        Point { x, y }
    }

    pub fn origin() -> Point {
        Point::default()
    }

    /// `(xn/xd, (yn/yd)*sqrt3)`, the usual shape of lattice coordinates.
    pub fn lattice(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(Surd::frac(xn, xd, 0, 1), Surd::frac(0, 1, yn, yd))
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Surd) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn dot(&self, o: &Point) -> Surd {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of the planar cross product.
    pub fn cross(&self, o: &Point) -> Surd {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{self}")
    }
}

impl FromStr for Point {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Point, ParseError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ParseError::new("point", s, "expected `(x, y)`"))?;
        let (x, y) = inner.split_once(',').ok_or_else(|| ParseError::new("point", s, "missing comma"))?;
        Ok(Point::new(x.parse()?, y.parse()?))
    }
}

impl serde::Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Squared Euclidean distance; distances are always compared squared.
pub fn sqdist(p: &Point, q: &Point) -> Surd {
    let d = p.sub(q);
    d.dot(&d)
}

/// Squared distance from `p` to the closed segment `ab`, with the nearest point.
pub fn sqdist_point_segment(p: &Point, a: &Point, b: &Point) -> (Surd, Point) {
    let ab = b.sub(a);
    let len2 = ab.dot(&ab);
    let t = match p.sub(a).dot(&ab).checked_div(&len2) {
        None => Surd::zero(),
        Some(t) if t.sign() == Sign::Negative => Surd::zero(),
        Some(t) if t > Surd::one() => Surd::one(),
        Some(t) => t,
    };
    let foot = a.add(&ab.scale(&t));
    (sqdist(p, &foot), foot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Surd {
        t.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(Surd::one() + Surd::sqrt3(), s("1 + 1*sqrt3"));
        assert_eq!(Surd::sqrt3() * Surd::sqrt3(), Surd::from_int(3));
        let p = Surd::frac(1, 2, 1, 2);
        let q = Surd::frac(1, 2, -1, 2);
        assert_eq!(p * q, Surd::frac(-1, 2, 0, 1));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Surd::zero().sign(), Sign::Zero);
        assert_eq!(Surd::frac(-1, 1, 1, 1).sign(), Sign::Positive);
        assert_eq!(Surd::frac(7, 4, -1, 1).sign(), Sign::Positive);
        assert_eq!(Surd::frac(-7, 4, 1, 1).sign(), Sign::Negative);
        assert_eq!(Surd::frac(1, 1, -1, 1).sign(), Sign::Negative);
    }

    #[test]
    fn recip_and_div() {
        let x = Surd::frac(2, 1, 1, 1);
        assert_eq!(&x * &x.recip().unwrap(), Surd::one());
        assert!(Surd::zero().recip().is_none());
        assert_eq!(Surd::from_int(3).checked_div(&Surd::sqrt3()), Some(Surd::sqrt3()));
    }

    #[test]
    fn sqdist_examples() {
        let o = Point::origin();
        assert_eq!(sqdist(&o, &Point::lattice(5, 1, 0, 1)), Surd::from_int(25));
        assert_eq!(sqdist(&o, &o), Surd::zero());
        let p6 = Point::lattice(3, 8, 1, 4);
        let (d, foot) = sqdist_point_segment(&p6, &Point::lattice(1, 4, 1, 4), &Point::lattice(1, 2, 0, 1));
        assert_eq!(d, Surd::frac(3, 256, 0, 1));
        // projection oracle: foot lies on the segment and p6-foot is orthogonal to it
        let dir = Point::lattice(1, 4, -1, 4);
        assert!(p6.sub(&foot).dot(&dir).is_zero());
    }

    #[test]
    fn text_forms() {
        for t in ["0", "3/4", "-1/4*sqrt3", "3/4 + 1/4*sqrt3", "3/4 - 1/4*sqrt3", "-2 + 5*sqrt3"] {
            assert_eq!(s(t).to_string(), t);
        }
        assert_eq!(s("1/2+-3/8*sqrt3"), Surd::frac(1, 2, -3, 8));
        assert!("sqrt3x".parse::<Surd>().is_err());
        assert!("*sqrt3".parse::<Surd>().is_err());
        assert!("1/0".parse::<Surd>().is_err());
    }
}
