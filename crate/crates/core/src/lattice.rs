//! Points of the dyadic triangular lattice.
//!
//! A [`TriPoint`] `(u, v, s)` denotes `(u / 2^s, v*sqrt3 / 2^s)` with
//! `u = v (mod 2)`. At scale `s` these are exactly the vertices of the
//! triangular lattice of side `2^(1-s)`, so the vertex set `B_n` of the
//! side-`2^-n` cells lives at scale `n + 1`. All lattice geometry runs on
//! the integers `(u, v)` lifted to a shared scale.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{pow2, Point, Surd};
use crate::error::{LatticeError, ParseError};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriPoint {
    u: i64,
    v: i64,
    s: i32,
}

/// `x * 2^k`, panicking on overflow. Lattice coordinates stay far below
/// `2^62` for every scale the verifier uses.
pub(crate) fn lift(x: i64, k: i32) -> i64 {
    assert!(k >= 0, "cannot lift to a coarser scale");
    assert!(k < 63, "lattice scale difference {k} too large");
    x.checked_mul(1i64 << k).expect("lattice coordinate overflow")
}

impl TriPoint {
    pub fn new(u: i64, v: i64, s: i32) -> Result<TriPoint, LatticeError> {
        if (u - v).rem_euclid(2) != 0 {
            return Err(LatticeError::Parity { u, v });
        }
        Ok(TriPoint { u, v, s }.canonical())
    }

    pub fn origin() -> TriPoint {
        TriPoint { u: 0, v: 0, s: 0 }
    }

    /// Build from integer coordinates at scale `s`; parity must already hold.
    pub(crate) fn from_scaled(u: i64, v: i64, s: i32) -> TriPoint {
        debug_assert!((u - v).rem_euclid(2) == 0, "parity violated: ({u}, {v})");
        TriPoint { u, v, s }.canonical()
    }

    fn canonical(mut self) -> TriPoint {
        if self.u == 0 && self.v == 0 {
            return TriPoint::origin();
        }
        while self.u % 2 == 0 && self.v % 2 == 0 && ((self.u - self.v) / 2) % 2 == 0 {
            self.u /= 2;
            self.v /= 2;
            self.s -= 1;
        }
        self
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn v(&self) -> i64 {
        self.v
    }

    /// Scale exponent of the canonical form.
    pub fn s(&self) -> i32 {
        self.s
    }

    /// Integer coordinates at a finer (or equal) scale.
    pub fn at_scale(&self, s: i32) -> (i64, i64) {
        (lift(self.u, s - self.s), lift(self.v, s - self.s))
    }

    pub fn to_point(&self) -> Point {
        let k = pow2(-self.s);
        let u = BigRational::from_integer(self.u.into()) * &k;
        let v = BigRational::from_integer(self.v.into()) * &k;
        Point::new(Surd::from_rational(u), Surd::new(BigRational::zero(), v))
    }

    /// Exact inverse of [`TriPoint::to_point`]; `None` for points off the lattice.
    pub fn from_point(p: &Point) -> Option<TriPoint> {
        if !p.x.is_rational() || !p.y.a().is_zero() {
            return None;
        }
        let x = p.x.a();
        let y = p.y.b();
        let kx = dyadic_exponent(x.denom())?;
        let ky = dyadic_exponent(y.denom())?;
        let mut s = kx.max(ky) as i32;
        let scale = |r: &BigRational, s: i32| -> Option<i64> {
            let scaled = r * BigRational::from_integer(BigInt::one() << s as u32);
            scaled.to_integer().to_i64()
        };
        let mut u = scale(x, s)?;
        let mut v = scale(y, s)?;
        if (u - v).rem_euclid(2) != 0 {
            u = u.checked_mul(2)?;
            v = v.checked_mul(2)?;
            s += 1;
        }
        Some(TriPoint::from_scaled(u, v, s))
    }

    pub fn add(&self, o: &TriPoint) -> TriPoint {
        let s = self.s.max(o.s);
        let (a, b) = self.at_scale(s);
        let (c, d) = o.at_scale(s);
        TriPoint::from_scaled(a + c, b + d, s)
    }

    pub fn sub(&self, o: &TriPoint) -> TriPoint {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> TriPoint {
        TriPoint { u: -self.u, v: -self.v, s: self.s }
    }

    /// Rotation about the origin by `k * 60` degrees.
    pub fn rotate(&self, k: u8) -> TriPoint {
        let (mut u, mut v) = (self.u, self.v);
        for _ in 0..(k % 6) {
            // (x, y) -> (x/2 - sqrt3 y/2, sqrt3 x/2 + y/2); parity keeps both halves integral
            let nu = (u - 3 * v) / 2;
            let nv = (u + v) / 2;
            u = nu;
            v = nv;
        }
        TriPoint::from_scaled(u, v, self.s)
    }

    /// Reflection across the x-axis.
    pub fn reflect(&self) -> TriPoint {
        TriPoint { u: self.u, v: -self.v, s: self.s }
    }

    /// Multiplication by `2^-e`.
    pub fn shrink(&self, e: i32) -> TriPoint {
        TriPoint { s: self.s + e, ..*self }.canonical()
    }

    pub fn midpoint(&self, o: &TriPoint) -> TriPoint {
        self.add(o).shrink(1)
    }
}

/// `k` with `d = 2^k`, or `None` when `d` is not a power of two.
fn dyadic_exponent(d: &BigInt) -> Option<u64> {
    let k = d.trailing_zeros().unwrap_or(0);
    if *d == BigInt::one() << k {
        Some(k)
    } else {
        None
    }
}

/// Finest scale among a set of points.
pub fn common_scale<'a>(points: impl IntoIterator<Item = &'a TriPoint>) -> i32 {
    points.into_iter().map(|p| p.s).max().unwrap_or(0)
}

/// Geometric order: by x, then by y.
impl Ord for TriPoint {
    fn cmp(&self, o: &TriPoint) -> Ordering {
        let s = self.s.max(o.s);
        let (a, b) = self.at_scale(s);
        let (c, d) = o.at_scale(s);
        a.cmp(&c).then(b.cmp(&d))
    }
}

impl PartialOrd for TriPoint {
    fn partial_cmp(&self, o: &TriPoint) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for TriPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_point())
    }
}

impl fmt::Debug for TriPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TriPoint[{}, {}; {}]{}", self.u, self.v, self.s, self.to_point())
    }
}

impl FromStr for TriPoint {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<TriPoint, ParseError> {
        let p: Point = s.parse()?;
        TriPoint::from_point(&p).ok_or_else(|| ParseError::new("lattice point", s, "not on the dyadic lattice"))
    }
}

impl serde::Serialize for TriPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
