//! Lattice similitudes: `x -> 2^-e * R(rot*60) * F^refl * x + t`.
//!
//! `F` is the reflection across the x-axis and is applied before the
//! rotation, which gives the reflected matrix form
//! `k [[cos, sin], [sin, -cos]]` with a single flag. Every map of this class
//! sends the dyadic triangular lattice into itself, so images of lattice
//! points stay exact integers.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use crate::arith::{pow2, Point, Sign, Surd};
use crate::error::{ParseError, SimilitudeError};
use crate::lattice::{common_scale, TriPoint};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Similitude {
    e: i32,
    rot: u8,
    refl: bool,
    t: TriPoint,
}

fn cos60(k: u8) -> Surd {
    match k % 6 {
        0 => Surd::one(),
        1 | 5 => Surd::frac(1, 2, 0, 1),
        2 | 4 => Surd::frac(-1, 2, 0, 1),
        _ => Surd::from_int(-1),
    }
}

fn sin60(k: u8) -> Surd {
    match k % 6 {
        0 | 3 => Surd::zero(),
        1 | 2 => Surd::frac(0, 1, 1, 2),
        _ => Surd::frac(0, 1, -1, 2),
    }
}

impl Similitude {
    pub fn new(rot: u8, refl: bool, e: i32, t: TriPoint) -> Similitude {
        Similitude { e, rot: rot % 6, refl, t }
    }

    pub fn identity() -> Similitude {
        Similitude::new(0, false, 0, TriPoint::origin())
    }

    /// `x -> x / 2^e + t`.
    pub fn homothety(e: i32, t: TriPoint) -> Similitude {
        Similitude::new(0, false, e, t)
    }

    /// The distinguished map `T`: scale 1/2, rotation by 120 degrees,
    /// translation `(3/4, sqrt3/4)`.
    pub fn t_map() -> Similitude {
        Similitude::new(2, false, 1, TriPoint::new(3, 1, 2).expect("lattice point"))
    }

    /// Rotation index `k` of the `k * 60` degree rotation.
    pub fn rot(&self) -> u8 {
        self.rot
    }

    pub fn refl(&self) -> bool {
        self.refl
    }

    /// Scale exponent: the scaling factor is `2^-e`.
    pub fn e(&self) -> i32 {
        self.e
    }

    pub fn translation(&self) -> TriPoint {
        self.t
    }

    pub fn scaling_factor(&self) -> BigRational {
        pow2(-self.e)
    }

    pub fn is_contractive(&self) -> bool {
        self.e >= 1
    }

    pub fn is_identity(&self) -> bool {
        *self == Similitude::identity()
    }

    fn linear_lattice(&self, p: &TriPoint) -> TriPoint {
        let p = if self.refl { p.reflect() } else { *p };
        p.rotate(self.rot).shrink(self.e)
    }

    pub fn apply_lattice(&self, p: &TriPoint) -> TriPoint {
        self.linear_lattice(p).add(&self.t)
    }

    pub fn apply(&self, p: &Point) -> Point {
        let y = if self.refl { -&p.y } else { p.y.clone() };
        let (c, s) = (cos60(self.rot), sin60(self.rot));
        let k = Surd::from_rational(self.scaling_factor());
        let x2 = (&c * &p.x - &s * &y) * &k;
        let y2 = (&s * &p.x + &c * &y) * &k;
        Point::new(x2, y2).add(&self.t.to_point())
    }

    /// `self ∘ g`, i.e. `x -> self(g(x))`.
    pub fn compose(&self, g: &Similitude) -> Similitude {
        // F R(a) = R(-a) F
        let g_rot = if self.refl { (6 - g.rot) % 6 } else { g.rot };
        Similitude::new((self.rot + g_rot) % 6, self.refl ^ g.refl, self.e + g.e, self.apply_lattice(&g.t))
    }

    pub fn inverse(&self) -> Similitude {
        // (k R F)^-1 = F R(-a) / k, which is R(a) F / k when reflected
        let rot = if self.refl { self.rot } else { (6 - self.rot) % 6 };
        let lin = Similitude::new(rot, self.refl, -self.e, TriPoint::origin());
        let t = lin.apply_lattice(&self.t).neg();
        Similitude { t, ..lin }
    }

    /// `self` composed with itself `k` times; `k = 0` is the identity.
    pub fn pow(&self, k: u32) -> Similitude {
        (0..k).fold(Similitude::identity(), |acc, _| self.compose(&acc))
    }

    /// Unique fixed point, found by solving `(I - A) p = t` over Q(sqrt3).
    pub fn fixed_point(&self) -> Result<Point, SimilitudeError> {
        let k = Surd::from_rational(self.scaling_factor());
        let (c, s) = (cos60(self.rot), sin60(self.rot));
        let sigma = if self.refl { Surd::from_int(-1) } else { Surd::one() };
        // A = k [[c, -sigma s], [s, sigma c]]
        let a11 = &k * &c;
        let a12 = -(&k * &sigma * &s);
        let a21 = &k * &s;
        let a22 = &k * &sigma * &c;
        let m11 = Surd::one() - a11;
        let m12 = -a12;
        let m21 = -a21;
        let m22 = Surd::one() - a22;
        let det = &m11 * &m22 - &m12 * &m21;
        if det.sign() == Sign::Zero {
            return Err(SimilitudeError::NoUniqueFixedPoint);
        }
        let t = self.t.to_point();
        let x = (&t.x * &m22 - &m12 * &t.y) / &det;
        let y = (&m11 * &t.y - &m21 * &t.x) / &det;
        let p = Point::new(x, y);
        debug_assert_eq!(self.apply(&p), p);
        Ok(p)
    }

    /// The unique similitude with `src[i] -> dst[i]`, provided it belongs to
    /// the lattice class.
    pub fn from_triple(src: [&Point; 3], dst: [&Point; 3]) -> Result<Similitude, SimilitudeError> {
        let s01 = src[1].sub(src[0]);
        let s02 = src[2].sub(src[0]);
        if s01.cross(&s02).sign() == Sign::Zero {
            return Err(SimilitudeError::DegenerateSource);
        }
        let d01 = dst[1].sub(dst[0]);
        for refl in [false, true] {
            let conj = |p: &Point| if refl { Point::new(p.x.clone(), -&p.y) } else { p.clone() };
            // a = d01 / conj(s01) as complex numbers
            let den = conj(&s01);
            let n2 = den.dot(&den);
            let ar = (&d01.x * &den.x + &d01.y * &den.y) / &n2;
            let ai = (&d01.y * &den.x - &d01.x * &den.y) / &n2;
            if ar.is_zero() && ai.is_zero() {
                return Err(SimilitudeError::NotSimilar);
            }
            let mul = |z: &Point| {
                let z = conj(z);
                Point::new(&ar * &z.x - &ai * &z.y, &ar * &z.y + &ai * &z.x)
            };
            let b = dst[0].sub(&mul(src[0]));
            if mul(src[2]).add(&b) != *dst[2] {
                continue;
            }
            return classify(&ar, &ai, refl, &b);
        }
        Err(SimilitudeError::NotSimilar)
    }

    /// Integer fast path of [`Similitude::from_triple`] for lattice triples.
    /// Returns `None` when no lattice-class similitude fits.
    pub fn from_lattice_triple(src: [TriPoint; 3], dst: [TriPoint; 3]) -> Option<Similitude> {
        let e = scale_exponent(&src[0], &src[1], &dst[0], &dst[1])?;
        for refl in [false, true] {
            for rot in 0..6 {
                let lin = Similitude::new(rot, refl, e, TriPoint::origin());
                let t = dst[0].sub(&lin.apply_lattice(&src[0]));
                let f = Similitude { t, ..lin };
                if f.apply_lattice(&src[1]) == dst[1] && f.apply_lattice(&src[2]) == dst[2] {
                    return Some(f);
                }
            }
        }
        None
    }
}

/// Squared length `u^2 + 3 v^2` of `q - p` at a common scale `s`.
fn sq_len(p: &TriPoint, q: &TriPoint) -> (i128, i32) {
    let s = common_scale([p, q]);
    let (a, b) = p.at_scale(s);
    let (c, d) = q.at_scale(s);
    let (du, dv) = ((c - a) as i128, (d - b) as i128);
    (du * du + 3 * dv * dv, s)
}

fn log4(q: i128) -> Option<i32> {
    if q <= 0 || q.count_ones() != 1 || !q.trailing_zeros().is_multiple_of(2) {
        return None;
    }
    Some((q.trailing_zeros() / 2) as i32)
}

/// `e` with `|dst| = 2^-e |src|`.
fn scale_exponent(s0: &TriPoint, s1: &TriPoint, d0: &TriPoint, d1: &TriPoint) -> Option<i32> {
    let (ls, ss) = sq_len(s0, s1);
    let (ld, sd) = sq_len(d0, d1);
    if ls == 0 || ld == 0 {
        return None;
    }
    // |src|^2 / |dst|^2 = (ls / ld) * 4^(sd - ss) = 4^e
    let base = if ls % ld == 0 {
        log4(ls / ld)?
    } else if ld % ls == 0 {
        -log4(ld / ls)?
    } else {
        return None;
    };
    Some(base + sd - ss)
}

fn classify(ar: &Surd, ai: &Surd, refl: bool, b: &Point) -> Result<Similitude, SimilitudeError> {
    let out = || SimilitudeError::OutOfClass(format!("linear part ({ar}) + ({ai})i, translation {b}"));
    let n = ar * ar + ai * ai;
    if !n.is_rational() {
        return Err(out());
    }
    let n = n.a();
    let e = if n.numer().is_one() {
        log4_big(n.denom()).ok_or_else(out)?
    } else if n.denom().is_one() {
        -log4_big(n.numer()).ok_or_else(out)?
    } else {
        return Err(out());
    };
    let unit = (ar.mul_pow2(e), ai.mul_pow2(e));
    let rot = (0..6u8).find(|&k| unit == (cos60(k), sin60(k))).ok_or_else(out)?;
    let t = TriPoint::from_point(b).ok_or_else(out)?;
    Ok(Similitude::new(rot, refl, e, t))
}

fn log4_big(n: &num_bigint::BigInt) -> Option<i32> {
    use num_bigint::BigInt;
    if n.sign() != num_bigint::Sign::Plus {
        return None;
    }
    let k = n.trailing_zeros()?;
    if k % 2 == 0 && *n == BigInt::one() << k {
        Some((k / 2) as i32)
    } else {
        None
    }
}

/// `rot=k*60 refl=0|1 scale=2^-e t=(x, y)`.
impl fmt::Display for Similitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot={}*60 refl={} scale=2^{} t={}", self.rot, u8::from(self.refl), -self.e, self.t)
    }
}

impl fmt::Debug for Similitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Similitude[{self}]")
    }
}

impl FromStr for Similitude {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Similitude, ParseError> {
        let bad = |why: &str| ParseError::new("similitude", s, why);
        let (head, t) = s.split_once(" t=").ok_or_else(|| bad("missing t="))?;
        let mut parts = head.split_whitespace();
        let rot = parts
            .next()
            .and_then(|p| p.strip_prefix("rot="))
            .and_then(|p| p.strip_suffix("*60"))
            .and_then(|p| p.parse::<u8>().ok())
            .filter(|&r| r < 6)
            .ok_or_else(|| bad("bad rot field"))?;
        let refl = match parts.next() {
            Some("refl=0") => false,
            Some("refl=1") => true,
            _ => return Err(bad("bad refl field")),
        };
        let exp = parts
            .next()
            .and_then(|p| p.strip_prefix("scale=2^"))
            .and_then(|p| p.parse::<i32>().ok())
            .ok_or_else(|| bad("bad scale field"))?;
        if parts.next().is_some() {
            return Err(bad("unexpected field"));
        }
        let t: TriPoint = t.trim().parse()?;
        Ok(Similitude::new(rot, refl, -exp, t))
    }
}

impl serde::Serialize for Similitude {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A contractive iterated function system of lattice similitudes.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Ifs {
    maps: Vec<Similitude>,
}

impl Ifs {
    pub fn new(maps: Vec<Similitude>) -> Result<Ifs, SimilitudeError> {
        if maps.is_empty() {
            return Err(SimilitudeError::EmptyIfs);
        }
        if let Some(f) = maps.iter().find(|f| !f.is_contractive()) {
            return Err(SimilitudeError::NotContractive(f.to_string()));
        }
        Ok(Ifs { maps })
    }

    /// The three corner maps of the unit gasket: `x/2`, `x/2 + (1/4, sqrt3/4)`,
    /// `x/2 + (1/2, 0)`.
    pub fn sierpinski() -> Ifs {
        let tp = |u, v, s| TriPoint::new(u, v, s).expect("lattice point");
        Ifs {
            maps: vec![
                Similitude::homothety(1, TriPoint::origin()),
                Similitude::homothety(1, tp(1, 1, 2)),
                Similitude::homothety(1, tp(2, 0, 2)),
            ],
        }
    }

    pub fn maps(&self) -> &[Similitude] {
        &self.maps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    #[test]
    fn t_on_marked_points() {
        let t = Similitude::t_map();
        assert_eq!(t.apply(&Point::origin()), pt("(3/4, 1/4*sqrt3)"));
        assert_eq!(t.apply(&pt("(1, 0)")), pt("(1/2, 1/2*sqrt3)"));
        assert_eq!(t.apply(&pt("(1/2, 1/2*sqrt3)")), pt("(1/4, 1/4*sqrt3)"));
    }

    #[test]
    fn composition_examples() {
        let t = Similitude::t_map();
        let t2 = t.compose(&t);
        assert_eq!((t2.rot(), t2.refl(), t2.e()), (4, false, 2));
        let t3 = t.pow(3);
        assert_eq!((t3.rot(), t3.refl(), t3.e()), (0, false, 3));
        let inv = t.inverse();
        assert_eq!((inv.rot(), inv.e()), (4, -1));
        assert_eq!(inv.apply(&pt("(3/4, 1/4*sqrt3)")), Point::origin());
        assert!(t.compose(&inv).is_identity());
        assert!(inv.compose(&t).is_identity());
    }

    #[test]
    fn reflected_inverse() {
        let f = Similitude::new(1, true, 2, TriPoint::new(1, 3, 3).unwrap());
        assert!(f.compose(&f.inverse()).is_identity());
        let p = pt("(5/8, 3/8*sqrt3)");
        assert_eq!(f.inverse().apply(&f.apply(&p)), p);
    }

    #[test]
    fn fixed_points() {
        let t = Similitude::t_map();
        assert_eq!(t.fixed_point().unwrap(), pt("(3/7, 2/7*sqrt3)"));
        assert_eq!(Similitude::homothety(1, TriPoint::origin()).fixed_point().unwrap(), Point::origin());
        assert_eq!(Similitude::identity().fixed_point(), Err(SimilitudeError::NoUniqueFixedPoint));
        let shift = Similitude::homothety(0, TriPoint::new(2, 0, 1).unwrap());
        assert_eq!(shift.fixed_point(), Err(SimilitudeError::NoUniqueFixedPoint));
        let rot = Similitude::new(3, false, 0, TriPoint::new(2, 0, 1).unwrap());
        assert_eq!(rot.fixed_point().unwrap(), pt("(1/2, 0)"));
    }

    #[test]
    fn from_triple_examples() {
        let p1 = pt("(1/2, 1/2*sqrt3)");
        let p2 = Point::origin();
        let p3 = pt("(1, 0)");
        let p4 = pt("(1/4, 1/4*sqrt3)");
        let p5 = pt("(3/4, 1/4*sqrt3)");
        let f = Similitude::from_triple([&p1, &p2, &p3], [&p4, &p5, &p1]).unwrap();
        assert_eq!(f, Similitude::t_map());
        let id = Similitude::from_triple([&p1, &p2, &p3], [&p1, &p2, &p3]).unwrap();
        assert!(id.is_identity());
        let line = [pt("(0, 0)"), pt("(1, 0)"), pt("(2, 0)")];
        assert_eq!(
            Similitude::from_triple([&p1, &p2, &p3], [&line[0], &line[1], &line[2]]),
            Err(SimilitudeError::NotSimilar)
        );
        assert_eq!(
            Similitude::from_triple([&line[0], &line[1], &line[2]], [&p1, &p2, &p3]),
            Err(SimilitudeError::DegenerateSource)
        );
    }

    #[test]
    fn out_of_class_triples() {
        let o = Point::origin();
        let x = pt("(1, 0)");
        let y = pt("(0, 1)");
        // rotation by 90 degrees
        let r = Similitude::from_triple([&o, &x, &y], [&o, &y, &pt("(-1, 0)")]);
        assert!(matches!(r, Err(SimilitudeError::OutOfClass(_))));
        // scale 3
        let r = Similitude::from_triple([&o, &x, &y], [&o, &pt("(3, 0)"), &pt("(0, 3)")]);
        assert!(matches!(r, Err(SimilitudeError::OutOfClass(_))));
        // non-lattice translation
        let r = Similitude::from_triple([&o, &x, &y], [&pt("(1/3, 0)"), &pt("(4/3, 0)"), &pt("(1/3, 1)")]);
        assert!(matches!(r, Err(SimilitudeError::OutOfClass(_))));
    }

    #[test]
    fn text_round_trip() {
        let t = Similitude::t_map();
        assert_eq!(t.to_string(), "rot=2*60 refl=0 scale=2^-1 t=(3/4, 1/4*sqrt3)");
        assert_eq!(t.to_string().parse::<Similitude>().unwrap(), t);
        let inv = t.inverse();
        assert_eq!(inv.to_string().parse::<Similitude>().unwrap(), inv);
        assert!("rot=6*60 refl=0 scale=2^-1 t=(0, 0)".parse::<Similitude>().is_err());
    }

    #[test]
    fn ifs_validation() {
        assert_eq!(Ifs::new(vec![]), Err(SimilitudeError::EmptyIfs));
        assert!(Ifs::new(vec![Similitude::identity()]).is_err());
        assert_eq!(Ifs::sierpinski().maps().len(), 3);
    }
}
