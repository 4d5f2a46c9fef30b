//! Exact arithmetic in the golden field Q(φ), φ = (1+√5)/2, φ² = φ + 1.
//!
//! A value is stored as (a + b·φ)/d with integer a, b and positive d,
//! reduced so gcd(a, b, d) = 1. Integers of Z[φ] are the d = 1 case.
//! All comparisons are exact: the sign of a + b·φ is decided from the
//! signs of 2a+b and (2a+b)² − 5b², never from floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::{Error, Result};

/// An element (a + b·φ)/d of Q(φ), canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GoldenNum {
    a: i128,
    b: i128,
    d: i128,
}

fn gcd(mut x: i128, mut y: i128) -> i128 {
    x = x.abs();
    y = y.abs();
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    x
}

impl GoldenNum {
    pub const ZERO: GoldenNum = GoldenNum { a: 0, b: 0, d: 1 };
    pub const ONE: GoldenNum = GoldenNum { a: 1, b: 0, d: 1 };
    /// φ itself.
    pub const PHI: GoldenNum = GoldenNum { a: 0, b: 1, d: 1 };

    /// (a + b·φ)/d, reduced. Panics if d = 0.
    pub fn new(a: i128, b: i128, d: i128) -> GoldenNum {
        assert!(d != 0, "zero denominator");
        let mut g = gcd(gcd(a, b), d);
        if g == 0 {
            g = 1;
        }
        let s = if d < 0 { -g } else { g };
        GoldenNum {
            a: a / s,
            b: b / s,
            d: d / s,
        }
    }

    pub fn from_int(n: i64) -> GoldenNum {
        GoldenNum {
            a: n as i128,
            b: 0,
            d: 1,
        }
    }

    /// a + b·φ with integer coefficients.
    pub fn from_parts(a: i64, b: i64) -> GoldenNum {
        GoldenNum {
            a: a as i128,
            b: b as i128,
            d: 1,
        }
    }

    /// Rational a/d.
    pub fn from_ratio(a: i128, d: i128) -> GoldenNum {
        GoldenNum::new(a, 0, d)
    }

    /// Numerator coefficient of 1.
    pub fn a(&self) -> i128 {
        self.a
    }
    /// Numerator coefficient of φ.
    pub fn b(&self) -> i128 {
        self.b
    }
    /// Denominator (always positive).
    pub fn den(&self) -> i128 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    /// Galois conjugate: φ ↦ 1 − φ (i.e. √5 ↦ −√5).
    pub fn conj(&self) -> GoldenNum {
        GoldenNum::new(self.a + self.b, -self.b, self.d)
    }

    /// Checked addition; errors on i128 overflow.
    pub fn checked_add(&self, o: &GoldenNum) -> Result<GoldenNum> {
        let a = self
            .a
            .checked_mul(o.d)
            .and_then(|x| o.a.checked_mul(self.d).and_then(|y| x.checked_add(y)))
            .ok_or(Error::Overflow)?;
        let b = self
            .b
            .checked_mul(o.d)
            .and_then(|x| o.b.checked_mul(self.d).and_then(|y| x.checked_add(y)))
            .ok_or(Error::Overflow)?;
        let d = self.d.checked_mul(o.d).ok_or(Error::Overflow)?;
        Ok(GoldenNum::new(a, b, d))
    }

    /// Checked product using φ² = φ + 1; errors on i128 overflow.
    pub fn checked_mul(&self, o: &GoldenNum) -> Result<GoldenNum> {
        let aa = self.a.checked_mul(o.a).ok_or(Error::Overflow)?;
        let bb = self.b.checked_mul(o.b).ok_or(Error::Overflow)?;
        let ab = self.a.checked_mul(o.b).ok_or(Error::Overflow)?;
        let ba = self.b.checked_mul(o.a).ok_or(Error::Overflow)?;
        let a = aa.checked_add(bb).ok_or(Error::Overflow)?;
        let b = ab
            .checked_add(ba)
            .and_then(|x| x.checked_add(bb))
            .ok_or(Error::Overflow)?;
        let d = self.d.checked_mul(o.d).ok_or(Error::Overflow)?;
        Ok(GoldenNum::new(a, b, d))
    }

    /// Multiplicative inverse. Errors on zero.
    ///
    /// 1/(a+bφ) = (a+b−bφ)/N with N = a² + ab − b² (the field norm).
    pub fn inv(&self) -> Result<GoldenNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.a * self.a + self.a * self.b - self.b * self.b;
        // (a + bφ)/d inverted: d·(a+b − bφ)/N
        Ok(GoldenNum::new(
            self.d
                .checked_mul(self.a + self.b)
                .ok_or(Error::Overflow)?,
            self.d.checked_mul(-self.b).ok_or(Error::Overflow)?,
            n,
        ))
    }

    /// Exact sign, no floating point.
    pub fn signum(&self) -> i32 {
        // sign of a + bφ: let t = 2a + b. For b ≥ 0: positive iff t > 0 or
        // (t ≥ 0); for mixed signs compare t² with 5b² (since a+bφ =
        // (t + b√5)/2).
        let t = 2 * self.a + self.b;
        let b = self.b;
        if b == 0 {
            return t.signum() as i32;
        }
        if t == 0 {
            return b.signum() as i32;
        }
        if t > 0 && b > 0 {
            return 1;
        }
        if t < 0 && b < 0 {
            return -1;
        }
        // t and b have opposite signs: sign(t + b√5) decided by t² vs 5b²
        let t2 = t * t;
        let b2 = 5 * b * b;
        match t2.cmp(&b2) {
            Ordering::Greater => t.signum() as i32,
            Ordering::Less => b.signum() as i32,
            Ordering::Equal => 0,
        }
    }

    /// f64 approximation (display / rendering only).
    pub fn to_f64(&self) -> f64 {
        const PHI: f64 = 1.618033988749894848;
        (self.a as f64 + self.b as f64 * PHI) / self.d as f64
    }

    /// Parses the canonical text form, e.g. "3", "-1/2", "1+2*phi",
    /// "1/2-3/2*phi".
    pub fn parse(s: &str) -> Result<GoldenNum> {
        let s = s.trim().replace(' ', "");
        let bad = || Error::Parse(format!("bad golden number: {s:?}"));
        // split into rational part and phi part
        let (rat, phi) = match s.find("*phi") {
            None => {
                if s == "phi" {
                    return Ok(GoldenNum::PHI);
                }
                (s.as_str(), None)
            }
            Some(star) => {
                let head = &s[..star];
                // find the +/- that splits the two terms (skip a leading sign
                // and any sign right after '/')
                let mut split = None;
                for (i, c) in head.char_indices().skip(1) {
                    if (c == '+' || c == '-') && head.as_bytes()[i - 1] != b'/' {
                        split = Some(i);
                    }
                }
                match split {
                    Some(i) => (&head[..i], Some(&head[i..])),
                    None => ("0", Some(head)),
                }
            }
        };
        fn frac(t: &str) -> Option<(i128, i128)> {
            let t = t.strip_prefix('+').unwrap_or(t);
            match t.split_once('/') {
                None => Some((t.parse().ok()?, 1)),
                Some((n, d)) => Some((n.parse().ok()?, d.parse().ok()?)),
            }
        }
        let (ra, rd) = frac(rat).ok_or_else(bad)?;
        let (pa, pd) = match phi {
            None => (0, 1),
            Some(p) => {
                let p = p.strip_suffix("*phi").unwrap_or(p);
                match p {
                    "" | "+" => (1, 1),
                    "-" => (-1, 1),
                    _ => frac(p).ok_or_else(bad)?,
                }
            }
        };
        if rd == 0 || pd == 0 {
            return Err(bad());
        }
        Ok(GoldenNum::new(ra * pd, pa * rd, rd * pd))
    }
}

impl fmt::Display for GoldenNum {
    /// Canonical text form "a+b*phi" (rational coefficients as n/d).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rat = |n: i128, f: &mut fmt::Formatter<'_>| {
            if self.d == 1 {
                write!(f, "{}", n)
            } else {
                write!(f, "{}/{}", n, self.d)
            }
        };
        if self.b == 0 {
            return rat(self.a, f);
        }
        if self.a != 0 {
            rat(self.a, f)?;
            if self.b > 0 {
                write!(f, "+")?;
            }
        }
        rat(self.b, f)?;
        write!(f, "*phi")
    }
}

impl fmt::Debug for GoldenNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialOrd for GoldenNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GoldenNum {
    fn cmp(&self, other: &Self) -> Ordering {
        // denominators positive, so compare numerator cross products
        let diff = GoldenNum::new(
            self.a * other.d - other.a * self.d,
            self.b * other.d - other.b * self.d,
            1,
        );
        match diff.signum() {
            x if x > 0 => Ordering::Greater,
            0 => Ordering::Equal,
            _ => Ordering::Less,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $impl:expr) => {
        impl $trait for GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: GoldenNum) -> GoldenNum {
                let f: fn(&GoldenNum, &GoldenNum) -> GoldenNum = $impl;
                f(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a GoldenNum> for &GoldenNum {
            type Output = GoldenNum;
            fn $method(self, rhs: &'a GoldenNum) -> GoldenNum {
                let f: fn(&GoldenNum, &GoldenNum) -> GoldenNum = $impl;
                f(self, rhs)
            }
        }
    };
}

binop!(Add, add, |x, y| x.checked_add(y).expect("golden overflow"));
binop!(Sub, sub, |x, y| x
    .checked_add(&-*y)
    .expect("golden overflow"));
binop!(Mul, mul, |x, y| x.checked_mul(y).expect("golden overflow"));
binop!(Div, div, |x, y| x
    .checked_mul(&y.inv().expect("golden division by zero"))
    .expect("golden overflow"));

impl Neg for GoldenNum {
    type Output = GoldenNum;
    fn neg(self) -> GoldenNum {
        GoldenNum {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl AddAssign for GoldenNum {
    fn add_assign(&mut self, rhs: GoldenNum) {
        *self = *self + rhs;
    }
}
impl SubAssign for GoldenNum {
    fn sub_assign(&mut self, rhs: GoldenNum) {
        *self = *self - rhs;
    }
}
impl MulAssign for GoldenNum {
    fn mul_assign(&mut self, rhs: GoldenNum) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix;

    #[test]
    fn phi_squared_is_phi_plus_one() {
        assert_eq!(
            GoldenNum::PHI * GoldenNum::PHI,
            GoldenNum::from_parts(1, 1)
        );
    }

    #[test]
    fn one_is_identity() {
        let x = GoldenNum::new(7, -3, 5);
        assert_eq!(GoldenNum::ONE * x, x);
    }

    #[test]
    fn expand_and_reduce_by_hand() {
        // (1+φ)(φ) = φ + φ² = φ + φ + 1 = 1 + 2φ
        assert_eq!(
            GoldenNum::from_parts(1, 1) * GoldenNum::PHI,
            GoldenNum::from_parts(1, 2)
        );
    }

    #[test]
    fn inverse() {
        let x = GoldenNum::new(3, -2, 7);
        assert_eq!(x * x.inv().unwrap(), GoldenNum::ONE);
        assert!(GoldenNum::ZERO.inv().is_err());
        // 1/φ = φ − 1
        assert_eq!(GoldenNum::PHI.inv().unwrap(), GoldenNum::from_parts(-1, 1));
    }

    #[test]
    fn overflow_detected() {
        let big = GoldenNum::new(i128::MAX / 2, 1, 1);
        assert!(matches!(big.checked_mul(&big), Err(Error::Overflow)));
    }

    #[test]
    fn ring_axioms_randomized() {
        let mut rng = SplitMix::new(0x5eed);
        let rand = |r: &mut SplitMix| {
            GoldenNum::new(
                r.i64_in(-1000, 1000) as i128,
                r.i64_in(-1000, 1000) as i128,
                r.i64_in(1, 40) as i128,
            )
        };
        for _ in 0..500 {
            let (x, y, z) = (rand(&mut rng), rand(&mut rng), rand(&mut rng));
            assert_eq!(x + y, y + x);
            assert_eq!((x + y) + z, x + (y + z));
            assert_eq!(x * y, y * x);
            assert_eq!((x * y) * z, x * (y * z));
            assert_eq!(x * (y + z), x * y + x * z);
            assert_eq!(x + GoldenNum::ZERO, x);
            assert_eq!(x - x, GoldenNum::ZERO);
        }
    }

    #[test]
    fn order_matches_float_embedding() {
        let mut rng = SplitMix::new(42);
        for _ in 0..2000 {
            let x = GoldenNum::from_parts(rng.i64_in(-1_000_000, 1_000_000), rng.i64_in(-1_000_000, 1_000_000));
            let y = GoldenNum::from_parts(rng.i64_in(-1_000_000, 1_000_000), rng.i64_in(-1_000_000, 1_000_000));
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-12 * fx.abs().max(fy.abs()).max(1.0) {
                assert_eq!(x < y, fx < fy, "{x} vs {y}");
            }
            assert_eq!(x.signum() > 0, x > GoldenNum::ZERO);
        }
    }

    #[test]
    fn sign_of_conjugate_pairs() {
        // φ − 1 > 0, 1 − φ < 0, 2 − φ > 0, φ − 2 < 0
        assert_eq!(GoldenNum::from_parts(-1, 1).signum(), 1);
        assert_eq!(GoldenNum::from_parts(1, -1).signum(), -1);
        assert_eq!(GoldenNum::from_parts(2, -1).signum(), 1);
        assert_eq!(GoldenNum::from_parts(-2, 1).signum(), -1);
        assert_eq!(GoldenNum::ZERO.signum(), 0);
    }

    #[test]
    fn display_and_parse_round_trip() {
        let cases = [
            GoldenNum::ZERO,
            GoldenNum::ONE,
            GoldenNum::PHI,
            GoldenNum::new(-3, 2, 4),
            GoldenNum::new(1, -1, 2),
            GoldenNum::from_parts(19, 30),
        ];
        for x in cases {
            assert_eq!(GoldenNum::parse(&x.to_string()).unwrap(), x, "{x}");
        }
        assert_eq!(GoldenNum::parse("phi").unwrap(), GoldenNum::PHI);
        assert_eq!(
            GoldenNum::parse("1/2+3/2*phi").unwrap(),
            GoldenNum::new(1, 3, 2)
        );
        assert!(GoldenNum::parse("nope").is_err());
    }
}
