//! Certified f64 intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side, so the true
//! real value is always contained. Used for the recurrence-constant
//! inequalities and as a conservative prefilter in front of exact golden
//! predicates.

use crate::golden::GoldenNum;

#[derive(Clone, Copy, Debug)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}
fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi);
        Interval { lo, hi }
    }

    /// Enclosure of √5.
    pub fn sqrt5() -> Interval {
        Interval::point(5.0).sqrt()
    }

    /// Enclosure of φ.
    pub fn phi() -> Interval {
        (Interval::sqrt5() + Interval::point(1.0)) * Interval::point(0.5)
    }

    pub fn from_golden(g: &GoldenNum) -> Interval {
        let a = Interval::point(g.a() as f64); // exact for desk-scale ints
        let b = Interval::point(g.b() as f64);
        let d = Interval::point(g.den() as f64);
        (a + b * Interval::phi()) / d
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Certainly less than x.
    pub fn lt(&self, x: f64) -> bool {
        self.hi < x
    }

    /// Certainly greater than x.
    pub fn gt(&self, x: f64) -> bool {
        self.lo > x
    }

    pub fn sqrt(self) -> Interval {
        assert!(self.lo >= 0.0, "sqrt of an interval with negative part");
        Interval {
            lo: down(self.lo.sqrt()),
            hi: up(self.hi.sqrt()),
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, r: Interval) -> Interval {
        Interval {
            lo: down(self.lo + r.lo),
            hi: up(self.hi + r.hi),
        }
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, r: Interval) -> Interval {
        Interval {
            lo: down(self.lo - r.hi),
            hi: up(self.hi - r.lo),
        }
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, r: Interval) -> Interval {
        let c = [
            self.lo * r.lo,
            self.lo * r.hi,
            self.hi * r.lo,
            self.hi * r.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}

impl std::ops::Div for Interval {
    type Output = Interval;
    fn div(self, r: Interval) -> Interval {
        assert!(
            r.lo > 0.0 || r.hi < 0.0,
            "interval division through zero"
        );
        let c = [
            self.lo / r.lo,
            self.lo / r.hi,
            self.hi / r.lo,
            self.hi / r.hi,
        ];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}
