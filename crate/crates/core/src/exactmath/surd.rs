//! Elements `p + q*sqrt(d)` of a real quadratic field, with exact sign
//! tests, and rational interval enclosures for nested square roots.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::rational::{rational_sqrt, sqrt_bounds, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub p: Rational,
    pub q: Rational,
    pub d: Rational,
}

impl Surd {
    /// `p + q*sqrt(d)`, folded to a rational when `sqrt(d)` is rational.
    pub fn new(p: Rational, q: Rational, d: Rational) -> Self {
        assert!(!d.is_negative(), "surd radicand must be nonnegative");
        if q.is_zero() || d.is_zero() {
            return Surd { p, q: Rational::zero(), d };
        }
        if let Some(s) = rational_sqrt(&d) {
            return Surd { p: p + q * s, q: Rational::zero(), d };
        }
        Surd { p, q, d }
    }

    pub fn rational(p: Rational, d: &Rational) -> Self {
        Surd { p, q: Rational::zero(), d: d.clone() }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.q.is_zero().then_some(&self.p)
    }

    pub fn add(&self, o: &Surd) -> Surd {
        Surd::new(&self.p + &o.p, &self.q + &o.q, self.d.clone())
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        Surd::new(&self.p - &o.p, &self.q - &o.q, self.d.clone())
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        Surd::new(
            &self.p * &o.p + &self.q * &o.q * &self.d,
            &self.p * &o.q + &self.q * &o.p,
            self.d.clone(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Surd {
        Surd::new(&self.p * c, &self.q * c, self.d.clone())
    }

    pub fn add_rational(&self, c: &Rational) -> Surd {
        Surd::new(&self.p + c, self.q.clone(), self.d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Exact sign of the real number.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&Rational::zero());
        let sq = self.q.cmp(&Rational::zero());
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * &self.d;
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Rational enclosure of the value with width roughly `2^-bits`.
    pub fn enclose(&self, bits: u32) -> Interval {
        if self.q.is_zero() {
            return Interval::point(self.p.clone());
        }
        let (lo, hi) = sqrt_bounds(&self.d, bits);
        Interval::new(lo, hi).scale(&self.q).shift(&self.p)
    }
}

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn shift(&self, c: &Rational) -> Self {
        Interval::new(&self.lo + c, &self.hi + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    pub fn add(&self, o: &Interval) -> Self {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn neg(&self) -> Self {
        Interval::new(-&self.hi, -&self.lo)
    }

    /// Enclosure of `sqrt` over the nonnegative part of the interval.
    pub fn sqrt(&self, bits: u32) -> Self {
        let zero = Rational::zero();
        let lo = if self.lo.is_positive() { sqrt_bounds(&self.lo, bits).0 } else { zero.clone() };
        let hi = if self.hi.is_positive() { sqrt_bounds(&self.hi, bits).1 } else { zero };
        Interval::new(lo, hi)
    }
}
