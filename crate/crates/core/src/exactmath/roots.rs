//! Real-root isolation with Sturm sequences and rational bisection.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, two_pow_neg, Rational};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Default isolation width, `2^-40`.
pub fn default_tolerance() -> Rational {
    two_pow_neg(40)
}

/// A closed rational interval `[lo, hi]` holding exactly one real root.
/// When `lo < hi` the root lies strictly inside and neither endpoint is a
/// root; `lo == hi` marks an exact rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn exact(r: Rational) -> Self {
        RootInterval { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn to_json(&self) -> RootIntervalJson {
        RootIntervalJson { lo: format_rational(&self.lo), hi: format_rational(&self.hi) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootIntervalJson {
    pub lo: String,
    pub hi: String,
}

/// Sturm sequence of a squarefree polynomial.
pub struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(f: &UniPoly) -> Self {
        let mut seq = vec![f.clone()];
        let d = f.derivative();
        if !d.is_zero() {
            seq.push(d);
            loop {
                let n = seq.len();
                let r = seq[n - 2].div_rem(&seq[n - 1]).1;
                if r.is_zero() {
                    break;
                }
                seq.push(-&r);
            }
        }
        SturmChain { seq }
    }

    pub fn variations(&self, x: &Rational) -> usize {
        UniPoly::sign_changes_at(&self.seq, x)
    }

    /// Distinct roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Isolates every distinct real root of `f` in the closed interval
/// `[lo, hi]`, one interval of width at most `tol` per root, sorted.
/// Repeated roots are reduced to simple ones first.
pub fn isolate_real_roots(
    f: &UniPoly,
    lo: &Rational,
    hi: &Rational,
    tol: &Rational,
) -> Result<Vec<RootInterval>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("root isolation"));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if lo > hi {
        return Err(Error::InvalidInput("empty isolation interval".into()));
    }
    let sf = f.squarefree_part();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&sf);
    let mut out = Vec::new();
    if sf.eval(lo).is_zero() {
        out.push(RootInterval::exact(lo.clone()));
    }
    let mut stack = vec![(lo.clone(), hi.clone(), chain.count(lo, hi))];
    let two = Rational::from_integer(2.into());
    // Depth-first, right half pushed first, so output comes out ascending.
    while let Some((l, r, n)) = stack.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            if sf.eval(&r).is_zero() {
                out.push(RootInterval::exact(r));
                continue;
            }
            if &r - &l <= *tol && !sf.eval(&l).is_zero() {
                out.push(RootInterval { lo: l, hi: r });
                continue;
            }
        }
        let m = (&l + &r) / &two;
        let left = chain.count(&l, &m);
        stack.push((m.clone(), r, n - left));
        stack.push((l, m, left));
    }
    Ok(out)
}

/// Isolates all real roots of `f` on the whole line.
pub fn isolate_all_real_roots(f: &UniPoly, tol: &Rational) -> Result<Vec<RootInterval>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("root isolation"));
    }
    let b = f.root_bound();
    isolate_real_roots(f, &-&b, &b, tol)
}
