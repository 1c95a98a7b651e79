//! The curves `gamma_{X,V}`.
//!
//! With `x = (Y-X)/4`, `u = (V-U)/4` and
//!
//! ```text
//! A = X - ((Y-X)/4 - 1)^2          (= y^2)
//! B = V - ((V-U)/4 + 1)^2          (= v^2)
//! R = (V-X)/2 - (1-a)(Y-X)/4 - (1+a)(V-U)/4
//! ```
//!
//! the equal-distance condition reads `R = b (v - y)`. Multiplying the four
//! sign conjugates `t b sqrt(B) - s b sqrt(A) - R` gives
//! `H = (b^2 A + b^2 B - R^2)^2 - 4 b^4 A B`, a quartic in `(Y, U)`.
//! A point lies on the curve when `H = 0`, `A >= 0` and `B >= 0`.

mod collinear;
mod overlap;
mod recover;
mod report;
mod witness;

pub use collinear::{collinear_diagnostics, CollinearLine, CollinearReport};
pub use overlap::{
    coincidence_groups, intersection_guard, overlap_audit, CoincidenceGroups, GuardResult, OverlapAudit,
    SharedFactor,
};
pub use recover::{
    extremal_points, recover_from_extremal, recover_with, recovery_audit, ExtremalPoint, RadicandForm,
    RecoveredPair, Recovery, RecoveryCounts,
};
pub use report::{all_curves, curves_report, CurveEntry, CurvesReport};
pub use witness::{reconstruct_witnesses, WitnessPair};

use num_traits::{One, Signed, Zero};

use crate::census::Quadruple;
use crate::error::{Error, Result};
use crate::exactmath::rational::{int, rat, Rational};
use crate::exactmath::BiPoly;
use crate::frame::AnchorFrame;

/// `A`, `B`, `R` and `H` over whatever two variables the inputs use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CurveForms {
    pub a_rad: BiPoly,
    pub b_rad: BiPoly,
    pub r: BiPoly,
    pub h: BiPoly,
}

/// Builds the forms from `X, Y, U, V`, each given as a (constant or linear)
/// polynomial in the two running variables.
pub(crate) fn curve_forms(frame: &AnchorFrame, x: &BiPoly, y: &BiPoly, u: &BiPoly, v: &BiPoly) -> CurveForms {
    let quarter = BiPoly::constant(rat(1, 4));
    let one = BiPoly::constant(int(1));
    let xq = &(y - x) * &quarter;
    let uq = &(v - u) * &quarter;
    let a_rad = x - &(&xq - &one).pow(2);
    let b_rad = v - &(&uq + &one).pow(2);
    let r = &(&(v - x).scale(&rat(1, 2)) - &xq.scale(&(int(1) - &frame.a))) - &uq.scale(&(int(1) + &frame.a));
    let b2 = &frame.b * &frame.b;
    let inner = &(&a_rad + &b_rad).scale(&b2) - &r.pow(2);
    let h = &inner.pow(2) - &(&a_rad * &b_rad).scale(&(&b2 * &b2 * int(4)));
    CurveForms { a_rad, b_rad, r, h }
}

/// One labeled curve `gamma_{X,V}` in the `(Y, U)` plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoly {
    x: Rational,
    v: Rational,
    frame: AnchorFrame,
    forms: CurveForms,
    canonical: BiPoly,
}

impl CurvePoly {
    pub fn label(&self) -> (&Rational, &Rational) {
        (&self.x, &self.v)
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn frame(&self) -> &AnchorFrame {
        &self.frame
    }

    /// `A(Y)`, constant in `U`.
    pub fn a_rad(&self) -> &BiPoly {
        &self.forms.a_rad
    }

    /// `B(U)`, constant in `Y`.
    pub fn b_rad(&self) -> &BiPoly {
        &self.forms.b_rad
    }

    pub fn r(&self) -> &BiPoly {
        &self.forms.r
    }

    pub fn h(&self) -> &BiPoly {
        &self.forms.h
    }

    pub fn canonical(&self) -> &BiPoly {
        &self.canonical
    }

    pub fn contains(&self, y: &Rational, u: &Rational) -> bool {
        membership(self, y, u)
    }
}

pub fn build_curve(frame: &AnchorFrame, x: &Rational, v: &Rational) -> Result<CurvePoly> {
    if x.is_negative() || v.is_negative() {
        return Err(Error::InvalidInput(format!("curve label ({x}, {v}) must be nonnegative")));
    }
    let s = BiPoly::linear(int(0), int(1), int(0));
    let t = BiPoly::linear(int(0), int(0), int(1));
    let forms = curve_forms(frame, &BiPoly::constant(x.clone()), &s, &t, &BiPoly::constant(v.clone()));
    let canonical = forms.h.canonical();
    Ok(CurvePoly { x: x.clone(), v: v.clone(), frame: frame.clone(), forms, canonical })
}

/// Evaluates the stored polynomials at `(Y, U)`.
pub fn membership(curve: &CurvePoly, y: &Rational, u: &Rational) -> bool {
    curve.forms.h.eval(y, u).is_zero()
        && !curve.forms.a_rad.eval(y, u).is_negative()
        && !curve.forms.b_rad.eval(y, u).is_negative()
}

/// `A`, `B`, `R` at a single quadruple, without building polynomials.
pub fn radicands(frame: &AnchorFrame, q: &Quadruple) -> (Rational, Rational, Rational) {
    let xq = (&q.y - &q.x) / int(4);
    let uq = (&q.v - &q.u) / int(4);
    let a = &q.x - (&xq - int(1)) * (&xq - int(1));
    let b = &q.v - (&uq + int(1)) * (&uq + int(1));
    let r = (&q.v - &q.x) / int(2) - (int(1) - &frame.a) * &xq - (int(1) + &frame.a) * &uq;
    (a, b, r)
}

/// `H` from already evaluated `A`, `B`, `R`.
pub fn h_value(b: &Rational, a_rad: &Rational, b_rad: &Rational, r: &Rational) -> Rational {
    let b2 = b * b;
    let inner = &b2 * (a_rad + b_rad) - r * r;
    &inner * &inner - int(4) * &b2 * &b2 * a_rad * b_rad
}

/// Membership of `(Y, U)` in `gamma_{X,V}` from the closed form.
pub fn membership_closed(frame: &AnchorFrame, q: &Quadruple) -> bool {
    let (a, b, r) = radicands(frame, q);
    !a.is_negative() && !b.is_negative() && h_value(&frame.b, &a, &b, &r).is_zero()
}

/// The dual curve `gamma*_{Y,U}`: the same conditions with `(X, V)` as the
/// running point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCurve {
    y: Rational,
    u: Rational,
    forms: CurveForms,
}

impl DualCurve {
    pub fn new(frame: &AnchorFrame, y: &Rational, u: &Rational) -> Self {
        let s = BiPoly::linear(int(0), int(1), int(0));
        let t = BiPoly::linear(int(0), int(0), int(1));
        let forms = curve_forms(frame, &s, &BiPoly::constant(y.clone()), &BiPoly::constant(u.clone()), &t);
        DualCurve { y: y.clone(), u: u.clone(), forms }
    }

    pub fn label(&self) -> (&Rational, &Rational) {
        (&self.y, &self.u)
    }

    /// `H*` in `(X, V)`.
    pub fn h(&self) -> &BiPoly {
        &self.forms.h
    }

    pub fn contains(&self, x: &Rational, v: &Rational) -> bool {
        self.forms.h.eval(x, v).is_zero()
            && !self.forms.a_rad.eval(x, v).is_negative()
            && !self.forms.b_rad.eval(x, v).is_negative()
    }
}

pub fn dual_membership(frame: &AnchorFrame, y: &Rational, u: &Rational, x: &Rational, v: &Rational) -> bool {
    DualCurve::new(frame, y, u).contains(x, v)
}

/// `Y <= (2 + sqrt X)^2`, decided exactly: with `t = Y - X - 4` this is
/// `t <= 4 sqrt X`.
pub fn within_bound(x: &Rational, y: &Rational) -> bool {
    let t = y - x - int(4);
    !t.is_positive() || &t * &t <= int(16) * x
}

/// Leading coefficient of `H` in `U`, `(b^2 + (1+a)^2)^2 / 256`; it is a
/// nonzero constant unless `b = 0` and `a = -1`.
pub(crate) fn lead_u_constant(frame: &AnchorFrame) -> Option<Rational> {
    let s = &frame.a + Rational::one();
    let c = &frame.b * &frame.b + &s * &s;
    (!c.is_zero()).then(|| &c * &c / int(256))
}
