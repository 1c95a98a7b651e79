use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{h_value, radicands};
use crate::census::Quadruple;
use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, rational_sqrt, Rational};
use crate::frame::{AnchorFrame, PlanePoint};

/// `q1 = (x, y)` and `q2 = (u, v)` with `y`, `v` stored as square and sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    #[serde(serialize_with = "ser_rat")]
    pub x: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub y_sq: Rational,
    pub y_sign: i8,
    #[serde(serialize_with = "ser_rat")]
    pub u: Rational,
    #[serde(serialize_with = "ser_rat")]
    pub v_sq: Rational,
    pub v_sign: i8,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl WitnessPair {
    pub fn q1_is(&self, p: &PlanePoint) -> bool {
        p.x == self.x && &p.y * &p.y == self.y_sq && sign_of(&p.y) == self.y_sign
    }

    pub fn q2_is(&self, p: &PlanePoint) -> bool {
        p.x == self.u && &p.y * &p.y == self.v_sq && sign_of(&p.y) == self.v_sign
    }

    /// Both points, when `y` and `v` are rational.
    pub fn points(&self) -> Option<(PlanePoint, PlanePoint)> {
        let y = rational_sqrt(&self.y_sq)? * int(self.y_sign.into());
        let v = rational_sqrt(&self.v_sq)? * int(self.v_sign.into());
        Some((PlanePoint::new(self.x.clone(), y), PlanePoint::new(self.u.clone(), v)))
    }
}

/// Sign of `t sqrt(B) - s sqrt(A)` for `A, B >= 0`.
fn combo_sign(t: i8, s: i8, a: &Rational, b: &Rational) -> Ordering {
    let t = if b.is_zero() { 0 } else { t };
    let s = if a.is_zero() { 0 } else { s };
    match (t, s) {
        (0, s) => 0.cmp(&s),
        (t, 0) => t.cmp(&0),
        (t, s) if t != s => t.cmp(&0),
        (t, _) if t > 0 => b.cmp(a),
        _ => a.cmp(b),
    }
}

/// Does `b (t sqrt(B) - s sqrt(A)) = R` hold?
fn third_equation_holds(frame_b: &Rational, t: i8, s: i8, a: &Rational, b: &Rational, r: &Rational) -> bool {
    if frame_b.is_zero() {
        return r.is_zero();
    }
    let rr = r / frame_b;
    // (t sqrt B - s sqrt A)^2 = A + B - 2 ts sqrt(AB) must equal rr^2
    let m = a + b - &rr * &rr;
    if &m * &m != int(4) * a * b {
        return false;
    }
    let ts = (t * s) as i64;
    if (int(ts) * &m).is_negative() {
        return false;
    }
    combo_sign(t, s, a, b) == rr.cmp(&Rational::zero())
}

/// All `(q1, q2)` realizing the quadruple: `x`, `u` are forced, `|y|`,
/// `|v|` are forced, and the signs are those satisfying the third
/// equation. At most four; duplicates from zero radicands are merged.
pub fn reconstruct_witnesses(frame: &AnchorFrame, quad: &Quadruple) -> Result<Vec<WitnessPair>> {
    let (a, b, r) = radicands(frame, quad);
    if a.is_negative() || b.is_negative() {
        return Err(Error::InvalidInput("negative radicand: no real witness".into()));
    }
    if !h_value(&frame.b, &a, &b, &r).is_zero() {
        return Err(Error::NotAMember);
    }
    let x = (&quad.y - &quad.x) / int(4);
    let u = (&quad.v - &quad.u) / int(4);
    let mut out: Vec<WitnessPair> = Vec::new();
    for s in [1i8, -1] {
        for t in [1i8, -1] {
            if !third_equation_holds(&frame.b, t, s, &a, &b, &r) {
                continue;
            }
            let w = WitnessPair {
                x: x.clone(),
                y_sq: a.clone(),
                y_sign: if a.is_zero() { 0 } else { s },
                u: u.clone(),
                v_sq: b.clone(),
                v_sign: if b.is_zero() { 0 } else { t },
            };
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Invariant("member quadruple without a sign assignment".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    fn f01() -> AnchorFrame {
        AnchorFrame::ints(0, 1)
    }

    fn pts(w: &WitnessPair) -> (PlanePoint, PlanePoint) {
        w.points().unwrap()
    }

    #[test]
    fn two_reflected_witnesses() {
        let ws = reconstruct_witnesses(&f01(), &Quadruple::ints(1, 5, 5, 1)).unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(pts(&ws[0]), (PlanePoint::ints(1, 1), PlanePoint::ints(-1, 1)));
        assert_eq!(pts(&ws[1]), (PlanePoint::ints(1, -1), PlanePoint::ints(-1, -1)));
    }

    #[test]
    fn degenerate_witnesses() {
        let ws = reconstruct_witnesses(&f01(), &Quadruple::ints(1, 1, 1, 1)).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(pts(&ws[0]), (PlanePoint::ints(0, 0), PlanePoint::ints(0, 0)));
        let ws = reconstruct_witnesses(&f01(), &Quadruple::ints(1, 9, 9, 1)).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(pts(&ws[0]), (PlanePoint::ints(2, 0), PlanePoint::ints(-2, 0)));
    }

    #[test]
    fn irrational_witnesses() {
        let ws = reconstruct_witnesses(&f01(), &Quadruple::ints(1, 2, 2, 1)).unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[0].x, rat(1, 4));
        assert_eq!(ws[0].u, rat(-1, 4));
        assert_eq!(ws[0].y_sq, rat(7, 16));
        assert_eq!(ws[0].v_sq, rat(7, 16));
        assert_eq!((ws[0].y_sign, ws[0].v_sign), (1, 1));
        assert_eq!((ws[1].y_sign, ws[1].v_sign), (-1, -1));
        assert!(ws[0].points().is_none());
    }

    #[test]
    fn asymmetric_signs() {
        // q1 = (1, 2), q2 = (-1, 0) share |p3 q|^2 = 2
        let frame = f01();
        let q1 = PlanePoint::ints(1, 2);
        let q2 = PlanePoint::ints(-1, 0);
        let [p1, p2, _] = frame.anchors();
        let quad = Quadruple::new(q1.dist_sq(&p1), q1.dist_sq(&p2), q2.dist_sq(&p1), q2.dist_sq(&p2));
        let ws = reconstruct_witnesses(&frame, &quad).unwrap();
        assert!(ws.iter().any(|w| w.q1_is(&q1) && w.q2_is(&q2)));
        assert!(ws.len() <= 4);
    }

    #[test]
    fn non_member_errors() {
        assert_eq!(reconstruct_witnesses(&f01(), &Quadruple::ints(1, 1, 2, 1)), Err(Error::NotAMember));
        assert!(reconstruct_witnesses(&f01(), &Quadruple::ints(1, 20, 20, 1)).is_err());
    }
}
