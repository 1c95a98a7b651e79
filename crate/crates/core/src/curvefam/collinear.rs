use num_traits::{One, Zero};

use super::build_curve;
use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, Rational};
use crate::frame::AnchorFrame;

/// The zero set of `R` when `b = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollinearLine {
    /// `U = slope * Y + intercept`.
    Sloped { slope: Rational, intercept: Rational },
    /// `a = -1`: the line `Y = y`.
    Vertical { y: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinearReport {
    pub line: CollinearLine,
    /// `H = c * R^4`.
    pub constant: Rational,
    pub multiplicity_four: bool,
}

impl CollinearReport {
    pub fn to_json(&self) -> serde_json::Value {
        let line = match &self.line {
            CollinearLine::Sloped { slope, intercept } => serde_json::json!({
                "kind": "sloped",
                "slope": format_rational(slope),
                "intercept": format_rational(intercept),
            }),
            CollinearLine::Vertical { y } => serde_json::json!({"kind": "vertical", "Y": format_rational(y)}),
        };
        serde_json::json!({
            "line": line,
            "constant": format_rational(&self.constant),
            "multiplicity_four": self.multiplicity_four,
        })
    }
}

/// For `b = 0` the curve collapses onto the line `R = 0` taken four times.
pub fn collinear_diagnostics(frame: &AnchorFrame, x: &Rational, v: &Rational) -> Result<CollinearReport> {
    if !frame.b.is_zero() {
        return Err(Error::InvalidInput("collinear diagnostics need b = 0".into()));
    }
    let curve = build_curve(frame, x, v)?;
    let r4 = curve.r().pow(4);
    let (_, _, lr) = r4.leading_term().ok_or_else(|| Error::Invariant("R vanishes identically".into()))?;
    let (_, _, lh) = curve.h().leading_term().ok_or_else(|| Error::Invariant("H vanishes identically".into()))?;
    let constant = lh / lr;
    let multiplicity_four = (curve.h() - &r4.scale(&constant)).is_zero();
    if !multiplicity_four {
        return Err(Error::Invariant("H is not a multiple of R^4 in a collinear frame".into()));
    }
    let line = if frame.covertical_p2() {
        // R = (V - Y)/2
        CollinearLine::Vertical { y: v.clone() }
    } else {
        let s = &frame.a + Rational::one();
        let slope = (Rational::one() - &frame.a) / &s;
        let intercept = (&s * x + (&frame.a - Rational::one()) * v) / &s;
        // cross-check against R itself: R(0, c) = 0 and R_Y/R_U = -slope
        let r = curve.r();
        debug_assert!(r.eval(&int(0), &intercept).is_zero());
        debug_assert_eq!(-r.coeff(1, 0) / r.coeff(0, 1), slope);
        CollinearLine::Sloped { slope, intercept }
    };
    Ok(CollinearReport { line, constant, multiplicity_four })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;

    fn sloped(frame: AnchorFrame, x: i64, v: i64) -> (Rational, Rational) {
        match collinear_diagnostics(&frame, &int(x), &int(v)).unwrap().line {
            CollinearLine::Sloped { slope, intercept } => (slope, intercept),
            l => panic!("unexpected {l:?}"),
        }
    }

    #[test]
    fn lines() {
        assert_eq!(sloped(AnchorFrame::ints(0, 0), 1, 3), (int(1), int(-2)));
        assert_eq!(sloped(AnchorFrame::ints(0, 0), 4, 4), (int(1), int(0)));
        let third = AnchorFrame::new(rat(1, 3), int(0));
        assert_eq!(sloped(third.clone(), 2, 7).0, rat(1, 2));
        assert_eq!(sloped(third, 0, 1).0, rat(1, 2));
    }

    #[test]
    fn quartic_multiplicity() {
        let rep = collinear_diagnostics(&AnchorFrame::ints(3, 0), &int(2), &int(5)).unwrap();
        assert!(rep.multiplicity_four);
        assert_eq!(rep.constant, int(1));
    }

    #[test]
    fn vertical_and_errors() {
        let rep = collinear_diagnostics(&AnchorFrame::ints(-1, 0), &int(2), &int(5)).unwrap();
        assert_eq!(rep.line, CollinearLine::Vertical { y: int(5) });
        assert!(collinear_diagnostics(&AnchorFrame::ints(0, 1), &int(1), &int(1)).is_err());
    }
}
