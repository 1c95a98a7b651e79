//! Recovering the label `(X, V)` from a `Y`-extremal point `(Y0, U0)`.
//!
//! `H_U = 0` on the unsquared equation fixes `V` through a quadratic
//! (a single value `V = U0 - 4` when `a = -1`). With `V` fixed the equation
//! becomes `L(X) = -b s sqrt(A(X))` with `L` linear; squaring gives a
//! quadratic in `X`. Both radicands are written `X - rho (Y0 - X - 4)^2` and
//! `V - rho (V - U0 + 4)^2`; the published quadratics use `rho = 1/4`, the
//! radicands of the curve itself have `rho = 1/16`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use super::CurvePoly;
use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, rat, two_pow_neg, Rational};
use crate::exactmath::ring::subresultant;
use crate::exactmath::surd::{Interval, Surd};
use crate::exactmath::{default_tolerance, gcd_bivariate, isolate_all_real_roots, resultant_in_second_var, RootInterval, UniPoly};
use crate::frame::AnchorFrame;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadicandForm {
    /// `rho = 1/4`, the quadratics exactly as published.
    #[default]
    Verbatim,
    /// `rho = 1/16`, matching `A` and `B` of the curve.
    Geometric,
}

impl RadicandForm {
    pub fn rho(self) -> Rational {
        match self {
            RadicandForm::Verbatim => rat(1, 4),
            RadicandForm::Geometric => rat(1, 16),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RadicandForm::Verbatim => "verbatim",
            RadicandForm::Geometric => "geometric",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredPair {
    pub x: RootInterval,
    pub v: RootInterval,
}

impl RecoveredPair {
    /// Both coordinates within `eps` of `(x, v)`.
    pub fn near(&self, x: &Rational, v: &Rational, eps: &Rational) -> bool {
        let close = |iv: &RootInterval, t: &Rational| &iv.lo - eps <= *t && *t <= &iv.hi + eps;
        close(&self.x, x) && close(&self.v, v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub form: RadicandForm,
    /// Integer-primitive quadratic in `V`; `None` on the `a = -1` branch.
    pub v_quadratic: Option<UniPoly>,
    pub v_values: Vec<RootInterval>,
    pub candidates: Vec<RecoveredPair>,
}

impl Recovery {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "form": self.form.name(),
            "v_quadratic": self.v_quadratic.as_ref().map(|q| q.to_string_in("V")),
            "v_values": self.v_values.iter().map(RootInterval::to_json).collect::<Vec<_>>(),
            "candidates": self.candidates.iter().map(|c| serde_json::json!({
                "X": c.x.to_json(),
                "V": c.v.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Scales to integer coefficients with gcd 1 and positive leading term.
fn integer_primitive(p: &UniPoly) -> UniPoly {
    let Some(lc) = p.leading_coeff() else {
        return UniPoly::zero();
    };
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in p.coeffs() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    let mut f = Rational::new(den, num);
    if lc.is_negative() {
        f = -f;
    }
    p.scale(&f)
}

/// Enclosure of a surd, exact when rational.
fn surd_interval(s: &Surd, tol: &Rational) -> RootInterval {
    if let Some(r) = s.as_rational() {
        return RootInterval::exact(r.clone());
    }
    let mut bits = 48;
    loop {
        let iv = s.enclose(bits);
        if iv.width() <= *tol {
            return RootInterval { lo: iv.lo, hi: iv.hi };
        }
        bits += 32;
    }
}

/// `(-p1 + sign * sqrt(delta)) / (2 alpha)` for `delta > 0` in the field.
fn nested_root(p1: &Surd, delta: &Surd, alpha: &Rational, sign: i64, tol: &Rational) -> RootInterval {
    let half = (int(2) * alpha).recip();
    if let Some(d) = delta.as_rational() {
        if let Some(sd) = crate::exactmath::rational::rational_sqrt(d) {
            let x = p1.scale(&int(-1)).add_rational(&(sd * int(sign))).scale(&half);
            return surd_interval(&x, tol);
        }
    }
    let mut bits = 64;
    loop {
        let di = delta.enclose(bits);
        if di.lo.is_positive() {
            let root = di.sqrt(bits);
            let root = if sign < 0 { root.neg() } else { root };
            let iv: Interval = p1.enclose(bits).neg().add(&root).scale(&half);
            if iv.width() <= *tol {
                return RootInterval { lo: iv.lo, hi: iv.hi };
            }
        }
        bits += 32;
    }
}

/// `(V, beta)` pairs with `beta = b t sqrt(B(V))` fixed by `H_U = 0`.
fn v_branches(frame: &AnchorFrame, u0: &Rational, rho: &Rational) -> (Option<UniPoly>, Vec<(Surd, Surd)>) {
    let (a, b) = (&frame.a, &frame.b);
    if frame.covertical_p2() {
        let v = u0 - int(4);
        if v.is_negative() {
            return (None, Vec::new());
        }
        let mut out = vec![(Surd::rational(v.clone(), &v), Surd::new(int(0), b.clone(), v.clone()))];
        if !v.is_zero() && !b.is_zero() {
            out.push((Surd::rational(v.clone(), &v), Surd::new(int(0), -b.clone(), v.clone())));
        }
        return (None, out);
    }
    let s = a + Rational::one();
    let k = b * b / (&s * &s);
    let c = rho + int(16) * rho * rho * &k;
    let e = int(4) - u0;
    let quad = integer_primitive(&UniPoly::new(vec![&c * &e * &e, int(2) * &c * &e - int(1), c.clone()]));
    let disc = int(1) - int(4) * &c * &e;
    if disc.is_negative() {
        return (Some(quad), Vec::new());
    }
    let p = (int(1) - int(2) * &c * &e) / (int(2) * &c);
    let q = (int(2) * &c).recip();
    let beta_scale = int(4) * b * b * rho / &s;
    let signs: &[i64] = if disc.is_zero() { &[1] } else { &[-1, 1] };
    let out = signs
        .iter()
        .map(|&sg| {
            let v = Surd::new(p.clone(), &q * int(sg), disc.clone());
            let beta = v.add_rational(&e).scale(&beta_scale);
            (v, beta)
        })
        .collect();
    (Some(quad), out)
}

/// Real `X` solving `L(X)^2 = b^2 A(X)` for one `(V, beta)`.
fn x_roots(
    frame: &AnchorFrame,
    y0: &Rational,
    u0: &Rational,
    v: &Surd,
    beta: &Surd,
    rho: &Rational,
    tol: &Rational,
) -> Vec<RootInterval> {
    let (a, b) = (&frame.a, &frame.b);
    let b2 = b * b;
    let m = -(a + Rational::one()) / int(4);
    // L = m X + n0, n0 = K - beta
    let k_const = -(Rational::one() - a) * y0 / int(4) + (a + Rational::one()) * u0 / int(4);
    let n0 = v.scale(&((Rational::one() - a) / int(4))).add_rational(&k_const).sub(beta);
    let g = y0 - int(4);
    let alpha = &m * &m + &b2 * rho;
    if alpha.is_zero() {
        return Vec::new();
    }
    let p1 = n0.scale(&(int(2) * &m)).add_rational(&(-(&b2 * (int(1) + int(2) * rho * &g))));
    let p0 = n0.mul(&n0).add_rational(&(&b2 * rho * &g * &g));
    let delta = p1.mul(&p1).sub(&p0.scale(&(int(4) * &alpha)));
    match delta.signum() {
        Ordering::Less => Vec::new(),
        Ordering::Equal => vec![surd_interval(&p1.scale(&(-(int(2) * &alpha).recip())), tol)],
        Ordering::Greater => {
            vec![nested_root(&p1, &delta, &alpha, -1, tol), nested_root(&p1, &delta, &alpha, 1, tol)]
        }
    }
}

/// Candidate labels for a `Y`-extremal point, using the published
/// quadratics and the default tolerance.
pub fn recover_from_extremal(frame: &AnchorFrame, y0: &Rational, u0: &Rational) -> Result<Recovery> {
    recover_with(frame, y0, u0, RadicandForm::Verbatim, &default_tolerance())
}

/// At most two `V` values, each giving at most two `X` values.
pub fn recover_with(
    frame: &AnchorFrame,
    y0: &Rational,
    u0: &Rational,
    form: RadicandForm,
    tol: &Rational,
) -> Result<Recovery> {
    if frame.is_collinear() {
        return Err(Error::InvalidInput("recovery needs a noncollinear frame".into()));
    }
    if !tol.is_positive() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let rho = form.rho();
    let (v_quadratic, branches) = v_branches(frame, u0, &rho);
    let mut v_values: Vec<RootInterval> = Vec::new();
    let mut candidates = Vec::new();
    for (v, beta) in &branches {
        let vi = surd_interval(v, tol);
        if !v_values.contains(&vi) {
            v_values.push(vi.clone());
        }
        for x in x_roots(frame, y0, u0, v, beta, &rho, tol) {
            candidates.push(RecoveredPair { x, v: vi.clone() });
        }
    }
    Ok(Recovery { form, v_quadratic, v_values, candidates })
}

/// A real solution of `H = H_U = 0`, with `U` taken from the first
/// subresultant at a rational point of the `Y` interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPoint {
    pub y: RootInterval,
    pub y0: Rational,
    pub u0: Rational,
    /// `A(Y0)` and `B(U0)` are nonnegative up to `2^-20`.
    pub real_branch: bool,
}

pub fn extremal_points(curve: &CurvePoly, tol: &Rational) -> Result<Vec<ExtremalPoint>> {
    let mut h = curve.h().clone();
    let mut hu = h.partial_second();
    if hu.is_zero() {
        return Ok(Vec::new());
    }
    let mut res = resultant_in_second_var(&h, &hu)?;
    if res.is_zero() {
        // repeated component: work on the squarefree part
        let g = gcd_bivariate(&h, &hu);
        h = h.div_exact(&g).ok_or_else(|| Error::Invariant("gcd does not divide H".into()))?;
        hu = h.partial_second();
        if hu.is_zero() {
            return Ok(Vec::new());
        }
        res = resultant_in_second_var(&h, &hu)?;
        if res.is_zero() {
            return Err(Error::Invariant("squarefree part still has a repeated factor in U".into()));
        }
    }
    let hc = h.to_second_major();
    let gc = hu.to_second_major();
    if hc.len() < 3 || gc.len() < 2 {
        return Ok(Vec::new());
    }
    let s = subresultant(&hc, &gc, 1);
    let slack = two_pow_neg(20);
    let mut out = Vec::new();
    for y in isolate_all_real_roots(&res, tol)? {
        let y0 = y.midpoint();
        let s1 = s[1].eval(&y0);
        if s1.is_zero() {
            continue;
        }
        let u0 = -s[0].eval(&y0) / s1;
        let real_branch = curve.a_rad().eval(&y0, &u0) >= -slack.clone() && curve.b_rad().eval(&y0, &u0) >= -slack.clone();
        out.push(ExtremalPoint { y, y0, u0, real_branch });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct RecoveryCounts {
    pub points: usize,
    pub real_branch: usize,
    pub verbatim_hits: usize,
    pub geometric_hits: usize,
    pub max_candidates: usize,
}

/// Runs both forms at every extremal point of `curve` and counts the points
/// where `(X, V)` is among the candidates (within `2^-20`).
pub fn recovery_audit(curve: &CurvePoly, tol: &Rational) -> Result<(RecoveryCounts, serde_json::Value)> {
    let eps = two_pow_neg(20);
    let mut counts = RecoveryCounts::default();
    let mut rows = Vec::new();
    for p in extremal_points(curve, tol)? {
        counts.points += 1;
        counts.real_branch += usize::from(p.real_branch);
        let mut row = serde_json::json!({
            "Y": p.y.to_json(),
            "Y0": format_rational(&p.y0),
            "U0": format_rational(&p.u0),
            "real_branch": p.real_branch,
        });
        for form in [RadicandForm::Verbatim, RadicandForm::Geometric] {
            let rec = recover_with(curve.frame(), &p.y0, &p.u0, form, tol)?;
            let hit = rec.candidates.iter().any(|c| c.near(curve.x(), curve.v(), &eps));
            counts.max_candidates = counts.max_candidates.max(rec.candidates.len());
            match form {
                RadicandForm::Verbatim => counts.verbatim_hits += usize::from(hit),
                RadicandForm::Geometric => counts.geometric_hits += usize::from(hit),
            }
            row[form.name()] = serde_json::json!({"recovered": hit, "recovery": rec.to_json()});
        }
        rows.push(row);
    }
    Ok((counts, serde_json::Value::Array(rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvefam::build_curve;
    use crate::exactmath::rational::sqrt_bounds;

    #[test]
    fn published_v_quadratic() {
        let rec = recover_from_extremal(&AnchorFrame::ints(0, 1), &int(3), &int(5)).unwrap();
        assert_eq!(rec.v_quadratic, Some(UniPoly::from_ints(&[5, -14, 5])));
        assert_eq!(rec.v_values.len(), 2);
        // (7 -+ 2 sqrt 6)/5, each enclosed far tighter than the tolerance
        let (lo, hi) = sqrt_bounds(&int(6), 80);
        let minus = ((int(7) - int(2) * &hi) / int(5), (int(7) - int(2) * &lo) / int(5));
        let plus = ((int(7) + int(2) * &lo) / int(5), (int(7) + int(2) * &hi) / int(5));
        for (iv, (a, b)) in rec.v_values.iter().zip([minus, plus]) {
            assert!(iv.lo <= b && a <= iv.hi, "{iv:?}");
        }
        assert!(rec.v_values.iter().all(|v| v.width() <= default_tolerance()));
        assert!(rec.candidates.len() <= 4);
    }

    #[test]
    fn covertical_branch() {
        let rec = recover_from_extremal(&AnchorFrame::ints(-1, 1), &int(6), &int(7)).unwrap();
        assert_eq!(rec.v_quadratic, None);
        assert_eq!(rec.v_values, vec![RootInterval::exact(int(3))]);
        assert!(rec.candidates.iter().all(|c| c.v == RootInterval::exact(int(3))));
        assert!(rec.candidates.len() <= 4);
    }

    #[test]
    fn collinear_rejected() {
        assert!(recover_from_extremal(&AnchorFrame::ints(0, 0), &int(1), &int(1)).is_err());
    }

    #[test]
    fn geometric_form_recovers_label() {
        let curve = build_curve(&AnchorFrame::new(rat(1, 3), rat(3, 2)), &int(2), &int(3)).unwrap();
        let (counts, _) = recovery_audit(&curve, &default_tolerance()).unwrap();
        assert!(counts.points > 0);
        assert!(counts.geometric_hits > 0);
        assert!(counts.max_candidates <= 4);
    }
}
