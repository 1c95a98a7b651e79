//! Resultants and greatest common divisors of bivariate polynomials, with
//! the second variable as the main (eliminated) variable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::bivariate::BiPoly;
use super::rational::Rational;
use super::ring::{self, CoeffRing};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Sylvester resultant of `f` and `g` with respect to their second
/// variable, as a polynomial in the first variable. It is identically zero
/// exactly when `f` and `g` share a factor of positive degree in the second
/// variable.
pub fn resultant_in_second_var(f: &BiPoly, g: &BiPoly) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("resultant operand"));
    }
    let fc = f.to_second_major();
    let gc = g.to_second_major();
    if fc.len() < 2 || gc.len() < 2 {
        return Ok(ring::resultant(&fc, &gc).expect("nonzero operands"));
    }
    Ok(resultant_by_interpolation(&fc, &gc))
}

/// Lowest-first integer coefficients of `c * p` where `c` clears every
/// denominator in `ps`; returns `c`.
fn clear_denominators(ps: &[UniPoly]) -> (BigInt, Vec<Vec<BigInt>>) {
    let c = ps.iter().flat_map(|p| p.coeffs()).fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let ints = ps.iter().map(|p| p.coeffs().iter().map(|r| (r * &c).to_integer()).collect()).collect();
    (c, ints)
}

fn eval_int(p: &[BigInt], s: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * s + c)
}

/// `Res_t` of polynomials with `deg_t f = m`, `deg_t g = n`: its degree in
/// `s` is at most `n deg_s f + m deg_s g`, so that many integer samples plus
/// one determine it. Each sample is a fraction-free integer determinant of
/// the Sylvester matrix with the formal degrees kept.
fn resultant_by_interpolation(fc: &[UniPoly], gc: &[UniPoly]) -> UniPoly {
    let (m, n) = (fc.len() - 1, gc.len() - 1);
    let deg = |cs: &[UniPoly]| cs.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    let bound = n * deg(fc) + m * deg(gc);
    let (cf, fi) = clear_denominators(fc);
    let (cg, gi) = clear_denominators(gc);
    let width = m + n;
    let values: Vec<Rational> = (0..=bound as i64)
        .map(|k| {
            let s = BigInt::from(k);
            let fv: Vec<BigInt> = fi.iter().map(|p| eval_int(p, &s)).collect();
            let gv: Vec<BigInt> = gi.iter().map(|p| eval_int(p, &s)).collect();
            let mut rows = ring::shifted_rows(&fv, n, width);
            rows.extend(ring::shifted_rows(&gv, m, width));
            Rational::from_integer(ring::determinant(rows))
        })
        .collect();
    // undo the scaling: Res(cf f, cg g) = cf^n cg^m Res(f, g)
    let scale = Rational::from_integer(cf.pow(n as u32) * cg.pow(m as u32));
    interpolate_at_naturals(&values).scale(&(Rational::one() / scale))
}

/// The polynomial of degree `< values.len()` taking `values[k]` at `k`.
fn interpolate_at_naturals(values: &[Rational]) -> UniPoly {
    // Newton divided differences on nodes 0, 1, 2, ...
    let mut dd = values.to_vec();
    for j in 1..dd.len() {
        let denom = Rational::from_integer(BigInt::from(j));
        for i in (j..dd.len()).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / &denom;
        }
    }
    let mut p = UniPoly::zero();
    for (k, c) in dd.iter().enumerate().rev() {
        // p = p * (s - k) + c
        p = &(&p * &UniPoly::linear(Rational::from_integer(BigInt::from(-(k as i64))), Rational::one()))
            + &UniPoly::constant(c.clone());
    }
    p
}

/// Eliminates the shared second variable of `f(x, z)` and `g(y, z)`,
/// returning `Res_z(f, g)` as a polynomial in `(x, y)`.
pub fn cross_resultant(f: &BiPoly, g: &BiPoly) -> Result<BiPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial("resultant operand"));
    }
    let fc: Vec<BiPoly> = f.to_second_major().iter().map(BiPoly::from_uni_first).collect();
    let gc: Vec<BiPoly> = g.to_second_major().iter().map(BiPoly::from_uni_second).collect();
    Ok(ring::resultant(&fc, &gc).expect("nonzero operands"))
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b` over `Q[s]`.
fn pseudo_rem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<UniPoly> = a.to_vec();
    let mut steps = a.len() - db;
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        debug_assert!(r[dr].is_zero());
        while r.last().is_some_and(UniPoly::is_zero) {
            r.pop();
        }
        steps -= 1;
    }
    // Remaining multiplications so the result is the textbook pseudo-remainder.
    let extra = lb.pow(steps);
    r.iter().map(|c| c * &extra).collect()
}

fn content(cs: &[UniPoly]) -> UniPoly {
    cs.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn div_all(cs: &[UniPoly], d: &UniPoly) -> Vec<UniPoly> {
    cs.iter().map(|c| c.div_exact(d).expect("exact division")).collect()
}

/// GCD of two bivariate polynomials via the subresultant polynomial
/// remainder sequence over `Q[s][t]`, in canonical form. `gcd(f, 0)` is
/// the canonical form of `f`.
pub fn gcd_bivariate(f: &BiPoly, g: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return g.canonical();
    }
    if g.is_zero() {
        return f.canonical();
    }
    let fa = f.to_second_major();
    let ga = g.to_second_major();
    let cf = content(&fa);
    let cg = content(&ga);
    let d = cf.gcd(&cg);
    let mut a = div_all(&fa, &cf);
    let mut b = div_all(&ga, &cg);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let dpoly = BiPoly::from_uni_first(&d);
    if b.len() == 1 {
        return dpoly.canonical();
    }
    let mut gg = UniPoly::constant(num_traits::One::one());
    let mut h = gg.clone();
    loop {
        let delta = a.len() - b.len();
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            let pb = div_all(&b, &content(&b));
            return (&dpoly * &BiPoly::from_second_major(&pb)).canonical();
        }
        if r.len() == 1 {
            return dpoly.canonical();
        }
        a = b;
        let divisor = &gg * &h.pow(delta);
        b = div_all(&r, &divisor);
        gg = a.last().expect("nonempty").clone();
        h = match delta {
            0 => h,
            1 => gg.clone(),
            _ => gg
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h update divides exactly"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    fn s() -> BiPoly {
        BiPoly::linear(int(0), int(1), int(0))
    }
    fn t() -> BiPoly {
        BiPoly::linear(int(0), int(0), int(1))
    }
    fn c(v: i64) -> BiPoly {
        BiPoly::constant(int(v))
    }

    #[test]
    fn resultant_by_back_substitution() {
        // f = t^2 - s, g = t - u over (s, t) and (u, t): Res_t = u^2 - s
        let f = &(&t() * &t()) - &s();
        let g = &t() - &s(); // first variable plays the role of u
        let r = cross_resultant(&f, &g).unwrap();
        let expect = &(&t() * &t()) - &s(); // u^2 - s in (s, u)
        assert_eq!(r, expect);
    }

    #[test]
    fn resultant_of_equal_polys_vanishes() {
        let f = &(&t() * &t()) - &(&s() * &t());
        assert!(resultant_in_second_var(&f, &f).unwrap().is_zero());
        assert!(resultant_in_second_var(&f, &BiPoly::zero()).is_err());
    }

    #[test]
    fn linear_cross_resultant() {
        // f = x + 1 - z, g = 1 + y - z  ->  x - y
        let f = &(&s() + &c(1)) - &t();
        let g = &(&c(1) + &s()) - &t();
        let r = cross_resultant(&f, &g).unwrap();
        assert_eq!(r, &s() - &t());
    }

    #[test]
    fn gcd_examples() {
        let f = &(&s() - &t()) * &(&s() + &t());
        let g = &(&s() - &t()) * &(&s() + &t().scale(&int(2)));
        assert_eq!(gcd_bivariate(&f, &g), (&s() - &t()).canonical());
        assert_eq!(gcd_bivariate(&BiPoly::zero(), &(&s() + &t()).scale(&int(3))), &s() + &t());
        let one = gcd_bivariate(&(&s() + &t()), &(&s() - &t()));
        assert_eq!(one, BiPoly::constant(Rational::from_integer(1.into())));
    }

    #[test]
    fn gcd_keeps_first_variable_content() {
        // f = (s+1)(t - s), g = (s+1)(t + 2)
        let f = &(&s() + &c(1)) * &(&t() - &s());
        let g = &(&s() + &c(1)) * &(&t() + &c(2));
        assert_eq!(gcd_bivariate(&f, &g), &s() + &c(1));
    }

    #[test]
    fn gcd_of_higher_degree_chain() {
        let common = &(&(&t() * &t()) - &(&s() * &s() * &s())) + &c(1);
        let f = &common * &(&(&t() * &t() * &t()) + &s());
        let g = &common * &(&(&s() * &t()) - &c(4));
        assert_eq!(gcd_bivariate(&f, &g), common.canonical());
    }

    #[test]
    fn interpolation_matches_sylvester_determinant() {
        use crate::curvefam::build_curve;
        use crate::frame::AnchorFrame;
        let frame = AnchorFrame::new(rat(1, 3), rat(3, 2));
        let labels = [(int(2), int(3)), (int(5), rat(1, 2)), (int(1), int(1)), (rat(7, 4), int(9))];
        for (x1, v1) in &labels {
            for (x2, v2) in &labels {
                let (f, g) = (build_curve(&frame, x1, v1).unwrap(), build_curve(&frame, x2, v2).unwrap());
                let direct = ring::resultant(&f.h().to_second_major(), &g.h().to_second_major()).unwrap();
                assert_eq!(resultant_in_second_var(f.h(), g.h()).unwrap(), direct);
            }
        }
        let f = &(&s() * &t()) + &c(3);
        let g = &(&t() * &t()) - &s().pow(3);
        let direct = ring::resultant(&f.to_second_major(), &g.to_second_major()).unwrap();
        assert_eq!(resultant_in_second_var(&f, &g).unwrap(), direct);
    }
}
