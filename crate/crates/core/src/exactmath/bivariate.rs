use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use super::ring::CoeffRing;
use super::univariate::UniPoly;

/// Dense bivariate polynomial over the rationals.
///
/// Coefficient `(i, j)` multiplies `s^i t^j`, where `s` is the first and `t`
/// the second variable. The grid is always tight: its last row and last
/// column each hold a nonzero entry, except for the zero polynomial, which
/// is the 1x1 grid `[0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiPoly {
    rows: usize,
    cols: usize,
    coeffs: Vec<Rational>,
}

impl BiPoly {
    /// Builds from a `rows x cols` generator and trims the grid.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut coeffs = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                coeffs.push(f(i, j));
            }
        }
        Self::tight(rows, cols, coeffs)
    }

    fn tight(rows: usize, cols: usize, coeffs: Vec<Rational>) -> Self {
        let mut max_i = None;
        let mut max_j = None;
        for i in 0..rows {
            for j in 0..cols {
                if !coeffs[i * cols + j].is_zero() {
                    max_i = Some(max_i.map_or(i, |m: usize| m.max(i)));
                    max_j = Some(max_j.map_or(j, |m: usize| m.max(j)));
                }
            }
        }
        match (max_i, max_j) {
            (Some(mi), Some(mj)) => {
                if mi + 1 == rows && mj + 1 == cols {
                    return BiPoly { rows, cols, coeffs };
                }
                let (r, c) = (mi + 1, mj + 1);
                let mut out = Vec::with_capacity(r * c);
                for i in 0..r {
                    for j in 0..c {
                        out.push(coeffs[i * cols + j].clone());
                    }
                }
                BiPoly { rows: r, cols: c, coeffs: out }
            }
            _ => Self::zero(),
        }
    }

    /// From `(i, j, coefficient)` triples; repeated monomials are summed.
    pub fn from_terms(terms: &[(usize, usize, Rational)]) -> Self {
        let rows = terms.iter().map(|t| t.0 + 1).max().unwrap_or(1);
        let cols = terms.iter().map(|t| t.1 + 1).max().unwrap_or(1);
        let mut coeffs = vec![Rational::zero(); rows * cols];
        for (i, j, c) in terms {
            coeffs[i * cols + j] += c;
        }
        Self::tight(rows, cols, coeffs)
    }

    pub fn zero() -> Self {
        BiPoly { rows: 1, cols: 1, coeffs: vec![Rational::zero()] }
    }

    pub fn constant(c: Rational) -> Self {
        BiPoly { rows: 1, cols: 1, coeffs: vec![c] }
    }

    /// `c0 + c1 s + c2 t`.
    pub fn linear(c0: Rational, c1: Rational, c2: Rational) -> Self {
        Self::from_terms(&[(0, 0, c0), (1, 0, c1), (0, 1, c2)])
    }

    pub fn from_uni_first(p: &UniPoly) -> Self {
        Self::from_fn(p.coeffs().len().max(1), 1, |i, _| p.coeff(i))
    }

    pub fn from_uni_second(p: &UniPoly) -> Self {
        Self::from_fn(1, p.coeffs().len().max(1), |_, j| p.coeff(j))
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        if i < self.rows && j < self.cols {
            self.coeffs[i * self.cols + j].clone()
        } else {
            Rational::zero()
        }
    }

    fn at(&self, i: usize, j: usize) -> &Rational {
        &self.coeffs[i * self.cols + j]
    }

    /// Nonzero terms as `(i, j, coefficient)`, row-major.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, self.at(i, j)))
            .filter(|(_, _, c)| !c.is_zero())
    }

    /// Coefficient grid as nested rows, `grid[i][j]` for `s^i t^j`.
    pub fn grid(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows == 1 && self.cols == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    pub fn deg_first(&self) -> usize {
        self.rows - 1
    }

    pub fn deg_second(&self) -> usize {
        self.cols - 1
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for i in (0..self.rows).rev() {
            let mut row = Rational::zero();
            for j in (0..self.cols).rev() {
                row = row * t + self.at(i, j);
            }
            acc = acc * s + row;
        }
        acc
    }

    /// Substitutes the first variable, leaving a polynomial in the second.
    pub fn subst_first(&self, s: &Rational) -> UniPoly {
        UniPoly::new(
            (0..self.cols)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for i in (0..self.rows).rev() {
                        acc = acc * s + self.at(i, j);
                    }
                    acc
                })
                .collect(),
        )
    }

    /// Substitutes the second variable, leaving a polynomial in the first.
    pub fn subst_second(&self, t: &Rational) -> UniPoly {
        self.swap_vars().subst_first(t)
    }

    /// Coefficients with respect to the second variable, each a polynomial
    /// in the first variable.
    pub fn to_second_major(&self) -> Vec<UniPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        (0..self.cols)
            .map(|j| UniPoly::new((0..self.rows).map(|i| self.at(i, j).clone()).collect()))
            .collect()
    }

    pub fn from_second_major(cs: &[UniPoly]) -> Self {
        let rows = cs.iter().map(|c| c.coeffs().len()).max().unwrap_or(1).max(1);
        let cols = cs.len().max(1);
        Self::from_fn(rows, cols, |i, j| cs.get(j).map_or_else(Rational::zero, |c| c.coeff(i)))
    }

    pub fn swap_vars(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn partial_first(&self) -> Self {
        if self.rows == 1 {
            return Self::zero();
        }
        Self::from_fn(self.rows - 1, self.cols, |i, j| {
            self.at(i + 1, j) * Rational::from_integer(BigInt::from(i + 1))
        })
    }

    pub fn partial_second(&self) -> Self {
        if self.cols == 1 {
            return Self::zero();
        }
        Self::from_fn(self.rows, self.cols - 1, |i, j| {
            self.at(i, j + 1) * Rational::from_integer(BigInt::from(j + 1))
        })
    }

    pub fn pow(&self, e: usize) -> Self {
        self.pow_el(e)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::tight(self.rows, self.cols, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Leading term under graded lexicographic order (total degree first,
    /// then degree in the first variable).
    pub fn leading_term(&self) -> Option<(usize, usize, &Rational)> {
        self.terms().max_by(|a, b| grlex(a.0, a.1, b.0, b.1))
    }

    /// Canonical representative of the line `{c * self : c != 0}`:
    /// integer coefficients with gcd 1 and a positive graded-lex leading
    /// coefficient. Equal polynomials up to a scalar have equal canonical
    /// forms.
    pub fn canonical(&self) -> Self {
        let Some((_, _, lead)) = self.leading_term() else {
            return Self::zero();
        };
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, _, c) in self.terms() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// `self / d` if `d` divides `self` exactly over the rationals.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (di, dj, dc) = d.leading_term()?;
        let (di, dj, dc) = (di, dj, dc.clone());
        let mut rem = self.clone();
        let mut quot: Vec<(usize, usize, Rational)> = Vec::new();
        while let Some((ri, rj, rc)) = rem.leading_term() {
            if ri < di || rj < dj {
                return None;
            }
            let q = (ri - di, rj - dj, rc / &dc);
            let term = BiPoly::from_terms(std::slice::from_ref(&q));
            rem = &rem - &(&term * d);
            quot.push(q);
        }
        Some(Self::from_terms(&quot))
    }

    /// Divides by the monic content with respect to the second variable,
    /// i.e. removes every factor that depends on the first variable only.
    pub fn primitive_in_second(&self) -> Self {
        let cs = self.to_second_major();
        let content = cs.iter().fold(UniPoly::zero(), |g, c| g.gcd(c));
        if content.is_zero() {
            return self.clone();
        }
        let parts: Vec<UniPoly> =
            cs.iter().map(|c| c.div_exact(&content).expect("content divides")).collect();
        Self::from_second_major(&parts)
    }

    pub fn to_string_in(&self, s: &str, t: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(usize, usize, &Rational)> = self.terms().collect();
        terms.sort_by(|a, b| grlex(b.0, b.1, a.0, a.1));
        let parts = terms
            .into_iter()
            .map(|(i, j, c)| {
                let mut mono = Vec::new();
                match i {
                    0 => {}
                    1 => mono.push(s.to_string()),
                    _ => mono.push(format!("{s}^{i}")),
                }
                match j {
                    0 => {}
                    1 => mono.push(t.to_string()),
                    _ => mono.push(format!("{t}^{j}")),
                }
                format_term(c, &mono.join("*"))
            })
            .collect();
        join_terms(parts)
    }
}

fn grlex(ai: usize, aj: usize, bi: usize, bj: usize) -> Ordering {
    (ai + aj).cmp(&(bi + bj)).then(ai.cmp(&bi))
}

pub(crate) fn format_term(c: &Rational, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        mono.to_string()
    } else if (-c).is_one() {
        format!("-{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

pub(crate) fn join_terms(terms: Vec<String>) -> String {
    let mut out = String::new();
    for (k, t) in terms.into_iter().enumerate() {
        if k == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("s", "t"))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let r = self.rows.max(rhs.rows);
        let c = self.cols.max(rhs.cols);
        BiPoly::from_fn(r, c, |i, j| self.coeff(i, j) + rhs.coeff(i, j))
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let r = self.rows.max(rhs.rows);
        let c = self.cols.max(rhs.cols);
        BiPoly::from_fn(r, c, |i, j| self.coeff(i, j) - rhs.coeff(i, j))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let rows = self.rows + rhs.rows - 1;
        let cols = self.cols + rhs.cols - 1;
        let mut out = vec![Rational::zero(); rows * cols];
        for (i, j, a) in self.terms() {
            for (k, l, b) in rhs.terms() {
                out[(i + k) * cols + (j + l)] += a * b;
            }
        }
        BiPoly::tight(rows, cols, out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { rows: self.rows, cols: self.cols, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

super::ring::forward_owned_binop!(BiPoly, Add, add);
super::ring::forward_owned_binop!(BiPoly, Sub, sub);
super::ring::forward_owned_binop!(BiPoly, Mul, mul);

impl CoeffRing for BiPoly {
    fn zero_el() -> Self {
        BiPoly::zero()
    }
    fn one_el() -> Self {
        BiPoly::constant(Rational::one())
    }
    fn is_zero_el(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn add_el(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_el(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_el(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_el(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        BiPoly::div_exact(self, d)
    }
}
