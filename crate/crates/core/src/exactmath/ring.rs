//! Coefficient rings and elimination over them.
//!
//! Resultants are computed as Sylvester determinants with fraction-free
//! (Bareiss) elimination, which only needs exact division in the
//! coefficient ring. The same code serves rational, univariate and
//! bivariate coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Rational;

/// An integral domain with exact division.
pub trait CoeffRing: Clone + PartialEq + std::fmt::Debug {
    fn zero_el() -> Self;
    fn one_el() -> Self;
    fn is_zero_el(&self) -> bool;
    fn add_el(&self, other: &Self) -> Self;
    fn sub_el(&self, other: &Self) -> Self;
    fn mul_el(&self, other: &Self) -> Self;
    fn neg_el(&self) -> Self;
    /// `self / d` when `d` divides `self` exactly.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    fn pow_el(&self, e: usize) -> Self {
        let mut acc = Self::one_el();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_el(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_el(&base);
            }
        }
        acc
    }
}

impl CoeffRing for Rational {
    fn zero_el() -> Self {
        Zero::zero()
    }
    fn one_el() -> Self {
        One::one()
    }
    fn is_zero_el(&self) -> bool {
        Zero::is_zero(self)
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
        if Zero::is_zero(d) {
            None
        } else {
            Some(self / d)
        }
    }
}

impl CoeffRing for BigInt {
    fn zero_el() -> Self {
        Zero::zero()
    }
    fn one_el() -> Self {
        One::one()
    }
    fn is_zero_el(&self) -> bool {
        Zero::is_zero(self)
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
        if Zero::is_zero(d) {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
}

macro_rules! forward_owned_binop {
    ($t:ty, $tr:ident, $m:ident) => {
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                std::ops::$tr::$m(&self, rhs)
            }
        }
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(self, &rhs)
            }
        }
    };
}
pub(crate) use forward_owned_binop;


/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn determinant<R: CoeffRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one_el();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut negate = false;
    let mut prev = R::one_el();
    for k in 0..n - 1 {
        if m[k][k].is_zero_el() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero_el()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return R::zero_el(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul_el(&m[k][k]).sub_el(&m[i][k].mul_el(&m[k][j]));
                m[i][j] = t
                    .div_exact(&prev)
                    .expect("Bareiss step divides exactly in an integral domain");
            }
            m[i][k] = R::zero_el();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg_el()
    } else {
        d
    }
}

pub(crate) fn trim<R: CoeffRing>(c: &[R]) -> &[R] {
    let mut len = c.len();
    while len > 0 && c[len - 1].is_zero_el() {
        len -= 1;
    }
    &c[..len]
}

/// Rows of `x^k * p` for `k = count-1 .. 0`, coefficients written from
/// degree `width-1` down to degree 0.
pub(crate) fn shifted_rows<R: CoeffRing>(p: &[R], count: usize, width: usize) -> Vec<Vec<R>> {
    let deg = p.len() - 1;
    (0..count)
        .rev()
        .map(|k| {
            let mut row = vec![R::zero_el(); width];
            for (i, c) in p.iter().enumerate() {
                // column index of x^(i+k)
                row[width - 1 - (i + k)] = c.clone();
            }
            debug_assert!(deg + k < width);
            row
        })
        .collect()
}

/// Sylvester matrix of `f` (degree m) and `g` (degree n), coefficients
/// given lowest degree first.
pub fn sylvester_matrix<R: CoeffRing>(f: &[R], g: &[R]) -> Vec<Vec<R>> {
    let f = trim(f);
    let g = trim(g);
    let m = f.len() - 1;
    let n = g.len() - 1;
    let width = m + n;
    let mut rows = shifted_rows(f, n, width);
    rows.extend(shifted_rows(g, m, width));
    rows
}

/// Resultant of two polynomials over `R` given by their coefficient lists
/// (lowest degree first). Returns `None` if either is the zero polynomial.
pub fn resultant<R: CoeffRing>(f: &[R], g: &[R]) -> Option<R> {
    let f = trim(f);
    let g = trim(g);
    if f.is_empty() || g.is_empty() {
        return None;
    }
    Some(determinant(sylvester_matrix(f, g)))
}

/// Coefficients (lowest first) of the `j`-th subresultant of `f` and `g`,
/// for `j < min(deg f, deg g)`.
pub fn subresultant<R: CoeffRing>(f: &[R], g: &[R], j: usize) -> Vec<R> {
    let f = trim(f);
    let g = trim(g);
    let m = f.len() - 1;
    let n = g.len() - 1;
    assert!(j < m.min(n), "subresultant index out of range");
    let width = m + n - j;
    let mut rows = shifted_rows(f, n - j, width);
    rows.extend(shifted_rows(g, m - j, width));
    let r = rows.len();
    (0..=j)
        .map(|i| {
            let col_i = width - 1 - i;
            let mat: Vec<Vec<R>> = rows
                .iter()
                .map(|row| {
                    let mut sel: Vec<R> = row[..r - 1].to_vec();
                    sel.push(row[col_i].clone());
                    sel
                })
                .collect();
            determinant(mat)
        })
        .collect()
}
