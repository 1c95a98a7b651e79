//! Zeros of a trivariate polynomial `F` on a product `A x B x C`, the
//! discrete curves `gamma_{a,b}` and the incidence lower bound
//! `I >= (1/d) sum_c M_c^2 >= M^2/(d n)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::rational::{format_rational, int, rational_from_json, Rational};
use crate::exactmath::{cross_resultant, BiPoly, UniPoly};

/// Sparse polynomial in `(x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TriPoly {
    terms: BTreeMap<(usize, usize, usize), Rational>,
}

impl TriPoly {
    /// Sums repeated monomials and drops zero coefficients.
    pub fn new(monomials: impl IntoIterator<Item = (usize, usize, usize, Rational)>) -> Self {
        let mut terms: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, j, k, c) in monomials {
            *terms.entry((i, j, k)).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        TriPoly { terms }
    }

    pub fn from_ints(monomials: &[(usize, usize, usize, i64)]) -> Self {
        Self::new(monomials.iter().map(|&(i, j, k, c)| (i, j, k, int(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(i, j, k)| i + j + k).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn eval(&self, x: &Rational, y: &Rational, z: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, ((i, j, k), c)| {
            acc + c * pow(x, *i) * pow(y, *j) * pow(z, *k)
        })
    }

    /// `z -> F(a, b, z)`.
    pub fn at_xy(&self, a: &Rational, b: &Rational) -> UniPoly {
        let deg = self.terms.keys().map(|t| t.2).max().unwrap_or(0);
        let mut cs = vec![Rational::zero(); deg + 1];
        for ((i, j, k), c) in &self.terms {
            cs[*k] += c * pow(a, *i) * pow(b, *j);
        }
        UniPoly::new(cs)
    }

    /// `(x, z) -> F(x, b, z)`.
    pub fn at_y(&self, b: &Rational) -> BiPoly {
        BiPoly::from_terms(&self.terms.iter().map(|((i, j, k), c)| (*i, *k, c * pow(b, *j))).collect::<Vec<_>>())
    }

    /// `(y, z) -> F(a, y, z)`.
    pub fn at_x(&self, a: &Rational) -> BiPoly {
        BiPoly::from_terms(&self.terms.iter().map(|((i, j, k), c)| (*j, *k, c * pow(a, *i))).collect::<Vec<_>>())
    }
}

fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZfInstance {
    pub f: TriPoly,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

/// `{"monomials": [[i, j, k, "coef"], ...], "A": [...], "B": [...], "C": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZfInstanceJson {
    pub monomials: Vec<(usize, usize, usize, serde_json::Value)>,
    #[serde(rename = "A")]
    pub a: Vec<serde_json::Value>,
    #[serde(rename = "B")]
    pub b: Vec<serde_json::Value>,
    #[serde(rename = "C")]
    pub c: Vec<serde_json::Value>,
}

fn set_of(vals: &[serde_json::Value]) -> Result<Vec<Rational>> {
    let mut out = vals.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

impl ZfInstance {
    /// Sets are sorted and deduplicated.
    pub fn new(f: TriPoly, a: Vec<Rational>, b: Vec<Rational>, c: Vec<Rational>) -> Self {
        let norm = |mut v: Vec<Rational>| {
            v.sort();
            v.dedup();
            v
        };
        ZfInstance { f, a: norm(a), b: norm(b), c: norm(c) }
    }

    pub fn from_json(j: &ZfInstanceJson) -> Result<Self> {
        let mons = j
            .monomials
            .iter()
            .map(|(i, jj, k, c)| Ok((*i, *jj, *k, rational_from_json(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZfInstance { f: TriPoly::new(mons), a: set_of(&j.a)?, b: set_of(&j.b)?, c: set_of(&j.c)? })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> ZfInstanceJson {
        let s = |v: &[Rational]| v.iter().map(|r| serde_json::Value::String(format_rational(r))).collect();
        ZfInstanceJson {
            monomials: self
                .f
                .terms()
                .map(|((i, j, k), c)| (*i, *j, *k, serde_json::Value::String(format_rational(c))))
                .collect(),
            a: s(&self.a),
            b: s(&self.b),
            c: s(&self.c),
        }
    }

    pub fn d(&self) -> usize {
        self.f.degree()
    }

    /// `max(|A|, |B|, |C|)`.
    pub fn n(&self) -> usize {
        self.a.len().max(self.b.len()).max(self.c.len())
    }

    fn index(set: &[Rational], v: &Rational, name: &str) -> Result<usize> {
        set.binary_search(v).map_err(|_| Error::InvalidInput(format!("{v} is not in {name}")))
    }
}

/// `zero[ic][ia][ib]` = `F(a, b, c) == 0`.
struct ZeroTable {
    zero: Vec<Vec<Vec<bool>>>,
}

impl ZeroTable {
    fn new(inst: &ZfInstance) -> Self {
        let zero = inst
            .c
            .par_iter()
            .map(|c| inst.a.iter().map(|a| inst.b.iter().map(|b| inst.f.eval(a, b, c).is_zero()).collect()).collect())
            .collect();
        ZeroTable { zero }
    }

    fn at(&self, ia: usize, ib: usize, ic: usize) -> bool {
        self.zero[ic][ia][ib]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCount {
    pub m: usize,
    /// `Pi_c` for every `c` in `C`, in order; pairs in `A x B` order.
    pub fibers: Vec<(Rational, Vec<(Rational, Rational)>)>,
}

impl ZeroCount {
    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.fibers.iter().map(|(_, f)| f.len()).collect()
    }
}

fn require_nonzero(inst: &ZfInstance) -> Result<()> {
    if inst.f.is_zero() {
        Err(Error::ZeroPolynomial("F"))
    } else {
        Ok(())
    }
}

pub fn count_zeros(inst: &ZfInstance) -> Result<ZeroCount> {
    require_nonzero(inst)?;
    let t = ZeroTable::new(inst);
    Ok(count_from_table(inst, &t))
}

fn count_from_table(inst: &ZfInstance, t: &ZeroTable) -> ZeroCount {
    let fibers: Vec<(Rational, Vec<(Rational, Rational)>)> = inst
        .c
        .iter()
        .enumerate()
        .map(|(ic, c)| {
            let pairs = (0..inst.a.len())
                .flat_map(|ia| (0..inst.b.len()).map(move |ib| (ia, ib)))
                .filter(|&(ia, ib)| t.at(ia, ib, ic))
                .map(|(ia, ib)| (inst.a[ia].clone(), inst.b[ib].clone()))
                .collect();
            (c.clone(), pairs)
        })
        .collect();
    let m = fibers.iter().map(|(_, f)| f.len()).sum();
    ZeroCount { m, fibers }
}

/// Index form of `gamma_{a,b}`: `(x, y)` with some `z` in `C` such that
/// `F(x, b, z) = F(a, y, z) = 0`.
fn curve_indices(inst: &ZfInstance, t: &ZeroTable, ia: usize, ib: usize) -> Vec<(usize, usize)> {
    let mut hit = vec![false; inst.a.len() * inst.b.len()];
    for ic in 0..inst.c.len() {
        let xs: Vec<usize> = (0..inst.a.len()).filter(|&x| t.at(x, ib, ic)).collect();
        if xs.is_empty() {
            continue;
        }
        for y in (0..inst.b.len()).filter(|&y| t.at(ia, y, ic)) {
            for &x in &xs {
                hit[x * inst.b.len() + y] = true;
            }
        }
    }
    hit.iter().enumerate().filter(|(_, h)| **h).map(|(k, _)| (k / inst.b.len(), k % inst.b.len())).collect()
}

pub fn discrete_curve(inst: &ZfInstance, a: &Rational, b: &Rational) -> Result<Vec<(Rational, Rational)>> {
    let ia = ZfInstance::index(&inst.a, a, "A")?;
    let ib = ZfInstance::index(&inst.b, b, "B")?;
    let t = ZeroTable::new(inst);
    Ok(curve_indices(inst, &t, ia, ib).into_iter().map(|(x, y)| (inst.a[x].clone(), inst.b[y].clone())).collect())
}

/// Pairs `(a, b)` in `A x B` with `F(a, b, z)` identically zero in `z`.
pub fn degeneracy_check(inst: &ZfInstance) -> Vec<(Rational, Rational)> {
    inst.a
        .iter()
        .flat_map(|a| inst.b.iter().map(move |b| (a, b)))
        .filter(|(a, b)| inst.f.at_xy(a, b).is_zero())
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect()
}

/// `Res_z(F(x, b, z), F(a, y, z))` in `(x, y)`.
pub fn resultant_curve(inst: &ZfInstance, a: &Rational, b: &Rational) -> Result<BiPoly> {
    let f1 = inst.f.at_y(b);
    let f2 = inst.f.at_x(a);
    if f1.deg_second() == 0 || f2.deg_second() == 0 {
        return Err(Error::InvalidInput(format!("F(x, {b}, z) or F({a}, y, z) has no z-degree")));
    }
    cross_resultant(&f1, &f2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZfReport {
    pub d: usize,
    pub n: usize,
    pub sizes: [usize; 3],
    #[serde(rename = "M")]
    pub m: usize,
    /// `[c, M_c]`.
    pub fibers: Vec<(String, usize)>,
    #[serde(rename = "I")]
    pub i: usize,
    pub sum_mc_sq: usize,
    /// `(1/d) sum M_c^2`.
    pub bound_fibers: Option<String>,
    /// `M^2 / (d n)`.
    pub bound_total: Option<String>,
    pub degenerate_pairs: Vec<(String, String)>,
    pub chain_holds: bool,
    /// Checked only without degenerate pairs.
    pub chain_asserted: bool,
    pub containment_ok: bool,
    pub max_pair_multiplicity: usize,
    pub pair_multiplicity_ok: bool,
    pub unequal_sizes: bool,
}

impl ZfReport {
    pub fn ok(&self) -> bool {
        self.containment_ok && self.pair_multiplicity_ok && (!self.chain_asserted || self.chain_holds)
    }
}

/// `I`, the two bounds, the containment `(a1, b2) in gamma_{a2, b1}` for
/// all pairs of pairs in a common fiber, and the largest number of `c`
/// shared by two nondegenerate pairs.
pub fn incidence_lower_bound(inst: &ZfInstance) -> Result<ZfReport> {
    require_nonzero(inst)?;
    let t = ZeroTable::new(inst);
    let zc = count_from_table(inst, &t);
    let (na, nb, nc) = (inst.a.len(), inst.b.len(), inst.c.len());
    let curves: Vec<Vec<(usize, usize)>> = (0..na)
        .into_par_iter()
        .flat_map_iter(|ia| (0..nb).map(move |ib| (ia, ib)))
        .map(|(ia, ib)| curve_indices(inst, &t, ia, ib))
        .collect();
    let on_curve = |ia: usize, ib: usize, x: usize, y: usize| curves[ia * nb + ib].binary_search(&(x, y)).is_ok();
    let i: usize = curves.iter().map(Vec::len).sum();

    let containment_ok = (0..nc).into_par_iter().all(|ic| {
        let fiber: Vec<(usize, usize)> =
            (0..na).flat_map(|a| (0..nb).map(move |b| (a, b))).filter(|&(a, b)| t.at(a, b, ic)).collect();
        fiber.iter().all(|&(a1, b1)| fiber.iter().all(|&(a2, b2)| on_curve(a2, b1, a1, b2)))
    });

    let degenerate = degeneracy_check(inst);
    let masks: Vec<Vec<bool>> =
        (0..na).flat_map(|a| (0..nb).map(move |b| (a, b))).map(|(a, b)| (0..nc).map(|c| t.at(a, b, c)).collect()).collect();
    let is_deg: Vec<bool> = (0..na)
        .flat_map(|a| (0..nb).map(move |b| (a, b)))
        .map(|(a, b)| inst.f.at_xy(&inst.a[a], &inst.b[b]).is_zero())
        .collect();
    let cells = masks.len();
    let max_pair_multiplicity = (0..cells)
        .into_par_iter()
        .filter(|&p| !is_deg[p])
        .map(|p| {
            (0..cells)
                .filter(|&q| q != p && !is_deg[q])
                .map(|q| masks[p].iter().zip(&masks[q]).filter(|(x, y)| **x && **y).count())
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);

    let d = inst.d();
    let sum_sq: usize = zc.fibers.iter().map(|(_, f)| f.len() * f.len()).sum();
    let n = inst.n();
    let (bound_fibers, bound_total) = if d == 0 || n == 0 {
        (None, None)
    } else {
        let b1 = Rational::new(sum_sq.into(), d.into());
        let b2 = Rational::new((zc.m * zc.m).into(), (d * n).into());
        (Some(b1), Some(b2))
    };
    let chain_holds = match (&bound_fibers, &bound_total) {
        (Some(b1), Some(b2)) => Rational::from_integer(i.into()) >= *b1 && b1 >= b2,
        _ => true,
    };
    Ok(ZfReport {
        d,
        n,
        sizes: [na, nb, nc],
        m: zc.m,
        fibers: zc.fibers.iter().map(|(c, f)| (format_rational(c), f.len())).collect(),
        i,
        sum_mc_sq: sum_sq,
        bound_fibers: bound_fibers.as_ref().map(format_rational),
        bound_total: bound_total.as_ref().map(format_rational),
        degenerate_pairs: degenerate.iter().map(|(a, b)| (format_rational(a), format_rational(b))).collect(),
        chain_holds,
        chain_asserted: degenerate.is_empty(),
        containment_ok,
        max_pair_multiplicity,
        pair_multiplicity_ok: max_pair_multiplicity <= d,
        unequal_sizes: !(na == nb && nb == nc),
    })
}
