//! Sparse multivariate polynomials over `C`.

mod parse;

pub use parse::{default_names, format_poly, parse_poly};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result, C64};

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then the exponent of the first variable, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_j`.
    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = vec![0; nvars];
        e[j] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for (&e, &xi) in self.0.iter().zip(x) {
            if e > 0 {
                acc *= xi.powu(e);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in a fixed number of variables. No stored coefficient is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, C64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, j), C64::new(1.0, 0.0));
        p
    }

    pub fn monomial(m: Monomial, c: C64) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C64)>>(
        nvars: usize,
        terms: I,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Adds `c * m`, dropping the term if it cancels exactly.
    pub fn add_term(&mut self, m: Monomial, c: C64) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c == C64::new(0.0, 0.0) {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = *o.get() + c;
                if s == C64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree in variable `j` (0 for the zero polynomial).
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|m| m.0[j]).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        assert_eq!(x.len(), self.nvars, "point has wrong dimension");
        self.terms.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c * s);
        }
        p
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.norm()))
    }

    /// Drops coefficients of modulus at most `tol` times the largest one.
    pub fn prune(&self, tol: f64) -> Self {
        let cut = tol * self.max_coeff();
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.norm() > cut)
            .map(|(m, c)| (m.clone(), *c))
            .collect();
        MultiPoly {
            nvars: self.nvars,
            terms,
        }
    }

    /// Also zeroes real or imaginary parts at most `tol` times the largest
    /// coefficient modulus.
    pub fn clean(&self, tol: f64) -> Self {
        let cut = tol * self.max_coeff();
        let snap = |x: f64| if x.abs() <= cut { 0.0 } else { x };
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), C64::new(snap(c.re), snap(c.im)));
        }
        p
    }

    /// Re-embeds into `nvars` variables, placing variable `j` at `map[j]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (j, &k) in map.iter().enumerate() {
                e[k] += m.0[j];
            }
            p.add_term(Monomial(e), *c);
        }
        p
    }

    /// Largest coefficient difference, for approximate comparisons.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (self - other).max_coeff()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), *c);
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = MultiPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Square system `f_1, ..., f_n` in `n` variables with a multidegree
/// `d_j >= deg_{x_j} f_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    polys: Vec<MultiPoly>,
    multidegree: Vec<u32>,
    names: Vec<String>,
}

impl PolySystem {
    /// Multidegree defaults to the largest degree in each variable (at least 1).
    pub fn new(polys: Vec<MultiPoly>) -> Result<Self> {
        let n = polys.first().map_or(0, MultiPoly::nvars);
        Self::with_names(polys, default_names(n))
    }

    pub fn with_names(polys: Vec<MultiPoly>, names: Vec<String>) -> Result<Self> {
        let n = names.len();
        if polys.len() != n || n == 0 {
            return Err(Error::NotSquare {
                npolys: polys.len(),
                nvars: n,
            });
        }
        for p in &polys {
            if p.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.nvars(),
                });
            }
        }
        let multidegree = (0..n)
            .map(|j| {
                polys
                    .iter()
                    .map(|p| p.degree_in(j))
                    .max()
                    .unwrap_or(0)
                    .max(1)
            })
            .collect();
        Ok(PolySystem {
            polys,
            multidegree,
            names,
        })
    }

    /// Overrides the multidegree; each entry must bound the actual degree.
    pub fn with_multidegree(mut self, d: Vec<u32>) -> Result<Self> {
        if d.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: d.len(),
            });
        }
        for (j, &dj) in d.iter().enumerate() {
            let actual = self.polys.iter().map(|p| p.degree_in(j)).max().unwrap_or(0);
            if dj < actual.max(1) {
                return Err(Error::MultidegreeTooSmall {
                    var: j,
                    given: dj,
                    actual,
                });
            }
        }
        self.multidegree = d;
        Ok(self)
    }

    /// Parses one expression per polynomial with the given variable names.
    pub fn parse(exprs: &[&str], names: &[&str]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| String::from(*s)).collect();
        let polys = exprs
            .iter()
            .map(|e| parse_poly(e, &names))
            .collect::<Result<Vec<_>>>()?;
        Self::with_names(polys, names)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn multidegree(&self) -> &[u32] {
        &self.multidegree
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Values `f_i(x)`.
    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }

    /// `max_i |f_i(x)|`.
    pub fn residual(&self, x: &[C64]) -> f64 {
        self.eval(x).iter().fold(0.0, |m, v| m.max(v.norm()))
    }
}

/// `(y_j^g f(y_<j, x_>=j) - x_j^g f(y_<=j, x_>j)) / (x_j - y_j)` as a
/// polynomial in `(x_1..x_n, y_1..y_n)`.
///
/// With `g = 0` this is the ordinary divided difference
/// `(f(.., x_j, ..) - f(.., y_j, ..)) / (x_j - y_j)` with the earlier
/// coordinates already switched to `y`.
pub fn divided_difference(f: &MultiPoly, j: usize, g: u32) -> MultiPoly {
    let n = f.nvars();
    assert!(j < n);
    let mut out = MultiPoly::zero(2 * n);
    for (m, &c) in f.terms() {
        let e = m.0[j];
        // Factor shared by both shifted evaluations.
        let mut base = vec![0u32; 2 * n];
        base[n..n + j].copy_from_slice(&m.0[..j]);
        base[j + 1..n].copy_from_slice(&m.0[j + 1..n]);
        // (y^g x^e - x^g y^e) / (x - y) = sign * (x y)^min * sum_t x^t y^{|e-g|-1-t}
        let (lo, span, sign) = if e >= g {
            (g, e - g, 1.0)
        } else {
            (e, g - e, -1.0)
        };
        for t in 0..span {
            let mut ex = base.clone();
            ex[j] += lo + t;
            ex[n + j] += lo + span - 1 - t;
            out.add_term(Monomial(ex), c * sign);
        }
    }
    out
}
