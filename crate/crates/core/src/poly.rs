//! Sparse multivariate polynomials in the homogeneous coordinates
//! `z0, ..., zN` with [`MuScalar`] coefficients.
//!
//! Monomials are ordered lexicographically with `z0` most significant; the
//! canonical text form walks terms in descending monomial order, which is
//! what the renderer and all golden outputs rely on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{GaussRational, MuScalar};

/// Exponent vector of a monomial; fixed length `nvars` for a given ring.
///
/// `Ord` is the built-in lexicographic order on the exponent vector, so slot
/// 0 (`z0`) is the most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range");
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.exps[index]
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(b, a)| b - a)
                .collect(),
        }
    }

    /// All monomials of total degree exactly `degree` in `nvars` variables,
    /// in ascending lexicographic order.
    pub fn all_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; nvars];
        fn rec(slot: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if slot + 1 == current.len() {
                current[slot] = left;
                out.push(Monomial::new(current.clone()));
                current[slot] = 0;
                return;
            }
            for e in 0..=left {
                current[slot] = e;
                rec(slot + 1, left - e, current, out);
            }
            current[slot] = 0;
        }
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial::new(vec![]));
            }
            return out;
        }
        rec(0, degree, &mut current, &mut out);
        out.sort();
        out
    }
}

/// Sparse polynomial in `nvars` variables with `mu`-Laurent coefficients.
///
/// No zero coefficients are stored. A polynomial is homogeneous of degree `d`
/// when every stored monomial has total degree `d`; the `mu`-grading is
/// independent of the `z`-grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, MuScalar>,
}

impl HomPoly {
    pub fn zero(nvars: usize) -> Self {
        HomPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: MuScalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, MuScalar::one())
    }

    /// The coordinate variable `z<index>`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, index), MuScalar::one());
        p
    }

    pub fn monomial(nvars: usize, mon: Monomial, c: MuScalar) -> Self {
        assert_eq!(mon.nvars(), nvars, "monomial arity mismatch");
        let mut p = Self::zero(nvars);
        p.add_term(mon, c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &MuScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mon: &Monomial) -> MuScalar {
        self.terms.get(mon).cloned().unwrap_or_default()
    }

    /// Merge one term in, dropping the entry if it cancels.
    pub fn add_term(&mut self, mon: Monomial, c: MuScalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(mon.nvars(), self.nvars);
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get() + &c;
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    /// Largest total degree among the stored monomials (`0` for the zero
    /// polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// `Some(d)` when the polynomial is nonzero and every monomial has total
    /// degree `d`; `None` otherwise. The zero polynomial reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        let first = degrees.next()?;
        if degrees.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Split into homogeneous components, keyed by total `z`-degree. The
    /// `mu`-grading plays no role here.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, HomPoly> {
        let mut out: BTreeMap<u32, HomPoly> = BTreeMap::new();
        for (mon, c) in self.terms() {
            out.entry(mon.total_degree())
                .or_insert_with(|| HomPoly::zero(self.nvars))
                .add_term(mon.clone(), c.clone());
        }
        out
    }

    /// The degree-`d` component (zero when absent).
    pub fn component(&self, d: u32) -> HomPoly {
        let mut out = HomPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            if mon.total_degree() == d {
                out.add_term(mon.clone(), c.clone());
            }
        }
        out
    }

    /// Formal partial derivative with respect to variable `index`.
    ///
    /// Panics if `index` is not a variable of this ring.
    pub fn partial(&self, index: usize) -> HomPoly {
        assert!(
            index < self.nvars,
            "partial: variable index {index} out of range for {} variables",
            self.nvars
        );
        let mut out = HomPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            let e = mon.exp(index);
            if e == 0 {
                continue;
            }
            let mut exps = mon.exps().to_vec();
            exps[index] -= 1;
            out.add_term(Monomial::new(exps), c.scale(&GaussRational::from_int(e as i64)));
        }
        out
    }

    /// Iterated partial derivative; `orders[i]` derivatives in variable `i`.
    pub fn partial_multi(&self, orders: &[u32]) -> HomPoly {
        assert_eq!(orders.len(), self.nvars, "derivative multi-index arity");
        let mut out = self.clone();
        for (index, &k) in orders.iter().enumerate() {
            for _ in 0..k {
                if out.is_zero() {
                    return out;
                }
                out = out.partial(index);
            }
        }
        out
    }

    pub fn scale(&self, c: &MuScalar) -> HomPoly {
        if c.is_zero() {
            return HomPoly::zero(self.nvars);
        }
        let mut out = HomPoly::zero(self.nvars);
        for (mon, v) in self.terms() {
            out.add_term(mon.clone(), v * c);
        }
        out
    }

    pub fn scale_gauss(&self, c: &GaussRational) -> HomPoly {
        self.scale(&MuScalar::from_gauss(c.clone()))
    }

    /// Multiply every coefficient by `mu^shift`.
    pub fn mul_mu_pow(&self, shift: i64) -> HomPoly {
        let mut out = HomPoly::zero(self.nvars);
        for (mon, v) in self.terms() {
            out.add_term(mon.clone(), v.mul_mu_pow(shift));
        }
        out
    }

    pub fn pow(&self, exp: u32) -> HomPoly {
        let mut acc = HomPoly::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute a scalar for `mu` in every coefficient.
    pub fn specialize_mu(&self, value: &GaussRational) -> Result<HomPoly> {
        let mut out = HomPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            let v = c.specialize(value)?;
            out.add_term(mon.clone(), MuScalar::from_gauss(v));
        }
        Ok(out)
    }

    /// Substitute `images[i]` for variable `i`. All images must share one
    /// ambient ring, which becomes the ring of the result.
    pub fn substitute(&self, images: &[HomPoly]) -> Result<HomPoly> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target_nvars = match images.first() {
            Some(p) => p.nvars,
            None => 0,
        };
        let mut out = HomPoly::zero(target_nvars);
        for (mon, c) in self.terms() {
            let mut term = HomPoly::constant(target_nvars, c.clone());
            for (i, &e) in mon.exps().iter().enumerate() {
                if e > 0 {
                    term = &term * &images[i].pow(e);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// True if every coefficient is a plain rational times `mu^0`.
    pub fn is_plain_rational(&self) -> bool {
        self.terms.values().all(|c| match c.as_gauss() {
            Some(g) => g.is_real(),
            None => false,
        })
    }

    fn assert_same_ring(&self, other: &HomPoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials from different ambient rings ({} vs {} variables)",
            self.nvars, other.nvars
        );
    }
}

impl<'b> Add<&'b HomPoly> for &HomPoly {
    type Output = HomPoly;
    fn add(self, rhs: &'b HomPoly) -> HomPoly {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (mon, c) in rhs.terms() {
            out.add_term(mon.clone(), c.clone());
        }
        out
    }
}

impl<'b> Sub<&'b HomPoly> for &HomPoly {
    type Output = HomPoly;
    fn sub(self, rhs: &'b HomPoly) -> HomPoly {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (mon, c) in rhs.terms() {
            out.add_term(mon.clone(), -c);
        }
        out
    }
}

impl<'b> Mul<&'b HomPoly> for &HomPoly {
    type Output = HomPoly;
    fn mul(self, rhs: &'b HomPoly) -> HomPoly {
        self.assert_same_ring(rhs);
        let mut out = HomPoly::zero(self.nvars);
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &HomPoly {
    type Output = HomPoly;
    fn neg(self) -> HomPoly {
        let mut out = HomPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            out.add_term(mon.clone(), -c);
        }
        out
    }
}

macro_rules! delegate_owned_poly_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<HomPoly> for HomPoly {
            type Output = HomPoly;
            fn $method(self, rhs: HomPoly) -> HomPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a HomPoly> for HomPoly {
            type Output = HomPoly;
            fn $method(self, rhs: &'a HomPoly) -> HomPoly {
                (&self).$method(rhs)
            }
        }
    };
}

delegate_owned_poly_binop!(Add, add);
delegate_owned_poly_binop!(Sub, sub);
delegate_owned_poly_binop!(Mul, mul);

impl Neg for HomPoly {
    type Output = HomPoly;
    fn neg(self) -> HomPoly {
        -&self
    }
}

/// One printed term of the canonical flattened form.
pub(crate) struct FlatTerm {
    pub monomial: Monomial,
    pub mu_exp: i64,
    pub coeff: GaussRational,
}

impl HomPoly {
    /// Flatten into `(monomial, mu-exponent, coefficient)` triples in the
    /// canonical print order: monomials descending lexicographically,
    /// `mu`-exponents ascending within one monomial.
    pub(crate) fn flatten(&self) -> Vec<FlatTerm> {
        let mut out = Vec::new();
        for (mon, c) in self.terms.iter().rev() {
            for (mu_exp, coeff) in c.iter() {
                out.push(FlatTerm {
                    monomial: mon.clone(),
                    mu_exp,
                    coeff: coeff.clone(),
                });
            }
        }
        out
    }
}

pub(crate) fn monomial_string(mon: &Monomial) -> Option<String> {
    if mon.is_constant() {
        return None;
    }
    let mut pieces = Vec::new();
    for (i, &e) in mon.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => pieces.push(format!("z{i}")),
            _ => pieces.push(format!("z{i}^{e}")),
        }
    }
    Some(pieces.join("*"))
}

pub(crate) fn mu_string(exp: i64) -> Option<String> {
    match exp {
        0 => None,
        1 => Some("mu".to_string()),
        _ => Some(format!("mu^{exp}")),
    }
}

/// Render one flattened term (sign already stripped by the caller).
pub(crate) fn term_string(coeff: &GaussRational, mu_exp: i64, monomial: Option<String>) -> String {
    let mut pieces: Vec<String> = Vec::new();
    let mu = mu_string(mu_exp);
    let standalone = mu.is_none() && monomial.is_none();
    if !coeff.is_one() || standalone {
        if standalone {
            // Bare constants keep parentheses only when two components need
            // grouping, e.g. `(1/2+1/3i)` but plain `1/2` or `2i`.
            if !coeff.re().is_zero() && !coeff.im().is_zero() {
                pieces.push(format!("({coeff})"));
            } else {
                pieces.push(coeff.to_string());
            }
        } else {
            pieces.push(format!("({coeff})"));
        }
    }
    if let Some(m) = mu {
        pieces.push(m);
    }
    if let Some(m) = monomial {
        pieces.push(m);
    }
    pieces.join("*")
}

impl fmt::Display for HomPoly {
    /// Canonical text form, e.g. `(1/2)*mu^-1*z0^2*z1` or `z0*z1 + (1/2)*mu`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, term) in self.flatten().into_iter().enumerate() {
            let negative = term.coeff.is_negative_for_render();
            let coeff = if negative { -&term.coeff } else { term.coeff };
            let body = term_string(&coeff, term.mu_exp, monomial_string(&term.monomial));
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}
