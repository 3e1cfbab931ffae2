//! The graded side of the homogeneous coordinate ring `Q[z0..zn]`: graded
//! pieces, degree-zero localizations at homogeneous elements, the chart
//! families of global sections, and dimensions of the twisted section
//! spaces.
//!
//! Projective space enters only through its chart data: the degree-zero
//! fraction rings at the coordinate variables and their overlap
//! compatibilities. Coefficients here are plain rationals; the deformation
//! parameter plays no role in this module.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{HomPoly, Monomial};
use crate::scalar::{GaussRational, MuScalar};
use crate::util::binomial;

/// Polynomial in `Q[z0..zn]`, the graded ambient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl GradedPoly {
    pub fn zero(nvars: usize) -> Self {
        GradedPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::from_integer(1.into()))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(
            Monomial::var(nvars, index),
            BigRational::from_integer(1.into()),
        );
        p
    }

    pub fn monomial(nvars: usize, mon: Monomial, c: BigRational) -> Self {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mon: Monomial, c: BigRational) {
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

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::total_degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// The degree-`d` homogeneous piece.
    pub fn graded_piece(&self, d: u32) -> GradedPoly {
        let mut out = GradedPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            if mon.total_degree() == d {
                out.add_term(mon.clone(), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> GradedPoly {
        let mut acc = GradedPoly::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Leading term in the lexicographic order (`z0` most significant).
    fn lead(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None` when
    /// the remainder of lexicographic long division is nonzero.
    pub fn try_div_exact(&self, divisor: &GradedPoly) -> Option<GradedPoly> {
        assert_eq!(self.nvars, divisor.nvars, "ambient ring mismatch");
        let (dlead_mon, dlead_coeff) = divisor.lead()?;
        let mut rem = self.clone();
        let mut quot = GradedPoly::zero(self.nvars);
        while let Some((rlead_mon, rlead_coeff)) = rem.lead() {
            if !dlead_mon.divides(rlead_mon) {
                return None;
            }
            let mon = dlead_mon.div(rlead_mon);
            let coeff = rlead_coeff / dlead_coeff;
            let term = GradedPoly::monomial(self.nvars, mon, coeff);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }

    /// Embed into the `mu`-aware ring.
    pub fn to_hom_poly(&self) -> HomPoly {
        let mut out = HomPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            out.add_term(
                mon.clone(),
                MuScalar::from_gauss(GaussRational::from_rational(c.clone())),
            );
        }
        out
    }

    /// Restrict from the `mu`-aware ring; errors when `mu` or imaginary
    /// parts are present.
    pub fn from_hom_poly(p: &HomPoly) -> Result<GradedPoly> {
        let mut out = GradedPoly::zero(p.nvars());
        for (mon, c) in p.terms() {
            let g = c.as_gauss().ok_or(Error::NotPlainRational)?;
            if !g.is_real() {
                return Err(Error::NotPlainRational);
            }
            out.add_term(mon.clone(), g.re().clone());
        }
        Ok(out)
    }
}

impl<'b> Add<&'b GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &'b GradedPoly) -> GradedPoly {
        assert_eq!(self.nvars, rhs.nvars, "ambient ring mismatch");
        let mut out = self.clone();
        for (mon, c) in rhs.terms() {
            out.add_term(mon.clone(), c.clone());
        }
        out
    }
}

impl<'b> Sub<&'b GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &'b GradedPoly) -> GradedPoly {
        assert_eq!(self.nvars, rhs.nvars, "ambient ring mismatch");
        let mut out = self.clone();
        for (mon, c) in rhs.terms() {
            out.add_term(mon.clone(), -c.clone());
        }
        out
    }
}

impl<'b> Mul<&'b GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &'b GradedPoly) -> GradedPoly {
        assert_eq!(self.nvars, rhs.nvars, "ambient ring mismatch");
        let mut out = GradedPoly::zero(self.nvars);
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        let mut out = GradedPoly::zero(self.nvars);
        for (mon, c) in self.terms() {
            out.add_term(mon.clone(), -c.clone());
        }
        out
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hom_poly())
    }
}

/// Normalized degree-zero fraction `num / base^power` of the localization at
/// a homogeneous `base`.
///
/// Normal form: `power` is minimal, i.e. the base has been divided out of
/// the numerator as often as possible (for a power-of-`base` denominator no
/// other cancellation preserves the shape of the denominator). The zero
/// fraction is stored with `power = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFraction {
    num: GradedPoly,
    base: GradedPoly,
    power: u32,
}

/// Build the degree-zero fraction `num / base^power`.
///
/// `base` must be homogeneous and nonzero, `num` homogeneous, and the
/// degree-zero condition `deg num = power * deg base` must hold.
pub fn localize(num: GradedPoly, base: GradedPoly, power: u32) -> Result<LocalFraction> {
    if base.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let base_deg = base.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if num.is_zero() {
        return Ok(LocalFraction {
            num,
            base,
            power: 0,
        });
    }
    let num_deg = num.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let required = power * base_deg;
    if num_deg != required {
        return Err(Error::FractionDegree {
            num_degree: num_deg,
            required,
        });
    }
    Ok(LocalFraction { num, base, power }.normalized())
}

impl LocalFraction {
    pub fn numerator(&self) -> &GradedPoly {
        &self.num
    }

    pub fn base(&self) -> &GradedPoly {
        &self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.power = 0;
            return self;
        }
        while self.power > 0 {
            match self.num.try_div_exact(&self.base) {
                Some(q) => {
                    self.num = q;
                    self.power -= 1;
                }
                None => break,
            }
        }
        self
    }

    /// Equality in the localization: `g1 / f^m1 = g2 / f^m2` iff
    /// `g1 f^m2 = g2 f^m1` (the ambient ring is a domain). Both fractions
    /// must live over the same base.
    pub fn eq_fraction(&self, other: &LocalFraction) -> Result<bool> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let lhs = &self.num * &self.base.pow(other.power);
        let rhs = &other.num * &other.base.pow(self.power);
        Ok(lhs == rhs)
    }

    /// Product inside one localization.
    pub fn mul_fraction(&self, other: &LocalFraction) -> Result<LocalFraction> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        Ok(LocalFraction {
            num: &self.num * &other.num,
            base: self.base.clone(),
            power: self.power + other.power,
        }
        .normalized())
    }
}

impl fmt::Display for LocalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &GradedPoly| {
            let s = p.to_string();
            if p.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.power == 0 {
            return write!(f, "{}", self.num);
        }
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.base))?;
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

/// Dimension of the space of global sections of the `m`-th twist on
/// projective `n`-space: zero for negative twists, otherwise the number of
/// degree-`m` monomials in `n + 1` variables.
pub fn h0_dimension(n: usize, m: i64) -> BigUint {
    if m < 0 {
        return BigUint::ZERO;
    }
    binomial(n as u64 + m as u64, n as u64)
}

/// The chart family of a homogeneous element `a` of degree `d`: on the chart
/// of `z_i` the section is recorded in its trivialized form `a / z_i^d`.
/// All components vanish iff `a = 0`.
pub fn alpha(a: &GradedPoly) -> Result<Vec<LocalFraction>> {
    if !a.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = a.nvars();
    let d = a.homogeneous_degree().unwrap_or(0);
    (0..n)
        .map(|i| localize(a.clone(), GradedPoly::var(n, i), d))
        .collect()
}

fn chart_index(base: &GradedPoly) -> Result<usize> {
    if base.num_terms() != 1 {
        return Err(Error::NotChartVariable);
    }
    let (mon, c) = base.terms().next().unwrap();
    if mon.total_degree() != 1 || c != &BigRational::from_integer(1.into()) {
        return Err(Error::NotChartVariable);
    }
    Ok(mon.exps().iter().position(|&e| e == 1).unwrap())
}

/// Glueing test on the chart overlap: two trivialized representatives
/// `g_i / z_i^{m_i}` and `g_j / z_j^{m_j}` of one degree-`d` section agree
/// on the overlap iff, after clearing denominators against the transition
/// factor `(z_j / z_i)^d`,
///
/// ```text
/// g_i * z_i^d * z_j^{m_j}  =  g_j * z_j^d * z_i^{m_i}.
/// ```
pub fn sections_glue(ri: &LocalFraction, rj: &LocalFraction, d: u32) -> Result<bool> {
    let i = chart_index(&ri.base)?;
    let j = chart_index(&rj.base)?;
    let n = ri.num.nvars();
    if rj.num.nvars() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rj.num.nvars(),
        });
    }
    let zi = GradedPoly::var(n, i);
    let zj = GradedPoly::var(n, j);
    let lhs = &(&ri.num * &zi.pow(d)) * &zj.pow(rj.power);
    let rhs = &(&rj.num * &zj.pow(d)) * &zi.pow(ri.power);
    Ok(lhs == rhs)
}

/// Overlap compatibility of the chart family of `a` between charts `i` and
/// `j`.
pub fn chart_compatibility(a: &GradedPoly, i: usize, j: usize) -> Result<bool> {
    if !a.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = a.nvars();
    let d = a.homogeneous_degree().unwrap_or(0);
    let ri = localize(a.clone(), GradedPoly::var(n, i), d)?;
    let rj = localize(a.clone(), GradedPoly::var(n, j), d)?;
    sections_glue(&ri, &rj, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn z(nvars: usize, i: usize) -> GradedPoly {
        GradedPoly::var(nvars, i)
    }

    #[test]
    fn graded_pieces() {
        let p = &z(2, 0).pow(2) + &z(2, 1);
        assert_eq!(p.graded_piece(2), z(2, 0).pow(2));
        assert_eq!(p.graded_piece(1), z(2, 1));
        assert!(p.graded_piece(5).is_zero());
        assert_eq!(GradedPoly::one(2).graded_piece(0), GradedPoly::one(2));
    }

    #[test]
    fn h0_dimension_table() {
        assert_eq!(h0_dimension(3, -1), BigUint::ZERO);
        assert_eq!(h0_dimension(3, -3), BigUint::ZERO);
        assert_eq!(h0_dimension(1, 3), BigUint::from(4u32));
        assert_eq!(h0_dimension(4, 0), BigUint::from(1u32));
        assert_eq!(h0_dimension(2, 2), BigUint::from(6u32));
    }

    #[test]
    fn localization_normalizes() {
        // (z0 z1) / z0^2 -> z1 / z0
        let fr = localize(&z(2, 0) * &z(2, 1), z(2, 0), 2).unwrap();
        assert_eq!(fr.numerator(), &z(2, 1));
        assert_eq!(fr.power(), 1);
        assert_eq!(fr.to_string(), "z1/z0");

        // degree-zero violation: z1^2 / z0^1
        assert_eq!(
            localize(z(2, 1).pow(2), z(2, 0), 1),
            Err(Error::FractionDegree {
                num_degree: 2,
                required: 1
            })
        );
        assert_eq!(
            localize(z(2, 0), GradedPoly::zero(2), 1),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn degree_zero_elements_embed() {
        // g/1 = (f g)/f for constants g
        let g = GradedPoly::constant(2, r(7, 3));
        let f = &z(2, 0) + &z(2, 1);
        let lhs = localize(g.clone(), f.clone(), 0).unwrap();
        let rhs = localize(&f * &g, f.clone(), 1).unwrap();
        assert!(lhs.eq_fraction(&rhs).unwrap());
    }

    #[test]
    fn fraction_equality_is_an_equivalence() {
        let f = z(2, 0);
        let a = localize(z(2, 1), f.clone(), 1).unwrap();
        // unnormalized representative of the same element
        let b = LocalFraction {
            num: &z(2, 1) * &z(2, 0),
            base: f.clone(),
            power: 2,
        };
        let c = LocalFraction {
            num: &(&z(2, 1) * &z(2, 0)) * &z(2, 0),
            base: f,
            power: 3,
        };
        assert!(a.eq_fraction(&b).unwrap());
        assert!(b.eq_fraction(&c).unwrap());
        assert!(a.eq_fraction(&c).unwrap());
        assert!(b.clone().normalized() == a);
        let other_base = localize(z(2, 0), z(2, 1), 1).unwrap();
        assert_eq!(a.eq_fraction(&other_base), Err(Error::BaseMismatch));
    }

    #[test]
    fn fraction_equivalence_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut tested = 0;
        while tested < 100 {
            let nvars = rng.gen_range(2usize..=3);
            let base_deg = rng.gen_range(1u32..=2);
            let mut f = GradedPoly::zero(nvars);
            let basis = Monomial::all_of_degree(nvars, base_deg);
            for _ in 0..rng.gen_range(1..=2) {
                let mon = basis[rng.gen_range(0..basis.len())].clone();
                f.add_term(mon, r(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=5)));
            }
            if f.is_zero() {
                continue;
            }
            let k = rng.gen_range(0u32..=2);
            let u_basis = Monomial::all_of_degree(nvars, k * base_deg);
            let mut u = GradedPoly::zero(nvars);
            for _ in 0..rng.gen_range(1..=2) {
                let mon = u_basis[rng.gen_range(0..u_basis.len())].clone();
                u.add_term(mon, r(rng.gen_range(-5i64..=5), rng.gen_range(1i64..=5)));
            }
            tested += 1;

            // three representatives of one element, two of them unreduced
            let r1 = LocalFraction { num: u.clone(), base: f.clone(), power: k };
            let r2 = LocalFraction { num: &u * &f, base: f.clone(), power: k + 1 };
            let r3 = LocalFraction { num: &(&u * &f) * &f, base: f.clone(), power: k + 2 };
            for x in [&r1, &r2, &r3] {
                assert!(x.eq_fraction(x).unwrap());
            }
            assert_eq!(r1.eq_fraction(&r2).unwrap(), r2.eq_fraction(&r1).unwrap());
            assert!(r1.eq_fraction(&r2).unwrap());
            assert!(r2.eq_fraction(&r3).unwrap());
            assert!(r1.eq_fraction(&r3).unwrap());

            // a genuinely different element never compares equal
            let shifted = LocalFraction {
                num: &u + &f.pow(k),
                base: f.clone(),
                power: k,
            };
            assert!(!r1.eq_fraction(&shifted).unwrap());

            // normalization is idempotent
            let n1 = r2.clone().normalized();
            assert_eq!(n1.clone().normalized(), n1);
        }
    }

    #[test]
    fn exact_division() {
        let p = &(&z(3, 0) + &z(3, 1)) * &(&z(3, 1) + &z(3, 2));
        let q = p.try_div_exact(&(&z(3, 0) + &z(3, 1))).unwrap();
        assert_eq!(q, &z(3, 1) + &z(3, 2));
        assert!(p.try_div_exact(&z(3, 0)).is_none());
    }

    #[test]
    fn alpha_families() {
        let zero = GradedPoly::zero(2);
        assert!(alpha(&zero).unwrap().iter().all(LocalFraction::is_zero));

        // a = z0 on CP^1: components z0/z0 = 1 and z0/z1, glued on the overlap
        let family = alpha(&z(2, 0)).unwrap();
        assert_eq!(family[0].to_string(), "1");
        assert_eq!(family[1].to_string(), "z0/z1");
        assert!(sections_glue(&family[0], &family[1], 1).unwrap());

        // distinct degree-2 monomials have distinct families
        let basis: Vec<GradedPoly> = Monomial::all_of_degree(2, 2)
            .into_iter()
            .map(|m| GradedPoly::monomial(2, m, r(1, 1)))
            .collect();
        for (i, p) in basis.iter().enumerate() {
            for q in basis.iter().skip(i + 1) {
                let fp = alpha(p).unwrap();
                let fq = alpha(q).unwrap();
                assert!(fp
                    .iter()
                    .zip(&fq)
                    .any(|(x, y)| !x.eq_fraction(y).unwrap()));
            }
        }
    }

    #[test]
    fn alpha_is_multiplicative() {
        let a = &z(2, 0) + &z(2, 1);
        let b = &z(2, 0) - &z(2, 1);
        let fa = alpha(&a).unwrap();
        let fb = alpha(&b).unwrap();
        let fab = alpha(&(&a * &b)).unwrap();
        for i in 0..2 {
            let prod = fa[i].mul_fraction(&fb[i]).unwrap();
            assert!(prod.eq_fraction(&fab[i]).unwrap());
        }
    }

    #[test]
    fn chart_compatibility_and_negatives() {
        let m = GradedPoly::monomial(2, Monomial::new(vec![1, 2]), r(1, 1));
        assert!(chart_compatibility(&m, 0, 1).unwrap());

        let a = &z(2, 0).pow(2) + &z(2, 1).pow(2);
        assert!(chart_compatibility(&a, 0, 1).unwrap());

        // hand-corrupted representative fails to glue
        let good = localize(a.clone(), z(2, 0), 2).unwrap();
        let corrupted = localize(&a + &(&z(2, 0) * &z(2, 1)), z(2, 1), 2).unwrap();
        assert!(!sections_glue(&good, &corrupted, 2).unwrap());
    }
}
