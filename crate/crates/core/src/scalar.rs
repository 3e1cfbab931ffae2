//! Exact scalars: Gaussian rationals and Laurent polynomials in the formal
//! parameter `mu`.
//!
//! Every coefficient in this crate bottoms out in [`GaussRational`], a complex
//! number with big-rational real and imaginary parts. [`MuScalar`] layers a
//! Laurent polynomial in `mu` on top; all operations in scope produce finitely
//! many `mu`-powers, so `mu` is never truncated.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A Gaussian rational `re + im*i`, held in lowest terms by construction.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GaussRational {
    re: BigRational,
    im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as an exact rational. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the squared modulus; zero iff the value is zero.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Exact division. Panics on division by zero.
    pub fn div(&self, rhs: &Self) -> Self {
        self * &rhs.inv().expect("division by zero")
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power, negative exponents via the inverse. Panics on `0^-n`.
    pub fn powi(&self, exp: i64) -> Self {
        if exp >= 0 {
            self.pow(exp as u32)
        } else {
            self.inv()
                .expect("negative power of zero")
                .pow((-exp) as u32)
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self * &Self::from_int(n)
    }

    /// Sign used by the canonical renderer: negative iff `re < 0`, or
    /// `re == 0` and `im < 0`.
    pub fn is_negative_for_render(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_negative()
        } else {
            self.im.is_negative()
        }
    }
}

impl<'b> Add<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &'b GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'b> Sub<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &'b GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'b> Mul<&'b GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &'b GaussRational) -> GaussRational {
        // Most data in practice is real; skip the complex cross terms then.
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRational {
                re: &self.re * &rhs.re,
                im: BigRational::zero(),
            };
        }
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! delegate_owned_binop {
    ($trait:ident, $method:ident, $ty:ty) => {
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}

delegate_owned_binop!(Add, add, GaussRational);
delegate_owned_binop!(Sub, sub, GaussRational);
delegate_owned_binop!(Mul, mul, GaussRational);

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        -&self
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_imag_magnitude(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_one() {
        write!(f, "i")
    } else {
        write_rational(f, r)?;
        write!(f, "i")
    }
}

impl fmt::Display for GaussRational {
    /// Canonical text form: `0`, `3`, `-1/2`, `i`, `-2i`, `1/2+1/3i`, `1/2-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.im.is_zero() {
            return write_rational(f, &self.re);
        }
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-")?;
                return write_imag_magnitude(f, &-self.im.clone());
            }
            return write_imag_magnitude(f, &self.im);
        }
        write_rational(f, &self.re)?;
        if self.im.is_negative() {
            write!(f, "-")?;
            write_imag_magnitude(f, &-self.im.clone())
        } else {
            write!(f, "+")?;
            write_imag_magnitude(f, &self.im)
        }
    }
}

fn parse_plain_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.parse().ok()?;
        let den: BigInt = d.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(num))
    }
}

impl FromStr for GaussRational {
    type Err = Error;

    /// Parses the canonical text form produced by [`Display`](fmt::Display):
    /// one or two signed components, where a component is a rational
    /// (`-3/4`), an explicit imaginary part (`1/3i`, `2i`) or a bare `i`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::NotPlainRational);
        }
        let bytes = s.as_bytes();
        let mut parts: Vec<(bool, &str)> = Vec::new();
        let mut start = 0usize;
        let mut neg = false;
        let mut i = 0usize;
        if bytes[0] == b'+' || bytes[0] == b'-' {
            neg = bytes[0] == b'-';
            start = 1;
            i = 1;
        }
        while i < bytes.len() {
            if bytes[i] == b'+' || bytes[i] == b'-' {
                parts.push((neg, &s[start..i]));
                neg = bytes[i] == b'-';
                start = i + 1;
            }
            i += 1;
        }
        parts.push((neg, &s[start..]));

        let mut re: Option<BigRational> = None;
        let mut im: Option<BigRational> = None;
        for (negated, body) in parts {
            if body.is_empty() {
                return Err(Error::NotPlainRational);
            }
            let (imaginary, body) = if let Some(stripped) = body.strip_suffix('i') {
                (true, stripped)
            } else {
                (false, body)
            };
            let magnitude = if imaginary && body.is_empty() {
                BigRational::one()
            } else {
                parse_plain_rational(body).ok_or(Error::NotPlainRational)?
            };
            let value = if negated { -magnitude } else { magnitude };
            let slot = if imaginary { &mut im } else { &mut re };
            if slot.is_some() {
                return Err(Error::NotPlainRational);
            }
            *slot = Some(value);
        }
        Ok(GaussRational {
            re: re.unwrap_or_else(BigRational::zero),
            im: im.unwrap_or_else(BigRational::zero),
        })
    }
}

/// Laurent polynomial in `mu` over the Gaussian rationals.
///
/// The map never stores a zero coefficient; the empty map is the canonical
/// zero. Exponents may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MuScalar {
    terms: BTreeMap<i64, GaussRational>,
}

impl MuScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_gauss(GaussRational::one())
    }

    pub fn from_gauss(c: GaussRational) -> Self {
        Self::term(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussRational::from_int(n))
    }

    /// The single term `c * mu^exp`.
    pub fn term(exp: i64, c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MuScalar { terms }
    }

    /// `mu^exp`.
    pub fn mu_pow(exp: i64) -> Self {
        Self::term(exp, GaussRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// True if only the `mu^0` coefficient is present (or the value is zero).
    pub fn is_mu_free(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// The `mu^0` value, if the scalar is `mu`-free.
    pub fn as_gauss(&self) -> Option<GaussRational> {
        if self.is_mu_free() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    pub fn coeff(&self, exp: i64) -> GaussRational {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &GaussRational)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MuScalar {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Multiply by `mu^shift` (shift every exponent).
    pub fn mul_mu_pow(&self, shift: i64) -> Self {
        MuScalar {
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k + shift, v.clone()))
                .collect(),
        }
    }

    /// Substitute a scalar for `mu`. Substituting zero is a pole whenever a
    /// negative power is present.
    pub fn specialize(&self, value: &GaussRational) -> Result<GaussRational> {
        let mut acc = GaussRational::zero();
        for (exp, c) in self.iter() {
            if exp < 0 && value.is_zero() {
                return Err(Error::MuPole);
            }
            let factor = if value.is_zero() {
                if exp == 0 {
                    GaussRational::one()
                } else {
                    GaussRational::zero()
                }
            } else {
                value.powi(exp)
            };
            acc = &acc + &(c * &factor);
        }
        Ok(acc)
    }
}

impl<'b> Add<&'b MuScalar> for &MuScalar {
    type Output = MuScalar;
    fn add(self, rhs: &'b MuScalar) -> MuScalar {
        let mut out = self.clone();
        for (exp, c) in rhs.iter() {
            out.add_term(exp, c);
        }
        out
    }
}

impl<'b> Sub<&'b MuScalar> for &MuScalar {
    type Output = MuScalar;
    fn sub(self, rhs: &'b MuScalar) -> MuScalar {
        let mut out = self.clone();
        for (exp, c) in rhs.iter() {
            out.add_term(exp, &-c);
        }
        out
    }
}

impl<'b> Mul<&'b MuScalar> for &MuScalar {
    type Output = MuScalar;
    fn mul(self, rhs: &'b MuScalar) -> MuScalar {
        let mut out = MuScalar::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &MuScalar {
    type Output = MuScalar;
    fn neg(self) -> MuScalar {
        MuScalar {
            terms: self.terms.iter().map(|(&k, v)| (k, -v)).collect(),
        }
    }
}

delegate_owned_binop!(Add, add, MuScalar);
delegate_owned_binop!(Sub, sub, MuScalar);
delegate_owned_binop!(Mul, mul, MuScalar);

impl Neg for MuScalar {
    type Output = MuScalar;
    fn neg(self) -> MuScalar {
        -&self
    }
}

impl fmt::Display for MuScalar {
    /// Debug-oriented sum form, ascending in the `mu`-exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (exp, c)) in self.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            match exp {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*mu")?,
                _ => write!(f, "({c})*mu^{exp}")?,
            }
        }
        Ok(())
    }
}
