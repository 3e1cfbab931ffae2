//! Truncated formal power series in `t` with exact coefficients: scalar,
//! matrix and polynomial valued.
//!
//! A series of order `K` stores the `K + 1` coefficients of `t^0 .. t^K`.
//! All matrix functions (exp, sin, cos, tan, log, arctan, binomial powers)
//! are realized purely as Taylor-stream compositions with arguments whose
//! constant term vanishes (or equals the identity, for log); no
//! eigendecomposition or floating point anywhere.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::HomPoly;
use crate::scalar::GaussRational;
use crate::util::inv_factorial;

/// Scalar-valued truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSeries {
    coeffs: Vec<GaussRational>,
}

impl ScalarSeries {
    pub fn new(coeffs: Vec<GaussRational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        ScalarSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        ScalarSeries {
            coeffs: vec![GaussRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = GaussRational::one();
        s
    }

    pub fn constant(value: GaussRational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &GaussRational {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaussRational::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        ScalarSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        ScalarSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        let k = self.order();
        let mut coeffs = vec![GaussRational::zero(); k + 1];
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                coeffs[i + j] = &coeffs[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
            }
        }
        ScalarSeries { coeffs }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        ScalarSeries {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// Termwise `d/dt`; the result keeps the same order with a zero top
    /// coefficient, so comparisons must stop one order short.
    pub fn derivative(&self) -> Self {
        let k = self.order();
        let mut coeffs = vec![GaussRational::zero(); k + 1];
        for j in 1..=k {
            coeffs[j - 1] = self.coeffs[j].scale_int(j as i64);
        }
        ScalarSeries { coeffs }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inv().ok_or(Error::SingularConstantTerm)?;
        let k = self.order();
        let mut coeffs = vec![GaussRational::zero(); k + 1];
        coeffs[0] = c0.clone();
        for m in 1..=k {
            let mut acc = GaussRational::zero();
            for j in 1..=m {
                acc = &acc + &(&self.coeffs[j] * &coeffs[m - j]);
            }
            coeffs[m] = -&(&c0 * &acc);
        }
        Ok(ScalarSeries { coeffs })
    }

    /// Compose a Taylor stream with this series, which must have zero
    /// constant term: `sum_j stream(j) * self^j`.
    pub fn compose(&self, stream: impl Fn(usize) -> GaussRational) -> Self {
        assert!(
            self.coeffs[0].is_zero(),
            "composition argument must vanish at t = 0"
        );
        let k = self.order();
        let mut acc = ScalarSeries::constant(stream(0), k);
        let mut power = ScalarSeries::one(k);
        for j in 1..=k {
            power = power.mul(self);
            acc = acc.add(&power.scale(&stream(j)));
        }
        acc
    }

    /// `(1 + self)^alpha` for a series with zero constant term, via the
    /// binomial stream.
    pub fn binomial_power(&self, alpha: &GaussRational) -> Self {
        let k = self.order();
        let mut stream = Vec::with_capacity(k + 1);
        stream.push(GaussRational::one());
        for j in 1..=k {
            let factor = (alpha - &GaussRational::from_int(j as i64 - 1))
                .div(&GaussRational::from_int(j as i64));
            let prev: &GaussRational = &stream[j - 1];
            stream.push(prev * &factor);
        }
        self.compose(|j| stream[j].clone())
    }

    /// True when coefficients `t^0 .. t^through` all vanish.
    pub fn is_zero_through(&self, through: usize) -> bool {
        self.coeffs[..=through.min(self.order())]
            .iter()
            .all(GaussRational::is_zero)
    }

    pub fn eq_through(&self, rhs: &Self, through: usize) -> bool {
        (0..=through).all(|j| self.coeff(j) == rhs.coeff(j))
    }
}

/// Matrix-valued truncated series; all coefficients share one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSeries {
    dim: usize,
    coeffs: Vec<Matrix>,
}

impl MatrixSeries {
    pub fn new(coeffs: Vec<Matrix>) -> Self {
        assert!(!coeffs.is_empty());
        let dim = coeffs[0].dim();
        assert!(coeffs.iter().all(|m| m.dim() == dim), "ragged series");
        MatrixSeries { dim, coeffs }
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        MatrixSeries {
            dim,
            coeffs: vec![Matrix::zero(dim); order + 1],
        }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        let mut s = Self::zero(dim, order);
        s.coeffs[0] = Matrix::identity(dim);
        s
    }

    pub fn constant(m: Matrix, order: usize) -> Self {
        let mut s = Self::zero(m.dim(), order);
        s.coeffs[0] = m;
        s
    }

    /// `m * t`.
    pub fn linear(m: &Matrix, order: usize) -> Self {
        let mut s = Self::zero(m.dim(), order);
        if order >= 1 {
            s.coeffs[1] = m.clone();
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &Matrix {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, m: Matrix) {
        assert_eq!(m.dim(), self.dim);
        self.coeffs[j] = m;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        MatrixSeries {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        MatrixSeries {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        let k = self.order();
        let mut out = Self::zero(self.dim, k);
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let v = &out.coeffs[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
                out.coeffs[i + j] = v;
            }
        }
        out
    }

    pub fn mul_const_left(&self, m: &Matrix) -> Self {
        MatrixSeries {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| m * c).collect(),
        }
    }

    pub fn mul_const_right(&self, m: &Matrix) -> Self {
        MatrixSeries {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|c| c * m).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        MatrixSeries {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        MatrixSeries {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(Matrix::transpose).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        let k = self.order();
        let mut out = Self::zero(self.dim, k);
        for j in 1..=k {
            out.coeffs[j - 1] = self.coeffs[j].scale(&GaussRational::from_int(j as i64));
        }
        out
    }

    pub fn trace(&self) -> ScalarSeries {
        ScalarSeries::new(self.coeffs.iter().map(Matrix::trace).collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .inverse()
            .ok_or(Error::SingularConstantTerm)?;
        let k = self.order();
        let mut out = Self::zero(self.dim, k);
        out.coeffs[0] = c0.clone();
        for m in 1..=k {
            let mut acc = Matrix::zero(self.dim);
            for j in 1..=m {
                acc = &acc + &(&self.coeffs[j] * &out.coeffs[m - j]);
            }
            out.coeffs[m] = -&(&c0 * &acc);
        }
        Ok(out)
    }

    /// Compose a Taylor stream with this series; the constant term must
    /// vanish so powers gain at least one order of `t` each.
    pub fn compose(&self, stream: impl Fn(usize) -> GaussRational) -> Self {
        assert!(
            self.coeffs[0].is_zero(),
            "composition argument must vanish at t = 0"
        );
        let k = self.order();
        let mut acc = Self::zero(self.dim, k);
        acc.coeffs[0] = Matrix::identity(self.dim).scale(&stream(0));
        let mut power = Self::identity(self.dim, k);
        for j in 1..=k {
            power = power.mul(self);
            acc = acc.add(&power.scale(&stream(j)));
        }
        acc
    }

    /// Determinant over the series ring, by Laplace expansion along the
    /// first remaining column (the dimensions in play stay tiny).
    pub fn det(&self) -> ScalarSeries {
        fn minor_det(s: &MatrixSeries, rows: &[usize], cols: &[usize]) -> ScalarSeries {
            let order = s.order();
            if rows.len() == 1 {
                return ScalarSeries::new(
                    (0..=order)
                        .map(|j| s.coeff(j).get(rows[0], cols[0]).clone())
                        .collect(),
                );
            }
            let mut acc = ScalarSeries::zero(order);
            let col = cols[0];
            let rest_cols: Vec<usize> = cols[1..].to_vec();
            for (pos, &row) in rows.iter().enumerate() {
                let entry = ScalarSeries::new(
                    (0..=order)
                        .map(|j| s.coeff(j).get(row, col).clone())
                        .collect(),
                );
                if entry.is_zero() {
                    continue;
                }
                let rest_rows: Vec<usize> = rows
                    .iter()
                    .copied()
                    .filter(|&r| r != row)
                    .collect();
                let sub = minor_det(s, &rest_rows, &rest_cols);
                let signed = if pos % 2 == 0 {
                    entry.mul(&sub)
                } else {
                    entry.mul(&sub).scale(&-GaussRational::one())
                };
                acc = acc.add(&signed);
            }
            acc
        }
        let idx: Vec<usize> = (0..self.dim).collect();
        minor_det(self, &idx, &idx)
    }

    pub fn eq_through(&self, rhs: &Self, through: usize) -> bool {
        (0..=through).all(|j| self.coeff(j) == rhs.coeff(j))
    }

    pub fn is_zero_through(&self, through: usize) -> bool {
        self.coeffs[..=through.min(self.order())]
            .iter()
            .all(Matrix::is_zero)
    }
}

/// Matrix exponential of a series with zero constant term.
pub fn exp_series(x: &MatrixSeries) -> MatrixSeries {
    x.compose(|j| inv_factorial(j as u64))
}

pub fn sin_series(x: &MatrixSeries) -> MatrixSeries {
    x.compose(|j| {
        if j % 2 == 0 {
            GaussRational::zero()
        } else if j % 4 == 1 {
            inv_factorial(j as u64)
        } else {
            -inv_factorial(j as u64)
        }
    })
}

pub fn cos_series(x: &MatrixSeries) -> MatrixSeries {
    x.compose(|j| {
        if j % 2 == 1 {
            GaussRational::zero()
        } else if j % 4 == 0 {
            inv_factorial(j as u64)
        } else {
            -inv_factorial(j as u64)
        }
    })
}

/// `tan = sin * cos^{-1}`; the cosine of a zero-constant argument has unit
/// constant term, so the inverse always exists.
pub fn tan_series(x: &MatrixSeries) -> MatrixSeries {
    let c = cos_series(x).inverse().expect("cos has unit constant term");
    sin_series(x).mul(&c)
}

pub fn arctan_series(x: &MatrixSeries) -> MatrixSeries {
    x.compose(|j| {
        if j % 2 == 0 {
            GaussRational::zero()
        } else {
            let sign = if j % 4 == 1 { 1 } else { -1 };
            GaussRational::from_ratio(sign, j as i64)
        }
    })
}

/// `log(1 + x)` for a series `x` with zero constant term.
pub fn log1p_series(x: &MatrixSeries) -> MatrixSeries {
    x.compose(|j| {
        if j == 0 {
            GaussRational::zero()
        } else {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            GaussRational::from_ratio(sign, j as i64)
        }
    })
}

/// Series of polynomials in `t`: the shape of star exponentials and
/// evolution residuals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeries {
    nvars: usize,
    coeffs: Vec<HomPoly>,
}

impl PolySeries {
    pub fn new(coeffs: Vec<HomPoly>) -> Self {
        assert!(!coeffs.is_empty());
        let nvars = coeffs[0].nvars();
        assert!(coeffs.iter().all(|p| p.nvars() == nvars), "ragged series");
        PolySeries { nvars, coeffs }
    }

    pub fn zero(nvars: usize, order: usize) -> Self {
        PolySeries {
            nvars,
            coeffs: vec![HomPoly::zero(nvars); order + 1],
        }
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        s.coeffs[0] = HomPoly::one(nvars);
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &HomPoly {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, p: HomPoly) {
        assert_eq!(p.nvars(), self.nvars);
        self.coeffs[j] = p;
    }

    pub fn coeffs(&self) -> &[HomPoly] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        PolySeries {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        PolySeries {
            nvars: self.nvars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series order mismatch");
        let k = self.order();
        let mut out = Self::zero(self.nvars, k);
        for i in 0..=k {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(&self.coeffs[i] * &rhs.coeffs[j]);
            }
        }
        out
    }

    /// Multiply by a scalar series of the same order.
    pub fn scale_series(&self, s: &ScalarSeries) -> Self {
        assert_eq!(self.order(), s.order(), "series order mismatch");
        let k = self.order();
        let mut out = Self::zero(self.nvars, k);
        for i in 0..=k {
            if s.coeff(i).is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                out.coeffs[i + j] =
                    &out.coeffs[i + j] + &self.coeffs[j].scale_gauss(s.coeff(i));
            }
        }
        out
    }

    pub fn derivative(&self) -> Self {
        let k = self.order();
        let mut out = Self::zero(self.nvars, k);
        for j in 1..=k {
            out.coeffs[j - 1] = self.coeffs[j].scale_gauss(&GaussRational::from_int(j as i64));
        }
        out
    }

    pub fn is_zero_through(&self, through: usize) -> bool {
        self.coeffs[..=through.min(self.order())]
            .iter()
            .all(HomPoly::is_zero)
    }

    pub fn eq_through(&self, rhs: &Self, through: usize) -> bool {
        (0..=through).all(|j| self.coeff(j) == rhs.coeff(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_ratio(n, d)
    }

    #[test]
    fn scalar_inverse_and_mul() {
        let s = ScalarSeries::new(vec![q(1, 1), q(2, 1), q(-1, 3)]);
        let inv = s.inverse().unwrap();
        assert_eq!(s.mul(&inv), ScalarSeries::one(2));
        assert!(ScalarSeries::zero(3).inverse().is_err());
    }

    #[test]
    fn binomial_power_of_known_series() {
        // (1 + t)^(-1/2) = 1 - t/2 + 3t^2/8 - 5t^3/16 + ...
        let mut t = ScalarSeries::zero(3);
        t = t.add(&ScalarSeries::new(vec![q(0, 1), q(1, 1), q(0, 1), q(0, 1)]));
        let s = t.binomial_power(&q(-1, 2));
        assert_eq!(s.coeff(0), &q(1, 1));
        assert_eq!(s.coeff(1), &q(-1, 2));
        assert_eq!(s.coeff(2), &q(3, 8));
        assert_eq!(s.coeff(3), &q(-5, 16));
    }

    #[test]
    fn matrix_exp_log_round_trip() {
        let a = Matrix::from_i64(&[&[1, 2], &[3, -1]]);
        let at = MatrixSeries::linear(&a, 6);
        let e = exp_series(&at);
        assert_eq!(e.coeff(0), &Matrix::identity(2));
        assert_eq!(e.coeff(1), &a);
        let back = log1p_series(&e.sub(&MatrixSeries::identity(2, 6)));
        assert_eq!(back, at);
    }

    #[test]
    fn trig_identities() {
        let a = Matrix::from_i64(&[&[0, 1], &[-2, 1]]);
        let at = MatrixSeries::linear(&a, 8);
        let (s, c) = (sin_series(&at), cos_series(&at));
        let unit = s.mul(&s).add(&c.mul(&c));
        assert_eq!(unit, MatrixSeries::identity(2, 8));
        let t = tan_series(&at);
        assert_eq!(t.mul(&c), s);
        let back = arctan_series(&t);
        assert_eq!(back, at);
    }

    #[test]
    fn determinant_of_series() {
        // det(I + t * [[1, 2], [3, 4]]) = 1 + 5t - 2t^2
        let n = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        let s = MatrixSeries::identity(2, 2).add(&MatrixSeries::linear(&n, 2));
        let d = s.det();
        assert_eq!(d.coeffs(), &[q(1, 1), q(5, 1), q(-2, 1)]);
    }

    #[test]
    fn poly_series_scaling() {
        let p = PolySeries::one(2, 2);
        let s = ScalarSeries::new(vec![q(1, 1), q(0, 1), q(-1, 8)]);
        let scaled = p.scale_series(&s);
        assert_eq!(
            scaled.coeff(2),
            &HomPoly::constant(2, crate::scalar::MuScalar::from_gauss(q(-1, 8)))
        );
    }
}
