//! Star exponentials of quadratic forms.
//!
//! The brute-force route iterates star powers of a quadratic form `A[Z]/mu`
//! into a truncated series in `t`. The closed-form route expresses the same
//! series as `g(t) * exp((1/mu) Q(t)[Z])` where the phase matrix solves a
//! matrix Riccati flow linearized by the Cayley transform and the amplitude
//! is an inverse square root of a determinant series. Both routes are exact;
//! their term-by-term agreement is the central cross-check of this crate.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};
use crate::poly::HomPoly;
use crate::scalar::GaussRational;
use crate::series::{
    arctan_series, exp_series, log1p_series, tan_series, MatrixSeries, PolySeries, ScalarSeries,
};
use crate::star::StarContext;
use crate::util::inv_factorial;

/// The quadratic form `A[Z] = Z A Z^T` as a degree-2 polynomial.
pub fn quad_form(a: &SymMatrix) -> HomPoly {
    let n = a.dim();
    let mut out = HomPoly::zero(n);
    for i in 0..n {
        for j in 0..n {
            let v = a.as_matrix().get(i, j);
            if v.is_zero() {
                continue;
            }
            let term = &HomPoly::var(n, i) * &HomPoly::var(n, j);
            out = &out + &term.scale_gauss(v);
        }
    }
    out
}

/// Recover the symmetric matrix of a `mu`-free quadratic form; the inverse
/// of [`quad_form`]. The zero polynomial maps to the zero matrix.
pub fn sym_matrix_from_quadratic(p: &HomPoly) -> Result<SymMatrix> {
    let n = p.nvars();
    if p.is_zero() {
        return Ok(SymMatrix::zero(n));
    }
    if p.homogeneous_degree() != Some(2) {
        return Err(Error::NotQuadratic);
    }
    let mut m = Matrix::zero(n);
    for (mon, c) in p.terms() {
        let c = c.as_gauss().ok_or(Error::NotQuadratic)?;
        let vars: Vec<usize> = (0..n)
            .flat_map(|i| std::iter::repeat_n(i, mon.exp(i) as usize))
            .collect();
        debug_assert_eq!(vars.len(), 2);
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            m.set(i, i, c);
        } else {
            let half = c.div(&GaussRational::from_int(2));
            m.set(i, j, half.clone());
            m.set(j, i, half);
        }
    }
    SymMatrix::new(m)
}

/// Truncated star exponential of an arbitrary generator:
/// `sum_{k<=K} (t^k/k!) X^{#k}`, star powers iterated as left
/// multiplications.
pub fn star_exp_poly_series(
    ctx: &StarContext,
    generator: &HomPoly,
    order: usize,
) -> Result<PolySeries> {
    let n = ctx.nvars();
    let mut out = PolySeries::zero(n, order);
    let mut power = HomPoly::one(n);
    out.set_coeff(0, power.clone());
    for k in 1..=order {
        power = ctx.star(generator, &power)?;
        out.set_coeff(k, power.scale_gauss(&inv_factorial(k as u64)));
    }
    Ok(out)
}

/// Truncated star exponential `sum_{k<=K} (t^k/k!) (A[Z]/mu)^{#k}`, the
/// brute-force oracle. Each `t`-coefficient is exact; its monomials of
/// `z`-degree `2d` carry exactly `mu^{-d}`.
pub fn star_exp_series(ctx: &StarContext, a: &SymMatrix, order: usize) -> Result<PolySeries> {
    if a.dim() != ctx.nvars() {
        return Err(Error::DimensionMismatch {
            expected: ctx.nvars(),
            found: a.dim(),
        });
    }
    star_exp_poly_series(ctx, &quad_form(a).mul_mu_pow(-1), order)
}

/// Cayley transform `C(X) = (1 - X)(1 + X)^{-1}` of an exact matrix.
pub fn cayley_matrix(x: &Matrix) -> Result<Matrix> {
    let id = Matrix::identity(x.dim());
    let denom = (&id + x).inverse().ok_or(Error::SingularMatrix)?;
    Ok(&(&id - x) * &denom)
}

/// Cayley transform of a matrix series, order by order; the constant term
/// of `1 + X` must be invertible.
pub fn cayley_series(x: &MatrixSeries) -> Result<MatrixSeries> {
    let id = MatrixSeries::identity(x.dim(), x.order());
    let denom = id.add(x).inverse()?;
    Ok(id.sub(x).mul(&denom))
}

/// Solve the matrix Riccati flow `q' = (1 + q) a (1 - q)`, `q(0) = b`, as a
/// truncated series: the Cayley transform linearizes the flow to
/// `C(q)' = -2a C(q)`, so `q(t) = C(exp(-2at) C(b))`.
pub fn riccati_solve(a: &Matrix, b: &Matrix, order: usize) -> Result<MatrixSeries> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let cb = cayley_matrix(b)?;
    let flow = exp_series(&MatrixSeries::linear(&a.scale(&GaussRational::from_int(-2)), order));
    let q = cayley_series(&flow.mul_const_right(&cb))?;
    debug_assert_eq!(q.coeff(0), b);
    Ok(q)
}

/// Amplitude of the closed form:
/// `g(t) = det^{-1/2}((exp(at)(1+b) + exp(-at)(1-b)) / 2)`,
/// computed as a determinant of the truncated matrix series followed by the
/// binomial `-1/2` power (the constant term is 1, so the branch is the
/// canonical one).
pub fn amplitude_solve(a: &Matrix, b: &Matrix, order: usize) -> Result<ScalarSeries> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    // the closed form is only meaningful alongside the Riccati solution,
    // which needs 1 + b invertible
    cayley_matrix(b)?;
    let id = Matrix::identity(a.dim());
    let plus = exp_series(&MatrixSeries::linear(a, order)).mul_const_right(&(&id + b));
    let minus = exp_series(&MatrixSeries::linear(&-a, order)).mul_const_right(&(&id - b));
    let m = plus.add(&minus).scale(&GaussRational::from_ratio(1, 2));
    let det = m.det();
    debug_assert!(det.coeff(0).is_one());
    let centered = det.sub(&ScalarSeries::one(order));
    Ok(centered.binomial_power(&GaussRational::from_ratio(-1, 2)))
}

/// Closed form of a star exponential: amplitude series and symmetric phase
/// matrix series `Q(t)`, the exponent being `(1/mu) Q(t)[Z]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpAnsatz {
    amplitude: ScalarSeries,
    phase: MatrixSeries,
}

impl ExpAnsatz {
    pub fn new(amplitude: ScalarSeries, phase: MatrixSeries) -> Self {
        assert_eq!(amplitude.order(), phase.order(), "series order mismatch");
        for j in 0..=phase.order() {
            assert!(phase.coeff(j).is_symmetric(), "phase must stay symmetric");
        }
        assert!(amplitude.coeff(0).is_one(), "amplitude must start at 1");
        ExpAnsatz { amplitude, phase }
    }

    pub fn amplitude(&self) -> &ScalarSeries {
        &self.amplitude
    }

    pub fn phase(&self) -> &MatrixSeries {
        &self.phase
    }

    pub fn order(&self) -> usize {
        self.amplitude.order()
    }

    /// Expand `g(t) exp((1/mu) Q(t)[Z])` into a polynomial series in `t`.
    ///
    /// Requires `Q(0) = 0` (rest initial data): only then does every fixed
    /// `t`-order receive finitely many terms of the exponential.
    pub fn expand(&self) -> Result<PolySeries> {
        let order = self.order();
        let n = self.phase.dim();
        if !self.phase.coeff(0).is_zero() {
            return Err(Error::NonzeroPhaseConstant);
        }
        let mut phase_poly = PolySeries::zero(n, order);
        for j in 1..=order {
            let sym = SymMatrix::new(self.phase.coeff(j).clone()).expect("validated symmetric");
            phase_poly.set_coeff(j, quad_form(&sym).mul_mu_pow(-1));
        }
        // exp of a series with zero constant term: powers gain t-orders
        let mut exp = PolySeries::one(n, order);
        let mut power = PolySeries::one(n, order);
        for m in 1..=order {
            power = power.mul(&phase_poly);
            let mut scaled = PolySeries::zero(n, order);
            let w = inv_factorial(m as u64);
            for j in 0..=order {
                scaled.set_coeff(j, power.coeff(j).scale_gauss(&w));
            }
            exp = exp.add(&scaled);
        }
        Ok(exp.scale_series(&self.amplitude))
    }
}

/// Closed form of `e_#^{t A[Z]/mu}` with initial phase `B`: the phase is
/// `Q(t) = L^{-1} q(t)` for the Riccati solution `q` with data
/// `a = L A`, `b = L B`, and the amplitude is [`amplitude_solve`].
///
/// Requires the Poisson matrix to be invertible (even dimension) and
/// `1 + L B` invertible. The brute-force route [`star_exp_series`] has no
/// such restriction.
pub fn star_exp_closed_form(
    ctx: &StarContext,
    a: &SymMatrix,
    b: &SymMatrix,
    order: usize,
) -> Result<ExpAnsatz> {
    let n = ctx.nvars();
    if a.dim() != n || b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.dim().max(b.dim()),
        });
    }
    let lambda = ctx.lambda().as_matrix();
    let lambda_inv = lambda.inverse().ok_or(Error::SingularMatrix)?;
    let a_flow = lambda * a.as_matrix();
    let b_flow = lambda * b.as_matrix();
    let q = riccati_solve(&a_flow, &b_flow, order)?;
    let mut phase = MatrixSeries::zero(n, order);
    for j in 0..=order {
        phase.set_coeff(j, &lambda_inv * q.coeff(j));
    }
    let amplitude = amplitude_solve(&a_flow, &b_flow, order)?;
    Ok(ExpAnsatz::new(amplitude, phase))
}

/// Residual of the evolution equation `d/dt F = (A[Z]/mu) # F`, order by
/// order. A series solving the equation gives the zero residual through one
/// order below its truncation (differentiation consumes the top order).
pub fn evolution_residual(
    ctx: &StarContext,
    f: &PolySeries,
    a: &SymMatrix,
) -> Result<PolySeries> {
    if f.nvars() != ctx.nvars() || a.dim() != ctx.nvars() {
        return Err(Error::DimensionMismatch {
            expected: ctx.nvars(),
            found: f.nvars().max(a.dim()),
        });
    }
    let order = f.order();
    if order == 0 {
        // no derivative information at a bare constant term
        return Ok(PolySeries::zero(f.nvars(), 0));
    }
    let generator = quad_form(a).mul_mu_pow(-1);
    let residual_order = order - 1;
    let mut out = PolySeries::zero(f.nvars(), residual_order);
    for j in 0..=residual_order {
        let ddt = f.coeff(j + 1).scale_gauss(&GaussRational::from_int(j as i64 + 1));
        let rhs = ctx.star(&generator, f.coeff(j))?;
        out.set_coeff(j, &ddt - &rhs);
    }
    Ok(out)
}

/// Which side the quadratic generator multiplies on in the evolution
/// equation. With rest initial data the two flows coincide; for a nonzero
/// initial phase they differ and the closed form follows the right-sided
/// flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarSide {
    Left,
    Right,
}

/// Residual of the evolution equation evaluated on the Gaussian ansatz
/// `F = g(t) exp((1/mu) Q(t)[Z])` without expanding the exponential:
/// both sides of the equation are divided by `exp(...)` and the star product
/// against the exponential is carried out through the chain rule, which
/// terminates at the second derivative because the generator is quadratic.
///
/// This is an independent route: it never forms the matrix products of the
/// closed-form construction.
pub fn ansatz_evolution_residual(
    ctx: &StarContext,
    a: &SymMatrix,
    ansatz: &ExpAnsatz,
    side: StarSide,
) -> Result<PolySeries> {
    let n = ctx.nvars();
    if a.dim() != n || ansatz.phase().dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.dim().max(ansatz.phase().dim()),
        });
    }
    let order = ansatz.order();
    let az = quad_form(a);
    // Q(t)[Z] as a polynomial series (no mu weight here; weights are applied
    // per term below).
    let mut qz = PolySeries::zero(n, order);
    for j in 0..=order {
        let sym = SymMatrix::new(ansatz.phase().coeff(j).clone()).expect("validated symmetric");
        qz.set_coeff(j, quad_form(&sym));
    }
    let g = ansatz.amplitude();
    let g_poly = PolySeries::one(n, order).scale_series(g);
    let g_prime = PolySeries::one(n, order).scale_series(&g.derivative());

    // d/dt of the ansatz, divided by the exponential:
    //   g' + g (1/mu) Q'(t)[Z]
    let lhs = g_prime.add(&g_poly.mul(&qz.derivative()).map_mu(-1));

    // entry list, transposed for the right-sided product
    let entries: Vec<(usize, usize, GaussRational)> = ctx
        .lambda()
        .nonzero_entries()
        .into_iter()
        .map(|(i, j, v)| match side {
            StarSide::Left => (i, j, v),
            StarSide::Right => (j, i, v),
        })
        .collect();

    // k = 0: (1/mu) A[Z] g
    let mut rhs = g_poly.mul(&PolySeries::constant_poly(az.clone(), order)).map_mu(-1);

    // k = 1: (mu/2) sum L^{ij} d_i(A[Z]/mu) * g (1/mu) d_j Q[Z]
    //      = (1/(2 mu)) g sum L^{ij} (d_i A[Z]) (d_j Q[Z])
    let mut k1 = PolySeries::zero(n, order);
    for (i, j, v) in &entries {
        let da = az.partial(*i);
        if da.is_zero() {
            continue;
        }
        let dq = qz.partial(*j);
        let term = PolySeries::constant_poly(da, order).mul(&dq);
        k1 = k1.add(&term.scale_gauss(v));
    }
    rhs = rhs.add(
        &g_poly
            .mul(&k1)
            .scale_gauss(&GaussRational::from_ratio(1, 2))
            .map_mu(-1),
    );

    // k = 2: (mu^2/8) sum L^{i1 j1} L^{i2 j2} d_{i1 i2}(A[Z]/mu)
    //        * [ g (1/mu) d_{j1 j2} Q[Z] + g (1/mu^2) (d_{j1} Q[Z])(d_{j2} Q[Z]) ]
    let mut k2_flat = PolySeries::zero(n, order); // mu^0 piece
    let mut k2_quad = PolySeries::zero(n, order); // carries an extra 1/mu
    for (i1, j1, v1) in &entries {
        let da1 = az.partial(*i1);
        if da1.is_zero() {
            continue;
        }
        for (i2, j2, v2) in &entries {
            let dda = da1.partial(*i2);
            if dda.is_zero() {
                continue;
            }
            let w = v1 * v2;
            let ddq = qz.partial(*j1).partial(*j2);
            k2_flat = k2_flat.add(
                &PolySeries::constant_poly(dda.clone(), order)
                    .mul(&ddq)
                    .scale_gauss(&w),
            );
            let dq_dq = qz.partial(*j1).mul(&qz.partial(*j2));
            k2_quad = k2_quad.add(
                &PolySeries::constant_poly(dda, order)
                    .mul(&dq_dq)
                    .scale_gauss(&w),
            );
        }
    }
    let eighth = GaussRational::from_ratio(1, 8);
    rhs = rhs.add(&g_poly.mul(&k2_flat).scale_gauss(&eighth));
    rhs = rhs.add(&g_poly.mul(&k2_quad).scale_gauss(&eighth).map_mu(-1));

    Ok(lhs.sub(&rhs))
}

/// Expand the closed form and compare with the brute-force series, term by
/// term through the truncation order.
pub fn closed_form_matches_series(
    ctx: &StarContext,
    a: &SymMatrix,
    order: usize,
) -> Result<bool> {
    let oracle = star_exp_series(ctx, a, order)?;
    let ansatz = star_exp_closed_form(ctx, a, &SymMatrix::zero(ctx.nvars()), order)?;
    Ok(ansatz.expand()? == oracle)
}

/// The exponential-tangent identity of the Cayley transform, as truncated
/// series in `t` with `a -> a t`:
///
/// ```text
/// exp(2 i a t) = C(-i tan(a t)),
/// ```
///
/// expanding tan and exp independently over the Gaussian rationals.
pub fn cayley_exp_tan_identity(a: &Matrix, order: usize) -> bool {
    let i = GaussRational::i();
    let at = MatrixSeries::linear(a, order);
    let lhs = exp_series(&at.scale(&(&i * &GaussRational::from_int(2))));
    let tan = tan_series(&at);
    match cayley_series(&tan.scale(&-&i)) {
        Ok(rhs) => lhs == rhs,
        Err(_) => false,
    }
}

/// The formal inverse of the exponential-tangent identity: with
/// `g := C(-i tan(a t))`,
///
/// ```text
/// log g = 2 i arctan(i C(g)),
/// ```
///
/// so arctan undoes tan and log undoes exp on these series.
pub fn cayley_log_arctan_identity(a: &Matrix, order: usize) -> bool {
    let i = GaussRational::i();
    let at = MatrixSeries::linear(a, order);
    let tan = tan_series(&at);
    let g = match cayley_series(&tan.scale(&-&i)) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let log_g = log1p_series(&g.sub(&MatrixSeries::identity(a.dim(), order)));
    let cg = match cayley_series(&g) {
        Ok(m) => m,
        Err(_) => return false,
    };
    let rhs = arctan_series(&cg.scale(&i)).scale(&(&i * &GaussRational::from_int(2)));
    log_g == rhs
}

/// Both series identities at once.
pub fn cayley_identity_checks(a: &Matrix, order: usize) -> bool {
    cayley_exp_tan_identity(a, order) && cayley_log_arctan_identity(a, order)
}

// Small conveniences for polynomial series used only in this module.
impl PolySeries {
    /// The constant-in-`t` series with the given polynomial.
    pub fn constant_poly(p: HomPoly, order: usize) -> Self {
        let mut s = PolySeries::zero(p.nvars(), order);
        s.set_coeff(0, p);
        s
    }

    /// Apply `d/dz_i` to every coefficient.
    pub fn partial(&self, index: usize) -> Self {
        let mut out = PolySeries::zero(self.nvars(), self.order());
        for j in 0..=self.order() {
            out.set_coeff(j, self.coeff(j).partial(index));
        }
        out
    }

    /// Multiply every coefficient by `mu^shift`.
    pub fn map_mu(&self, shift: i64) -> Self {
        let mut out = PolySeries::zero(self.nvars(), self.order());
        for j in 0..=self.order() {
            out.set_coeff(j, self.coeff(j).mul_mu_pow(shift));
        }
        out
    }

    pub fn scale_gauss(&self, c: &GaussRational) -> Self {
        let mut out = PolySeries::zero(self.nvars(), self.order());
        for j in 0..=self.order() {
            out.set_coeff(j, self.coeff(j).scale_gauss(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::MuScalar;
    use crate::star::PoissonMatrix;

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_ratio(n, d)
    }

    fn z(nvars: usize, i: usize) -> HomPoly {
        HomPoly::var(nvars, i)
    }

    fn cp1_context() -> StarContext {
        StarContext::new(PoissonMatrix::standard_symplectic(2).unwrap())
    }

    fn pairing_2x2() -> SymMatrix {
        let mut m = Matrix::zero(2);
        m.set(0, 1, q(1, 2));
        m.set(1, 0, q(1, 2));
        SymMatrix::new(m).unwrap()
    }

    #[test]
    fn quad_form_examples() {
        assert_eq!(quad_form(&pairing_2x2()), &z(2, 0) * &z(2, 1));
        let id = SymMatrix::identity(2);
        assert_eq!(quad_form(&id), &z(2, 0).pow(2) + &z(2, 1).pow(2));
        assert!(quad_form(&SymMatrix::zero(3)).is_zero());
    }

    #[test]
    fn quad_form_round_trip() {
        let mut m = Matrix::zero(3);
        m.set(0, 0, q(2, 3));
        m.set(0, 2, q(-1, 2));
        m.set(2, 0, q(-1, 2));
        m.set(1, 1, q(5, 1));
        let sym = SymMatrix::new(m).unwrap();
        assert_eq!(sym_matrix_from_quadratic(&quad_form(&sym)).unwrap(), sym);
        assert!(sym_matrix_from_quadratic(&z(2, 0)).is_err());
    }

    #[test]
    fn star_exp_series_low_orders() {
        let ctx = cp1_context();
        let a = pairing_2x2();
        let f = star_exp_series(&ctx, &a, 2).unwrap();
        assert_eq!(f.coeff(0), &HomPoly::one(2));
        assert_eq!(f.coeff(1), &quad_form(&a).mul_mu_pow(-1));
        // (z0 z1 / mu)^{#2} = z0^2 z1^2 / mu^2 - 1/4, halved by 1/2!
        let expected = &(&z(2, 0).pow(2) * &z(2, 1).pow(2))
            .scale(&MuScalar::term(-2, q(1, 2)))
            + &HomPoly::constant(2, MuScalar::from_gauss(q(-1, 8)));
        assert_eq!(f.coeff(2), &expected);

        let trivial = star_exp_series(&ctx, &SymMatrix::zero(2), 5).unwrap();
        assert_eq!(trivial, PolySeries::one(2, 5));
        let order0 = star_exp_series(&ctx, &a, 0).unwrap();
        assert_eq!(order0, PolySeries::one(2, 0));
    }

    #[test]
    fn cayley_matrix_examples() {
        assert_eq!(
            cayley_matrix(&Matrix::zero(2)).unwrap(),
            Matrix::identity(2)
        );
        let x = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            cayley_matrix(&x).unwrap(),
            Matrix::from_i64(&[&[1, -2], &[0, 1]])
        );
        let x = Matrix::from_rows(vec![
            vec![q(1, 3), q(-2, 5)],
            vec![q(1, 2), q(3, 4)],
        ])
        .unwrap();
        let c = cayley_matrix(&x).unwrap();
        assert_eq!(cayley_matrix(&c).unwrap(), x);
        // 1 + X singular
        let bad = Matrix::from_i64(&[&[-1, 0], &[0, 0]]);
        assert_eq!(cayley_matrix(&bad), Err(Error::SingularMatrix));
    }

    #[test]
    fn riccati_stationary_and_linearized() {
        let b = Matrix::from_rows(vec![vec![q(0, 1), q(1, 3)], vec![q(1, 5), q(0, 1)]]).unwrap();
        let q_series = riccati_solve(&Matrix::zero(2), &b, 5).unwrap();
        assert_eq!(q_series, MatrixSeries::constant(b, 5));

        let a = Matrix::from_i64(&[&[1, 2], &[-1, 0]]);
        let q_series = riccati_solve(&a, &Matrix::zero(2), 5).unwrap();
        assert_eq!(q_series.coeff(0), &Matrix::zero(2));
        assert_eq!(q_series.coeff(1), &a);
    }

    #[test]
    fn riccati_tanh_coefficients_and_residual() {
        // a = diag(1/2, -1/2) gives q(t) = diag(tanh(t/2), -tanh(t/2)):
        // tanh(t/2) = t/2 - t^3/24 + t^5/240 - ...
        let lambda = PoissonMatrix::standard_symplectic(2).unwrap();
        let a = lambda.as_matrix() * pairing_2x2().as_matrix();
        let q_series = riccati_solve(&a, &Matrix::zero(2), 6).unwrap();
        let diag = |n: i64, d: i64| {
            let mut m = Matrix::zero(2);
            m.set(0, 0, q(n, d));
            m.set(1, 1, q(-n, d));
            m
        };
        assert_eq!(q_series.coeff(1), &diag(1, 2));
        assert_eq!(q_series.coeff(2), &Matrix::zero(2));
        assert_eq!(q_series.coeff(3), &diag(-1, 24));
        assert_eq!(q_series.coeff(5), &diag(1, 240));

        // residual of q' = (1 + q) a (1 - q)
        let id = MatrixSeries::identity(2, 6);
        let a_series = MatrixSeries::constant(a, 6);
        let rhs = id.add(&q_series).mul(&a_series).mul(&id.sub(&q_series));
        let residual = q_series.derivative().sub(&rhs);
        assert!(residual.is_zero_through(5));
    }

    #[test]
    fn amplitude_closed_forms() {
        assert_eq!(
            amplitude_solve(&Matrix::zero(2), &Matrix::zero(2), 6).unwrap(),
            ScalarSeries::one(6)
        );
        // a = diag(1/2, -1/2): g(t) = sech(t/2) = 1 - t^2/8 + 5 t^4/384 - ...
        let lambda = PoissonMatrix::standard_symplectic(2).unwrap();
        let a = lambda.as_matrix() * pairing_2x2().as_matrix();
        let g = amplitude_solve(&a, &Matrix::zero(2), 6).unwrap();
        assert_eq!(g.coeff(0), &q(1, 1));
        assert_eq!(g.coeff(2), &q(-1, 8));
        assert_eq!(g.coeff(4), &q(5, 384));
        assert_eq!(g.coeff(6), &q(-61, 46080));
        // even in t for rest initial data
        assert!(g.coeff(1).is_zero() && g.coeff(3).is_zero() && g.coeff(5).is_zero());
    }

    #[test]
    fn closed_form_rest_cases() {
        let ctx = cp1_context();
        let zero = SymMatrix::zero(2);
        let ansatz = star_exp_closed_form(&ctx, &zero, &zero, 4).unwrap();
        assert_eq!(ansatz.amplitude(), &ScalarSeries::one(4));
        assert!(ansatz.phase().is_zero());

        let b = pairing_2x2();
        let ansatz = star_exp_closed_form(&ctx, &zero, &b, 4).unwrap();
        assert_eq!(ansatz.phase(), &MatrixSeries::constant(b.as_matrix().clone(), 4));
        assert_eq!(ansatz.amplitude(), &ScalarSeries::one(4));
        assert_eq!(ansatz.expand(), Err(Error::NonzeroPhaseConstant));
    }

    #[test]
    fn closed_form_matches_oracle_on_cp1() {
        let ctx = cp1_context();
        assert!(closed_form_matches_series(&ctx, &pairing_2x2(), 8).unwrap());
    }

    #[test]
    fn amplitude_agrees_with_constant_part_of_oracle() {
        // The constant monomial of the expanded exponential comes solely
        // from the amplitude, so the oracle pins it independently.
        let ctx = cp1_context();
        let a = pairing_2x2();
        let oracle = star_exp_series(&ctx, &a, 8).unwrap();
        let ansatz = star_exp_closed_form(&ctx, &a, &SymMatrix::zero(2), 8).unwrap();
        for j in 0..=8usize {
            let constant = oracle
                .coeff(j)
                .coeff(&crate::poly::Monomial::one(2))
                .coeff(0);
            assert_eq!(&constant, ansatz.amplitude().coeff(j));
        }
    }

    #[test]
    fn phase_is_odd_for_rest_data() {
        let ctx = cp1_context();
        let ansatz =
            star_exp_closed_form(&ctx, &SymMatrix::identity(2), &SymMatrix::zero(2), 7).unwrap();
        for j in (0..=7).step_by(2) {
            assert!(ansatz.phase().coeff(j).is_zero(), "even phase order {j}");
        }
    }

    #[test]
    fn closed_form_requires_invertible_lambda() {
        let lambda = PoissonMatrix::zero(3);
        let ctx = StarContext::new(lambda);
        let res = star_exp_closed_form(&ctx, &SymMatrix::identity(3), &SymMatrix::zero(3), 3);
        assert_eq!(res, Err(Error::SingularMatrix));
    }

    #[test]
    fn evolution_residual_cases() {
        let ctx = cp1_context();
        let a = pairing_2x2();
        let f = star_exp_series(&ctx, &a, 6).unwrap();
        let r = evolution_residual(&ctx, &f, &a).unwrap();
        assert!(r.is_zero_through(5));

        let expanded = star_exp_closed_form(&ctx, &a, &SymMatrix::zero(2), 6)
            .unwrap()
            .expand()
            .unwrap();
        let r = evolution_residual(&ctx, &expanded, &a).unwrap();
        assert!(r.is_zero_through(5));

        let one = PolySeries::one(2, 3);
        let r = evolution_residual(&ctx, &one, &a).unwrap();
        assert_eq!(r.coeff(0), &-quad_form(&a).mul_mu_pow(-1));
    }

    #[test]
    fn cayley_identities_hold() {
        assert!(cayley_identity_checks(&Matrix::zero(2), 6));
        let a = Matrix::from_rows(vec![
            vec![q(1, 2), q(-1, 3)],
            vec![q(2, 5), q(1, 7)],
        ])
        .unwrap();
        assert!(cayley_identity_checks(&a, 10));
    }

    #[test]
    fn ansatz_residual_vanishes_for_rest_data() {
        let ctx = cp1_context();
        let a = pairing_2x2();
        let ansatz = star_exp_closed_form(&ctx, &a, &SymMatrix::zero(2), 6).unwrap();
        for side in [StarSide::Left, StarSide::Right] {
            let r = ansatz_evolution_residual(&ctx, &a, &ansatz, side).unwrap();
            assert!(r.is_zero_through(5), "side {side:?}");
        }
    }

    #[test]
    fn ansatz_residual_sides_differ_for_nonzero_initial_phase() {
        // A[Z] = z0^2, B[Z] = z1^2: the closed form follows the right-sided
        // flow; the left-sided residual picks up -4 z0 z1 / mu at order 0.
        let ctx = cp1_context();
        let mut am = Matrix::zero(2);
        am.set(0, 0, q(1, 1));
        let a = SymMatrix::new(am).unwrap();
        let mut bm = Matrix::zero(2);
        bm.set(1, 1, q(1, 1));
        let b = SymMatrix::new(bm).unwrap();
        let ansatz = star_exp_closed_form(&ctx, &a, &b, 5).unwrap();

        let right = ansatz_evolution_residual(&ctx, &a, &ansatz, StarSide::Right).unwrap();
        assert!(right.is_zero_through(4));

        let left = ansatz_evolution_residual(&ctx, &a, &ansatz, StarSide::Left).unwrap();
        let expected = (&z(2, 0) * &z(2, 1))
            .scale(&MuScalar::term(-1, q(-4, 1)));
        assert_eq!(left.coeff(0), &expected);
    }

    #[test]
    fn mu_bucket_reduction_at_the_matrix_level() {
        // Collecting the 1/mu part of the evolution equation on the ansatz
        // reduces it to a matrix flow for the phase:
        //   Q' = A - (A L Q + (A L Q)^T) - Q L A L Q,
        // with Q = L^{-1} q; the mu^0 part is the amplitude equation
        // g' = -(1/2) tr((L A)(L Q)) g. Both are checked on the solved
        // series. For rest initial data the middle term vanishes along the
        // solution (the phase commutes with the generator there).
        let order = 7usize;
        for (dim, seed_b) in [(2usize, false), (2, true), (4, true)] {
            let lambda = PoissonMatrix::standard_symplectic(dim).unwrap();
            let ctx = StarContext::new(lambda.clone());
            let mut am = Matrix::zero(dim);
            for i in 0..dim {
                for j in i..dim {
                    let v = q((i + 2 * j + 1) as i64, (1 + i + j) as i64);
                    am.set(i, j, v.clone());
                    am.set(j, i, v);
                }
            }
            let a = SymMatrix::new(am).unwrap();
            let b = if seed_b {
                let mut bm = Matrix::zero(dim);
                bm.set(0, 0, q(1, 3));
                if dim > 1 {
                    bm.set(0, 1, q(-1, 2));
                    bm.set(1, 0, q(-1, 2));
                }
                SymMatrix::new(bm).unwrap()
            } else {
                SymMatrix::zero(dim)
            };
            let ansatz = star_exp_closed_form(&ctx, &a, &b, order).unwrap();
            let q_phase = ansatz.phase();

            let lam = lambda.as_matrix();
            let a_const = MatrixSeries::constant(a.as_matrix().clone(), order);
            let alq = q_phase.mul_const_left(&(a.as_matrix() * lam));
            let middle = alq.add(&alq.transpose());
            let qlalq = q_phase
                .mul_const_right(&(&(lam * a.as_matrix()) * lam))
                .mul(q_phase);
            let rhs = a_const.sub(&middle).sub(&qlalq);
            assert!(q_phase.derivative().sub(&rhs).is_zero_through(order - 1));

            if !seed_b {
                assert!(middle.is_zero_through(order));
            }

            // amplitude bucket
            let g = ansatz.amplitude();
            let aq_trace = q_phase
                .mul_const_left(&(&(lam * a.as_matrix()) * lam))
                .trace();
            let rhs = aq_trace.mul(g).scale(&q(-1, 2));
            assert!(g.derivative().sub(&rhs).is_zero_through(order - 1));
        }
    }

    #[test]
    fn semigroup_in_low_order() {
        // F(s) # F(t) = F(s+t) through combined order 4 on CP^1.
        let ctx = cp1_context();
        let f = star_exp_series(&ctx, &pairing_2x2(), 4).unwrap();
        for i in 0..=4usize {
            for j in 0..=(4 - i) {
                let prod = ctx.star(f.coeff(i), f.coeff(j)).unwrap();
                let binom = crate::util::binomial((i + j) as u64, i as u64);
                let expected = f.coeff(i + j).scale_gauss(&GaussRational::from_rational(
                    num_rational::BigRational::from_integer(binom.into()),
                ));
                assert_eq!(prod, expected, "orders {i}, {j}");
            }
        }
    }
}
