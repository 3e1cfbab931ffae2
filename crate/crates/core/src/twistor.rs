//! The incidence layer tying the four homogeneous coordinates of projective
//! 3-space to spacetime coordinates `x^{a,b}` and fiber coordinates
//! `pi_1, pi_2` via `z^{b} = x^{a,b} pi_a`, together with the deformed
//! commutation relations this substitution induces.
//!
//! The six-variable ambient ring is ordered
//! `(x^{1,1}, x^{1,2}, x^{2,1}, x^{2,2}, pi_1, pi_2)`; the deformation acts
//! on the `x`-slots only, through a user-supplied 4x4 skew matrix `D`, with
//! the fiber coordinates central. The formal deformation parameter of the
//! relations is identified with `mu`.

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SymMatrix};
use crate::poly::HomPoly;
use crate::quadexp::{quad_form, star_exp_poly_series};
use crate::scalar::MuScalar;
use crate::series::PolySeries;
use crate::star::{PoissonMatrix, StarContext};

/// Number of variables of the incidence source ring (`z1..z4`).
pub const SOURCE_VARS: usize = 4;
/// Number of variables of the incidence target ring
/// (`x11, x12, x21, x22, pi1, pi2`).
pub const TARGET_VARS: usize = 6;

/// Slot of `x^{a, b}` (`a`, `b` zero-based) in the target ring.
pub fn x_slot(a: usize, b: usize) -> usize {
    debug_assert!(a < 2 && b < 2);
    2 * a + b
}

/// Slot of `pi_a` (`a` zero-based) in the target ring.
pub fn pi_slot(a: usize) -> usize {
    debug_assert!(a < 2);
    4 + a
}

/// Substitute the incidence relations into a polynomial in `z1..z4`:
///
/// ```text
/// z1 -> x^{1,1} pi_1 + x^{2,1} pi_2      z3 -> pi_1
/// z2 -> x^{1,2} pi_1 + x^{2,2} pi_2      z4 -> pi_2
/// ```
///
/// Every image carries fiber degree one, so a degree-`k` monomial lands in
/// fiber degree exactly `k`.
pub fn incidence_pullback(p: &HomPoly) -> Result<HomPoly> {
    if p.nvars() != SOURCE_VARS {
        return Err(Error::DimensionMismatch {
            expected: SOURCE_VARS,
            found: p.nvars(),
        });
    }
    let images = incidence_images();
    p.substitute(&images)
}

fn incidence_images() -> Vec<HomPoly> {
    let x = |a: usize, b: usize| HomPoly::var(TARGET_VARS, x_slot(a, b));
    let pi = |a: usize| HomPoly::var(TARGET_VARS, pi_slot(a));
    vec![
        &(&x(0, 0) * &pi(0)) + &(&x(1, 0) * &pi(1)),
        &(&x(0, 1) * &pi(0)) + &(&x(1, 1) * &pi(1)),
        pi(0),
        pi(1),
    ]
}

/// Incidence data: a 4x4 skew matrix on the `x`-slots. The fiber slots stay
/// central (zero rows and columns in the induced Poisson matrix).
#[derive(Clone, Debug)]
pub struct IncidenceContext {
    d: PoissonMatrix,
}

impl IncidenceContext {
    pub fn new(d: PoissonMatrix) -> Result<Self> {
        if d.dim() != SOURCE_VARS {
            return Err(Error::DimensionMismatch {
                expected: SOURCE_VARS,
                found: d.dim(),
            });
        }
        Ok(IncidenceContext { d })
    }

    pub fn d_matrix(&self) -> &PoissonMatrix {
        &self.d
    }

    /// The 6x6 Poisson matrix: `D` on the `x`-block, zero elsewhere.
    pub fn induced_poisson(&self) -> PoissonMatrix {
        let mut m = Matrix::zero(TARGET_VARS);
        for i in 0..SOURCE_VARS {
            for j in 0..SOURCE_VARS {
                m.set(i, j, self.d.entry(i, j).clone());
            }
        }
        PoissonMatrix::new(m).expect("skew block stays skew")
    }

    pub fn star_context(&self) -> StarContext {
        StarContext::new(self.induced_poisson())
    }

    /// Check one deformed commutation relation of the pulled-back
    /// coordinates (`b1`, `b2` dotted indices, zero-based):
    ///
    /// ```text
    /// [z^{b1}, z^{b2}]_# = mu * sum_{a1,a2} D^{(a1,b1),(a2,b2)} pi_{a1} pi_{a2},
    /// ```
    ///
    /// the left side through the star commutator in the six-variable ring
    /// and the right side by direct contraction of `D`.
    pub fn commutator_pair_check(&self, b1: usize, b2: usize) -> bool {
        assert!(b1 < 2 && b2 < 2, "dotted index out of range");
        let ctx = self.star_context();
        let f = incidence_pullback(&HomPoly::var(SOURCE_VARS, b1)).expect("coordinate pullback");
        let g = incidence_pullback(&HomPoly::var(SOURCE_VARS, b2)).expect("coordinate pullback");
        let lhs = ctx.star(&f, &g).expect("ring arity fixed")
            - ctx.star(&g, &f).expect("ring arity fixed");
        let mut rhs = HomPoly::zero(TARGET_VARS);
        for a1 in 0..2 {
            for a2 in 0..2 {
                let coeff = self.d.entry(x_slot(a1, b1), x_slot(a2, b2));
                if coeff.is_zero() {
                    continue;
                }
                let pis = &HomPoly::var(TARGET_VARS, pi_slot(a1))
                    * &HomPoly::var(TARGET_VARS, pi_slot(a2));
                rhs = &rhs + &pis.scale_gauss(coeff);
            }
        }
        lhs == rhs.scale(&MuScalar::mu_pow(1))
    }

    /// All four commutation relations at once.
    pub fn commutator_check(&self) -> bool {
        (0..2).all(|b1| (0..2).all(|b2| self.commutator_pair_check(b1, b2)))
    }

    /// Star exponential of a quadratic form in the first two coordinates,
    /// after pullback. The pulled-back generator has bidegree `(2, 2)` —
    /// quadratic in the `x`-slots with the fiber coordinates riding along —
    /// so each `t^k` coefficient carries fiber degree at most `2k`. The
    /// induced Poisson matrix is always singular (central fiber slots), so
    /// only the brute-force series exists on this ring.
    pub fn star_exp(&self, a: &SymMatrix, order: usize) -> Result<PolySeries> {
        if a.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: a.dim(),
            });
        }
        let mut a4 = Matrix::zero(SOURCE_VARS);
        for i in 0..2 {
            for j in 0..2 {
                a4.set(i, j, a.as_matrix().get(i, j).clone());
            }
        }
        let generator = quad_form(&SymMatrix::new(a4).expect("embedded block stays symmetric"));
        let pulled = incidence_pullback(&generator)?;
        star_exp_poly_series(&self.star_context(), &pulled.mul_mu_pow(-1), order)
    }
}
