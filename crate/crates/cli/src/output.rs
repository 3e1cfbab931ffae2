//! Machine-readable output forms. All numbers are rational strings; the
//! JSON form of a polynomial re-ingests to the identical value.

use serde::{Deserialize, Serialize};

use projstar_core::{
    GaussRational, HomPoly, LocalFraction, MatrixSeries, Monomial, MuScalar, PolySeries,
    ScalarSeries,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub mu: i64,
    pub monomial: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn from_poly(p: &HomPoly) -> PolyJson {
        let mut terms = Vec::new();
        // canonical order: monomials descending, mu ascending
        for (mon, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
            for (mu, coeff) in c.iter() {
                terms.push(TermJson {
                    coeff: coeff.to_string(),
                    mu,
                    monomial: mon.exps().to_vec(),
                });
            }
        }
        PolyJson {
            nvars: p.nvars(),
            terms,
        }
    }

    pub fn to_poly(&self) -> Result<HomPoly, String> {
        let mut p = HomPoly::zero(self.nvars);
        for term in &self.terms {
            if term.monomial.len() != self.nvars {
                return Err(format!(
                    "monomial arity {} does not match nvars {}",
                    term.monomial.len(),
                    self.nvars
                ));
            }
            let coeff: GaussRational = term
                .coeff
                .parse()
                .map_err(|_| format!("invalid rational string `{}`", term.coeff))?;
            p.add_term(
                Monomial::new(term.monomial.clone()),
                MuScalar::term(term.mu, coeff),
            );
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub orders: Vec<PolyJson>,
}

impl SeriesJson {
    pub fn from_series(s: &PolySeries) -> SeriesJson {
        SeriesJson {
            orders: s.coeffs().iter().map(PolyJson::from_poly).collect(),
        }
    }
}

pub fn scalar_series_json(s: &ScalarSeries) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

pub fn matrix_series_json(s: &MatrixSeries) -> Vec<Vec<Vec<String>>> {
    (0..=s.order())
        .map(|j| {
            let m = s.coeff(j);
            (0..m.dim())
                .map(|r| (0..m.dim()).map(|c| m.get(r, c).to_string()).collect())
                .collect()
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ClosedFormJson {
    pub amplitude: Vec<String>,
    pub phase: Vec<Vec<Vec<String>>>,
    /// `None` when the initial phase is nonzero (nothing to expand against).
    pub oracle_equivalence: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct StarExpJson {
    pub order: usize,
    pub series: SeriesJson,
    /// `None` when the Poisson matrix is singular.
    pub closed_form: Option<ClosedFormJson>,
}

#[derive(Debug, Serialize)]
pub struct CayleyItemJson {
    pub item: u8,
    pub name: &'static str,
    /// `"pass"`, `"fail"`, or `"skipped: <reason>"`.
    pub status: String,
}

#[derive(Debug, Serialize)]
pub struct CayleyCheckJson {
    pub order: usize,
    pub items: Vec<CayleyItemJson>,
}

#[derive(Debug, Serialize)]
pub struct H0Json {
    pub n: usize,
    pub m: i64,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct LocalizeJson {
    pub numerator: PolyJson,
    pub base: PolyJson,
    pub power: u32,
    pub text: String,
}

pub fn localize_json(fraction: &LocalFraction) -> LocalizeJson {
    LocalizeJson {
        numerator: PolyJson::from_poly(&fraction.numerator().to_hom_poly()),
        base: PolyJson::from_poly(&fraction.base().to_hom_poly()),
        power: fraction.power(),
        text: fraction.to_string(),
    }
}

#[derive(Debug, Serialize)]
pub struct TwistorPairJson {
    pub b1: usize,
    pub b2: usize,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct TwistorCheckJson {
    pub pairs: Vec<TwistorPairJson>,
    pub pass: bool,
}
