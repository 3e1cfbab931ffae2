//! Shared generators for the benchmark targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use projstar_core::{GaussRational, HomPoly, Matrix, Monomial, MuScalar, PoissonMatrix, SymMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> GaussRational {
    GaussRational::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))
}

pub fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32, terms: usize) -> HomPoly {
    let mut p = HomPoly::zero(nvars);
    for _ in 0..terms {
        let mut exps = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_degree) {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        p.add_term(
            Monomial::new(exps),
            MuScalar::term(rng.gen_range(-1i64..=1), random_rational(rng)),
        );
    }
    p
}

pub fn random_skew(rng: &mut ChaCha8Rng, dim: usize) -> PoissonMatrix {
    let mut m = Matrix::zero(dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = random_rational(rng);
            m.set(i, j, v.clone());
            m.set(j, i, -&v);
        }
    }
    PoissonMatrix::new(m).expect("constructed skew")
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, dim: usize) -> SymMatrix {
    let mut m = Matrix::zero(dim);
    for i in 0..dim {
        for j in i..dim {
            let v = random_rational(rng);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    SymMatrix::new(m).expect("constructed symmetric")
}

pub fn random_square(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let mut m = Matrix::zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            m.set(i, j, random_rational(rng));
        }
    }
    m
}
