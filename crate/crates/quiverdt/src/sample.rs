//! Seeded random inputs for property tests: Laurent polynomials, series
//! with prescribed truncation boxes, and homogeneous symmetric elements.

use num::BigRational;
use rand::Rng;

use crate::coha::{component_basis, SymElement};
use crate::error::Result;
use crate::quiver::{DimVector, Quiver};
use crate::ratfunc::RatFunc;
use crate::series::TwistedSeries;

/// Laurent polynomial in v with 1..=max_terms small integer terms.
pub fn random_laurent(rng: &mut impl Rng, max_terms: usize, max_exp: i64) -> RatFunc {
    let k = rng.gen_range(1..=max_terms.max(1));
    let mut out = RatFunc::zero();
    for _ in 0..k {
        let c = loop {
            let c = rng.gen_range(-3..=3i64);
            if c != 0 {
                break c;
            }
        };
        let e = rng.gen_range(-max_exp..=max_exp);
        out = &out + &(&RatFunc::from_int(c) * &RatFunc::v_pow(e));
    }
    out
}

/// Series over the box with vanishing constant term, as plethystic Exp
/// expects; roughly 70 percent of the nonzero coefficients are populated.
pub fn random_exp_ready_series(
    rng: &mut impl Rng,
    quiver: &Quiver,
    bounds: &DimVector,
) -> Result<TwistedSeries> {
    let mut out = TwistedSeries::zero(quiver, bounds)?;
    for d in bounds.iter_box() {
        if d.is_zero() || rng.gen_range(0..10) >= 7 {
            continue;
        }
        out.set_coeff(&d, random_laurent(rng, 3, 4))?;
    }
    Ok(out)
}

/// Homogeneous element at `d` of degree at most `degree_max`, with up to
/// three monomial terms and small nonzero coefficients.
pub fn random_sym_element(
    rng: &mut impl Rng,
    d: &DimVector,
    degree_max: usize,
) -> Result<SymElement> {
    let degree = rng.gen_range(0..=degree_max);
    let basis = component_basis(d, degree);
    if basis.is_empty() {
        return Ok(SymElement::zero(d.clone(), degree));
    }
    let nterms = rng.gen_range(1..=basis.len().min(3));
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let key = basis[rng.gen_range(0..basis.len())].clone();
        let c = loop {
            let c = rng.gen_range(-3..=3i64);
            if c != 0 {
                break c;
            }
        };
        terms.push((key, BigRational::from_integer(c.into())));
    }
    SymElement::from_terms(d.clone(), degree, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use num::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dv(xs: &[u32]) -> DimVector {
        DimVector::new(xs.to_vec())
    }

    #[test]
    fn deterministic_under_seed() {
        let mk = || {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            random_laurent(&mut rng, 3, 4)
        };
        assert_eq!(mk(), mk());
    }

    #[test]
    fn exp_ready_series_has_no_constant_term() {
        let q = Quiver::kronecker(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_exp_ready_series(&mut rng, &q, &dv(&[2, 2])).unwrap();
        assert_eq!(s.coeff(&dv(&[0, 0])), RatFunc::zero());
    }

    #[test]
    fn sym_elements_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let f = random_sym_element(&mut rng, &dv(&[2, 1]), 3).unwrap();
            for (mp, c) in f.terms() {
                assert!(mp.fits(&dv(&[2, 1])));
                assert_eq!(mp.weight() as usize, f.degree());
                assert!(!c.is_zero());
            }
        }
    }
}
