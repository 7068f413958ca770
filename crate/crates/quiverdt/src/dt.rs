//! The Donaldson-Thomas engine: the generating series A(q,t), the
//! wall-crossing recursion for slope-wise semistable series, and extraction of
//! the quantized DT invariants through the plethystic logarithm.
//!
//! The recursion solved here is, for every non-zero d in the box,
//!
//!   A_d = sum over HN types (d^1..d^l) of d of
//!         (-v)^(sum_{r<s} <d^r,d^s>) * prod_nu Asst_{d^nu}
//!
//! whose l = 1 term isolates Asst_d; everything else involves strictly
//! smaller vectors, so memoized induction on the box solves it exactly.

use crate::error::{Error, Result};
use crate::quiver::{self, DimVector, Quiver, Slope, Stability};
use crate::ratfunc::RatFunc;
use crate::series::{ordered_product, TwistedSeries};
use num::{BigInt, Signed, Zero};
use std::collections::BTreeMap;

/// DT data at a single dimension vector.
///
/// `omega_tilde` holds the coefficients of the integer polynomial
/// Omega-tilde_d(q), ascending; `omegas` lists the non-zero Omega_{d,k},
/// where k = chi(d,d) + 2j for the coefficient at q^j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtResult {
    pub d: DimVector,
    pub chi: i64,
    pub omega_tilde: Vec<BigInt>,
    pub omegas: Vec<(i64, BigInt)>,
    /// Box on which mu-genericity was certified; `None` means unconditional
    /// (symmetric quiver).
    pub certified_bounds: Option<DimVector>,
}

impl DtResult {
    pub fn from_polynomial(
        d: DimVector,
        chi: i64,
        omega_tilde: Vec<BigInt>,
        certified_bounds: Option<DimVector>,
    ) -> Self {
        let omegas = omega_tilde
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (chi + 2 * j as i64, c.clone()))
            .collect();
        DtResult {
            d,
            chi,
            omega_tilde,
            omegas,
            certified_bounds,
        }
    }

    /// Omega_{d,k} for an arbitrary k (zero outside the listed support).
    pub fn omega_at(&self, k: i64) -> BigInt {
        self.omegas
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// All listed invariants non-negative?
    pub fn is_positive(&self) -> bool {
        self.omega_tilde.iter().all(|c| !c.is_negative())
    }

    /// Support inside chi(d,d) <= k <= 2 - chi(d,d)?
    pub fn support_in_expected_range(&self) -> bool {
        self.omegas
            .iter()
            .all(|(k, _)| self.chi <= *k && *k <= 2 - self.chi)
    }
}

/// The series A(q,t) = sum_d (-v)^(-chi(d,d)) prod_i prod_{nu=1}^{d_i}
/// (1 - q^(-nu))^(-1) t^d, truncated to the box.
pub fn series_a(quiver: &Quiver, bounds: &DimVector) -> Result<TwistedSeries> {
    TwistedSeries::from_fn(quiver, bounds, |d| a_coefficient(quiver, d))
}

fn a_coefficient(quiver: &Quiver, d: &DimVector) -> Result<RatFunc> {
    let chi = quiver.euler_form(d, d)?;
    let mut c = RatFunc::neg_v_pow(-chi);
    for i in 0..d.len() {
        for nu in 1..=d[i] {
            let factor = &RatFunc::one() - &RatFunc::q_pow(-(nu as i64));
            c = &c / &factor;
        }
    }
    Ok(c)
}

/// Memoized solver for the semistable coefficients at every vector of the
/// box, all slopes at once.
struct SstSolver<'a> {
    quiver: &'a Quiver,
    theta: &'a Stability,
    memo: BTreeMap<DimVector, RatFunc>,
}

impl<'a> SstSolver<'a> {
    fn new(quiver: &'a Quiver, theta: &'a Stability) -> Self {
        SstSolver {
            quiver,
            theta,
            memo: BTreeMap::new(),
        }
    }

    fn coeff(&mut self, d: &DimVector) -> Result<RatFunc> {
        if let Some(c) = self.memo.get(d) {
            return Ok(c.clone());
        }
        let mut value = a_coefficient(self.quiver, d)?;
        for parts in quiver::hn_types(self.quiver, self.theta, d)? {
            if parts.len() < 2 {
                continue;
            }
            let mut twist = 0i64;
            for r in 0..parts.len() {
                for s in r + 1..parts.len() {
                    twist += self.quiver.antisym_form(&parts[r], &parts[s])?;
                }
            }
            let mut prod = RatFunc::neg_v_pow(twist);
            for p in &parts {
                prod = &prod * &self.coeff(p)?;
            }
            value = &value - &prod;
        }
        self.memo.insert(d.clone(), value.clone());
        Ok(value)
    }
}

/// Slope-mu semistable series: the solution of the wall-crossing recursion
/// filtered to slope mu, with constant term 1.
pub fn semistable_series(
    quiver: &Quiver,
    theta: &Stability,
    mu: Slope,
    bounds: &DimVector,
) -> Result<TwistedSeries> {
    let mut solver = SstSolver::new(quiver, theta);
    let mut out = TwistedSeries::one(quiver, bounds)?;
    for d in bounds.iter_box() {
        if d.is_zero() || theta.slope(&d)? != mu {
            continue;
        }
        out.set_coeff(&d, solver.coeff(&d)?)?;
    }
    Ok(out)
}

/// DT invariants for every vector of slope mu in the box.
///
/// Requires theta to be mu-generic; the certificate box (if any) is recorded
/// on each result.
pub fn dt_tilde(
    quiver: &Quiver,
    theta: &Stability,
    mu: Slope,
    bounds: &DimVector,
) -> Result<Vec<DtResult>> {
    let genericity = quiver::is_mu_generic(quiver, theta, mu, bounds)?;
    if !genericity.generic {
        return Err(Error::NotGeneric {
            slope: mu.to_string(),
            bounds: bounds.to_string(),
        });
    }
    let sst = semistable_series(quiver, theta, mu, bounds)?;
    let b = sst.map_coeffs(|c| c.substitute_v(-1))?;
    let log = b.plethystic_log()?;
    let one_minus_q = &RatFunc::one() - &RatFunc::q_pow(1);
    let mut out = Vec::new();
    for d in bounds.iter_box() {
        if d.is_zero() || theta.slope(&d)? != mu {
            continue;
        }
        let chi = quiver.euler_form(&d, &d)?;
        let val = &(&one_minus_q * &RatFunc::neg_v_pow(-chi)) * &log.coeff(&d);
        let omega_tilde = val.as_integer_q_poly()?;
        out.push(DtResult::from_polynomial(
            d,
            chi,
            omega_tilde,
            genericity.certified_bounds.clone(),
        ));
    }
    Ok(out)
}

/// DT invariants at the single vector d, at its own slope.
pub fn dt_invariants(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    bounds: &DimVector,
) -> Result<DtResult> {
    if !d.leq(bounds) {
        return Err(Error::OutOfBox {
            d: d.to_string(),
            bounds: bounds.to_string(),
        });
    }
    let mu = theta.slope(d)?;
    let table = dt_tilde(quiver, theta, mu, bounds)?;
    table
        .into_iter()
        .find(|r| &r.d == d)
        .ok_or_else(|| Error::Internal(format!("dt table is missing {d}")))
}

/// All slopes realized by non-zero vectors in the box, strictly decreasing.
pub fn realized_slopes(theta: &Stability, bounds: &DimVector) -> Result<Vec<Slope>> {
    let mut slopes: Vec<Slope> = Vec::new();
    for d in bounds.iter_box() {
        if d.is_zero() {
            continue;
        }
        let mu = theta.slope(&d)?;
        if !slopes.contains(&mu) {
            slopes.push(mu);
        }
    }
    slopes.sort();
    slopes.reverse();
    Ok(slopes)
}

/// Wall-crossing reconstruction: the ordered twisted product of the slope
/// series must reproduce A(q,t) exactly.
pub fn wallcross_check(quiver: &Quiver, theta: &Stability, bounds: &DimVector) -> Result<bool> {
    let mut solver = SstSolver::new(quiver, theta);
    let mut factors = Vec::new();
    for mu in realized_slopes(theta, bounds)? {
        let mut series = TwistedSeries::one(quiver, bounds)?;
        for d in bounds.iter_box() {
            if d.is_zero() || theta.slope(&d)? != mu {
                continue;
            }
            series.set_coeff(&d, solver.coeff(&d)?)?;
        }
        factors.push((mu, series));
    }
    let product = ordered_product(quiver, bounds, &factors)?;
    Ok(product == series_a(quiver, bounds)?)
}

/// For a symmetric quiver, DT invariants must not depend on the stability.
pub fn theta_independence_check(
    quiver: &Quiver,
    theta1: &Stability,
    theta2: &Stability,
    d: &DimVector,
    bounds: &DimVector,
) -> Result<bool> {
    if !quiver.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let r1 = dt_invariants(quiver, theta1, d, bounds)?;
    let r2 = dt_invariants(quiver, theta2, d, bounds)?;
    Ok(r1.omega_tilde == r2.omega_tilde && r1.omegas == r2.omegas)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(entries: &[u32]) -> DimVector {
        DimVector::new(entries.to_vec())
    }

    fn inv_one_minus_q_pow(k: i64) -> RatFunc {
        (&RatFunc::one() - &RatFunc::q_pow(k)).inverse().unwrap()
    }

    #[test]
    fn series_a_small_coefficients() {
        let l1 = series_a(&Quiver::loops(1), &dv(&[2])).unwrap();
        assert_eq!(l1.coeff(&dv(&[1])), inv_one_minus_q_pow(-1));
        let l0 = series_a(&Quiver::loops(0), &dv(&[2])).unwrap();
        assert_eq!(
            l0.coeff(&dv(&[1])),
            &RatFunc::neg_v_pow(-1) * &inv_one_minus_q_pow(-1)
        );
        let k2 = series_a(&Quiver::kronecker(2), &dv(&[1, 1])).unwrap();
        assert_eq!(
            k2.coeff(&dv(&[1, 1])),
            &inv_one_minus_q_pow(-1) * &inv_one_minus_q_pow(-1)
        );
        assert!(k2.constant_term().is_one());
    }

    #[test]
    fn semistable_trivial_stability_is_a() {
        let tc = Quiver::two_cycle();
        let theta = Stability::zero(2);
        let s = semistable_series(&tc, &theta, Slope::new(0, 1), &dv(&[2, 2])).unwrap();
        assert_eq!(s, series_a(&tc, &dv(&[2, 2])).unwrap());
    }

    #[test]
    fn semistable_kronecker_half_slope() {
        let k2 = Quiver::kronecker(2);
        let theta = Stability::new(vec![1, 0]);
        let s = semistable_series(&k2, &theta, Slope::new(1, 2), &dv(&[2, 2])).unwrap();
        let expect = &(&RatFunc::one() + &RatFunc::q_pow(-1))
            / &(&RatFunc::one() - &RatFunc::q_pow(-1));
        assert_eq!(s.coeff(&dv(&[1, 1])), expect);
        assert_eq!(s.coeff(&dv(&[1, 0])), RatFunc::zero());
        assert_eq!(s.coeff(&dv(&[2, 1])), RatFunc::zero());
        assert!(s.constant_term().is_one());
    }

    #[test]
    fn dt_loop_quivers_at_two() {
        // m-loop quiver at d = 2: Omega-tilde = 1 + q^2 + ... + q^(2(floor(m/2)-1)).
        let theta = Stability::zero(1);
        let r2 = dt_invariants(&Quiver::loops(2), &theta, &dv(&[2]), &dv(&[2])).unwrap();
        assert_eq!(r2.omega_tilde, vec![BigInt::from(1)]);
        assert_eq!(r2.omegas, vec![(-4, BigInt::from(1))]);
        let r3 = dt_invariants(&Quiver::loops(3), &theta, &dv(&[2]), &dv(&[2])).unwrap();
        assert_eq!(r3.omegas, vec![(-8, BigInt::from(1))]);
        let r4 = dt_invariants(&Quiver::loops(4), &theta, &dv(&[2]), &dv(&[2])).unwrap();
        assert_eq!(
            r4.omega_tilde,
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        assert_eq!(r4.omegas, vec![(-12, BigInt::from(1)), (-8, BigInt::from(1))]);
    }

    #[test]
    fn dt_kronecker_at_one_one() {
        let k2 = Quiver::kronecker(2);
        let theta = Stability::new(vec![1, 0]);
        let r = dt_invariants(&k2, &theta, &dv(&[1, 1]), &dv(&[2, 2])).unwrap();
        assert_eq!(r.omega_tilde, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(r.omegas, vec![(0, BigInt::from(1)), (2, BigInt::from(1))]);
        assert_eq!(r.certified_bounds, Some(dv(&[2, 2])));
    }

    #[test]
    fn dt_single_loop_vector_one() {
        let r = dt_invariants(&Quiver::loops(2), &Stability::zero(1), &dv(&[1]), &dv(&[3])).unwrap();
        assert_eq!(r.omegas, vec![(-1, BigInt::from(1))]);
    }

    #[test]
    fn dt_two_cycle_diagonal() {
        let tc = Quiver::two_cycle();
        let r = dt_invariants(&tc, &Stability::zero(2), &dv(&[1, 1]), &dv(&[2, 2])).unwrap();
        assert_eq!(r.omegas, vec![(0, BigInt::from(1))]);
        assert_eq!(r.certified_bounds, None);
    }

    #[test]
    fn dt_bipartite_is_gaussian_binomial() {
        let q2 = Quiver::bipartite(2);
        let theta = Stability::new(vec![1, -1]);
        let r = dt_invariants(&q2, &theta, &dv(&[1, 1]), &dv(&[1, 1])).unwrap();
        assert_eq!(r.omega_tilde, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn dt_box_independence() {
        let theta = Stability::zero(1);
        let small = dt_invariants(&Quiver::loops(3), &theta, &dv(&[2]), &dv(&[2])).unwrap();
        let large = dt_invariants(&Quiver::loops(3), &theta, &dv(&[2]), &dv(&[4])).unwrap();
        assert_eq!(small.omega_tilde, large.omega_tilde);
        let k2 = Quiver::kronecker(2);
        let th = Stability::new(vec![1, 0]);
        let a = dt_invariants(&k2, &th, &dv(&[1, 1]), &dv(&[1, 1])).unwrap();
        let b = dt_invariants(&k2, &th, &dv(&[1, 1]), &dv(&[3, 3])).unwrap();
        assert_eq!(a.omega_tilde, b.omega_tilde);
    }

    #[test]
    fn dt_requires_genericity() {
        let k2 = Quiver::kronecker(2);
        let err = dt_tilde(&k2, &Stability::zero(2), Slope::new(0, 1), &dv(&[1, 1]));
        assert!(matches!(err, Err(Error::NotGeneric { .. })));
    }

    #[test]
    fn dt_out_of_box() {
        let err = dt_invariants(&Quiver::loops(2), &Stability::zero(1), &dv(&[3]), &dv(&[2]));
        assert!(matches!(err, Err(Error::OutOfBox { .. })));
    }

    #[test]
    fn wallcross_small_cases() {
        let k2 = Quiver::kronecker(2);
        assert!(wallcross_check(&k2, &Stability::new(vec![1, 0]), &dv(&[2, 2])).unwrap());
        assert!(wallcross_check(&k2, &Stability::zero(2), &dv(&[2, 2])).unwrap());
        assert!(wallcross_check(&Quiver::loops(2), &Stability::zero(1), &dv(&[4])).unwrap());
    }

    #[test]
    fn theta_independence() {
        let l2 = Quiver::loops(2);
        assert!(theta_independence_check(
            &l2,
            &Stability::zero(1),
            &Stability::new(vec![7]),
            &dv(&[2]),
            &dv(&[3])
        )
        .unwrap());
        let tc = Quiver::two_cycle();
        assert!(theta_independence_check(
            &tc,
            &Stability::new(vec![1, 0]),
            &Stability::zero(2),
            &dv(&[1, 1]),
            &dv(&[2, 2])
        )
        .unwrap());
        let k2 = Quiver::kronecker(2);
        assert_eq!(
            theta_independence_check(
                &k2,
                &Stability::zero(2),
                &Stability::zero(2),
                &dv(&[1, 1]),
                &dv(&[1, 1])
            ),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn support_and_positivity_helpers() {
        let r = DtResult::from_polynomial(dv(&[2]), -4, vec![BigInt::from(1)], None);
        assert!(r.is_positive());
        assert!(r.support_in_expected_range());
        assert_eq!(r.omega_at(-4), BigInt::from(1));
        assert_eq!(r.omega_at(0), BigInt::from(0));
    }
}
