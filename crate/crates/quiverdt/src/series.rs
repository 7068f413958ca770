//! Box-truncated formal series in the vertex variables t_i with coefficients
//! in Q(v), supporting both the ordinary product and the twisted product
//! t^d o t^e = (-v)^<d,e> t^(d+e), plus Adams operations and the plethystic
//! Exp/Log pair.
//!
//! Truncation is by dimension vector only: a series knows its quiver and a
//! componentwise bound, and coefficients are exact rational functions.

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver, Slope};
use crate::ratfunc::RatFunc;
use num::{BigInt, BigRational};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite list of free generators, each with a dimension vector, a
/// cohomological degree k and a multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    gens: Vec<(DimVector, i64, u32)>,
}

impl GeneratorSpec {
    pub fn new(gens: Vec<(DimVector, i64, u32)>) -> Result<Self> {
        if gens.iter().any(|(d, _, _)| d.is_zero()) {
            return Err(Error::ZeroGenerator);
        }
        Ok(GeneratorSpec { gens })
    }

    pub fn generators(&self) -> &[(DimVector, i64, u32)] {
        &self.gens
    }
}

/// Series indexed by dimension vectors within a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedSeries {
    quiver: Arc<Quiver>,
    bounds: DimVector,
    coeffs: BTreeMap<DimVector, RatFunc>,
}

impl TwistedSeries {
    pub fn zero(quiver: &Quiver, bounds: &DimVector) -> Result<Self> {
        if bounds.len() != quiver.num_vertices() {
            return Err(Error::DimMismatch {
                expected: quiver.num_vertices(),
                got: bounds.len(),
            });
        }
        Ok(TwistedSeries {
            quiver: Arc::new(quiver.clone()),
            bounds: bounds.clone(),
            coeffs: BTreeMap::new(),
        })
    }

    pub fn one(quiver: &Quiver, bounds: &DimVector) -> Result<Self> {
        let mut s = Self::zero(quiver, bounds)?;
        s.set_coeff(&DimVector::zero(bounds.len()), RatFunc::one())?;
        Ok(s)
    }

    /// Build coefficientwise over the whole box.
    pub fn from_fn(
        quiver: &Quiver,
        bounds: &DimVector,
        f: impl Fn(&DimVector) -> Result<RatFunc>,
    ) -> Result<Self> {
        let mut s = Self::zero(quiver, bounds)?;
        for d in bounds.iter_box() {
            let c = f(&d)?;
            s.set_coeff(&d, c)?;
        }
        Ok(s)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn bounds(&self) -> &DimVector {
        &self.bounds
    }

    pub fn coeff(&self, d: &DimVector) -> RatFunc {
        self.coeffs.get(d).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&DimVector::zero(self.bounds.len()))
    }

    pub fn set_coeff(&mut self, d: &DimVector, c: RatFunc) -> Result<()> {
        if !d.leq(&self.bounds) {
            return Err(Error::SeriesMismatch);
        }
        if c.is_zero() {
            self.coeffs.remove(d);
        } else {
            self.coeffs.insert(d.clone(), c);
        }
        Ok(())
    }

    /// Support iteration in lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &RatFunc)> {
        self.coeffs.iter()
    }

    fn check_context(&self, other: &TwistedSeries) -> Result<()> {
        if self.quiver != other.quiver || self.bounds != other.bounds {
            return Err(Error::SeriesMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TwistedSeries) -> Result<TwistedSeries> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            let s = &out.coeff(d) + c;
            out.set_coeff(d, s)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TwistedSeries) -> Result<TwistedSeries> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            let s = &out.coeff(d) - c;
            out.set_coeff(d, s)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RatFunc) -> TwistedSeries {
        let mut out = TwistedSeries {
            quiver: self.quiver.clone(),
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        };
        if c.is_zero() {
            return out;
        }
        for (d, a) in &self.coeffs {
            out.coeffs.insert(d.clone(), a * c);
        }
        out
    }

    /// Apply `f` to every coefficient (used for q -> q^(-1) and the like).
    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<TwistedSeries> {
        let mut out = TwistedSeries {
            quiver: self.quiver.clone(),
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        };
        for (d, c) in &self.coeffs {
            let v = f(c)?;
            if !v.is_zero() {
                out.coeffs.insert(d.clone(), v);
            }
        }
        Ok(out)
    }

    fn mul_with_twist(&self, other: &TwistedSeries, twisted: bool) -> Result<TwistedSeries> {
        self.check_context(other)?;
        let mut out = TwistedSeries {
            quiver: self.quiver.clone(),
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        };
        for (d, a) in &self.coeffs {
            for (e, b) in &other.coeffs {
                let sum = d.add(e);
                if !sum.leq(&self.bounds) {
                    continue;
                }
                let mut term = a * b;
                if twisted {
                    let pairing = self.quiver.antisym_form(d, e)?;
                    term = &term * &RatFunc::neg_v_pow(pairing);
                }
                let total = &out.coeff(&sum) + &term;
                out.set_coeff(&sum, total)?;
            }
        }
        Ok(out)
    }

    /// Cauchy product with the usual multiplication.
    pub fn ordinary_mul(&self, other: &TwistedSeries) -> Result<TwistedSeries> {
        self.mul_with_twist(other, false)
    }

    /// Product in T_q: coefficient at c is sum over d+e=c of (-v)^<d,e> f_d g_e.
    pub fn twisted_mul(&self, other: &TwistedSeries) -> Result<TwistedSeries> {
        self.mul_with_twist(other, true)
    }

    /// Adams operation: the coefficient at d moves to n*d with v -> v^n.
    pub fn adams(&self, n: u32) -> Result<TwistedSeries> {
        if n == 0 {
            return Err(Error::ZeroSubstitution);
        }
        let mut out = TwistedSeries {
            quiver: self.quiver.clone(),
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::new(),
        };
        for (d, c) in &self.coeffs {
            let nd = d.scale(n);
            if !nd.leq(&self.bounds) {
                continue;
            }
            out.set_coeff(&nd, c.substitute_v(n as i64)?)?;
        }
        Ok(out)
    }

    /// Exp(f) = exp(sum_{n>=1} adams(f,n)/n); requires zero constant term.
    pub fn plethystic_exp(&self) -> Result<TwistedSeries> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        let order = self.bounds.total() as usize;
        let mut arg = TwistedSeries::zero(&self.quiver, &self.bounds)?;
        for n in 1..=order.max(1) as u32 {
            let t = self
                .adams(n)?
                .scale(&RatFunc::from_ratio(BigRational::new(
                    BigInt::from(1),
                    BigInt::from(n),
                )));
            arg = arg.add(&t)?;
        }
        let mut acc = TwistedSeries::one(&self.quiver, &self.bounds)?;
        let mut term = TwistedSeries::one(&self.quiver, &self.bounds)?;
        for k in 1..=order as u64 {
            term = term.ordinary_mul(&arg)?.scale(&RatFunc::from_ratio(
                BigRational::new(BigInt::from(1), BigInt::from(k)),
            ));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Log, the inverse of `plethystic_exp`; requires constant term 1.
    pub fn plethystic_log(&self) -> Result<TwistedSeries> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let order = self.bounds.total() as usize;
        let h = self.sub(&TwistedSeries::one(&self.quiver, &self.bounds)?)?;
        // Ordinary log(1 + h) = sum (-1)^(k+1) h^k / k.
        let mut logf = TwistedSeries::zero(&self.quiver, &self.bounds)?;
        let mut power = TwistedSeries::one(&self.quiver, &self.bounds)?;
        for k in 1..=order as i64 {
            power = power.ordinary_mul(&h)?;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            logf = logf.add(&power.scale(&RatFunc::from_ratio(BigRational::new(
                BigInt::from(sign),
                BigInt::from(k),
            ))))?;
        }
        let mut out = TwistedSeries::zero(&self.quiver, &self.bounds)?;
        for n in 1..=order.max(1) as u32 {
            let mu = moebius(n);
            if mu == 0 {
                continue;
            }
            let t = logf.adams(n)?.scale(&RatFunc::from_ratio(BigRational::new(
                BigInt::from(mu),
                BigInt::from(n),
            )));
            out = out.add(&t)?;
        }
        Ok(out)
    }
}

/// Left-to-right twisted product of factors tagged by strictly decreasing
/// slopes; the empty product is 1.
pub fn ordered_product(
    quiver: &Quiver,
    bounds: &DimVector,
    factors: &[(Slope, TwistedSeries)],
) -> Result<TwistedSeries> {
    for w in factors.windows(2) {
        if w[0].0 <= w[1].0 {
            return Err(Error::SlopesNotDecreasing(
                w[0].0.to_string(),
                w[1].0.to_string(),
            ));
        }
    }
    let mut acc = TwistedSeries::one(quiver, bounds)?;
    for (_, f) in factors {
        acc = acc.twisted_mul(f)?;
    }
    Ok(acc)
}

/// Generating series of the free super-commutative algebra on the given
/// (d, k)-generators:
///
///   prod_{(d,k,m)} prod_{n>=0} (1 - q^n q^(k/2) t^d)^((-1)^(k-1) m)
///
/// realized as Exp(sum (-1)^k m v^k / (1-q) t^d) with 1/(1-q) kept exact.
pub fn free_supercomm_series(
    quiver: &Quiver,
    gens: &GeneratorSpec,
    bounds: &DimVector,
) -> Result<TwistedSeries> {
    let inv_one_minus_q = (&RatFunc::one() - &RatFunc::q_pow(1)).inverse()?;
    let mut arg = TwistedSeries::zero(quiver, bounds)?;
    for (d, k, mult) in gens.generators() {
        if !d.leq(bounds) {
            continue;
        }
        let sign = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        let c = &(&RatFunc::from_int(sign * *mult as i64) * &RatFunc::v_pow(*k)) * &inv_one_minus_q;
        let total = &arg.coeff(d) + &c;
        arg.set_coeff(d, total)?;
    }
    arg.plethystic_exp()
}

fn moebius(n: u32) -> i64 {
    let mut n = n;
    let mut primes = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}
