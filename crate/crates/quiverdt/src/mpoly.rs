//! Sparse multivariate polynomials over Q: just enough arithmetic for
//! shuffle kernels, including exact division by differences of variables.

use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::error::{Error, Result};

/// Polynomial in `nvars` variables; exponent vectors map to nonzero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    #[cfg(test)]
    pub fn monomial(nvars: usize, exps: Vec<u16>, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = MPoly::zero(nvars);
        p.add_term(exps, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u16>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &MPoly) {
        assert_eq!(self.nvars, other.nvars);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn scale(&mut self, c: &BigRational) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    /// Multiply by the linear factor `x_a - x_b`.
    pub fn mul_linear_diff(&self, a: usize, b: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ea = e.clone();
            ea[a] += 1;
            out.add_term(ea, c.clone());
            let mut eb = e.clone();
            eb[b] += 1;
            out.add_term(eb, -c.clone());
        }
        out
    }

    /// Divide exactly by `x_a - x_b`; fails if the remainder is nonzero.
    ///
    /// Writing the dividend as sum_k c_k x_a^k with c_k free of x_a, the
    /// quotient digits satisfy q_{k-1} = c_k + x_b q_k from the top down and
    /// the remainder c_0 + x_b q_0 must vanish.
    pub fn div_linear_diff(&self, a: usize, b: usize) -> Result<MPoly> {
        if self.is_zero() {
            return Ok(MPoly::zero(self.nvars));
        }
        // Coefficients of powers of x_a, with the x_a exponent cleared.
        let mut by_deg: BTreeMap<u16, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[a];
            let mut rest = e.clone();
            rest[a] = 0;
            by_deg
                .entry(k)
                .or_insert_with(|| MPoly::zero(self.nvars))
                .add_term(rest, c.clone());
        }
        let top = *by_deg.keys().next_back().unwrap();
        let mut out = MPoly::zero(self.nvars);
        let mut digit = MPoly::zero(self.nvars);
        for k in (0..=top).rev() {
            let ck = by_deg
                .remove(&k)
                .unwrap_or_else(|| MPoly::zero(self.nvars));
            // digit currently holds q_k; push down to q_{k-1} or the remainder.
            let mut next = ck;
            next.add_assign(&digit.shift_var(b));
            if k == 0 {
                if !next.is_zero() {
                    return Err(Error::Internal(
                        "division by variable difference left a remainder".into(),
                    ));
                }
            } else {
                for (e, c) in &next.terms {
                    let mut exps = e.clone();
                    exps[a] += k - 1;
                    out.add_term(exps, c.clone());
                }
                digit = next;
            }
        }
        Ok(out)
    }

    /// Rename variables: old variable i becomes `map[i]` in a ring with
    /// `nvars_new` variables.
    pub fn embed(&self, map: &[usize], nvars_new: usize) -> MPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MPoly::zero(nvars_new);
        for (e, c) in &self.terms {
            let mut exps = vec![0u16; nvars_new];
            for (i, &x) in e.iter().enumerate() {
                exps[map[i]] += x;
            }
            out.add_term(exps, c.clone());
        }
        out
    }

    fn shift_var(&self, b: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = e.clone();
            exps[b] += 1;
            out.add_term(exps, c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn rat(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    fn var(nvars: usize, i: usize) -> MPoly {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        MPoly::monomial(nvars, e, rat(1))
    }

    #[test]
    fn product_and_sum() {
        let x = var(2, 0);
        let y = var(2, 1);
        let mut s = x.clone();
        s.add_assign(&y);
        let sq = s.mul(&s);
        // (x + y)^2 = x^2 + 2xy + y^2
        assert_eq!(sq.terms().count(), 3);
        assert_eq!(sq.terms.get(&vec![1, 1]), Some(&rat(2)));
    }

    #[test]
    fn linear_diff_roundtrip() {
        let x = var(3, 0);
        let y = var(3, 1);
        let mut p = x.mul(&x);
        p.add_assign(&y.mul(&var(3, 2)));
        let q = p.mul_linear_diff(2, 0);
        assert_eq!(q.div_linear_diff(2, 0).unwrap(), p);
    }

    #[test]
    fn division_remainder_detected() {
        let one = MPoly::monomial(2, vec![0, 0], rat(1));
        assert!(one.div_linear_diff(0, 1).is_err());
    }

    #[test]
    fn vandermonde_divisibility() {
        // (x0 - x1)(x0 - x2)(x1 - x2) is divisible by each factor.
        let p = MPoly::monomial(3, vec![0, 0, 0], rat(1))
            .mul_linear_diff(0, 1)
            .mul_linear_diff(0, 2)
            .mul_linear_diff(1, 2);
        let q = p.div_linear_diff(1, 2).unwrap();
        let expect = MPoly::monomial(3, vec![0, 0, 0], rat(1))
            .mul_linear_diff(0, 1)
            .mul_linear_diff(0, 2);
        assert_eq!(q, expect);
    }

    #[test]
    fn embed_relabels() {
        let p = var(2, 0).mul(&var(2, 1));
        let q = p.embed(&[3, 1], 4);
        assert_eq!(q.terms.get(&vec![0, 1, 0, 1]), Some(&rat(1)));
    }
}
