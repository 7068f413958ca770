//! The exact coefficient field Q(v), v standing for q^(1/2).
//!
//! A `RatFunc` is a reduced fraction of univariate polynomials in v with
//! rational coefficients. The sign convention (-q^(1/2))^n is realized as
//! (-1)^n v^n; q itself is v^2. No floating point, no truncation.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Dense univariate polynomial over Q, coefficients ascending, no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// c * v^k.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial answers `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; divisor must be non-zero.
    pub fn div_rem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let dd = div.degree().unwrap();
        let lead = div.coeffs[dd].clone();
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = &rem.coeffs[rd] / &lead;
            let t = QPoly::monomial(c, rd - dd);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(div));
        }
        (quot, rem)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    fn monic(&self) -> QPoly {
        match self.degree() {
            None => QPoly::zero(),
            Some(d) => {
                let lead = self.coeffs[d].clone();
                self.scale(&lead.recip())
            }
        }
    }

    /// v -> v^k for k >= 1.
    pub fn subst_power(&self, k: usize) -> QPoly {
        assert!(k >= 1);
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        QPoly::from_coeffs(coeffs)
    }

    /// Coefficient reversal: sum c_i v^(D-i) for D = degree.
    pub fn reversed(&self) -> QPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        QPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Scalar s with s * self integer-primitive and positive leading
    /// coefficient; zero polynomial answers 1.
    fn normalizing_scalar(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
            num_gcd = num::integer::gcd(num_gcd, c.numer().clone());
        }
        let mut s = BigRational::new(den_lcm, num_gcd).abs();
        if self.coeffs.last().unwrap().is_negative() {
            s = -s;
        }
        s
    }
}

/// Reduced fraction num/den of polynomials in v.
///
/// Canonical form: gcd(num, den) = 1 and den is an integer-primitive
/// polynomial with positive leading coefficient, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut f = RatFunc { num, den };
        f.reduce();
        Ok(f)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
        let s = self.den.normalizing_scalar();
        self.num = self.num.scale(&s);
        self.den = self.den.scale(&s);
    }

    pub fn zero() -> Self {
        RatFunc {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc {
            num: QPoly::constant(BigRational::from_integer(BigInt::from(n))),
            den: QPoly::one(),
        }
    }

    pub fn from_ratio(c: BigRational) -> Self {
        RatFunc {
            num: QPoly::constant(c),
            den: QPoly::one(),
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFunc {
            num: p,
            den: QPoly::one(),
        }
    }

    /// v^k, any integer k.
    pub fn v_pow(k: i64) -> Self {
        if k >= 0 {
            RatFunc::from_poly(QPoly::monomial(BigRational::one(), k as usize))
        } else {
            RatFunc {
                num: QPoly::one(),
                den: QPoly::monomial(BigRational::one(), (-k) as usize),
            }
        }
    }

    /// (-v)^k = (-1)^k v^k, any integer k.
    pub fn neg_v_pow(k: i64) -> Self {
        let f = RatFunc::v_pow(k);
        if k.rem_euclid(2) == 1 {
            -&f
        } else {
            f
        }
    }

    /// q^k = v^(2k), any integer k.
    pub fn q_pow(k: i64) -> Self {
        RatFunc::v_pow(2 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == QPoly::one() && self.den == QPoly::one()
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn inverse(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut acc = RatFunc::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// The field endomorphism v -> v^n; n = -1 realizes q -> q^(-1).
    pub fn substitute_v(&self, n: i64) -> Result<RatFunc> {
        if n == 0 {
            return Err(Error::ZeroSubstitution);
        }
        if n > 0 {
            return RatFunc::new(
                self.num.subst_power(n as usize),
                self.den.subst_power(n as usize),
            );
        }
        // p(v^-m) = v^(-m deg p) * reversed(p)(v^m); attach the monomials so
        // that both sides stay polynomial.
        let m = (-n) as usize;
        if self.is_zero() {
            return Ok(RatFunc::zero());
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let num2 = self.num.reversed().subst_power(m);
        let den2 = self.den.reversed().subst_power(m);
        let (num3, den3) = if dd >= dn {
            (
                num2.mul(&QPoly::monomial(BigRational::one(), m * (dd - dn))),
                den2,
            )
        } else {
            (
                num2,
                den2.mul(&QPoly::monomial(BigRational::one(), m * (dn - dd))),
            )
        };
        RatFunc::new(num3, den3)
    }

    /// First `n + 1` power series coefficients in v; requires den(0) != 0.
    pub fn taylor(&self, n: usize) -> Result<Vec<BigRational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Internal(
                "power series expansion at a pole of v = 0".into(),
            ));
        }
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = self.num.coeff(k);
            for j in 0..k {
                c -= &out[j] * self.den.coeff(k - j);
            }
            out.push(c / &d0);
        }
        Ok(out)
    }

    /// Exact value at q = x, defined only for even functions of v.
    pub fn eval_at_q(&self, x: &BigRational) -> Result<BigRational> {
        let even_eval = |p: &QPoly| -> Result<BigRational> {
            let mut acc = BigRational::zero();
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i % 2 != 0 {
                    return Err(Error::Internal(
                        "evaluation at q of an odd function of v".into(),
                    ));
                }
                let mut pw = BigRational::one();
                for _ in 0..i / 2 {
                    pw *= x;
                }
                acc += c * pw;
            }
            Ok(acc)
        };
        let n = even_eval(&self.num)?;
        let d = even_eval(&self.den)?;
        if d.is_zero() {
            return Err(Error::Internal(format!("pole at q = {x}")));
        }
        Ok(n / d)
    }

    /// Coefficients in q when the value is a polynomial in q = v^2 with
    /// integer coefficients; anything else is an internal error.
    pub fn as_integer_q_poly(&self) -> Result<Vec<BigInt>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        if self.den != QPoly::one() {
            return Err(Error::Internal(format!(
                "expected a polynomial in q, got denominator {}",
                poly_q_string(&self.den)
            )));
        }
        let mut out = Vec::new();
        for (i, c) in self.num.coeffs().iter().enumerate() {
            if i % 2 != 0 {
                if !c.is_zero() {
                    return Err(Error::Internal(
                        "expected a polynomial in q, got an odd power of v".into(),
                    ));
                }
                continue;
            }
            if !c.denom().is_one() {
                return Err(Error::Internal(format!(
                    "expected integer coefficients, got {c}"
                )));
            }
            out.push(c.numer().clone());
        }
        while out.last().map(|c| c.is_zero()).unwrap_or(false) {
            out.pop();
        }
        Ok(out)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, other: &RatFunc) -> RatFunc {
        let g = if self.den == other.den {
            self.den.clone()
        } else {
            self.den.gcd(&other.den)
        };
        let (b1, _) = self.den.div_rem(&g);
        let (d1, _) = other.den.div_rem(&g);
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        let den = self.den.mul(&d1);
        RatFunc::new(num, den).expect("denominator stays non-zero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &(-other)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel before multiplying to keep degrees down.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let a = self.num.div_rem(&g1).0;
        let d = other.den.div_rem(&g1).0;
        let c = other.num.div_rem(&g2).0;
        let b = self.den.div_rem(&g2).0;
        RatFunc::new(a.mul(&c), b.mul(&d)).expect("denominator stays non-zero")
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, other: &RatFunc) -> RatFunc {
        assert!(!other.is_zero(), "division by zero rational function");
        self * &other.inverse().expect("non-zero divisor")
    }
}

fn rational_string(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render a polynomial in v using q-notation: v^(2k) prints as q^k, odd
/// powers keep a single leading v.
fn poly_q_string(p: &QPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let var = match e {
            0 => String::new(),
            1 => "v".into(),
            2 => "q".into(),
            3 => "v*q".into(),
            e if e % 2 == 0 => format!("q^{}", e / 2),
            e => format!("v*q^{}", (e - 1) / 2),
        };
        let body = if var.is_empty() {
            rational_string(&mag)
        } else if mag.is_one() {
            var
        } else {
            format!("{}*{}", rational_string(&mag), var)
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push('-');
        } else {
            out.push('+');
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly::one() {
            return write!(f, "{}", poly_q_string(&self.num));
        }
        // Displayed with the denominator's lowest term positive, so 1/(1-q)
        // prints as such rather than -1/(-1+q).
        let flip = self
            .den
            .coeffs()
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.is_negative())
            .unwrap_or(false);
        let (num, den) = if flip {
            (self.num.neg(), self.den.neg())
        } else {
            (self.num.clone(), self.den.clone())
        };
        let ns = poly_q_string(&num);
        let ds = poly_q_string(&den);
        let np = if num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({ns})")
        } else {
            ns
        };
        let dp = if den.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({ds})")
        } else {
            ds
        };
        write!(f, "{np}/{dp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RatFunc {
        RatFunc::q_pow(1)
    }

    fn one_minus_q() -> RatFunc {
        &RatFunc::one() - &q()
    }

    #[test]
    fn multiply_by_inverse_is_one() {
        let f = one_minus_q().inverse().unwrap();
        assert!((&f * &one_minus_q()).is_one());
    }

    #[test]
    fn substitute_v_negative_one() {
        // v/(1-v^2) -> v^-1/(1-v^-2) = -v/(1-v^2).
        let f = &RatFunc::v_pow(1) / &one_minus_q();
        let g = f.substitute_v(-1).unwrap();
        assert_eq!(g, -&f);
    }

    #[test]
    fn neg_v_sign_convention() {
        assert_eq!(RatFunc::neg_v_pow(3), -&RatFunc::v_pow(3));
        assert_eq!(RatFunc::neg_v_pow(2), RatFunc::v_pow(2));
        assert_eq!(RatFunc::neg_v_pow(-1), -&RatFunc::v_pow(-1));
        assert_eq!(
            &RatFunc::neg_v_pow(-2) * &RatFunc::q_pow(1),
            RatFunc::one()
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            RatFunc::new(QPoly::one(), QPoly::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(RatFunc::zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn substitution_is_an_endomorphism() {
        let f = &(&RatFunc::one() + &RatFunc::v_pow(3)) / &one_minus_q();
        let g = &RatFunc::v_pow(1) - &RatFunc::from_int(2);
        for n in [-3i64, -1, 2, 3] {
            let lhs = (&f * &g).substitute_v(n).unwrap();
            let rhs = &f.substitute_v(n).unwrap() * &g.substitute_v(n).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = (&f + &g).substitute_v(n).unwrap();
            let rhs = &f.substitute_v(n).unwrap() + &g.substitute_v(n).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn substitute_then_invert_round_trips() {
        let f = &(&q() + &RatFunc::v_pow(1)) / &(&RatFunc::from_int(1) + &RatFunc::q_pow(2));
        let g = f.substitute_v(-1).unwrap().substitute_v(-1).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn taylor_expansion_of_geometric_series() {
        let f = one_minus_q().inverse().unwrap();
        let coeffs = f.taylor(6).unwrap();
        for (i, c) in coeffs.iter().enumerate() {
            let expect = if i % 2 == 0 { 1 } else { 0 };
            assert_eq!(c, &BigRational::from_integer(BigInt::from(expect)));
        }
    }

    #[test]
    fn eval_at_q_values() {
        // 1/(1-q^-1) at q=2 is 2.
        let f = (&RatFunc::one() - &RatFunc::q_pow(-1)).inverse().unwrap();
        assert_eq!(
            f.eval_at_q(&BigRational::from_integer(BigInt::from(2))).unwrap(),
            BigRational::from_integer(BigInt::from(2))
        );
        let odd = RatFunc::v_pow(1);
        assert!(odd.eval_at_q(&BigRational::from_integer(BigInt::from(2))).is_err());
    }

    #[test]
    fn integer_q_poly_extraction() {
        let f = &RatFunc::one() + &q();
        assert_eq!(
            f.as_integer_q_poly().unwrap(),
            vec![BigInt::one(), BigInt::one()]
        );
        assert!(one_minus_q().inverse().unwrap().as_integer_q_poly().is_err());
        assert!(RatFunc::v_pow(1).as_integer_q_poly().is_err());
    }

    #[test]
    fn display_is_q_notation() {
        assert_eq!(format!("{}", &RatFunc::one() + &q()), "1+q");
        assert_eq!(format!("{}", one_minus_q().inverse().unwrap()), "1/(1-q)");
        assert_eq!(
            format!("{}", &(&RatFunc::one() + &q()) / &one_minus_q()),
            "(1+q)/(1-q)"
        );
        assert_eq!(format!("{}", RatFunc::neg_v_pow(1)), "-v");
        assert_eq!(format!("{}", RatFunc::neg_v_pow(3)), "-v*q");
        assert_eq!(format!("{}", RatFunc::zero()), "0");
    }

    #[test]
    fn canonical_form_is_stable() {
        // The same value built two ways compares equal structurally.
        let a = &(&RatFunc::from_int(2) * &q()) / &(&RatFunc::from_int(2) - &(&RatFunc::from_int(2) * &q()));
        let b = &q() / &one_minus_q();
        assert_eq!(a, b);
    }
}
