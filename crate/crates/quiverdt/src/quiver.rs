//! Quivers, dimension vectors, stabilities, slopes and Harder-Narasimhan
//! combinatorics.
//!
//! The Euler form of a quiver with arrow multiplicities a[i][j] is
//! chi(d,e) = sum_i d_i e_i - sum_{i,j} a[i][j] d_i e_j, and <d,e> denotes its
//! antisymmetrization chi(d,e) - chi(e,d).

use crate::error::{Error, Result};
use num::rational::Ratio;
use std::fmt;
use std::str::FromStr;

/// A finite quiver: ordered vertex list plus arrow multiplicity matrix.
///
/// Vertices are referenced by index everywhere; names are display metadata.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Vec<u32>>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Vec<u32>>) -> Result<Self> {
        let n = vertices.len();
        if arrows.len() != n || arrows.iter().any(|row| row.len() != n) {
            return Err(Error::DimMismatch {
                expected: n,
                got: arrows.len(),
            });
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Single vertex with `m` loops.
    pub fn loops(m: u32) -> Self {
        Quiver {
            vertices: vec!["v0".into()],
            arrows: vec![vec![m]],
        }
    }

    /// Generalized Kronecker quiver: two vertices, `m` arrows from the first
    /// to the second.
    pub fn kronecker(m: u32) -> Self {
        Quiver {
            vertices: vec!["v0".into(), "v1".into()],
            arrows: vec![vec![0, m], vec![0, 0]],
        }
    }

    /// Two vertices with one arrow in each direction.
    pub fn two_cycle() -> Self {
        Self::bipartite(1)
    }

    /// Symmetric bipartite quiver: two vertices, `n` arrows in each direction.
    pub fn bipartite(n: u32) -> Self {
        Quiver {
            vertices: vec!["v0".into(), "v1".into()],
            arrows: vec![vec![0, n], vec![n, 0]],
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    /// Number of arrows from vertex `i` to vertex `j`.
    pub fn arrow_mult(&self, i: usize, j: usize) -> u32 {
        self.arrows[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.num_vertices();
        (0..n).all(|i| (i + 1..n).all(|j| self.arrows[i][j] == self.arrows[j][i]))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.num_vertices() {
            return Err(Error::DimMismatch {
                expected: self.num_vertices(),
                got: len,
            });
        }
        Ok(())
    }

    /// Euler form chi(d,e).
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        self.check_len(d.len())?;
        self.check_len(e.len())?;
        let n = self.num_vertices();
        let mut chi = 0i64;
        for i in 0..n {
            chi += d[i] as i64 * e[i] as i64;
            for j in 0..n {
                chi -= self.arrows[i][j] as i64 * d[i] as i64 * e[j] as i64;
            }
        }
        Ok(chi)
    }

    /// Antisymmetrized Euler form <d,e> = chi(d,e) - chi(e,d).
    pub fn antisym_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        Ok(self.euler_form(d, e)? - self.euler_form(e, d)?)
    }

    /// Dimension of the representation space of `d`: sum a[i][j] d_i d_j.
    pub fn rep_space_dim(&self, d: &DimVector) -> u64 {
        let n = self.num_vertices();
        let mut s = 0u64;
        for i in 0..n {
            for j in 0..n {
                s += self.arrows[i][j] as u64 * d[i] as u64 * d[j] as u64;
            }
        }
        s
    }
}

/// Dimension vector: one non-negative entry per vertex.
///
/// The derived `Ord` is lexicographic, which gives every map keyed by
/// dimension vectors a deterministic iteration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(len: usize) -> Self {
        DimVector(vec![0; len])
    }

    /// Unit vector supported at vertex `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Total dimension sum_i d_i.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise partial order.
    pub fn leq(&self, other: &DimVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` when not componentwise >=.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if !other.leq(self) {
            return None;
        }
        Some(DimVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, n: u32) -> DimVector {
        DimVector(self.0.iter().map(|a| a * n).collect())
    }

    /// All vectors componentwise <= `self`, in lexicographic order, zero
    /// included.
    pub fn iter_box(&self) -> Vec<DimVector> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.len()];
        loop {
            out.push(DimVector(cur.clone()));
            let mut i = self.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.0[i] {
                    cur[i] += 1;
                    for x in cur.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl std::ops::Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for DimVector {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let entries = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(DimVector(entries))
    }
}

/// Stability: integer weight per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stability(Vec<i64>);

impl Stability {
    pub fn new(weights: Vec<i64>) -> Self {
        Stability(weights)
    }

    pub fn zero(len: usize) -> Self {
        Stability(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[i64] {
        &self.0
    }

    /// theta(d) = sum_i theta_i d_i.
    pub fn pairing(&self, d: &DimVector) -> i64 {
        self.0
            .iter()
            .zip(d.entries())
            .map(|(&t, &x)| t * x as i64)
            .sum()
    }

    /// Slope theta(d) / sum_i d_i; undefined for d = 0.
    pub fn slope(&self, d: &DimVector) -> Result<Slope> {
        if d.is_zero() {
            return Err(Error::ZeroDimVector);
        }
        Ok(Slope::new(self.pairing(d), d.total() as i64))
    }
}

impl FromStr for Stability {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let weights = s
            .trim()
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Stability(weights))
    }
}

/// Exact rational slope, totally ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope(Ratio<i64>);

impl Slope {
    /// Reduced num/den with positive denominator; `den` must be non-zero.
    pub fn new(num: i64, den: i64) -> Self {
        Slope(Ratio::new(num, den))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Slope {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<i64>().map_err(|e| e.to_string())?,
                b.trim().parse::<i64>().map_err(|e| e.to_string())?,
            ),
            None => (s.trim().parse::<i64>().map_err(|e| e.to_string())?, 1),
        };
        if den == 0 {
            return Err("slope denominator is zero".into());
        }
        Ok(Slope::new(num, den))
    }
}

/// Harder-Narasimhan type: ordered non-zero parts with strictly decreasing
/// slopes, summing to the ambient dimension vector.
pub type HnType = Vec<DimVector>;

/// All HN types of `d`, in lexicographic order on the part lists.
///
/// The singleton (d) is always present; for d = 0 the only type is the empty
/// tuple.
pub fn hn_types(quiver: &Quiver, theta: &Stability, d: &DimVector) -> Result<Vec<HnType>> {
    quiver.check_len(d.len())?;
    quiver.check_len(theta.len())?;
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    collect_types(theta, d, None, &mut prefix, &mut out)?;
    out.sort();
    Ok(out)
}

fn collect_types(
    theta: &Stability,
    rest: &DimVector,
    bound: Option<Slope>,
    prefix: &mut Vec<DimVector>,
    out: &mut Vec<HnType>,
) -> Result<()> {
    if rest.is_zero() {
        out.push(prefix.clone());
        return Ok(());
    }
    for p in rest.iter_box() {
        if p.is_zero() {
            continue;
        }
        let mu = theta.slope(&p)?;
        if let Some(b) = bound {
            if mu >= b {
                continue;
            }
        }
        let next = rest.checked_sub(&p).expect("p <= rest by construction");
        prefix.push(p);
        collect_types(theta, &next, Some(mu), prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

/// Degree shift of an HN type: sum_{r<s} chi(d^r, d^s). Zero for singletons.
pub fn hn_shift(quiver: &Quiver, parts: &[DimVector]) -> Result<i64> {
    let mut shift = 0;
    for r in 0..parts.len() {
        for s in r + 1..parts.len() {
            shift += quiver.euler_form(&parts[r], &parts[s])?;
        }
    }
    Ok(shift)
}

/// Outcome of a genericity test.
///
/// `certified_bounds` is `None` when the answer holds unconditionally
/// (symmetric quiver); otherwise the test only inspected slope-mu vectors
/// inside the recorded box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genericity {
    pub generic: bool,
    pub certified_bounds: Option<DimVector>,
}

/// Is theta mu-generic, i.e. <d,e> = 0 for all non-zero d, e of slope mu?
///
/// Symmetric quivers short-circuit to an unconditional yes; otherwise only
/// vectors within `bounds` are examined and the report says so.
pub fn is_mu_generic(
    quiver: &Quiver,
    theta: &Stability,
    mu: Slope,
    bounds: &DimVector,
) -> Result<Genericity> {
    quiver.check_len(bounds.len())?;
    quiver.check_len(theta.len())?;
    if quiver.is_symmetric() {
        return Ok(Genericity {
            generic: true,
            certified_bounds: None,
        });
    }
    let on_slope: Vec<DimVector> = bounds
        .iter_box()
        .into_iter()
        .filter(|d| !d.is_zero() && theta.slope(d).expect("non-zero") == mu)
        .collect();
    for d in &on_slope {
        for e in &on_slope {
            if quiver.antisym_form(d, e)? != 0 {
                return Ok(Genericity {
                    generic: false,
                    certified_bounds: Some(bounds.clone()),
                });
            }
        }
    }
    Ok(Genericity {
        generic: true,
        certified_bounds: Some(bounds.clone()),
    })
}
