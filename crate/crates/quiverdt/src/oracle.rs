//! Brute-force finite-field verification: enumerate quiver representations
//! over small prime fields, test semistability by exhaustive subrepresentation
//! search, and compare stacky point counts with series coefficients.

use itertools::Itertools;
use num::{BigInt, BigRational, One};

use crate::error::{Error, Result};
use crate::par;
use crate::quiver::{DimVector, Quiver, Stability};
use crate::ratfunc::RatFunc;

/// Enumeration guard: brute force refuses to visit more representation
/// points (or subspace tuples) than this unless the caller raises it.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// |GL_n(F_q)| = q^{n(n-1)/2} prod_{v=1..n} (q^v - 1); 1 for n = 0.
pub fn gl_order(n: u32, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let mut out = q.pow(n * n.saturating_sub(1) / 2);
    let mut qv = BigInt::one();
    for _ in 0..n {
        qv *= &q;
        out *= &qv - BigInt::one();
    }
    out
}

/// One linear map of a representation; `matrix[r][c]` has `d_to` rows and
/// `d_from` columns, entries in 0..p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowMap {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<u64>>,
}

/// Representation of (Q, d) over the prime field F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFRep {
    prime: u64,
    d: DimVector,
    maps: Vec<ArrowMap>,
}

impl FFRep {
    /// Matrices are consumed in canonical arrow order: source vertex, then
    /// target vertex, then parallel copies.
    pub fn new(
        quiver: &Quiver,
        d: &DimVector,
        prime: u64,
        mats: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if d.len() != quiver.num_vertices() {
            return Err(Error::DimMismatch {
                expected: quiver.num_vertices(),
                got: d.len(),
            });
        }
        let shapes = arrow_shapes(quiver, d);
        if mats.len() != shapes.len() {
            return Err(Error::Internal(format!(
                "expected {} matrices, got {}",
                shapes.len(),
                mats.len()
            )));
        }
        let mut maps = Vec::with_capacity(mats.len());
        for ((from, to, rows, cols), m) in shapes.into_iter().zip(mats) {
            if m.len() != rows || m.iter().any(|row| row.len() != cols) {
                return Err(Error::Internal(format!(
                    "matrix for arrow {from}->{to} must be {rows}x{cols}"
                )));
            }
            let matrix = m
                .into_iter()
                .map(|row| row.into_iter().map(|x| x % prime).collect())
                .collect();
            maps.push(ArrowMap { from, to, matrix });
        }
        Ok(FFRep {
            prime,
            d: d.clone(),
            maps,
        })
    }

    pub fn zero(quiver: &Quiver, d: &DimVector, prime: u64) -> Result<Self> {
        let mats = arrow_shapes(quiver, d)
            .into_iter()
            .map(|(_, _, rows, cols)| vec![vec![0u64; cols]; rows])
            .collect();
        FFRep::new(quiver, d, prime, mats)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn d(&self) -> &DimVector {
        &self.d
    }

    pub fn maps(&self) -> &[ArrowMap] {
        &self.maps
    }
}

/// (from, to, rows, cols) per arrow copy, in canonical order.
fn arrow_shapes(quiver: &Quiver, d: &DimVector) -> Vec<(usize, usize, usize, usize)> {
    let n = quiver.num_vertices();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for _ in 0..quiver.arrow_mult(i, j) {
                out.push((i, j, d.entries()[j] as usize, d.entries()[i] as usize));
            }
        }
    }
    out
}

/// Subspace of F_p^n as reduced row echelon basis rows.
#[derive(Debug, Clone)]
struct SubSpace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl SubSpace {
    fn contains(&self, v: &[u64], p: u64) -> bool {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c] != 0 {
                let f = v[c];
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// All k-dimensional subspaces of F_p^n, one echelon representative each.
fn enumerate_subspaces(n: usize, k: usize, p: u64) -> Vec<SubSpace> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for pivots in (0..n).combinations(k) {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut rows = vec![vec![0u64; n]; k];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(&digits) {
                rows[r][c] = x;
            }
            out.push(SubSpace {
                rows,
                pivots: pivots.clone(),
            });
            let mut carry = true;
            for x in digits.iter_mut() {
                *x += 1;
                if *x < p {
                    carry = false;
                    break;
                }
                *x = 0;
            }
            if carry {
                break;
            }
        }
    }
    out
}

/// Number of k-dimensional subspaces of F_p^n.
fn subspace_count(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..n)
        .combinations(k)
        .map(|pivots| {
            let free = (0..k)
                .map(|r| (pivots[r] + 1..n).filter(|c| !pivots.contains(c)).count())
                .sum::<usize>();
            (p as u128).pow(free as u32)
        })
        .sum()
}

fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b % p).sum::<u64>() % p)
        .collect()
}

fn tuple_closed(rep: &FFRep, subs: &[SubSpace], p: u64) -> bool {
    rep.maps.iter().all(|m| {
        subs[m.from]
            .rows
            .iter()
            .all(|v| subs[m.to].contains(&mat_vec(&m.matrix, v, p), p))
    })
}

/// Subspace tuples whose dimension vector has slope strictly above d's; a
/// representation is semistable iff none of them is closed under its maps.
fn destabilizing_tuples(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    p: u64,
) -> Result<Vec<Vec<SubSpace>>> {
    if d.len() != quiver.num_vertices() || theta.len() != d.len() {
        return Err(Error::DimMismatch {
            expected: quiver.num_vertices(),
            got: if d.len() != quiver.num_vertices() {
                d.len()
            } else {
                theta.len()
            },
        });
    }
    let base = theta.slope(d)?;
    let mut out = Vec::new();
    for e in d.iter_box() {
        if e.is_zero() || e == *d || theta.slope(&e)? <= base {
            continue;
        }
        let per: Vec<Vec<SubSpace>> = (0..d.len())
            .map(|i| {
                enumerate_subspaces(d.entries()[i] as usize, e.entries()[i] as usize, p)
            })
            .collect();
        for combo in per.iter().map(|v| v.iter()).multi_cartesian_product() {
            out.push(combo.into_iter().cloned().collect());
        }
    }
    Ok(out)
}

/// True iff no nonzero subrepresentation has slope strictly above the
/// representation's own.
pub fn is_semistable(quiver: &Quiver, theta: &Stability, m: &FFRep) -> Result<bool> {
    let tuples = destabilizing_tuples(quiver, theta, &m.d, m.prime)?;
    Ok(!tuples.iter().any(|t| tuple_closed(m, t, m.prime)))
}

/// Exact number of semistable points of the representation space over F_p.
///
/// When no sub-dimension vector can destabilize (zero stability in
/// particular), the count is p^{dim R_d} without enumeration; otherwise every
/// point is visited, guarded by `budget`.
pub fn count_semistable(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    p: u64,
    budget: u64,
) -> Result<BigInt> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let tuples = destabilizing_tuples(quiver, theta, d, p)?;
    let edim = quiver.rep_space_dim(d);
    if tuples.is_empty() {
        let exp = u32::try_from(edim)
            .map_err(|_| Error::Internal("representation space too large".into()))?;
        return Ok(BigInt::from(p).pow(exp));
    }
    let needed = u32::try_from(edim)
        .ok()
        .and_then(|e| (p as u128).checked_pow(e))
        .unwrap_or(u128::MAX);
    if needed > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            needed,
            budget: u128::from(budget),
        });
    }
    let total = needed as u64;
    let shapes = arrow_shapes(quiver, d);
    let step = 1u64 << 16;
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(step))
        .map(|c| (c * step, ((c + 1) * step).min(total)))
        .collect();
    let count = par::par_sum_u64(chunks, |(start, end)| {
        let mut cnt = 0u64;
        for idx in start..end {
            let rep = decode_rep(d, p, &shapes, idx);
            if !tuples.iter().any(|t| tuple_closed(&rep, t, p)) {
                cnt += 1;
            }
        }
        cnt
    });
    Ok(BigInt::from(count))
}

fn decode_rep(d: &DimVector, p: u64, shapes: &[(usize, usize, usize, usize)], idx: u64) -> FFRep {
    let mut rest = idx;
    let mut maps = Vec::with_capacity(shapes.len());
    for &(from, to, rows, cols) in shapes {
        let mut matrix = vec![vec![0u64; cols]; rows];
        for row in matrix.iter_mut() {
            for x in row.iter_mut() {
                *x = rest % p;
                rest /= p;
            }
        }
        maps.push(ArrowMap { from, to, matrix });
    }
    FFRep {
        prime: p,
        d: d.clone(),
        maps,
    }
}

/// Number of subrepresentations of `m` with dimension vector `p_sub`.
pub fn count_subreps(m: &FFRep, p_sub: &DimVector, budget: u64) -> Result<u64> {
    if p_sub.len() != m.d.len() {
        return Err(Error::DimMismatch {
            expected: m.d.len(),
            got: p_sub.len(),
        });
    }
    if !p_sub.leq(&m.d) {
        return Err(Error::OutOfBox {
            d: p_sub.to_string(),
            bounds: m.d.to_string(),
        });
    }
    let p = m.prime;
    let needed: u128 = (0..m.d.len())
        .map(|i| subspace_count(m.d.entries()[i] as usize, p_sub.entries()[i] as usize, p))
        .product();
    if needed > u128::from(budget) {
        return Err(Error::BudgetExceeded {
            needed,
            budget: u128::from(budget),
        });
    }
    let per: Vec<Vec<SubSpace>> = (0..m.d.len())
        .map(|i| enumerate_subspaces(m.d.entries()[i] as usize, p_sub.entries()[i] as usize, p))
        .collect();
    let mut cnt = 0u64;
    for combo in per.iter().map(|v| v.iter()).multi_cartesian_product() {
        let tuple: Vec<SubSpace> = combo.into_iter().cloned().collect();
        if tuple_closed(m, &tuple, p) {
            cnt += 1;
        }
    }
    Ok(cnt)
}

/// Ties the series side to the point count: evaluates
/// (-v)^{-chi(d,d)} coeff at q = p, multiplies by prod_i |GL_{d_i}(F_p)|,
/// and compares with count_semistable exactly.
pub fn stack_count_check(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    p: u64,
    coeff: &RatFunc,
    budget: u64,
) -> Result<bool> {
    let chi = quiver.euler_form(d, d)?;
    let count = count_semistable(quiver, theta, d, p, budget)?;
    let rf = &RatFunc::neg_v_pow(-chi) * coeff;
    let mut expected = rf.eval_at_q(&BigRational::from_integer(BigInt::from(p)))?;
    for &di in d.entries() {
        expected *= BigRational::from_integer(gl_order(di, p));
    }
    Ok(expected == BigRational::from_integer(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dt::{semistable_series, series_a};
    use crate::quiver::Slope;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dv(xs: &[u32]) -> DimVector {
        DimVector::new(xs.to_vec())
    }

    #[test]
    fn prime_detection() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(!is_prime(1));
        assert!(!is_prime(91));
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(1, 3), BigInt::from(2));
        assert_eq!(gl_order(2, 2), BigInt::from(6));
        assert_eq!(gl_order(0, 5), BigInt::from(1));
        assert_eq!(gl_order(2, 3), BigInt::from(48));
    }

    #[test]
    fn subspace_enumeration_counts() {
        // Lines in F_2^2 and F_3^2, planes in F_2^3.
        assert_eq!(enumerate_subspaces(2, 1, 2).len(), 3);
        assert_eq!(enumerate_subspaces(2, 1, 3).len(), 4);
        assert_eq!(enumerate_subspaces(3, 2, 2).len(), 7);
        assert_eq!(subspace_count(3, 2, 2), 7);
        assert_eq!(enumerate_subspaces(2, 0, 2).len(), 1);
        assert_eq!(enumerate_subspaces(2, 2, 5).len(), 1);
    }

    #[test]
    fn semistability_kronecker() {
        let q = Quiver::kronecker(2);
        let theta = Stability::new(vec![1, 0]);
        let d = dv(&[1, 1]);
        let zero = FFRep::zero(&q, &d, 2).unwrap();
        assert!(!is_semistable(&q, &theta, &zero).unwrap());
        let m = FFRep::new(&q, &d, 2, vec![vec![vec![1]], vec![vec![0]]]).unwrap();
        assert!(is_semistable(&q, &theta, &m).unwrap());
        // Zero stability leaves nothing to destabilize.
        assert!(is_semistable(&q, &Stability::zero(2), &zero).unwrap());
    }

    #[test]
    fn semistable_counts() {
        let q = Quiver::kronecker(2);
        let theta = Stability::new(vec![1, 0]);
        let c = count_semistable(&q, &theta, &dv(&[1, 1]), 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(c, BigInt::from(3));
        let c = count_semistable(&q, &theta, &dv(&[1, 1]), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(c, BigInt::from(8));

        let tc = Quiver::two_cycle();
        let c = count_semistable(&tc, &Stability::new(vec![1, 0]), &dv(&[1, 1]), 3, DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(c, BigInt::from(6));

        // Single vertex: all slopes agree, so the count is the whole space.
        let c = count_semistable(&Quiver::loops(1), &Stability::zero(1), &dv(&[1]), 3, 10).unwrap();
        assert_eq!(c, BigInt::from(3));
        let c =
            count_semistable(&Quiver::loops(2), &Stability::zero(1), &dv(&[2]), 2, 10).unwrap();
        assert_eq!(c, BigInt::from(256));
    }

    #[test]
    fn guards() {
        let q = Quiver::kronecker(2);
        let theta = Stability::new(vec![1, 0]);
        let err = count_semistable(&q, &theta, &dv(&[1, 1]), 4, DEFAULT_BUDGET);
        assert!(matches!(err, Err(Error::NotPrime(4))));
        let err = count_semistable(&q, &theta, &dv(&[1, 1]), 5, 10);
        assert!(matches!(
            err,
            Err(Error::BudgetExceeded {
                needed: 25,
                budget: 10
            })
        ));
    }

    #[test]
    fn subrepresentation_counts() {
        let l0 = Quiver::loops(0);
        let zero2 = FFRep::zero(&l0, &dv(&[2]), 2).unwrap();
        assert_eq!(count_subreps(&zero2, &dv(&[1]), DEFAULT_BUDGET).unwrap(), 3);
        assert_eq!(count_subreps(&zero2, &dv(&[0]), DEFAULT_BUDGET).unwrap(), 1);
        assert_eq!(count_subreps(&zero2, &dv(&[2]), DEFAULT_BUDGET).unwrap(), 1);

        let l1 = Quiver::loops(1);
        let jordan =
            FFRep::new(&l1, &dv(&[2]), 2, vec![vec![vec![0, 1], vec![0, 0]]]).unwrap();
        assert_eq!(count_subreps(&jordan, &dv(&[1]), DEFAULT_BUDGET).unwrap(), 1);
    }

    #[test]
    fn stack_counts_match_series() {
        let l1 = Quiver::loops(1);
        let coeff = series_a(&l1, &dv(&[1])).unwrap().coeff(&dv(&[1]));
        assert!(stack_count_check(&l1, &Stability::zero(1), &dv(&[1]), 2, &coeff, DEFAULT_BUDGET)
            .unwrap());

        let k2 = Quiver::kronecker(2);
        let theta = Stability::new(vec![1, 0]);
        let coeff = semistable_series(&k2, &theta, Slope::new(1, 2), &dv(&[1, 1]))
            .unwrap()
            .coeff(&dv(&[1, 1]));
        assert!(stack_count_check(&k2, &theta, &dv(&[1, 1]), 2, &coeff, DEFAULT_BUDGET).unwrap());
        assert!(stack_count_check(&k2, &theta, &dv(&[1, 1]), 3, &coeff, DEFAULT_BUDGET).unwrap());

        // Convention-fixing case: |R| = 1, |G| = 2, coefficient with chi = 1.
        let l0 = Quiver::loops(0);
        let coeff = series_a(&l0, &dv(&[1])).unwrap().coeff(&dv(&[1]));
        assert!(stack_count_check(&l0, &Stability::zero(1), &dv(&[1]), 3, &coeff, DEFAULT_BUDGET)
            .unwrap());

        let coeff = series_a(&l0, &dv(&[2])).unwrap().coeff(&dv(&[2]));
        assert!(stack_count_check(&l0, &Stability::zero(1), &dv(&[2]), 2, &coeff, DEFAULT_BUDGET)
            .unwrap());

        // A wrong coefficient must be rejected.
        assert!(!stack_count_check(
            &l1,
            &Stability::zero(1),
            &dv(&[1]),
            2,
            &RatFunc::one(),
            DEFAULT_BUDGET
        )
        .unwrap());
    }

    fn modpow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut out = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                out = out * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        out
    }

    fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
        let cols = if b.is_empty() { 0 } else { b[0].len() };
        (0..a.len())
            .map(|r| {
                (0..cols)
                    .map(|c| {
                        (0..b.len())
                            .map(|k| a[r][k] * b[k][c] % p)
                            .sum::<u64>()
                            % p
                    })
                    .collect()
            })
            .collect()
    }

    fn mat_inv(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
        let n = m.len();
        let mut a: Vec<Vec<u64>> = m
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut wide = row.clone();
                wide.extend((0..n).map(|c| u64::from(c == r)));
                wide
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            let inv = modpow(a[col][col], p - 2, p);
            for x in a[col].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..2 * n {
                        a[r][c] = (a[r][c] + p * p - f * a[col][c] % p) % p;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    #[test]
    fn semistability_is_base_change_invariant() {
        let cases = [
            (Quiver::two_cycle(), Stability::new(vec![1, 0]), dv(&[1, 1]), 3u64),
            (Quiver::kronecker(2), Stability::new(vec![1, 0]), dv(&[2, 1]), 2u64),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, theta, d, p) in cases {
            let shapes = arrow_shapes(&q, &d);
            for _ in 0..10 {
                let mats: Vec<Vec<Vec<u64>>> = shapes
                    .iter()
                    .map(|&(_, _, rows, cols)| {
                        (0..rows)
                            .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                            .collect()
                    })
                    .collect();
                let rep = FFRep::new(&q, &d, p, mats).unwrap();
                let gs: Vec<Vec<Vec<u64>>> = d
                    .entries()
                    .iter()
                    .map(|&di| loop {
                        let g: Vec<Vec<u64>> = (0..di)
                            .map(|_| (0..di).map(|_| rng.gen_range(0..p)).collect())
                            .collect();
                        if mat_inv(&g, p).is_some() {
                            break g;
                        }
                    })
                    .collect();
                let conjugated_mats: Vec<Vec<Vec<u64>>> = rep
                    .maps()
                    .iter()
                    .map(|m| {
                        let ginv = mat_inv(&gs[m.from], p).unwrap();
                        mat_mul(&mat_mul(&gs[m.to], &m.matrix, p), &ginv, p)
                    })
                    .collect();
                let conjugated = FFRep::new(&q, &d, p, conjugated_mats).unwrap();
                assert_eq!(
                    is_semistable(&q, &theta, &rep).unwrap(),
                    is_semistable(&q, &theta, &conjugated).unwrap()
                );
            }
        }
    }
}
