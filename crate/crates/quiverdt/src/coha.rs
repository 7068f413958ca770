//! Shuffle-algebra model of the cohomological Hall algebra of a quiver:
//! symmetric-polynomial components, the shuffle product and its sign-twisted
//! star variant, semistable and stable quotient presentations, and the
//! stable-quotient route to DT invariants.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num::{BigInt, BigRational, One, Zero};

use crate::dt::DtResult;
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::mpoly::MPoly;
use crate::par;
use crate::quiver::{hn_shift, hn_types, DimVector, Quiver, Stability};
use crate::ratfunc::RatFunc;

/// One partition per vertex; parts are positive and weakly decreasing.
///
/// Ordered by total weight first, then lexicographically, so any sorted list
/// of equal-weight keys is in plain lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPartition(Vec<Vec<u32>>);

impl MultiPartition {
    /// Canonicalize: sort each partition descending and drop zero parts.
    pub fn new(parts: Vec<Vec<u32>>) -> Self {
        let parts = parts
            .into_iter()
            .map(|mut p| {
                p.retain(|&x| x != 0);
                p.sort_unstable_by(|a, b| b.cmp(a));
                p
            })
            .collect();
        MultiPartition(parts)
    }

    pub fn empty(num_vertices: usize) -> Self {
        MultiPartition(vec![Vec::new(); num_vertices])
    }

    pub fn num_vertices(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self, i: usize) -> &[u32] {
        &self.0[i]
    }

    pub fn weight(&self) -> u64 {
        self.0
            .iter()
            .map(|p| p.iter().map(|&x| u64::from(x)).sum::<u64>())
            .sum()
    }

    /// True iff the partition at vertex i has at most d_i parts for all i.
    pub fn fits(&self, d: &DimVector) -> bool {
        self.0.len() == d.len()
            && self
                .0
                .iter()
                .zip(d.entries())
                .all(|(p, &di)| p.len() <= di as usize)
    }
}

impl Ord for MultiPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .0
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).join(","))
            .join("|");
        write!(f, "[{body}]")
    }
}

impl FromStr for MultiPartition {
    type Err = Error;

    /// Inverse of `Display`: "[2,1|1]"; an empty segment is an empty
    /// partition, so "[|]" is the weight-zero key on two vertices.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Internal(format!("malformed multipartition {s:?}")))?;
        let mut parts = Vec::new();
        for seg in inner.split('|') {
            let seg = seg.trim();
            if seg.is_empty() {
                parts.push(Vec::new());
                continue;
            }
            let p = seg
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Internal(format!("malformed multipartition {s:?}")))?;
            parts.push(p);
        }
        Ok(MultiPartition::new(parts))
    }
}

/// Homogeneous element of the degree-`degree` component at dimension vector
/// `d`, written in the monomial symmetric basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymElement {
    d: DimVector,
    degree: usize,
    coeffs: BTreeMap<MultiPartition, BigRational>,
}

impl SymElement {
    pub fn zero(d: DimVector, degree: usize) -> Self {
        SymElement {
            d,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The unit of the component algebra at `d`.
    pub fn one(d: DimVector) -> Self {
        let mp = MultiPartition::empty(d.len());
        SymElement {
            degree: 0,
            coeffs: [(mp, BigRational::one())].into(),
            d,
        }
    }

    pub fn from_terms(
        d: DimVector,
        degree: usize,
        terms: Vec<(MultiPartition, BigRational)>,
    ) -> Result<Self> {
        let mut el = SymElement::zero(d, degree);
        for (mp, c) in terms {
            if !mp.fits(&el.d) {
                return Err(Error::DimMismatch {
                    expected: el.d.len(),
                    got: mp.num_vertices(),
                });
            }
            if mp.weight() != degree as u64 {
                return Err(Error::NotHomogeneous);
            }
            el.add_term(mp, c);
        }
        Ok(el)
    }

    pub fn d(&self) -> &DimVector {
        &self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Cohomological bidegree n = 2 degree + chi(d,d); its parity drives the
    /// sign rules of the star product.
    pub fn bidegree_n(&self, quiver: &Quiver) -> Result<i64> {
        Ok(2 * self.degree as i64 + quiver.euler_form(&self.d, &self.d)?)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, mp: &MultiPartition) -> BigRational {
        self.coeffs.get(mp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiPartition, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &BigRational) -> SymElement {
        let mut out = SymElement::zero(self.d.clone(), self.degree);
        if !c.is_zero() {
            for (mp, x) in &self.coeffs {
                out.coeffs.insert(mp.clone(), x * c);
            }
        }
        out
    }

    pub fn neg(&self) -> SymElement {
        self.scale(&-BigRational::one())
    }

    pub fn add(&self, other: &SymElement) -> Result<SymElement> {
        if self.d != other.d || self.degree != other.degree {
            return Err(Error::SeriesMismatch);
        }
        let mut out = self.clone();
        for (mp, c) in &other.coeffs {
            out.add_term(mp.clone(), c.clone());
        }
        Ok(out)
    }

    fn add_term(&mut self, mp: MultiPartition, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(mp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (mp, c)) in self.coeffs.iter().enumerate() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let unit_key = mp.weight() == 0;
            if mag.is_one() {
                if unit_key {
                    write!(f, "1")?;
                } else {
                    write!(f, "{mp}")?;
                }
            } else if unit_key {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{mp}")?;
            }
        }
        Ok(())
    }
}

/// Partitions of `weight` into at most `max_parts` positive parts,
/// descending lexicographic.
fn partitions_bounded(max_parts: usize, weight: u32) -> Vec<Vec<u32>> {
    fn rec(maxpart: u32, slots: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=rem.min(maxpart)).rev() {
            cur.push(p);
            rec(p, slots - 1, rem - p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, max_parts, weight, &mut Vec::new(), &mut out);
    out
}

/// Monomial symmetric basis of the degree-j component at d, sorted.
pub fn component_basis(d: &DimVector, j: usize) -> Vec<MultiPartition> {
    fn rec(
        d: &DimVector,
        i: usize,
        rem: u32,
        cur: &mut Vec<Vec<u32>>,
        out: &mut Vec<MultiPartition>,
    ) {
        if i == d.len() {
            if rem == 0 {
                out.push(MultiPartition(cur.clone()));
            }
            return;
        }
        for w in 0..=rem {
            for p in partitions_bounded(d.entries()[i] as usize, w) {
                cur.push(p);
                rec(d, i + 1, rem - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(d, 0, j as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Number of multipartitions of weight j with at most d_i parts at vertex i.
pub fn dim_component(d: &DimVector, j: usize) -> usize {
    component_basis(d, j).len()
}

/// Distinct rearrangements of a multiset of part sizes.
fn multiset_perms(items: &[u32]) -> Vec<Vec<u32>> {
    let mut counts: Vec<(u32, usize)> = Vec::new();
    for &x in items {
        match counts.iter_mut().find(|(v, _)| *v == x) {
            Some((_, c)) => *c += 1,
            None => counts.push((x, 1)),
        }
    }
    fn rec(
        counts: &mut Vec<(u32, usize)>,
        cur: &mut Vec<u32>,
        n: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 == 0 {
                continue;
            }
            counts[i].1 -= 1;
            cur.push(counts[i].0);
            rec(counts, cur, n, out);
            cur.pop();
            counts[i].1 += 1;
        }
    }
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), items.len(), &mut out);
    out
}

fn var_offsets(d: &DimVector) -> Vec<usize> {
    let mut offs = Vec::with_capacity(d.len());
    let mut acc = 0usize;
    for &x in d.entries() {
        offs.push(acc);
        acc += x as usize;
    }
    offs
}

/// Expand into the ambient polynomial ring with d_i variables per vertex.
fn expand(el: &SymElement) -> MPoly {
    let nvars = el.d.total() as usize;
    let offs = var_offsets(&el.d);
    let mut out = MPoly::zero(nvars);
    for (mp, c) in &el.coeffs {
        let per_vertex: Vec<Vec<Vec<u32>>> = (0..el.d.len())
            .map(|i| {
                let mut padded = mp.parts(i).to_vec();
                padded.resize(el.d.entries()[i] as usize, 0);
                multiset_perms(&padded)
            })
            .collect();
        for combo in per_vertex
            .iter()
            .map(|a| a.iter())
            .multi_cartesian_product()
        {
            let mut exps = vec![0u16; nvars];
            for (i, arrangement) in combo.iter().enumerate() {
                for (r, &e) in arrangement.iter().enumerate() {
                    exps[offs[i] + r] = e as u16;
                }
            }
            out.add_term(exps, c.clone());
        }
    }
    out
}

/// Collect a symmetric polynomial back into the monomial basis; the
/// round-trip through `expand` is checked exactly.
fn symmetrize(d: &DimVector, poly: &MPoly, expected_degree: i64) -> Result<SymElement> {
    if poly.is_zero() {
        return Ok(SymElement::zero(d.clone(), expected_degree.max(0) as usize));
    }
    if expected_degree < 0 {
        return Err(Error::Internal(
            "nonzero shuffle result at negative degree".into(),
        ));
    }
    let offs = var_offsets(d);
    let mut terms = Vec::new();
    for (exps, c) in poly.terms() {
        let mut parts = Vec::with_capacity(d.len());
        let mut canonical = true;
        for (i, &di) in d.entries().iter().enumerate() {
            let block = &exps[offs[i]..offs[i] + di as usize];
            if block.windows(2).any(|w| w[0] < w[1]) {
                canonical = false;
                break;
            }
            parts.push(block.iter().map(|&x| u32::from(x)).collect());
        }
        if canonical {
            terms.push((MultiPartition::new(parts), c.clone()));
        }
    }
    let el = SymElement::from_terms(d.clone(), expected_degree as usize, terms)?;
    if expand(&el) != *poly {
        return Err(Error::Internal("shuffle result is not symmetric".into()));
    }
    Ok(el)
}

/// The shuffle product A_d x A_e -> A_{d+e}; homogeneous of degree
/// deg f + deg g - chi(d,e).
///
/// All per-vertex position shuffles are summed over a common Vandermonde
/// denominator for the loop-free diagonal kernel factors, and the final
/// division is asserted to be exact.
pub fn shuffle_product(quiver: &Quiver, f: &SymElement, g: &SymElement) -> Result<SymElement> {
    let n = quiver.num_vertices();
    if f.d.len() != n || g.d.len() != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: if f.d.len() != n { f.d.len() } else { g.d.len() },
        });
    }
    let d = &f.d;
    let e = &g.d;
    let dsum = d.add(e);
    let chi = quiver.euler_form(d, e)?;
    let expected_degree = f.degree as i64 + g.degree as i64 - chi;
    let offs_f = var_offsets(d);
    let offs_g = var_offsets(e);
    let offs_t = var_offsets(&dsum);
    let ntot = dsum.total() as usize;
    let pf = expand(f);
    let pg = expand(g);
    // Vertices whose diagonal kernel exponent is -1 contribute denominators
    // whenever both factors occupy them.
    let den: Vec<usize> = (0..n)
        .filter(|&i| {
            quiver.arrow_mult(i, i) == 0 && d.entries()[i] > 0 && e.entries()[i] > 0
        })
        .collect();
    let choices: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| {
            let ni = (d.entries()[i] + e.entries()[i]) as usize;
            (0..ni).combinations(d.entries()[i] as usize).collect()
        })
        .collect();
    let mut acc = MPoly::zero(ntot);
    for shuffle in choices
        .iter()
        .map(|c| c.iter())
        .multi_cartesian_product()
    {
        let mut fmap = vec![0usize; pf_nvars(d)];
        let mut gmap = vec![0usize; pf_nvars(e)];
        let mut tsets: Vec<Vec<usize>> = Vec::with_capacity(n);
        for (i, s_i) in shuffle.iter().enumerate() {
            let ni = (d.entries()[i] + e.entries()[i]) as usize;
            let t_i: Vec<usize> = (0..ni).filter(|p| !s_i.contains(p)).collect();
            for (r, &p) in s_i.iter().enumerate() {
                fmap[offs_f[i] + r] = offs_t[i] + p;
            }
            for (s, &p) in t_i.iter().enumerate() {
                gmap[offs_g[i] + s] = offs_t[i] + p;
            }
            tsets.push(t_i);
        }
        let mut term = pf.embed(&fmap, ntot).mul(&pg.embed(&gmap, ntot));
        for i in 0..n {
            for jv in 0..n {
                let exp = quiver.arrow_mult(i, jv) as i64 - i64::from(i == jv);
                if exp <= 0 {
                    continue;
                }
                for r in 0..d.entries()[i] as usize {
                    for s in 0..e.entries()[jv] as usize {
                        let a = offs_t[jv] + tsets[jv][s];
                        let b = offs_t[i] + shuffle[i][r];
                        for _ in 0..exp {
                            term = term.mul_linear_diff(a, b);
                        }
                    }
                }
            }
        }
        let mut sign = false;
        for &i in &den {
            let s_i = shuffle[i];
            let t_i = &tsets[i];
            let inversions = s_i
                .iter()
                .map(|&r| t_i.iter().filter(|&&t| t < r).count())
                .sum::<usize>();
            sign ^= inversions % 2 == 1;
            // Multiply in the missing Vandermonde factors so all shuffles
            // share the full per-vertex Vandermonde denominator.
            for set in [s_i, t_i] {
                for a in 0..set.len() {
                    for b in a + 1..set.len() {
                        term = term.mul_linear_diff(offs_t[i] + set[b], offs_t[i] + set[a]);
                    }
                }
            }
        }
        if sign {
            term.scale(&-BigRational::one());
        }
        acc.add_assign(&term);
    }
    for &i in &den {
        let ni = (d.entries()[i] + e.entries()[i]) as usize;
        for u in 0..ni {
            for w in u + 1..ni {
                acc = acc.div_linear_diff(offs_t[i] + w, offs_t[i] + u)?;
            }
        }
    }
    let out = symmetrize(&dsum, &acc, expected_degree)?;
    if !out.is_zero() && out.degree as i64 != expected_degree {
        return Err(Error::Internal("shuffle degree law violated".into()));
    }
    Ok(out)
}

fn pf_nvars(d: &DimVector) -> usize {
    d.total() as usize
}

/// Sign exponent of the star product: a bilinear form whose symmetrization
/// is chi(d,e) + l(d) l(e) mod 2, where l(d) = sum (1 - a_ii) d_i mod 2.
fn psi(quiver: &Quiver, d: &DimVector, e: &DimVector) -> Result<u8> {
    if d.len() != quiver.num_vertices() || e.len() != quiver.num_vertices() {
        return Err(Error::DimMismatch {
            expected: quiver.num_vertices(),
            got: if d.len() != quiver.num_vertices() {
                d.len()
            } else {
                e.len()
            },
        });
    }
    let mut acc = 0u64;
    for i in 0..d.len() {
        for j in i + 1..e.len() {
            let li = 1 + u64::from(quiver.arrow_mult(i, i));
            let lj = 1 + u64::from(quiver.arrow_mult(j, j));
            let b = (u64::from(quiver.arrow_mult(i, j)) + li * lj) % 2;
            acc += b * u64::from(d.entries()[i]) * u64::from(e.entries()[j]);
        }
    }
    Ok((acc % 2) as u8)
}

/// The sign-twisted product (-1)^psi(d,e) f * g; super-commutative with
/// respect to the parity of the bidegree n.
pub fn star_product(quiver: &Quiver, f: &SymElement, g: &SymElement) -> Result<SymElement> {
    if !quiver.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let s = psi(quiver, &f.d, &g.d)?;
    let p = shuffle_product(quiver, f, g)?;
    Ok(if s == 1 { p.neg() } else { p })
}

/// Exact test of f * g = (-1)^{chi(d,e)} g * f.
pub fn twisted_commutativity_check(
    quiver: &Quiver,
    f: &SymElement,
    g: &SymElement,
) -> Result<bool> {
    if !quiver.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let lhs = shuffle_product(quiver, f, g)?;
    let rhs = shuffle_product(quiver, g, f)?;
    let chi = quiver.euler_form(&f.d, &g.d)?;
    let rhs = if chi.rem_euclid(2) == 1 { rhs.neg() } else { rhs };
    Ok(lhs == rhs)
}

/// Per-degree presentation of a quotient of the component at `d`: the ideal
/// rows in echelon form plus a chosen complement basis.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    d: DimVector,
    components: Vec<DegreeComponent>,
}

#[derive(Debug, Clone)]
struct DegreeComponent {
    basis: Vec<MultiPartition>,
    ideal: Echelon,
    complement: Vec<usize>,
}

impl QuotientPresentation {
    pub fn d(&self) -> &DimVector {
        &self.d
    }

    pub fn jmax(&self) -> usize {
        self.components.len() - 1
    }

    /// Quotient dimensions for j = 0..=jmax.
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.complement.len()).collect()
    }

    pub fn dim_at(&self, j: usize) -> Result<usize> {
        Ok(self.component(j)?.complement.len())
    }

    pub fn ideal_rank_at(&self, j: usize) -> Result<usize> {
        Ok(self.component(j)?.ideal.rank())
    }

    /// Monomial keys spanning the chosen complement in degree j.
    pub fn complement_basis(&self, j: usize) -> Result<Vec<MultiPartition>> {
        let c = self.component(j)?;
        Ok(c.complement.iter().map(|&k| c.basis[k].clone()).collect())
    }

    fn component(&self, j: usize) -> Result<&DegreeComponent> {
        self.components.get(j).ok_or(Error::DegreeOutOfRange {
            got: j,
            max: self.components.len() - 1,
        })
    }
}

fn coordinates(el: &SymElement, basis: &[MultiPartition]) -> Result<Vec<BigRational>> {
    let mut v = vec![BigRational::zero(); basis.len()];
    for (mp, c) in el.terms() {
        let i = basis
            .binary_search(mp)
            .map_err(|_| Error::Internal("monomial key missing from component basis".into()))?;
        v[i] = c.clone();
    }
    Ok(v)
}

/// Decompositions d = p + q with both parts nonzero and slope(p) above
/// (`strict`) or not below slope(q).
fn forbidden_decompositions(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    strict: bool,
) -> Result<Vec<(DimVector, DimVector, i64)>> {
    if theta.len() != d.len() {
        return Err(Error::DimMismatch {
            expected: d.len(),
            got: theta.len(),
        });
    }
    let mut out = Vec::new();
    for p in d.iter_box() {
        if p.is_zero() || p == *d {
            continue;
        }
        let q = d.checked_sub(&p).expect("box member");
        let sp = theta.slope(&p)?;
        let sq = theta.slope(&q)?;
        if (strict && sp > sq) || (!strict && sp >= sq) {
            let chi = quiver.euler_form(&p, &q)?;
            out.push((p, q, chi));
        }
    }
    Ok(out)
}

fn build_degree(
    quiver: &Quiver,
    decomps: &[(DimVector, DimVector, i64)],
    d: &DimVector,
    j: usize,
) -> Result<DegreeComponent> {
    let basis = component_basis(d, j);
    let width = basis.len();
    let mut ideal = Echelon::new(width);
    'outer: for (p, q, chi_pq) in decomps {
        let span_degree = j as i64 + chi_pq;
        if span_degree < 0 {
            continue;
        }
        for jp in 0..=span_degree as usize {
            let jq = span_degree as usize - jp;
            for bp in component_basis(p, jp) {
                let fp = SymElement::from_terms(p.clone(), jp, vec![(bp, BigRational::one())])?;
                for bq in component_basis(q, jq) {
                    let fq =
                        SymElement::from_terms(q.clone(), jq, vec![(bq, BigRational::one())])?;
                    let prod = shuffle_product(quiver, &fp, &fq)?;
                    if prod.is_zero() {
                        continue;
                    }
                    ideal.insert(coordinates(&prod, &basis)?);
                    if ideal.rank() == width {
                        break 'outer;
                    }
                }
            }
        }
    }
    let complement = ideal.complement_columns();
    Ok(DegreeComponent {
        basis,
        ideal,
        complement,
    })
}

fn build_presentation(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    jmax: usize,
    strict: bool,
) -> Result<QuotientPresentation> {
    let decomps = forbidden_decompositions(quiver, theta, d, strict)?;
    let components = par::par_map((0..=jmax).collect(), |j| {
        build_degree(quiver, &decomps, d, j)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(QuotientPresentation {
        d: d.clone(),
        components,
    })
}

/// Presentation of the semistable quotient: the ideal is spanned by products
/// over decompositions with slope(p) > slope(q).
pub fn sst_presentation(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    jmax: usize,
) -> Result<QuotientPresentation> {
    build_presentation(quiver, theta, d, jmax, true)
}

/// Presentation of the stable quotient, realized inside the full component
/// by enlarging the decomposition set to slope(p) >= slope(q).
pub fn st_presentation(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    jmax: usize,
) -> Result<QuotientPresentation> {
    build_presentation(quiver, theta, d, jmax, false)
}

/// Coordinates of the class of `f` in the stored complement basis; the zero
/// vector iff `f` lies in the ideal.
pub fn sst_reduce(pres: &QuotientPresentation, f: &SymElement) -> Result<Vec<BigRational>> {
    if f.d != pres.d {
        if f.d.len() != pres.d.len() {
            return Err(Error::DimMismatch {
                expected: pres.d.len(),
                got: f.d.len(),
            });
        }
        return Err(Error::SeriesMismatch);
    }
    let comp = pres.component(f.degree)?;
    let reduced = comp.ideal.reduce(coordinates(f, &comp.basis)?);
    Ok(comp.complement.iter().map(|&k| reduced[k].clone()).collect())
}

/// DT invariants through stable-quotient dimensions: omega_tilde is
/// (1 - q) times the Poincare series of the stable quotient.
pub fn chow_betti_dt(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    jmax: usize,
) -> Result<DtResult> {
    if !quiver.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let chi = quiver.euler_form(d, d)?;
    let need = (2 - chi).max(0) as usize;
    if jmax < need {
        return Err(Error::JmaxTooSmall { need, got: jmax });
    }
    let dims = st_presentation(quiver, theta, d, jmax)?.dims();
    // Support of omega_tilde ends at degree 1 - chi; later differences must
    // vanish once jmax clears the stabilization bound.
    let top = 1 - chi;
    let mut coeffs: Vec<BigInt> = Vec::new();
    for (j, &s) in dims.iter().enumerate() {
        let prev = if j == 0 { 0 } else { dims[j - 1] as i64 };
        let p = s as i64 - prev;
        if (j as i64) <= top {
            coeffs.push(BigInt::from(p));
        } else if p != 0 {
            return Err(Error::Internal(
                "stable quotient dimensions failed to stabilize".into(),
            ));
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(DtResult::from_polynomial(d.clone(), chi, coeffs, None))
}

/// One dimension vector's contribution to the Poincare series:
/// (-1)^{chi(d,d)} v^{chi(d,d)} sum_j dims[j] q^j.
pub fn poincare_contribution(quiver: &Quiver, d: &DimVector, dims: &[usize]) -> Result<RatFunc> {
    let chi = quiver.euler_form(d, d)?;
    let mut s = RatFunc::zero();
    for (j, &m) in dims.iter().enumerate() {
        if m != 0 {
            s = &s + &(&RatFunc::from_int(m as i64) * &RatFunc::q_pow(j as i64));
        }
    }
    Ok(&RatFunc::neg_v_pow(chi) * &s)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if slots == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rem {
            cur.push(x);
            rec(rem - x, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

/// Graded-dimension identity behind the HN tensor decomposition: for every
/// j <= jmax the full component dimension at (d, j) must equal the sum over
/// HN types of products of semistable quotient dimensions, with the degree
/// shifted by sum_{r<s} chi(d^r, d^s).
pub fn tensor_check(
    quiver: &Quiver,
    theta: &Stability,
    d: &DimVector,
    jmax: usize,
) -> Result<bool> {
    let types = hn_types(quiver, theta, d)?;
    let mut shifted = Vec::with_capacity(types.len());
    for t in types {
        let shift = hn_shift(quiver, &t)?;
        shifted.push((t, shift));
    }
    let mut need: BTreeMap<DimVector, usize> = BTreeMap::new();
    for (t, shift) in &shifted {
        let top = jmax as i64 + shift;
        if top < 0 {
            continue;
        }
        for p in t {
            let e = need.entry(p.clone()).or_insert(0);
            *e = (*e).max(top as usize);
        }
    }
    let jobs: Vec<(DimVector, usize)> = need.into_iter().collect();
    let dims: BTreeMap<DimVector, Vec<usize>> = par::par_map(jobs, |(p, pjmax)| {
        sst_presentation(quiver, theta, &p, pjmax).map(|pres| (p, pres.dims()))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    for j in 0..=jmax {
        let lhs = dim_component(d, j);
        let mut rhs = 0usize;
        for (t, shift) in &shifted {
            let total = j as i64 + shift;
            if total < 0 {
                continue;
            }
            for split in compositions(total as usize, t.len()) {
                let mut prod = 1usize;
                for (p, &jv) in t.iter().zip(&split) {
                    prod *= dims[p][jv];
                    if prod == 0 {
                        break;
                    }
                }
                rhs += prod;
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
