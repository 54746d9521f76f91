//! Sparse power series in `n` variables, truncated by total degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use smallvec::SmallVec;

use crate::algebra::{Ring, RingElement};
use crate::error::{Error, Result};

/// Exponent vector `ν = (ν₁, …, ν_n)` of the monomial `t^ν`.
///
/// Ordered graded-lexicographically: by total degree, then by the
/// exponent vectors compared lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MultiIndex {
    pub fn new(exps: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(exps))
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// `t_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `gcd(ν₁, …, ν_n)`, zero for the zero index.
    pub fn gcd(&self) -> u32 {
        self.0.iter().fold(0, |g, &e| g.gcd(&e))
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    pub fn scale(&self, k: u32) -> Self {
        MultiIndex(self.0.iter().map(|&e| e * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `ν / k` when `k` divides every exponent.
    pub fn divide(&self, k: u32) -> Option<Self> {
        self.0
            .iter()
            .all(|&e| e % k == 0)
            .then(|| MultiIndex(self.0.iter().map(|&e| e / k).collect()))
    }

    /// Primitive index `ν/gcd(ν)` and the multiplier `gcd(ν)`.
    pub fn primitive_part(&self) -> (Self, u32) {
        let g = self.gcd();
        (self.divide(g).expect("gcd divides"), g)
    }
}

/// All `ν` with `0 < |ν| < d`, in ascending graded-lex order.
pub fn monomials(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for k in 1..d {
        out.extend(monomials_of_degree(n, k));
    }
    out
}

/// All `ν` with `|ν| = k`, in ascending lex order.
pub fn monomials_of_degree(n: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(MultiIndex::new(prefix));
            prefix.pop();
            return;
        }
        for first in 0..=k {
            prefix.push(first);
            rec(n, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Number of `ν` with `0 < |ν| < d`, i.e. `C(n+d-1, n) - 1`.
pub fn monomial_count(n: usize, d: u32) -> u64 {
    let mut c: u64 = 1;
    for i in 1..=n as u64 {
        c = c * (d as u64 - 1 + i) / i;
    }
    c - 1
}

/// Element of `R[[t₁,…,t_n]]` modulo all monomials of total degree `≥ d`.
///
/// `exact` marks values known to be genuine polynomials (nothing was lost to
/// truncation); only those may be evaluated.
#[derive(Clone)]
pub struct TruncatedSeries {
    ring: Ring,
    n: usize,
    d: u32,
    exact: bool,
    terms: BTreeMap<MultiIndex, RingElement>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.terms == other.terms && self.ring == other.ring
    }
}

impl Eq for TruncatedSeries {}

impl std::hash::Hash for TruncatedSeries {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.d.hash(state);
        self.terms.hash(state);
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.render(), self.d)
    }
}

impl TruncatedSeries {
    pub fn zero(ring: &Ring, n: usize, d: u32) -> Self {
        TruncatedSeries { ring: ring.clone(), n, d, exact: true, terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring, n: usize, d: u32) -> Self {
        Self::constant(ring, n, d, ring.one())
    }

    pub fn constant(ring: &Ring, n: usize, d: u32, c: RingElement) -> Self {
        let mut s = Self::zero(ring, n, d);
        s.set(MultiIndex::zero(n), c);
        s
    }

    /// Truncated series from terms; terms of total degree `≥ d` are dropped.
    pub fn from_terms<I>(ring: &Ring, n: usize, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, RingElement)>,
    {
        let mut s = Self::zero(ring, n, d);
        s.exact = false;
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::ShapeMismatch(format!("index {m:?} in {n} variables")));
            }
            if m.total() < d {
                let cur = s.coeff(&m);
                s.set(m, ring.add(&cur, &c));
            }
        }
        Ok(s)
    }

    /// Exact polynomial stored with truncation bound `d`; fails if a nonzero
    /// term does not fit.
    pub fn polynomial<I>(ring: &Ring, n: usize, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, RingElement)>,
    {
        let mut s = Self::zero(ring, n, d);
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::ShapeMismatch(format!("index {m:?} in {n} variables")));
            }
            if ring.is_zero(&c) {
                continue;
            }
            if m.total() >= d {
                return Err(Error::ShapeMismatch(format!(
                    "term {m:?} does not fit below total degree {d}"
                )));
            }
            let cur = s.coeff(&m);
            s.set(m, ring.add(&cur, &c));
        }
        Ok(s)
    }

    /// One-variable polynomial or series from dense coefficients.
    pub fn univariate(ring: &Ring, d: u32, coeffs: &[RingElement], exact: bool) -> Result<Self> {
        let terms = coeffs.iter().enumerate().map(|(i, c)| (MultiIndex::new(&[i as u32]), c.clone()));
        if exact {
            Self::polynomial(ring, 1, d, terms)
        } else {
            Self::from_terms(ring, 1, d, terms)
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation bound: terms of total degree `< d` are kept.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn with_exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, RingElement> {
        &self.terms
    }

    pub fn coeff(&self, m: &MultiIndex) -> RingElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> RingElement {
        self.coeff(&MultiIndex::zero(self.n))
    }

    /// Largest total degree of a stored term (0 for constants and zero).
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.total())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.ring.is_one(&self.constant_term())
    }

    fn set(&mut self, m: MultiIndex, c: RingElement) {
        if self.ring.is_zero(&c) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.d != other.d || self.ring != other.ring {
            return Err(Error::ShapeMismatch(format!(
                "(n={}, d={}, {:?}) vs (n={}, d={}, {:?})",
                self.n, self.d, self.ring, other.n, other.d, other.ring
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.exact = self.exact && other.exact;
        for (m, c) in &other.terms {
            let cur = out.coeff(m);
            out.set(m.clone(), self.ring.add(&cur, c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        let mut out = Self::zero(&self.ring, self.n, self.d);
        out.exact = self.exact;
        for (m, a) in &self.terms {
            out.set(m.clone(), self.ring.mul(c, a));
        }
        out
    }

    /// Product with all terms of total degree `≥ d` discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let r = &self.ring;
        let mut acc: BTreeMap<MultiIndex, RingElement> = BTreeMap::new();
        let mut dropped = false;
        for (ma, ca) in &self.terms {
            let room = self.d - ma.total();
            for (mb, cb) in &other.terms {
                if mb.total() >= room {
                    dropped = true;
                    break;
                }
                let prod = r.mul(ca, cb);
                acc.entry(ma.add(mb))
                    .and_modify(|c| r.add_assign(c, &prod))
                    .or_insert(prod);
            }
        }
        acc.retain(|_, c| !r.is_zero(c));
        Ok(TruncatedSeries {
            ring: r.clone(),
            n: self.n,
            d: self.d,
            exact: self.exact && other.exact && !dropped,
            terms: acc,
        })
    }

    /// `self · (1 − r·t^ν)`.
    pub fn mul_binomial(&self, r: &RingElement, nu: &MultiIndex) -> Self {
        let ring = &self.ring;
        let mut out = self.clone();
        let neg_r = ring.neg(r);
        for (m, c) in &self.terms {
            let target = m.add(nu);
            if target.total() >= self.d {
                out.exact = false;
                continue;
            }
            let cur = out.coeff(&target);
            out.set(target, ring.add(&cur, &ring.mul(&neg_r, c)));
        }
        out
    }

    /// `self · (1 − r·t^ν)⁻¹ = self · Σ_k r^k t^{kν}`.
    pub fn div_binomial(&self, r: &RingElement, nu: &MultiIndex) -> Self {
        let ring = &self.ring;
        let mut out = self.clone();
        out.exact = false;
        // ascending order: every update reads already-updated lower terms
        let keys: Vec<MultiIndex> = monomials_between(self, nu);
        for m in keys {
            let Some(base) = m_sub(&m, nu) else { continue };
            let prev = out.coeff(&base);
            if ring.is_zero(&prev) {
                continue;
            }
            let cur = out.coeff(&m);
            out.set(m, ring.add(&cur, &ring.mul(r, &prev)));
        }
        out
    }

    /// Two-sided inverse modulo degree `d`, via the geometric series in the
    /// augmentation part.
    pub fn inv(&self) -> Result<Self> {
        let r = &self.ring;
        let c = self.constant_term();
        let c_inv = r.inv(&c).map_err(|_| Error::NonUnitConstantTerm)?;
        let normalized = self.scale(&c_inv);
        let mut aug = normalized.clone();
        aug.terms.remove(&MultiIndex::zero(self.n));
        let neg_aug = aug.neg();
        let one = Self::one(r, self.n, self.d);
        // Horner: s ← 1 − N·s accumulates Σ (−N)^k
        let mut s = one.clone();
        if !aug.terms.is_empty() {
            for _ in 1..self.d {
                s = one.add(&neg_aug.mul(&s)?)?;
            }
        }
        let mut out = s.scale(&c_inv);
        out.exact = aug.terms.is_empty() && self.exact;
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring, self.n, self.d);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Reduction to a smaller truncation bound.
    pub fn truncate(&self, d: u32) -> Self {
        let d = d.min(self.d);
        let mut out = self.clone();
        let before = out.terms.len();
        out.terms.retain(|m, _| m.total() < d);
        out.d = d;
        out.exact = self.exact && out.terms.len() == before;
        out
    }

    /// The same stored terms under a larger truncation bound. Unknown higher
    /// coefficients are taken to be zero, so only exact inputs stay exact.
    pub fn extend(&self, d: u32) -> Self {
        let mut out = self.clone();
        out.d = d.max(self.d);
        out
    }

    /// Sum of all coefficients, i.e. evaluation at `t = (1, …, 1)`.
    pub fn eval_all_ones(&self) -> Result<RingElement> {
        if !self.exact {
            return Err(Error::NotExact);
        }
        let r = &self.ring;
        Ok(self.terms.values().fold(r.zero(), |acc, c| r.add(&acc, c)))
    }

    /// Applies a ring map coefficient-wise.
    pub fn map_coeffs<F: Fn(&RingElement) -> RingElement>(&self, target: &Ring, f: F) -> Self {
        let mut out = Self::zero(target, self.n, self.d);
        out.exact = self.exact;
        for (m, c) in &self.terms {
            out.set(m.clone(), f(c));
        }
        out
    }

    /// Substitutes `s ↦ t^ν` into a one-variable series, producing a series
    /// in `ν.n()` variables with truncation bound `d`.
    pub fn substitute_monomial(&self, nu: &MultiIndex, d: u32) -> Result<Self> {
        if self.n != 1 {
            return Err(Error::ShapeMismatch("substitution needs a one-variable series".into()));
        }
        let n = nu.n();
        let mut out = Self::zero(&self.ring, n, d);
        out.exact = self.exact;
        for (m, c) in &self.terms {
            let target = nu.scale(m.exponents()[0]);
            if target.total() >= d {
                out.exact = false;
                continue;
            }
            out.set(target, c.clone());
        }
        Ok(out)
    }

    /// Human-readable rendering, e.g. `1 + 2·t1·t2^2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let coeff = self.ring.render(c);
                let mon: Vec<String> = m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let var = if self.n == 1 { "t".to_string() } else { format!("t{}", i + 1) };
                        if e == 1 {
                            var
                        } else {
                            format!("{var}^{e}")
                        }
                    })
                    .collect();
                match (mon.is_empty(), coeff.as_str()) {
                    (true, _) => coeff,
                    (false, "1") => mon.join("·"),
                    (false, _) => format!("({coeff})·{}", mon.join("·")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn m_sub(a: &MultiIndex, b: &MultiIndex) -> Option<MultiIndex> {
    a.exponents()
        .iter()
        .zip(b.exponents())
        .map(|(&x, &y)| x.checked_sub(y))
        .collect::<Option<SmallVec<[u32; 4]>>>()
        .map(MultiIndex)
}

/// Monomials `μ + kν` (k ≥ 1, `μ` a stored term) below the bound, ascending.
fn monomials_between(s: &TruncatedSeries, nu: &MultiIndex) -> Vec<MultiIndex> {
    let mut set = std::collections::BTreeSet::new();
    for m in s.terms.keys() {
        let mut cur = m.add(nu);
        while cur.total() < s.d {
            set.insert(cur.clone());
            cur = cur.add(nu);
        }
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(n: usize, exps: &[u32]) -> MultiIndex {
        assert_eq!(exps.len(), n);
        MultiIndex::new(exps)
    }

    fn random_series(ring: &Ring, n: usize, d: u32, rng: &mut ChaCha8Rng, unit: bool) -> TruncatedSeries {
        let mut terms = Vec::new();
        for m in monomials(n, d) {
            if rng.gen_bool(0.6) {
                terms.push((m, ring.random(rng)));
            }
        }
        let c = if unit { ring.random_unit(rng) } else { ring.random(rng) };
        terms.push((MultiIndex::zero(n), c));
        TruncatedSeries::from_terms(ring, n, d, terms).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let ms = monomials(2, 3);
        let exps: Vec<&[u32]> = ms.iter().map(|m| m.exponents()).collect();
        assert_eq!(exps, vec![&[0, 1][..], &[1, 0], &[0, 2], &[1, 1], &[2, 0]]);
        assert_eq!(monomial_count(2, 3), 5);
        assert_eq!(monomial_count(3, 4), 19);
        assert_eq!(monomials(3, 4).len(), 19);
        assert!(t(2, &[2, 3]).is_primitive());
        assert!(!t(2, &[2, 4]).is_primitive());
    }

    #[test]
    fn product_examples() {
        let r = Ring::with_order(5, 1).unwrap();
        let one_plus = TruncatedSeries::univariate(&r, 3, &[r.one(), r.one()], false).unwrap();
        let one_minus = TruncatedSeries::univariate(&r, 3, &[r.one(), r.from_int(-1)], false).unwrap();
        let expected = TruncatedSeries::univariate(&r, 3, &[r.one(), r.zero(), r.from_int(-1)], false).unwrap();
        assert_eq!(one_plus.mul(&one_minus).unwrap(), expected);
        assert_eq!(one_plus.mul(&TruncatedSeries::one(&r, 1, 3)).unwrap(), one_plus);

        let a = TruncatedSeries::from_terms(&r, 2, 2, [(MultiIndex::zero(2), r.one()), (t(2, &[1, 0]), r.one())]).unwrap();
        let b = TruncatedSeries::from_terms(&r, 2, 2, [(MultiIndex::zero(2), r.one()), (t(2, &[0, 1]), r.one())]).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.terms().len(), 3);
        assert!(!prod.terms().contains_key(&t(2, &[1, 1])));
    }

    #[test]
    fn inverse_examples() {
        let r = Ring::with_order(7, 1).unwrap();
        let one = TruncatedSeries::one(&r, 1, 5);
        assert_eq!(one.inv().unwrap(), one);
        let s = TruncatedSeries::univariate(&r, 4, &[r.one(), r.one()], false).unwrap();
        let expected = TruncatedSeries::univariate(
            &r,
            4,
            &[r.one(), r.from_int(-1), r.one(), r.from_int(-1)],
            false,
        )
        .unwrap();
        assert_eq!(s.inv().unwrap(), expected);

        let s2 = TruncatedSeries::from_terms(
            &r,
            2,
            3,
            [(MultiIndex::zero(2), r.one()), (t(2, &[1, 0]), r.one()), (t(2, &[0, 1]), r.one())],
        )
        .unwrap();
        let expected2 = TruncatedSeries::from_terms(
            &r,
            2,
            3,
            [
                (MultiIndex::zero(2), r.one()),
                (t(2, &[1, 0]), r.from_int(-1)),
                (t(2, &[0, 1]), r.from_int(-1)),
                (t(2, &[2, 0]), r.one()),
                (t(2, &[1, 1]), r.from_int(2)),
                (t(2, &[0, 2]), r.one()),
            ],
        )
        .unwrap();
        assert_eq!(s2.inv().unwrap(), expected2);
        let zero_const = TruncatedSeries::univariate(&r, 3, &[r.zero(), r.one()], false).unwrap();
        assert_eq!(zero_const.inv().unwrap_err(), Error::NonUnitConstantTerm);
    }

    #[test]
    fn evaluation_requires_exact() {
        let r = Ring::with_order(2, 2).unwrap();
        let f = TruncatedSeries::univariate(&r, 4, &[r.one(), r.eps()], true).unwrap();
        assert_eq!(f.eval_all_ones().unwrap(), r.add(&r.one(), &r.eps()));
        assert_eq!(f.clone().with_exact(false).eval_all_ones(), Err(Error::NotExact));
        assert_eq!(TruncatedSeries::one(&r, 3, 2).eval_all_ones().unwrap(), r.one());

        let r3 = Ring::with_order(2, 3).unwrap();
        let eps = r3.eps();
        let g = TruncatedSeries::polynomial(
            &r3,
            2,
            4,
            [
                (MultiIndex::zero(2), r3.one()),
                (t(2, &[1, 0]), eps.clone()),
                (t(2, &[0, 1]), eps.clone()),
                (t(2, &[1, 1]), r3.mul(&eps, &eps)),
            ],
        )
        .unwrap();
        // 1 + 2ε + ε² = 1 + ε² in characteristic 2
        let expected = r3.add(&r3.add(&r3.one(), &r3.mul_int(2, &eps)), &r3.mul(&eps, &eps));
        assert_eq!(g.eval_all_ones().unwrap(), expected);
    }

    #[test]
    fn shape_mismatch() {
        let r = Ring::with_order(3, 1).unwrap();
        let a = TruncatedSeries::one(&r, 1, 3);
        let b = TruncatedSeries::one(&r, 1, 4);
        assert!(matches!(a.mul(&b), Err(Error::ShapeMismatch(_))));
        let c = TruncatedSeries::one(&r, 2, 3);
        assert!(matches!(a.mul(&c), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn exactness_tracking() {
        let r = Ring::with_order(3, 1).unwrap();
        let a = TruncatedSeries::univariate(&r, 4, &[r.one(), r.one()], true).unwrap();
        assert!(a.mul(&a).unwrap().is_exact());
        assert!(!a.pow(4).unwrap().is_exact());
        assert!(!a.inv().unwrap().is_exact());
    }

    #[test]
    fn ring_laws_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (q, nil, n, d) in [(2, 1, 1, 6), (3, 2, 2, 4), (4, 1, 3, 3), (5, 3, 1, 5)] {
            let r = Ring::with_order(q, nil).unwrap();
            for _ in 0..150 {
                let a = random_series(&r, n, d, &mut rng, false);
                let b = random_series(&r, n, d, &mut rng, false);
                let c = random_series(&r, n, d, &mut rng, false);
                assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
                assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                assert_eq!(
                    a.mul(&b.add(&c).unwrap()).unwrap(),
                    a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
                );
                let u = random_series(&r, n, d, &mut rng, true);
                let ui = u.inv().unwrap();
                assert!(u.mul(&ui).unwrap().is_one());
                assert!(ui.mul(&u).unwrap().is_one());
                // truncation commutes with products and inverses
                let dd = d - 1;
                assert_eq!(a.mul(&b).unwrap().truncate(dd), a.truncate(dd).mul(&b.truncate(dd)).unwrap());
                assert_eq!(ui.truncate(dd), u.truncate(dd).inv().unwrap());
            }
        }
    }

    #[test]
    fn binomial_helpers_match_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = Ring::with_order(5, 2).unwrap();
        for _ in 0..200 {
            let a = random_series(&r, 2, 5, &mut rng, true);
            let nu = monomials(2, 5)[rng.gen_range(0..14)].clone();
            let c = r.random(&mut rng);
            let bin = TruncatedSeries::from_terms(&r, 2, 5, [(MultiIndex::zero(2), r.one()), (nu.clone(), r.neg(&c))]).unwrap();
            assert_eq!(a.mul_binomial(&c, &nu), a.mul(&bin).unwrap());
            assert_eq!(a.div_binomial(&c, &nu), a.mul(&bin.inv().unwrap()).unwrap());
        }
    }
}
