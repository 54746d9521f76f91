//! Finite quotients of `π₁^{ab,geo}(Aⁿ) ≅ Λⁿ(F_q)`, the modulus groups of
//! `P¹` at infinity, and brute-force oracles for both.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::Serialize;

use crate::algebra::{Field, Ring};
use crate::error::{Error, Result};
use crate::lambda::WittElement;
use crate::ptypical::component_length;
use crate::series::{monomial_count, monomials, MultiIndex, TruncatedSeries};

/// Largest group the brute-force oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 10_000;
/// Largest census `lang_kernel_census` will enumerate.
pub const CENSUS_LIMIT: u128 = 1_000_000;

/// A finite abelian group as a list of cyclic prime-power orders (ascending)
/// with one witness per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupStructure<T> {
    pub factors: Vec<u64>,
    pub order: u128,
    pub witnesses: Vec<T>,
}

/// Serializable part of a [`GroupStructure`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub factors: Vec<u64>,
    pub order: u128,
}

impl<T> GroupStructure<T> {
    pub fn summary(&self) -> GroupSummary {
        GroupSummary { factors: self.factors.clone(), order: self.order }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Group structure of `Λⁿ(F_q)` modulo total degree `d`.
///
/// Generators are `1 − c t^ν` for `ν` not divisible by `p` and `c` running
/// over an `F_p`-basis of `F_q`; since `(1 − c t^ν)^{p^s} = 1 − c^{p^s}
/// t^{p^s ν}`, such a generator has order `p^{s(ν)}`,
/// `s(ν) = #{i : p^i |ν| < d}`.
pub fn pi1_truncated(n: usize, q: u64, d: u32) -> Result<GroupStructure<WittElement>> {
    if d < 2 {
        return Err(Error::InvalidTruncation(d));
    }
    let ring = Ring::with_order(q, 1)?;
    let p = ring.p();
    let e = ring.field().degree();
    let mut parts: Vec<(u64, WittElement)> = Vec::new();
    for nu in monomials(n, d) {
        if nu.exponents().iter().all(|x| x % p == 0) {
            continue;
        }
        let s = component_length(p, nu.total(), d) as u32;
        for k in 0..e {
            let c = ring.from_field(p.pow(k));
            parts.push(((p as u64).pow(s), WittElement::binomial(&ring, n, d, &c, &nu)));
        }
    }
    parts.sort_by_key(|(f, _)| *f);
    let order = (q as u128).pow(monomial_count(n, d) as u32);
    let (factors, witnesses) = parts.into_iter().unzip();
    Ok(GroupStructure { factors, order, witnesses })
}

/// `(1 + u F_q[[u]]) / (1 + u^m F_q[[u]])`, represented on truncated series
/// in `u`.
#[derive(Clone, Debug)]
pub struct ModulusGroup {
    pub q: u64,
    pub m: u32,
    pub structure: GroupStructure<WittElement>,
}

impl ModulusGroup {
    pub fn order(&self) -> u128 {
        self.structure.order
    }

    /// All elements, as series in `u` modulo `u^m`.
    pub fn elements(&self) -> Result<Vec<WittElement>> {
        enumerate_witt(&Ring::with_order(self.q, 1)?, 1, self.m, BRUTE_FORCE_LIMIT as u128)
    }
}

pub fn modulus_group(q: u64, m: u32) -> Result<ModulusGroup> {
    if m == 0 {
        return Err(Error::InvalidArgument("modulus multiplicity must be at least 1".into()));
    }
    let structure = if m == 1 {
        Ring::with_order(q, 1)?;
        GroupStructure { factors: vec![], order: 1, witnesses: vec![] }
    } else {
        pi1_truncated(1, q, m)?
    };
    Ok(ModulusGroup { q, m, structure })
}

/// Every element of `Λⁿ(R)` modulo total degree `d`, in index order.
pub fn enumerate_witt(ring: &Ring, n: usize, d: u32, limit: u128) -> Result<Vec<WittElement>> {
    let mons = monomials(n, d);
    let size = ring.size();
    let total = size
        .checked_pow(mons.len() as u32)
        .filter(|t| *t <= limit)
        .ok_or(Error::TooLarge(size.saturating_pow(mons.len().min(64) as u32), limit))?;
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut rest = idx;
        let mut terms = Vec::with_capacity(mons.len() + 1);
        terms.push((MultiIndex::zero(n), ring.one()));
        for m in &mons {
            terms.push((m.clone(), ring.element(rest % size)));
            rest /= size;
        }
        out.push(WittElement::new(TruncatedSeries::from_terms(ring, n, d, terms)?)?);
    }
    Ok(out)
}

fn prime_factors(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut l = 2;
    while l * l <= k {
        let mut a = 0;
        while k.is_multiple_of(l) {
            k /= l;
            a += 1;
        }
        if a > 0 {
            out.push((l, a));
        }
        l += 1;
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

/// Structure of a finite abelian group given by its element list and law.
///
/// Greedy: repeatedly take an element of largest order modulo the subgroup
/// generated so far. The cyclic factors found are split into prime powers;
/// each witness has its stated order modulo the span of the earlier ones.
pub fn brute_force_structure<T, F>(elements: &[T], op: F) -> Result<GroupStructure<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    if elements.is_empty() {
        return Err(Error::EmptyInput);
    }
    if elements.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(elements.len() as u128, BRUTE_FORCE_LIMIT as u128));
    }
    let index: HashMap<&T, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mul = |a: usize, b: usize| -> Result<usize> {
        let c = op(&elements[a], &elements[b]);
        index.get(&c).copied().ok_or(Error::NotClosed)
    };
    let identity = (0..elements.len())
        .find(|&i| mul(i, i).ok() == Some(i))
        .ok_or_else(|| Error::InvalidArgument("no identity element".into()))?;

    let pow = |x: usize, mut k: u64| -> Result<usize> {
        let (mut acc, mut base) = (identity, x);
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(acc, base)?;
            }
            k >>= 1;
            if k > 0 {
                base = mul(base, base)?;
            }
        }
        Ok(acc)
    };
    let size = elements.len() as u64;
    // {k : x^k ∈ H} = mZ with m | bound; the ℓ-part of m is the number of
    // ℓ-th powers needed to bring x^{bound/ℓ^a} into H
    let quotient_order = |x: usize, bound: u64, span: &HashSet<usize>| -> Result<u64> {
        let mut m = 1;
        for (l, a) in prime_factors(bound) {
            let mut y = pow(x, bound / l.pow(a))?;
            while !span.contains(&y) {
                y = pow(y, l)?;
                m *= l;
            }
        }
        Ok(m)
    };

    let mut span: HashSet<usize> = HashSet::from([identity]);
    let mut bounds: Vec<u64> = vec![size; elements.len()];
    let mut cyclic: Vec<(u64, usize)> = Vec::new();
    while span.len() < elements.len() {
        let mut best = (0u64, identity);
        for x in 0..elements.len() {
            if span.contains(&x) {
                continue;
            }
            // the order modulo a larger subgroup divides the previous one
            let k = quotient_order(x, bounds[x], &span)?;
            bounds[x] = k;
            if k > best.0 {
                best = (k, x);
            }
        }
        let (k, x) = best;
        let mut next = HashSet::with_capacity(span.len() * k as usize);
        let mut y = identity;
        for _ in 0..k {
            for &h in &span {
                next.insert(mul(h, y)?);
            }
            y = mul(y, x)?;
        }
        if next.len() as u64 != span.len() as u64 * k {
            return Err(Error::NotAbelian);
        }
        span = next;
        cyclic.push((k, x));
    }

    for &(_, g) in &cyclic {
        for y in 0..elements.len() {
            if mul(y, g)? != mul(g, y)? {
                return Err(Error::NotAbelian);
            }
        }
    }

    let mut parts: Vec<(u64, T)> = Vec::new();
    for (k, x) in cyclic {
        for (l, a) in prime_factors(k) {
            let pa = l.pow(a);
            parts.push((pa, elements[pow(x, k / pa)?].clone()));
        }
    }
    parts.sort_by_key(|(f, _)| *f);
    let (factors, witnesses): (Vec<u64>, Vec<T>) = parts.into_iter().unzip();
    Ok(GroupStructure { factors, order: elements.len() as u128, witnesses })
}

/// Brute-force structure of `Λⁿ(F_q)` modulo degree `d`.
pub fn pi1_brute_force(n: usize, q: u64, d: u32) -> Result<GroupStructure<WittElement>> {
    if d < 2 {
        return Err(Error::InvalidTruncation(d));
    }
    let ring = Ring::with_order(q, 1)?;
    let elems = enumerate_witt(&ring, n, d, BRUTE_FORCE_LIMIT as u128)?;
    brute_force_structure(&elems, |a, b| a.add(b).expect("same shape"))
}

/// Outcome of a Lang-map census over `F_{q^s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LangCensus {
    pub group_size: u128,
    pub kernel_size: u128,
    pub expected_kernel: u128,
    pub kernel_is_rational: bool,
    pub endomorphism_checks: u64,
}

impl LangCensus {
    pub fn holds(&self) -> bool {
        self.kernel_size == self.expected_kernel && self.kernel_is_rational
    }
}

/// Enumerates `Λⁿ(F_{q^s})` modulo degree `d`, applies `℘ = Frob_q · (−)⁻¹`
/// and counts its kernel. The kernel must be exactly the `F_q`-rational
/// points, of size `q^M`. `℘(λμ) = ℘(λ)℘(μ)` is checked for every `λ`
/// against a generating family `μ = 1 − c t^ν`, which certifies that `℘` is
/// an endomorphism.
pub fn lang_kernel_census(n: usize, q: u64, s: u32, d: u32) -> Result<LangCensus> {
    if d < 1 || s < 1 {
        return Err(Error::InvalidArgument("need s ≥ 1 and d ≥ 1".into()));
    }
    let small = Field::of_order(q)?;
    let emb = small.extension(s)?;
    let big = Ring::new(emb.big.clone(), 1)?;
    let m = monomial_count(n, d);
    let size = (big.size()).checked_pow(m as u32).unwrap_or(u128::MAX);
    if size > CENSUS_LIMIT {
        return Err(Error::TooLarge(size, CENSUS_LIMIT));
    }
    let elems = enumerate_witt(&big, n, d, CENSUS_LIMIT)?;
    let p = big.p();
    let mut gens = Vec::new();
    for nu in monomials(n, d) {
        for k in 0..emb.big.degree() {
            gens.push(WittElement::binomial(&big, n, d, &big.from_field(p.pow(k)), &nu));
        }
    }
    let gen_images: Vec<WittElement> = gens.iter().map(|g| g.lang_map(q)).collect::<Result<_>>()?;
    let mut kernel = 0u128;
    let mut rational = true;
    let mut checks = 0u64;
    for x in &elems {
        let px = x.lang_map(q)?;
        let in_kernel = px.is_zero();
        let is_rational =
            x.series().terms().values().all(|c| emb.preimage(c.components().first().copied().unwrap_or(0)).is_some());
        if in_kernel {
            kernel += 1;
        }
        rational &= in_kernel == is_rational;
        for (g, pg) in gens.iter().zip(&gen_images) {
            if x.add(g)?.lang_map(q)? != px.add(pg)? {
                return Err(Error::InvalidArgument("Lang map is not multiplicative".into()));
            }
            checks += 1;
        }
    }
    Ok(LangCensus {
        group_size: size,
        kernel_size: kernel,
        expected_kernel: (q as u128).pow(m as u32),
        kernel_is_rational: rational,
        endomorphism_checks: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_structures() {
        assert_eq!(pi1_truncated(1, 2, 3).unwrap().summary(), GroupSummary { factors: vec![4], order: 4 });
        assert_eq!(pi1_truncated(1, 3, 3).unwrap().factors, vec![3, 3]);
        assert_eq!(pi1_truncated(2, 2, 2).unwrap().factors, vec![2, 2]);
        assert!(matches!(pi1_truncated(1, 2, 1), Err(Error::InvalidTruncation(1))));
        for (n, q, d) in [(1, 2, 3), (1, 3, 3), (2, 2, 2)] {
            assert_eq!(pi1_brute_force(n, q, d).unwrap().factors, pi1_truncated(n, q, d).unwrap().factors);
        }
    }

    #[test]
    fn witnesses_have_stated_orders() {
        let g = pi1_truncated(1, 4, 5).unwrap();
        for (f, w) in g.factors.iter().zip(&g.witnesses) {
            assert!(!w.scalar(*f as i64 / 2).is_zero());
            assert!(w.scalar(*f as i64).is_zero());
        }
    }

    #[test]
    fn brute_force_small_groups() {
        let trivial = brute_force_structure(&[0u32], |a, b| a + b).unwrap();
        assert!(trivial.is_trivial());
        let klein: Vec<(i8, i8)> = vec![(1, 1), (1, -1), (-1, 1), (-1, -1)];
        assert_eq!(brute_force_structure(&klein, |a, b| (a.0 * b.0, a.1 * b.1)).unwrap().factors, vec![2, 2]);
        let z12: Vec<u32> = (0..12).collect();
        assert_eq!(brute_force_structure(&z12, |a, b| (a + b) % 12).unwrap().factors, vec![3, 4]);
        assert_eq!(brute_force_structure(&[0u32, 1], |a, b| a + b), Err(Error::NotClosed));
        let s3: Vec<[u8; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let compose = |a: &[u8; 3], b: &[u8; 3]| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]];
        assert_eq!(brute_force_structure(&s3, compose), Err(Error::NotAbelian));
    }

    #[test]
    fn modulus_groups() {
        assert!(modulus_group(2, 1).unwrap().structure.is_trivial());
        let g = modulus_group(2, 3).unwrap();
        assert_eq!(g.structure.factors, vec![4]);
        for (q, m) in [(2u64, 4u32), (3, 3), (4, 3), (5, 2)] {
            let g = modulus_group(q, m).unwrap();
            assert_eq!(g.order(), (q as u128).pow(m - 1));
            assert_eq!(g.elements().unwrap().len() as u128, g.order());
        }
    }

    #[test]
    fn truncation_maps_are_surjective() {
        let ring = Ring::with_order(2, 1).unwrap();
        for n in [1, 2] {
            let small: HashSet<WittElement> = enumerate_witt(&ring, n, 3, 1 << 12).unwrap().into_iter().collect();
            let images: HashSet<WittElement> =
                enumerate_witt(&ring, n, 4, 1 << 12).unwrap().iter().map(|x| x.truncate(3)).collect();
            assert_eq!(images, small);
        }
    }

    #[test]
    fn lang_census_examples() {
        let c = lang_kernel_census(1, 2, 2, 3).unwrap();
        assert_eq!((c.group_size, c.kernel_size), (16, 4));
        assert!(c.holds());
        let c = lang_kernel_census(1, 3, 1, 3).unwrap();
        assert_eq!(c.kernel_size, c.group_size);
        assert!(matches!(lang_kernel_census(3, 4, 2, 4), Err(Error::TooLarge(_, _))));
    }
}
