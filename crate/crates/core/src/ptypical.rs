//! p-typical Witt vectors, the ghost map, the Artin–Hasse exponential and the
//! isomorphism `Πε: ∏_{(j,p)=1} W → Λ`.
//!
//! Two independent arithmetic routes are provided for `W`:
//!
//! * an oracle route over exact rationals: lift, apply the ghost map,
//!   operate componentwise, solve back and reduce mod `p`;
//! * the production route: the universal integral addition, multiplication
//!   and negation polynomials, computed once per `(p, m)` and evaluated in
//!   any ring `F_q[ε]/(ε^nil)`.
//!
//! Conventions. `Λ` uses the Teichmüller elements `1 − a t`, whose ghost
//! series is `−t d/dt log λ`. Under that ghost map `E(v, t^j)` has ghost
//! component `−j·w_i(v)` in degree `j p^i`, so `Πε(v) = ∏_j E(v_j, t^j)` is
//! additive, and it carries the product `v ⊠_j w := (−j)·(v ⊠ w)` on the
//! `j`-th factor to the ring multiplication of `Λ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{Ring, RingElement};
use crate::error::{Error, Result};
use crate::lambda::WittElement;
use crate::series::{MultiIndex, TruncatedSeries};

// ---------------------------------------------------------------------------
// Oracle route over the rationals

/// Ghost components `w_n = Σ_{i≤n} p^i x_i^{p^{n−i}}`.
pub fn ghost(v: &[BigRational], p: u32) -> Vec<BigRational> {
    let pb = BigInt::from(p);
    (0..v.len())
        .map(|n| {
            (0..=n).fold(BigRational::zero(), |acc, i| {
                let e = (p as usize).pow((n - i) as u32);
                acc + BigRational::from_integer(pb.pow(i as u32)) * v[i].pow(e as i32)
            })
        })
        .collect()
}

/// Inverse of [`ghost`], solving the triangular system.
pub fn from_ghost(w: &[BigRational], p: u32) -> Vec<BigRational> {
    let pb = BigInt::from(p);
    let mut x: Vec<BigRational> = Vec::with_capacity(w.len());
    for n in 0..w.len() {
        let mut rest = w[n].clone();
        for (i, xi) in x.iter().enumerate() {
            let e = (p as usize).pow((n - i) as u32);
            rest -= BigRational::from_integer(pb.pow(i as u32)) * xi.pow(e as i32);
        }
        x.push(rest / BigRational::from_integer(pb.pow(n as u32)));
    }
    x
}

/// Reduction `Z_(p) → F_p`.
pub fn reduce_mod_p(x: &BigRational, p: u32) -> Result<u32> {
    let pb = BigInt::from(p);
    if x.denom().is_multiple_of(&pb) {
        return Err(Error::NonIntegral(format!("{x} is not {p}-integral")));
    }
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let den_inv = den.modpow(&BigInt::from(p - 2), &pb);
    Ok((num * den_inv).mod_floor(&pb).to_u32().expect("residue fits"))
}

fn lift(v: &[u32]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

fn reduce_all(v: &[BigRational], p: u32) -> Result<Vec<u32>> {
    v.iter().map(|x| reduce_mod_p(x, p)).collect()
}

/// Witt addition over `F_p` through the ghost map, lifting entries to
/// `{0, …, p−1}`.
pub fn oracle_add(v: &[u32], w: &[u32], p: u32) -> Result<Vec<u32>> {
    let (gv, gw) = (ghost(&lift(v), p), ghost(&lift(w), p));
    let sum: Vec<BigRational> = gv.iter().zip(&gw).map(|(a, b)| a + b).collect();
    reduce_all(&from_ghost(&sum, p), p)
}

/// Witt multiplication over `F_p` through the ghost map.
pub fn oracle_mul(v: &[u32], w: &[u32], p: u32) -> Result<Vec<u32>> {
    let (gv, gw) = (ghost(&lift(v), p), ghost(&lift(w), p));
    let prod: Vec<BigRational> = gv.iter().zip(&gw).map(|(a, b)| a * b).collect();
    reduce_all(&from_ghost(&prod, p), p)
}

// ---------------------------------------------------------------------------
// Universal Witt polynomials

type Exps = Vec<u16>;

/// Integer polynomial with coefficients modulo a power of `p`.
#[derive(Clone, Debug)]
struct ModPoly {
    terms: HashMap<Exps, u64>,
}

impl ModPoly {
    fn zero() -> Self {
        ModPoly { terms: HashMap::new() }
    }

    fn monomial(nvars: usize, var: usize, exp: u16, coeff: u64, modulus: u64) -> Self {
        let mut e = vec![0u16; nvars];
        e[var] = exp;
        let mut p = Self::zero();
        if !coeff.is_multiple_of(modulus) {
            p.terms.insert(e, coeff % modulus);
        }
        p
    }

    fn add_assign(&mut self, other: &Self, scale: u64, modulus: u64) {
        for (e, &c) in &other.terms {
            let entry = self.terms.entry(e.clone()).or_insert(0);
            *entry = ((*entry as u128 + c as u128 * scale as u128) % modulus as u128) as u64;
        }
        self.terms.retain(|_, c| *c != 0);
    }

    fn mul(&self, other: &Self, modulus: u64) -> Self {
        let mut out: HashMap<Exps, u64> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let prod = (ca as u128 * cb as u128 % modulus as u128) as u64;
                let entry = out.entry(e).or_insert(0);
                *entry = (*entry + prod) % modulus;
            }
        }
        out.retain(|_, c| *c != 0);
        ModPoly { terms: out }
    }

    fn pow(&self, k: u64, nvars: usize, modulus: u64) -> Self {
        let mut acc = ModPoly { terms: HashMap::from([(vec![0u16; nvars], 1 % modulus)]) };
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, modulus);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, modulus);
            }
        }
        acc
    }

    /// Exact division by `p^n`; every coefficient must be divisible.
    fn divide(&self, pn: u64, modulus: u64) -> Result<Self> {
        let mut out = HashMap::new();
        for (e, &c) in &self.terms {
            if c % pn != 0 {
                return Err(Error::NonIntegral(format!("Witt polynomial coefficient {c} not divisible by {pn}")));
            }
            let q = c / pn;
            if !q.is_multiple_of(modulus / pn) {
                out.insert(e.clone(), q % (modulus / pn));
            }
        }
        Ok(ModPoly { terms: out })
    }

    fn reduce(&self, m: u64) -> Self {
        let mut out = HashMap::new();
        for (e, &c) in &self.terms {
            if c % m != 0 {
                out.insert(e.clone(), c % m);
            }
        }
        ModPoly { terms: out }
    }
}

/// Witt addition, multiplication and negation polynomials of length `m`,
/// reduced mod `p`. Variables `0..m` are the first argument, `m..2m` the
/// second.
#[derive(Debug)]
pub struct WittLaws {
    p: u32,
    m: usize,
    sum: Vec<Vec<(Exps, u32)>>,
    prod: Vec<Vec<(Exps, u32)>>,
    neg: Vec<Vec<(Exps, u32)>>,
}

type LawCache = Mutex<HashMap<(u32, usize), Arc<WittLaws>>>;

fn law_cache() -> &'static LawCache {
    static CACHE: OnceLock<LawCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Witt laws for `(p, m)`, computed on first use and shared afterwards.
pub fn witt_laws(p: u32, m: usize) -> Result<Arc<WittLaws>> {
    let mut cache = law_cache().lock().expect("law cache poisoned");
    if let Some(l) = cache.get(&(p, m)) {
        return Ok(l.clone());
    }
    let laws = Arc::new(WittLaws::compute(p, m)?);
    cache.insert((p, m), laws.clone());
    Ok(laws)
}

impl WittLaws {
    /// Solves `w_n(Φ) = target_n` recursively. All arithmetic is modulo
    /// `p^m`, which determines `Φ_n` modulo `p^{m−n}` and in particular mod p.
    fn solve<F>(p: u32, m: usize, nvars: usize, target: F) -> Result<Vec<ModPoly>>
    where
        F: Fn(usize) -> ModPoly,
    {
        let p64 = p as u64;
        let modulus = p64.pow(m as u32);
        let mut phis: Vec<ModPoly> = Vec::with_capacity(m);
        for n in 0..m {
            let mut numer = target(n);
            for (i, phi) in phis.iter().enumerate() {
                let power = phi.pow(p64.pow((n - i) as u32), nvars, modulus);
                numer.add_assign(&power, modulus - p64.pow(i as u32) % modulus, modulus);
            }
            phis.push(numer.divide(p64.pow(n as u32), modulus)?);
        }
        Ok(phis)
    }

    fn ghost_poly(p: u32, m: usize, nvars: usize, offset: usize, n: usize) -> ModPoly {
        let p64 = p as u64;
        let modulus = p64.pow(m as u32);
        let mut w = ModPoly::zero();
        for i in 0..=n {
            let e = p64.pow((n - i) as u32) as u16;
            w.add_assign(&ModPoly::monomial(nvars, offset + i, e, 1, modulus), p64.pow(i as u32), modulus);
        }
        w
    }

    fn compute(p: u32, m: usize) -> Result<Self> {
        if m == 0 {
            return Ok(WittLaws { p, m, sum: vec![], prod: vec![], neg: vec![] });
        }
        let modulus = (p as u64).pow(m as u32);
        let nv = 2 * m;
        let sum = Self::solve(p, m, nv, |n| {
            let mut w = Self::ghost_poly(p, m, nv, 0, n);
            w.add_assign(&Self::ghost_poly(p, m, nv, m, n), 1, modulus);
            w
        })?;
        let prod = Self::solve(p, m, nv, |n| {
            Self::ghost_poly(p, m, nv, 0, n).mul(&Self::ghost_poly(p, m, nv, m, n), modulus)
        })?;
        let neg = Self::solve(p, m, nv, |n| {
            let mut w = ModPoly::zero();
            w.add_assign(&Self::ghost_poly(p, m, nv, 0, n), modulus - 1, modulus);
            w
        })?;
        let finish = |polys: Vec<ModPoly>| -> Vec<Vec<(Exps, u32)>> {
            polys
                .into_iter()
                .map(|poly| {
                    let mut terms: Vec<(Exps, u32)> =
                        poly.reduce(p as u64).terms.into_iter().map(|(e, c)| (e, c as u32)).collect();
                    terms.sort();
                    terms
                })
                .collect()
        };
        Ok(WittLaws { p, m, sum: finish(sum), prod: finish(prod), neg: finish(neg) })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Number of monomials in the `n`-th addition polynomial mod p.
    pub fn sum_terms(&self, n: usize) -> usize {
        self.sum[n].len()
    }

    fn eval(ring: &Ring, polys: &[Vec<(Exps, u32)>], vars: &[RingElement]) -> Vec<RingElement> {
        let max_exp = polys
            .iter()
            .flat_map(|t| t.iter().flat_map(|(e, _)| e.iter().copied()))
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<RingElement>> = vars
            .iter()
            .map(|x| {
                let mut pw = Vec::with_capacity(max_exp + 1);
                pw.push(ring.one());
                for k in 1..=max_exp {
                    pw.push(ring.mul(&pw[k - 1], x));
                }
                pw
            })
            .collect();
        polys
            .iter()
            .map(|terms| {
                let mut acc = ring.zero();
                for (e, c) in terms {
                    let mut mon = ring.from_int(*c as i64);
                    for (v, &k) in e.iter().enumerate() {
                        if k > 0 {
                            mon = ring.mul(&mon, &powers[v][k as usize]);
                            if ring.is_zero(&mon) {
                                break;
                            }
                        }
                    }
                    ring.add_assign(&mut acc, &mon);
                }
                acc
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Witt vectors over F_q[ε]/(ε^nil)

/// Length-`m` p-typical Witt vector with entries in a ring of characteristic
/// `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PWittVector {
    ring: Ring,
    entries: Vec<RingElement>,
}

impl PWittVector {
    pub fn new(ring: &Ring, entries: Vec<RingElement>) -> Self {
        PWittVector { ring: ring.clone(), entries }
    }

    pub fn zero(ring: &Ring, m: usize) -> Self {
        Self::new(ring, vec![ring.zero(); m])
    }

    /// The multiplicative identity `(1, 0, …, 0)`.
    pub fn one(ring: &Ring, m: usize) -> Self {
        let mut v = Self::zero(ring, m);
        if m > 0 {
            v.entries[0] = ring.one();
        }
        v
    }

    /// Teichmüller representative `(x, 0, …, 0)`.
    pub fn teichmuller(ring: &Ring, x: RingElement, m: usize) -> Self {
        let mut v = Self::zero(ring, m);
        if m > 0 {
            v.entries[0] = x;
        }
        v
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.ring.is_zero(e))
    }

    /// Resized copy: truncated, or padded with zeros.
    pub fn resize(&self, m: usize) -> Self {
        let mut entries = self.entries.clone();
        entries.resize(m, self.ring.zero());
        Self::new(&self.ring, entries)
    }

    fn binary(&self, other: &Self, pick: impl Fn(&WittLaws) -> &[Vec<(Exps, u32)>]) -> Result<Self> {
        if self.ring != other.ring || self.len() != other.len() {
            return Err(Error::ShapeMismatch("Witt vectors of different shapes".into()));
        }
        let laws = witt_laws(self.p(), self.len())?;
        let vars: Vec<RingElement> = self.entries.iter().chain(&other.entries).cloned().collect();
        Ok(Self::new(&self.ring, WittLaws::eval(&self.ring, pick(&laws), &vars)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, |l| &l.sum)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, |l| &l.prod)
    }

    pub fn neg(&self) -> Result<Self> {
        let laws = witt_laws(self.p(), self.len())?;
        let mut vars = self.entries.clone();
        vars.extend(std::iter::repeat_n(self.ring.zero(), self.len()));
        Ok(Self::new(&self.ring, WittLaws::eval(&self.ring, &laws.neg, &vars)))
    }

    /// `k·v` in the additive group.
    pub fn scalar(&self, k: i64) -> Result<Self> {
        let mut acc = Self::zero(&self.ring, self.len());
        let mut base = if k < 0 { self.neg()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base)?;
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Artin–Hasse exponential

/// Coefficients `e_k` of `E(x,t) = exp(Σ_{i≥0} (xt)^{p^i}/p^i) = Σ e_k x^k t^k`
/// for `k < count`, over exact rationals, from the recursion
/// `k·e_k = Σ_{p^i ≤ k} e_{k−p^i}`.
pub fn artin_hasse_coefficients(p: u32, count: usize) -> Vec<BigRational> {
    let mut e: Vec<BigRational> = Vec::with_capacity(count);
    for k in 0..count {
        if k == 0 {
            e.push(BigRational::one());
            continue;
        }
        let mut acc = BigRational::zero();
        let mut pi = 1usize;
        while pi <= k {
            acc += &e[k - pi];
            pi *= p as usize;
        }
        e.push(acc / BigRational::from_integer(BigInt::from(k)));
    }
    e
}

/// Artin–Hasse coefficients reduced mod `p`; `NonIntegral` would indicate a
/// broken recursion since the series is p-integral.
pub fn artin_hasse_mod_p(p: u32, count: usize) -> Result<Vec<u32>> {
    artin_hasse_coefficients(p, count).iter().map(|c| reduce_mod_p(c, p)).collect()
}

fn ah_table(p: u32, count: usize) -> Result<Arc<Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<u32>>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().expect("poisoned");
    if let Some(t) = cache.get(&p) {
        if t.len() >= count {
            return Ok(t.clone());
        }
    }
    let t = Arc::new(artin_hasse_mod_p(p, count.max(32))?);
    cache.insert(p, t.clone());
    Ok(t)
}

/// `E(x, t^j) mod t^d` as a one-variable Witt element.
pub fn artin_hasse_exp(ring: &Ring, x: &RingElement, j: u32, d: u32) -> Result<WittElement> {
    if j == 0 {
        return Err(Error::InvalidArgument("exponent j must be positive".into()));
    }
    let count = ((d - 1) / j + 1) as usize;
    let table = ah_table(ring.p(), count)?;
    let mut terms = Vec::with_capacity(count);
    let mut xk = ring.one();
    for (k, &e) in table.iter().take(count).enumerate() {
        if k > 0 {
            xk = ring.mul(&xk, x);
            if ring.is_zero(&xk) {
                break;
            }
        }
        terms.push((MultiIndex::new(&[j * k as u32]), ring.mul_int(e as i64, &xk)));
    }
    WittElement::new(TruncatedSeries::from_terms(ring, 1, d, terms)?)
}

/// `E(x, 1) = Σ e_k x^k` for nilpotent `x`.
pub fn artin_hasse_at_one(ring: &Ring, x: &RingElement) -> Result<RingElement> {
    if !ring.is_nilpotent(x) {
        return Err(Error::NotNilpotent(ring.render(x)));
    }
    let table = ah_table(ring.p(), ring.nil() + 1)?;
    let mut acc = ring.zero();
    let mut xk = ring.one();
    for (k, &e) in table.iter().enumerate() {
        if k > 0 {
            xk = ring.mul(&xk, x);
        }
        if ring.is_zero(&xk) {
            break;
        }
        ring.add_assign(&mut acc, &ring.mul_int(e as i64, &xk));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Πε and the pairing

/// Length `⌈log_p(d/j)⌉ = #{i : j p^i < d}` of the `j`-th factor.
pub fn component_length(p: u32, j: u32, d: u32) -> usize {
    let mut len = 0;
    let mut jp = j as u64;
    while jp < d as u64 {
        len += 1;
        jp *= p as u64;
    }
    len
}

/// Indices `j < d` prime to `p`.
pub fn prime_to_p(p: u32, d: u32) -> Vec<u32> {
    (1..d).filter(|j| j % p != 0).collect()
}

/// `Πε((v_j)_j) = ∏_j E(v_j, t^j) = ∏_j ∏_i E(v_{j,i} t^{j p^i})` mod `t^d`.
pub fn pi_epsilon(ring: &Ring, family: &BTreeMap<u32, PWittVector>, d: u32) -> Result<WittElement> {
    let p = ring.p();
    let mut out = WittElement::zero(ring, 1, d);
    for (&j, v) in family {
        if j == 0 || j % p == 0 {
            return Err(Error::InvalidArgument(format!("index {j} is not prime to {p}")));
        }
        if v.ring() != ring {
            return Err(Error::ShapeMismatch("Witt vector over a different ring".into()));
        }
        let mut deg = j as u64;
        for x in v.entries() {
            if deg >= d as u64 {
                break;
            }
            if !ring.is_zero(x) {
                out = out.add(&artin_hasse_exp(ring, x, deg as u32, d)?)?;
            }
            deg *= p as u64;
        }
    }
    Ok(out)
}

/// Inverse of [`pi_epsilon`]: the coefficient of `t^{j p^i}` in the running
/// quotient is the next unknown `v_{j,i}`.
pub fn pi_epsilon_inverse(lambda: &WittElement) -> Result<BTreeMap<u32, PWittVector>> {
    if lambda.n() != 1 {
        return Err(Error::ShapeMismatch("Πε is one-variable".into()));
    }
    let ring = lambda.ring();
    let p = ring.p();
    let d = lambda.d();
    let mut family: BTreeMap<u32, PWittVector> = prime_to_p(p, d)
        .into_iter()
        .map(|j| (j, PWittVector::zero(ring, component_length(p, j, d))))
        .collect();
    let mut running = lambda.clone();
    for k in 1..d {
        let c = running.series().coeff(&MultiIndex::new(&[k]));
        if ring.is_zero(&c) {
            continue;
        }
        let (mut j, mut i) = (k, 0usize);
        while j % p == 0 {
            j /= p;
            i += 1;
        }
        family.get_mut(&j).expect("index listed").entries[i] = c.clone();
        running = running.sub(&artin_hasse_exp(ring, &c, k, d)?)?;
    }
    Ok(family)
}

/// The product on the `j`-th factor that `Πε` carries to the ring
/// multiplication of `Λ`: `v ⊠_j w = (−j)·(v ⊠ w)`.
pub fn twisted_mul(j: u32, v: &PWittVector, w: &PWittVector) -> Result<PWittVector> {
    v.mul(w)?.scalar(-(j as i64))
}

/// Length past which every component of `v ⊠ w` vanishes when `v` has `len`
/// nilpotent entries in a ring with `ε^nil = 0`: the `n`-th product
/// polynomial has degree at least `p^{n−len+1}` in the entries of `v`.
pub fn pairing_length(p: u32, len: usize, nil: usize) -> usize {
    let mut k = 0usize;
    let mut pk = 1usize;
    while pk < nil {
        pk *= p as usize;
        k += 1;
    }
    (len + k).saturating_sub(1).max(len)
}

/// The pairing `Ŵ × W → G_m`, `(v, w) ↦ E(v ⊠ w, 1)`, for `v` with nilpotent
/// entries. Entries of `w` past its length are taken to be zero.
pub fn pwitt_pair(v: &PWittVector, w: &PWittVector) -> Result<RingElement> {
    let ring = v.ring();
    if let Some(bad) = v.entries().iter().find(|x| !ring.is_nilpotent(x)) {
        return Err(Error::NotNilpotent(ring.render(bad)));
    }
    if w.ring() != ring {
        return Err(Error::ShapeMismatch("pairing arguments over different rings".into()));
    }
    let m = pairing_length(v.p(), v.len(), ring.nil()).max(w.len());
    let prod = v.resize(m).mul(&w.resize(m))?;
    let mut acc = ring.one();
    for x in prod.entries() {
        acc = ring.mul(&acc, &artin_hasse_at_one(ring, x)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn ghost_examples() {
        let v = [q(3), q(5)];
        assert_eq!(ghost(&v, 2), vec![q(3), q(9 + 10)]);
        assert!(ghost(&[q(0), q(0), q(0)], 3).iter().all(Zero::is_zero));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let p = [2u32, 3, 5][rng.gen_range(0..3)];
            let v: Vec<BigRational> = (0..3)
                .map(|_| BigRational::new(BigInt::from(rng.gen_range(-20..20)), BigInt::from(rng.gen_range(1..9))))
                .collect();
            assert_eq!(from_ghost(&ghost(&v, p), p), v);
        }
    }

    #[test]
    fn reduction_detects_denominators() {
        assert_eq!(reduce_mod_p(&BigRational::new(BigInt::from(1), BigInt::from(3)), 2).unwrap(), 1);
        assert!(matches!(reduce_mod_p(&BigRational::new(BigInt::from(1), BigInt::from(2)), 2), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn oracle_sum_example() {
        assert_eq!(oracle_add(&[1, 0], &[1, 0], 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn symbolic_laws_match_oracle_over_prime_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, m) in [(2u32, 4usize), (3, 3), (5, 2)] {
            let ring = Ring::with_order(p as u64, 1).unwrap();
            for _ in 0..60 {
                let v: Vec<u32> = (0..m).map(|_| rng.gen_range(0..p)).collect();
                let w: Vec<u32> = (0..m).map(|_| rng.gen_range(0..p)).collect();
                let vv = PWittVector::new(&ring, v.iter().map(|&x| ring.from_field(x)).collect());
                let ww = PWittVector::new(&ring, w.iter().map(|&x| ring.from_field(x)).collect());
                let to_u32 = |x: &PWittVector| -> Vec<u32> { x.entries().iter().map(|e| e.components()[0]).collect() };
                assert_eq!(to_u32(&vv.add(&ww).unwrap()), oracle_add(&v, &w, p).unwrap());
                assert_eq!(to_u32(&vv.mul(&ww).unwrap()), oracle_mul(&v, &w, p).unwrap());
                assert!(vv.add(&vv.neg().unwrap()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn witt_ring_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ring = Ring::with_order(4, 3).unwrap();
        for _ in 0..40 {
            let v = PWittVector::new(&ring, (0..3).map(|_| ring.random(&mut rng)).collect());
            let w = PWittVector::new(&ring, (0..3).map(|_| ring.random(&mut rng)).collect());
            assert_eq!(v.add(&PWittVector::zero(&ring, 3)).unwrap(), v);
            assert_eq!(v.mul(&PWittVector::one(&ring, 3)).unwrap(), v);
            assert_eq!(v.add(&w).unwrap(), w.add(&v).unwrap());
            assert_eq!(v.mul(&w).unwrap(), w.mul(&v).unwrap());
            assert_eq!(v.scalar(3).unwrap(), v.add(&v).unwrap().add(&v).unwrap());
            assert!(v.scalar(-2).unwrap().add(&v.scalar(2).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn artin_hasse_low_terms() {
        let e = artin_hasse_coefficients(2, 3);
        assert_eq!(e, vec![q(1), q(1), q(1)]);
        for p in [2, 3, 5] {
            assert!(artin_hasse_mod_p(p, 16).is_ok());
        }
        let ring = Ring::with_order(2, 1).unwrap();
        assert!(artin_hasse_exp(&ring, &ring.zero(), 1, 6).unwrap().is_zero());
        let x = ring.one();
        let e1 = artin_hasse_exp(&ring, &x, 1, 2).unwrap();
        assert_eq!(e1.series().coeff(&MultiIndex::new(&[1])), x);
    }

    #[test]
    fn pi_epsilon_single_factor_and_empty() {
        let ring = Ring::with_order(3, 1).unwrap();
        let x = ring.from_int(2);
        let fam = BTreeMap::from([(1u32, PWittVector::teichmuller(&ring, x.clone(), 2))]);
        assert_eq!(pi_epsilon(&ring, &fam, 7).unwrap(), artin_hasse_exp(&ring, &x, 1, 7).unwrap());
        assert!(pi_epsilon(&ring, &BTreeMap::new(), 7).unwrap().is_zero());
    }

    #[test]
    fn pi_epsilon_round_trip_and_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (q, d) in [(2u64, 8u32), (3, 9), (4, 6), (5, 7)] {
            let ring = Ring::with_order(q, 1).unwrap();
            for _ in 0..60 {
                let l = WittElement::random(&ring, 1, d, &mut rng);
                let m = WittElement::random(&ring, 1, d, &mut rng);
                let fl = pi_epsilon_inverse(&l).unwrap();
                assert_eq!(pi_epsilon(&ring, &fl, d).unwrap(), l);
                let fm = pi_epsilon_inverse(&m).unwrap();
                let sum: BTreeMap<u32, PWittVector> =
                    fl.iter().map(|(j, v)| (*j, v.add(&fm[j]).unwrap())).collect();
                assert_eq!(pi_epsilon(&ring, &sum, d).unwrap(), l.add(&m).unwrap());
            }
        }
    }

    #[test]
    fn pi_epsilon_carries_twisted_product_to_ring_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (q, d) in [(2u64, 8u32), (3, 8), (4, 5)] {
            let ring = Ring::with_order(q, 1).unwrap();
            for _ in 0..40 {
                let l = WittElement::random(&ring, 1, d, &mut rng);
                let m = WittElement::random(&ring, 1, d, &mut rng);
                let (fl, fm) = (pi_epsilon_inverse(&l).unwrap(), pi_epsilon_inverse(&m).unwrap());
                let prod: BTreeMap<u32, PWittVector> =
                    fl.iter().map(|(j, v)| (*j, twisted_mul(*j, v, &fm[j]).unwrap())).collect();
                assert_eq!(pi_epsilon(&ring, &prod, d).unwrap(), l.mul_1var(&m).unwrap());
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let ring = Ring::with_order(2, 2).unwrap();
        let b = ring.one();
        let w = PWittVector::teichmuller(&ring, b.clone(), 2);
        assert_eq!(pwitt_pair(&PWittVector::zero(&ring, 2), &w).unwrap(), ring.one());
        let v = PWittVector::teichmuller(&ring, ring.eps(), 2);
        assert_eq!(pwitt_pair(&v, &w).unwrap(), ring.add(&ring.one(), &ring.mul(&ring.eps(), &b)));
        assert!(matches!(pwitt_pair(&w, &w), Err(Error::NotNilpotent(_))));
    }

    #[test]
    fn pairing_is_additive_in_first_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for (q, nil) in [(2u64, 3usize), (3, 2), (4, 2)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..40 {
                let v = PWittVector::new(&ring, (0..3).map(|_| ring.random_nilpotent(&mut rng)).collect());
                let v2 = PWittVector::new(&ring, (0..3).map(|_| ring.random_nilpotent(&mut rng)).collect());
                let w = PWittVector::new(&ring, (0..3).map(|_| ring.from_field(rng.gen_range(0..q as u32))).collect());
                let long = pairing_length(ring.p(), 3, nil);
                let sum = v.resize(long).add(&v2.resize(long)).unwrap();
                let lhs = pwitt_pair(&sum, &w).unwrap();
                let rhs = ring.mul(&pwitt_pair(&v, &w).unwrap(), &pwitt_pair(&v2, &w).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }
}
