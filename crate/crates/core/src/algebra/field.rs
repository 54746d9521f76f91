//! Finite fields `F_q = F_p[x]/(f)` with table-driven arithmetic.
//!
//! Elements are `u32` indices: the base-`p` digits of the index are the
//! coordinates of the element in the power basis `1, x, …, x^{e-1}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order for which log/antilog tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Conway polynomials for the small fields used by default.
const BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (3, 1, &[1, 1]),
    (5, 1, &[3, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
];

/// Description of `F_q` as `F_p[x]/(modulus)`; the modulus is monic,
/// irreducible and stored in ascending coefficient order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Decomposes `q = p^e`, returning `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q.is_multiple_of(*k))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

// Dense polynomial helpers over F_p on ascending coefficient vectors.

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    fp_pow(a, p - 2, p)
}

fn fp_pow(a: u32, mut k: u32, p: u32) -> u32 {
    let (mut base, mut acc) = (a as u64 % p as u64, 1u64);
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                g.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldDesc {
    /// Validates a user-supplied description.
    pub fn new(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {e}, got {modulus:?}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in [0, p)".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField(format!("{modulus:?} is reducible over F_{p}")));
        }
        Ok(FieldDesc { p, e, modulus })
    }

    /// The default description of `F_q`: a built-in Conway polynomial when
    /// one is tabulated, otherwise the first irreducible monic polynomial in
    /// the order of its coefficient digits.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if let Some((_, _, m)) = BUILTIN_MODULI.iter().find(|(bp, be, _)| *bp == p && *be == e) {
            return FieldDesc::new(p, e, m.to_vec());
        }
        let count = (p as u64).pow(e);
        for idx in 0..count {
            let mut m = Vec::with_capacity(e as usize + 1);
            let mut rest = idx;
            for _ in 0..e {
                m.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            m.push(1);
            if m[0] != 0 && is_irreducible(&m, p) {
                return Ok(FieldDesc { p, e, modulus: m });
            }
        }
        Err(Error::InvalidField(format!("no irreducible polynomial of degree {e} over F_{p}")))
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

struct FieldInner {
    desc: FieldDesc,
    q: u32,
    /// `exp[k] = g^k` for `k < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`.
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// Shared handle to a finite field with precomputed tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.desc == other.inner.desc
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.desc.hash(state)
    }
}

fn digits(mut a: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn digit_add(a: u32, b: u32, p: u32, e: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b, mut out, mut scale) = (a, b, 0, 1);
    for _ in 0..e {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn digit_neg(a: u32, p: u32, e: u32) -> u32 {
    let (mut a, mut out, mut scale) = (a, 0, 1);
    for _ in 0..e {
        out += ((p - a % p) % p) * scale;
        a /= p;
        scale *= p;
    }
    out
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
        }
    }
    fp_rem(&prod, modulus, p)
}

impl Field {
    pub fn new(desc: FieldDesc) -> Result<Self> {
        let q64 = desc.order();
        if q64 > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q64));
        }
        let (p, e, q) = (desc.p, desc.e, q64 as u32);
        let to_vec = |a: u32| {
            let mut v = digits(a, p, e);
            fp_trim(&mut v);
            v
        };
        let from_vec = |v: &[u32]| {
            let mut full = v.to_vec();
            full.resize(e as usize, 0);
            undigits(&full, p)
        };
        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let gv = to_vec(g);
            let mut cur = 1u32;
            let mut ok = true;
            for k in 0..(q - 1) {
                if k > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                exp[k as usize] = cur;
                log[cur as usize] = k;
                cur = from_vec(&poly_mulmod(&to_vec(cur), &gv, &desc.modulus, p));
            }
            if ok && cur == 1 {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::InvalidField("no primitive element found".into()));
        }
        for k in (q - 1) as usize..exp.len() {
            exp[k] = exp[k - (q as usize - 1)];
        }
        let add = (q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b, p, e);
                }
            }
            t
        });
        let neg = (0..q).map(|a| digit_neg(a, p, e)).collect();
        Ok(Field { inner: Arc::new(FieldInner { desc, q, exp, log, add, neg }) })
    }

    /// Field of order `q` with the default modulus.
    pub fn of_order(q: u64) -> Result<Self> {
        Field::new(FieldDesc::for_order(q)?)
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.inner.desc
    }

    pub fn p(&self) -> u32 {
        self.inner.desc.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.desc.e
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.inner.add {
            Some(t) => t[(a * self.inner.q + b) as usize],
            None => digit_add(a, b, self.p(), self.degree()),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let i = &self.inner;
        i.exp[(i.log[a as usize] + i.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::NonUnit);
        }
        let i = &self.inner;
        Ok(i.exp[((i.q - 1 - i.log[a as usize]) % (i.q - 1)) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let i = &self.inner;
        let order = (i.q - 1) as u64;
        i.exp[((i.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p() as i64) as u32
    }

    /// Coordinates over `F_p` in the power basis.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        digits(a, self.p(), self.degree())
    }

    pub fn from_coords(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.degree() as usize || c.iter().any(|&d| d >= self.p()) {
            return Err(Error::Parse(format!("bad field coordinates {c:?} for {self:?}")));
        }
        Ok(undigits(c, self.p()))
    }

    /// The class of `x` in `F_p[x]/(f)`.
    pub fn generator(&self) -> u32 {
        if self.degree() == 1 {
            // F_p[x]/(x - a) sends x to a.
            self.neg(self.inner.desc.modulus[0])
        } else {
            self.p()
        }
    }

    /// Embeds this field into `big`, sending the generator to the smallest
    /// root of this field's modulus found in `big`.
    pub fn embed_into(&self, big: &Field) -> Result<Embedding> {
        if big.p() != self.p() || !big.degree().is_multiple_of(self.degree()) {
            return Err(Error::InvalidArgument(format!("{self:?} does not embed into {big:?}")));
        }
        let modulus = &self.inner.desc.modulus;
        let eval = |x: u32| {
            modulus.iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, x), c))
        };
        let root = (0..big.order())
            .find(|&x| eval(x) == 0)
            .ok_or_else(|| Error::InvalidField("modulus has no root in the extension".into()))?;
        let image = (0..self.order())
            .map(|a| {
                self.coords(a)
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &c| big.add(big.mul(acc, root), c))
            })
            .collect();
        Ok(Embedding { small: self.clone(), big: big.clone(), image })
    }

    /// `F_{q^s}` for this field `F_q`, together with the embedding.
    pub fn extension(&self, s: u32) -> Result<Embedding> {
        let big = Field::of_order((self.order() as u64).pow(s))?;
        self.embed_into(&big)
    }
}

/// A field embedding `F_q -> F_{q^s}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub small: Field,
    pub big: Field,
    image: Vec<u32>,
}

impl Embedding {
    pub fn map(&self, a: u32) -> u32 {
        self.image[a as usize]
    }

    /// Preimage of `b`, if `b` lies in the image.
    pub fn preimage(&self, b: u32) -> Option<u32> {
        self.image.iter().position(|&x| x == b).map(|i| i as u32)
    }
}
