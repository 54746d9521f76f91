//! The coefficient rings `R = F_q[ε]/(ε^nil)`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::field::{Field, FieldDesc};
use crate::error::{Error, Result};

/// JSON form: `{"p":2,"e":2,"modulus":[1,1,1],"nil":2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDesc {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub nil: u32,
}

impl RingDesc {
    pub fn field(&self) -> FieldDesc {
        FieldDesc { p: self.p, e: self.e, modulus: self.modulus.clone() }
    }
}

/// Element of `F_q[ε]/(ε^nil)`: one field element per power of `ε`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(pub(crate) SmallVec<[u32; 4]>);

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl RingElement {
    /// The `ε^k`-components, as field element indices.
    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// ε-adic valuation (`None` for zero).
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }
}

struct RingInner {
    field: Field,
    nil: usize,
}

/// Shared handle to a ring `F_q[ε]/(ε^nil)`; `nil = 1` is the field itself.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingInner>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nil() == 1 {
            write!(f, "{:?}", self.field())
        } else {
            write!(f, "{:?}[ε]/(ε^{})", self.field(), self.nil())
        }
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.nil == other.inner.nil && self.inner.field == other.inner.field)
    }
}

impl Eq for Ring {}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.field.hash(state);
        self.inner.nil.hash(state);
    }
}

impl Ring {
    pub fn new(field: Field, nil: usize) -> Result<Self> {
        if nil == 0 {
            return Err(Error::InvalidArgument("nilpotency index must be at least 1".into()));
        }
        Ok(Ring { inner: Arc::new(RingInner { field, nil }) })
    }

    pub fn from_desc(desc: &RingDesc) -> Result<Self> {
        let fd = FieldDesc::new(desc.p, desc.e, desc.modulus.clone())?;
        Ring::new(Field::new(fd)?, desc.nil as usize)
    }

    /// `F_q[ε]/(ε^nil)` with the default modulus for `F_q`.
    pub fn with_order(q: u64, nil: usize) -> Result<Self> {
        Ring::new(Field::of_order(q)?, nil)
    }

    pub fn desc(&self) -> RingDesc {
        let f = self.field().desc();
        RingDesc { p: f.p, e: f.e, modulus: f.modulus.clone(), nil: self.nil() as u32 }
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn nil(&self) -> usize {
        self.inner.nil
    }

    pub fn p(&self) -> u32 {
        self.field().p()
    }

    /// The same residue field with `ε` removed.
    pub fn residue_ring(&self) -> Ring {
        if self.nil() == 1 {
            return self.clone();
        }
        Ring { inner: Arc::new(RingInner { field: self.field().clone(), nil: 1 }) }
    }

    /// The same residue field with nilpotency index `nil`.
    pub fn with_nil(&self, nil: usize) -> Result<Ring> {
        if nil == self.nil() {
            return Ok(self.clone());
        }
        Ring::new(self.field().clone(), nil)
    }

    /// Number of elements, `q^nil`.
    pub fn size(&self) -> u128 {
        (self.field().order() as u128).pow(self.nil() as u32)
    }

    pub fn zero(&self) -> RingElement {
        RingElement(SmallVec::from_elem(0, self.nil()))
    }

    pub fn one(&self) -> RingElement {
        self.from_field(1)
    }

    pub fn from_field(&self, a: u32) -> RingElement {
        let mut v = SmallVec::from_elem(0, self.nil());
        v[0] = a;
        RingElement(v)
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        self.from_field(self.field().from_int(n))
    }

    /// `a·ε^k`.
    pub fn monomial(&self, a: u32, k: usize) -> RingElement {
        let mut v = SmallVec::from_elem(0, self.nil());
        if k < self.nil() {
            v[k] = a;
        }
        RingElement(v)
    }

    pub fn eps(&self) -> RingElement {
        self.monomial(1, 1)
    }

    pub fn from_components(&self, comps: &[u32]) -> Result<RingElement> {
        if comps.len() != self.nil() || comps.iter().any(|&c| c >= self.field().order()) {
            return Err(Error::Parse(format!("bad ring element {comps:?} for {self:?}")));
        }
        Ok(RingElement(SmallVec::from_slice(comps)))
    }

    /// Element `i` in the enumeration `0..size()`.
    pub fn element(&self, mut i: u128) -> RingElement {
        let q = self.field().order() as u128;
        let v = (0..self.nil())
            .map(|_| {
                let c = (i % q) as u32;
                i /= q;
                c
            })
            .collect();
        RingElement(v)
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let q = self.field().order();
        RingElement((0..self.nil()).map(|_| rng.gen_range(0..q)).collect())
    }

    /// Uniform element of the maximal ideal `εR`.
    pub fn random_nilpotent<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let mut a = self.random(rng);
        a.0[0] = 0;
        a
    }

    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let mut a = self.random(rng);
        a.0[0] = rng.gen_range(1..self.field().order());
        a
    }

    pub fn is_zero(&self, a: &RingElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &RingElement) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self, a: &RingElement) -> bool {
        a.0[0] != 0
    }

    pub fn is_nilpotent(&self, a: &RingElement) -> bool {
        a.0[0] == 0
    }

    /// Whether `a` lies in the residue field `F_q ⊂ R`.
    pub fn is_scalar(&self, a: &RingElement) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    /// Smallest `k ≥ 1` with `a^k = 0`, or `None` when `a` is not nilpotent.
    pub fn nilpotency_index(&self, a: &RingElement) -> Option<usize> {
        if !self.is_nilpotent(a) {
            return None;
        }
        match a.valuation() {
            None => Some(1),
            Some(v) => Some(self.nil().div_ceil(v)),
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = self.field();
        RingElement(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect())
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = self.field();
        RingElement(a.0.iter().zip(&b.0).map(|(&x, &y)| f.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        let f = self.field();
        RingElement(a.0.iter().map(|&x| f.neg(x)).collect())
    }

    pub fn add_assign(&self, a: &mut RingElement, b: &RingElement) {
        let f = self.field();
        for (x, &y) in a.0.iter_mut().zip(&b.0) {
            *x = f.add(*x, y);
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let f = self.field();
        let n = self.nil();
        if n == 1 {
            return RingElement(SmallVec::from_elem(f.mul(a.0[0], b.0[0]), 1));
        }
        let mut out: SmallVec<[u32; 4]> = SmallVec::from_elem(0, n);
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                if b.0[j] != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a.0[i], b.0[j]));
                }
            }
        }
        RingElement(out)
    }

    /// Multiplication by a residue-field scalar.
    pub fn scale(&self, c: u32, a: &RingElement) -> RingElement {
        let f = self.field();
        RingElement(a.0.iter().map(|&x| f.mul(c, x)).collect())
    }

    /// Multiplication by an integer.
    pub fn mul_int(&self, n: i64, a: &RingElement) -> RingElement {
        self.scale(self.field().from_int(n), a)
    }

    pub fn pow(&self, a: &RingElement, mut k: u64) -> RingElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Inverse of a unit `u = c(1 + m)` with `m` nilpotent, via the finite
    /// geometric series `c⁻¹ Σ (−m)^k`.
    pub fn inv(&self, a: &RingElement) -> Result<RingElement> {
        let f = self.field();
        let c_inv = f.inv(a.0[0])?;
        let normalized = self.scale(c_inv, a);
        let mut m = normalized;
        m.0[0] = 0;
        let neg_m = self.neg(&m);
        let mut sum = self.one();
        let mut term = self.one();
        for _ in 1..self.nil() {
            term = self.mul(&term, &neg_m);
            self.add_assign(&mut sum, &term);
        }
        Ok(self.scale(c_inv, &sum))
    }

    /// `a ↦ a^q` applied by iterating the `p`-power map.
    pub fn frobenius(&self, a: &RingElement, q: u64) -> RingElement {
        let p = self.p() as u64;
        let mut out = a.clone();
        let mut k = 1;
        while k < q {
            out = self.pow(&out, p);
            k *= p;
        }
        out
    }

    /// Textual form: `[[c00,…],[c10,…]]`, ε-degree major, field basis minor.
    pub fn to_nested(&self, a: &RingElement) -> Vec<Vec<u32>> {
        a.0.iter().map(|&c| self.field().coords(c)).collect()
    }

    pub fn from_nested(&self, rows: &[Vec<u32>]) -> Result<RingElement> {
        if rows.len() > self.nil() {
            return Err(Error::Parse(format!(
                "element has {} ε-components but nil = {}",
                rows.len(),
                self.nil()
            )));
        }
        let mut v: SmallVec<[u32; 4]> = SmallVec::from_elem(0, self.nil());
        for (k, row) in rows.iter().enumerate() {
            v[k] = self.field().from_coords(row)?;
        }
        Ok(RingElement(v))
    }

    /// Human-readable rendering such as `1+εα`.
    pub fn render(&self, a: &RingElement) -> String {
        let f = self.field();
        let mut parts = Vec::new();
        for (k, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coeff = if f.degree() == 1 {
                c.to_string()
            } else {
                let cs = f.coords(c);
                let mut terms = Vec::new();
                for (i, &d) in cs.iter().enumerate() {
                    if d == 0 {
                        continue;
                    }
                    let mon = match i {
                        0 => String::new(),
                        1 => "x".to_string(),
                        _ => format!("x^{i}"),
                    };
                    terms.push(match (d, mon.is_empty()) {
                        (_, true) => d.to_string(),
                        (1, false) => mon,
                        (_, false) => format!("{d}{mon}"),
                    });
                }
                if terms.len() > 1 && k > 0 {
                    format!("({})", terms.join("+"))
                } else {
                    terms.join("+")
                }
            };
            let eps = match k {
                0 => String::new(),
                1 => "ε".to_string(),
                _ => format!("ε^{k}"),
            };
            parts.push(if k == 0 {
                coeff
            } else if coeff == "1" {
                eps
            } else {
                format!("{coeff}{eps}")
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}
