//! The big Witt vectors `Λⁿ(R) = 1 + (t₁,…,t_n)R[[t]]` modulo total degree
//! `d`: the additive group law, Witt coordinates, the decomposition into
//! one-variable components indexed by primitive multi-indices, the ring
//! multiplication, Frobenius and the Lang map.
//!
//! The group law of `Λⁿ` is multiplication of power series, so "addition"
//! below always means series multiplication and the additive zero is the
//! series `1`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rand::Rng;

use crate::algebra::{Ring, RingElement};
use crate::error::{Error, Result};
use crate::series::{monomials, MultiIndex, TruncatedSeries};

/// An element of `Λⁿ(R)` mod degree `d`: a series with constant term 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittElement {
    series: TruncatedSeries,
}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ[{:?}]", self.series)
    }
}

/// The family `{r_ν}` with `λ = ∏_ν (1 − r_ν t^ν)`; zero entries are not
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittCoordinates {
    ring: Ring,
    n: usize,
    d: u32,
    coords: BTreeMap<MultiIndex, RingElement>,
}

/// One-variable components `λ_ν(s)`, `s = t^ν`, for every primitive `ν`
/// with `|ν| < d`; the component at `ν` is truncated below `s^⌈d/|ν|⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVarComponentFamily {
    n: usize,
    d: u32,
    components: BTreeMap<MultiIndex, WittElement>,
}

/// Primitive multi-indices with `0 < |ν| < d`, ascending.
pub fn primitive_indices(n: usize, d: u32) -> Vec<MultiIndex> {
    monomials(n, d).into_iter().filter(MultiIndex::is_primitive).collect()
}

/// Truncation bound `⌈d/|ν|⌉` of the component at `ν`.
pub fn component_bound(d: u32, nu: &MultiIndex) -> u32 {
    d.div_ceil(nu.total())
}

impl WittCoordinates {
    pub fn new(ring: &Ring, n: usize, d: u32, coords: BTreeMap<MultiIndex, RingElement>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (m, r) in coords {
            if m.n() != n || m.is_zero() || m.total() >= d {
                return Err(Error::ShapeMismatch(format!("coordinate index {m:?} outside 0 < |ν| < {d}")));
            }
            if !ring.is_zero(&r) {
                clean.insert(m, r);
            }
        }
        Ok(WittCoordinates { ring: ring.clone(), n, d, coords: clean })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn coords(&self) -> &BTreeMap<MultiIndex, RingElement> {
        &self.coords
    }

    pub fn get(&self, m: &MultiIndex) -> RingElement {
        self.coords.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }
}

impl WittElement {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if !series.ring().is_one(&series.constant_term()) {
            return Err(Error::InvalidArgument(format!(
                "big Witt vector needs constant term 1, got {}",
                series.ring().render(&series.constant_term())
            )));
        }
        Ok(WittElement { series })
    }

    /// The additive zero, i.e. the series `1`.
    pub fn zero(ring: &Ring, n: usize, d: u32) -> Self {
        WittElement { series: TruncatedSeries::one(ring, n, d) }
    }

    /// `1 − r·t^ν`.
    pub fn binomial(ring: &Ring, n: usize, d: u32, r: &RingElement, nu: &MultiIndex) -> Self {
        WittElement { series: TruncatedSeries::one(ring, n, d).mul_binomial(r, nu) }
    }

    /// Multiplicative identity `∏_{ν primitive, |ν|<d} (1 − t^ν)`; in one
    /// variable this is `1 − t`.
    pub fn unit(ring: &Ring, n: usize, d: u32) -> Self {
        let coords = primitive_indices(n, d).into_iter().map(|m| (m, ring.one())).collect();
        Self::from_coordinates(&WittCoordinates { ring: ring.clone(), n, d, coords })
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(ring: &Ring, n: usize, d: u32, rng: &mut R) -> Self {
        let mut terms: Vec<(MultiIndex, RingElement)> =
            monomials(n, d).into_iter().map(|m| (m, ring.random(rng))).collect();
        terms.push((MultiIndex::zero(n), ring.one()));
        WittElement { series: TruncatedSeries::from_terms(ring, n, d, terms).expect("shape") }
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn into_series(self) -> TruncatedSeries {
        self.series
    }

    pub fn ring(&self) -> &Ring {
        self.series.ring()
    }

    pub fn n(&self) -> usize {
        self.series.n()
    }

    pub fn d(&self) -> u32 {
        self.series.d()
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_one()
    }

    /// Group law: product of power series.
    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(WittElement { series: self.series.mul(&other.series)? })
    }

    pub fn neg(&self) -> Self {
        WittElement { series: self.series.inv().expect("constant term 1 is a unit") }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `k·λ = λ^k` in the group law, for any integer `k`.
    pub fn scalar(&self, k: i64) -> Self {
        let pos = WittElement { series: self.series.pow(k.unsigned_abs()).expect("shape") };
        if k < 0 {
            pos.neg()
        } else {
            pos
        }
    }

    pub fn truncate(&self, d: u32) -> Self {
        WittElement { series: self.series.truncate(d) }
    }

    /// Same series viewed at a larger truncation bound, unknown coefficients
    /// set to zero.
    pub fn extend(&self, d: u32) -> Self {
        WittElement { series: self.series.extend(d) }
    }

    /// Reads off `r_ν` in graded-lex order, dividing each factor out of the
    /// running series.
    pub fn coordinates(&self) -> WittCoordinates {
        let ring = self.ring();
        let mut running = self.series.clone();
        let mut coords = BTreeMap::new();
        for nu in monomials(self.n(), self.d()) {
            let c = running.coeff(&nu);
            if ring.is_zero(&c) {
                continue;
            }
            let r = ring.neg(&c);
            running = running.div_binomial(&r, &nu);
            coords.insert(nu, r);
        }
        WittCoordinates { ring: ring.clone(), n: self.n(), d: self.d(), coords }
    }

    /// Ordered product `∏ (1 − r_ν t^ν)`, factors in graded-lex order.
    pub fn from_coordinates(c: &WittCoordinates) -> Self {
        let mut s = TruncatedSeries::one(&c.ring, c.n, c.d);
        for (nu, r) in &c.coords {
            s = s.mul_binomial(r, nu);
        }
        WittElement { series: s.with_exact(false) }
    }

    /// Regroups the coordinates by primitive direction:
    /// `∏_ν (1 − r_ν t^ν) = ∏_{ν primitive} ∏_i (1 − r_{iν} s^i)`.
    pub fn decompose(&self) -> OneVarComponentFamily {
        let ring = self.ring();
        let coords = self.coordinates();
        let mut per: BTreeMap<MultiIndex, BTreeMap<MultiIndex, RingElement>> =
            primitive_indices(self.n(), self.d()).into_iter().map(|m| (m, BTreeMap::new())).collect();
        for (nu, r) in coords.coords {
            let (prim, i) = nu.primitive_part();
            per.get_mut(&prim).expect("primitive index listed").insert(MultiIndex::new(&[i]), r);
        }
        let components = per
            .into_iter()
            .map(|(prim, cs)| {
                let bound = component_bound(self.d(), &prim);
                let wc = WittCoordinates { ring: ring.clone(), n: 1, d: bound, coords: cs };
                (prim, WittElement::from_coordinates(&wc))
            })
            .collect();
        OneVarComponentFamily { n: self.n(), d: self.d(), components }
    }

    /// Ring multiplication on `Λ = Λ¹`:
    /// `∏(1 − a_i t^i) * ∏(1 − b_j t^j) = ∏_{i,j} (1 − a_i^{j/g} b_j^{i/g} t^{ij/g})^g`,
    /// `g = gcd(i, j)`.
    pub fn mul_1var(&self, other: &Self) -> Result<Self> {
        if self.n() != 1 || other.n() != 1 {
            return Err(Error::ShapeMismatch("ring multiplication formula is one-variable".into()));
        }
        if self.d() != other.d() || self.ring() != other.ring() {
            return Err(Error::ShapeMismatch(format!("d = {} vs d = {}", self.d(), other.d())));
        }
        let a = self.coordinates();
        let b = other.coordinates();
        Ok(Self::mul_coordinates_1var(&a, &b))
    }

    pub(crate) fn mul_coordinates_1var(a: &WittCoordinates, b: &WittCoordinates) -> Self {
        let ring = &a.ring;
        let d = a.d;
        let mut s = TruncatedSeries::one(ring, 1, d);
        for (mi, ai) in &a.coords {
            let i = mi.exponents()[0];
            for (mj, bj) in &b.coords {
                let j = mj.exponents()[0];
                let g = i.gcd(&j);
                let l = i / g * j;
                if l >= d {
                    continue;
                }
                let c = ring.mul(&ring.pow(ai, (j / g) as u64), &ring.pow(bj, (i / g) as u64));
                if ring.is_zero(&c) {
                    continue;
                }
                let lm = MultiIndex::new(&[l]);
                for _ in 0..g {
                    s = s.mul_binomial(&c, &lm);
                }
            }
        }
        WittElement { series: s.with_exact(false) }
    }

    /// Ring multiplication on `Λⁿ`, transported componentwise through the
    /// decomposition.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() || self.d() != other.d() || self.ring() != other.ring() {
            return Err(Error::ShapeMismatch("Witt multiplication needs equal shapes".into()));
        }
        if self.n() == 1 {
            return self.mul_1var(other);
        }
        let a = self.decompose();
        let b = other.decompose();
        let components = a
            .components
            .iter()
            .map(|(nu, x)| Ok((nu.clone(), x.mul_1var(&b.components[nu])?)))
            .collect::<Result<_>>()?;
        Ok(OneVarComponentFamily { n: self.n(), d: self.d(), components }.recompose())
    }

    /// Coefficient-wise `x ↦ x^q`; coefficients must lie in a field.
    pub fn frobenius(&self, q: u64) -> Result<Self> {
        let ring = self.ring();
        if ring.nil() != 1 {
            return Err(Error::NilpotentCoefficients);
        }
        Ok(WittElement { series: self.series.map_coeffs(ring, |c| ring.frobenius(c, q)) })
    }

    /// `℘(λ) = Frob_q(λ) − λ`, written multiplicatively as `Frob_q(λ)·λ⁻¹`.
    pub fn lang_map(&self, q: u64) -> Result<Self> {
        self.frobenius(q)?.sub(self)
    }
}

impl OneVarComponentFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn components(&self) -> &BTreeMap<MultiIndex, WittElement> {
        &self.components
    }

    pub fn component(&self, nu: &MultiIndex) -> Option<&WittElement> {
        self.components.get(nu)
    }

    /// Builds a family from explicit components, checking the index set and
    /// truncation bounds.
    pub fn from_components(n: usize, d: u32, components: BTreeMap<MultiIndex, WittElement>) -> Result<Self> {
        let expected = primitive_indices(n, d);
        if components.keys().ne(expected.iter()) {
            return Err(Error::ShapeMismatch("components must be indexed by all primitive ν with |ν| < d".into()));
        }
        for (nu, c) in &components {
            if c.n() != 1 || c.d() != component_bound(d, nu) {
                return Err(Error::ShapeMismatch(format!("component at {nu:?} has the wrong shape")));
            }
        }
        Ok(OneVarComponentFamily { n, d, components })
    }

    /// Inverse of [`WittElement::decompose`].
    pub fn recompose(&self) -> WittElement {
        let ring = self.components.values().next().map(|c| c.ring().clone());
        let Some(ring) = ring else {
            panic!("component family is never empty for d >= 2");
        };
        let mut coords = BTreeMap::new();
        for (prim, comp) in &self.components {
            for (mi, r) in comp.coordinates().coords {
                let i = mi.exponents()[0];
                coords.insert(prim.scale(i), r);
            }
        }
        WittElement::from_coordinates(&WittCoordinates { ring, n: self.n, d: self.d, coords })
    }

    /// Componentwise group law.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::ShapeMismatch("component families of different shapes".into()));
        }
        let components = self
            .components
            .iter()
            .map(|(nu, x)| Ok((nu.clone(), x.add(&other.components[nu])?)))
            .collect::<Result<_>>()?;
        Ok(OneVarComponentFamily { n: self.n, d: self.d, components })
    }
}
