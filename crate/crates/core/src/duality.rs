//! The formal group `Λ̂ⁿ` of polynomial units and its Cartier pairing with
//! `Λⁿ`, computed three ways: the ring multiplication of `Λ` followed by
//! evaluation at `t = 1`, a resultant against the zeros of `g`, and the
//! p-typical route through `Πε`.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::algebra::{resultant, roots_with_multiplicity, Embedding, Ring, RingElement, UnivariatePolynomial};
use crate::error::{Error, Result};
use crate::lambda::WittElement;
use crate::ptypical::{pi_epsilon_inverse, pwitt_pair};
use crate::series::{MultiIndex, TruncatedSeries};

const MAX_COORDINATE_BOUND: u32 = 1 << 12;

/// A point of `Λ̂ⁿ(R)`: an exact polynomial with constant term 1 whose other
/// coefficients are nilpotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalWittElement {
    poly: TruncatedSeries,
}

impl FormalWittElement {
    pub fn new(poly: TruncatedSeries) -> Result<Self> {
        if !poly.is_exact() {
            return Err(Error::NotExact);
        }
        let ring = poly.ring();
        if !ring.is_one(&poly.constant_term()) {
            return Err(Error::NonUnitConstantTerm);
        }
        for (m, c) in poly.terms() {
            if !m.is_zero() && !ring.is_nilpotent(c) {
                return Err(Error::NotNilpotent(ring.render(c)));
            }
        }
        Ok(FormalWittElement { poly })
    }

    /// `1 + Σ c_ν t^ν` from its nonconstant terms.
    pub fn from_terms<I>(ring: &Ring, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, RingElement)>,
    {
        let mut terms: Vec<(MultiIndex, RingElement)> = terms.into_iter().collect();
        let d = terms.iter().map(|(m, _)| m.total()).max().unwrap_or(0) + 1;
        terms.push((MultiIndex::zero(n), ring.one()));
        Self::new(TruncatedSeries::polynomial(ring, n, d, terms)?)
    }

    /// The neutral element `1`.
    pub fn one(ring: &Ring, n: usize) -> Self {
        FormalWittElement { poly: TruncatedSeries::one(ring, n, 1) }
    }

    pub fn poly(&self) -> &TruncatedSeries {
        &self.poly
    }

    pub fn ring(&self) -> &Ring {
        self.poly.ring()
    }

    pub fn n(&self) -> usize {
        self.poly.n()
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    /// Group law: the product of polynomials.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.degree() + other.degree() + 1;
        let prod = self.poly.extend(d).mul(&other.poly.extend(d))?;
        Self::new(prod)
    }

    /// Image in `Λⁿ(R)` modulo total degree `d`.
    pub fn to_witt(&self, d: u32) -> WittElement {
        let s = if d > self.poly.d() { self.poly.extend(d) } else { self.poly.truncate(d) };
        WittElement::new(s).expect("constant term is 1")
    }

    /// The finitely many nonzero Witt coordinates `r_ν`, found by raising the
    /// truncation until `∏ (1 − r_ν t^ν)` reproduces the polynomial exactly.
    pub fn coordinates(&self) -> Result<BTreeMap<MultiIndex, RingElement>> {
        let ring = self.ring();
        let n = self.n();
        let deg = self.degree();
        let mut bound = deg + 1;
        loop {
            let coords = self.to_witt(bound).coordinates();
            let total: u32 = coords.coords().keys().map(MultiIndex::total).sum();
            let big = total.max(deg) + 1;
            let mut prod = TruncatedSeries::one(ring, n, big);
            for (nu, r) in coords.coords() {
                prod = prod.mul_binomial(r, nu);
            }
            if prod.terms() == self.poly.terms() {
                return Ok(coords.coords().clone());
            }
            if bound >= MAX_COORDINATE_BOUND {
                return Err(Error::NotNilpotent("coordinate support does not terminate".into()));
            }
            bound *= 2;
        }
    }

    /// Smallest `c` such that the pairing with any `g` depends only on `g`
    /// modulo total degree `c`: a factor `1 − a^{j/h} b^{i/h}` survives only
    /// when `j/h` is below the nilpotency index of `a`.
    pub fn conductor(&self) -> Result<u32> {
        let ring = self.ring();
        let mut c = 1;
        for (nu, a) in self.coordinates()? {
            let idx = ring.nilpotency_index(&a).unwrap_or(0) as u32;
            c = c.max(nu.total() * idx);
        }
        Ok(c)
    }

    /// The one-variable component `∏_i (1 − r_{iν} s^i)` on the primitive
    /// direction `ν`.
    pub fn component(&self, nu: &MultiIndex) -> Result<FormalWittElement> {
        let ring = self.ring();
        let coords: Vec<(u32, RingElement)> = self
            .coordinates()?
            .into_iter()
            .filter_map(|(m, r)| {
                let (prim, i) = m.primitive_part();
                (&prim == nu).then_some((i, r))
            })
            .collect();
        let total: u32 = coords.iter().map(|(i, _)| i).sum();
        let mut prod = TruncatedSeries::one(ring, 1, total + 1);
        for (i, r) in &coords {
            prod = prod.mul_binomial(r, &MultiIndex::new(&[*i]));
        }
        let d = prod.degree() + 1;
        FormalWittElement::new(prod.truncate(d))
    }
}

/// Class of a polynomial unit in `R[t₁,…,t_n]^* / R^*`, represented by the
/// unique member with constant term 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitClass {
    representative: FormalWittElement,
}

impl UnitClass {
    pub fn representative(&self) -> &FormalWittElement {
        &self.representative
    }
}

/// Checks the unit criterion for a polynomial and normalizes it.
pub fn unit_class(u: &TruncatedSeries) -> Result<UnitClass> {
    let ring = u.ring();
    let c = u.constant_term();
    if !ring.is_unit(&c) {
        return Err(Error::NotAUnit(format!("constant term {} is not a unit", ring.render(&c))));
    }
    if let Some((m, x)) = u.terms().iter().find(|(m, x)| !m.is_zero() && !ring.is_nilpotent(x)) {
        return Err(Error::NotAUnit(format!("coefficient {} of {m:?} is not nilpotent", ring.render(x))));
    }
    let c_inv = ring.inv(&c)?;
    let normalized = u.scale(&c_inv).with_exact(true);
    let d = normalized.degree() + 1;
    Ok(UnitClass { representative: FormalWittElement::new(normalized.truncate(d).with_exact(true))? })
}

/// Brings `g` into the ring of `f`. Coefficients over the residue field are
/// lifted as constants.
fn lift_to(ring: &Ring, g: &WittElement) -> Result<WittElement> {
    if g.ring() == ring {
        return Ok(g.clone());
    }
    if g.ring().field() != ring.field() || g.ring().nil() != 1 {
        return Err(Error::ShapeMismatch("pairing arguments over unrelated rings".into()));
    }
    let s = g.series().map_coeffs(ring, |c| ring.from_field(c.components().first().copied().unwrap_or(0)));
    WittElement::new(s)
}

/// `∏_{i,j} (1 − a_i^{j/h} b_j^{i/h})^h`, `h = gcd(i, j)`: the product of
/// Witt vectors with coordinates `a`, `b` evaluated at `t = 1`.
fn pair_coordinates(ring: &Ring, a: &[(u32, RingElement)], b: &[(u32, RingElement)]) -> RingElement {
    let mut acc = ring.one();
    for (i, ai) in a {
        let idx = ring.nilpotency_index(ai).unwrap_or(0) as u32;
        for (j, bj) in b {
            let h = i.gcd(j);
            if j / h >= idx {
                continue;
            }
            let c = ring.mul(&ring.pow(ai, (j / h) as u64), &ring.pow(bj, (i / h) as u64));
            let factor = ring.sub(&ring.one(), &c);
            acc = ring.mul(&acc, &ring.pow(&factor, h as u64));
        }
    }
    acc
}

fn group_by_direction(coords: &BTreeMap<MultiIndex, RingElement>) -> BTreeMap<MultiIndex, Vec<(u32, RingElement)>> {
    let mut per: BTreeMap<MultiIndex, Vec<(u32, RingElement)>> = BTreeMap::new();
    for (m, r) in coords {
        let (prim, i) = m.primitive_part();
        per.entry(prim).or_default().push((i, r.clone()));
    }
    per
}

/// `⟨f, g mod deg d⟩`: both sides decomposed along primitive directions and
/// paired componentwise.
fn cartier_value(f_coords: &BTreeMap<MultiIndex, RingElement>, g: &WittElement, d: u32) -> RingElement {
    let ring = g.ring();
    let g_coords = g.truncate(d).coordinates();
    let fs = group_by_direction(f_coords);
    let gs = group_by_direction(g_coords.coords());
    let mut acc = ring.one();
    for (nu, a) in &fs {
        if let Some(b) = gs.get(nu) {
            acc = ring.mul(&acc, &pair_coordinates(ring, a, b));
        }
    }
    acc
}

/// Cartier pairing `⟨f, g⟩ = (f * g)(1)` using `g` modulo total degree `d`.
/// The value at `d` and at `d + 1` must agree, so `g` is needed to precision
/// `d + 1`.
pub fn cartier_pair(f: &FormalWittElement, g: &WittElement, d: u32) -> Result<RingElement> {
    if f.n() != g.n() {
        return Err(Error::ShapeMismatch(format!("{} vs {} variables", f.n(), g.n())));
    }
    if g.d() < d + 1 {
        return Err(Error::InsufficientPrecision(format!("g known mod degree {}, need {}", g.d(), d + 1)));
    }
    let g = lift_to(f.ring(), g)?;
    let coords = f.coordinates()?;
    let at_d = cartier_value(&coords, &g, d);
    let at_next = cartier_value(&coords, &g, d + 1);
    if at_d != at_next {
        return Err(Error::UnstableTruncation(d, d + 1));
    }
    Ok(at_d)
}

/// [`cartier_pair`] at the conductor of `f`.
pub fn cartier_pair_auto(f: &FormalWittElement, g: &WittElement) -> Result<RingElement> {
    cartier_pair(f, g, f.conductor()?)
}

/// Cartier pairing evaluated as `(f * g)(1)` through the one-variable ring
/// multiplication at truncation `d`. Only meaningful once `d` exceeds the
/// degree of the product; kept as a cross-check of the closed form.
pub fn cartier_pair_by_product(f: &FormalWittElement, g: &WittElement, d: u32) -> Result<RingElement> {
    if f.n() != 1 || g.n() != 1 {
        return Err(Error::ShapeMismatch("product route is one-variable".into()));
    }
    let g = lift_to(f.ring(), g)?;
    let prod = f.to_witt(d).mul_1var(&g.truncate(d).extend(d))?;
    prod.series().clone().with_exact(true).eval_all_ones()
}

/// `∏_{g′(α⁻¹)=0} f(α)^{mult}` for the truncation `g′ = g mod u^m`, with
/// `g` read as a series in `u = t⁻¹`, computed as `Res(rev g′, f)`.
fn geometric_value(f: &FormalWittElement, g: &WittElement, m: u32) -> Result<RingElement> {
    let ring = f.ring();
    let gp = g.truncate(m);
    let coeffs: Vec<RingElement> = (0..m).map(|k| gp.series().coeff(&MultiIndex::new(&[k]))).collect();
    let rev = UnivariatePolynomial::new(ring, coeffs).reverse();
    let fp = UnivariatePolynomial::new(
        ring,
        (0..=f.degree()).map(|k| f.poly().coeff(&MultiIndex::new(&[k]))).collect(),
    );
    if rev.degree() == 0 || fp.degree() == 0 {
        return Ok(ring.one());
    }
    resultant(&rev, &fp)
}

/// Geometric pairing of a one-variable `f` with `g ∈ 1 + u k[[u]]`, using
/// the zeros of `g mod u^m`; checked against `m + 1`.
pub fn geometric_pair(f: &FormalWittElement, g: &WittElement, m: u32) -> Result<RingElement> {
    if f.n() != 1 || g.n() != 1 {
        return Err(Error::ShapeMismatch("geometric pairing is one-variable; use geometric_pair_multi".into()));
    }
    if g.d() < m + 1 {
        return Err(Error::InsufficientPrecision(format!("g known mod u^{}, need u^{}", g.d(), m + 1)));
    }
    let g = lift_to(f.ring(), g)?;
    let at_m = geometric_value(f, &g, m)?;
    let at_next = geometric_value(f, &g, m + 1)?;
    if at_m != at_next {
        return Err(Error::UnstableTruncation(m, m + 1));
    }
    Ok(at_m)
}

/// n-variable geometric pairing: decompose both sides and pair each
/// primitive direction geometrically at the conductor of its component.
pub fn geometric_pair_multi(f: &FormalWittElement, g: &WittElement) -> Result<RingElement> {
    if f.n() != g.n() {
        return Err(Error::ShapeMismatch(format!("{} vs {} variables", f.n(), g.n())));
    }
    let ring = f.ring().clone();
    let g = lift_to(&ring, g)?;
    let gs = g.decompose();
    let dirs: Vec<MultiIndex> = group_by_direction(&f.coordinates()?).into_keys().collect();
    let mut acc = ring.one();
    for nu in dirs {
        let fc = f.component(&nu)?;
        let m = fc.conductor()?;
        let Some(gc) = gs.component(&nu) else {
            return Err(Error::InsufficientPrecision(format!("direction {nu:?} not visible in g")));
        };
        acc = ring.mul(&acc, &geometric_pair(&fc, gc, m)?);
    }
    Ok(acc)
}

fn map_element(emb: &Embedding, target: &Ring, x: &RingElement) -> RingElement {
    let comps: Vec<u32> = x.components().iter().map(|&c| emb.map(c)).collect();
    target.from_components(&comps).expect("same nilpotency")
}

fn pull_back(emb: &Embedding, source: &Ring, x: &RingElement) -> Result<RingElement> {
    let comps = x
        .components()
        .iter()
        .map(|&c| emb.preimage(c).ok_or(Error::NotClosed))
        .collect::<Result<Vec<u32>>>()?;
    source.from_components(&comps)
}

/// Oracle for [`geometric_pair`] when `g` has field coefficients: find the
/// zeros of `g′` in extensions `F_{q^s}`, `s ≤ max_ext`, and multiply the
/// values of `f` there.
pub fn geometric_pair_by_roots(f: &FormalWittElement, g: &WittElement, m: u32, max_ext: u32) -> Result<RingElement> {
    let ring = f.ring();
    let residue = ring.residue_ring();
    let gp = g.truncate(m);
    let coeffs: Vec<u32> = (0..m)
        .map(|k| gp.series().coeff(&MultiIndex::new(&[k])).components().first().copied().unwrap_or(0))
        .collect();
    let rev = UnivariatePolynomial::from_field(&residue, &coeffs).reverse();
    if rev.degree() == 0 {
        return Ok(ring.one());
    }
    let roots = roots_with_multiplicity(&rev, max_ext)?;
    let mut by_degree: BTreeMap<u32, Vec<_>> = BTreeMap::new();
    for r in roots {
        by_degree.entry(r.degree).or_default().push(r);
    }
    let mut acc = ring.one();
    for roots in by_degree.values() {
        // the roots of one degree form full Galois orbits, so their product
        // descends to the ground ring
        let emb = roots[0].embedding.clone();
        let big = Ring::new(emb.big.clone(), ring.nil())?;
        let fbig: Vec<(u32, RingElement)> = f
            .poly()
            .terms()
            .iter()
            .map(|(m, c)| (m.exponents()[0], map_element(&emb, &big, c)))
            .collect();
        let mut part = big.one();
        for r in roots {
            let alpha = big.from_field(r.value);
            let mut val = big.zero();
            for (k, c) in &fbig {
                big.add_assign(&mut val, &big.mul(c, &big.pow(&alpha, *k as u64)));
            }
            part = big.mul(&part, &big.pow(&val, r.multiplicity as u64));
        }
        acc = ring.mul(&acc, &pull_back(&emb, ring, &part)?);
    }
    Ok(acc)
}

fn pi_value(f: &FormalWittElement, g: &WittElement, d: u32) -> Result<RingElement> {
    let ring = f.ring();
    let vs = pi_epsilon_inverse(&f.to_witt(d))?;
    let ws = pi_epsilon_inverse(&g.truncate(d))?;
    let mut acc = ring.one();
    for (j, v) in &vs {
        if v.is_zero() {
            continue;
        }
        let pair = pwitt_pair(v, &ws[j])?;
        // ⟨·,·⟩ on the j-th factor carries the twist −j of the product
        acc = ring.mul(&acc, &ring.pow(&ring.inv(&pair)?, *j as u64));
    }
    Ok(acc)
}

/// Cartier pairing through `Πε`: `∏_j E(v_j ⊠ w_j, 1)^{−j}` where `f`, `g`
/// correspond to `(v_j)`, `(w_j)`. One variable; stable between `d` and
/// `d + 1`.
pub fn pi_epsilon_pair(f: &FormalWittElement, g: &WittElement, d: u32) -> Result<RingElement> {
    if f.n() != 1 || g.n() != 1 {
        return Err(Error::ShapeMismatch("Πε route is one-variable".into()));
    }
    if g.d() < d + 1 {
        return Err(Error::InsufficientPrecision(format!("g known mod degree {}, need {}", g.d(), d + 1)));
    }
    let d = d.max(f.degree() + 1);
    let g = lift_to(f.ring(), g)?;
    let at_d = pi_value(f, &g, d)?;
    let at_next = pi_value(f, &g.extend(d + 1), d + 1)?;
    if at_d != at_next {
        return Err(Error::UnstableTruncation(d, d + 1));
    }
    Ok(at_d)
}

/// Table of `cartier_pair(f, g, d)` over `fs × gs`.
pub fn pairing_matrix(fs: &[FormalWittElement], gs: &[WittElement], d: u32) -> Result<Vec<Vec<RingElement>>> {
    fs.iter().map(|f| gs.iter().map(|g| cartier_pair(f, g, d)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }

    fn random_formal<R: Rng>(ring: &Ring, n: usize, deg: u32, rng: &mut R) -> FormalWittElement {
        let terms: Vec<_> = crate::series::monomials(n, deg + 1)
            .into_iter()
            .map(|m| (m, ring.random_nilpotent(rng)))
            .collect();
        FormalWittElement::from_terms(ring, n, terms).unwrap()
    }

    fn random_field_witt<R: Rng>(ring: &Ring, n: usize, d: u32, rng: &mut R) -> WittElement {
        WittElement::random(&ring.residue_ring(), n, d, rng)
    }

    #[test]
    fn formal_element_validation() {
        let ring = Ring::with_order(2, 2).unwrap();
        assert!(FormalWittElement::from_terms(&ring, 1, [(t(1), ring.eps())]).is_ok());
        assert!(matches!(
            FormalWittElement::from_terms(&ring, 1, [(t(1), ring.one())]),
            Err(Error::NotNilpotent(_))
        ));
        let truncated = TruncatedSeries::from_terms(&ring, 1, 3, [(t(0), ring.one())]).unwrap();
        assert_eq!(FormalWittElement::new(truncated), Err(Error::NotExact));
    }

    #[test]
    fn unit_class_examples() {
        let ring = Ring::with_order(2, 2).unwrap();
        let u = TruncatedSeries::polynomial(&ring, 1, 2, [(t(0), ring.one()), (t(1), ring.eps())]).unwrap();
        assert_eq!(unit_class(&u).unwrap().representative().poly(), &u);
        let x = TruncatedSeries::polynomial(&ring, 1, 2, [(t(1), ring.one())]).unwrap();
        assert!(matches!(unit_class(&x), Err(Error::NotAUnit(_))));
        let r3 = Ring::with_order(3, 2).unwrap();
        let c = TruncatedSeries::polynomial(&r3, 1, 1, [(t(0), r3.from_int(2))]).unwrap();
        assert!(unit_class(&c).unwrap().representative().poly().is_one());
    }

    #[test]
    fn coordinates_are_finite_and_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (q, nil) in [(2u64, 3usize), (3, 2), (4, 3)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..30 {
                let f = random_formal(&ring, 1, 3, &mut rng);
                let coords = f.coordinates().unwrap();
                assert!(coords.values().all(|r| ring.is_nilpotent(r)));
            }
        }
    }

    #[test]
    fn cartier_examples() {
        let ring = Ring::with_order(4, 2).unwrap();
        let k = ring.residue_ring();
        let b = k.from_field(2);
        let bl = ring.from_field(2);
        let g = WittElement::binomial(&k, 1, 6, &b, &t(1));
        let f = FormalWittElement::from_terms(&ring, 1, [(t(1), ring.eps())]).unwrap();
        let expect = ring.add(&ring.one(), &ring.mul(&ring.eps(), &bl));
        assert_eq!(cartier_pair(&f, &g, 4).unwrap(), expect);
        let f2 = FormalWittElement::from_terms(&ring, 1, [(t(2), ring.eps())]).unwrap();
        let expect2 = ring.add(&ring.one(), &ring.mul(&ring.eps(), &ring.mul(&bl, &bl)));
        assert_eq!(cartier_pair(&f2, &g, 4).unwrap(), expect2);
        assert!(cartier_pair(&FormalWittElement::one(&ring, 1), &g, 3).unwrap() == ring.one());
        assert_eq!(geometric_pair(&f, &g, 3).unwrap(), expect);
        assert_eq!(geometric_pair(&f2, &g, 3).unwrap(), expect2);
        assert_eq!(geometric_pair(&f, &WittElement::zero(&k, 1, 6), 3).unwrap(), ring.one());
    }

    #[test]
    fn unstable_truncation_is_reported() {
        let ring = Ring::with_order(2, 3).unwrap();
        let k = ring.residue_ring();
        let f = FormalWittElement::from_terms(&ring, 1, [(t(1), ring.eps())]).unwrap();
        let g = WittElement::binomial(&k, 1, 6, &k.one(), &t(2));
        assert_eq!(cartier_pair(&f, &g, 2), Err(Error::UnstableTruncation(2, 3)));
        assert!(cartier_pair(&f, &g, 3).is_ok());
        assert!(matches!(cartier_pair(&f, &g, 6), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn closed_form_matches_product_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (q, nil) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..30 {
                let f = random_formal(&ring, 1, 2, &mut rng);
                let c = f.conductor().unwrap();
                let g = random_field_witt(&ring, 1, c + 1, &mut rng);
                let direct = cartier_pair(&f, &g, c).unwrap();
                // the product f * (g mod t^c) is a polynomial; a bound above its
                // degree makes the truncated product exact
                let big = 4 * c * c * nil as u32 + 8;
                assert_eq!(cartier_pair_by_product(&f, &g.truncate(c), big).unwrap(), direct);
            }
        }
    }

    #[test]
    fn three_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (q, nil) in [(2u64, 2usize), (2, 3), (3, 2), (3, 3), (4, 2), (5, 2)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..25 {
                let f = random_formal(&ring, 1, 3, &mut rng);
                let c = f.conductor().unwrap();
                let g = random_field_witt(&ring, 1, c + 2, &mut rng);
                let alg = cartier_pair(&f, &g, c).unwrap();
                assert_eq!(geometric_pair(&f, &g, c).unwrap(), alg);
                if q <= 3 {
                    assert_eq!(pi_epsilon_pair(&f, &g, c).unwrap(), alg);
                }
            }
        }
    }

    #[test]
    fn root_product_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (q, nil) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..20 {
                let f = random_formal(&ring, 1, 1, &mut rng);
                let c = f.conductor().unwrap();
                if c > 5 {
                    continue;
                }
                let g = random_field_witt(&ring, 1, c + 2, &mut rng);
                assert_eq!(geometric_pair_by_roots(&f, &g, c, c).unwrap(), geometric_pair(&f, &g, c).unwrap());
            }
        }
    }

    #[test]
    fn bilinearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (q, nil, n) in [(2u64, 2usize, 1usize), (3, 2, 1), (2, 3, 2), (4, 2, 2)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..20 {
                let f1 = random_formal(&ring, n, 2, &mut rng);
                let f2 = random_formal(&ring, n, 2, &mut rng);
                let f12 = f1.mul(&f2).unwrap();
                let c = f12.conductor().unwrap().max(f1.conductor().unwrap()).max(f2.conductor().unwrap());
                let g1 = random_field_witt(&ring, n, c + 1, &mut rng);
                let g2 = random_field_witt(&ring, n, c + 1, &mut rng);
                let p = |f: &FormalWittElement, g: &WittElement| cartier_pair(f, g, c).unwrap();
                assert_eq!(p(&f12, &g1), ring.mul(&p(&f1, &g1), &p(&f2, &g1)));
                let g12 = g1.add(&g2).unwrap();
                assert_eq!(p(&f1, &g12), ring.mul(&p(&f1, &g1), &p(&f1, &g2)));
                let v = p(&f1, &g1);
                assert!(ring.is_nilpotent(&ring.sub(&v, &ring.one())));
            }
        }
    }

    #[test]
    fn multivariate_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for (q, nil) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let ring = Ring::with_order(q, nil).unwrap();
            for _ in 0..15 {
                let f = random_formal(&ring, 2, 2, &mut rng);
                let c = f.conductor().unwrap();
                let g = random_field_witt(&ring, 2, c + 1, &mut rng);
                assert_eq!(geometric_pair_multi(&f, &g).unwrap(), cartier_pair(&f, &g, c).unwrap());
            }
        }
    }

    #[test]
    fn pairing_matrix_examples() {
        let ring = Ring::with_order(2, 2).unwrap();
        let k = ring.residue_ring();
        let m = pairing_matrix(&[FormalWittElement::one(&ring, 1)], &[WittElement::zero(&k, 1, 4)], 3).unwrap();
        assert_eq!(m, vec![vec![ring.one()]]);
        let fs: Vec<_> = (1..4).map(|i| FormalWittElement::from_terms(&ring, 1, [(t(i), ring.eps())]).unwrap()).collect();
        let gs: Vec<_> = (1..4).map(|j| WittElement::binomial(&k, 1, 9, &k.one(), &t(j))).collect();
        let m = pairing_matrix(&fs, &gs, 8).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let (i, j) = (i as u32 + 1, j as u32 + 1);
                // only j / gcd(i, j) = 1 survives ε² = 0, with exponent gcd = j
                let expect = if i % j == 0 && j % 2 == 1 { ring.add(&ring.one(), &ring.eps()) } else { ring.one() };
                assert_eq!(v, &expect, "i={i} j={j}");
            }
        }
    }
}
