//! Univariate polynomials over `R`, Sylvester resultants and root scans.

use super::field::{Embedding, Field};
use super::ring::{Ring, RingElement};
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePolynomial {
    ring: Ring,
    coeffs: Vec<RingElement>,
}

impl UnivariatePolynomial {
    pub fn new(ring: &Ring, mut coeffs: Vec<RingElement>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        UnivariatePolynomial { ring: ring.clone(), coeffs }
    }

    /// Polynomial with residue-field coefficients.
    pub fn from_field(ring: &Ring, coeffs: &[u32]) -> Self {
        Self::new(ring, coeffs.iter().map(|&c| ring.from_field(c)).collect())
    }

    /// `∏ (x − r)`.
    pub fn from_roots(ring: &Ring, roots: &[RingElement]) -> Self {
        let mut out = Self::new(ring, vec![ring.one()]);
        for r in roots {
            let lin = Self::new(ring, vec![ring.neg(r), ring.one()]);
            out = out.mul(&lin);
        }
        out
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient; the zero polynomial has
    /// degree 0 here and is flagged by [`is_zero`](Self::is_zero).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> RingElement {
        self.coeffs.last().cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeff(&self, i: usize) -> RingElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn eval(&self, x: &RingElement) -> RingElement {
        let r = &self.ring;
        self.coeffs.iter().rev().fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = &self.ring;
        if self.is_zero() || other.is_zero() {
            return Self::new(r, vec![]);
        }
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = r.mul(a, b);
                r.add_assign(&mut out[i + j], &prod);
            }
        }
        Self::new(r, out)
    }

    /// `x^deg · p(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(&self.ring, c)
    }

    /// Division by the monic linear factor `x − a`, returning quotient and
    /// remainder.
    pub fn div_linear(&self, a: &RingElement) -> (Self, RingElement) {
        let r = &self.ring;
        if self.is_zero() {
            return (self.clone(), r.zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![r.zero(); n - 1];
        let mut carry = r.zero();
        for i in (0..n).rev() {
            let cur = r.add(&self.coeffs[i], &r.mul(&carry, a));
            if i == 0 {
                return (Self::new(r, quot), cur);
            }
            quot[i - 1] = cur.clone();
            carry = cur;
        }
        unreachable!()
    }

    /// Maps coefficients through a field embedding; requires residue-field
    /// coefficients on both sides or equal nilpotency indices.
    pub fn map_field(&self, emb: &Embedding, target: &Ring) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let comps: Vec<u32> = c.components().iter().map(|&x| emb.map(x)).collect();
                target.from_components(&comps).expect("embedding preserves shape")
            })
            .collect();
        Self::new(target, coeffs)
    }
}

/// The `(m+n) × (m+n)` Sylvester matrix of `a` (degree `m`) and `b`
/// (degree `n`).
pub fn sylvester_matrix(a: &UnivariatePolynomial, b: &UnivariatePolynomial) -> Vec<Vec<RingElement>> {
    let r = a.ring();
    let (m, n) = (a.degree(), b.degree());
    let size = m + n;
    let mut mat = vec![vec![r.zero(); size]; size];
    for row in 0..n {
        for k in 0..=m {
            mat[row][row + k] = a.coeff(m - k);
        }
    }
    for row in 0..m {
        for k in 0..=n {
            mat[n + row][row + k] = b.coeff(n - k);
        }
    }
    mat
}

/// Determinant over the local ring `F_q[ε]/(ε^nil)` by Gaussian elimination
/// that pivots on the entry of least ε-valuation. Every entry below the pivot
/// is then a multiple of the pivot, so elimination only ever divides by the
/// pivot's unit part.
pub fn determinant(ring: &Ring, mut mat: Vec<Vec<RingElement>>) -> RingElement {
    let n = mat.len();
    let mut det = ring.one();
    let mut negate = false;
    for col in 0..n {
        let pivot = (col..n)
            .filter_map(|row| mat[row][col].valuation().map(|v| (v, row)))
            .min();
        let Some((v, prow)) = pivot else {
            return ring.zero();
        };
        if prow != col {
            mat.swap(prow, col);
            negate = !negate;
        }
        let unit_inv = ring.inv(&shift_down(ring, &mat[col][col], v)).expect("pivot unit part");
        for row in col + 1..n {
            if ring.is_zero(&mat[row][col]) {
                continue;
            }
            // entry = ε^v · y and pivot = ε^v · u, so subtract (y/u)·pivot row.
            let factor = ring.mul(&shift_down(ring, &mat[row][col], v), &unit_inv);
            for k in col..n {
                let sub = ring.mul(&factor, &mat[col][k]);
                mat[row][k] = ring.sub(&mat[row][k], &sub);
            }
        }
        det = ring.mul(&det, &mat[col][col]);
    }
    if negate {
        ring.neg(&det)
    } else {
        det
    }
}

/// Divides by `ε^v`, assuming the valuation is at least `v`.
fn shift_down(ring: &Ring, a: &RingElement, v: usize) -> RingElement {
    let comps = a.components();
    let mut out = vec![0u32; comps.len()];
    out[..comps.len() - v].copy_from_slice(&comps[v..]);
    ring.from_components(&out).expect("shape preserved")
}

/// `Res(a, b)`, the determinant of the Sylvester matrix.
pub fn resultant(a: &UnivariatePolynomial, b: &UnivariatePolynomial) -> Result<RingElement> {
    if a.ring() != b.ring() {
        return Err(Error::ShapeMismatch("polynomials over different rings".into()));
    }
    if a.degree() + b.degree() == 0 {
        return Err(Error::EmptyInput);
    }
    Ok(determinant(a.ring(), sylvester_matrix(a, b)))
}

/// A root of a polynomial over `F_q`, living in `F_{q^s}`.
#[derive(Clone, Debug)]
pub struct Root {
    /// Degree of the smallest extension containing the root.
    pub degree: u32,
    /// Embedding of `F_q` into the extension the root was found in.
    pub embedding: Embedding,
    pub value: u32,
    pub multiplicity: usize,
}

impl Root {
    pub fn field(&self) -> &Field {
        &self.embedding.big
    }
}

/// All roots of `f` over `F_q` in extensions `F_{q^s}`, `s ≤ max_ext`, by
/// exhaustive evaluation; multiplicities by repeated division.
pub fn roots_with_multiplicity(f: &UnivariatePolynomial, max_ext: u32) -> Result<Vec<Root>> {
    let ring = f.ring();
    if ring.nil() != 1 {
        return Err(Error::NilpotentCoefficients);
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial has no finite root set".into()));
    }
    let small = ring.field();
    let q = small.order() as u64;
    let total = f.degree();
    let mut found = 0usize;
    let mut roots = Vec::new();
    for s in 1..=max_ext {
        if found == total {
            break;
        }
        let emb = small.extension(s)?;
        let big_ring = Ring::new(emb.big.clone(), 1)?;
        let big = &emb.big;
        let mapped = f.map_field(&emb, &big_ring);
        for x in 0..big.order() {
            // skip elements of proper subfields F_{q^t}, t | s; they were found earlier
            if (1..s).any(|t| s % t == 0 && big.pow(x, q.pow(t)) == x) {
                continue;
            }
            let xr = big_ring.from_field(x);
            let mut cur = mapped.clone();
            let mut mult = 0;
            loop {
                let (quot, rem) = cur.div_linear(&xr);
                if !big_ring.is_zero(&rem) {
                    break;
                }
                mult += 1;
                cur = quot;
            }
            if mult > 0 {
                found += mult;
                roots.push(Root { degree: s, embedding: emb.clone(), value: x, multiplicity: mult });
            }
        }
    }
    if found < total {
        return Err(Error::ExtensionBoundExceeded(max_ext as usize));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Leibniz expansion, independent of the elimination path.
    fn leibniz(ring: &Ring, mat: &[Vec<RingElement>]) -> RingElement {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(vec![], false)];
            }
            let mut out = Vec::new();
            for (p, odd) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    // inserting at pos moves n-1 past (n-1-pos) elements
                    out.push((q, odd ^ ((n - 1 - pos) % 2 == 1)));
                }
            }
            out
        }
        let n = mat.len();
        let mut acc = ring.zero();
        for (perm, odd) in perms(n) {
            let mut term = ring.one();
            for (i, &j) in perm.iter().enumerate() {
                term = ring.mul(&term, &mat[i][j]);
            }
            acc = if odd { ring.sub(&acc, &term) } else { ring.add(&acc, &term) };
        }
        acc
    }

    #[test]
    fn linear_resultant_evaluates() {
        let r = Ring::with_order(5, 1).unwrap();
        let f = UnivariatePolynomial::from_field(&r, &[1, 2, 3]);
        for a in 0..5 {
            let lin = UnivariatePolynomial::from_field(&r, &[r.field().neg(a), 1]);
            assert_eq!(resultant(&lin, &f).unwrap(), f.eval(&r.from_field(a)));
        }
    }

    #[test]
    fn small_resultant_over_f5() {
        let r = Ring::with_order(5, 1).unwrap();
        let a = UnivariatePolynomial::from_field(&r, &[4, 0, 1]);
        let b = UnivariatePolynomial::from_field(&r, &[3, 1]);
        assert_eq!(resultant(&a, &b).unwrap(), r.from_int(3));
    }

    #[test]
    fn constants_are_rejected() {
        let r = Ring::with_order(3, 2).unwrap();
        let a = UnivariatePolynomial::from_field(&r, &[2]);
        assert_eq!(resultant(&a, &a), Err(Error::EmptyInput));
    }

    #[test]
    fn determinant_matches_leibniz_over_nilpotent_rings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (q, nil) in [(2, 3), (3, 2), (4, 3), (5, 2)] {
            let r = Ring::with_order(q, nil).unwrap();
            for _ in 0..200 {
                let n = rng.gen_range(1..=5);
                let mat: Vec<Vec<RingElement>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| if rng.gen_bool(0.5) { r.random_nilpotent(&mut rng) } else { r.random(&mut rng) })
                            .collect()
                    })
                    .collect();
                assert_eq!(determinant(&r, mat.clone()), leibniz(&r, &mat));
            }
        }
    }

    #[test]
    fn swap_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = Ring::with_order(4, 2).unwrap();
        for _ in 0..100 {
            let da = rng.gen_range(1..4);
            let db = rng.gen_range(1..4);
            let a = UnivariatePolynomial::new(&r, (0..=da).map(|_| r.random(&mut rng)).collect());
            let b = UnivariatePolynomial::new(&r, (0..=db).map(|_| r.random(&mut rng)).collect());
            if a.degree() + b.degree() == 0 {
                continue;
            }
            let ab = resultant(&a, &b).unwrap();
            let ba = resultant(&b, &a).unwrap();
            let expected = if (a.degree() * b.degree()) % 2 == 1 { r.neg(&ba) } else { ba };
            assert_eq!(ab, expected);
        }
    }

    #[test]
    fn double_root_over_f3() {
        let r = Ring::with_order(3, 1).unwrap();
        // (x - 1)^2 = x^2 - 2x + 1 = x^2 + x + 1
        let f = UnivariatePolynomial::from_field(&r, &[1, 1, 1]);
        let roots = roots_with_multiplicity(&f, 1).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!((roots[0].value, roots[0].multiplicity, roots[0].degree), (1, 2, 1));
    }

    #[test]
    fn quadratic_roots_in_extensions() {
        let f3 = Ring::with_order(3, 1).unwrap();
        let f = UnivariatePolynomial::from_field(&f3, &[1, 0, 1]);
        let roots = roots_with_multiplicity(&f, 2).unwrap();
        assert_eq!(roots.len(), 2);
        for root in &roots {
            assert_eq!((root.degree, root.multiplicity), (2, 1));
            let big = root.field();
            assert_eq!(big.add(big.mul(root.value, root.value), 1), 0);
        }
        assert_eq!(roots_with_multiplicity(&f, 1).unwrap_err(), Error::ExtensionBoundExceeded(1));

        let f2 = Ring::with_order(2, 1).unwrap();
        let g = UnivariatePolynomial::from_field(&f2, &[1, 1, 1]);
        let roots = roots_with_multiplicity(&g, 2).unwrap();
        assert_eq!(roots.len(), 2);
        let big = roots[0].field();
        assert_eq!(big.add(roots[0].value, roots[1].value), 1);
    }

    #[test]
    fn resultant_equals_product_over_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2u64, 3, 4, 5] {
            let r = Ring::with_order(q, 1).unwrap();
            for _ in 0..40 {
                let da = rng.gen_range(1..4);
                let (a, roots) = loop {
                    let mut c: Vec<RingElement> = (0..da).map(|_| r.random(&mut rng)).collect();
                    c.push(r.random_unit(&mut rng));
                    let p = UnivariatePolynomial::new(&r, c);
                    if let Ok(roots) = roots_with_multiplicity(&p, 3) {
                        break (p, roots);
                    }
                };
                let db = rng.gen_range(0..4);
                let b = UnivariatePolynomial::new(&r, (0..=db).map(|_| r.random(&mut rng)).collect());
                let mut expected = r.pow(&a.leading(), b.degree() as u64);
                // roots of equal degree share one extension field; their product
                // there is Galois-stable and descends to F_q
                for s in 1..=3 {
                    let group: Vec<&Root> = roots.iter().filter(|x| x.degree == s).collect();
                    let Some(first) = group.first() else { continue };
                    let emb = &first.embedding;
                    let big_ring = Ring::new(emb.big.clone(), 1).unwrap();
                    let bb = b.map_field(emb, &big_ring);
                    let mut prod = big_ring.one();
                    for root in &group {
                        let val = bb.eval(&big_ring.from_field(root.value));
                        prod = big_ring.mul(&prod, &big_ring.pow(&val, root.multiplicity as u64));
                    }
                    let down = emb.preimage(prod.components()[0]).expect("norm lies in F_q");
                    expected = r.mul(&expected, &r.from_field(down));
                }
                assert_eq!(resultant(&a, &b).unwrap(), expected);
            }
        }
    }
}
