//! Sparse multivariate polynomials over `F_p`.

use std::collections::BTreeMap;

use super::multiindex::MultiIndex;
use super::scalar::{binom_mod_p, FpScalar};
use super::{Fraction, Point, RingContext};
use crate::{Error, Result};

/// An exact sparse polynomial in the basis elements of a [`RingContext`].
///
/// Terms are keyed by [`MultiIndex`] in a fixed total order, so iteration,
/// printing, and hashing are deterministic. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: RingContext,
    terms: BTreeMap<MultiIndex, FpScalar>,
}

impl Polynomial {
    pub fn zero(ring: &RingContext) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &RingContext, value: u64) -> Self {
        Polynomial::term(ring, MultiIndex::zero(), FpScalar::new(value, ring.modulus()))
    }

    pub fn one(ring: &RingContext) -> Self {
        Polynomial::constant(ring, 1)
    }

    /// The basis element at `position` as a polynomial.
    pub fn generator(ring: &RingContext, position: u32) -> Self {
        assert!(position < ring.basis_len(), "position out of range");
        Polynomial::term(ring, MultiIndex::unit(position), FpScalar::one(ring.modulus()))
    }

    /// A single term `coeff * B^index`.
    pub fn term(ring: &RingContext, index: MultiIndex, coeff: FpScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(index, coeff);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, FpScalar)>>(
        ring: &RingContext,
        terms: I,
    ) -> Self {
        let mut out = Polynomial::zero(ring);
        for (idx, c) in terms {
            out.add_term(idx, c);
        }
        out
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, FpScalar)> + '_ {
        self.terms.iter().map(|(i, &c)| (i, c))
    }

    pub fn coeff(&self, index: &MultiIndex) -> FpScalar {
        self.terms
            .get(index)
            .copied()
            .unwrap_or_else(|| FpScalar::zero(self.ring.modulus()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn constant_value(&self) -> Option<FpScalar> {
        if self.is_zero() {
            return Some(FpScalar::zero(self.ring.modulus()));
        }
        if self.is_constant() {
            return Some(self.coeff(&MultiIndex::zero()));
        }
        None
    }

    /// True when the support touches only base parameters.
    pub fn is_parameter_only(&self) -> bool {
        self.terms
            .keys()
            .all(|idx| idx.support().all(|p| !self.ring.is_geometric(p)))
    }

    /// Total degree; zero for the zero polynomial.
    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// Componentwise maximum of all term exponents.
    pub fn exponent_envelope(&self) -> MultiIndex {
        self.terms
            .keys()
            .fold(MultiIndex::zero(), |acc, idx| acc.sup(idx))
    }

    fn add_term(&mut self, index: MultiIndex, coeff: FpScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = *e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.add_term(idx.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (idx, c) in other.terms() {
            out.add_term(idx.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        let mut out = Polynomial::zero(&self.ring);
        for (ia, ca) in self.terms() {
            for (ib, cb) in other.terms() {
                out.add_term(ia.add(ib), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, factor: FpScalar) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = *c * factor;
        }
        out
    }

    /// Multiplies by the single term `coeff * B^index`.
    pub fn mul_term(&self, index: &MultiIndex, coeff: FpScalar) -> Polynomial {
        if coeff.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let mut out = Polynomial::zero(&self.ring);
        for (idx, c) in self.terms() {
            out.terms.insert(idx.add(index), c * coeff);
        }
        out
    }

    pub fn pow(&self, e: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The unique decomposition `f = sum_rho g_rho^p * B^rho` over the
    /// p-monomials (every entry of `rho` in `[0, p)`), using that p-th
    /// powers of the basis elements generate `A^p` and that `c^p = c` for
    /// `c` in `F_p`.
    pub fn p_power_decompose(&self) -> BTreeMap<MultiIndex, Polynomial> {
        let p = self.ring.modulus() as u32;
        let mut out: BTreeMap<MultiIndex, Polynomial> = BTreeMap::new();
        for (alpha, c) in self.terms() {
            let (q, rho) = alpha.div_mod(p);
            out.entry(rho)
                .or_insert_with(|| Polynomial::zero(&self.ring))
                .add_term(q, c);
        }
        out
    }

    /// Rebuilds `sum_rho g_rho^p * B^rho`; inverse of
    /// [`Polynomial::p_power_decompose`].
    pub fn p_power_reconstruct(
        ring: &RingContext,
        parts: &BTreeMap<MultiIndex, Polynomial>,
    ) -> Polynomial {
        let p = ring.modulus();
        let mut acc = Polynomial::zero(ring);
        for (rho, g) in parts {
            let piece = g.pow(p).mul_term(rho, FpScalar::one(p));
            acc = &acc + &piece;
        }
        acc
    }

    /// Substitutes the point's coordinates for the geometric variables,
    /// keeping the base parameters symbolic. The result lives in
    /// `k = F_p(v)`.
    pub fn evaluate(&self, point: &Point) -> Result<Fraction> {
        if self.ring != *point.ring() {
            return Err(Error::RingMismatch);
        }
        let mut acc = Fraction::zero(&self.ring);
        for (alpha, c) in self.terms() {
            let geo = alpha.restrict(|p| self.ring.is_geometric(p));
            let par = alpha.restrict(|p| !self.ring.is_geometric(p));
            let mut term = Fraction::from_polynomial(Polynomial::term(&self.ring, par, c))
                .expect("parameter part of a term is parameter-only");
            for (pos, exp) in geo.iter() {
                term = &term * &point.coord(pos).pow(exp as u64);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

/// The multi-index binomial coefficient `C(a, b) mod p`: the product of the
/// componentwise binomial coefficients, each computed digitwise in base p
/// by Lucas' theorem. Zero when any component of `b` exceeds the matching
/// component of `a`.
pub fn lucas_binomial(a: &MultiIndex, b: &MultiIndex, p: u64) -> FpScalar {
    let mut acc = FpScalar::one(p);
    for (pos, be) in b.iter() {
        let ae = a.get(pos);
        acc = acc * FpScalar::new(binom_mod_p(ae as u64, be as u64, p), p);
        if acc.is_zero() {
            return acc;
        }
    }
    acc
}
