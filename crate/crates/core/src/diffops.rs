//! Absolute differential operators attached to the canonical p-basis.
//!
//! For a multi-index `beta` the operator `D^beta` acts on p-monomials by
//! `D^beta(B^alpha) = C(alpha, beta) * B^(alpha - beta)` and extends
//! F_p-linearly. [`hasse`] implements this closed form directly;
//! [`taylor_hasse`] recomputes the same operator by an honest Taylor
//! expansion with fresh shift variables and exact polynomial
//! multiplication, and serves as its independent oracle. The two must
//! agree everywhere.

use std::collections::BTreeMap;

use crate::polyring::{
    lucas_binomial, multiindices_bounded, BasisElement, FpScalar, MultiIndex, Polynomial,
    RingContext,
};
use crate::text::multiindex_to_text;
use crate::{Error, Result};

/// Applies `D^beta` termwise: `c * B^alpha` maps to
/// `c * C(alpha, beta) * B^(alpha - beta)`.
pub fn hasse(f: &Polynomial, beta: &MultiIndex) -> Polynomial {
    let p = f.ring().modulus();
    let mut out = Polynomial::zero(f.ring());
    for (alpha, c) in f.terms() {
        let Some(diff) = alpha.checked_sub(beta) else {
            continue;
        };
        let binom = lucas_binomial(alpha, beta, p);
        if binom.is_zero() {
            continue;
        }
        out = &out + &Polynomial::term(f.ring(), diff, c * binom);
    }
    out
}

/// The same operator computed from scratch: substitute `b -> b + t_b` for
/// every basis element in the support of `beta` (with fresh shift
/// variables), expand exactly, and read off the coefficient of `T^beta`.
///
/// No binomial-coefficient arithmetic is involved; the binomials emerge
/// from repeated polynomial multiplication. Contract:
/// `taylor_hasse(f, beta) == hasse(f, beta)` for all inputs.
pub fn taylor_hasse(f: &Polynomial, beta: &MultiIndex) -> Polynomial {
    if beta.is_zero() {
        return f.clone();
    }
    let ring = f.ring();
    let shifted_positions: Vec<u32> = beta.support().collect();
    let (ext, pairs) = ring.with_shifts(&shifted_positions);
    let shift_of: BTreeMap<u32, u32> = pairs.iter().copied().collect();
    let one = FpScalar::one(ring.modulus());

    let mut expanded = Polynomial::zero(&ext);
    for (alpha, c) in f.terms() {
        let mut term = Polynomial::term(
            &ext,
            alpha.restrict(|pos| !shift_of.contains_key(&pos)),
            c,
        );
        for (pos, exp) in alpha.iter() {
            let Some(&shift_pos) = shift_of.get(&pos) else {
                continue;
            };
            let binomial = &Polynomial::generator(&ext, pos) + &Polynomial::generator(&ext, shift_pos);
            term = &term * &binomial.pow(exp as u64);
        }
        expanded = &expanded + &term;
    }

    let shifted_beta =
        MultiIndex::from_pairs(beta.iter().map(|(pos, exp)| (shift_of[&pos], exp)));
    let mut out = Polynomial::zero(ring);
    for (idx, c) in expanded.terms() {
        let shift_part = idx.restrict(|pos| pos >= ring.basis_len());
        if shift_part != shifted_beta {
            continue;
        }
        let original = idx.restrict(|pos| pos < ring.basis_len());
        out = &out + &Polynomial::term(ring, original, c * one);
    }
    out
}

/// The first-order partial with respect to a basis element; the unique
/// derivation with `partial(b') = delta_{b b'}` on basis elements.
pub fn partial(f: &Polynomial, b: &BasisElement) -> Polynomial {
    hasse(f, &MultiIndex::unit(b.position()))
}

/// Partial derivative by basis position.
pub fn partial_at(f: &Polynomial, position: u32) -> Polynomial {
    hasse(f, &MultiIndex::unit(position))
}

/// The scalar `c` with `D^beta . D^beta' = c * D^(beta + beta')`, namely
/// the multinomial coefficient `C(beta + beta', beta) mod p`.
pub fn compose_scalar(beta: &MultiIndex, beta2: &MultiIndex, p: u64) -> FpScalar {
    lucas_binomial(&beta.add(beta2), beta, p)
}

/// A finite formal combination `sum_beta c_beta * D^beta` with polynomial
/// coefficients, of declared order `n >= |beta|` for every index in the
/// support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOperator {
    ring: RingContext,
    coefficients: BTreeMap<MultiIndex, Polynomial>,
    declared_order: u64,
}

impl DiffOperator {
    /// Builds an operator, dropping zero coefficients. Panics if some
    /// index exceeds the declared order or a coefficient lives in another
    /// ring; both are programming errors, not data.
    pub fn new(
        ring: &RingContext,
        coefficients: impl IntoIterator<Item = (MultiIndex, Polynomial)>,
        declared_order: u64,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (beta, c) in coefficients {
            assert!(
                beta.order() <= declared_order,
                "index order {} exceeds declared order {}",
                beta.order(),
                declared_order
            );
            assert!(c.ring() == ring, "coefficient from a different ring");
            if !c.is_zero() {
                map.insert(beta, c);
            }
        }
        DiffOperator {
            ring: ring.clone(),
            coefficients: map,
            declared_order,
        }
    }

    pub fn zero(ring: &RingContext, declared_order: u64) -> Self {
        DiffOperator {
            ring: ring.clone(),
            coefficients: BTreeMap::new(),
            declared_order,
        }
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn declared_order(&self) -> u64 {
        self.declared_order
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> + '_ {
        self.coefficients.iter()
    }

    pub fn coefficient(&self, beta: &MultiIndex) -> Option<&Polynomial> {
        self.coefficients.get(beta)
    }

    /// `sum_beta c_beta * D^beta(f)`, exactly.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if self.ring != *f.ring() {
            return Err(Error::RingMismatch);
        }
        let mut acc = Polynomial::zero(&self.ring);
        for (beta, c) in &self.coefficients {
            acc = &acc + &(c * &hasse(f, beta));
        }
        Ok(acc)
    }
}

/// Recovers the canonical decomposition `sum c_beta D^beta` of a black-box
/// F_p-linear differential operator of order at most `n`, via
/// `c_beta = sum_{gamma <= beta} C(beta, gamma) (-1)^|gamma| B^gamma
/// Delta(B^(beta - gamma))`.
///
/// The reconstruction is then audited against `delta` on every monomial
/// `B^alpha` with `|alpha| <= degree_bound - n`; a mismatch means `delta`
/// was not of order `n` on the probed subspace and yields
/// [`Error::OrderViolation`].
pub fn decompose_blackbox<F>(
    ring: &RingContext,
    delta: F,
    n: u64,
    degree_bound: u64,
) -> Result<DiffOperator>
where
    F: Fn(&Polynomial) -> Polynomial,
{
    let p = ring.modulus();
    let all_positions: Vec<(u32, u32)> = (0..ring.basis_len())
        .map(|pos| (pos, n.min(u32::MAX as u64) as u32))
        .collect();
    let mut coefficients = BTreeMap::new();
    for beta in multiindices_bounded(&all_positions, n) {
        let caps: Vec<(u32, u32)> = beta.iter().collect();
        let mut c_beta = Polynomial::zero(ring);
        for gamma in multiindices_bounded(&caps, beta.order()) {
            let binom = lucas_binomial(&beta, &gamma, p);
            if binom.is_zero() {
                continue;
            }
            let sign = if gamma.order() % 2 == 0 {
                FpScalar::one(p)
            } else {
                -FpScalar::one(p)
            };
            let monomial = beta.checked_sub(&gamma).expect("gamma <= beta");
            let image = delta(&Polynomial::term(ring, monomial, FpScalar::one(p)));
            let contribution = image.mul_term(&gamma, binom * sign);
            c_beta = &c_beta + &contribution;
        }
        if !c_beta.is_zero() {
            coefficients.insert(beta, c_beta);
        }
    }
    let op = DiffOperator::new(ring, coefficients, n);

    let probe_cap = degree_bound.saturating_sub(n);
    let probe_positions: Vec<(u32, u32)> = (0..ring.basis_len())
        .map(|pos| (pos, probe_cap.min(u32::MAX as u64) as u32))
        .collect();
    for alpha in multiindices_bounded(&probe_positions, probe_cap) {
        let monomial = Polynomial::term(ring, alpha.clone(), FpScalar::one(p));
        if op.apply(&monomial)? != delta(&monomial) {
            return Err(Error::OrderViolation(multiindex_to_text(&alpha, ring)));
        }
    }
    Ok(op)
}
