//! Seeded random generators shared by the property suites.

use charp::polyring::{Fraction, FpScalar, MultiIndex, Point, Polynomial, RingContext};
use rand::Rng;

pub fn random_multiindex<R: Rng>(
    rng: &mut R,
    positions: &[u32],
    max_exp: u32,
    max_order: u64,
) -> MultiIndex {
    loop {
        let pairs: Vec<(u32, u32)> = positions
            .iter()
            .map(|&p| (p, rng.random_range(0..=max_exp)))
            .collect();
        let idx = MultiIndex::from_pairs(pairs);
        if idx.order() <= max_order {
            return idx;
        }
    }
}

/// Random polynomial with at most `max_terms` terms of total degree at
/// most `max_degree`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    ring: &RingContext,
    max_terms: usize,
    max_degree: u64,
) -> Polynomial {
    let positions: Vec<u32> = (0..ring.basis_len()).collect();
    let n_terms = rng.random_range(0..=max_terms);
    let terms = (0..n_terms).map(|_| {
        let cap = (max_degree.min(8)) as u32;
        let idx = random_multiindex(rng, &positions, cap, max_degree);
        let coeff = FpScalar::new(rng.random_range(0..ring.modulus()), ring.modulus());
        (idx, coeff)
    });
    Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

/// Random nonzero polynomial.
pub fn random_nonzero_poly<R: Rng>(
    rng: &mut R,
    ring: &RingContext,
    max_terms: usize,
    max_degree: u64,
) -> Polynomial {
    loop {
        let f = random_poly(rng, ring, max_terms, max_degree);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random parameter-only polynomial (a `k`-element numerator/denominator).
pub fn random_param_poly<R: Rng>(
    rng: &mut R,
    ring: &RingContext,
    max_terms: usize,
    max_degree: u64,
) -> Polynomial {
    let positions: Vec<u32> = ring.parameter_positions().collect();
    let n_terms = rng.random_range(0..=max_terms);
    let terms = (0..n_terms).map(|_| {
        let idx = random_multiindex(rng, &positions, max_degree as u32, max_degree);
        let coeff = FpScalar::new(rng.random_range(0..ring.modulus()), ring.modulus());
        (idx, coeff)
    });
    Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

/// Random element of `k = F_p(v)` with small numerator and denominator.
pub fn random_fraction<R: Rng>(rng: &mut R, ring: &RingContext) -> Fraction {
    let num = random_param_poly(rng, ring, 2, 2);
    let den = loop {
        let d = random_param_poly(rng, ring, 2, 2);
        if !d.is_zero() {
            break d;
        }
    };
    Fraction::new(num, den).expect("parameter-only sides")
}

/// Random rational point of the chart.
pub fn random_point<R: Rng>(rng: &mut R, ring: &RingContext) -> Point {
    let coords: Vec<(u32, Fraction)> = ring
        .geometric_positions()
        .map(|pos| (pos, random_fraction(rng, ring)))
        .collect();
    Point::new(ring, coords).expect("all variables assigned")
}
