//! Orders of elements and ideals at primes, differential saturation, and
//! order-locus stratification.
//!
//! The order of `f` at a prime `q` is the largest `n` with
//! `f in q^n A_q`; it equals the smallest `|beta|` such that
//! `D^beta(f)` lies outside `q`. Saturating an ideal by all operators of
//! order at most `N-1` therefore cuts out exactly the locus where the
//! ideal has order at least `N`. [`oracle_order_at_point`] recomputes
//! orders at rational points by shifting coordinates and reading off the
//! minimal geometric degree, with no differential operators involved.

use rayon::prelude::*;

use crate::diffops::hasse;
use crate::groebner::Ideal;
use crate::jacobian::PrimeSpec;
use crate::polyring::{multiindices_bounded, Fraction, MultiIndex, Point, Polynomial};
use crate::Result;

/// A nonnegative order, or infinity for the zero element / zero ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrderValue {
    Finite(u64),
    Infinite,
}

impl OrderValue {
    pub fn is_infinite(self) -> bool {
        matches!(self, OrderValue::Infinite)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            OrderValue::Finite(n) => Some(n),
            OrderValue::Infinite => None,
        }
    }
}

impl std::fmt::Display for OrderValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrderValue::Finite(n) => write!(f, "{n}"),
            OrderValue::Infinite => write!(f, "inf"),
        }
    }
}

/// One saturation generator `D^beta(f_i)` with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationGenerator {
    pub gen_index: usize,
    pub beta: MultiIndex,
    pub value: Polynomial,
}

/// The differential saturation `Diff^n(A)(I)`: all `D^beta(f_i)` with
/// `|beta| <= n`, with zero images dropped. The original generators are
/// the `beta = 0` entries.
#[derive(Debug, Clone)]
pub struct SaturationResult {
    pub order: u64,
    pub generators: Vec<SaturationGenerator>,
}

impl SaturationResult {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        self.generators.iter().map(|g| g.value.clone()).collect()
    }
}

/// Enumerates, per generator, every `beta` within its exponent envelope
/// of order at most `n`; indices outside the envelope act as zero by the
/// finite-support property, so nothing is lost.
pub fn diff_saturate(ideal: &Ideal, n: u64) -> SaturationResult {
    let jobs: Vec<(usize, MultiIndex)> = ideal
        .generators()
        .iter()
        .enumerate()
        .flat_map(|(i, f)| {
            let caps: Vec<(u32, u32)> = f.exponent_envelope().iter().collect();
            multiindices_bounded(&caps, n)
                .into_iter()
                .map(move |beta| (i, beta))
        })
        .collect();
    let generators: Vec<SaturationGenerator> = jobs
        .into_par_iter()
        .map(|(i, beta)| {
            let value = hasse(&ideal.generators()[i], &beta);
            SaturationGenerator {
                gen_index: i,
                beta,
                value,
            }
        })
        .filter(|g| !g.value.is_zero())
        .collect();
    SaturationResult {
        order: n,
        generators,
    }
}

/// `min { |beta| : D^beta(f) not in P }`, searched by increasing order
/// within the exponent envelope of `f`; infinite only for `f = 0`.
pub fn order_at(f: &Polynomial, prime: &PrimeSpec) -> Result<OrderValue> {
    if f.is_zero() {
        return Ok(OrderValue::Infinite);
    }
    let tester = prime.membership()?;
    let caps: Vec<(u32, u32)> = f.exponent_envelope().iter().collect();
    for beta in multiindices_bounded(&caps, f.total_degree()) {
        if !tester.contains(&hasse(f, &beta)) {
            return Ok(OrderValue::Finite(beta.order()));
        }
    }
    // Unreachable for a genuine prime: D^alpha(f) is a nonzero scalar for
    // any maximal-degree term exponent alpha. A dishonestly asserted
    // "prime" that contains units ends up here.
    Ok(OrderValue::Infinite)
}

/// Order of an ideal at a prime: the minimum of the generator orders.
pub fn ideal_order_at(ideal: &Ideal, prime: &PrimeSpec) -> Result<OrderValue> {
    let mut best = OrderValue::Infinite;
    for f in ideal.generators() {
        best = best.min(order_at(f, prime)?);
    }
    Ok(best)
}

/// The ideal cutting out the locus of points where `I` has order at least
/// `N`: the saturation by operators of order at most `N - 1`, raw (no
/// Groebner reduction), keeping provenance for the callers that want it.
pub fn order_locus(ideal: &Ideal, n: u64) -> Ideal {
    assert!(n >= 1, "the order threshold must be at least 1");
    let sat = diff_saturate(ideal, n - 1);
    Ideal::new(ideal.ring(), sat.polynomials()).expect("saturation stays in the ring")
}

/// The descending chain of order loci for `N = 1, ..., n_max`.
pub fn stratify(ideal: &Ideal, n_max: u64) -> Vec<(u64, Ideal)> {
    assert!(n_max >= 1, "the stratification depth must be at least 1");
    (1..=n_max).map(|n| (n, order_locus(ideal, n))).collect()
}

/// Independent order oracle at a rational point: substitutes
/// `x_i -> x_i + a_i`, expands exactly over `k = F_p(v)`, and returns the
/// minimal total geometric degree of the surviving terms (base parameters
/// are units in `k`). Contract: equals `order_at` at the same point.
pub fn oracle_order_at_point(f: &Polynomial, point: &Point) -> OrderValue {
    if f.is_zero() {
        return OrderValue::Infinite;
    }
    let ring = f.ring();
    type Expansion = std::collections::BTreeMap<MultiIndex, Fraction>;

    fn mul_into(a: &Expansion, b: &Expansion) -> Expansion {
        let mut out = Expansion::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m = ma.add(mb);
                let c = ca * cb;
                match out.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get() + &c;
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    let mut shifted = Expansion::new();
    for (alpha, c) in f.terms() {
        let geo = alpha.restrict(|p| ring.is_geometric(p));
        let par = alpha.restrict(|p| !ring.is_geometric(p));
        let base = Fraction::from_polynomial(Polynomial::term(ring, par, c))
            .expect("parameter part is parameter-only");
        let mut acc = Expansion::from([(MultiIndex::zero(), base)]);
        for (pos, exp) in geo.iter() {
            let mut factor = Expansion::from([(MultiIndex::unit(pos), Fraction::one(ring))]);
            let a = point.coord(pos);
            if !a.is_zero() {
                factor.insert(MultiIndex::zero(), a.clone());
            }
            for _ in 0..exp {
                acc = mul_into(&acc, &factor);
            }
        }
        for (m, c) in acc {
            match shifted.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
    }
    shifted.retain(|_, c| !c.is_zero());
    match shifted.keys().map(MultiIndex::order).min() {
        Some(n) => OrderValue::Finite(n),
        None => OrderValue::Infinite,
    }
}
