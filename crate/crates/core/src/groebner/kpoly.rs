//! Polynomials in the geometric variables with coefficients in
//! `k = F_p(v)`: the working representation of the Buchberger engine.

use std::collections::BTreeMap;

use crate::polyring::{Fraction, FpScalar, MultiIndex, Polynomial, RingContext};
use crate::polyring::gcd;

use super::MonomialOrder;

/// Sparse polynomial in `k[x_1, ..., x_n]`. Keys are supported on
/// geometric positions only; values are nonzero fractions in the base
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct KPoly {
    ring: RingContext,
    terms: BTreeMap<MultiIndex, Fraction>,
}

impl KPoly {
    pub fn zero(ring: &RingContext) -> Self {
        KPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Splits each term of `f` into geometric monomial times parameter
    /// coefficient.
    pub fn from_polynomial(f: &Polynomial) -> Self {
        let ring = f.ring().clone();
        let mut out = KPoly::zero(&ring);
        for (alpha, c) in f.terms() {
            let geo = alpha.restrict(|p| ring.is_geometric(p));
            let par = alpha.restrict(|p| !ring.is_geometric(p));
            let coeff = Fraction::from_polynomial(Polynomial::term(&ring, par, c))
                .expect("parameter part is parameter-only");
            out.add_term(geo, coeff);
        }
        out
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Fraction)> + '_ {
        self.terms.iter()
    }

    fn add_term(&mut self, mono: MultiIndex, coeff: Fraction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Leading term under the given order.
    pub fn leading(&self, ord: MonomialOrder) -> Option<(&MultiIndex, &Fraction)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| ord.cmp(self.ring(), a, b))
    }

    pub fn sub(&self, other: &KPoly) -> KPoly {
        let mut out = self.clone();
        for (mono, coeff) in other.terms() {
            out.add_term(mono.clone(), coeff.neg());
        }
        out
    }

    /// Multiplication by the single term `coeff * x^mono`.
    pub fn mul_term(&self, mono: &MultiIndex, coeff: &Fraction) -> KPoly {
        let mut out = KPoly::zero(&self.ring);
        if coeff.is_zero() {
            return out;
        }
        for (m, c) in self.terms() {
            out.terms.insert(m.add(mono), c * coeff);
        }
        out
    }

    /// Scales so the leading coefficient is 1 in `k`.
    pub fn monic(&self, ord: MonomialOrder) -> KPoly {
        match self.leading(ord) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient nonzero");
                let mut out = KPoly::zero(&self.ring);
                for (m, c) in self.terms() {
                    out.terms.insert(m.clone(), c * &inv);
                }
                out
            }
        }
    }

    /// Full normal form (head and tail reduction) against `basis`. The
    /// reducer with the smallest index is always chosen, so the result is
    /// deterministic; it is unique whenever `basis` is a Groebner basis.
    pub fn reduce(&self, basis: &[KPoly], ord: MonomialOrder) -> KPoly {
        let mut remainder = KPoly::zero(&self.ring);
        let mut current = self.clone();
        'outer: while let Some((lm, lc)) = current.leading(ord) {
            let (lm, lc) = (lm.clone(), lc.clone());
            for g in basis {
                let Some((glm, glc)) = g.leading(ord) else {
                    continue;
                };
                if glm.divides(&lm) {
                    let factor_mono = lm.checked_sub(glm).expect("divisibility checked");
                    let factor_coeff = lc.try_div(glc).expect("leading coefficient nonzero");
                    current = current.sub(&g.mul_term(&factor_mono, &factor_coeff));
                    continue 'outer;
                }
            }
            // Leading term irreducible: move it to the remainder.
            remainder.terms.insert(lm.clone(), lc);
            current.terms.remove(&lm);
        }
        remainder
    }

    /// S-polynomial of two monic-or-not inputs.
    pub fn s_polynomial(f: &KPoly, g: &KPoly, ord: MonomialOrder) -> KPoly {
        let (flm, flc) = f.leading(ord).expect("nonzero");
        let (glm, glc) = g.leading(ord).expect("nonzero");
        let lcm = flm.sup(glm);
        let fm = lcm.checked_sub(flm).unwrap();
        let gm = lcm.checked_sub(glm).unwrap();
        let finv = flc.inv().expect("nonzero leading coefficient");
        let ginv = glc.inv().expect("nonzero leading coefficient");
        f.mul_term(&fm, &finv).sub(&g.mul_term(&gm, &ginv))
    }

    /// Deterministic denominator-cleared image in `F_p[v, x]`: multiply by
    /// the monic lcm of the denominators, divide out the parameter
    /// content, and normalize the unit so the canonical leading
    /// coefficient is monic.
    pub fn clear_denominators(&self) -> Polynomial {
        let ring = &self.ring;
        if self.is_zero() {
            return Polynomial::zero(ring);
        }
        let mut lcm = Polynomial::one(ring);
        for (_, coeff) in self.terms() {
            let g = gcd::poly_gcd(&lcm, coeff.den());
            lcm = &lcm * &gcd::div_exact(coeff.den(), &g).expect("gcd divides");
        }
        let mut cleared = Polynomial::zero(ring);
        for (mono, coeff) in self.terms() {
            let scaled = coeff.num() * &gcd::div_exact(&lcm, coeff.den()).expect("lcm divides");
            cleared = &cleared + &scaled.mul_term(mono, FpScalar::one(ring.modulus()));
        }
        // Parameter content of the cleared polynomial.
        let mut content = Polynomial::zero(ring);
        for (_, c) in KPoly::from_polynomial(&cleared).terms() {
            content = gcd::poly_gcd(&content, c.num());
        }
        let primitive = gcd::div_exact(&cleared, &content).expect("content divides");
        // Fix the remaining unit: make the coefficient of the canonical
        // leading geometric monomial monic as a parameter polynomial.
        let view = KPoly::from_polynomial(&primitive);
        let lead = view
            .terms()
            .map(|(m, _)| m.clone())
            .max()
            .expect("nonzero");
        let lead_coeff = view.terms.get(&lead).unwrap();
        let unit = gcd::leading_unit(lead_coeff.num()).inv();
        primitive.scale(unit)
    }
}
