//! The fraction field `k = F_p(v_1, ..., v_m)` of the parameter subring,
//! and rational points with coordinates in `k`.

use std::collections::BTreeMap;

use super::gcd::{div_exact, leading_unit, poly_gcd};
use super::poly::Polynomial;
use super::RingContext;
use crate::{Error, Result};

/// An element of `F_p(v)`: a reduced fraction of polynomials supported on
/// the base parameters.
///
/// Invariants: the denominator is nonzero and monic, and numerator and
/// denominator are coprime. Equality is therefore structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fraction {
    num: Polynomial,
    den: Polynomial,
}

impl Fraction {
    fn check_parameter_only(p: &Polynomial) -> Result<()> {
        for (idx, _) in p.terms() {
            for pos in idx.support() {
                if p.ring().is_geometric(pos) {
                    return Err(Error::NotBaseField(p.ring().element(pos).name().to_string()));
                }
            }
        }
        Ok(())
    }

    /// Wraps a parameter-only polynomial with denominator 1.
    pub fn from_polynomial(num: Polynomial) -> Result<Self> {
        Self::check_parameter_only(&num)?;
        let den = Polynomial::one(num.ring());
        Ok(Fraction { num, den })
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.ring() != den.ring() {
            return Err(Error::RingMismatch);
        }
        Self::check_parameter_only(&num)?;
        Self::check_parameter_only(&den)?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Fraction { num, den }.normalize())
    }

    pub fn zero(ring: &RingContext) -> Self {
        Fraction {
            num: Polynomial::zero(ring),
            den: Polynomial::one(ring),
        }
    }

    pub fn one(ring: &RingContext) -> Self {
        Fraction {
            num: Polynomial::one(ring),
            den: Polynomial::one(ring),
        }
    }

    pub fn from_integer(ring: &RingContext, value: i64) -> Self {
        Fraction {
            num: Polynomial::term(
                ring,
                super::MultiIndex::zero(),
                super::FpScalar::from_i64(value, ring.modulus()),
            ),
            den: Polynomial::one(ring),
        }
    }

    fn normalize(self) -> Self {
        if self.num.is_zero() {
            return Fraction::zero(self.num.ring());
        }
        let g = poly_gcd(&self.num, &self.den);
        let num = div_exact(&self.num, &g).expect("gcd divides numerator");
        let den = div_exact(&self.den, &g).expect("gcd divides denominator");
        let unit = leading_unit(&den).inv();
        Fraction {
            num: num.scale(unit),
            den: den.scale(unit),
        }
    }

    pub fn ring(&self) -> &RingContext {
        self.num.ring()
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == Polynomial::one(self.ring()) && self.den == Polynomial::one(self.ring())
    }

    /// The underlying polynomial when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        if self.den == Polynomial::one(self.ring()) {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Fraction {
        Fraction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Fraction> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.recip())
    }

    pub fn pow(&self, e: u64) -> Fraction {
        Fraction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn try_div(&self, other: &Fraction) -> Result<Fraction> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self * &other.recip())
    }

    fn recip(&self) -> Fraction {
        assert!(!self.is_zero());
        let unit = leading_unit(&self.num).inv();
        Fraction {
            num: self.den.scale(unit),
            den: self.num.scale(unit),
        }
    }
}

impl std::ops::Add<&Fraction> for &Fraction {
    type Output = Fraction;
    fn add(self, rhs: &Fraction) -> Fraction {
        Fraction {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalize()
    }
}

impl std::ops::Sub<&Fraction> for &Fraction {
    type Output = Fraction;
    fn sub(self, rhs: &Fraction) -> Fraction {
        Fraction {
            num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalize()
    }
}

impl std::ops::Mul<&Fraction> for &Fraction {
    type Output = Fraction;
    fn mul(self, rhs: &Fraction) -> Fraction {
        Fraction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalize()
    }
}

/// A rational point of the affine chart: one coordinate in `k = F_p(v)`
/// for every geometric variable. Defines the maximal ideal
/// `<x_i - a_i>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    ring: RingContext,
    coords: BTreeMap<u32, Fraction>,
}

impl Point {
    /// Requires an assignment for every geometric variable of the ring.
    pub fn new<I: IntoIterator<Item = (u32, Fraction)>>(
        ring: &RingContext,
        assignments: I,
    ) -> Result<Self> {
        let mut coords = BTreeMap::new();
        for (pos, value) in assignments {
            if pos >= ring.basis_len() || !ring.is_geometric(pos) {
                let name = if pos < ring.basis_len() {
                    ring.element(pos).name().to_string()
                } else {
                    format!("#{pos}")
                };
                return Err(Error::NotGeometric(name));
            }
            if value.ring() != ring {
                return Err(Error::RingMismatch);
            }
            coords.insert(pos, value);
        }
        for pos in ring.geometric_positions() {
            if !coords.contains_key(&pos) {
                return Err(Error::IncompleteAssignment(
                    ring.element(pos).name().to_string(),
                ));
            }
        }
        Ok(Point {
            ring: ring.clone(),
            coords,
        })
    }

    /// All geometric coordinates zero.
    pub fn origin(ring: &RingContext) -> Self {
        Point::new(
            ring,
            ring.geometric_positions()
                .map(|pos| (pos, Fraction::zero(ring)))
                .collect::<Vec<_>>(),
        )
        .expect("origin assigns every variable")
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn coord(&self, position: u32) -> &Fraction {
        &self.coords[&position]
    }

    pub fn coords(&self) -> impl Iterator<Item = (u32, &Fraction)> + '_ {
        self.coords.iter().map(|(&p, f)| (p, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_polynomial;

    fn ring() -> RingContext {
        RingContext::new(5, &["u", "v"], &["x"]).unwrap()
    }

    fn frac(r: &RingContext, num: &str, den: &str) -> Fraction {
        Fraction::new(
            parse_polynomial(num, r).unwrap(),
            parse_polynomial(den, r).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn normalization_reduces_and_makes_monic() {
        let r = ring();
        // (2u^2 + 2uv) / (3u) = (4u + 4v) / ... -> monic denominator 1 path:
        let f = frac(&r, "2*u^2 + 2*u*v", "3*u");
        assert_eq!(f.den(), &Polynomial::one(&r));
        assert_eq!(f.num(), &parse_polynomial("4*u + 4*v", &r).unwrap());
    }

    #[test]
    fn normalization_is_stable() {
        let r = ring();
        let f = frac(&r, "u + v", "2*v^2 + 2*u*v");
        let again = Fraction::new(f.num().clone(), f.den().clone()).unwrap();
        assert_eq!(f, again);
        // denominator is monic: leading coefficient 1.
        assert_eq!(super::super::gcd::leading_unit(f.den()).value(), 1);
    }

    #[test]
    fn zero_denominator_rejected() {
        let r = ring();
        let z = Polynomial::zero(&r);
        let one = Polynomial::one(&r);
        assert_eq!(Fraction::new(one, z).unwrap_err(), Error::ZeroDenominator);
    }

    #[test]
    fn geometric_variables_rejected() {
        let r = ring();
        let x = parse_polynomial("x", &r).unwrap();
        assert_eq!(
            Fraction::from_polynomial(x).unwrap_err(),
            Error::NotBaseField("x".into())
        );
    }

    #[test]
    fn arithmetic() {
        let r = ring();
        let a = frac(&r, "1", "u");
        let b = frac(&r, "1", "v");
        let sum = &a + &b;
        assert_eq!(sum, frac(&r, "u + v", "u*v"));
        let prod = &a * &b;
        assert_eq!(prod, frac(&r, "1", "u*v"));
        let quot = a.try_div(&b).unwrap();
        assert_eq!(quot, frac(&r, "v", "u"));
        assert!((&a - &a).is_zero());
    }
}
