//! Sparse exact polynomial arithmetic over `F_p` with a distinguished
//! absolute p-basis `{v_1, ..., v_m, x_1, ..., x_n}`.
//!
//! Internally everything lives in the polynomial ring
//! `F_p[v_1, ..., v_m, x_1, ..., x_n]`; the field `k = F_p(v)` only appears
//! through [`Fraction`], whose numerator and denominator are supported on
//! the base parameters. Keeping the core denominator-free means the
//! differential operators never have to touch fractions.

mod fraction;
pub(crate) mod gcd;
mod multiindex;
mod poly;
mod scalar;

pub use fraction::{Fraction, Point};
pub use multiindex::{multiindices_bounded, MultiIndex};
pub use poly::{lucas_binomial, Polynomial};
pub use scalar::FpScalar;

use std::sync::Arc;

use crate::{Error, Result};

/// Which half of the basis an element belongs to.
///
/// Base parameters realize a p-basis of the ground field `k = F_p(v)`;
/// geometric variables are the affine coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisRole {
    BaseParameter,
    GeometricVariable,
}

/// One element of the canonical absolute p-basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    name: String,
    role: BasisRole,
    position: u32,
}

impl BasisElement {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> BasisRole {
        self.role
    }

    /// Ordinal of the element in the ring's basis.
    pub fn position(&self) -> u32 {
        self.position
    }
}

#[derive(Debug, PartialEq, Eq)]
struct RingInner {
    modulus: u64,
    basis: Vec<BasisElement>,
    num_params: u32,
}

/// The ambient ring `F_p[v_1, ..., v_m, x_1, ..., x_n]` together with its
/// canonical absolute p-basis (parameters first, then variables).
///
/// Contexts are cheap to clone and immutable once built; all values carry
/// one and operations require the contexts to agree.
#[derive(Debug, Clone)]
pub struct RingContext {
    inner: Arc<RingInner>,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for RingContext {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingContext {
    /// Builds the ring for the prime `p` with the given base parameters and
    /// geometric variables. The basis order is parameters followed by
    /// variables, and this order is fixed for the lifetime of the context.
    ///
    /// Both name lists may be empty; `A = F_p` is a legal degenerate ring.
    pub fn new<S: AsRef<str>>(p: u64, base_params: &[S], variables: &[S]) -> Result<Self> {
        if p >= 1 << 16 {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p));
        }
        let mut basis = Vec::with_capacity(base_params.len() + variables.len());
        let mut seen = std::collections::HashSet::new();
        let mut push = |name: &str, role: BasisRole, basis: &mut Vec<BasisElement>| -> Result<()> {
            if !valid_name(name) {
                return Err(Error::InvalidName(name.to_string()));
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::DuplicateName(name.to_string()));
            }
            let position = basis.len() as u32;
            basis.push(BasisElement {
                name: name.to_string(),
                role,
                position,
            });
            Ok(())
        };
        for name in base_params {
            push(name.as_ref(), BasisRole::BaseParameter, &mut basis)?;
        }
        for name in variables {
            push(name.as_ref(), BasisRole::GeometricVariable, &mut basis)?;
        }
        let num_params = base_params.len() as u32;
        Ok(RingContext {
            inner: Arc::new(RingInner {
                modulus: p,
                basis,
                num_params,
            }),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.inner.basis
    }

    pub fn basis_len(&self) -> u32 {
        self.inner.basis.len() as u32
    }

    pub fn num_params(&self) -> u32 {
        self.inner.num_params
    }

    pub fn num_vars(&self) -> u32 {
        self.basis_len() - self.inner.num_params
    }

    pub fn element(&self, position: u32) -> &BasisElement {
        &self.inner.basis[position as usize]
    }

    pub fn position_of(&self, name: &str) -> Option<u32> {
        self.inner
            .basis
            .iter()
            .position(|b| b.name == name)
            .map(|i| i as u32)
    }

    pub fn is_geometric(&self, position: u32) -> bool {
        position >= self.inner.num_params
    }

    /// Positions of the geometric variables, in basis order.
    pub fn geometric_positions(&self) -> std::ops::Range<u32> {
        self.inner.num_params..self.basis_len()
    }

    /// Positions of the base parameters, in basis order.
    pub fn parameter_positions(&self) -> std::ops::Range<u32> {
        0..self.inner.num_params
    }

    /// Internal extension by one shift variable per requested position,
    /// appended after the existing basis. Shift names use `#`, which the
    /// public grammar cannot produce, so no collision with user names is
    /// possible. Returns the extended ring and the shift position paired
    /// with each requested position.
    pub(crate) fn with_shifts(&self, positions: &[u32]) -> (RingContext, Vec<(u32, u32)>) {
        let mut basis = self.inner.basis.clone();
        let mut pairs = Vec::with_capacity(positions.len());
        for &pos in positions {
            let shift_pos = basis.len() as u32;
            basis.push(BasisElement {
                name: format!("t#{}", self.element(pos).name()),
                role: self.element(pos).role(),
                position: shift_pos,
            });
            pairs.push((pos, shift_pos));
        }
        let ext = RingContext {
            inner: Arc::new(RingInner {
                modulus: self.inner.modulus,
                basis,
                num_params: self.inner.num_params,
            }),
        };
        (ext, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_order_is_params_then_vars() {
        let ring = RingContext::new(2, &["v"], &["x", "y"]).unwrap();
        let names: Vec<_> = ring.basis().iter().map(|b| b.name()).collect();
        assert_eq!(names, ["v", "x", "y"]);
        assert_eq!(ring.element(0).role(), BasisRole::BaseParameter);
        assert_eq!(ring.element(1).role(), BasisRole::GeometricVariable);
        assert_eq!(ring.num_params(), 1);
        assert_eq!(ring.num_vars(), 2);
    }

    #[test]
    fn perfect_base_field_has_variable_only_basis() {
        let ring = RingContext::new(3, &[], &["x"]).unwrap();
        let names: Vec<_> = ring.basis().iter().map(|b| b.name()).collect();
        assert_eq!(names, ["x"]);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(
            RingContext::new(4, &["v"], &["x"]).unwrap_err(),
            Error::CompositeModulus(4)
        );
        assert_eq!(
            RingContext::new(1, &[], &["x"]).unwrap_err(),
            Error::CompositeModulus(1)
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            RingContext::new(2, &["v"], &["v", "x"]).unwrap_err(),
            Error::DuplicateName("v".into())
        );
    }

    #[test]
    fn names_must_be_identifiers() {
        assert_eq!(
            RingContext::new(2, &["v"], &["2x"]).unwrap_err(),
            Error::InvalidName("2x".into())
        );
    }

    #[test]
    fn degenerate_ring_allowed() {
        let ring = RingContext::new(5, &[] as &[&str], &[]).unwrap();
        assert_eq!(ring.basis_len(), 0);
    }

    #[test]
    fn equality_is_structural() {
        let a = RingContext::new(2, &["v"], &["x"]).unwrap();
        let b = RingContext::new(2, &["v"], &["x"]).unwrap();
        let c = RingContext::new(3, &["v"], &["x"]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
