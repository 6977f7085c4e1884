//! Residues modulo a prime p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of the prime field `F_p`, stored as a residue in `[0, p)`.
///
/// The modulus travels with the value; mixing moduli is a programming error
/// and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    modulus: u64,
}

impl FpScalar {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        FpScalar {
            value: value % modulus,
            modulus,
        }
    }

    /// Reduces a possibly negative integer.
    pub fn from_i64(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        FpScalar::new(value.rem_euclid(m) as u64, modulus)
    }

    pub fn zero(modulus: u64) -> Self {
        FpScalar::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        FpScalar::new(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = FpScalar::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    ///
    /// Panics on zero.
    pub fn inv(self) -> Self {
        assert!(!self.is_zero(), "inverse of zero in F_p");
        self.pow(self.modulus - 2)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpScalar::new(self.value + rhs.value, self.modulus)
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        FpScalar::new(self.value + self.modulus - rhs.value, self.modulus)
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
        // p < 2^16, so the product fits comfortably in u64.
        FpScalar::new(self.value * rhs.value, self.modulus)
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar::new(self.modulus - self.value, self.modulus)
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `C(n, k) mod p` for a single digit pair with `n, k < p`, by the
/// multiplicative formula with modular inverses.
pub(crate) fn small_binom_mod_p(n: u64, k: u64, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = FpScalar::one(p);
    for i in 1..=k {
        acc = acc * FpScalar::new(n - k + i, p) * FpScalar::new(i, p).inv();
    }
    acc.value()
}

/// `C(n, k) mod p` by Lucas' theorem: the product of the digitwise binomial
/// coefficients in base p.
pub(crate) fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1;
    while n > 0 || k > 0 {
        let nd = n % p;
        let kd = k % p;
        if kd > nd {
            return 0;
        }
        acc = acc * small_binom_mod_p(nd, kd, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let p = 5;
        let a = FpScalar::new(3, p);
        let b = FpScalar::new(4, p);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a - b).value(), 4);
        assert_eq!((a * b).value(), 2);
        assert_eq!((-a).value(), 2);
        assert_eq!((a * a.inv()).value(), 1);
        assert_eq!(FpScalar::from_i64(-1, p).value(), 4);
    }

    // Exact integer binomial, small enough to stay in u128.
    fn binom_exact(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 1..=k {
            acc = acc * (n - k + i) as u128 / i as u128;
        }
        acc
    }

    #[test]
    fn lucas_matches_exact_binomials() {
        for p in [2u64, 3, 5, 7] {
            for n in 0..30u64 {
                for k in 0..=n {
                    assert_eq!(
                        binom_mod_p(n, k, p),
                        (binom_exact(n, k) % p as u128) as u64,
                        "C({n},{k}) mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn binomial_of_prime_row_vanishes() {
        for p in [2u64, 3, 5] {
            for j in 1..p {
                assert_eq!(binom_mod_p(p, j, p), 0);
            }
        }
    }
}
