//! Multivariate gcd over `F_p` by recursive content/primitive-part
//! computation with a primitive pseudo-remainder sequence.
//!
//! Adequate at desk scale (a handful of base parameters); the fraction
//! field only ever sees polynomials in the parameters.

use std::collections::BTreeMap;

use super::multiindex::MultiIndex;
use super::poly::Polynomial;
use super::scalar::FpScalar;

/// Scales so the coefficient of the largest term (in the canonical index
/// order) is 1. Zero stays zero.
pub(crate) fn make_monic(f: &Polynomial) -> Polynomial {
    match f.terms().last() {
        None => f.clone(),
        Some((_, c)) => f.scale(c.inv()),
    }
}

/// Leading scalar in the canonical index order (1 for the zero polynomial).
pub(crate) fn leading_unit(f: &Polynomial) -> FpScalar {
    match f.terms().last() {
        None => FpScalar::one(f.ring().modulus()),
        Some((_, c)) => c,
    }
}

fn degree_in(f: &Polynomial, var: u32) -> u32 {
    f.terms().map(|(idx, _)| idx.get(var)).max().unwrap_or(0)
}

/// Views `f` as a univariate polynomial in `var`; the values do not
/// involve `var`.
fn univariate_view(f: &Polynomial, var: u32) -> BTreeMap<u32, Polynomial> {
    let ring = f.ring().clone();
    let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (idx, c) in f.terms() {
        let d = idx.get(var);
        let rest = idx.restrict(|p| p != var);
        let entry = out.entry(d).or_insert_with(|| Polynomial::zero(&ring));
        *entry = &*entry + &Polynomial::term(&ring, rest, c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn from_univariate(ring: &Polynomial, var: u32, view: &BTreeMap<u32, Polynomial>) -> Polynomial {
    let ring = ring.ring();
    let mut acc = Polynomial::zero(ring);
    for (&d, coeff) in view {
        let t = MultiIndex::from_pairs([(var, d)]);
        acc = &acc + &coeff.mul_term(&t, FpScalar::one(ring.modulus()));
    }
    acc
}

/// Exact division; `None` when `g` does not divide `f`.
pub(crate) fn div_exact(f: &Polynomial, g: &Polynomial) -> Option<Polynomial> {
    assert!(!g.is_zero(), "division by zero polynomial");
    if f.is_zero() {
        return Some(f.clone());
    }
    if let Some(c) = g.constant_value() {
        return Some(f.scale(c.inv()));
    }
    let var = g
        .exponent_envelope()
        .max_position()
        .expect("nonconstant polynomial has a maximal variable");
    let dg = degree_in(g, var);
    let gview = univariate_view(g, var);
    let lead_g = &gview[&dg];
    let mut fview = univariate_view(f, var);
    let mut quot: BTreeMap<u32, Polynomial> = BTreeMap::new();
    while let Some((&df, _)) = fview.iter().next_back() {
        if df < dg {
            return None;
        }
        let lead_f = fview[&df].clone();
        let q = div_exact(&lead_f, lead_g)?;
        // f -= q * t^(df-dg) * g
        for (&d, coeff) in &gview {
            let entry = fview
                .entry(d + df - dg)
                .or_insert_with(|| Polynomial::zero(f.ring()));
            *entry = &*entry - &(coeff * &q);
        }
        fview.retain(|_, c| !c.is_zero());
        quot.insert(df - dg, q);
    }
    Some(from_univariate(f, var, &quot))
}

fn content_in(f: &Polynomial, var: u32) -> Polynomial {
    let view = univariate_view(f, var);
    let mut acc = Polynomial::zero(f.ring());
    for coeff in view.values() {
        acc = poly_gcd(&acc, coeff);
        if acc.constant_value().is_some() && !acc.is_zero() {
            break;
        }
    }
    acc
}

/// Pseudo-remainder of `a` by `b` in the variable `var` (both must involve
/// `var` with `deg_var a >= deg_var b`).
fn pseudo_rem(a: &Polynomial, b: &Polynomial, var: u32) -> Polynomial {
    let db = degree_in(b, var);
    let bview = univariate_view(b, var);
    let lead_b = bview[&db].clone();
    let mut rview = univariate_view(a, var);
    loop {
        let Some((&dr, _)) = rview.iter().next_back() else {
            break;
        };
        if dr < db {
            break;
        }
        let lead_r = rview[&dr].clone();
        // r <- lead_b * r - lead_r * t^(dr-db) * b
        for coeff in rview.values_mut() {
            *coeff = &lead_b * coeff;
        }
        for (&d, coeff) in &bview {
            let entry = rview
                .entry(d + dr - db)
                .or_insert_with(|| Polynomial::zero(a.ring()));
            *entry = &*entry - &(&lead_r * coeff);
        }
        rview.retain(|_, c| !c.is_zero());
    }
    from_univariate(a, var, &rview)
}

/// Monic gcd. `poly_gcd(f, 0) = monic(f)`, and the gcd of two nonzero
/// polynomials with a unit in common is 1.
pub(crate) fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return make_monic(g);
    }
    if g.is_zero() {
        return make_monic(f);
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(f.ring());
    }
    let var = f
        .exponent_envelope()
        .sup(&g.exponent_envelope())
        .max_position()
        .expect("nonconstant input");
    let (df, dg) = (degree_in(f, var), degree_in(g, var));
    if df == 0 || dg == 0 {
        // var appears in only one of them: gcd divides the content side.
        let (with_var, without) = if df == 0 { (g, f) } else { (f, g) };
        return poly_gcd(&content_in(with_var, var), without);
    }
    let cf = content_in(f, var);
    let cg = content_in(g, var);
    let pf = div_exact(f, &cf).expect("content divides");
    let pg = div_exact(g, &cg).expect("content divides");
    let c = poly_gcd(&cf, &cg);
    let (mut a, mut b) = if df >= dg { (pf, pg) } else { (pg, pf) };
    loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            break;
        }
        if degree_in(&r, var) == 0 {
            // Primitive parts are coprime in var.
            b = Polynomial::one(f.ring());
            break;
        }
        let rc = content_in(&r, var);
        a = b;
        b = div_exact(&r, &rc).expect("content divides");
    }
    let b_primitive = if b.is_constant() {
        Polynomial::one(f.ring())
    } else {
        let cb = content_in(&b, var);
        div_exact(&b, &cb).expect("content divides")
    };
    make_monic(&(&c * &b_primitive))
}
