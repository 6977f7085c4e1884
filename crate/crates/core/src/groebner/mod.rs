//! A Buchberger engine over `k = Frac(F_p[v])`.
//!
//! Coefficient arithmetic happens in the fraction field with gcd
//! normalization at every reduction step; clearing denominators globally
//! would change leading terms. The engine supplies normal forms, ideal
//! membership and equality, combinatorial Krull dimension, and exact
//! matrix minors — the decision kernel behind the rank-mod-P and
//! order-at-prime tests.

pub(crate) mod kpoly;

use itertools::Itertools;
use rayon::prelude::*;

use crate::polyring::{MultiIndex, Polynomial, RingContext};
use crate::{Error, Result};
use kpoly::KPoly;

/// A monomial order on the geometric exponents. Base parameters live in
/// the coefficient field and never take part in a comparison; the block
/// order (parameters last) therefore agrees with grevlex on the geometric
/// block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    Grevlex,
    Lex,
    Block,
}

impl MonomialOrder {
    pub fn cmp(
        self,
        ring: &RingContext,
        a: &MultiIndex,
        b: &MultiIndex,
    ) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self {
            MonomialOrder::Grevlex | MonomialOrder::Block => {
                match a.order().cmp(&b.order()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                // Reverse lexicographic tie-break: the monomial with the
                // smaller exponent on the last differing variable wins.
                for pos in ring.geometric_positions().rev() {
                    match a.get(pos).cmp(&b.get(pos)) {
                        Ordering::Equal => {}
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Lex => {
                for pos in ring.geometric_positions() {
                    match a.get(pos).cmp(&b.get(pos)) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::Grevlex => "grevlex",
            MonomialOrder::Lex => "lex",
            MonomialOrder::Block => "block",
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            "block" => Ok(MonomialOrder::Block),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}

impl std::fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// An ideal of `k[x]` given by generators in `F_p[v, x]`. Zero generators
/// are dropped at construction; the zero ideal has an empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    ring: RingContext,
    generators: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &RingContext, generators: impl IntoIterator<Item = Polynomial>) -> Result<Self> {
        let mut gens = Vec::new();
        for g in generators {
            if g.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens,
        })
    }

    pub fn zero(ring: &RingContext) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
        }
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A reduced Groebner basis: interreduced, monic leading coefficients,
/// elements sorted by leading monomial. For a fixed order it is uniquely
/// determined by the ideal.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: RingContext,
    order: MonomialOrder,
    elements: Vec<KPoly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Denominator-cleared canonical images of the basis elements, for
    /// display and serialization.
    pub fn elements_cleared(&self) -> Vec<Polynomial> {
        self.elements.iter().map(KPoly::clear_denominators).collect()
    }

    /// True iff the basis cuts out the unit ideal.
    pub fn is_unit_ideal(&self) -> bool {
        self.elements
            .iter()
            .any(|g| g.leading(self.order).is_some_and(|(m, _)| m.is_zero()))
    }

    /// Complete multivariate reduction of `f`; zero iff `f` lies in the
    /// ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        let nf = KPoly::from_polynomial(f).reduce(&self.elements, self.order);
        Ok(nf.clear_denominators())
    }

    pub(crate) fn reduces_to_zero(&self, f: &KPoly) -> bool {
        f.reduce(&self.elements, self.order).is_zero()
    }

    /// Audits the Buchberger criterion directly: every S-polynomial of
    /// every pair reduces to zero. No selection criteria are applied, so
    /// this is an independent check of the construction.
    pub fn verify(&self) -> bool {
        for i in 0..self.elements.len() {
            for j in (i + 1)..self.elements.len() {
                let s = KPoly::s_polynomial(&self.elements[i], &self.elements[j], self.order);
                if !s.reduce(&self.elements, self.order).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Buchberger's algorithm with the normal selection strategy (smallest
/// lcm first) and the product and chain criteria, followed by
/// interreduction. Deterministic for fixed input.
pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> GroebnerBasis {
    let ring = ideal.ring().clone();
    let mut basis: Vec<KPoly> = ideal
        .generators()
        .iter()
        .map(KPoly::from_polynomial)
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(order))
        .collect();

    let lm = |g: &KPoly| -> MultiIndex { g.leading(order).expect("basis elements nonzero").0.clone() };

    // Pair queue keyed by (i, j) with i < j; `treated` records pairs that
    // have been discarded or processed, for the chain criterion.
    let mut queue: Vec<(usize, usize)> = (0..basis.len()).tuple_combinations().collect();
    let mut treated: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();

    while !queue.is_empty() {
        // Normal strategy: smallest lcm in the order, ties by index pair.
        let (qi, _) = queue
            .iter()
            .enumerate()
            .min_by(|(_, &(i1, j1)), (_, &(i2, j2))| {
                let l1 = lm(&basis[i1]).sup(&lm(&basis[j1]));
                let l2 = lm(&basis[i2]).sup(&lm(&basis[j2]));
                order
                    .cmp(&ring, &l1, &l2)
                    .then_with(|| (i1, j1).cmp(&(i2, j2)))
            })
            .map(|(qi, &pair)| (qi, pair))
            .expect("queue nonempty");
        let (i, j) = queue.swap_remove(qi);
        treated.insert((i, j));

        let lmi = lm(&basis[i]);
        let lmj = lm(&basis[j]);
        // Product criterion: coprime leading monomials reduce to zero.
        if lmi.disjoint(&lmj) {
            continue;
        }
        // Chain criterion: some k with lm_k | lcm(i,j) and both (i,k),
        // (k,j) already treated.
        let lcm_ij = lmi.sup(&lmj);
        let chained = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let pik = (i.min(k), i.max(k));
            let pkj = (j.min(k), j.max(k));
            lm(&basis[k]).divides(&lcm_ij) && treated.contains(&pik) && treated.contains(&pkj)
        });
        if chained {
            continue;
        }

        let s = KPoly::s_polynomial(&basis[i], &basis[j], order);
        let r = s.reduce(&basis, order);
        if !r.is_zero() {
            let r = r.monic(order);
            let new_idx = basis.len();
            basis.push(r);
            for t in 0..new_idx {
                queue.push((t, new_idx));
            }
        }
    }

    // Minimalize: drop elements whose leading monomial is divisible by
    // another's.
    let mut keep: Vec<KPoly> = Vec::new();
    let mut sorted = basis;
    sorted.sort_by(|a, b| order.cmp(&ring, &lm(a), &lm(b)));
    for g in sorted {
        let m = lm(&g);
        if !keep.iter().any(|h| lm(h).divides(&m)) {
            keep.push(g);
        }
    }

    // Tail-reduce until stable.
    loop {
        let mut changed = false;
        for i in 0..keep.len() {
            let others: Vec<KPoly> = keep
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let reduced = keep[i].reduce(&others, order).monic(order);
            if reduced != keep[i] {
                keep[i] = reduced;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    keep.sort_by(|a, b| order.cmp(&ring, &lm(a), &lm(b)));

    GroebnerBasis {
        ring,
        order,
        elements: keep,
    }
}

/// Ideal membership through the normal form.
pub fn member(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    if f.ring() != ideal.ring() {
        return Err(Error::RingMismatch);
    }
    let gb = buchberger(ideal, MonomialOrder::Grevlex);
    Ok(gb.reduces_to_zero(&KPoly::from_polynomial(f)))
}

/// Equality by mutual membership of the generators.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch);
    }
    let gb_a = buchberger(a, MonomialOrder::Grevlex);
    let gb_b = buchberger(b, MonomialOrder::Grevlex);
    let a_in_b = a
        .generators()
        .iter()
        .all(|g| gb_b.reduces_to_zero(&KPoly::from_polynomial(g)));
    let b_in_a = b
        .generators()
        .iter()
        .all(|g| gb_a.reduces_to_zero(&KPoly::from_polynomial(g)));
    Ok(a_in_b && b_in_a)
}

/// Krull dimension of `k[x]/I`, computed combinatorially from the leading
/// term ideal: the largest set `S` of variables such that no leading
/// monomial is supported inside `S`.
///
/// Correct whenever the leading-term reading is (e.g. for the
/// equidimensional inputs the callers assert); the zero ideal has
/// dimension `n`.
pub fn dimension(ideal: &Ideal) -> Result<u64> {
    let ring = ideal.ring();
    let n = ring.num_vars();
    if ideal.is_zero() {
        return Ok(n as u64);
    }
    let gb = buchberger(ideal, MonomialOrder::Grevlex);
    if gb.is_unit_ideal() {
        return Err(Error::UnitIdeal);
    }
    let leads: Vec<MultiIndex> = gb
        .elements
        .iter()
        .map(|g| g.leading(MonomialOrder::Grevlex).unwrap().0.clone())
        .collect();
    let positions: Vec<u32> = ring.geometric_positions().collect();
    let mut best = 0u64;
    for mask in 0u64..(1 << n) {
        let subset: Vec<u32> = positions
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let independent = leads
            .iter()
            .all(|m| !m.support().all(|p| subset.contains(&p)));
        if independent {
            best = best.max(subset.len() as u64);
        }
    }
    Ok(best)
}

/// Exact determinant by cofactor expansion along the first row.
pub(crate) fn determinant(rows: &[Vec<Polynomial>], ring: &RingContext) -> Polynomial {
    let n = rows.len();
    if n == 0 {
        return Polynomial::one(ring);
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring);
    for (col, entry) in rows[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> = rows[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cofactor = &determinant(&minor, ring) * entry;
        if col % 2 == 0 {
            acc = &acc + &cofactor;
        } else {
            acc = &acc - &cofactor;
        }
    }
    acc
}

/// All `r x r` minor determinants of the matrix, ordered lexicographically
/// by (row tuple, column tuple).
pub fn minors(matrix: &[Vec<Polynomial>], r: usize) -> Result<Vec<Polynomial>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    if r == 0 || r > rows || r > cols {
        return Err(Error::BadSize { r, rows, cols });
    }
    let ring = matrix[0][0].ring().clone();
    let selections: Vec<(Vec<usize>, Vec<usize>)> = (0..rows)
        .combinations(r)
        .cartesian_product((0..cols).combinations(r))
        .collect();
    Ok(selections
        .into_par_iter()
        .map(|(ri, ci)| {
            let sub: Vec<Vec<Polynomial>> = ri
                .iter()
                .map(|&i| ci.iter().map(|&j| matrix[i][j].clone()).collect())
                .collect();
            determinant(&sub, &ring)
        })
        .collect())
}
