//! The extended Jacobian criterion for regularity over non-perfect fields.
//!
//! For `C = A/J` with `J = <f_1, ..., f_s>` and a prime `P` containing `J`
//! with `height(J A_P) = r`, the localization `C_P` is regular exactly
//! when the matrix of partials of the `f_i` with respect to the *whole*
//! absolute p-basis — base parameters included — has rank `r` modulo `P`.
//! The height `r` is always supplied by the caller;
//! [`crate::groebner::dimension`] may be used as a helper for
//! equidimensional inputs.

use itertools::Itertools;

use crate::diffops::partial_at;
use crate::groebner::{buchberger, determinant, GroebnerBasis, Ideal, MonomialOrder};
use crate::polyring::{BasisElement, Point, Polynomial, RingContext};
use crate::{Error, Result};

/// A prime of the chart: either a rational point (the maximal ideal
/// `<x_i - a_i>`, membership by evaluation) or a generator list whose
/// primality the caller asserts (membership by normal form). Asserted
/// primality is trusted, never verified.
#[derive(Debug, Clone)]
pub enum PrimeSpec {
    RationalPoint(Point),
    Generators { ideal: Ideal, asserted_prime: bool },
}

impl PrimeSpec {
    pub fn point(point: Point) -> Self {
        PrimeSpec::RationalPoint(point)
    }

    pub fn generators(ideal: Ideal, asserted_prime: bool) -> Self {
        PrimeSpec::Generators {
            ideal,
            asserted_prime,
        }
    }

    pub fn ring(&self) -> &RingContext {
        match self {
            PrimeSpec::RationalPoint(pt) => pt.ring(),
            PrimeSpec::Generators { ideal, .. } => ideal.ring(),
        }
    }

    /// Prepares a membership tester, computing the Groebner basis once
    /// for the generator form. Fails with [`Error::UnverifiedPrime`] when
    /// a generator-form prime lacks the asserted flag.
    pub fn membership(&self) -> Result<PrimeMembership<'_>> {
        match self {
            PrimeSpec::RationalPoint(pt) => Ok(PrimeMembership::Point(pt)),
            PrimeSpec::Generators {
                ideal,
                asserted_prime,
            } => {
                if !asserted_prime {
                    return Err(Error::UnverifiedPrime);
                }
                Ok(PrimeMembership::Basis(buchberger(
                    ideal,
                    MonomialOrder::Grevlex,
                )))
            }
        }
    }
}

/// Decides `f in P` either by evaluation or by normal form.
pub enum PrimeMembership<'a> {
    Point(&'a Point),
    Basis(GroebnerBasis),
}

impl PrimeMembership<'_> {
    pub fn contains(&self, f: &Polynomial) -> bool {
        match self {
            PrimeMembership::Point(pt) => f
                .evaluate(pt)
                .expect("point and polynomial share a ring")
                .is_zero(),
            PrimeMembership::Basis(gb) => gb
                .normal_form(f)
                .expect("prime and polynomial share a ring")
                .is_zero(),
        }
    }
}

/// The basis elements on which some generator has a nonzero partial, in
/// basis order. All other columns of the Jacobian matrix vanish
/// identically and are omitted.
pub fn finite_support(gens: &[Polynomial]) -> Vec<BasisElement> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let ring = first.ring();
    let mut out = Vec::new();
    for pos in 0..ring.basis_len() {
        if gens.iter().any(|f| !partial_at(f, pos).is_zero()) {
            out.push(ring.element(pos).clone());
        }
    }
    out
}

/// The matrix of partials of the generators with respect to every basis
/// element in the finite support; rows follow the generators, columns the
/// basis order. Column labels are retained.
#[derive(Debug, Clone)]
pub struct JacobianMatrix {
    ring: RingContext,
    columns: Vec<BasisElement>,
    rows: Vec<Vec<Polynomial>>,
}

impl JacobianMatrix {
    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn columns(&self) -> &[BasisElement] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.rows[row][col]
    }
}

/// Builds the extended Jacobian matrix of the generators over the finite
/// support.
pub fn extended_jacobian(gens: &[Polynomial]) -> JacobianMatrix {
    let ring = gens
        .first()
        .map(|f| f.ring().clone())
        .unwrap_or_else(|| RingContext::new(2, &[] as &[&str], &[]).expect("2 is prime"));
    let columns = finite_support(gens);
    let rows = gens
        .iter()
        .map(|f| {
            columns
                .iter()
                .map(|b| partial_at(f, b.position()))
                .collect()
        })
        .collect();
    JacobianMatrix {
        ring,
        columns,
        rows,
    }
}

/// Row/column index tuple of a nonvanishing minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// First (in lexicographic row/column order) `size x size` minor whose
/// determinant lies outside the prime, if any.
fn find_nonvanishing_minor(
    m: &JacobianMatrix,
    size: usize,
    tester: &PrimeMembership<'_>,
) -> Option<MinorWitness> {
    if size == 0 || size > m.num_rows() || size > m.num_cols() {
        return None;
    }
    for rows in (0..m.num_rows()).combinations(size) {
        for cols in (0..m.num_cols()).combinations(size) {
            let sub: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m.entry(i, j).clone()).collect())
                .collect();
            let det = determinant(&sub, m.ring());
            if !tester.contains(&det) {
                return Some(MinorWitness { rows, cols });
            }
        }
    }
    None
}

/// The largest `r` such that some `r x r` minor of the matrix is nonzero
/// modulo the prime; 0 when every entry lies in it.
pub fn rank_mod_prime(m: &JacobianMatrix, prime: &PrimeSpec) -> Result<usize> {
    let tester = prime.membership()?;
    let mut rank = 0;
    for size in 1..=m.num_rows().min(m.num_cols()) {
        if find_nonvanishing_minor(m, size, &tester).is_some() {
            rank = size;
        } else {
            break;
        }
    }
    Ok(rank)
}

/// Outcome of the regularity test at a prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub rank_mod_prime: usize,
    /// The caller-supplied height `r = height(J A_P)`.
    pub height: usize,
    pub regular: bool,
    /// A nonvanishing `r x r` minor; present iff the rank reaches `r`.
    pub witness: Option<MinorWitness>,
}

/// The extended Jacobian criterion: `C_P` is regular iff the matrix has
/// rank `r` modulo `P`. Requires `J` to be contained in `P`.
pub fn regularity_test(
    gens: &[Polynomial],
    prime: &PrimeSpec,
    r: usize,
) -> Result<RegularityReport> {
    let tester = prime.membership()?;
    for g in gens {
        if !tester.contains(g) {
            return Err(Error::PrimeDoesNotContainIdeal(
                crate::text::polynomial_to_text(g),
            ));
        }
    }
    let matrix = extended_jacobian(gens);
    let mut rank = 0;
    for size in 1..=matrix.num_rows().min(matrix.num_cols()) {
        if find_nonvanishing_minor(&matrix, size, &tester).is_some() {
            rank = size;
        } else {
            break;
        }
    }
    let witness = find_nonvanishing_minor(&matrix, r, &tester);
    Ok(RegularityReport {
        rank_mod_prime: rank,
        height: r,
        regular: rank == r,
        witness,
    })
}

/// The singular-locus ideal for an equidimensional `V(J)` of height `r`:
/// the generators together with every `r x r` minor of the extended
/// Jacobian.
#[derive(Debug, Clone)]
pub struct SingularLocus {
    pub ideal: Ideal,
    /// Set when `r` exceeds the matrix format, so no minors exist and the
    /// output is just `<gens>` (the criterion fails everywhere on `V(J)`).
    pub no_minors: bool,
}

pub fn singular_locus(gens: &[Polynomial], r: usize) -> Result<SingularLocus> {
    assert!(r >= 1, "height must be at least 1");
    let ring = gens
        .first()
        .map(|f| f.ring().clone())
        .ok_or(Error::RingMismatch)?;
    let matrix = extended_jacobian(gens);
    let mut generators: Vec<Polynomial> = gens.to_vec();
    let no_minors = r > matrix.num_rows().min(matrix.num_cols());
    if !no_minors {
        generators.extend(crate::groebner::minors(matrix.rows(), r)?);
    }
    Ok(SingularLocus {
        ideal: Ideal::new(&ring, generators)?,
        no_minors,
    })
}

/// A constructive p-basis refit along parameters `z_1, ..., z_d`: the
/// selected basis columns can be traded for the parameters on the chart
/// where the selection minor is invertible.
#[derive(Debug, Clone)]
pub struct BasisRefit {
    /// The replaced basis elements `b_1, ..., b_d`.
    pub removed: Vec<BasisElement>,
    /// The rest of the basis, `B_0`.
    pub kept: Vec<BasisElement>,
    pub parameters: Vec<Polynomial>,
    /// Determinant of the selected `d x d` Jacobian minor; a unit wherever
    /// the refit is valid.
    pub localizer: Polynomial,
}

/// Selects the first (lexicographically by basis position) `d`-tuple of
/// basis columns whose Jacobian minor against the parameters is
/// nonvanishing modulo `P`; fails with [`Error::RankDeficient`] when no
/// tuple works, i.e. the parameters are not independent at `P`.
pub fn refit_p_basis(params: &[Polynomial], prime: &PrimeSpec) -> Result<BasisRefit> {
    assert!(!params.is_empty(), "at least one parameter required");
    let ring = params[0].ring().clone();
    let tester = prime.membership()?;
    let d = params.len();
    let full_rows: Vec<Vec<Polynomial>> = params
        .iter()
        .map(|z| {
            (0..ring.basis_len())
                .map(|pos| partial_at(z, pos))
                .collect()
        })
        .collect();
    if d > ring.basis_len() as usize {
        return Err(Error::RankDeficient);
    }
    for cols in (0..ring.basis_len()).combinations(d) {
        let sub: Vec<Vec<Polynomial>> = full_rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c as usize].clone()).collect())
            .collect();
        let det = determinant(&sub, &ring);
        if !tester.contains(&det) {
            let removed: Vec<BasisElement> =
                cols.iter().map(|&c| ring.element(c).clone()).collect();
            let kept = ring
                .basis()
                .iter()
                .filter(|b| !cols.contains(&b.position()))
                .cloned()
                .collect();
            return Ok(BasisRefit {
                removed,
                kept,
                parameters: params.to_vec(),
                localizer: det,
            });
        }
    }
    Err(Error::RankDeficient)
}

/// Description of the induced p-basis of the quotient chart
/// `C_g = (A_f / J A_f)`: the kept basis elements together with the
/// residue classes of the trailing parameters.
#[derive(Debug, Clone)]
pub struct QuotientPBasis {
    pub kept: Vec<BasisElement>,
    /// Residue classes of `z_{r+1}, ..., z_d` in the quotient.
    pub residue_parameters: Vec<Polynomial>,
    pub localizer: Polynomial,
}

/// Runs the refit for the full parameter list `z_1, ..., z_d`, where the
/// first `r` generate `J`; the image of `B_0` together with the classes
/// of `z_{r+1}, ..., z_d` is then a p-basis of the quotient on the chart
/// of the localizer.
pub fn quotient_p_basis(
    params: &[Polynomial],
    r: usize,
    prime: &PrimeSpec,
) -> Result<QuotientPBasis> {
    assert!(r <= params.len(), "r exceeds the parameter count");
    let refit = refit_p_basis(params, prime)?;
    Ok(QuotientPBasis {
        kept: refit.kept,
        residue_parameters: params[r..].to_vec(),
        localizer: refit.localizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::Fraction;
    use crate::text::{parse_generators, parse_polynomial};

    fn ring2() -> RingContext {
        RingContext::new(2, &["v"], &["x", "y"]).unwrap()
    }

    fn p(r: &RingContext, s: &str) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    fn gens(r: &RingContext, s: &str) -> Vec<Polynomial> {
        parse_generators(s, r).unwrap()
    }

    fn origin(r: &RingContext) -> PrimeSpec {
        PrimeSpec::point(Point::origin(r))
    }

    #[test]
    fn finite_support_of_the_running_example() {
        let r = ring2();
        let s = finite_support(&gens(&r, "x^2 + v*y^2"));
        let names: Vec<_> = s.iter().map(|b| b.name()).collect();
        assert_eq!(names, ["v"]);
    }

    #[test]
    fn finite_support_of_a_linear_form() {
        let r = ring2();
        let s = finite_support(&gens(&r, "x + y"));
        let names: Vec<_> = s.iter().map(|b| b.name()).collect();
        assert_eq!(names, ["x", "y"]);
    }

    #[test]
    fn finite_support_of_p_th_powers_is_empty() {
        let r = ring2();
        assert!(finite_support(&gens(&r, "v^2")).is_empty());
    }

    #[test]
    fn extended_jacobian_of_the_running_example() {
        let r = ring2();
        let m = extended_jacobian(&gens(&r, "x^2 + v*y^2"));
        assert_eq!(m.num_rows(), 1);
        let names: Vec<_> = m.columns().iter().map(|b| b.name()).collect();
        assert_eq!(names, ["v"]);
        assert_eq!(m.entry(0, 0), &p(&r, "y^2"));
    }

    #[test]
    fn extended_jacobian_of_coordinates_is_identity() {
        let r = ring2();
        let m = extended_jacobian(&gens(&r, "x; y"));
        let names: Vec<_> = m.columns().iter().map(|b| b.name()).collect();
        assert_eq!(names, ["x", "y"]);
        assert_eq!(m.entry(0, 0), &Polynomial::one(&r));
        assert_eq!(m.entry(0, 1), &Polynomial::zero(&r));
        assert_eq!(m.entry(1, 0), &Polynomial::zero(&r));
        assert_eq!(m.entry(1, 1), &Polynomial::one(&r));
    }

    #[test]
    fn extended_jacobian_char_3_surface() {
        let r = RingContext::new(3, &["v"], &["x", "y"]).unwrap();
        let m = extended_jacobian(&gens(&r, "x^3 + v*y^3; y^3"));
        let names: Vec<_> = m.columns().iter().map(|b| b.name()).collect();
        assert_eq!(names, ["v"]);
        assert_eq!(m.entry(0, 0), &p(&r, "y^3"));
        assert_eq!(m.entry(1, 0), &Polynomial::zero(&r));
    }

    #[test]
    fn rank_drops_exactly_at_the_origin() {
        let r = ring2();
        let fs = gens(&r, "x^2 + v*y^2");
        let m = extended_jacobian(&fs);
        assert_eq!(rank_mod_prime(&m, &origin(&r)).unwrap(), 0);

        let generic = PrimeSpec::generators(
            Ideal::new(&r, fs.clone()).unwrap(),
            true,
        );
        assert_eq!(rank_mod_prime(&m, &generic).unwrap(), 1);

        let coords = extended_jacobian(&gens(&r, "x; y"));
        assert_eq!(rank_mod_prime(&coords, &origin(&r)).unwrap(), 2);
    }

    #[test]
    fn unverified_generator_prime_is_rejected() {
        let r = ring2();
        let fs = gens(&r, "x^2 + v*y^2");
        let m = extended_jacobian(&fs);
        let unflagged = PrimeSpec::generators(Ideal::new(&r, fs).unwrap(), false);
        assert_eq!(
            rank_mod_prime(&m, &unflagged).unwrap_err(),
            Error::UnverifiedPrime
        );
    }

    #[test]
    fn regularity_of_the_running_example() {
        let r = ring2();
        let fs = gens(&r, "x^2 + v*y^2");

        let at_origin = regularity_test(&fs, &origin(&r), 1).unwrap();
        assert!(!at_origin.regular);
        assert_eq!(at_origin.rank_mod_prime, 0);
        assert!(at_origin.witness.is_none());

        let generic = PrimeSpec::generators(Ideal::new(&r, fs.clone()).unwrap(), true);
        let at_generic = regularity_test(&fs, &generic, 1).unwrap();
        assert!(at_generic.regular);
        assert_eq!(
            at_generic.witness,
            Some(MinorWitness {
                rows: vec![0],
                cols: vec![0]
            })
        );

        let hyperplane = regularity_test(&gens(&r, "x"), &origin(&r), 1).unwrap();
        assert!(hyperplane.regular);
    }

    #[test]
    fn prime_must_contain_the_ideal() {
        let r = ring2();
        let err = regularity_test(&gens(&r, "x + 1"), &origin(&r), 1).unwrap_err();
        assert_eq!(err, Error::PrimeDoesNotContainIdeal("x + 1".into()));
    }

    #[test]
    fn singular_locus_of_the_running_example() {
        let r = ring2();
        let locus = singular_locus(&gens(&r, "x^2 + v*y^2"), 1).unwrap();
        assert!(!locus.no_minors);
        assert_eq!(
            locus.ideal.generators(),
            &[p(&r, "x^2 + v*y^2"), p(&r, "y^2")]
        );
        // Equal to <x^2, y^2>: supported at the origin only.
        let expected = Ideal::new(&r, gens(&r, "x^2; y^2")).unwrap();
        assert!(crate::groebner::ideal_equal(&locus.ideal, &expected).unwrap());
    }

    #[test]
    fn singular_locus_of_a_smooth_hyperplane_is_unit() {
        let r = ring2();
        let locus = singular_locus(&gens(&r, "x"), 1).unwrap();
        assert_eq!(locus.ideal.generators(), &[p(&r, "x"), p(&r, "1")]);
    }

    #[test]
    fn singular_locus_char_3() {
        let r = RingContext::new(3, &["v"], &["x", "y"]).unwrap();
        let locus = singular_locus(&gens(&r, "x^3 + v*y^3"), 1).unwrap();
        assert_eq!(
            locus.ideal.generators(),
            &[p(&r, "x^3 + v*y^3"), p(&r, "y^3")]
        );
    }

    #[test]
    fn singular_locus_without_minors_flags_degeneracy() {
        let r = ring2();
        let locus = singular_locus(&gens(&r, "v^2"), 1).unwrap();
        assert!(locus.no_minors);
        assert_eq!(locus.ideal.generators(), &[p(&r, "v^2")]);
    }

    #[test]
    fn refit_selects_the_first_independent_column() {
        let r = RingContext::new(2, &["v"], &["x"]).unwrap();
        let prime = origin(&r);

        // z = v + x: both partials are 1; the first column (v) wins.
        let refit = refit_p_basis(&[p(&r, "v + x")], &prime).unwrap();
        assert_eq!(refit.removed[0].name(), "v");
        let kept: Vec<_> = refit.kept.iter().map(|b| b.name()).collect();
        assert_eq!(kept, ["x"]);
        assert_eq!(refit.localizer, Polynomial::one(&r));

        // z = x: only the x-column survives.
        let refit = refit_p_basis(&[p(&r, "x")], &prime).unwrap();
        assert_eq!(refit.removed[0].name(), "x");
        let kept: Vec<_> = refit.kept.iter().map(|b| b.name()).collect();
        assert_eq!(kept, ["v"]);
        assert_eq!(refit.localizer, Polynomial::one(&r));

        // z = x^2 is a p-th power: every partial vanishes.
        assert_eq!(
            refit_p_basis(&[p(&r, "x^2")], &prime).unwrap_err(),
            Error::RankDeficient
        );
    }

    #[test]
    fn quotient_basis_of_a_coordinate_hyperplane() {
        let r = ring2();
        let q = quotient_p_basis(&[p(&r, "x"), p(&r, "y")], 1, &origin(&r)).unwrap();
        let kept: Vec<_> = q.kept.iter().map(|b| b.name()).collect();
        assert_eq!(kept, ["v"]);
        assert_eq!(q.residue_parameters, vec![p(&r, "y")]);
        assert_eq!(q.localizer, Polynomial::one(&r));
    }

    #[test]
    fn quotient_basis_with_a_parameter_mix() {
        let r = ring2();
        let q = quotient_p_basis(&[p(&r, "x + v"), p(&r, "y")], 1, &origin(&r)).unwrap();
        // Columns (v, y) carry the first nonvanishing minor; x survives.
        let kept: Vec<_> = q.kept.iter().map(|b| b.name()).collect();
        assert_eq!(kept, ["x"]);
        assert_eq!(q.residue_parameters, vec![p(&r, "y")]);
        // Certificate: localizer outside the prime.
        let prime = origin(&r);
        let tester = prime.membership().unwrap();
        assert!(!tester.contains(&q.localizer));
    }

    #[test]
    fn quotient_basis_propagates_rank_deficiency() {
        let r = ring2();
        assert_eq!(
            quotient_p_basis(&[p(&r, "x^2")], 1, &origin(&r)).unwrap_err(),
            Error::RankDeficient
        );
    }

    #[test]
    fn appending_omitted_columns_never_changes_the_rank() {
        let r = ring2();
        let fs = gens(&r, "x^2 + v*y^2");
        let m = extended_jacobian(&fs);
        // Manually rebuild with the all-zero x and y columns appended.
        let mut rows = m.rows().to_vec();
        for row in &mut rows {
            row.push(Polynomial::zero(&r));
            row.push(Polynomial::zero(&r));
        }
        let padded = JacobianMatrix {
            ring: r.clone(),
            columns: r.basis().to_vec(),
            rows,
        };
        for prime in [
            origin(&r),
            PrimeSpec::generators(Ideal::new(&r, fs).unwrap(), true),
        ] {
            assert_eq!(
                rank_mod_prime(&m, &prime).unwrap(),
                rank_mod_prime(&padded, &prime).unwrap()
            );
        }
    }

    #[test]
    fn rank_is_monotone_in_the_rows() {
        let r = ring2();
        let small = extended_jacobian(&gens(&r, "x^2 + v*y^2"));
        let big = extended_jacobian(&gens(&r, "x^2 + v*y^2; x"));
        let generic = PrimeSpec::generators(
            Ideal::new(&r, gens(&r, "x^2 + v*y^2")).unwrap(),
            true,
        );
        for prime in [origin(&r), generic] {
            assert!(
                rank_mod_prime(&big, &prime).unwrap() >= rank_mod_prime(&small, &prime).unwrap()
            );
        }
    }

    #[test]
    fn point_with_fraction_coordinates() {
        let r = ring2();
        let f = gens(&r, "x^2 + v*y^2");
        // The point (v, 1) lies on V(f) at p = 2: v^2 + v*1 = v^2 + v != 0 — pick a real root instead.
        // (x, y) = (v, 1) gives v^2 + v, nonzero; use f itself at a generic-style point is covered
        // elsewhere. Here just exercise fraction coordinates in a membership test.
        let a = Fraction::new(p(&r, "v + 1"), p(&r, "v")).unwrap();
        let pt = Point::new(&r, [(1, a), (2, Fraction::one(&r))]).unwrap();
        let prime = PrimeSpec::point(pt);
        let tester = prime.membership().unwrap();
        // x - (v+1)/v has numerator v*x - v - 1, which vanishes at the point.
        assert!(!tester.contains(&f[0]));
    }
}
