//! Sparse multivariate integer polynomials and finite searches for
//! integral points of small height or length where a polynomial does not
//! vanish.
//!
//! Two deterministic orders are used. A plain grid search over a finite
//! coefficient set returns the first nonvanishing tuple in ascending
//! lexicographic order. The bounded height and length searches instead walk
//! coordinate values in the order `1, -1, 2, -2, ...` with the last
//! coordinate most significant, so the returned point is the canonical
//! minimal-effort hit of its search region.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{height_of, length_of, BoundCertificate, NormKind, TheoremId};
use crate::error::{Error, Result};
use crate::interchange::parse_bigint;

/// Sparse polynomial over the integers; exponent vectors map to nonzero
/// coefficients. The zero polynomial is rejected at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn new(
        n_vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::Dimension("polynomial needs at least one variable".into()));
        }
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exp, coeff) in terms {
            if exp.len() != n_vars {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {} in a {n_vars}-variable polynomial",
                    exp.len()
                )));
            }
            let entry = map.entry(exp).or_insert_with(BigInt::zero);
            *entry += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(MultiPoly {
            n_vars,
            terms: map,
        })
    }

    /// Test helper: terms as `(exponents, coefficient)` machine integers.
    pub fn from_terms(n_vars: usize, terms: &[(&[u32], i64)]) -> Result<Self> {
        MultiPoly::new(
            n_vars,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Total degree: maximum exponent sum over the terms.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .expect("nonzero polynomial")
    }

    pub fn partial_degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// `m(F)`: the largest per-variable degree; never exceeds the total
    /// degree.
    pub fn max_partial_degree(&self) -> u32 {
        (0..self.n_vars)
            .map(|i| self.partial_degree(i))
            .max()
            .expect("at least one variable")
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    pub fn coeff(&self, exp: &[u32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn evaluate(&self, x: &[BigInt]) -> Result<BigInt> {
        if x.len() != self.n_vars {
            return Err(Error::Dimension(format!(
                "point has length {}, polynomial has {} variables",
                x.len(),
                self.n_vars
            )));
        }
        let mut total = BigInt::zero();
        for (exp, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (xi, &e) in x.iter().zip(exp) {
                if e > 0 {
                    term *= xi.pow(e);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// The polynomial with variable `var` set to zero, on the remaining
    /// variables; `None` when every term vanishes.
    fn section(&self, var: usize) -> Option<MultiPoly> {
        let terms: Vec<(Vec<u32>, BigInt)> = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] == 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.remove(var);
                (e2, c.clone())
            })
            .collect();
        if terms.is_empty() {
            return None;
        }
        Some(MultiPoly::new(self.n_vars - 1, terms).expect("nonzero by construction"))
    }

    /// Quotient by the product of all variables when every term has all
    /// exponents positive.
    fn divide_by_all_vars(&self) -> Option<MultiPoly> {
        if !self.terms.keys().all(|e| e.iter().all(|&v| v > 0)) {
            return None;
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|&v| v - 1).collect(), c.clone()));
        Some(MultiPoly::new(self.n_vars, terms).expect("nonzero by construction"))
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    exp: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyWire {
    vars: usize,
    terms: Vec<TermWire>,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyWire {
            vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermWire {
                    exp: e.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PolyWire::deserialize(d)?;
        let terms = wire
            .terms
            .iter()
            .map(|t| Ok((t.exp.clone(), parse_bigint(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        MultiPoly::new(wire.vars, terms).map_err(serde::de::Error::custom)
    }
}

/// First `x` in `S^N` with `F(x) != 0`, in ascending lexicographic order
/// (first coordinate most significant). Returns `None` only when `S` is too
/// small: success is guaranteed as soon as `|S| > m(F)`.
pub fn find_nonvanishing_grid(f: &MultiPoly, s: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if s.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut values = s.to_vec();
    values.sort();
    values.dedup();
    let n = f.n_vars();
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<BigInt> = idx.iter().map(|&i| values[i].clone()).collect();
        if !f.evaluate(&x)?.is_zero() {
            return Ok(Some(x));
        }
        // Odometer: last coordinate fastest, so tuples ascend
        // lexicographically from the front.
        let mut k = n;
        loop {
            if k == 0 {
                debug_assert!(
                    values.len() <= f.max_partial_degree() as usize,
                    "a grid larger than m(F) must contain a nonvanishing point"
                );
                return Ok(None);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Search values `1, -1, 2, -2, ..., radius, -radius` in canonical order.
fn search_value(slot: usize) -> BigInt {
    let magnitude = BigInt::from(slot / 2 + 1);
    if slot.is_multiple_of(2) {
        magnitude
    } else {
        -magnitude
    }
}

/// First tuple with all coordinates in `{±1, .., ±radius}` where `f` does
/// not vanish, under the canonical search order (first coordinate fastest).
/// The grid size guarantees a hit for the callers below; exhausting it
/// means a defect.
fn grid_search_nonzero_coords(f: &MultiPoly, radius: u32) -> Result<Vec<BigInt>> {
    let n = f.n_vars();
    let slots = (2 * radius) as usize;
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<BigInt> = idx.iter().map(|&i| search_value(i)).collect();
        if !f.evaluate(&x)?.is_zero() {
            return Ok(x);
        }
        let mut k = 0;
        loop {
            if k == n {
                return Err(Error::Internal(format!(
                    "symmetric grid of radius {radius} exhausted without a nonvanishing point"
                )));
            }
            idx[k] += 1;
            if idx[k] < slots {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A point with every coordinate nonzero where `F` does not vanish, of
/// height at most `(M+2)/2`; for homogeneous `F` the bound tightens to
/// `(M+1)/2` and a standard basis vector may be returned when a diagonal
/// coefficient is nonzero.
pub fn find_small_height_point(f: &MultiPoly) -> Result<BoundCertificate> {
    let m = f.degree();
    if m == 0 {
        return Err(Error::DegreeZero);
    }
    let homogeneous = f.is_homogeneous();
    if homogeneous {
        for i in 0..f.n_vars() {
            let mut exp = vec![0u32; f.n_vars()];
            exp[i] = m;
            if !f.coeff(&exp).is_zero() {
                let mut point = vec![BigInt::zero(); f.n_vars()];
                point[i] = BigInt::one();
                return Ok(BoundCertificate {
                    found: height_of(&point),
                    point,
                    norm: NormKind::Height,
                    theorem_bound: BigRational::new(BigInt::from(m + 1), BigInt::from(2)),
                    theorem_id: TheoremId::Lemma2_2,
                    search_radius_used: 1,
                    case_fired: Some("diagonal_basis_vector"),
                });
            }
        }
    }
    let radius = if homogeneous { (m - 1) / 2 + 1 } else { m / 2 + 1 };
    let point = grid_search_nonzero_coords(f, radius)?;
    let bound_num = if homogeneous { m + 1 } else { m + 2 };
    let cert = BoundCertificate {
        found: height_of(&point),
        point,
        norm: NormKind::Height,
        theorem_bound: BigRational::new(BigInt::from(bound_num), BigInt::from(2)),
        theorem_id: TheoremId::Lemma2_2,
        search_radius_used: radius as u64,
        case_fired: None,
    };
    debug_assert!(cert.bound_satisfied());
    Ok(cert)
}

/// A point of small length where a homogeneous `F` in at least two
/// variables does not vanish: length at most
/// `[(M+2)/2 * min(N, (M+2)/4)]`.
///
/// Follows the structural recursion: a linear form misses some basis
/// vector; a nonzero diagonal coefficient yields a basis vector; a nonzero
/// section reduces the variable count; otherwise the product of all
/// variables factors out and a bounded grid search on the quotient
/// finishes, with every coordinate nonzero.
pub fn find_small_length_point(f: &MultiPoly) -> Result<BoundCertificate> {
    if f.n_vars() < 2 {
        return Err(Error::Dimension(
            "length search needs at least two variables".into(),
        ));
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let m = f.degree();
    if m == 0 {
        return Err(Error::DegreeZero);
    }

    // Peel off zero-substituted variables while some section is nonzero.
    let mut current = f.clone();
    let mut dropped: Vec<usize> = Vec::new(); // positions in the original order
    let (inner_point, case, radius): (Vec<BigInt>, &'static str, u64) = loop {
        let n_cur = current.n_vars();
        let m_cur = current.degree();

        if m_cur == 1 {
            let i = (0..n_cur)
                .find(|&i| {
                    let mut e = vec![0u32; n_cur];
                    e[i] = 1;
                    !current.coeff(&e).is_zero()
                })
                .expect("a nonzero linear form has a nonzero coefficient");
            let mut p = vec![BigInt::zero(); n_cur];
            p[i] = BigInt::one();
            break (p, "linear_basis_vector", 1);
        }

        if let Some(i) = (0..n_cur).find(|&i| {
            let mut e = vec![0u32; n_cur];
            e[i] = m_cur;
            !current.coeff(&e).is_zero()
        }) {
            let mut p = vec![BigInt::zero(); n_cur];
            p[i] = BigInt::one();
            break (p, "diagonal_basis_vector", 1);
        }

        if n_cur > 2 {
            if let Some((i, sec)) = (0..n_cur).find_map(|i| current.section(i).map(|s| (i, s))) {
                dropped.push(i);
                current = sec;
                continue;
            }
        }

        // All sections vanish: F = X_1 .. X_n * G with G homogeneous of
        // degree m_cur - n_cur.
        let g = current
            .divide_by_all_vars()
            .expect("vanishing sections force positive exponents everywhere");
        let g_deg = g.degree();
        debug_assert_eq!(g_deg, m_cur - n_cur as u32);
        if g_deg == 0 {
            break (vec![BigInt::one(); n_cur], "factored_constant", 1);
        }
        let radius = g_deg / 2 + 1;
        let p = grid_search_nonzero_coords(&g, radius)?;
        break (p, "factored_grid", radius as u64);
    };

    // Re-embed the peeled variables as zeros, innermost first.
    let mut point = inner_point;
    for &i in dropped.iter().rev() {
        point.insert(i, BigInt::zero());
    }

    debug_assert!(!f.evaluate(&point)?.is_zero());

    let n = BigInt::from(f.n_vars());
    let m_plus_2 = BigRational::from_integer(BigInt::from(m + 2));
    let half = &m_plus_2 / BigRational::from_integer(BigInt::from(2));
    let quarter = &m_plus_2 / BigRational::from_integer(BigInt::from(4));
    let min_term = BigRational::from_integer(n).min(quarter);
    let bound = (half * min_term).floor();
    let cert = BoundCertificate {
        found: length_of(&point),
        point,
        norm: NormKind::Length,
        theorem_bound: bound,
        theorem_id: TheoremId::Prop2_5,
        search_radius_used: radius,
        case_fired: Some(case),
    };
    debug_assert!(cert.bound_satisfied());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn biv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| bi(x)).collect()
    }

    /// (X1-1)(X1-2) + (X2-1)(X2-2) expanded.
    fn two_quadratics() -> MultiPoly {
        MultiPoly::from_terms(
            2,
            &[
                (&[2, 0], 1),
                (&[1, 0], -3),
                (&[0, 2], 1),
                (&[0, 1], -3),
                (&[0, 0], 4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = MultiPoly::from_terms(2, &[(&[1, 1], 1)]).unwrap();
        assert_eq!(f.evaluate(&biv(&[1, 1])).unwrap(), bi(1));

        let f = MultiPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -2)]).unwrap();
        assert_eq!(f.evaluate(&biv(&[1, 1])).unwrap(), bi(0));

        assert_eq!(two_quadratics().evaluate(&biv(&[2, 1])).unwrap(), bi(0));
        assert!(two_quadratics().evaluate(&biv(&[1])).is_err());
    }

    #[test]
    fn partial_degree_examples() {
        let f = MultiPoly::from_terms(2, &[(&[3, 1], 1)]).unwrap();
        assert_eq!(f.max_partial_degree(), 3);
        let f = MultiPoly::from_terms(3, &[(&[1, 1, 1], 1)]).unwrap();
        assert_eq!(f.max_partial_degree(), 1);
        let f = MultiPoly::from_terms(2, &[(&[2, 1], 1), (&[0, 3], 1)]).unwrap();
        assert_eq!(f.max_partial_degree(), 3);
        assert!(f.max_partial_degree() <= f.degree());
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            MultiPoly::from_terms(2, &[]),
            Err(Error::ZeroPolynomial)
        ));
        assert!(matches!(
            MultiPoly::from_terms(2, &[(&[1, 0], 2), (&[1, 0], -2)]),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn grid_examples() {
        let f = MultiPoly::from_terms(1, &[(&[1], 1)]).unwrap();
        let s = biv(&[0, 1]);
        assert_eq!(find_nonvanishing_grid(&f, &s).unwrap(), Some(biv(&[1])));

        let f = MultiPoly::from_terms(2, &[(&[1, 1], 1), (&[0, 0], -1)]).unwrap();
        let s = biv(&[0, 1]);
        assert_eq!(
            find_nonvanishing_grid(&f, &s).unwrap(),
            Some(biv(&[0, 0]))
        );

        // The vanishing family on its own grid: no point exists.
        let s = biv(&[1, 2]);
        assert_eq!(find_nonvanishing_grid(&two_quadratics(), &s).unwrap(), None);

        assert!(matches!(
            find_nonvanishing_grid(&two_quadratics(), &[]),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn height_point_examples() {
        // X1 is homogeneous, so the tightened (M+1)/2 bound is recorded;
        // the found height also respects the generic (M+2)/2 = 3/2.
        let f = MultiPoly::from_terms(1, &[(&[1], 1)]).unwrap();
        let cert = find_small_height_point(&f).unwrap();
        assert_eq!(cert.point, biv(&[1]));
        assert_eq!(cert.found, bi(1));
        assert_eq!(cert.theorem_bound, BigRational::from_integer(bi(1)));
        assert!(BigRational::from_integer(cert.found.clone()) <= BigRational::new(bi(3), bi(2)));

        // Homogeneous cubic with zero diagonal: X1^2 X2 - X1 X2^2.
        let f = MultiPoly::from_terms(2, &[(&[2, 1], 1), (&[1, 2], -1)]).unwrap();
        let cert = find_small_height_point(&f).unwrap();
        assert_eq!(cert.point, biv(&[-1, 1]));
        assert_eq!(cert.found, bi(1));
        assert_eq!(cert.theorem_bound, BigRational::from_integer(bi(2)));
        assert!(!f.evaluate(&cert.point).unwrap().is_zero());

        // (X1-1)(X1+1) + (X2-1)(X2+1) = X1^2 + X2^2 - 2, degree 2.
        let f = MultiPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 2], 1), (&[0, 0], -2)]).unwrap();
        let cert = find_small_height_point(&f).unwrap();
        assert_eq!(cert.point, biv(&[2, 1]));
        assert_eq!(f.evaluate(&cert.point).unwrap(), bi(3));
        assert_eq!(cert.theorem_bound, BigRational::from_integer(bi(2)));
        assert!(cert.bound_satisfied());

        let constant = MultiPoly::from_terms(1, &[(&[0], 5)]).unwrap();
        assert!(matches!(
            find_small_height_point(&constant),
            Err(Error::DegreeZero)
        ));
    }

    #[test]
    fn length_point_examples() {
        let f = MultiPoly::from_terms(2, &[(&[1, 1], 1)]).unwrap();
        let cert = find_small_length_point(&f).unwrap();
        assert_eq!(cert.point, biv(&[1, 1]));
        assert_eq!(cert.found, bi(2));
        assert_eq!(cert.theorem_bound, BigRational::from_integer(bi(2)));
        assert_eq!(cert.case_fired, Some("factored_constant"));

        let f = MultiPoly::from_terms(2, &[(&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let cert = find_small_length_point(&f).unwrap();
        assert_eq!(cert.point, biv(&[1, 0]));
        assert_eq!(cert.found, bi(1));
        assert_eq!(cert.case_fired, Some("linear_basis_vector"));

        let f = MultiPoly::from_terms(2, &[(&[2, 1], 1), (&[1, 2], 1)]).unwrap();
        let cert = find_small_length_point(&f).unwrap();
        assert_eq!(cert.point, biv(&[1, 1]));
        assert_eq!(f.evaluate(&cert.point).unwrap(), bi(2));
        assert_eq!(cert.found, bi(2));
        assert_eq!(cert.theorem_bound, BigRational::from_integer(bi(3)));
        assert_eq!(cert.case_fired, Some("factored_grid"));
    }

    #[test]
    fn length_point_section_recursion() {
        // X1 X2 (X1 - X2) embedded in three variables: the X3-section is
        // nonzero, so one variable peels off before the factor case.
        let f = MultiPoly::from_terms(3, &[(&[2, 1, 0], 1), (&[1, 2, 0], -1)]).unwrap();
        let cert = find_small_length_point(&f).unwrap();
        assert_eq!(cert.point.len(), 3);
        assert!(!f.evaluate(&cert.point).unwrap().is_zero());
        assert!(cert.bound_satisfied());
        assert_eq!(cert.case_fired, Some("factored_grid"));
        // The dropped variable re-embeds as zero.
        assert_eq!(cert.point[2], bi(0));
    }

    #[test]
    fn length_point_rejects_bad_inputs() {
        let inhom = MultiPoly::from_terms(2, &[(&[1, 0], 1), (&[0, 0], 1)]).unwrap();
        assert!(matches!(
            find_small_length_point(&inhom),
            Err(Error::NotHomogeneous)
        ));
        let univar = MultiPoly::from_terms(1, &[(&[2], 1)]).unwrap();
        assert!(matches!(
            find_small_length_point(&univar),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn poly_json_round_trip() {
        let f = two_quadratics();
        let s = serde_json::to_string(&f).unwrap();
        let back: MultiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
