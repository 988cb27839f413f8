//! Seeded random generators shared by the integration suites.

use heightscout::lattice::{Lattice, LinearForm};
use heightscout::linalg::IntMatrix;
use heightscout::polysearch::MultiPoly;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;

/// Random lattice in ambient dimension up to `max_dim` with basis entries
/// in `[-entry_bound, entry_bound]`; rank is uniform in `1..=n`.
pub fn rand_lattice(rng: &mut StdRng, max_dim: usize, entry_bound: i64) -> Lattice {
    loop {
        let n = rng.gen_range(1..=max_dim);
        let j = rng.gen_range(1..=n);
        let cols: Vec<Vec<i64>> = (0..j)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_range(-entry_bound..=entry_bound))
                    .collect()
            })
            .collect();
        if let Ok(l) = Lattice::from_columns(n, &cols) {
            return l;
        }
    }
}

/// Random unimodular matrix: a product of shear, swap and sign operations.
pub fn rand_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..14 {
        match rng.gen_range(0..3) {
            0 => {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    let mut shear = IntMatrix::identity(n);
                    *shear.at_mut(a, b) = BigInt::from(rng.gen_range(-3i64..=3));
                    u = u.mul(&shear).unwrap();
                }
            }
            1 => {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    let mut perm = IntMatrix::zero(n, n);
                    for i in 0..n {
                        let j = if i == a { b } else if i == b { a } else { i };
                        *perm.at_mut(i, j) = BigInt::from(1);
                    }
                    u = u.mul(&perm).unwrap();
                }
            }
            _ => {
                let a = rng.gen_range(0..n);
                let mut flip = IntMatrix::identity(n);
                *flip.at_mut(a, a) = BigInt::from(-1);
                u = u.mul(&flip).unwrap();
            }
        }
    }
    u
}

/// Random primitive normalized linear form in `n` variables.
pub fn rand_primitive_form(rng: &mut StdRng, n: usize, coeff_bound: i64) -> LinearForm {
    loop {
        let coeffs: Vec<i64> = (0..n)
            .map(|_| rng.gen_range(-coeff_bound..=coeff_bound))
            .collect();
        if let Ok(f) = LinearForm::from_i64(&coeffs) {
            return f;
        }
    }
}

/// Random proper sublattice of `omega` of the given rank (strictly below
/// the rank of `omega`): columns are random integer combinations of the
/// `omega` basis.
pub fn rand_sublattice(rng: &mut StdRng, omega: &Lattice, rank: usize) -> Lattice {
    assert!(rank >= 1 && rank < omega.rank());
    loop {
        let combo: Vec<Vec<i64>> = (0..rank)
            .map(|_| (0..omega.rank()).map(|_| rng.gen_range(-2i64..=2)).collect())
            .collect();
        let combo_m = IntMatrix::from_columns(&combo);
        let basis = omega.basis().mul(&combo_m).unwrap();
        if let Ok(l) = Lattice::new(omega.ambient_dim(), basis) {
            return l;
        }
    }
}

/// `omega` scaled by an integer factor `k >= 2`: an equal-rank proper
/// sublattice.
pub fn scaled_sublattice(omega: &Lattice, k: i64) -> Lattice {
    assert!(k >= 2);
    let mut scale = IntMatrix::zero(omega.rank(), omega.rank());
    for i in 0..omega.rank() {
        *scale.at_mut(i, i) = BigInt::from(k);
    }
    let basis = omega.basis().mul(&scale).unwrap();
    Lattice::new(omega.ambient_dim(), basis).unwrap()
}

/// Random nonzero polynomial with at most `max_terms` terms, total degree
/// at most `max_deg`, coefficients in `[-9, 9]`.
pub fn rand_poly(rng: &mut StdRng, n_vars: usize, max_deg: u32, max_terms: usize) -> MultiPoly {
    loop {
        let n_terms = rng.gen_range(1..=max_terms);
        let mut terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
        for _ in 0..n_terms {
            let mut exp = vec![0u32; n_vars];
            let mut remaining = rng.gen_range(0..=max_deg);
            for e in exp.iter_mut() {
                let take = rng.gen_range(0..=remaining);
                *e = take;
                remaining -= take;
            }
            let coeff = rng.gen_range(-9i64..=9);
            terms.push((exp, BigInt::from(coeff)));
        }
        if let Ok(p) = MultiPoly::new(n_vars, terms) {
            return p;
        }
    }
}

/// Random nonzero homogeneous polynomial of exact degree `deg`.
pub fn rand_homogeneous_poly(
    rng: &mut StdRng,
    n_vars: usize,
    deg: u32,
    max_terms: usize,
) -> MultiPoly {
    loop {
        let n_terms = rng.gen_range(1..=max_terms);
        let mut terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
        for _ in 0..n_terms {
            let mut exp = vec![0u32; n_vars];
            let mut remaining = deg;
            for (i, e) in exp.iter_mut().enumerate() {
                let take = if i + 1 == n_vars {
                    remaining
                } else {
                    rng.gen_range(0..=remaining)
                };
                *e = take;
                remaining -= take;
            }
            let coeff = rng.gen_range(-9i64..=9);
            terms.push((exp, BigInt::from(coeff)));
        }
        if let Ok(p) = MultiPoly::new(n_vars, terms) {
            if p.is_homogeneous() && p.degree() == deg {
                return p;
            }
        }
    }
}

/// The grid-vanishing family `sum_i prod_j (X_i - alpha_j)`: identically
/// zero on the grid spanned by the alphas.
pub fn vanishing_family(n_vars: usize, alphas: &[i64]) -> MultiPoly {
    // Expand prod_j (T - alpha_j) into univariate coefficients.
    let mut coeffs: Vec<BigInt> = vec![BigInt::from(1)];
    for &a in alphas {
        let mut next = vec![BigInt::from(0); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * BigInt::from(a);
        }
        coeffs = next;
    }
    let mut terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
    for i in 0..n_vars {
        for (power, c) in coeffs.iter().enumerate() {
            let mut exp = vec![0u32; n_vars];
            exp[i] = power as u32;
            terms.push((exp, c.clone()));
        }
    }
    MultiPoly::new(n_vars, terms).expect("leading coefficients cannot cancel")
}
