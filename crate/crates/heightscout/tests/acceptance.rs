//! Acceptance suite: one test per criterion, each printing a pass line
//! with its elapsed time (visible under `cargo test -- --nocapture`).
//!
//! Every expected value is either frozen from an independent oracle
//! (brute-force enumeration, exhaustive subset search) or checked exactly
//! against the formula it must satisfy; no tolerances beyond exact
//! rational comparison are used anywhere.

mod common;

use std::time::{Duration, Instant};

use heightscout::avoidance::{
    counting_function, find_point_outside, linear_forms_point, theorem_bound, AvoidanceInstance,
};
use heightscout::certificate::{height_of, length_of};
use heightscout::counting::{
    count_box_image, count_length_ball, cube_count_envelope, BoxRegion, CubeRegion, RatMatrix,
    DEFAULT_ENUM_BUDGET,
};
use heightscout::lattice::{duality_certificate, Lattice, LinearForm};
use heightscout::numeric::{ge_minus_sqrt, sqrt_upper};
use heightscout::plank::{check_plank_inequalities, minimal_cover_search, verify_cover, CoverInstance};
use heightscout::polysearch::{
    find_nonvanishing_grid, find_small_height_point, find_small_length_point,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pass(criterion: &str, detail: &str, started: Instant) {
    println!(
        "[acceptance] {criterion}: PASS ({detail}, {:.2?})",
        started.elapsed()
    );
}

#[test]
fn criterion_1_counting_envelope_soundness() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC1);
    let mut skipped = 0usize;
    let mut lower_checked = 0usize;
    for i in 0..1000 {
        let lat = common::rand_lattice(&mut rng, 5, 5);
        let n = lat.ambient_dim();
        let rank = lat.rank();
        let codim = n - rank;
        let height = lat.height();

        // Half the samples aim at the divisibility precondition of the
        // lower bound when it fits under R <= 12.
        let base = if codim == 0 {
            height.clone()
        } else {
            height.clone() * BigInt::from(rank)
        };
        let r: u64 = if i % 2 == 0 && base <= BigInt::from(12) {
            let base = u64::try_from(&base).unwrap();
            base * rng.gen_range(1..=12 / base)
        } else {
            rng.gen_range(1..=12)
        };

        // A third of the samples translate the cube; the upper bound must
        // hold for every center.
        let center: Vec<BigRational> = if i % 3 == 0 {
            (0..n)
                .map(|_| ratio(rng.gen_range(-3..=3), rng.gen_range(1..=4)))
                .collect()
        } else {
            vec![BigRational::zero(); n]
        };
        let cube = CubeRegion::new(BigRational::from_integer(BigInt::from(r)), center).unwrap();

        let env = cube_count_envelope(&lat, &cube, DEFAULT_ENUM_BUDGET).unwrap();
        let Some(exact) = env.exact.clone() else {
            skipped += 1;
            continue;
        };
        let exact = BigRational::from_integer(exact);
        assert!(
            exact <= env.upper,
            "upper bound violated: {exact} > {} for {lat:?} R={r}",
            env.upper
        );
        if env.lower_applicable {
            lower_checked += 1;
            assert!(
                env.lower <= exact,
                "lower bound violated: {} > {exact} for {lat:?} R={r}",
                env.lower
            );
        }
    }
    assert!(skipped <= 20, "too many budget skips: {skipped}");
    assert!(lower_checked >= 200, "lower bound exercised only {lower_checked} times");
    assert!(started.elapsed() < Duration::from_secs(60));
    pass(
        "criterion 1 (counting envelopes)",
        &format!("1000 lattices, {lower_checked} lower-bound cases, {skipped} budget skips"),
        started,
    );
}

#[test]
fn criterion_2_unit_diagonal_exact_count() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC2);
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let mut rows: Vec<Vec<String>> = Vec::new();
        for r in 0..n {
            let mut row = Vec::new();
            for c in 0..n {
                let entry = if c < r {
                    "0".to_string()
                } else if c == r {
                    "1".to_string()
                } else {
                    format!("{}/{}", rng.gen_range(-6i64..=6), rng.gen_range(1i64..=4))
                };
                row.push(entry);
            }
            rows.push(row);
        }
        let rows_ref: Vec<Vec<&str>> = rows
            .iter()
            .map(|r| r.iter().map(String::as_str).collect())
            .collect();
        let a = RatMatrix::from_str_rows(&rows_ref).unwrap();

        let mut u = Vec::new();
        let mut v = Vec::new();
        let mut product = BigInt::one();
        for _ in 0..n {
            let lo = ratio(rng.gen_range(-8..=8), rng.gen_range(1..=4));
            let edge = rng.gen_range(1i64..=5);
            product *= BigInt::from(edge);
            v.push(&lo + BigRational::from_integer(BigInt::from(edge)));
            u.push(lo);
        }
        let region = BoxRegion::new(u, v).unwrap();
        let env = count_box_image(&a, &region, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(env.exact, Some(product), "edge-product identity failed");
    }
    assert!(started.elapsed() < Duration::from_secs(10));
    pass("criterion 2 (unit-diagonal exact counts)", "500 matrices", started);
}

#[test]
fn criterion_3_sharpness_families() {
    let started = Instant::now();
    let mut cases = 0;
    for n in 1..=4usize {
        for rank in 1..=n {
            for delta in 1..=4i64 {
                for k in 1..=2u64 {
                    let r = k * delta as u64;
                    // Basis e_1, .., e_{rank-1}, delta * e_rank.
                    let mut cols = Vec::new();
                    for c in 0..rank {
                        let mut col = vec![0i64; n];
                        col[c] = if c + 1 == rank { delta } else { 1 };
                        cols.push(col);
                    }
                    let lat = Lattice::from_columns(n, &cols).unwrap();
                    assert_eq!(lat.height(), BigInt::from(delta));
                    let cube = CubeRegion::centered(n, r).unwrap();
                    let env = cube_count_envelope(&lat, &cube, DEFAULT_ENUM_BUDGET).unwrap();
                    let exact = BigRational::from_integer(env.exact.clone().unwrap());
                    assert_eq!(
                        exact, env.upper,
                        "count must meet the upper bound exactly (n={n}, rank={rank}, delta={delta}, R={r})"
                    );
                    cases += 1;
                }
            }
        }
    }
    pass(
        "criterion 3 (sharpness: exact count equals upper bound)",
        &format!("{cases} families, tolerance 0"),
        started,
    );
}

#[test]
fn criterion_4_avoidance_certificates() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC4);
    for _ in 0..300 {
        let omega = common::rand_lattice(&mut rng, 4, 3);
        let j = omega.rank();
        let m = rng.gen_range(1..=6);
        let obstacles: Vec<Lattice> = (0..m)
            .map(|_| {
                if j == 1 {
                    common::scaled_sublattice(&omega, rng.gen_range(2..=4))
                } else {
                    let rank = rng.gen_range(1..j);
                    common::rand_sublattice(&mut rng, &omega, rank)
                }
            })
            .collect();
        let inst = AvoidanceInstance::new(omega, obstacles).unwrap();
        let cert = find_point_outside(&inst, DEFAULT_ENUM_BUDGET).unwrap();

        // Independent re-checks: membership, avoidance, exact bound.
        assert!(inst.omega().contains(&cert.point).unwrap());
        for lam in inst.obstacles() {
            assert!(!lam.contains(&cert.point).unwrap());
        }
        assert_eq!(height_of(&cert.point), cert.found);
        assert!(
            BigRational::from_integer(cert.found.clone()) <= theorem_bound(&inst),
            "bound violated for {inst:?}"
        );
    }
    assert!(started.elapsed() < Duration::from_secs(120));
    pass("criterion 4 (avoidance certificates)", "300 instances", started);
}

#[test]
fn criterion_5_linear_forms_bound() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC5);
    for _ in 0..200 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(1..=8);
        let forms: Vec<LinearForm> = (0..m)
            .map(|_| common::rand_primitive_form(&mut rng, n, 9))
            .collect();
        let cert = linear_forms_point(&forms, DEFAULT_ENUM_BUDGET).unwrap();
        for f in &forms {
            assert!(!f.evaluate(&cert.point).unwrap().is_zero());
        }
        let recip: BigRational = forms
            .iter()
            .map(|f| BigRational::new(BigInt::one(), f.height()))
            .sum();
        let found = BigRational::from_integer(cert.found.clone());
        // Exact form of `found <= sum 1/H + sqrt(M)` by squaring.
        assert!(ge_minus_sqrt(&recip, &found, &BigInt::from(m)));
        // And against the outward-rounded bound actually reported.
        let rounded = &recip + sqrt_upper(&BigInt::from(m)).unwrap();
        assert!(found <= rounded);
    }
    assert!(started.elapsed() < Duration::from_secs(60));
    pass("criterion 5 (linear-forms certificates)", "200 collections", started);
}

#[test]
fn criterion_6_polynomial_bounds() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC6);
    let mut length_checked = 0usize;
    for i in 0..500 {
        let n = rng.gen_range(1..=4);
        let poly = if i % 2 == 0 {
            let p = common::rand_poly(&mut rng, n, 6, 8);
            if p.degree() == 0 {
                continue;
            }
            p
        } else {
            let deg = rng.gen_range(1..=6);
            common::rand_homogeneous_poly(&mut rng, n, deg, 8)
        };
        let m = poly.degree();
        let cert = find_small_height_point(&poly).unwrap();
        assert!(!poly.evaluate(&cert.point).unwrap().is_zero());
        let found = BigRational::from_integer(cert.found.clone());
        if poly.is_homogeneous() {
            assert!(found <= ratio(m as i64 + 1, 2), "homogeneous height bound");
        } else {
            assert!(found <= ratio(m as i64 + 2, 2), "height bound");
            assert!(cert.point.iter().all(|v| !v.is_zero()));
        }

        if poly.is_homogeneous() && n >= 2 {
            let cert = find_small_length_point(&poly).unwrap();
            assert!(!poly.evaluate(&cert.point).unwrap().is_zero());
            let bound = (ratio(m as i64 + 2, 2)
                * ratio(n as i64, 1).min(ratio(m as i64 + 2, 4)))
            .floor();
            assert_eq!(length_of(&cert.point), cert.found);
            assert!(BigRational::from_integer(cert.found.clone()) <= bound);
            length_checked += 1;
        }

        // Grid completeness: any grid larger than m(F) contains a
        // nonvanishing point.
        if i % 5 == 0 {
            let need = poly.max_partial_degree() as usize + 1;
            let mut grid: Vec<BigInt> = (0..need as i64).map(BigInt::from).collect();
            grid.reverse();
            assert!(find_nonvanishing_grid(&poly, &grid).unwrap().is_some());
        }
    }
    assert!(length_checked >= 100);

    // The vanishing family is identically zero on its own grid.
    let family = common::vanishing_family(2, &[1, 2]);
    let grid = vec![BigInt::from(1), BigInt::from(2)];
    assert_eq!(find_nonvanishing_grid(&family, &grid).unwrap(), None);
    let family = common::vanishing_family(3, &[-1, 0, 2]);
    let grid = vec![BigInt::from(-1), BigInt::from(0), BigInt::from(2)];
    assert_eq!(find_nonvanishing_grid(&family, &grid).unwrap(), None);

    pass(
        "criterion 6 (polynomial search bounds)",
        &format!("500 polynomials, {length_checked} length certificates"),
        started,
    );
}

#[test]
fn criterion_7_duality_and_basis_invariance() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC7);
    let mut duality_checked = 0usize;
    while duality_checked < 200 {
        let lat = common::rand_lattice(&mut rng, 5, 5);
        if lat.rank() == lat.ambient_dim() {
            continue;
        }
        let cert = duality_certificate(&lat).unwrap();
        assert!(cert.verified);
        assert!(cert.gamma.is_positive());
        duality_checked += 1;
    }
    for _ in 0..100 {
        let lat = common::rand_lattice(&mut rng, 5, 5);
        let u = common::rand_unimodular(&mut rng, lat.rank());
        let changed = Lattice::new(lat.ambient_dim(), lat.basis().mul(&u).unwrap()).unwrap();
        assert_eq!(lat.height(), changed.height());
    }
    pass(
        "criterion 7 (duality and basis invariance)",
        "200 duality certificates, 100 basis changes",
        started,
    );
}

/// Independent oracle for minimal covers: all primitive normalized forms
/// of height at most `cap`, generated directly.
fn oracle_pool(dim: usize, cap: i64) -> Vec<LinearForm> {
    let mut pool = Vec::new();
    let mut q = vec![-cap; dim];
    loop {
        if q.iter().find(|v| **v != 0).is_some_and(|v| *v > 0) {
            if let Ok(f) = LinearForm::from_i64(&q) {
                if f.coeffs().iter().zip(&q).all(|(a, b)| *a == BigInt::from(*b)) {
                    pool.push(f);
                }
            }
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return pool;
            }
            k -= 1;
            q[k] += 1;
            if q[k] <= cap {
                break;
            }
            q[k] = -cap;
        }
    }
}

/// True iff some `size`-subset of `pool` covers the radius-`r` cube.
fn some_subset_covers(pool: &[LinearForm], size: usize, r: u64) -> bool {
    fn rec(pool: &[LinearForm], start: usize, picked: &mut Vec<LinearForm>, size: usize, r: u64) -> bool {
        if picked.len() == size {
            let inst = CoverInstance::new(2, r, picked.clone()).unwrap();
            return verify_cover(&inst, DEFAULT_ENUM_BUDGET).unwrap().covered;
        }
        let need = size - picked.len();
        for i in start..=pool.len().saturating_sub(need) {
            picked.push(pool[i].clone());
            if rec(pool, i + 1, picked, size, r) {
                return true;
            }
            picked.pop();
        }
        false
    }
    rec(pool, 0, &mut Vec::new(), size, r)
}

#[test]
fn criterion_8_plank_goldens() {
    let started = Instant::now();
    // Frozen minima, first established by the subset-exhaustion oracle
    // below: 4 planks for the radius-1 square, 8 for radius 2.
    for (r, expected) in [(1u64, 4usize), (2, 8)] {
        let min = minimal_cover_search(2, r, r, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(min.instance.forms().len(), expected, "frozen minimum for R={r}");
        assert!(min.pool_complete);
        assert!(verify_cover(&min.instance, DEFAULT_ENUM_BUDGET).unwrap().covered);

        // Oracle: no strictly smaller subset of the full pool covers.
        let pool = oracle_pool(2, r as i64);
        assert!(!some_subset_covers(&pool, expected - 1, r));

        // Both covering inequalities hold on the found cover.
        let report = check_plank_inequalities(&min.instance, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(report.count_ok, "M >= 2R-1");
        assert!(report.width_ok, "width sum >= R - sqrt(M)");
        assert!(min.instance.forms().len() as u64 >= 2 * r - 1);
    }
    assert!(started.elapsed() < Duration::from_secs(30));
    pass("criterion 8 (plank cover goldens)", "R=1 -> 4, R=2 -> 8", started);
}

#[test]
fn criterion_9_length_ball_identity() {
    let started = Instant::now();
    let mut checked = 0;
    for n in 1..=4usize {
        for twice_r in 0..=12i64 {
            // Integer and half-integer radii up to 6.
            let r = ratio(twice_r, 2);
            let formula = count_length_ball(n, &r);
            let brute = brute_length_ball(n, &r);
            assert_eq!(formula, brute, "disagreement at N={n}, R={r}");
            checked += 1;
        }
    }
    pass(
        "criterion 9 (taxicab-ball identity)",
        &format!("{checked} (N, R) pairs, exact equality"),
        started,
    );
}

fn brute_length_ball(n: usize, r: &BigRational) -> BigInt {
    if r.is_negative() {
        return BigInt::zero();
    }
    let bound = i64::try_from(r.floor().to_integer()).unwrap();
    let mut count = BigInt::zero();
    let mut x = vec![-bound; n];
    loop {
        let l: i64 = x.iter().map(|v| v.abs()).sum();
        if BigRational::from_integer(BigInt::from(l)) <= *r {
            count += BigInt::one();
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            x[k] += 1;
            if x[k] <= bound {
                break;
            }
            x[k] = -bound;
            k += 1;
        }
    }
}

#[test]
fn supplementary_counting_function_envelope() {
    // Lower envelope of the counting function at radii that are multiples
    // of rank * height: exact union count stays above the guaranteed
    // difference of cube bounds.
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xE5);
    let mut checked = 0;
    while checked < 60 {
        let omega = common::rand_lattice(&mut rng, 3, 2);
        let j = omega.rank();
        if j < 2 {
            continue;
        }
        let h = omega.height();
        let base = BigInt::from(j) * &h;
        let Ok(base_u) = u64::try_from(&base) else {
            continue;
        };
        if base_u > 18 {
            continue;
        }
        let m = rng.gen_range(1..=4);
        let obstacles: Vec<Lattice> = (0..m)
            .map(|_| {
                let rank = rng.gen_range(1..j);
                common::rand_sublattice(&mut rng, &omega, rank)
            })
            .collect();
        let inst = AvoidanceInstance::new(omega.clone(), obstacles).unwrap();
        let r = base_u;
        let f = counting_function(&inst, r, DEFAULT_ENUM_BUDGET).unwrap();

        let two_r = ratio(2 * r as i64, 1);
        let jj = BigRational::from_integer(BigInt::from(j).pow(j as u32));
        let mut envelope = two_r.pow(j as i32) / (jj * BigRational::from_integer(h.clone()));
        for lam in inst.obstacles() {
            let li = lam.rank();
            let term = (&two_r / BigRational::from_integer(lam.height())
                + BigRational::one())
                * (&two_r + BigRational::one()).pow(li as i32 - 1);
            envelope -= term;
        }
        assert!(
            BigRational::from_integer(f.clone()) >= envelope,
            "counting function dipped below its envelope"
        );
        checked += 1;
    }
    pass(
        "supplementary (counting-function envelope)",
        "60 instances at divisible radii",
        started,
    );
}

#[test]
fn supplementary_single_obstacle_consistency() {
    // With one obstacle the general bound never exceeds the fixed
    // single-obstacle coefficient bound.
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xE6);
    for _ in 0..100 {
        let omega = common::rand_lattice(&mut rng, 4, 3);
        let obstacle = if omega.rank() == 1 {
            common::scaled_sublattice(&omega, 2)
        } else {
            common::rand_sublattice(&mut rng, &omega, omega.rank() - 1)
        };
        let inst = AvoidanceInstance::new(omega.clone(), vec![obstacle]).unwrap();
        let general = theorem_bound(&inst);
        let single =
            heightscout::avoidance::faltings_bound(omega.rank() as u32, &omega.height()).unwrap();
        assert!(general <= single);
    }
    pass(
        "supplementary (single-obstacle bound consistency)",
        "100 instances",
        started,
    );
}
