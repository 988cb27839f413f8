//! Rational enclosures of irrational roots.
//!
//! Bound formulas involve `sqrt(M)` and k-th roots; certificates compare
//! against rational enclosures tight to `10^-12` so every comparison stays
//! exact. Outward rounding (an upper bound on the root) keeps asserted
//! theorem bounds valid.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

const PRECISION_DIGITS: u32 = 12;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(PRECISION_DIGITS)
}

/// Smallest representable rational `>= v^(1/k)` on the `10^-12` grid.
/// Exact when `v` is a perfect k-th power.
pub fn nth_root_upper(v: &BigInt, k: u32) -> Result<BigRational> {
    if v.is_negative() {
        return Err(Error::InvalidParameter(
            "root of a negative value".to_string(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("zeroth root".to_string()));
    }
    let exact = v.nth_root(k);
    if exact.pow(k) == *v {
        return Ok(BigRational::from_integer(exact));
    }
    let s = scale();
    let scaled = v * s.pow(k);
    let mut root = scaled.nth_root(k);
    if root.pow(k) < scaled {
        root += BigInt::one();
    }
    Ok(BigRational::new(root, s))
}

/// Largest representable rational `<= v^(1/k)` on the `10^-12` grid.
pub fn nth_root_lower(v: &BigInt, k: u32) -> Result<BigRational> {
    if v.is_negative() {
        return Err(Error::InvalidParameter(
            "root of a negative value".to_string(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("zeroth root".to_string()));
    }
    let exact = v.nth_root(k);
    if exact.pow(k) == *v {
        return Ok(BigRational::from_integer(exact));
    }
    let s = scale();
    let scaled = v * s.pow(k);
    Ok(BigRational::new(scaled.nth_root(k), s))
}

pub fn sqrt_upper(v: &BigInt) -> Result<BigRational> {
    nth_root_upper(v, 2)
}

pub fn sqrt_lower(v: &BigInt) -> Result<BigRational> {
    nth_root_lower(v, 2)
}

/// Exact truth of `lhs >= r - sqrt(m)` for rational `lhs`, integer `r`,
/// nonnegative integer `m`, decided by squaring instead of rounding.
pub fn ge_minus_sqrt(lhs: &BigRational, r: &BigRational, m: &BigInt) -> bool {
    let diff = r - lhs; // lhs >= r - sqrt(m)  <=>  sqrt(m) >= diff
    if !diff.is_positive() {
        return true;
    }
    let m = BigRational::from_integer(m.clone());
    m >= &diff * &diff
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn roots_enclose() {
        let two = bi(2);
        let lo = sqrt_lower(&two).unwrap();
        let hi = sqrt_upper(&two).unwrap();
        assert!(lo < hi);
        assert!(&lo * &lo < BigRational::from_integer(two.clone()));
        assert!(&hi * &hi > BigRational::from_integer(two));
        let width = &hi - &lo;
        assert!(width <= BigRational::new(bi(1), bi(10).pow(12)));
    }

    #[test]
    fn perfect_powers_are_exact() {
        assert_eq!(sqrt_upper(&bi(9)).unwrap(), BigRational::from_integer(bi(3)));
        assert_eq!(sqrt_lower(&bi(9)).unwrap(), BigRational::from_integer(bi(3)));
        assert_eq!(
            nth_root_upper(&bi(32), 5).unwrap(),
            BigRational::from_integer(bi(2))
        );
    }

    #[test]
    fn sqrt_comparison_is_exact() {
        // 1 >= 2 - sqrt(2) (true: sqrt(2) ~ 1.414 >= 1)
        let one = BigRational::from_integer(bi(1));
        let two = BigRational::from_integer(bi(2));
        assert!(ge_minus_sqrt(&one, &two, &bi(2)));
        // 0.4 >= 2 - sqrt(2) is false
        let small = BigRational::new(bi(2), bi(5));
        assert!(!ge_minus_sqrt(&small, &two, &bi(2)));
    }
}
