//! Small-height points of a lattice outside a union of proper sublattices,
//! with exact bound certificates; includes the linear-forms specialization
//! and the single-obstacle kernel-subspace bound.
//!
//! Searches scan cubes of increasing integer radius and return the
//! canonical survivor: coordinates are compared by absolute value with the
//! positive sign first, the last coordinate most significant, so results
//! are deterministic and independent of enumeration internals.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{height_of, BoundCertificate, NormKind, TheoremId};
use crate::counting::{count_cube_points, scan_cube, CubeRegion};
use crate::error::{Error, Result};
use crate::interchange::ratio_to_string;
use crate::lattice::{hyperplane_lattice, Lattice, LinearForm};
use crate::numeric::sqrt_upper;

/// A lattice together with a nonempty list of proper nonzero sublattices to
/// avoid.
#[derive(Clone, Debug)]
pub struct AvoidanceInstance {
    omega: Lattice,
    obstacles: Vec<Lattice>,
}

impl AvoidanceInstance {
    /// Validates that every obstacle is a proper sublattice of `omega`:
    /// each obstacle basis column must lie in `omega`, and an obstacle of
    /// equal rank must miss at least one `omega` basis vector.
    pub fn new(omega: Lattice, obstacles: Vec<Lattice>) -> Result<Self> {
        if obstacles.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one obstacle sublattice is required".into(),
            ));
        }
        for (idx, lam) in obstacles.iter().enumerate() {
            if lam.ambient_dim() != omega.ambient_dim() {
                return Err(Error::InvalidInstance(format!(
                    "obstacle {idx} has ambient dimension {}, expected {}",
                    lam.ambient_dim(),
                    omega.ambient_dim()
                )));
            }
            for c in 0..lam.rank() {
                let col = lam.basis().column(c);
                if !omega.contains(&col)? {
                    return Err(Error::InvalidInstance(format!(
                        "obstacle {idx} is not a sublattice: basis column {c} lies outside"
                    )));
                }
            }
            if lam.rank() == omega.rank() {
                let proper = (0..omega.rank()).any(|c| {
                    let col = omega.basis().column(c);
                    !lam.contains(&col).unwrap_or(false)
                });
                if !proper {
                    return Err(Error::InvalidInstance(format!(
                        "obstacle {idx} equals the ambient lattice"
                    )));
                }
            }
        }
        Ok(AvoidanceInstance { omega, obstacles })
    }

    pub fn omega(&self) -> &Lattice {
        &self.omega
    }

    pub fn obstacles(&self) -> &[Lattice] {
        &self.obstacles
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceWire {
    omega: Lattice,
    obstacles: Vec<Lattice>,
}

impl Serialize for AvoidanceInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceWire {
            omega: self.omega.clone(),
            obstacles: self.obstacles.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AvoidanceInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = InstanceWire::deserialize(d)?;
        AvoidanceInstance::new(wire.omega, wire.obstacles).map_err(serde::de::Error::custom)
    }
}

/// Height bound guaranteed for some point of `omega` outside the obstacle
/// union:
/// `((3/2)^(J-1) J^J (sum_i 1/H(L_i) + sqrt(M)) + J) * H(omega)`,
/// with `sqrt(M)` outward-rounded to the `10^-12` rational grid.
pub fn theorem_bound(inst: &AvoidanceInstance) -> BigRational {
    let j = inst.omega.rank() as u32;
    let h_omega = BigRational::from_integer(inst.omega.height());
    let m = inst.obstacles.len();

    let three_half = BigRational::new(BigInt::from(3), BigInt::from(2)).pow(j as i32 - 1);
    let j_pow = BigRational::from_integer(BigInt::from(j).pow(j));
    let recip_sum: BigRational = inst
        .obstacles
        .iter()
        .map(|l| BigRational::new(BigInt::one(), l.height()))
        .sum();
    let sqrt_m = sqrt_upper(&BigInt::from(m)).expect("nonnegative");
    (three_half * j_pow * (recip_sum + sqrt_m) + BigRational::from_integer(BigInt::from(j)))
        * h_omega
}

/// Canonical search order: coordinates weighted by (absolute value,
/// negative-after-positive), the last coordinate most significant.
pub(crate) fn search_order(a: &[BigInt], b: &[BigInt]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        let ord = x
            .abs()
            .cmp(&y.abs())
            .then_with(|| x.is_negative().cmp(&y.is_negative()));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

fn ceil_to_u64(r: &BigRational) -> u64 {
    let c = r.ceil().to_integer();
    u64::try_from(c).unwrap_or(u64::MAX)
}

/// Searches `omega` by increasing height radius for the first point outside
/// every obstacle, returning it with the height bound it must respect.
///
/// The bound makes the search finite: if no survivor exists up to the
/// ceiling of the bound (possible only for equal-rank obstacle families
/// whose union covers the lattice), a no-point error reports the bound.
pub fn find_point_outside(inst: &AvoidanceInstance, budget: u64) -> Result<BoundCertificate> {
    let bound = theorem_bound(inst);
    let r_max = ceil_to_u64(&bound).max(1);
    let n = inst.omega.ambient_dim();
    for r in 1..=r_max {
        let cube = CubeRegion::centered(n, r)?;
        let radius = BigInt::from(r);
        let mut best: Option<Vec<BigInt>> = None;
        let mut err: Option<Error> = None;
        scan_cube(&inst.omega, &cube, budget, |x| {
            if height_of(x) < radius {
                return; // already ruled out at a smaller radius
            }
            for lam in &inst.obstacles {
                match lam.contains(x) {
                    Ok(true) => return,
                    Ok(false) => {}
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                }
            }
            let better = match &best {
                None => true,
                Some(b) => search_order(x, b) == Ordering::Less,
            };
            if better {
                best = Some(x.to_vec());
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(point) = best {
            let cert = BoundCertificate {
                found: height_of(&point),
                point,
                norm: NormKind::Height,
                theorem_bound: bound,
                theorem_id: TheoremId::Thm1_4,
                search_radius_used: r,
                case_fired: None,
            };
            debug_assert!(cert.bound_satisfied());
            return Ok(cert);
        }
    }
    Err(Error::NoPointWithinBound {
        bound: ratio_to_string(&bound),
    })
}

/// `|omega ∩ C_R| - |union_i (obstacle_i ∩ C_R)|`, the union counted
/// exactly as a merged point set. A positive value certifies a survivor of
/// height at most `R`.
pub fn counting_function(inst: &AvoidanceInstance, r: u64, budget: u64) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::InvalidParameter(
            "counting function needs a positive radius".into(),
        ));
    }
    let n = inst.omega.ambient_dim();
    let cube = CubeRegion::centered(n, r)?;
    let total = count_cube_points(&inst.omega, &cube, budget)?;
    let mut union: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for lam in &inst.obstacles {
        scan_cube(lam, &cube, budget, |x| {
            union.insert(x.to_vec());
        })?;
    }
    Ok(total - BigInt::from(union.len()))
}

/// A point of `Z^N` where none of the given primitive linear forms vanish,
/// with the smaller of the two height bounds: `sum_i 1/H(L_i) + sqrt(M)`
/// (outward-rounded) and `(M+1)/2`.
pub fn linear_forms_point(forms: &[LinearForm], budget: u64) -> Result<BoundCertificate> {
    if forms.is_empty() {
        return Err(Error::InvalidInstance("at least one linear form".into()));
    }
    let n = forms[0].dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(
            "the linear-forms search needs at least two variables".into(),
        ));
    }
    if forms.iter().any(|f| f.dim() != n) {
        return Err(Error::Dimension(
            "all forms must share one variable count".into(),
        ));
    }
    // Hyperplane lattices realize each form's height as a lattice height;
    // the search itself tests the forms directly.
    for f in forms {
        let lat = hyperplane_lattice(f)?;
        debug_assert_eq!(lat.height(), f.height());
    }
    let m = forms.len();
    let recip_sum: BigRational = forms
        .iter()
        .map(|f| BigRational::new(BigInt::one(), f.height()))
        .sum();
    let classical = &recip_sum + sqrt_upper(&BigInt::from(m)).expect("nonnegative");
    let basic = BigRational::new(BigInt::from(m as u64 + 1), BigInt::from(2));
    let (bound, theorem_id) = if classical <= basic {
        (classical.clone(), TheoremId::Cor5_2)
    } else {
        (basic, TheoremId::Basic1)
    };

    let z_n = Lattice::standard(n);
    let r_max = ceil_to_u64(&bound).max(1);
    for r in 1..=r_max {
        let cube = CubeRegion::centered(n, r)?;
        let radius = BigInt::from(r);
        let mut best: Option<Vec<BigInt>> = None;
        scan_cube(&z_n, &cube, budget, |x| {
            if height_of(x) < radius {
                return;
            }
            if forms
                .iter()
                .all(|f| !f.evaluate(x).expect("dimension checked").is_zero())
            {
                let better = match &best {
                    None => true,
                    Some(b) => search_order(x, b) == Ordering::Less,
                };
                if better {
                    best = Some(x.to_vec());
                }
            }
        })?;
        if let Some(point) = best {
            let cert = BoundCertificate {
                found: height_of(&point),
                point,
                norm: NormKind::Height,
                theorem_bound: bound,
                theorem_id,
                search_radius_used: r,
                case_fired: None,
            };
            debug_assert!(cert.bound_satisfied());
            return Ok(cert);
        }
    }
    Err(Error::NoPointWithinBound {
        bound: ratio_to_string(&bound),
    })
}

/// Height bound for a point of a rank-`J` kernel-section lattice outside a
/// subspace not containing it: `(2 J^J (3/2)^(J-1) + J) * H(omega)`.
pub fn faltings_bound(j: u32, h_omega: &BigInt) -> Result<BigRational> {
    if j == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    if !h_omega.is_positive() {
        return Err(Error::InvalidParameter(
            "lattice height must be positive".into(),
        ));
    }
    let three_half = BigRational::new(BigInt::from(3), BigInt::from(2)).pow(j as i32 - 1);
    let j_pow = BigRational::from_integer(BigInt::from(j).pow(j));
    let two = BigRational::from_integer(BigInt::from(2));
    Ok((two * j_pow * three_half + BigRational::from_integer(BigInt::from(j)))
        * BigRational::from_integer(h_omega.clone()))
}

/// The bound the successive-minima route yields for the same situation:
/// `d1^(1/(d-d0)) * H(omega)^(3 d1/(d-d0))`, for side-by-side display.
/// Roots are outward-rounded (exact on perfect powers).
pub fn faltings_comparison(d1: u64, d: u64, d0: u64, h_omega: &BigInt) -> Result<BigRational> {
    if !(d1 > d && d > d0) {
        return Err(Error::InvalidParameter(format!(
            "need d1 > d > d0 >= 0, got d1={d1}, d={d}, d0={d0}"
        )));
    }
    if !h_omega.is_positive() {
        return Err(Error::InvalidParameter(
            "lattice height must be positive".into(),
        ));
    }
    let k = u32::try_from(d - d0)
        .map_err(|_| Error::InvalidParameter("exponent gap too large".into()))?;
    let first = crate::numeric::nth_root_upper(&BigInt::from(d1), k)?;
    let second = crate::numeric::nth_root_upper(&h_omega.pow(3 * d1 as u32), k)?;
    Ok(first * second)
}
