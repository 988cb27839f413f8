//! Exact lattice-point counting in aligned boxes and centered cubes, with
//! the closed-form and envelope bounds attached to every count.
//!
//! Boxes are half-open (`u_m < x_m <= v_m`), cubes are closed
//! (`|x_i - z_i| <= R`). Regions carry rational data so membership is
//! exactly decidable; counts are exact integers produced by interval
//! propagation over a triangular form of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interchange::{parse_ratio, ratio_to_string};
use crate::lattice::Lattice;

/// Default cap on enumeration work, measured in projected candidate
/// visits. Overridable per call; the CLI exposes `--budget` and the
/// `HEIGHTSCOUT_BUDGET` environment variable.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

/// Half-open aligned box `{x : u_m < x_m <= v_m}` with rational corners.
#[derive(Clone, Debug)]
pub struct BoxRegion {
    u: Vec<BigRational>,
    v: Vec<BigRational>,
}

impl BoxRegion {
    pub fn new(u: Vec<BigRational>, v: Vec<BigRational>) -> Result<Self> {
        if u.is_empty() || u.len() != v.len() {
            return Err(Error::InvalidRegion(format!(
                "box corners must have equal positive length, got {} and {}",
                u.len(),
                v.len()
            )));
        }
        for (m, (a, b)) in u.iter().zip(&v).enumerate() {
            if a >= b {
                return Err(Error::InvalidRegion(format!(
                    "box needs u_m < v_m in every coordinate, violated at {m}"
                )));
            }
        }
        Ok(BoxRegion { u, v })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn lower(&self) -> &[BigRational] {
        &self.u
    }

    pub fn upper(&self) -> &[BigRational] {
        &self.v
    }
}

#[derive(Serialize, Deserialize)]
struct BoxWire {
    u: Vec<String>,
    v: Vec<String>,
}

impl Serialize for BoxRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxWire {
            u: self.u.iter().map(ratio_to_string).collect(),
            v: self.v.iter().map(ratio_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxRegion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = BoxWire::deserialize(d)?;
        let parse = |v: &[String]| -> Result<Vec<BigRational>> {
            v.iter().map(|s| parse_ratio(s)).collect()
        };
        BoxRegion::new(
            parse(&wire.u).map_err(serde::de::Error::custom)?,
            parse(&wire.v).map_err(serde::de::Error::custom)?,
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Closed cube of half-side `R` centered at a rational point `z`.
#[derive(Clone, Debug)]
pub struct CubeRegion {
    radius: BigRational,
    center: Vec<BigRational>,
}

impl CubeRegion {
    pub fn new(radius: BigRational, center: Vec<BigRational>) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidRegion("cube radius must be positive".into()));
        }
        if center.is_empty() {
            return Err(Error::InvalidRegion("cube center must be nonempty".into()));
        }
        Ok(CubeRegion { radius, center })
    }

    /// Origin-centered cube of integer half-side `r >= 1`.
    pub fn centered(dim: usize, r: u64) -> Result<Self> {
        CubeRegion::new(
            BigRational::from_integer(BigInt::from(r)),
            vec![BigRational::zero(); dim],
        )
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn center(&self) -> &[BigRational] {
        &self.center
    }

    /// Integer bounds per coordinate: `ceil(z_i - R) ..= floor(z_i + R)`.
    fn integer_bounds(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lo = self
            .center
            .iter()
            .map(|z| (z - &self.radius).ceil().to_integer())
            .collect();
        let hi = self
            .center
            .iter()
            .map(|z| (z + &self.radius).floor().to_integer())
            .collect();
        (lo, hi)
    }
}

#[derive(Serialize, Deserialize)]
struct CubeWire {
    #[serde(rename = "R")]
    radius: String,
    z: Vec<String>,
}

impl Serialize for CubeRegion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CubeWire {
            radius: ratio_to_string(&self.radius),
            z: self.center.iter().map(ratio_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubeRegion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = CubeWire::deserialize(d)?;
        let radius = parse_ratio(&wire.radius).map_err(serde::de::Error::custom)?;
        let center = wire
            .z
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CubeRegion::new(radius, center).map_err(serde::de::Error::custom)
    }
}

/// An exact count (when computed within budget) together with the bound
/// envelope it must satisfy. `lower` is only asserted when
/// `lower_applicable` records that its divisibility precondition held.
#[derive(Clone, Debug)]
pub struct CountEnvelope {
    pub exact: Option<BigInt>,
    pub lower: BigRational,
    pub upper: BigRational,
    pub lower_applicable: bool,
}

impl CountEnvelope {
    /// Envelope soundness for this value: `exact <= upper` always, and
    /// `lower <= exact` whenever the lower bound applies.
    pub fn is_sound(&self) -> bool {
        match &self.exact {
            None => true,
            Some(e) => {
                let e = BigRational::from_integer(e.clone());
                e <= self.upper && (!self.lower_applicable || self.lower <= e)
            }
        }
    }
}

impl Serialize for CountEnvelope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = 3 + usize::from(self.exact.is_some());
        let mut st = s.serialize_struct("CountEnvelope", fields)?;
        if let Some(e) = &self.exact {
            st.serialize_field("exact", &e.to_string())?;
        }
        st.serialize_field("lower", &ratio_to_string(&self.lower))?;
        st.serialize_field("upper", &ratio_to_string(&self.upper))?;
        st.serialize_field("lower_applicable", &self.lower_applicable)?;
        st.end()
    }
}

/// Dense rational matrix, used for the box-count transform.
#[derive(Clone, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_str_rows(rows: &[Vec<&str>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            for s in row {
                data.push(parse_ratio(s)?);
            }
        }
        RatMatrix::new(r, c, data)
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|r| (0..r.min(self.cols)).all(|c| self.at(r, c).is_zero()))
    }
}

#[derive(Serialize, Deserialize)]
struct RatMatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<Vec<String>>,
}

impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let data = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| ratio_to_string(self.at(r, c))).collect())
            .collect();
        RatMatrixWire {
            rows: self.rows,
            cols: self.cols,
            data,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = RatMatrixWire::deserialize(d)?;
        if wire.data.len() != wire.rows || wire.data.iter().any(|r| r.len() != wire.cols) {
            return Err(serde::de::Error::custom("matrix shape does not match data"));
        }
        let mut data = Vec::with_capacity(wire.rows * wire.cols);
        for row in &wire.data {
            for s in row {
                data.push(parse_ratio(s).map_err(serde::de::Error::custom)?);
            }
        }
        RatMatrix::new(wire.rows, wire.cols, data).map_err(serde::de::Error::custom)
    }
}

fn floor_int(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Exact count of `{xi in Z^N : A xi in B(u, v)}` for an upper-triangular
/// rational `A` with positive diagonal, plus the floor-product envelope.
///
/// The count runs by back substitution from the last row up: the last row
/// constrains its own coordinate to a rational interval, and every choice
/// propagates into the rows above. When the diagonal is all ones and every
/// edge length is a positive integer the exact count collapses to the
/// product of the edge lengths.
pub fn count_box_image(a: &RatMatrix, region: &BoxRegion, budget: u64) -> Result<CountEnvelope> {
    let n = region.dim();
    if a.n_rows() != n || a.n_cols() != n {
        return Err(Error::Dimension(format!(
            "transform is {}x{}, box has dimension {n}",
            a.n_rows(),
            a.n_cols()
        )));
    }
    if !a.is_upper_triangular() {
        return Err(Error::InvalidParameter(
            "box-count transform must be upper triangular".into(),
        ));
    }
    for m in 0..n {
        if !a.at(m, m).is_positive() {
            return Err(Error::NonPositiveDiagonal(m));
        }
    }

    let mut lower = BigRational::one();
    let mut upper = BigRational::one();
    let mut unit_diag_integer_edges = true;
    let mut edge_product = BigInt::one();
    for m in 0..n {
        let width = (&region.v[m] - &region.u[m]) / a.at(m, m);
        let fl = BigRational::from_integer(floor_int(&width));
        upper *= &fl + BigRational::one();
        lower *= fl;
        let edge = &region.v[m] - &region.u[m];
        if a.at(m, m).is_one() && edge.is_integer() && edge.is_positive() {
            edge_product *= edge.to_integer();
        } else {
            unit_diag_integer_edges = false;
        }
    }

    let projected = upper.to_integer();
    let exact = if projected <= BigInt::from(budget) {
        let mut xi = vec![BigInt::zero(); n];
        let count = count_box_rec(a, region, n - 1, &mut xi);
        if unit_diag_integer_edges {
            debug_assert_eq!(count, edge_product);
        }
        Some(count)
    } else {
        None
    };

    let env = CountEnvelope {
        exact,
        lower,
        upper,
        lower_applicable: true,
    };
    debug_assert!(env.is_sound());
    Ok(env)
}

fn count_box_rec(a: &RatMatrix, region: &BoxRegion, row: usize, xi: &mut [BigInt]) -> BigInt {
    let n = region.dim();
    let mut partial = BigRational::zero();
    for (c, coord) in xi.iter().enumerate().take(n).skip(row + 1) {
        if !a.at(row, c).is_zero() {
            partial += a.at(row, c) * BigRational::from_integer(coord.clone());
        }
    }
    let lo = (&region.u[row] - &partial) / a.at(row, row); // exclusive
    let hi = (&region.v[row] - &partial) / a.at(row, row); // inclusive
    let lo_floor = floor_int(&lo);
    let hi_floor = floor_int(&hi);
    if row == 0 {
        let count = &hi_floor - &lo_floor;
        return if count.is_negative() { BigInt::zero() } else { count };
    }
    let mut total = BigInt::zero();
    let mut t = &lo_floor + BigInt::one();
    while t <= hi_floor {
        xi[row] = t.clone();
        total += count_box_rec(a, region, row - 1, xi);
        t += BigInt::one();
    }
    total
}

/// Core cube scan: visits every lattice point inside the cube exactly once,
/// in no particular order. The visitor receives the ambient coordinates.
///
/// Works on the column-Hermite form of the basis: pivot rows open an
/// integer interval for one coefficient each, non-pivot rows are fully
/// determined and act as exact filters. Fails upfront with a budget error
/// when the projected number of candidate visits exceeds `budget`.
pub(crate) fn scan_cube<F: FnMut(&[BigInt])>(
    lat: &Lattice,
    cube: &CubeRegion,
    budget: u64,
    mut visit: F,
) -> Result<()> {
    let n = lat.ambient_dim();
    if cube.dim() != n {
        return Err(Error::Dimension(format!(
            "cube has dimension {}, lattice ambient is {n}",
            cube.dim()
        )));
    }
    let ech = lat.echelon();
    let h = &ech.basis;
    let pivots = &ech.pivot_rows;
    let (ilo, ihi) = cube.integer_bounds();

    // Projected volume: product over pivots of the widest possible
    // coefficient interval.
    let mut projected = BigInt::one();
    for (k, &r) in pivots.iter().enumerate() {
        let span = &ihi[r] - &ilo[r];
        if span.is_negative() {
            return Ok(()); // cube traps no integer in this coordinate
        }
        projected *= span.div_floor(h.at(r, k)) + BigInt::one();
    }
    if projected > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            projected: projected.to_string(),
            budget,
        });
    }

    let mut val = vec![BigInt::zero(); n];
    scan_rec(h, pivots, &ilo, &ihi, 0, &mut val, &mut visit);
    Ok(())
}

fn scan_rec<F: FnMut(&[BigInt])>(
    h: &crate::linalg::IntMatrix,
    pivots: &[usize],
    ilo: &[BigInt],
    ihi: &[BigInt],
    k: usize,
    val: &mut Vec<BigInt>,
    visit: &mut F,
) {
    let n = ilo.len();
    let j = pivots.len();
    let start = if k == 0 { 0 } else { pivots[k - 1] + 1 };
    let end = if k == j { n } else { pivots[k] };
    // Rows in start..end are fully determined by the coefficients chosen so
    // far; reject as soon as one leaves the cube.
    for i in start..end {
        if val[i] < ilo[i] || val[i] > ihi[i] {
            return;
        }
    }
    if k == j {
        visit(val);
        return;
    }
    let r = pivots[k];
    let step = h.at(r, k).clone(); // positive pivot
    let t_lo = (&ilo[r] - &val[r]).div_ceil(&step);
    let t_hi = (&ihi[r] - &val[r]).div_floor(&step);
    if t_lo > t_hi {
        return;
    }
    // val += column_k * t_lo, then step the column once per iteration.
    for (i, v) in val.iter_mut().enumerate().skip(r) {
        if !h.at(i, k).is_zero() {
            *v += h.at(i, k) * &t_lo;
        }
    }
    let mut t = t_lo;
    loop {
        scan_rec(h, pivots, ilo, ihi, k + 1, val, visit);
        if t == t_hi {
            break;
        }
        for (i, v) in val.iter_mut().enumerate().skip(r) {
            if !h.at(i, k).is_zero() {
                let add = h.at(i, k).clone();
                *v += add;
            }
        }
        t += BigInt::one();
    }
    // Restore val to its state on entry.
    for (i, v) in val.iter_mut().enumerate().skip(r) {
        if !h.at(i, k).is_zero() {
            *v -= h.at(i, k) * &t_hi;
        }
    }
}

/// Exact number of lattice points in the cube, without materializing them.
pub fn count_cube_points(lat: &Lattice, cube: &CubeRegion, budget: u64) -> Result<BigInt> {
    let mut count = BigInt::zero();
    scan_cube(lat, cube, budget, |_| count += BigInt::one())?;
    Ok(count)
}

/// All lattice points in the cube, each exactly once, in ascending
/// lexicographic order of coordinates.
pub fn enumerate_cube(lat: &Lattice, cube: &CubeRegion, budget: u64) -> Result<Vec<Vec<BigInt>>> {
    let mut points = Vec::new();
    scan_cube(lat, cube, budget, |x| points.push(x.to_vec()))?;
    points.sort_unstable();
    Ok(points)
}

/// Cube-count envelope for a lattice of any rank.
///
/// With `D` the lattice height and `l = N - rank`:
/// upper bound `(2R/D + 1)(2R+1)^(N-l-1)` for every center; lower bound
/// `(2R)^(N-l) / ((N-l)^(N-l) D)` asserted only when the center is the
/// origin (any center for full rank) and `R` is a positive integer multiple
/// of `(N-l) D` (of `D` for full rank). The exact count is filled in when
/// the enumeration stays within `budget`.
pub fn cube_count_envelope(lat: &Lattice, cube: &CubeRegion, budget: u64) -> Result<CountEnvelope> {
    let n = lat.ambient_dim();
    if cube.dim() != n {
        return Err(Error::Dimension(format!(
            "cube has dimension {}, lattice ambient is {n}",
            cube.dim()
        )));
    }
    if cube.radius() < &BigRational::one() {
        return Err(Error::InvalidRegion(
            "cube-count envelope needs R >= 1".into(),
        ));
    }
    let rank = lat.rank();
    let codim = n - rank;
    let delta = BigRational::from_integer(lat.height());
    let two_r = cube.radius() * BigRational::from_integer(BigInt::from(2));
    let one = BigRational::one();

    let upper = (&two_r / &delta + &one)
        * (&two_r + &one).pow((rank - 1) as i32);

    // Divisibility precondition of the lower bound: R a positive integer
    // multiple of D for full rank, of rank * D otherwise (and then only for
    // origin-centered cubes).
    let multiple_base = if codim == 0 {
        delta.clone()
    } else {
        &delta * BigRational::from_integer(BigInt::from(rank))
    };
    let ratio = cube.radius() / &multiple_base;
    let is_positive_multiple = ratio.is_integer() && ratio.is_positive();
    let centered = cube.center().iter().all(|z| z.is_zero());
    let lower_applicable = if codim == 0 {
        is_positive_multiple
    } else {
        is_positive_multiple && centered
    };
    let lower_denom = if codim == 0 {
        delta.clone()
    } else {
        BigRational::from_integer(BigInt::from(rank).pow(rank as u32)) * &delta
    };
    let lower = two_r.pow(rank as i32) / lower_denom;

    let exact = match count_cube_points(lat, cube, budget) {
        Ok(c) => Some(c),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };

    let env = CountEnvelope {
        exact,
        lower,
        upper,
        lower_applicable,
    };
    debug_assert!(env.is_sound());
    Ok(env)
}

/// Binomial coefficient for arbitrary-precision `n`.
fn binomial_big(n: &BigInt, k: usize) -> BigInt {
    if n < &BigInt::from(k) {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Number of integer points `x` in `Z^N` with `|x_1| + .. + |x_N| <= R`:
/// `sum_k 2^k C(N,k) C([R],k)` over `k` up to `min([R], N)`.
pub fn count_length_ball(n: usize, r: &BigRational) -> BigInt {
    if r.is_negative() {
        return BigInt::zero();
    }
    let rf = floor_int(r);
    let k_max = if rf < BigInt::from(n) {
        usize::try_from(u64::try_from(rf.clone()).unwrap_or(u64::MAX)).unwrap_or(n)
    } else {
        n
    };
    let mut total = BigInt::zero();
    for k in 0..=k_max {
        let term = (BigInt::one() << k)
            * binomial_big(&BigInt::from(n), k)
            * binomial_big(&rf, k);
        total += term;
    }
    total
}
