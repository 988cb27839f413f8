//! Discrete plank checks: verify that rank-(N-1) sublattices given by
//! primitive linear forms cover every integer point of a centered cube,
//! test the covering inequalities, and find minimal covers by exhaustive
//! branch-and-bound over a height-capped form pool.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interchange::ratio_to_string;
use crate::lattice::LinearForm;
use crate::numeric::{ge_minus_sqrt, sqrt_lower, sqrt_upper};

/// A cube radius and a list of hyperplane sublattices presented by their
/// primitive forms.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    dim: usize,
    radius: u64,
    forms: Vec<LinearForm>,
}

impl CoverInstance {
    pub fn new(dim: usize, radius: u64, forms: Vec<LinearForm>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(
                "plank covers need dimension at least two".into(),
            ));
        }
        if radius == 0 {
            return Err(Error::InvalidParameter("cube radius must be positive".into()));
        }
        if let Some(f) = forms.iter().find(|f| f.dim() != dim) {
            return Err(Error::Dimension(format!(
                "form has {} variables, cover dimension is {dim}",
                f.dim()
            )));
        }
        Ok(CoverInstance { dim, radius, forms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }
}

#[derive(Serialize, Deserialize)]
struct CoverWire {
    #[serde(rename = "N")]
    dim: usize,
    #[serde(rename = "R")]
    radius: u64,
    forms: Vec<LinearForm>,
}

impl Serialize for CoverInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoverWire {
            dim: self.dim,
            radius: self.radius,
            forms: self.forms.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoverInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = CoverWire::deserialize(d)?;
        CoverInstance::new(wire.dim, wire.radius, wire.forms).map_err(serde::de::Error::custom)
    }
}

/// Outcome of a cover check; on failure `witness` is the first uncovered
/// point in ascending lexicographic order.
#[derive(Clone, Debug)]
pub struct CoverCheck {
    pub covered: bool,
    pub witness: Option<Vec<BigInt>>,
}

impl Serialize for CoverCheck {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CoverCheck", 1 + usize::from(self.witness.is_some()))?;
        st.serialize_field("covered", &self.covered)?;
        if let Some(w) = &self.witness {
            st.serialize_field(
                "witness",
                &w.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            )?;
        }
        st.end()
    }
}

fn grid_volume(dim: usize, radius: u64) -> BigInt {
    BigInt::from(2 * radius + 1).pow(dim as u32)
}

/// True iff every integer point of the cube lies on some form's hyperplane.
pub fn verify_cover(inst: &CoverInstance, budget: u64) -> Result<CoverCheck> {
    let volume = grid_volume(inst.dim, inst.radius);
    if volume > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            projected: volume.to_string(),
            budget,
        });
    }
    let r = inst.radius as i64;
    let mut x = vec![-r; inst.dim];
    loop {
        let point: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let covered = inst
            .forms
            .iter()
            .any(|f| f.evaluate(&point).expect("dimension checked").is_zero());
        if !covered {
            return Ok(CoverCheck {
                covered: false,
                witness: Some(point),
            });
        }
        // Odometer, last coordinate fastest: ascending lexicographic scan.
        let mut k = inst.dim;
        loop {
            if k == 0 {
                return Ok(CoverCheck {
                    covered: true,
                    witness: None,
                });
            }
            k -= 1;
            x[k] += 1;
            if x[k] <= r {
                break;
            }
            x[k] = -r;
        }
    }
}

/// Exact verdicts for the two covering inequalities, with slack values.
#[derive(Clone, Debug)]
pub struct PlankReport {
    /// Number of planks in the cover.
    pub form_count: usize,
    /// `2R - 1`, the cardinality floor.
    pub count_bound: u64,
    /// `M >= 2R - 1`.
    pub count_ok: bool,
    /// `M - (2R - 1)`.
    pub count_slack: i64,
    /// `sum_i 1/H(L_i)`, exact.
    pub width_sum: BigRational,
    /// `sum_i 1/H(L_i) >= R - sqrt(M)`, decided exactly by squaring.
    pub width_ok: bool,
    /// Bracketing of the slack `sum + sqrt(M) - R` by the `10^-12` rational
    /// enclosure of `sqrt(M)`.
    pub width_slack_lower: BigRational,
    pub width_slack_upper: BigRational,
}

impl Serialize for PlankReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PlankReport", 8)?;
        st.serialize_field("form_count", &self.form_count)?;
        st.serialize_field("count_bound", &self.count_bound)?;
        st.serialize_field("count_ok", &self.count_ok)?;
        st.serialize_field("count_slack", &self.count_slack)?;
        st.serialize_field("width_sum", &ratio_to_string(&self.width_sum))?;
        st.serialize_field("width_ok", &self.width_ok)?;
        st.serialize_field("width_slack_lower", &ratio_to_string(&self.width_slack_lower))?;
        st.serialize_field("width_slack_upper", &ratio_to_string(&self.width_slack_upper))?;
        st.end()
    }
}

/// Checks `M >= 2R - 1` and `sum 1/H >= R - sqrt(M)` for a verified cover.
/// A non-cover input is rejected with the uncovered witness.
pub fn check_plank_inequalities(inst: &CoverInstance, budget: u64) -> Result<PlankReport> {
    let check = verify_cover(inst, budget)?;
    if !check.covered {
        return Err(Error::NotACover {
            witness: check.witness.expect("witness accompanies failure"),
        });
    }
    let m = inst.forms.len();
    let count_bound = 2 * inst.radius - 1;
    let count_ok = m as u64 >= count_bound;
    let count_slack = m as i64 - count_bound as i64;

    let width_sum: BigRational = inst
        .forms
        .iter()
        .map(|f| BigRational::new(BigInt::one(), f.height()))
        .sum();
    let r = BigRational::from_integer(BigInt::from(inst.radius));
    let m_big = BigInt::from(m);
    let width_ok = ge_minus_sqrt(&width_sum, &r, &m_big);
    let width_slack_lower = &width_sum + sqrt_lower(&m_big)? - &r;
    let width_slack_upper = &width_sum + sqrt_upper(&m_big)? - &r;

    Ok(PlankReport {
        form_count: m,
        count_bound,
        count_ok,
        count_slack,
        width_sum,
        width_ok,
        width_slack_lower,
        width_slack_upper,
    })
}

/// Result of an exhaustive minimal-cover search over a height-capped pool
/// of primitive forms.
#[derive(Clone, Debug)]
pub struct MinimalCover {
    pub instance: CoverInstance,
    pub pool_size: usize,
    /// In dimension two a pool with cap >= R contains every form that can
    /// cover a nonzero cube point, so the minimum is unconditional; in
    /// higher dimensions the result is minimal within the pool.
    pub pool_complete: bool,
}

/// All primitive normalized coefficient vectors with height at most `cap`,
/// in ascending lexicographic order.
fn form_pool(dim: usize, cap: u64) -> Vec<LinearForm> {
    let cap = cap as i64;
    let mut pool = Vec::new();
    if cap == 0 {
        return pool;
    }
    let mut q = vec![-cap; dim];
    loop {
        let first_nonzero = q.iter().find(|v| **v != 0);
        if first_nonzero.is_some_and(|v| *v > 0) {
            let g = q.iter().fold(0i64, |acc, &v| acc.gcd(&v));
            if g == 1 {
                pool.push(LinearForm::from_i64(&q).expect("nonzero primitive vector"));
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

/// Nonzero cube points up to sign: one representative per `{x, -x}` pair,
/// normalized so the first nonzero coordinate is positive.
fn universe_points(dim: usize, radius: u64) -> Vec<Vec<BigInt>> {
    let r = radius as i64;
    let mut pts = Vec::new();
    let mut x = vec![-r; dim];
    loop {
        if x.iter().find(|v| **v != 0).is_some_and(|v| *v > 0) {
            pts.push(x.iter().map(|&v| BigInt::from(v)).collect());
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return pts;
            }
            k -= 1;
            x[k] += 1;
            if x[k] <= r {
                break;
            }
            x[k] = -r;
        }
    }
}

/// Exhaustive minimum set cover: every nonzero cube point (up to sign) must
/// lie on some chosen form's hyperplane. Deterministic branch-and-bound:
/// always branches on the uncovered point with the fewest candidate forms.
pub fn minimal_cover_search(
    dim: usize,
    radius: u64,
    height_cap: u64,
    budget: u64,
) -> Result<MinimalCover> {
    if dim < 2 {
        return Err(Error::UnsupportedDimension(
            "plank covers need dimension at least two".into(),
        ));
    }
    if radius == 0 {
        return Err(Error::InvalidParameter("cube radius must be positive".into()));
    }
    let volume = grid_volume(dim, radius);
    if volume > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            projected: volume.to_string(),
            budget,
        });
    }

    let pool = form_pool(dim, height_cap);
    let universe = universe_points(dim, radius);
    let n_elems = universe.len();

    // sets[f] = universe indices covered by pool form f.
    let sets: Vec<Vec<usize>> = pool
        .iter()
        .map(|form| {
            universe
                .iter()
                .enumerate()
                .filter(|(_, x)| form.evaluate(x).expect("dimensions agree").is_zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    // candidates[e] = pool forms covering universe element e.
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); n_elems];
    for (f, covered) in sets.iter().enumerate() {
        for &e in covered {
            candidates[e].push(f);
        }
    }
    if let Some(e) = candidates.iter().position(|c| c.is_empty()) {
        return Err(Error::NoCover(format!(
            "point {:?} is on no pool hyperplane (cap {height_cap})",
            universe[e]
        )));
    }
    let max_set = sets.iter().map(|s| s.len()).max().unwrap_or(0).max(1);

    struct Search<'a> {
        sets: &'a [Vec<usize>],
        candidates: &'a [Vec<usize>],
        max_set: usize,
        cover_count: Vec<u32>,
        uncovered: usize,
        chosen: Vec<usize>,
        best: Option<Vec<usize>>,
    }

    impl Search<'_> {
        fn run(&mut self) {
            if self.uncovered == 0 {
                if self
                    .best
                    .as_ref()
                    .is_none_or(|b| self.chosen.len() < b.len())
                {
                    self.best = Some(self.chosen.clone());
                }
                return;
            }
            if let Some(best) = &self.best {
                let lower = self.chosen.len() + self.uncovered.div_ceil(self.max_set);
                if lower >= best.len() {
                    return;
                }
            }
            // Branch on the hardest uncovered element.
            let e = (0..self.cover_count.len())
                .filter(|&e| self.cover_count[e] == 0)
                .min_by_key(|&e| self.candidates[e].len())
                .expect("some element is uncovered");
            let forms = self.candidates[e].clone();
            for f in forms {
                self.chosen.push(f);
                for &covered in &self.sets[f] {
                    if self.cover_count[covered] == 0 {
                        self.uncovered -= 1;
                    }
                    self.cover_count[covered] += 1;
                }
                self.run();
                for &covered in &self.sets[f] {
                    self.cover_count[covered] -= 1;
                    if self.cover_count[covered] == 0 {
                        self.uncovered += 1;
                    }
                }
                self.chosen.pop();
            }
        }
    }

    let mut search = Search {
        sets: &sets,
        candidates: &candidates,
        max_set,
        cover_count: vec![0; n_elems],
        uncovered: n_elems,
        chosen: Vec::new(),
        best: None,
    };
    search.run();
    let mut chosen = search.best.expect("cover exists once every point has a candidate");
    chosen.sort_unstable();
    debug_assert!(chosen.len() as u64 >= 2 * radius - 1);

    let forms: Vec<LinearForm> = chosen.iter().map(|&f| pool[f].clone()).collect();
    Ok(MinimalCover {
        instance: CoverInstance::new(dim, radius, forms)?,
        pool_size: pool.len(),
        pool_complete: dim == 2 && height_cap >= radius,
    })
}
