//! Lattices in `Z^N` presented by integer basis matrices, their Grassmann
//! coordinates and heights, membership tests, hyperplane lattices of linear
//! forms and the minor-duality certificate relating a basis to its integer
//! kernel.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interchange::{parse_bigint, ratio_to_string};
use crate::linalg::{
    column_echelon, determinant, kernel_matrix, subsets_lex, ColumnEchelon, IntMatrix,
};

/// A sublattice of `Z^N` of rank `J`, given as the span of the columns of an
/// `N x J` basis matrix with independent columns.
///
/// Values are immutable after construction; the Grassmann vector and the
/// canonical echelon basis are memoized and safe to read concurrently.
#[derive(Clone)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    echelon: ColumnEchelon,
    grassmann: OnceLock<Vec<BigInt>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Lattice(ambient={}, rank={}, basis={:?})",
            self.ambient,
            self.rank(),
            self.basis
        )
    }
}

impl Lattice {
    pub fn new(ambient: usize, basis: IntMatrix) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::Dimension("ambient dimension must be positive".into()));
        }
        if basis.n_rows() != ambient {
            return Err(Error::Dimension(format!(
                "basis has {} rows, ambient dimension is {ambient}",
                basis.n_rows()
            )));
        }
        if basis.n_cols() > ambient {
            return Err(Error::Dimension(format!(
                "rank {} exceeds ambient dimension {ambient}",
                basis.n_cols()
            )));
        }
        let echelon = column_echelon(&basis)?;
        Ok(Lattice {
            ambient,
            basis,
            echelon,
            grassmann: OnceLock::new(),
        })
    }

    /// `Z^N` with its canonical basis.
    pub fn standard(n: usize) -> Self {
        Lattice::new(n, IntMatrix::identity(n)).expect("identity basis is valid")
    }

    pub fn from_columns(ambient: usize, cols: &[Vec<i64>]) -> Result<Self> {
        Lattice::new(ambient, IntMatrix::from_columns(cols))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.n_cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// The unique column-Hermite basis of this lattice. Two `Lattice`
    /// values represent the same lattice iff these matrices are equal.
    pub fn canonical_basis(&self) -> &IntMatrix {
        &self.echelon.basis
    }

    pub(crate) fn echelon(&self) -> &ColumnEchelon {
        &self.echelon
    }

    pub fn same_lattice(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && self.canonical_basis() == other.canonical_basis()
    }

    /// Determinants `det(X_I)` over all size-`J` row subsets `I` of the
    /// basis matrix, in lexicographic order of `I`.
    pub fn grassmann(&self) -> &[BigInt] {
        self.grassmann.get_or_init(|| {
            subsets_lex(self.ambient, self.rank())
                .iter()
                .map(|rows| {
                    determinant(&self.basis.select_rows(rows))
                        .expect("row-selected square minor")
                })
                .collect()
        })
    }

    /// Maximum absolute Grassmann coordinate; strictly positive.
    pub fn height(&self) -> BigInt {
        let h = self
            .grassmann()
            .iter()
            .map(|v| v.abs())
            .max()
            .expect("at least one Grassmann coordinate");
        debug_assert!(h.is_positive(), "independent columns force a nonzero minor");
        h
    }

    /// Exact membership: is `x` an integer combination of the basis columns?
    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        if x.len() != self.ambient {
            return Err(Error::Dimension(format!(
                "point has length {}, ambient dimension is {}",
                x.len(),
                self.ambient
            )));
        }
        Ok(self.coefficients_of(x).is_some())
    }

    /// Integer coordinates of `x` in the canonical echelon basis, when they
    /// exist. Forward-substitutes on pivot rows and checks every non-pivot
    /// row exactly.
    pub(crate) fn coefficients_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let h = &self.echelon.basis;
        let pivots = &self.echelon.pivot_rows;
        let j = self.rank();
        let mut t = Vec::with_capacity(j);
        for (k, &row) in pivots.iter().enumerate() {
            let mut rhs = x[row].clone();
            for (c, tc) in t.iter().enumerate().take(k) {
                rhs -= h.at(row, c) * tc;
            }
            let (q, r) = rhs.div_rem(h.at(row, k));
            if !r.is_zero() {
                return None;
            }
            t.push(q);
        }
        // Verify the non-pivot rows.
        for (row, expected) in x.iter().enumerate() {
            let mut v = BigInt::zero();
            for (c, tc) in t.iter().enumerate() {
                v += h.at(row, c) * tc;
            }
            if v != *expected {
                return None;
            }
        }
        Some(t)
    }
}

/// Wire format: `{"ambient": N, "basis": <matrix>}`.
#[derive(Serialize, Deserialize)]
struct LatticeWire {
    ambient: usize,
    basis: IntMatrix,
}

impl Serialize for Lattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeWire {
            ambient: self.ambient,
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = LatticeWire::deserialize(d)?;
        Lattice::new(wire.ambient, wire.basis).map_err(serde::de::Error::custom)
    }
}

/// An integral linear form with nonzero coefficient vector, stored in
/// primitive normalized shape: coefficient gcd 1, first nonzero coefficient
/// positive. Construction normalizes, so two forms with proportional
/// coefficient vectors compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Dimension("form needs at least one variable".into()));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidParameter("zero linear form".into()));
        }
        let mut g = BigInt::zero();
        for c in &coeffs {
            g = g.gcd(c);
        }
        let mut coeffs: Vec<BigInt> = coeffs.into_iter().map(|c| c / &g).collect();
        if coeffs
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative())
        {
            for c in &mut coeffs {
                *c = -c.clone();
            }
        }
        Ok(LinearForm { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        LinearForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn evaluate(&self, x: &[BigInt]) -> Result<BigInt> {
        if x.len() != self.coeffs.len() {
            return Err(Error::Dimension(format!(
                "point has length {}, form has {} variables",
                x.len(),
                self.coeffs.len()
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(x)
            .map(|(c, v)| c * v)
            .sum())
    }

    /// Height of the form: maximum absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().expect("nonzero")
    }
}

/// Wire format: `{"coeffs": ["2","3"]}`.
#[derive(Serialize, Deserialize)]
struct FormWire {
    coeffs: Vec<String>,
}

impl Serialize for LinearForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormWire {
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = FormWire::deserialize(d)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| parse_bigint(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        LinearForm::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// The rank-`(N-1)` lattice `{x in Z^N : L(x) = 0}`.
///
/// Built as the saturated integer kernel of the coefficient vector, so the
/// result is the full solution lattice, not a finite-index sublattice of
/// it. Its height always equals the height of the primitive form.
pub fn hyperplane_lattice(form: &LinearForm) -> Result<Lattice> {
    let n = form.dim();
    if n < 2 {
        return Err(Error::UnsupportedDimension(
            "hyperplane lattices need at least two variables".into(),
        ));
    }
    let q_col = IntMatrix::new(n, 1, form.coeffs().to_vec())?;
    let a = kernel_matrix(&q_col)?; // (n-1) x n, rows annihilate q
    let lat = Lattice::new(n, a.transpose())?;
    debug_assert_eq!(lat.height(), form.height());
    Ok(lat)
}

/// Certificate that the maximal minors of a basis and the complementary
/// minors of its integer kernel matrix are proportional through a single
/// rational factor.
#[derive(Clone, Debug)]
pub struct DualityCertificate {
    /// The proportionality factor, recorded as a nonnegative reduced
    /// rational (the minors are compared in absolute value).
    pub gamma: BigRational,
    /// `det(X_I)` over size-`J` subsets `I` in lexicographic order.
    pub primal_minors: Vec<BigInt>,
    /// `det(A_{I'})` over the complementary column subsets, aligned with
    /// `primal_minors` index by index.
    pub dual_minors: Vec<BigInt>,
    pub verified: bool,
}

impl Serialize for DualityCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DualityCertificate", 4)?;
        st.serialize_field("gamma", &ratio_to_string(&self.gamma))?;
        st.serialize_field(
            "primal_minors",
            &self
                .primal_minors
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>(),
        )?;
        st.serialize_field(
            "dual_minors",
            &self
                .dual_minors
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>(),
        )?;
        st.serialize_field("verified", &self.verified)?;
        st.end()
    }
}

/// Computes the integer kernel matrix of the basis, every primal and dual
/// minor, fits the single rational factor on the first index with nonzero
/// dual minor and verifies `|det X_I| = gamma * |det A_{I'}|` for every `I`.
///
/// A mismatch can only arise from an implementation defect and is reported
/// as an internal-inconsistency error rather than a `verified = false`
/// certificate.
pub fn duality_certificate(lat: &Lattice) -> Result<DualityCertificate> {
    let n = lat.ambient_dim();
    let j = lat.rank();
    if j == n {
        return Err(Error::UnsupportedDimension(
            "full-rank lattice has no dual kernel side".into(),
        ));
    }
    let a = kernel_matrix(lat.basis())?;
    let primal = lat.grassmann().to_vec();
    let subsets = subsets_lex(n, j);
    let mut dual = Vec::with_capacity(subsets.len());
    for index_set in &subsets {
        let complement: Vec<usize> = (0..n).filter(|i| !index_set.contains(i)).collect();
        dual.push(determinant(&a.select_cols(&complement))?);
    }
    let anchor = dual
        .iter()
        .position(|d| !d.is_zero())
        .ok_or_else(|| Error::Internal("kernel matrix has no nonzero maximal minor".into()))?;
    let gamma = BigRational::new(primal[anchor].abs(), dual[anchor].abs());
    for (p, d) in primal.iter().zip(&dual) {
        let lhs = BigRational::from_integer(p.abs());
        let rhs = &gamma * BigRational::from_integer(d.abs());
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "duality factor is not constant: |{p}| vs {} * |{d}|",
                ratio_to_string(&gamma)
            )));
        }
    }
    Ok(DualityCertificate {
        gamma,
        primal_minors: primal,
        dual_minors: dual,
        verified: true,
    })
}
