//! Bound certificates: a found point, its measured height or length, the
//! bound it stays under, and the identifier of the bound family applied.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::interchange::ratio_to_string;

/// Which norm a certificate bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    /// Sup-norm (maximum absolute coordinate).
    Height,
    /// Taxicab norm (sum of absolute coordinates).
    Length,
}

/// Identifier of the bound family behind a certificate, as emitted in
/// certificate JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    /// Sublattice-avoidance height bound for a lattice instance.
    Thm1_4,
    /// Linear-forms height bound depending on the form heights.
    Cor5_2,
    /// Single-obstacle specialization with the fixed coefficient.
    Cor5_3,
    /// Fallback height bound depending only on the number of forms.
    Basic1,
    /// Small-height nonvanishing point for a polynomial.
    Lemma2_2,
    /// Small-length nonvanishing point for a homogeneous polynomial.
    Prop2_5,
}

impl TheoremId {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm1_4 => "thm_1_4",
            TheoremId::Cor5_2 => "cor_5_2",
            TheoremId::Cor5_3 => "cor_5_3",
            TheoremId::Basic1 => "basic1",
            TheoremId::Lemma2_2 => "lemma_2_2",
            TheoremId::Prop2_5 => "prop_2_5",
        }
    }
}

/// A point together with the exact bound it provably respects.
#[derive(Clone, Debug)]
pub struct BoundCertificate {
    pub point: Vec<BigInt>,
    pub norm: NormKind,
    /// Height or length of `point`, depending on `norm`.
    pub found: BigInt,
    pub theorem_bound: BigRational,
    pub theorem_id: TheoremId,
    /// Radius of the search region that produced the point.
    pub search_radius_used: u64,
    /// Which branch of a case analysis produced the point, when the
    /// operation records one.
    pub case_fired: Option<&'static str>,
}

impl BoundCertificate {
    /// `found <= theorem_bound`, compared exactly.
    pub fn bound_satisfied(&self) -> bool {
        BigRational::from_integer(self.found.clone()) <= self.theorem_bound
    }
}

impl Serialize for BoundCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let fields = 4 + usize::from(self.case_fired.is_some()) + 1;
        let mut st = s.serialize_struct("BoundCertificate", fields)?;
        st.serialize_field(
            "point",
            &self.point.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        )?;
        match self.norm {
            NormKind::Height => st.serialize_field("found_height", &self.found.to_string())?,
            NormKind::Length => st.serialize_field("found_length", &self.found.to_string())?,
        }
        st.serialize_field("theorem_bound", &ratio_to_string(&self.theorem_bound))?;
        st.serialize_field("theorem_id", self.theorem_id.as_str())?;
        st.serialize_field("search_radius_used", &self.search_radius_used)?;
        if let Some(case) = self.case_fired {
            st.serialize_field("case", case)?;
        }
        st.end()
    }
}

/// Sup-norm of an integer vector.
pub fn height_of(x: &[BigInt]) -> BigInt {
    use num_traits::Signed;
    x.iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(num_traits::Zero::zero)
}

/// Taxicab norm of an integer vector.
pub fn length_of(x: &[BigInt]) -> BigInt {
    use num_traits::Signed;
    x.iter().map(|v| v.abs()).sum()
}
