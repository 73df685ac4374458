//! Top-degree intersection forms on low-rank divisor lattices.
//!
//! A form stores one integer per multiset of basis indices of size `dim`,
//! the dimension of the ambient variety. Threefold lattices use the
//! trilinear case; projective bundles and products may have larger `dim`.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{add, mul, sub, Error, Result};

/// Integer coordinates of a divisor class in the basis of its form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        Self { coeffs: vec![0; rank] }
    }

    /// The `i`-th basis vector of a rank `rank` lattice.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut coeffs = vec![0; rank];
        coeffs[i] = 1;
        Self { coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.rank(), other.rank())?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| add(*a, *b))
            .collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    pub fn scale(&self, k: i64) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| mul(*a, k)).collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }
}

impl From<&[i64]> for DivisorClass {
    fn from(c: &[i64]) -> Self {
        Self { coeffs: c.to_vec() }
    }
}

impl<const N: usize> From<[i64; N]> for DivisorClass {
    fn from(c: [i64; N]) -> Self {
        Self { coeffs: c.to_vec() }
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A symmetric `dim`-linear form on a lattice of rank `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionForm {
    rank: usize,
    dim: usize,
    basis_labels: Vec<String>,
    values: BTreeMap<Vec<usize>, i64>,
    anticanonical: DivisorClass,
}

impl IntersectionForm {
    /// Builds a form from explicit monomial values. Every sorted multiset of
    /// size `dim` over `0..rank` must be present exactly once.
    pub fn new(
        basis_labels: Vec<String>,
        dim: usize,
        values: BTreeMap<Vec<usize>, i64>,
        anticanonical: DivisorClass,
    ) -> Result<Self> {
        let rank = basis_labels.len();
        if rank == 0 || dim == 0 {
            return Err(Error::InvalidArgument("empty lattice".into()));
        }
        check_len(rank, anticanonical.rank())?;
        let expected: Vec<Vec<usize>> = monomials(rank, dim).collect();
        if values.len() != expected.len() || expected.iter().any(|m| !values.contains_key(m)) {
            return Err(Error::InvalidArgument(format!(
                "form must list all {} monomials of degree {dim} in {rank} classes",
                expected.len()
            )));
        }
        Ok(Self {
            rank,
            dim,
            basis_labels,
            values,
            anticanonical,
        })
    }

    /// Builds a form from a closure evaluated on every sorted monomial.
    pub fn from_fn(
        basis_labels: Vec<String>,
        dim: usize,
        anticanonical: DivisorClass,
        mut f: impl FnMut(&[usize]) -> i64,
    ) -> Result<Self> {
        let values = monomials(basis_labels.len(), dim)
            .map(|m| {
                let v = f(&m);
                (m, v)
            })
            .collect();
        Self::new(basis_labels, dim, values, anticanonical)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn anticanonical(&self) -> &DivisorClass {
        &self.anticanonical
    }

    pub fn basis(&self, i: usize) -> DivisorClass {
        DivisorClass::basis(self.rank, i)
    }

    /// Value on a multiset of basis indices, in any order.
    pub fn monomial(&self, indices: &[usize]) -> Result<i64> {
        check_len(self.dim, indices.len())?;
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.values
            .get(&key)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("index out of range in {indices:?}")))
    }

    /// Stored values keyed by sorted index multisets.
    pub fn values(&self) -> &BTreeMap<Vec<usize>, i64> {
        &self.values
    }

    /// Multilinear evaluation on exactly `dim` classes.
    pub fn top_product(&self, classes: &[&DivisorClass]) -> Result<i64> {
        check_len(self.dim, classes.len())?;
        for c in classes {
            check_len(self.rank, c.rank())?;
        }
        let mut total = 0i64;
        for choice in (0..self.dim).map(|_| 0..self.rank).multi_cartesian_product() {
            let mut coeff = 1i64;
            for (class, &i) in classes.iter().zip(&choice) {
                coeff = mul(coeff, class.coeffs[i])?;
                if coeff == 0 {
                    break;
                }
            }
            if coeff != 0 {
                total = add(total, mul(coeff, self.monomial(&choice)?)?)?;
            }
        }
        Ok(total)
    }

    /// Evaluation on a product of powers `∏ class^exp` of total degree `dim`.
    pub fn power_product(&self, factors: &[(&DivisorClass, usize)]) -> Result<i64> {
        let classes: Vec<&DivisorClass> = factors.iter().flat_map(|(c, e)| std::iter::repeat_n(*c, *e)).collect();
        self.top_product(&classes)
    }

    /// Top self-intersection of the anticanonical class.
    pub fn anticanonical_degree(&self) -> Result<i64> {
        self.power_product(&[(&self.anticanonical, self.dim)])
    }

    /// Copy of the form with one monomial replaced.
    pub fn with_monomial(&self, indices: &[usize], value: i64) -> Result<Self> {
        let mut key = indices.to_vec();
        key.sort_unstable();
        if !self.values.contains_key(&key) {
            return Err(Error::InvalidArgument(format!("no monomial {indices:?}")));
        }
        let mut out = self.clone();
        out.values.insert(key, value);
        Ok(out)
    }

    /// Copy of the form with a different distinguished anticanonical class.
    pub fn with_anticanonical(&self, anticanonical: DivisorClass) -> Result<Self> {
        check_len(self.rank, anticanonical.rank())?;
        let mut out = self.clone();
        out.anticanonical = anticanonical;
        Ok(out)
    }
}

/// Sorted multisets of size `dim` over `0..rank`.
pub fn monomials(rank: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..rank).combinations_with_replacement(dim)
}

/// Symmetric trilinear evaluation on a threefold lattice.
pub fn triple_product(form: &IntersectionForm, a: &DivisorClass, b: &DivisorClass, c: &DivisorClass) -> Result<i64> {
    check_len(3, form.dim())?;
    form.top_product(&[a, b, c])
}

/// Lattice of the blowup of a threefold `Z` along a smooth curve `Γ`,
/// on the basis `(H_Z, E)`.
///
/// `h3` is `H_Z³`, `iota_z` the Fano index of `Z`. The anticanonical class is
/// `ι·H_Z − E`.
pub fn blowup_lattice(h3: i64, iota_z: i64, g_gamma: i64, deg_gamma: i64) -> Result<IntersectionForm> {
    check_blowup_args(h3, iota_z)?;
    if g_gamma < 0 || deg_gamma < 0 {
        return Err(Error::InvalidArgument(format!(
            "curve genus and degree must be nonnegative, got ({g_gamma}, {deg_gamma})"
        )));
    }
    // E³ = −deg N_Γ = 2 − 2g(Γ) + K_Z·Γ with K_Z·Γ = −ι·deg(Γ).
    let e3 = sub(sub(2, mul(2, g_gamma)?)?, mul(iota_z, deg_gamma)?)?;
    rank2_form(h3, 0, -deg_gamma, e3, DivisorClass::from([iota_z, -1]))
}

/// Exceptional data of a point blowup contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointBlowup {
    /// Smooth point, `E ≅ P²` with normal degree −1.
    SmoothPoint,
    /// Node, `E` a smooth quadric.
    Node,
    /// Point of the `B½` type, `E ≅ P²` with normal degree −2.
    Half,
}

impl PointBlowup {
    pub fn exceptional_cube(self) -> i64 {
        match self {
            PointBlowup::SmoothPoint => 1,
            PointBlowup::Node => 2,
            PointBlowup::Half => 4,
        }
    }

    /// Coefficient of `E` in `−K_Z − (−K_Y)` pulled back.
    pub fn discrepancy(self) -> i64 {
        match self {
            PointBlowup::SmoothPoint => 2,
            PointBlowup::Node | PointBlowup::Half => 1,
        }
    }
}

/// Blowup lattice of a point: the curve lattice with `H_Z·E² = 0` and the
/// `E³` entry overridden per the point type.
pub fn point_blowup_lattice(h3: i64, iota_z: i64, point: PointBlowup) -> Result<IntersectionForm> {
    let base = blowup_lattice(h3, iota_z, 0, 0)?;
    base.with_monomial(&[1, 1, 1], point.exceptional_cube())?
        .with_anticanonical(DivisorClass::from([iota_z, -point.discrepancy()]))
}

fn check_blowup_args(h3: i64, iota_z: i64) -> Result<()> {
    if h3 < 1 {
        return Err(Error::InvalidArgument(format!("H³ must be positive, got {h3}")));
    }
    if !(1..=4).contains(&iota_z) {
        return Err(Error::InvalidArgument(format!("invalid index {iota_z}")));
    }
    Ok(())
}

fn rank2_form(h3: i64, h2e: i64, he2: i64, e3: i64, anticanonical: DivisorClass) -> Result<IntersectionForm> {
    let values = BTreeMap::from([
        (vec![0, 0, 0], h3),
        (vec![0, 0, 1], h2e),
        (vec![0, 1, 1], he2),
        (vec![1, 1, 1], e3),
    ]);
    IntersectionForm::new(vec!["H".into(), "E".into()], 3, values, anticanonical)
}

/// Base of a projective bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleBase {
    P1,
    P2,
}

impl BundleBase {
    pub fn dim(self) -> usize {
        match self {
            BundleBase::P1 => 1,
            BundleBase::P2 => 2,
        }
    }
}

/// Chow form of `P(E)` over `P¹` or `P²` on the basis `(M, H)`, where `M` is
/// the relative hyperplane class with `p_*O(M) = E^∨` and `H` is the pulled
/// back hyperplane class.
///
/// Relations: `M^r + c₁·M^{r−1}H + c₂·M^{r−2}H² = 0`, `H^{b+1} = 0` and
/// `M^{r−1}H^b = 1`. The anticanonical class is `r·M + (b + 1 + c₁)·H`.
pub fn pbundle_chow(base: BundleBase, rank: usize, c1: i64, c2: i64) -> Result<IntersectionForm> {
    if rank < 2 {
        return Err(Error::InvalidArgument(format!(
            "bundle rank must be at least 2, got {rank}"
        )));
    }
    let b = base.dim();
    let c2 = if base == BundleBase::P1 { 0 } else { c2 };
    let dim = rank - 1 + b;
    // s[k] = M^{r−1+k}·H^{b−k}
    let mut s = vec![1i64; b + 1];
    for k in 1..=b {
        let prev2 = if k >= 2 { s[k - 2] } else { 0 };
        s[k] = sub(mul(-c1, s[k - 1])?, mul(c2, prev2)?)?;
    }
    let r = i64::try_from(rank).map_err(|_| Error::Overflow("rank"))?;
    let b_i = i64::try_from(b).map_err(|_| Error::Overflow("base dimension"))?;
    let anticanonical = DivisorClass::from([r, add(add(b_i, 1)?, c1)?]);
    IntersectionForm::from_fn(vec!["M".into(), "H".into()], dim, anticanonical, |m| {
        let h = m.iter().filter(|&&i| i == 1).count();
        if h > b {
            0
        } else {
            s[b - h]
        }
    })
}

/// Chow form of `Z₁ × P^k` on `(H₁, H₂)`, where `Z₁` is a threefold of
/// `H₁³ = deg_z1`. The only nonzero top monomial is `H₁³H₂^k`.
/// The distinguished class is `H₁ + H₂`, the anticanonical class of the
/// complete intersections modelled in this ambient.
pub fn product_chow(deg_z1: i64, k: usize) -> Result<IntersectionForm> {
    product_chow_over(deg_z1, 3, k)
}

/// As [`product_chow`] with a first factor of dimension `dim_z1`.
pub fn product_chow_over(deg_z1: i64, dim_z1: usize, k: usize) -> Result<IntersectionForm> {
    if deg_z1 < 1 {
        return Err(Error::InvalidArgument(format!("degree must be positive, got {deg_z1}")));
    }
    if !(1..=3).contains(&dim_z1) {
        return Err(Error::InvalidArgument(format!(
            "first factor dimension {dim_z1} not in 1..=3"
        )));
    }
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "projective factor dimension {k} not in 1..=3"
        )));
    }
    IntersectionForm::from_fn(
        vec!["H1".into(), "H2".into()],
        dim_z1 + k,
        DivisorClass::from([1, 1]),
        |m| {
            let h1 = m.iter().filter(|&&i| i == 0).count();
            if h1 == dim_z1 {
                deg_z1
            } else {
                0
            }
        },
    )
}

/// True iff the two forms agree on every triple `(d₁, d₂, p)` of basis
/// classes with `p` pulled back from the common base of a flop.
pub fn flop_invariant_check(
    form_y: &IntersectionForm,
    form_yplus: &IntersectionForm,
    pullback_basis_indices: &[usize],
) -> bool {
    if form_y.rank() != form_yplus.rank() || form_y.dim() != 3 || form_yplus.dim() != 3 {
        return false;
    }
    let rank = form_y.rank();
    pullback_basis_indices.iter().all(|&p| {
        p < rank
            && (0..rank)
                .cartesian_product(0..rank)
                .all(|(i, j)| form_y.monomial(&[i, j, p]).ok() == form_yplus.monomial(&[i, j, p]).ok())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_quintic_rational_curve() {
        let f = blowup_lattice(1, 4, 0, 5).unwrap();
        let k = f.anticanonical().clone();
        assert_eq!(triple_product(&f, &k, &k, &k).unwrap(), 22);
        assert_eq!(f.monomial(&[1, 1, 1]).unwrap(), -18);
    }

    #[test]
    fn quadric_genus_three_septic() {
        let f = blowup_lattice(2, 3, 3, 7).unwrap();
        assert_eq!(f.anticanonical_degree().unwrap(), 16);
    }

    #[test]
    fn zero_argument_vanishes() {
        let f = blowup_lattice(5, 2, 0, 4).unwrap();
        let d = DivisorClass::from([3, -2]);
        assert_eq!(triple_product(&f, &d, &d, &DivisorClass::zero(2)).unwrap(), 0);
    }

    #[test]
    fn node_blowup_of_quadric() {
        let f = point_blowup_lattice(2, 3, PointBlowup::Node).unwrap();
        assert_eq!(f.anticanonical_degree().unwrap(), 52);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let f = blowup_lattice(1, 4, 0, 1).unwrap();
        let bad = DivisorClass::from([1, 0, 0]);
        let ok = DivisorClass::from([1, 0]);
        assert!(matches!(
            triple_product(&f, &bad, &ok, &ok),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invalid_index_rejected() {
        assert!(blowup_lattice(1, 5, 0, 1).is_err());
        assert!(blowup_lattice(0, 4, 0, 1).is_err());
    }

    #[test]
    fn pbundle_small_rank_rejected() {
        assert!(pbundle_chow(BundleBase::P1, 1, 0, 0).is_err());
    }

    #[test]
    fn trivial_rank_two_bundle_over_plane() {
        let f = pbundle_chow(BundleBase::P2, 2, 0, 0).unwrap();
        // M²·H = M³ = 0 and M·H² = 1 on P¹ × P².
        assert_eq!(f.monomial(&[0, 0, 0]).unwrap(), 0);
        assert_eq!(f.monomial(&[0, 0, 1]).unwrap(), 0);
        assert_eq!(f.monomial(&[0, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn flop_check_basics() {
        let a = blowup_lattice(1, 4, 0, 5).unwrap();
        assert!(flop_invariant_check(&a, &a, &[0]));
        let b = a.with_monomial(&[1, 1, 1], 7).unwrap();
        assert!(flop_invariant_check(&a, &b, &[0]));
        let c = a.with_monomial(&[0, 0, 1], 1).unwrap();
        assert!(!flop_invariant_check(&a, &c, &[0]));
    }
}
