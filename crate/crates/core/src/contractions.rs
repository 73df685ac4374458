//! K-negative extremal contractions of smooth threefolds and their numeric
//! laws.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{add, div_exact, mul, sub, Error, Result};
use crate::invariants::euler_characteristic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContractionKind {
    B2,
    #[serde(rename = "B1_1")]
    B1Curve,
    #[serde(rename = "B1_0")]
    B1Point,
    #[serde(rename = "B_half")]
    BHalf,
    C2,
    C1,
    D3,
    D2,
    D1,
}

impl ContractionKind {
    pub const ALL: [ContractionKind; 9] = [
        ContractionKind::B2,
        ContractionKind::B1Curve,
        ContractionKind::B1Point,
        ContractionKind::BHalf,
        ContractionKind::C2,
        ContractionKind::C1,
        ContractionKind::D3,
        ContractionKind::D2,
        ContractionKind::D1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ContractionKind::B2 => "B2",
            ContractionKind::B1Curve => "B1_1",
            ContractionKind::B1Point => "B1_0",
            ContractionKind::BHalf => "B_half",
            ContractionKind::C2 => "C2",
            ContractionKind::C1 => "C1",
            ContractionKind::D3 => "D3",
            ContractionKind::D2 => "D2",
            ContractionKind::D1 => "D1",
        }
    }

    pub fn is_birational(self) -> bool {
        matches!(
            self,
            ContractionKind::B2 | ContractionKind::B1Curve | ContractionKind::B1Point | ContractionKind::BHalf
        )
    }

    pub fn is_conic_bundle(self) -> bool {
        matches!(self, ContractionKind::C1 | ContractionKind::C2)
    }

    pub fn is_del_pezzo(self) -> bool {
        matches!(self, ContractionKind::D1 | ContractionKind::D2 | ContractionKind::D3)
    }
}

impl fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ContractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ContractionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Schema(format!("unknown contraction kind {s:?}")))
    }
}

/// Target of a contraction: a threefold family of Picard rank one, or a
/// projective base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// A Fano threefold of index `iota` and genus `genus`; `singular` marks a
    /// degeneration with one Gorenstein singular point.
    Family {
        iota: i64,
        genus: i64,
        singular: bool,
    },
    P2,
    P1,
}

impl Target {
    pub const P3: Target = Target::Family {
        iota: 4,
        genus: 33,
        singular: false,
    };
    pub const Q3: Target = Target::Family {
        iota: 3,
        genus: 28,
        singular: false,
    };

    /// Smooth del Pezzo threefold of degree `d`.
    pub const fn del_pezzo(d: i64) -> Target {
        Target::Family {
            iota: 2,
            genus: 4 * d + 1,
            singular: false,
        }
    }

    pub fn smooth(iota: i64, genus: i64) -> Target {
        Target::Family {
            iota,
            genus,
            singular: false,
        }
    }

    pub fn iota(self) -> Option<i64> {
        match self {
            Target::Family { iota, .. } => Some(iota),
            _ => None,
        }
    }

    /// The smooth family with the same invariants.
    pub fn smoothing(self) -> Target {
        match self {
            Target::Family { iota, genus, .. } => Target::smooth(iota, genus),
            t => t,
        }
    }

    pub fn with_singular_point(self) -> Target {
        match self {
            Target::Family { iota, genus, .. } => Target::Family {
                iota,
                genus,
                singular: true,
            },
            t => t,
        }
    }

    pub fn label(self) -> String {
        match self {
            Target::P2 => "P2".into(),
            Target::P1 => "P1".into(),
            Target::Family { iota, genus, singular } => {
                let base = match iota {
                    4 => "P3".to_string(),
                    3 => "Q3".to_string(),
                    2 => format!("Y{}", (genus - 1) / 4),
                    _ => format!("X{genus}"),
                };
                if singular {
                    format!("{base}^s")
                } else {
                    base
                }
            }
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Schema(format!("unknown target {s:?}"));
        let (base, singular) = match s.strip_suffix("^s") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let t = match base {
            "P1" if !singular => return Ok(Target::P1),
            "P2" if !singular => return Ok(Target::P2),
            "P3" => Target::P3,
            "Q3" => Target::Q3,
            _ => {
                let (prefix, num) = base.split_at(1);
                let n: i64 = num.parse().map_err(|_| bad())?;
                match prefix {
                    "Y" if (1..=5).contains(&n) => Target::del_pezzo(n),
                    "X" if n >= 2 => Target::smooth(1, n),
                    _ => return Err(bad()),
                }
            }
        };
        Ok(if singular { t.with_singular_point() } else { t })
    }
}

impl Serialize for Target {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Target {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An extremal contraction with its numeric payload.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContractionDescriptor {
    pub kind: ContractionKind,
    pub target: Target,
    /// `(genus, degree)` of the blown up curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<(i64, i64)>,
    /// Degree of the discriminant: a plane curve for conic bundles, a point
    /// count for del Pezzo fibrations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc_degree: Option<i64>,
    /// Degree of the general fiber of a del Pezzo fibration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber_degree: Option<i64>,
}

impl ContractionDescriptor {
    pub fn curve_blowup(target: Target, genus: i64, degree: i64) -> Self {
        Self {
            kind: ContractionKind::B1Curve,
            target,
            curve: Some((genus, degree)),
            disc_degree: None,
            fiber_degree: None,
        }
    }

    /// Blowup of the singular point of `target`.
    pub fn node_blowup(target: Target) -> Self {
        Self {
            kind: ContractionKind::B1Point,
            target: target.with_singular_point(),
            curve: None,
            disc_degree: None,
            fiber_degree: None,
        }
    }

    pub fn conic_bundle(disc_degree: i64) -> Self {
        Self {
            kind: ContractionKind::C1,
            target: Target::P2,
            curve: None,
            disc_degree: Some(disc_degree),
            fiber_degree: None,
        }
    }

    pub fn p1_bundle() -> Self {
        Self {
            kind: ContractionKind::C2,
            target: Target::P2,
            curve: None,
            disc_degree: Some(0),
            fiber_degree: None,
        }
    }

    /// Del Pezzo fibration; `kind` follows from the fiber degree.
    pub fn del_pezzo(fiber_degree: i64, disc_degree: Option<i64>) -> Self {
        let kind = match fiber_degree {
            9 => ContractionKind::D3,
            8 => ContractionKind::D2,
            _ => ContractionKind::D1,
        };
        Self {
            kind,
            target: Target::P1,
            curve: None,
            disc_degree,
            fiber_degree: Some(fiber_degree),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidArgument(format!("{}: {m}", self.kind)));
        use ContractionKind::*;
        match self.kind {
            B2 | B1Curve | B1Point | BHalf => {
                if !matches!(self.target, Target::Family { .. }) {
                    return err("birational contraction needs a threefold target".into());
                }
                match (self.kind, self.curve) {
                    (B1Curve, Some((g, d))) if g >= 0 && d >= 1 => {}
                    (B1Curve, c) => return err(format!("invalid curve {c:?}")),
                    (_, Some(c)) => return err(format!("point blowup carries curve {c:?}")),
                    _ => {}
                }
                if self.kind == B1Point && !matches!(self.target, Target::Family { singular: true, .. }) {
                    return err("blowup of a node needs a singular target".into());
                }
            }
            C1 | C2 => {
                if self.target != Target::P2 {
                    return err("conic bundle target must be P2".into());
                }
                match (self.kind, self.disc_degree) {
                    (C1, Some(d)) if d >= 3 => {}
                    (C1, d) => return err(format!("discriminant degree {d:?} must be at least 3")),
                    (_, Some(0) | None) => {}
                    (_, d) => return err(format!("P1-bundle with discriminant {d:?}")),
                }
            }
            D1 | D2 | D3 => {
                if self.target != Target::P1 {
                    return err("del Pezzo fibration target must be P1".into());
                }
                let ok = match (self.kind, self.fiber_degree) {
                    (D1, Some(d)) => (1..=6).contains(&d),
                    (D2, Some(d)) => d == 8,
                    (D3, Some(d)) => d == 9,
                    _ => false,
                };
                if !ok {
                    return err(format!("fiber degree {:?} does not fit the kind", self.fiber_degree));
                }
            }
        }
        Ok(())
    }

    /// The `(genus, degree)` style pair used in the classification tables.
    pub fn table_pair(&self) -> Result<(i64, i64)> {
        use ContractionKind::*;
        match self.kind {
            B1Curve => self
                .curve
                .ok_or_else(|| Error::InvalidArgument("curve blowup without curve".into())),
            B2 | B1Point | BHalf | C2 => Ok((0, 0)),
            C1 => {
                let d = self.require_disc()?;
                Ok((sub(conic_discriminant_pa(d)?, 1)?, d))
            }
            D1 | D2 | D3 => {
                let f = self
                    .fiber_degree
                    .ok_or_else(|| Error::InvalidArgument("fibration without fiber degree".into()))?;
                Ok((f, self.require_disc()?))
            }
        }
    }

    fn require_disc(&self) -> Result<i64> {
        self.disc_degree
            .ok_or_else(|| Error::InvalidArgument(format!("{} without discriminant degree", self.kind)))
    }
}

/// Index of a contraction: the anticanonical degree of its minimal curve.
pub fn iota_of(kind: ContractionKind) -> i64 {
    use ContractionKind::*;
    match kind {
        D3 => 3,
        B2 | C2 | D2 => 2,
        B1Curve | B1Point | BHalf | C1 | D1 => 1,
    }
}

/// `(H_Z²·(−K), H_Z·(−K)²)` for conic bundles and del Pezzo fibrations.
/// `disc_or_fiber` is `deg Δ` for type C and the fiber degree for type D.
pub fn cd_intersections(kind: ContractionKind, disc_or_fiber: i64) -> Result<(i64, i64)> {
    use ContractionKind::*;
    match kind {
        C1 => Ok((2, sub(12, disc_or_fiber)?)),
        C2 => Ok((2, 12)),
        D1 | D2 | D3 => Ok((0, disc_or_fiber)),
        _ => Err(Error::WrongKind {
            kind: kind.to_string(),
            op: "cd_intersections",
        }),
    }
}

/// Genus of a blowup: `B2` gives `g(Z) − 4`, `B1_1` gives
/// `g(Z) + g(Γ) − ι(Z)·deg(Γ) − 1`.
pub fn propagate_genus(kind: ContractionKind, g_z: i64, iota_z: i64, curve: Option<(i64, i64)>) -> Result<i64> {
    match kind {
        ContractionKind::B2 => sub(g_z, 4),
        ContractionKind::B1Curve => {
            let (g, d) = curve.ok_or_else(|| Error::InvalidArgument("B1_1 needs a curve".into()))?;
            sub(sub(add(g_z, g)?, mul(iota_z, d)?)?, 1)
        }
        _ => Err(Error::WrongKind {
            kind: kind.to_string(),
            op: "propagate_genus",
        }),
    }
}

/// Hodge number `h^{1,2}` of the source. `datum` is `g(Γ)` for `B1_1` and
/// `deg Δ` for conic bundles.
pub fn propagate_hodge(kind: ContractionKind, h_z: i64, datum: Option<i64>) -> Result<i64> {
    use ContractionKind::*;
    let need = || Error::InvalidArgument(format!("{kind} needs its curve genus or discriminant degree"));
    match kind {
        B2 => Ok(h_z),
        B1Curve => add(h_z, datum.ok_or_else(need)?),
        C2 => Ok(0),
        C1 => {
            let d = datum.ok_or_else(need)?;
            div_exact(mul(d, sub(d, 3)?)?, 2, "deg(Δ)(deg(Δ) − 3)")
        }
        _ => Err(Error::WrongKind {
            kind: kind.to_string(),
            op: "propagate_hodge",
        }),
    }
}

fn check_target_index(desc: &ContractionDescriptor, iota_z: i64) -> Result<()> {
    match desc.target.iota() {
        Some(i) if i != iota_z => Err(Error::InvalidArgument(format!(
            "target {} has index {i}, not {iota_z}",
            desc.target
        ))),
        _ => Ok(()),
    }
}

/// Moves an index-one contraction of a smoothing to the matching contraction
/// of the small resolution of the nodal threefold.
///
/// Curves lose `ι(Z) − 1` in genus and one in degree; a curve that shrinks to
/// genus and degree zero becomes the blowup of a singular point. Conic
/// discriminants lose one in degree; del Pezzo fibers gain one.
pub fn link_transform(smooth: &ContractionDescriptor, iota_z: i64) -> Result<ContractionDescriptor> {
    use ContractionKind::*;
    check_target_index(smooth, iota_z)?;
    match smooth.kind {
        B1Curve => {
            let (g, d) = smooth
                .curve
                .ok_or_else(|| Error::InvalidArgument("B1_1 needs a curve".into()))?;
            let g2 = add(sub(g, iota_z)?, 1)?;
            let d2 = sub(d, 1)?;
            if g2 < 0 || d2 < 0 {
                return Err(Error::Excluded(format!(
                    "curve ({g}, {d}) on {} transforms to ({g2}, {d2})",
                    smooth.target
                )));
            }
            match (g2, d2) {
                (0, 0) => Ok(ContractionDescriptor::node_blowup(smooth.target)),
                (_, 0) => Err(Error::Excluded(format!(
                    "curve ({g}, {d}) degenerates to degree zero with genus {g2}"
                ))),
                _ => Ok(ContractionDescriptor::curve_blowup(smooth.target, g2, d2)),
            }
        }
        C1 => {
            let d = smooth.require_disc()?;
            let d2 = sub(d, 1)?;
            if d2 < 0 {
                return Err(Error::Excluded(format!("discriminant degree {d} transforms to {d2}")));
            }
            Ok(ContractionDescriptor::conic_bundle(d2))
        }
        D1 => {
            let f = smooth
                .fiber_degree
                .ok_or_else(|| Error::InvalidArgument("D1 needs a fiber degree".into()))?;
            let f2 = add(f, 1)?;
            if f2 > 9 {
                return Err(Error::Excluded(format!("fiber degree {f} transforms to {f2}")));
            }
            Ok(ContractionDescriptor::del_pezzo(f2, None))
        }
        k => Err(Error::WrongKind {
            kind: k.to_string(),
            op: "link_transform (index one only)",
        }),
    }
}

/// Inverse of [`link_transform`].
pub fn inverse_link_transform(nodal: &ContractionDescriptor, iota_z: i64) -> Result<ContractionDescriptor> {
    use ContractionKind::*;
    check_target_index(nodal, iota_z)?;
    match nodal.kind {
        B1Curve => {
            let (g, d) = nodal
                .curve
                .ok_or_else(|| Error::InvalidArgument("B1_1 needs a curve".into()))?;
            Ok(ContractionDescriptor::curve_blowup(
                nodal.target,
                sub(add(g, iota_z)?, 1)?,
                add(d, 1)?,
            ))
        }
        B1Point => Ok(ContractionDescriptor::curve_blowup(
            nodal.target.smoothing(),
            sub(iota_z, 1)?,
            1,
        )),
        C1 => Ok(ContractionDescriptor::conic_bundle(add(nodal.require_disc()?, 1)?)),
        D1 | D2 | D3 => {
            let f = nodal
                .fiber_degree
                .ok_or_else(|| Error::InvalidArgument("fibration needs a fiber degree".into()))?;
            Ok(ContractionDescriptor::del_pezzo(sub(f, 1)?, None))
        }
        k => Err(Error::WrongKind {
            kind: k.to_string(),
            op: "inverse_link_transform",
        }),
    }
}

/// Splitting `O ⊕ O(−1)^a ⊕ O(−2)^b` of the bundle carrying a del Pezzo
/// fibration of degree `d` on a threefold of genus `g`.
pub fn dp_bundle_splitting(fiber_degree: i64, g: i64) -> Result<(i64, i64)> {
    let a = sub(sub(mul(3, fiber_degree)?, g)?, 1)?;
    let b = add(sub(g, mul(2, fiber_degree)?)?, 1)?;
    if a < 0 || b < 0 {
        return Err(Error::InvalidArgument(format!(
            "negative exponent ({a}, {b}) for fiber degree {fiber_degree} and genus {g}"
        )));
    }
    Ok((a, b))
}

/// Number of singular fibers of a del Pezzo fibration, each counted once:
/// `χ_top(Y) − 2·χ_top(fiber)` with `χ_top(fiber) = 12 − d`.
///
/// Fiber degree 8 and 9 stand for quadric and projective plane bundles.
pub fn dp_discriminant_degree(fiber_degree: i64, rho_total: i64, h12_total: i64) -> Result<i64> {
    if !(1..=9).contains(&fiber_degree) {
        return Err(Error::InvalidArgument(format!(
            "fiber degree {fiber_degree} not in 1..=9"
        )));
    }
    sub(
        mul(2, sub(12, fiber_degree)?)?,
        euler_characteristic(rho_total, h12_total)?,
    )
}

/// Arithmetic genus `(d − 1)(d − 2)/2` of a plane curve of degree `d`.
pub fn conic_discriminant_pa(deg: i64) -> Result<i64> {
    if deg < 1 {
        return Err(Error::InvalidArgument(format!(
            "plane curve degree {deg} must be positive"
        )));
    }
    div_exact(mul(sub(deg, 1)?, sub(deg, 2)?)?, 2, "(d − 1)(d − 2)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ContractionKind::*;

    #[test]
    fn index_table() {
        assert_eq!(iota_of(D3), 3);
        assert_eq!(iota_of(C2), 2);
        assert_eq!(iota_of(BHalf), 1);
        assert_eq!(iota_of(B2), 2);
    }

    #[test]
    fn cd_examples() {
        assert_eq!(cd_intersections(C1, 7).unwrap(), (2, 5));
        assert_eq!(cd_intersections(D1, 5).unwrap(), (0, 5));
        assert_eq!(cd_intersections(C2, 0).unwrap(), (2, 12));
        assert!(cd_intersections(B2, 1).is_err());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(propagate_genus(B1Curve, 33, 4, Some((0, 5))).unwrap(), 12);
        assert_eq!(propagate_genus(B1Curve, 28, 3, Some((3, 7))).unwrap(), 9);
        assert_eq!(propagate_genus(B2, 33, 4, None).unwrap(), 29);
        assert!(propagate_genus(C1, 33, 4, None).is_err());
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(propagate_hodge(C1, 0, Some(6)).unwrap(), 9);
        assert_eq!(propagate_hodge(B1Curve, 0, Some(6)).unwrap(), 6);
        assert_eq!(propagate_hodge(B2, 21, None).unwrap(), 21);
    }

    #[test]
    fn transform_examples() {
        let c = ContractionDescriptor::curve_blowup(Target::P3, 5, 7);
        assert_eq!(link_transform(&c, 4).unwrap().curve, Some((2, 6)));
        let cb = ContractionDescriptor::conic_bundle(4);
        assert_eq!(link_transform(&cb, 0).unwrap().disc_degree, Some(3));
        let dp = ContractionDescriptor::del_pezzo(4, None);
        assert_eq!(link_transform(&dp, 0).unwrap().fiber_degree, Some(5));
    }

    #[test]
    fn transform_to_point_and_exclusion() {
        let v1 = Target::del_pezzo(1);
        let t = link_transform(&ContractionDescriptor::curve_blowup(v1, 1, 1), 2).unwrap();
        assert_eq!(t.kind, B1Point);
        assert_eq!(t.target.label(), "Y1^s");
        let v3 = Target::del_pezzo(3);
        assert!(matches!(
            link_transform(&ContractionDescriptor::curve_blowup(v3, 0, 1), 2),
            Err(Error::Excluded(_))
        ));
        assert!(link_transform(&ContractionDescriptor::p1_bundle(), 0).is_err());
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(dp_bundle_splitting(5, 12).unwrap(), (2, 3));
        assert_eq!(dp_bundle_splitting(4, 9).unwrap(), (2, 2));
        assert_eq!(dp_bundle_splitting(2, 4).unwrap(), (1, 1));
        assert!(dp_bundle_splitting(1, 12).is_err());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(dp_discriminant_degree(4, 2, 5).unwrap(), 20);
        assert_eq!(dp_discriminant_degree(1, 2, 52).unwrap(), 120);
        assert_eq!(dp_discriminant_degree(5, 2, 3).unwrap(), 14);
        assert_eq!(conic_discriminant_pa(7).unwrap(), 15);
        assert_eq!(conic_discriminant_pa(3).unwrap(), 1);
        assert_eq!(conic_discriminant_pa(1).unwrap(), 0);
    }

    #[test]
    fn target_labels_round_trip() {
        for s in ["P1", "P2", "P3", "Q3", "Y1", "Y5", "Y1^s", "X3^s", "X4^s", "X12"] {
            assert_eq!(s.parse::<Target>().unwrap().label(), s);
        }
        assert!("Y7".parse::<Target>().is_err());
        assert!("P2^s".parse::<Target>().is_err());
    }

    #[test]
    fn table_pairs() {
        assert_eq!(ContractionDescriptor::conic_bundle(7).table_pair().unwrap(), (14, 7));
        assert_eq!(ContractionDescriptor::p1_bundle().table_pair().unwrap(), (0, 0));
        assert_eq!(
            ContractionDescriptor::del_pezzo(4, Some(24)).table_pair().unwrap(),
            (4, 24)
        );
    }
}
