//! Embedded reference data for smooth Fano threefolds and loading of
//! external records.

use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::contractions::{ContractionDescriptor, Target};
use crate::error::{Error, Result};
use crate::invariants::{mk3_of_genus, FanoFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Transcribed from the rank-one genus and Hodge number table.
    RankOneTable,
    /// Mori-Mukai classification data.
    MoriMukai,
    /// Computed by this crate.
    Derived,
    /// Loaded from a user supplied file.
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothFanoRecord {
    pub family: FanoFamily,
    pub contractions: Vec<ContractionDescriptor>,
    pub provenance: Provenance,
}

impl SmoothFanoRecord {
    pub fn genus(&self) -> i64 {
        self.family.genus()
    }

    pub fn h12(&self) -> i64 {
        self.family.h12
    }

    pub fn iota(&self) -> i64 {
        self.family.iota
    }

    /// The record as the `Target` of a contraction, for rank-one families.
    pub fn as_target(&self) -> Target {
        Target::smooth(self.family.iota, self.genus())
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        match self.family.rho {
            1 if !self.contractions.is_empty() => {
                return Err(Error::InvalidArgument("rank one records carry no contractions".into()))
            }
            2 if self.contractions.len() != 2 => {
                return Err(Error::InvalidArgument(format!(
                    "rank two records carry exactly two contractions, found {}",
                    self.contractions.len()
                )))
            }
            _ => {}
        }
        for c in &self.contractions {
            c.validate()?;
        }
        Ok(())
    }
}

/// `(ι, g, h^{1,2})` of the seventeen smooth families of Picard rank one.
pub const RHO1_TABLE: [(i64, i64, i64); 17] = [
    (1, 2, 52),
    (1, 3, 30),
    (1, 4, 20),
    (1, 5, 14),
    (1, 6, 10),
    (1, 7, 7),
    (1, 8, 5),
    (1, 9, 3),
    (1, 10, 2),
    (1, 12, 0),
    (2, 5, 21),
    (2, 9, 10),
    (2, 13, 5),
    (2, 17, 2),
    (2, 21, 0),
    (3, 28, 0),
    (4, 33, 0),
];

/// Mori-Mukai label `1-m` of a rank-one family.
pub fn rho1_label(iota: i64, genus: i64) -> Result<String> {
    let m = match (iota, genus) {
        (1, 12) => 10,
        (1, g) if (2..=10).contains(&g) => g - 1,
        (2, g) if g % 4 == 1 && (5..=21).contains(&g) => 10 + (g - 1) / 4,
        (3, 28) => 16,
        (4, 33) => 17,
        _ => return Err(Error::UnknownFamily(format!("iota = {iota}, g = {genus}"))),
    };
    Ok(format!("1-{m}"))
}

fn rho1_record(iota: i64, genus: i64, h12: i64) -> SmoothFanoRecord {
    let mk3 = mk3_of_genus(genus).expect("table genus is small");
    let label = rho1_label(iota, genus).expect("table family has a label");
    SmoothFanoRecord {
        family: FanoFamily::new(1, iota, mk3, h12, label).expect("table entry is a valid family"),
        contractions: Vec::new(),
        provenance: Provenance::RankOneTable,
    }
}

/// All seventeen rank-one records in table order.
pub fn rho1_all() -> Vec<SmoothFanoRecord> {
    RHO1_TABLE.iter().map(|&(i, g, h)| rho1_record(i, g, h)).collect()
}

/// The rank-one family of index `iota` and genus `genus`.
pub fn rho1_lookup(iota: i64, genus: i64) -> Result<SmoothFanoRecord> {
    RHO1_TABLE
        .iter()
        .find(|&&(i, g, _)| i == iota && g == genus)
        .map(|&(i, g, h)| rho1_record(i, g, h))
        .ok_or_else(|| Error::UnknownFamily(format!("no smooth family with iota = {iota}, g = {genus}")))
}

/// Index-one genera present in the rank-one table.
pub fn index_one_genera() -> Vec<i64> {
    RHO1_TABLE.iter().filter(|r| r.0 == 1).map(|r| r.1).collect()
}

/// Numbers `m` of the embedded rank-two families `2-m`.
pub const RHO2_NUMBERS: [i64; 17] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 23];

fn rho2_data(m: i64) -> Option<(i64, i64, [ContractionDescriptor; 2])> {
    use ContractionDescriptor as C;
    let y = Target::del_pezzo;
    let (p3, q3) = (Target::P3, Target::Q3);
    let (mk3, h12, c) = match m {
        1 => (4, 21, [C::curve_blowup(y(1), 1, 1), C::del_pezzo(1, None)]),
        2 => (6, 20, [C::conic_bundle(8), C::del_pezzo(2, None)]),
        3 => (8, 11, [C::curve_blowup(y(2), 1, 2), C::del_pezzo(2, None)]),
        4 => (10, 10, [C::curve_blowup(p3, 10, 9), C::del_pezzo(3, None)]),
        5 => (12, 6, [C::curve_blowup(y(3), 1, 3), C::del_pezzo(3, None)]),
        6 => (12, 9, [C::conic_bundle(6), C::conic_bundle(6)]),
        7 => (14, 5, [C::curve_blowup(q3, 5, 8), C::del_pezzo(4, None)]),
        8 => (14, 9, [C::node_blowup(y(2)), C::conic_bundle(6)]),
        9 => (16, 5, [C::curve_blowup(p3, 5, 7), C::conic_bundle(5)]),
        10 => (16, 3, [C::curve_blowup(y(4), 1, 4), C::del_pezzo(4, None)]),
        11 => (18, 5, [C::curve_blowup(y(3), 0, 1), C::conic_bundle(5)]),
        12 => (20, 3, [C::curve_blowup(p3, 3, 6), C::curve_blowup(p3, 3, 6)]),
        13 => (20, 2, [C::curve_blowup(q3, 2, 6), C::conic_bundle(4)]),
        14 => (20, 1, [C::curve_blowup(y(5), 1, 5), C::del_pezzo(5, None)]),
        15 => (22, 4, [C::curve_blowup(p3, 4, 6), C::node_blowup(y(3))]),
        16 => (22, 2, [C::curve_blowup(y(4), 0, 2), C::conic_bundle(4)]),
        23 => (30, 1, [C::curve_blowup(q3, 1, 4), C::node_blowup(y(4))]),
        _ => return None,
    };
    Some((mk3, h12, c))
}

/// Mori-Mukai record `2-m` for the embedded range.
pub fn rho2_lookup(m: i64) -> Result<SmoothFanoRecord> {
    let (mk3, h12, contractions) =
        rho2_data(m).ok_or_else(|| Error::UnknownFamily(format!("2-{m} is outside the embedded range")))?;
    Ok(SmoothFanoRecord {
        family: FanoFamily::new(2, 1, mk3, h12, format!("2-{m}"))?,
        contractions: contractions.to_vec(),
        provenance: Provenance::MoriMukai,
    })
}

/// Rank-three families occurring as blowups of the node: `(m, (−K)³, h^{1,2})`.
pub const RHO3_TABLE: [(i64, i64, i64); 4] = [(2, 14, 3), (5, 20, 0), (21, 38, 0), (31, 52, 0)];

pub fn rho3_lookup(m: i64) -> Result<SmoothFanoRecord> {
    let &(_, mk3, h12) = RHO3_TABLE
        .iter()
        .find(|r| r.0 == m)
        .ok_or_else(|| Error::UnknownFamily(format!("3-{m} is outside the embedded range")))?;
    Ok(SmoothFanoRecord {
        family: FanoFamily::new(3, 1, mk3, h12, format!("3-{m}"))?,
        contractions: Vec::new(),
        provenance: Provenance::MoriMukai,
    })
}

/// Degree of the Mukai variety `M_g` in its half-anticanonical embedding.
pub fn mukai_degree(g: i64) -> Result<i64> {
    match g {
        7 => Ok(12),
        8 => Ok(14),
        9 => Ok(16),
        10 => Ok(18),
        _ => Err(Error::InvalidArgument(format!(
            "no homogeneous Mukai variety of genus {g}"
        ))),
    }
}

/// Serialized form of one external record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordJson {
    pub rho: i64,
    pub label: String,
    pub iota: i64,
    pub mk3: i64,
    pub h12: i64,
    #[serde(default)]
    pub contractions: Vec<ContractionDescriptor>,
}

impl From<&SmoothFanoRecord> for RecordJson {
    fn from(r: &SmoothFanoRecord) -> Self {
        Self {
            rho: r.family.rho,
            label: r.family.label.clone(),
            iota: r.family.iota,
            mk3: r.family.mk3,
            h12: r.family.h12,
            contractions: r.contractions.clone(),
        }
    }
}

fn line_of(src: &str, part: &str) -> usize {
    let offset = (part.as_ptr() as usize).saturating_sub(src.as_ptr() as usize);
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses and validates a JSON array of records.
pub fn load_external(mut source: impl Read) -> Result<Vec<SmoothFanoRecord>> {
    let mut src = String::new();
    source
        .read_to_string(&mut src)
        .map_err(|e| Error::Schema(format!("cannot read input: {e}")))?;
    let items: Vec<&RawValue> = serde_json::from_str(&src)
        .map_err(|e| Error::Schema(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    items
        .iter()
        .enumerate()
        .map(|(index, raw)| {
            let line = line_of(&src, raw.get());
            let fail = |label: &str, message: String| Error::InvalidRecord {
                index,
                label: label.to_string(),
                line,
                message,
            };
            let rec: RecordJson = serde_json::from_str(raw.get()).map_err(|e| fail("?", e.to_string()))?;
            let record = SmoothFanoRecord {
                family: FanoFamily {
                    rho: rec.rho,
                    iota: rec.iota,
                    mk3: rec.mk3,
                    h12: rec.h12,
                    label: rec.label.clone(),
                },
                contractions: rec.contractions,
                provenance: Provenance::External,
            };
            record.validate().map_err(|e| fail(&rec.label, e.to_string()))?;
            Ok(record)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho1_examples() {
        assert_eq!(rho1_lookup(1, 12).unwrap().h12(), 0);
        assert_eq!(rho1_lookup(2, 21).unwrap().h12(), 0);
        assert!(matches!(rho1_lookup(1, 11), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn rho1_labels() {
        assert_eq!(rho1_label(1, 2).unwrap(), "1-1");
        assert_eq!(rho1_label(1, 12).unwrap(), "1-10");
        assert_eq!(rho1_label(2, 5).unwrap(), "1-11");
        assert_eq!(rho1_label(3, 28).unwrap(), "1-16");
        assert_eq!(rho1_label(4, 33).unwrap(), "1-17");
    }

    #[test]
    fn rho2_examples() {
        let r9 = rho2_lookup(9).unwrap();
        assert_eq!(
            r9.contractions[0],
            ContractionDescriptor::curve_blowup(Target::P3, 5, 7)
        );
        assert_eq!(r9.contractions[1], ContractionDescriptor::conic_bundle(5));
        let r13 = rho2_lookup(13).unwrap();
        assert_eq!(r13.contractions[0].curve, Some((2, 6)));
        assert_eq!(r13.contractions[1].disc_degree, Some(4));
        let r8 = rho2_lookup(8).unwrap();
        assert_eq!(r8.contractions[0].kind.as_str(), "B1_0");
        assert!(rho2_lookup(17).is_err());
    }

    #[test]
    fn mukai_examples() {
        assert_eq!(mukai_degree(8).unwrap(), 14);
        assert_eq!(mukai_degree(10).unwrap(), 18);
        assert!(mukai_degree(6).is_err());
    }

    #[test]
    fn embedded_records_validate() {
        for r in rho1_all() {
            r.validate().unwrap();
        }
        for m in RHO2_NUMBERS {
            rho2_lookup(m).unwrap().validate().unwrap();
        }
    }
}
